use crate::scalar::{Field, Fp, Ring};

/// Truncated Laurent series `sum_{k = start}^{prec - 1} c_k t^k + O(t^prec)`
/// over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    p: u64,
    start: i64,
    coeffs: Vec<Fp>,
}

impl Laurent {
    pub fn new(p: u64, start: i64, coeffs: Vec<Fp>) -> Self {
        Laurent { p, start, coeffs }
    }

    /// `O(t^prec)`.
    pub fn big_o(p: u64, prec: i64) -> Self {
        Laurent { p, start: prec, coeffs: Vec::new() }
    }

    /// A constant known to absolute precision `prec`.
    pub fn constant(c: Fp, prec: i64) -> Self {
        Laurent::monomial(c, 0, prec)
    }

    /// `c t^k + O(t^prec)`.
    pub fn monomial(c: Fp, k: i64, prec: i64) -> Self {
        let p = c.modulus();
        if prec <= k {
            return Laurent::big_o(p, prec);
        }
        let mut coeffs = vec![Fp::from_u64(0, p); (prec - k) as usize];
        coeffs[0] = c;
        Laurent { p, start: k, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Absolute precision: terms from `t^prec` on are unknown.
    pub fn prec(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Coefficient of `t^k`; panics beyond the precision.
    pub fn coeff(&self, k: i64) -> Fp {
        assert!(k < self.prec(), "coefficient t^{k} beyond precision {}", self.prec());
        if k < self.start {
            Fp::from_u64(0, self.p)
        } else {
            self.coeffs[(k - self.start) as usize]
        }
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.start + i as i64)
    }

    /// Lower bound for the true valuation.
    fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec())
    }

    pub fn truncate(&self, prec: i64) -> Laurent {
        if prec >= self.prec() {
            return self.clone();
        }
        let keep = (prec - self.start).max(0) as usize;
        let start = self.start.min(prec);
        Laurent { p: self.p, start, coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let prec = self.prec().min(o.prec());
        let start = self.start.min(o.start).min(prec);
        let coeffs = (start..prec).map(|k| self.coeff(k).add(&o.coeff(k))).collect();
        Laurent { p: self.p, start, coeffs }
    }

    pub fn neg(&self) -> Laurent {
        Laurent { p: self.p, start: self.start, coeffs: self.coeffs.iter().map(Fp::neg).collect() }
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Fp) -> Laurent {
        Laurent { p: self.p, start: self.start, coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent { p: self.p, start: self.start + k, coeffs: self.coeffs.clone() }
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let (va, vb) = (self.val_bound(), o.val_bound());
        let prec = (self.prec() + vb).min(o.prec() + va);
        let start = (va + vb).min(prec);
        let mut coeffs = vec![Fp::from_u64(0, self.p); (prec - start) as usize];
        for i in va..self.prec() {
            let a = self.coeff(i);
            if a.is_zero() {
                continue;
            }
            for j in vb..o.prec() {
                let k = i + j;
                if k >= prec {
                    break;
                }
                let idx = (k - start) as usize;
                coeffs[idx] = coeffs[idx].add(&a.mul(&o.coeff(j)));
            }
        }
        Laurent { p: self.p, start, coeffs }
    }

    /// Multiplicative inverse; `None` when no nonzero coefficient is known.
    pub fn inv(&self) -> Option<Laurent> {
        let v = self.valuation()?;
        let r = (self.prec() - v) as usize;
        let a: Vec<Fp> = (0..r).map(|i| self.coeff(v + i as i64)).collect();
        let a0 = a[0].inv().unwrap();
        let mut b = vec![Fp::from_u64(0, self.p); r];
        b[0] = a0;
        for k in 1..r {
            let mut s = Fp::from_u64(0, self.p);
            for i in 1..=k {
                s = s.add(&a[i].mul(&b[k - i]));
            }
            b[k] = s.neg().mul(&a0);
        }
        Some(Laurent { p: self.p, start: -v, coeffs: b })
    }

    pub fn div(&self, o: &Laurent) -> Option<Laurent> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn derivative(&self) -> Laurent {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul(&Fp::new(self.start + i as i64, self.p)))
            .collect();
        Laurent { p: self.p, start: self.start - 1, coeffs }
    }

    /// Coefficient of `t^-1`.
    pub fn residue(&self) -> Fp {
        self.coeff(-1)
    }

    /// `self^e` for `e >= 1`.
    pub fn pow(&self, e: u32) -> Laurent {
        assert!(e >= 1);
        (1..e).fold(self.clone(), |acc, _| acc.mul(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1009;

    fn series(start: i64, cs: &[i64]) -> Laurent {
        Laurent::new(P, start, cs.iter().map(|&c| Fp::new(c, P)).collect())
    }

    #[test]
    fn precision_bookkeeping() {
        let a = series(-2, &[1, 2, 3, 4]);
        assert_eq!(a.prec(), 2);
        assert_eq!(a.valuation(), Some(-2));
        let b = series(1, &[5, 0, 7]);
        let ab = a.mul(&b);
        assert_eq!(ab.prec(), (2 + 1).min(4 - 2));
        assert_eq!(ab.coeff(-1), Fp::new(5, P));
        assert_eq!(ab.coeff(0), Fp::new(10, P));
        assert_eq!(a.add(&b).prec(), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let a = series(-3, &[2, 5, 0, 1, 9, 4, 4, 8]);
        let one = a.mul(&a.inv().unwrap());
        assert_eq!(one.prec(), 8);
        for k in 0..one.prec() {
            assert_eq!(one.coeff(k), Fp::new((k == 0) as i64, P));
        }
    }

    #[test]
    fn derivative_and_residue() {
        let a = series(-2, &[1, 3, 5, 7]);
        let d = a.derivative();
        assert_eq!(d.coeff(-3), Fp::new(-2, P));
        assert_eq!(d.coeff(-1), Fp::new(0, P));
        assert_eq!(a.residue(), Fp::new(3, P));
        assert!(Laurent::big_o(P, 4).inv().is_none());
    }
}
