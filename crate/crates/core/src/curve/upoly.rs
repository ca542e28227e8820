use std::fmt;

use crate::scalar::{Field, Fp, Ring};

/// Dense univariate polynomial over a prime field, coefficients from the
/// constant term upward, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    p: u64,
    coeffs: Vec<Fp>,
}

impl UPoly {
    pub fn new(p: u64, mut coeffs: Vec<Fp>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { p, coeffs }
    }

    pub fn from_i64s(p: u64, cs: &[i64]) -> Self {
        UPoly::new(p, cs.iter().map(|&c| Fp::new(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        UPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(c: Fp) -> Self {
        UPoly::new(c.modulus(), vec![c])
    }

    pub fn one(p: u64) -> Self {
        UPoly::constant(Fp::from_u64(1, p))
    }

    /// `x - a`.
    pub fn linear(a: Fp) -> Self {
        UPoly::new(a.modulus(), vec![a.neg(), Fp::from_u64(1, a.modulus())])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fp {
        self.coeffs.get(i).copied().unwrap_or(Fp::from_u64(0, self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Fp> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, x: &Fp) -> Fp {
        self.coeffs.iter().rev().fold(Fp::from_u64(0, self.p), |acc, c| acc.mul(x).add(c))
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(self.p, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(self.p, (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(self.p, self.coeffs.iter().map(Fp::neg).collect())
    }

    pub fn scale(&self, c: &Fp) -> UPoly {
        UPoly::new(self.p, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(self.p);
        }
        let mut out = vec![Fp::from_u64(0, self.p); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(self.p, out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        (0..e).fold(UPoly::one(self.p), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.leading().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(self.p), self.clone());
        }
        let mut q = vec![Fp::from_u64(0, self.p); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&inv);
            q[k] = c;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] = r[k + i].sub(&c.mul(dc));
            }
        }
        r.truncate(dd);
        (UPoly::new(self.p, q), UPoly::new(self.p, r))
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul(&Fp::from_u64(i as u64, self.p))).collect(),
        )
    }

    /// Coefficients of `self(x0 + u)` as a polynomial in `u`.
    pub fn taylor(&self, x0: &Fp) -> UPoly {
        let mut out = UPoly::zero(self.p);
        for c in self.coeffs.iter().rev() {
            out = out.mul(&UPoly::new(self.p, vec![*x0, Fp::from_u64(1, self.p)])).add(&UPoly::constant(*c));
        }
        out
    }

    /// Multiplicity of `x0` as a root.
    pub fn root_multiplicity(&self, x0: &Fp) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let t = self.taylor(x0);
        t.coeffs.iter().take_while(|c| c.is_zero()).count()
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
