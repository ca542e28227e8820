use super::Poly;
use crate::scalar::{Field, Ring};

/// Finite-dimensional `k`-subspace of an algebra, kept in echelon form keyed
/// by leading monomial.
#[derive(Clone, Debug)]
pub struct PolySpan<F: Field> {
    /// Rows with strictly decreasing leading monomials, leading coefficient 1.
    rows: Vec<Poly<F>>,
}

impl<F: Field> Default for PolySpan<F> {
    fn default() -> Self {
        PolySpan { rows: Vec::new() }
    }
}

impl<F: Field> PolySpan<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_polys<'a>(polys: impl IntoIterator<Item = &'a Poly<F>>) -> Self {
        let mut s = Self::new();
        for p in polys {
            s.insert(p);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Poly<F>] {
        &self.rows
    }

    /// Remainder of `p` after eliminating every pivot monomial.
    pub fn reduce(&self, p: &Poly<F>) -> Poly<F> {
        let mut r = p.clone();
        for row in &self.rows {
            let lead = row.leading().expect("rows are nonzero").0;
            let c = r.coeff(&lead);
            if !c.is_zero() {
                r = r.sub_scaled(&c, row);
            }
        }
        r
    }

    pub fn contains(&self, p: &Poly<F>) -> bool {
        self.reduce(p).is_zero()
    }

    /// Add `p`; returns whether the dimension grew.
    pub fn insert(&mut self, p: &Poly<F>) -> bool {
        let r = self.reduce(p);
        let Some((lead, c)) = r.leading().cloned() else {
            return false;
        };
        let r = r.scale(&c.inv().expect("nonzero"));
        let pos = self.rows.partition_point(|row| row.leading().unwrap().0 > lead);
        self.rows.insert(pos, r);
        true
    }

    /// Span of all pairwise products.
    pub fn product(&self, other: &PolySpan<F>) -> PolySpan<F> {
        let mut out = PolySpan::new();
        for a in &self.rows {
            for b in &other.rows {
                out.insert(&a.mul(b));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, VarId};
    use crate::scalar::Fp;

    #[test]
    fn membership_and_products() {
        let a = Algebra::<Fp>::free(101, 2).unwrap();
        let x = Poly::var(&a, VarId::gen(0, 0)).unwrap();
        let y = Poly::var(&a, VarId::gen(1, 0)).unwrap();
        let one = Poly::one(&a);
        let s = PolySpan::from_polys([&one, &x.add(&y), &x.sub(&y)]);
        assert_eq!(s.dim(), 3);
        assert!(s.contains(&x));
        assert!(!s.contains(&x.mul(&y)));
        let mut t = s.clone();
        assert!(!t.insert(&y.scale(&Fp::new(5, 101))));
        let sq = s.product(&s);
        assert_eq!(sq.dim(), 6);
        assert!(sq.contains(&x.mul(&y).add(&one)));
    }
}
