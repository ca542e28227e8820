use std::collections::hash_map::Entry;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::monomial::{gen_index, slot_index};
use super::{Algebra, Derangement, Monomial, Relation, SpecPoint, VarId, SLOT_MAX, SLOT_MIN};
use crate::error::{Error, Result};
use crate::scalar::{Field, Ring};

/// Element of a slot-indexed tensor power of an algebra, in canonical form:
/// terms sorted by monomial order, no zero coefficients, and every monomial
/// reduced by the algebra relation in each slot.
#[derive(Clone)]
pub struct Poly<F: Field> {
    alg: Arc<Algebra<F>>,
    terms: Vec<(Monomial, F)>,
}

type Acc<F> = FxHashMap<Monomial, F>;

fn accumulate<F: Field>(acc: &mut Acc<F>, m: Monomial, c: F) {
    match acc.entry(m) {
        Entry::Occupied(mut e) => {
            let v = e.get().add(&c);
            *e.get_mut() = v;
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl<F: Field> Algebra<F> {
    /// Add `c * m` to `acc`, rewriting `y^2` by `f(x)` slot by slot.
    fn push_reduced(&self, acc: &mut Acc<F>, m: Monomial, c: F) {
        match &self.relation {
            Relation::Free => accumulate(acc, m, c),
            Relation::Hyperelliptic { f } => match m.slot_with_square(1) {
                None => accumulate(acc, m, c),
                Some(slot) => {
                    let yi = gen_index(1, slot);
                    let xi = gen_index(0, slot);
                    let mut base = m;
                    base.set(yi, m.get(yi) - 2);
                    for (k, fk) in f.iter().enumerate() {
                        if fk.is_zero() {
                            continue;
                        }
                        let mut mk = base;
                        mk.set(xi, base.get(xi) + k as u32);
                        self.push_reduced(acc, mk, c.mul(fk));
                    }
                }
            },
        }
    }
}

fn same_algebra<F: Field>(a: &Arc<Algebra<F>>, b: &Arc<Algebra<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> Poly<F> {
    pub fn zero(alg: &Arc<Algebra<F>>) -> Self {
        Poly { alg: alg.clone(), terms: Vec::new() }
    }

    pub fn one(alg: &Arc<Algebra<F>>) -> Self {
        Poly::constant(alg, F::one(alg.ctx()))
    }

    pub fn constant(alg: &Arc<Algebra<F>>, c: F) -> Self {
        Poly::monomial(alg, Monomial::ONE, c)
    }

    pub fn monomial(alg: &Arc<Algebra<F>>, m: Monomial, c: F) -> Self {
        Poly::from_terms(alg, vec![(m, c)])
    }

    /// Generator `gen` in slot `slot`, or an auxiliary variable.
    pub fn var(alg: &Arc<Algebra<F>>, v: VarId) -> Result<Self> {
        if let VarId::Gen { gen, .. } = v {
            if gen as usize >= alg.gens() {
                return Err(Error::Capacity(format!("generator {gen} not in algebra")));
            }
        }
        let m = Monomial::var(v, 1).ok_or_else(|| Error::Capacity(format!("{v:?}")))?;
        Ok(Poly::monomial(alg, m, F::one(alg.ctx())))
    }

    /// Build from arbitrary terms; combines duplicates and applies the relation.
    pub fn from_terms(alg: &Arc<Algebra<F>>, terms: Vec<(Monomial, F)>) -> Self {
        let mut acc = Acc::default();
        for (m, c) in terms {
            if !c.is_zero() {
                alg.push_reduced(&mut acc, m, c);
            }
        }
        Poly::from_acc(alg, acc)
    }

    fn from_acc(alg: &Arc<Algebra<F>>, acc: Acc<F>) -> Self {
        let mut terms: Vec<(Monomial, F)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { alg: alg.clone(), terms }
    }

    /// Terms already canonical (sorted, reduced, nonzero).
    fn from_sorted(alg: &Arc<Algebra<F>>, terms: Vec<(Monomial, F)>) -> Self {
        Poly { alg: alg.clone(), terms }
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.alg
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<F> {
        match self.terms.as_slice() {
            [] => Some(F::zero(self.alg.ctx())),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &Monomial) -> F {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => F::zero(self.alg.ctx()),
        }
    }

    /// Largest term in monomial order.
    pub fn leading(&self) -> Option<&(Monomial, F)> {
        self.terms.last()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.0.degree())
    }

    fn merge(&self, rhs: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &F| if negate { c.neg() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0, sign(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| (t.0, sign(&t.1))));
        Poly::from_sorted(&self.alg, out)
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if same_algebra(&self.alg, &rhs.alg) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.merge(rhs, false))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.merge(rhs, true))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return Poly::zero(&self.alg);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut acc = Acc::with_capacity_and_hasher(big.len() * small.len().min(16), Default::default());
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                self.alg.push_reduced(&mut acc, m1.mul(m2), c1.mul(c2));
            }
        }
        Poly::from_acc(&self.alg, acc)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.alg);
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, a.mul(c))).collect();
        Poly::from_sorted(&self.alg, terms)
    }

    /// `self - c * other`.
    pub fn sub_scaled(&self, c: &F, other: &Self) -> Self {
        self.merge(&other.scale(c), true)
    }

    /// Bitmask of occupied slots (bit `slot - SLOT_MIN`).
    pub fn slot_mask(&self) -> u16 {
        self.terms.iter().fold(0, |acc, (m, _)| acc | m.slot_mask())
    }

    /// Occupied slots in increasing order.
    pub fn slots(&self) -> Vec<i8> {
        let mask = self.slot_mask();
        (SLOT_MIN..=SLOT_MAX).filter(|&s| mask & (1 << slot_index(s)) != 0).collect()
    }

    pub fn has_aux(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.has_aux())
    }

    /// Move every slot `l` to `f(l)`, merging slots that collide.
    pub fn map_slots(&self, f: impl Fn(i8) -> i8) -> Result<Self> {
        let gens = self.alg.gens();
        let mut target = [0i8; (SLOT_MAX - SLOT_MIN + 1) as usize];
        for s in SLOT_MIN..=SLOT_MAX {
            let t = f(s);
            target[slot_index(s)] = t;
        }
        let mask = self.slot_mask();
        for s in SLOT_MIN..=SLOT_MAX {
            let t = target[slot_index(s)];
            if mask & (1 << slot_index(s)) != 0 && !(SLOT_MIN..=SLOT_MAX).contains(&t) {
                return Err(Error::Capacity(format!("slot {t} out of range")));
            }
        }
        let mut acc = Acc::default();
        for (m, c) in &self.terms {
            let (aux, _) = m.split_aux();
            let mut out = aux;
            for s in SLOT_MIN..=SLOT_MAX {
                if mask & (1 << slot_index(s)) == 0 {
                    continue;
                }
                let t = target[slot_index(s)];
                for g in 0..gens {
                    let e = m.get(gen_index(g, s));
                    if e > 0 {
                        let ti = gen_index(g, t);
                        out.set(ti, out.get(ti) + e);
                    }
                }
            }
            self.alg.push_reduced(&mut acc, out, c.clone());
        }
        Ok(Poly::from_acc(&self.alg, acc))
    }

    /// `sigma_*`.
    pub fn slot_map(&self, sigma: &Derangement) -> Result<Self> {
        self.map_slots(|s| sigma.apply(s))
    }

    /// Negate every slot index.
    pub fn bar(&self) -> Self {
        self.map_slots(|s| -s).expect("slot range is symmetric")
    }

    /// Move a slot-0 element to slot `slot`.
    pub fn embed(&self, slot: i8) -> Result<Self> {
        if self.slot_mask() & !(1 << slot_index(0)) != 0 {
            return Err(Error::NotSlotZero);
        }
        self.map_slots(|s| if s == 0 { slot } else { s })
    }

    /// Apply the evaluation homomorphism `points[k].1` on slot `points[k].0`.
    pub fn specialize(&self, points: &[(i8, &SpecPoint<F>)]) -> Self {
        let mut mask = 0u16;
        for (s, _) in points {
            mask |= 1 << slot_index(*s);
        }
        if self.slot_mask() & mask == 0 {
            return self.clone();
        }
        let gens = self.alg.gens();
        let mut powers: FxHashMap<usize, Vec<F>> = FxHashMap::default();
        for (s, pt) in points {
            for g in 0..gens {
                powers.insert(gen_index(g, *s), vec![F::one(self.alg.ctx()), pt.values()[g].clone()]);
            }
        }
        let mut acc = Acc::default();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split_slots(mask);
            let mut coef = c.clone();
            for (v, e) in inside.iter() {
                let table = powers.get_mut(&v.index().unwrap()).unwrap();
                while table.len() <= e as usize {
                    let next = table[table.len() - 1].mul(&table[1]);
                    table.push(next);
                }
                coef = coef.mul(&table[e as usize]);
                if coef.is_zero() {
                    break;
                }
            }
            if !coef.is_zero() {
                accumulate(&mut acc, outside, coef);
            }
        }
        Poly::from_acc(&self.alg, acc)
    }

    /// Coefficient of the auxiliary monomial `aux` as an element of the
    /// generator part.
    pub fn aux_coefficient(&self, aux: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let (a, rest) = m.split_aux();
                (a == *aux).then(|| (rest, c.clone()))
            })
            .collect();
        Poly::from_terms(&self.alg, terms)
    }

    /// Group terms by their part outside `mask`; each group is returned with
    /// its part inside `mask`, ordered by the outside monomial.
    pub fn split_by_slots(&self, mask: u16) -> Vec<(Monomial, Poly<F>)> {
        let mut groups: FxHashMap<Monomial, Vec<(Monomial, F)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split_slots(mask);
            groups.entry(outside).or_default().push((inside, c.clone()));
        }
        let mut out: Vec<(Monomial, Poly<F>)> =
            groups.into_iter().map(|(k, v)| (k, Poly::from_terms(&self.alg, v))).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Product of the coefficient-free parts: `self * monomial`.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect();
        Poly::from_terms(&self.alg, terms)
    }
}

/// Bitmask for a list of slots.
pub fn slot_mask_of(slots: impl IntoIterator<Item = i8>) -> u16 {
    slots.into_iter().fold(0, |m, s| m | (1 << slot_index(s)))
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(m, c)| format!("{c:?}*{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Field> Ring for Poly<F> {
    type Ctx = Arc<Algebra<F>>;

    fn ctx(&self) -> Self::Ctx {
        self.alg.clone()
    }
    fn zero(ctx: &Self::Ctx) -> Self {
        Poly::zero(ctx)
    }
    fn one(ctx: &Self::Ctx) -> Self {
        Poly::one(ctx)
    }
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self {
        Poly::constant(ctx, F::from_i64(ctx.ctx(), v))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    /// Panics if the operands belong to different algebras; use
    /// [`Poly::checked_add`] for a fallible version.
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("mixed algebras")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("mixed algebras")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("mixed algebras")
    }
    fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.neg())).collect();
        Poly::from_sorted(&self.alg, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use proptest::prelude::*;

    const P: u64 = 1009;

    fn curve() -> Arc<Algebra<Fp>> {
        // y^2 = x^3 + 2x + 3
        Algebra::hyperelliptic(P, vec![Fp::new(3, P), Fp::new(2, P), Fp::new(0, P), Fp::new(1, P)])
    }

    fn x(alg: &Arc<Algebra<Fp>>, s: i8) -> Poly<Fp> {
        Poly::var(alg, VarId::gen(0, s)).unwrap()
    }
    fn y(alg: &Arc<Algebra<Fp>>, s: i8) -> Poly<Fp> {
        Poly::var(alg, VarId::gen(1, s)).unwrap()
    }

    fn small_poly(alg: &Arc<Algebra<Fp>>, coeffs: &[(i64, u32, u32, i8)]) -> Poly<Fp> {
        let mut acc = Poly::zero(alg);
        for &(c, ex, ey, s) in coeffs {
            let t = x(alg, s).pow(ex).mul(&y(alg, s).pow(ey)).scale(&Fp::new(c, P));
            acc = acc.add(&t);
        }
        acc
    }

    #[test]
    fn relation_is_applied() {
        let a = curve();
        let y2 = y(&a, 0).mul(&y(&a, 0));
        let f = x(&a, 0).pow(3).add(&x(&a, 0).scale(&Fp::new(2, P))).add(&Poly::from_i64(&a, 3));
        assert_eq!(y2, f);
        // Different slots stay free.
        let y01 = y(&a, 0).mul(&y(&a, 1));
        assert_eq!(y01.len(), 1);
        for (m, _) in y(&a, 2).pow(5).terms() {
            assert!(m.exponent(VarId::gen(1, 2)) <= 1);
        }
    }

    #[test]
    fn slot_moves_merge_and_reduce() {
        let a = curve();
        let p = y(&a, 1).mul(&y(&a, 2));
        let q = p.slot_map(&Derangement::send(1, 2)).unwrap();
        assert_eq!(q, y(&a, 2).mul(&y(&a, 2)));
        assert_eq!(p.bar(), y(&a, -1).mul(&y(&a, -2)));
        assert!(x(&a, 1).embed(2).is_err());
        assert_eq!(x(&a, 0).embed(3).unwrap(), x(&a, 3));
    }

    #[test]
    fn specialization() {
        let a = curve();
        // (0, 3) is not on the curve; (1, sqrt 6)? use a point found by search.
        let mut pt = None;
        for xv in 0..P {
            let fx = Fp::new((xv * xv * xv + 2 * xv + 3) as i64, P);
            if let Some(r) = crate::scalar::SampleField::sqrt(&fx) {
                pt = Some(a.point(vec![Fp::new(xv as i64, P), r]).unwrap());
                break;
            }
        }
        let pt = pt.unwrap();
        let p = x(&a, 1).mul(&y(&a, 0)).add(&y(&a, 1));
        let q = p.specialize(&[(1, &pt)]);
        let expect = y(&a, 0).scale(&pt.values()[0]).add(&Poly::constant(&a, pt.values()[1]));
        assert_eq!(q, expect);
    }

    #[test]
    fn aux_coefficients() {
        let a = Algebra::<Fp>::free(P, 1).unwrap();
        let s1 = Poly::var(&a, VarId::S(1)).unwrap();
        let t2 = Poly::var(&a, VarId::T(2)).unwrap();
        let g = Poly::var(&a, VarId::gen(0, 0)).unwrap();
        let p = s1.mul(&t2).mul(&g).add(&s1.scale(&Fp::new(4, P)));
        let m = Monomial::var(VarId::S(1), 1).unwrap().mul(&Monomial::var(VarId::T(2), 1).unwrap());
        assert_eq!(p.aux_coefficient(&m), g);
    }

    #[test]
    fn mixed_fields_error() {
        let a = Algebra::<Fp>::free(7, 1).unwrap();
        let b = Algebra::<Fp>::free(11, 1).unwrap();
        assert_eq!(Poly::one(&a).checked_add(&Poly::one(&b)), Err(Error::FieldMismatch));
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(i64, u32, u32, i8)>> {
        proptest::collection::vec((-50i64..50, 0u32..4, 0u32..2, 0i8..3), 0..6)
    }

    proptest! {
        #[test]
        fn ring_laws(pa in arb_poly(), pb in arb_poly(), pc in arb_poly()) {
            let al = curve();
            let (a, b, c) = (small_poly(&al, &pa), small_poly(&al, &pb), small_poly(&al, &pc));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn slot_maps_are_homomorphisms(pa in arb_poly(), pb in arb_poly()) {
            let al = curve();
            let (a, b) = (small_poly(&al, &pa), small_poly(&al, &pb));
            let s = Derangement::send(0, 2);
            prop_assert_eq!(a.mul(&b).slot_map(&s).unwrap(),
                            a.slot_map(&s).unwrap().mul(&b.slot_map(&s).unwrap()));
            prop_assert_eq!(a.mul(&b).bar(), a.bar().mul(&b.bar()));
            prop_assert_eq!(a.bar().bar(), a);
        }
    }
}
