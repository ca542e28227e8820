//! Finitely generated commutative algebras `A` and their slot-indexed tensor
//! powers.
//!
//! A variable is a generator of `A` tagged with an integer slot; monomials in
//! distinct slots multiply freely, and the defining relation of `A` is applied
//! within each slot separately.

mod monomial;
mod poly;
mod span;

use std::sync::Arc;

pub use monomial::{Monomial, VarId, MAX_AUX, MAX_GENS, NVARS, SLOT_MAX, SLOT_MIN};
pub use poly::{slot_mask_of, Poly};
pub use span::PolySpan;

use crate::error::{Error, Result};
use crate::scalar::{Field, SampleField};

/// Defining relation of the algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum Relation<F> {
    /// Polynomial ring, no relation.
    Free,
    /// `y^2 = f(x)` with `x` generator 0, `y` generator 1 and `f` given by
    /// coefficients from the constant term upward.
    Hyperelliptic { f: Vec<F> },
}

/// `A = k[gens] / relation` over a field with context `ctx`.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra<F: Field> {
    ctx: F::Ctx,
    gens: usize,
    relation: Relation<F>,
}

impl<F: Field> Algebra<F> {
    /// Polynomial ring in `gens` generators.
    pub fn free(ctx: F::Ctx, gens: usize) -> Result<Arc<Self>> {
        if gens > MAX_GENS {
            return Err(Error::Capacity(format!("at most {MAX_GENS} generators")));
        }
        Ok(Arc::new(Algebra { ctx, gens, relation: Relation::Free }))
    }

    /// The ground field viewed as an algebra with no generators.
    pub fn scalars(ctx: F::Ctx) -> Arc<Self> {
        Arc::new(Algebra { ctx, gens: 0, relation: Relation::Free })
    }

    /// `k[x, y] / (y^2 - f(x))`.
    pub fn hyperelliptic(ctx: F::Ctx, f: Vec<F>) -> Arc<Self> {
        let mut f = f;
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        Arc::new(Algebra { ctx, gens: 2, relation: Relation::Hyperelliptic { f } })
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relation(&self) -> &Relation<F> {
        &self.relation
    }

    pub fn is_free(&self) -> bool {
        matches!(self.relation, Relation::Free)
    }

    /// Evaluation point for the generators; checks the relation.
    pub fn point(&self, values: Vec<F>) -> Result<SpecPoint<F>> {
        if values.len() != self.gens {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, algebra has {} generators",
                values.len(),
                self.gens
            )));
        }
        if let Relation::Hyperelliptic { f } = &self.relation {
            let x = &values[0];
            let mut fx = F::zero(&self.ctx);
            for c in f.iter().rev() {
                fx = fx.mul(x).add(c);
            }
            if values[1].mul(&values[1]) != fx {
                return Err(Error::PointNotOnCurve);
            }
        }
        Ok(SpecPoint { values })
    }
}

impl<F: SampleField> Algebra<F> {
    /// Uniformly random generator values; for a hyperelliptic algebra a random
    /// affine point, retried up to `retries` times until `f(x)` is a square.
    pub fn random_point<G: rand::Rng + ?Sized>(&self, rng: &mut G, retries: usize) -> Result<SpecPoint<F>> {
        match &self.relation {
            Relation::Free => Ok(SpecPoint { values: (0..self.gens).map(|_| F::random(&self.ctx, rng)).collect() }),
            Relation::Hyperelliptic { f } => {
                for _ in 0..retries {
                    let x = F::random(&self.ctx, rng);
                    let mut fx = F::zero(&self.ctx);
                    for c in f.iter().rev() {
                        fx = fx.mul(&x).add(c);
                    }
                    if let Some(y) = fx.sqrt() {
                        let y = if rng.gen::<bool>() { y.neg() } else { y };
                        return Ok(SpecPoint { values: vec![x, y] });
                    }
                }
                Err(Error::RetryExhausted(retries))
            }
        }
    }
}

/// A `k`-algebra homomorphism `A -> k`, stored as generator values.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecPoint<F> {
    values: Vec<F>,
}

impl<F: Field> SpecPoint<F> {
    pub fn values(&self) -> &[F] {
        &self.values
    }
}

/// Finitely supported map on slot indices, acting on variables by moving
/// slots (`sigma_*`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Derangement {
    pairs: Vec<(i8, i8)>,
}

impl Derangement {
    pub fn identity() -> Self {
        Derangement::default()
    }

    /// The transposition exchanging `a` and `b`.
    pub fn swap(a: i8, b: i8) -> Self {
        Derangement::from_pairs(&[(a, b), (b, a)])
    }

    /// The map sending `a` to `b` and fixing everything else.
    pub fn send(a: i8, b: i8) -> Self {
        Derangement::from_pairs(&[(a, b)])
    }

    pub fn from_pairs(pairs: &[(i8, i8)]) -> Self {
        let mut v: Vec<(i8, i8)> = pairs.iter().copied().filter(|(a, b)| a != b).collect();
        v.sort();
        v.dedup_by_key(|p| p.0);
        Derangement { pairs: v }
    }

    pub fn apply(&self, slot: i8) -> i8 {
        self.pairs.iter().find(|p| p.0 == slot).map_or(slot, |p| p.1)
    }

    /// `self` after `inner`: `l -> self(inner(l))`.
    pub fn compose(&self, inner: &Derangement) -> Derangement {
        let mut keys: Vec<i8> = self.pairs.iter().chain(&inner.pairs).map(|p| p.0).collect();
        keys.sort();
        keys.dedup();
        let pairs: Vec<(i8, i8)> = keys.into_iter().map(|k| (k, self.apply(inner.apply(k)))).collect();
        Derangement::from_pairs(&pairs)
    }
}
