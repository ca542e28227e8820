//! Odd-degree hyperelliptic curves `y^2 = f(x)` over prime fields: points,
//! divisors, functions, local expansions, Riemann-Roch spaces and the
//! residue / compression functionals.

mod function;
mod laurent;
mod local;
mod rr;
mod upoly;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use function::FuncRep;
pub use laurent::Laurent;
pub use rr::{compression_functional, residue_functional, LinearFunctional};
pub use upoly::UPoly;

use crate::algebra::{Algebra, SpecPoint};
use crate::error::{Error, Result};
use crate::scalar::{is_prime, Field, Fp, Ring, SampleField};

/// `y^2 = f(x)` with `f` monic of degree `2g + 1`, nonsingular, over `F_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    p: u64,
    f: UPoly,
    genus: usize,
    alg: Arc<Algebra<Fp>>,
}

impl Curve {
    pub fn new(p: u64, f: Vec<Fp>) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidCurve(format!("{p} is not an odd prime")));
        }
        let f = UPoly::new(p, f);
        let deg = f.degree().unwrap_or(0);
        if deg < 3 || deg % 2 == 0 {
            return Err(Error::InvalidCurve("f must have odd degree at least 3".into()));
        }
        if !f.leading().unwrap().is_one() {
            return Err(Error::InvalidCurve("f must be monic".into()));
        }
        if f.gcd(&f.derivative()).degree() != Some(0) {
            return Err(Error::InvalidCurve("f has a repeated root".into()));
        }
        let alg = Algebra::hyperelliptic(p, f.coeffs().to_vec());
        Ok(Curve { p, f, genus: (deg - 1) / 2, alg })
    }

    pub fn from_i64s(p: u64, f: &[i64]) -> Result<Self> {
        Curve::new(p, f.iter().map(|&c| Fp::new(c, p)).collect())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> &UPoly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Coordinate ring `F_p[x, y] / (y^2 - f)` as a slot algebra.
    pub fn algebra(&self) -> &Arc<Algebra<Fp>> {
        &self.alg
    }

    pub fn fp(&self, v: i64) -> Fp {
        Fp::new(v, self.p)
    }

    pub fn point(&self, x: Fp, y: Fp) -> Result<CurvePoint> {
        if y.mul(&y) != self.f.eval(&x) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(CurvePoint::Affine { x, y })
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => y.mul(y) == self.f.eval(x),
        }
    }

    /// Uniformly random affine point.
    pub fn random_point<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Result<CurvePoint> {
        let pt = self.alg.random_point(rng, 200)?;
        let v = pt.values();
        Ok(CurvePoint::Affine { x: v[0], y: v[1] })
    }

    /// Random affine point off a finite exclusion list.
    pub fn random_point_avoiding<G: rand::Rng + ?Sized>(&self, rng: &mut G, avoid: &[CurvePoint]) -> Result<CurvePoint> {
        for _ in 0..200 {
            let pt = self.random_point(rng)?;
            if !avoid.contains(&pt) {
                return Ok(pt);
            }
        }
        Err(Error::RetryExhausted(200))
    }

    /// `x -> x0, y -> y0` as a point of the coordinate ring's spectrum.
    pub fn eval_hom(&self, pt: &CurvePoint) -> Result<SpecPoint<Fp>> {
        match pt {
            CurvePoint::Infinity => Err(Error::Precondition("the point at infinity has no affine coordinates".into())),
            CurvePoint::Affine { x, y } => self.alg.point(vec![*x, *y]),
        }
    }

    pub fn negate(&self, pt: &CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: *x, y: y.neg() },
        }
    }

    /// Secant / tangent addition on a genus-one curve with `∞` as identity.
    pub fn chord_tangent(&self, a: &CurvePoint, b: &CurvePoint) -> Result<CurvePoint> {
        if self.genus != 1 {
            return Err(Error::Precondition("chord-tangent addition needs genus 1".into()));
        }
        let (x1, y1, x2, y2) = match (a, b) {
            (CurvePoint::Infinity, _) => return Ok(b.clone()),
            (_, CurvePoint::Infinity) => return Ok(a.clone()),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (*x1, *y1, *x2, *y2),
        };
        let lambda = if x1 != x2 {
            y2.sub(&y1).div(&x2.sub(&x1)).unwrap()
        } else if y1 == y2.neg() {
            return Ok(CurvePoint::Infinity);
        } else {
            self.f.derivative().eval(&x1).div(&y1.add(&y1)).unwrap()
        };
        let a2 = self.f.coeff(2);
        let x3 = lambda.mul(&lambda).sub(&a2).sub(&x1).sub(&x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(&y1);
        Ok(CurvePoint::Affine { x: x3, y: y3 })
    }

    /// Closed points are all rational here; `true` when `y0 = 0`.
    pub fn is_weierstrass(&self, pt: &CurvePoint) -> bool {
        matches!(pt, CurvePoint::Affine { y, .. } if y.is_zero())
    }
}

/// A rational point of the smooth model.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Fp, y: Fp },
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "inf"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Finitely supported formal sum of points.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Divisor {
    terms: BTreeMap<CurvePoint, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (CurvePoint, i64)>) -> Self {
        let mut d = Divisor::zero();
        for (pt, m) in pairs {
            d.add_point(pt, m);
        }
        d
    }

    /// `m * pt`.
    pub fn point(pt: CurvePoint, m: i64) -> Self {
        Divisor::from_pairs([(pt, m)])
    }

    pub fn infinity(m: i64) -> Self {
        Divisor::point(CurvePoint::Infinity, m)
    }

    pub fn add_point(&mut self, pt: CurvePoint, m: i64) {
        let e = self.terms.entry(pt.clone()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.terms.remove(&pt);
        }
    }

    pub fn coeff(&self, pt: &CurvePoint) -> i64 {
        self.terms.get(pt).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (&CurvePoint, i64)> {
        self.terms.iter().map(|(p, m)| (p, *m))
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m >= 0)
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (pt, m) in o.support() {
            d.add_point(pt.clone(), m);
        }
        d
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_pairs(self.support().map(|(p, m)| (p.clone(), m * k)))
    }

    pub fn neg(&self) -> Divisor {
        self.scale(-1)
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.neg())
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(p, m)| format!("{m}*{p:?}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Curve {
    pub fn check_divisor(&self, d: &Divisor) -> Result<()> {
        match d.support().find(|(p, _)| !self.contains(p)) {
            Some(_) => Err(Error::PointNotOnCurve),
            None => Ok(()),
        }
    }

    /// Divisor of a nonzero function. `None` when some zero or pole lies
    /// over an `x`-value outside `F_p` (found by comparing root counts of
    /// the denominator and the norm `a^2 - b^2 f` with their degrees).
    pub fn principal_divisor(&self, f: &FuncRep) -> Result<Option<Divisor>> {
        if f.is_zero() {
            return Err(Error::Precondition("the zero function has no divisor".into()));
        }
        let norm = f.a().mul(f.a()).sub(&f.b().mul(f.b()).mul(&self.f));
        let mut xs: Vec<Fp> = Vec::new();
        for poly in [&norm, f.d()] {
            let mut count = 0;
            for v in 0..self.p {
                let x0 = Fp::from_u64(v, self.p);
                let m = poly.root_multiplicity(&x0);
                if m > 0 {
                    count += m;
                    if !xs.contains(&x0) {
                        xs.push(x0);
                    }
                }
            }
            if count != poly.degree().unwrap_or(0) {
                return Ok(None);
            }
        }
        let mut div = Divisor::zero();
        for x0 in xs {
            let y0 = self.f.eval(&x0).sqrt();
            let Some(y0) = y0 else {
                return Ok(None);
            };
            let mut pts = vec![CurvePoint::Affine { x: x0, y: y0 }];
            if !y0.is_zero() {
                pts.push(CurvePoint::Affine { x: x0, y: y0.neg() });
            }
            for pt in pts {
                let o = self.ord_at(f, &pt)?;
                div.add_point(pt, o);
            }
        }
        div.add_point(CurvePoint::Infinity, self.ord_at(f, &CurvePoint::Infinity)?);
        Ok(Some(div))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn elliptic() -> Curve {
        Curve::from_i64s(1009, &[3, 2, 0, 1]).unwrap()
    }

    #[test]
    fn curve_validation() {
        assert!(Curve::from_i64s(1009, &[0, 0, 0, 1]).is_err());
        assert!(Curve::from_i64s(1009, &[1, 0, 1]).is_err());
        assert!(Curve::from_i64s(1008, &[3, 2, 0, 1]).is_err());
        assert!(Curve::from_i64s(1009, &[3, 2, 0, 2]).is_err());
        let c = Curve::from_i64s(1009, &[1, 3, 0, 2, 0, 1]).unwrap();
        assert_eq!(c.genus(), 2);
    }

    #[test]
    fn chord_tangent_group_axioms() {
        let c = elliptic();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = c.random_point(&mut rng).unwrap();
            let q = c.random_point(&mut rng).unwrap();
            let r = c.random_point(&mut rng).unwrap();
            assert_eq!(c.chord_tangent(&p, &CurvePoint::Infinity).unwrap(), p);
            assert_eq!(c.chord_tangent(&p, &c.negate(&p)).unwrap(), CurvePoint::Infinity);
            let pq = c.chord_tangent(&p, &q).unwrap();
            assert!(c.contains(&pq));
            assert_eq!(pq, c.chord_tangent(&q, &p).unwrap());
            let left = c.chord_tangent(&pq, &r).unwrap();
            let right = c.chord_tangent(&p, &c.chord_tangent(&q, &r).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn divisor_arithmetic() {
        let c = elliptic();
        let p = c.point(c.fp(1), c.fp(6).sqrt().unwrap()).unwrap();
        let d = Divisor::point(p.clone(), 2).add(&Divisor::infinity(-2));
        assert_eq!(d.degree(), 0);
        assert!(!d.is_effective());
        assert_eq!(d.sub(&d), Divisor::zero());
        assert_eq!(d.coeff(&p), 2);
        assert!(c.check_divisor(&d).is_ok());
        let off = Divisor::point(CurvePoint::Affine { x: c.fp(1), y: c.fp(1) }, 1);
        assert_eq!(c.check_divisor(&off), Err(Error::PointNotOnCurve));
    }

    #[test]
    fn evaluation_points() {
        let c = elliptic();
        let p = c.point(c.fp(1), c.fp(6).sqrt().unwrap()).unwrap();
        let s = c.eval_hom(&p).unwrap();
        assert_eq!(s.values()[0], c.fp(1));
        assert!(c.eval_hom(&CurvePoint::Infinity).is_err());
    }
}
