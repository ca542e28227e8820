use std::sync::Arc;

use super::upoly::UPoly;
use super::Curve;
use crate::algebra::{Algebra, Poly, VarId};
use crate::error::{Error, Result};
use crate::scalar::{Field, Fp, Ring};

/// Function `(a(x) + b(x) y) / d(x)` with `d` monic and
/// `gcd(a, b, d) = 1`; this normal form is unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuncRep {
    a: UPoly,
    b: UPoly,
    d: UPoly,
}

impl FuncRep {
    pub fn new(a: UPoly, b: UPoly, d: UPoly) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = d.modulus();
        if a.is_zero() && b.is_zero() {
            return Ok(FuncRep { a, b, d: UPoly::one(p) });
        }
        let g = d.gcd(&a).gcd(&b);
        let lead = d.leading().unwrap();
        let scale = |u: &UPoly| u.div_exact(&g).unwrap().scale(&lead.inv().unwrap());
        Ok(FuncRep { a: scale(&a), b: scale(&b), d: scale(&d) })
    }

    pub fn poly(a: UPoly, b: UPoly) -> Self {
        let p = a.modulus();
        FuncRep::new(a, b, UPoly::one(p)).unwrap()
    }

    pub fn constant(c: Fp) -> Self {
        let p = c.modulus();
        FuncRep::poly(UPoly::constant(c), UPoly::zero(p))
    }

    pub fn x(p: u64) -> Self {
        FuncRep::poly(UPoly::from_i64s(p, &[0, 1]), UPoly::zero(p))
    }

    pub fn y(p: u64) -> Self {
        FuncRep::poly(UPoly::zero(p), UPoly::one(p))
    }

    pub fn a(&self) -> &UPoly {
        &self.a
    }

    pub fn b(&self) -> &UPoly {
        &self.b
    }

    pub fn d(&self) -> &UPoly {
        &self.d
    }

    pub fn modulus(&self) -> u64 {
        self.d.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.d.degree() == Some(0)
    }

    pub fn add(&self, o: &FuncRep) -> FuncRep {
        FuncRep::new(
            self.a.mul(&o.d).add(&o.a.mul(&self.d)),
            self.b.mul(&o.d).add(&o.b.mul(&self.d)),
            self.d.mul(&o.d),
        )
        .unwrap()
    }

    pub fn neg(&self) -> FuncRep {
        FuncRep { a: self.a.neg(), b: self.b.neg(), d: self.d.clone() }
    }

    pub fn sub(&self, o: &FuncRep) -> FuncRep {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Fp) -> FuncRep {
        FuncRep::new(self.a.scale(c), self.b.scale(c), self.d.clone()).unwrap()
    }

    pub fn mul(&self, o: &FuncRep, curve: &Curve) -> FuncRep {
        let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(curve.f()));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        FuncRep::new(a, b, self.d.mul(&o.d)).unwrap()
    }

    pub fn pow(&self, e: u32, curve: &Curve) -> FuncRep {
        (0..e).fold(FuncRep::constant(Fp::from_u64(1, self.modulus())), |acc, _| acc.mul(self, curve))
    }

    /// `1 / self = d (a - b y) / (a^2 - b^2 f)`.
    pub fn inv(&self, curve: &Curve) -> Result<FuncRep> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(curve.f()));
        FuncRep::new(self.d.mul(&self.a), self.d.mul(&self.b).neg(), norm)
    }

    pub fn div(&self, o: &FuncRep, curve: &Curve) -> Result<FuncRep> {
        Ok(self.mul(&o.inv(curve)?, curve))
    }

    /// `x^i y^j` with integer exponents.
    pub fn monomial(curve: &Curve, i: i64, j: i64) -> FuncRep {
        let p = curve.p();
        let base = |f: FuncRep, e: i64| {
            let r = f.pow(e.unsigned_abs() as u32, curve);
            if e < 0 {
                r.inv(curve).unwrap()
            } else {
                r
            }
        };
        base(FuncRep::x(p), i).mul(&base(FuncRep::y(p), j), curve)
    }

    /// Value at an affine point where `d` does not vanish.
    pub fn eval(&self, x0: &Fp, y0: &Fp) -> Option<Fp> {
        let num = self.a.eval(x0).add(&self.b.eval(x0).mul(y0));
        num.div(&self.d.eval(x0))
    }

    /// Slot-0 element of the coordinate ring; fails unless `d` is constant.
    pub fn to_poly(&self, alg: &Arc<Algebra<Fp>>) -> Result<Poly<Fp>> {
        if !self.is_polynomial() {
            return Err(Error::Precondition("function has affine poles".into()));
        }
        let x = Poly::var(alg, VarId::Gen { gen: 0, slot: 0 })?;
        let y = Poly::var(alg, VarId::Gen { gen: 1, slot: 0 })?;
        let horner = |u: &UPoly| {
            u.coeffs().iter().rev().fold(Poly::zero(alg), |acc, c| acc.mul(&x).add(&Poly::constant(alg, *c)))
        };
        Ok(horner(&self.a).add(&horner(&self.b).mul(&y)))
    }

    /// Inverse of [`FuncRep::to_poly`] for slot-0 polynomials.
    pub fn from_poly(p: &Poly<Fp>) -> Result<FuncRep> {
        let modulus = *p.algebra().ctx();
        let xv = VarId::Gen { gen: 0, slot: 0 };
        let yv = VarId::Gen { gen: 1, slot: 0 };
        let mut a = vec![];
        let mut b = vec![];
        for (m, c) in p.terms() {
            let (i, j) = (m.exponent(xv) as usize, m.exponent(yv));
            if m.degree() != i as u32 + j || j > 1 {
                return Err(Error::Precondition("not a reduced slot-0 element of the coordinate ring".into()));
            }
            let target = if j == 0 { &mut a } else { &mut b };
            if target.len() <= i {
                target.resize(i + 1, Fp::from_u64(0, modulus));
            }
            target[i] = target[i].add(c);
        }
        Ok(FuncRep::poly(UPoly::new(modulus, a), UPoly::new(modulus, b)))
    }
}
