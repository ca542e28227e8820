//! Expansions in a local parameter: `x - x0` at ordinary affine points, `y`
//! at affine Weierstrass points and `x^g / y` at infinity.

use super::laurent::Laurent;
use super::upoly::UPoly;
use super::{Curve, CurvePoint, FuncRep};
use crate::error::{Error, Result};
use crate::scalar::{Field, Fp, Ring};

const MAX_WORKING_PREC: i64 = 1 << 12;

impl Curve {
    /// `x(t)` and `y(t)`, each with `w` known coefficients from its leading term.
    pub fn coordinate_expansions(&self, pt: &CurvePoint, w: i64) -> (Laurent, Laurent) {
        let p = self.p();
        let one = Fp::from_u64(1, p);
        match pt {
            CurvePoint::Affine { x: x0, y: y0 } if !y0.is_zero() => {
                let x = Laurent::constant(*x0, w).add(&Laurent::monomial(one, 1, w));
                let big_f = self.f().taylor(x0);
                let inv2y = y0.add(y0).inv().unwrap();
                let mut c = vec![*y0];
                for k in 1..w as usize {
                    let mut s = big_f.coeff(k);
                    for i in 1..k {
                        s = s.sub(&c[i].mul(&c[k - i]));
                    }
                    c.push(s.mul(&inv2y));
                }
                (x, Laurent::new(p, 0, c))
            }
            CurvePoint::Affine { x: x0, .. } => {
                // f(x0 + u) = t^2, solved for u by fixed-point iteration
                let big_f = self.f().taylor(x0);
                let f1inv = big_f.coeff(1).inv().expect("nonsingular curve");
                let t2 = Laurent::monomial(one, 2, w + 2);
                let mut u = t2.scale(&f1inv);
                for _ in 0..w {
                    let mut rest = Laurent::big_o(p, w + 2);
                    let mut upow = u.clone();
                    for k in 2..big_f.coeffs().len() {
                        upow = upow.mul(&u).truncate(w + 2);
                        rest = rest.add(&upow.scale(&big_f.coeff(k)));
                    }
                    let next = t2.sub(&rest).scale(&f1inv).truncate(w + 2);
                    if next == u {
                        break;
                    }
                    u = next;
                }
                let x = Laurent::constant(*x0, w + 2).add(&u);
                (x.truncate(w), Laurent::monomial(one, 1, w + 1))
            }
            CurvePoint::Infinity => {
                // 1/x = t^2 h(1/x) with h(w) = w^(2g+1) f(1/w)
                let deg = self.f().degree().unwrap();
                let h = UPoly::new(p, (0..=deg).map(|i| self.f().coeff(deg - i)).collect());
                let prec = w + 2;
                let t2 = Laurent::monomial(one, 2, prec);
                let mut s = t2.clone();
                for _ in 0..prec {
                    let hs = eval_upoly(&h, &s);
                    let next = t2.mul(&hs).truncate(prec);
                    if next == s {
                        break;
                    }
                    s = next;
                }
                let x = s.inv().unwrap();
                let g = self.genus() as u32;
                let y = x.pow(g).shift(-1);
                (x, y)
            }
        }
    }

    /// Expansion of `f` at `pt`, known modulo `t^prec`.
    pub fn local_expansion(&self, f: &FuncRep, pt: &CurvePoint, prec: i64) -> Result<Laurent> {
        if prec < 1 {
            return Err(Error::Precondition("precision must be at least 1".into()));
        }
        if !self.contains(pt) {
            return Err(Error::PointNotOnCurve);
        }
        let mut w = prec.max(4) + 4;
        loop {
            if let Some(s) = self.expand_with(f, pt, w) {
                if s.prec() >= prec {
                    let s = s.truncate(prec);
                    return if s.valuation().is_none() && !f.is_zero() {
                        Err(Error::Precondition(format!("precision {prec} does not reach the leading term")))
                    } else {
                        Ok(s)
                    };
                }
            }
            w *= 2;
            if w > MAX_WORKING_PREC {
                return Err(Error::Precondition("local expansion did not converge".into()));
            }
        }
    }

    fn expand_with(&self, f: &FuncRep, pt: &CurvePoint, w: i64) -> Option<Laurent> {
        let (x, y) = self.coordinate_expansions(pt, w);
        let num = eval_upoly(f.a(), &x).add(&eval_upoly(f.b(), &x).mul(&y));
        let den = eval_upoly(f.d(), &x);
        num.div(&den)
    }

    /// Order of vanishing of a nonzero function at `pt`.
    pub fn ord_at(&self, f: &FuncRep, pt: &CurvePoint) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::Precondition("the zero function has no order".into()));
        }
        if !self.contains(pt) {
            return Err(Error::PointNotOnCurve);
        }
        let mut w = 8;
        while w <= MAX_WORKING_PREC {
            if let Some(v) = self.expand_with(f, pt, w).and_then(|s| s.valuation()) {
                return Ok(v);
            }
            w *= 2;
        }
        Err(Error::Precondition("order exceeds the working precision".into()))
    }

    /// A function with a simple zero at `pt`, equal to the local parameter.
    pub fn uniformizer(&self, pt: &CurvePoint) -> FuncRep {
        let p = self.p();
        match pt {
            CurvePoint::Affine { x, y } if !y.is_zero() => {
                FuncRep::x(p).sub(&FuncRep::constant(*x))
            }
            CurvePoint::Affine { .. } => FuncRep::y(p),
            CurvePoint::Infinity => FuncRep::monomial(self, self.genus() as i64, -1),
        }
    }

    /// `dx / dt` in the local parameter at `pt`.
    pub fn dx_expansion(&self, pt: &CurvePoint, w: i64) -> Laurent {
        self.coordinate_expansions(pt, w + 1).0.derivative()
    }
}

/// Horner evaluation of a polynomial at a series.
pub(crate) fn eval_upoly(u: &UPoly, x: &Laurent) -> Laurent {
    let p = x.modulus();
    let deg = u.degree().unwrap_or(0) as i64;
    let pole = (-x.valuation().unwrap_or(0)).max(0);
    // constants are exact; give them more precision than any partial sum
    let cp = x.prec() + deg * pole + 1;
    let mut it = u.coeffs().iter().rev();
    let Some(first) = it.next() else {
        return Laurent::big_o(p, cp);
    };
    let mut acc = Laurent::constant(*first, cp);
    for c in it {
        acc = acc.mul(x).add(&Laurent::constant(*c, cp));
    }
    acc
}
