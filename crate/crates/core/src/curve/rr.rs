use std::collections::BTreeMap;

use super::upoly::UPoly;
use super::{Curve, CurvePoint, Divisor, FuncRep};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Fp, Ring, SampleField};

impl Curve {
    /// Pole order at infinity of `x^i y^j` (`j` in {0, 1}).
    fn pole_order(&self, i: usize, j: usize) -> usize {
        2 * i + (2 * self.genus() + 1) * j
    }

    /// Basis of `L(D) = { f : (f) + D >= 0 }`.
    ///
    /// Functions are written `h / d(x)`, where `d` clears the allowed affine
    /// poles and `h` runs over polynomials in `x, y` with bounded pole at
    /// infinity; the remaining conditions are vanishing orders of `h`.
    pub fn rr_basis(&self, div: &Divisor) -> Result<Vec<FuncRep>> {
        self.check_divisor(div)?;
        if div.degree() < 0 {
            return Ok(Vec::new());
        }
        let p = self.p();
        // exponent of (x - x0) in d for each affine x-coordinate
        let mut by_x: BTreeMap<Fp, (i64, bool)> = BTreeMap::new();
        for (pt, m) in div.support() {
            if let CurvePoint::Affine { x, y } = pt {
                let e = if y.is_zero() { (m.max(0) + 1) / 2 } else { m.max(0) };
                let entry = by_x.entry(*x).or_insert((0, y.is_zero()));
                entry.0 = entry.0.max(e);
            }
        }
        let mut d = UPoly::one(p);
        for (x0, (e, _)) in &by_x {
            d = d.mul(&UPoly::linear(*x0).pow(*e as u32));
        }
        let deg_d = d.degree().unwrap() as i64;
        let bound = div.coeff(&CurvePoint::Infinity) + 2 * deg_d;
        if bound < 0 {
            return Ok(Vec::new());
        }
        let mut monomials = Vec::new();
        for j in 0..2usize {
            for i in 0.. {
                if self.pole_order(i, j) as i64 > bound {
                    break;
                }
                monomials.push((i, j));
            }
        }
        let mono_funcs: Vec<FuncRep> = monomials.iter().map(|&(i, j)| FuncRep::monomial(self, i as i64, j as i64)).collect();

        // required orders of h at affine points
        let mut required: Vec<(CurvePoint, i64)> = Vec::new();
        let mut pts: Vec<CurvePoint> = div.support().filter(|(pt, _)| **pt != CurvePoint::Infinity).map(|(pt, _)| pt.clone()).collect();
        for (x0, (e, weier)) in &by_x {
            if *e == 0 {
                continue;
            }
            if *weier {
                pts.push(CurvePoint::Affine { x: *x0, y: Fp::from_u64(0, p) });
            } else {
                let y0 = self.f().eval(x0).sqrt().expect("x0 comes from a rational point");
                pts.push(CurvePoint::Affine { x: *x0, y: y0 });
                pts.push(CurvePoint::Affine { x: *x0, y: y0.neg() });
            }
        }
        pts.sort();
        pts.dedup();
        for pt in pts {
            let CurvePoint::Affine { x, y } = &pt else { unreachable!() };
            let e = by_x.get(x).map_or(0, |v| v.0);
            let ord_d = if y.is_zero() { 2 * e } else { e };
            let r = ord_d - div.coeff(&pt);
            if r > 0 {
                required.push((pt, r));
            }
        }

        let mut rows: Vec<Vec<Fp>> = Vec::new();
        for (pt, r) in &required {
            let expansions =
                mono_funcs.iter().map(|m| self.local_expansion_or_zero(m, pt, *r)).collect::<Result<Vec<_>>>()?;
            for k in 0..*r {
                rows.push(expansions.iter().map(|s| s.coeff(k)).collect());
            }
        }
        let kernel = if rows.is_empty() {
            (0..monomials.len())
                .map(|i| (0..monomials.len()).map(|j| Fp::from_u64((i == j) as u64, p)).collect())
                .collect()
        } else {
            Mat::from_rows(&p, rows)?.nullspace()
        };
        let zero = FuncRep::constant(Fp::from_u64(0, p));
        let basis = kernel
            .into_iter()
            .map(|v| {
                let h = v.iter().zip(&mono_funcs).fold(zero.clone(), |acc, (c, m)| acc.add(&m.scale(c)));
                FuncRep::new(h.a().clone(), h.b().clone(), d.clone()).unwrap()
            })
            .collect();
        Ok(basis)
    }

    /// `dim L(D)`.
    pub fn rr_dimension(&self, div: &Divisor) -> Result<usize> {
        Ok(self.rr_basis(div)?.len())
    }

    /// Whether `f` lies in `L(D)`, checked through orders at the support of
    /// `D`, at infinity and at the affine poles of `f`.
    pub fn in_rr_space(&self, f: &FuncRep, div: &Divisor) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let mut pts: Vec<CurvePoint> = div.support().map(|(p, _)| p.clone()).collect();
        pts.push(CurvePoint::Infinity);
        for v in 0..self.p() {
            let x0 = Fp::from_u64(v, self.p());
            if f.d().eval(&x0).is_zero() {
                match self.f().eval(&x0).sqrt() {
                    Some(y0) => {
                        pts.push(CurvePoint::Affine { x: x0, y: y0 });
                        pts.push(CurvePoint::Affine { x: x0, y: y0.neg() });
                    }
                    None => return Ok(false),
                }
            }
        }
        pts.sort();
        pts.dedup();
        for pt in pts {
            if self.ord_at(f, &pt)? + div.coeff(&pt) < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A linear functional on functions regular along a finite set of points:
/// `f -> sum weight * [t^k] (multiplier * f)` at the listed points.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctional {
    multiplier: FuncRep,
    rules: Vec<(CurvePoint, i64, Fp)>,
}

impl LinearFunctional {
    pub fn rules(&self) -> &[(CurvePoint, i64, Fp)] {
        &self.rules
    }

    pub fn multiplier(&self) -> &FuncRep {
        &self.multiplier
    }

    pub fn apply(&self, curve: &Curve, f: &FuncRep) -> Result<Fp> {
        let g = self.multiplier.mul(f, curve);
        let mut acc = Fp::from_u64(0, curve.p());
        if g.is_zero() {
            return Ok(acc);
        }
        let mut by_point: BTreeMap<&CurvePoint, Vec<(i64, Fp)>> = BTreeMap::new();
        for (pt, k, w) in &self.rules {
            by_point.entry(pt).or_default().push((*k, *w));
        }
        for (pt, rules) in by_point {
            let top = rules.iter().map(|r| r.0).max().unwrap() + 1;
            let s = curve.local_expansion_or_zero(&g, pt, top)?;
            if s.valuation().is_some_and(|v| v < 0) {
                return Err(Error::Pole);
            }
            for (k, w) in rules {
                acc = acc.add(&s.coeff(k).mul(&w));
            }
        }
        Ok(acc)
    }
}

impl Curve {
    /// Like `local_expansion`, but a function vanishing beyond `prec` gives
    /// `O(t^prec)` instead of an error.
    pub(crate) fn local_expansion_or_zero(&self, f: &FuncRep, pt: &CurvePoint, prec: i64) -> Result<super::Laurent> {
        if f.is_zero() {
            return Ok(super::Laurent::big_o(self.p(), prec));
        }
        let v = self.ord_at(f, pt)?;
        if v >= prec {
            return Ok(super::Laurent::big_o(self.p(), prec));
        }
        self.local_expansion(f, pt, prec)
    }

    /// Expansion of `x^a y^b dx / dt` at `pt`, to absolute precision `prec`.
    fn differential_expansion(&self, a: i64, b: i64, pt: &CurvePoint, prec: i64) -> Result<super::Laurent> {
        let coef = FuncRep::monomial(self, a, b);
        let w = prec + 16 + 4 * (a.abs() + b.abs()) * (2 * self.genus() as i64 + 1);
        let s = self.local_expansion_or_zero(&coef, pt, w)?.mul(&self.dx_expansion(pt, w));
        if s.prec() < prec {
            return Err(Error::Precondition("differential expansion lost precision".into()));
        }
        Ok(s.truncate(prec))
    }
}

/// `a -> sum over supp E of Res(a * omega)` for a monomial differential
/// `omega = x^a y^b dx` with `ord omega = -ord E` along `supp E`.
pub fn residue_functional(curve: &Curve, e: &Divisor) -> Result<LinearFunctional> {
    curve.check_divisor(e)?;
    if !e.is_effective() || e.degree() == 0 {
        return Err(Error::Precondition("E must be effective and nonzero".into()));
    }
    let g = curve.genus() as i64;
    for a in 0..=4 * g + 4 {
        'b: for b in [-1i64, 0, 1] {
            let mut rules = Vec::new();
            for (pt, m) in e.support() {
                let s = curve.differential_expansion(a, b, pt, 1)?;
                if s.valuation() != Some(-m) {
                    continue 'b;
                }
                // Res(a omega) = sum_k a_k omega_{-1-k}, k < m
                for k in 0..m {
                    let w = s.coeff(-1 - k);
                    if !w.is_zero() {
                        rules.push((pt.clone(), k, w));
                    }
                }
            }
            return Ok(LinearFunctional { multiplier: FuncRep::constant(curve.fp(1)), rules });
        }
    }
    Err(Error::NoDifferential(format!("no x^a y^b dx with the orders of {e:?}")))
}

/// `rho(h) = sigma(f_G h)` on `L(G)`, with `f_G = x^i y^j` matching the order
/// of `G` at infinity; `E` must be supported at infinity.
pub fn compression_functional(curve: &Curve, g_div: &Divisor, e: &Divisor) -> Result<LinearFunctional> {
    curve.check_divisor(g_div)?;
    let genus = curve.genus() as i64;
    if g_div.degree() % 2 != 0 || !e.is_effective() || e.degree() == 0 || g_div.degree() / 2 - e.degree() <= 2 * genus - 2 {
        return Err(Error::Precondition("compression functional needs even deg G, E > 0, deg G / 2 - deg E > 2g - 2".into()));
    }
    if e.support().any(|(pt, _)| *pt != CurvePoint::Infinity) {
        return Err(Error::UnsupportedDivisor("E must be supported at infinity".into()));
    }
    let sigma = residue_functional(curve, e)?;
    let m = g_div.coeff(&CurvePoint::Infinity);
    // ord_inf(x^i y^j) = -2i - (2g+1) j = m
    let (i, j) = if m % 2 == 0 { (-m / 2, 0) } else { ((2 * genus + 1 - m) / 2, -1) };
    let f_g = FuncRep::monomial(curve, i, j);
    Ok(LinearFunctional { multiplier: f_g, rules: sigma.rules })
}
