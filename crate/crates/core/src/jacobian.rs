//! Divisor classes of degree zero as Segre / Jacobi matrices, with addition
//! through Kronecker products and a compression functional.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::algebra::{Poly, PolySpan, VarId};
use crate::curve::{compression_functional, Curve, CurvePoint, Divisor, FuncRep, LinearFunctional};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Fp, Ring};
use crate::segre::{abstract_abel, nondegenerate_points, JacobiMat, SegreMatrix, SegreType};

/// Data fixed once per curve: `E = (deg E) inf`, `n = l(E)`, `L = L(2E)` and
/// an `E`-compression functional on `L(4E)`.
#[derive(Clone, Debug)]
pub struct JacobianConfig {
    curve: Curve,
    e: Divisor,
    n: usize,
    ty: Arc<SegreType<Fp>>,
    rho: LinearFunctional,
    /// `rho(x^i y^j)` for every monomial of `L(4E)`.
    rho_table: FxHashMap<(u32, u32), Fp>,
}

impl JacobianConfig {
    /// `E = (2g + 1) inf`.
    pub fn new(curve: &Curve) -> Result<Self> {
        JacobianConfig::with_degree(curve, 2 * curve.genus() as i64 + 1)
    }

    /// `E = deg_e * inf` with `deg_e >= 2g + 1`.
    pub fn with_degree(curve: &Curve, deg_e: i64) -> Result<Self> {
        let g = curve.genus() as i64;
        if deg_e < 2 * g + 1 {
            return Err(Error::Precondition(format!("deg E must be at least {}", 2 * g + 1)));
        }
        let e = Divisor::infinity(deg_e);
        let n = (deg_e - g + 1) as usize;
        let alg = curve.algebra();
        let l_basis =
            curve.rr_basis(&e.scale(2))?.iter().map(|f| f.to_poly(alg)).collect::<Result<Vec<_>>>()?;
        let ty = Arc::new(SegreType::new(alg, n, l_basis)?);
        let rho = compression_functional(curve, &e.scale(4), &e)?;
        let mut rho_table = FxHashMap::default();
        let bound = 4 * deg_e as u32;
        let odd = 2 * g as u32 + 1;
        for j in 0..2u32 {
            let mut i = 0u32;
            while 2 * i + odd * j <= bound {
                let v = rho.apply(curve, &FuncRep::monomial(curve, i as i64, j as i64))?;
                rho_table.insert((i, j), v);
                i += 1;
            }
        }
        Ok(JacobianConfig { curve: curve.clone(), e, n, ty, rho, rho_table })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn e(&self) -> &Divisor {
        &self.e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn deg_e(&self) -> usize {
        self.e.degree() as usize
    }

    pub fn segre_type(&self) -> &Arc<SegreType<Fp>> {
        &self.ty
    }

    pub fn rho(&self) -> &LinearFunctional {
        &self.rho
    }

    /// `rho` on a slot-0 element of `L(4E)`.
    pub fn rho_poly(&self, p: &Poly<Fp>) -> Result<Fp> {
        let xv = VarId::Gen { gen: 0, slot: 0 };
        let yv = VarId::Gen { gen: 1, slot: 0 };
        let mut acc = Fp::from_u64(0, self.curve.p());
        for (m, c) in p.terms() {
            let key = (m.exponent(xv), m.exponent(yv));
            if m.degree() != key.0 + key.1 {
                return Err(Error::NotSlotZero);
            }
            let v = self.rho_table.get(&key).ok_or_else(|| Error::Precondition("entry outside L(4E)".into()))?;
            acc = acc.add(&c.mul(v));
        }
        Ok(acc)
    }

    /// `X_D`: the `2E`-form of `D + E` for a divisor of degree zero.
    pub fn class_form(&self, d: &Divisor) -> Result<SegreMatrix<Fp>> {
        if d.degree() != 0 {
            return Err(Error::Precondition("divisor must have degree zero".into()));
        }
        let x = gform_from_divisor(&self.curve, &d.add(&self.e), &self.e.scale(2))?;
        SegreMatrix::new(x, &self.ty)
    }

    /// `X_(P - inf)`.
    pub fn point_form(&self, pt: &CurvePoint) -> Result<SegreMatrix<Fp>> {
        self.class_form(&point_class(pt))
    }
}

/// A degree-zero class remembered through its form, and through a divisor
/// when one is known.
#[derive(Clone, Debug)]
pub struct ClassRep {
    divisor: Option<Divisor>,
    form: SegreMatrix<Fp>,
}

impl ClassRep {
    pub fn from_divisor(d: &Divisor, cfg: &JacobianConfig) -> Result<Self> {
        Ok(ClassRep { divisor: Some(d.clone()), form: cfg.class_form(d)? })
    }

    pub fn from_form(form: SegreMatrix<Fp>) -> Self {
        ClassRep { divisor: None, form }
    }

    pub fn divisor(&self) -> Option<&Divisor> {
        self.divisor.as_ref()
    }

    pub fn form(&self) -> &SegreMatrix<Fp> {
        &self.form
    }

    pub fn add(&self, other: &ClassRep, cfg: &JacobianConfig) -> Result<ClassRep> {
        let divisor = self.divisor.as_ref().zip(other.divisor.as_ref()).map(|(a, b)| a.add(b));
        Ok(ClassRep { divisor, form: add_forms(&self.form, &other.form, cfg)? })
    }

    pub fn negate(&self) -> ClassRep {
        ClassRep { divisor: self.divisor.as_ref().map(Divisor::neg), form: negate_form(&self.form) }
    }

    pub fn abel(&self) -> Result<JacobiMat<Fp>> {
        abstract_abel(&self.form)
    }
}

/// `P - inf`.
pub fn point_class(pt: &CurvePoint) -> Divisor {
    Divisor::point(pt.clone(), 1).add(&Divisor::infinity(-1))
}

/// `u v` with `u` a basis of `L(D)` (column) and `v` a basis of `L(G - D)`
/// (row), as a matrix over the coordinate ring.
pub fn gform_from_divisor(curve: &Curve, d: &Divisor, g_div: &Divisor) -> Result<Mat<Poly<Fp>>> {
    let g = curve.genus() as i64;
    if g_div.degree() % 2 != 0 || g_div.degree() / 2 < 2 * g || 2 * d.degree() != g_div.degree() {
        return Err(Error::Precondition("need deg G even, deg G / 2 >= 2g and deg D = deg G / 2".into()));
    }
    if g_div.support().any(|(pt, _)| *pt != CurvePoint::Infinity) {
        return Err(Error::UnsupportedDivisor("G must be supported at infinity".into()));
    }
    let u = curve.rr_basis(d)?;
    let v = curve.rr_basis(&g_div.sub(d))?;
    let alg = curve.algebra();
    let rows = u
        .iter()
        .map(|a| v.iter().map(|b| a.mul(b, curve).to_poly(alg)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(alg, rows)
}

/// `X_(-D)` up to equivalence.
pub fn negate_form(x: &SegreMatrix<Fp>) -> SegreMatrix<Fp> {
    x.transpose()
}

/// Greedy choice of `count` indices whose polynomials are `k`-independent.
fn independent_indices(polys: &[Poly<Fp>], count: usize) -> Option<Vec<usize>> {
    let mut span = PolySpan::new();
    let mut out = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        if out.len() == count {
            break;
        }
        if span.insert(p) {
            out.push(i);
        }
    }
    (out.len() == count).then_some(out)
}

/// Pivot positions of a scalar matrix.
fn pivots(m: &Mat<Fp>) -> Vec<usize> {
    m.rref().1
}

/// Compressed block of `x o x'` multiplied by `extra`: from a `4E`-form
/// selected inside the Kronecker product, eliminate against a `deg E` block
/// on which `rho` is nonsingular.
fn compressed_block(x: &Mat<Poly<Fp>>, x2: &Mat<Poly<Fp>>, cfg: &JacobianConfig, extra: &Fp) -> Result<Mat<Poly<Fp>>> {
    let alg = cfg.curve.algebra().clone();
    let p = cfg.curve.p();
    let k = x.kronecker(x2);
    let n2 = cfg.n + cfg.deg_e();
    let exhausted = || Error::Precondition("block selection found no suitable rows and columns".into());
    let c0 = (0..k.cols()).find(|&j| k.col(j).iter().any(|e| !e.is_zero())).ok_or_else(exhausted)?;
    let r0 = (0..k.rows()).find(|&i| k.row(i).iter().any(|e| !e.is_zero())).ok_or_else(exhausted)?;
    let rows = independent_indices(&k.col(c0), n2).ok_or_else(exhausted)?;
    let cols = independent_indices(k.row(r0), n2).ok_or_else(exhausted)?;
    let block = k.submatrix(&rows, &cols);
    let rho_block = block.try_map(&p, |e| cfg.rho_poly(e))?;
    let col_piv = pivots(&rho_block);
    let row_piv = pivots(&rho_block.transpose());
    let de = cfg.deg_e();
    if col_piv.len() != de || row_piv.len() != de {
        return Err(exhausted());
    }
    let rest = |piv: &[usize]| (0..n2).filter(|i| !piv.contains(i)).collect::<Vec<_>>();
    let (row_d, col_d) = (rest(&row_piv), rest(&col_piv));
    let a = block.submatrix(&row_piv, &col_piv);
    let b = block.submatrix(&row_piv, &col_d);
    let c = block.submatrix(&row_d, &col_piv);
    let d = block.submatrix(&row_d, &col_d);
    let ra = rho_block.submatrix(&row_piv, &col_piv);
    let rb = rho_block.submatrix(&row_piv, &col_d);
    let rc = rho_block.submatrix(&row_d, &col_piv);
    let delta = ra.det()?;
    if delta.is_zero() {
        return Err(exhausted());
    }
    let adj = ra.adjugate()?;
    let lift = |m: &Mat<Fp>| Mat::from_scalars(&alg, m);
    let delta_p = Poly::constant(&alg, delta);
    // (MR)_12 = -a adj(rho a) rho b + delta b,  (MR)_22 = -c adj(rho a) rho b + delta d
    let adj_rb = lift(&adj.mul(&rb)?);
    let mr12 = b.scale(&delta_p).sub(&a.mul(&adj_rb)?)?;
    let mr22 = d.scale(&delta_p).sub(&c.mul(&adj_rb)?)?;
    let left = lift(&rc.mul(&adj)?.neg());
    let z = left.mul(&mr12)?.add(&mr22.scale(&delta_p))?;
    Ok(z.scale(&Poly::constant(&alg, delta.mul(extra))))
}

/// Sum of two classes at the level of Segre matrices.
pub fn add_forms(x: &SegreMatrix<Fp>, x2: &SegreMatrix<Fp>, cfg: &JacobianConfig) -> Result<SegreMatrix<Fp>> {
    let one = Fp::from_u64(1, cfg.curve.p());
    let z = compressed_block(x.mat(), x2.mat(), cfg, &one)?;
    SegreMatrix::new(z, &cfg.ty)
}

/// `Z_D`.
pub fn abel_point(d: &Divisor, cfg: &JacobianConfig) -> Result<JacobiMat<Fp>> {
    abstract_abel(&cfg.class_form(d)?)
}

/// Sum of two points of the Jacobian given as Jacobi matrices.
pub fn add_points<G: rand::Rng + ?Sized>(
    z: &JacobiMat<Fp>,
    z2: &JacobiMat<Fp>,
    cfg: &JacobianConfig,
    rng: &mut G,
) -> Result<JacobiMat<Fp>> {
    const RETRIES: usize = 200;
    for _ in 0..8 {
        let (s, ds) = nondegenerate_points(z, rng, RETRIES)?;
        let (s2, ds2) = nondegenerate_points(z2, rng, RETRIES)?;
        let block = compressed_block(&z.specialize(&s), &z2.specialize(&s2), cfg, &ds.mul(&ds2));
        let Ok(block) = block else { continue };
        let Ok(x) = SegreMatrix::new(block, &cfg.ty) else { continue };
        let out = abstract_abel(&x)?;
        if !out.mat().is_zero() {
            return Ok(out);
        }
    }
    Err(Error::RetryExhausted(8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segre::{is_jacobi, k_equivalent, proportional, CheckMode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (Curve, JacobianConfig) {
        let c = Curve::from_i64s(1009, &[3, 2, 0, 1]).unwrap();
        let cfg = JacobianConfig::new(&c).unwrap();
        (c, cfg)
    }

    #[test]
    fn zero_class_form() {
        let (c, cfg) = setup();
        assert_eq!(cfg.n(), 3);
        let x0 = cfg.class_form(&Divisor::zero()).unwrap();
        let alg = c.algebra();
        let u: Vec<Poly<Fp>> =
            [FuncRep::constant(c.fp(1)), FuncRep::x(c.p()), FuncRep::y(c.p())].iter().map(|f| f.to_poly(alg).unwrap()).collect();
        assert_eq!(*x0.mat(), Mat::outer(alg, &u, &u));
        assert_eq!(negate_form(&x0).mat(), x0.mat());
    }

    #[test]
    fn forms_track_divisor_classes() {
        let (c, cfg) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let p = c.random_point(&mut rng).unwrap();
        let q = c.random_point(&mut rng).unwrap();
        let xp = cfg.point_form(&p).unwrap();
        let xq = cfg.point_form(&q).unwrap();
        assert!(!k_equivalent(&xp, &xq).unwrap());
        // P + Q - 2 inf is linearly equivalent to (P + Q) - inf
        let pq = c.chord_tangent(&p, &q).unwrap();
        let two = Divisor::point(p.clone(), 1).add(&Divisor::point(q.clone(), 1)).add(&Divisor::infinity(-2));
        let x_two = cfg.class_form(&two).unwrap();
        assert!(k_equivalent(&x_two, &cfg.point_form(&pq).unwrap()).unwrap());
        let sum = add_forms(&xp, &xq, &cfg).unwrap();
        assert!(k_equivalent(&sum, &x_two).unwrap());
        let back = add_forms(&sum, &negate_form(&xq), &cfg).unwrap();
        assert!(k_equivalent(&back, &xp).unwrap());
        let zero = add_forms(&xp, &negate_form(&xp), &cfg).unwrap();
        assert!(k_equivalent(&zero, &cfg.class_form(&Divisor::zero()).unwrap()).unwrap());
    }

    #[test]
    fn points_add_like_the_chord_law() {
        let (c, cfg) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let p = c.random_point(&mut rng).unwrap();
        let q = c.random_point(&mut rng).unwrap();
        let zp = abel_point(&point_class(&p), &cfg).unwrap();
        let zq = abel_point(&point_class(&q), &cfg).unwrap();
        let zpq = abel_point(&point_class(&c.chord_tangent(&p, &q).unwrap()), &cfg).unwrap();
        let sum = add_points(&zp, &zq, &cfg, &mut rng).unwrap();
        assert!(proportional(sum.mat(), zpq.mat()));
        assert!(is_jacobi(sum.mat(), cfg.segre_type(), CheckMode::Sampled { trials: 2, seed: 1 }));
        let neg = abel_point(&point_class(&c.negate(&p)), &cfg).unwrap();
        assert!(proportional(neg.mat(), &zp.mat().transpose()));
        let z0 = abel_point(&Divisor::zero(), &cfg).unwrap();
        assert!(proportional(add_points(&zp, &z0, &cfg, &mut rng).unwrap().mat(), zp.mat()));
        let via_forms = abstract_abel(&add_forms(&cfg.point_form(&p).unwrap(), &cfg.point_form(&q).unwrap(), &cfg).unwrap()).unwrap();
        assert!(proportional(via_forms.mat(), sum.mat()));
    }

    #[test]
    fn class_reps_and_group_axioms() {
        let (c, cfg) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let pts: Vec<CurvePoint> = (0..2).map(|_| c.random_point(&mut rng).unwrap()).collect();
        let a = ClassRep::from_divisor(&point_class(&pts[0]), &cfg).unwrap();
        let b = ClassRep::from_divisor(&point_class(&pts[1]), &cfg).unwrap();
        let ab = a.add(&b, &cfg).unwrap();
        let ba = b.add(&a, &cfg).unwrap();
        assert!(k_equivalent(ab.form(), ba.form()).unwrap());
        assert_eq!(ab.divisor().unwrap().degree(), 0);
        let zero = ClassRep::from_divisor(&Divisor::zero(), &cfg).unwrap();
        assert!(k_equivalent(a.add(&zero, &cfg).unwrap().form(), a.form()).unwrap());
        assert_eq!(a.negate().negate().form().mat(), a.form().mat());
        // a principal divisor: the chord through P and Q meets the curve again at -(P + Q)
        let r = c.negate(&c.chord_tangent(&pts[0], &pts[1]).unwrap());
        let principal = point_class(&pts[0]).add(&point_class(&pts[1])).add(&point_class(&r));
        let zp = abel_point(&principal, &cfg).unwrap();
        assert!(proportional(zp.mat(), abel_point(&Divisor::zero(), &cfg).unwrap().mat()));
        assert!(!proportional(a.abel().unwrap().mat(), b.abel().unwrap().mat()));
    }
}
