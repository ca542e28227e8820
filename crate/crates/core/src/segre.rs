//! Segre matrices, the abstract Abel map and the Jacobi / J-matrix conditions.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::abeliant::{abeliant, abeliant_par, discriminant};
use crate::algebra::{slot_mask_of, Algebra, Derangement, Poly, PolySpan, SpecPoint};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Field, Ring, SampleField};

/// Type tag of a Segre matrix: the algebra `A`, the size `n` and the
/// subspace `L` of slot-0 elements holding the entries.
#[derive(Clone, Debug)]
pub struct SegreType<F: Field> {
    alg: Arc<Algebra<F>>,
    n: usize,
    basis: Vec<Poly<F>>,
    l: PolySpan<F>,
    l2: PolySpan<F>,
}

impl<F: Field> SegreType<F> {
    pub fn new(alg: &Arc<Algebra<F>>, n: usize, basis: Vec<Poly<F>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("n must be positive".into()));
        }
        for b in &basis {
            if b.slot_mask() & !slot_mask_of([0]) != 0 || b.has_aux() {
                return Err(Error::NotSlotZero);
            }
            if **b.algebra() != **alg {
                return Err(Error::FieldMismatch);
            }
        }
        let l = PolySpan::from_polys(&basis);
        if l.dim() != basis.len() {
            return Err(Error::Precondition("L basis is linearly dependent".into()));
        }
        let l2 = l.product(&l);
        Ok(SegreType { alg: alg.clone(), n, basis, l, l2 })
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.alg
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Poly<F>] {
        &self.basis
    }

    pub fn l_span(&self) -> &PolySpan<F> {
        &self.l
    }

    fn same_as(&self, other: &SegreType<F>) -> bool {
        self.n == other.n
            && *self.alg == *other.alg
            && self.l.dim() == other.l.dim()
            && other.basis.iter().all(|b| self.l.contains(b))
    }
}

/// Move every entry of a slot-0 matrix to slot `slot`.
pub fn slot_embed<F: Field>(x: &Mat<Poly<F>>, slot: i8) -> Result<Mat<Poly<F>>> {
    x.try_map(x.ctx(), |p| p.embed(slot))
}

/// `X^(0), ..., X^(n+1)`.
pub fn slot_family<F: Field>(x: &Mat<Poly<F>>) -> Result<Vec<Mat<Poly<F>>>> {
    (0..=x.rows() as i8 + 1).map(|l| slot_embed(x, l)).collect()
}

/// Rank at most one, `k`-general, entries in `L`.
pub fn is_segre<F: Field>(x: &Mat<Poly<F>>, ty: &SegreType<F>) -> bool {
    x.rows() == ty.n
        && x.cols() == ty.n
        && **x.ctx() == *ty.alg
        && x.entries().iter().all(|p| ty.l.contains(p))
        && x.rank_leq_one()
        && x.k_general()
}

#[derive(Clone, Debug)]
pub struct SegreMatrix<F: Field> {
    mat: Mat<Poly<F>>,
    ty: Arc<SegreType<F>>,
}

impl<F: Field> SegreMatrix<F> {
    pub fn new(mat: Mat<Poly<F>>, ty: &Arc<SegreType<F>>) -> Result<Self> {
        if !is_segre(&mat, ty) {
            return Err(Error::NotSegre("rank, generality or L-membership fails".into()));
        }
        Ok(SegreMatrix { mat, ty: ty.clone() })
    }

    pub fn mat(&self) -> &Mat<Poly<F>> {
        &self.mat
    }

    pub fn segre_type(&self) -> &Arc<SegreType<F>> {
        &self.ty
    }

    pub fn transpose(&self) -> Self {
        SegreMatrix { mat: self.mat.transpose(), ty: self.ty.clone() }
    }

    /// `X|_s`: every entry evaluated at one point.
    pub fn evaluate(&self, s: &SpecPoint<F>) -> Mat<F> {
        evaluate_slot0(&self.mat, s)
    }
}

fn evaluate_slot0<F: Field>(x: &Mat<Poly<F>>, s: &SpecPoint<F>) -> Mat<F> {
    let ctx = x.ctx().ctx().clone();
    x.map(&ctx, |p| p.specialize(&[(0, s)]).constant_value().expect("slot-0 entry"))
}

/// Points `s_1, ..., s_(n+1)` attached to slots `1..=n+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlotPoints<F: Field> {
    points: Vec<SpecPoint<F>>,
}

impl<F: Field> SlotPoints<F> {
    pub fn new(points: Vec<SpecPoint<F>>) -> Self {
        SlotPoints { points }
    }

    pub fn points(&self) -> &[SpecPoint<F>] {
        &self.points
    }

    pub fn assignments(&self) -> Vec<(i8, &SpecPoint<F>)> {
        self.points.iter().enumerate().map(|(k, p)| (k as i8 + 1, p)).collect()
    }
}

impl<F: SampleField> SlotPoints<F> {
    pub fn random<G: rand::Rng + ?Sized>(alg: &Algebra<F>, n: usize, rng: &mut G) -> Result<Self> {
        let points = (0..=n).map(|_| alg.random_point(rng, 200)).collect::<Result<_>>()?;
        Ok(SlotPoints { points })
    }
}

/// A discriminant kept as a product of powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Discriminant<F: Field> {
    factors: Vec<(Poly<F>, u32)>,
}

impl<F: Field> Discriminant<F> {
    pub fn factors(&self) -> &[(Poly<F>, u32)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().any(|(f, _)| f.is_zero())
    }

    pub fn slot_mask(&self) -> u16 {
        self.factors.iter().fold(0, |m, (f, _)| m | f.slot_mask())
    }

    /// `Delta||_s`; fails unless every factor lives in slots `1..=n+1`.
    pub fn at(&self, s: &SlotPoints<F>) -> Result<F> {
        let ctx = self.factors[0].0.algebra().ctx().clone();
        let assign = s.assignments();
        let mut acc = F::one(&ctx);
        for (f, e) in &self.factors {
            let v = f
                .specialize(&assign)
                .constant_value()
                .ok_or_else(|| Error::Precondition("discriminant not supported on slots 1..n+1".into()))?;
            acc = acc.mul(&v.pow(*e));
        }
        Ok(acc)
    }

    pub fn expand(&self) -> Poly<F> {
        let alg = self.factors[0].0.algebra().clone();
        self.factors.iter().fold(Poly::one(&alg), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }
}

/// Discriminant read off a Jacobi-type matrix from slot-swapped diagonal
/// entries (needs `n >= 2`).
pub fn jacobi_discriminant<F: Field>(z: &Mat<Poly<F>>) -> Result<Discriminant<F>> {
    let n = z.rows();
    if n < 2 || !z.is_square() {
        return Err(Error::Dimension("need a square matrix with n >= 2".into()));
    }
    let last = n as i8 + 1;
    let s01 = Derangement::swap(0, 1);
    let mut factors = vec![
        (z.get(0, 0).slot_map(&Derangement::swap(2, last).compose(&s01))?, 1),
        (z.get(0, 0).slot_map(&s01)?, 1),
        (z.get(1, 1).slot_map(&Derangement::swap(0, 2))?, 1),
    ];
    for l in 3..=n {
        factors.push((z.get(l - 1, l - 1).slot_map(&Derangement::swap(0, l as i8))?, 2));
    }
    Ok(Discriminant { factors })
}

#[derive(Clone, Debug)]
pub struct JacobiMat<F: Field> {
    mat: Mat<Poly<F>>,
    ty: Arc<SegreType<F>>,
}

impl<F: Field> JacobiMat<F> {
    /// Wraps a matrix without checking the Jacobi conditions.
    pub fn new(mat: Mat<Poly<F>>, ty: &Arc<SegreType<F>>) -> Self {
        JacobiMat { mat, ty: ty.clone() }
    }

    pub fn mat(&self) -> &Mat<Poly<F>> {
        &self.mat
    }

    pub fn segre_type(&self) -> &Arc<SegreType<F>> {
        &self.ty
    }

    pub fn n(&self) -> usize {
        self.ty.n
    }

    pub fn discriminant(&self) -> Result<Discriminant<F>> {
        jacobi_discriminant(&self.mat)
    }

    /// `Z||_s`, a slot-0 matrix.
    pub fn specialize(&self, s: &SlotPoints<F>) -> Mat<Poly<F>> {
        let assign = s.assignments();
        self.mat.map(self.mat.ctx(), |p| p.specialize(&assign))
    }

    pub fn transpose(&self) -> Self {
        JacobiMat { mat: self.mat.transpose(), ty: self.ty.clone() }
    }
}

/// `Z = abel(X^(0), ..., X^(n+1))`.
pub fn abstract_abel<F: Field>(x: &SegreMatrix<F>) -> Result<JacobiMat<F>> {
    let z = abeliant_par(&slot_family(&x.mat)?)?;
    Ok(JacobiMat { mat: z, ty: x.ty.clone() })
}

/// Equal up to a nonzero scalar. Decided on coefficients: with a pivot
/// coefficient `alpha` of `a` and the matching `beta` of `b`, every
/// coefficient pair must satisfy `a * beta == b * alpha`.
pub fn proportional<F: Field>(a: &Mat<Poly<F>>, b: &Mat<Poly<F>>) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let pivot = a.entries().iter().enumerate().find_map(|(k, p)| p.leading().map(|t| (k, t.clone())));
    let Some((k, (m, alpha))) = pivot else {
        return b.is_zero();
    };
    let beta = b.entries()[k].coeff(&m);
    if beta.is_zero() {
        return false;
    }
    a.entries().iter().zip(b.entries()).all(|(p, q)| p.scale(&beta) == q.scale(&alpha))
}

/// `k`-equivalence, decided by comparing normal forms at points that are
/// nondegenerate for both matrices.
pub fn k_equivalent<F: SampleField>(x: &SegreMatrix<F>, y: &SegreMatrix<F>) -> Result<bool> {
    const RETRIES: usize = 200;
    if !x.ty.same_as(&y.ty) {
        return Err(Error::Precondition("Segre types differ".into()));
    }
    let n = x.ty.n;
    // the answer does not depend on the points, so a fixed stream keeps it reproducible
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e9e);
    for _ in 0..RETRIES {
        let s = SlotPoints::random(&x.ty.alg, n, &mut rng)?;
        match k_equivalent_at(x, y, &s) {
            Err(Error::DegenerateSpecialization) => continue,
            other => return other,
        }
    }
    Err(Error::RetryExhausted(RETRIES))
}

/// `k`-equivalence through normal forms at common points `s`, which must be
/// nondegenerate for both inputs.
pub fn k_equivalent_at<F: Field>(x: &SegreMatrix<F>, y: &SegreMatrix<F>, s: &SlotPoints<F>) -> Result<bool> {
    if !x.ty.same_as(&y.ty) {
        return Err(Error::Precondition("Segre types differ".into()));
    }
    Ok(normalize(x, s)?.mat == normalize(y, s)?.mat)
}

/// Evaluation pattern of an `s`-normalized matrix: at `s_l` (`l <= n`) only
/// the `l`-th diagonal entry survives, and at `s_(n+1)` every entry is 1.
pub fn is_normalized<F: Field>(x: &Mat<Poly<F>>, s: &SlotPoints<F>) -> bool {
    let n = x.rows();
    if s.points.len() != n + 1 || !x.is_square() {
        return false;
    }
    if x.entries().iter().any(|p| p.slot_mask() & !slot_mask_of([0]) != 0) {
        return false;
    }
    for (l, pt) in s.points[..n].iter().enumerate() {
        let v = evaluate_slot0(x, pt);
        for i in 0..n {
            for j in 0..n {
                if v.get(i, j).is_zero() == (i == l && j == l) {
                    return false;
                }
            }
        }
    }
    evaluate_slot0(x, &s.points[n]).entries().iter().all(|c| c.is_one())
}

/// The unique `s`-normalized Segre matrix `k`-equivalent to `x`.
pub fn normalize<F: Field>(x: &SegreMatrix<F>, s: &SlotPoints<F>) -> Result<SegreMatrix<F>> {
    let n = x.ty.n;
    if s.points.len() != n + 1 {
        return Err(Error::Dimension("need n+1 points".into()));
    }
    let alg = x.ty.alg.clone();
    let evals: Vec<Mat<F>> = s.points.iter().map(|pt| x.evaluate(pt)).collect();
    if discriminant(&evals)?.is_zero() {
        return Err(Error::DegenerateSpecialization);
    }
    let mut fam = vec![x.mat.clone()];
    fam.extend(evals.iter().map(|m| Mat::from_scalars(&alg, m)));
    let y = abeliant(&fam)?;
    let w = evaluate_slot0(&y, &s.points[n]);
    let w11 = w.get(0, 0).clone();
    let scale = |i: usize, j: usize| -> Result<F> {
        let phi_psi = w.get(i, 0).mul(w.get(0, j)).div(&w11).ok_or(Error::DegenerateSpecialization)?;
        phi_psi.inv().ok_or(Error::DegenerateSpecialization)
    };
    let mut out = y.clone();
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, y.get(i, j).scale(&scale(i, j)?));
        }
    }
    SegreMatrix::new(out, &x.ty)
}

/// `Z||_s` as a Segre matrix; requires `Delta||_s != 0`.
pub fn specialize_jacobi<F: Field>(z: &JacobiMat<F>, s: &SlotPoints<F>) -> Result<SegreMatrix<F>> {
    if z.discriminant()?.at(s)?.is_zero() {
        return Err(Error::DegenerateSpecialization);
    }
    SegreMatrix::new(z.specialize(s), &z.ty)
}

/// Random `s` with `Delta||_s != 0`.
pub fn nondegenerate_points<F: SampleField, G: rand::Rng + ?Sized>(
    z: &JacobiMat<F>,
    rng: &mut G,
    retries: usize,
) -> Result<(SlotPoints<F>, F)> {
    let disc = z.discriminant()?;
    for _ in 0..retries {
        let s = SlotPoints::random(&z.ty.alg, z.ty.n, rng)?;
        let d = disc.at(&s)?;
        if !d.is_zero() {
            return Ok((s, d));
        }
    }
    Err(Error::RetryExhausted(retries))
}

/// How the conditions involving products or abeliants of whole Jacobi
/// matrices are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Full polynomial identities.
    Exact,
    /// The same identities after specializing the positive slots (and, for
    /// pure rank conditions, every slot) at seeded random points.
    Sampled { trials: usize, seed: u64 },
}

/// Outcome of the seven Jacobi conditions, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JacobiReport(pub [bool; 7]);

impl JacobiReport {
    pub fn holds(&self) -> bool {
        self.0.iter().all(|&b| b)
    }
}

/// Outcome of the four J-matrix conditions, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JReport(pub [bool; 4]);

impl JReport {
    pub fn holds(&self) -> bool {
        self.0.iter().all(|&b| b)
    }
}

fn slots_within<F: Field>(z: &Mat<Poly<F>>, lo: i8, hi: i8) -> bool {
    let allowed = slot_mask_of(lo..=hi);
    z.entries().iter().all(|p| p.slot_mask() & !allowed == 0 && !p.has_aux())
}

/// Every fiber of `p` over slot `slot` lies in `span` (after moving it to
/// slot 0).
fn fibers_in<F: Field>(p: &Poly<F>, slot: i8, span: &PolySpan<F>) -> bool {
    p.split_by_slots(slot_mask_of([slot]))
        .iter()
        .all(|(_, fiber)| span.contains(&fiber.map_slots(|s| if s == slot { 0 } else { s }).expect("in range")))
}

/// Evaluate every slot `lo..=hi` at random points.
fn random_full_specialization<F: SampleField>(
    z: &Mat<Poly<F>>,
    alg: &Algebra<F>,
    lo: i8,
    hi: i8,
    rng: &mut ChaCha8Rng,
) -> Result<Mat<F>> {
    let pts: Vec<(i8, SpecPoint<F>)> =
        (lo..=hi).map(|l| alg.random_point(rng, 200).map(|p| (l, p))).collect::<Result<_>>()?;
    let assign: Vec<(i8, &SpecPoint<F>)> = pts.iter().map(|(l, p)| (*l, p)).collect();
    Ok(z.map(alg.ctx(), |p| p.specialize(&assign).constant_value().expect("all slots evaluated")))
}

fn rank_le_one_checked<F: SampleField>(
    z: &Mat<Poly<F>>,
    ty: &SegreType<F>,
    mode: CheckMode,
    only_first_minor: bool,
) -> Result<bool> {
    let n = ty.n as i8;
    let minor_ok = |m: &dyn Fn(usize, usize) -> bool| {
        if only_first_minor {
            m(0, 1)
        } else {
            (0..ty.n).all(|a| (a + 1..ty.n).all(|b| m(a, b)))
        }
    };
    match mode {
        CheckMode::Exact => {
            if only_first_minor {
                return Ok(z.get(0, 0).mul(z.get(1, 1)) == z.get(0, 1).mul(z.get(1, 0)));
            }
            Ok(z.rank_leq_one())
        }
        CheckMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let v = random_full_specialization(z, &ty.alg, -(n + 1), n + 1, &mut rng)?;
                let ok = if only_first_minor {
                    minor_ok(&|a, b| v.get(a, a).mul(v.get(b, b)) == v.get(a, b).mul(v.get(b, a)))
                } else {
                    v.rank_leq_one()
                };
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `abel([0 -> -l]_* Z)` as a polynomial matrix.
fn moved_abel<F: Field>(z: &Mat<Poly<F>>) -> Result<Mat<Poly<F>>> {
    let n = z.rows();
    let fam = (0..=n + 1)
        .map(|l| z.try_map(z.ctx(), |p| p.slot_map(&Derangement::send(0, -(l as i8)))))
        .collect::<Result<Vec<_>>>()?;
    abeliant_par(&fam)
}

/// Sampled form of `abel([0 -> -l]_* Z) = c * bar(Z)`: for random `s`, the
/// abeliant of the slot family of `Z||_s` against `Z`. Returns the scalars
/// `c_s`, or `None` when some sample is not proportional.
fn sampled_self_abel<F: SampleField>(
    z: &Mat<Poly<F>>,
    ty: &SegreType<F>,
    trials: usize,
    seed: u64,
) -> Result<Option<Vec<(SlotPoints<F>, F)>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let s = SlotPoints::random(&ty.alg, ty.n, &mut rng)?;
        let assign = s.assignments();
        let xs = z.map(z.ctx(), |p| p.specialize(&assign));
        let w = abeliant_par(&slot_family(&xs)?)?;
        match proportionality_factor(z, &w) {
            Some(c) => out.push((s, c)),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// `Some(c)` with `w = c * z` (c may be 0), or `None`.
fn proportionality_factor<F: Field>(z: &Mat<Poly<F>>, w: &Mat<Poly<F>>) -> Option<F> {
    let (k, (m, alpha)) =
        z.entries().iter().enumerate().find_map(|(k, p)| p.leading().map(|t| (k, t.clone())))?;
    let c = w.entries()[k].coeff(&m).div(&alpha)?;
    z.entries().iter().zip(w.entries()).all(|(p, q)| p.scale(&c) == *q).then_some(c)
}

/// The conditions characterising abstract Abel images.
pub fn jacobi_report<F: SampleField>(z: &Mat<Poly<F>>, ty: &SegreType<F>, mode: CheckMode) -> Result<JacobiReport> {
    let n = ty.n;
    let mut r = [false; 7];
    if z.rows() != n || z.cols() != n || n < 2 || **z.ctx() != *ty.alg {
        return Ok(JacobiReport(r));
    }
    let last = n as i8 + 1;
    r[0] = slots_within(z, 0, last);
    r[1] = !z.is_zero();
    let z12 = z.get(0, 1);
    r[2] = z12.slot_mask() & !slot_mask_of(0..=last) == 0
        && (0..=last).all(|l| {
            let span = if (3..=n as i8).contains(&l) { &ty.l2 } else { &ty.l };
            fibers_in(z12, l, span)
        });
    r[3] = *z.get(0, 0) == z12.slot_map(&Derangement::send(1, 2))?;
    r[4] = (1..n).all(|a| {
        let pi = Derangement::swap(a as i8, a as i8 + 1);
        let idx = |i: usize| if i == a - 1 { a } else if i == a { a - 1 } else { i };
        (0..n).all(|i| (0..n).all(|j| z.get(i, j).slot_map(&pi).ok().as_ref() == Some(z.get(idx(i), idx(j)))))
    });
    if !(r[0] && r[1]) {
        return Ok(JacobiReport(r));
    }
    r[5] = rank_le_one_checked(z, ty, mode, true)?;
    let disc = jacobi_discriminant(z)?;
    r[6] = match mode {
        CheckMode::Exact => {
            let lhs = moved_abel(z)?;
            let d = disc.expand();
            let rhs = z.map(z.ctx(), |p| d.mul(&p.bar()));
            lhs == rhs
        }
        CheckMode::Sampled { trials, seed } => match sampled_self_abel(z, ty, trials, seed)? {
            None => false,
            Some(samples) => {
                let mut ok = true;
                for (s, c) in &samples {
                    ok &= disc.at(s)? == *c;
                }
                ok
            }
        },
    };
    Ok(JacobiReport(r))
}

pub fn is_jacobi<F: SampleField>(z: &Mat<Poly<F>>, ty: &SegreType<F>, mode: CheckMode) -> bool {
    jacobi_report(z, ty, mode).map(|r| r.holds()).unwrap_or(false)
}

/// The four J-matrix conditions.
pub fn jmatrix_report<F: SampleField>(z: &Mat<Poly<F>>, ty: &SegreType<F>, mode: CheckMode) -> Result<JReport> {
    let n = ty.n;
    let mut r = [false; 4];
    if z.rows() != n || z.cols() != n || **z.ctx() != *ty.alg {
        return Ok(JReport(r));
    }
    let last = n as i8 + 1;
    r[0] = slots_within(z, 0, last) && z.entries().iter().all(|p| fibers_in(p, 0, &ty.l));
    r[1] = !z.is_zero();
    if !(r[0] && r[1]) {
        return Ok(JReport(r));
    }
    r[2] = rank_le_one_checked(z, ty, mode, false)?;
    r[3] = match mode {
        CheckMode::Exact => {
            let w = moved_abel(z)?;
            let zb = z.map(z.ctx(), Poly::bar);
            let positive = slot_mask_of(1..=last);
            let (k, (m0, c0)) = zb
                .entries()
                .iter()
                .enumerate()
                .find_map(|(k, p)| p.leading().map(|t| (k, t.clone())))
                .expect("nonzero");
            let inv = c0.inv().expect("nonzero");
            let delta = w.entries()[k]
                .split_by_slots(positive)
                .into_iter()
                .find(|(outside, _)| *outside == m0)
                .map(|(_, d)| d.scale(&inv));
            match delta {
                Some(d) if !d.is_zero() && d.slot_mask() & !positive == 0 => {
                    w == zb.map(zb.ctx(), |p| d.mul(p))
                }
                _ => false,
            }
        }
        CheckMode::Sampled { trials, seed } => match sampled_self_abel(z, ty, trials, seed)? {
            None => false,
            Some(samples) => samples.iter().any(|(_, c)| !c.is_zero()),
        },
    };
    Ok(JReport(r))
}

pub fn is_jmatrix<F: SampleField>(z: &Mat<Poly<F>>, ty: &SegreType<F>, mode: CheckMode) -> bool {
    jmatrix_report(z, ty, mode).map(|r| r.holds()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarId;
    use crate::scalar::Fp;

    const P: u64 = 10007;

    fn fp(v: i64) -> Fp {
        Fp::from_i64(&P, v)
    }

    fn elliptic() -> Arc<Algebra<Fp>> {
        Algebra::hyperelliptic(P, vec![fp(3), fp(2), fp(0), fp(1)])
    }

    fn gen(alg: &Arc<Algebra<Fp>>, g: u8) -> Poly<Fp> {
        Poly::var(alg, VarId::Gen { gen: g, slot: 0 }).unwrap()
    }

    /// Curve type with `L = L(4 inf) = <1, x, y, x^2>` and `X = (1, x)^T (1, x)`.
    fn curve_case() -> (Arc<SegreType<Fp>>, SegreMatrix<Fp>) {
        let alg = elliptic();
        let (one, x, y) = (Poly::one(&alg), gen(&alg, 0), gen(&alg, 1));
        let ty = Arc::new(SegreType::new(&alg, 2, vec![one.clone(), x.clone(), y, x.mul(&x)]).unwrap());
        let u = vec![one, x];
        let m = Mat::outer(&alg, &u, &u);
        (ty.clone(), SegreMatrix::new(m, &ty).unwrap())
    }

    /// Polynomial ring `k[t]`, `L = <1, t, t^2>`, `X = (1, t)^T (1, t)`.
    fn free_case() -> (Arc<SegreType<Fp>>, SegreMatrix<Fp>) {
        let alg = Algebra::free(P, 1).unwrap();
        let (one, t) = (Poly::one(&alg), gen(&alg, 0));
        let ty = Arc::new(SegreType::new(&alg, 2, vec![one.clone(), t.clone(), t.mul(&t)]).unwrap());
        let v = [one.clone(), t.scale(&fp(5)).add(&one)];
        let m = Mat::outer(&alg, &[one, t], &v);
        (ty.clone(), SegreMatrix::new(m, &ty).unwrap())
    }

    fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Mat<Fp> {
        loop {
            let m = Mat::from_fn(&P, n, n, |_, _| Fp::random(&P, rng));
            if !m.det().unwrap().is_zero() {
                return m;
            }
        }
    }

    fn twisted(x: &SegreMatrix<Fp>, rng: &mut ChaCha8Rng) -> SegreMatrix<Fp> {
        let alg = x.ty.alg.clone();
        let phi = Mat::from_scalars(&alg, &random_invertible(rng, x.ty.n));
        let psi = Mat::from_scalars(&alg, &random_invertible(rng, x.ty.n));
        SegreMatrix::new(phi.mul(x.mat()).unwrap().mul(&psi).unwrap(), &x.ty).unwrap()
    }

    #[test]
    fn segre_membership() {
        let (ty, x) = curve_case();
        assert!(is_segre(x.mat(), &ty));
        assert!(!is_segre(&Mat::zeros(&ty.alg, 2, 2), &ty));
        let x0 = gen(&ty.alg, 0);
        let dependent = Mat::outer(&ty.alg, &[x0.clone(), x0.clone()], &[Poly::one(&ty.alg), x0.clone()]);
        assert!(!is_segre(&dependent, &ty));
        let outside_l = Mat::outer(&ty.alg, &[Poly::one(&ty.alg), x0.mul(&x0)], &[Poly::one(&ty.alg), x0]);
        assert!(!is_segre(&outside_l, &ty));
    }

    #[test]
    fn slot_embedding() {
        let (_, x) = curve_case();
        assert_eq!(slot_embed(x.mat(), 0).unwrap(), *x.mat());
        let e = slot_embed(x.mat(), 3).unwrap();
        assert_eq!(e.map(e.ctx(), Poly::bar), slot_embed(x.mat(), -3).unwrap());
        assert!(slot_embed(&e, 1).is_err());
    }

    #[test]
    fn abel_image_is_jacobi_and_j_matrix() {
        for (ty, x) in [curve_case(), free_case()] {
            let z = abstract_abel(&x).unwrap();
            assert!(!z.mat().is_zero());
            let exact = jacobi_report(z.mat(), &ty, CheckMode::Exact).unwrap();
            assert!(exact.holds(), "{exact:?}");
            let sampled = jacobi_report(z.mat(), &ty, CheckMode::Sampled { trials: 3, seed: 1 }).unwrap();
            assert!(sampled.holds(), "{sampled:?}");
            assert!(is_jmatrix(z.mat(), &ty, CheckMode::Exact));
            assert!(is_jmatrix(z.mat(), &ty, CheckMode::Sampled { trials: 3, seed: 2 }));

            let disc = z.discriminant().unwrap();
            assert!(!disc.is_zero());
            assert_eq!(disc.slot_mask() & !slot_mask_of(1..=3), 0);
            let fam = slot_family(x.mat()).unwrap();
            assert_eq!(disc.expand(), discriminant(&fam[1..]).unwrap());
        }
    }

    #[test]
    fn abel_catalog_symmetries() {
        let (_, x) = curve_case();
        let z = abstract_abel(&x).unwrap();
        let zt = abstract_abel(&x.transpose()).unwrap();
        assert_eq!(*zt.mat(), z.mat().transpose());
        assert_eq!(zt.discriminant().unwrap().expand(), z.discriminant().unwrap().expand());
        let swapped = z.mat().try_map(z.mat().ctx(), |p| p.slot_map(&Derangement::swap(0, 3))).unwrap();
        assert_eq!(swapped, z.mat().transpose());
    }

    #[test]
    fn non_jacobi_inputs() {
        let (ty, x) = curve_case();
        let zero = Mat::zeros(&ty.alg, 2, 2);
        assert!(!is_jacobi(&zero, &ty, CheckMode::Exact));
        assert!(!is_jmatrix(&zero, &ty, CheckMode::Exact));
        let z = abstract_abel(&x).unwrap();
        let mut bad = z.mat().clone();
        bad.set(1, 0, bad.get(1, 0).add(&gen(&ty.alg, 0)));
        assert!(!is_jacobi(&bad, &ty, CheckMode::Exact));
        assert!(!is_jacobi(&bad, &ty, CheckMode::Sampled { trials: 2, seed: 3 }));
        assert!(!is_jmatrix(&bad, &ty, CheckMode::Exact));
        assert!(!is_jmatrix(&bad, &ty, CheckMode::Sampled { trials: 2, seed: 3 }));
    }

    #[test]
    fn equivalence_and_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (ty, x) in [curve_case(), free_case()] {
            let y = twisted(&x, &mut rng);
            assert!(k_equivalent(&x, &y).unwrap());
            assert!(k_equivalent(&y, &x).unwrap());
            let z = abstract_abel(&x).unwrap();
            assert!(proportional(abstract_abel(&y).unwrap().mat(), z.mat()));
            let (s, _) = nondegenerate_points(&z, &mut rng, 200).unwrap();
            let nx = normalize(&x, &s).unwrap();
            assert!(is_normalized(nx.mat(), &s));
            assert!(!is_normalized(x.mat(), &s));
            assert_eq!(normalize(&nx, &s).unwrap().mat(), nx.mat());
            assert_eq!(normalize(&y, &s).unwrap().mat(), nx.mat());
            let mut permuted = s.points().to_vec();
            permuted.swap(0, 1);
            assert!(!is_normalized(nx.mat(), &SlotPoints::new(permuted)));

            let with_evals = |m: &Mat<Poly<Fp>>| {
                let mut fam = vec![m.clone()];
                fam.extend(s.points().iter().map(|pt| Mat::from_scalars(&ty.alg, &evaluate_slot0(m, pt))));
                abeliant(&fam).unwrap()
            };
            let selfsim = with_evals(x.mat());
            assert!(proportional(&with_evals(&selfsim), &selfsim));
            assert_eq!(selfsim, z.specialize(&s));
        }
    }

    #[test]
    fn inequivalent_pair() {
        let (ty, x) = curve_case();
        let alg = ty.alg.clone();
        let (x0, y0) = (gen(&alg, 0), gen(&alg, 1));
        // the class of a point (a, b): rows (x - a, y - b) and (y + b, (y^2 - b^2)/(x - a))
        let (a, b) = (fp(1), fp(6).sqrt().unwrap());
        let xa = x0.sub(&Poly::constant(&alg, a));
        let q = x0.mul(&x0).add(&x0.scale(&a)).add(&Poly::constant(&alg, a.mul(&a).add(&fp(2))));
        let rows = vec![
            vec![xa.clone(), y0.sub(&Poly::constant(&alg, b))],
            vec![y0.add(&Poly::constant(&alg, b)), q],
        ];
        let m = Mat::from_rows(&alg, rows).unwrap();
        assert!(m.rank_leq_one());
        let other = SegreMatrix::new(m, &ty).unwrap();
        assert!(!k_equivalent(&x, &other).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let zx = abstract_abel(&x).unwrap();
        let zo = abstract_abel(&other).unwrap();
        let s = loop {
            let (s, _) = nondegenerate_points(&zx, &mut rng, 200).unwrap();
            if !zo.discriminant().unwrap().at(&s).unwrap().is_zero() {
                break s;
            }
        };
        assert!(!k_equivalent_at(&x, &other, &s).unwrap());
        assert!(k_equivalent_at(&x, &x.transpose(), &s).unwrap());
    }

    #[test]
    fn jacobi_specialization_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (_, x) = curve_case();
        let z = abstract_abel(&x).unwrap();
        let (s1, d1) = nondegenerate_points(&z, &mut rng, 200).unwrap();
        let (s2, _) = nondegenerate_points(&z, &mut rng, 200).unwrap();
        let x1 = specialize_jacobi(&z, &s1).unwrap();
        let x2 = specialize_jacobi(&z, &s2).unwrap();
        let back = abstract_abel(&x1).unwrap();
        assert!(proportional(back.mat(), z.mat()));
        assert!(k_equivalent(&x1, &x2).unwrap());
        assert!(k_equivalent(&x1, &x).unwrap());
        assert!(!d1.is_zero());
    }

    #[test]
    fn degenerate_points_are_rejected() {
        let (ty, x) = curve_case();
        let z = abstract_abel(&x).unwrap();
        let pt = ty.alg.point(vec![fp(1), Fp::from_i64(&P, 6).sqrt().unwrap()]).unwrap();
        let s = SlotPoints::new(vec![pt.clone(), pt.clone(), pt]);
        assert_eq!(z.discriminant().unwrap().at(&s).unwrap(), fp(0));
        assert_eq!(specialize_jacobi(&z, &s).unwrap_err(), Error::DegenerateSpecialization);
        assert_eq!(normalize(&x, &s).unwrap_err(), Error::DegenerateSpecialization);
    }

    #[test]
    fn proportional_by_coefficients() {
        let (ty, x) = curve_case();
        let m = x.mat();
        assert!(proportional(m, &m.scale(&Poly::constant(&ty.alg, fp(9)))));
        assert!(!proportional(m, &m.scale(&gen(&ty.alg, 0))));
        assert!(!proportional(m, &Mat::zeros(&ty.alg, 2, 2)));
        assert!(proportional(&Mat::zeros(&ty.alg, 2, 2), &Mat::zeros(&ty.alg, 2, 2)));
    }
}
