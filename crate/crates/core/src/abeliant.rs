//! The abeliant of a family `X^(0), ..., X^(n+1)` of `n x n` matrices and the
//! associated discriminant.
//!
//! Several independent algorithms are provided so that they can be checked
//! against each other:
//!
//! * [`abeliant_def`] extracts coefficients of a trace of adjugates in
//!   auxiliary variables `s_a`, `t_b`;
//! * [`abeliant_expand`] is the signed sum over four permutations;
//! * [`abeliant`] contracts that sum through mixed adjugates and is the one
//!   used for large polynomial entries;
//! * [`abeliant_factored`] and [`rank1_entry`] handle families whose members
//!   `1..=n+1` have rank at most one.
//!
//! Entry indices in this API are 0-based: entry `(i, j)` is controlled by the
//! family members `i + 1` and `j + 1`.

use std::ops::Deref;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{Algebra, Derangement, Monomial, Poly, VarId, MAX_AUX};
use crate::error::{Error, Result};
use crate::matrix::{permutations, Mat};
use crate::scalar::{Field, Ring};

/// `n + 2` square matrices of a common size `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Family<R: Ring> {
    mats: Vec<Mat<R>>,
}

impl<R: Ring> Family<R> {
    pub fn new(mats: Vec<Mat<R>>) -> Result<Self> {
        check_family(&mats, 2)?;
        Ok(Family { mats })
    }

    pub fn n(&self) -> usize {
        self.mats[0].rows()
    }

    pub fn into_inner(self) -> Vec<Mat<R>> {
        self.mats
    }
}

impl<R: Ring> Deref for Family<R> {
    type Target = [Mat<R>];
    fn deref(&self) -> &[Mat<R>] {
        &self.mats
    }
}

/// Checks that `mats` holds `n + extra` square `n x n` matrices; returns `n`.
fn check_family<R: Ring>(mats: &[Mat<R>], extra: usize) -> Result<usize> {
    let n = mats.first().map(Mat::rows).ok_or_else(|| Error::Dimension("empty family".into()))?;
    if n == 0 {
        return Err(Error::Dimension("matrices must be at least 1x1".into()));
    }
    if mats.len() != n + extra {
        return Err(Error::Dimension(format!(
            "family of {}x{} matrices needs {} members, got {}",
            n,
            n,
            n + extra,
            mats.len()
        )));
    }
    if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::Dimension("family members differ in size or are not square".into()));
    }
    Ok(n)
}

/// Family with member `l` replaced by member `sigma(l)`.
pub fn reindex<R: Ring>(family: &[Mat<R>], sigma: &Derangement) -> Vec<Mat<R>> {
    (0..family.len()).map(|l| family[sigma.apply(l as i8) as usize].clone()).collect()
}

/// Coefficient extraction from
/// `trace(X^0 adj(sum_b t_b X^b) X^(n+1) adj(sum_a s_a X^a))`.
pub fn abeliant_def<F: Field>(family: &[Mat<Poly<F>>]) -> Result<Mat<Poly<F>>> {
    let n = check_family(family, 2)?;
    if n > MAX_AUX {
        return Err(Error::Capacity(format!("at most {MAX_AUX} auxiliary variables")));
    }
    let alg = family[0].ctx().clone();
    let weighted = |var: fn(u8) -> VarId| -> Result<Mat<Poly<F>>> {
        let mut acc = Mat::zeros(&alg, n, n);
        for a in 1..=n {
            let v = Poly::var(&alg, var(a as u8))?;
            acc = acc.add(&family[a].scale(&v))?;
        }
        Ok(acc)
    };
    let s_sum = weighted(VarId::S)?;
    let t_sum = weighted(VarId::T)?;
    let prod = family[0].mul(&t_sum.adjugate()?)?.mul(&family[n + 1])?.mul(&s_sum.adjugate()?)?;
    let tr = prod.trace()?;
    let aux = |var: fn(u8) -> VarId, skip: usize| {
        (1..=n).filter(|&a| a != skip).fold(Monomial::ONE, |m, a| m.mul(&Monomial::var(var(a as u8), 1).unwrap()))
    };
    Ok(Mat::from_fn(&alg, n, n, |i, j| tr.aux_coefficient(&aux(VarId::S, i + 1).mul(&aux(VarId::T, j + 1)))))
}

/// [`abeliant_def`] for scalar families.
pub fn abeliant_def_scalar<F: Field>(family: &[Mat<F>]) -> Result<Mat<F>> {
    check_family(family, 2)?;
    let ctx = family[0].ctx().clone();
    let alg: Arc<Algebra<F>> = Algebra::scalars(ctx.clone());
    let lifted: Vec<Mat<Poly<F>>> = family.iter().map(|m| Mat::from_scalars(&alg, m)).collect();
    let z = abeliant_def(&lifted)?;
    Ok(z.map(&ctx, |p| p.constant_value().expect("no generators")))
}

/// Largest size accepted by [`abeliant_expand`].
pub const EXPAND_MAX_N: usize = 4;

/// Signed sum over four permutations `sigma, phi, tau, psi` of `0..n`.
pub fn abeliant_expand<R: Ring>(family: &[Mat<R>]) -> Result<Mat<R>> {
    let n = check_family(family, 2)?;
    if n > EXPAND_MAX_N {
        return Err(Error::Capacity(format!("the permutation sum is limited to n <= {EXPAND_MAX_N}")));
    }
    let ctx = family[0].ctx().clone();
    let perms = permutations(n);
    let x0 = &family[0];
    let xl = &family[n + 1];
    Ok(Mat::from_fn(&ctx, n, n, |i, j| {
        let mut acc = R::zero(&ctx);
        for (sigma, s_odd) in &perms {
            for (phi, f_odd) in &perms {
                let mut left = R::one(&ctx);
                for b in (0..n).filter(|&b| b != j) {
                    left = left.mul(family[b + 1].get(sigma[b], phi[b]));
                }
                if left.is_zero() {
                    continue;
                }
                for (tau, t_odd) in &perms {
                    let mid = left.mul(x0.get(tau[i], phi[j]));
                    if mid.is_zero() {
                        continue;
                    }
                    for (psi, p_odd) in &perms {
                        let mut term = mid.mul(xl.get(sigma[j], psi[i]));
                        for a in (0..n).filter(|&a| a != i) {
                            term = term.mul(family[a + 1].get(tau[a], psi[a]));
                        }
                        if s_odd ^ f_odd ^ t_odd ^ p_odd {
                            acc = acc.sub(&term);
                        } else {
                            acc = acc.add(&term);
                        }
                    }
                }
            }
        }
        acc
    }))
}

/// Mixed adjugates: `out[i]` is the coefficient of `prod_{a != i+1} s_a` in
/// `adj(sum_a s_a X^a)`, for `a` in `1..=n`.
fn mixed_adjugates<R: Ring>(family: &[Mat<R>], n: usize) -> Vec<Mat<R>> {
    let ctx = family[0].ctx().clone();
    if n == 1 {
        return vec![Mat::identity(&ctx, 1)];
    }
    let perms = permutations(n);
    let sub_perms = permutations(n - 1);
    (0..n)
        .map(|skip| {
            let members: Vec<usize> = (1..=n).filter(|&a| a != skip + 1).collect();
            Mat::from_fn(&ctx, n, n, |e, f| {
                let cols: Vec<usize> = (0..n).filter(|&c| c != e).collect();
                let mut acc = R::zero(&ctx);
                for (pi, odd) in perms.iter().filter(|(p, _)| p[e] == f) {
                    for (theta, _) in &sub_perms {
                        let mut term = R::one(&ctx);
                        for (k, &c) in cols.iter().enumerate() {
                            term = term.mul(family[members[theta[k]]].get(pi[c], c));
                            if term.is_zero() {
                                break;
                            }
                        }
                        if term.is_zero() {
                            continue;
                        }
                        acc = if *odd { acc.sub(&term) } else { acc.add(&term) };
                    }
                }
                acc
            })
        })
        .collect()
}

fn contracted<R: Ring>(family: &[Mat<R>], parallel: bool) -> Result<Mat<R>> {
    let n = check_family(family, 2)?;
    let ctx = family[0].ctx().clone();
    let ys = mixed_adjugates(family, n);
    let a: Vec<Mat<R>> = ys.iter().map(|y| family[0].mul(y)).collect::<Result<_>>()?;
    let b: Vec<Mat<R>> = ys.iter().map(|y| family[n + 1].mul(y)).collect::<Result<_>>()?;
    let entry = |idx: usize| {
        let (i, j) = (idx / n, idx % n);
        let mut acc = R::zero(&ctx);
        for f in 0..n {
            for h in 0..n {
                let (p, q) = (a[j].get(f, h), b[i].get(h, f));
                if !p.is_zero() && !q.is_zero() {
                    acc = acc.add(&p.mul(q));
                }
            }
        }
        acc
    };
    let data: Vec<R> = if parallel {
        (0..n * n).into_par_iter().map(entry).collect()
    } else {
        (0..n * n).map(entry).collect()
    };
    let mut it = data.into_iter();
    Ok(Mat::from_fn(&ctx, n, n, |_, _| it.next().unwrap()))
}

/// Abeliant via `Z_ij = trace(X^0 Y^(j) X^(n+1) Y^(i))` with mixed adjugates
/// `Y`.
pub fn abeliant<R: Ring>(family: &[Mat<R>]) -> Result<Mat<R>> {
    contracted(family, false)
}

/// [`abeliant`] with entries computed in parallel.
pub fn abeliant_par<R: Ring>(family: &[Mat<R>]) -> Result<Mat<R>> {
    contracted(family, true)
}

fn diag_of_vec<R: Ring>(ctx: &R::Ctx, m: &Mat<R>) -> Mat<R> {
    Mat::diag(ctx, m.entries())
}

/// Abeliant of `X^0, u^1 v^1, ..., u^(n+1) v^(n+1)` in closed form, together
/// with the discriminant of the rank-one members.
///
/// `us[k]` and `vs[k]` are the column and row vectors of member `k + 1`.
pub fn abeliant_factored<R: Ring>(x0: &Mat<R>, us: &[Vec<R>], vs: &[Vec<R>]) -> Result<(Mat<R>, R)> {
    let n = x0.rows();
    if !x0.is_square() || us.len() != n + 1 || vs.len() != n + 1 {
        return Err(Error::Dimension("need n+1 column and row vectors".into()));
    }
    if us.iter().chain(vs).any(|v| v.len() != n) {
        return Err(Error::Dimension("vector length differs from n".into()));
    }
    let ctx = x0.ctx().clone();
    let u = Mat::from_fn(&ctx, n, n, |i, k| us[k][i].clone());
    let v = Mat::from_fn(&ctx, n, n, |k, j| vs[k][j].clone());
    let u_adj = u.adjugate()?;
    let v_adj = v.adjugate()?;
    let row_last = Mat::from_fn(&ctx, 1, n, |_, j| vs[n][j].clone());
    let col_last = Mat::from_fn(&ctx, n, 1, |i, _| us[n][i].clone());
    let m = diag_of_vec(&ctx, &row_last.mul(&v_adj)?);
    let l = diag_of_vec(&ctx, &u_adj.mul(&col_last)?);
    let mu = m.mul(&u_adj)?;
    let vl = v_adj.mul(&l)?;
    let z = mu.mul(x0)?.mul(&vl)?;
    let delta = mu.det()?.pow(2).mul(&vl.det()?.pow(2));
    Ok((z, delta))
}

/// Entry `(i, j)` of the abeliant of the rank-one family `u^l v^l`,
/// `l = 0..=n+1`, as a product of four determinants.
pub fn rank1_entry<R: Ring>(us: &[Vec<R>], vs: &[Vec<R>], i: usize, j: usize) -> Result<R> {
    let n = us.first().map_or(0, Vec::len);
    if n == 0 || us.len() != n + 2 || vs.len() != n + 2 || i >= n || j >= n {
        return Err(Error::Dimension("need n+2 vectors of length n and indices below n".into()));
    }
    let ctx = us[0][0].ctx();
    let rows_det = |skip: [usize; 2]| {
        let ls: Vec<usize> = (0..n + 2).filter(|l| !skip.contains(l)).collect();
        Mat::from_fn(&ctx, n, n, |r, c| vs[ls[r]][c].clone()).det()
    };
    let cols_det = |skip: [usize; 2]| {
        let ls: Vec<usize> = (0..n + 2).filter(|l| !skip.contains(l)).collect();
        Mat::from_fn(&ctx, n, n, |r, c| us[ls[c]][r].clone()).det()
    };
    let (fi, fj) = (i + 1, j + 1);
    Ok(rows_det([0, fi])?.mul(&cols_det([fi, n + 1])?).mul(&rows_det([fj, n + 1])?).mul(&cols_det([0, fj])?))
}

/// The determinants entering the discriminant of `X^1, ..., X^(n+1)`, with
/// their exponents: `det(sum_{l<=n} X^l)` to the power `2n - 2` and
/// `det(sum_{l != i} X^l)` squared for each `i` in `1..=n`.
pub fn discriminant_factors<R: Ring>(members: &[Mat<R>]) -> Result<Vec<(R, u32)>> {
    let n = check_family(members, 1)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push((Mat::sum(&members[..n])?.det()?, (2 * n - 2) as u32));
    for i in 0..n {
        let rest: Vec<&Mat<R>> = members.iter().enumerate().filter(|(k, _)| *k != i).map(|p| p.1).collect();
        out.push((Mat::sum(rest)?.det()?, 2));
    }
    Ok(out)
}

/// Discriminant of `X^1, ..., X^(n+1)` (pass exactly `n + 1` matrices).
pub fn discriminant<R: Ring>(members: &[Mat<R>]) -> Result<R> {
    let factors = discriminant_factors(members)?;
    let ctx = members[0].ctx();
    Ok(factors.iter().fold(R::one(ctx), |acc, (f, e)| acc.mul(&f.pow(*e))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, SampleField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_family(n: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Mat<Fp>> {
        (0..n + 2).map(|_| Mat::from_fn(&p, n, n, |_, _| Fp::random(&p, rng))).collect()
    }

    fn random_vec(n: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
        (0..n).map(|_| Fp::random(&p, rng)).collect()
    }

    #[test]
    fn identity_family_trace_coefficient() {
        let p = 1009;
        let alg = Algebra::<Fp>::scalars(p);
        let fam: Vec<Mat<Poly<Fp>>> = (0..4).map(|_| Mat::identity(&alg, 2)).collect();
        let z = abeliant_def(&fam).unwrap();
        // All four entries are the coefficient 2 of a single product s_a t_b.
        for e in z.entries() {
            assert_eq!(e.constant_value().unwrap(), Fp::new(2, p));
        }
    }

    #[test]
    fn algorithms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=3 {
            for _ in 0..5 {
                let fam = random_family(n, 7, &mut rng);
                let d = abeliant_def_scalar(&fam).unwrap();
                assert_eq!(d, abeliant_expand(&fam).unwrap(), "n = {n}");
                assert_eq!(d, abeliant(&fam).unwrap(), "n = {n}");
                assert_eq!(d, abeliant_par(&fam).unwrap(), "n = {n}");
            }
        }
    }

    #[test]
    fn rank_one_closed_forms() {
        let p = 1009;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=4 {
            let us: Vec<Vec<Fp>> = (0..n + 2).map(|_| random_vec(n, p, &mut rng)).collect();
            let vs: Vec<Vec<Fp>> = (0..n + 2).map(|_| random_vec(n, p, &mut rng)).collect();
            let fam: Vec<Mat<Fp>> = (0..n + 2).map(|l| Mat::outer(&p, &us[l], &vs[l])).collect();
            let z = abeliant(&fam).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(z.get(i, j), &rank1_entry(&us, &vs, i, j).unwrap(), "n={n} ({i},{j})");
                }
            }
            let x0 = Mat::from_fn(&p, n, n, |_, _| Fp::random(&p, &mut rng));
            let mut fam2 = fam.clone();
            fam2[0] = x0.clone();
            let (zf, delta) = abeliant_factored(&x0, &us[1..], &vs[1..]).unwrap();
            assert_eq!(zf, abeliant(&fam2).unwrap());
            assert_eq!(delta, discriminant(&fam2[1..]).unwrap());
        }
    }

    #[test]
    fn family_shape_errors() {
        let p = 7;
        let fam: Vec<Mat<Fp>> = (0..3).map(|_| Mat::identity(&p, 2)).collect();
        assert!(matches!(abeliant(&fam), Err(Error::Dimension(_))));
        assert!(Family::new(fam).is_err());
        let fam: Vec<Mat<Fp>> = vec![Mat::identity(&p, 2), Mat::identity(&p, 2), Mat::identity(&p, 3), Mat::identity(&p, 2)];
        assert!(abeliant_expand(&fam).is_err());
        let big: Vec<Mat<Fp>> = (0..7).map(|_| Mat::identity(&p, 5)).collect();
        assert!(matches!(abeliant_expand(&big), Err(Error::Capacity(_))));
    }
}
