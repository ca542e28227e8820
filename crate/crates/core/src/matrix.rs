//! Dense matrices over a commutative ring.

use std::fmt;

use crate::algebra::{Poly, PolySpan};
use crate::error::{Error, Result};
use crate::scalar::{ExactDiv, Field, Ring};

#[derive(Clone, PartialEq)]
pub struct Mat<R: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
    ctx: R::Ctx,
}

impl<R: Ring> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// All permutations of `0..n` with their sign (`true` for odd).
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), odd));
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            let inversions = prefix.iter().filter(|&&p| p > c).count();
            used[c] = true;
            prefix.push(c);
            rec(prefix, used, odd ^ (inversions % 2 == 1), out);
            prefix.pop();
            used[c] = false;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], false, &mut out);
    out
}

impl<R: Ring> Mat<R> {
    pub fn from_rows(ctx: &R::Ctx, rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect(), ctx: ctx.clone() })
    }

    pub fn from_fn(ctx: &R::Ctx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data, ctx: ctx.clone() }
    }

    pub fn zeros(ctx: &R::Ctx, rows: usize, cols: usize) -> Self {
        Mat::from_fn(ctx, rows, cols, |_, _| R::zero(ctx))
    }

    pub fn identity(ctx: &R::Ctx, n: usize) -> Self {
        Mat::from_fn(ctx, n, n, |i, j| if i == j { R::one(ctx) } else { R::zero(ctx) })
    }

    pub fn diag(ctx: &R::Ctx, d: &[R]) -> Self {
        Mat::from_fn(ctx, d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { R::zero(ctx) })
    }

    /// Column vector times row vector.
    pub fn outer(ctx: &R::Ctx, u: &[R], v: &[R]) -> Self {
        Mat::from_fn(ctx, u.len(), v.len(), |i, j| u[i].mul(&v[j]))
    }

    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), ctx: ctx.clone() }
    }

    pub fn try_map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> Result<S>) -> Result<Mat<S>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<S>>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data, ctx: ctx.clone() })
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect();
        Ok(Mat { data, ..self.clone_shape() })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect();
        Ok(Mat { data, ..self.clone_shape() })
    }

    fn clone_shape(&self) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: Vec::new(), ctx: self.ctx.clone() }
    }

    pub fn neg(&self) -> Self {
        Mat { data: self.data.iter().map(R::neg).collect(), ..self.clone_shape() }
    }

    pub fn scale(&self, c: &R) -> Self {
        Mat { data: self.data.iter().map(|a| a.mul(c)).collect(), ..self.clone_shape() }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Mat::from_fn(&self.ctx, self.rows, rhs.cols, |i, j| {
            let mut acc = R::zero(&self.ctx);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), rhs.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        }))
    }

    pub fn trace(&self) -> Result<R> {
        self.require_square()?;
        Ok((0..self.rows).fold(R::zero(&self.ctx), |acc, i| acc.add(self.get(i, i))))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!("{}x{} is not square", self.rows, self.cols)))
        }
    }

    /// Determinant by Laplace expansion along rows with memoisation over
    /// column subsets; uses only ring operations.
    pub fn det(&self) -> Result<R> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(R::one(&self.ctx));
        }
        assert!(n <= 20, "determinant too large for subset expansion");
        let mut dp: Vec<Option<R>> = vec![None; 1 << n];
        dp[0] = Some(R::one(&self.ctx));
        for mask in 0..(1usize << n) {
            let Some(val) = dp[mask].take() else { continue };
            let r = mask.count_ones() as usize;
            if r == n {
                dp[mask] = Some(val);
                continue;
            }
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let a = self.get(r, c);
                if a.is_zero() {
                    continue;
                }
                let mut term = val.mul(a);
                if (mask >> (c + 1)).count_ones() % 2 == 1 {
                    term = term.neg();
                }
                let slot = &mut dp[mask | (1 << c)];
                *slot = Some(match slot.take() {
                    Some(prev) => prev.add(&term),
                    None => term,
                });
            }
        }
        Ok(dp[(1 << n) - 1].take().unwrap_or_else(|| R::zero(&self.ctx)))
    }

    /// Delete row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(&self.ctx, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Classical adjoint: `adj(A) A = A adj(A) = det(A) I`.
    pub fn adjugate(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        if n == 1 {
            return Ok(Mat::identity(&self.ctx, 1));
        }
        let mut out = Mat::zeros(&self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                let d = self.minor(i, j).det()?;
                out.set(j, i, if (i + j) % 2 == 1 { d.neg() } else { d });
            }
        }
        Ok(out)
    }

    /// Kronecker product: block `(i, j)` is `self[i][j] * rhs`.
    pub fn kronecker(&self, rhs: &Self) -> Self {
        let (r, s) = (rhs.rows, rhs.cols);
        Mat::from_fn(&self.ctx, self.rows * r, self.cols * s, |a, b| {
            self.get(a / r, b / s).mul(rhs.get(a % r, b % s))
        })
    }

    /// Reorder rows and columns: entry `(i, j)` of the result is
    /// `self[rows[i]][cols[j]]`; both must be permutations.
    pub fn apply_perm(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let is_perm = |p: &[usize], n: usize| {
            let mut seen = vec![false; n];
            p.len() == n && p.iter().all(|&k| k < n && !std::mem::replace(&mut seen[k], true))
        };
        if !is_perm(rows, self.rows) || !is_perm(cols, self.cols) {
            return Err(Error::Dimension("not a permutation of the index set".into()));
        }
        Ok(self.submatrix(rows, cols))
    }

    /// All 2 by 2 minors vanish.
    pub fn rank_leq_one(&self) -> bool {
        for i1 in 0..self.rows {
            for i2 in i1 + 1..self.rows {
                for j1 in 0..self.cols {
                    for j2 in j1 + 1..self.cols {
                        let a = self.get(i1, j1).mul(self.get(i2, j2));
                        let b = self.get(i1, j2).mul(self.get(i2, j1));
                        if a != b {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Sum of a list of equally sized matrices.
    pub fn sum<'a>(mats: impl IntoIterator<Item = &'a Mat<R>>) -> Result<Mat<R>>
    where
        R: 'a,
    {
        let mut it = mats.into_iter();
        let first = it.next().ok_or_else(|| Error::Dimension("empty sum".into()))?.clone();
        it.try_fold(first, |acc, m| acc.add(m))
    }
}

impl<R: ExactDiv> Mat<R> {
    /// Fraction-free Gaussian elimination.
    pub fn det_bareiss(&self) -> Result<R> {
        self.require_square()?;
        let n = self.rows;
        let one = R::one(&self.ctx);
        if n == 0 {
            return Ok(one);
        }
        let mut m = self.to_rows();
        let mut negate = false;
        let mut prev = one;
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(R::zero(&self.ctx)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num.div_exact(&prev).ok_or(Error::DivisionByZero)?;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if negate { d.neg() } else { d })
    }
}

impl<F: Field> Mat<F> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(p, r);
            let inv = m[r][c].inv().expect("nonzero pivot");
            for j in 0..self.cols {
                m[r][j] = m[r][j].mul(&inv);
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..self.cols {
                        let v = m[i][j].sub(&f.mul(&m[r][j]));
                        m[i][j] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Mat::from_rows(&self.ctx, m).expect("rectangular"), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![F::zero(&self.ctx); self.cols];
                v[fc] = F::one(&self.ctx);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(row, fc).neg();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Mat<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Mat::from_fn(&self.ctx, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one(&self.ctx)
            } else {
                F::zero(&self.ctx)
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(&self.ctx, n, n, |i, j| r.get(i, j + n).clone()))
    }
}

impl<F: Field> Mat<Poly<F>> {
    /// Entries of each row, and of each column, are `k`-linearly independent.
    pub fn k_general(&self) -> bool {
        let independent = |v: &[Poly<F>]| {
            let mut span = PolySpan::new();
            v.iter().all(|p| span.insert(p))
        };
        (0..self.rows).all(|i| independent(self.row(i))) && (0..self.cols).all(|j| independent(&self.col(j)))
    }

    /// Lift a scalar matrix to constant polynomials.
    pub fn from_scalars(alg: &std::sync::Arc<crate::algebra::Algebra<F>>, m: &Mat<F>) -> Self {
        m.map(alg, |c| Poly::constant(alg, c.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn int_mat(n: usize, v: &[i64]) -> Mat<BigInt> {
        Mat::from_fn(&(), n, n, |i, j| BigInt::from(v[i * n + j]))
    }

    /// Leibniz formula as an independent oracle.
    fn leibniz(m: &Mat<BigInt>) -> BigInt {
        let mut acc = BigInt::from(0);
        for (p, odd) in permutations(m.rows()) {
            let mut t = BigInt::from(1);
            for (i, &j) in p.iter().enumerate() {
                t *= m.get(i, j);
            }
            if odd {
                acc -= t;
            } else {
                acc += t;
            }
        }
        acc
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|p| p.1).count(), 12);
        for (p, odd) in perms {
            let inv = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(odd, inv % 2 == 1);
        }
    }

    #[test]
    fn small_determinants() {
        assert_eq!(int_mat(2, &[1, 2, 3, 4]).det().unwrap(), BigInt::from(-2));
        assert_eq!(int_mat(3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]).det_bareiss().unwrap(), BigInt::from(6));
        assert_eq!(int_mat(3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]).det_bareiss().unwrap(), BigInt::from(-1));
        assert!(Mat::<Fp>::zeros(&7, 2, 3).det().is_err());
    }

    #[test]
    fn kronecker_blocks() {
        let a = int_mat(2, &[1, 2, 3, 4]);
        let b = int_mat(2, &[0, 1, 1, 0]);
        let k = a.kronecker(&b);
        assert_eq!(k.get(0, 1), &BigInt::from(1));
        assert_eq!(k.get(2, 3), &BigInt::from(4));
        assert_eq!(k.get(3, 0), &BigInt::from(3));
    }

    #[test]
    fn field_linear_algebra() {
        let p = 7;
        let m = Mat::from_fn(&p, 3, 3, |i, j| Fp::new((i * 3 + j) as i64, p));
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for i in 0..3 {
            let s = (0..3).fold(Fp::new(0, p), |acc, j| acc.add(&m.get(i, j).mul(&ns[0][j])));
            assert!(s.is_zero());
        }
        let inv_src = Mat::from_fn(&p, 2, 2, |i, j| Fp::new([2, 1, 1, 1][i * 2 + j], p));
        let inv = inv_src.inverse().unwrap();
        assert_eq!(inv.mul(&inv_src).unwrap(), Mat::identity(&p, 2));
        assert!(m.inverse().is_none());
    }

    proptest! {
        #[test]
        fn determinant_algorithms_agree(n in 1usize..=5, v in proptest::collection::vec(-9i64..10, 25)) {
            let m = int_mat(n, &v);
            let d = m.det().unwrap();
            prop_assert_eq!(&d, &m.det_bareiss().unwrap());
            prop_assert_eq!(&d, &leibniz(&m));
        }

        #[test]
        fn adjugate_identity(n in 1usize..=4, v in proptest::collection::vec(-9i64..10, 16)) {
            let m = int_mat(n, &v);
            let adj = m.adjugate().unwrap();
            let d = m.det().unwrap();
            let di = Mat::diag(&(), &vec![d; n]);
            prop_assert_eq!(&adj.mul(&m).unwrap(), &di);
            prop_assert_eq!(&m.mul(&adj).unwrap(), &di);
        }

        #[test]
        fn kronecker_mixed_product(a in proptest::collection::vec(-5i64..6, 4), b in proptest::collection::vec(-5i64..6, 4),
                                   c in proptest::collection::vec(-5i64..6, 4), d in proptest::collection::vec(-5i64..6, 4)) {
            let (a, b, c, d) = (int_mat(2, &a), int_mat(2, &b), int_mat(2, &c), int_mat(2, &d));
            let lhs = a.kronecker(&b).mul(&c.kronecker(&d)).unwrap();
            let rhs = a.mul(&c).unwrap().kronecker(&b.mul(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn perm_then_transpose(v in proptest::collection::vec(-5i64..6, 9), s in 0usize..6, t in 0usize..6) {
            let m = int_mat(3, &v);
            let perms = permutations(3);
            let (p, q) = (&perms[s].0, &perms[t].0);
            prop_assert_eq!(m.transpose().apply_perm(p, q).unwrap(), m.apply_perm(q, p).unwrap().transpose());
            let det_sign = if perms[s].1 ^ perms[t].1 { -BigInt::from(1) } else { BigInt::from(1) };
            prop_assert_eq!(m.apply_perm(p, q).unwrap().det().unwrap(), det_sign * m.det().unwrap());
        }
    }
}
