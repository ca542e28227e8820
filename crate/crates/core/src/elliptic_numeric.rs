//! Weierstrass functions of a complex lattice in double precision, and
//! numerical residuals of determinant and abeliant identities built from
//! them.

use num_complex::Complex64 as C;

use crate::abeliant::abeliant_def_scalar;
use crate::error::{Error, Result};
use crate::matrix::Mat;

/// Relative distance to the lattice below which `z` counts as a lattice point.
const POLE_TOL: f64 = 1e-9;
const CAUCHY_NODES: usize = 64;

/// `Z w1 + Z w2`, evaluated through a product over `|a|, |b| <= N`.
#[derive(Clone, Debug)]
pub struct Lattice {
    w1: C,
    w2: C,
    n: usize,
    points: Vec<C>,
    min_norm: f64,
    /// Full Eisenstein sums `G4`, `G6`.
    g4: C,
    g6: C,
    /// `G4 - (truncated sum)` and likewise for `G6`.
    tail4: C,
    tail6: C,
}

/// Which function [`Lattice::weierstrass_eval`] computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weierstrass {
    Sigma,
    /// The `m`-th derivative of `wp`; `Wp(0)` is `wp` itself.
    Wp(u32),
}

impl Lattice {
    pub fn new(w1: C, w2: C, n: usize) -> Result<Self> {
        if n < 10 {
            return Err(Error::Precondition("truncation radius must be at least 10".into()));
        }
        let tau = w2 / w1;
        if !(tau.im > 1e-12) || !tau.is_finite() {
            return Err(Error::Precondition("periods must satisfy Im(w2 / w1) > 0".into()));
        }
        let r = n as i64;
        let mut points = Vec::with_capacity((2 * n + 1).pow(2) - 1);
        for a in -r..=r {
            for b in -r..=r {
                if (a, b) != (0, 0) {
                    points.push(w1 * a as f64 + w2 * b as f64);
                }
            }
        }
        let min_norm = points.iter().map(|w| w.norm()).fold(f64::INFINITY, f64::min);
        let s4: C = points.iter().map(|w| w.powi(-4)).sum();
        let s6: C = points.iter().map(|w| w.powi(-6)).sum();
        let (g4, g6) = eisenstein(w1, w2);
        Ok(Lattice { w1, w2, n, points, min_norm, g4, g6, tail4: g4 - s4, tail6: g6 - s6 })
    }

    pub fn periods(&self) -> (C, C) {
        (self.w1, self.w2)
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    /// Length of a shortest nonzero lattice vector.
    pub fn min_norm(&self) -> f64 {
        self.min_norm
    }

    pub fn g2(&self) -> C {
        self.g4 * 60.0
    }

    pub fn g3(&self) -> C {
        self.g6 * 140.0
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn lattice_distance(&self, z: C) -> f64 {
        let (a, b) = self.coordinates(z);
        let mut best = f64::INFINITY;
        for da in -1..=1 {
            for db in -1..=1 {
                let w = self.w1 * (a.round() + da as f64) + self.w2 * (b.round() + db as f64);
                best = best.min((z - w).norm());
            }
        }
        best
    }

    /// Real coordinates of `z` in the basis `w1, w2`.
    fn coordinates(&self, z: C) -> (f64, f64) {
        let det = self.w1.re * self.w2.im - self.w1.im * self.w2.re;
        let a = (z.re * self.w2.im - z.im * self.w2.re) / det;
        let b = (self.w1.re * z.im - self.w1.im * z.re) / det;
        (a, b)
    }

    fn check_pole(&self, z: C) -> Result<()> {
        if self.lattice_distance(z) < POLE_TOL * self.min_norm {
            Err(Error::Pole)
        } else {
            Ok(())
        }
    }

    pub fn sigma(&self, z: C) -> C {
        let mut log = C::new(0.0, 0.0);
        for w in &self.points {
            let u = z / w;
            log += (C::new(1.0, 0.0) - u).ln() + u + u * u * 0.5;
        }
        let z2 = z * z;
        let z4 = z2 * z2;
        log -= self.tail4 * z4 / 4.0 + self.tail6 * z4 * z2 / 6.0;
        z * log.exp()
    }

    /// `wp` and `wp'`.
    pub fn wp_pair(&self, z: C) -> Result<(C, C)> {
        self.check_pole(z)?;
        let mut p = z.powi(-2);
        let mut dp = z.powi(-3) * -2.0;
        for w in &self.points {
            let d = z - w;
            let d2 = d * d;
            p += d2.inv() - w.powi(-2);
            dp -= (d2 * d).inv() * 2.0;
        }
        let z2 = z * z;
        p += self.tail4 * z2 * 3.0 + self.tail6 * z2 * z2 * 5.0;
        dp += self.tail4 * z * 6.0 + self.tail6 * z2 * z * 20.0;
        Ok((p, dp))
    }

    /// `wp, wp', ..., wp^(m)` using `wp'' = 6 wp^2 - g2 / 2`.
    pub fn wp_derivatives(&self, z: C, m: usize) -> Result<Vec<C>> {
        let (p, dp) = self.wp_pair(z)?;
        let mut out = vec![p, dp];
        for k in 2..=m.max(1) {
            let j = k - 2;
            let mut s = C::new(0.0, 0.0);
            let mut binom = 1.0;
            for i in 0..=j {
                s += out[i] * out[j - i] * binom;
                binom = binom * (j - i) as f64 / (i + 1) as f64;
            }
            let mut v = s * 6.0;
            if k == 2 {
                v -= self.g2() * 0.5;
            }
            out.push(v);
        }
        out.truncate(m + 1);
        Ok(out)
    }

    pub fn weierstrass_eval(&self, z: C, which: Weierstrass) -> Result<C> {
        match which {
            Weierstrass::Sigma => Ok(self.sigma(z)),
            Weierstrass::Wp(m) => Ok(self.wp_derivatives(z, m as usize)?[m as usize]),
        }
    }

    /// `sigma^n (1, wp, wp', ..., wp^(n-2))`.
    pub fn sigma_vector(&self, z: C, n: usize) -> Result<Vec<C>> {
        if n < 2 {
            return Err(Error::Precondition("n must be at least 2".into()));
        }
        let s = self.sigma(z).powi(n as i32);
        let mut out = vec![s];
        out.extend(self.wp_derivatives(z, n - 2)?.into_iter().take(n - 1).map(|d| d * s));
        Ok(out)
    }

    /// Taylor coefficients at `0` of the entries of the sigma vector, in rows
    /// of orders `n, n-2, n-3, ..., 0`.
    pub fn sigma_vector_taylor(&self, n: usize) -> Result<Mat<C>> {
        let r = 0.25 * self.min_norm;
        let nodes: Vec<(C, Vec<C>)> = (0..CAUCHY_NODES)
            .map(|k| {
                let z = C::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / CAUCHY_NODES as f64);
                self.sigma_vector(z, n).map(|v| (z, v))
            })
            .collect::<Result<_>>()?;
        let orders: Vec<usize> = std::iter::once(n).chain((0..=n - 2).rev()).collect();
        Ok(Mat::from_fn(&(), n, n, |row, col| {
            let k = orders[row] as i32;
            nodes.iter().map(|(z, v)| v[col] * z.powi(-k)).sum::<C>() / CAUCHY_NODES as f64
        }))
    }

    /// `sigma_vector(z - t/n)^T sigma_vector(z + t/n)`.
    pub fn analytic_segre(&self, t: C, n: usize, z: C) -> Result<Mat<C>> {
        let shift = t / n as f64;
        let u = self.sigma_vector(z - shift, n)?;
        let v = self.sigma_vector(z + shift, n)?;
        Ok(Mat::outer(&(), &u, &v))
    }

    /// Both sides of the Frobenius-Stickelberger determinant identity.
    pub fn frobstick_sides(&self, zs: &[C]) -> Result<(C, C)> {
        let n = zs.len();
        if n < 2 {
            return Err(Error::Precondition("need at least two points".into()));
        }
        for (a, za) in zs.iter().enumerate() {
            self.check_pole(*za)?;
            if zs[a + 1..].iter().any(|zb| self.lattice_distance(za - zb) < POLE_TOL * self.min_norm) {
                return Err(Error::Precondition("points must be distinct modulo the lattice".into()));
            }
        }
        let rows = zs
            .iter()
            .map(|z| {
                let d = self.wp_derivatives(*z, n.saturating_sub(2))?;
                let mut row = vec![C::new(1.0, 0.0)];
                let mut fact = 1.0;
                for c in 1..n {
                    fact *= c as f64;
                    let sign = if (c - 1) % 2 == 0 { 1.0 } else { -1.0 };
                    row.push(d[c - 1] * (sign / fact));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        let lhs = Mat::from_rows(&(), rows)?.det()?;
        let mut rhs = self.sigma(zs.iter().sum());
        for a in 0..n {
            for b in a + 1..n {
                rhs *= self.sigma(zs[a] - zs[b]);
            }
            rhs /= self.sigma(zs[a]).powi(n as i32);
        }
        Ok((lhs, rhs))
    }

    pub fn frobstick_residual(&self, zs: &[C]) -> Result<f64> {
        let (l, r) = self.frobstick_sides(zs)?;
        Ok(relative(l, r))
    }

    /// Entry `(i, j)` (1-based, in `1..=n`) of the abeliant of the analytic
    /// Segre matrix at `z_0, ..., z_(n+1)` divided by the fourth power of the
    /// Taylor normalizer, and the sigma product it should equal.
    pub fn big_identity_sides(&self, t: C, zs: &[C], i: usize, j: usize) -> Result<(C, C)> {
        let n = zs.len().checked_sub(2).filter(|&n| n >= 2).ok_or_else(|| {
            Error::Precondition("need n + 2 >= 4 sample points".into())
        })?;
        if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(Error::Precondition(format!("indices must lie in 1..={n}")));
        }
        let family = zs.iter().map(|z| self.analytic_segre(t, n, *z)).collect::<Result<Vec<_>>>()?;
        let abel = abeliant_def_scalar(&family)?;
        let norm = self.sigma_vector_taylor(n)?.det()?.powi(4);
        let lhs = abel.get(i - 1, j - 1) / norm;
        let all: Vec<usize> = (0..n + 2).collect();
        let without = |skip: [usize; 2]| all.iter().copied().filter(|l| !skip.contains(l)).collect::<Vec<_>>();
        let sum = |ls: &[usize]| ls.iter().map(|&l| zs[l]).sum::<C>();
        let pairs = |ls: &[usize]| {
            let mut acc = C::new(1.0, 0.0);
            for (a, &la) in ls.iter().enumerate() {
                for &lb in &ls[a + 1..] {
                    acc *= self.sigma(zs[la] - zs[lb]);
                }
            }
            acc
        };
        let sets = [without([0, i]), without([i, n + 1]), without([j, n + 1]), without([0, j])];
        let mut rhs = self.sigma(t + sum(&sets[0]))
            * self.sigma(t - sum(&sets[1]))
            * self.sigma(t + sum(&sets[2]))
            * self.sigma(t - sum(&sets[3]));
        for s in &sets {
            rhs *= pairs(s);
        }
        Ok((lhs, rhs))
    }

    pub fn big_identity_residual(&self, t: C, zs: &[C], i: usize, j: usize) -> Result<f64> {
        let (l, r) = self.big_identity_sides(t, zs, i, j)?;
        Ok(relative(l, r))
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative(a: C, b: C) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// `G4` and `G6` of `Z w1 + Z w2` by q-expansions after reducing the basis.
fn eisenstein(w1: C, w2: C) -> (C, C) {
    let (mut a, mut b) = (w1, w2);
    loop {
        if b.norm() < a.norm() {
            std::mem::swap(&mut a, &mut b);
        }
        let m = (b / a).re.round();
        if m == 0.0 {
            break;
        }
        b -= a * m;
    }
    let mut tau = b / a;
    if tau.im < 0.0 {
        tau = -tau;
    }
    let pi = std::f64::consts::PI;
    let q = (C::new(0.0, 2.0 * pi) * tau).exp();
    let (mut e4, mut e6) = (C::new(1.0, 0.0), C::new(1.0, 0.0));
    let mut qm = C::new(1.0, 0.0);
    for m in 1..200u32 {
        qm *= q;
        if qm.norm() < 1e-30 {
            break;
        }
        let (mut d3, mut d5) = (0.0, 0.0);
        for d in 1..=m {
            if m % d == 0 {
                d3 += (d as f64).powi(3);
                d5 += (d as f64).powi(5);
            }
        }
        e4 += qm * (240.0 * d3);
        e6 -= qm * (504.0 * d5);
    }
    let g4 = e4 * (pi.powi(4) / 45.0) / a.powi(4);
    let g6 = e6 * (2.0 * pi.powi(6) / 945.0) / a.powi(6);
    (g4, g6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lattice() -> Lattice {
        Lattice::new(C::new(1.0, 0.0), C::new(0.2, 1.1), 25).unwrap()
    }

    fn small(rng: &mut ChaCha8Rng, r: f64) -> C {
        C::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
    }

    #[test]
    fn eisenstein_matches_lattice_sums() {
        // direct sums over a large box, corrected by nothing: O(1/N^2) agreement
        let lat = lattice();
        let big = 200i64;
        let (mut s4, mut s6) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        for a in -big..=big {
            for b in -big..=big {
                if (a, b) != (0, 0) {
                    let w = lat.w1 * a as f64 + lat.w2 * b as f64;
                    s4 += w.powi(-4);
                    s6 += w.powi(-6);
                }
            }
        }
        assert!((s4 - lat.g4).norm() < 1e-5 * lat.g4.norm());
        assert!((s6 - lat.g6).norm() < 1e-9 * lat.g6.norm().max(1.0));
        // invariance under a change of basis
        let other = Lattice::new(lat.w1, lat.w2 + lat.w1 * 3.0, 10).unwrap();
        assert!((other.g2() - lat.g2()).norm() < 1e-10 * lat.g2().norm());
    }

    #[test]
    fn basic_function_properties() {
        let lat = lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let z = small(&mut rng, 0.45);
            let s = lat.sigma(z);
            assert!((lat.sigma(-z) + s).norm() < 1e-10 * s.norm());
            let (p, dp) = lat.wp_pair(z).unwrap();
            let ode = dp * dp - (p * p * p * 4.0 - lat.g2() * p - lat.g3());
            assert!(ode.norm() < 1e-8 * (dp * dp).norm().max(1.0));
            let shifted = lat.weierstrass_eval(z + lat.w1, Weierstrass::Wp(0)).unwrap();
            assert!((shifted - p).norm() < 1e-8 * p.norm().max(1.0));
        }
        assert_eq!(lat.weierstrass_eval(lat.w2, Weierstrass::Wp(0)), Err(Error::Pole));
    }

    #[test]
    fn higher_derivatives_agree_with_differences() {
        let lat = lattice();
        let z = C::new(0.31, 0.17);
        let h = 1e-4;
        let d = lat.wp_derivatives(z, 3).unwrap();
        let dp = |w| lat.wp_pair(w).unwrap().1;
        let second = (dp(z + h) - dp(z - h)) / (2.0 * h);
        assert!((second - d[2]).norm() < 1e-5 * d[2].norm());
        let third = (dp(z + h) - dp(z) * 2.0 + dp(z - h)) / (h * h);
        assert!((third - d[3]).norm() < 1e-4 * d[3].norm());
    }

    #[test]
    fn frobstick_examples() {
        let lat = lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3] {
            for _ in 0..5 {
                let zs: Vec<C> = (0..n).map(|_| small(&mut rng, 0.45)).collect();
                assert!(lat.frobstick_residual(&zs).unwrap() < 1e-6);
            }
        }
        let z1 = C::new(0.4, 0.3);
        let (l, r) = lat.frobstick_sides(&[z1, z1 + 1e-8]).unwrap();
        assert!(l.norm() < 1e-6 && r.norm() < 1e-6);
    }

    #[test]
    fn analytic_segre_properties() {
        let lat = lattice();
        let t = C::new(0.23, -0.12);
        let z = C::new(0.11, 0.3);
        for n in [2, 3] {
            let x = lat.analytic_segre(t, n, z).unwrap();
            let scale = x.entries().iter().map(|e| e.norm()).fold(0.0, f64::max);
            for a in 0..n {
                for b in 0..n {
                    let minor = x.get(0, 0) * x.get(a, b) - x.get(0, b) * x.get(a, 0);
                    assert!(minor.norm() < 1e-8 * scale * scale);
                }
            }
            let y = lat.analytic_segre(t, n, z + lat.w1).unwrap();
            let factor = (lat.sigma(z + lat.w1) / lat.sigma(z)).powi(2 * n as i32);
            for (a, b) in y.entries().iter().zip(x.entries()) {
                assert!((a / b - factor).norm() < 1e-6 * factor.norm());
            }
        }
    }

    #[test]
    fn big_identity_examples() {
        let lat = lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = small(&mut rng, 0.3);
        let zs: Vec<C> = (0..4).map(|_| small(&mut rng, 0.3)).collect();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!(lat.big_identity_residual(t, &zs, i, j).unwrap() < 1e-5, "{i} {j}");
        }
        let mut swapped = zs.clone();
        swapped.swap(0, 3);
        let (a, _) = lat.big_identity_sides(t, &zs, 1, 2).unwrap();
        let (b, _) = lat.big_identity_sides(t, &swapped, 2, 1).unwrap();
        assert!(relative(a, b) < 1e-8);
    }

    #[test]
    fn big_identity_vanishes_on_the_lattice() {
        let lat = lattice();
        let zs = [C::new(0.1, 0.2), C::new(-0.2, 0.1), C::new(0.3, -0.1), C::new(0.05, 0.25)];
        // t + z_2 + z_3 = w1 makes the first factor vanish for i = 1
        let t = lat.w1 - zs[2] - zs[3];
        let (l, r) = lat.big_identity_sides(t, &zs, 1, 1).unwrap();
        let (l0, _) = lat.big_identity_sides(C::new(0.2, 0.1), &zs, 1, 1).unwrap();
        assert!(l.norm() < 1e-6 * l0.norm().max(1.0) && r.norm() < 1e-6 * l0.norm().max(1.0));
    }
}
