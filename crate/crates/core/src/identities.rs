//! Seeded randomized checks of the algebraic identities satisfied by
//! abeliants and discriminants over a prime field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abeliant::{
    abeliant, abeliant_def_scalar, abeliant_expand, abeliant_factored, discriminant, rank1_entry,
};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{is_prime, Fp, Ring, SampleField};

/// Signature shared by the abeliant algorithms.
pub type AbeliantFn = fn(&[Mat<Fp>]) -> Result<Mat<Fp>>;

/// Pass count of one identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub trials: usize,
}

impl IdentityOutcome {
    pub fn holds(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub seed: u64,
    pub p: u64,
    pub n: usize,
    pub trials: usize,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.seed,
            "p": self.p,
            "n": self.n,
            "trials": self.trials,
            "all_pass": self.all_hold(),
            "identities": self.outcomes.iter().map(|o| serde_json::json!({
                "name": o.name,
                "passed": o.passed,
                "trials": o.trials,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Names of the checked identities, in report order.
pub const IDENTITY_NAMES: [&str; 14] = [
    "algorithm_agreement",
    "transformation_law",
    "transpose_symmetry",
    "permutation_symmetry",
    "degeneration",
    "special_case",
    "discriminant_transformation_law",
    "discriminant_transpose_symmetry",
    "discriminant_special_case",
    "key_relation",
    "companion_formula",
    "rank_one_facts",
    "discriminant_reformulation",
    "iterated_abeliants",
];

/// Runs every identity `trials` times; `expand` stands in for the
/// permutation-sum algorithm so that a faulty implementation can be injected.
pub fn check_identities_with(seed: u64, p: u64, n: usize, trials: usize, expand: AbeliantFn) -> Result<IdentityReport> {
    if !(2..=4).contains(&n) {
        return Err(Error::Precondition("n must lie in 2..=4".into()));
    }
    if trials == 0 {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    if p < 3 || !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    let mut outcomes = Vec::with_capacity(IDENTITY_NAMES.len());
    for (k, name) in IDENTITY_NAMES.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((k as u64 + 1) << 32));
        let mut passed = 0;
        for _ in 0..trials {
            let ctx = Ctx { p, n, expand };
            if ctx.run(k, &mut rng)? {
                passed += 1;
            }
        }
        outcomes.push(IdentityOutcome { name, passed, trials });
    }
    Ok(IdentityReport { seed, p, n, trials, outcomes })
}

pub fn check_identities(seed: u64, p: u64, n: usize, trials: usize) -> Result<IdentityReport> {
    check_identities_with(seed, p, n, trials, abeliant_expand)
}

struct Ctx {
    p: u64,
    n: usize,
    expand: AbeliantFn,
}

impl Ctx {
    fn scalar<G: Rng>(&self, rng: &mut G) -> Fp {
        Fp::random(&self.p, rng)
    }

    fn mat<G: Rng>(&self, rng: &mut G) -> Mat<Fp> {
        Mat::from_fn(&self.p, self.n, self.n, |_, _| Fp::random(&self.p, rng))
    }

    fn family<G: Rng>(&self, rng: &mut G, len: usize) -> Vec<Mat<Fp>> {
        (0..len).map(|_| self.mat(rng)).collect()
    }

    fn vecs<G: Rng>(&self, rng: &mut G, len: usize) -> Vec<Vec<Fp>> {
        (0..len).map(|_| (0..self.n).map(|_| self.scalar(rng)).collect()).collect()
    }

    fn diag<G: Rng>(&self, rng: &mut G) -> Mat<Fp> {
        let d: Vec<Fp> = (0..self.n).map(|_| self.scalar(rng)).collect();
        Mat::diag(&self.p, &d)
    }

    fn fp(&self, v: i64) -> Fp {
        Fp::new(v, self.p)
    }

    /// `(e^(1) f^(1), ..., e^(n) f^(n))` scaled by `q`, then `L E M`.
    fn special_members(&self, q: &[Fp], l: &Mat<Fp>, m: &Mat<Fp>) -> Result<Vec<Mat<Fp>>> {
        let mut out: Vec<Mat<Fp>> = (0..self.n)
            .map(|a| Mat::from_fn(&self.p, self.n, self.n, |i, j| if i == a && j == a { q[a] } else { self.fp(0) }))
            .collect();
        let ones = Mat::from_fn(&self.p, self.n, self.n, |_, _| self.fp(1));
        out.push(l.mul(&ones)?.mul(m)?);
        Ok(out)
    }

    /// `D_ab = det(sum of members other than a and b)`.
    fn d(&self, fam: &[Mat<Fp>], a: usize, b: usize) -> Result<Fp> {
        let rest: Vec<&Mat<Fp>> = fam.iter().enumerate().filter(|(l, _)| *l != a && *l != b).map(|x| x.1).collect();
        Mat::sum(rest)?.det()
    }

    fn run<G: Rng>(&self, k: usize, rng: &mut G) -> Result<bool> {
        let n = self.n;
        let rank1 = |rng: &mut G| -> Vec<Mat<Fp>> {
            let us = self.vecs(rng, n + 2);
            let vs = self.vecs(rng, n + 2);
            (0..n + 2).map(|l| Mat::outer(&self.p, &us[l], &vs[l])).collect()
        };
        let reorder = |fam: &[Mat<Fp>], sigma: &dyn Fn(usize) -> usize| -> Vec<Mat<Fp>> {
            (0..fam.len()).map(|l| fam[sigma(l)].clone()).collect()
        };
        let swap = |a: usize, b: usize| move |l: usize| if l == a { b } else if l == b { a } else { l };
        Ok(match k {
            0 => {
                let fam = self.family(rng, n + 2);
                let def = abeliant_def_scalar(&fam)?;
                def == (self.expand)(&fam)? && def == abeliant(&fam)?
            }
            1 => {
                let fam = self.family(rng, n + 2);
                let (u, v) = (self.mat(rng), self.mat(rng));
                let moved: Vec<Mat<Fp>> = fam.iter().map(|x| u.mul(x)?.mul(&v)).collect::<Result<_>>()?;
                let c = u.det()?.pow(2).mul(&v.det()?.pow(2));
                abeliant(&moved)? == abeliant(&fam)?.scale(&c)
            }
            2 => {
                let fam = self.family(rng, n + 2);
                let z = abeliant(&fam)?;
                let swapped = reorder(&fam, &swap(0, n + 1));
                let transposed: Vec<Mat<Fp>> = fam.iter().map(Mat::transpose).collect();
                abeliant(&swapped)? == z.transpose() && abeliant(&transposed)? == z.transpose()
            }
            3 => {
                let fam = self.family(rng, n + 2);
                let mut inner: Vec<usize> = (1..=n).collect();
                for i in (1..n).rev() {
                    inner.swap(i, rng.gen_range(0..=i));
                }
                let pi = |l: usize| if l == 0 || l == n + 1 { l } else { inner[l - 1] };
                let z = abeliant(&fam)?;
                let w = abeliant(&reorder(&fam, &pi))?;
                (0..n).all(|i| (0..n).all(|j| w.get(i, j) == z.get(pi(i + 1) - 1, pi(j + 1) - 1)))
            }
            4 => {
                let fam = self.family(rng, n + 2);
                let sent = reorder(&fam, &|l| if l == 1 { 2 } else { l });
                abeliant(&sent)?.get(0, 1) == abeliant(&fam)?.get(0, 0)
            }
            5 => {
                let x = self.mat(rng);
                let q: Vec<Fp> = (0..n).map(|_| self.scalar(rng)).collect();
                let (l, m) = (self.diag(rng), self.diag(rng));
                let mut fam = vec![x.clone()];
                fam.extend(self.special_members(&q, &l, &m)?);
                let qa = Mat::diag(&self.p, &q).adjugate()?;
                abeliant(&fam)? == m.mul(&qa)?.mul(&x)?.mul(&qa)?.mul(&l)?
            }
            6 => {
                let fam = self.family(rng, n + 1);
                let (u, v) = (self.mat(rng), self.mat(rng));
                let moved: Vec<Mat<Fp>> = fam.iter().map(|x| u.mul(x)?.mul(&v)).collect::<Result<_>>()?;
                let e = (4 * n - 2) as u32;
                discriminant(&moved)? == discriminant(&fam)?.mul(&u.det()?.pow(e)).mul(&v.det()?.pow(e))
            }
            7 => {
                let fam = self.family(rng, n + 1);
                let transposed: Vec<Mat<Fp>> = fam.iter().map(Mat::transpose).collect();
                discriminant(&fam)? == discriminant(&transposed)?
            }
            8 => {
                let q: Vec<Fp> = (0..n).map(|_| self.scalar(rng)).collect();
                let (l, m) = (self.diag(rng), self.diag(rng));
                let fam = self.special_members(&q, &l, &m)?;
                let dq = Mat::diag(&self.p, &q).det()?;
                discriminant(&fam)? == dq.pow((4 * n - 4) as u32).mul(&l.det()?.pow(2)).mul(&m.det()?.pow(2))
            }
            9 => {
                let x0 = self.mat(rng);
                let us = self.vecs(rng, n + 1);
                let vs = self.vecs(rng, n + 1);
                let mut fam = vec![x0.clone()];
                fam.extend((0..=n).map(|l| Mat::outer(&self.p, &us[l], &vs[l])));
                let (z, delta) = abeliant_factored(&x0, &us, &vs)?;
                z == abeliant(&fam)? && delta == discriminant(&fam[1..])?
            }
            10 => {
                let us = self.vecs(rng, n + 2);
                let vs = self.vecs(rng, n + 2);
                let fam: Vec<Mat<Fp>> = (0..n + 2).map(|l| Mat::outer(&self.p, &us[l], &vs[l])).collect();
                let z = abeliant(&fam)?;
                let mut ok = true;
                for i in 0..n {
                    for j in 0..n {
                        ok &= *z.get(i, j) == rank1_entry(&us, &vs, i, j)?;
                    }
                }
                ok
            }
            11 => {
                let fam = rank1(rng);
                let z = abeliant(&fam)?;
                let mut ok = z.rank_leq_one();
                for a in 1..=n {
                    ok &= *z.get(a - 1, a - 1) == self.d(&fam, 0, a)?.mul(&self.d(&fam, a, n + 1)?);
                    let dup = abeliant(&reorder(&fam, &|l| if l == 0 { a } else { l }))?;
                    for i in 1..=n {
                        for j in 1..=n {
                            if !(i == a && j == a) {
                                ok &= dup.get(i - 1, j - 1).is_zero();
                            }
                        }
                    }
                    ok &= *dup.get(a - 1, a - 1) == self.d(&fam, 0, a)?.mul(&self.d(&fam, 0, n + 1)?);
                }
                let last = abeliant(&reorder(&fam, &|l| if l == 0 { n + 1 } else { l }))?;
                for i in 1..=n {
                    for j in 1..=n {
                        ok &= *last.get(i - 1, j - 1) == self.d(&fam, 0, i)?.mul(&self.d(&fam, 0, j)?);
                    }
                }
                ok
            }
            12 => {
                let fam = rank1(rng);
                let entry = |sigma: &dyn Fn(usize) -> usize, a: usize| -> Result<Fp> {
                    Ok(*abeliant(&reorder(&fam, sigma))?.get(a - 1, a - 1))
                };
                let (s01, s2l) = (swap(0, 1), swap(2, n + 1));
                let mut rhs = entry(&|l| s2l(s01(l)), 1)?.mul(&entry(&s01, 1)?).mul(&entry(&swap(0, 2), 2)?);
                for a in 3..=n {
                    rhs = rhs.mul(&entry(&swap(0, a), a)?.pow(2));
                }
                discriminant(&fam[1..])? == rhs
            }
            13 => {
                // members -(n+1)..=-1 followed by 0..=n+1
                let neg = rank1(rng);
                let pos = rank1(rng);
                let negative = |l: usize| if l == 0 { &pos[0] } else { &neg[l] };
                let ys: Vec<Mat<Fp>> = (0..n + 2)
                    .map(|l| {
                        let mut f = vec![negative(l).clone()];
                        f.extend(pos[1..].iter().cloned());
                        abeliant(&f)
                    })
                    .collect::<Result<_>>()?;
                let base: Vec<Mat<Fp>> = (0..n + 2).map(|l| negative(l).clone()).collect();
                abeliant(&ys)? == abeliant(&base)?.scale(&discriminant(&pos[1..])?)
            }
            _ => unreachable!("identity index"),
        })
    }
}
