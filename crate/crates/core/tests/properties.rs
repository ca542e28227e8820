//! Randomized invariants across modules, driven by proptest seeds.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use abeliant::abeliant::{abeliant, abeliant_expand, discriminant, reindex};
use abeliant::algebra::Derangement;
use abeliant::curve::{Curve, CurvePoint, Divisor, FuncRep, UPoly};
use abeliant::elliptic_numeric::{relative, Lattice};
use abeliant::jacobian::{abel_point, point_class, JacobianConfig};
use abeliant::matrix::Mat;
use abeliant::scalar::{Ring, SampleField};
use abeliant::segre::{k_equivalent, proportional, SegreMatrix};
use abeliant::Fp;

fn random_mat(p: u64, n: usize, r: &mut ChaCha8Rng) -> Mat<Fp> {
    Mat::from_fn(&p, n, n, |_, _| Fp::random(&p, r))
}

fn random_family(p: u64, n: usize, r: &mut ChaCha8Rng) -> Vec<Mat<Fp>> {
    (0..n + 2).map(|_| random_mat(p, n, r)).collect()
}

fn elliptic() -> Curve {
    Curve::from_i64s(1009, &[3, 2, 0, 1]).unwrap()
}

fn genus_two() -> Curve {
    Curve::from_i64s(1009, &[1, 3, 0, 2, 0, 1]).unwrap()
}

fn random_divisor(curve: &Curve, deg: i64, r: &mut ChaCha8Rng) -> Divisor {
    let mut d = Divisor::zero();
    for _ in 0..r.gen_range(0..3) {
        d.add_point(curve.random_point(r).unwrap(), r.gen_range(-1..=2));
    }
    d.add(&Divisor::infinity(deg - d.degree()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn abeliant_transformation_and_symmetries(seed in any::<u64>(), p in prop::sample::select(vec![7u64, 101, 1009]), n in 2usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let fam = random_family(p, n, &mut r);
        let a = abeliant(&fam).unwrap();
        prop_assert_eq!(&a, &abeliant_expand(&fam).unwrap());

        let (u, v) = (random_mat(p, n, &mut r), random_mat(p, n, &mut r));
        let moved: Vec<_> = fam.iter().map(|x| u.mul(x).unwrap().mul(&v).unwrap()).collect();
        let factor = u.det().unwrap().mul(&v.det().unwrap()).pow(2);
        prop_assert_eq!(abeliant(&moved).unwrap(), a.scale(&factor));

        let swapped = reindex(&fam, &Derangement::swap(0, n as i8 + 1));
        prop_assert_eq!(abeliant(&swapped).unwrap(), a.transpose());
        let transposed: Vec<_> = fam.iter().map(Mat::transpose).collect();
        prop_assert_eq!(abeliant(&transposed).unwrap(), a.transpose());

        let pi = Derangement::swap(1, 2);
        let permuted = abeliant(&reindex(&fam, &pi)).unwrap();
        for i in 0..n {
            for j in 0..n {
                let (pi_i, pi_j) = (pi.apply(i as i8 + 1) as usize - 1, pi.apply(j as i8 + 1) as usize - 1);
                prop_assert_eq!(permuted.get(i, j), a.get(pi_i, pi_j));
            }
        }

        let members = &fam[1..];
        let moved_members: Vec<_> = members.iter().map(|x| u.mul(x).unwrap().mul(&v).unwrap()).collect();
        let dfactor = u.det().unwrap().mul(&v.det().unwrap()).pow((4 * n - 2) as u32);
        prop_assert_eq!(discriminant(&moved_members).unwrap(), discriminant(members).unwrap().mul(&dfactor));
    }

    #[test]
    fn riemann_roch_and_products(seed in any::<u64>(), genus_two_curve in any::<bool>()) {
        let curve = if genus_two_curve { genus_two() } else { elliptic() };
        let g = curve.genus() as i64;
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let d = random_divisor(&curve, 2 * g - 1 + r.gen_range(0..3), &mut r);
        let d2 = random_divisor(&curve, r.gen_range(0..4), &mut r);
        let basis = curve.rr_basis(&d).unwrap();
        prop_assert_eq!(basis.len() as i64, d.degree() - g + 1);
        let sum = d.add(&d2);
        for f in &basis {
            for h in curve.rr_basis(&d2).unwrap() {
                let fh = f.mul(&h, &curve);
                if fh.is_zero() {
                    continue;
                }
                for (pt, m) in sum.support() {
                    prop_assert!(curve.ord_at(&fh, pt).unwrap() >= -m);
                }
            }
        }
    }

    #[test]
    fn residues_sum_to_zero(seed in any::<u64>()) {
        // f dx / y with f = h(x, y) / ((x - a)(x - c)); dx / y is holomorphic in genus 1
        let curve = elliptic();
        let p = curve.p();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (pa, pc) = (curve.random_point(&mut r).unwrap(), curve.random_point(&mut r).unwrap());
        let (CurvePoint::Affine { x: a, .. }, CurvePoint::Affine { x: c, .. }) = (&pa, &pc) else {
            return Ok(());
        };
        let num_a = UPoly::new(p, (0..3).map(|_| Fp::random(&p, &mut r)).collect());
        let num_b = UPoly::new(p, (0..2).map(|_| Fp::random(&p, &mut r)).collect());
        let f = FuncRep::new(num_a, num_b, UPoly::linear(*a).mul(&UPoly::linear(*c))).unwrap();
        let h = f.div(&FuncRep::y(p), &curve).unwrap();
        let poles = vec![pa.clone(), curve.negate(&pa), pc.clone(), curve.negate(&pc), CurvePoint::Infinity];
        let mut seen: Vec<CurvePoint> = Vec::new();
        let mut total = Fp::from_u64(0, p);
        for pt in poles {
            if seen.contains(&pt) {
                continue;
            }
            let prec = 8;
            let series = curve.local_expansion(&h, &pt, prec).unwrap().mul(&curve.dx_expansion(&pt, prec + 8));
            total = total.add(&series.residue());
            seen.push(pt);
        }
        prop_assert_eq!(total, Fp::from_u64(0, p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn twisted_forms_are_equivalent(seed in any::<u64>()) {
        let curve = elliptic();
        let cfg = JacobianConfig::new(&curve).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let pt = curve.random_point(&mut r).unwrap();
        let x = cfg.point_form(&pt).unwrap();
        let alg = curve.algebra();
        let invertible = |r: &mut ChaCha8Rng| loop {
            let m = random_mat(1009, cfg.n(), r);
            if !m.det().unwrap().is_zero() {
                break Mat::from_scalars(alg, &m);
            }
        };
        let (phi, psi) = (invertible(&mut r), invertible(&mut r));
        let y = SegreMatrix::new(phi.mul(x.mat()).unwrap().mul(&psi).unwrap(), cfg.segre_type()).unwrap();
        prop_assert!(k_equivalent(&x, &y).unwrap());
        let other = cfg.point_form(&curve.random_point_avoiding(&mut r, &[pt.clone()]).unwrap()).unwrap();
        prop_assert!(!k_equivalent(&x, &other).unwrap());
    }

    #[test]
    fn abel_map_is_well_defined_on_classes(seed in any::<u64>()) {
        // P - inf and (P + Q) + (-Q) - 2 inf are linearly equivalent
        let curve = elliptic();
        let cfg = JacobianConfig::new(&curve).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = curve.random_point(&mut r).unwrap();
        let b = curve.random_point_avoiding(&mut r, &[a.clone(), curve.negate(&a)]).unwrap();
        let other = Divisor::point(curve.chord_tangent(&a, &b).unwrap(), 1)
            .add(&Divisor::point(curve.negate(&b), 1))
            .add(&Divisor::infinity(-2));
        let z1 = abel_point(&point_class(&a), &cfg).unwrap();
        let z2 = abel_point(&other, &cfg).unwrap();
        prop_assert!(proportional(z1.mat(), z2.mat()));
    }

    #[test]
    fn analytic_family_transformation_law(seed in any::<u64>(), n in 2usize..=3) {
        let lat = Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.2, 1.1), 25).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut c = |s: f64| Complex64::new(r.gen_range(-s..s), r.gen_range(-s..s));
        let t = c(0.3);
        let fam: Vec<Mat<Complex64>> = (0..n + 2).map(|_| lat.analytic_segre(t, n, c(0.35)).unwrap()).collect();
        for x in &fam {
            let m = x.get(0, 0) * x.get(1, 1) - x.get(0, 1) * x.get(1, 0);
            prop_assert!(m.norm() <= 1e-9 * (x.get(0, 0).norm() * x.get(1, 1).norm()).max(1e-300));
        }
        let u = Mat::from_fn(&(), n, n, |_, _| c(1.0));
        let v = Mat::from_fn(&(), n, n, |_, _| c(1.0));
        let moved: Vec<_> = fam.iter().map(|x| u.mul(x).unwrap().mul(&v).unwrap()).collect();
        let factor = u.det().unwrap().mul(&v.det().unwrap()).powi(2);
        let (lhs, rhs) = (abeliant(&moved).unwrap(), abeliant(&fam).unwrap());
        for i in 0..n {
            for j in 0..n {
                prop_assert!(relative(*lhs.get(i, j), rhs.get(i, j) * factor) < 1e-6);
            }
        }
    }
}

#[test]
fn truncation_error_shrinks() {
    let (w1, w2) = (Complex64::new(1.0, 0.0), Complex64::new(0.2, 1.1));
    let reference = Lattice::new(w1, w2, 80).unwrap();
    let zs = [Complex64::new(0.21, 0.13), Complex64::new(-0.3, 0.05), Complex64::new(0.1, -0.27)];
    let errors: Vec<f64> = [10usize, 15, 25]
        .iter()
        .map(|&n| {
            let lat = Lattice::new(w1, w2, n).unwrap();
            zs.iter().map(|&z| relative(lat.sigma(z), reference.sigma(z))).fold(0.0, f64::max)
        })
        .collect();
    // below ~1e-13 the comparison only sees rounding
    for w in errors.windows(2) {
        assert!(w[1] <= w[0] || w[1] < 1e-13, "{errors:?}");
    }
}
