//! Property tests for the kernel identities and distribution-level
//! invariants, plus the even-order/half-integer cross-formula check.

use proptest::prelude::*;
use vgm_core::moments::{self, MomentQuery};
use vgm_core::specfun::{self, GArgs};
use vgm_core::vgdist::{ALKappaSigma, VGParams};

fn close(a: f64, b: f64, tol: f64) -> bool {
    if b == 0.0 {
        a.abs() <= tol
    } else {
        ((a - b) / b).abs() <= tol
    }
}

proptest! {
    #[test]
    fn kummer_transformation_holds(
        a in 0.2f64..4.0,
        extra in 0.5f64..6.0,
        x in -30.0f64..30.0,
    ) {
        let b = a + extra;
        let lhs = specfun::kummer_m(a, b, x).unwrap().true_value();
        let rhs = x.exp() * specfun::kummer_m(b - a, b, -x).unwrap().true_value();
        prop_assert!(close(lhs, rhs, 1e-10), "lhs={lhs} rhs={rhs}");
    }

    #[test]
    fn hyp2f1_binomial_reduction(b in 0.3f64..8.0, z in 0.0f64..0.95) {
        let f = specfun::hyp2f1(1.7, b, 1.7, z).unwrap().value;
        prop_assert!(close(f, (1.0 - z).powf(-b), 1e-10));
    }

    #[test]
    fn bessel_order_recurrence(v in -0.49f64..8.0, x in 0.05f64..40.0) {
        let kv = specfun::bessel_k(v, x, true).unwrap().value;
        let kvp = specfun::bessel_k(v + 1.0, x, true).unwrap().value;
        let kvm = specfun::bessel_k(v - 1.0, x, true).unwrap().value;
        prop_assert!(close(kvp, kvm + (2.0 * v / x) * kv, 1e-11));
    }

    #[test]
    fn lommel_diagonal_is_struve(nu in -0.49f64..5.0, x in 0.01f64..25.0) {
        let t = specfun::lommel_t_tilde(nu, nu, x).unwrap().value;
        let l = specfun::struve_l(nu, x).unwrap().value;
        prop_assert!(close(t, l, 1e-10));
    }

    #[test]
    fn g_stays_in_unit_interval(
        nu in -0.45f64..4.0,
        extra in 0.0f64..6.0,
        x in 0.001f64..150.0,
    ) {
        let g = specfun::big_g(&GArgs::new(nu + extra, nu, x).unwrap()).unwrap().value;
        prop_assert!(g > 0.0 && g < 1.0, "G={g}");
    }

    #[test]
    fn shift_and_centralize(
        nu in -0.4f64..4.0,
        alpha in 0.2f64..5.0,
        g in -0.95f64..0.95,
        mu in -3.0f64..3.0,
        a in -2.0f64..2.0,
    ) {
        let p = VGParams::new(nu, alpha, g * alpha, mu).unwrap();
        prop_assert!(close(p.shift(a).mean(), p.mean() + a, 1e-12));
        let c = p.centralize();
        prop_assert!(c.mean().abs() <= 1e-13 * p.mean().abs().max(1.0));
        // centralisation is independent of the starting location
        prop_assert_eq!(p.shift(a).centralize(), c);
    }

    #[test]
    fn kappa_sigma_round_trip(kappa in 0.05f64..20.0, sigma in 0.05f64..10.0) {
        let k = ALKappaSigma::new(kappa, sigma, 0.0).unwrap();
        let back = k.to_al().to_kappa_sigma();
        prop_assert!(close(back.kappa(), kappa, 1e-11));
        prop_assert!(close(back.sigma(), sigma, 1e-11));
    }

    #[test]
    fn sampler_output_is_finite(
        nu in -0.4f64..3.0,
        alpha in 0.5f64..4.0,
        g in -0.9f64..0.9,
        seed in 0u64..1000,
    ) {
        let p = VGParams::new(nu, alpha, g * alpha, 0.3).unwrap();
        let xs = p.sample(seed, 64);
        prop_assert!(xs.iter().all(|x| x.is_finite()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moment_reflection_symmetry(
        nu in -0.3f64..2.5,
        g in 0.05f64..0.9,
        mu in 0.05f64..1.5,
        r in 1u32..5,
    ) {
        let a = VGParams::new(nu, 2.0, 2.0 * g, mu).unwrap();
        let b = VGParams::new(nu, 2.0, -2.0 * g, -mu).unwrap();
        let q = MomentQuery::absolute(r as f64);
        let ma = moments::moment(&a, &q).unwrap().value;
        let mb = moments::moment(&b, &q).unwrap().value;
        prop_assert!(close(ma, mb, 1e-10), "ma={ma} mb={mb}");
    }

    #[test]
    fn central_moment_is_shift_invariant(
        nu in -0.2f64..2.0,
        g in 0.0f64..0.8,
        mu in -1.0f64..1.0,
        shift in -2.0f64..2.0,
    ) {
        let p = VGParams::new(nu, 2.0, 2.0 * g, mu).unwrap();
        let q = MomentQuery::absolute(1.0).central();
        let a = moments::moment(&p, &q).unwrap().value;
        let b = moments::moment(&p.shift(shift), &q).unwrap().value;
        prop_assert!(close(a, b, 1e-9), "a={a} b={b}");
    }
}

/// Even order on a half-integer shape: the finite hypergeometric sum and the
/// confluent closed form must agree.
#[test]
fn even_and_halfint_formulas_agree() {
    for nu in [0.5, 1.5, 2.5] {
        for r in [2u32, 4] {
            for g in [0.0, 0.5, 0.9] {
                for am in [0.05, 1.0, 3.0] {
                    let p = VGParams::new(nu, 2.0, 2.0 * g, am / 2.0).unwrap();
                    let even = moments::abs_moment_even(&p, r).unwrap().value;
                    let half = moments::abs_moment_halfint(&p, r as f64).unwrap().value;
                    assert!(
                        close(even, half, 1e-9),
                        "nu={nu} r={r} g={g} am={am}: even={even} halfint={half}"
                    );
                }
            }
        }
    }
}

/// Large half-integer shapes: the confluent closed form stays consistent
/// with the series and the quadrature oracle deep into the order range.
#[test]
fn large_shape_cross_checks() {
    use vgm_core::oracle;
    for (nu, r, g, mu) in [
        (10.5, 3u32, 0.5, 0.7),
        (10.5, 1, 0.0, 0.1),
        (25.5, 3, 0.3, -0.4),
    ] {
        let p = VGParams::new(nu, 2.0, 2.0 * g, mu).unwrap();
        let half = moments::abs_moment_halfint(&p, r as f64).unwrap().value;
        let series = moments::abs_moment_odd_series(&p, r, 1e-12, 500)
            .unwrap()
            .value;
        assert!(
            close(series, half, 1e-9),
            "nu={nu} r={r}: series={series:e} halfint={half:e}"
        );
        let quad = oracle::quad_abs_moment(&p, r as f64, 1e-9).unwrap().value;
        assert!(
            close(half, quad, 1e-7),
            "nu={nu} r={r}: halfint={half:e} quad={quad:e}"
        );
    }
}

/// Raw second moment equals the absolute second moment everywhere.
#[test]
fn second_moments_coincide() {
    for (nu, g, mu) in [(0.7, 0.3, 0.4), (-0.2, 0.6, -0.8), (1.87, 0.0, 2.0)] {
        let p = VGParams::new(nu, 2.0, 2.0 * g, mu).unwrap();
        let raw = moments::raw_moment(&p, 2).unwrap().value;
        let abs = moments::abs_moment_even(&p, 2).unwrap().value;
        assert!(close(raw, abs, 1e-11), "raw={raw} abs={abs}");
    }
}
