use birkhoff_core::baker::{g_minus, solve_baker, solve_baker_raw, BakerFunctions};
use birkhoff_core::gauge::{spin_vector_matrix, spin_vector_scalar, HmEvaluator};
use birkhoff_core::lax::nls_lax_pair;
use birkhoff_core::loop_algebra::{C2Matrix, LaurentMatrix, Projection};
use birkhoff_core::spectral::{derived_mu, phase, SolitonParams, SpectralData, SpectralPair};
use birkhoff_core::Complex;
use proptest::prelude::*;

fn complex(range: f64) -> impl Strategy<Value = Complex> {
    (-range..range, -range..range).prop_map(|(re, im)| Complex::new(re, im))
}

fn unit_complex() -> impl Strategy<Value = Complex> {
    (0.0..std::f64::consts::TAU).prop_map(|a| Complex::from_polar(1.0, a))
}

fn g_matrix() -> impl Strategy<Value = C2Matrix> {
    (complex(2.0), complex(2.0))
        .prop_filter("non-degenerate", |(a, b)| {
            a.norm_sqr() + b.norm_sqr() > 1e-2
        })
        .prop_map(|(a, b)| C2Matrix::g_form(a, b))
}

fn g_laurent() -> impl Strategy<Value = LaurentMatrix> {
    (
        -3i32..1,
        prop::collection::vec((complex(1.0), complex(1.0)), 1..4),
    )
        .prop_map(|(lo, cs)| {
            LaurentMatrix::new(
                lo,
                cs.into_iter()
                    .map(|(a, b)| C2Matrix::g_form(a, b))
                    .collect(),
            )
        })
}

/// Up to four solitons with well-separated points in the upper half disk.
fn soliton_data() -> impl Strategy<Value = SpectralData> {
    prop::collection::vec((-0.5..0.5f64, 0.2..0.6f64, -0.5..0.5f64, 0.0..3.1f64), 1..5)
        .prop_map(|ps| {
            ps.into_iter()
                .map(|(a, b, x0, phi)| SolitonParams::new(a, b, x0, phi))
                .collect::<Vec<_>>()
        })
        .prop_filter("separated points", |ps| {
            ps.iter().enumerate().all(|(i, p)| {
                ps[..i]
                    .iter()
                    .all(|q| (p.point() - q.point()).norm() > 0.15)
            })
        })
        .prop_map(|ps| SpectralData::from_soliton_params(&ps).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_of_product(a in g_matrix(), b in g_matrix()) {
        let lhs = (a * b).inverse().unwrap();
        let rhs = b.inverse().unwrap() * a.inverse().unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn g_form_closed_under_multiplication(a in g_laurent(), b in g_laurent()) {
        prop_assert!((&a * &b).is_g_form(1e-12));
    }

    #[test]
    fn projections_split_the_loop(a in g_laurent(), z in unit_complex()) {
        for mode in [Projection::StrictlyPositive, Projection::NonNegative] {
            let sum = &a.project(mode) + &a.project_complement(mode);
            prop_assert_eq!(&sum, &a);
            prop_assert!(sum.eval(z).max_abs_diff(&a.eval(z)) < 1e-12);
        }
    }

    #[test]
    fn mu_is_an_involution(lambda in complex(3.0).prop_filter("nonzero", |l| l.norm() > 1e-3)) {
        let mu = derived_mu(lambda).unwrap();
        let back = derived_mu(mu).unwrap();
        prop_assert!((back - lambda).norm() < 1e-12 * lambda.norm().max(1.0));
        prop_assert!((lambda * mu.conj() + 1.0).norm() < 1e-12);
    }

    #[test]
    fn phase_commutes_with_conjugation(p in complex(1.0), x in -10.0..10.0f64, t in -10.0..10.0f64) {
        prop_assert!((phase(p.conj(), x, t) - phase(p, x, t).conj()).norm() < 1e-12);
    }

    #[test]
    fn gauge_phase_invariance(
        a in complex(2.0), b in complex(2.0), a0 in complex(2.0), b0 in complex(2.0), w in unit_complex()
    ) {
        prop_assume!(a.norm_sqr() + b.norm_sqr() > 1e-3 && a0.norm_sqr() + b0.norm_sqr() > 1e-3);
        let s = spin_vector_scalar(a, b, a0, b0).unwrap();
        let rotated = spin_vector_scalar(a * w, b * w, a0 * w, b0 * w).unwrap();
        prop_assert!(s.max_abs_diff(rotated) < 1e-12);
    }

    #[test]
    fn gauge_scaling_invariance(
        a in complex(2.0), b in complex(2.0), a0 in complex(2.0), b0 in complex(2.0), r in 0.01..100.0f64
    ) {
        prop_assume!(a.norm_sqr() + b.norm_sqr() > 1e-3 && a0.norm_sqr() + b0.norm_sqr() > 1e-3);
        let s = spin_vector_scalar(a, b, a0, b0).unwrap();
        prop_assert!(s.max_abs_diff(spin_vector_scalar(a * r, b * r, a0, b0).unwrap()) < 1e-12);
        prop_assert!(s.max_abs_diff(spin_vector_scalar(a, b, a0 * r, b0 * r).unwrap()) < 1e-12);
    }

    #[test]
    fn gauge_scalar_matches_matrix(a in complex(2.0), b in complex(2.0), a0 in complex(2.0), b0 in complex(2.0)) {
        prop_assume!(a.norm_sqr() + b.norm_sqr() > 1e-3 && a0.norm_sqr() + b0.norm_sqr() > 1e-3);
        let s = spin_vector_scalar(a, b, a0, b0).unwrap();
        prop_assert!(s.max_abs_diff(spin_vector_matrix(a, b, a0, b0).unwrap()) < 1e-12);
        prop_assert!(s.norm_error() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn baker_structure(data in soliton_data(), x in -3.0..3.0f64, t in -1.0..1.0f64) {
        let raw = solve_baker_raw(&data, x, t).unwrap();
        prop_assert!(raw.structure_defect() < 1e-9);
        let coeffs = solve_baker(&data, x, t).unwrap();
        prop_assert!(g_minus(&coeffs).unwrap().is_g_form(1e-10));
        let f = BakerFunctions { coeffs: coeffs.clone(), x, t };
        prop_assert!(f.interpolation_residual(&data).unwrap() < 1e-9);
        for m in nls_lax_pair(&coeffs).m2_coeffs() {
            prop_assert!(m.is_anti_hermitian(1e-12));
        }
    }

    #[test]
    fn hm_field_is_unit(data in soliton_data(), x in -3.0..3.0f64, t in -1.0..1.0f64) {
        let ev = HmEvaluator::new(data).unwrap();
        let s = ev.eval(x, t).unwrap();
        prop_assert!(s.norm_error() < 1e-10);
        prop_assert!(s.max_abs_diff(ev.eval_matrix_path(x, t).unwrap()) < 1e-10);
    }
}

#[test]
fn rejects_invalid_spectral_data() {
    let p = Complex::new(0.1, 0.4);
    assert!(SpectralData::new(vec![SpectralPair::new(p, Complex::new(1.0, 0.0)); 2]).is_err());
    assert!(SpectralData::new(vec![SpectralPair::new(
        Complex::new(0.0, 1.2),
        Complex::new(1.0, 0.0)
    )])
    .is_err());
    assert!(SpectralData::new(vec![]).is_err());
}
