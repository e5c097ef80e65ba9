use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use rand::Rng;

use super::*;
use crate::basis::{group_basis, GroupingScheme};
use crate::povm::{build_povm, t_of_x, t_range, build_h, validate_povm};
use crate::random::{random_unit_vector, seeded_rng};
use crate::states::{
    bell_horodecki_2x4, isotropic, maximally_mixed, pure_concurrence, random_schmidt_rank_state,
};

fn povm(d: usize, n: usize, m: usize, scheme: GroupingScheme, t: f64) -> SymmetricPovm {
    let gb = group_basis(&gellmann_basis(d).unwrap(), n, m, &scheme).unwrap();
    build_povm(&gb, t).unwrap()
}

fn square_families() -> Vec<SymmetricPovm> {
    vec![
        povm(2, 3, 2, GroupingScheme::Sequential, 0.1),
        povm(4, 5, 4, GroupingScheme::Ququart54, 0.01),
        povm(3, 8, 2, GroupingScheme::Qutrit82, 0.01),
        povm(3, 4, 3, GroupingScheme::Sequential, -0.05),
        sic_povm_d3(),
    ]
}

fn product_state(d_a: usize, d_b: usize, seed: u64) -> DensityMatrix {
    let mut rng = seeded_rng(seed);
    let u = random_unit_vector(d_a, &mut rng);
    let v = random_unit_vector(d_b, &mut rng);
    let amps = u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
    PureState::normalized(d_a, d_b, amps).unwrap().density()
}

fn params(d: usize, n: usize, m: usize, x: f64) -> PovmParams {
    PovmParams { d, n, m, x }
}

/// Random complete parameters with `x` strictly inside its window.
fn random_params(rng: &mut impl Rng) -> PovmParams {
    let (d, m) = [(2, 2), (2, 4), (3, 2), (3, 3), (3, 9), (4, 4), (4, 16), (5, 5), (5, 7)][rng.random_range(0..9)];
    let (lo, hi) = crate::povm::purity_window(d, m);
    let x = lo + (hi - lo) * rng.random_range(0.01..1.0);
    PovmParams::complete(d, m, x).unwrap()
}

#[test]
fn maximally_mixed_gives_uniform_matrix() {
    let pa = povm(2, 3, 2, GroupingScheme::Sequential, 0.1);
    let pb = povm(4, 5, 4, GroupingScheme::Ququart54, 0.01);
    let p = correlation_matrix(&maximally_mixed(2, 4), &pa, &pb).unwrap();
    assert_eq!((p.rows(), p.cols()), (6, 20));
    for v in p.as_slice() {
        assert_abs_diff_eq!(*v, 1.0 / 8.0, epsilon = 1e-15);
    }
    assert_abs_diff_eq!(p.trace_norm(), (15.0f64 / 8.0).sqrt(), epsilon = 1e-12);
}

#[test]
fn product_state_matrix_is_outer_product() {
    let pa = povm(3, 8, 2, GroupingScheme::Qutrit82, 0.01);
    let pb = povm(2, 3, 2, GroupingScheme::Sequential, -0.2);
    let mut rng = seeded_rng(8);
    let u = random_unit_vector(3, &mut rng);
    let v = random_unit_vector(2, &mut rng);
    let amps = u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
    let rho = PureState::new(3, 2, amps).unwrap().density();
    let p = correlation_matrix(&rho, &pa, &pb).unwrap();
    let sig_a = ComplexMatrix::outer(&u, &u);
    let sig_b = ComplexMatrix::outer(&v, &v);
    for (i, ea) in pa.effects().iter().enumerate() {
        for (j, eb) in pb.effects().iter().enumerate() {
            let want = ea.trace_product(&sig_a).re * eb.trace_product(&sig_b).re;
            assert_abs_diff_eq!(p.get(i, j), want, epsilon = 1e-14);
        }
    }
    let sv = nalgebra::DMatrix::from_row_slice(p.rows(), p.cols(), p.as_slice()).singular_values();
    assert!(sv.iter().filter(|s| **s > 1e-12).count() == 1);
}

#[test]
fn blocks_sum_to_one_and_entries_are_probabilities() {
    let pa = povm(4, 5, 4, GroupingScheme::Ququart54, -0.05);
    let rho = bell_horodecki_2x4(0.9, 0.3).unwrap();
    let rho44 = crate::states::ququart_mixture(0.4).unwrap();
    let p = correlation_matrix(&rho44, &pa, &pa).unwrap();
    for alpha in 0..5 {
        for beta in 0..5 {
            assert_abs_diff_eq!(p.block_sum(alpha, beta), 1.0, epsilon = 1e-10);
        }
    }
    assert!(p.as_slice().iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
    assert!(matches!(correlation_matrix(&rho, &pa, &pa), Err(Error::DimensionMismatch(_))));
}

#[test]
fn complex_effects_are_rejected() {
    let i = Complex64::new(0.0, 1.0);
    let fake = SymmetricPovm::from_effects(
        2,
        3,
        2,
        (0..6).map(|_| ComplexMatrix::identity(2).scale_complex(i * 0.5)).collect(),
    )
    .unwrap();
    let real = povm(2, 3, 2, GroupingScheme::Sequential, 0.1);
    let err = correlation_matrix(&maximally_mixed(2, 2), &fake, &real).unwrap_err();
    assert!(matches!(err, Error::ImaginaryResidue { row: 0, col: 0, .. }));
}

#[test]
fn klr_for_ququart_square_case() {
    let p = params(4, 5, 4, 0.2527);
    let c = klr_constants(p, p).unwrap();
    assert_abs_diff_eq!(c.k, 12.0, epsilon = 1e-12);
    assert_abs_diff_eq!(c.l, 15.0324, epsilon = 1e-10);
    assert_abs_diff_eq!(c.r, 0.0432, epsilon = 1e-10);
    assert_abs_diff_eq!(separability_bound(&c), 1.2527, epsilon = 1e-12);
    let (norm_d, norm_o) = pure_norm_closed_forms(p, p).unwrap();
    assert_abs_diff_eq!(norm_d, 15.0324 / 12.0, epsilon = 1e-12);
    assert_abs_diff_eq!(norm_o, 0.0432 / 12.0, epsilon = 1e-12);
    assert!(matches!(klr_constants(params(4, 5, 4, 0.25), p), Err(Error::WindowViolation { .. })));
    assert!(matches!(klr_constants(params(4, 5, 4, 1.1), p), Err(Error::WindowViolation { .. })));
}

#[test]
fn gsic_and_mub_reductions() {
    let mut rng = seeded_rng(21);
    for _ in 0..100 {
        let (da, db) = (rng.random_range(2..6usize), rng.random_range(2..6usize));
        let (lo_a, hi_a) = crate::povm::purity_window(da, da * da);
        let (lo_b, hi_b) = crate::povm::purity_window(db, db * db);
        let xa = lo_a + (hi_a - lo_a) * rng.random_range(0.01..1.0);
        let xb = lo_b + (hi_b - lo_b) * rng.random_range(0.01..1.0);
        let c = klr_constants(params(da, 1, da * da, xa), params(db, 1, db * db, xb)).unwrap();
        let (da, db) = (da as f64, db as f64);
        let k = (da * db * (da * da - 1.0) * (db * db - 1.0)).sqrt();
        let l = ((da - 1.0) * (db - 1.0) * (xa * da * da + 1.0) * (xb * db * db + 1.0)).sqrt();
        let r = ((xa * da.powi(3) - 1.0) * (xb * db.powi(3) - 1.0)).sqrt();
        assert!((c.k - k).abs() <= 1e-12 * k);
        assert!((c.l - l).abs() <= 1e-12 * l);
        assert!((c.r - r).abs() <= 1e-12 * r);
    }
    for da in 2..7usize {
        for db in 2..7usize {
            let c = klr_constants(params(da, da + 1, da, 1.0), params(db, db + 1, db, 1.0)).unwrap();
            let want = ((da * db * (da - 1) * (db - 1)) as f64).sqrt();
            assert!((c.k - want).abs() <= 1e-12 * want);
            assert!((c.l / 2.0 - want).abs() <= 1e-12 * want);
            assert!((c.r - want).abs() <= 1e-12 * want);
            assert_abs_diff_eq!(separability_bound(&c), 2.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn schmidt_bound_edges() {
    let p = params(3, 4, 3, 0.5);
    let c = klr_constants(p, p).unwrap();
    let (real, int) = schmidt_bound(c.l / c.k, &c);
    assert_abs_diff_eq!(real, 0.0, epsilon = 1e-12);
    assert_eq!(int, 1);
    assert_eq!(sn_int_from_real(1.0), 2);
    assert_eq!(sn_int_from_real(1.0 + 1e-10), 2);
    assert_eq!(sn_int_from_real(1.0 + 1e-6), 3);
    assert_eq!(sn_int_from_real(-3.0), 1);
    assert_eq!(sn_int_from_real(f64::NAN), 1);
    // affine in the norm with slope K/R
    let (a, _) = schmidt_bound(1.0, &c);
    let (b, _) = schmidt_bound(2.0, &c);
    assert_abs_diff_eq!(b - a, c.k / c.r, epsilon = 1e-9);
}

#[test]
fn mub_maximally_entangled() {
    for d in [2usize, 3, 5] {
        let p = mub_povm(d).unwrap();
        let v = validate_povm(&p, 1e-10);
        assert!(v.passed, "{d}: {:?}", v.failures());
        assert_abs_diff_eq!(p.x(), 1.0, epsilon = 1e-12);
        let rho = PureState::maximally_entangled(d).density();
        let report = full_report(&rho, &p, &p, &BaselineSelection::default()).unwrap();
        assert_abs_diff_eq!(report.trace_norm, d as f64 + 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(report.sn_real_lb, d as f64 - 1.0, epsilon = 1e-9);
        assert_eq!(report.sn_int_lb, d as u32);
        let df = d as f64;
        assert_abs_diff_eq!(report.concurrence_lb, (2.0 * (df - 1.0) / df).sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(
            report.concurrence_lb,
            pure_concurrence(&PureState::maximally_entangled(d)),
            epsilon = 1e-9
        );
        for r in 1..=d {
            assert_abs_diff_eq!(corollary1_bound(d, d, 1.0, r).unwrap(), 1.0 + r as f64, epsilon = 1e-12);
        }
    }
    assert!(matches!(mub_povm(4), Err(Error::Unsupported(_))));
}

#[test]
fn corollary_matches_constants() {
    let mut rng = seeded_rng(5);
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let c = klr_constants(p, p).unwrap();
        for r in 1..=p.d {
            let direct = corollary1_bound(p.d, p.m, p.x, r).unwrap();
            assert!((direct - rank_bound(&c, r)).abs() <= 1e-12 * direct.max(1.0));
        }
        assert_abs_diff_eq!(corollary1_bound(p.d, p.m, p.x, 1).unwrap(), separability_bound(&c), epsilon = 1e-12);
    }
    for r in 1..=3 {
        assert_abs_diff_eq!(corollary1_bound(3, 9, 1.0 / 9.0, r).unwrap(), (1.0 + r as f64) / 12.0, epsilon = 1e-12);
    }
}

#[test]
fn separability_bound_is_rank_one_threshold() {
    let mut rng = seeded_rng(6);
    for _ in 0..20 {
        let (a, b) = (random_params(&mut rng), random_params(&mut rng));
        let c = klr_constants(a, b).unwrap();
        assert_eq!(rank_bound(&c, 1), separability_bound(&c));
        let (real, _) = schmidt_bound(separability_bound(&c), &c);
        assert_abs_diff_eq!(real, 0.0, epsilon = 1e-9);
    }
}

#[test]
fn pure_norm_identities() {
    let mut rng = seeded_rng(9);
    for _ in 0..50 {
        let (a, b) = (random_params(&mut rng), random_params(&mut rng));
        let c = klr_constants(a, b).unwrap();
        let (nd, no) = pure_norm_closed_forms(a, b).unwrap();
        assert!((c.l - c.k * nd).abs() <= 1e-12 * c.l);
        assert!((c.r - c.k * no).abs() <= 1e-12 * c.r.max(1e-300));
    }
}

#[test]
fn pure_norms_by_direct_construction() {
    let pairs = [
        (povm(2, 3, 2, GroupingScheme::Sequential, 0.1), povm(2, 3, 2, GroupingScheme::Sequential, 0.1)),
        (povm(2, 3, 2, GroupingScheme::Sequential, -0.25), povm(4, 5, 4, GroupingScheme::Ququart54, 0.03)),
        (povm(3, 8, 2, GroupingScheme::Qutrit82, 0.01), sic_povm_d3()),
    ];
    for (pa, pb) in &pairs {
        let (nd, no) = pure_norm_closed_forms(PovmParams::of(pa), PovmParams::of(pb)).unwrap();
        let d = pa.d().min(pb.d());
        for s in 0..d {
            for t in (0..d).filter(|&t| t != s) {
                let (dd, oo) = direct_pure_norms(pa, pb, s, t).unwrap();
                assert_abs_diff_eq!(dd, nd, epsilon = 1e-10);
                assert_abs_diff_eq!(oo, no, epsilon = 1e-10);
            }
        }
    }
    let p = povm(2, 3, 2, GroupingScheme::Sequential, 0.1);
    assert!(direct_pure_norms(&p, &p, 1, 1).is_err());
}

#[test]
fn pure_state_equality_endpoints_and_random() {
    for p in square_families() {
        let d = p.d();
        let prod = PureState::basis_product(d, d, 0, 0).unwrap();
        let (lhs, rhs) = pure_state_equality(&prod, &p).unwrap();
        assert_abs_diff_eq!(lhs, 0.0, epsilon = 1e-8);
        assert_eq!(rhs, 0.0);
        let (lhs, rhs) = pure_state_equality(&PureState::maximally_entangled(d), &p).unwrap();
        assert_abs_diff_eq!(rhs, d as f64 - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lhs, d as f64 - 1.0, epsilon = 1e-8);
        for seed in 0..10 {
            let psi = random_schmidt_rank_state(d, d, 1 + seed as usize % d, seed).unwrap();
            let (lhs, rhs) = pure_state_equality(&psi, &p).unwrap();
            assert!((lhs - rhs).abs() < 1e-8, "seed {seed}: {lhs} vs {rhs}");
        }
    }
    let psi = PureState::maximally_entangled(3);
    assert!(pure_state_equality(&psi, &povm(2, 3, 2, GroupingScheme::Sequential, 0.1)).is_err());
}

#[test]
fn concurrence_bound_below_pure_concurrence() {
    for p in square_families() {
        let d = p.d();
        let c = constants_for(&p, &p).unwrap();
        let prod = product_state(d, d, 3);
        let norm = correlation_matrix(&prod, &p, &p).unwrap().trace_norm();
        // a pure product state saturates the separability bound
        assert!(concurrence_lower_bound(norm, &c, d, d) < 1e-12);
        let mixed = product_state(d, d, 3).mix(0.5, &product_state(d, d, 4)).unwrap();
        let norm = correlation_matrix(&mixed, &p, &p).unwrap().trace_norm();
        assert_eq!(concurrence_lower_bound(norm, &c, d, d), 0.0);
        for seed in 0..10 {
            let psi = random_schmidt_rank_state(d, d, 1 + seed as usize % d, 100 + seed).unwrap();
            let norm = correlation_matrix(&psi.density(), &p, &p).unwrap().trace_norm();
            assert!(concurrence_lower_bound(norm, &c, d, d) <= pure_concurrence(&psi) + 1e-8);
            assert!(norm <= rank_bound(&c, psi.schmidt_rank()) + 1e-9);
        }
    }
}

#[test]
fn realignment_anchors() {
    assert_abs_diff_eq!(realignment_sn_bound(&product_state(3, 4, 1)), 1.0, epsilon = 1e-12);
    for d in 2..=4 {
        let rho = PureState::maximally_entangled(d).density();
        assert_abs_diff_eq!(realignment_sn_bound(&rho), d as f64, epsilon = 1e-12);
        assert_abs_diff_eq!(realignment_baseline(&rho), d as f64 - 1.0, epsilon = 1e-12);
    }
}

#[test]
fn isotropic_closed_form_matches_numeric() {
    let cases = [
        povm(2, 3, 2, GroupingScheme::Sequential, 0.2),
        povm(3, 8, 2, GroupingScheme::Qutrit82, 0.01),
        povm(4, 5, 4, GroupingScheme::Ququart54, -0.04),
        mub_povm(3).unwrap(),
    ];
    for p in &cases {
        for i in 0..=10 {
            let v = i as f64 / 10.0;
            let numeric = correlation_matrix(&isotropic(p.d(), v).unwrap(), p, p).unwrap().trace_norm();
            let closed = isotropic_norm_closed_form(p.d(), p.n(), p.m(), p.x(), v).unwrap();
            assert_abs_diff_eq!(numeric, closed, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(
            isotropic_norm_closed_form(p.d(), p.n(), p.m(), p.x(), 0.0).unwrap(),
            p.n() as f64 / p.m() as f64,
            epsilon = 1e-15
        );
    }
    assert_abs_diff_eq!(isotropic_norm_closed_form(3, 4, 3, 1.0, 1.0).unwrap(), 4.0, epsilon = 1e-12);
    assert!(isotropic_norm_closed_form(3, 4, 3, 1.0, 1.5).is_err());
}

#[test]
fn fidelity_threshold_and_implication() {
    assert_abs_diff_eq!(fidelity_isotropic_threshold(2, 1).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(fidelity_isotropic_threshold(4, 3).unwrap(), 11.0 / 15.0, epsilon = 1e-15);
    assert!(fidelity_isotropic_threshold(3, 3).is_err());
    assert!(fidelity_isotropic_threshold(3, 0).is_err());
    for (d, m) in [(2, 2), (2, 4), (3, 2), (3, 3), (3, 9), (4, 4), (4, 16)] {
        let (lo, hi) = crate::povm::purity_window(d, m);
        for r in 1..d {
            let v_opt = fidelity_isotropic_threshold(d, r).unwrap();
            for xi in 1..=5 {
                let x = lo + (hi - lo) * xi as f64 / 5.0;
                for vi in 1..=10 {
                    let v = v_opt + (1.0 - v_opt) * vi as f64 / 10.0;
                    let (bound, norm) = fidelity_implication(d, m, x, r, v).unwrap();
                    assert!(norm > bound, "d={d} M={m} x={x} r={r} v={v}");
                }
                let (bound, norm) = fidelity_implication(d, m, x, r, v_opt).unwrap();
                assert!((norm - bound).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn fidelity_baseline_values() {
    for d in 2..=4 {
        let me = PureState::maximally_entangled(d).density();
        assert_abs_diff_eq!(fidelity_baseline(&me).unwrap(), d as f64 - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity_baseline(&maximally_mixed(d, d)).unwrap(), 1.0 / d as f64 - 1.0, epsilon = 1e-12);
    }
    assert!(matches!(fidelity_baseline(&maximally_mixed(2, 4)), Err(Error::Unsupported(_))));
}

#[test]
fn sic_constructions() {
    let p = sic_povm_d3();
    assert_abs_diff_eq!(p.x(), 1.0 / 9.0, epsilon = 1e-12);
    assert!(validate_povm(&p, 1e-10).passed);
    let projectors: Vec<ComplexMatrix> = p.effects().iter().map(|e| e.scale(3.0)).collect();
    let mut count = 0;
    for a in 0..9 {
        for b in (a + 1)..9 {
            assert_abs_diff_eq!(projectors[a].trace_product(&projectors[b]).re, 0.25, epsilon = 1e-10);
            count += 1;
        }
    }
    assert_eq!(count, 36);
    let q = sic_povm_d2();
    assert_abs_diff_eq!(q.x(), 0.25, epsilon = 1e-12);
    assert!(validate_povm(&q, 1e-10).passed);

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bad = [Complex64::new(1e-3, 0.0), Complex64::new(s, 0.0), Complex64::new(-s, 0.0)];
    assert!(matches!(sic_from_fiducial(&bad), Err(Error::NotASic(_))));
    assert!(matches!(sic_from_fiducial(&[crate::matkernel::ZERO; 3]), Err(Error::ZeroVector)));
    assert!(matches!(sic_povm(4), Err(Error::Unsupported(_))));
}

#[test]
fn sic_baseline_closed_form() {
    let p = sic_povm_d3();
    for v in [0.0, 0.3, 0.8] {
        let rho = isotropic(3, v).unwrap();
        let norm = correlation_matrix(&rho, &p, &p).unwrap().trace_norm();
        assert_abs_diff_eq!(sic_baseline(&rho).unwrap(), 12.0 * (norm - 2.0 / 12.0), epsilon = 1e-10);
    }
}

/// The trace norm from parameters alone equals the constructed one for
/// every grouping and either sign of `t`.
#[test]
fn parametric_norm_matches_constructed() {
    let mut rng = seeded_rng(31);
    let rho = bell_horodecki_2x4(0.9, 0.6).unwrap();
    let rho44 = crate::states::ququart_mixture(0.3).unwrap();
    let mut perm: Vec<usize> = (0..15).collect();
    for _ in 0..4 {
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let gb = group_basis(&gellmann_basis(4).unwrap(), 5, 4, &GroupingScheme::Explicit(perm.clone())).unwrap();
        let range = t_range(&build_h(&gb), 4).unwrap();
        for t in [range.lo * 0.5, range.hi * 0.5] {
            let pb = build_povm(&gb, t).unwrap();
            let pa = povm(2, 3, 2, GroupingScheme::Sequential, 0.1);
            let built = correlation_matrix(&rho, &pa, &pb).unwrap().trace_norm();
            let fast = parametric_trace_norm(&rho, PovmParams::of(&pa), PovmParams::of(&pb)).unwrap();
            assert_abs_diff_eq!(built, fast, epsilon = 1e-10);
            let built = correlation_matrix(&rho44, &pb, &pb).unwrap().trace_norm();
            let fast = parametric_trace_norm(&rho44, PovmParams::of(&pb), PovmParams::of(&pb)).unwrap();
            assert_abs_diff_eq!(built, fast, epsilon = 1e-10);
        }
    }
    let p = sic_povm_d3();
    let rho = isotropic(3, 0.4).unwrap();
    let built = correlation_matrix(&rho, &p, &p).unwrap().trace_norm();
    let fast = parametric_trace_norm(&rho, PovmParams::of(&p), PovmParams::of(&p)).unwrap();
    assert_abs_diff_eq!(built, fast, epsilon = 1e-10);
}

#[test]
fn gsic_baseline_matches_constructed_gsic() {
    let x = 0.04984;
    let t = t_of_x(3, 9, x).unwrap();
    let gb = group_basis(&gellmann_basis(3).unwrap(), 1, 9, &GroupingScheme::Sequential).unwrap();
    let p = build_povm(&gb, t).unwrap();
    assert_abs_diff_eq!(p.x(), x, epsilon = 1e-14);
    let rho = crate::states::noisy_horodecki_3x3(0.4, 0.995).unwrap();
    let norm = correlation_matrix(&rho, &p, &p).unwrap().trace_norm();
    let want = schmidt_bound(norm, &constants_for(&p, &p).unwrap()).0;
    assert_abs_diff_eq!(gsic_baseline(&rho, x, x).unwrap(), want, epsilon = 1e-9);
    assert!(gsic_baseline(&rho, 0.5, x).is_err());
}

#[test]
fn report_anchors() {
    for (d_a, d_b, pa, pb) in [
        (2, 2, povm(2, 3, 2, GroupingScheme::Sequential, 0.1), povm(2, 3, 2, GroupingScheme::Sequential, 0.1)),
        (3, 3, povm(3, 8, 2, GroupingScheme::Qutrit82, 0.01), povm(3, 8, 2, GroupingScheme::Qutrit82, 0.01)),
        (2, 4, povm(2, 3, 2, GroupingScheme::Sequential, 0.01), povm(4, 5, 4, GroupingScheme::Ququart54, 0.01)),
    ] {
        let r = full_report(&maximally_mixed(d_a, d_b), &pa, &pb, &BaselineSelection::default()).unwrap();
        let want = ((pa.n() * pb.n()) as f64 / (pa.m() * pb.m()) as f64).sqrt();
        assert_abs_diff_eq!(r.trace_norm, want, epsilon = 1e-12);
        assert!(!r.entangled);
        assert_eq!(r.sn_int_lb, 1);
        assert_eq!(r.concurrence_lb, 0.0);
        assert!(r.baselines.is_empty());
    }
}

#[test]
fn report_for_bell_mixture() {
    let pa = povm(2, 3, 2, GroupingScheme::Sequential, 0.01);
    let pb = povm(4, 5, 4, GroupingScheme::Ququart54, 0.01);
    let selection = BaselineSelection { gsic: Some((0.1277, 0.04984)), sic: false, realignment: true, fidelity: false };
    let r = full_report(&bell_horodecki_2x4(0.9, 0.5).unwrap(), &pa, &pb, &selection).unwrap();
    assert!(r.entangled);
    assert_eq!(r.sn_int_lb, 2);
    assert_eq!(r.baselines.keys().collect::<Vec<_>>(), ["gsic", "realignment"]);
    assert!(r.baselines["gsic"] < 0.0);
    let with_sic = BaselineSelection { sic: true, ..selection };
    assert!(matches!(
        full_report(&bell_horodecki_2x4(0.9, 0.5).unwrap(), &pa, &pb, &with_sic),
        Err(Error::Unsupported(_))
    ));
    let r = full_report(&bell_horodecki_2x4(0.9, 0.4).unwrap(), &pa, &pb, &BaselineSelection::default()).unwrap();
    assert!(!r.entangled);
    let json = serde_json::to_value(&r).unwrap();
    for key in ["trace_norm", "constants", "sn_real_lb", "sn_int_lb", "entangled", "concurrence_lb", "baselines"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert!(json["constants"].get("K").is_some());
}
