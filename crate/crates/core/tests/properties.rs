use proptest::prelude::*;

use snest::basis::{gellmann_basis, group_basis, GroupingScheme};
use snest::criteria::{
    constants_for, corollary1_bound, correlation_matrix, klr_constants, rank_bound, schmidt_bound, sn_int_from_real,
    PovmParams,
};
use snest::povm::{build_h, build_povm, purity_window, t_range, SymmetricPovm};
use snest::random::{complex_gaussian_matrix, seeded_rng};
use snest::states::{random_schmidt_rank_state, DensityMatrix};

/// `(N, M)` pairs in `d` that tile the `d²−1` Gell-Mann operators.
fn layouts(d: usize) -> Vec<(usize, usize)> {
    let total = d * d - 1;
    (2..=total + 1).filter(|m| total.is_multiple_of(m - 1)).map(|m| (total / (m - 1), m)).collect()
}

/// Sequentially grouped POVM at fraction `f` of the admissible `t` interval.
fn povm(d: usize, layout: usize, f: f64) -> SymmetricPovm {
    let options = layouts(d);
    let (n, m) = options[layout % options.len()];
    let gb = group_basis(&gellmann_basis(d).unwrap(), n, m, &GroupingScheme::Sequential).unwrap();
    let r = t_range(&build_h(&gb), m).unwrap();
    build_povm(&gb, r.lerp(f)).unwrap()
}

fn random_state(d_a: usize, d_b: usize, rank: usize, seed: u64) -> DensityMatrix {
    let g = complex_gaussian_matrix(d_a * d_b, rank, &mut seeded_rng(seed));
    let rho = g.matmul(&g.adjoint()).unwrap();
    let tr = rho.trace().re;
    DensityMatrix::new(d_a, d_b, rho.scale(1.0 / tr)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn density_invariants_hold(d_a in 2usize..4, d_b in 2usize..4, rank in 1usize..5, seed in any::<u64>()) {
        let rho = random_state(d_a, d_b, rank, seed);
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.matrix().hermiticity_deviation() < 1e-12);
    }

    #[test]
    fn correlation_blocks_sum_to_one(
        d_a in 2usize..4, d_b in 2usize..4,
        la in 0usize..8, lb in 0usize..8,
        fa in 0.05f64..0.95, fb in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let (pa, pb) = (povm(d_a, la, fa), povm(d_b, lb, fb));
        let rho = random_state(d_a, d_b, 3, seed);
        let p = correlation_matrix(&rho, &pa, &pb).unwrap();
        for alpha in 0..pa.n() {
            for beta in 0..pb.n() {
                prop_assert!((p.block_sum(alpha, beta) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_states_never_exceed_their_rank_bound(
        d_a in 2usize..4, d_b in 2usize..5,
        la in 0usize..8, lb in 0usize..8,
        fa in 0.02f64..0.98, fb in 0.02f64..0.98,
        rank_pick in 0usize..4,
        seed in any::<u64>(),
    ) {
        let (pa, pb) = (povm(d_a, la, fa), povm(d_b, lb, fb));
        let r = 1 + rank_pick % d_a.min(d_b);
        let psi = random_schmidt_rank_state(d_a, d_b, r, seed).unwrap();
        let norm = correlation_matrix(&psi.density(), &pa, &pb).unwrap().trace_norm();
        let c = constants_for(&pa, &pb).unwrap();
        prop_assert!(norm <= rank_bound(&c, r) + 1e-9);
        prop_assert!(schmidt_bound(norm, &c).1 as usize <= r);
    }

    #[test]
    fn integer_bound_is_consistent_and_monotone(s in -5.0f64..20.0, ds in 0.0f64..3.0) {
        let k = sn_int_from_real(s);
        prop_assert!(k >= 1);
        prop_assert!(k <= sn_int_from_real(s + ds));
        if s > 0.0 {
            // the real value bounds SN - 1
            prop_assert!(f64::from(k) >= s + 1.0 - 1e-9 && f64::from(k) < s + 2.0);
        }
    }

    #[test]
    fn corollary_bound_is_the_rank_bound_for_equal_sides(
        d in 2usize..6, m_pick in 0usize..20, x_frac in 0.01f64..1.0, r_pick in 0usize..6,
    ) {
        let options = layouts(d);
        let m = options[m_pick % options.len()].1;
        let (lo, hi) = purity_window(d, m);
        let x = lo + (hi - lo) * x_frac;
        let r = 1 + r_pick % d;
        let p = PovmParams::complete(d, m, x).unwrap();
        let c = klr_constants(p, p).unwrap();
        let a = corollary1_bound(d, m, x, r).unwrap();
        prop_assert!((a - rank_bound(&c, r)).abs() <= 1e-12 * a.abs().max(1.0));
    }
}
