use std::f64::consts::PI;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regge_core::action::*;
use regge_core::moves::{apply_move, enumerate_moves, MoveKind};
use regge_core::{GluedTriangulation, RationalMu};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

// Reference values computed with 50-digit arithmetic.
const A_3: f64 = 0.8745358896056056;
const A_4_5: f64 = 0.16742910841905808;
const A_36_7: f64 = -0.009347586877578803;
const A_6: f64 = -0.18612428217421568;
const RAW_BOUNDARY_4_SIMPLEX: f64 = 0.5153252149426114;

#[test]
fn reference_values() {
    let p = ActionParams::default();
    for (num, den, want) in [(30, 10, A_3), (36, 8, A_4_5), (36, 7, A_36_7), (6, 1, A_6)] {
        let got = action_at_rational_mu(RationalMu::new(num, den), &p);
        assert!(close(got, want, 1e-14), "{num}/{den}: {got} vs {want}");
    }
    let b = GluedTriangulation::boundary_4_simplex();
    let raw = regge_action_equal_lengths(&b, &p).unwrap();
    assert_eq!(raw.kind, ActionKind::Raw);
    assert!(close(raw.value, RAW_BOUNDARY_4_SIMPLEX, 1e-14));
    let vn = normalized_action(&b, &p).unwrap();
    assert_eq!(vn.kind, ActionKind::VolumeNormalized);
    assert!(close(vn.value, A_3, 1e-14));
}

#[test]
fn flat_degree_and_dihedral_angles() {
    assert!(close(MU_STAR3, 5.104299312119540, 1e-14));
    // Dihedral angle from the angle between facet normals of the standard
    // simplex spanned by the unit vectors of R^{n+1}.
    for n in 2..=6u32 {
        let m = (n + 1) as usize;
        let normal = |i: usize| -> Vec<f64> { (0..m).map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / m as f64).collect() };
        let (a, b) = (normal(0), normal(1));
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let norm: f64 = a.iter().map(|x| x * x).sum::<f64>();
        let theta = PI - (dot / norm).acos();
        assert!(close(dihedral_angle(n), theta, 1e-12), "n = {n}");
        assert!(close(flat_degree(n), 2.0 * PI / theta, 1e-12));
    }
}

fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    d
}

#[test]
fn simplex_volume_matches_cayley_menger() {
    for k in 1..=5u32 {
        for ell in [0.5, 1.0, 3.0] {
            let m = k as usize + 2;
            let mut cm = vec![vec![0.0; m]; m];
            for i in 0..m {
                for j in 0..m {
                    cm[i][j] = match (i, j) {
                        _ if i == j => 0.0,
                        (0, _) | (_, 0) => 1.0,
                        _ => ell * ell,
                    };
                }
            }
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            let v2 = sign * det(cm) / (2f64.powi(k as i32) * fact * fact);
            assert!(close(simplex_volume(k, ell), v2.sqrt(), 1e-12), "k = {k}, ell = {ell}");
        }
    }
}

fn walk_states(n: usize, seed: u64) -> Vec<GluedTriangulation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = GluedTriangulation::boundary_4_simplex();
    let mut out = Vec::new();
    for _ in 0..n {
        let moves: Vec<_> = enumerate_moves(&t, &MoveKind::ALL)
            .into_iter()
            .filter(|m| (2..=12).contains(&(t.tet_count() as i64 + m.kind.tet_delta())))
            .collect();
        t = apply_move(&t, moves.choose(&mut rng).unwrap()).unwrap();
        out.push(t.clone());
    }
    out
}

#[test]
fn edge_sum_agrees_with_mean_degree_formula() {
    let p = ActionParams::default();
    for t in walk_states(300, 11) {
        let sk = t.skeleton();
        let raw = regge_action_equal_lengths(&t, &p).unwrap().value;
        let (n3, n1) = (sk.n3() as f64, sk.n1() as f64);
        // (V1/8)·6·N3·(1/μ − 1/μ*) with μ = 6N3/N1.
        let via_mu = 6.0 * n3 / 8.0 * (n1 / (6.0 * n3) - 1.0 / MU_STAR3);
        assert!((raw - via_mu).abs() < 1e-12 * n3, "{raw} vs {via_mu}");
        let vn = normalized_action(&t, &p).unwrap().value;
        assert!((vn - raw / (n3 * simplex_volume(3, 1.0))).abs() < 1e-12);
    }
}

#[test]
fn action_never_vanishes_on_visited_triangulations() {
    let p = ActionParams::default();
    for t in walk_states(500, 5) {
        let mu = t.mean_bone_degree();
        let a = normalized_action(&t, &p).unwrap().value;
        assert!(a != 0.0);
        assert_eq!(a < 0.0, action_sign(mu) == std::cmp::Ordering::Less);
        assert_eq!(compare_to_flat(mu), mu.value().partial_cmp(&MU_STAR3).unwrap());
    }
}

#[test]
fn sign_is_exact_for_all_small_ratios() {
    // For μ = a/b with small a, b the double-precision value is far from the
    // flat degree, so the plain formula decides the sign.
    for b in 1..200u64 {
        for a in 1..1200u64 {
            let want = if (a as f64 / b as f64) < MU_STAR3 { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
            assert_eq!(action_sign(RationalMu::new(a, b)), want, "{a}/{b}");
        }
    }
}

proptest! {
    #[test]
    fn scaling_laws(num in 1u64..10_000, den in 1u64..10_000, ell in 0.01f64..100.0) {
        let mu = RationalMu::new(num, den);
        let one = ActionParams::default();
        let p = ActionParams::new(ell).unwrap();
        let a1 = action_at_rational_mu(mu, &one);
        prop_assert!(close(action_at_rational_mu(mu, &p), a1 / (ell * ell), 1e-13));
        let p2 = ActionParams::new(2.0 * ell).unwrap();
        prop_assert!(close(action_at_rational_mu(mu, &p2), action_at_rational_mu(mu, &p) / 4.0, 1e-13));
        prop_assert!(close(action_at_mu(mu.value(), &p), action_at_rational_mu(mu, &p), 1e-6));
    }

    #[test]
    fn raw_action_scales_linearly(ell in 0.01f64..100.0) {
        let t = GluedTriangulation::boundary_4_simplex();
        let raw = regge_action_equal_lengths(&t, &ActionParams::new(ell).unwrap()).unwrap().value;
        prop_assert!(close(raw, RAW_BOUNDARY_4_SIMPLEX * ell, 1e-13));
    }
}

#[test]
fn parameter_errors() {
    assert_eq!(ActionParams::new(-1.0), Err(ActionError::Length(-1.0)));
    assert!(ActionParams::new(f64::NAN).is_err());
    assert!(ActionParams::new(f64::INFINITY).is_err());
    let t = GluedTriangulation::doubled_tetrahedron();
    let p = ActionParams::with_dimension(1.0, 2).unwrap();
    assert_eq!(normalized_action(&t, &p), Err(ActionError::DimensionMismatch(2)));
}
