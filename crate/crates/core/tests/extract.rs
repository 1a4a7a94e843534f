use approx::assert_abs_diff_eq;
use magicdamp::extract::*;
use magicdamp::ghzx::{ghzx_point, membership_closed, thresholds};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn undamped_extraction_is_lossless_and_pure() {
    let r = parity_extract(3, 0.6, 0.0).unwrap();
    assert_abs_diff_eq!(r.success_probability, 1.0, epsilon = 1e-14);
    // Decoded state is the pure cat amplitudes squared.
    assert_abs_diff_eq!(r.decoded[0][0], 0.36, epsilon = 1e-14);
    assert_abs_diff_eq!(r.decoded[1][1], 0.64, epsilon = 1e-14);
    assert_abs_diff_eq!(r.decoded[0][1], 0.48, epsilon = 1e-14);
    assert_abs_diff_eq!(r.bloch.1, 0.0, epsilon = 1e-15);
}

#[test]
fn success_probability_is_bounded_below_by_ground_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let n = rng.gen_range(2..=8);
        let alpha = 0.05 + 0.9 * rng.gen::<f64>();
        let gamma = rng.gen::<f64>();
        let r = parity_extract(n, alpha, gamma).unwrap();
        assert!(r.success_probability >= alpha * alpha - 1e-13);
        assert!(r.bloch.0 >= 0.0);
        assert_eq!(r.bloch.1, 0.0);
    }
}

#[test]
fn full_matrix_oracle_matches_closed_form() {
    for n in 2..=5 {
        for (alpha, gamma) in [(0.3, 0.2), (0.55, 0.5), (0.7, 0.85)] {
            let closed = parity_extract(n, alpha, gamma).unwrap();
            let (p, decoded) = full_matrix_extract(n, alpha, gamma).unwrap();
            assert_abs_diff_eq!(p, closed.success_probability, epsilon = 1e-12);
            assert_abs_diff_eq!(decoded.entry(0, 0).re, closed.decoded[0][0], epsilon = 1e-12);
            assert_abs_diff_eq!(decoded.entry(1, 1).re, closed.decoded[1][1], epsilon = 1e-12);
            assert_abs_diff_eq!(decoded.entry(0, 1).re, closed.decoded[0][1], epsilon = 1e-12);
            assert_abs_diff_eq!(decoded.entry(0, 1).im, 0.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn octahedron_exit_matches_polytope_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..100 {
        let n = rng.gen_range(2..=6);
        let alpha = 0.05 + 0.9 * rng.gen::<f64>();
        let gamma = rng.gen::<f64>() * 0.999;
        let r = parity_extract(n, alpha, gamma).unwrap();
        let p = ghzx_point(n, alpha, gamma).unwrap();
        assert_eq!(
            r.outside_octahedron,
            !membership_closed(&p),
            "n={n} alpha={alpha} gamma={gamma}"
        );
    }
}

#[test]
fn lossless_identity_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..100 {
        let n = rng.gen_range(2..=7);
        let alpha = 0.05 + 0.9 * rng.gen::<f64>();
        let gamma = rng.gen::<f64>() * 0.999;
        let (lhs, rhs) = lossless_identity_check(n, alpha, gamma).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }
    // Inside the window both sides vanish.
    let t = thresholds(2, 0.4).unwrap();
    let g = 0.5 * (t.gamma_minus.unwrap() + t.gamma_plus.unwrap());
    let (lhs, rhs) = lossless_identity_check(2, 0.4, g).unwrap();
    assert_abs_diff_eq!(lhs, 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(rhs, 0.0, epsilon = 1e-14);
}

#[test]
fn reborn_branch_needs_no_sign_correction() {
    for n in [2usize, 4, 6] {
        let t = thresholds(n, 0.3).unwrap();
        let gp = t.gamma_plus.unwrap();
        for f in [0.2, 0.6, 0.95] {
            let gamma = gp + f * (1.0 - gp);
            let r = parity_extract(n, 0.3, gamma).unwrap();
            assert!(r.bloch.2 >= -1e-13, "P0 >= Pn expected past rebirth");
        }
    }
}

#[test]
fn distillation_classification_thresholds() {
    // |H>-like Bloch vector: coordinate sqrt(2), both protocols reachable.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut r = parity_extract(2, 0.4, 0.0).unwrap();
    r.bloch = (s, 0.0, s);
    let r = twirl_and_classify(r);
    assert_abs_diff_eq!(r.corrected_coordinate, std::f64::consts::SQRT_2, epsilon = 1e-12);
    assert!(r.h_distillable && r.t_distillable && r.outside_octahedron);
    assert_abs_diff_eq!(r.h_polarization, 1.0, epsilon = 1e-12);

    // Octahedron edge: coordinate 1, neither protocol.
    let mut r = parity_extract(2, 0.4, 0.0).unwrap();
    r.bloch = (0.5, 0.0, -0.5);
    let r = twirl_and_classify(r);
    assert_abs_diff_eq!(r.corrected_coordinate, 1.0, epsilon = 1e-12);
    assert!(!r.h_distillable && !r.t_distillable && !r.outside_octahedron);

    // Threshold constants.
    assert_abs_diff_eq!(
        H_THRESHOLD,
        std::f64::consts::SQRT_2 * (1.0 - 2.0 * EPSILON_H),
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(T_THRESHOLD, 3.0 / 7.0_f64.sqrt(), epsilon = 1e-9);
}

#[test]
fn six_qubit_reborn_peak_reaches_t_distillation() {
    // Scan the reborn branch at n=6, alpha=0.2 for the best coordinate.
    let t = thresholds(6, 0.2).unwrap();
    let gp = t.gamma_plus.unwrap();
    let mut best = 0.0_f64;
    for k in 1..400 {
        let gamma = gp + (1.0 - gp) * k as f64 / 400.0;
        let r = parity_extract(6, 0.2, gamma).unwrap();
        best = best.max(r.corrected_coordinate);
    }
    assert!(best > T_THRESHOLD, "peak coordinate {best} below the T threshold");
}

#[test]
fn large_n_coordinate_profile() {
    assert_abs_diff_eq!(large_n_coordinate(1.0).unwrap(), 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(
        large_n_coordinate(1.0 + std::f64::consts::SQRT_2).unwrap(),
        std::f64::consts::SQRT_2,
        epsilon = 1e-12
    );
    assert!((large_n_coordinate(1e6).unwrap() - 1.0).abs() < 1e-5);
    assert!(large_n_coordinate(0.5).is_err());
    // sqrt(2) is the global maximum.
    for k in 1..200 {
        let u = 1.0 + 0.05 * k as f64;
        assert!(large_n_coordinate(u).unwrap() <= std::f64::consts::SQRT_2 + 1e-12);
    }
}

#[test]
fn cat_injection_converges_to_h() {
    let mut prev_eps = f64::INFINITY;
    for n in 2..=10 {
        let c = cat_injection(n).unwrap();
        // Success probability within eps/2 of the limit 2 - sqrt(2).
        assert_abs_diff_eq!(
            c.success_probability,
            2.0 - std::f64::consts::SQRT_2 + c.epsilon_n / 2.0,
            epsilon = 1e-13
        );
        assert!(c.epsilon_n < prev_eps, "epsilon must decrease with n");
        prev_eps = c.epsilon_n;
        // Decoded state matches the full extraction at the tuned gamma.
        let r = parity_extract(n, std::f64::consts::FRAC_1_SQRT_2, c.gamma_star).unwrap();
        assert_abs_diff_eq!(r.decoded[0][0], c.decoded[0][0], epsilon = 1e-12);
        assert_abs_diff_eq!(r.decoded[0][1], c.decoded[0][1], epsilon = 1e-12);
    }
    let c = cat_injection(8).unwrap();
    assert!(c.fidelity_with_h > 1.0 - 1e-3);
    assert!(cat_injection(1).is_err());
}
