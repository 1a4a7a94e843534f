use approx::assert_abs_diff_eq;
use magicdamp::families::*;
use magicdamp::qcore::{amplitude_damp, DensityOperator};
use magicdamp::stabset::{membership_lp, robustness_lp, StabDictionary};
use num_complex::Complex64;

type C64 = Complex64;

#[test]
fn dicke_branch_sum_matches_generic_channel() {
    for n in 2..=5 {
        for k in 0..=n {
            for gamma in [0.2, 0.65] {
                let branch = dicke_trajectory(n, k, gamma).unwrap();
                let psi = dicke_state(n, k).unwrap();
                let generic =
                    amplitude_damp(&DensityOperator::from_pure(n, &psi).unwrap(), gamma).unwrap();
                let d = 1usize << n;
                for i in 0..d {
                    for j in 0..d {
                        assert!(
                            (branch.entry(i, j) - generic.entry(i, j)).norm() < 1e-12,
                            "n={n} k={k} gamma={gamma} entry ({i},{j})"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn vacuum_dicke_state_is_fixed() {
    let rho = dicke_trajectory(4, 0, 0.7).unwrap();
    assert_abs_diff_eq!(rho.entry(0, 0).re, 1.0, epsilon = 1e-14);
    assert!(dicke_trajectory(7, 1, 0.2).is_err());
    assert!(dicke_state(3, 4).is_err());
}

#[test]
fn antiw_thresholds_and_verdicts() {
    assert_abs_diff_eq!(
        antiw_threshold(3).unwrap(),
        (3.0_f64.sqrt() - 1.0) / 2.0,
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(antiw_threshold(4).unwrap(), 0.5, epsilon = 1e-15);
    assert!(antiw_threshold(5).is_err());

    assert_eq!(antiw_membership(3, 0.3).unwrap(), AntiwVerdict::Outside);
    assert_eq!(antiw_membership(3, 0.4).unwrap(), AntiwVerdict::Inside);
    assert_eq!(antiw_membership(4, 0.49).unwrap(), AntiwVerdict::Outside);
    assert_eq!(antiw_membership(4, 0.5).unwrap(), AntiwVerdict::Inside);
    assert_eq!(antiw_membership(6, 0.3).unwrap(), AntiwVerdict::Outside);
    assert_eq!(antiw_membership(6, 0.7).unwrap(), AntiwVerdict::Unknown);
    assert_eq!(antiw_membership(6, 1.0).unwrap(), AntiwVerdict::Inside);
}

#[test]
fn antiw3_decomposition_is_exact_and_convex_past_threshold() {
    let thr = antiw_threshold(3).unwrap();
    for k in 0..=20 {
        let gamma = k as f64 / 20.0;
        let (coeffs, vectors, residual) = antiw3_decomposition(gamma).unwrap();
        assert!(residual < 1e-12, "gamma={gamma} residual={residual:.2e}");
        let sum: f64 = coeffs.iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
        let convex = coeffs.iter().all(|&c| c >= -1e-14);
        assert_eq!(convex, gamma >= thr - 1e-12, "gamma={gamma}");
        // Each piece is normalized.
        for v in &vectors {
            let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn antiw3_rom_upper_bound_is_tight_against_lp() {
    assert_abs_diff_eq!(antiw3_rom_upper(0.0).unwrap(), 1.0 + 2.0 / 3.0, epsilon = 1e-14);
    assert_abs_diff_eq!(antiw3_rom_upper(0.9).unwrap(), 1.0, epsilon = 1e-14);
    let dict = StabDictionary::new(3).unwrap();
    for k in 0..20 {
        let gamma = 0.02 + 0.96 * k as f64 / 19.0;
        let rho = dicke_trajectory(3, 2, gamma).unwrap();
        let cert = robustness_lp(&rho, &dict).unwrap();
        let bound = antiw3_rom_upper(gamma).unwrap();
        assert!(cert.value <= bound + 1e-7, "gamma={gamma}");
        assert_abs_diff_eq!(cert.value, bound, epsilon = 1e-6);
    }
}

#[test]
fn interior_dicke_states_are_outside_via_reduction() {
    for (n, k) in [(4usize, 2usize), (5, 2), (5, 3), (6, 3)] {
        for gamma in [0.1, 0.5, 0.9] {
            let o = interior_dicke_obstruction(n, k, gamma).unwrap();
            assert!(o.outside, "n={n} k={k} gamma={gamma}");
            assert_abs_diff_eq!(
                o.postselect_probability,
                o.expected_probability,
                epsilon = 1e-12
            );
            assert!(o.reduction_residual < 1e-12);
            assert!(o.failing_row.is_some());
        }
    }
    assert!(interior_dicke_obstruction(3, 2, 0.5).is_err());
    assert!(interior_dicke_obstruction(4, 1, 0.5).is_err());
}

#[test]
fn generalized_w_row_dominance() {
    // Equal-weight W_3 fails for every gamma < 1.
    let w3 = [1.0 / 3.0_f64.sqrt(); 3];
    for gamma in [0.0, 0.4, 0.95] {
        assert!(!generalized_w_membership(&w3, gamma).unwrap());
    }
    // Two equal sites pass (Bell-type insulator).
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!(generalized_w_membership(&[s, s], 0.3).unwrap());
    // Unequal nonzero weights fail: the small-weight rows lose dominance,
    // so at most two equal-weight sites can be inside.
    let mut w = [0.98_f64, 0.14, 0.14142135623730953];
    let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut w {
        *x /= norm;
    }
    assert!(!generalized_w_membership(&w, 0.2).unwrap());
    // A single occupied site is a product state and passes trivially.
    assert!(generalized_w_membership(&[1.0, 0.0, 0.0], 0.2).unwrap());
    assert!(generalized_w_membership(&[0.5, 0.5], 0.2).is_err());
}

#[test]
fn family_b_rom_formula_matches_lp() {
    assert_abs_diff_eq!(
        family_b_rom(std::f64::consts::FRAC_1_SQRT_2, 0.4).unwrap(),
        1.0,
        epsilon = 1e-14
    );
    assert_abs_diff_eq!(family_b_rom(0.6, 0.0).unwrap(), 1.24, epsilon = 1e-12);
    let dict = StabDictionary::new(2).unwrap();
    for alpha in [0.3, 0.5, 0.6, 0.75] {
        for gamma in [0.0, 0.2, 0.5, 0.8, 0.95] {
            let beta = (1.0_f64 - alpha * alpha).sqrt();
            let mut psi = vec![C64::new(0.0, 0.0); 4];
            psi[1] = C64::new(beta, 0.0);
            psi[2] = C64::new(alpha, 0.0);
            let rho =
                amplitude_damp(&DensityOperator::from_pure(2, &psi).unwrap(), gamma).unwrap();
            let cert = robustness_lp(&rho, &dict).unwrap();
            assert_abs_diff_eq!(
                cert.value,
                family_b_rom(alpha, gamma).unwrap(),
                epsilon = 1e-6
            );
        }
    }
}

#[test]
fn two_term_cats_reduce_or_saturate() {
    // Comparable strings: |00> vs |11> is the two-qubit cat.
    let c = two_term_cat_analysis(2, 0b00, 0b11, 0.4, 0.45).unwrap();
    assert!(c.comparable);
    assert_eq!(c.reduced_d, Some(2));
    assert_eq!(c.membership, Some(true));

    // Comparable with spectator sites: |010> vs |011> differs on one site.
    let c = two_term_cat_analysis(3, 0b010, 0b011, 0.4, 0.2).unwrap();
    assert!(c.comparable);
    assert_eq!(c.reduced_d, Some(1));

    // Incomparable, alpha != beta: saturation holds, no window.
    let c = two_term_cat_analysis(2, 0b01, 0b10, 0.6, 0.3).unwrap();
    assert!(!c.comparable);
    assert!(c.saturation_residual.unwrap() < 1e-12);
    assert!(c.candidate_gamma.is_none());
    assert!(!c.insulator);

    // Incomparable equal-weight equal-amplitude: insulator.
    let c = two_term_cat_analysis(2, 0b01, 0b10, std::f64::consts::FRAC_1_SQRT_2, 0.3).unwrap();
    assert!(c.insulator);
    assert_eq!(c.membership, Some(true));

    // Incomparable with different weights: at most one candidate point.
    let c = two_term_cat_analysis(3, 0b011, 0b100, 0.4, 0.5).unwrap();
    assert!(!c.comparable);
    assert!(c.saturation_residual.unwrap() < 1e-12);
    if let Some(g) = c.candidate_gamma {
        assert!((0.0..1.0).contains(&g));
    }

    // Incomparable equal-weight example from a three-site pair.
    let c = two_term_cat_analysis(3, 0b011, 0b101, 0.5, 0.4).unwrap();
    assert!(c.saturation_residual.unwrap() < 1e-12);
    assert!(two_term_cat_analysis(2, 1, 1, 0.5, 0.3).is_err());
}

#[test]
fn affine_plane_minimal_slice_thresholds() {
    // n=3, L spanned by 011 and 101 (third word 110), k=2.
    for alpha in [0.2, 0.35, 0.45] {
        let beta = (1.0_f64 - alpha * alpha).sqrt();
        let r = alpha / beta;
        let s = affine_plane_slice(3, (0b011, 0b101), alpha, 0.3).unwrap();
        assert_eq!(s.k, 2);
        let gm = ((3.0 - 6.0 * r * r).sqrt() - 1.0) / 2.0;
        let gp = 1.0 - 3.0_f64.sqrt() * r;
        assert_abs_diff_eq!(s.gamma_minus.unwrap(), gm, epsilon = 1e-10);
        assert_abs_diff_eq!(s.gamma_plus.unwrap(), gp, epsilon = 1e-12);
        // Membership flips at the closed-form boundaries.
        let inside = affine_plane_slice(3, (0b011, 0b101), alpha, 0.5 * (gm + gp)).unwrap();
        assert!(inside.membership);
        let below = affine_plane_slice(3, (0b011, 0b101), alpha, gm * 0.9).unwrap();
        assert!(!below.membership);
        let above = affine_plane_slice(3, (0b011, 0b101), alpha, gp + 0.5 * (1.0 - gp)).unwrap();
        assert!(!above.membership);
    }

    // r = 1/sqrt(3): the input is a stabilizer state, window collapses.
    let alpha = 0.5;
    let s = affine_plane_slice(3, (0b011, 0b101), alpha, 0.0).unwrap();
    assert!(s.gamma_minus.unwrap().abs() < 1e-6);
    assert!(s.gamma_plus.unwrap().abs() < 1e-10);

    // Invalid L: words of different weight.
    assert!(affine_plane_slice(3, (0b001, 0b011), 0.3, 0.2).is_err());
}

#[test]
fn affine_plane_slice_against_lp_oracle() {
    let dict = StabDictionary::new(3).unwrap();
    let alpha = 0.3;
    let beta = (1.0_f64 - alpha * alpha).sqrt();
    let s0 = affine_plane_slice(3, (0b011, 0b101), alpha, 0.0).unwrap();
    let (gm, gp) = (s0.gamma_minus.unwrap(), s0.gamma_plus.unwrap());
    // Build the slice state and verify membership on both sides of each
    // boundary at 1e-3 resolution.
    for (gamma, expected) in [
        (gm - 1e-3, false),
        (gm + 1e-3, true),
        (gp - 1e-3, true),
        (gp + 1e-3, false),
    ] {
        let mut psi = vec![C64::new(0.0, 0.0); 8];
        psi[0] = C64::new(alpha, 0.0);
        for x in [0b011usize, 0b101, 0b110] {
            psi[x] = C64::new(beta / 3.0_f64.sqrt(), 0.0);
        }
        let rho = amplitude_damp(&DensityOperator::from_pure(3, &psi).unwrap(), gamma).unwrap();
        let verdict = membership_lp(&rho, &dict).unwrap();
        assert_eq!(verdict.inside, expected, "gamma={gamma}");
        assert_eq!(
            affine_plane_slice(3, (0b011, 0b101), alpha, gamma)
                .unwrap()
                .membership,
            expected
        );
    }
}

#[test]
fn pairing_hamiltonian_ground_state() {
    for k in 1..=8 {
        let xi = 0.1 * k as f64;
        let pg = pairing_ground_state(xi).unwrap();
        assert!(pg.valid);
        // Formula vs dense diagonalization.
        assert!(pg.overlap > 1.0 - 1e-10, "xi={xi} overlap={}", pg.overlap);
        assert_abs_diff_eq!(
            pg.energy,
            2.0 - (4.0 + 3.0 * xi * xi).sqrt(),
            epsilon = 1e-10
        );
        assert!(pg.energy < pg.energy_odd);
        assert!(pg.r < 1.0 / 3.0);
        // The realized slice ratio stays below the stabilizer bound.
        assert!(pg.r < 1.0 / 3.0_f64.sqrt());
    }
    // Past the critical coupling the odd sector wins.
    let pg = pairing_ground_state(1.2).unwrap();
    assert!(!pg.valid);
    assert!(2.0 - (4.0 + 3.0 * 1.2_f64 * 1.2).sqrt() > pg.energy_odd);
    assert!(pairing_ground_state(0.0).is_err());
}

#[test]
fn classification_counts() {
    let expected = [(2usize, 8usize, 52usize), (3, 32, 1048)];
    for (n, ins_expected, gen_expected) in expected {
        let dict = StabDictionary::new(n).unwrap();
        let (ins, gens, records) = classify_all(&dict);
        assert_eq!(ins, ins_expected, "n={n}");
        assert_eq!(gens, gen_expected, "n={n}");
        assert_eq!(records.len(), ins + gens);
        // Insulators have singleton weight profiles by definition.
        for r in &records {
            assert_eq!(
                r.label == StabClass::Insulator,
                r.weight_profile.len() == 1
            );
        }
    }
}

#[test]
fn bell_states_classify_and_evolve_as_predicted() {
    let dict = StabDictionary::new(2).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut phi_plus = None;
    let mut psi_plus = None;
    for (i, v) in dict.vectors().iter().enumerate() {
        if (v[0].re - s).abs() < 1e-12 && (v[3].re - s).abs() < 1e-12 && v[1].norm() < 1e-12 {
            phi_plus = Some(i);
        }
        if (v[1].re - s).abs() < 1e-12 && (v[2].re - s).abs() < 1e-12 && v[0].norm() < 1e-12 {
            psi_plus = Some(i);
        }
    }
    let phi_plus = phi_plus.expect("Phi+ in dictionary");
    let psi_plus = psi_plus.expect("Psi+ in dictionary");

    let rec = classify_stabilizer(phi_plus, &dict.states()[phi_plus]);
    assert_eq!(rec.label, StabClass::Generator);
    let rec = classify_stabilizer(psi_plus, &dict.states()[psi_plus]);
    assert_eq!(rec.label, StabClass::Insulator);

    let grid = [0.1, 0.5, 0.9];
    let phi_verdicts = generator_dynamics_check(&dict.states()[phi_plus], &dict, &grid).unwrap();
    assert!(phi_verdicts.iter().all(|&inside| !inside));
    let psi_verdicts = generator_dynamics_check(&dict.states()[psi_plus], &dict, &grid).unwrap();
    assert!(psi_verdicts.iter().all(|&inside| inside));
}

#[test]
fn all_two_qubit_states_have_monotone_membership_sets() {
    // Membership in gamma is either all of [0,1] (insulators) or only the
    // endpoints (generators): no death-rebirth for stabilizer inputs.
    let dict = StabDictionary::new(2).unwrap();
    let grid = [0.15, 0.45, 0.75];
    let (_, _, records) = classify_all(&dict);
    for r in records.iter().step_by(7) {
        let verdicts = generator_dynamics_check(&dict.states()[r.index], &dict, &grid).unwrap();
        match r.label {
            StabClass::Insulator => assert!(verdicts.iter().all(|&v| v)),
            StabClass::Generator => assert!(verdicts.iter().all(|&v| !v)),
        }
    }
}

#[test]
fn haar_states_violate_at_the_endpoint_pair() {
    for n in [3usize, 4] {
        let grid: Vec<f64> = (1..10).map(|k| k as f64 / 10.0).collect();
        let stats = haar_endpoint_test(n, 4000, 7, &grid).unwrap();
        assert!(
            stats.fraction >= stats.bound - stats.margin,
            "n={n} fraction={} bound={}",
            stats.fraction,
            stats.bound
        );
        assert!(stats.fraction <= 1.0);
    }
    // Determinism: same seed, same counts.
    let grid = [0.2, 0.5];
    let a = haar_endpoint_test(3, 500, 11, &grid).unwrap();
    let b = haar_endpoint_test(3, 500, 11, &grid).unwrap();
    assert_eq!(a.violations, b.violations);
    assert!(haar_endpoint_test(9, 10, 0, &grid).is_err());
}
