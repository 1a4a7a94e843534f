//! The `verify` subcommand: re-derives the headline closed forms and
//! certifies them against the brute-force oracles (enumeration + LP,
//! dense channel simulation). Prints one PASS/FAIL line per check and
//! reports the failure count.

use magicdamp::families::{antiw3_decomposition, antiw_threshold, classify_all, dicke_trajectory};
use magicdamp::ghzx::{
    ghzx_point, membership_closed, phase_twist_analysis, rom_closed,
    separable_decomposition_at_death, thresholds,
};
use magicdamp::qcore::{
    amplitude_damp, complementary_ad_output, concurrence, ghz_amplitudes, negativity,
    DensityOperator,
};
use magicdamp::stabset::{membership_lp, robustness_lp, StabDictionary};

use crate::CliError;

type Check = Result<(), String>;

/// Runs the suite; returns the textual report and the failure count.
pub fn run(full: bool) -> Result<(String, usize), CliError> {
    let mut report = String::new();
    let mut failures = 0usize;
    let mut record = |name: &str, outcome: Check, report: &mut String| {
        match outcome {
            Ok(()) => report.push_str(&format!("check: PASS — {name}\n")),
            Err(msg) => {
                failures += 1;
                report.push_str(&format!("check: FAIL — {name}: {msg}\n"));
            }
        };
    };

    record("threshold regression n=2 alpha=0.4", check_regression(), &mut report);
    record("complementarity of thresholds", check_complementarity(), &mut report);
    record("enumeration and insulator counts", check_counts(full), &mut report);
    record("closed form vs LP oracle", check_lp(), &mut report);
    record("Bell splitting under damping", check_bell(), &mut report);
    record("anti-W threshold and decomposition", check_antiw(), &mut report);
    record("extraction oracle and lossless identity", check_extraction(), &mut report);
    record("separable decompositions at death", check_separability(), &mut report);
    record("complementary channel identity", check_complement(), &mut report);
    record("negativity bipartition independence", check_negativity(), &mut report);
    record("phase-twist regression", check_twist(), &mut report);

    report.push_str(&format!(
        "verify: {} of {} checks passed\n",
        11 - failures,
        11
    ));
    Ok((report, failures))
}

fn near(value: f64, target: f64, tol: f64, what: &str) -> Check {
    if (value - target).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: {value} vs expected {target} (tol {tol})"))
    }
}

fn check_regression() -> Check {
    let t = thresholds(2, 0.4).map_err(|e| e.to_string())?;
    near(t.gamma_minus.unwrap(), 0.3236, 5e-4, "gamma_minus")?;
    near(t.gamma_plus.unwrap(), 0.5636, 5e-4, "gamma_plus")?;
    near(t.gamma_e.unwrap(), 0.4364, 5e-4, "gamma_e")?;
    near(
        crate::kt_of(t.gamma_minus.unwrap()),
        0.391,
        5e-4,
        "kt at gamma_minus",
    )?;
    near(
        crate::kt_of(t.gamma_plus.unwrap()),
        0.829,
        5e-4,
        "kt at gamma_plus",
    )
}

fn check_complementarity() -> Check {
    for n in 2..=8usize {
        for k in 1..=13usize {
            let alpha = 0.05 * k as f64;
            let t = thresholds(n, alpha).map_err(|e| e.to_string())?;
            if let (Some(ge), Some(gp)) = (t.gamma_e, t.gamma_plus) {
                near(ge + gp, 1.0, 1e-12, &format!("gamma_e+gamma_plus at n={n} alpha={alpha}"))?;
            }
        }
    }
    Ok(())
}

fn check_counts(full: bool) -> Check {
    let expected_states = [6usize, 60, 1080, 36720];
    let expected_insulators = [2usize, 8, 32, 220];
    let max_n = if full { 4 } else { 3 };
    for n in 1..=max_n {
        let dict = StabDictionary::new(n).map_err(|e| e.to_string())?;
        if dict.len() != expected_states[n - 1] {
            return Err(format!("n={n}: {} states, expected {}", dict.len(), expected_states[n - 1]));
        }
        let (ins, gens, _) = classify_all(&dict);
        if ins != expected_insulators[n - 1] || ins + gens != dict.len() {
            return Err(format!(
                "n={n}: {ins} insulators, expected {}",
                expected_insulators[n - 1]
            ));
        }
    }
    Ok(())
}

fn check_lp() -> Check {
    // (n, alpha, grid points) — n=3 is the expensive oracle, kept short.
    let cases = [(2usize, 0.4, 25usize), (2, std::f64::consts::FRAC_1_SQRT_2, 25), (3, 0.3, 8)];
    for (n, alpha, points) in cases {
        let dict = StabDictionary::new(n).map_err(|e| e.to_string())?;
        for i in 0..points {
            let gamma = 0.96 * i as f64 / (points - 1) as f64;
            let point = ghzx_point(n, alpha, gamma).map_err(|e| e.to_string())?;
            let rho = point.to_density_operator().map_err(|e| e.to_string())?;
            let closed_in = membership_closed(&point);
            let lp_in = membership_lp(&rho, &dict).map_err(|e| e.to_string())?.inside;
            if closed_in != lp_in {
                return Err(format!(
                    "membership mismatch at n={n} alpha={alpha} gamma={gamma}: closed {closed_in}, LP {lp_in}"
                ));
            }
            let closed_rom = rom_closed(&point).map_err(|e| e.to_string())?;
            let lp_rom = robustness_lp(&rho, &dict).map_err(|e| e.to_string())?.value;
            near(lp_rom, closed_rom, 1e-6, &format!("rom at n={n} alpha={alpha} gamma={gamma}"))?;
        }
    }
    Ok(())
}

fn check_bell() -> Check {
    let dict = StabDictionary::new(2).map_err(|e| e.to_string())?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..5usize {
        let gamma = 0.1 + 0.2 * i as f64;
        // Phi+ = the r=1 cat: R = 1 + gamma(1-gamma), C = (1-gamma)^2.
        let psi = ghz_amplitudes(2, s).map_err(|e| e.to_string())?;
        let rho0 = DensityOperator::from_pure(2, &psi).map_err(|e| e.to_string())?;
        let rho = amplitude_damp(&rho0, gamma).map_err(|e| e.to_string())?;
        let lp = robustness_lp(&rho, &dict).map_err(|e| e.to_string())?.value;
        near(lp, 1.0 + gamma * (1.0 - gamma), 1e-6, &format!("R(Phi+) at gamma={gamma}"))?;
        let c = concurrence(&rho).map_err(|e| e.to_string())?;
        near(c, (1.0 - gamma) * (1.0 - gamma), 1e-8, &format!("C(Phi+) at gamma={gamma}"))?;

        // Psi+ = (|01> + |10>)/sqrt(2): stays stabilizer, C = 1-gamma.
        use num_complex::Complex64 as C64;
        let mut v = vec![C64::new(0.0, 0.0); 4];
        v[0b01] = C64::new(s, 0.0);
        v[0b10] = C64::new(s, 0.0);
        let rho0 = DensityOperator::from_pure(2, &v).map_err(|e| e.to_string())?;
        let rho = amplitude_damp(&rho0, gamma).map_err(|e| e.to_string())?;
        let lp = robustness_lp(&rho, &dict).map_err(|e| e.to_string())?.value;
        near(lp, 1.0, 1e-6, &format!("R(Psi+) at gamma={gamma}"))?;
        let c = concurrence(&rho).map_err(|e| e.to_string())?;
        near(c, 1.0 - gamma, 1e-8, &format!("C(Psi+) at gamma={gamma}"))?;
    }
    Ok(())
}

fn check_antiw() -> Check {
    let thr = antiw_threshold(3).map_err(|e| e.to_string())?;
    // Decomposition coefficients are a convex combination exactly above
    // the threshold.
    for i in 0..=20usize {
        let gamma = i as f64 / 20.0;
        let (coeffs, _, residual) = antiw3_decomposition(gamma).map_err(|e| e.to_string())?;
        if residual > 1e-12 {
            return Err(format!("decomposition residual {residual} at gamma={gamma}"));
        }
        let convex = coeffs.iter().all(|&c| c >= -1e-12);
        if convex != (gamma >= thr - 1e-12) {
            return Err(format!("convexity flips away from the threshold at gamma={gamma}"));
        }
        near(coeffs.iter().sum::<f64>(), 1.0, 1e-12, "coefficient sum")?;
    }
    // LP verdict flips across the threshold within 1e-3.
    let dict = StabDictionary::new(3).map_err(|e| e.to_string())?;
    for (gamma, expect_inside) in [(thr - 1e-3, false), (thr + 1e-3, true)] {
        let rho = dicke_trajectory(3, 2, gamma).map_err(|e| e.to_string())?;
        let inside = membership_lp(&rho, &dict).map_err(|e| e.to_string())?.inside;
        if inside != expect_inside {
            return Err(format!("LP verdict at gamma={gamma}: inside={inside}"));
        }
    }
    Ok(())
}

fn check_extraction() -> Check {
    use magicdamp::extract::{full_matrix_extract, lossless_identity_check, parity_extract};
    for n in 2..=4usize {
        for (alpha, gamma) in [(0.3, 0.2), (0.55, 0.5), (0.7, 0.85)] {
            let closed = parity_extract(n, alpha, gamma).map_err(|e| e.to_string())?;
            let (p, rho) = full_matrix_extract(n, alpha, gamma).map_err(|e| e.to_string())?;
            near(p, closed.success_probability, 1e-12, "success probability")?;
            near(rho.entry(0, 0).re, closed.decoded[0][0], 1e-12, "decoded population")?;
            near(rho.entry(0, 1).re, closed.decoded[0][1], 1e-12, "decoded coherence")?;
        }
    }
    for i in 0..20usize {
        let n = 2 + i % 5;
        let alpha = 0.1 + 0.04 * i as f64;
        let gamma = 0.97 * (0.05 + 0.047 * i as f64);
        let (lhs, rhs) = lossless_identity_check(n, alpha, gamma).map_err(|e| e.to_string())?;
        near(lhs, rhs, 1e-12, &format!("lossless identity at n={n} alpha={alpha}"))?;
    }
    Ok(())
}

fn check_separability() -> Check {
    for (n, alpha) in [(2usize, 0.4), (3, 0.3), (4, 0.5)] {
        let residual = separable_decomposition_at_death(n, alpha, None).map_err(|e| e.to_string())?;
        if residual > 1e-12 {
            return Err(format!("uniform residual {residual} at n={n} alpha={alpha}"));
        }
    }
    // A nonuniform point on the same death surface.
    let alpha = 0.3_f64;
    let r2 = alpha * alpha / (1.0 - alpha * alpha);
    let g0 = 0.5;
    let g1 = 0.6;
    let site_gammas = [g0, g1, r2 / (g0 * g1)];
    let residual =
        separable_decomposition_at_death(3, alpha, Some(&site_gammas)).map_err(|e| e.to_string())?;
    if residual > 1e-12 {
        return Err(format!("nonuniform residual {residual}"));
    }
    Ok(())
}

fn check_complement() -> Check {
    for gamma in [0.2, 0.5, 0.8] {
        let psi = ghz_amplitudes(3, 0.45).map_err(|e| e.to_string())?;
        let rho0 = DensityOperator::from_pure(3, &psi).map_err(|e| e.to_string())?;
        let env = complementary_ad_output(&rho0, gamma).map_err(|e| e.to_string())?;
        let mirrored = amplitude_damp(&rho0, 1.0 - gamma).map_err(|e| e.to_string())?;
        let d = 8usize;
        for i in 0..d {
            for j in 0..d {
                let diff = (env.entry(i, j) - mirrored.entry(i, j)).norm();
                if diff > 1e-12 {
                    return Err(format!("entry ({i},{j}) differs by {diff} at gamma={gamma}"));
                }
            }
        }
    }
    Ok(())
}

fn check_negativity() -> Check {
    let psi = ghz_amplitudes(3, 0.4).map_err(|e| e.to_string())?;
    let rho0 = DensityOperator::from_pure(3, &psi).map_err(|e| e.to_string())?;
    for gamma in [0.1, 0.4, 0.7] {
        let rho = amplitude_damp(&rho0, gamma).map_err(|e| e.to_string())?;
        let n0 = negativity(&rho, &[0]).map_err(|e| e.to_string())?;
        for subset in [[1usize], [2usize]] {
            let nk = negativity(&rho, &subset).map_err(|e| e.to_string())?;
            near(nk, n0, 1e-12, &format!("negativity across cuts at gamma={gamma}"))?;
        }
    }
    Ok(())
}

fn check_twist() -> Check {
    let a = phase_twist_analysis(2, 0.35, std::f64::consts::FRAC_PI_8).map_err(|e| e.to_string())?;
    near(a.gamma_minus.unwrap(), 0.413, 1e-3, "twisted gamma_minus")?;
    near(a.gamma_plus.unwrap(), 0.472, 1e-3, "twisted gamma_plus")?;
    near(a.delta_n, 0.155, 1e-3, "complementarity deficit")?;
    for phi in [0.0, std::f64::consts::FRAC_PI_4] {
        let b = phase_twist_analysis(2, 0.35, phi).map_err(|e| e.to_string())?;
        near(b.delta_n, 0.0, 1e-12, &format!("deficit at phi={phi}"))?;
    }
    Ok(())
}
