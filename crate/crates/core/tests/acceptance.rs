//! End-to-end acceptance gate: every closed form is checked against an
//! independent oracle (exhaustive enumeration + LP, dense channel
//! simulation, or dense diagonalization). One summary line is printed per
//! criterion; the test fails if any criterion fails.

use magicdamp::extract::*;
use magicdamp::families::*;
use magicdamp::ghzx::*;
use magicdamp::qcore::*;
use magicdamp::stabset::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C64 = Complex64;
type Check = (&'static str, fn() -> Result<(), String>);

fn c01_threshold_regression() -> Result<(), String> {
    let t = thresholds(2, 0.4).map_err(|e| e.to_string())?;
    let gm = t.gamma_minus.ok_or("missing gamma_minus")?;
    let gp = t.gamma_plus.ok_or("missing gamma_plus")?;
    let ge = t.gamma_e.ok_or("missing gamma_e")?;
    for (value, target, name) in [
        (gm, 0.3236, "gamma_minus"),
        (gp, 0.5636, "gamma_plus"),
        (ge, 0.4364, "gamma_e"),
    ] {
        if (value - target).abs() > 5e-4 {
            return Err(format!("{name} = {value}, expected {target} +- 5e-4"));
        }
    }
    // Reparametrized rate window kt = -ln(1 - gamma).
    let kt_lo = -(1.0 - gm).ln();
    let kt_hi = -(1.0 - gp).ln();
    if (kt_lo - 0.391).abs() > 1e-3 || (kt_hi - 0.829).abs() > 1e-3 {
        return Err(format!("kt window [{kt_lo:.4}, {kt_hi:.4}] != [0.391, 0.829]"));
    }
    Ok(())
}

fn c02_complementarity_identity() -> Result<(), String> {
    for n in 2..=8 {
        for k in 1..=13 {
            let alpha = 0.05 * k as f64;
            let t = thresholds(n, alpha).map_err(|e| e.to_string())?;
            let sum = t.gamma_e.ok_or("missing gamma_e")? + t.gamma_plus.ok_or("missing gamma_plus")?;
            if (sum - 1.0).abs() > 1e-12 {
                return Err(format!("n={n} alpha={alpha}: gamma_e + gamma_plus = {sum}"));
            }
        }
    }
    Ok(())
}

fn c03_lp_certification() -> Result<(), String> {
    for n in [2usize, 3] {
        let dict = StabDictionary::new(n).map_err(|e| e.to_string())?;
        for alpha in [0.2, 0.4, 0.55, std::f64::consts::FRAC_1_SQRT_2] {
            for k in 1..=100 {
                let gamma = k as f64 / 101.0;
                let p = ghzx_point(n, alpha, gamma).map_err(|e| e.to_string())?;
                let rho = p.to_density_operator().map_err(|e| e.to_string())?;
                let verdict = membership_lp(&rho, &dict).map_err(|e| e.to_string())?;
                if verdict.inside != membership_closed(&p) {
                    return Err(format!(
                        "membership mismatch at n={n} alpha={alpha} gamma={gamma}: lp={} closed={}",
                        verdict.inside,
                        membership_closed(&p)
                    ));
                }
                let cert = robustness_lp(&rho, &dict).map_err(|e| e.to_string())?;
                let closed = rom_closed(&p).map_err(|e| e.to_string())?;
                if (cert.value - closed).abs() > 1e-6 {
                    return Err(format!(
                        "robustness mismatch at n={n} alpha={alpha} gamma={gamma}: lp={} closed={closed}",
                        cert.value
                    ));
                }
            }
        }
    }
    Ok(())
}

fn c04_enumeration_counts() -> Result<(), String> {
    let expected_states = [6u64, 60, 1080, 36720];
    for (i, &count) in expected_states.iter().enumerate() {
        let n = i + 1;
        let states = enumerate_stabilizer_states(n).map_err(|e| e.to_string())?;
        if states.len() as u64 != count {
            return Err(format!("n={n}: {} states, expected {count}", states.len()));
        }
    }
    let expected_insulators = [(2usize, 8usize), (3, 32), (4, 220)];
    for (n, count) in expected_insulators {
        let dict = StabDictionary::new(n).map_err(|e| e.to_string())?;
        let (ins, _, _) = classify_all(&dict);
        if ins != count {
            return Err(format!("n={n}: {ins} insulators, expected {count}"));
        }
    }
    Ok(())
}

fn c05_bell_splitting() -> Result<(), String> {
    let dict = StabDictionary::new(2).map_err(|e| e.to_string())?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..10 {
        let gamma = 0.05 + 0.9 * k as f64 / 9.0;
        // Phi+ branch.
        let phi = ghz_amplitudes(2, s).map_err(|e| e.to_string())?;
        let rho = amplitude_damp(
            &DensityOperator::from_pure(2, &phi).map_err(|e| e.to_string())?,
            gamma,
        )
        .map_err(|e| e.to_string())?;
        let cert = robustness_lp(&rho, &dict).map_err(|e| e.to_string())?;
        let expected = 1.0 + gamma * (1.0 - gamma);
        if (cert.value - expected).abs() > 1e-6 {
            return Err(format!("Phi+ R({gamma}) = {} != {expected}", cert.value));
        }
        let c = concurrence(&rho).map_err(|e| e.to_string())?;
        if (c - (1.0 - gamma) * (1.0 - gamma)).abs() > 1e-10 {
            return Err(format!("Phi+ concurrence({gamma}) = {c}"));
        }
        // Psi+ branch.
        let mut psi = vec![C64::new(0.0, 0.0); 4];
        psi[1] = C64::new(s, 0.0);
        psi[2] = C64::new(s, 0.0);
        let rho = amplitude_damp(
            &DensityOperator::from_pure(2, &psi).map_err(|e| e.to_string())?,
            gamma,
        )
        .map_err(|e| e.to_string())?;
        let cert = robustness_lp(&rho, &dict).map_err(|e| e.to_string())?;
        if (cert.value - 1.0).abs() > 1e-6 {
            return Err(format!("Psi+ R({gamma}) = {}", cert.value));
        }
        let c = concurrence(&rho).map_err(|e| e.to_string())?;
        if (c - (1.0 - gamma)).abs() > 1e-10 {
            return Err(format!("Psi+ concurrence({gamma}) = {c}"));
        }
    }
    Ok(())
}

fn c06_antiw_thresholds() -> Result<(), String> {
    let thr = antiw_threshold(3).map_err(|e| e.to_string())?;
    let dict = StabDictionary::new(3).map_err(|e| e.to_string())?;
    for (gamma, expected) in [(thr - 1e-3, false), (thr + 1e-3, true)] {
        let rho = dicke_trajectory(3, 2, gamma).map_err(|e| e.to_string())?;
        let verdict = membership_lp(&rho, &dict).map_err(|e| e.to_string())?;
        if verdict.inside != expected {
            return Err(format!(
                "n=3 anti-W LP verdict at gamma={gamma}: {} != {expected}",
                verdict.inside
            ));
        }
    }
    // Decomposition convexity flips exactly at the threshold.
    for k in 0..=1000 {
        let gamma = k as f64 / 1000.0;
        let (coeffs, _, residual) = antiw3_decomposition(gamma).map_err(|e| e.to_string())?;
        if residual > 1e-12 {
            return Err(format!("decomposition residual {residual:.2e} at gamma={gamma}"));
        }
        let convex = coeffs.iter().all(|&c| c >= -1e-14);
        if convex != (gamma >= thr - 1e-12) {
            return Err(format!("convexity flip misplaced at gamma={gamma}"));
        }
    }
    Ok(())
}

fn c07_extraction() -> Result<(), String> {
    // Full-matrix oracle for n <= 5.
    for n in 2..=5 {
        for (alpha, gamma) in [(0.25, 0.15), (0.5, 0.5), (0.7, 0.9)] {
            let closed = parity_extract(n, alpha, gamma).map_err(|e| e.to_string())?;
            let (p, decoded) = full_matrix_extract(n, alpha, gamma).map_err(|e| e.to_string())?;
            let err = (p - closed.success_probability)
                .abs()
                .max((decoded.entry(0, 0).re - closed.decoded[0][0]).abs())
                .max((decoded.entry(1, 1).re - closed.decoded[1][1]).abs())
                .max((decoded.entry(0, 1).re - closed.decoded[0][1]).abs());
            if err > 1e-12 {
                return Err(format!("oracle mismatch {err:.2e} at n={n}"));
            }
        }
    }
    // Lossless identity on 100 random samples.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let n = rng.gen_range(2..=7);
        let alpha = 0.05 + 0.9 * rng.gen::<f64>();
        let gamma = rng.gen::<f64>() * 0.999;
        let (lhs, rhs) = lossless_identity_check(n, alpha, gamma).map_err(|e| e.to_string())?;
        if (lhs - rhs).abs() > 1e-12 {
            return Err(format!("lossless identity off by {:.2e}", (lhs - rhs).abs()));
        }
    }
    // Cat injection convergence.
    let limit = 2.0 - std::f64::consts::SQRT_2;
    let mut prev = f64::INFINITY;
    for n in 2..=10 {
        let c = cat_injection(n).map_err(|e| e.to_string())?;
        if (c.success_probability - limit).abs() > c.epsilon_n / 2.0 + 1e-13 {
            return Err(format!("n={n}: p_succ {} too far from {limit}", c.success_probability));
        }
        if c.epsilon_n >= prev {
            return Err(format!("epsilon_n not decreasing at n={n}"));
        }
        prev = c.epsilon_n;
    }
    Ok(())
}

fn c08_window_asymptotics() -> Result<(), String> {
    for alpha in [0.2, 0.3, 0.4] {
        for n in 2..=12 {
            let (delta, bound) = window_width_and_bound(n, alpha).map_err(|e| e.to_string())?;
            if delta > bound + 1e-12 {
                return Err(format!("n={n} alpha={alpha}: width {delta} exceeds bound {bound}"));
            }
            // The bound saturates the width near ten percent once n is
            // moderately large; the smallest amplitude reaches that level
            // one step later (its exact n=6 ratio is 1.329).
            let ceiling = if n >= 7 {
                1.15
            } else if n == 6 {
                1.35
            } else {
                f64::INFINITY
            };
            if bound / delta > ceiling {
                return Err(format!(
                    "n={n} alpha={alpha}: bound/width = {} > {ceiling}",
                    bound / delta
                ));
            }
        }
    }
    Ok(())
}

fn c09_phase_twist_regression() -> Result<(), String> {
    let a = phase_twist_analysis(2, 0.35, std::f64::consts::FRAC_PI_8).map_err(|e| e.to_string())?;
    let gm = a.gamma_minus.ok_or("missing gamma_minus")?;
    let gp = a.gamma_plus.ok_or("missing gamma_plus")?;
    for (value, target, name) in [
        (gm, 0.413, "gamma_minus"),
        (gp, 0.472, "gamma_plus"),
        (a.delta_n, 0.155, "delta_2"),
    ] {
        if (value - target).abs() > 1e-3 {
            return Err(format!("{name} = {value}, expected {target} +- 1e-3"));
        }
    }
    for phi in [0.0, std::f64::consts::FRAC_PI_4] {
        let a = phase_twist_analysis(2, 0.35, phi).map_err(|e| e.to_string())?;
        if a.delta_n.abs() > 1e-12 {
            return Err(format!("delta_2 = {} at phi = {phi}", a.delta_n));
        }
    }
    Ok(())
}

fn c10_property_suites() -> Result<(), String> {
    // Haar endpoint-only fraction.
    let grid: Vec<f64> = (1..20).map(|k| k as f64 / 20.0).collect();
    for n in [3usize, 4] {
        let stats = haar_endpoint_test(n, 10_000, 424_242, &grid).map_err(|e| e.to_string())?;
        if stats.fraction < stats.bound - stats.margin {
            return Err(format!(
                "n={n}: haar fraction {} below bound {} - {}",
                stats.fraction, stats.bound, stats.margin
            ));
        }
    }
    // Separable decompositions at death surfaces.
    for n in [2usize, 3, 4] {
        let resid = separable_decomposition_at_death(n, 0.35, None).map_err(|e| e.to_string())?;
        if resid > 1e-12 {
            return Err(format!("uniform death decomposition residual {resid:.2e} at n={n}"));
        }
    }
    let alpha = 0.35_f64;
    let r2 = alpha * alpha / (1.0 - alpha * alpha);
    let g0 = 0.45;
    let nonuni = [g0, r2 / g0];
    let resid = separable_decomposition_at_death(2, alpha, Some(&nonuni)).map_err(|e| e.to_string())?;
    if resid > 1e-12 {
        return Err(format!("nonuniform death decomposition residual {resid:.2e}"));
    }
    // Complementary-channel identity.
    let psi = ghz_amplitudes(3, 0.4).map_err(|e| e.to_string())?;
    let rho0 = DensityOperator::from_pure(3, &psi).map_err(|e| e.to_string())?;
    for gamma in [0.2, 0.6, 0.85] {
        let comp = complementary_ad_output(&rho0, gamma).map_err(|e| e.to_string())?;
        let direct = amplitude_damp(&rho0, 1.0 - gamma).map_err(|e| e.to_string())?;
        for i in 0..8 {
            for j in 0..8 {
                if (comp.entry(i, j) - direct.entry(i, j)).norm() > 1e-12 {
                    return Err(format!("complementary channel mismatch at gamma={gamma}"));
                }
            }
        }
    }
    // Negativity bipartition independence.
    let rho = amplitude_damp(&rho0, 0.3).map_err(|e| e.to_string())?;
    let reference = negativity(&rho, &[0]).map_err(|e| e.to_string())?;
    for cut in [vec![1usize], vec![2], vec![0, 1], vec![0, 2]] {
        let v = negativity(&rho, &cut).map_err(|e| e.to_string())?;
        if (v - reference).abs() > 1e-12 {
            return Err(format!("negativity differs across cuts: {v} vs {reference}"));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let checks: Vec<Check> = vec![
        ("threshold regression n=2 alpha=0.4", c01_threshold_regression),
        ("complementarity gamma_e + gamma_plus = 1", c02_complementarity_identity),
        ("LP certification of membership and robustness", c03_lp_certification),
        ("enumeration and insulator counts", c04_enumeration_counts),
        ("Bell splitting robustness and concurrence", c05_bell_splitting),
        ("anti-W thresholds and convex decomposition", c06_antiw_thresholds),
        ("extraction oracle, lossless identity, cat injection", c07_extraction),
        ("window width asymptotic bound", c08_window_asymptotics),
        ("phase-twist regression", c09_phase_twist_regression),
        ("property suites (Haar, separability, complement, negativity)", c10_property_suites),
    ];
    let mut failed = 0usize;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {:2}: PASS — {name}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:2}: FAIL — {name}: {msg}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
