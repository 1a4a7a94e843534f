//! Parity-syndrome magic extraction: postselecting the trivial
//! `Z_i Z_{i+1}` syndrome on a damped cat, Clifford-decoding the endpoint
//! block to a single qubit, distillation-window classification of the
//! decoded Bloch vector, the large-`n` limit, and cat-state injection.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ghzx::{ghzx_point, rom_closed};
use crate::qcore::{amplitude_damp, ghz_amplitudes, DensityOperator};
use crate::stabset::single_qubit_rom;
use crate::{Error, Result};

type C64 = Complex64;

/// Reference error rate of the 15-to-1 `|H⟩`-type protocol.
pub const EPSILON_H: f64 = 0.141;
/// Sufficient `|x|+|z|` threshold for `|H⟩`-type distillation:
/// `√2 (1 − 2 ε_H)`.
pub const H_THRESHOLD: f64 = 1.015405337;
/// Sufficient `|x|+|z|` threshold for `|T⟩`-type distillation: `3/√7`.
pub const T_THRESHOLD: f64 = 1.133893419;

/// Outcome of the parity-syndrome extraction at one `(n, α, γ)` point.
#[derive(Debug, Clone)]
pub struct ExtractionResult {
    /// Qubit count of the cat.
    pub n: usize,
    /// Cat amplitude.
    pub alpha: f64,
    /// Damping strength.
    pub gamma: f64,
    /// Probability of the trivial syndrome, `P_0 + P_n ≥ α²`.
    pub success_probability: f64,
    /// Decoded single-qubit state `[[P_0, c], [c, P_n]] / (P_0+P_n)`.
    pub decoded: [[f64; 2]; 2],
    /// Decoded Bloch vector `(2c, 0, P_0−P_n)/(P_0+P_n)`.
    pub bloch: (f64, f64, f64),
    /// Sign-corrected distillation coordinate `|x| + |z|`.
    pub corrected_coordinate: f64,
    /// `(|x|+|z|)/√2`, the overlap-polarization toward `|H⟩`.
    pub h_polarization: f64,
    /// `(|x|+|z|)/√3`, the overlap-polarization toward `|T⟩`.
    pub t_polarization: f64,
    /// Whether the decoded state leaves the single-qubit stabilizer
    /// octahedron (`|x|+|z| > 1`).
    pub outside_octahedron: bool,
    /// Whether the corrected coordinate clears the `|H⟩`-type sufficient
    /// threshold.
    pub h_distillable: bool,
    /// Whether the corrected coordinate clears the `|T⟩`-type sufficient
    /// threshold.
    pub t_distillable: bool,
}

/// Closed-form parity extraction: postselect the trivial syndrome of the
/// `Z_i Z_{i+1}` checks and decode the endpoint block to one qubit.
pub fn parity_extract(n: usize, alpha: f64, gamma: f64) -> Result<ExtractionResult> {
    let point = ghzx_point(n, alpha, gamma)?;
    let p0 = point.p0();
    let pn = point.pn();
    let c = point.coherence_real()?;
    let p = p0 + pn;
    debug_assert!(p >= alpha * alpha - 1e-14);
    let decoded = [[p0 / p, c / p], [c / p, pn / p]];
    let bloch = (2.0 * c / p, 0.0, (p0 - pn) / p);
    let result = ExtractionResult {
        n,
        alpha,
        gamma,
        success_probability: p,
        decoded,
        bloch,
        corrected_coordinate: bloch.0.abs() + bloch.2.abs(),
        h_polarization: 0.0,
        t_polarization: 0.0,
        outside_octahedron: bloch.0.abs() + bloch.2.abs() > 1.0,
        h_distillable: false,
        t_distillable: false,
    };
    Ok(twirl_and_classify(result))
}

/// Applies the sign-correcting Pauli-X twirl (`z < 0` branch) and fills
/// the distillation-window classification fields.
pub fn twirl_and_classify(mut result: ExtractionResult) -> ExtractionResult {
    let (x, _, z) = result.bloch;
    // X conjugation maps (x, y, z) -> (x, -y, -z); applied when z < 0 so
    // the corrected vector points into the |H⟩ quadrant.
    let coord = x.abs() + z.abs();
    result.corrected_coordinate = coord;
    result.h_polarization = coord / std::f64::consts::SQRT_2;
    result.t_polarization = coord / 3.0_f64.sqrt();
    result.outside_octahedron = coord > 1.0;
    result.h_distillable = coord > H_THRESHOLD;
    result.t_distillable = coord > T_THRESHOLD;
    result
}

/// Full-matrix oracle for the extraction: evolves the dense cat state,
/// projects onto the trivial-syndrome subspace `span{|0^n⟩, |1^n⟩}`,
/// decodes with the explicit CNOT-cascade permutation, and traces out the
/// spectator qubits. Returns `(success_probability, decoded 1-qubit
/// state)`.
pub fn full_matrix_extract(n: usize, alpha: f64, gamma: f64) -> Result<(f64, DensityOperator)> {
    let psi = ghz_amplitudes(n, alpha)?;
    let rho0 = DensityOperator::from_pure(n, &psi)?;
    let rho = amplitude_damp(&rho0, gamma)?;
    let d = 1usize << n;

    // Trivial syndrome of all Z_i Z_{i+1}: the all-equal bitstrings.
    let support = [0usize, d - 1];
    let mut projected = DMatrix::<C64>::zeros(d, d);
    for &i in &support {
        for &j in &support {
            projected[(i, j)] = rho.entry(i, j);
        }
    }
    let p_succ: f64 = support.iter().map(|&i| projected[(i, i)].re).sum();
    if p_succ <= 0.0 {
        return Err(Error::InvalidState("vanishing postselection probability".into()));
    }

    // CNOT cascade (control qubit 0, targets 1..n): basis permutation
    // x -> x with each lower bit XORed by the leading bit.
    let decode = |x: usize| -> usize {
        if x >> (n - 1) & 1 == 1 {
            x ^ ((d - 1) >> 1)
        } else {
            x
        }
    };
    let mut decoded_full = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let v = projected[(i, j)];
            if v.norm_sqr() > 0.0 {
                decoded_full[(decode(i), decode(j))] = v;
            }
        }
    }

    // Trace out qubits 1..n (the low n-1 bits).
    let sub = 1usize << (n - 1);
    let mut one = DMatrix::<C64>::zeros(2, 2);
    for a in 0..2usize {
        for b in 0..2usize {
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..sub {
                acc += decoded_full[(a * sub + s, b * sub + s)];
            }
            one[(a, b)] = acc / C64::new(p_succ, 0.0);
        }
    }
    Ok((p_succ, DensityOperator::new(1, one)?))
}

/// Lossless-in-expectation identity: returns
/// `(p_succ · (R_1q(decoded) − 1), R(trajectory point) − 1)`; the two
/// sides agree to 1e-12.
pub fn lossless_identity_check(n: usize, alpha: f64, gamma: f64) -> Result<(f64, f64)> {
    let result = parity_extract(n, alpha, gamma)?;
    let (x, y, z) = result.bloch;
    let r1 = single_qubit_rom([x, y, z])?;
    let lhs = result.success_probability * (r1 - 1.0);
    let rhs = rom_closed(&ghzx_point(n, alpha, gamma)?)? - 1.0;
    Ok((lhs, rhs))
}

/// Large-`n` sign-corrected distillation coordinate
/// `(2u + u² − 1)/(1 + u²)` of the scaled reborn branch, where
/// `u = r e^{s/2} ≥ 1`. Equals 1 at `u = 1`, peaks at `√2` for
/// `u = 1 + √2`, and returns to 1 as `u → ∞`.
pub fn large_n_coordinate(u: f64) -> Result<f64> {
    if !(u >= 1.0) {
        return Err(Error::InvalidParameter(format!("u={u} below 1")));
    }
    Ok((2.0 * u + u * u - 1.0) / (1.0 + u * u))
}

/// Cat-state injection at the critical input `r = 1` and tuned damping.
#[derive(Debug, Clone)]
pub struct CatInjection {
    /// Tuned damping `γ*_n = 1 − (√2−1)^{2/n}`.
    pub gamma_star: f64,
    /// Decoded single-qubit state.
    pub decoded: [[f64; 2]; 2],
    /// Overlap `⟨H|decoded|H⟩` with the Bloch-vector `(X+Z)/√2` state.
    pub fidelity_with_h: f64,
    /// Postselection probability `2 − √2 + ε_n/2`.
    pub success_probability: f64,
    /// Residual `ε_n = (γ*_n)^n`, decaying super-exponentially.
    pub epsilon_n: f64,
}

/// Runs the injection primitive: damping the `r = 1` cat to
/// `γ*_n` and extracting yields a decoded state approaching `|H⟩` with
/// success probability tending to `2 − √2`.
pub fn cat_injection(n: usize) -> Result<CatInjection> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n={n} below 2")));
    }
    let a = std::f64::consts::SQRT_2 - 1.0;
    let gamma_star = 1.0 - a.powf(2.0 / n as f64);
    let eps = gamma_star.powi(n as i32);
    // Populations at the tuning: P0 = (1+ε)/2, Pn = a²/2, c = a/2.
    let p0 = 0.5 * (1.0 + eps);
    let pn = 0.5 * a * a;
    let c = 0.5 * a;
    let p = p0 + pn;
    let decoded = [[p0 / p, c / p], [c / p, pn / p]];
    // a = √2−1 satisfies 2a/(1+a²) = (1−a²)/(1+a²) = 1/√2.
    debug_assert!((2.0 * a / (1.0 + a * a) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    let x = 2.0 * c / p;
    let z = (p0 - pn) / p;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // ⟨H|ρ|H⟩ = (1 + x/√2 + z/√2) / 2.
    let fidelity_with_h = 0.5 * (1.0 + s * x + s * z);
    Ok(CatInjection {
        gamma_star,
        decoded,
        fidelity_with_h,
        success_probability: p,
        epsilon_n: eps,
    })
}
