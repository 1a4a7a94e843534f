//! Non-GHZ trajectory classes: Dicke and anti-W states, generalized-W
//! weight vectors, two-term basis cats, the punctured affine-plane slice
//! and its two-local pairing-Hamiltonian realization, the
//! magic-insulator / magic-generator classification of stabilizer inputs,
//! and Haar endpoint-only statistics.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ghzx::{ghzx_point, membership_closed, rom_closed, MEMBERSHIP_SLACK};
use crate::qcore::{amplitude_damp, DensityOperator};
use crate::stabset::{membership_lp, pair_obstruction, StabDictionary, StabilizerState};
use crate::{binomial, qubit_mask, Error, Result};

type C64 = Complex64;

/// Exact anti-W magic-death threshold `(√3−1)/2` for three qubits.
pub const ANTIW3_THRESHOLD: f64 = 0.36602540378443865;
/// Exact anti-W magic-death threshold for four qubits.
pub const ANTIW4_THRESHOLD: f64 = 0.5;

/// Normalized Dicke state `|D_n^k⟩` amplitudes (uniform over weight-`k`
/// strings).
pub fn dicke_state(n: usize, k: usize) -> Result<Vec<C64>> {
    if n == 0 || k > n {
        return Err(Error::InvalidParameter(format!("invalid Dicke labels n={n}, k={k}")));
    }
    let d = 1usize << n;
    let amp = 1.0 / binomial(n, k).sqrt();
    let mut v = vec![C64::new(0.0, 0.0); d];
    for (x, a) in v.iter_mut().enumerate() {
        if x.count_ones() as usize == k {
            *a = C64::new(amp, 0.0);
        }
    }
    Ok(v)
}

/// Exact amplitude-damped Dicke state by the jump-branch sum: the Kraus
/// branch with jumps on site set `J ⊆ supp` contributes the weight
/// `γ^{|J|} (1-γ)^{k-|J|}` image, a Dicke state of weight `k − |J|` on
/// the complement of `J`.
pub fn dicke_trajectory(n: usize, k: usize, gamma: f64) -> Result<DensityOperator> {
    if n > 6 {
        return Err(Error::CapabilityLimit(format!("dicke trajectory capped at n=6, got {n}")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    let _ = dicke_state(n, k)?;
    let d = 1usize << n;
    let norm = binomial(n, k);
    let mut mat = DMatrix::<C64>::zeros(d, d);
    for jump in 0..d {
        let j = jump.count_ones() as usize;
        if j > k {
            continue;
        }
        // Branch vector: support on weight-(k-j) strings avoiding `jump`.
        let w = (gamma.powi(j as i32) * (1.0 - gamma).powi((k - j) as i32) / norm).sqrt();
        let mut v = Vec::new();
        for y in 0..d {
            if y & jump == 0 && y.count_ones() as usize == k - j {
                v.push(y);
            }
        }
        for &a in &v {
            for &b in &v {
                mat[(a, b)] += C64::new(w * w, 0.0);
            }
        }
    }
    DensityOperator::new(n, mat)
}

/// Membership verdict for damped anti-W states `D_n^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntiwVerdict {
    /// Inside the stabilizer polytope.
    Inside,
    /// Outside the stabilizer polytope.
    Outside,
    /// Not decided by the available one-sided bound (`n ≥ 5`, `γ ≥ 1/2`).
    Unknown,
}

/// Exact anti-W threshold: `(√3−1)/2` at `n = 3`, `1/2` at `n = 4`.
pub fn antiw_threshold(n: usize) -> Result<f64> {
    match n {
        3 => Ok(ANTIW3_THRESHOLD),
        4 => Ok(ANTIW4_THRESHOLD),
        _ => Err(Error::InvalidParameter(format!(
            "exact anti-W threshold known only for n in {{3, 4}}, got {n}"
        ))),
    }
}

/// Membership of the damped anti-W trajectory: exact for `n ∈ {3, 4}`
/// (inside iff `γ ≥ threshold`); for `n ≥ 5` only the one-sided bound
/// `γ < 1/2 ⇒ outside` is reported, with `γ = 1` the trivial vertex.
pub fn antiw_membership(n: usize, gamma: f64) -> Result<AntiwVerdict> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("anti-W requires n >= 3, got {n}")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    if gamma >= 1.0 {
        return Ok(AntiwVerdict::Inside);
    }
    match n {
        3 | 4 => {
            if gamma >= antiw_threshold(n)? - MEMBERSHIP_SLACK {
                Ok(AntiwVerdict::Inside)
            } else {
                Ok(AntiwVerdict::Outside)
            }
        }
        _ => {
            if gamma < 0.5 {
                Ok(AntiwVerdict::Outside)
            } else {
                Ok(AntiwVerdict::Unknown)
            }
        }
    }
}

/// Robustness upper bound of the damped three-qubit anti-W state:
/// `1 + (2/3) max(0, (1−γ)² − 3γ²)`; equals 1 beyond the threshold.
pub fn antiw3_rom_upper(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    let q = 1.0 - gamma;
    Ok(1.0 + 2.0 / 3.0 * (q * q - 3.0 * gamma * gamma).max(0.0))
}

/// The explicit stabilizer decomposition of the damped three-qubit
/// anti-W state, returned as `(coefficients, vectors, residual)` with
/// pieces ordered `[T_01, T_02, T_12, S_+, S_-, |000⟩]`; coefficients are
/// `2γ(1-γ)/3` (pair states), `2(1-γ)²/3` (`S_±`), and `γ² − (1-γ)²/3`
/// (vacuum). All are nonnegative exactly when `γ ≥ (√3−1)/2`, and the
/// combination reconstructs the trajectory with the returned max-abs
/// residual.
#[allow(clippy::type_complexity)]
pub fn antiw3_decomposition(gamma: f64) -> Result<(Vec<f64>, Vec<Vec<C64>>, f64)> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    let q = 1.0 - gamma;
    let n = 3usize;
    let d = 8usize;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut vectors: Vec<Vec<C64>> = Vec::new();
    let mut coefficients: Vec<f64> = Vec::new();
    // Pair states (|e_i⟩+|e_j⟩)/√2.
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[qubit_mask(n, i)] = C64::new(s, 0.0);
            v[qubit_mask(n, j)] = C64::new(s, 0.0);
            vectors.push(v);
            coefficients.push(2.0 * gamma * q / 3.0);
        }
    }
    // S_± = (±|000⟩ + |011⟩ + |101⟩ + |110⟩)/2.
    for sign in [1.0_f64, -1.0] {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[0] = C64::new(0.5 * sign, 0.0);
        for x in [0b011usize, 0b101, 0b110] {
            v[x] = C64::new(0.5, 0.0);
        }
        vectors.push(v);
        coefficients.push(2.0 * q * q / 3.0);
    }
    // Vacuum.
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[0] = C64::new(1.0, 0.0);
    vectors.push(v);
    coefficients.push(gamma * gamma - q * q / 3.0);

    let target = dicke_trajectory(3, 2, gamma)?;
    let mut recon = DMatrix::<C64>::zeros(d, d);
    for (c, vec) in coefficients.iter().zip(&vectors) {
        for a in 0..d {
            for b in 0..d {
                recon[(a, b)] += C64::new(*c, 0.0) * vec[a] * vec[b].conj();
            }
        }
    }
    let mut residual = 0.0_f64;
    for a in 0..d {
        for b in 0..d {
            residual = residual.max((recon[(a, b)] - target.entry(a, b)).norm());
        }
    }
    Ok((coefficients, vectors, residual))
}

/// Outcome of the interior-Dicke postselection obstruction.
#[derive(Debug, Clone)]
pub struct DickeObstruction {
    /// True when the reduction certifies the state outside the polytope.
    pub outside: bool,
    /// Probability of the `|1^s⟩` postselection on the evolved state.
    pub postselect_probability: f64,
    /// Closed form `(1-γ)^s C(n-s, k-s)/C(n, k)` for that probability.
    pub expected_probability: f64,
    /// Max-abs residual between the postselected block and the damped
    /// `W`-state of the remaining sites.
    pub reduction_residual: f64,
    /// A weight-1 row of the reduced state whose dominance inequality
    /// fails, when one exists.
    pub failing_row: Option<usize>,
}

/// Proves interior Dicke states `D_n^k` (with `2 ≤ k ≤ n−2`) outside the
/// stabilizer polytope for `γ < 1`: postselect `s = k−1` sites onto
/// `|1⟩`, which maps the trajectory onto the damped `W`-state of the
/// remaining `n−s` sites (a stabilizer-preserving reduction), then apply
/// the row-dominance obstruction there.
pub fn interior_dicke_obstruction(n: usize, k: usize, gamma: f64) -> Result<DickeObstruction> {
    if !(2..=n.saturating_sub(2)).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "interior Dicke obstruction needs 2 <= k <= n-2, got n={n}, k={k}"
        )));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1)")));
    }
    let rho = dicke_trajectory(n, k, gamma)?;
    let s = k - 1;
    let m = n - s;
    let dm = 1usize << m;
    let top = ((1usize << s) - 1) << m;
    let mut block = DMatrix::<C64>::zeros(dm, dm);
    for a in 0..dm {
        for b in 0..dm {
            block[(a, b)] = rho.entry(top | a, top | b);
        }
    }
    let prob: f64 = (0..dm).map(|a| block[(a, a)].re).sum();
    let expected = (1.0 - gamma).powi(s as i32) * binomial(n - s, k - s) / binomial(n, k);

    let w_reduced = {
        let psi = dicke_state(m, 1)?;
        let rho_w = DensityOperator::from_pure(m, &psi)?;
        amplitude_damp(&rho_w, gamma)?
    };
    let mut residual = 0.0_f64;
    for a in 0..dm {
        for b in 0..dm {
            residual =
                residual.max((block[(a, b)] / C64::new(prob, 0.0) - w_reduced.entry(a, b)).norm());
        }
    }

    // Row dominance on the weight-1 block of the reduced W trajectory.
    let mut failing_row = None;
    for i in 0..m {
        let ei = qubit_mask(m, i);
        let diag = w_reduced.entry(ei, ei).re;
        let off: f64 = (0..m)
            .filter(|&j| j != i)
            .map(|j| w_reduced.entry(ei, qubit_mask(m, j)).norm())
            .sum();
        if off > diag + 1e-12 {
            failing_row = Some(ei);
            break;
        }
    }
    Ok(DickeObstruction {
        outside: failing_row.is_some(),
        postselect_probability: prob,
        expected_probability: expected,
        reduction_residual: residual,
        failing_row,
    })
}

/// Membership of the damped generalized-W state `Σ w_i |e_i⟩` by row
/// dominance on the weight-1 block `B_ij = (1-γ) w_i w_j`: holds only
/// when at most two sites carry equal nonzero weight.
pub fn generalized_w_membership(weights: &[f64], gamma: f64) -> Result<bool> {
    let norm: f64 = weights.iter().map(|w| w * w).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "weights must be normalized; squared sum {norm}"
        )));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(Error::InvalidParameter("weights must be nonnegative".into()));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1)")));
    }
    let q = 1.0 - gamma;
    let m = weights.len();
    let block: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| q * weights[i] * weights[j]).collect())
        .collect();
    Ok(crate::stabset::row_dominance_block(&block))
}

/// Robustness of the damped `α|01⟩ + β|10⟩` state:
/// `1 + 2(1-γ)(αβ − min(α², β²))`. Identically 1 at `α = β = 1/√2`.
pub fn family_b_rom(alpha: f64, gamma: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha={alpha} outside (0, 1)")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    let beta = (1.0 - alpha * alpha).sqrt();
    let q = 1.0 - gamma;
    Ok(1.0 + 2.0 * q * (alpha * beta - (alpha * alpha).min(beta * beta)))
}

/// Analysis of a two-term basis cat `α|x⟩ + β|y⟩`.
#[derive(Debug, Clone)]
pub struct TwoTermCat {
    /// Whether `x` and `y` are bitwise comparable.
    pub comparable: bool,
    /// Effective GHZ length `|x ⊕ y|` in the comparable case.
    pub reduced_d: Option<usize>,
    /// Stabilizer membership at the given `γ` (comparable case: via the
    /// GHZ-`d` reduction; insulator case: always true).
    pub membership: Option<bool>,
    /// Robustness at the given `γ` in the comparable case.
    pub rom: Option<f64>,
    /// Constant-weight equal-amplitude stabilizer input (insulator).
    pub insulator: bool,
    /// Incomparable case: max-abs residual of the product/coherence
    /// saturation `ρ_xx ρ_yy = |ρ_xy|²` on the fully evolved matrix.
    pub saturation_residual: Option<f64>,
    /// Incomparable case: the at most one `γ ∈ [0, 1)` where the
    /// equal-diagonal necessary condition `α²(1-γ)^{|x|} = β²(1-γ)^{|y|}`
    /// can hold.
    pub candidate_gamma: Option<f64>,
}

/// Classifies the damped two-term cat `α|x⟩ + β|y⟩`: comparable strings
/// reduce to the GHZ manifold on the differing sites; incomparable
/// strings saturate the pair-coherence product bound and admit at most
/// one membership point.
pub fn two_term_cat_analysis(
    n: usize,
    x: usize,
    y: usize,
    alpha: f64,
    gamma: f64,
) -> Result<TwoTermCat> {
    let d_full = 1usize
        .checked_shl(n as u32)
        .filter(|&d| d <= 1 << 8)
        .ok_or_else(|| Error::CapabilityLimit("n too large".into()))?;
    if x == y || x >= d_full || y >= d_full {
        return Err(Error::InvalidParameter("need two distinct n-bit strings".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha={alpha} outside (0, 1)")));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1)")));
    }
    let beta = (1.0 - alpha * alpha).sqrt();
    let comparable = x & y == x || x & y == y;
    if comparable {
        let d = (x ^ y).count_ones() as usize;
        // The lower string carries α; if y ⊆ x the GHZ factor amplitudes
        // swap.
        let a_eff = if x & y == x { alpha } else { beta };
        let point = ghzx_point(d.max(2), a_eff, gamma)?;
        let (membership, rom) = if d >= 2 {
            (membership_closed(&point), rom_closed(&point)?)
        } else {
            // Single differing site: a one-qubit cat on the X-Z slice.
            let p0 = a_eff * a_eff + (1.0 - a_eff * a_eff) * gamma;
            let p1 = (1.0 - a_eff * a_eff) * (1.0 - gamma);
            let c = a_eff * (1.0 - a_eff * a_eff).sqrt() * (1.0 - gamma).sqrt();
            (c <= p0.min(p1) + MEMBERSHIP_SLACK, crate::ghzx::rom(p0, p1, c)?)
        };
        return Ok(TwoTermCat {
            comparable: true,
            reduced_d: Some(d),
            membership: Some(membership),
            rom: Some(rom),
            insulator: false,
            saturation_residual: None,
            candidate_gamma: None,
        });
    }

    // Incomparable: evolve the full matrix and check the saturation
    // identity on the (x, y) pair.
    let mut psi = vec![C64::new(0.0, 0.0); d_full];
    psi[x] = C64::new(alpha, 0.0);
    psi[y] = C64::new(beta, 0.0);
    let rho = amplitude_damp(&DensityOperator::from_pure(n, &psi)?, gamma)?;
    let pxx = rho.entry(x, x).re;
    let pyy = rho.entry(y, y).re;
    let cxy = rho.entry(x, y).norm();
    let q = 1.0 - gamma;
    let wx = x.count_ones() as i32;
    let wy = y.count_ones() as i32;
    let residual = (pxx * pyy - cxy * cxy)
        .abs()
        .max((pxx - alpha * alpha * q.powi(wx)).abs())
        .max((pyy - beta * beta * q.powi(wy)).abs());
    let insulator = wx == wy && (alpha - beta).abs() < 1e-12;
    let candidate_gamma = if insulator {
        None
    } else if wx == wy {
        None
    } else {
        let qc = (beta * beta / (alpha * alpha)).powf(1.0 / (wx - wy) as f64);
        (qc > 0.0 && qc <= 1.0).then_some(1.0 - qc)
    };
    Ok(TwoTermCat {
        comparable: false,
        reduced_d: None,
        membership: insulator.then_some(true),
        rom: None,
        insulator,
        saturation_residual: Some(residual),
        candidate_gamma,
    })
}

/// Analysis of the punctured affine-plane slice `α|0^n⟩ + β|D_L⟩`.
#[derive(Debug, Clone)]
pub struct AffineSlice {
    /// Common Hamming weight of the three nonzero words of `L`.
    pub k: usize,
    /// Ground population `α² + β² γ^k`.
    pub p0: f64,
    /// Plane population `β² (1-γ)^k`.
    pub p_l: f64,
    /// Plane coherence `αβ (1-γ)^{k/2}`.
    pub c_l: f64,
    /// Stabilizer membership at the given `γ`.
    pub membership: bool,
    /// Magic-death threshold, when `r < 1/√3`.
    pub gamma_minus: Option<f64>,
    /// Magic-rebirth threshold `1 − (√3 r)^{2/k}`, when `r < 1/√3`.
    pub gamma_plus: Option<f64>,
}

/// Membership and thresholds for the cat over a two-dimensional linear
/// code `L` whose three nonzero words share a common weight `k`:
/// inside iff `p_0 ≥ p_L/3` and `c_L ≤ p_L/√3`; the window
/// `[γ_-, γ_+]` exists iff `r = α/β < 1/√3`.
pub fn affine_plane_slice(
    n: usize,
    basis: (usize, usize),
    alpha: f64,
    gamma: f64,
) -> Result<AffineSlice> {
    let d_full = 1usize << n;
    let (w1, w2) = basis;
    let w3 = w1 ^ w2;
    if w1 == 0 || w2 == 0 || w1 == w2 || w1 >= d_full || w2 >= d_full {
        return Err(Error::InvalidParameter(
            "basis must be two distinct nonzero n-bit words".into(),
        ));
    }
    let k = w1.count_ones() as usize;
    if w2.count_ones() as usize != k || w3.count_ones() as usize != k {
        return Err(Error::InvalidParameter(
            "the three nonzero words of L must share one Hamming weight".into(),
        ));
    }
    let beta = {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha={alpha} outside (0, 1)")));
        }
        (1.0 - alpha * alpha).sqrt()
    };
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    let r = alpha / beta;
    let q = 1.0 - gamma;
    let p0 = alpha * alpha + beta * beta * gamma.powi(k as i32);
    let p_l = beta * beta * q.powi(k as i32);
    let c_l = alpha * beta * q.powf(k as f64 / 2.0);
    let membership = gamma >= 1.0
        || (p0 >= p_l / 3.0 - MEMBERSHIP_SLACK && c_l <= p_l / 3.0_f64.sqrt() + MEMBERSHIP_SLACK);
    let r_max = 1.0 / 3.0_f64.sqrt();
    let (gamma_minus, gamma_plus) = if (r - r_max).abs() <= 1e-9 {
        // The input is itself a stabilizer state; the window collapses to
        // the single point γ = 0.
        (Some(0.0), Some(0.0))
    } else if r < r_max {
        let gp = 1.0 - (3.0_f64.sqrt() * r).powf(2.0 / k as f64);
        // Death: p_0 = p_L/3, i.e. r² + γ^k − (1-γ)^k/3 = 0, increasing.
        let f = |g: f64| r * r + g.powi(k as i32) - (1.0 - g).powi(k as i32) / 3.0;
        let mut lo = 0.0_f64;
        let mut hi = gp;
        if f(lo) <= 0.0 {
            for _ in 0..crate::ghzx::BISECTION_MAX_ITERS {
                let mid = 0.5 * (lo + hi);
                if f(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        } else {
            hi = 0.0;
        }
        (Some(0.5 * (lo + hi)), Some(gp))
    } else {
        (None, None)
    };
    Ok(AffineSlice {
        k,
        p0,
        p_l,
        c_l,
        membership,
        gamma_minus,
        gamma_plus,
    })
}

/// Ground-state analysis of the three-qubit two-local pairing
/// Hamiltonian `μ(N̂−2)² − g Σ_{i<j}(σ_i^+σ_j^+ + σ_i^-σ_j^-)`.
#[derive(Debug, Clone)]
pub struct PairingGroundState {
    /// True when `ξ = g/μ < √3/2`, so the even-sector cat is the unique
    /// ground state.
    pub valid: bool,
    /// Cat amplitude ratio `r(ξ) = √3 ξ / (2 + sqrt(4 + 3ξ²))`.
    pub r: f64,
    /// Corresponding `α = r/√(1+r²)`.
    pub alpha: f64,
    /// Dense ground-state vector from 8×8 diagonalization (`μ = 1`).
    pub state: Vec<C64>,
    /// Ground energy `2μ − sqrt(4μ² + 3g²)` of the even sector.
    pub energy: f64,
    /// Lowest symmetric odd-sector energy `μ − √3 g`.
    pub energy_odd: f64,
    /// Overlap `|⟨ψ_cat|ψ_ground⟩|²` with the closed-form cat.
    pub overlap: f64,
}

/// Diagonalizes the pairing Hamiltonian at `μ = 1`, `g = ξ` and compares
/// the dense ground state with the closed-form vacuum–anti-W cat.
pub fn pairing_ground_state(xi: f64) -> Result<PairingGroundState> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::InvalidParameter(format!("xi={xi} outside (0, inf)")));
    }
    let n = 3usize;
    let d = 8usize;
    let mut h = DMatrix::<f64>::zeros(d, d);
    for x in 0..d {
        let w = x.count_ones() as f64;
        h[(x, x)] = (w - 2.0) * (w - 2.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let pair = qubit_mask(n, i) | qubit_mask(n, j);
                // Pair creation/annihilation flips both bits together.
                if x & pair == 0 || x & pair == pair {
                    h[(x ^ pair, x)] -= xi;
                }
            }
        }
    }
    let eig = h.symmetric_eigen();
    let mut ground = 0usize;
    for idx in 1..d {
        if eig.eigenvalues[idx] < eig.eigenvalues[ground] {
            ground = idx;
        }
    }
    let energy = eig.eigenvalues[ground];
    let gs: Vec<f64> = eig.eigenvectors.column(ground).iter().copied().collect();

    let r = 3.0_f64.sqrt() * xi / (2.0 + (4.0 + 3.0 * xi * xi).sqrt());
    let alpha = r / (1.0 + r * r).sqrt();
    let beta = 1.0 / (1.0 + r * r).sqrt();
    let cat = {
        let mut v = vec![0.0_f64; d];
        v[0] = alpha;
        for x in [0b011usize, 0b101, 0b110] {
            v[x] = beta / 3.0_f64.sqrt();
        }
        v
    };
    let overlap: f64 = cat
        .iter()
        .zip(&gs)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        .powi(2);
    let valid = xi < 3.0_f64.sqrt() / 2.0;
    Ok(PairingGroundState {
        valid,
        r,
        alpha,
        state: gs.into_iter().map(|v| C64::new(v, 0.0)).collect(),
        energy,
        energy_odd: 1.0 - 3.0_f64.sqrt() * xi,
        overlap,
    })
}

/// Insulator/generator label of a pure stabilizer input under
/// homogeneous amplitude damping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabClass {
    /// Stays inside the polytope for every damping strength.
    Insulator,
    /// Exits the polytope immediately for any `0 < γ < 1`.
    Generator,
}

/// Classification of one stabilizer state.
#[derive(Debug, Clone)]
pub struct ClassificationRecord {
    /// Index of the state in the enumeration order.
    pub index: usize,
    /// Insulator or generator.
    pub label: StabClass,
    /// Sorted distinct Hamming weights occurring on the support.
    pub weight_profile: Vec<usize>,
}

/// Classifies a stabilizer state: insulator iff every support string has
/// the same Hamming weight.
pub fn classify_stabilizer(index: usize, stab: &StabilizerState) -> ClassificationRecord {
    let mut weights: Vec<usize> = stab
        .support()
        .iter()
        .map(|x| x.count_ones() as usize)
        .collect();
    weights.sort_unstable();
    weights.dedup();
    let label = if weights.len() == 1 {
        StabClass::Insulator
    } else {
        StabClass::Generator
    };
    ClassificationRecord {
        index,
        label,
        weight_profile: weights,
    }
}

/// Classifies the whole dictionary; returns
/// `(insulator count, generator count, records)`.
pub fn classify_all(dict: &StabDictionary) -> (usize, usize, Vec<ClassificationRecord>) {
    let records: Vec<ClassificationRecord> = dict
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| classify_stabilizer(i, s))
        .collect();
    let insulators = records
        .iter()
        .filter(|r| r.label == StabClass::Insulator)
        .count();
    (insulators, records.len() - insulators, records)
}

/// Per-γ polytope membership of one damped stabilizer input, using the
/// pair-coherence obstruction as a fast outside certificate and the LP
/// oracle otherwise.
pub fn generator_dynamics_check(
    stab: &StabilizerState,
    dict: &StabDictionary,
    gamma_grid: &[f64],
) -> Result<Vec<bool>> {
    let n = dict.n();
    let psi = stab.materialize();
    let rho0 = DensityOperator::from_pure(n, &psi)?;
    let mut verdicts = Vec::with_capacity(gamma_grid.len());
    for &gamma in gamma_grid {
        let rho = amplitude_damp(&rho0, gamma)?;
        let inside = if pair_obstruction(&rho).is_some() {
            false
        } else {
            membership_lp(&rho, dict)?.inside
        };
        verdicts.push(inside);
    }
    Ok(verdicts)
}

/// Statistics of the Haar endpoint-only test.
#[derive(Debug, Clone)]
pub struct HaarStats {
    /// Number of sampled states.
    pub samples: usize,
    /// Samples violating the endpoint pair-coherence obstruction at
    /// every grid `γ`.
    pub violations: usize,
    /// `violations / samples`.
    pub fraction: f64,
    /// Analytic lower bound `1 − 2^{−n}` on the violation probability.
    pub bound: f64,
    /// Three-sigma binomial margin at the bound.
    pub margin: f64,
}

/// Samples Haar-random pure states (normalized complex Gaussians) and
/// tests, analytically per sample, the endpoint pair-coherence
/// obstruction: the damped state violates stabilizer membership at a
/// grid `γ` whenever some `|a_x| > |a_{1^n}| (1-γ)^{(n−|x|)/2}`, because
/// the coherence to `|1^n⟩` and its population survive only the global
/// no-jump branch. Counts samples violating at every grid point.
pub fn haar_endpoint_test(
    n: usize,
    samples: usize,
    seed: u64,
    gamma_grid: &[f64],
) -> Result<HaarStats> {
    if n == 0 || n > 6 {
        return Err(Error::CapabilityLimit(format!("haar test supports 1 <= n <= 6, got {n}")));
    }
    if samples == 0 || gamma_grid.is_empty() {
        return Err(Error::InvalidParameter("need samples and a nonempty grid".into()));
    }
    for &g in gamma_grid {
        if !(0.0..1.0).contains(&g) {
            return Err(Error::InvalidParameter(format!("grid gamma {g} outside [0, 1)")));
        }
    }
    let d = 1usize << n;
    let mut violations = 0usize;
    for sample in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sample as u64);
        let mut amps = Vec::with_capacity(d);
        let mut norm = 0.0_f64;
        for _ in 0..d {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            norm += re * re + im * im;
            amps.push((re, im));
        }
        let norm = norm.sqrt();
        let moduli: Vec<f64> = amps
            .iter()
            .map(|(re, im)| (re * re + im * im).sqrt() / norm)
            .collect();
        let top = moduli[d - 1];
        let all = gamma_grid.iter().all(|&gamma| {
            let q = 1.0 - gamma;
            (0..d - 1).any(|x| {
                let deficit = (n - x.count_ones() as usize) as f64;
                moduli[x] > top * q.powf(deficit / 2.0)
            })
        });
        if all {
            violations += 1;
        }
    }
    let bound = 1.0 - 0.5_f64.powi(n as i32);
    let margin = 3.0 * (bound * (1.0 - bound) / samples as f64).sqrt();
    Ok(HaarStats {
        samples,
        violations,
        fraction: violations as f64 / samples as f64,
        bound,
        margin,
    })
}
