//! Closed-form GHZ-X manifold: trajectory coefficients, stabilizer-polytope
//! membership and robustness, death/rebirth/entanglement thresholds with
//! regime classification, and the dephased / phase-twisted /
//! phase-covariant / nonuniform channel variants.
//!
//! The GHZ-X manifold consists of states diagonal in the computational
//! basis except for the single coherence `c` between `|0^n⟩` and `|1^n⟩`.
//! Local amplitude damping of `α|0^n⟩ + β|1^n⟩` stays on this manifold
//! with weight-resolved populations
//! `P_k = C(n,k) β² (1-γ)^k γ^{n-k}` for `1 ≤ k ≤ n-1`,
//! `P_0 = α² + β² γ^n`, `P_n = β² (1-γ)^n`, and `c = α β (1-γ)^{n/2}`.

use num_complex::Complex64;

use crate::qcore::{
    amplitude_damp, amplitude_damp_sites, concurrence, pauli_moments, DensityOperator,
    PhaseCovariantProfile,
};
use crate::{binomial, Error, Result};

type C64 = Complex64;

/// Slack used by exact-arithmetic membership comparisons.
pub const MEMBERSHIP_SLACK: f64 = 1e-14;
/// Bisection tolerance for all threshold root-finding.
pub const BISECTION_TOL: f64 = 1e-12;
/// Maximum bisection iterations.
pub const BISECTION_MAX_ITERS: usize = 200;

/// A point on the GHZ-X manifold: weight-resolved populations plus the
/// single endpoint coherence.
#[derive(Debug, Clone)]
pub struct GhzXPoint {
    /// Qubit count.
    pub n: usize,
    /// `P_0 .. P_n` (probabilities, sum 1).
    pub populations: Vec<f64>,
    /// Endpoint coherence `⟨0^n|ρ|1^n⟩`; real and nonnegative except in
    /// the phase-twist variant.
    pub coherence: C64,
    /// Ground amplitude of the initial cat state.
    pub alpha: f64,
    /// Excited amplitude `β = sqrt(1-α²)`.
    pub beta: f64,
    /// Damping strength.
    pub gamma: f64,
}

impl GhzXPoint {
    fn validate(&self) -> Result<()> {
        let sum: f64 = self.populations.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("populations sum to {sum}")));
        }
        if self.populations.iter().any(|&p| p < -1e-14) {
            return Err(Error::InvalidState("negative population".into()));
        }
        let p0 = self.populations[0];
        let pn = *self.populations.last().unwrap();
        if self.coherence.norm_sqr() > p0 * pn + 1e-12 {
            return Err(Error::InvalidState(
                "coherence violates PSD of the endpoint block".into(),
            ));
        }
        Ok(())
    }

    /// `P_0`.
    pub fn p0(&self) -> f64 {
        self.populations[0]
    }

    /// `P_n`.
    pub fn pn(&self) -> f64 {
        *self.populations.last().unwrap()
    }

    /// Real coherence accessor; errors on phase-twisted points.
    pub fn coherence_real(&self) -> Result<f64> {
        if self.coherence.im.abs() > 1e-14 {
            return Err(Error::InvalidParameter(
                "operation requires a real-coherence point".into(),
            ));
        }
        Ok(self.coherence.re)
    }

    /// Dense density operator of this point (requires `n` within the dense
    /// qcore range).
    pub fn to_density_operator(&self) -> Result<DensityOperator> {
        let d = 1usize
            .checked_shl(self.n as u32)
            .ok_or_else(|| Error::CapabilityLimit("n too large for dense matrix".into()))?;
        let mut mat = nalgebra::DMatrix::<C64>::zeros(d, d);
        for x in 0..d {
            let k = x.count_ones() as usize;
            let weight_count = binomial(self.n, k);
            mat[(x, x)] = C64::new(self.populations[k] / weight_count, 0.0);
        }
        mat[(0, d - 1)] = self.coherence;
        mat[(d - 1, 0)] = self.coherence.conj();
        DensityOperator::new(self.n, mat)
    }
}

fn check_alpha_gamma(n: usize, alpha: f64, gamma: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n={n} below 2")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha={alpha} outside (0, 1)")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1]")));
    }
    Ok((1.0 - alpha * alpha).sqrt())
}

/// Evaluates the damped-cat trajectory coefficients at `(n, α, γ)`.
pub fn ghzx_point(n: usize, alpha: f64, gamma: f64) -> Result<GhzXPoint> {
    let beta = check_alpha_gamma(n, alpha, gamma)?;
    let q = 1.0 - gamma;
    let mut populations = vec![0.0; n + 1];
    populations[0] = alpha * alpha + beta * beta * gamma.powi(n as i32);
    populations[n] = beta * beta * q.powi(n as i32);
    for k in 1..n {
        populations[k] =
            binomial(n, k) * beta * beta * q.powi(k as i32) * gamma.powi((n - k) as i32);
    }
    let coherence = C64::new(alpha * beta * q.powf(n as f64 / 2.0), 0.0);
    let point = GhzXPoint {
        n,
        populations,
        coherence,
        alpha,
        beta,
        gamma,
    };
    point.validate()?;
    Ok(point)
}

/// Trajectory coefficients for the phase-twisted cat
/// `α|0^n⟩ + β e^{inφ}|1^n⟩`: identical populations, complex coherence
/// `c = α β (1-γ)^{n/2} e^{inφ}`.
pub fn ghzx_point_twisted(n: usize, alpha: f64, gamma: f64, phi: f64) -> Result<GhzXPoint> {
    let mut point = ghzx_point(n, alpha, gamma)?;
    let modulus = point.coherence.re;
    point.coherence = C64::from_polar(modulus, n as f64 * phi);
    point.validate()?;
    Ok(point)
}

/// Closed-form stabilizer-polytope membership.
///
/// Real coherence: inside iff `P_0 ≥ c` and `P_n ≥ c`. Complex coherence
/// (phase twist) uses the Clifford-diamond criterion
/// `|Re c| + |Im c| ≤ min(P_0, P_n)`. The endpoint `γ = 1` is always
/// inside (the trajectory ends at the vertex `|0^n⟩`).
pub fn membership_closed(point: &GhzXPoint) -> bool {
    if point.gamma >= 1.0 {
        return true;
    }
    let p0 = point.p0();
    let pn = point.pn();
    let l1 = point.coherence.re.abs() + point.coherence.im.abs();
    l1 <= p0.min(pn) + MEMBERSHIP_SLACK
}

/// Robustness of magic of a general real GHZ-X state
/// `R = 1 + 2 max(0, |c| − p_0, |c| − p_1)`; requires the PSD condition
/// `|c| ≤ sqrt(p_0 p_1)`.
pub fn rom(p0: f64, p1: f64, c: f64) -> Result<f64> {
    if p0 < -1e-14 || p1 < -1e-14 {
        return Err(Error::InvalidParameter("negative population".into()));
    }
    if c.abs() > (p0 * p1).sqrt() + 1e-12 {
        return Err(Error::InvalidState(
            "coherence violates PSD of the endpoint block".into(),
        ));
    }
    Ok(1.0 + 2.0 * (c.abs() - p0).max(c.abs() - p1).max(0.0))
}

/// Closed-form robustness of magic of a trajectory point.
pub fn rom_closed(point: &GhzXPoint) -> Result<f64> {
    let c = point.coherence_real()?;
    rom(point.p0(), point.pn(), c)
}

/// Amplitude ordering regime of the resource phase diagram (orderings of
/// `γ_-`, `γ_e`, `γ_+`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `γ_e < γ_- < γ_+`: entanglement dies before magic does.
    I,
    /// `γ_- < γ_e < γ_+`: entanglement dies inside the stabilizer window.
    II,
    /// `γ_- < γ_+ < γ_e`: magic is reborn while entanglement persists.
    III,
    /// Measure-zero boundary `γ_e = γ_-` between regimes I and II.
    BoundaryIii,
    /// Measure-zero boundary `γ_e = γ_+` between regimes II and III.
    BoundaryIiIii,
    /// `r ≥ 1`: no stabilizer window (outside for every `γ < 1`).
    NoWindow,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::I => "I",
            Regime::II => "II",
            Regime::III => "III",
            Regime::BoundaryIii => "I/II-boundary",
            Regime::BoundaryIiIii => "II/III-boundary",
            Regime::NoWindow => "no-window",
        };
        write!(f, "{s}")
    }
}

/// All thresholds for one `(n, α)` pair.
#[derive(Debug, Clone)]
pub struct ThresholdSet {
    /// Qubit count.
    pub n: usize,
    /// Cat amplitude.
    pub alpha: f64,
    /// Amplitude ratio `r = α/β`.
    pub r: f64,
    /// Magic-death threshold (unique root of `f_n`); `None` without a
    /// window.
    pub gamma_minus: Option<f64>,
    /// Magic-rebirth threshold `1 − r^{2/n}`.
    pub gamma_plus: Option<f64>,
    /// Bipartite-entanglement death threshold `r^{2/n}`.
    pub gamma_e: Option<f64>,
    /// Genuine-multipartite-entanglement death threshold
    /// `(r/(2^{n-1}-1))^{2/n}`.
    pub gamma_gme: Option<f64>,
    /// Ordering regime.
    pub regime: Regime,
    /// Amplitude boundaries `(α_1^{(n)}, α_2^{(n)})` separating the
    /// regimes.
    pub alpha_boundaries: (f64, f64),
}

/// Bisection on a bracketing interval of a strictly monotone function.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    debug_assert!(flo <= 0.0 && f(hi) >= 0.0, "bisection bracket invalid");
    let _ = flo;
    for _ in 0..BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < BISECTION_TOL * 1e-3 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// The magic-death function `f_n(γ) = α² + β² γ^n − α β (1-γ)^{n/2}`,
/// strictly increasing on `(0, 1)`; its unique root is `γ_-`.
pub fn death_function(n: usize, alpha: f64, gamma: f64) -> f64 {
    let beta = (1.0 - alpha * alpha).sqrt();
    alpha * alpha + beta * beta * gamma.powi(n as i32)
        - alpha * beta * (1.0 - gamma).powf(n as f64 / 2.0)
}

fn classify_ordering(gm: f64, ge: f64, gp: f64) -> Regime {
    const TIE: f64 = 1e-12;
    if (ge - gm).abs() <= TIE {
        Regime::BoundaryIii
    } else if (ge - gp).abs() <= TIE {
        Regime::BoundaryIiIii
    } else if ge < gm {
        Regime::I
    } else if ge < gp {
        Regime::II
    } else {
        Regime::III
    }
}

/// Regime amplitude boundaries
/// `α_1^{(n)} = 1/sqrt(1+(1+2^{2/n})^n)` and `α_2^{(n)} = 1/sqrt(1+2^n)`.
pub fn alpha_boundaries(n: usize) -> (f64, f64) {
    let a1 = 1.0 / (1.0 + (1.0 + 2.0_f64.powf(2.0 / n as f64)).powi(n as i32)).sqrt();
    let a2 = 1.0 / (1.0 + 2.0_f64.powi(n as i32)).sqrt();
    (a1, a2)
}

/// All thresholds and the regime label for `(n, α)`.
pub fn thresholds(n: usize, alpha: f64) -> Result<ThresholdSet> {
    let beta = check_alpha_gamma(n, alpha, 0.0)?;
    let r = alpha / beta;
    let bounds = alpha_boundaries(n);
    if r >= 1.0 {
        return Ok(ThresholdSet {
            n,
            alpha,
            r,
            gamma_minus: None,
            gamma_plus: None,
            gamma_e: None,
            gamma_gme: None,
            regime: Regime::NoWindow,
            alpha_boundaries: bounds,
        });
    }
    let exp = 2.0 / n as f64;
    let gamma_plus = 1.0 - r.powf(exp);
    let gamma_e = r.powf(exp);
    let gamma_gme = (r / (2.0_f64.powi(n as i32 - 1) - 1.0)).powf(exp);
    let gamma_minus = bisect(|g| death_function(n, alpha, g), 0.0, gamma_plus);
    let regime = classify_ordering(gamma_minus, gamma_e, gamma_plus);
    Ok(ThresholdSet {
        n,
        alpha,
        r,
        gamma_minus: Some(gamma_minus),
        gamma_plus: Some(gamma_plus),
        gamma_e: Some(gamma_e),
        gamma_gme: Some(gamma_gme),
        regime,
        alpha_boundaries: bounds,
    })
}

/// Stabilizer-window width `Δ_n = γ_+ − γ_-` together with its analytic
/// upper bound `(2/n) r^{2/n−2} (γ_+)^n`.
pub fn window_width_and_bound(n: usize, alpha: f64) -> Result<(f64, f64)> {
    let t = thresholds(n, alpha)?;
    let (gm, gp) = match (t.gamma_minus, t.gamma_plus) {
        (Some(gm), Some(gp)) => (gm, gp),
        _ => {
            return Err(Error::InvalidParameter(
                "window width requires the re-entrant regime (r < 1)".into(),
            ))
        }
    };
    let delta = gp - gm;
    let bound = (2.0 / n as f64) * t.r.powf(2.0 / n as f64 - 2.0) * gp.powi(n as i32);
    Ok((delta, bound))
}

/// Pointwise resource mirror on the reborn branch at `n = 2`: returns
/// `(R(γ) − 1, ((1-γ)/γ) · C(trajectory at 1-γ))`, which coincide.
pub fn resource_mirror_check(alpha: f64, gamma: f64) -> Result<(f64, f64)> {
    let t = thresholds(2, alpha)?;
    let gp = t.gamma_plus.ok_or_else(|| {
        Error::InvalidParameter("resource mirror requires r < 1".into())
    })?;
    if !(gamma > gp && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma={gamma} outside the reborn branch ({gp}, 1)"
        )));
    }
    let lhs = rom_closed(&ghzx_point(2, alpha, gamma)?)? - 1.0;
    let psi = crate::qcore::ghz_amplitudes(2, alpha)?;
    let rho0 = DensityOperator::from_pure(2, &psi)?;
    let mirrored = amplitude_damp(&rho0, 1.0 - gamma)?;
    let rhs = (1.0 - gamma) / gamma * concurrence(&mirrored)?;
    Ok((lhs, rhs))
}

/// Three-expectation membership witness on the symmetric two-qubit X-slice:
/// inside iff `2|⟨Z₁⟩| + 2|⟨X₁X₂⟩| ≤ 1 + ⟨Z₁Z₂⟩`.
///
/// The input is validated to lie on the slice: every Pauli expectation
/// other than `{1, Z₁, Z₂, Z₁Z₂, X₁X₂, Y₁Y₂}` must vanish below 1e-10,
/// with `⟨Z₁⟩ = ⟨Z₂⟩` and `⟨X₁X₂⟩ = −⟨Y₁Y₂⟩`.
pub fn slice_witness_n2(rho: &DensityOperator) -> Result<bool> {
    if rho.n() != 2 {
        return Err(Error::DimensionMismatch("slice witness requires n=2".into()));
    }
    let m = pauli_moments(rho)?;
    // Linear Pauli indices (base 4, qubit 0 most significant):
    // ZI=12, IZ=3, ZZ=15, XX=5, YY=10.
    let allowed = [0usize, 3, 5, 10, 12, 15];
    for (p, &v) in m.iter().enumerate() {
        if !allowed.contains(&p) && v.abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "off-slice Pauli expectation {v:.3e} at index {p}"
            )));
        }
    }
    if (m[12] - m[3]).abs() > 1e-10 || (m[5] + m[10]).abs() > 1e-10 {
        return Err(Error::InvalidState("input violates the symmetric X-slice".into()));
    }
    Ok(2.0 * m[12].abs() + 2.0 * m[5].abs() <= 1.0 + m[15] + 1e-12)
}

/// Closed-form `n = 2` dephased magic-death threshold
/// `γ_-(η) = [sqrt(α(4ηβ − (4−η²)α)) − ηα] / (2β)`.
pub fn dephased_gamma_minus_n2(alpha: f64, eta: f64) -> f64 {
    let beta = (1.0 - alpha * alpha).sqrt();
    ((alpha * (4.0 * eta * beta - (4.0 - eta * eta) * alpha)).sqrt() - eta * alpha) / (2.0 * beta)
}

/// Thresholds for amplitude damping composed with local dephasing of
/// squared coherence retention `η ∈ (0, 1]`.
///
/// `γ_e = η r^{2/n}`, `γ_+ = 1 − η r^{2/n}` (so `γ_e + γ_+ = 1` holds for
/// any `η`); the trajectory is re-entrant iff `r < η^{n/2}`, and `γ_-` is
/// the unique root of
/// `f_{n,η}(γ) = α² + β² γ^n − η^{n/2} α β (1-γ)^{n/2}`.
pub fn dephased_thresholds(n: usize, alpha: f64, eta: f64) -> Result<ThresholdSet> {
    let beta = check_alpha_gamma(n, alpha, 0.0)?;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eta={eta} outside (0, 1] (eta=0 is the degenerate diagonal trajectory)"
        )));
    }
    let r = alpha / beta;
    let bounds = alpha_boundaries(n);
    let reentrant = r < eta.powf(n as f64 / 2.0);
    if !reentrant {
        return Ok(ThresholdSet {
            n,
            alpha,
            r,
            gamma_minus: None,
            gamma_plus: None,
            gamma_e: None,
            gamma_gme: None,
            regime: Regime::NoWindow,
            alpha_boundaries: bounds,
        });
    }
    let exp = 2.0 / n as f64;
    let gamma_e = eta * r.powf(exp);
    let gamma_plus = 1.0 - eta * r.powf(exp);
    let f = |g: f64| {
        alpha * alpha + beta * beta * g.powi(n as i32)
            - eta.powf(n as f64 / 2.0) * alpha * beta * (1.0 - g).powf(n as f64 / 2.0)
    };
    let gamma_minus = bisect(f, 0.0, gamma_plus);
    let regime = classify_ordering(gamma_minus, gamma_e, gamma_plus);
    Ok(ThresholdSet {
        n,
        alpha,
        r,
        gamma_minus: Some(gamma_minus),
        gamma_plus: Some(gamma_plus),
        gamma_e: Some(gamma_e),
        gamma_gme: None,
        regime,
        alpha_boundaries: bounds,
    })
}

/// Result of the phase-twist analysis.
#[derive(Debug, Clone)]
pub struct PhaseTwistAnalysis {
    /// Diamond-norm factor `F_n(φ) = |cos nφ| + |sin nφ|`.
    pub f_n: f64,
    /// Rebirth threshold `1 − (r F_n)^{2/n}` when `r F_n < 1`.
    pub gamma_plus: Option<f64>,
    /// Death threshold (unique root of the twisted death function) when
    /// the window is genuine.
    pub gamma_minus: Option<f64>,
    /// Complementarity deficit `δ_n = r^{2/n}(F_n^{2/n} − 1)`.
    pub delta_n: f64,
    /// Whether the rebirth threshold is genuine (a nonempty stabilizer
    /// window exists).
    pub genuine: bool,
}

/// Closed-form `n = 2` phase-twisted magic-death threshold.
pub fn phase_twist_gamma_minus_n2(alpha: f64, phi: f64) -> f64 {
    let beta = (1.0 - alpha * alpha).sqrt();
    let f2 = twist_factor(2, phi);
    ((alpha * (4.0 * f2 * beta - (4.0 - f2 * f2) * alpha)).sqrt() - f2 * alpha) / (2.0 * beta)
}

/// `F_n(φ) = |cos nφ| + |sin nφ|`.
pub fn twist_factor(n: usize, phi: f64) -> f64 {
    let a = n as f64 * phi;
    a.cos().abs() + a.sin().abs()
}

/// Threshold analysis for the phase-twisted cat `α|0^n⟩ + β e^{inφ}|1^n⟩`.
///
/// Membership under twist follows the Clifford-diamond criterion, so the
/// effective coherence scale is `|c| F_n(φ)`; the entanglement threshold
/// is φ-independent while the magic boundary moves, producing the
/// complementarity deficit `δ_n`.
pub fn phase_twist_analysis(n: usize, alpha: f64, phi: f64) -> Result<PhaseTwistAnalysis> {
    let beta = check_alpha_gamma(n, alpha, 0.0)?;
    let r = alpha / beta;
    let f_n = twist_factor(n, phi);
    let exp = 2.0 / n as f64;
    let delta_n = r.powf(exp) * (f_n.powf(exp) - 1.0);
    let rf = r * f_n;
    if rf >= 1.0 {
        return Ok(PhaseTwistAnalysis {
            f_n,
            gamma_plus: None,
            gamma_minus: None,
            delta_n,
            genuine: false,
        });
    }
    let gamma_plus = 1.0 - rf.powf(exp);
    // Genuine rebirth requires the P0 constraint strict at the Pn crossing.
    let genuine = gamma_plus.powi(n as i32) > r * r * (f_n * f_n - 1.0);
    let gamma_minus = if genuine {
        let f = |g: f64| {
            alpha * alpha + beta * beta * g.powi(n as i32)
                - f_n * alpha * beta * (1.0 - g).powf(n as f64 / 2.0)
        };
        Some(bisect(f, 0.0, gamma_plus))
    } else {
        None
    };
    Ok(PhaseTwistAnalysis {
        f_n,
        gamma_plus: Some(gamma_plus),
        gamma_minus,
        delta_n,
        genuine,
    })
}

/// Entanglement-death and magic-rebirth thresholds of a real
/// phase-covariant profile, by bracketed bisection of
/// `r^{2/n} S(γ) = γ` and `r^{2/n} S(γ) = 1 − γ`.
///
/// Returns `(γ_e, γ_+, reflection_holds)` with
/// `reflection_holds ⇔ |S(γ_e) − S(1 − γ_e)| < 1e-10`. The scanned grid
/// must show exactly one sign change per equation; multiple sign changes
/// raise an ambiguity error rather than choosing a root.
pub fn phase_covariant_thresholds(
    profile: &PhaseCovariantProfile,
    n: usize,
    r: f64,
) -> Result<(f64, f64, bool)> {
    if !profile.is_real() {
        return Err(Error::InvalidParameter(
            "threshold reflection analysis requires a real profile".into(),
        ));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r={r} outside (0, inf)")));
    }
    let scale = r.powf(2.0 / n as f64);
    let ge_fn = |g: f64| -> Result<f64> { Ok(scale * profile.s_profile(g)? - g) };
    let gp_fn = |g: f64| -> Result<f64> { Ok(scale * profile.s_profile(g)? - (1.0 - g)) };
    let gamma_e = unique_root(&ge_fn, "entanglement-death")?;
    let gamma_plus = unique_root(&gp_fn, "magic-rebirth")?;
    let reflection_holds =
        (profile.s_profile(gamma_e)? - profile.s_profile(1.0 - gamma_e)?).abs() < 1e-10;
    Ok((gamma_e, gamma_plus, reflection_holds))
}

/// Finds the unique sign change of `f` on a fine grid over (0, 1) and
/// polishes it by bisection; errors if zero or several sign changes are
/// found.
fn unique_root(f: &dyn Fn(f64) -> Result<f64>, what: &str) -> Result<f64> {
    const GRID: usize = 4000;
    let mut brackets: Vec<(f64, f64, bool)> = Vec::new();
    let mut prev_g = 1.0 / GRID as f64;
    let mut prev_v = f(prev_g)?;
    for k in 2..GRID {
        let g = k as f64 / GRID as f64;
        let v = f(g)?;
        if prev_v == 0.0 || prev_v.signum() != v.signum() {
            brackets.push((prev_g, g, prev_v < 0.0));
        }
        prev_g = g;
        prev_v = v;
    }
    match brackets.len() {
        0 => Err(Error::InvalidParameter(format!(
            "no {what} threshold inside (0, 1) for this profile"
        ))),
        1 => {
            let (lo, hi, increasing) = brackets[0];
            let g = if increasing {
                bisect(|x| f(x).unwrap_or(f64::NAN), lo, hi)
            } else {
                bisect(|x| -f(x).unwrap_or(f64::NAN), lo, hi)
            };
            Ok(g)
        }
        k => Err(Error::Ambiguous(format!(
            "{k} sign changes for the {what} threshold; the profile admits multiple roots"
        ))),
    }
}

/// Endpoint analysis of site-dependent (nonuniform) amplitude damping of
/// the cat `α|0^n⟩ + β|1^n⟩`.
#[derive(Debug, Clone)]
pub struct NonuniformAnalysis {
    /// Ground population `α² + β² ∏ γ_i`.
    pub p0: f64,
    /// Excited-endpoint population `β² ∏ (1-γ_i)`.
    pub p_end: f64,
    /// Endpoint coherence `α β ∏ sqrt(1-γ_i)`.
    pub coherence: f64,
    /// Closed-form stabilizer membership (endpoint criterion).
    pub membership: bool,
    /// Whether `∏ γ_i = r²` (entanglement-death / full-separability
    /// surface) within 1e-12.
    pub on_death_surface: bool,
    /// Whether `∏ (1-γ_i) = r²` (magic-rebirth surface) within 1e-12.
    pub on_rebirth_surface: bool,
    /// The bipartition-independent 2×2 partial-transpose block
    /// determinant `β² ∏(1-γ_i) (β² ∏γ_i − α²)`, verified on the full
    /// matrix across all bipartitions.
    pub pt_determinant: f64,
    /// Geometric-mean death coordinate `(∏ γ_i)^{1/n}`.
    pub geo_mean_death: f64,
    /// Geometric-mean rebirth coordinate `1 − (∏ (1-γ_i))^{1/n}`.
    pub geo_mean_rebirth: f64,
}

/// Nonuniform endpoint quantities, surfaces, and the PT-minor determinant
/// (verified bipartition-independent on the fully evolved matrix).
pub fn nonuniform_analysis(alpha: f64, site_gammas: &[f64]) -> Result<NonuniformAnalysis> {
    let n = site_gammas.len();
    let beta = check_alpha_gamma(n.max(2), alpha, 0.0)?;
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 sites".into()));
    }
    for &g in site_gammas {
        if !(0.0..1.0).contains(&g) {
            return Err(Error::InvalidParameter(format!("site gamma {g} outside [0, 1)")));
        }
    }
    let r2 = (alpha / beta) * (alpha / beta);
    let prod_g: f64 = site_gammas.iter().product();
    let prod_q: f64 = site_gammas.iter().map(|g| 1.0 - g).product();
    let p0 = alpha * alpha + beta * beta * prod_g;
    let p_end = beta * beta * prod_q;
    let coherence = alpha * beta * prod_q.sqrt();
    let membership = coherence <= p0.min(p_end) + MEMBERSHIP_SLACK;

    // Evolve the full matrix and verify bipartition independence of the
    // endpoint PT-minor determinant.
    let psi = crate::qcore::ghz_amplitudes(n, alpha)?;
    let rho0 = DensityOperator::from_pure(n, &psi)?;
    let rho = amplitude_damp_sites(&rho0, site_gammas)?;
    let d = 1usize << n;
    let c_full = rho.entry(0, d - 1).norm();
    let mut pt_determinant = f64::NAN;
    for mask in 1..(d - 1) {
        // Bipartition A = set bits of `mask` (skip complement duplicates).
        if mask & 1 == 0 {
            continue;
        }
        let a = rho.entry(mask, mask).re;
        let b = rho.entry(d - 1 - mask, d - 1 - mask).re;
        let det = a * b - c_full * c_full;
        if pt_determinant.is_nan() {
            pt_determinant = det;
        } else if (det - pt_determinant).abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "PT-minor determinant varies across bipartitions: {det} vs {pt_determinant}"
            )));
        }
    }
    Ok(NonuniformAnalysis {
        p0,
        p_end,
        coherence,
        membership,
        on_death_surface: (prod_g - r2).abs() < 1e-12,
        on_rebirth_surface: (prod_q - r2).abs() < 1e-12,
        pt_determinant,
        geo_mean_death: prod_g.powf(1.0 / n as f64),
        geo_mean_rebirth: 1.0 - prod_q.powf(1.0 / n as f64),
    })
}

/// Explicit fully separable decomposition on the death surface
/// `∏ γ_i = r²`: builds `ρ = β² τ + α² |0^n⟩⟨0^n|` with `τ` the diagonal
/// product mixture `∏ γ_i^{1-x_i}(1-γ_i)^{x_i}` plus the endpoint
/// coherence `sqrt(∏ γ_i(1-γ_i))`, and returns the max-abs residual
/// against the fully evolved matrix.
pub fn separable_decomposition_at_death(
    n: usize,
    alpha: f64,
    site_gammas: Option<&[f64]>,
) -> Result<f64> {
    let beta = check_alpha_gamma(n, alpha, 0.0)?;
    let r = alpha / beta;
    let homogeneous;
    let gammas: &[f64] = match site_gammas {
        Some(g) => {
            if g.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "expected {n} site gammas, got {}",
                    g.len()
                )));
            }
            g
        }
        None => {
            homogeneous = vec![r.powf(2.0 / n as f64); n];
            &homogeneous
        }
    };
    let prod_g: f64 = gammas.iter().product();
    if (prod_g - r * r).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "parameters off the death surface: prod(gamma) = {prod_g}, r^2 = {}",
            r * r
        )));
    }
    let d = 1usize << n;
    let mut expected = nalgebra::DMatrix::<C64>::zeros(d, d);
    for x in 0..d {
        let mut w = 1.0;
        for (site, &g) in gammas.iter().enumerate() {
            if crate::qubit_bit(x, n, site) == 1 {
                w *= 1.0 - g;
            } else {
                w *= g;
            }
        }
        expected[(x, x)] = C64::new(beta * beta * w, 0.0);
    }
    let coh: f64 = gammas.iter().map(|g| g * (1.0 - g)).product::<f64>().sqrt();
    expected[(0, d - 1)] = C64::new(beta * beta * coh, 0.0);
    expected[(d - 1, 0)] = C64::new(beta * beta * coh, 0.0);
    expected[(0, 0)] += C64::new(alpha * alpha, 0.0);

    let psi = crate::qcore::ghz_amplitudes(n, alpha)?;
    let rho0 = DensityOperator::from_pure(n, &psi)?;
    let rho = amplitude_damp_sites(&rho0, gammas)?;
    let mut residual = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            residual = residual.max((rho.entry(i, j) - expected[(i, j)]).norm());
        }
    }
    Ok(residual)
}

/// Facet–minor mirror between system and environment outputs: returns
/// `(c_S²/(p_1^S)², c_E²/(a·b))` for the bipartition {site 0 | rest}; both
/// sides equal `r²/∏(1-γ_i)`.
pub fn facet_minor_mirror(alpha: f64, site_gammas: &[f64]) -> Result<(f64, f64)> {
    let n = site_gammas.len();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 sites".into()));
    }
    for &g in site_gammas {
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "site gamma {g} outside the open interval (0, 1)"
            )));
        }
    }
    let psi = crate::qcore::ghz_amplitudes(n, alpha)?;
    let rho0 = DensityOperator::from_pure(n, &psi)?;
    let system = amplitude_damp_sites(&rho0, site_gammas)?;
    let mirrored: Vec<f64> = site_gammas.iter().map(|g| 1.0 - g).collect();
    let environment = amplitude_damp_sites(&rho0, &mirrored)?;
    let d = 1usize << n;
    let c_s = system.entry(0, d - 1).re;
    let p1_s = system.entry(d - 1, d - 1).re;
    let lhs = c_s * c_s / (p1_s * p1_s);
    // Bipartition A = {site 0}: minor rows/cols 1_A 0_B and 0_A 1_B.
    let u = 1usize << (n - 1);
    let v = (d - 1) ^ u;
    let c_e = environment.entry(0, d - 1).re;
    let a = environment.entry(u, u).re;
    let b = environment.entry(v, v).re;
    let rhs = c_e * c_e / (a * b);
    Ok((lhs, rhs))
}
