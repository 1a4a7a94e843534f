//! Resource dynamics of locally amplitude-damped multiqubit states.
//!
//! This crate computes how *magic* (nonstabilizerness) and entanglement of
//! multiqubit states evolve under local amplitude damping, and certifies
//! every closed form against brute-force oracles:
//!
//! - [`qcore`] — dense complex linear algebra, Kraus channels, partial
//!   transpose / negativity / concurrence, Pauli moments.
//! - [`stabset`] — exhaustive enumeration of pure stabilizer states for
//!   `n <= 4` in canonical affine form, LP-based stabilizer-polytope
//!   membership and robustness-of-magic oracles, explicit witnesses.
//! - [`ghzx`] — the closed-form GHZ-X manifold: trajectory coefficients,
//!   membership, robustness, death/rebirth thresholds, and the dephased,
//!   phase-twisted, phase-covariant, and nonuniform channel variants.
//! - [`extract`] — parity-syndrome magic extraction, distillation-window
//!   classification, large-`n` asymptotics, cat-state injection.
//! - [`families`] — non-GHZ trajectory classes: Dicke / anti-W states,
//!   generalized-W, two-term cats, punctured affine-plane slices with a
//!   pairing-Hamiltonian realization, the magic-generator / magic-insulator
//!   classification, and Haar endpoint-only statistics.
//!
//! # Conventions
//!
//! Computational-basis index `x` encodes qubit `i` (for `i` in `0..n`) in
//! bit `n-1-i`, i.e. qubit 0 is the most significant bit and the bitstring
//! written left-to-right matches the ket label: `|011⟩` has index `0b011`.
//! The damping strength `γ ∈ [0, 1]` relates to an integrated rate through
//! `γ = 1 − exp(−κt)`.

pub mod extract;
pub mod families;
pub mod ghzx;
pub mod qcore;
pub mod stabset;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scalar or structural argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Operands have incompatible dimensions or qubit counts.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A state or channel violates its type invariants beyond tolerance.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The request exceeds a documented size guard (memory/time).
    #[error("capability limit: {0}")]
    CapabilityLimit(String),

    /// The LP solver failed to produce a verdict (distinct from "outside").
    #[error("solver failure: {0}")]
    Solver(String),

    /// A root-finding problem admitted multiple candidate solutions.
    #[error("ambiguous solution: {0}")]
    Ambiguous(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Returns the bit of `index` carrying qubit `site` (0-based, qubit 0 is
/// the most significant bit of an `n`-qubit index).
#[inline]
pub(crate) fn qubit_bit(index: usize, n: usize, site: usize) -> usize {
    (index >> (n - 1 - site)) & 1
}

/// Bitmask selecting qubit `site` inside an `n`-qubit index.
#[inline]
pub(crate) fn qubit_mask(n: usize, site: usize) -> usize {
    1 << (n - 1 - site)
}

/// Binomial coefficient as `f64` (exact for the small arguments used here).
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
