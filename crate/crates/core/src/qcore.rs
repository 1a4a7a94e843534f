//! Dense complex linear algebra, Kraus-channel machinery, and bipartite
//! entanglement measures for up to [`MAX_QUBITS`] qubits.
//!
//! All operations are pure functions of immutable inputs and are safe to
//! call from multiple threads; callers may parallelize across parameter
//! grids.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::{qubit_mask, Error, Result};

/// Entrywise Hermiticity tolerance for [`DensityOperator`].
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Trace-one tolerance for [`DensityOperator`].
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalue floor: eigenvalues below this are a PSD violation.
pub const PSD_FLOOR: f64 = -1e-10;
/// Negativity below this counts as "zero" (PPT across the cut).
pub const NEGATIVITY_ZERO_TOL: f64 = 1e-10;
/// Largest supported qubit count for dense 2^n x 2^n storage.
pub const MAX_QUBITS: usize = 8;
/// Largest qubit count for which the 4^n Pauli moments are enumerated.
pub const MAX_PAULI_QUBITS: usize = 6;

type C64 = Complex64;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A 2^n x 2^n complex Hermitian PSD unit-trace matrix, the universal
/// state carrier.
///
/// Construction validates Hermiticity (entrywise, [`HERMITICITY_TOL`]),
/// unit trace ([`TRACE_TOL`]), and positive semidefiniteness up to the
/// numerical floor [`PSD_FLOOR`].
#[derive(Debug, Clone)]
pub struct DensityOperator {
    n: usize,
    mat: DMatrix<C64>,
}

impl DensityOperator {
    /// Validates and wraps a matrix as a density operator on `n` qubits.
    pub fn new(n: usize, mat: DMatrix<C64>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "qubit count {n} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        let d = 1usize << n;
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "expected {d}x{d} matrix for n={n}, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let rho = Self { n, mat };
        rho.validate()?;
        Ok(rho)
    }

    /// Builds the projector onto a pure state from its amplitude vector.
    pub fn from_pure(n: usize, psi: &[C64]) -> Result<Self> {
        let d = 1usize << n;
        if psi.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "expected amplitude vector of length {d}, got {}",
                psi.len()
            )));
        }
        let v = DVector::from_column_slice(psi);
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "amplitude vector has norm {norm}, expected 1"
            )));
        }
        let mat = &v * v.adjoint();
        Self::new(n, mat)
    }

    /// Symmetrizes `(M + M†)/2` before validating; used after channel
    /// application to suppress roundoff (all channels here are exactly
    /// Hermiticity-preserving).
    pub fn new_symmetrized(n: usize, mat: DMatrix<C64>) -> Result<Self> {
        let sym = (&mat + mat.adjoint()) * c(0.5);
        Self::new(n, sym)
    }

    /// Qubit count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Hilbert-space dimension 2^n.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Immutable access to the underlying matrix.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Single entry access.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Trace (should be 1 within [`TRACE_TOL`]).
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Purity Tr(ρ²).
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.mat.nrows() {
            for j in 0..self.mat.ncols() {
                acc += (self.mat[(i, j)] * self.mat[(j, i)]).re;
            }
        }
        acc
    }

    /// Checks the type invariants; returns a descriptive error on failure.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                let dev = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                if dev > HERMITICITY_TOL {
                    return Err(Error::InvalidState(format!(
                        "Hermiticity violation {dev:.3e} at ({i},{j})"
                    )));
                }
            }
        }
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} deviates from 1")));
        }
        let min_eig = hermitian_eigenvalues(&self.mat)
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_FLOOR {
            return Err(Error::InvalidState(format!(
                "eigenvalue {min_eig:.3e} below PSD floor {PSD_FLOOR:.1e}"
            )));
        }
        Ok(())
    }
}

/// Real eigenvalues of a Hermitian matrix.
fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    // Symmetrize first so the decomposition sees an exactly Hermitian input.
    let h = (m + m.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    eig.eigenvalues.iter().cloned().collect()
}

/// Hermitian square root via eigendecomposition, with negative eigenvalues
/// (numerical noise) clipped to zero.
fn hermitian_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let h = (m + m.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let d = m.nrows();
    let mut diag = DMatrix::<C64>::zeros(d, d);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        diag[(k, k)] = c(lam.max(0.0).sqrt());
    }
    &eig.eigenvectors * diag * eig.eigenvectors.adjoint()
}

/// A quantum channel given by a Kraus operator list on `n` qubits.
///
/// Construction validates the completeness relation Σ K†K = 1 within
/// 1e-12 entrywise.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    n: usize,
    operators: Vec<DMatrix<C64>>,
}

impl KrausChannel {
    /// Validates completeness and wraps the operator list.
    pub fn new(n: usize, operators: Vec<DMatrix<C64>>) -> Result<Self> {
        let d = 1usize << n;
        if operators.is_empty() {
            return Err(Error::InvalidParameter("empty Kraus list".into()));
        }
        for k in &operators {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, expected {d}x{d}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        let mut sum = DMatrix::<C64>::zeros(d, d);
        for k in &operators {
            sum += k.adjoint() * k;
        }
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { c(1.0) } else { c(0.0) };
                if (sum[(i, j)] - expect).norm() > 1e-12 {
                    return Err(Error::InvalidState(format!(
                        "Kraus completeness violated at ({i},{j}): {}",
                        sum[(i, j)]
                    )));
                }
            }
        }
        Ok(Self { n, operators })
    }

    /// Qubit count the channel acts on.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The Kraus operator list.
    pub fn operators(&self) -> &[DMatrix<C64>] {
        &self.operators
    }
}

/// Amplitude-damping channel `{E_0 = diag(1, sqrt(1-γ)), E_1 = sqrt(γ)|0⟩⟨1|}`.
pub fn amplitude_damping_kraus(gamma: f64) -> Result<KrausChannel> {
    check_unit_interval("gamma", gamma)?;
    let e0 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c((1.0 - gamma).sqrt())]);
    let e1 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(gamma.sqrt()), c(0.0), c(0.0)]);
    KrausChannel::new(1, vec![e0, e1])
}

/// Phase-flip channel `(1-p) ρ + p Z ρ Z` as a Kraus pair.
pub fn dephasing_kraus(p: f64) -> Result<KrausChannel> {
    check_unit_interval("p", p)?;
    let k0 = DMatrix::from_row_slice(2, 2, &[c((1.0 - p).sqrt()), c(0.0), c(0.0), c((1.0 - p).sqrt())]);
    let k1 = DMatrix::from_row_slice(2, 2, &[c(p.sqrt()), c(0.0), c(0.0), c(-(p.sqrt()))]);
    KrausChannel::new(1, vec![k0, k1])
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name}={v} outside [0, 1]")));
    }
    Ok(())
}

/// Applies a single-qubit Kraus channel to one site of an n-qubit matrix,
/// lifting by index arithmetic rather than materializing 2^n-dimensional
/// Kraus products.
fn apply_one_site(mat: &DMatrix<C64>, n: usize, site: usize, ch: &KrausChannel) -> DMatrix<C64> {
    let d = 1usize << n;
    let mask = qubit_mask(n, site);
    let mut out = DMatrix::<C64>::zeros(d, d);
    for kr in &ch.operators {
        let k = Matrix2::new(kr[(0, 0)], kr[(0, 1)], kr[(1, 0)], kr[(1, 1)]);
        // tmp = K ρ (row pairs), then out += tmp K† (column pairs).
        let mut tmp = DMatrix::<C64>::zeros(d, d);
        for i in 0..d {
            if i & mask != 0 {
                continue;
            }
            let i1 = i | mask;
            for j in 0..d {
                let a = mat[(i, j)];
                let b = mat[(i1, j)];
                tmp[(i, j)] = k[(0, 0)] * a + k[(0, 1)] * b;
                tmp[(i1, j)] = k[(1, 0)] * a + k[(1, 1)] * b;
            }
        }
        for j in 0..d {
            if j & mask != 0 {
                continue;
            }
            let j1 = j | mask;
            for i in 0..d {
                let a = tmp[(i, j)];
                let b = tmp[(i, j1)];
                out[(i, j)] += a * k[(0, 0)].conj() + b * k[(0, 1)].conj();
                out[(i, j1)] += a * k[(1, 0)].conj() + b * k[(1, 1)].conj();
            }
        }
    }
    out
}

/// Applies the same single-qubit channel to every site of `rho`.
pub fn apply_local_channel(rho: &DensityOperator, single_qubit: &KrausChannel) -> Result<DensityOperator> {
    if single_qubit.n != 1 {
        return Err(Error::DimensionMismatch(
            "apply_local_channel expects a single-qubit channel".into(),
        ));
    }
    let n = rho.n;
    let mut mat = rho.mat.clone();
    for site in 0..n {
        mat = apply_one_site(&mat, n, site, single_qubit);
    }
    DensityOperator::new_symmetrized(n, mat)
}

/// Applies one single-qubit channel per site (site-dependent channels).
pub fn apply_local_channels(rho: &DensityOperator, site_channels: &[KrausChannel]) -> Result<DensityOperator> {
    let n = rho.n;
    if site_channels.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n} site channels, got {}",
            site_channels.len()
        )));
    }
    let mut mat = rho.mat.clone();
    for (site, ch) in site_channels.iter().enumerate() {
        if ch.n != 1 {
            return Err(Error::DimensionMismatch(
                "site channels must act on a single qubit".into(),
            ));
        }
        mat = apply_one_site(&mat, n, site, ch);
    }
    DensityOperator::new_symmetrized(n, mat)
}

/// Convenience: homogeneous local amplitude damping at strength `gamma`.
pub fn amplitude_damp(rho: &DensityOperator, gamma: f64) -> Result<DensityOperator> {
    apply_local_channel(rho, &amplitude_damping_kraus(gamma)?)
}

/// Convenience: site-dependent local amplitude damping.
pub fn amplitude_damp_sites(rho: &DensityOperator, site_gammas: &[f64]) -> Result<DensityOperator> {
    let channels = site_gammas
        .iter()
        .map(|&g| amplitude_damping_kraus(g))
        .collect::<Result<Vec<_>>>()?;
    apply_local_channels(rho, &channels)
}

/// Environment output of local amplitude damping, built from the canonical
/// dilation isometry per site.
///
/// For each site the 2-dimensional system factor is expanded to a
/// (system, environment) pair through `V|0⟩ = |00⟩`,
/// `V|1⟩ = sqrt(1-γ)|10⟩ + sqrt(γ)|01⟩`; tracing out the system qubit
/// leaves the environment qubit in its place. The output therefore lives
/// on `n` environment qubits and provides an independent oracle for the
/// complementary-channel identity (environment of damping at `γ` equals
/// direct damping at `1-γ`).
pub fn complementary_ad_output(rho: &DensityOperator, gamma: f64) -> Result<DensityOperator> {
    check_unit_interval("gamma", gamma)?;
    let n = rho.n;
    let d = 1usize << n;
    // Isometry rows indexed by (sys, env) as 2*sys + env.
    let mut v = [[c(0.0); 2]; 4];
    v[0][0] = c(1.0); // |0> -> |sys=0, env=0>
    v[2][1] = c((1.0 - gamma).sqrt()); // |1> -> sqrt(1-g) |sys=1, env=0>
    v[1][1] = c(gamma.sqrt()); //        + sqrt(g)   |sys=0, env=1>
    let mut mat = rho.mat.clone();
    for site in 0..n {
        let mask = qubit_mask(n, site);
        // Expanded matrix indexed by (sys bit, base index with `mask`
        // holding the environment bit).
        let mut big = vec![DMatrix::<C64>::zeros(d, d); 4];
        for i in 0..d {
            let ib = (i & mask != 0) as usize;
            let i0 = i & !mask;
            for j in 0..d {
                let jb = (j & mask != 0) as usize;
                let j0 = j & !mask;
                let val = mat[(i, j)];
                if val == c(0.0) {
                    continue;
                }
                for ri in 0..4 {
                    if v[ri][ib] == c(0.0) {
                        continue;
                    }
                    for rj in 0..4 {
                        if v[rj][jb] == c(0.0) {
                            continue;
                        }
                        let (si, ei) = (ri >> 1, ri & 1);
                        let (sj, ej) = (rj >> 1, rj & 1);
                        let row = i0 | if ei == 1 { mask } else { 0 };
                        let col = j0 | if ej == 1 { mask } else { 0 };
                        big[2 * si + sj][(row, col)] += v[ri][ib] * val * v[rj][jb].conj();
                    }
                }
            }
        }
        // Partial trace over the system bit: keep blocks with si == sj.
        mat = &big[0] + &big[3];
    }
    DensityOperator::new_symmetrized(n, mat)
}

/// Partial transpose of `rho` over the qubit subset `subset`.
pub fn partial_transpose(rho: &DensityOperator, subset: &[usize]) -> Result<DMatrix<C64>> {
    let n = rho.n;
    let mask = subset_mask(n, subset)?;
    let d = rho.dim();
    let mut out = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let ti = (i & !mask) | (j & mask);
            let tj = (j & !mask) | (i & mask);
            out[(ti, tj)] = rho.mat[(i, j)];
        }
    }
    Ok(out)
}

fn subset_mask(n: usize, subset: &[usize]) -> Result<usize> {
    if subset.is_empty() || subset.len() >= n {
        return Err(Error::InvalidParameter(
            "subset must be nonempty and proper".into(),
        ));
    }
    let mut mask = 0usize;
    for &s in subset {
        if s >= n {
            return Err(Error::InvalidParameter(format!("site {s} out of range for n={n}")));
        }
        let bit = qubit_mask(n, s);
        if mask & bit != 0 {
            return Err(Error::InvalidParameter(format!("site {s} repeated in subset")));
        }
        mask |= bit;
    }
    Ok(mask)
}

/// Entanglement negativity `(‖ρ^{T_A}‖₁ − 1)/2` across the cut `subset`
/// versus the rest. Values below [`NEGATIVITY_ZERO_TOL`] signal PPT.
pub fn negativity(rho: &DensityOperator, subset: &[usize]) -> Result<f64> {
    let pt = partial_transpose(rho, subset)?;
    let trace_norm: f64 = hermitian_eigenvalues(&pt).iter().map(|l| l.abs()).sum();
    Ok(((trace_norm - 1.0) / 2.0).max(0.0))
}

/// Wootters concurrence of a two-qubit state, from the spin-flipped
/// spectrum; clipped at zero.
pub fn concurrence(rho: &DensityOperator) -> Result<f64> {
    if rho.n != 2 {
        return Err(Error::DimensionMismatch("concurrence requires n=2".into()));
    }
    // Spin flip: R = (Y⊗Y) ρ* (Y⊗Y). (Y⊗Y)[i,j] = -(-1)^{|i|+|j|} δ_{j, ~i}
    // but only the sign pattern matters: (Y⊗Y)|00⟩ = -|11⟩, |01⟩->|10⟩,
    // |10⟩->|01⟩, |11⟩->-|00⟩.
    let sign = |i: usize| -> f64 {
        match i {
            0 | 3 => -1.0,
            _ => 1.0,
        }
    };
    let mut r = DMatrix::<C64>::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            r[(i, j)] = c(sign(i) * sign(j)) * rho.mat[(3 - i, 3 - j)].conj();
        }
    }
    // Eigenvalues of ρR coincide with those of the Hermitian PSD matrix
    // sqrt(ρ) R sqrt(ρ); this keeps everything in Hermitian decompositions.
    let sq = hermitian_sqrt(&rho.mat);
    let m = &sq * r * &sq;
    let mut lams: Vec<f64> = hermitian_eigenvalues(&m)
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    lams.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lams[0] - lams[1] - lams[2] - lams[3]).max(0.0))
}

/// Decodes a linear Pauli index into `(x_mask, z_mask, weight_of_xz_overlap)`.
///
/// The index is read base-4 with qubit 0 as the most significant digit;
/// digit codes are 0=I, 1=X, 2=Y, 3=Z.
fn pauli_masks(n: usize, p: usize) -> (usize, usize, u32) {
    let mut x = 0usize;
    let mut z = 0usize;
    let mut rem = p;
    for site in (0..n).rev() {
        let digit = rem & 3;
        rem >>= 2;
        let bit = qubit_mask(n, site);
        match digit {
            1 => x |= bit,
            2 => {
                x |= bit;
                z |= bit;
            }
            3 => z |= bit,
            _ => {}
        }
    }
    (x, z, (x & z).count_ones())
}

/// Expectation `Tr(P ρ)` for the Pauli with linear index `p`.
pub fn pauli_expectation(rho: &DensityOperator, p: usize) -> f64 {
    let n = rho.n;
    let (x, z, w) = pauli_masks(n, p);
    let d = rho.dim();
    let mut acc = C64::new(0.0, 0.0);
    for u in 0..d {
        let sign = if ((z & u).count_ones() & 1) == 1 { -1.0 } else { 1.0 };
        acc += c(sign) * rho.mat[(u, u ^ x)];
    }
    let phase = C64::i().powu(w);
    (phase * acc).re
}

/// All 4^n Pauli expectations `Tr(P ρ)` in linear index order
/// (see [`pauli_expectation`] for the index convention).
pub fn pauli_moments(rho: &DensityOperator) -> Result<Vec<f64>> {
    if rho.n > MAX_PAULI_QUBITS {
        return Err(Error::CapabilityLimit(format!(
            "Pauli moment enumeration capped at n={MAX_PAULI_QUBITS}"
        )));
    }
    let count = 1usize << (2 * rho.n);
    Ok((0..count).map(|p| pauli_expectation(rho, p)).collect())
}

/// Linearized stabilizer 2-Rényi quantity
/// `M̃₂ = −ln[ Σ_P ⟨P⟩⁴ / (d · Tr(ρ²)²) ]` with `d = 2^n`
/// (natural logarithm). Zero on pure stabilizer states, positive on magic
/// states.
pub fn srenyi2_linearized(rho: &DensityOperator) -> Result<f64> {
    let moments = pauli_moments(rho)?;
    let num: f64 = moments.iter().map(|m| m.powi(4)).sum();
    let d = rho.dim() as f64;
    let purity = rho.purity();
    Ok(-(num / (d * purity * purity)).ln())
}

/// Normalized coherence profile of a ground-state-preserving
/// phase-covariant qubit channel.
///
/// The channel is parametrized by the excited-population damping `γ` and
/// the coherence multiplier `λ(γ)`; complete positivity requires
/// `|λ(γ)|² ≤ 1 − γ`, which is checked at every evaluation. The
/// normalized profile `S(γ) = |λ(γ)|² / (1 − γ)` (with the sign of a real
/// `λ²`) controls threshold reflection symmetry.
#[derive(Clone)]
pub enum PhaseCovariantProfile {
    /// Pure amplitude damping: `λ = sqrt(1-γ)`, `S ≡ 1`.
    PureAd,
    /// Amplitude damping composed with dephasing: `λ = sqrt(η (1-γ))`,
    /// `S ≡ η` with `η ∈ (0, 1]`.
    DephasedAd {
        /// Squared coherence retention `η = (1-2p)²`.
        eta: f64,
    },
    /// Power-law decay `λ = (1-γ)^a`, `S = (1-γ)^{2a-1}` (asymmetric for
    /// `a ≠ 1/2`).
    PowerLaw {
        /// Decay exponent `a ≥ 1/2`.
        a: f64,
    },
    /// Phase-twisted damping `λ = sqrt(1-γ) e^{iφ}`: complex, so the real
    /// reflection analysis does not apply.
    PhaseTwist {
        /// Per-site twist angle.
        phi: f64,
    },
    /// User-supplied real coherence profile `λ(γ)`.
    Custom(std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for PhaseCovariantProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::PureAd => write!(f, "PureAd"),
            Self::DephasedAd { eta } => write!(f, "DephasedAd {{ eta: {eta} }}"),
            Self::PowerLaw { a } => write!(f, "PowerLaw {{ a: {a} }}"),
            Self::PhaseTwist { phi } => write!(f, "PhaseTwist {{ phi: {phi} }}"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl PhaseCovariantProfile {
    /// Coherence multiplier `λ(γ)`, validated against the
    /// complete-positivity bound `|λ|² ≤ 1 − γ`.
    pub fn lambda(&self, gamma: f64) -> Result<C64> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!("gamma={gamma} outside [0, 1)")));
        }
        let lam = match self {
            Self::PureAd => c((1.0 - gamma).sqrt()),
            Self::DephasedAd { eta } => {
                if !(0.0..=1.0).contains(eta) || *eta == 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "eta={eta} outside (0, 1] (eta=0 is the degenerate diagonal trajectory)"
                    )));
                }
                c((eta * (1.0 - gamma)).sqrt())
            }
            Self::PowerLaw { a } => c((1.0 - gamma).powf(*a)),
            Self::PhaseTwist { phi } => C64::from_polar((1.0 - gamma).sqrt(), *phi),
            Self::Custom(f) => c(f(gamma)),
        };
        if lam.norm_sqr() > 1.0 - gamma + 1e-12 {
            return Err(Error::InvalidState(format!(
                "complete positivity violated: |lambda|^2 = {} > 1 - gamma = {}",
                lam.norm_sqr(),
                1.0 - gamma
            )));
        }
        Ok(lam)
    }

    /// Whether the profile is real-valued (so the reflection analysis
    /// applies).
    pub fn is_real(&self) -> bool {
        !matches!(self, Self::PhaseTwist { .. })
    }

    /// Normalized profile `S(γ) = λ(γ)² / (1 − γ)` for real profiles.
    pub fn s_profile(&self, gamma: f64) -> Result<f64> {
        if !self.is_real() {
            return Err(Error::InvalidParameter(
                "normalized profile requires a real coherence profile".into(),
            ));
        }
        let lam = self.lambda(gamma)?.re;
        Ok(lam * lam / (1.0 - gamma))
    }
}

/// Amplitudes of the pure GHZ-type state `α|0^n⟩ + β|1^n⟩` (β = sqrt(1-α²)).
pub fn ghz_amplitudes(n: usize, alpha: f64) -> Result<Vec<C64>> {
    if !(0.0..1.0).contains(&alpha) || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!("alpha={alpha} outside (0, 1)")));
    }
    let beta = (1.0 - alpha * alpha).sqrt();
    let d = 1usize << n;
    let mut psi = vec![c(0.0); d];
    psi[0] = c(alpha);
    psi[d - 1] = c(beta);
    Ok(psi)
}
