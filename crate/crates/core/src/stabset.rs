//! Exhaustive enumeration of pure stabilizer states for small qubit
//! numbers, and LP-based stabilizer-polytope membership / robustness
//! oracles plus explicit witnesses.
//!
//! Every pure stabilizer state on `n` qubits is, up to global phase, an
//! equal-modulus superposition over an affine subspace
//! `{offset ⊕ u·basis : u ∈ F₂^m}` with amplitudes
//! `i^{ℓ(u)} (−1)^{q(u)} 2^{−m/2}`, where `ℓ` is ℤ₄-linear and `q` is a
//! quadratic form over F₂. Enumerating reduced-row-echelon bases, canonical
//! coset offsets, and the phase data yields each state exactly once; the
//! total count is `2^n ∏_{j=1..n} (2^j + 1)`.

use std::sync::OnceLock;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::qcore::{pauli_moments, DensityOperator};
use crate::{qubit_mask, Error, Result};

type C64 = Complex64;

/// Largest qubit count for which the dictionary is enumerated.
pub const MAX_ENUM_QUBITS: usize = 4;
/// Feasibility tolerance: membership holds when the elastic-program
/// objective (ℓ1 infeasibility) is below this.
pub const LP_FEASIBILITY_TOL: f64 = 1e-7;
/// Robustness values are exact up to this LP tolerance.
pub const LP_VALUE_TOL: f64 = 1e-9;
/// Slack used by the pair-coherence obstruction.
pub const PAIR_SLACK: f64 = 1e-12;

/// Canonical affine-support + phase-form record for one pure stabilizer
/// state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerState {
    /// Qubit count.
    pub n: usize,
    /// Support dimension, `0 <= m <= n`; the support has `2^m` points.
    pub m: usize,
    /// `m` linearly independent bit-vectors over F₂^n (reduced row echelon
    /// form), encoded with qubit `i` in bit `n-1-i`.
    pub basis: Vec<usize>,
    /// Coset offset, zero on all pivot coordinates.
    pub offset: usize,
    /// ℤ₄ exponent of `i` per parameter direction (length `m`).
    pub linear_phase: Vec<u8>,
    /// Coefficients of `(−1)^{u_i u_j}` for `i < j`, row-major (length
    /// `m(m−1)/2`).
    pub quadratic_phase: Vec<bool>,
}

impl StabilizerState {
    /// The support point for parameter vector `u` (bits of `u` index basis
    /// rows).
    pub fn support_point(&self, u: usize) -> usize {
        let mut x = self.offset;
        for (i, &b) in self.basis.iter().enumerate() {
            if (u >> i) & 1 == 1 {
                x ^= b;
            }
        }
        x
    }

    /// All support points in parameter order.
    pub fn support(&self) -> Vec<usize> {
        (0..1usize << self.m).map(|u| self.support_point(u)).collect()
    }

    /// Materializes the amplitude vector: `i^{ℓ(u)} (−1)^{q(u)} 2^{−m/2}`
    /// at `offset ⊕ u·basis`.
    pub fn materialize(&self) -> Vec<C64> {
        let d = 1usize << self.n;
        let scale = 0.5_f64.powi(self.m as i32 / 2)
            * if self.m % 2 == 1 { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
        let mut psi = vec![C64::new(0.0, 0.0); d];
        for u in 0..1usize << self.m {
            let mut ell: u32 = 0;
            for (i, &lp) in self.linear_phase.iter().enumerate() {
                if (u >> i) & 1 == 1 {
                    ell += lp as u32;
                }
            }
            let mut quad = false;
            let mut idx = 0;
            for i in 0..self.m {
                for j in (i + 1)..self.m {
                    if self.quadratic_phase[idx] && (u >> i) & 1 == 1 && (u >> j) & 1 == 1 {
                        quad = !quad;
                    }
                    idx += 1;
                }
            }
            let mut amp = C64::i().powu(ell % 4) * scale;
            if quad {
                amp = -amp;
            }
            psi[self.support_point(u)] = amp;
        }
        psi
    }
}

/// Materializes a stabilizer record to its amplitude vector.
pub fn materialize(stab: &StabilizerState) -> Vec<C64> {
    stab.materialize()
}

/// Exact count `2^n ∏_{j=1..n} (2^j + 1)` of pure stabilizer states.
pub fn stabilizer_state_count(n: usize) -> u64 {
    let mut count = 1u64 << n;
    for j in 1..=n {
        count *= (1u64 << j) + 1;
    }
    count
}

/// Enumerates every pure stabilizer state on `n <= 4` qubits exactly once
/// (up to global phase).
pub fn enumerate_stabilizer_states(n: usize) -> Result<Vec<StabilizerState>> {
    if n == 0 || n > MAX_ENUM_QUBITS {
        return Err(Error::CapabilityLimit(format!(
            "stabilizer enumeration supported for 1..={MAX_ENUM_QUBITS} qubits, got {n}"
        )));
    }
    let mut states = Vec::with_capacity(stabilizer_state_count(n) as usize);
    for m in 0..=n {
        for pivots in combinations(n, m) {
            enumerate_for_pivots(n, m, &pivots, &mut states);
        }
    }
    Ok(states)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            rec(n, k, c + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

fn enumerate_for_pivots(n: usize, m: usize, pivots: &[usize], out: &mut Vec<StabilizerState>) {
    let is_pivot = |c: usize| pivots.contains(&c);
    // Free matrix entries: row i may hold arbitrary bits at non-pivot
    // coordinates strictly right of its pivot.
    let mut free_slots: Vec<(usize, usize)> = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in (p + 1)..n {
            if !is_pivot(c) {
                free_slots.push((i, c));
            }
        }
    }
    let nonpivot: Vec<usize> = (0..n).filter(|&c| !is_pivot(c)).collect();
    let quad_len = m.saturating_sub(1) * m / 2;
    for free_assign in 0..1usize << free_slots.len() {
        let mut basis = vec![0usize; m];
        for (i, &p) in pivots.iter().enumerate() {
            basis[i] = qubit_mask(n, p);
        }
        for (bit, &(row, coord)) in free_slots.iter().enumerate() {
            if (free_assign >> bit) & 1 == 1 {
                basis[row] |= qubit_mask(n, coord);
            }
        }
        for coset in 0..1usize << nonpivot.len() {
            let mut offset = 0usize;
            for (bit, &coord) in nonpivot.iter().enumerate() {
                if (coset >> bit) & 1 == 1 {
                    offset |= qubit_mask(n, coord);
                }
            }
            for lin in 0..1usize << (2 * m) {
                let linear_phase: Vec<u8> = (0..m).map(|i| ((lin >> (2 * i)) & 3) as u8).collect();
                for quad in 0..1usize << quad_len {
                    let quadratic_phase: Vec<bool> =
                        (0..quad_len).map(|i| (quad >> i) & 1 == 1).collect();
                    out.push(StabilizerState {
                        n,
                        m,
                        basis: basis.clone(),
                        offset,
                        linear_phase: linear_phase.clone(),
                        quadratic_phase,
                    });
                }
            }
        }
    }
}

/// The enumerated dictionary with cached amplitude vectors and (lazily
/// built) integer Pauli-expectation columns. Immutable after construction
/// and safely shareable across threads; LP solves are independent per
/// query.
pub struct StabDictionary {
    n: usize,
    states: Vec<StabilizerState>,
    vectors: Vec<Vec<C64>>,
    pauli_cols: OnceLock<Vec<Vec<(u32, i8)>>>,
}

impl StabDictionary {
    /// Enumerates and materializes the dictionary for `n <= 4`.
    pub fn new(n: usize) -> Result<Self> {
        let states = enumerate_stabilizer_states(n)?;
        let vectors = states.iter().map(|s| s.materialize()).collect();
        Ok(Self {
            n,
            states,
            vectors,
            pauli_cols: OnceLock::new(),
        })
    }

    /// Qubit count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of dictionary states.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// Whether the dictionary is empty (never, for valid `n`).
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The canonical records.
    pub fn states(&self) -> &[StabilizerState] {
        &self.states
    }

    /// The materialized amplitude vectors.
    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    /// Sparse integer Pauli columns: for each state, the list of
    /// `(pauli_index, ±1)` with nonzero expectation. Columns are exact
    /// integers, which keeps the LP well conditioned.
    pub fn pauli_columns(&self) -> &[Vec<(u32, i8)>] {
        self.pauli_cols.get_or_init(|| {
            self.vectors
                .iter()
                .map(|v| pauli_column(self.n, v))
                .collect()
        })
    }

    /// Builds the dense projector of dictionary state `j`.
    pub fn projector(&self, j: usize) -> DMatrix<C64> {
        let d = 1usize << self.n;
        let v = &self.vectors[j];
        DMatrix::from_fn(d, d, |r, c| v[r] * v[c].conj())
    }
}

/// Pauli expectations of a pure state vector, keeping only the (exactly
/// ±1-valued) nonzero entries.
fn pauli_column(n: usize, psi: &[C64]) -> Vec<(u32, i8)> {
    let support: Vec<usize> = (0..psi.len()).filter(|&i| psi[i].norm() > 1e-15).collect();
    let mut col = Vec::with_capacity(1usize << n);
    for p in 0..1usize << (2 * n) {
        let (x, z, w) = pauli_masks_local(n, p);
        let mut acc = C64::new(0.0, 0.0);
        for &u in &support {
            let sign = if ((z & u).count_ones() & 1) == 1 { -1.0 } else { 1.0 };
            acc += psi[u ^ x].conj() * psi[u] * C64::new(sign, 0.0);
        }
        let val = (C64::i().powu(w) * acc).re;
        let rounded = val.round();
        debug_assert!((val - rounded).abs() < 1e-9, "non-integer Pauli expectation {val}");
        if rounded != 0.0 {
            col.push((p as u32, rounded as i8));
        }
    }
    col
}

fn pauli_masks_local(n: usize, p: usize) -> (usize, usize, u32) {
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

/// Verdict of the stabilizer-polytope membership LP.
#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    /// `true` when a convex decomposition exists within
    /// [`LP_FEASIBILITY_TOL`].
    pub inside: bool,
    /// ℓ1 infeasibility of the best elastic solution (0 when inside).
    pub infeasibility: f64,
    /// Convex weights `(dictionary index, weight)` when inside.
    pub weights: Option<Vec<(usize, f64)>>,
}

/// Robustness value plus signed stabilizer decomposition from the LP
/// oracle.
#[derive(Debug, Clone)]
pub struct LpCertificate {
    /// The robustness of magic `Σ |q_j|` (≥ 1, = 1 inside the polytope).
    pub value: f64,
    /// Sparse signed weights `(dictionary index, q_j)`.
    pub coefficients: Vec<(usize, f64)>,
    /// Max-abs entrywise error of the reconstruction `Σ q_j σ_j − ρ`.
    pub residual: f64,
}

fn check_dictionary_match(rho: &DensityOperator, dict: &StabDictionary) -> Result<()> {
    if rho.n() != dict.n {
        return Err(Error::DimensionMismatch(format!(
            "state has n={}, dictionary has n={}",
            rho.n(),
            dict.n
        )));
    }
    Ok(())
}

/// Feasibility LP in the real Pauli-expectation coordinate system: is `rho`
/// a convex combination of dictionary states?
///
/// Solved in elastic form (minimize the ℓ1 equality violation over
/// nonnegative weights); the identity-Pauli row enforces normalization.
pub fn membership_lp(rho: &DensityOperator, dict: &StabDictionary) -> Result<MembershipVerdict> {
    check_dictionary_match(rho, dict)?;
    let b = pauli_moments(rho)?;
    let cols = dict.pauli_columns();
    let rows = b.len();

    let mut prob = Problem::new(OptimizationDirection::Minimize);
    let mu: Vec<_> = (0..cols.len())
        .map(|_| prob.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    let slack_pos: Vec<_> = (0..rows)
        .map(|_| prob.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    let slack_neg: Vec<_> = (0..rows)
        .map(|_| prob.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();

    // Transpose the per-state sparse columns into per-row terms.
    let mut row_terms: Vec<Vec<(minilp::Variable, f64)>> = vec![Vec::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for &(p, v) in col {
            row_terms[p as usize].push((mu[j], v as f64));
        }
    }
    for (i, terms) in row_terms.iter_mut().enumerate() {
        terms.push((slack_pos[i], 1.0));
        terms.push((slack_neg[i], -1.0));
        prob.add_constraint(terms.as_slice(), ComparisonOp::Eq, b[i]);
    }

    let sol = prob
        .solve()
        .map_err(|e| Error::Solver(format!("membership LP: {e}")))?;
    let infeasibility = sol.objective();
    let inside = infeasibility < LP_FEASIBILITY_TOL;
    let weights = if inside {
        Some(
            mu.iter()
                .enumerate()
                .filter_map(|(j, &v)| {
                    let w = sol[v];
                    (w > 1e-12).then_some((j, w))
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(MembershipVerdict {
        inside,
        infeasibility,
        weights,
    })
}

/// Robustness of magic: minimal ℓ1 signed stabilizer decomposition of
/// `rho`, via the standard split `q = q⁺ − q⁻`.
///
/// Guarded to `n <= 3`; use [`robustness_lp_large`] to opt into the `n = 4`
/// problem (2 × 36720 variables, expected runtime on the order of minutes).
pub fn robustness_lp(rho: &DensityOperator, dict: &StabDictionary) -> Result<LpCertificate> {
    if dict.n > 3 {
        return Err(Error::CapabilityLimit(
            "robustness LP guarded to n<=3; call robustness_lp_large to opt in".into(),
        ));
    }
    robustness_lp_large(rho, dict)
}

/// Robustness LP without the size guard (permits `n = 4`).
pub fn robustness_lp_large(rho: &DensityOperator, dict: &StabDictionary) -> Result<LpCertificate> {
    check_dictionary_match(rho, dict)?;
    let b = pauli_moments(rho)?;
    let cols = dict.pauli_columns();
    let rows = b.len();

    let mut prob = Problem::new(OptimizationDirection::Minimize);
    let qp: Vec<_> = (0..cols.len())
        .map(|_| prob.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    let qm: Vec<_> = (0..cols.len())
        .map(|_| prob.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();

    let mut row_terms: Vec<Vec<(minilp::Variable, f64)>> = vec![Vec::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for &(p, v) in col {
            row_terms[p as usize].push((qp[j], v as f64));
            row_terms[p as usize].push((qm[j], -(v as f64)));
        }
    }
    for (i, terms) in row_terms.iter().enumerate() {
        prob.add_constraint(terms.as_slice(), ComparisonOp::Eq, b[i]);
    }

    let sol = prob
        .solve()
        .map_err(|e| Error::Solver(format!("robustness LP: {e}")))?;
    let value = sol.objective();
    let coefficients: Vec<(usize, f64)> = (0..cols.len())
        .filter_map(|j| {
            let q = sol[qp[j]] - sol[qm[j]];
            (q.abs() > 1e-12).then_some((j, q))
        })
        .collect();

    // Entrywise reconstruction residual over the (sparse) decomposition.
    let d = 1usize << dict.n;
    let mut recon = DMatrix::<C64>::zeros(d, d);
    for &(j, q) in &coefficients {
        let v = &dict.vectors[j];
        for r in 0..d {
            if v[r].norm() < 1e-15 {
                continue;
            }
            for c in 0..d {
                recon[(r, c)] += C64::new(q, 0.0) * v[r] * v[c].conj();
            }
        }
    }
    let mut residual = 0.0_f64;
    for r in 0..d {
        for c in 0..d {
            residual = residual.max((recon[(r, c)] - rho.entry(r, c)).norm());
        }
    }

    Ok(LpCertificate {
        value,
        coefficients,
        residual,
    })
}

/// Pair-coherence obstruction: the first basis pair `(x, y)` with
/// `|ρ_xy| > min(ρ_xx, ρ_yy) + slack`, if any. A returned pair certifies
/// that `rho` lies outside the stabilizer polytope.
pub fn pair_obstruction(rho: &DensityOperator) -> Option<(usize, usize)> {
    let d = rho.dim();
    for x in 0..d {
        for y in (x + 1)..d {
            let coh = rho.entry(x, y).norm();
            let floor = rho.entry(x, x).re.min(rho.entry(y, y).re);
            if coh > floor + PAIR_SLACK {
                return Some((x, y));
            }
        }
    }
    None
}

/// The GHZ-X dual witness `W_{s,j} = 1 + s(|0^n⟩⟨1^n| + h.c.) − 2|j^n⟩⟨j^n|`.
#[derive(Debug, Clone, Copy)]
pub struct GhzxWitness {
    /// Qubit count.
    pub n: usize,
    /// Coherence sign, ±1.
    pub s: f64,
    /// Targeted endpoint, 0 or 1 (population of `|j^n⟩`).
    pub j: usize,
}

impl GhzxWitness {
    /// Validated constructor.
    pub fn new(n: usize, s: f64, j: usize) -> Result<Self> {
        if s != 1.0 && s != -1.0 {
            return Err(Error::InvalidParameter(format!("witness sign s={s}, expected ±1")));
        }
        if j > 1 {
            return Err(Error::InvalidParameter(format!("witness endpoint j={j}, expected 0|1")));
        }
        Ok(Self { n, s, j })
    }

    /// `Tr(W ρ) = 1 + 2 s Re(ρ_{0^n,1^n}) − 2 ρ_{j^n,j^n}`.
    pub fn value(&self, rho: &DensityOperator) -> Result<f64> {
        if rho.n() != self.n {
            return Err(Error::DimensionMismatch("witness/state qubit count".into()));
        }
        let d = rho.dim();
        let jdx = if self.j == 0 { 0 } else { d - 1 };
        Ok(1.0 + 2.0 * self.s * rho.entry(0, d - 1).re - 2.0 * rho.entry(jdx, jdx).re)
    }

    /// Witness expectation on a pure state vector.
    pub fn value_on_vector(&self, psi: &[C64]) -> f64 {
        let d = psi.len();
        let jdx = if self.j == 0 { 0 } else { d - 1 };
        1.0 + 2.0 * self.s * (psi[0] * psi[d - 1].conj()).re - 2.0 * psi[jdx].norm_sqr()
    }
}

/// Convenience wrapper for [`GhzxWitness::value`].
pub fn ghzx_witness_value(rho: &DensityOperator, s: f64, j: usize) -> Result<f64> {
    GhzxWitness::new(rho.n(), s, j)?.value(rho)
}

/// Scans the dictionary and checks dual feasibility `|Tr(W σ)| ≤ 1 + 1e-12`
/// for every stabilizer state. Returns `(feasible, max |Tr(W σ)|)`.
pub fn validate_witness_feasibility(
    witness: &GhzxWitness,
    dict: &StabDictionary,
) -> Result<(bool, f64)> {
    if witness.n != dict.n {
        return Err(Error::DimensionMismatch("witness/dictionary qubit count".into()));
    }
    let mut max_abs = 0.0_f64;
    for v in &dict.vectors {
        max_abs = max_abs.max(witness.value_on_vector(v).abs());
    }
    Ok((max_abs <= 1.0 + 1e-12, max_abs))
}

/// Real single-excitation row-dominance criterion.
///
/// Requires `rho` to have diagonal weight only on Hamming weights {0, 1}
/// and a real single-excitation block `B`; returns `true` iff
/// `B_ii ≥ Σ_{j≠i} |B_ij|` for all `i`, which is equivalent to stabilizer
/// membership for this state class.
pub fn row_dominance(rho: &DensityOperator) -> Result<bool> {
    let n = rho.n();
    let d = rho.dim();
    for x in 0..d {
        if x.count_ones() >= 2 && rho.entry(x, x).re > 1e-12 {
            return Err(Error::InvalidState(format!(
                "population {:.3e} on weight-{} string {:#b}",
                rho.entry(x, x).re,
                x.count_ones(),
                x
            )));
        }
    }
    let exc: Vec<usize> = (0..n).map(|i| qubit_mask(n, i)).collect();
    let mut b = vec![vec![0.0_f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let e = rho.entry(exc[i], exc[j]);
            if e.im.abs() > 1e-12 {
                return Err(Error::InvalidState(
                    "single-excitation block is not real".into(),
                ));
            }
            b[i][j] = e.re;
        }
    }
    Ok(row_dominance_block(&b))
}

/// Row dominance of an explicit real single-excitation block.
pub fn row_dominance_block(b: &[Vec<f64>]) -> bool {
    let n = b.len();
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| b[i][j].abs()).sum();
        if b[i][i] + 1e-12 < off {
            return false;
        }
    }
    true
}

/// Single-qubit stabilizer-octahedron membership `|x|+|y|+|z| ≤ 1`.
pub fn octahedron_membership(bloch: [f64; 3]) -> Result<bool> {
    check_bloch(bloch)?;
    Ok(bloch.iter().map(|v| v.abs()).sum::<f64>() <= 1.0 + 1e-12)
}

/// Single-qubit robustness of magic `1 + max(0, |x|+|y|+|z| − 1)`.
pub fn single_qubit_rom(bloch: [f64; 3]) -> Result<f64> {
    check_bloch(bloch)?;
    let l1: f64 = bloch.iter().map(|v| v.abs()).sum();
    Ok(1.0 + (l1 - 1.0).max(0.0))
}

fn check_bloch(bloch: [f64; 3]) -> Result<()> {
    let norm = bloch.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "non-physical Bloch vector of length {norm}"
        )));
    }
    Ok(())
}

/// Four-qubit even-sector witness on `E = {0000} ∪ {weight-2 strings}`:
/// `W_E = 1_E + 2|0⁴⟩⟨0⁴| − Σ_adj (|x⟩⟨y| + h.c.) + Σ_opp (|x⟩⟨y| + h.c.)`,
/// where *adjacent* weight-2 supports share one site and *opposite* ones
/// are disjoint. Nonnegative on every subnormalized stabilizer mixture
/// supported on `E`.
///
/// The input state is first postselected on the even outcome of
/// `Z₁Z₂Z₃Z₄` (a stabilizer-preserving map); the resulting block must be
/// supported on `E`, i.e. carry no weight-4 population. A negative
/// return value certifies the input outside the stabilizer polytope.
pub fn we_witness_value(rho: &DensityOperator) -> Result<f64> {
    if rho.n() != 4 {
        return Err(Error::DimensionMismatch("the even-sector witness requires n=4".into()));
    }
    let weight2: Vec<usize> = (0..16).filter(|x: &usize| x.count_ones() == 2).collect();
    let in_e = |x: usize| x == 0 || x.count_ones() == 2;
    if rho.entry(15, 15).re > 1e-12 {
        return Err(Error::InvalidState(
            "even-parity block leaks outside E: nonzero weight-4 population".into(),
        ));
    }
    let mut value = 0.0;
    for x in 0..16 {
        if in_e(x) {
            value += rho.entry(x, x).re;
        }
    }
    value += 2.0 * rho.entry(0, 0).re;
    for (a, &x) in weight2.iter().enumerate() {
        for &y in weight2.iter().skip(a + 1) {
            let shared = (x & y).count_ones();
            let term = 2.0 * rho.entry(x, y).re;
            match shared {
                1 => value -= term,
                0 => value += term,
                _ => unreachable!("distinct weight-2 strings share 0 or 1 sites"),
            }
        }
    }
    Ok(value)
}
