//! Subcommand implementations. Each returns the result table, a
//! canonical config-echo string, and an optional deferred error (emitted
//! after the table is written, e.g. an LP mismatch that must still show
//! its data).

use magicdamp::extract::parity_extract;
use magicdamp::families::{
    affine_plane_slice, antiw_membership, classify_all, dicke_trajectory,
    generalized_w_membership, haar_endpoint_test, interior_dicke_obstruction,
    pairing_ground_state, AntiwVerdict, StabClass,
};
use magicdamp::ghzx::{
    ghzx_point, membership_closed, resource_mirror_check, rom_closed, thresholds,
    window_width_and_bound,
};
use magicdamp::qcore::{
    amplitude_damp, concurrence, ghz_amplitudes, negativity, srenyi2_linearized, DensityOperator,
    MAX_PAULI_QUBITS, MAX_QUBITS,
};
use magicdamp::stabset::{
    enumerate_stabilizer_states, membership_lp, robustness_lp, StabDictionary,
};

use crate::table::{fmt_f64, Cell, Table};
use crate::{kt_of, lib_err, Cli, CliError, Command, GridSpec};

type CmdResult = Result<(Table, String, Option<CliError>), CliError>;

/// Dispatches the parsed CLI onto the subcommand implementations.
pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Thresholds { n, alpha, alpha_grid } => {
            cmd_thresholds(cli, *n, *alpha, alpha_grid.as_ref())
        }
        Command::Scan { n, alpha, gamma_grid } => cmd_scan(cli, *n, *alpha, gamma_grid),
        Command::Trajectory { n, alpha, gamma_grid } => {
            cmd_trajectory(cli, *n, *alpha, gamma_grid)
        }
        Command::Rom { n, alpha, gamma, verify_lp } => {
            cmd_rom(*n, *alpha, *gamma, *verify_lp)
        }
        Command::Extract { n, alpha, gamma, gamma_grid } => {
            cmd_extract(cli, *n, *alpha, resolve_grid(*gamma, gamma_grid.as_ref())?)
        }
        Command::Enumerate { n } => cmd_enumerate(*n),
        Command::Classify { n } => cmd_classify(*n),
        Command::Dicke { n, k, gamma_grid } => cmd_dicke(cli, *n, *k, gamma_grid),
        Command::Haar { n, samples, seed, gamma_grid } => {
            cmd_haar(*n, *samples, *seed, gamma_grid)
        }
        Command::Slice { n, basis, alpha, gamma, gamma_grid } => cmd_slice(
            cli,
            *n,
            basis,
            *alpha,
            resolve_grid(*gamma, gamma_grid.as_ref())?,
        ),
        Command::Pairing { xi, xi_grid } => cmd_pairing(resolve_grid(*xi, xi_grid.as_ref())?),
        Command::Mirror { alpha, gamma_grid } => cmd_mirror(cli, *alpha, gamma_grid),
        Command::Verify { .. } => unreachable!("verify is dispatched separately"),
    }
}

/// A single value or a grid of values, with its echo string.
fn resolve_grid(single: Option<f64>, grid: Option<&GridSpec>) -> Result<(Vec<f64>, String), CliError> {
    match (single, grid) {
        (Some(v), None) => Ok((vec![v], fmt_f64(v))),
        (None, Some(g)) => Ok((g.values(), g.echo())),
        _ => Err(CliError::Usage(
            "exactly one of the single value and the grid must be given".into(),
        )),
    }
}

/// Pushes `gamma` and, when requested, the integrated rate `kt`.
fn push_gamma(row: &mut Vec<Cell>, kt: bool, gamma: f64) {
    row.push(Cell::F(gamma));
    if kt {
        row.push(Cell::F(kt_of(gamma)));
    }
}

/// Column list starting with `gamma` (and optionally `kt`).
fn gamma_columns(kt: bool, rest: &[&'static str]) -> Vec<&'static str> {
    let mut cols = vec!["gamma"];
    if kt {
        cols.push("kt");
    }
    cols.extend_from_slice(rest);
    cols
}

fn cmd_thresholds(cli: &Cli, n: usize, alpha: Option<f64>, grid: Option<&GridSpec>) -> CmdResult {
    let (alphas, alpha_echo) = resolve_grid(alpha, grid)?;
    let mut cols = vec![
        "n",
        "alpha",
        "r",
        "regime",
        "gamma_minus",
        "gamma_plus",
        "gamma_e",
        "gamma_gme",
        "delta",
        "bound",
        "alpha1",
        "alpha2",
    ];
    if cli.kt {
        cols.extend_from_slice(&["kt_minus", "kt_plus", "kt_e"]);
    }
    let mut table = Table::new(cols);
    for a in alphas {
        let t = thresholds(n, a).map_err(lib_err)?;
        let (delta, bound) = match window_width_and_bound(n, a) {
            Ok((d, b)) => (Some(d), Some(b)),
            Err(_) => (None, None),
        };
        let mut row = vec![
            Cell::U(t.n),
            Cell::F(t.alpha),
            Cell::F(t.r),
            Cell::S(t.regime.to_string()),
            Cell::opt(t.gamma_minus),
            Cell::opt(t.gamma_plus),
            Cell::opt(t.gamma_e),
            Cell::opt(t.gamma_gme),
            Cell::opt(delta),
            Cell::opt(bound),
            Cell::F(t.alpha_boundaries.0),
            Cell::F(t.alpha_boundaries.1),
        ];
        if cli.kt {
            row.push(Cell::opt(t.gamma_minus.map(kt_of)));
            row.push(Cell::opt(t.gamma_plus.map(kt_of)));
            row.push(Cell::opt(t.gamma_e.map(kt_of)));
        }
        table.push(row);
    }
    Ok((table, format!("thresholds n={n} alpha={alpha_echo}"), None))
}

fn cmd_scan(cli: &Cli, n: usize, alpha: f64, grid: &GridSpec) -> CmdResult {
    let mut table = Table::new(gamma_columns(
        cli.kt,
        &["p0", "pn", "coherence", "membership", "rom", "rom_minus_1"],
    ));
    for gamma in grid.values() {
        let point = ghzx_point(n, alpha, gamma).map_err(lib_err)?;
        let rom = rom_closed(&point).map_err(lib_err)?;
        let mut row = Vec::new();
        push_gamma(&mut row, cli.kt, gamma);
        row.extend([
            Cell::F(point.p0()),
            Cell::F(point.pn()),
            Cell::F(point.coherence_real().map_err(lib_err)?),
            Cell::B(membership_closed(&point)),
            Cell::F(rom),
            Cell::F(rom - 1.0),
        ]);
        table.push(row);
    }
    let echo = format!("scan n={n} alpha={} gamma={}", fmt_f64(alpha), grid.echo());
    Ok((table, echo, None))
}

fn cmd_trajectory(cli: &Cli, n: usize, alpha: f64, grid: &GridSpec) -> CmdResult {
    if n > MAX_QUBITS {
        return Err(CliError::Capability(format!(
            "dense trajectory simulation supports n <= {MAX_QUBITS}, got {n}"
        )));
    }
    let psi = ghz_amplitudes(n, alpha).map_err(lib_err)?;
    let rho0 = DensityOperator::from_pure(n, &psi).map_err(lib_err)?;
    let mut table = Table::new(gamma_columns(
        cli.kt,
        &["rom_minus_1", "negativity", "concurrence", "m2"],
    ));
    for gamma in grid.values() {
        let point = ghzx_point(n, alpha, gamma).map_err(lib_err)?;
        let rho = amplitude_damp(&rho0, gamma).map_err(lib_err)?;
        let neg = negativity(&rho, &[0]).map_err(lib_err)?;
        let conc = if n == 2 {
            Some(concurrence(&rho).map_err(lib_err)?)
        } else {
            None
        };
        let m2 = if n <= MAX_PAULI_QUBITS {
            Some(srenyi2_linearized(&rho).map_err(lib_err)?)
        } else {
            None
        };
        let mut row = Vec::new();
        push_gamma(&mut row, cli.kt, gamma);
        row.extend([
            Cell::F(rom_closed(&point).map_err(lib_err)? - 1.0),
            Cell::F(neg),
            Cell::opt(conc),
            Cell::opt(m2),
        ]);
        table.push(row);
    }
    let echo = format!(
        "trajectory n={n} alpha={} gamma={}",
        fmt_f64(alpha),
        grid.echo()
    );
    Ok((table, echo, None))
}

fn cmd_rom(n: usize, alpha: f64, gamma: f64, verify_lp: bool) -> CmdResult {
    let point = ghzx_point(n, alpha, gamma).map_err(lib_err)?;
    let rom = rom_closed(&point).map_err(lib_err)?;
    let membership = membership_closed(&point);
    let mut cols = vec![
        "n",
        "alpha",
        "gamma",
        "p0",
        "pn",
        "coherence",
        "membership",
        "rom",
    ];
    if verify_lp {
        cols.extend_from_slice(&["rom_lp", "lp_residual", "membership_lp", "agreement"]);
    }
    let mut table = Table::new(cols);
    let mut row = vec![
        Cell::U(n),
        Cell::F(alpha),
        Cell::F(gamma),
        Cell::F(point.p0()),
        Cell::F(point.pn()),
        Cell::F(point.coherence_real().map_err(lib_err)?),
        Cell::B(membership),
        Cell::F(rom),
    ];
    let mut post = None;
    if verify_lp {
        let dict = StabDictionary::new(n).map_err(lib_err)?;
        let rho = point.to_density_operator().map_err(lib_err)?;
        let cert = robustness_lp(&rho, &dict).map_err(lib_err)?;
        let verdict = membership_lp(&rho, &dict).map_err(lib_err)?;
        let agree = (cert.value - rom).abs() <= 1e-6 && verdict.inside == membership;
        row.extend([
            Cell::F(cert.value),
            Cell::F(cert.residual),
            Cell::B(verdict.inside),
            Cell::B(agree),
        ]);
        if !agree {
            post = Some(CliError::Verification(format!(
                "closed form rom={} disagrees with LP rom={} (membership {} vs {})",
                fmt_f64(rom),
                fmt_f64(cert.value),
                membership,
                verdict.inside
            )));
        }
    }
    table.push(row);
    let echo = format!(
        "rom n={n} alpha={} gamma={} verify_lp={verify_lp}",
        fmt_f64(alpha),
        fmt_f64(gamma)
    );
    Ok((table, echo, post))
}

fn cmd_extract(cli: &Cli, n: usize, alpha: f64, gammas: (Vec<f64>, String)) -> CmdResult {
    let (values, gamma_echo) = gammas;
    let mut table = Table::new(gamma_columns(
        cli.kt,
        &[
            "success_probability",
            "bloch_x",
            "bloch_z",
            "coordinate",
            "h_polarization",
            "t_polarization",
            "outside_octahedron",
            "h_distillable",
            "t_distillable",
        ],
    ));
    for gamma in values {
        let r = parity_extract(n, alpha, gamma).map_err(lib_err)?;
        let mut row = Vec::new();
        push_gamma(&mut row, cli.kt, gamma);
        row.extend([
            Cell::F(r.success_probability),
            Cell::F(r.bloch.0),
            Cell::F(r.bloch.2),
            Cell::F(r.corrected_coordinate),
            Cell::F(r.h_polarization),
            Cell::F(r.t_polarization),
            Cell::B(r.outside_octahedron),
            Cell::B(r.h_distillable),
            Cell::B(r.t_distillable),
        ]);
        table.push(row);
    }
    let echo = format!("extract n={n} alpha={} gamma={gamma_echo}", fmt_f64(alpha));
    Ok((table, echo, None))
}

fn cmd_enumerate(n: usize) -> CmdResult {
    let states = enumerate_stabilizer_states(n).map_err(lib_err)?;
    let mut table = Table::new(vec![
        "index",
        "m",
        "offset",
        "basis",
        "linear_phase",
        "quadratic_phase",
        "support_size",
    ]);
    table.note("count", states.len());
    for (index, s) in states.iter().enumerate() {
        let basis = s
            .basis
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let linear = s
            .linear_phase
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let quadratic = s
            .quadratic_phase
            .iter()
            .map(|p| if *p { "1" } else { "0" })
            .collect::<Vec<_>>()
            .join(";");
        table.push(vec![
            Cell::U(index),
            Cell::U(s.m),
            Cell::U(s.offset),
            Cell::S(basis),
            Cell::S(linear),
            Cell::S(quadratic),
            Cell::U(1usize << s.m),
        ]);
    }
    Ok((table, format!("enumerate n={n}"), None))
}

fn cmd_classify(n: usize) -> CmdResult {
    let dict = StabDictionary::new(n).map_err(lib_err)?;
    let (insulators, generators, records) = classify_all(&dict);
    let mut table = Table::new(vec!["index", "label", "weight_profile"]);
    table.note("insulators", insulators);
    table.note("generators", generators);
    for r in records {
        let label = match r.label {
            StabClass::Insulator => "insulator",
            StabClass::Generator => "generator",
        };
        let profile = r
            .weight_profile
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(";");
        table.push(vec![Cell::U(r.index), Cell::S(label.into()), Cell::S(profile)]);
    }
    Ok((table, format!("classify n={n}"), None))
}

fn cmd_dicke(cli: &Cli, n: usize, k: usize, grid: &GridSpec) -> CmdResult {
    if k > n {
        return Err(CliError::Usage(format!("k={k} exceeds n={n}")));
    }
    let mut table = Table::new(gamma_columns(
        cli.kt,
        &["purity", "verdict", "postselect_probability", "reduction_residual"],
    ));
    for gamma in grid.values() {
        let rho = dicke_trajectory(n, k, gamma).map_err(lib_err)?;
        let purity = rho.purity();
        let (verdict, psel, residual) = dicke_verdict(n, k, gamma)?;
        let mut row = Vec::new();
        push_gamma(&mut row, cli.kt, gamma);
        row.extend([
            Cell::F(purity),
            Cell::S(verdict),
            Cell::opt(psel),
            Cell::opt(residual),
        ]);
        table.push(row);
    }
    let echo = format!("dicke n={n} k={k} gamma={}", grid.echo());
    Ok((table, echo, None))
}

/// Membership verdict for one damped Dicke point: uniform-superposition
/// inputs with extremal excitation number are insulators; `k = 1` uses
/// the row-dominance criterion, `k = n-1` the anti-W thresholds, and
/// interior `k` the postselection obstruction (one-sided).
fn dicke_verdict(
    n: usize,
    k: usize,
    gamma: f64,
) -> Result<(String, Option<f64>, Option<f64>), CliError> {
    if k == 0 || k == n {
        return Ok(("inside".into(), None, None));
    }
    if k == 1 {
        let w = vec![1.0 / (n as f64).sqrt(); n];
        let inside = generalized_w_membership(&w, gamma).map_err(lib_err)?;
        return Ok((if inside { "inside" } else { "outside" }.into(), None, None));
    }
    if k == n - 1 {
        let verdict = match antiw_membership(n, gamma).map_err(lib_err)? {
            AntiwVerdict::Inside => "inside",
            AntiwVerdict::Outside => "outside",
            AntiwVerdict::Unknown => "unknown",
        };
        return Ok((verdict.into(), None, None));
    }
    let obs = interior_dicke_obstruction(n, k, gamma).map_err(lib_err)?;
    let verdict = if obs.outside { "outside" } else { "unknown" };
    Ok((
        verdict.into(),
        Some(obs.postselect_probability),
        Some(obs.reduction_residual),
    ))
}

fn cmd_haar(n: usize, samples: usize, seed: u64, grid: &GridSpec) -> CmdResult {
    let stats = haar_endpoint_test(n, samples, seed, &grid.values()).map_err(lib_err)?;
    let passed = stats.fraction >= stats.bound - stats.margin;
    let mut table = Table::new(vec![
        "n",
        "samples",
        "seed",
        "violations",
        "fraction",
        "bound",
        "margin",
        "passed",
    ]);
    table.push(vec![
        Cell::U(n),
        Cell::U(stats.samples),
        Cell::U(seed as usize),
        Cell::U(stats.violations),
        Cell::F(stats.fraction),
        Cell::F(stats.bound),
        Cell::F(stats.margin),
        Cell::B(passed),
    ]);
    let post = (!passed).then(|| {
        CliError::Verification(format!(
            "violation fraction {} below bound {} - margin {}",
            fmt_f64(stats.fraction),
            fmt_f64(stats.bound),
            fmt_f64(stats.margin)
        ))
    });
    let echo = format!("haar n={n} samples={samples} seed={seed} gamma={}", grid.echo());
    Ok((table, echo, post))
}

fn cmd_slice(
    cli: &Cli,
    n: usize,
    basis: &str,
    alpha: f64,
    gammas: (Vec<f64>, String),
) -> CmdResult {
    let (values, gamma_echo) = gammas;
    let words: Vec<usize> = basis
        .split(',')
        .map(|w| w.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("basis '{basis}' must be two integers W1,W2")))?;
    if words.len() != 2 {
        return Err(CliError::Usage(format!("basis '{basis}' must be two integers W1,W2")));
    }
    let mut table = Table::new(gamma_columns(
        cli.kt,
        &["k", "p0", "p_l", "c_l", "membership", "gamma_minus", "gamma_plus"],
    ));
    for gamma in values {
        let s = affine_plane_slice(n, (words[0], words[1]), alpha, gamma).map_err(lib_err)?;
        let mut row = Vec::new();
        push_gamma(&mut row, cli.kt, gamma);
        row.extend([
            Cell::U(s.k),
            Cell::F(s.p0),
            Cell::F(s.p_l),
            Cell::F(s.c_l),
            Cell::B(s.membership),
            Cell::opt(s.gamma_minus),
            Cell::opt(s.gamma_plus),
        ]);
        table.push(row);
    }
    let echo = format!(
        "slice n={n} basis={},{} alpha={} gamma={gamma_echo}",
        words[0],
        words[1],
        fmt_f64(alpha)
    );
    Ok((table, echo, None))
}

fn cmd_pairing(xis: (Vec<f64>, String)) -> CmdResult {
    let (values, xi_echo) = xis;
    let mut table = Table::new(vec![
        "xi",
        "valid",
        "r",
        "alpha",
        "energy_even",
        "energy_odd",
        "overlap",
        "gamma_minus",
        "gamma_plus",
    ]);
    for xi in values {
        let g = pairing_ground_state(xi).map_err(lib_err)?;
        let (gm, gp) = if g.valid {
            let s = affine_plane_slice(3, (0b011, 0b101), g.alpha, 0.0).map_err(lib_err)?;
            (s.gamma_minus, s.gamma_plus)
        } else {
            (None, None)
        };
        table.push(vec![
            Cell::F(xi),
            Cell::B(g.valid),
            Cell::F(g.r),
            Cell::F(g.alpha),
            Cell::F(g.energy),
            Cell::F(g.energy_odd),
            Cell::F(g.overlap),
            Cell::opt(gm),
            Cell::opt(gp),
        ]);
    }
    Ok((table, format!("pairing xi={xi_echo}"), None))
}

fn cmd_mirror(cli: &Cli, alpha: f64, grid: &GridSpec) -> CmdResult {
    let t = thresholds(2, alpha).map_err(lib_err)?;
    let gp = t.gamma_plus;
    let mut table = Table::new(gamma_columns(
        cli.kt,
        &["on_branch", "rom_minus_1", "mirrored_concurrence", "difference"],
    ));
    for gamma in grid.values() {
        let on_branch = matches!(gp, Some(g) if gamma > g && gamma < 1.0);
        let mut row = Vec::new();
        push_gamma(&mut row, cli.kt, gamma);
        if on_branch {
            let (lhs, rhs) = resource_mirror_check(alpha, gamma).map_err(lib_err)?;
            row.extend([
                Cell::B(true),
                Cell::F(lhs),
                Cell::F(rhs),
                Cell::F(lhs - rhs),
            ]);
        } else {
            row.extend([Cell::B(false), Cell::Empty, Cell::Empty, Cell::Empty]);
        }
        table.push(row);
    }
    let echo = format!("mirror alpha={} gamma={}", fmt_f64(alpha), grid.echo());
    Ok((table, echo, None))
}
