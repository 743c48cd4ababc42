//! Subcommand implementations.
//!
//! Every runner takes its parsed flags, does the work through the library,
//! and returns a [`CmdOutput`]: the primary document destined for standard
//! output (unless `--out` redirected it into a file) plus an optional
//! check-failure message. A failed check — a zero divisor found, a broken
//! commutation relation — still prints its full report; the failure only
//! changes the exit code, so scripts can both inspect the evidence and
//! branch on the result.
//!
//! Determinism contract: given identical flags, every runner emits
//! identical bytes regardless of thread count. All randomness flows through
//! per-trial ChaCha streams keyed by the mandatory `--seed`, parallel
//! results are collected in trial order, and every float is printed with 17
//! significant digits.

use crate::args::{
    CcrArgs, ConvertArgs, EvalArgs, GbmArgs, GrowthArgs, HermiteArgs, HsArgs, ProbeArgs,
};
use crate::render::{
    canonical_json, csv_f64, csv_table, parse_complex_list, parse_f64_list, polynomial_text,
    ComplexJson,
};
use hida::ccr::{annihilate, ccr_commutator, create, multiply_coordinate, pairing};
use hida::growth::{ray_growth_fit_with_phases, Functional, GrowthReport, HermiteCoordVector};
use hida::json::{from_json, to_json};
use hida::multi_index::{count_multi_indices, enumerate_multi_indices};
use hida::poly1d::hermite_generate;
use hida::probe::{zero_divisor_probe, ProbeConfig};
use hida::quadrature::QuadratureRule;
use hida::sample::{random_expansion, trial_rng, SampleConfig};
use hida::stochastic::{hs_integral, moments, solve_gbm, GbmMethod, TimeGrid};
use hida::transforms::{
    s_transform_eval, s_transform_quadrature, t_transform_eval, t_transform_quadrature,
};
use hida::{ChaosExpansion, Error, MultiIndex};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// Coordinate-count limit for `--N` flags.
const DIM_FLAG_CAP: usize = 12;
/// Degree limit for degree flags, matching the engine's cap.
const DEGREE_FLAG_CAP: usize = 20;
/// Refuse Wick-Euler runs whose state would need more distinct chaos terms
/// than this; beyond it the dense lower-degree grid no longer fits a desk.
const EULER_TERM_BUDGET: u128 = 5_000_000;
/// Refuse exhaustive CCR sweeps over more basis terms than this.
const CCR_BASIS_BUDGET: u128 = 200_000;

/// What a runner produced.
#[derive(Debug)]
pub struct CmdOutput {
    /// Document for standard output; `None` when `--out` redirected it.
    pub stdout: Option<String>,
    /// Set when the command ran to completion but its check failed; the
    /// caller turns this into a structured error and a nonzero exit.
    pub check_failure: Option<String>,
}

impl CmdOutput {
    fn ok(stdout: Option<String>) -> Self {
        CmdOutput {
            stdout,
            check_failure: None,
        }
    }
}

/// An error on its way to the structured-JSON stderr channel.
#[derive(Debug)]
pub enum CliError {
    /// Engine-level validation or computation error.
    Lib(Error),
    /// Filesystem trouble, with the path that caused it.
    Io { path: PathBuf, message: String },
    /// A verification subcommand completed and found a violation.
    CheckFailed { message: String },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Io { .. } => "io_error",
            CliError::CheckFailed { .. } => "check_failed",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io { message, .. } => message.clone(),
            CliError::CheckFailed { message } => message.clone(),
        }
    }

    pub fn path(&self) -> Option<String> {
        match self {
            CliError::Io { path, .. } => Some(path.display().to_string()),
            _ => None,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CmdResult = Result<CmdOutput, CliError>;

fn invalid(message: String) -> CliError {
    CliError::Lib(Error::InvalidConfig(message))
}

fn require_dim_flag(n: usize) -> Result<(), CliError> {
    if n == 0 || n > DIM_FLAG_CAP {
        return Err(invalid(format!("--N must lie in 1..={DIM_FLAG_CAP}, got {n}")));
    }
    Ok(())
}

fn require_degree_flag(flag: &str, d: usize) -> Result<(), CliError> {
    if d == 0 || d > DEGREE_FLAG_CAP {
        return Err(invalid(format!(
            "{flag} must lie in 1..={DEGREE_FLAG_CAP}, got {d}"
        )));
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: format!("could not read file: {e}"),
    })
}

/// Write `text` plus a single trailing newline, mirroring what printing to
/// standard output would produce.
fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: format!("could not write file: {e}"),
    })
}

/// Route the primary document to `--out` or to standard output.
fn deliver(text: String, out: Option<&PathBuf>) -> Result<Option<String>, CliError> {
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn load_expansion(path: &Path) -> Result<ChaosExpansion, CliError> {
    let text = read_file(path)?;
    Ok(from_json(&text)?)
}

// ---------------------------------------------------------------------------
// probe-zero-divisor
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ProbeDoc {
    dim_max: usize,
    degree_max: usize,
    trials: u64,
    seed: u64,
    density: f64,
    complex: bool,
    zero_products_found: u64,
    lowest_part_mismatches: u64,
    failures: u64,
    failed_trials: Vec<u64>,
    /// Smallest leading-coefficient magnitude seen; absent if no trial
    /// passed.
    min_lowest_coeff: Option<f64>,
    lowest_degree_counts: Vec<u64>,
}

pub fn probe(args: &ProbeArgs) -> CmdResult {
    require_dim_flag(args.n)?;
    require_degree_flag("--D", args.d)?;
    let report = zero_divisor_probe(ProbeConfig {
        trials: args.trials,
        dim_max: args.n,
        degree_max: args.d,
        density: args.density,
        complex: !args.real,
        seed: args.seed,
    })?;
    let doc = ProbeDoc {
        dim_max: args.n,
        degree_max: args.d,
        trials: report.trials,
        seed: args.seed,
        density: args.density,
        complex: !args.real,
        zero_products_found: report.zero_products_found,
        lowest_part_mismatches: report.lowest_part_mismatches,
        failures: report.failures,
        failed_trials: report.failed_trials.clone(),
        min_lowest_coeff: report.min_lowest_coeff.is_finite().then_some(report.min_lowest_coeff),
        lowest_degree_counts: report.lowest_degree_counts.clone(),
    };
    let stdout = deliver(canonical_json(&doc)?, args.out.as_ref())?;
    let check_failure = (report.failures > 0).then(|| {
        format!(
            "{} of {} trials violated the zero-divisor-free property \
             ({} zero products, {} lowest-part mismatches)",
            report.failures, report.trials, report.zero_products_found,
            report.lowest_part_mismatches
        )
    });
    Ok(CmdOutput {
        stdout,
        check_failure,
    })
}

// ---------------------------------------------------------------------------
// solve-gbm
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GbmDoc {
    t: f64,
    m: usize,
    /// Grid cells the solution was actually built over. The closed form's
    /// truncation has the same law on every grid with the given horizon,
    /// so it is computed on a collapsed one-cell grid; Wick-Euler genuinely
    /// depends on the grid and uses all `m` cells.
    cells_used: usize,
    degree: usize,
    method: String,
    mean: f64,
    second_moment: f64,
    variance: f64,
    mc_mean: f64,
    mc_stderr: f64,
    mc_samples: usize,
    seed: u64,
    l2_mass_by_degree: Vec<f64>,
}

pub fn gbm(args: &GbmArgs) -> CmdResult {
    require_degree_flag("--degree", args.degree)?;
    let grid = TimeGrid::new(args.t, args.m)?;
    let method = GbmMethod::from_name(&args.method).ok_or_else(|| {
        invalid(format!(
            "--method must be closed_form or wick_euler, got '{}'",
            args.method
        ))
    })?;
    let (solution, cells_used) = match method {
        GbmMethod::ClosedForm => {
            let collapsed = TimeGrid::new(args.t, 1)?;
            (solve_gbm(&collapsed, args.degree, method)?, 1)
        }
        GbmMethod::WickEuler => {
            let budget = count_multi_indices(args.m, args.degree);
            if budget > EULER_TERM_BUDGET {
                return Err(invalid(format!(
                    "wick_euler over {} cells at degree {} reaches {budget} \
                     distinct chaos terms (budget {EULER_TERM_BUDGET}); \
                     lower --M or --degree",
                    args.m, args.degree
                )));
            }
            (solve_gbm(&grid, args.degree, method)?, args.m)
        }
    };
    let report = moments(&solution, args.mc_samples, args.seed)?;
    let mass = solution.l2_mass_by_degree();
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = mass
            .iter()
            .enumerate()
            .map(|(degree, &m)| vec![degree.to_string(), csv_f64(m)])
            .collect();
        write_file(path, &csv_table(&["degree", "l2_mass"], &rows))?;
    }
    let doc = GbmDoc {
        t: args.t,
        m: args.m,
        cells_used,
        degree: args.degree,
        method: args.method.clone(),
        mean: report.mean,
        second_moment: report.second_moment,
        variance: report.variance,
        mc_mean: report.mc_mean,
        mc_stderr: report.mc_stderr,
        mc_samples: report.samples,
        seed: report.seed,
        l2_mass_by_degree: mass,
    };
    Ok(CmdOutput::ok(deliver(canonical_json(&doc)?, args.out.as_ref())?))
}

// ---------------------------------------------------------------------------
// check-growth
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GrowthDoc {
    source: String,
    xi: Vec<f64>,
    p: u32,
    radii: Vec<f64>,
    phases: usize,
    report: GrowthReport,
}

pub fn growth(args: &GrowthArgs) -> CmdResult {
    let (functional, source) = match (&args.expansion, &args.form) {
        (Some(path), None) => (
            Functional::ChaosBacked(load_expansion(path)?),
            format!("expansion:{}", path.display()),
        ),
        (None, Some(name)) => (
            Functional::from_name(name).ok_or_else(|| {
                invalid(format!(
                    "unknown functional '{name}'; registered forms: {}",
                    Functional::registry().join(", ")
                ))
            })?,
            format!("form:{name}"),
        ),
        // clap's argument group guarantees exactly one input source.
        _ => unreachable!("argument group enforces one input source"),
    };
    let xi = HermiteCoordVector::new(parse_f64_list(&args.xi, "--xi")?)?;
    let radii = match &args.radii {
        Some(text) => parse_f64_list(text, "--radii")?,
        None => hida::growth::DEFAULT_RADII.to_vec(),
    };
    let report = ray_growth_fit_with_phases(&functional, &xi, args.p, &radii, args.phases)?;
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = report
            .samples
            .iter()
            .map(|&(r, m)| vec![csv_f64(r), csv_f64(m)])
            .collect();
        write_file(path, &csv_table(&["r", "m_r"], &rows))?;
    }
    let doc = GrowthDoc {
        source,
        xi: xi.coords().to_vec(),
        p: args.p,
        radii,
        phases: args.phases,
        report,
    };
    Ok(CmdOutput::ok(deliver(canonical_json(&doc)?, args.out.as_ref())?))
}

// ---------------------------------------------------------------------------
// ccr-check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CcrDoc {
    dim: usize,
    degree: usize,
    seed: u64,
    trials: u64,
    /// Commutator cases checked on basis terms: one per (term, i, j).
    basis_cases: u64,
    /// Commutator cases checked on random expansions.
    random_cases: u64,
    /// Whether every commutator equalled delta_ij times the input, with
    /// coefficient-for-coefficient equality.
    ccr_exact: bool,
    /// Whether coordinate multiplication equalled annihilation plus
    /// creation everywhere, again coefficient-exact.
    quantum_decomposition_exact: bool,
    /// Worst relative gap in the duality <create(i,a), b> = <a, ann(i,b)>.
    duality_max_rel_error: f64,
    passed: bool,
}

pub fn ccr(args: &CcrArgs) -> CmdResult {
    require_dim_flag(args.n)?;
    require_degree_flag("--D", args.d)?;
    let basis_size = count_multi_indices(args.n, args.d - 1);
    if basis_size > CCR_BASIS_BUDGET {
        return Err(invalid(format!(
            "exhaustive sweep over {basis_size} basis terms exceeds the \
             budget {CCR_BASIS_BUDGET}; lower --N or --D"
        )));
    }

    let zero = ChaosExpansion::zero(args.n, args.d)?;
    let mut basis_cases = 0u64;
    let mut ccr_exact = true;
    let mut quantum_exact = true;
    for alpha in enumerate_multi_indices(args.n, args.d - 1) {
        let e = ChaosExpansion::single_term(args.n, args.d, alpha, Complex64::ONE)?;
        for i in 0..args.n {
            for j in 0..args.n {
                let comm = ccr_commutator(i, j, &e)?;
                let expected = if i == j { &e } else { &zero };
                if comm != *expected {
                    ccr_exact = false;
                }
                basis_cases += 1;
            }
            let direct = multiply_coordinate(i, &e)?;
            let split = annihilate(i, &e)?.add(&create(i, &e)?)?;
            if direct != split {
                quantum_exact = false;
            }
        }
    }

    let cfg = SampleConfig {
        density: 0.5,
        complex: true,
    };
    let mut random_cases = 0u64;
    let mut duality_max = 0.0f64;
    for t in 0..args.trials {
        let mut rng = trial_rng(args.seed, t);
        // Drawn one degree below the cap, then re-pinned at the cap, so
        // creation has headroom on every term.
        let a = random_expansion(&mut rng, args.n, args.d - 1, cfg)?.truncate(args.d)?;
        let b = random_expansion(&mut rng, args.n, args.d - 1, cfg)?.truncate(args.d)?;
        for i in 0..args.n {
            for j in 0..args.n {
                let comm = ccr_commutator(i, j, &a)?;
                let expected = if i == j { &a } else { &zero };
                if comm != *expected {
                    ccr_exact = false;
                }
                random_cases += 1;
            }
            let direct = multiply_coordinate(i, &a)?;
            let split = annihilate(i, &a)?.add(&create(i, &a)?)?;
            if direct != split {
                quantum_exact = false;
            }
            let lhs = pairing(&create(i, &a)?, &b)?;
            let rhs = pairing(&a, &annihilate(i, &b)?)?;
            let rel = (lhs - rhs).norm() / (1.0 + lhs.norm().max(rhs.norm()));
            duality_max = duality_max.max(rel);
        }
    }

    let passed = ccr_exact && quantum_exact && duality_max <= 1e-10;
    let doc = CcrDoc {
        dim: args.n,
        degree: args.d,
        seed: args.seed,
        trials: args.trials,
        basis_cases,
        random_cases,
        ccr_exact,
        quantum_decomposition_exact: quantum_exact,
        duality_max_rel_error: duality_max,
        passed,
    };
    let stdout = deliver(canonical_json(&doc)?, args.out.as_ref())?;
    let check_failure = (!passed).then(|| {
        format!(
            "operator verification failed (commutators exact: {ccr_exact}, \
             quantum decomposition exact: {quantum_exact}, \
             worst duality gap {duality_max:e})"
        )
    });
    Ok(CmdOutput {
        stdout,
        check_failure,
    })
}

// ---------------------------------------------------------------------------
// s-eval / t-eval
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EvalPointDoc {
    at: Vec<ComplexJson>,
    value: ComplexJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature: Option<ComplexJson>,
}

#[derive(Serialize)]
struct EvalDoc {
    transform: &'static str,
    input: String,
    dim: usize,
    max_degree: usize,
    points: Vec<EvalPointDoc>,
}

/// Which transform an `EvalArgs` invocation computes.
#[derive(Clone, Copy)]
pub enum Transform {
    S,
    T,
}

pub fn eval(args: &EvalArgs, transform: Transform) -> CmdResult {
    let a = load_expansion(&args.input)?;
    let mut points = Vec::with_capacity(args.at.len());
    for text in &args.at {
        let at = parse_complex_list(text, "--at")?;
        let value = match transform {
            Transform::S => s_transform_eval(&a, &at)?,
            Transform::T => t_transform_eval(&a, &at)?,
        };
        let quadrature = if args.quadrature {
            let real: Vec<f64> = at
                .iter()
                .map(|z| {
                    if z.im != 0.0 {
                        Err(invalid(format!(
                            "--quadrature needs real components, got {z}"
                        )))
                    } else {
                        Ok(z.re)
                    }
                })
                .collect::<Result<_, _>>()?;
            let rule = QuadratureRule::for_degree(a.max_degree())?;
            let oracle = match transform {
                Transform::S => s_transform_quadrature(&a, &real, &rule)?,
                Transform::T => t_transform_quadrature(&a, &real, &rule)?,
            };
            Some(oracle.into())
        } else {
            None
        };
        points.push(EvalPointDoc {
            at: at.into_iter().map(ComplexJson::from).collect(),
            value: value.into(),
            quadrature,
        });
    }
    let doc = EvalDoc {
        transform: match transform {
            Transform::S => "s",
            Transform::T => "t",
        },
        input: args.input.display().to_string(),
        dim: a.dim(),
        max_degree: a.max_degree(),
        points,
    };
    Ok(CmdOutput::ok(deliver(canonical_json(&doc)?, args.out.as_ref())?))
}

// ---------------------------------------------------------------------------
// hermite
// ---------------------------------------------------------------------------

pub fn hermite(args: &HermiteArgs) -> CmdResult {
    let p = hermite_generate(args.n)?;
    Ok(CmdOutput::ok(deliver(polynomial_text(&p), args.out.as_ref())?))
}

// ---------------------------------------------------------------------------
// hs-demo
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct HsRowDoc {
    cell: usize,
    t_start: f64,
    integrand_norm_sq: f64,
    contribution: f64,
}

#[derive(Serialize)]
struct HsDoc {
    t: f64,
    m: usize,
    degree: usize,
    integrand_degree: usize,
    seed: u64,
    /// Second moment of the integral, `E[(∫ f dB)^2]`.
    lhs_second_moment: f64,
    /// The isometry's other side, `Σ_k dt · E[f_k^2]`.
    rhs_weighted_sum: f64,
    difference: f64,
    /// Whether the two sides agree bit for bit. True on dyadic grids
    /// (default T=1, M=16); other grids may differ by an ulp.
    exact_match: bool,
    rows: Vec<HsRowDoc>,
}

/// Draw one adapted integrand per cell: cell k's integrand uses only the
/// (up to three) coordinates just before k, with coefficients on the
/// dyadic lattice m/16, |m| <= 32. Adaptedness makes the discrete Ito
/// isometry hold term by term; the dyadic lattice makes it hold exactly in
/// floating point when dt is an even power of two.
fn adapted_integrands(
    grid: &TimeGrid,
    cap: usize,
    integrand_degree: usize,
    seed: u64,
) -> Result<Vec<ChaosExpansion>, CliError> {
    let cells = grid.cells();
    let mut integrands = Vec::with_capacity(cells);
    for k in 0..cells {
        let mut rng = trial_rng(seed, k as u64);
        let start = k.saturating_sub(3);
        let window = k - start;
        let mut terms = Vec::new();
        for alpha_local in enumerate_multi_indices(window, integrand_degree) {
            // Unconditional draw per enumerated index keeps the stream
            // position independent of earlier outcomes.
            let draw = rng.random_range(-32i64..=32) as f64 / 16.0;
            if draw == 0.0 {
                continue;
            }
            let pairs: Vec<(usize, u32)> = alpha_local
                .iter()
                .map(|(d_local, x)| (start + d_local, x))
                .collect();
            terms.push((MultiIndex::from_pairs(&pairs)?, Complex64::new(draw, 0.0)));
        }
        integrands.push(ChaosExpansion::from_terms(cells, cap, terms)?);
    }
    Ok(integrands)
}

pub fn hs_demo(args: &HsArgs) -> CmdResult {
    require_degree_flag("--degree", args.degree)?;
    let grid = TimeGrid::new(args.t, args.m)?;
    let integrand_degree = (args.degree - 1).min(2);
    let integrands = adapted_integrands(&grid, args.degree, integrand_degree, args.seed)?;
    let integral = hs_integral(&grid, &integrands)?;
    let lhs = integral.l2_norm_sq();
    let dt = grid.dt();
    let mut rhs = 0.0f64;
    let mut rows = Vec::with_capacity(args.m);
    for (k, f) in integrands.iter().enumerate() {
        let norm_sq = f.l2_norm_sq();
        let contribution = dt * norm_sq;
        rhs += contribution;
        rows.push(HsRowDoc {
            cell: k,
            t_start: k as f64 * dt,
            integrand_norm_sq: norm_sq,
            contribution,
        });
    }
    if let Some(path) = &args.csv {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.cell.to_string(),
                    csv_f64(r.t_start),
                    csv_f64(r.integrand_norm_sq),
                    csv_f64(r.contribution),
                ]
            })
            .collect();
        write_file(
            path,
            &csv_table(&["cell", "t_start", "integrand_norm_sq", "contribution"], &table),
        )?;
    }
    let difference = lhs - rhs;
    let doc = HsDoc {
        t: args.t,
        m: args.m,
        degree: args.degree,
        integrand_degree,
        seed: args.seed,
        lhs_second_moment: lhs,
        rhs_weighted_sum: rhs,
        difference,
        exact_match: difference == 0.0,
        rows,
    };
    Ok(CmdOutput::ok(deliver(canonical_json(&doc)?, args.out.as_ref())?))
}

// ---------------------------------------------------------------------------
// convert
// ---------------------------------------------------------------------------

pub fn convert(args: &ConvertArgs) -> CmdResult {
    let a = load_expansion(&args.input)?;
    Ok(CmdOutput::ok(deliver(to_json(&a)?, args.out.as_ref())?))
}
