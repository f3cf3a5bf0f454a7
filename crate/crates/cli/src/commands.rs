use std::path::Path;

use gqrm_core::fock::FockBasis;
use gqrm_core::gauge::checks::{
    cross_frame_deviation, hopping_invariance_check, transporter_law_check, CheckOutcome, RNG_NAME,
};
use gqrm_core::gauge::{suppression_factor, BuildOptions, CouplingParams, SpatialProfile};
use gqrm_core::spectra::{adjacent_excited_gaps, format_sig, sweep, CrossingKind, SweepConfig};
use gqrm_core::twolevel::{reduce_to_two_level, solve_schrodinger_1d, ReductionOptions, ReductionResult, SolverOptions};
use gqrm_core::Error as CoreError;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ChecksSection, Command, RunConfig, SolverConfig};
use crate::error::{exit, CliError};
use crate::output::{resolve, write_atomic};

const DEFAULT_SEED: u64 = 0;

pub fn run(config: &RunConfig, base: &Path) -> Result<i32, CliError> {
    match config.command {
        Command::Reduce => reduce(config, base),
        Command::Spectrum => spectrum(config, base),
        Command::VerifyGauge => verify_gauge(config, base),
        Command::Formfactor => formfactor(config, base),
        Command::WilsonCheck => wilson_check(config, base),
    }
}

fn reduce(config: &RunConfig, base: &Path) -> Result<i32, CliError> {
    let potential = RunConfig::require(&config.potential, "potential", "reduce")?;
    let solver = config.solver.clone().unwrap_or_default();
    let spec = potential.spec(base)?;
    let options = SolverOptions { stencil: solver.stencil.into(), refinement_check: solver.refinement_check };
    let solution = solve_schrodinger_1d(&spec, 3, options)?;
    let (result, valid) = match reduce_to_two_level(&solution, ReductionOptions { min_validity: solver.min_validity }) {
        Ok(r) => (r, true),
        Err(CoreError::LowValidity { result, .. }) => (*result, false),
        Err(e) => return Err(e.into()),
    };
    let report = reduction_report(&result, &solver, valid)?;
    write_atomic(&resolve(base, &config.output), &to_pretty(&report)?)?;

    println!(
        "E0 = {}  E1 = {}  E2 = {}",
        format_sig(result.e0),
        format_sig(result.e1),
        format_sig(result.e2)
    );
    println!(
        "delta = {}  epsilon = {}  t = {}  a = {}",
        format_sig(result.delta),
        format_sig(result.epsilon),
        format_sig(result.t),
        format_sig(result.a)
    );
    println!(
        "validity ratio = {}  gap consistency = {}",
        format_sig(result.validity_ratio),
        format_sig(result.gap_consistency())
    );
    for w in &result.warnings {
        eprintln!("warning: {}", serde_json::to_string(w).unwrap_or_default());
    }
    if valid {
        Ok(exit::OK)
    } else {
        eprintln!(
            "validity ratio {} is below the threshold {}; result written and flagged",
            format_sig(result.validity_ratio),
            solver.min_validity
        );
        Ok(exit::VALIDITY)
    }
}

fn reduction_report(result: &ReductionResult, solver: &SolverConfig, valid: bool) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(result).map_err(|e| CliError::Solver(e.to_string()))?;
    let obj = v.as_object_mut().expect("struct serializes to an object");
    obj.insert("omega_q".into(), json!(result.omega_q()));
    obj.insert("gap_consistency".into(), json!(result.gap_consistency()));
    obj.insert("min_validity".into(), json!(solver.min_validity));
    obj.insert("valid".into(), json!(valid));
    Ok(v)
}

fn spectrum(config: &RunConfig, base: &Path) -> Result<i32, CliError> {
    let cmd = "spectrum";
    let params = RunConfig::require(&config.two_level, "two_level", cmd)?.params()?;
    let mode = RunConfig::require(&config.mode, "mode", cmd)?.clone();
    let section = RunConfig::require(&config.sweep, "sweep", cmd)?;
    let mut sweep_config = SweepConfig::new(section.grid()?, params, mode, section.frame);
    sweep_config.n_levels = section.n_levels;
    sweep_config.cutoff_policy = section.cutoff_policy;
    sweep_config.options =
        BuildOptions { tls_basis: section.tls_basis, trig: section.trig, displacement: section.displacement };

    let table = sweep(&sweep_config)?;
    write_atomic(&resolve(base, &config.output), &table.to_csv())?;
    if let Some(svg) = &section.svg {
        write_atomic(&resolve(base, svg), &table.to_svg())?;
    }

    let refine = if section.refine_gaps { Some(&sweep_config) } else { None };
    let analyses = adjacent_excited_gaps(&table, refine, section.crossing_tol)?;
    println!("{} rows, {} levels, frame {:?}", table.rows.len(), table.n_levels, section.frame);
    let mut crossings = 0;
    for a in &analyses {
        for m in &a.minima {
            let kind = match m.kind {
                CrossingKind::Crossing => {
                    crossings += 1;
                    "crossing"
                }
                CrossingKind::Avoided => "avoided",
            };
            println!(
                "levels ({}, {}): minimum gap {} at eta = {} ({kind})",
                a.pair.0,
                a.pair.1,
                format_sig(m.gap),
                format_sig(m.eta)
            );
        }
    }
    if crossings == 0 {
        println!("no gap below crossing_tol = {:e}", section.crossing_tol);
    } else {
        println!("{crossings} gap minima below crossing_tol = {:e}", section.crossing_tol);
    }

    let unconverged: Vec<String> =
        table.rows.iter().filter(|r| !r.converged).map(|r| format_sig(r.eta)).collect();
    if unconverged.is_empty() {
        Ok(exit::OK)
    } else {
        eprintln!("cutoff not converged at eta = {}", unconverged.join(", "));
        Ok(exit::CONVERGENCE)
    }
}

#[derive(Serialize)]
struct CheckReport {
    seed: u64,
    rng: &'static str,
    checks: Vec<CheckOutcome>,
    passed: bool,
}

fn verify_gauge(config: &RunConfig, base: &Path) -> Result<i32, CliError> {
    let cmd = "verify-gauge";
    let params = RunConfig::require(&config.two_level, "two_level", cmd)?.params()?;
    let mode = RunConfig::require(&config.mode, "mode", cmd)?;
    let cross = RunConfig::require(&config.cross_frame, "cross_frame", cmd)?;
    let coupling = CouplingParams { eta: cross.eta };
    let options = BuildOptions { trig: cross.trig, displacement: cross.displacement, ..Default::default() };
    let deviation =
        cross_frame_deviation(&params, mode, &coupling, FockBasis::new(cross.cutoff), cross.n_levels, &options)?
            / mode.omega_ph;
    let first = CheckOutcome {
        name: "cross_frame_spectrum".into(),
        trials: cross.n_levels,
        max_deviation: deviation,
        threshold: cross.tolerance,
        passed: deviation <= cross.tolerance,
    };
    let mut checks = vec![first];
    checks.extend(random_checks(config)?);
    finish_checks(config, base, checks)
}

fn wilson_check(config: &RunConfig, base: &Path) -> Result<i32, CliError> {
    finish_checks(config, base, random_checks(config)?)
}

fn random_checks(config: &RunConfig) -> Result<Vec<CheckOutcome>, CliError> {
    let seed = config.seed.unwrap_or(DEFAULT_SEED);
    let checks = config.checks.clone().unwrap_or_default();
    let ChecksSection { hopping_trials, transporter_trials, tolerance } = checks;
    // independent streams for the two checks
    Ok(vec![
        hopping_invariance_check(seed, hopping_trials, tolerance)?,
        transporter_law_check(seed.wrapping_add(1), transporter_trials, tolerance)?,
    ])
}

fn finish_checks(config: &RunConfig, base: &Path, checks: Vec<CheckOutcome>) -> Result<i32, CliError> {
    let seed = config.seed.unwrap_or(DEFAULT_SEED);
    let passed = checks.iter().all(|c| c.passed);
    let report = CheckReport { seed, rng: RNG_NAME, checks, passed };
    write_atomic(&resolve(base, &config.output), &to_pretty(&report)?)?;
    for c in &report.checks {
        println!(
            "{}: max deviation {} (threshold {:e}, {} trials) {}",
            c.name,
            format_sig(c.max_deviation),
            c.threshold,
            c.trials,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    if passed {
        return Ok(exit::OK);
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("check `{}` failed: deviation {} exceeds {:e}", c.name, format_sig(c.max_deviation), c.threshold);
    }
    Ok(exit::GAUGE_CHECK)
}

fn formfactor(config: &RunConfig, base: &Path) -> Result<i32, CliError> {
    let cmd = "formfactor";
    let mode = RunConfig::require(&config.mode, "mode", cmd)?;
    let phi = match mode.profile {
        SpatialProfile::Cosine { phi, .. } => phi,
        _ => return Err(CliError::config("formfactor needs a cosine mode profile")),
    };
    let grid = RunConfig::require(&config.formfactor, "formfactor", cmd)?.grid()?;
    if grid.iter().any(|ka| !ka.is_finite()) {
        return Err(CliError::config("formfactor: k·a values must be finite"));
    }
    let mut csv = String::from("k_times_a,suppression_factor\n");
    for ka in &grid {
        csv.push_str(&format!("{},{}\n", format_sig(*ka), format_sig(suppression_factor(*ka, phi))));
    }
    write_atomic(&resolve(base, &config.output), &csv)?;
    println!("{} points written", grid.len());
    Ok(exit::OK)
}

fn to_pretty(v: &impl Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| CliError::Solver(e.to_string()))
}
