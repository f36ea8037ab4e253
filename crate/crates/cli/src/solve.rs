use std::path::PathBuf;

use hyperfrac_core::solver::{decay_check, picard_solve, DecayReport};
use hyperfrac_core::{Regime, SolveReport};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::output::{sink, write_csv, write_json};
use crate::CliError;

const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Serialize)]
struct SolveOutput<'a> {
    n: usize,
    s: f64,
    p: f64,
    critical_exponent: f64,
    tol: f64,
    decay: DecayReport,
    report: &'a SolveReport,
}

pub fn run(
    config: &RunConfig,
    allow_critical: bool,
    max_iter: usize,
    report_path: Option<PathBuf>,
) -> Result<(), CliError> {
    let params = config.params()?;
    if params.regime() == Regime::Critical && !allow_critical {
        return Err(CliError::Usage(format!(
            "p = {} equals the critical exponent (n+2s)/(n-2s); pass --allow-critical to run anyway",
            params.p
        )));
    }
    let tol = config.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let report = picard_solve(params, &config.grid()?, tol, max_iter)?;
    let output = SolveOutput {
        n: params.n,
        s: params.s,
        p: params.p,
        critical_exponent: params.critical_exponent(),
        tol,
        decay: decay_check(&report.profile),
        report: &report,
    };
    match config.format {
        Format::Json => write_json(&mut sink(config.out.as_deref())?, &output)?,
        Format::Csv => {
            let rows: Vec<Vec<f64>> = report
                .profile
                .grid()
                .iter()
                .zip(report.profile.values())
                .map(|(&r, &u)| vec![r, u])
                .collect();
            write_csv(&mut sink(config.out.as_deref())?, &["rho", "u"], &rows)?;
            let path = report_path.or_else(|| config.out.as_ref().map(|p| p.with_extension("report.json")));
            match path {
                Some(p) => write_json(&mut sink(Some(&p))?, &output)?,
                None => write_json(&mut std::io::stderr(), &output)?,
            }
        }
    }
    if !report.converged {
        return Err(CliError::NotConverged(format!(
            "no convergence after {} iterations (residual {:.3e})",
            report.iterations, report.residual
        )));
    }
    Ok(())
}
