use serde::Serialize;

use hyperfrac_core::kernels::{singular_kernel, GreenFunction};
use hyperfrac_core::spectral::{plancherel_density, spherical_function};

use crate::config::{Format, RunConfig, TableKind};
use crate::output::{sink, write_csv, write_json};
use crate::CliError;

const DEFAULT_DENSITY_LAMBDA_MAX: f64 = 10.0;

#[derive(Debug, Serialize)]
struct Table {
    kind: &'static str,
    n: usize,
    s: f64,
    columns: [&'static str; 2],
    rows: Vec<Vec<f64>>,
}

pub fn run(kind: TableKind, lambda: f64, config: &RunConfig) -> Result<(), CliError> {
    let params = config.params()?;
    let n = params.n;
    let (name, column, rows): (_, _, Vec<Vec<f64>>) = match kind {
        TableKind::Green => {
            let g = GreenFunction::new(params)?;
            let rows = radii(config)?
                .into_iter()
                .map(|r| Ok(vec![r, g.eval(r)?]))
                .collect::<Result<_, CliError>>()?;
            ("green", "rho", rows)
        }
        TableKind::Kernel => {
            let rows = radii(config)?
                .into_iter()
                .map(|r| Ok(vec![r, singular_kernel(params, r)?]))
                .collect::<Result<_, CliError>>()?;
            ("kernel", "rho", rows)
        }
        TableKind::Spherical => {
            let rows = config
                .grid()?
                .into_iter()
                .map(|r| Ok(vec![r, spherical_function(n, lambda, r)?]))
                .collect::<Result<_, CliError>>()?;
            ("spherical", "rho", rows)
        }
        TableKind::Density => {
            let top = config.lambda_max.unwrap_or(DEFAULT_DENSITY_LAMBDA_MAX);
            if !(top > 0.0) || config.nodes < 2 {
                return Err(CliError::Usage(
                    "density table needs --lambda-max > 0 and --nodes >= 2".into(),
                ));
            }
            let k = config.nodes - 1;
            let rows = (0..=k)
                .map(|i| {
                    let l = top * i as f64 / k as f64;
                    vec![l, plancherel_density(n, l)]
                })
                .collect();
            ("density", "lambda", rows)
        }
    };
    let mut out = sink(config.out.as_deref())?;
    match config.format {
        Format::Csv => write_csv(&mut out, &[column, "value"], &rows)?,
        Format::Json => write_json(
            &mut out,
            &Table {
                kind: name,
                n,
                s: params.s,
                columns: [column, "value"],
                rows,
            },
        )?,
    }
    Ok(())
}

/// Grid radii without the origin, where the Green's function and kernel blow up.
fn radii(config: &RunConfig) -> Result<Vec<f64>, CliError> {
    Ok(config.grid()?.into_iter().filter(|&r| r > 0.0).collect())
}
