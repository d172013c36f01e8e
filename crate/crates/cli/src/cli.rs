use std::io::Write;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use spin7_core::clifford::{CliffordRep, Spinor16};
use spin7_core::exterior::transform;
use spin7_core::flow::{flow_run_indexed, BasinStats, FlowConfig, FlowReport};
use spin7_core::linalg::sym_eigenvalues;
use spin7_core::potential::{potential_gradient, potential_hessian, potential_value};
use spin7_core::random::{rng, rotation};
use spin7_core::spin7::{
    canonical_cayley, decompose_4form, is_conformal_spin7, lambda_operator, stabilizer_dimension, DEFAULT_TOL,
};
use spin7_core::square::{check_square_conditions, recover_spinor, signed_square, SquareReport};
use spin7_core::{Error, Orientation, Polyform, Sign};

use crate::json::{emit, load, load_metric, Failure};

const O: Orientation = Orientation::STANDARD;

/// Eigenvalues closer than this (relative to the largest) share a cluster.
const CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "spin7", version, about = "Spin(7) forms on R^8: predicates, spinor squares, the cubic potential and its flow")]
pub struct Cli {
    /// Tolerance for predicates and verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for sampling; overrides the seed in a flow config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a 4-form is a conformal Spin(7) form (reads stdin without --form).
    Verify {
        #[arg(long)]
        form: Option<String>,
        /// Metric file, or `identity`.
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Print the Cayley form, optionally pulled back by a seeded random rotation.
    Cayley {
        #[arg(long, value_name = "SEED", num_args = 0..=1)]
        rotate: Option<Option<u64>>,
    },
    /// Signed square of a spinor.
    Square {
        #[arg(long)]
        spinor: String,
        #[arg(long, allow_negative_numbers = true, value_parser = parse_sign, default_value = "+1")]
        kappa: Sign,
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Recover a spinor from its signed square.
    Recover {
        #[arg(long)]
        polyform: String,
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Split a 4-form into its 1, 7, 27 and 35 components relative to a reference form.
    Decompose {
        #[arg(long = "ref")]
        reference: String,
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Value of the cubic potential, with optional gradient and Hessian spectrum.
    Potential {
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "identity")]
        metric: String,
        #[arg(long)]
        grad: bool,
        #[arg(long)]
        hessian: bool,
    },
    /// Spectrum of ω ↦ 2ΦΔ₂ω on rank-4 forms, for a form or for the form of a spinor.
    Spectrum {
        #[arg(long, conflicts_with = "spinor")]
        form: Option<String>,
        #[arg(long)]
        spinor: Option<String>,
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Run the projected gradient flow (reads stdin without --config).
    Flow {
        #[arg(long)]
        config: Option<String>,
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Dimension of the stabilizer of a 4-form in so(8).
    Stabdim {
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "identity")]
        metric: String,
    },
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+1" | "1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        _ => Err(format!("expected +1 or -1, got {s:?}")),
    }
}

#[derive(Serialize)]
struct Recovered {
    spinor: Option<Spinor16>,
    report: SquareReport,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct PotentialOut {
    W: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gradient: Option<Polyform>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hessian_eigenvalues: Option<Vec<f64>>,
}

#[derive(Serialize, PartialEq, Debug)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Serialize)]
struct SpectrumOut {
    form: Polyform,
    eigenvalues: Vec<f64>,
    clusters: Vec<Cluster>,
}

#[derive(Serialize)]
struct Restarts {
    reports: Vec<FlowReport>,
    basin_statistics: BasinStats,
}

/// Groups sorted eigenvalues; each cluster reports its mean.
pub fn clusters(sorted: &[f64]) -> Vec<Cluster> {
    let scale = sorted.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &x in sorted {
        match out.last_mut() {
            Some((sum, n)) if x - last <= CLUSTER_TOL * scale => {
                *sum += x;
                *n += 1;
            }
            _ => out.push((x, 1)),
        }
        last = x;
    }
    out.into_iter().map(|(sum, n)| Cluster { value: sum / n as f64, multiplicity: n }).collect()
}

fn rep() -> Result<CliffordRep, Failure> {
    Ok(CliffordRep::build()?)
}

fn form(path: &str) -> Result<Polyform, Failure> {
    load(Some(path), "form")
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Input(format!("--tol: expected a positive number, got {tol}")));
    }
    match &cli.command {
        Command::Verify { form, metric } => {
            let phi: Polyform = load(form.as_deref(), "form")?;
            let h = load_metric(metric)?;
            let verdict = is_conformal_spin7(&phi, &h, O, tol)?;
            emit(out, &verdict)?;
            if !verdict.conformal {
                return Err(Error::NotSpin7(verdict.residual).into());
            }
        }
        Command::Cayley { rotate } => {
            let phi = match rotate {
                None => canonical_cayley(),
                Some(seed) => {
                    let seed = seed.or(cli.seed).unwrap_or(0);
                    transform(&rotation(&mut rng(seed, 0)), &canonical_cayley())
                }
            };
            emit(out, &phi)?;
        }
        Command::Square { spinor, kappa, metric } => {
            let xi: Spinor16 = load(Some(spinor), "spinor")?;
            let h = load_metric(metric)?;
            emit(out, &signed_square(&xi, *kappa, &h, &rep()?))?;
        }
        Command::Recover { polyform, metric } => {
            let a = form(polyform)?;
            let h = load_metric(metric)?;
            let report = check_square_conditions(&a, &h, O, tol);
            let spinor = if report.is_square { Some(recover_spinor(&a, &h, O, &rep()?, tol)?) } else { None };
            let worst = report.residuals.iter().fold(0.0f64, |m, &r| m.max(r));
            let found = spinor.is_some();
            emit(out, &Recovered { spinor, report })?;
            if !found {
                return Err(Error::NotSquare(worst).into());
            }
        }
        Command::Decompose { reference, form: q, metric } => {
            let phi = form(reference)?;
            let q = form(q)?;
            let h = load_metric(metric)?;
            emit(out, &decompose_4form(&phi, &q, &h, O, tol)?)?;
        }
        Command::Potential { form: f, metric, grad, hessian } => {
            let phi = form(f)?;
            let h = load_metric(metric)?;
            let w = potential_value(&phi, &h, O)?;
            let gradient = grad.then(|| potential_gradient(&phi, &h));
            let hessian_eigenvalues =
                if *hessian { Some(sym_eigenvalues(&potential_hessian(&phi, &h, O)?)) } else { None };
            emit(out, &PotentialOut { W: w, gradient, hessian_eigenvalues })?;
        }
        Command::Spectrum { form: f, spinor, metric } => {
            let h = load_metric(metric)?;
            let phi = match spinor {
                Some(s) => {
                    let xi: Spinor16 = load(Some(s), "spinor")?;
                    spin7_core::square::cayley_from_spinor(&xi, &h, &rep()?)?
                }
                None => load(f.as_deref(), "form")?,
            };
            let eigenvalues = sym_eigenvalues(&lambda_operator(&phi, &h)?);
            let clusters = clusters(&eigenvalues);
            emit(out, &SpectrumOut { form: phi, eigenvalues, clusters })?;
        }
        Command::Flow { config, metric } => {
            let mut config: FlowConfig = load(config.as_deref(), "config")?;
            if let Some(seed) = cli.seed {
                config.seed = seed;
            }
            config.validate()?;
            let h = load_metric(metric)?;
            let reports = (0..config.restarts as u64)
                .into_par_iter()
                .map(|i| flow_run_indexed(&config, &h, i, tol))
                .collect::<spin7_core::Result<Vec<_>>>()?;
            if reports.len() == 1 {
                emit(out, &reports[0])?;
            } else {
                let basin_statistics = BasinStats::of(&reports);
                emit(out, &Restarts { reports, basin_statistics })?;
            }
        }
        Command::Stabdim { form: f, metric } => {
            let phi = form(f)?;
            let h = load_metric(metric)?;
            emit(out, &stabilizer_dimension(&phi, &h)?)?;
        }
    }
    Ok(())
}
