//! `gsp4gl2`: runs the local zeta integral checks from JSON parameter files.
//!
//! Exit status is 0 when every instance passes, 1 on a mismatch and 2 on bad
//! input. Reports are written one JSON object per line.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use gsp4gl2_core::arch::zeta::arch_verify;
use gsp4gl2_core::arch::{gamma_selftest, ArchSpec, ComplexValue};
use gsp4gl2_core::bessel::{bessel_coeffs, sugano_h, sugano_q, BesselDatum, BesselRepr, SatakeParams, SatakeRepr};
use gsp4gl2_core::cosets::{double_coset_partition, CosetMethod};
use gsp4gl2_core::gl2::dimension_identity;
use gsp4gl2_core::global::{special_value_constant, y_infty, GlobalSpec};
use gsp4gl2_core::sampling::sweep_instances;
use gsp4gl2_core::series::{Poly, RatFn, DEFAULT_ORDER};
use gsp4gl2_core::zeta::{verify_local_with, y_factor, InstanceRepr, LocalInstance};
use gsp4gl2_core::{Error, QScalar};

const WORKERS_ENV: &str = "GSP4GL2_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "gsp4gl2", version, about = "Checks of the GSp4 x GL2 local zeta integrals")]
struct Cli {
    /// Write reports here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative tolerance for floating-point comparisons.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Three-way check of ramified local instances.
    VerifyNonarch {
        #[arg(long)]
        params: PathBuf,
        /// Overrides the order stored in the file.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, hide = true)]
        corrupt_y: bool,
    },
    /// Spherical Bessel values and Sugano's generating function.
    Bessel {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Newform and induced-representation dimension identities.
    Dims {
        #[arg(long, default_value_t = 6)]
        n_max: i64,
        #[arg(long, default_value_t = 12)]
        r_max: i64,
    },
    /// Double cosets P4 \ GL4 / GSp4 over F_p.
    Cosets {
        #[arg(long)]
        p: u8,
        /// `full` (p = 2 only) or `quotient`; defaults to full for p = 2.
        #[arg(long)]
        method: Option<CosetMethod>,
    },
    /// Archimedean integral: quadrature against closed form.
    ArchVerify {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Built-in checks of the complex Gamma function.
    GammaSelftest {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Special-value constant and, optionally, Y_inf at given points.
    GlobalConstant {
        #[arg(long)]
        spec: PathBuf,
        /// Evaluate Y_inf(s) at `re` or `re,im`; repeatable.
        #[arg(long = "s", value_parser = parse_complex)]
        s: Vec<Complex64>,
    },
    /// Randomized suites over all local cases.
    Sweep {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        per_suite: usize,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, hide = true)]
        corrupt_y: bool,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")));
    let re = parts.next().ok_or("empty value")??;
    let im = parts.next().transpose()?.unwrap_or(0.0);
    if parts.next().is_some() {
        return Err("expected `re` or `re,im`".into());
    }
    Ok(Complex64::new(re, im))
}

#[derive(Debug)]
enum Failure {
    /// Some instance did not check out.
    Mismatch,
    /// Unreadable or invalid input.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Out = Box<dyn Write>;

fn emit<T: Serialize>(out: &mut Out, value: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// A file holding one object or an array of them.
fn read_many<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed = if text.trim_start().starts_with('[') {
        serde_json::from_str::<Vec<T>>(&text)
    } else {
        serde_json::from_str::<T>(&text).map(|v| vec![v])
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn finish(all_pass: bool) -> Result<(), Failure> {
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

/// The negative control: an extra `(1 - q^-1 T)^-1` in every `Y`.
fn corrupted_y(inst: &LocalInstance) -> gsp4gl2_core::Result<RatFn> {
    let extra = Poly::one_minus(&QScalar::q_half_power(inst.q(), -2));
    Ok(y_factor(inst)?.mul(&RatFn::inverse_of(extra)?))
}

fn verify(inst: &LocalInstance, corrupt: bool) -> gsp4gl2_core::Result<gsp4gl2_core::zeta::VerificationReport> {
    if corrupt {
        verify_local_with(inst, corrupted_y)
    } else {
        verify_local_with(inst, y_factor)
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().map_err(|_| Failure::Input(format!("{WORKERS_ENV}={v:?} is not a count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Failure::Input(e.to_string()))
}

#[derive(Deserialize)]
struct BesselParams {
    q: u64,
    satake: SatakeRepr,
    bessel: BesselRepr,
    #[serde(default)]
    order: Option<usize>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut out: Out = match &cli.out {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = dispatch(cli, &mut out);
    out.flush()?;
    result
}

fn dispatch(cli: Cli, out: &mut Out) -> Result<(), Failure> {
    match cli.command {
        Command::VerifyNonarch { params, order, corrupt_y } => {
            let reprs: Vec<InstanceRepr> = read_many(&params)?;
            let instances = reprs
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let inst = LocalInstance::from_repr(r).map_err(|e| Failure::Input(format!("instance {i}: {e}")))?;
                    Ok(order.map_or(inst.clone(), |o| inst.with_order(o)))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let mut all = true;
            for inst in &instances {
                let report = verify(inst, corrupt_y)?;
                all &= report.pass;
                emit(out, &report)?;
            }
            finish(all)
        }
        Command::Bessel { params, order } => {
            for p in read_many::<BesselParams>(&params)? {
                let sat = SatakeParams::from_repr(p.q, &p.satake)?;
                let bessel = BesselDatum::from_repr(p.q, &p.bessel)?;
                let order = order.or(p.order).unwrap_or(DEFAULT_ORDER);
                let coeffs = bessel_coeffs(&sat, &bessel, order)?;
                let h = sugano_h(&bessel, p.q)?;
                emit(
                    out,
                    &json!({
                        "q": p.q,
                        "order": order,
                        "coeffs": coeffs.to_repr(),
                        "sugano_q": sugano_q(&sat).to_repr(),
                        "sugano_h": h.to_repr(),
                    }),
                )?;
            }
            Ok(())
        }
        Command::Dims { n_max, r_max } => {
            let mut all = true;
            for n in 0..=n_max {
                for r in n..=r_max {
                    let (induced, sum) = dimension_identity(n, r)?;
                    all &= induced == sum;
                    emit(out, &json!({"n": n, "r": r, "induced": induced, "newform_sum": sum, "pass": induced == sum}))?;
                }
            }
            finish(all)
        }
        Command::Cosets { p, method } => {
            let method = method.unwrap_or(if p == 2 { CosetMethod::Full } else { CosetMethod::Quotient });
            let report = double_coset_partition(p, method)?;
            let pass = report.pass();
            emit(out, &json!({"report": report, "pass": pass}))?;
            finish(pass)
        }
        Command::ArchVerify { spec } => {
            let tol = cli.tol.unwrap_or(1e-6);
            let mut all = true;
            for s in read_many::<ArchSpec>(&spec)? {
                let report = arch_verify(&s, tol)?;
                all &= report.pass;
                emit(out, &report)?;
            }
            finish(all)
        }
        Command::GammaSelftest { samples } => {
            let tol = cli.tol.unwrap_or(1e-10);
            let results = gamma_selftest(samples, tol);
            let all = results.iter().all(|r| r.pass);
            for r in &results {
                emit(out, r)?;
            }
            finish(all)
        }
        Command::GlobalConstant { spec, s } => {
            for g in read_many::<GlobalSpec>(&spec)? {
                let constant = special_value_constant(&g)?;
                let y = s
                    .iter()
                    .map(|&s| Ok(json!({"s": ComplexValue::from(s), "y_infty": ComplexValue::from(y_infty(s, &g)?)})))
                    .collect::<Result<Vec<_>, Error>>()?;
                emit(out, &json!({"constant": constant, "y_infty": y}))?;
            }
            Ok(())
        }
        Command::Sweep { seed, per_suite, order, corrupt_y } => {
            let instances = sweep_instances(seed, per_suite, order.unwrap_or(DEFAULT_ORDER))?;
            let pool = thread_pool()?;
            // collect() keeps instance order regardless of completion order
            let reports: Vec<_> = pool.install(|| {
                instances.par_iter().map(|(_, inst)| verify(inst, corrupt_y)).collect::<Vec<_>>()
            });
            let mut failures = 0usize;
            let mut suites: Vec<(&str, usize, usize)> = Vec::new();
            for ((suite, _), report) in instances.iter().zip(reports) {
                let report = report?;
                if suites.last().is_none_or(|s| s.0 != suite.name) {
                    suites.push((suite.name, 0, 0));
                }
                let entry = suites.last_mut().expect("pushed");
                entry.1 += 1;
                if report.pass {
                    entry.2 += 1;
                } else {
                    failures += 1;
                    emit(out, &json!({"failure": suite.name, "instance": report.instance}))?;
                }
            }
            for (name, total, passed) in &suites {
                emit(out, &json!({"suite": name, "total": total, "passed": passed}))?;
            }
            emit(out, &json!({"seed": seed, "total": instances.len(), "failures": failures}))?;
            finish(failures == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
