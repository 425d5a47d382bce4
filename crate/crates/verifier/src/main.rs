use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use shl_core::coxeter::{enumerate_ideal, parse_word, word_string};
use shl_core::hecke::{Hecke, HeckeElement, LaurentPoly};
use shl_core::hodge::{hodge_riemann_check, reduce_unchecked, SignConvention};
use shl_core::soergel::{decompose_bs, BsBimodule, Catalogue};
use shl_verifier::certificate::Outcome;
use shl_verifier::certify::{hl_record, hr_record, rouquier_record_for};
use shl_verifier::config::{named_matrix, parse_matrix, Check, RunConfig};
use shl_verifier::report::render_text;
use shl_verifier::{kl_table, run_certify, RunOptions, Verdict, VerifierError};

#[derive(Parser)]
#[command(name = "shl", version, about = "Exact verification of Soergel bimodule Hodge theory on finite Bruhat ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Where the Coxeter group comes from.
#[derive(Args, Clone)]
struct GroupArgs {
    /// Run configuration JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named group: A3, B2, I2(5), H3, U2, ...
    #[arg(long, conflicts_with = "config")]
    group: Option<String>,
    /// Coxeter matrix, rows separated by ';' (0 for ∞).
    #[arg(long, conflicts_with_all = ["config", "group"])]
    matrix: Option<String>,
    #[arg(long)]
    max_length: Option<usize>,
}

impl GroupArgs {
    fn config(&self, default_len: usize) -> Result<RunConfig, VerifierError> {
        let mut cfg = if let Some(p) = &self.config {
            RunConfig::load(p)?
        } else if let Some(g) = &self.group {
            RunConfig::new(named_matrix(g)?, default_len)
        } else if let Some(m) = &self.matrix {
            RunConfig::new(parse_matrix(m)?, default_len)
        } else {
            return Err(VerifierError::Config("one of --config, --group or --matrix is required".into()));
        };
        if let Some(l) = self.max_length {
            cfg.max_length = l;
        }
        if cfg.coxeter_matrix.iter().flatten().any(|&m| m == 0) && self.config.is_none() {
            cfg.rep_choice = shl_verifier::config::RepConfig::Doubled;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification ladder and emit a certificate.
    Certify {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated subset of soergel,hl,hr,local,embedding,rouquier,coinvariant,zeta.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Record wall times in the certificate.
        #[arg(long)]
        timings: bool,
    },
    /// Kazhdan–Lusztig and inverse Kazhdan–Lusztig polynomials of the ideal.
    Kl {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Decompose a Bott–Samelson bimodule into indecomposables.
    Decompose {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        word: String,
    },
    /// Minimal Rouquier complex of an element and its checks.
    Rouquier {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        element: String,
    },
    /// hL and HR for the reduction of B_x.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        element: String,
    },
    /// hL and HR for the coinvariant ring of a finite group.
    Coinvariant {
        #[command(flatten)]
        group: GroupArgs,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), VerifierError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| VerifierError::Io(p.clone(), e)),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(VerifierError::Io("<stdout>".into(), e)),
                _ => Ok(()),
            }
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn catalogue_for(cfg: &RunConfig, len: usize) -> Result<Catalogue, VerifierError> {
    let sys = cfg.system()?;
    let ideal = Arc::new(enumerate_ideal(&sys, len)?);
    Ok(Catalogue::build(Arc::new(Hecke::new(ideal)?), len)?)
}

/// Exit status: 0 pass, 2 failure, 1 operational error.
fn run(cli: Cli) -> Result<u8, VerifierError> {
    match cli.command {
        Command::Certify { group, checks, jobs, format, output, timings } => {
            let mut cfg = group.config(3)?;
            if let Some(cs) = checks {
                cfg.checks = cs.iter().map(|c| Check::parse(c)).collect::<Result<_, _>>()?;
            }
            let cert = run_certify(&cfg, &RunOptions { jobs, timings })?;
            let text = match format {
                Format::Json => cert.to_json(),
                Format::Text => render_text(&cert),
            };
            emit(&text, output.as_ref())?;
            Ok(match cert.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 2,
                Verdict::Incomplete => 1,
            })
        }
        Command::Kl { group } => {
            let cfg = group.config(3)?;
            let table = kl_table(&cfg)?;
            emit(&serde_json::to_string_pretty(&table).expect("kl table serializes"), None)?;
            Ok(0)
        }
        Command::Decompose { group, word } => {
            let cfg0 = group.config(0)?;
            let sys = cfg0.system()?;
            let w = parse_word(&word, sys.rank())?;
            let cat = catalogue_for(&cfg0, w.len())?;
            let ideal = cat.ideal().clone();
            let bs = BsBimodule::build(&sys, &w);
            let (dec, top, _) = decompose_bs(&cat, &bs)?;
            let mut summands: Vec<serde_json::Value> = dec
                .multiplicities()
                .into_iter()
                .map(|((y, k), m)| json!({"y": word_string(ideal.word(y)), "shift": k, "multiplicity": m}))
                .collect();
            if let Some((x, k)) = top.label.filter(|_| top.module.rank() > 0) {
                summands.push(json!({"y": word_string(ideal.word(x)), "shift": k, "multiplicity": 1}));
            }
            let expected = cat.hecke().bs_character(&w)?;
            let top_label = top.label.filter(|_| top.module.rank() > 0);
            let mut from_summands = match top_label {
                Some((x, _)) => cat.hecke().kl_basis(x).clone(),
                None => HeckeElement::zero(),
            };
            for ((y, k), m) in dec.multiplicities() {
                for _ in 0..m {
                    from_summands.add_scaled(cat.hecke().kl_basis(y), &LaurentPoly::monomial(1, k));
                }
            }
            let agree = from_summands == expected;
            emit(
                &pretty(&json!({
                    "word": word_string(&w),
                    "summands": summands,
                    "character": expected.display(&ideal),
                    "mismatches": dec.mismatches.len(),
                    "character_agrees": agree,
                })),
                None,
            )?;
            Ok(if agree && dec.mismatches.is_empty() { 0 } else { 2 })
        }
        Command::Rouquier { group, element } => {
            let cfg0 = group.config(0)?;
            let sys = cfg0.system()?;
            let w = parse_word(&element, sys.rank())?;
            let cat = catalogue_for(&cfg0, w.len())?;
            let x = cat.ideal().index_of_word(&w).ok_or_else(|| VerifierError::Config(format!("{element:?} is not reduced")))?;
            let rec = rouquier_record_for(&cat, x)?;
            let pass = rec.status == shl_verifier::certificate::Status::Pass;
            emit(&pretty(&json!({"x": word_string(cat.ideal().word(x)), "rouquier": rec})), None)?;
            Ok(if pass { 0 } else { 2 })
        }
        Command::Verify { group, element } => {
            let cfg0 = group.config(0)?;
            let sys = cfg0.system()?;
            let rho = cfg0.weight(&sys)?.rho;
            let w = parse_word(&element, sys.rank())?;
            let cat = catalogue_for(&cfg0, w.len())?;
            let x = cat.ideal().index_of_word(&w).ok_or_else(|| VerifierError::Config(format!("{element:?} is not reduced")))?;
            let d = reduce_unchecked(&cat.entry(x)?.module, &rho)?;
            let hl = hl_record(&d);
            let hr = hr_record(&d, SignConvention::Standard);
            let pass = hodge_riemann_check(&d, SignConvention::Standard).pass;
            emit(&pretty(&json!({"x": word_string(cat.ideal().word(x)), "hL": hl, "HR": hr})), None)?;
            Ok(if pass { 0 } else { 2 })
        }
        Command::Coinvariant { group } => {
            let mut cfg = group.config(0)?;
            cfg.checks = [Check::Coinvariant].into_iter().collect();
            let cert = run_certify(&cfg, &RunOptions::default())?;
            emit(&pretty(&json!({"coinvariant": cert.coinvariant, "verdict": cert.verdict})), None)?;
            Ok(match (&cert.coinvariant, cert.verdict) {
                (Some(Outcome::Skipped(_)), _) => 1,
                (_, Verdict::Pass) => 0,
                _ => 2,
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
