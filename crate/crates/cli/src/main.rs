//! `quadraform`: exact checks and constructions for invariant metrics on
//! Lie algebras and current algebras, emitting JSON certificates.
//!
//! Exit codes: 0 positive verdict, 2 negative verdict (certified or
//! bounded, see the `certified` field), 1 usage, parse or internal error.

mod certificate;
mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quadraform_core::exact::search::SearchLimits;
use serde_json::{json, Value};

use crate::certificate::Outcome;
use crate::commands::{Ctx, HeisenbergArgs};
use crate::error::CliError;
use crate::input::{assoc_json, lie_json, matrix_arg, Inputs};

const DEFAULT_MAX_DIM: usize = 128;

#[derive(Parser)]
#[command(name = "quadraform", version, about = "Invariant metrics on Lie and current algebras, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Algebra definition files (JSON).
    files: Vec<PathBuf>,
    /// Builtin input, `name` or `name:param` (sl2, heisenberg:n,
    /// heisenberg_extended:n, abelian:n, truncated_poly:m). Repeatable.
    #[arg(long = "builtin")]
    builtins: Vec<String>,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest box radius for coefficient searches.
    #[arg(long = "max-box")]
    max_box: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Check Lie and associative axioms and any supplied forms.
    Validate(Common),
    /// Center, derived algebra, centroid, invariant forms.
    Invariants(Common),
    /// Find an invariant metric on g ⊗ S.
    CurrentMetric {
        #[command(flatten)]
        common: Common,
        /// Only verify the supplied current_form.
        #[arg(long)]
        verify_only: bool,
    },
    /// Double extension of (h, B_h) by a skew derivation.
    DoubleExtend {
        #[command(flatten)]
        common: Common,
        /// Derivation matrix as inline JSON or @file.
        #[arg(long)]
        derivation: String,
        /// Split the result again and compare with the inputs.
        #[arg(long)]
        round_trip: bool,
    },
    /// Split g along a central isotropic vector.
    WittSplit {
        #[command(flatten)]
        common: Common,
        /// Basis name or JSON vector.
        #[arg(long)]
        center: String,
        /// Double-extend the split and compare with the input.
        #[arg(long)]
        round_trip: bool,
    },
    /// Recover a metric on g from one on g ⊗ S.
    Reverse {
        #[command(flatten)]
        common: Common,
        /// Use the basis element s_a of S.
        #[arg(long)]
        s_index: Option<usize>,
        /// Only check that current_form is an invariant metric on g ⊗ S.
        #[arg(long)]
        verify_only: bool,
    },
    /// Heisenberg algebras and their current metrics.
    Heisenberg {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Add the derivation D (basis D, p1..pn, q1..qn, hbar).
        #[arg(long)]
        extended: bool,
        /// Invertible φ with ω(φx, y) symmetric; default Id ⊕ -Id.
        #[arg(long)]
        phi: Option<String>,
        /// γ on S; builds α = γ Id + ξ N.
        #[arg(long)]
        gamma: Option<String>,
        /// ξ on S, the N coefficient; default zero.
        #[arg(long)]
        xi: Option<String>,
    },
    /// Frobenius forms on S; with g, recover γ from a current metric.
    Frobenius(Common),
}

fn max_dim() -> Result<usize, CliError> {
    match std::env::var("QUADRAFORM_MAX_DIM") {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Usage(format!("QUADRAFORM_MAX_DIM={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn check_dims(inputs: &Inputs, cap: usize) -> Result<(), CliError> {
    let n = inputs.lie.as_ref().map_or(1, |g| g.dim());
    let m = inputs.assoc.as_ref().map_or(1, |s| s.dim());
    if n * m > cap {
        return Err(CliError::Usage(format!(
            "composite dimension {} exceeds QUADRAFORM_MAX_DIM = {cap}",
            n * m
        )));
    }
    Ok(())
}

fn inputs_json(inputs: &Inputs) -> Value {
    json!({
        "lie": inputs.lie.as_ref().map(lie_json),
        "assoc": inputs.assoc.as_ref().map(assoc_json),
        "form": inputs.form.as_ref().map(certificate::form),
        "builtin_form": inputs.builtin_form.as_ref().map(certificate::form),
        "current_form": inputs.current_form.as_ref().map(certificate::form),
    })
}

fn run(cli: Cli) -> Result<(Value, bool, Option<PathBuf>), CliError> {
    let (name, common, params) = match &cli.command {
        Command::Validate(c) => ("validate", c, json!({})),
        Command::Invariants(c) => ("invariants", c, json!({})),
        Command::Frobenius(c) => ("frobenius", c, json!({})),
        Command::CurrentMetric { common, verify_only } => {
            ("current-metric", common, json!({"verify_only": verify_only}))
        }
        Command::DoubleExtend {
            common,
            derivation,
            round_trip,
        } => (
            "double-extend",
            common,
            json!({"derivation": certificate::matrix(&matrix_arg(derivation)?), "round_trip": round_trip}),
        ),
        Command::WittSplit {
            common,
            center,
            round_trip,
        } => ("witt-split", common, json!({"center": center, "round_trip": round_trip})),
        Command::Reverse {
            common,
            s_index,
            verify_only,
        } => ("reverse", common, json!({"s_index": s_index, "verify_only": verify_only})),
        Command::Heisenberg {
            common,
            n,
            extended,
            phi,
            gamma,
            xi,
        } => {
            let m = |a: &Option<String>| a.as_deref().map(matrix_arg).transpose().map(|x| x.map(|m| certificate::matrix(&m)));
            (
                "heisenberg",
                common,
                json!({"n": n, "extended": extended, "phi": m(phi)?, "gamma": m(gamma)?, "xi": m(xi)?}),
            )
        }
    };
    let inputs = Inputs::load(&common.files, &common.builtins)?;
    check_dims(&inputs, max_dim()?)?;
    let mut limits = SearchLimits::default();
    if let Some(k) = common.max_box {
        limits.max_k = k;
    }
    let digest = certificate::digest(&json!({
        "operation": name,
        "inputs": inputs_json(&inputs),
        "params": params,
        "max_box": common.max_box,
    }));
    let ctx = Ctx { inputs, limits };

    let result = match &cli.command {
        Command::Validate(_) => commands::validate(&ctx),
        Command::Invariants(_) => commands::invariants(&ctx),
        Command::Frobenius(_) => commands::frobenius(&ctx),
        Command::CurrentMetric { verify_only, .. } => commands::current_metric(&ctx, *verify_only),
        Command::DoubleExtend {
            derivation, round_trip, ..
        } => commands::double_extend(&ctx, &matrix_arg(derivation)?, *round_trip),
        Command::WittSplit { center, round_trip, .. } => commands::witt_split(&ctx, center, *round_trip),
        Command::Reverse {
            s_index, verify_only, ..
        } => commands::reverse(&ctx, *s_index, *verify_only),
        Command::Heisenberg {
            n,
            extended,
            phi,
            gamma,
            xi,
            ..
        } => {
            let args = HeisenbergArgs {
                n: *n,
                extended: *extended,
                phi: phi.as_deref().map(matrix_arg).transpose()?,
                gamma: gamma.as_deref().map(matrix_arg).transpose()?,
                xi: xi.as_deref().map(matrix_arg).transpose()?,
            };
            commands::heisenberg_cmd(&ctx, &args)
        }
    };
    let outcome = match result {
        Ok(o) => o,
        Err(CliError::Core(e)) if certificate::is_negative(&e) => Outcome::rejected(&e),
        Err(e) => return Err(e),
    };
    let negative = outcome.negative;
    Ok((outcome.into_certificate(name, &digest), negative, common.out.clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((cert, negative, out)) => {
            let text = serde_json::to_string_pretty(&cert).expect("serializable") + "\n";
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                    println!("{}: {}", cert["operation"].as_str().unwrap_or(""), cert["verdict"].as_str().unwrap_or(""));
                }
                None => print!("{text}"),
            }
            ExitCode::from(if negative { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
