use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::complex::Complex64;
use serde_json::json;

use itercalc::derivations::{partial, partial_zc};
use itercalc::error::Result;
use itercalc::numeric::{check_diff_formula, check_relation_numeric, eval_l, RelationKind};
use itercalc::parse::{
    format_expr, parse_complex, parse_expr, parse_grading, parse_mobius, parse_ratfun,
};
use itercalc::products::{shuffle, stuffle};
use itercalc::transforms::{gamma_star, tau_z};
use itercalc::verify::{
    sweep_thm32, sweep_thm44, sweep_thm51, sweep_thm61, ResidualReport,
};

#[derive(Parser)]
#[command(name = "itercalc", version, about = "Symbolic and numeric calculator \
for shuffle/stuffle algebras over Q(z) and their iterated integrals")]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Shuffle product of two expressions.
    Shuffle { u: String, v: String },
    /// Generalized stuffle product of two expressions.
    Stuffle { u: String, v: String },
    /// Apply the derivation with boundary pair (s, t) under a grading.
    Partial {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// `at:<rational>`, `inf`, or `trivial`.
        #[arg(long)]
        grading: String,
    },
    /// Apply the specialized derivation on the {0,1,z} alphabet.
    PartialZc {
        expr: String,
        #[arg(long)]
        c: u8,
    },
    /// Apply the duality map.
    Dual { expr: String },
    /// Apply the pullback along a Mobius matrix.
    Mobius {
        expr: String,
        /// Matrix `a,b;c,d` with rational-function entries.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Run an exhaustive identity sweep; exits 1 if any case fails.
    Verify {
        /// One of 3.2, 4.4, 5.1, 6.1.
        #[arg(long)]
        theorem: String,
        /// Sub-part for theorem 6.1 (1-3); all parts when omitted.
        #[arg(long)]
        part: Option<u8>,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Numerically evaluate the iterated integral of an expression.
    EvalL {
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Check an analytic identity numerically; exits 1 on failure.
    Check {
        #[command(subcommand)]
        kind: CheckCmd,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// L(u sh v) = L(u) L(v).
    Shuffle {
        u: String,
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// L(u * v) = L(u) L(v).
    Stuffle {
        u: String,
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// L(tau_z u) = L(u).
    Duality {
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// dL/dz against the algebraic derivative, by central differences.
    Diff {
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
}

fn fmt_complex(v: Complex64) -> String {
    if v.im == 0.0 {
        format!("{:.10}", v.re)
    } else if v.im < 0.0 {
        format!("{:.10}{:.10}i", v.re, v.im)
    } else {
        format!("{:.10}+{:.10}i", v.re, v.im)
    }
}

fn complex_json(v: Complex64) -> serde_json::Value {
    json!({"re": v.re, "im": v.im})
}

fn print_expr(json_mode: bool, command: &str, a: &itercalc::NcPoly) {
    if json_mode {
        println!(
            "{}",
            json!({"schema": 1, "command": command, "result": format_expr(a)})
        );
    } else {
        println!("{}", format_expr(a));
    }
}

fn run_verify(
    json_mode: bool,
    theorem: &str,
    part: Option<u8>,
    max_degree: usize,
    seed: u64,
) -> Result<u8> {
    let reports: Vec<(String, Vec<ResidualReport>)> = match theorem {
        "3.2" => vec![("3.2".into(), sweep_thm32(max_degree))],
        "4.4" => vec![("4.4".into(), sweep_thm44(max_degree))],
        "5.1" => vec![("5.1".into(), sweep_thm51(max_degree, seed))],
        "6.1" => {
            let parts: Vec<u8> = match part {
                Some(p) if (1..=3).contains(&p) => vec![p],
                Some(p) => {
                    return Err(itercalc::Error::SyntaxError {
                        offset: 0,
                        message: format!("theorem 6.1 has parts 1-3, got {}", p),
                    })
                }
                None => vec![1, 2, 3],
            };
            parts
                .into_iter()
                .map(|p| (format!("6.1({})", p), sweep_thm61(p, max_degree)))
                .collect()
        }
        other => {
            return Err(itercalc::Error::SyntaxError {
                offset: 0,
                message: format!("unknown theorem '{}'; use 3.2, 4.4, 5.1 or 6.1", other),
            })
        }
    };
    let mut all_pass = true;
    let mut blocks = Vec::new();
    for (name, sweep) in &reports {
        let failures: Vec<&ResidualReport> = sweep.iter().filter(|r| !r.pass).collect();
        all_pass &= failures.is_empty();
        if json_mode {
            blocks.push(json!({
                "theorem": name,
                "cases": sweep.len(),
                "failures": failures,
                "pass": failures.is_empty(),
            }));
        } else {
            println!(
                "theorem {}: {} cases, {}",
                name,
                sweep.len(),
                if failures.is_empty() {
                    "all pass".to_string()
                } else {
                    format!("{} FAILED", failures.len())
                }
            );
            for f in failures.iter().take(10) {
                println!("  FAIL {} residual = {}", f.inputs, format_expr(&f.residual));
            }
        }
    }
    if json_mode {
        println!(
            "{}",
            json!({"schema": 1, "command": "verify", "sweeps": blocks, "pass": all_pass})
        );
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn print_check(
    json_mode: bool,
    kind: &str,
    r: &itercalc::numeric::CheckReport,
) -> u8 {
    if json_mode {
        println!(
            "{}",
            json!({
                "schema": 1,
                "command": "check",
                "kind": kind,
                "lhs": complex_json(r.lhs),
                "rhs": complex_json(r.rhs),
                "difference": r.difference,
                "tol": r.tol,
                "evaluations": r.evaluations,
                "pass": r.pass,
            })
        );
    } else {
        println!(
            "{}: lhs = {}, rhs = {}, |diff| = {:.3e} (tol {:.0e}) -> {}",
            kind,
            fmt_complex(r.lhs),
            fmt_complex(r.rhs),
            r.difference,
            r.tol,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    if r.pass {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8> {
    let json_mode = cli.json;
    match cli.cmd {
        Cmd::Shuffle { u, v } => {
            let out = shuffle(&parse_expr(&u)?, &parse_expr(&v)?);
            print_expr(json_mode, "shuffle", &out);
            Ok(0)
        }
        Cmd::Stuffle { u, v } => {
            let out = stuffle(&parse_expr(&u)?, &parse_expr(&v)?);
            print_expr(json_mode, "stuffle", &out);
            Ok(0)
        }
        Cmd::Partial { expr, s, t, grading } => {
            let g = parse_grading(&grading)?;
            let out = partial(&g, &parse_ratfun(&s)?, &parse_ratfun(&t)?, &parse_expr(&expr)?);
            print_expr(json_mode, "partial", &out);
            Ok(0)
        }
        Cmd::PartialZc { expr, c } => {
            if c > 1 {
                return Err(itercalc::Error::SyntaxError {
                    offset: 0,
                    message: "c must be 0 or 1".into(),
                });
            }
            let out = partial_zc(c, &parse_expr(&expr)?)?;
            print_expr(json_mode, "partial-zc", &out);
            Ok(0)
        }
        Cmd::Dual { expr } => {
            let out = tau_z(&parse_expr(&expr)?)?;
            print_expr(json_mode, "dual", &out);
            Ok(0)
        }
        Cmd::Mobius { expr, matrix } => {
            let m = parse_mobius(&matrix)?;
            let out = gamma_star(&m, &parse_expr(&expr)?);
            print_expr(json_mode, "mobius", &out);
            Ok(0)
        }
        Cmd::Verify {
            theorem,
            part,
            max_degree,
            seed,
        } => run_verify(json_mode, &theorem, part, max_degree, seed),
        Cmd::EvalL { word, z, tol } => {
            let a = parse_expr(&word)?;
            let z0 = parse_complex(&z)?;
            let r = eval_l(&a, z0, tol)?;
            if json_mode {
                println!(
                    "{}",
                    json!({
                        "schema": 1,
                        "command": "eval-l",
                        "value": complex_json(r.value),
                        "est_error": r.est_error,
                        "evaluations": r.evaluations,
                    })
                );
            } else {
                println!(
                    "{}  (est err {:.2e}, {} evals)",
                    fmt_complex(r.value),
                    r.est_error,
                    r.evaluations
                );
            }
            Ok(0)
        }
        Cmd::Check { kind } => match kind {
            CheckCmd::Shuffle { u, v, z, tol } => {
                let r = check_relation_numeric(
                    RelationKind::Shuffle,
                    &parse_expr(&u)?,
                    Some(&parse_expr(&v)?),
                    parse_complex(&z)?,
                    tol,
                )?;
                Ok(print_check(json_mode, "shuffle", &r))
            }
            CheckCmd::Stuffle { u, v, z, tol } => {
                let r = check_relation_numeric(
                    RelationKind::Stuffle,
                    &parse_expr(&u)?,
                    Some(&parse_expr(&v)?),
                    parse_complex(&z)?,
                    tol,
                )?;
                Ok(print_check(json_mode, "stuffle", &r))
            }
            CheckCmd::Duality { u, z, tol } => {
                let r = check_relation_numeric(
                    RelationKind::Duality,
                    &parse_expr(&u)?,
                    None,
                    parse_complex(&z)?,
                    tol,
                )?;
                Ok(print_check(json_mode, "duality", &r))
            }
            CheckCmd::Diff { word, z, h, tol } => {
                let a = parse_expr(&word)?;
                let terms: Vec<_> = a.terms().collect();
                let w = match terms.as_slice() {
                    [(w, c)] if num::One::is_one(*c) => (*w).clone(),
                    _ => {
                        return Err(itercalc::Error::SyntaxError {
                            offset: 0,
                            message: "check diff takes a single word".into(),
                        })
                    }
                };
                let r = check_diff_formula(&w, parse_complex(&z)?, h, tol)?;
                Ok(print_check(json_mode, "diff", &r))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
