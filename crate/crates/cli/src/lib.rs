//! Argument parsing and dispatch for the `quatk` binary.
//!
//! [`run`] never panics on user input: parse errors and out-of-range flags
//! give exit code 2, failed verifications give 1.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quatk::adams::{g_poly, verify_g_identity, AdamsRegistry};
use quatk::arith::two_adic_valuation;
use quatk::cohomology::{consistency_report, h_group, h_group_symbolic};
use quatk::kring::{relations_for, KElement, RelationId};
use quatk::rep_ring::RepElement;
use quatk::suites::SuiteRegistry;
use quatk::truncated::{corollary2_table, order_of, phi_order_cell, TruncatedQuotient};
use quatk::GroupParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const MAX_N: u32 = 10;
pub const MAX_VERIFY_N: u32 = 8;
pub const MAX_BIG_N: usize = 10;
pub const MAX_PHI_POWER: usize = 12;
pub const MAX_ADAMS_DEGREE: usize = 2000;
pub const MAX_P: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "quatk",
    version,
    about = "Exact K-theory of generalized quaternion groups"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GroupArg {
    /// Group Q_{2^n}, 3 <= n <= 10
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=MAX_N as i64))]
    pub n: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the generators and minimal relations of the K-ring
    Present(GroupArg),
    /// Run verification suites
    Verify {
        /// Group Q_{2^n}, 3 <= n <= 8
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=MAX_VERIFY_N as i64))]
        n: u32,
        /// relations, oracle, redundancy, minimality, restriction, confluence or all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Order of φ in a truncated ring
    #[command(group = clap::ArgGroup::new("truncation").required(true).args(["big_n", "ideal_power"]))]
    Order {
        #[command(flatten)]
        group: GroupArg,
        /// Sphere-quotient index N (ideal φ^{N+2})
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(0..=MAX_BIG_N as u64))]
        big_n: Option<u64>,
        /// Raw exponent e of the ideal φ^e
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_PHI_POWER as u64))]
        ideal_power: Option<u64>,
    },
    /// Grid of orders of φ against 2^(n+2N)
    Table {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=MAX_N as i64))]
        n_max: u32,
        #[arg(long = "N-max", value_parser = clap::value_parser!(u64).range(0..=MAX_BIG_N as u64))]
        big_n_max: u64,
    },
    /// ψ^i as a polynomial in φ
    Adams {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_ADAMS_DEGREE as u64))]
        i: u64,
        #[arg(long, default_value = "series")]
        method: String,
    },
    /// The relation polynomial g_{2k}(φ)
    G {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=MAX_ADAMS_DEGREE as u64))]
        k: u64,
    },
    /// H^p(BQ_{4k}; Z), symbolic in k unless --n is given
    Cohomology {
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_P))]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=MAX_N as i64))]
        n: Option<u32>,
    },
    /// Computed versus cohomology-predicted orders
    Consistency {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(0..=MAX_BIG_N as u64))]
        big_n: u64,
    },
}

/// Everything a run produces; `main` only forwards it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn success(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: String) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message,
        }
    }

    fn failure(message: String) -> Self {
        Outcome {
            code: EXIT_FAILURE,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => dispatch(&cli),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome::usage(rendered)
            } else {
                Outcome::success(rendered)
            }
        }
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    let out = Out { format: cli.format };
    match &cli.command {
        Command::Present(g) => present(out, g.n),
        Command::Verify { n, suite } => verify(out, *n, suite),
        Command::Order {
            group,
            big_n,
            ideal_power,
        } => order(out, group.n, *big_n, *ideal_power),
        Command::Table { n_max, big_n_max } => table(out, *n_max, *big_n_max as usize),
        Command::Adams { i, method } => adams(out, *i as usize, method),
        Command::G { k } => g(out, *k as usize),
        Command::Cohomology { p, n } => cohomology(out, *p, *n),
        Command::Consistency { group, big_n } => consistency(out, group.n, *big_n as usize),
    }
}

#[derive(Clone, Copy)]
struct Out {
    format: Format,
}

impl Out {
    /// Picks the text lines or the JSON document, then attaches the exit code.
    fn emit(self, code: i32, lines: Vec<String>, doc: Value) -> Outcome {
        let stdout = match self.format {
            Format::Text => {
                let mut s = String::new();
                for line in lines {
                    let _ = writeln!(s, "{line}");
                }
                s
            }
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&doc).unwrap_or_else(|_| "null".to_string());
                s.push('\n');
                s
            }
        };
        let stderr = if code == EXIT_FAILURE {
            "verification failed\n".to_string()
        } else {
            String::new()
        };
        Outcome {
            code,
            stdout,
            stderr,
        }
    }
}

fn params(n: u32) -> Result<GroupParams, Outcome> {
    GroupParams::new(n).map_err(|e| Outcome::usage(format!("error: {e}\n")))
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn present(out: Out, n: u32) -> Outcome {
    let params = match params(n) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let set = match relations_for(params) {
        Ok(s) => s,
        Err(e) => return Outcome::failure(format!("error: {e}\n")),
    };
    let lines: Vec<String> = set.to_string().lines().map(str::to_string).collect();
    let mut relations = Vec::new();
    let mut derived = Value::Null;
    for rule in set.rules() {
        let rhs = KElement::from_reduced(params, &rule.rhs)
            .map(|e| e.to_json())
            .unwrap_or(Value::Null);
        let entry = json!({
            "relation": rule.id.number(),
            "lhs": rule.lhs.to_string(),
            "rhs": rhs,
            "text": rule.to_string(),
        });
        if rule.id == RelationId::R3 {
            derived = entry;
        } else {
            relations.push(entry);
        }
    }
    let doc = json!({
        "n": params.n(),
        "k": params.k(),
        "order": params.order(),
        "generators": {
            "v1": "η1 − 1",
            "v2": "η2 − 1",
            "phi": "d_1 − 2",
        },
        "relations": relations,
        "derived": derived,
    });
    out.emit(EXIT_OK, lines, doc)
}

fn verify(out: Out, n: u32, suite: &str) -> Outcome {
    let params = match params(n) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let registry = SuiteRegistry::default();
    let Some(selected) = registry.select(suite) else {
        return Outcome::usage(format!(
            "error: unknown suite '{suite}'; expected one of: {}, all\n",
            registry.names().join(", ")
        ));
    };
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    let mut total = 0;
    let mut passed = 0;
    for s in selected {
        match s.run(params) {
            Ok(report) => {
                total += report.checks().len();
                passed += report.checks().iter().filter(|c| c.pass).count();
                lines.extend(report.to_string().lines().map(str::to_string));
                let mut doc = report.to_json();
                doc["suite"] = json!(s.name());
                reports.push(doc);
            }
            Err(e) => {
                total += 1;
                lines.push(format!("# {}", s.name()));
                lines.push(format!("FAIL {}: {e}", s.name()));
                reports.push(json!({"suite": s.name(), "pass": false, "error": e.to_string()}));
            }
        }
    }
    let pass = passed == total;
    lines.push(format!("summary: {passed}/{total} checks passed"));
    let doc = json!({
        "n": n,
        "suite": suite,
        "pass": pass,
        "passed": passed,
        "total": total,
        "reports": reports,
    });
    out.emit(pass_code(pass), lines, doc)
}

fn order(out: Out, n: u32, big_n: Option<u64>, ideal_power: Option<u64>) -> Outcome {
    let params = match params(n) {
        Ok(p) => p,
        Err(o) => return o,
    };
    match (big_n, ideal_power) {
        (Some(big_n), None) => {
            let cell = phi_order_cell(params, big_n as usize);
            let exponent = n as usize + 2 * big_n as usize;
            let lines = vec![
                format!(
                    "order of φ in R/φ^{}R (n = {n}, N = {big_n}): {}",
                    big_n + 2,
                    cell.order
                ),
                format!("as power of two: {}", cell.order.power_of_two_label()),
                format!("expected 2^(n+2N) = 2^{exponent} = {}", cell.expected),
                format!("match: {}", cell.matches()),
            ];
            let mut doc = cell.to_json();
            doc["phi_power"] = json!(big_n + 2);
            doc["order_value"] = json!(cell.order.to_string());
            doc["expected_value"] = json!(cell.expected.to_string());
            out.emit(pass_code(cell.matches()), lines, doc)
        }
        (None, Some(e)) => {
            let q = TruncatedQuotient::by_phi_power(params, e as usize);
            let ord = order_of(&RepElement::phi(params), &q);
            let lines = vec![
                format!("order of φ in R/φ^{e}R (n = {n}): {ord}"),
                format!("as power of two: {}", ord.power_of_two_label()),
            ];
            let doc = json!({
                "n": n,
                "phi_power": e,
                "order": ord.power_of_two_label(),
                "order_value": ord.to_string(),
            });
            out.emit(EXIT_OK, lines, doc)
        }
        _ => Outcome::usage("error: give exactly one of --N and --ideal-power\n".to_string()),
    }
}

fn table(out: Out, n_max: u32, big_n_max: usize) -> Outcome {
    let cells = corollary2_table(n_max, big_n_max);
    let all_match = cells.iter().all(|c| c.matches());
    let mut lines = Vec::new();
    let header: Vec<String> = (0..=big_n_max)
        .map(|b| format!("{:>8}", format!("N={b}")))
        .collect();
    lines.push(format!("{:<6}{}", "", header.join("")));
    for row in cells.chunks(big_n_max + 1) {
        let entries: Vec<String> = row
            .iter()
            .map(|c| {
                let mark = if c.matches() { "" } else { "!" };
                format!("{:>8}", format!("{}{mark}", c.order.power_of_two_label()))
            })
            .collect();
        lines.push(format!(
            "{:<6}{}",
            format!("n={}", row[0].n),
            entries.join("")
        ));
    }
    let matched = cells.iter().filter(|c| c.matches()).count();
    lines.push(format!("{matched}/{} cells match 2^(n+2N)", cells.len()));
    let doc = json!({
        "n_max": n_max,
        "N_max": big_n_max,
        "all_match": all_match,
        "cells": cells.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
    });
    out.emit(pass_code(all_match), lines, doc)
}

fn adams(out: Out, i: usize, method: &str) -> Outcome {
    let registry = AdamsRegistry::default();
    let construction = match registry.get(method) {
        Ok(c) => c,
        Err(_) => {
            return Outcome::usage(format!(
                "error: unknown method '{method}'; expected one of: {}\n",
                registry.names().join(", ")
            ))
        }
    };
    match construction.psi(i) {
        Ok(psi) => {
            let lines = vec![format!("ψ^{i}(φ) = {psi}")];
            let doc = json!({"i": i, "method": construction.name(), "psi": psi.to_json()});
            out.emit(EXIT_OK, lines, doc)
        }
        Err(e) => Outcome::failure(format!("error: {e}\n")),
    }
}

fn g(out: Out, k: usize) -> Outcome {
    let poly = match g_poly(k) {
        Ok(p) => p,
        Err(e) => return Outcome::failure(format!("error: {e}\n")),
    };
    let identity = verify_g_identity(k);
    let valuation = |j: usize| {
        let c = poly.coeff(j);
        let v = two_adic_valuation(&c).ok();
        (c, v)
    };
    let (lin, lin_v) = valuation(1);
    let (quad, quad_v) = valuation(2);
    let show = |v: Option<u64>| v.map_or("∞".to_string(), |v| v.to_string());
    let lines = vec![
        format!("g_{}(φ) = {poly}", 2 * k),
        format!("linear coefficient: {lin} (ν₂ = {})", show(lin_v)),
        format!("quadratic coefficient: {quad} (ν₂ = {})", show(quad_v)),
        format!("g_{} = ψ^{} − ψ^{}: {identity}", 2 * k, k + 1, k - 1),
    ];
    let doc = json!({
        "k": k,
        "g": poly.to_json(),
        "linear": {"coef": lin.to_string(), "nu2": lin_v},
        "quadratic": {"coef": quad.to_string(), "nu2": quad_v},
        "identity": identity,
    });
    out.emit(pass_code(identity), lines, doc)
}

fn cohomology(out: Out, p: u64, n: Option<u32>) -> Outcome {
    match n {
        None => {
            let group = h_group_symbolic(p);
            let lines = vec![format!("H^{p}(BQ_{{4k}}; Z) = {group}")];
            let doc = json!({"p": p, "group": group, "factors": Value::Null});
            out.emit(EXIT_OK, lines, doc)
        }
        Some(n) => {
            let params = match params(n) {
                Ok(p) => p,
                Err(o) => return o,
            };
            let group = h_group(p, params.k() as u64);
            let lines = vec![format!("H^{p}(BQ_{}; Z) = {group}", params.order())];
            let doc = json!({
                "p": p,
                "n": n,
                "k": params.k(),
                "group": group.to_string(),
                "factors": group.to_json(),
            });
            out.emit(EXIT_OK, lines, doc)
        }
    }
}

fn consistency(out: Out, n: u32, big_n: usize) -> Outcome {
    let params = match params(n) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let report = consistency_report(params, big_n);
    out.emit(EXIT_OK, report.lines(), report.to_json())
}
