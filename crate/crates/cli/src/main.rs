mod output;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fusionmod::alcove::{self, AlcoveIndex, LevelRank};
use fusionmod::arith::Sign;
use fusionmod::invariants::{self, GenericLabel, IntMatrix, ModularData, Tolerances};
use fusionmod::{branching, classify, cosets, Error, Result};

use output::{Format, Output, Table};

#[derive(Parser)]
#[command(name = "fusionmod", version, about = "Modular invariants and module categories of sl_N at level k")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Directory for cached S-matrices (default: $FUSIONMOD_CACHE, else no cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Tolerance for the largest entry of |ZS - SZ|.
    #[arg(long, global = true, default_value_t = Tolerances::default().s_commute)]
    s_tol: f64,
    /// Relative tolerance for dimension identities.
    #[arg(long, global = true, default_value_t = Tolerances::default().dim)]
    dim_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    #[value(name = "sl6-6")]
    Sl66,
    Generic,
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
}

#[derive(Subcommand)]
enum Command {
    /// List the alcove P_+^k(sl_N).
    Alcove(Pair),
    /// Print a generic invariant Z(d,+/-) or a named sl_6 level 6 invariant.
    Invariant {
        #[arg(long, required_unless_present = "case")]
        n: Option<u32>,
        #[arg(long, required_unless_present = "case")]
        k: Option<u32>,
        #[arg(long, required_unless_present = "case")]
        d: Option<u64>,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
        #[arg(long, value_enum, requires = "label")]
        case: Option<Case>,
        #[arg(long)]
        label: Option<String>,
        /// Also run the physicality checks.
        #[arg(long)]
        check: bool,
    },
    /// Print a branching table.
    Branch {
        #[arg(long, required_unless_present = "list")]
        embedding: Option<String>,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        list: bool,
    },
    /// Count and label the module categories.
    Classify(Pair),
    /// Print a product table of module categories.
    Table {
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long, required_if_eq("case", "generic"))]
        n: Option<u32>,
        #[arg(long, required_if_eq("case", "generic"))]
        k: Option<u32>,
    },
    /// Double coset counts per etale algebra.
    Cosets(Pair),
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: suites::Suite,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        k_max: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = cli.cache_dir.clone().or_else(|| std::env::var_os("FUSIONMOD_CACHE").map(PathBuf::from));
    let tol = Tolerances { s_commute: cli.s_tol, dim: cli.dim_tol, ..Tolerances::default() };
    if !(tol.s_commute > 0.0 && tol.dim > 0.0) {
        eprintln!("error: tolerances must be positive");
        return ExitCode::from(2);
    }
    match run(&cli.command, cache.as_deref(), &tol) {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidLevelRank(_) | Error::OutsideAlcove(_) | Error::InvalidArgument(_) | Error::Io(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cmd: &Command, cache: Option<&Path>, tol: &Tolerances) -> Result<Output> {
    match cmd {
        Command::Alcove(p) => alcove_cmd(p),
        Command::Invariant { n, k, d, sign, case, label, check } => match case {
            Some(Case::Sl66) => sl66_invariant_cmd(label.as_deref().unwrap_or_default(), *check, cache, tol),
            Some(Case::Generic) => Err(Error::InvalidArgument("--case generic takes --n --k --d".into())),
            None => {
                let sign = match sign {
                    SignArg::Plus => Sign::Plus,
                    SignArg::Minus => Sign::Minus,
                };
                let (n, k, d) = (n.unwrap_or(0), k.unwrap_or(0), d.unwrap_or(0));
                generic_invariant_cmd(n, k, GenericLabel { d, sign }, *check, cache, tol)
            }
        },
        Command::Branch { embedding, check, list } => {
            if *list {
                branch_list()
            } else {
                branch_cmd(embedding.as_deref().unwrap_or_default(), *check, tol)
            }
        }
        Command::Classify(p) => classify_cmd(p),
        Command::Table { case, n, k } => match case {
            Case::Sl66 => sl66_table_cmd(),
            Case::Generic => generic_table_cmd(n.unwrap_or(0), k.unwrap_or(0)),
        },
        Command::Cosets(p) => cosets_cmd(p.n as u64, p.k as u64),
        Command::Verify { suite, n_max, k_max } => {
            let cfg = suites::Config { ranges: suites::Ranges { n_max: *n_max, k_max: *k_max }, tol: *tol, cache };
            let checks = suites::run(*suite, &cfg)?;
            let pass = checks.iter().all(|c| c.pass);
            let mut table = Table::new(&["suite", "name", "pass", "detail"]);
            for c in &checks {
                table.push(vec![c.suite.into(), c.name.clone(), c.pass.to_string(), c.detail.clone()]);
            }
            Ok(Output { json: json!({ "suite": suite, "pass": pass, "checks": checks }), table, pass })
        }
    }
}

fn alcove_cmd(p: &Pair) -> Result<Output> {
    let lr = LevelRank::new(p.n, p.k)?;
    let idx = AlcoveIndex::new(lr);
    let mut table = Table::new(&["index", "partition", "dynkin", "conformal_weight"]);
    for (i, w) in idx.weights().iter().enumerate() {
        table.push(vec![
            i.to_string(),
            format!("{:?}", w.trimmed()),
            format!("{:?}", w.dynkin()),
            alcove::conformal_weight(lr, w).to_string(),
        ]);
    }
    Ok(Output::ok(idx.to_json(), table))
}

fn matrix_output(mut json: Value, z: &IntMatrix, idx: &AlcoveIndex, check: bool, cache: Option<&Path>, tol: &Tolerances) -> Result<Output> {
    let mut table = Table::new(&["row", "col", "value"]);
    for (i, j, v) in z.triplets() {
        table.push(vec![format!("{:?}", idx.weight(i).trimmed()), format!("{:?}", idx.weight(j).trimmed()), v.to_string()]);
    }
    let mut pass = true;
    if check {
        let md = ModularData::load_or_compute(idx.level_rank(), cache)?;
        let rep = invariants::is_physical(z, &md, tol)?;
        pass = rep.physical && z.is_symmetric();
        json["check"] = json!({
            "vacuum": rep.vacuum,
            "nonnegative": rep.nonnegative,
            "commutator": rep.commutator,
            "twist": rep.twist,
            "symmetric": z.is_symmetric(),
            "physical": pass,
        });
    }
    Ok(Output { json, table, pass })
}

fn generic_invariant_cmd(n: u32, k: u32, label: GenericLabel, check: bool, cache: Option<&Path>, tol: &Tolerances) -> Result<Output> {
    let lr = LevelRank::new(n, k)?;
    let idx = AlcoveIndex::new(lr);
    let z = invariants::generic_invariant(&idx, label)?;
    let mut json = z.to_json(lr);
    json["label"] = json!(label.to_string());
    matrix_output(json, &z, &idx, check, cache, tol)
}

fn sl66_invariant_cmd(label: &str, check: bool, cache: Option<&Path>, tol: &Tolerances) -> Result<Output> {
    let res = classify::sl66_invariants()?;
    let inv = res
        .invariants
        .iter()
        .find(|i| i.label == label)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown label {label}; expected one of {}", classify::SL66_LABELS.join(", "))))?;
    let lr = LevelRank::new(6, 6)?;
    let idx = AlcoveIndex::new(lr);
    let mut json = inv.matrix.to_json(lr);
    json["label"] = json!(inv.label);
    json["construction"] = json!(inv.construction);
    matrix_output(json, &inv.matrix, &idx, check, cache, tol)
}

fn branch_list() -> Result<Output> {
    let mut table = Table::new(&["embedding", "n", "k", "rows"]);
    let mut names = Vec::new();
    for t in branching::all_tables()? {
        table.push(vec![t.embedding.clone(), t.n.to_string(), t.k.to_string(), t.rows.len().to_string()]);
        names.push(t.embedding);
    }
    Ok(Output::ok(json!(names), table))
}

fn branch_cmd(name: &str, check: bool, tol: &Tolerances) -> Result<Output> {
    let t = branching::table_by_name(name)?;
    let mut table = Table::new(&["label", "weight", "multiplicity"]);
    for row in &t.rows {
        for (w, m) in &row.weights {
            table.push(vec![row.label.clone(), format!("{:?}", w.trimmed()), m.to_string()]);
        }
    }
    let mut json = serde_json::to_value(&t)?;
    let mut pass = true;
    if check {
        let rep = branching::consistency_check(&t, tol.dim);
        pass = rep.pass;
        json["check"] = serde_json::to_value(&rep)?;
    }
    Ok(Output { json, table, pass })
}

fn classify_cmd(p: &Pair) -> Result<Output> {
    let (n, k) = (p.n as u64, p.k as u64);
    LevelRank::new(p.n, p.k)?;
    let mut table = Table::new(&["label"]);
    if (n, k) == (6, 6) {
        let labels: Vec<&str> = classify::SL66_LABELS.to_vec();
        for l in &labels {
            table.push(vec![l.to_string()]);
        }
        return Ok(Output::ok(json!({ "n": n, "k": k, "kind": "exceptional", "count": labels.len(), "labels": labels }), table));
    }
    if cosets::exceptional_pairs().contains(&(n, k)) {
        let ct = cosets::algebra_coset_table(n, k)?;
        let mut labels = Vec::new();
        for row in &ct.rows {
            for i in 1..=row.count {
                labels.push(format!("{}#{i}", row.algebra));
            }
        }
        let daggers: Vec<&str> = ct.rows.iter().filter(|r| r.dagger).map(|r| r.algebra.as_str()).collect();
        for a in &daggers {
            for b in &daggers {
                if a != b {
                    labels.push(format!("{a} x {b}"));
                }
            }
        }
        for l in &labels {
            table.push(vec![l.clone()]);
        }
        let pass = labels.len() as u64 == ct.total;
        return Ok(Output {
            json: json!({ "n": n, "k": k, "kind": "exceptional", "count": ct.total, "labels": labels }),
            table,
            pass,
        });
    }
    let po = classify::is_pointed_only(n, k)?;
    let labels: Vec<String> = invariants::generic_labels(n, k)?.iter().map(|l| l.to_string()).collect();
    for l in &labels {
        table.push(vec![l.clone()]);
    }
    let generic = classify::generic_count(n, k)?;
    if po.pointed_only {
        let coset = classify::coset_sum(n, k)?;
        return Ok(Output {
            json: json!({
                "n": n, "k": k, "kind": "pointed-only", "count": generic, "coset_sum": coset,
                "labels": labels, "warning": po.warning,
            }),
            table,
            pass: generic == coset,
        });
    }
    Ok(Output::ok(
        json!({
            "n": n, "k": k, "kind": "unclassified", "count": Value::Null, "generic_count": generic,
            "labels": labels, "warning": "non-pointed etale algebras exist; only the generic module categories are listed",
        }),
        table,
    ))
}

fn sl66_table_cmd() -> Result<Output> {
    let res = classify::sl66_invariants()?;
    let printed = classify::sl66_printed_table()?;
    let pass = res.computed == printed;
    let t = &res.computed;
    let mut table = Table::new(&["(x)"]);
    table.headers.extend(t.labels.iter().cloned());
    for (a, row) in t.cells.iter().enumerate() {
        let mut r = vec![t.labels[a].clone()];
        r.extend(row.iter().map(|c| t.format_cell(c)));
        table.push(r);
    }
    let cells: Vec<Vec<String>> = t.cells.iter().map(|row| row.iter().map(|c| t.format_cell(c)).collect()).collect();
    let invs: Vec<Value> = res.invariants.iter().map(|i| json!({ "label": i.label, "construction": i.construction })).collect();
    Ok(Output {
        json: json!({
            "labels": t.labels,
            "cells": cells,
            "invariants": invs,
            "row_times_column": res.row_times_column,
            "matching_labellings": res.matching_labellings,
            "matches_printed": pass,
        }),
        table,
        pass,
    })
}

fn generic_table_cmd(n: u32, k: u32) -> Result<Output> {
    LevelRank::new(n, k)?;
    let rep = classify::verify_tensor_rule(n as u64, k as u64)?;
    let labels: Vec<String> = invariants::generic_labels(n as u64, k as u64)?.iter().map(|l| l.to_string()).collect();
    let mut table = Table::new(&["(x)"]);
    table.headers.extend(labels.iter().cloned());
    let mut cells = Vec::new();
    for (a, chunk) in rep.checks.chunks(labels.len().max(1)).enumerate() {
        let row: Vec<String> = chunk
            .iter()
            .map(|c| match c.expected.multiplicity {
                1 => c.expected.label.to_string(),
                m => format!("{m}{}", c.expected.label),
            })
            .collect();
        table.push(std::iter::once(labels[a].clone()).chain(row.iter().cloned()).collect());
        cells.push(row);
    }
    let json = json!({
        "n": n, "k": k, "labels": labels, "cells": cells,
        "asserted": rep.asserted, "pass": rep.pass, "checks": rep.checks,
    });
    Ok(Output { pass: rep.pass, json, table })
}

fn cosets_cmd(n: u64, k: u64) -> Result<Output> {
    LevelRank::new(n as u32, k as u32)?;
    let ct = if cosets::exceptional_pairs().contains(&(n, k)) {
        cosets::algebra_coset_table(n, k)?
    } else {
        cosets::pointed_coset_table(n, k)?
    };
    let mut table = Table::new(&["algebra", "eqbr", "count", "dagger"]);
    for r in &ct.rows {
        table.push(vec![r.algebra.clone(), r.eqbr.clone(), r.count.to_string(), r.dagger.to_string()]);
    }
    Ok(Output::ok(serde_json::to_value(&ct)?, table))
}
