//! Verification suites run by `fusionmod verify`.

use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use fusionmod::alcove::{AlcoveIndex, LevelRank};
use fusionmod::arith::{self, Sign};
use fusionmod::classify::{self, StabiliserMode};
use fusionmod::invariants::{self, GenericLabel, IntMatrix, ModularData, Tolerances};
use fusionmod::{branching, cosets, pointed, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Arith,
    Invariants,
    Branching,
    Cosets,
    Classify,
    All,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

pub struct Ranges {
    pub n_max: Option<u32>,
    pub k_max: Option<u32>,
}

pub struct Config<'a> {
    pub ranges: Ranges,
    pub tol: Tolerances,
    pub cache: Option<&'a Path>,
}

impl Ranges {
    fn get(&self, n_default: u32, k_default: u32) -> (u32, u32) {
        (self.n_max.unwrap_or(n_default), self.k_max.unwrap_or(k_default))
    }
}

fn check(suite: &'static str, name: impl Into<String>, failures: Vec<String>) -> Check {
    let detail = match failures.len() {
        0 => "ok".to_string(),
        n if n > 5 => format!("{n} failures, first: {}", failures[..5].join("; ")),
        _ => failures.join("; "),
    };
    Check { suite, name: name.into(), pass: failures.is_empty(), detail }
}

/// Runs the requested suites on separate threads; checks are reported in a fixed order.
pub fn run(suite: Suite, cfg: &Config) -> Result<Vec<Check>> {
    type Job<'a> = Box<dyn Fn(&Config) -> Result<Vec<Check>> + Send + Sync + 'a>;
    let jobs: Vec<(Suite, Job)> = vec![
        (Suite::Arith, Box::new(|c: &Config| arith_suite(&c.ranges))),
        (Suite::Invariants, Box::new(invariants_suite)),
        (Suite::Branching, Box::new(branching_suite)),
        (Suite::Cosets, Box::new(|_: &Config| cosets_suite())),
        (Suite::Classify, Box::new(classify_suite)),
    ];
    let results: Vec<Result<Vec<Check>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .filter(|(s, _)| suite == Suite::All || suite == *s)
            .map(|(_, job)| scope.spawn(move || job(cfg)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn arith_suite(ranges: &Ranges) -> Result<Vec<Check>> {
    let (n_max, k_max) = ranges.get(60, 60);
    let mut fails = Vec::new();
    for n in 2..=n_max as u64 {
        for k in 1..=k_max as u64 {
            let (l, r) = arith::count_identity_check(n, k)?;
            if l != r {
                fails.push(format!("({n},{k}): {l} != {r}"));
            }
        }
    }
    let mut out = vec![check("arith", format!("count identity N<={n_max} k<={k_max}"), fails)];
    let (n_max, k_max) = (n_max.min(8), k_max.min(12));
    let mut fails = Vec::new();
    for n in 2..=n_max as u64 {
        for k in 1..=k_max as u64 {
            if !classify::is_pointed_only(n, k)?.pointed_only {
                continue;
            }
            let (g, c) = (classify::generic_count(n, k)?, classify::coset_sum(n, k)?);
            if g != c {
                fails.push(format!("({n},{k}): {g} != {c}"));
            }
        }
    }
    out.push(check("arith", format!("generic count = coset sum, pointed-only N<={n_max} k<={k_max}"), fails));
    Ok(out)
}

fn generic(idx: &AlcoveIndex, n: u64, k: u64) -> Result<(Vec<GenericLabel>, Vec<IntMatrix>)> {
    let labels = invariants::generic_labels(n, k)?;
    let mats = labels.iter().map(|&l| invariants::generic_invariant(idx, l)).collect::<Result<Vec<_>>>()?;
    Ok((labels, mats))
}

fn invariants_suite(cfg: &Config) -> Result<Vec<Check>> {
    let (n_max, k_max) = cfg.ranges.get(8, 10);
    let (tol, cache) = (&cfg.tol, cfg.cache);
    let (mut closed, mut physical, mut products) = (Vec::new(), Vec::new(), Vec::new());
    for n in 3..=n_max {
        for k in 3..=k_max {
            let lr = LevelRank::new(n, k)?;
            let idx = AlcoveIndex::new(lr);
            let (nn, kk) = (n as u64, k as u64);
            for d in arith::eligible_d(nn, kk)? {
                if invariants::z_plus(&idx, d)? != invariants::z_plus_closed(&idx, d)? {
                    closed.push(format!("({n},{k}) d={d}"));
                }
            }
            let (labels, mats) = generic(&idx, nn, kk)?;
            let md = ModularData::load_or_compute(lr, cache)?;
            for ((l, z), rep) in labels.iter().zip(&mats).zip(invariants::is_physical_many(&mats, &md, tol)?) {
                if !rep.physical || !z.is_symmetric() {
                    physical.push(format!("({n},{k}) {l}: {rep:?}"));
                }
            }
            let id = IntMatrix::identity(idx.len());
            let cm = invariants::z_minus(&idx, 1)?;
            if cm.matmul(&cm)? != id {
                products.push(format!("({n},{k}) Z(1,-)^2"));
            }
            for (l, z) in labels.iter().zip(&mats) {
                if l.sign == Sign::Plus && cm.matmul(z)? != z.matmul(&cm)? {
                    products.push(format!("({n},{k}) Z(1,-) vs {l}"));
                }
            }
        }
    }
    let mut out = vec![
        check("invariants", format!("z_plus = z_plus_closed N<={n_max} k<={k_max}"), closed),
        check("invariants", format!("generic invariants physical N<={n_max} k<={k_max}"), physical),
        check("invariants", format!("charge conjugation identities N<={n_max} k<={k_max}"), products),
    ];
    let mut fails = Vec::new();
    for (n, k, expected) in dependency_cases() {
        let (labels, rank) = classify::generic_rank(n, k)?;
        let got: Vec<Vec<(String, i64)>> = rank
            .dependencies
            .iter()
            .map(|dep| labels.iter().zip(dep).filter(|(_, &c)| c != 0).map(|(l, &c)| (l.to_string(), c)).collect())
            .collect();
        if got != expected {
            fails.push(format!("({n},{k}): {got:?}"));
        }
    }
    out.push(check("invariants", "dependencies of generic invariants", fails));
    Ok(out)
}

/// Printed relations among the generic invariants.
fn dependency_cases() -> Vec<(u64, u64, Vec<Vec<(String, i64)>>)> {
    let eq = |a: &str, b: &str| vec![(a.to_string(), 1), (b.to_string(), -1)];
    vec![
        (3, 3, vec![eq("Z(3,+)", "Z(3,-)")]),
        (3, 6, vec![eq("Z(3,+)", "Z(3,-)")]),
        (5, 5, vec![eq("Z(5,+)", "Z(5,-)")]),
        (6, 3, vec![eq("Z(3,+)", "Z(3,-)")]),
        (4, 4, vec![eq("Z(2,+)", "Z(2,-)"), eq("Z(4,+)", "Z(4,-)")]),
        (4, 5, vec![]),
        (5, 7, vec![]),
        (3, 4, vec![]),
    ]
}

fn branching_suite(cfg: &Config) -> Result<Vec<Check>> {
    let rows: Vec<String> = branching::printed_row_checks()?.into_iter().filter(|c| !c.1).map(|c| c.0).collect();
    let mut out = vec![check("branching", "printed rows", rows)];
    let mut fails = Vec::new();
    for t in branching::all_tables()? {
        let r = branching::consistency_check(&t, cfg.tol.dim);
        if !r.pass {
            fails.push(format!("{}: {r:?}", t.embedding));
        }
    }
    out.push(check("branching", "consistency of all tables", fails));
    let adj = branching::branch_adjoint(6)?;
    let spinor = adj.row("S").map(|r| r.weights.iter().map(|e| e.1).collect::<Vec<_>>());
    let fails = if spinor == Some(vec![4]) { vec![] } else { vec![format!("{spinor:?}")] };
    out.push(check("branching", "sl6 adjoint spinor multiplicity 4", fails));
    let mut fails = Vec::new();
    for n in 2..=7u32 {
        for k in 1..=9u32 {
            let idx = AlcoveIndex::new(LevelRank::new(n, k)?);
            for m in arith::eligible_m(n as u64, k as u64)? {
                let locals = pointed::local_modules(&idx, m as u32)?;
                let (l, r) = pointed::local_dimension_identity(&idx, m as u32, &locals);
                if (l - r).abs() > cfg.tol.dim * r {
                    fails.push(format!("({n},{k},{m}): {l} vs {r}"));
                }
            }
        }
    }
    out.push(check("branching", "pointed local modules: D(C_A^0) = D(C)/m^2", fails));
    Ok(out)
}

fn cosets_suite() -> Result<Vec<Check>> {
    let mut fails = Vec::new();
    for mp in 1..=12u64 {
        for j in 0..=3 {
            for reflections in [true, false] {
                let g = cosets::DihedralModel { m: mp, j, reflections };
                let got = cosets::double_coset_count(&g, &g.rotations(1)) as u64;
                let want = if reflections { 2 << j } else { 1 << j };
                if got != want {
                    fails.push(format!("m'={mp} j={j} reflections={reflections}: {got}"));
                }
            }
        }
    }
    let mut out = vec![check("cosets", "dihedral model double cosets", fails)];
    let mut fails = Vec::new();
    for ((n, k, m), want) in [((3, 9, 3), 4), ((4, 8, 4), 3), ((5, 5, 5), 4)] {
        let got = cosets::exceptional_coset_count(n, k, m)?;
        if got != want {
            fails.push(format!("({n},{k},{m}): {got}"));
        }
    }
    out.push(check("cosets", "exceptional pointed cases", fails));
    let want = [6, 8, 5, 7, 8, 9, 6, 12, 8, 12, 16, 12, 8, 10, 8];
    let mut fails = Vec::new();
    for (&(n, k), w) in cosets::exceptional_pairs().iter().zip(want) {
        let got = cosets::algebra_coset_table(n, k)?.total;
        if got != w {
            fails.push(format!("({n},{k}): {got} != {w}"));
        }
    }
    out.push(check("cosets", "module category counts for the 15 exceptional pairs", fails));
    Ok(out)
}

fn classify_suite(cfg: &Config) -> Result<Vec<Check>> {
    let (n_max, k_max) = cfg.ranges.get(8, 10);
    let mut fails = Vec::new();
    for n in 3..=n_max as u64 {
        for k in 3..=k_max as u64 {
            let rep = classify::verify_tensor_rule(n, k)?;
            if !rep.pass {
                fails.push(format!("({n},{k})"));
            }
        }
    }
    let mut out = vec![check("classify", format!("generic tensor rule N<={n_max} k<={k_max}"), fails)];

    let sl66 = classify::sl66_invariants()?;
    let printed = classify::sl66_printed_table()?;
    let mut fails = Vec::new();
    for (a, row) in printed.cells.iter().enumerate() {
        for (b, cell) in row.iter().enumerate() {
            if sl66.computed.cells[a][b] != *cell {
                fails.push(format!("{} x {}", printed.labels[a], printed.labels[b]));
            }
        }
    }
    out.push(check("classify", "sl6 level 6 table, 256 cells", fails));
    let mats: Vec<IntMatrix> = sl66.invariants.iter().map(|i| i.matrix.clone()).collect();
    let rank = invariants::rational_rank(&mats)?.rank;
    out.push(check("classify", "sl6 level 6 invariants have rank 16", if rank == 16 { vec![] } else { vec![format!("rank {rank}")] }));
    let md = ModularData::load_or_compute(LevelRank::new(6, 6)?, cfg.cache)?;
    let fails = invariants::is_physical_many(&mats, &md, &cfg.tol)?
        .iter()
        .zip(&sl66.invariants)
        .filter(|(r, _)| !r.physical)
        .map(|(r, i)| format!("{}: {r:?}", i.label))
        .collect();
    out.push(check("classify", "sl6 level 6 invariants physical", fails));

    let got = classify::stabiliser_exceptions(2..=8, 1..=10, StabiliserMode::ZN)?;
    let fails = if got == vec![(2, 2, 1)] { vec![] } else { vec![format!("{got:?}")] };
    out.push(check("classify", "trivial Z_N stabiliser exceptions", fails));
    let mut got = classify::stabiliser_exceptions(3..=8, 3..=8, StabiliserMode::DN)?;
    got.sort();
    let mut want = vec![(3, 3, 0), (3, 6, 0), (4, 4, 0), (4, 4, 2), (5, 5, 0), (6, 3, 3), (6, 3, 0)];
    want.sort();
    let fails = if got == want { vec![] } else { vec![format!("{got:?}")] };
    out.push(check("classify", "trivial D_N stabiliser exceptions", fails));
    let mut got = Vec::new();
    for r in 2..=12 {
        for k in 3..=12 {
            if !classify::dual_twist_check(r, k)?.passes() {
                got.push((r, k));
            }
        }
    }
    let fails = if got == vec![(2, 3), (2, 6), (3, 4), (4, 5), (5, 3)] { vec![] } else { vec![format!("{got:?}")] };
    out.push(check("classify", "dual is no tau-twist of X", fails));
    Ok(out)
}
