//! Acceptance criteria. Each criterion prints one PASS/FAIL line.
//! Expected values are written out here rather than taken from the library.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use fusionmod::alcove::{AlcoveIndex, LevelRank, Weight};
use fusionmod::arith;
use fusionmod::classify::{self, StabiliserMode};
use fusionmod::invariants::{self, IntMatrix, ModularData, Tolerances};
use fusionmod::{branching, cosets, pointed};

/// Criteria whose failure is analysed in the decisions ledger.
const KNOWN_DEVIATIONS: [u32; 1] = [8];

const COMMUTATOR_TOL: f64 = 1e-6;
const DIM_REL_TOL: f64 = 1e-9;

struct Outcome {
    id: u32,
    name: &'static str,
    failures: Vec<String>,
}

fn divisor_count(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).count() as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Weyl dimension formula at q = exp(i pi / (N + k)).
fn qdim_oracle(n: u32, k: u32, rows: &[u16]) -> f64 {
    let kappa = (n + k) as f64;
    let mut l: Vec<f64> = rows.iter().map(|&r| r as f64).collect();
    l.resize(n as usize, 0.0);
    let mut q = 1.0;
    for i in 0..n as usize {
        for j in i + 1..n as usize {
            let g = (j - i) as f64;
            q *= (PI * (l[i] - l[j] + g) / kappa).sin() / (PI * g / kappa).sin();
        }
    }
    q
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    for n in 3..=8 {
        for k in 3..=10 {
            let idx = AlcoveIndex::new(LevelRank::new(n, k).unwrap());
            for d in arith::eligible_d(n as u64, k as u64).unwrap() {
                if invariants::z_plus(&idx, d).unwrap() != invariants::z_plus_closed(&idx, d).unwrap() {
                    failures.push(format!("({n},{k}) d={d}"));
                }
            }
        }
    }
    Outcome { id: 1, name: "Z(d,+) equals its closed form, 3<=N<=8, 3<=k<=10", failures }
}

fn criterion_2() -> Outcome {
    let tol = Tolerances { s_commute: COMMUTATOR_TOL, ..Tolerances::default() };
    let mut failures = Vec::new();
    for n in 3..=8 {
        for k in 3..=10 {
            let lr = LevelRank::new(n, k).unwrap();
            let idx = AlcoveIndex::new(lr);
            let labels = invariants::generic_labels(n as u64, k as u64).unwrap();
            let mats: Vec<IntMatrix> = labels.iter().map(|&l| invariants::generic_invariant(&idx, l).unwrap()).collect();
            let md = ModularData::load_or_compute(lr, None).unwrap();
            let reports = invariants::is_physical_many(&mats, &md, &tol).unwrap();
            for ((l, z), r) in labels.iter().zip(&mats).zip(reports) {
                let vacuum = z.get(0, 0) == 1;
                if !(vacuum && z.is_symmetric() && r.physical && r.commutator < COMMUTATOR_TOL) {
                    failures.push(format!("({n},{k}) {l}: {r:?}"));
                }
            }
        }
    }
    Outcome { id: 2, name: "generic invariants are symmetric physical invariants", failures }
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    for n in 3..=8u32 {
        for k in 3..=10u32 {
            let (nn, kk) = (n as u64, k as u64);
            let idx = AlcoveIndex::new(LevelRank::new(n, k).unwrap());
            let c = invariants::z_minus(&idx, 1).unwrap();
            if c.matmul(&c).unwrap() != IntMatrix::identity(idx.len()) {
                failures.push(format!("({n},{k}) Z(1,-)^2"));
            }
            let ds = arith::eligible_d(nn, kk).unwrap();
            let zs: Vec<IntMatrix> = ds.iter().map(|&d| invariants::z_plus(&idx, d).unwrap()).collect();
            for (d1, z1) in ds.iter().zip(&zs) {
                if c.matmul(z1).unwrap() != z1.matmul(&c).unwrap() {
                    failures.push(format!("({n},{k}) Z(1,-) Z({d1},+)"));
                }
                for (d2, z2) in ds.iter().zip(&zs) {
                    let (m1, m2) = (arith::m_of_d(nn, kk, *d1).unwrap(), arith::m_of_d(nn, kk, *d2).unwrap());
                    let r = gcd(m1, m2);
                    let lcm = m1 / r * m2;
                    let prod = z1.matmul(z2).unwrap();
                    let found = ds.iter().zip(&zs).any(|(&d, z)| {
                        arith::m_of_d(nn, kk, d).unwrap() == lcm && z.scale(r).unwrap() == prod
                    });
                    if !found {
                        failures.push(format!("({n},{k}) Z({d1},+) Z({d2},+)"));
                    }
                }
            }
        }
    }
    Outcome { id: 3, name: "charge conjugation identities and the gcd/lcm product rule", failures }
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=60u64 {
        for k in 1..=60u64 {
            let (lhs, _) = arith::count_identity_check(n, k).unwrap();
            let want = if n % 2 == 0 && k % 2 == 1 { divisor_count(n / 2) } else { divisor_count(n) };
            if lhs != want {
                failures.push(format!("identity ({n},{k}): {lhs} != {want}"));
            }
        }
    }
    for n in 2..=8u64 {
        for k in 1..=12u64 {
            if !classify::is_pointed_only(n, k).unwrap().pointed_only {
                continue;
            }
            let g = classify::generic_count(n, k).unwrap();
            let c = classify::coset_sum(n, k).unwrap();
            if g != c {
                failures.push(format!("count ({n},{k}): {g} != {c}"));
            }
        }
    }
    Outcome { id: 4, name: "count identity N,k<=60; generic count = coset sum, pointed-only N<=8, k<=12", failures }
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    for m in 1..=12u64 {
        for j in 0..=3u32 {
            for reflections in [true, false] {
                let g = cosets::DihedralModel { m, j, reflections };
                let got = cosets::double_coset_count(&g, &g.rotations(1)) as u64;
                let want = (1u64 << j) * if reflections { 2 } else { 1 };
                if got != want {
                    failures.push(format!("D{m} x Z2^{j} reflections={reflections}: {got} != {want}"));
                }
            }
        }
    }
    for n in 2..=12u64 {
        for k in 1..=12u64 {
            for m in arith::eligible_m(n, k).unwrap() {
                if cosets::is_exceptional_triple(n, k, m).unwrap() {
                    continue;
                }
                let (a, b) = (cosets::pointed_coset_count(n, k, m).unwrap(), cosets::pointed_coset_formula(n, k, m).unwrap());
                if a != b {
                    failures.push(format!("({n},{k},{m}): model {a} formula {b}"));
                }
            }
        }
    }
    for ((n, k, m), want) in [((3, 9, 3), 4), ((4, 8, 4), 3), ((5, 5, 5), 4)] {
        let got = cosets::exceptional_coset_count(n, k, m).unwrap();
        if got != want {
            failures.push(format!("exceptional ({n},{k},{m}): {got} != {want}"));
        }
    }
    Outcome { id: 5, name: "double coset model matches the formula; exceptional counts 4, 3, 4", failures }
}

fn criterion_6() -> Outcome {
    let printed: [((u64, u64), u64); 15] = [
        ((3, 5), 6),
        ((3, 9), 8),
        ((3, 21), 5),
        ((4, 4), 7),
        ((4, 6), 8),
        ((4, 8), 9),
        ((5, 3), 6),
        ((5, 5), 12),
        ((5, 7), 8),
        ((6, 4), 12),
        ((6, 6), 16),
        ((6, 8), 12),
        ((7, 5), 8),
        ((7, 7), 10),
        ((7, 9), 8),
    ];
    let mut failures = Vec::new();
    let pairs = cosets::exceptional_pairs();
    for ((n, k), want) in printed {
        if !pairs.contains(&(n, k)) {
            failures.push(format!("({n},{k}) not listed as exceptional"));
            continue;
        }
        let got = classify::special_count(n, k).unwrap();
        if got != want {
            failures.push(format!("({n},{k}): {got} != {want}"));
        }
    }
    Outcome { id: 6, name: "module category counts at the 15 exceptional levels", failures }
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let res = classify::sl66_invariants().unwrap();
    let mats: Vec<IntMatrix> = res.invariants.iter().map(|i| i.matrix.clone()).collect();
    if mats.len() != 16 {
        failures.push(format!("{} invariants", mats.len()));
    }
    let lr = LevelRank::new(6, 6).unwrap();
    let md = ModularData::load_or_compute(lr, None).unwrap();
    for (inv, r) in res.invariants.iter().zip(invariants::is_physical_many(&mats, &md, &Tolerances::default()).unwrap()) {
        if !r.physical || inv.matrix.get(0, 0) != 1 {
            failures.push(format!("{} not physical", inv.label));
        }
    }
    let rank = invariants::rational_rank(&mats).unwrap().rank;
    if rank != 16 {
        failures.push(format!("rank {rank}"));
    }
    let printed = classify::sl66_printed_table().unwrap();
    let mut cells = 0;
    for a in 0..16 {
        for b in 0..16 {
            if res.computed.cells[a][b] == printed.cells[a][b] {
                cells += 1;
            }
        }
    }
    if cells != 256 {
        failures.push(format!("{cells}/256 cells match"));
    }
    // spot cells of the printed table, independent of the parser
    let label = |s: &str| printed.labels.iter().position(|l| l == s).unwrap();
    for (a, b, want) in [("M3+", "M3+", vec![(3, "M3+")]), ("M10", "M10", vec![(6, "M10"), (1, "M11")]), ("M9", "M9", vec![(16, "M9")])] {
        let mut want: Vec<(u64, usize)> = want.into_iter().map(|(c, l)| (c, label(l))).collect();
        want.sort_by_key(|e| e.1);
        if res.computed.cells[label(a)][label(b)] != want {
            failures.push(format!("{a} x {b}"));
        }
    }
    Outcome { id: 7, name: "sl6 level 6: 16 physical invariants, rank 16, printed 16x16 table", failures }
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let rel = |a: &str, b: &str| vec![(a.to_string(), 1i64), (b.to_string(), -1i64)];
    let cases: Vec<(u64, u64, Vec<Vec<(String, i64)>>)> = vec![
        (3, 3, vec![rel("Z(3,+)", "Z(3,-)")]),
        (3, 6, vec![rel("Z(3,+)", "Z(3,-)")]),
        (5, 5, vec![rel("Z(5,+)", "Z(5,-)")]),
        (6, 3, vec![rel("Z(3,+)", "Z(3,-)")]),
        (4, 4, vec![rel("Z(2,+)", "Z(2,-)"), rel("Z(4,+)", "Z(4,-)")]),
        (3, 4, vec![]),
        (4, 5, vec![]),
        (5, 6, vec![]),
        (6, 5, vec![]),
        (7, 4, vec![]),
    ];
    for (n, k, want) in cases {
        if !want.is_empty() || classify::is_pointed_only(n, k).unwrap().pointed_only {
            let (labels, rank) = classify::generic_rank(n, k).unwrap();
            let mut got: Vec<Vec<(String, i64)>> = rank
                .dependencies
                .iter()
                .map(|dep| labels.iter().zip(dep).filter(|e| *e.1 != 0).map(|(l, &c)| (l.to_string(), c)).collect())
                .collect();
            got.sort();
            let mut want = want;
            want.sort();
            if got != want {
                failures.push(format!("({n},{k}): {got:?}"));
            }
        } else {
            failures.push(format!("({n},{k}) is not pointed-only"));
        }
    }
    Outcome { id: 8, name: "linear dependencies among generic invariants", failures }
}

fn row_oracle(rows: &[&[u16]]) -> BTreeMap<Vec<u16>, u32> {
    let mut out = BTreeMap::new();
    for r in rows {
        *out.entry(r.to_vec()).or_insert(0) += 1;
    }
    out
}

fn table_row(t: &branching::BranchingTable, label: &str) -> BTreeMap<Vec<u16>, u32> {
    let mut out = BTreeMap::new();
    if let Some(r) = t.row(label) {
        for (w, m) in &r.weights {
            *out.entry(w.trimmed().to_vec()).or_insert(0) += m;
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let mut failures: Vec<String> = branching::printed_row_checks()
        .unwrap()
        .into_iter()
        .filter(|c| !c.1)
        .map(|c| format!("row {}", c.0))
        .collect();
    let p3 = branching::branch_plus2(3).unwrap();
    let m5 = branching::branch_minus2(5).unwrap();
    for (t, label, want) in [
        (&p3, "L1", row_oracle(&[&[2], &[5, 3]])),
        (&p3, "L5", row_oracle(&[&[2, 2], &[5, 2]])),
        (&m5, "L1", row_oracle(&[&[1, 1], &[3, 2, 2]])),
    ] {
        if table_row(t, label) != want {
            failures.push(format!("{} {label}", t.embedding));
        }
    }
    let adj = branching::branch_adjoint(6).unwrap();
    if table_row(&adj, "S").values().copied().collect::<Vec<_>>() != vec![4] {
        failures.push("sl6 adjoint spinor multiplicity".into());
    }
    for t in branching::all_tables().unwrap() {
        let r = branching::consistency_check(&t, 1e-6);
        if !r.pass {
            failures.push(format!("consistency {}", t.embedding));
        }
    }
    Outcome { id: 9, name: "printed branching rows, spinor multiplicity, table consistency", failures }
}

fn criterion_10() -> Outcome {
    let mut failures = Vec::new();
    let zn = classify::stabiliser_exceptions(2..=8, 1..=10, StabiliserMode::ZN).unwrap();
    if zn != vec![(2, 2, 1)] {
        failures.push(format!("Z_N exceptions {zn:?}"));
    }
    let mut dn = classify::stabiliser_exceptions(3..=8, 3..=8, StabiliserMode::DN).unwrap();
    dn.sort();
    let mut want = vec![(3, 3, 0), (3, 6, 0), (4, 4, 0), (4, 4, 2), (5, 5, 0), (6, 3, 3), (6, 3, 0)];
    want.sort();
    if dn != want {
        failures.push(format!("D_N exceptions {dn:?}"));
    }
    let mut fails = Vec::new();
    for r in 2..=12 {
        for k in 3..=12 {
            let res = classify::dual_twist_check(r, k).unwrap();
            if !res.passes() {
                fails.push((r, k));
            }
            if (r, k) == (2, 6) && res.witness != Some(2) {
                failures.push(format!("(2,6) witness {:?}", res.witness));
            }
        }
    }
    if fails != vec![(2, 3), (2, 6), (3, 4), (4, 5), (5, 3)] {
        failures.push(format!("dual-twist exceptions {fails:?}"));
    }
    // a witness weight found by the search really has the claimed stabiliser property
    let lr = LevelRank::new(4, 5).unwrap();
    if let Some(w) = classify::stabiliser_search(4, 5, 0, StabiliserMode::DN).unwrap() {
        if !fusionmod::alcove::dn_stab_trivial(lr, &w) {
            failures.push(format!("(4,5) witness {w:?} has a stabiliser"));
        }
    } else {
        failures.push("(4,5) has no witness".into());
    }
    Outcome { id: 10, name: "stabiliser searches and the dual twist check", failures }
}

fn criterion_11() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=7u32 {
        for k in 1..=9u32 {
            let lr = LevelRank::new(n, k).unwrap();
            let idx = AlcoveIndex::new(lr);
            let d_c: f64 = idx.weights().iter().map(|w: &Weight| qdim_oracle(n, k, w.trimmed()).powi(2)).sum();
            for m in arith::eligible_m(n as u64, k as u64).unwrap() {
                let m = m as u32;
                let locals = pointed::local_modules(&idx, m).unwrap();
                let lhs: f64 = locals
                    .iter()
                    .map(|l| (pointed::induced_qdim(&idx, m, l) / m as f64).powi(2))
                    .sum();
                let rhs = d_c / (m * m) as f64;
                if (lhs - rhs).abs() > DIM_REL_TOL * rhs {
                    failures.push(format!("({n},{k},{m}): {lhs} vs {rhs}"));
                }
            }
        }
    }
    Outcome { id: 11, name: "local modules: D(C_A^0) = D(C)/m^2, N<=7, k<=9", failures }
}

fn main() {
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
    ];
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let pass = o.failures.is_empty();
        let mut line = format!("{} criterion {:>2}: {}", if pass { "PASS" } else { "FAIL" }, o.id, o.name);
        if !pass {
            line += &format!(" [{}]", o.failures.join("; "));
        }
        if KNOWN_DEVIATIONS.contains(&o.id) {
            line += " (known deviation)";
        }
        println!("{line}");
        if pass == KNOWN_DEVIATIONS.contains(&o.id) {
            unexpected.push(o.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
