//! Branching rules For(V) for conformal embeddings out of C(sl_N, k).

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::alcove::{self, AlcoveIndex, LevelRank, Weight};
use crate::error::{Error, Result};
use crate::invariants::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingRow {
    pub label: String,
    /// Sorted by weight, multiplicities positive.
    pub weights: Vec<(Weight, u32)>,
}

impl BranchingRow {
    fn new(label: impl Into<String>, items: BTreeMap<Weight, u32>) -> Self {
        BranchingRow { label: label.into(), weights: items.into_iter().collect() }
    }

    pub fn multiplicity(&self, w: &Weight) -> u32 {
        self.weights.iter().find(|(x, _)| x == w).map_or(0, |e| e.1)
    }
}

impl Serialize for BranchingRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BranchingRow", 2)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("weights", &self.weights)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingTable {
    pub embedding: String,
    pub n: u32,
    pub k: u32,
    /// Whether the local modules all have dimension one.
    pub pointed_target: bool,
    pub rows: Vec<BranchingRow>,
}

impl BranchingTable {
    pub fn level_rank(&self) -> LevelRank {
        LevelRank { n: self.n, k: self.k }
    }

    pub fn row(&self, label: &str) -> Option<&BranchingRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Columns of the branching matrix: entry (lambda, i) is the multiplicity of lambda in row i.
    pub fn matrix(&self, idx: &AlcoveIndex) -> Result<Vec<Vec<(usize, u64)>>> {
        self.rows
            .iter()
            .map(|r| {
                r.weights
                    .iter()
                    .map(|(w, m)| {
                        idx.index_of(w)
                            .map(|i| (i, *m as u64))
                            .ok_or_else(|| Error::OutsideAlcove(w.to_string()))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Z_{lambda mu} = sum_i M_{lambda i} M'_{mu f(i)}.
pub fn pairing_invariant(idx: &AlcoveIndex, left: &BranchingTable, right: &BranchingTable, f: &[usize]) -> Result<IntMatrix> {
    let a = left.matrix(idx)?;
    let b = right.matrix(idx)?;
    if f.len() != a.len() || f.iter().any(|&j| j >= b.len()) {
        return Err(Error::InvalidArgument("pairing does not match the tables".into()));
    }
    let mut z = IntMatrix::zeros(idx.len());
    for (i, col) in a.iter().enumerate() {
        for &(lam, x) in col {
            for &(mu, y) in &b[f[i]] {
                z.add_to(lam, mu, x * y)?;
            }
        }
    }
    Ok(z)
}

pub fn diagonal_invariant(idx: &AlcoveIndex, t: &BranchingTable) -> Result<IntMatrix> {
    let id: Vec<usize> = (0..t.rows.len()).collect();
    pairing_invariant(idx, t, t, &id)
}

/// Orbit of `w` under the subgroup generated by tau^{N/m}.
pub fn orbit_set(lr: LevelRank, w: &Weight, m: u32) -> Vec<Weight> {
    let step = (lr.n / m) as i64;
    let mut out = vec![w.clone()];
    let mut c = alcove::tau_pow(lr, w, step);
    while &c != w {
        out.push(c.clone());
        c = alcove::tau_pow(lr, &c, step);
    }
    out
}

enum Item<'a> {
    Orbit(&'a [u16], u32),
    One(&'a [u16]),
}

fn build_row(lr: LevelRank, label: &str, items: &[Item]) -> Result<BranchingRow> {
    let mut out = BTreeMap::new();
    for it in items {
        let ws = match it {
            Item::Orbit(r, m) => orbit_set(lr, &Weight::from_rows(lr, r)?, *m),
            Item::One(r) => vec![Weight::from_rows(lr, r)?],
        };
        for w in ws {
            if out.insert(w.clone(), 1).is_some() {
                return Err(Error::InvalidArgument(format!("{w} listed twice in row {label}")));
            }
        }
    }
    Ok(BranchingRow::new(label, out))
}

fn sign_vectors(len: usize) -> impl Iterator<Item = Vec<i64>> {
    (0u32..1 << len).map(move |bits| (0..len).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect())
}

/// Weight from a strictly decreasing integer vector of length N: subtract rho,
/// shift so the last entry vanishes and drop it.
fn weight_from_vector(lr: LevelRank, v: &[i64], rho: &[i64]) -> Result<Weight> {
    let diff: Vec<i64> = v.iter().zip(rho).map(|(a, b)| a - b).collect();
    let last = diff[diff.len() - 1];
    let rows: Vec<u16> = diff[..diff.len() - 1].iter().map(|x| (x - last) as u16).collect();
    Weight::from_rows(lr, &rows)
}

fn sorted_desc(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn labelled_rows(sets: Vec<BTreeMap<Weight, u32>>) -> Vec<BranchingRow> {
    sets.into_iter().enumerate().map(|(j, s)| BranchingRow::new(format!("L{j}"), s)).collect()
}

/// C(sl_N, N+2) inside sl_{N(N+1)/2} at level 1.
pub fn branch_plus2(n: u32) -> Result<BranchingTable> {
    if n < 2 {
        return Err(Error::InvalidLevelRank(format!("N={n}")));
    }
    let lr = LevelRank::new(n, n + 2)?;
    let nn = n as i64;
    let labels = (n * (n + 1) / 2) as i64;
    let rho: Vec<i64> = (1..=nn).rev().collect();
    let mut sets = vec![BTreeMap::new(); labels as usize];
    for s in sign_vectors(n as usize) {
        let v = sorted_desc((0..n as usize).map(|i| s[i] * (nn - i as i64)).collect());
        let base = weight_from_vector(lr, &v, &rho)?;
        let shift: i64 = (0..n as usize).filter(|&i| s[i] == 1).map(|i| nn - i as i64).sum();
        for l in 0..nn {
            let j = (l * (nn + 1) + shift).rem_euclid(labels) as usize;
            sets[j].insert(alcove::tau_pow(lr, &base, l), 1);
        }
    }
    Ok(BranchingTable {
        embedding: format!("sl{n}_{}_sl{labels}", n + 2),
        n,
        k: n + 2,
        pointed_target: true,
        rows: labelled_rows(sets),
    })
}

/// C(sl_N, N-2) inside sl_{N(N-1)/2} at level 1. The sign of the last entry is
/// fixed by the product-one condition and does not affect the weight.
pub fn branch_minus2(n: u32) -> Result<BranchingTable> {
    if n < 3 {
        return Err(Error::InvalidLevelRank(format!("N={n}")));
    }
    let lr = LevelRank::new(n, n - 2)?;
    let nn = n as i64;
    let labels = (n * (n - 1) / 2) as i64;
    let rho: Vec<i64> = (0..nn).rev().collect();
    let mut sets = vec![BTreeMap::new(); labels as usize];
    for s in sign_vectors(n as usize - 1) {
        let mut v: Vec<i64> = (0..n as usize - 1).map(|i| s[i] * (nn - 1 - i as i64)).collect();
        v.push(0);
        let base = weight_from_vector(lr, &sorted_desc(v), &rho)?;
        let shift: i64 = (0..n as usize - 1).filter(|&i| s[i] == 1).map(|i| nn - 1 - i as i64).sum();
        for l in 0..nn {
            let j = (2 * l * (nn - 1) + shift).rem_euclid(labels) as usize;
            sets[j].insert(alcove::tau_pow(lr, &base, 2 * l), 1);
        }
    }
    Ok(BranchingTable {
        embedding: format!("sl{n}_{}_sl{labels}", n - 2),
        n,
        k: n - 2,
        pointed_target: true,
        rows: labelled_rows(sets),
    })
}

fn partitions_with_hook_below(n: usize) -> Vec<Vec<u16>> {
    fn rec(max_part: u16, max_len: usize, budget: usize, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>, n: usize) {
        out.push(prefix.clone());
        if prefix.len() == max_len {
            return;
        }
        for p in 1..=max_part {
            let first = *prefix.first().unwrap_or(&p) as usize;
            // hook of the corner box: first row + number of rows - 1
            if first + prefix.len() + 1 - 1 >= n {
                continue;
            }
            prefix.push(p);
            rec(p, max_len, budget, prefix, out, n);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u16, n, n, &mut Vec::new(), &mut out, n);
    out
}

fn transpose_partition(p: &[u16]) -> Vec<u16> {
    let width = p.first().copied().unwrap_or(0);
    (1..=width).map(|j| p.iter().filter(|&&x| x >= j).count() as u16).collect()
}

/// C(sl_N, N) inside so_{N^2-1} at level 1 via the adjoint representation.
pub fn branch_adjoint(n: u32) -> Result<BranchingTable> {
    if n < 3 {
        return Err(Error::InvalidLevelRank(format!("N={n}")));
    }
    let lr = LevelRank::new(n, n)?;
    let nu = n as usize;
    let mut even = BTreeMap::new();
    let mut odd = BTreeMap::new();
    for lam in partitions_with_hook_below(nu) {
        let mu = transpose_partition(&lam);
        let mut v = vec![0i64; nu];
        for (i, &x) in lam.iter().enumerate() {
            v[i] = x as i64;
        }
        for (j, &x) in mu.iter().enumerate() {
            v[nu - 1 - j] -= x as i64;
        }
        let top = mu.first().copied().unwrap_or(0) as i64;
        let rows: Vec<u16> = v[..nu - 1].iter().map(|x| (x + top) as u16).collect();
        let w = Weight::from_rows(lr, &rows)?;
        let size: u32 = lam.iter().map(|&x| x as u32).sum();
        let target = if size % 2 == 0 { &mut even } else { &mut odd };
        if target.insert(w.clone(), 1).is_some() {
            return Err(Error::InvalidArgument(format!("{w} appears twice")));
        }
    }
    let staircase: Vec<u16> = (1..n as u16).rev().collect();
    let stair = Weight::from_rows(lr, &staircase)?;
    let mut rows = vec![BranchingRow::new("1", even), BranchingRow::new("V", odd)];
    if n % 2 == 0 {
        rows.push(BranchingRow::new("S", BTreeMap::from([(stair, 1 << ((n - 2) / 2))])));
    } else {
        let mult = 1 << ((n - 3) / 2);
        rows.push(BranchingRow::new("S+", BTreeMap::from([(stair.clone(), mult)])));
        rows.push(BranchingRow::new("S-", BTreeMap::from([(stair, mult)])));
    }
    let dim = n * n - 1;
    Ok(BranchingTable { embedding: format!("sl{n}_{n}_so{dim}"), n, k: n, pointed_target: n % 2 == 1, rows })
}

fn table(name: &str, n: u32, k: u32, pointed: bool, rows: &[(&str, &[Item])]) -> Result<BranchingTable> {
    let lr = LevelRank::new(n, k)?;
    Ok(BranchingTable {
        embedding: name.into(),
        n,
        k,
        pointed_target: pointed,
        rows: rows.iter().map(|(l, items)| build_row(lr, l, items)).collect::<Result<_>>()?,
    })
}

/// sl_3 level 9 inside E_6 level 1.
pub fn sl3_9_e6() -> Result<BranchingTable> {
    use Item::*;
    table(
        "sl3_9_e6",
        3,
        9,
        true,
        &[
            ("1", &[Orbit(&[], 3), Orbit(&[5, 1], 3)]),
            ("g", &[Orbit(&[4, 2], 3)]),
            ("g2", &[Orbit(&[4, 2], 3)]),
        ],
    )
}

/// sl_3 level 21 inside E_7 level 1. Each row is a full twist class: h in Z and h in 3/4 + Z.
pub fn sl3_21_e7() -> Result<BranchingTable> {
    use Item::*;
    table(
        "sl3_21_e7",
        3,
        21,
        true,
        &[
            ("1", &[Orbit(&[], 3), Orbit(&[8, 4], 3), Orbit(&[11, 1], 3), Orbit(&[12, 6], 3)]),
            ("g", &[Orbit(&[6], 3), Orbit(&[6, 6], 3), Orbit(&[11, 7], 3), Orbit(&[11, 4], 3)]),
        ],
    )
}

/// sl_4 level 8 inside so_20 level 1.
pub fn sl4_8_so20() -> Result<BranchingTable> {
    use Item::*;
    table(
        "sl4_8_so20",
        4,
        8,
        true,
        &[
            ("1", &[Orbit(&[], 4), Orbit(&[4, 3, 1], 4)]),
            ("V", &[Orbit(&[2, 2], 4), Orbit(&[5, 3], 4)]),
            ("S+", &[Orbit(&[5, 2, 1], 4)]),
            ("S-", &[Orbit(&[5, 2, 1], 4)]),
        ],
    )
}

/// sl_6 level 6 inside sp_20 level 1; orbits are under tau^2.
pub fn sl6_6_sp20() -> Result<BranchingTable> {
    use Item::*;
    let mut t = table(
        "sl6_6_sp20",
        6,
        6,
        false,
        &[
            ("L0", &[Orbit(&[], 3), Orbit(&[2, 2, 2], 3), One(&[4, 4, 2, 2])]),
            ("L1", &[Orbit(&[1, 1, 1], 3), Orbit(&[3, 3, 2, 1], 3)]),
            ("L2", &[Orbit(&[2, 2, 1, 1], 3), Orbit(&[6, 5, 3, 3, 1], 3)]),
            ("L3", &[Orbit(&[3, 2, 2, 2], 3), Orbit(&[3, 3, 1, 1, 1], 3), One(&[5, 4, 3, 2, 1])]),
            ("L4", &[Orbit(&[6, 6, 3, 3], 3), Orbit(&[4, 3, 2, 2, 1], 3), One(&[6, 4, 4, 2, 2])]),
            ("L5", &[Orbit(&[5, 3, 3, 2, 2], 3), Orbit(&[5, 5, 3, 2], 3)]),
        ],
    )?;
    let lr = t.level_rank();
    for i in (0..5).rev() {
        let items = t.rows[i].weights.iter().map(|(w, m)| (alcove::tau(lr, w), *m)).collect();
        t.rows.push(BranchingRow::new(format!("L{}", 10 - i), items));
    }
    Ok(t)
}

/// Level-rank transpose for N = k. On the tau-orbit representative r (fewest boxes)
/// it is tau^{floor(|r|/N)} of r transposed with full columns stripped, and it commutes with tau.
pub fn transpose_weight(lr: LevelRank, w: &Weight) -> Result<Weight> {
    if lr.n != lr.k {
        return Err(Error::InvalidLevelRank(format!("transpose needs N = k, got {lr}")));
    }
    let (j, r) = (0..lr.n as i64)
        .map(|j| (j, alcove::tau_pow(lr, w, -j)))
        .min_by(|a, b| (a.1.boxes(), &a.1).cmp(&(b.1.boxes(), &b.1)))
        .expect("N > 0");
    let mut t = transpose_partition(r.trimmed());
    if t.len() == lr.n as usize {
        let c = t[t.len() - 1];
        for x in t.iter_mut() {
            *x -= c;
        }
    }
    let base = Weight::from_rows(lr, &t)?;
    Ok(alcove::tau_pow(lr, &base, j + (r.boxes() / lr.n) as i64))
}

/// Image of the sp_20 table under the transpose: X_j comes from L_j for even j and L_{10-j} for odd j.
pub fn transpose_branching() -> Result<BranchingTable> {
    let base = sl6_6_sp20()?;
    let lr = base.level_rank();
    let mut rows = Vec::new();
    for j in 0..=10usize {
        let src = if j % 2 == 0 { j } else { 10 - j };
        let mut items = BTreeMap::new();
        for (w, m) in &base.rows[src].weights {
            *items.entry(transpose_weight(lr, w)?).or_insert(0) += m;
        }
        rows.push(BranchingRow::new(format!("X{j}"), items));
    }
    Ok(BranchingTable { embedding: "sl6_6_sp20_transpose".into(), n: 6, k: 6, pointed_target: false, rows })
}

/// Local modules of the extension of sp_20 level 1 by L0 + L6.
pub fn extension_branching() -> Result<BranchingTable> {
    let base = sl6_6_sp20()?;
    let mut rows = Vec::new();
    for (a, b) in [(0, 6), (3, 7), (4, 10)] {
        let mut items = BTreeMap::new();
        for (w, m) in base.rows[a].weights.iter().chain(&base.rows[b].weights) {
            *items.entry(w.clone()).or_insert(0) += m;
        }
        rows.push(BranchingRow::new(format!("L{a}+L{b}"), items));
    }
    Ok(BranchingTable { embedding: "sl6_6_sp20_ext".into(), n: 6, k: 6, pointed_target: false, rows })
}

/// Rows quoted in the literature, compared with the generated tables.
pub fn printed_row_checks() -> Result<Vec<(String, bool)>> {
    use Item::*;
    let p3 = branch_plus2(3)?;
    let p4 = branch_plus2(4)?;
    let p5 = branch_plus2(5)?;
    let m5 = branch_minus2(5)?;
    let tr = transpose_branching()?;
    let cases: Vec<(&BranchingTable, &str, Vec<Item>)> = vec![
        (&p3, "L1", vec![One(&[2]), One(&[5, 3])]),
        (&p3, "L5", vec![One(&[2, 2]), One(&[5, 2])]),
        (&p4, "L1", vec![One(&[2]), One(&[6, 6, 2]), One(&[5, 3, 2])]),
        (&p4, "L9", vec![One(&[2, 2, 2]), One(&[6, 4]), One(&[5, 3, 2])]),
        (&p5, "L1", vec![One(&[2]), One(&[7, 6, 4]), One(&[7, 4, 4, 2]), One(&[5, 3, 2, 2]), One(&[6, 6, 3, 2])]),
        (&p5, "L4", vec![One(&[4, 3, 1]), One(&[5, 1, 1, 1]), One(&[7, 5, 3, 3]), One(&[6, 6, 4, 2]), One(&[7, 7, 7, 2])]),
        (&p5, "L11", vec![One(&[7, 5]), One(&[6, 4, 2]), One(&[4, 4, 3, 1]), One(&[5, 4, 4, 4]), One(&[7, 4, 4, 2])]),
        (&p5, "L14", vec![One(&[2, 2, 2, 2]), One(&[6, 4, 3]), One(&[7, 7, 3, 1]), One(&[7, 5, 3, 3]), One(&[5, 3, 3, 2])]),
        (&m5, "L1", vec![One(&[1, 1]), One(&[3, 2, 2])]),
        (&m5, "L9", vec![One(&[1, 1, 1]), One(&[3, 3, 1, 1])]),
        (&tr, "X0", vec![Orbit(&[], 3), Orbit(&[6, 3, 3], 3), One(&[4, 4, 2, 2])]),
        (&tr, "X1", vec![Orbit(&[6, 3], 3), Orbit(&[4, 3, 2], 3)]),
        (&tr, "X2", vec![Orbit(&[6, 4, 2], 3), Orbit(&[5, 3, 2, 2], 3)]),
        (&tr, "X9", vec![Orbit(&[3], 3), Orbit(&[6, 4, 3, 2], 3)]),
    ];
    let mut out = Vec::new();
    for (t, label, items) in cases {
        let expect = build_row(t.level_rank(), label, &items)?;
        let ok = t.row(label).map_or(false, |r| *r == expect);
        out.push((format!("{} {label}", t.embedding), ok));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub embedding: String,
    pub dim_a: f64,
    pub qdim_local: Vec<f64>,
    pub d_local: f64,
    pub d_c: f64,
    pub twist_homogeneous: bool,
    pub pass: bool,
}

/// D_local dim(A)^2 = D(C), homogeneous twists per row, and unit local
/// dimensions when the target is pointed.
pub fn consistency_check(t: &BranchingTable, tol: f64) -> ConsistencyReport {
    let lr = t.level_rank();
    let qd = |row: &BranchingRow| -> f64 { row.weights.iter().map(|(w, m)| *m as f64 * alcove::qdim(lr, w)).sum() };
    let dim_a = qd(&t.rows[0]);
    let qdim_local: Vec<f64> = t.rows.iter().map(|r| qd(r) / dim_a).collect();
    let d_local: f64 = qdim_local.iter().map(|x| x * x).sum();
    let d_c = alcove::global_dimension(lr);
    let twist_homogeneous = t.rows.iter().all(|r| {
        let h0 = alcove::conformal_weight(lr, &r.weights[0].0);
        r.weights.iter().all(|(w, _)| (alcove::conformal_weight(lr, w) - h0).is_integer())
    });
    let dims_ok = ((d_local * dim_a * dim_a - d_c) / d_c).abs() < tol;
    let pointed_ok = !t.pointed_target || qdim_local.iter().all(|q| (q - 1.0).abs() < 1e-8);
    ConsistencyReport {
        embedding: t.embedding.clone(),
        dim_a,
        qdim_local,
        d_local,
        d_c,
        twist_homogeneous,
        pass: dims_ok && pointed_ok && twist_homogeneous,
    }
}

/// Every table the library knows about.
pub fn all_tables() -> Result<Vec<BranchingTable>> {
    let mut out = Vec::new();
    for n in 3..=7 {
        out.push(branch_plus2(n)?);
    }
    for n in 4..=9 {
        out.push(branch_minus2(n)?);
    }
    for n in 3..=7 {
        out.push(branch_adjoint(n)?);
    }
    out.extend([sl3_9_e6()?, sl3_21_e7()?, sl4_8_so20()?, sl6_6_sp20()?, transpose_branching()?, extension_branching()?]);
    Ok(out)
}

pub fn table_by_name(name: &str) -> Result<BranchingTable> {
    all_tables()?
        .into_iter()
        .find(|t| t.embedding == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown embedding {name}")))
}
