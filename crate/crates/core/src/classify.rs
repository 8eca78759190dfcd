//! Counting and tensor rules for module categories over C(sl_N, k), the sl_6 level 6
//! table and two brute-force scans.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::alcove::{self, AlcoveIndex, LevelRank, Weight};
use crate::arith::{self, Sign, SignVector};
use crate::branching::{self, BranchingTable};
use crate::cosets;
use crate::error::{Error, Result};
use crate::invariants::{self, rank, GenericLabel, IntMatrix};

pub fn generic_count(n: u64, k: u64) -> Result<u64> {
    let s = if n % 2 == 0 && k % 2 == 1 { arith::sigma(n / 2)? } else { arith::sigma(n)? };
    Ok(match (n, k) {
        (2, 2) => 1,
        _ if n < 3 || k < 3 => s,
        _ => 2 * s,
    })
}

/// Sum over the pointed algebras of their double coset counts.
pub fn coset_sum(n: u64, k: u64) -> Result<u64> {
    let mut total = 0;
    for m in arith::eligible_m(n, k)? {
        total += if cosets::is_exceptional_triple(n, k, m)? {
            cosets::exceptional_coset_count(n, k, m)?
        } else {
            cosets::pointed_coset_count(n, k, m)?
        };
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointedOnly {
    pub pointed_only: bool,
    /// Set when the answer rests on an unverified expectation (N > 7).
    pub warning: Option<String>,
}

fn exceptional_level(n: u64, k: u64) -> bool {
    if cosets::exceptional_pairs().contains(&(n, k)) {
        return true;
    }
    match n {
        2 => [10, 16, 28].contains(&k),
        8 => [4, 6, 8, 10].contains(&k),
        _ => {
            // sl_2 level-rank duals and the generic families beyond the table
            (k == 2 && [10, 16, 28].contains(&n))
                || (n > 8 && (k + 2 == n || k == n || k == n + 2))
                || cosets::exceptional_pairs().contains(&(k, n))
                || cosets::EXCEPTIONAL_POINTED_PAIRS.contains(&(n, k))
        }
    }
}

/// Whether every etale algebra in C(sl_N, k) is pointed.
pub fn is_pointed_only(n: u64, k: u64) -> Result<PointedOnly> {
    LevelRank::new(n as u32, k as u32)?;
    let warning = (n > 7).then(|| format!("pointed-only status of ({n},{k}) is expected, not verified, for N > 7"));
    Ok(PointedOnly { pointed_only: !exceptional_level(n, k), warning })
}

fn sign_product(a: &SignVector, b: &SignVector) -> SignVector {
    let keys: BTreeSet<u64> = a.keys().chain(b.keys()).copied().collect();
    keys.into_iter()
        .map(|p| {
            let x = a.get(&p).copied().unwrap_or(Sign::Plus);
            let y = b.get(&p).copied().unwrap_or(Sign::Plus);
            (p, x.mul(y))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TensorProduct {
    pub label: GenericLabel,
    pub multiplicity: u64,
}

pub fn tensor_rule(n: u64, k: u64, a: GenericLabel, b: GenericLabel) -> Result<TensorProduct> {
    let ds = arith::eligible_d(n, k)?;
    for l in [a, b] {
        if !ds.contains(&l.d) {
            return Err(Error::InvalidArgument(format!("{l} is not a generic label for ({n},{k})")));
        }
    }
    let (m1, m2) = (arith::m_of_d(n, k, a.d)?, arith::m_of_d(n, k, b.d)?);
    let signs = sign_product(&arith::sign_vector_of_d(n, k, a.d)?, &arith::sign_vector_of_d(n, k, b.d)?);
    let d = arith::d_from_m_and_sign(n, k, m1.lcm(&m2), &signs)?;
    Ok(TensorProduct { label: GenericLabel { d, sign: a.sign.mul(b.sign) }, multiplicity: m1.gcd(&m2) })
}

/// Pairs for which the tensor rule is not claimed.
pub const TENSOR_RULE_UNVERIFIED: [(u64, u64); 3] = [(3, 3), (3, 6), (6, 3)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorCheck {
    pub left: GenericLabel,
    pub right: GenericLabel,
    pub expected: TensorProduct,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorReport {
    pub n: u64,
    pub k: u64,
    /// False for the pairs where the rule is only conjectured; checks are still reported.
    pub asserted: bool,
    pub checks: Vec<TensorCheck>,
    pub pass: bool,
}

/// Z_a Z_b = mult Z_c as matrices for every pair of generic labels.
pub fn verify_tensor_rule(n: u64, k: u64) -> Result<TensorReport> {
    let idx = AlcoveIndex::new(LevelRank::new(n as u32, k as u32)?);
    let labels = invariants::generic_labels(n, k)?;
    let mats = labels.iter().map(|&l| invariants::generic_invariant(&idx, l)).collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    for (i, &a) in labels.iter().enumerate() {
        for (j, &b) in labels.iter().enumerate() {
            let expected = tensor_rule(n, k, a, b)?;
            let c = labels.iter().position(|&l| l == expected.label).expect("tensor rule returns a generic label");
            let holds = mats[i].matmul(&mats[j])? == mats[c].scale(expected.multiplicity)?;
            checks.push(TensorCheck { left: a, right: b, expected, holds });
        }
    }
    let asserted = !TENSOR_RULE_UNVERIFIED.contains(&(n, k));
    let pass = !asserted || checks.iter().all(|c| c.holds);
    Ok(TensorReport { n, k, asserted, checks, pass })
}

/// Rank and dependencies of the generic invariants Z(d, +/-).
pub fn generic_rank(n: u64, k: u64) -> Result<(Vec<GenericLabel>, rank::RankResult)> {
    let idx = AlcoveIndex::new(LevelRank::new(n as u32, k as u32)?);
    let labels = invariants::generic_labels(n, k)?;
    let mats = labels.iter().map(|&l| invariants::generic_invariant(&idx, l)).collect::<Result<Vec<_>>>()?;
    Ok((labels, invariants::rational_rank(&mats)?))
}

pub fn special_count(n: u64, k: u64) -> Result<u64> {
    Ok(cosets::algebra_coset_table(n, k)?.total)
}

/// Module category labels for sl_6 level 6, in the printed order.
pub const SL66_LABELS: [&str; 16] =
    ["M1+", "M2+", "M3+", "M6+", "M1-", "M2-", "M3-", "M6-", "M9", "M10", "M11", "M12", "M13", "M14", "M15", "M16"];

/// The printed product table; row A, column B holds A (x) B.
const SL66_PRINTED: &str = "\
M1+ | M1+, M2+, M3+, M6+, M1-, M2-, M3-, M6-, M9, M10, M11, M12, M13, M14, M15, M16
M2+ | M2+, M1+, M6+, M3+, M2-, M1-, M6-, M3-, M9, M15, M11, M16, M13, M14, M10, M12
M3+ | M3+, M6+, 3M3+, 3M6+, M3-, M6-, 3M3-, 3M6-, 3M9, 3M10, 3M11, 3M12, 3M13, 3M14, 3M15, 3M16
M6+ | M6+, M3+, 3M6+, 3M3+, M6-, M3-, 3M6-, 3M3-, 3M9, 3M15, 3M11, 3M16, 3M13, 3M14, 3M10, 3M12
M1- | M1-, M2-, M3-, M6-, M1+, M2+, M3+, M6+, M9, M10, M11, M16, M13, M14, M15, M12
M2- | M2-, M1-, M6-, M3-, M2+, M1+, M6+, M3+, M9, M15, M11, M12, M13, M14, M10, M16
M3- | M3-, M6-, 3M3-, 3M6-, M3+, M6+, 3M3+, 3M6+, 3M9, 3M10, 3M11, 3M16, 3M13, 3M14, 3M15, 3M12
M6- | M6-, M3-, 3M6-, 3M3-, M6+, M3+, 3M6+, 3M3+, 3M9, 3M15, 3M11, 3M12, 3M13, 3M14, 3M10, 3M16
M9 | M9, M9, 3M9, 3M9, M9, M9, 3M9, 3M9, 16M9, 4M14, 8M14, 4M14, 8M9, 16M14, 4M14, 4M14
M10 | M10, M15, 3M10, 3M15, M10, M15, 3M10, 3M15, 4M13, 6M10 + M11, 8M11, 4M11, 8M13, 4M11, M11 + 6M15, 4M11
M11 | M11, M11, 3M11, 3M11, M11, M11, 3M11, 3M11, 8M13, 8M11, 16M11, 8M11, 16M13, 8M11, 8M11, 8M11
M12 | M12, M16, 3M12, 3M16, M16, M12, 3M16, 3M12, 4M13, 4M11, 8M11, M11 + 6M12, 8M13, 4M11, 4M11, M11 + 6M16
M13 | M13, M13, 3M13, 3M13, M13, M13, 3M13, 3M13, 16M13, 4M11, 8M11, 4M11, 8M13, 16M11, 4M11, 4M11
M14 | M14, M14, 3M14, 3M14, M14, M14, 3M14, 3M14, 8M9, 8M14, 16M14, 8M14, 16M9, 8M14, 8M14, 8M14
M15 | M15, M10, 3M15, 3M10, M15, M10, 3M15, 3M10, 4M13, M11 + 6M15, 8M11, 4M11, 8M13, 4M11, 6M10 + M11, 4M11
M16 | M16, M12, 3M16, 3M12, M12, M16, 3M12, 3M16, 4M13, 4M11, 8M11, M11 + 6M16, 8M13, 4M11, 4M11, M11 + 6M12
";

/// A formal non-negative combination of labels, as (coefficient, label index).
pub type Cell = Vec<(u64, usize)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorTable {
    pub labels: Vec<String>,
    /// cells[a][b] = M_a (x) M_b
    pub cells: Vec<Vec<Cell>>,
}

impl TensorTable {
    pub fn format_cell(&self, c: &Cell) -> String {
        c.iter()
            .map(|&(m, l)| if m == 1 { self.labels[l].clone() } else { format!("{m}{}", self.labels[l]) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("| (x) | {} |\n", self.labels.join(" | "));
        s += &format!("|{}\n", "---|".repeat(self.labels.len() + 1));
        for (a, row) in self.cells.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| self.format_cell(c)).collect();
            s += &format!("| {} | {} |\n", self.labels[a], cells.join(" | "));
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("label,{}\n", self.labels.join(","));
        for (a, row) in self.cells.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| self.format_cell(c)).collect();
            s += &format!("{},{}\n", self.labels[a], cells.join(","));
        }
        s
    }
}

fn parse_cell(text: &str) -> Result<Cell> {
    let mut cell = Vec::new();
    for term in text.split(" + ") {
        let term = term.trim();
        let at = term.find('M').ok_or_else(|| Error::InvalidArgument(format!("bad cell {text}")))?;
        let coef = if at == 0 { 1 } else { term[..at].parse().map_err(|_| Error::InvalidArgument(format!("bad cell {text}")))? };
        let label = SL66_LABELS
            .iter()
            .position(|l| *l == &term[at..])
            .ok_or_else(|| Error::InvalidArgument(format!("unknown label in {text}")))?;
        cell.push((coef, label));
    }
    cell.sort_by_key(|e| e.1);
    Ok(cell)
}

/// The printed sl_6 level 6 table.
pub fn sl66_printed_table() -> Result<TensorTable> {
    let mut cells = Vec::new();
    for line in SL66_PRINTED.lines() {
        let (_, rest) = line.split_once(" | ").ok_or_else(|| Error::InvalidArgument(line.into()))?;
        cells.push(rest.split(", ").map(parse_cell).collect::<Result<Vec<_>>>()?);
    }
    Ok(TensorTable { labels: SL66_LABELS.iter().map(|s| s.to_string()).collect(), cells })
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl66Invariant {
    pub label: String,
    pub construction: String,
    #[serde(skip)]
    pub matrix: IntMatrix,
}

fn flip_pairing(t: &BranchingTable, prefix: &str) -> Result<Vec<usize>> {
    let pos = |j: usize| {
        t.rows
            .iter()
            .position(|r| r.label == format!("{prefix}{j}"))
            .ok_or_else(|| Error::InvalidArgument(format!("missing row {prefix}{j}")))
    };
    let mut f: Vec<usize> = (0..t.rows.len()).collect();
    for j in [1, 3, 5, 7, 9] {
        f[pos(j)?] = pos(10 - j)?;
    }
    Ok(f)
}

/// Matches local modules of two tables with equal twists; fails unless the match is unique.
fn twist_pairing(a: &BranchingTable, b: &BranchingTable) -> Result<Vec<usize>> {
    let lr = a.level_rank();
    let h = |t: &BranchingTable, i: usize| {
        let x = alcove::conformal_weight(lr, &t.rows[i].weights[0].0);
        x - x.floor()
    };
    (0..a.rows.len())
        .map(|i| {
            let hits: Vec<usize> = (0..b.rows.len()).filter(|&j| h(a, i) == h(b, j)).collect();
            match hits.as_slice() {
                [j] => Ok(*j),
                _ => Err(Error::NoSolution(format!("row {} has {} twist matches", a.rows[i].label, hits.len()))),
            }
        })
        .collect()
}

/// The eight exceptional invariants in construction order.
fn sl66_exceptional(idx: &AlcoveIndex) -> Result<Vec<(String, IntMatrix)>> {
    let so = branching::branch_adjoint(6)?;
    let sp = branching::sl6_6_sp20()?;
    let tr = branching::transpose_branching()?;
    let ext = branching::extension_branching()?;
    let het = branching::pairing_invariant(idx, &so, &ext, &twist_pairing(&so, &ext)?)?;
    Ok(vec![
        ("A_so35".into(), branching::diagonal_invariant(idx, &so)?),
        ("A_sp20".into(), branching::diagonal_invariant(idx, &sp)?),
        ("A_sp20 flip".into(), branching::pairing_invariant(idx, &sp, &sp, &flip_pairing(&sp, "L")?)?),
        ("A_sp20_tr".into(), branching::diagonal_invariant(idx, &tr)?),
        ("A_sp20_tr flip".into(), branching::pairing_invariant(idx, &tr, &tr, &flip_pairing(&tr, "X")?)?),
        ("A_sp20_ext".into(), branching::diagonal_invariant(idx, &ext)?),
        ("A_so35 x A_sp20_ext".into(), het.clone()),
        ("A_sp20_ext x A_so35".into(), het.transpose()),
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl66Result {
    pub invariants: Vec<Sl66Invariant>,
    /// Whether the printed cell (A, B) is Z_A Z_B (false: Z_B Z_A).
    pub row_times_column: bool,
    /// Number of (labelling, orientation) choices that reproduce the printed table.
    pub matching_labellings: usize,
    pub computed: TensorTable,
}

fn coefficient_vector(target: &IntMatrix, basis: &[IntMatrix]) -> Result<Option<Vec<Ratio<i128>>>> {
    match rank::coefficients(target, basis) {
        Ok(c) => Ok(Some(c)),
        Err(Error::NoSolution(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn cell_vector(cell: &Cell, perm: &[usize]) -> Vec<Ratio<i128>> {
    let mut v = vec![Ratio::from_integer(0); perm.len()];
    for &(c, l) in cell {
        v[perm[l]] += Ratio::from_integer(c as i128);
    }
    v
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The 16 invariants for sl_6 level 6, with M_9..M_16 assigned by matching the printed table.
pub fn sl66_invariants() -> Result<Sl66Result> {
    let idx = AlcoveIndex::new(LevelRank::new(6, 6)?);
    let generic_labels = invariants::generic_labels(6, 6)?;
    let mut basis: Vec<IntMatrix> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for l in &generic_labels {
        basis.push(invariants::generic_invariant(&idx, *l)?);
        names.push(l.to_string());
    }
    for (name, z) in sl66_exceptional(&idx)? {
        basis.push(z);
        names.push(name);
    }
    // products in construction order, decomposed once
    let n = basis.len();
    let mut prod: Vec<Vec<Option<Vec<Ratio<i128>>>>> = Vec::new();
    for a in 0..n {
        let mut row = Vec::new();
        for b in 0..n {
            row.push(coefficient_vector(&basis[a].matmul(&basis[b])?, &basis)?);
        }
        prod.push(row);
    }
    let printed = sl66_printed_table()?;
    let mut solutions = Vec::new();
    for sigma in permutations(8) {
        // perm maps a printed label index to a construction index
        let perm: Vec<usize> = (0..8).chain(sigma.iter().map(|&s| 8 + s)).collect();
        for row_times_column in [true, false] {
            let ok = (0..n).all(|a| {
                (0..n).all(|b| {
                    let (x, y) = if row_times_column { (perm[a], perm[b]) } else { (perm[b], perm[a]) };
                    prod[x][y].as_ref() == Some(&cell_vector(&printed.cells[a][b], &perm))
                })
            });
            if ok {
                solutions.push((perm.clone(), row_times_column));
            }
        }
    }
    let matching_labellings = solutions.len();
    let found = solutions.into_iter().next();
    let (perm, row_times_column) = found.ok_or_else(|| Error::NoSolution("no labelling reproduces the printed table".into()))?;
    let invariants_out: Vec<Sl66Invariant> = (0..n)
        .map(|l| Sl66Invariant { label: SL66_LABELS[l].into(), construction: names[perm[l]].clone(), matrix: basis[perm[l]].clone() })
        .collect();
    let mut inverse = vec![0; n];
    for (l, &p) in perm.iter().enumerate() {
        inverse[p] = l;
    }
    let mut cells = Vec::new();
    for a in 0..n {
        let mut row = Vec::new();
        for b in 0..n {
            let (x, y) = if row_times_column { (perm[a], perm[b]) } else { (perm[b], perm[a]) };
            let v = prod[x][y].as_ref().ok_or_else(|| Error::NoSolution(format!("{} (x) {} outside span", SL66_LABELS[a], SL66_LABELS[b])))?;
            let mut cell: Cell = v
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != Ratio::from_integer(0))
                .map(|(i, c)| (c.to_integer() as u64, inverse[i]))
                .collect();
            cell.sort_by_key(|e| e.1);
            row.push(cell);
        }
        cells.push(row);
    }
    Ok(Sl66Result {
        invariants: invariants_out,
        row_times_column,
        matching_labellings,
        computed: TensorTable { labels: printed.labels.clone(), cells },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabiliserMode {
    /// Trivial stabiliser under the invertible objects.
    ZN,
    /// Trivial stabiliser under invertibles and duality.
    DN,
}

/// A weight with trivial stabiliser and t(lambda) = a mod N, if any.
pub fn stabiliser_search(n: u32, k: u32, a: u32, mode: StabiliserMode) -> Result<Option<Weight>> {
    let lr = LevelRank::new(n, k)?;
    if a >= n {
        return Err(Error::InvalidArgument(format!("a={a} must be below N={n}")));
    }
    let idx = AlcoveIndex::new(lr);
    Ok(idx
        .weights()
        .iter()
        .find(|w| {
            w.boxes() % n == a
                && match mode {
                    StabiliserMode::ZN => alcove::zn_stab_order(lr, w) == 1,
                    StabiliserMode::DN => alcove::dn_stab_trivial(lr, w),
                }
        })
        .cloned())
}

/// Triples (N, k, a) in the range with no witness.
pub fn stabiliser_exceptions(ns: std::ops::RangeInclusive<u32>, ks: std::ops::RangeInclusive<u32>, mode: StabiliserMode) -> Result<Vec<(u32, u32, u32)>> {
    let mut out = Vec::new();
    for n in ns {
        for k in ks.clone() {
            for a in 0..n {
                if stabiliser_search(n, k, a, mode)?.is_none() {
                    out.push((n, k, a));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualTwistResult {
    pub r: u32,
    pub k: u32,
    pub x: Weight,
    /// i with X* = tau^i X, when one exists.
    pub witness: Option<u32>,
}

impl DualTwistResult {
    pub fn passes(&self) -> bool {
        self.witness.is_none()
    }
}

/// X = (k-3) L_0 + 2 L_1 + L_{r-1} in sl_{r+1}: checks X* is no tau-twist of X.
pub fn dual_twist_check(r: u32, k: u32) -> Result<DualTwistResult> {
    if r < 2 || k < 3 {
        return Err(Error::InvalidArgument(format!("need r >= 2 and k >= 3, got ({r},{k})")));
    }
    let lr = LevelRank::new(r + 1, k)?;
    let mut labels = vec![0u32; r as usize];
    labels[0] = 2;
    labels[r as usize - 2] += 1;
    let x = Weight::from_dynkin(lr, &labels)?;
    let d = alcove::dual(lr, &x);
    let witness = (0..=r).find(|&i| alcove::tau_pow(lr, &x, i as i64) == d);
    Ok(DualTwistResult { r, k, x, witness })
}

impl fmt::Display for DualTwistResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness {
            None => write!(f, "(r={}, k={}) passes", self.r, self.k),
            Some(i) => write!(f, "(r={}, k={}) fails with i={i}", self.r, self.k),
        }
    }
}
