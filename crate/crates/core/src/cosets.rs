//! Finite group models of braided autoequivalence groups and double coset counts.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::hash::Hash;

use num_integer::Integer;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 100_000;

pub trait FiniteGroup {
    type Elem: Clone + Eq + Hash + Ord;
    fn elements(&self) -> Vec<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn identity(&self) -> Self::Elem;

    fn order(&self) -> usize {
        self.elements().len()
    }

    /// Closure of the given elements under multiplication.
    fn subgroup(&self, gens: &[Self::Elem]) -> Vec<Self::Elem> {
        let mut seen: BTreeSet<Self::Elem> = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Number of orbits of H x H on G under (h1, h2) g = h1 g h2^{-1}.
pub fn double_coset_count<G: FiniteGroup>(g: &G, h: &[G::Elem]) -> usize {
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut count = 0;
    for x in g.elements() {
        if seen.contains(&x) {
            continue;
        }
        count += 1;
        for a in h {
            let ax = g.mul(a, &x);
            for b in h {
                seen.insert(g.mul(&ax, b));
            }
        }
    }
    count
}

pub type Perm = Vec<u8>;

/// A permutation group on {1..n}, enumerated by closure.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub degree: usize,
    elements: Vec<Perm>,
}

/// Permutation of {1..n} from cycles written 1-based, as in (1 2 3).
pub fn perm_from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
    let mut p: Perm = (0..n as u8).collect();
    for c in cycles {
        for (i, &a) in c.iter().enumerate() {
            let b = c[(i + 1) % c.len()];
            if a == 0 || a > n || b == 0 || b > n {
                return Err(Error::InvalidArgument(format!("point outside 1..{n}")));
            }
            p[a - 1] = (b - 1) as u8;
        }
    }
    Ok(p)
}

fn compose(a: &Perm, b: &Perm) -> Perm {
    // apply a, then b
    a.iter().map(|&x| b[x as usize]).collect()
}

impl PermGroup {
    pub fn generate(degree: usize, gens: &[Perm]) -> Result<Self> {
        if gens.iter().any(|g| g.len() != degree) {
            return Err(Error::InvalidArgument("generator of the wrong degree".into()));
        }
        let id: Perm = (0..degree as u8).collect();
        let mut seen = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = compose(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > MAX_ORDER {
                        return Err(Error::InvalidArgument(format!("group order exceeds {MAX_ORDER}")));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(PermGroup { degree, elements: seen.into_iter().collect() })
    }

    pub fn from_cycles(degree: usize, gens: &[&[&[usize]]]) -> Result<Self> {
        let gens = gens.iter().map(|c| perm_from_cycles(degree, c)).collect::<Result<Vec<_>>>()?;
        Self::generate(degree, &gens)
    }
}

impl FiniteGroup for PermGroup {
    type Elem = Perm;
    fn elements(&self) -> Vec<Perm> {
        self.elements.clone()
    }
    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        compose(a, b)
    }
    fn identity(&self) -> Perm {
        (0..self.degree as u8).collect()
    }
}

/// D_m x Z_2^j as triples (r mod m, f, b), or Z_m x Z_2^j when `reflections` is false.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DihedralModel {
    pub m: u64,
    pub j: u32,
    pub reflections: bool,
}

impl DihedralModel {
    /// The subgroup generated by the rotation r^u.
    pub fn rotations(&self, u: u64) -> Vec<(u64, bool, u32)> {
        self.subgroup(&[(u % self.m, false, 0)])
    }
}

impl FiniteGroup for DihedralModel {
    type Elem = (u64, bool, u32);
    fn elements(&self) -> Vec<Self::Elem> {
        let flips: &[bool] = if self.reflections { &[false, true] } else { &[false] };
        let mut out = Vec::new();
        for r in 0..self.m {
            for &f in flips {
                for b in 0..1u32 << self.j {
                    out.push((r, f, b));
                }
            }
        }
        out
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r2 = if a.1 { self.m - b.0 } else { b.0 };
        ((a.0 + r2) % self.m, a.1 ^ b.1, a.2 ^ b.2)
    }
    fn identity(&self) -> Self::Elem {
        (0, false, 0)
    }
}

/// Pairs (N, k) where the pointed local categories are not covered by the generic model.
pub const EXCEPTIONAL_POINTED_PAIRS: [(u64, u64); 7] = [(2, 16), (3, 9), (4, 8), (5, 5), (8, 4), (9, 3), (16, 2)];

/// The triple (N, k, m) is exceptional when (N, k) is listed and m is the largest eligible m.
pub fn is_exceptional_triple(n: u64, k: u64, m: u64) -> Result<bool> {
    if !EXCEPTIONAL_POINTED_PAIRS.contains(&(n, k)) {
        return Ok(false);
    }
    Ok(arith::eligible_m(n, k)?.last() == Some(&m))
}

/// The explicit model of EqBr(C_{A_m}^0) and the rotation subgroup Z_{m'} as the image of Aut(A_m).
pub fn pointed_model(n: u64, k: u64, m: u64) -> Result<DihedralModel> {
    if is_exceptional_triple(n, k, m)? {
        return Err(Error::InvalidArgument(format!("({n},{k},{m}) is exceptional")));
    }
    let (p, t) = arith::p_t_exponents(n, k, m)?;
    Ok(DihedralModel { m: m.gcd(&k), j: p + t, reflections: n > 2 && k > 2 })
}

pub fn pointed_coset_formula(n: u64, k: u64, m: u64) -> Result<u64> {
    let (p, t) = arith::p_t_exponents(n, k, m)?;
    Ok(if n == 2 && k == 2 {
        1
    } else if n < 3 || k < 3 {
        1 << (p + t)
    } else {
        1 << (1 + p + t)
    })
}

/// Double cosets of the model with respect to the rotations. The degenerate
/// N = k = 2 case has both the group and the image trivial.
pub fn pointed_coset_count(n: u64, k: u64, m: u64) -> Result<u64> {
    if n == 2 && k == 2 {
        arith::p_t_exponents(n, k, m)?;
        return Ok(1);
    }
    let g = pointed_model(n, k, m)?;
    Ok(double_coset_count(&g, &g.rotations(1)) as u64)
}

/// Exceptional pointed cases, computed on explicit permutation groups.
pub fn exceptional_coset_count(n: u64, k: u64, m: u64) -> Result<u64> {
    let (g, h) = match (n, k, m) {
        (3, 9, 3) => (PermGroup::from_cycles(4, &[&[&[1, 2]], &[&[1, 2, 3, 4]]])?, perm_from_cycles(4, &[&[2, 3, 4]])?),
        (4, 8, 4) => (PermGroup::from_cycles(4, &[&[&[1, 2]], &[&[1, 2, 3, 4]]])?, perm_from_cycles(4, &[&[1, 2, 3, 4]])?),
        (5, 5, 5) => (PermGroup::from_cycles(5, &[&[&[1, 2, 3]], &[&[3, 4, 5]]])?, perm_from_cycles(5, &[&[1, 2, 3, 4, 5]])?),
        _ => return Err(Error::InvalidArgument(format!("no model for ({n},{k},{m})"))),
    };
    let sub = g.subgroup(&[h]);
    Ok(double_coset_count(&g, &sub) as u64)
}

/// EqBr of a non-pointed local category, given by its printed name.
fn named_group(name: &str) -> Result<PermGroup> {
    match name {
        "{e}" => PermGroup::generate(1, &[]),
        "Z2" => PermGroup::from_cycles(2, &[&[&[1, 2]]]),
        "Z2^2" => PermGroup::from_cycles(4, &[&[&[1, 2]], &[&[3, 4]]]),
        "S3" => PermGroup::from_cycles(3, &[&[&[1, 2]], &[&[1, 2, 3]]]),
        _ => Err(Error::InvalidArgument(format!("unknown group {name}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetRow {
    pub algebra: String,
    pub eqbr: String,
    pub count: u64,
    /// Local modules equivalent to those of another algebra in the same table.
    pub dagger: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    pub n: u64,
    pub k: u64,
    pub rows: Vec<CosetRow>,
    /// Cross-algebra module categories from equivalent local categories.
    pub dagger_count: u64,
    pub total: u64,
}

struct NonPointed {
    algebra: &'static str,
    eqbr: &'static str,
    dagger: bool,
}

const fn np(algebra: &'static str, eqbr: &'static str) -> NonPointed {
    NonPointed { algebra, eqbr, dagger: false }
}

const fn npd(algebra: &'static str, eqbr: &'static str) -> NonPointed {
    NonPointed { algebra, eqbr, dagger: true }
}

/// Non-pointed algebras per exceptional pair. Aut(A) maps trivially in every case,
/// so each contributes |EqBr| double cosets.
fn non_pointed(n: u64, k: u64) -> Option<&'static [NonPointed]> {
    const T: &[((u64, u64), &[NonPointed])] = &[
        ((3, 5), &[np("A_sl6", "Z2")]),
        ((3, 9), &[np("A_e6", "Z2")]),
        ((3, 21), &[np("A_e7", "{e}")]),
        ((4, 4), &[np("A_so15", "{e}")]),
        ((4, 6), &[np("A_sl10", "Z2")]),
        ((4, 8), &[np("A_so20", "Z2")]),
        ((5, 3), &[np("A_sl10", "Z2")]),
        ((5, 5), &[np("A_so24", "S3")]),
        ((5, 7), &[np("A_sl15", "Z2^2")]),
        ((6, 4), &[np("A_sl15", "Z2^2")]),
        ((6, 6), &[npd("A_so35", "{e}"), np("A_sp20", "Z2"), npd("A_sp20_ext", "{e}"), np("A_sp20_tr", "Z2")]),
        ((6, 8), &[np("A_sl21", "Z2^2")]),
        ((7, 5), &[np("A_sl21", "Z2^2")]),
        ((7, 7), &[np("A_so48", "Z2"), npd("A_so48_ext", "{e}"), npd("A_schellekens", "{e}")]),
        ((7, 9), &[np("A_sl28", "Z2^2")]),
    ];
    T.iter().find(|e| e.0 == (n, k)).map(|e| e.1)
}

pub fn exceptional_pairs() -> Vec<(u64, u64)> {
    vec![
        (3, 5),
        (3, 9),
        (3, 21),
        (4, 4),
        (4, 6),
        (4, 8),
        (5, 3),
        (5, 5),
        (5, 7),
        (6, 4),
        (6, 6),
        (6, 8),
        (7, 5),
        (7, 7),
        (7, 9),
    ]
}

fn describe_model(g: &DihedralModel) -> String {
    let base = match (g.reflections, g.m) {
        (true, 1) => "Z2".to_string(),
        (true, 2) => "Z2^2".to_string(),
        (true, m) => format!("D{m}"),
        (false, 1) => String::new(),
        (false, m) => format!("Z{m}"),
    };
    let tail = match g.j {
        0 => String::new(),
        1 => "Z2".into(),
        j => format!("Z2^{j}"),
    };
    match (base.is_empty(), tail.is_empty()) {
        (true, true) => "{e}".into(),
        (true, false) => tail,
        (false, true) => base,
        (false, false) => format!("{base} x {tail}"),
    }
}

pub fn algebra_coset_table(n: u64, k: u64) -> Result<CosetTable> {
    let extra = non_pointed(n, k).ok_or_else(|| Error::InvalidArgument(format!("({n},{k}) is not an exceptional pair")))?;
    coset_table(n, k, extra)
}

/// Rows for the pointed algebras only; the full table when every algebra is pointed.
pub fn pointed_coset_table(n: u64, k: u64) -> Result<CosetTable> {
    coset_table(n, k, &[])
}

fn coset_table(n: u64, k: u64, extra: &[NonPointed]) -> Result<CosetTable> {
    let mut rows = Vec::new();
    for m in arith::eligible_m(n, k)? {
        let algebra = if m == 1 { "1".to_string() } else { format!("A_{m}") };
        let (eqbr, count) = if is_exceptional_triple(n, k, m)? {
            let g = if n == 5 { "Alt5" } else { "S4" };
            (g.to_string(), exceptional_coset_count(n, k, m)?)
        } else {
            (describe_model(&pointed_model(n, k, m)?), pointed_coset_count(n, k, m)?)
        };
        rows.push(CosetRow { algebra, eqbr, count, dagger: false });
    }
    for e in extra {
        let g = named_group(e.eqbr)?;
        let trivial = [g.identity()];
        let count = double_coset_count(&g, &trivial) as u64;
        rows.push(CosetRow { algebra: e.algebra.into(), eqbr: e.eqbr.into(), count, dagger: e.dagger });
    }
    // each ordered pair of distinct dagger algebras gives one more module category
    let d = rows.iter().filter(|r| r.dagger).count() as u64;
    let dagger_count = d * d.saturating_sub(1);
    let total = rows.iter().map(|r| r.count).sum::<u64>() + dagger_count;
    Ok(CosetTable { n, k, rows, dagger_count, total })
}
