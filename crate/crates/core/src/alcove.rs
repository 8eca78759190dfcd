//! Level-k alcove of sl_N: enumeration, simple-current action, duality,
//! quantum dimensions and conformal weights.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelRank {
    pub n: u32,
    pub k: u32,
}

impl LevelRank {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 2 || k < 1 {
            return Err(Error::InvalidLevelRank(format!("need N >= 2 and k >= 1, got N={n}, k={k}")));
        }
        Ok(LevelRank { n, k })
    }

    /// Number of rows a weight carries (N-1).
    pub fn rows(&self) -> usize {
        self.n as usize - 1
    }

    /// k + N, the shifted level.
    pub fn kappa(&self) -> u32 {
        self.k + self.n
    }
}

impl fmt::Display for LevelRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sl{}@{}", self.n, self.k)
    }
}

/// A Young diagram with at most N-1 rows, stored padded with zeros to
/// exactly N-1 entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<u16>);

impl Weight {
    pub fn empty(lr: LevelRank) -> Self {
        Weight(vec![0; lr.rows()])
    }

    /// Builds a padded weight from (possibly shorter) rows and checks it lies in the alcove.
    pub fn from_rows(lr: LevelRank, rows: &[u16]) -> Result<Self> {
        let mut v: Vec<u16> = rows.to_vec();
        while v.len() > lr.rows() {
            if v.last() == Some(&0) {
                v.pop();
            } else {
                return Err(Error::OutsideAlcove(format!("{rows:?} has more than {} rows", lr.rows())));
            }
        }
        v.resize(lr.rows(), 0);
        let w = Weight(v);
        w.check(lr)?;
        Ok(w)
    }

    pub fn from_dynkin(lr: LevelRank, labels: &[u32]) -> Result<Self> {
        if labels.len() != lr.rows() {
            return Err(Error::InvalidArgument(format!(
                "expected {} Dynkin labels, got {}",
                lr.rows(),
                labels.len()
            )));
        }
        let total: u32 = labels.iter().sum();
        if total > lr.k {
            return Err(Error::OutsideAlcove(format!("Dynkin labels {labels:?} sum to {total} > k={}", lr.k)));
        }
        let mut rows = vec![0u16; lr.rows()];
        let mut acc = 0u32;
        for i in (0..lr.rows()).rev() {
            acc += labels[i];
            rows[i] = acc as u16;
        }
        Ok(Weight(rows))
    }

    pub fn check(&self, lr: LevelRank) -> Result<()> {
        if self.0.len() != lr.rows() {
            return Err(Error::OutsideAlcove(format!("{:?} does not have {} rows", self.0, lr.rows())));
        }
        if self.0.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::OutsideAlcove(format!("{:?} is not weakly decreasing", self.0)));
        }
        if self.0.first().map_or(false, |&r| r as u32 > lr.k) {
            return Err(Error::OutsideAlcove(format!("{:?} has first row > k={}", self.0, lr.k)));
        }
        Ok(())
    }

    pub fn rows(&self) -> &[u16] {
        &self.0
    }

    /// Rows with trailing zeros removed.
    pub fn trimmed(&self) -> &[u16] {
        let len = self.0.iter().rposition(|&r| r != 0).map_or(0, |i| i + 1);
        &self.0[..len]
    }

    pub fn dynkin(&self) -> Vec<u32> {
        let r = &self.0;
        (0..r.len())
            .map(|i| r[i] as u32 - r.get(i + 1).copied().unwrap_or(0) as u32)
            .collect()
    }

    /// Number of boxes.
    pub fn boxes(&self) -> u32 {
        self.0.iter().map(|&r| r as u32).sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.trimmed();
        if t.is_empty() {
            return write!(f, "[]");
        }
        let parts: Vec<String> = t.iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.trimmed().serialize(s)
    }
}

/// Deserialises the trimmed form; the caller pads with [`Weight::from_rows`].
impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Weight(Vec::<u16>::deserialize(d)?))
    }
}

pub fn boxes(w: &Weight) -> u32 {
    w.boxes()
}

pub fn tau(lr: LevelRank, w: &Weight) -> Weight {
    let r = &w.0;
    let last = r[r.len() - 1];
    let mut out = Vec::with_capacity(r.len());
    out.push(lr.k as u16 - last);
    out.extend(r[..r.len() - 1].iter().map(|&x| x - last));
    Weight(out)
}

pub fn tau_pow(lr: LevelRank, w: &Weight, j: i64) -> Weight {
    let j = j.rem_euclid(lr.n as i64);
    let mut cur = w.clone();
    for _ in 0..j {
        cur = tau(lr, &cur);
    }
    cur
}

/// Conjugate weight: Dynkin labels reversed.
pub fn dual(lr: LevelRank, w: &Weight) -> Weight {
    let mut labels = w.dynkin();
    labels.reverse();
    Weight::from_dynkin(lr, &labels).expect("dual of an alcove weight stays in the alcove")
}

pub fn zn_orbit(lr: LevelRank, w: &Weight) -> Vec<Weight> {
    let mut out = vec![w.clone()];
    let mut cur = tau(lr, w);
    while &cur != w {
        out.push(cur.clone());
        cur = tau(lr, &cur);
    }
    out
}

pub fn zn_stab_order(lr: LevelRank, w: &Weight) -> u32 {
    lr.n / zn_orbit(lr, w).len() as u32
}

/// True when no non-identity element of the dihedral group generated by
/// tau and duality fixes `w`.
pub fn dn_stab_trivial(lr: LevelRank, w: &Weight) -> bool {
    let d = dual(lr, w);
    let mut cur = w.clone();
    let mut cur_d = d;
    for i in 0..lr.n {
        if i > 0 && &cur == w {
            return false;
        }
        if &cur_d == w {
            return false;
        }
        cur = tau(lr, &cur);
        cur_d = tau(lr, &cur_d);
    }
    true
}

fn qint(n: i64, kappa: u32) -> f64 {
    let x = std::f64::consts::PI / kappa as f64;
    (n as f64 * x).sin() / x.sin()
}

/// Shifted row coordinates l_i = lambda_i + N - i, i = 1..N.
pub fn shifted(lr: LevelRank, w: &Weight) -> Vec<i64> {
    let n = lr.n as usize;
    (0..n)
        .map(|i| w.0.get(i).copied().unwrap_or(0) as i64 + (n - 1 - i) as i64)
        .collect()
}

pub fn qdim(lr: LevelRank, w: &Weight) -> f64 {
    let l = shifted(lr, w);
    let n = l.len();
    let mut d = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            d *= qint(l[i] - l[j], lr.kappa()) / qint((j - i) as i64, lr.kappa());
        }
    }
    d
}

/// Casimir eigenvalue <lambda, lambda + 2 rho> as an exact rational.
pub fn casimir(lr: LevelRank, w: &Weight) -> Ratio<i64> {
    let n = lr.n as i64;
    let mut c = 0i64;
    for (i, &r) in w.0.iter().enumerate() {
        let r = r as i64;
        c += r * r + r * (n + 1 - 2 * (i as i64 + 1));
    }
    let b = w.boxes() as i64;
    Ratio::new(c * n - b * b, n)
}

pub fn conformal_weight(lr: LevelRank, w: &Weight) -> Ratio<i64> {
    casimir(lr, w) / Ratio::from_integer(2 * lr.kappa() as i64)
}

pub fn central_charge(lr: LevelRank) -> Ratio<i64> {
    let n = lr.n as i64;
    Ratio::new(lr.k as i64 * (n * n - 1), lr.kappa() as i64)
}

pub fn global_dimension(lr: LevelRank) -> f64 {
    let idx = AlcoveIndex::new(lr);
    idx.weights().iter().map(|w| qdim(lr, w).powi(2)).sum()
}

/// All alcove weights in a fixed order with precomputed tau, duality and box counts.
#[derive(Clone, Debug)]
pub struct AlcoveIndex {
    lr: LevelRank,
    weights: Vec<Weight>,
    lookup: HashMap<Weight, usize>,
    tau: Vec<usize>,
    dual: Vec<usize>,
    boxes: Vec<u32>,
}

fn enumerate(rows: usize, max: u16, prefix: &mut Vec<u16>, out: &mut Vec<Weight>) {
    if prefix.len() == rows {
        out.push(Weight(prefix.clone()));
        return;
    }
    for r in 0..=max {
        prefix.push(r);
        enumerate(rows, r, prefix, out);
        prefix.pop();
    }
}

impl AlcoveIndex {
    /// Ordered by box count, then rows in descending lexicographic order; the
    /// empty diagram comes first.
    pub fn new(lr: LevelRank) -> Self {
        let mut weights = Vec::new();
        enumerate(lr.rows(), lr.k as u16, &mut Vec::new(), &mut weights);
        weights.sort_by(|a, b| a.boxes().cmp(&b.boxes()).then_with(|| b.0.cmp(&a.0)));
        let lookup: HashMap<Weight, usize> =
            weights.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let tau_v = weights.iter().map(|w| lookup[&tau(lr, w)]).collect();
        let dual_v = weights.iter().map(|w| lookup[&dual(lr, w)]).collect();
        let boxes_v = weights.iter().map(|w| w.boxes()).collect();
        AlcoveIndex { lr, weights, lookup, tau: tau_v, dual: dual_v, boxes: boxes_v }
    }

    pub fn level_rank(&self) -> LevelRank {
        self.lr
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.lookup.get(w).copied()
    }

    /// Index of a weight given by unpadded rows.
    pub fn find(&self, rows: &[u16]) -> Result<usize> {
        let w = Weight::from_rows(self.lr, rows)?;
        self.index_of(&w).ok_or_else(|| Error::OutsideAlcove(format!("{rows:?}")))
    }

    pub fn tau(&self, i: usize) -> usize {
        self.tau[i]
    }

    pub fn tau_pow(&self, i: usize, j: i64) -> usize {
        let j = j.rem_euclid(self.lr.n as i64);
        let mut c = i;
        for _ in 0..j {
            c = self.tau[c];
        }
        c
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn boxes(&self, i: usize) -> u32 {
        self.boxes[i]
    }

    /// Smallest index in the Z_N orbit of `i`, with the power j such that tau^j(rep) = i.
    pub fn orbit_rep(&self, i: usize) -> (usize, u32) {
        let mut best = (i, 0u32);
        let mut c = i;
        for j in 1..self.lr.n {
            c = self.tau[c];
            if c == i {
                break;
            }
            // tau^j(i) = c, so i = tau^{N-j}(c)
            if c < best.0 {
                best = (c, self.lr.n - j);
            }
        }
        best
    }

    /// Orbit of `i` under the subgroup generated by tau^{N/m}.
    pub fn zm_orbit(&self, i: usize, m: u32) -> Vec<usize> {
        let step = (self.lr.n / m) as i64;
        let mut out = vec![i];
        let mut c = self.tau_pow(i, step);
        while c != i {
            out.push(c);
            c = self.tau_pow(c, step);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.lr.n,
            "k": self.lr.k,
            "weights": self.weights,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lr(n: u32, k: u32) -> LevelRank {
        LevelRank::new(n, k).unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    fn w(l: LevelRank, rows: &[u16]) -> Weight {
        Weight::from_rows(l, rows).unwrap()
    }

    #[test]
    fn alcove_sizes() {
        assert_eq!(AlcoveIndex::new(lr(2, 1)).len(), 2);
        assert_eq!(AlcoveIndex::new(lr(6, 6)).len(), 462);
        assert_eq!(AlcoveIndex::new(lr(3, 5)).len(), 21);
        for n in 2..7u32 {
            for k in 1..7u32 {
                assert_eq!(AlcoveIndex::new(lr(n, k)).len() as u64, binom((n - 1 + k) as u64, k as u64));
            }
        }
        assert!(AlcoveIndex::new(lr(4, 3)).weight(0).trimmed().is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LevelRank::new(1, 3).is_err());
        assert!(LevelRank::new(3, 0).is_err());
        assert!(Weight::from_dynkin(lr(3, 2), &[2, 1]).is_err());
        assert!(Weight::from_rows(lr(3, 2), &[3]).is_err());
        assert!(Weight::from_rows(lr(3, 2), &[1, 2]).is_err());
    }

    #[test]
    fn dynkin_round_trip() {
        let l = lr(3, 5);
        assert_eq!(Weight::from_dynkin(l, &[1, 1]).unwrap(), w(l, &[2, 1]));
        assert_eq!(w(l, &[5, 3]).dynkin(), vec![2, 3]);
    }

    #[test]
    fn tau_examples() {
        let l = lr(3, 5);
        assert_eq!(tau(l, &Weight::empty(l)), w(l, &[5]));
        assert_eq!(tau(l, &w(l, &[5])), w(l, &[5, 5]));
        assert_eq!(tau(l, &w(l, &[5, 5])), Weight::empty(l));
        assert_eq!(tau(l, &w(l, &[2, 1])), w(l, &[4, 1]));
    }

    #[test]
    fn tau_order_and_grading() {
        for (n, k) in [(3, 4), (4, 3), (5, 2), (6, 6)] {
            let l = lr(n, k);
            let idx = AlcoveIndex::new(l);
            for x in idx.weights() {
                assert_eq!(&tau_pow(l, x, n as i64), x);
                for j in 0..n {
                    let y = tau_pow(l, x, j as i64);
                    assert_eq!((y.boxes() % n), (k * j + x.boxes()) % n);
                }
            }
        }
    }

    #[test]
    fn dual_properties() {
        let l = lr(4, 3);
        assert_eq!(dual(l, &w(l, &[1])), w(l, &[1, 1, 1]));
        let idx = AlcoveIndex::new(l);
        for x in idx.weights() {
            assert_eq!(&dual(l, &dual(l, x)), x);
            let lhs = dual(l, &tau(l, x));
            let rhs = tau_pow(l, &dual(l, x), -1);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn stabilisers() {
        for (n, k) in [(4, 4), (6, 6), (3, 3)] {
            let l = lr(n, k);
            for x in AlcoveIndex::new(l).weights() {
                assert_eq!(zn_orbit(l, x).len() as u32 * zn_stab_order(l, x), n);
            }
        }
        // no weight of sl_3 level 3 with N | t has trivial dihedral stabiliser
        let l = lr(3, 3);
        assert!(!AlcoveIndex::new(l).weights().iter().any(|x| x.boxes() % 3 == 0 && dn_stab_trivial(l, x)));
    }

    #[test]
    fn qdim_values() {
        let l = lr(2, 2);
        assert!((qdim(l, &w(l, &[1])) - 2f64.sqrt()).abs() < 1e-12);
        let l = lr(5, 4);
        for x in AlcoveIndex::new(l).weights() {
            assert!(qdim(l, x) >= 1.0 - 1e-9);
            assert!((qdim(l, x) - qdim(l, &tau(l, x))).abs() < 1e-9);
        }
    }

    /// <lambda, lambda + 2 rho> through the inverse Cartan matrix of A_{N-1}:
    /// (A^{-1})_{ij} = min(i,j) (N - max(i,j)) / N.
    fn casimir_cartan(l: LevelRank, x: &Weight) -> Ratio<i64> {
        let a = x.dynkin();
        let n = l.n as i64;
        let r = a.len();
        let mut total = Ratio::from_integer(0);
        for i in 0..r {
            for j in 0..r {
                let (ii, jj) = (i as i64 + 1, j as i64 + 1);
                let g = Ratio::new(ii.min(jj) * (n - ii.max(jj)), n);
                total += g * Ratio::from_integer(a[i] as i64 * (a[j] as i64 + 2));
            }
        }
        total
    }

    #[test]
    fn conformal_weights() {
        let l = lr(2, 2);
        assert_eq!(conformal_weight(l, &w(l, &[1])), Ratio::new(3, 16));
        for (n, k) in [(3, 5), (4, 4), (5, 3), (6, 2)] {
            let l = lr(n, k);
            for x in AlcoveIndex::new(l).weights() {
                assert_eq!(casimir(l, x), casimir_cartan(l, x));
                assert_eq!(conformal_weight(l, x), conformal_weight(l, &dual(l, x)));
            }
        }
    }

    /// 1 / S_00^2 from the Weyl denominator product.
    fn global_dim_oracle(l: LevelRank) -> f64 {
        let n = l.n as i64;
        let kap = l.kappa() as f64;
        let mut s00 = 1.0 / ((n as f64).sqrt() * kap.powf((n - 1) as f64 / 2.0));
        for i in 0..n {
            for j in i + 1..n {
                s00 *= 2.0 * (std::f64::consts::PI * (j - i) as f64 / kap).sin();
            }
        }
        1.0 / (s00 * s00)
    }

    #[test]
    fn global_dimensions() {
        assert!((global_dimension(lr(2, 1)) - 2.0).abs() < 1e-12);
        assert!((global_dimension(lr(3, 1)) - 3.0).abs() < 1e-12);
        for (n, k) in [(3, 5), (4, 4), (6, 6), (5, 7)] {
            let l = lr(n, k);
            let d = global_dimension(l);
            assert!(((d - global_dim_oracle(l)) / d).abs() < 1e-9, "{l}");
        }
    }

    #[test]
    fn orbit_rep_roundtrip() {
        let idx = AlcoveIndex::new(lr(4, 4));
        for i in 0..idx.len() {
            let (rep, j) = idx.orbit_rep(i);
            assert_eq!(idx.tau_pow(rep, j as i64), i);
        }
    }

    #[test]
    fn json_trims_rows() {
        let l = lr(4, 2);
        let v = serde_json::to_value(w(l, &[2, 1])).unwrap();
        assert_eq!(v, serde_json::json!([2, 1]));
        let idx = AlcoveIndex::new(lr(2, 1)).to_json();
        assert_eq!(idx["weights"], serde_json::json!([[], [1]]));
    }
}
