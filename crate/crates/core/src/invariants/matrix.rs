use std::fmt::Write as _;

use serde::Deserialize;

use crate::alcove::LevelRank;
use crate::error::{Error, Result};

/// Square non-negative integer matrix stored as sorted sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    rows: Vec<Vec<(u32, u64)>>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, rows: vec![Vec::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix { n, rows: (0..n).map(|i| vec![(i as u32, 1)]).collect() }
    }

    /// Matrix with a 1 at (i, perm[i]).
    pub fn permutation(perm: &[usize]) -> Self {
        IntMatrix { n: perm.len(), rows: perm.iter().map(|&j| vec![(j as u32, 1)]).collect() }
    }

    pub fn from_triplets(n: usize, entries: impl IntoIterator<Item = (usize, usize, u64)>) -> Result<Self> {
        let mut m = IntMatrix::zeros(n);
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!("entry ({i},{j}) outside a {n}x{n} matrix")));
            }
            m.add_to(i, j, v)?;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[(u32, u64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        let r = &self.rows[i];
        match r.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(p) => r[p].1,
            Err(_) => 0,
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: u64) -> Result<()> {
        if v == 0 {
            return Ok(());
        }
        let r = &mut self.rows[i];
        match r.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(p) => {
                r[p].1 = r[p].1.checked_add(v).ok_or_else(|| Error::Overflow(format!("entry ({i},{j})")))?;
            }
            Err(p) => r.insert(p, (j as u32, v)),
        }
        Ok(())
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        let r = &mut self.rows[i];
        match r.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(p) if v == 0 => {
                r.remove(p);
            }
            Ok(p) => r[p].1 = v,
            Err(_) if v == 0 => {}
            Err(p) => r.insert(p, (j as u32, v)),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j as usize, v)))
    }

    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::InvalidArgument(format!("dimension mismatch {} vs {}", self.n, other.n)));
        }
        let mut acc = vec![0u64; self.n];
        let mut touched: Vec<u32> = Vec::new();
        let mut rows = Vec::with_capacity(self.n);
        for r in &self.rows {
            for &(j, a) in r {
                for &(l, b) in &other.rows[j as usize] {
                    let slot = &mut acc[l as usize];
                    if *slot == 0 {
                        touched.push(l);
                    }
                    let prod = a.checked_mul(b).ok_or_else(|| Error::Overflow("matmul".into()))?;
                    *slot = slot.checked_add(prod).ok_or_else(|| Error::Overflow("matmul".into()))?;
                }
            }
            touched.sort_unstable();
            rows.push(touched.iter().map(|&l| (l, std::mem::take(&mut acc[l as usize]))).collect());
            touched.clear();
        }
        Ok(IntMatrix { n: self.n, rows })
    }

    pub fn scale(&self, c: u64) -> Result<IntMatrix> {
        if c == 0 {
            return Ok(IntMatrix::zeros(self.n));
        }
        let mut out = self.clone();
        for r in &mut out.rows {
            for e in r.iter_mut() {
                e.1 = e.1.checked_mul(c).ok_or_else(|| Error::Overflow("scale".into()))?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let mut out = self.clone();
        for (i, j, v) in other.triplets() {
            out.add_to(i, j, v)?;
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut rows = vec![Vec::new(); self.n];
        for (i, j, v) in self.triplets() {
            rows[j].push((i as u32, v));
        }
        IntMatrix { n: self.n, rows }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Whether every row has at most one non-zero entry equal to one, and every column too.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.n];
        for r in &self.rows {
            if r.len() != 1 || r[0].1 != 1 || seen[r[0].0 as usize] {
                return false;
            }
            seen[r[0].0 as usize] = true;
        }
        true
    }

    pub fn to_json(&self, lr: LevelRank) -> serde_json::Value {
        let entries: Vec<[u64; 3]> = self.triplets().map(|(i, j, v)| [i as u64, j as u64, v]).collect();
        serde_json::json!({ "n": lr.n, "k": lr.k, "format": "triplets", "entries": entries })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<(LevelRank, IntMatrix)> {
        #[derive(Deserialize)]
        struct Raw {
            n: u32,
            k: u32,
            format: String,
            entries: Vec<[u64; 3]>,
        }
        let raw: Raw = serde_json::from_value(v.clone())?;
        if raw.format != "triplets" {
            return Err(Error::InvalidArgument(format!("unknown matrix format {}", raw.format)));
        }
        let lr = LevelRank::new(raw.n, raw.k)?;
        let size = crate::alcove::AlcoveIndex::new(lr).len();
        let m = IntMatrix::from_triplets(size, raw.entries.iter().map(|e| (e[0] as usize, e[1] as usize, e[2])))?;
        Ok((lr, m))
    }

    /// `row,col,value` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,col,value\n");
        for (i, j, v) in self.triplets() {
            let _ = writeln!(s, "{i},{j},{v}");
        }
        s
    }
}
