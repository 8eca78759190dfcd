//! Exact rank, integer dependencies and decomposition of invariant matrices.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub rank: usize,
    /// Basis of the integer relations sum_i c_i Z_i = 0, each with coprime entries.
    pub dependencies: Vec<Vec<i64>>,
}

fn overflow() -> Error {
    Error::Overflow("fraction-free elimination".into())
}

/// Flattens the matrices onto the union of their supports.
fn flatten(mats: &[&IntMatrix]) -> Result<Vec<Vec<i128>>> {
    if let Some(first) = mats.first() {
        if mats.iter().any(|m| m.dim() != first.dim()) {
            return Err(Error::InvalidArgument("matrices of different sizes".into()));
        }
    }
    let mut cols: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for m in mats {
        for (i, j, _) in m.triplets() {
            let next = cols.len();
            cols.entry((i, j)).or_insert(next);
        }
    }
    Ok(mats
        .iter()
        .map(|m| {
            let mut v = vec![0i128; cols.len()];
            for (i, j, x) in m.triplets() {
                v[cols[&(i, j)]] = x as i128;
            }
            v
        })
        .collect())
}

fn normalise(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

/// Rows are [values | augmentation]; `width` counts the value columns.
struct Echelon {
    width: usize,
    pivots: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    fn reduce(&self, row: &mut [i128]) -> Result<()> {
        for (c, p) in &self.pivots {
            let a = row[*c];
            if a == 0 {
                continue;
            }
            let b = p[*c];
            let g = a.gcd(&b);
            let (fa, fb) = (b / g, a / g);
            for (x, &y) in row.iter_mut().zip(p.iter()) {
                let l = x.checked_mul(fa).ok_or_else(overflow)?;
                let r = y.checked_mul(fb).ok_or_else(overflow)?;
                *x = l.checked_sub(r).ok_or_else(overflow)?;
            }
            normalise(row);
        }
        Ok(())
    }

    /// Reduces and inserts; returns the leftover augmentation when the value part vanishes.
    fn push(&mut self, mut row: Vec<i128>) -> Result<Option<Vec<i128>>> {
        self.reduce(&mut row)?;
        match row[..self.width].iter().position(|&x| x != 0) {
            Some(c) => {
                self.pivots.push((c, row));
                Ok(None)
            }
            None => Ok(Some(row[self.width..].to_vec())),
        }
    }
}

fn augmented(values: Vec<Vec<i128>>) -> (usize, Vec<Vec<i128>>) {
    let count = values.len();
    let width = values.first().map_or(0, |v| v.len());
    let rows = values
        .into_iter()
        .enumerate()
        .map(|(i, mut v)| {
            v.extend((0..count).map(|j| i128::from(i == j)));
            v
        })
        .collect();
    (width, rows)
}

fn to_i64(v: &[i128]) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    let sign = if v.iter().find(|&&x| x != 0).map_or(false, |&x| x < 0) { -1 } else { 1 };
    v.iter()
        .map(|&x| i64::try_from(sign * x / g.max(1)).map_err(|_| overflow()))
        .collect()
}

/// Rank over Q of the matrices viewed as vectors, with an integer basis of their relations.
pub fn rational_rank(mats: &[IntMatrix]) -> Result<RankResult> {
    let refs: Vec<&IntMatrix> = mats.iter().collect();
    let (width, rows) = augmented(flatten(&refs)?);
    let mut ech = Echelon { width, pivots: Vec::new() };
    let mut dependencies = Vec::new();
    for row in rows {
        if let Some(rel) = ech.push(row)? {
            dependencies.push(to_i64(&rel)?);
        }
    }
    Ok(RankResult { rank: ech.pivots.len(), dependencies })
}

/// Unique rational coefficients c with target = sum_i c_i basis_i.
pub fn coefficients(target: &IntMatrix, basis: &[IntMatrix]) -> Result<Vec<Ratio<i128>>> {
    let mut refs: Vec<&IntMatrix> = basis.iter().collect();
    refs.push(target);
    let (width, mut rows) = augmented(flatten(&refs)?);
    let last = rows.pop().expect("target row");
    let mut ech = Echelon { width, pivots: Vec::new() };
    for row in rows {
        if ech.push(row)?.is_some() {
            return Err(Error::InvalidArgument("basis matrices are linearly dependent".into()));
        }
    }
    let rel = ech
        .push(last)?
        .ok_or_else(|| Error::NoSolution("target is not in the span of the basis".into()))?;
    let ct = rel[basis.len()];
    Ok(rel[..basis.len()].iter().map(|&c| Ratio::new(-c, ct)).collect())
}

/// Decomposition into the basis with non-negative integer coefficients.
pub fn decompose(target: &IntMatrix, basis: &[IntMatrix]) -> Result<Vec<u64>> {
    coefficients(target, basis)?
        .into_iter()
        .map(|c| {
            if !c.is_integer() {
                Err(Error::NonIntegral(format!("coefficient {c}")))
            } else if c < Ratio::from_integer(0) {
                Err(Error::NoSolution(format!("negative coefficient {c}")))
            } else {
                Ok(c.to_integer() as u64)
            }
        })
        .collect()
}
