//! Generic modular invariants Z(d, +/-), the modular data of C(sl_N, k) and
//! exact linear algebra on invariant matrices.

pub mod matrix;
pub mod modular;
pub mod rank;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::alcove::AlcoveIndex;
use crate::arith::{self, Sign};
use crate::error::{Error, Result};

pub use matrix::IntMatrix;
pub use modular::{is_physical, is_physical_many, ModularData, PhysicalReport, Tolerances};
pub use rank::{decompose, rational_rank, RankResult};

/// Label of a generic invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenericLabel {
    pub d: u64,
    pub sign: Sign,
}

impl fmt::Display for GenericLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z({},{})", self.d, self.sign)
    }
}

fn check_d(idx: &AlcoveIndex, d: u64) -> Result<()> {
    let n = idx.level_rank().n as u64;
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidArgument(format!("d={d} does not divide N={n}")));
    }
    Ok(())
}

/// Z(d,+)_{lambda,nu} = sum over i = 1..d of delta^d(t(lambda) + N i khat / 2d) [nu = tau^{iN/d} lambda],
/// where delta^d(x) is 1 when x is an integer divisible by d.
pub fn z_plus(idx: &AlcoveIndex, d: u64) -> Result<IntMatrix> {
    check_d(idx, d)?;
    let lr = idx.level_rank();
    let n = lr.n as u64;
    let kh = arith::khat(n, lr.k as u64);
    let mut z = IntMatrix::zeros(idx.len());
    for lam in 0..idx.len() {
        let t = idx.boxes(lam) as u64;
        for i in 1..=d {
            // (2 d t + N i khat) / (2 d) must be an integer divisible by d
            let num = 2 * d * t + n * i * kh;
            if num % (2 * d) != 0 || (num / (2 * d)) % d != 0 {
                continue;
            }
            let nu = idx.tau_pow(lam, (i * n / d) as i64);
            z.add_to(lam, nu, 1)?;
        }
    }
    Ok(z)
}

/// Z(d,+) from the modular-scaling description: the row of lambda is
/// |Stab_{Z_m}(lambda)| on the Z_m-orbit of tau^e(lambda), e = sum_p h_p t ell_p N_p,
/// whenever m = m_d divides t(lambda).
pub fn z_plus_closed(idx: &AlcoveIndex, d: u64) -> Result<IntMatrix> {
    check_d(idx, d)?;
    let lr = idx.level_rank();
    let (n, k) = (lr.n as u64, lr.k as u64);
    let m = arith::m_of_d(n, k, d)?;
    let signs = arith::sign_vector_of_d(n, k, d)?;
    let params = signs
        .iter()
        .map(|(&p, &s)| arith::modsc_params(n, k, p, s))
        .collect::<Result<Vec<_>>>()?;
    let mut z = IntMatrix::zeros(idx.len());
    for lam in 0..idx.len() {
        let t = idx.boxes(lam) as u64;
        if t % m != 0 {
            continue;
        }
        let mut e = Ratio::from_integer(0i64);
        for q in &params {
            e += Ratio::from_integer(q.h_p * t as i64 * q.ell_p as i64) * q.n_p;
        }
        if !e.is_integer() {
            return Err(Error::NonIntegral(format!("tau exponent {e} for {} at d={d}", idx.weight(lam))));
        }
        let start = idx.tau_pow(lam, e.to_integer());
        let orbit = idx.zm_orbit(start, m as u32);
        let stab = m / orbit.len() as u64;
        for nu in orbit {
            z.set(lam, nu, stab);
        }
    }
    Ok(z)
}

/// Charge conjugation: the permutation matrix of duality.
pub fn z_charge(idx: &AlcoveIndex) -> IntMatrix {
    let perm: Vec<usize> = (0..idx.len()).map(|i| idx.dual(i)).collect();
    IntMatrix::permutation(&perm)
}

pub fn z_minus(idx: &AlcoveIndex, d: u64) -> Result<IntMatrix> {
    z_charge(idx).matmul(&z_plus(idx, d)?)
}

pub fn generic_invariant(idx: &AlcoveIndex, label: GenericLabel) -> Result<IntMatrix> {
    match label.sign {
        Sign::Plus => z_plus(idx, label.d),
        Sign::Minus => z_minus(idx, label.d),
    }
}

/// All labels (d, sign) with d admissible, ordered by sign then d.
/// Below N, k >= 3 charge conjugation is trivial on module categories and only sign + occurs;
/// at N = k = 2 only d = 1 remains.
pub fn generic_labels(n: u64, k: u64) -> Result<Vec<GenericLabel>> {
    let mut ds = arith::eligible_d(n, k)?;
    if n == 2 && k == 2 {
        ds.truncate(1);
    }
    let signs: &[Sign] = if n >= 3 && k >= 3 { &[Sign::Plus, Sign::Minus] } else { &[Sign::Plus] };
    let mut out = Vec::new();
    for &sign in signs {
        out.extend(ds.iter().map(|&d| GenericLabel { d, sign }));
    }
    Ok(out)
}

/// Indices in the support of row `i` (used to check orbit-compatibility).
pub fn row_support(z: &IntMatrix, i: usize) -> BTreeSet<usize> {
    z.row(i).iter().map(|e| e.0 as usize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alcove::LevelRank;

    fn idx(n: u32, k: u32) -> AlcoveIndex {
        AlcoveIndex::new(LevelRank::new(n, k).unwrap())
    }

    #[test]
    fn d_one_is_identity() {
        let ix = idx(4, 3);
        assert_eq!(z_plus(&ix, 1).unwrap(), IntMatrix::identity(ix.len()));
    }

    #[test]
    fn sl6_level6_d6_vacuum_row() {
        let ix = idx(6, 6);
        let z = z_plus(&ix, 6).unwrap();
        let expect: BTreeSet<usize> =
            [vec![], vec![6, 6], vec![6, 6, 6, 6]].iter().map(|r| ix.find(r).unwrap()).collect();
        assert_eq!(row_support(&z, 0), expect);
        assert!(z.row(0).iter().all(|e| e.1 == 1));
    }

    #[test]
    fn sl6_level6_products() {
        let ix = idx(6, 6);
        let z3 = z_plus(&ix, 3).unwrap();
        let z2 = z_plus(&ix, 2).unwrap();
        assert_eq!(z3.matmul(&z3).unwrap(), z3.scale(3).unwrap());
        assert_eq!(z2.matmul(&z2).unwrap(), IntMatrix::identity(ix.len()));
    }

    #[test]
    fn closed_form_agrees_small() {
        for n in 2..=6 {
            for k in 1..=6 {
                let ix = idx(n, k);
                for d in arith::eligible_d(n as u64, k as u64).unwrap() {
                    assert_eq!(z_plus(&ix, d).unwrap(), z_plus_closed(&ix, d).unwrap(), "N={n} k={k} d={d}");
                }
            }
        }
    }

    #[test]
    fn charge_is_an_involution() {
        let ix = idx(5, 3);
        let c = z_charge(&ix);
        assert_eq!(c.matmul(&c).unwrap(), IntMatrix::identity(ix.len()));
        assert_eq!(z_minus(&ix, 1).unwrap(), c);
    }
}
