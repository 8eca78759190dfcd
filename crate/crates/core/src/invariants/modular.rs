//! Kac-Peterson S-matrix, T-matrix and the physicality test for invariants.

use std::f64::consts::PI;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::alcove::{self, AlcoveIndex, LevelRank};
use crate::error::{Error, Result};
use crate::invariants::IntMatrix;

/// Alcoves up to this size keep a dense S-matrix; larger ones stream rows.
pub const DENSE_LIMIT: usize = 2000;
const MAX_RANK: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub s_commute: f64,
    pub unitarity: f64,
    pub dim: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { s_commute: 1e-6, unitarity: 1e-8, dim: 1e-6 }
    }
}

pub struct ModularData {
    lr: LevelRank,
    index: AlcoveIndex,
    h: Vec<Ratio<i64>>,
    c: Ratio<i64>,
    shifted: Vec<Vec<i64>>,
    lsum: Vec<i64>,
    omega: Vec<Complex64>,
    prefactor: Vec<Complex64>,
    roots_n: Vec<Complex64>,
    col_rep: Vec<bool>,
    scale: Complex64,
    dense: Option<Vec<Complex64>>,
}

fn det(a: &mut [Complex64], n: usize) -> Complex64 {
    let mut d = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm_sqr();
        for r in col + 1..n {
            let v = a[r * n + col].norm_sqr();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            d = -d;
        }
        let p = a[col * n + col];
        d *= p;
        let inv = p.inv();
        for r in col + 1..n {
            let f = a[r * n + col] * inv;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for c in col + 1..n {
                let sub = f * a[col * n + c];
                a[r * n + c] -= sub;
            }
        }
    }
    d
}

impl ModularData {
    pub fn new(lr: LevelRank) -> Result<Self> {
        Self::build(lr, None)
    }

    fn build(lr: LevelRank, dense: Option<Vec<Complex64>>) -> Result<Self> {
        if lr.n as usize > MAX_RANK {
            return Err(Error::InvalidArgument(format!("S-matrix supports N <= {MAX_RANK}")));
        }
        let index = AlcoveIndex::new(lr);
        let kap = lr.kappa() as usize;
        let n = lr.n as usize;
        let h = index.weights().iter().map(|w| alcove::conformal_weight(lr, w)).collect();
        let shifted: Vec<Vec<i64>> = index.weights().iter().map(|w| alcove::shifted(lr, w)).collect();
        let lsum = shifted.iter().map(|l| l.iter().sum()).collect();
        let omega = (0..kap).map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / kap as f64)).collect();
        let prefactor = (0..n * kap)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / (n * kap) as f64))
            .collect();
        let mut md = ModularData {
            lr,
            index,
            h,
            c: alcove::central_charge(lr),
            shifted,
            lsum,
            omega,
            prefactor,
            roots_n: (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect(),
            col_rep: Vec::new(),
            scale: Complex64::new(1.0, 0.0),
            dense: None,
        };
        md.col_rep = (0..md.len()).map(|i| md.index.orbit_rep(i).0 == i).collect();
        let row0 = md.raw_row(0);
        let norm = row0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let r00 = row0[0];
        if r00.norm() < 1e-300 {
            return Err(Error::Numerical("S_00 vanishes".into()));
        }
        md.scale = r00.conj() / (r00.norm() * norm);
        match dense {
            Some(d) => md.dense = Some(d),
            None if md.len() <= DENSE_LIMIT => md.dense = Some(md.compute_dense()),
            None => {}
        }
        md.self_check(Tolerances::default().unitarity)?;
        Ok(md)
    }

    pub fn level_rank(&self) -> LevelRank {
        self.lr
    }

    pub fn index(&self) -> &AlcoveIndex {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    pub fn conformal_weight(&self, i: usize) -> Ratio<i64> {
        self.h[i]
    }

    pub fn central_charge(&self) -> Ratio<i64> {
        self.c
    }

    /// T_ii = exp(2 pi i (h_i - c/24)).
    pub fn t(&self, i: usize) -> Complex64 {
        let x = self.h[i] - self.c / Ratio::from_integer(24);
        Complex64::from_polar(1.0, 2.0 * PI * (*x.numer() as f64 / *x.denom() as f64))
    }

    /// Unnormalised alternant e^{2 pi i L M / N kappa} det[omega^{l_a m_b}].
    fn raw_entry(&self, a: usize, b: usize, buf: &mut [Complex64]) -> Complex64 {
        let n = self.lr.n as usize;
        let kap = self.lr.kappa() as i64;
        let (la, mb) = (&self.shifted[a], &self.shifted[b]);
        for x in 0..n {
            for y in 0..n {
                buf[x * n + y] = self.omega[((la[x] * mb[y]) % kap) as usize];
            }
        }
        let pre = (self.lsum[a] * self.lsum[b]).rem_euclid(n as i64 * kap) as usize;
        self.prefactor[pre] * det(&mut buf[..n * n], n)
    }

    fn raw_row(&self, a: usize) -> Vec<Complex64> {
        let mut buf = [Complex64::new(0.0, 0.0); MAX_RANK * MAX_RANK];
        (0..self.len()).map(|b| self.raw_entry(a, b, &mut buf)).collect()
    }

    /// Entry computed directly from the determinant.
    pub fn entry_direct(&self, a: usize, b: usize) -> Complex64 {
        let mut buf = [Complex64::new(0.0, 0.0); MAX_RANK * MAX_RANK];
        self.scale * self.raw_entry(a, b, &mut buf)
    }

    /// Row of a Z_N orbit representative, normalised. One determinant per
    /// column orbit; S_{lambda, tau mu} = e^{2 pi i t(lambda)/N} S_{lambda, mu} fills the rest.
    fn rep_row(&self, rep: usize) -> Vec<Complex64> {
        let size = self.len();
        let n = self.lr.n as usize;
        let t = self.index.boxes(rep) as usize;
        let mut buf = [Complex64::new(0.0, 0.0); MAX_RANK * MAX_RANK];
        let mut out = vec![Complex64::new(0.0, 0.0); size];
        for mu in 0..size {
            if !self.col_rep[mu] {
                continue;
            }
            let v = self.scale * self.raw_entry(rep, mu, &mut buf);
            let mut c = mu;
            for j in 0..n {
                out[c] = self.roots_n[(j * t) % n] * v;
                c = self.index.tau(c);
            }
        }
        out
    }

    /// Row of tau^j(rep) from the row of rep: S_{tau lambda, mu} = e^{2 pi i t(mu)/N} S_{lambda, mu}.
    fn shift_row(&self, row: &[Complex64], j: u32) -> Vec<Complex64> {
        let n = self.lr.n as u64;
        if j == 0 {
            return row.to_vec();
        }
        row.iter()
            .enumerate()
            .map(|(mu, &z)| z * self.roots_n[((j as u64 * self.index.boxes(mu) as u64) % n) as usize])
            .collect()
    }

    fn compute_dense(&self) -> Vec<Complex64> {
        let size = self.len();
        let mut out = vec![Complex64::new(0.0, 0.0); size * size];
        let mut done = vec![false; size];
        for i in 0..size {
            if done[i] {
                continue;
            }
            let (rep, _) = self.index.orbit_rep(i);
            let base = self.rep_row(rep);
            let mut c = rep;
            for j in 0..self.lr.n {
                if !done[c] {
                    let r = self.shift_row(&base, j);
                    out[c * size..(c + 1) * size].copy_from_slice(&r);
                    done[c] = true;
                }
                c = self.index.tau(c);
            }
        }
        out
    }

    pub fn row(&self, i: usize) -> Vec<Complex64> {
        if let Some(d) = &self.dense {
            let size = self.len();
            return d[i * size..(i + 1) * size].to_vec();
        }
        let (rep, j) = self.index.orbit_rep(i);
        self.shift_row(&self.rep_row(rep), j)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match &self.dense {
            Some(d) => d[i * self.len() + j],
            None => self.entry_direct(i, j),
        }
    }

    /// Sampled unitarity, S^2 = C and orbit-relation checks; exhaustive for small alcoves.
    fn self_check(&self, tol: f64) -> Result<()> {
        let size = self.len();
        let sample: Vec<usize> = if size <= 120 {
            (0..size).collect()
        } else {
            let step = size / 24;
            (0..24).map(|i| i * step).chain([size - 1]).collect()
        };
        let rows: Vec<Vec<Complex64>> = sample.iter().map(|&i| self.row(i)).collect();
        for (x, &a) in sample.iter().enumerate() {
            for (y, &b) in sample.iter().enumerate() {
                let mut ip = Complex64::new(0.0, 0.0);
                let mut sq = Complex64::new(0.0, 0.0);
                for mu in 0..size {
                    ip += rows[x][mu] * rows[y][mu].conj();
                    sq += rows[x][mu] * rows[y][mu];
                }
                let want_ip = if a == b { 1.0 } else { 0.0 };
                let want_sq = if self.index.dual(a) == b { 1.0 } else { 0.0 };
                if (ip - want_ip).norm() > tol || (sq - want_sq).norm() > tol {
                    return Err(Error::Numerical(format!(
                        "S fails unitarity or S^2 = C at ({a},{b}) for {}",
                        self.lr
                    )));
                }
            }
            for &mu in sample.iter().take(6) {
                if (rows[x][mu] - self.entry_direct(a, mu)).norm() > tol {
                    return Err(Error::Numerical(format!("orbit relation fails at ({a},{mu})")));
                }
            }
        }
        Ok(())
    }

    pub fn cache_path(dir: &Path, lr: LevelRank) -> PathBuf {
        dir.join(format!("smatrix_n{}_k{}.bin", lr.n, lr.k))
    }

    /// Loads the dense S-matrix from `dir` when present, computing and storing it otherwise.
    /// Alcoves above [`DENSE_LIMIT`] are never cached.
    pub fn load_or_compute(lr: LevelRank, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir else { return Self::new(lr) };
        let path = Self::cache_path(dir, lr);
        if path.exists() {
            if let Ok(d) = read_cache(&path, lr) {
                return Self::build(lr, Some(d));
            }
        }
        let md = Self::new(lr)?;
        if let Some(d) = &md.dense {
            fs::create_dir_all(dir)?;
            write_cache(&path, lr, d)?;
        }
        Ok(md)
    }

    pub fn s_to_json(&self) -> Result<serde_json::Value> {
        let size = self.len();
        if size > DENSE_LIMIT {
            return Err(Error::InvalidArgument(format!("alcove of size {size} is too large to export")));
        }
        let rows: Vec<Vec<[f64; 2]>> =
            (0..size).map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect()).collect();
        let h: Vec<String> = self.h.iter().map(|x| x.to_string()).collect();
        Ok(serde_json::json!({
            "n": self.lr.n,
            "k": self.lr.k,
            "central_charge": self.c.to_string(),
            "conformal_weights": h,
            "s": rows,
        }))
    }
}

const MAGIC: &[u8; 8] = b"FMSMAT01";

fn write_cache(path: &Path, lr: LevelRank, d: &[Complex64]) -> Result<()> {
    let mut buf = Vec::with_capacity(16 + d.len() * 16);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&lr.n.to_le_bytes());
    buf.extend_from_slice(&lr.k.to_le_bytes());
    for z in d {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    let tmp = path.with_extension("tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(tmp, path)?;
    Ok(())
}

fn read_cache(path: &Path, lr: LevelRank) -> Result<Vec<Complex64>> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    let bad = || Error::InvalidArgument(format!("corrupt cache file {}", path.display()));
    if buf.len() < 16 || &buf[..8] != MAGIC {
        return Err(bad());
    }
    let n = u32::from_le_bytes(buf[8..12].try_into().unwrap());
    let k = u32::from_le_bytes(buf[12..16].try_into().unwrap());
    if n != lr.n || k != lr.k || (buf.len() - 16) % 16 != 0 {
        return Err(bad());
    }
    Ok(buf[16..]
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhysicalReport {
    pub vacuum: bool,
    pub nonnegative: bool,
    pub commutator: f64,
    pub twist: bool,
    pub physical: bool,
}

/// Vacuum normalisation, non-negativity, [Z, S] = 0 within tolerance and exact twist compatibility.
pub fn is_physical(z: &IntMatrix, md: &ModularData, tol: &Tolerances) -> Result<PhysicalReport> {
    Ok(is_physical_many(std::slice::from_ref(z), md, tol)?.remove(0))
}

/// As [`is_physical`] for several invariants sharing one pass over S.
pub fn is_physical_many(zs: &[IntMatrix], md: &ModularData, tol: &Tolerances) -> Result<Vec<PhysicalReport>> {
    let size = md.len();
    for z in zs {
        if z.dim() != size {
            return Err(Error::InvalidArgument(format!("matrix of size {} for alcove of size {size}", z.dim())));
        }
    }
    let comm = if md.is_dense() { commutators_dense(zs, md) } else { commutators_streamed(zs, md)? };
    Ok(zs
        .iter()
        .zip(comm)
        .map(|(z, c)| {
            let vacuum = z.get(0, 0) == 1;
            let twist = z
                .triplets()
                .all(|(i, j, _)| (md.conformal_weight(i) - md.conformal_weight(j)).is_integer());
            PhysicalReport { vacuum, nonnegative: true, commutator: c, twist, physical: vacuum && twist && c < tol.s_commute }
        })
        .collect())
}

/// max |(ZS - SZ)_{lambda, .}| for one row, given S rows for lambda and its Z-support.
fn row_commutator<'a, F: Fn(usize) -> &'a [Complex64]>(
    z: &IntMatrix,
    lam: usize,
    row_of: &F,
    s_lam: &[Complex64],
    acc: &mut [Complex64],
) -> f64 {
    for a in acc.iter_mut() {
        *a = Complex64::new(0.0, 0.0);
    }
    for &(nu, v) in z.row(lam) {
        let r = row_of(nu as usize);
        let v = v as f64;
        for (a, s) in acc.iter_mut().zip(r.iter()) {
            *a += s * v;
        }
    }
    for (nu, &s) in s_lam.iter().enumerate() {
        for &(mu, v) in z.row(nu) {
            acc[mu as usize] -= s * v as f64;
        }
    }
    acc.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max).sqrt()
}

fn commutators_dense(zs: &[IntMatrix], md: &ModularData) -> Vec<f64> {
    let size = md.len();
    let dense = md.dense.as_ref().expect("dense S");
    let row_of = |i: usize| &dense[i * size..(i + 1) * size];
    let mut acc = vec![Complex64::new(0.0, 0.0); size];
    zs.iter()
        .map(|z| {
            let mut worst = 0.0f64;
            for lam in 0..size {
                let s_lam = &dense[lam * size..(lam + 1) * size];
                worst = worst.max(row_commutator(z, lam, &row_of, s_lam, &mut acc));
            }
            worst
        })
        .collect()
}

/// Rows are produced per dihedral orbit (tau and duality); every Z must map
/// each weight into its own dihedral orbit.
fn commutators_streamed(zs: &[IntMatrix], md: &ModularData) -> Result<Vec<f64>> {
    let idx = &md.index;
    let size = md.len();
    let mut group_of = vec![usize::MAX; size];
    let mut groups: Vec<Vec<(usize, u32, bool)>> = Vec::new();
    for i in 0..size {
        if group_of[i] != usize::MAX {
            continue;
        }
        let g = groups.len();
        let mut members = Vec::new();
        let di = idx.dual(i);
        let mut c = i;
        let mut cd = di;
        for j in 0..md.lr.n {
            if group_of[c] == usize::MAX {
                group_of[c] = g;
                members.push((c, j, false));
            }
            if group_of[cd] == usize::MAX {
                group_of[cd] = g;
                members.push((cd, j, true));
            }
            c = idx.tau(c);
            cd = idx.tau(cd);
        }
        groups.push(members);
    }
    for z in zs {
        for (i, j, _) in z.triplets() {
            if group_of[i] != group_of[j] {
                return Err(Error::InvalidArgument(format!(
                    "alcove of size {size} exceeds the dense limit and the invariant mixes dihedral orbits"
                )));
            }
        }
    }
    let mut worst = vec![0.0f64; zs.len()];
    let mut acc = vec![Complex64::new(0.0, 0.0); size];
    for members in &groups {
        let base = md.rep_row(members[0].0);
        let base_dual: Vec<Complex64> = base.iter().map(|z| z.conj()).collect();
        let rows: Vec<(usize, Vec<Complex64>)> = members
            .iter()
            .map(|&(c, j, is_dual)| (c, md.shift_row(if is_dual { &base_dual } else { &base }, j)))
            .collect();
        let row_of = |i: usize| rows.iter().find(|r| r.0 == i).expect("row in group").1.as_slice();
        for (zi, z) in zs.iter().enumerate() {
            for (lam, s_lam) in &rows {
                let c = row_commutator(z, *lam, &row_of, s_lam, &mut acc);
                worst[zi] = worst[zi].max(c);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{z_charge, z_plus};

    fn md(n: u32, k: u32) -> ModularData {
        ModularData::new(LevelRank::new(n, k).unwrap()).unwrap()
    }

    #[test]
    fn sl2_level1() {
        let m = md(2, 1);
        let r = 1.0 / 2f64.sqrt();
        let want = [[r, r], [r, -r]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.entry(i, j) - Complex64::new(want[i][j], 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn unitary_and_squares_to_charge() {
        for (n, k) in [(3, 4), (4, 3), (5, 2), (3, 7)] {
            let m = md(n, k);
            let size = m.len();
            let c = z_charge(m.index());
            for a in 0..size {
                for b in 0..size {
                    let mut ip = Complex64::new(0.0, 0.0);
                    let mut sq = Complex64::new(0.0, 0.0);
                    for mu in 0..size {
                        ip += m.entry(a, mu) * m.entry(b, mu).conj();
                        sq += m.entry(a, mu) * m.entry(mu, b);
                    }
                    assert!((ip - if a == b { 1.0 } else { 0.0 }).norm() < 1e-9);
                    assert!((sq - c.get(a, b) as f64).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn dense_rows_match_direct_determinants() {
        let m = md(4, 4);
        for a in 0..m.len() {
            for b in (0..m.len()).step_by(3) {
                assert!((m.entry(a, b) - m.entry_direct(a, b)).norm() < 1e-10);
                assert!((m.entry(a, b) - m.entry(b, a)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn first_row_is_quantum_dimension() {
        let m = md(3, 5);
        let s00 = m.entry(0, 0).re;
        for (i, w) in m.index().weights().iter().enumerate() {
            let q = alcove::qdim(m.level_rank(), w);
            assert!((m.entry(0, i).re / s00 - q).abs() < 1e-9);
            assert!(m.entry(0, i).im.abs() < 1e-12);
        }
    }

    #[test]
    fn all_ones_is_not_physical() {
        let m = md(3, 2);
        let size = m.len();
        let ones = IntMatrix::from_triplets(size, (0..size).flat_map(|i| (0..size).map(move |j| (i, j, 1)))).unwrap();
        let r = is_physical(&ones, &m, &Tolerances::default()).unwrap();
        assert!(!r.physical);
        let id = IntMatrix::identity(size);
        assert!(is_physical(&id, &m, &Tolerances::default()).unwrap().physical);
    }

    #[test]
    fn streamed_agrees_with_dense() {
        let m = md(4, 4);
        let zs = vec![z_plus(m.index(), 2).unwrap(), z_charge(m.index()), z_plus(m.index(), 4).unwrap()];
        let a = commutators_dense(&zs, &m);
        let b = commutators_streamed(&zs, &m).unwrap();
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("fusionmod-test-{}", std::process::id()));
        let lr = LevelRank::new(3, 3).unwrap();
        let a = ModularData::load_or_compute(lr, Some(&dir)).unwrap();
        assert!(ModularData::cache_path(&dir, lr).exists());
        let b = ModularData::load_or_compute(lr, Some(&dir)).unwrap();
        for i in 0..a.len() {
            assert_eq!(a.row(i), b.row(i));
        }
        let _ = fs::remove_dir_all(dir);
    }
}
