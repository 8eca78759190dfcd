//! Number theory behind the generic module categories: the divisor map
//! d -> m_d, sign vectors, the (p, t) exponents and modular-scaling data.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One sign per prime dividing N.
pub type SignVector = BTreeMap<u64, Sign>;

pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factorize 0".into()));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

pub fn primes(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.into_iter().map(|(p, _)| p).collect())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n)? {
        let mut next = Vec::new();
        for &d in &ds {
            let mut q = 1;
            for _ in 0..=e {
                next.push(d * q);
                q *= p;
            }
        }
        ds = next;
    }
    ds.sort_unstable();
    Ok(ds)
}

/// Number of divisors.
pub fn sigma(n: u64) -> Result<u64> {
    Ok(factorize(n)?.iter().map(|&(_, e)| e as u64 + 1).product())
}

pub fn valuation(n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut e = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    e
}

pub fn khat(n: u64, k: u64) -> u64 {
    if (n * k) % 2 == 1 {
        k + n
    } else {
        k
    }
}

fn check_nk(n: u64, k: u64) -> Result<()> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidLevelRank(format!("N={n}, k={k}")));
    }
    Ok(())
}

/// Divisors d admitted as generic labels: d | N, and d | N/2 when N is even and k odd.
pub fn eligible_d(n: u64, k: u64) -> Result<Vec<u64>> {
    check_nk(n, k)?;
    if n % 2 == 0 && k % 2 == 1 {
        divisors(n / 2)
    } else {
        divisors(n)
    }
}

/// m with m | N and m^2 | Nk (N odd) or 2m^2 | Nk (N even).
pub fn eligible_m(n: u64, k: u64) -> Result<Vec<u64>> {
    check_nk(n, k)?;
    let nk = n * k;
    Ok(divisors(n)?
        .into_iter()
        .filter(|&m| {
            let q = if n % 2 == 0 { 2 * m * m } else { m * m };
            nk % q == 0
        })
        .collect())
}

/// p-adic exponent of m_d for a prime p | N.
fn mu_exponent(n: u64, k: u64, p: u64, delta: u32) -> Result<u32> {
    let nu = valuation(n, p) as i64;
    let ka = valuation(k, p) as i64;
    let d = delta as i64;
    let other = if p == 2 && n % 2 == 0 { nu + ka - d - 1 } else { nu + ka - d };
    if other < 0 {
        return Err(Error::InvalidArgument(format!(
            "d with {p}-exponent {delta} is not an admissible label for N={n}, k={k}"
        )));
    }
    Ok(d.min(other) as u32)
}

pub fn m_of_d(n: u64, k: u64, d: u64) -> Result<u64> {
    check_nk(n, k)?;
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidArgument(format!("{d} does not divide N={n}")));
    }
    let mut m = 1;
    for p in primes(n)? {
        m *= p.pow(mu_exponent(n, k, p, valuation(d, p))?);
    }
    Ok(m)
}

pub fn sign_vector_of_d(n: u64, k: u64, d: u64) -> Result<SignVector> {
    let m = m_of_d(n, k, d)?;
    Ok(primes(n)?
        .into_iter()
        .map(|p| {
            let s = if valuation(d, p) == valuation(m, p) { Sign::Plus } else { Sign::Minus };
            (p, s)
        })
        .collect())
}

/// Whether the sign at p distinguishes divisors with m_d = m. For p = 2 and N
/// even the two candidate exponents are mu and nu + kappa - mu - 1.
pub fn sign_is_free(n: u64, k: u64, m: u64, p: u64) -> bool {
    let nu = valuation(n, p);
    let ka = valuation(k, p);
    let mu = valuation(m, p);
    if p == 2 && n % 2 == 0 {
        ka <= mu + 1 && 2 * mu + 1 < nu + ka
    } else {
        ka <= mu && 2 * mu < nu + ka
    }
}

fn check_m(n: u64, k: u64, m: u64) -> Result<()> {
    if !eligible_m(n, k)?.contains(&m) {
        return Err(Error::InvalidArgument(format!("m={m} is not eligible for N={n}, k={k}")));
    }
    Ok(())
}

pub fn sign_equiv(n: u64, k: u64, m: u64, a: &SignVector, b: &SignVector) -> Result<bool> {
    check_m(n, k, m)?;
    let get = |v: &SignVector, p: u64| v.get(&p).copied().unwrap_or(Sign::Plus);
    Ok(primes(n)?
        .into_iter()
        .all(|p| !sign_is_free(n, k, m, p) || get(a, p) == get(b, p)))
}

/// The divisor d with m_d = m and sign vector a (signs at non-free primes are ignored).
pub fn d_from_m_and_sign(n: u64, k: u64, m: u64, a: &SignVector) -> Result<u64> {
    check_m(n, k, m)?;
    let ps = primes(n)?;
    if let Some(p) = a.keys().find(|p| !ps.contains(p)) {
        return Err(Error::InvalidArgument(format!("{p} is not a prime divisor of N={n}")));
    }
    let mut d = 1;
    for p in ps {
        let nu = valuation(n, p);
        let ka = valuation(k, p);
        let mu = valuation(m, p);
        let minus = a.get(&p) == Some(&Sign::Minus) && sign_is_free(n, k, m, p);
        let delta = match (minus, p == 2 && n % 2 == 0) {
            (false, _) => mu,
            (true, false) => nu + ka - mu,
            (true, true) => nu + ka - mu - 1,
        };
        d *= p.pow(delta);
    }
    if m_of_d(n, k, d)? != m || !eligible_d(n, k)?.contains(&d) {
        return Err(Error::NoSolution(format!("no divisor realises m={m}, signs {a:?}")));
    }
    Ok(d)
}

pub fn p_t_exponents(n: u64, k: u64, m: u64) -> Result<(u32, u32)> {
    check_m(n, k, m)?;
    let mp = m.gcd(&k);
    let a = n * mp / (m * m);
    let b = k / mp;
    let p = primes(a)?.into_iter().filter(|&q| q != 2 && b % q != 0).count() as u32;
    let t = if a % 2 == 1 || b % 4 == 0 || (a % 4 == 2 && b % 2 == 1) { 0 } else { 1 };
    Ok((p, t))
}

/// (sum over eligible m of 2^(p+t), expected divisor count).
pub fn count_identity_check(n: u64, k: u64) -> Result<(u64, u64)> {
    let mut lhs = 0;
    for m in eligible_m(n, k)? {
        let (p, t) = p_t_exponents(n, k, m)?;
        lhs += 1u64 << (p + t);
    }
    let rhs = if n % 2 == 0 && k % 2 == 1 { sigma(n / 2)? } else { sigma(n)? };
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModScParams {
    pub p: u64,
    /// N / p^(nu_p + kappa_p)
    pub n_p: Ratio<i64>,
    /// inverse of N_p k modulo p^nu_p
    pub ell_p: u64,
    /// 0 for sign +, -2 for sign -
    pub h_p: i64,
}

fn inverse_mod(a: u64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        return Some(0);
    }
    let e = (a as i64).extended_gcd(&(modulus as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(modulus as i64) as u64)
}

pub fn modsc_params(n: u64, k: u64, p: u64, sign: Sign) -> Result<ModScParams> {
    check_nk(n, k)?;
    if n % p != 0 || factorize(p)?.len() != 1 || factorize(p)?[0].1 != 1 {
        return Err(Error::InvalidArgument(format!("{p} is not a prime divisor of N={n}")));
    }
    let nu = valuation(n, p);
    let ka = valuation(k, p);
    let pe = p.pow(nu + ka) as i64;
    let n_p = Ratio::new(n as i64, pe);
    let npk = (n * k) / pe as u64;
    let modulus = p.pow(nu);
    let ell_p = inverse_mod(npk % modulus, modulus)
        .ok_or_else(|| Error::InvalidArgument(format!("N_p k = {npk} not invertible mod {modulus}")))?;
    let h_p = match sign {
        Sign::Plus => 0,
        Sign::Minus => -2,
    };
    Ok(ModScParams { p, n_p, ell_p, h_p })
}
