//! Pointed algebras A_m generated by tau^{N/m}(0): simple and local modules.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::alcove::{self, AlcoveIndex, LevelRank, Weight};
use crate::arith;
use crate::error::{Error, Result};

/// A simple A_m-module: an orbit representative with a character class of its stabiliser.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleLabel {
    pub orbit_rep: Weight,
    pub chi: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LocalityRule {
    /// (X, chi) is local when the monodromy of X with the generator is trivial.
    TrivialMonodromy,
    /// (X, chi) is local when the monodromy phase equals chi / |Stab|.
    CharacterTwisted,
}

fn check_m(lr: LevelRank, m: u32) -> Result<()> {
    if !arith::eligible_m(lr.n as u64, lr.k as u64)?.contains(&(m as u64)) {
        return Err(Error::InvalidArgument(format!("m={m} is not eligible for {lr}")));
    }
    Ok(())
}

/// Support of A_m: the weights tau^{jN/m}(0).
pub fn algebra_support(idx: &AlcoveIndex, m: u32) -> Result<Vec<Weight>> {
    check_m(idx.level_rank(), m)?;
    Ok(idx.zm_orbit(0, m).into_iter().map(|i| idx.weight(i).clone()).collect())
}

pub fn zm_stab_order(idx: &AlcoveIndex, i: usize, m: u32) -> u32 {
    m / idx.zm_orbit(i, m).len() as u32
}

/// Lexicographically smallest member of the Z_m-orbit.
fn orbit_min(idx: &AlcoveIndex, i: usize, m: u32) -> usize {
    idx.zm_orbit(i, m)
        .into_iter()
        .min_by(|&a, &b| idx.weight(a).cmp(idx.weight(b)))
        .expect("non-empty orbit")
}

fn orbit_reps(idx: &AlcoveIndex, m: u32) -> Vec<usize> {
    let mut reps: Vec<usize> = (0..idx.len()).filter(|&i| orbit_min(idx, i, m) == i).collect();
    reps.sort_by(|&a, &b| idx.weight(a).cmp(idx.weight(b)));
    reps
}

pub fn simple_modules(idx: &AlcoveIndex, m: u32) -> Result<Vec<ModuleLabel>> {
    check_m(idx.level_rank(), m)?;
    let mut out = Vec::new();
    for r in orbit_reps(idx, m) {
        for chi in 0..zm_stab_order(idx, r, m) {
            out.push(ModuleLabel { orbit_rep: idx.weight(r).clone(), chi });
        }
    }
    Ok(out)
}

/// h(a x) - h(a) - h(x) mod 1 with a = tau^{N/m}(0).
pub fn monodromy_exponent(idx: &AlcoveIndex, i: usize, m: u32) -> Ratio<i64> {
    let lr = idx.level_rank();
    let step = (lr.n / m) as i64;
    let a = idx.tau_pow(0, step);
    let ax = idx.tau_pow(i, step);
    let h = |j: usize| alcove::conformal_weight(lr, idx.weight(j));
    let x = h(ax) - h(a) - h(i);
    x - x.floor()
}

fn is_local(idx: &AlcoveIndex, i: usize, chi: u32, m: u32, rule: LocalityRule) -> bool {
    let mono = monodromy_exponent(idx, i, m);
    match rule {
        LocalityRule::TrivialMonodromy => mono == Ratio::from_integer(0),
        LocalityRule::CharacterTwisted => {
            let s = zm_stab_order(idx, i, m) as i64;
            mono == Ratio::new(chi as i64, s)
        }
    }
}

pub fn local_modules_with(idx: &AlcoveIndex, m: u32, rule: LocalityRule) -> Result<Vec<ModuleLabel>> {
    Ok(simple_modules(idx, m)?
        .into_iter()
        .filter(|l| {
            let i = idx.index_of(&l.orbit_rep).expect("label weight in the alcove");
            is_local(idx, i, l.chi, m, rule)
        })
        .collect())
}

/// The rule fixed once by brute force at sl_4 level 4, m = 2.
pub fn locality_rule() -> LocalityRule {
    static RULE: OnceLock<LocalityRule> = OnceLock::new();
    *RULE.get_or_init(|| {
        let idx = AlcoveIndex::new(LevelRank::new(4, 4).expect("valid"));
        [LocalityRule::TrivialMonodromy, LocalityRule::CharacterTwisted]
            .into_iter()
            .find(|&r| rule_is_consistent(&idx, 2, r).unwrap_or(false))
            .expect("one locality rule is consistent at sl_4 level 4")
    })
}

/// (a) the trivial module is local; (b) local dimension identity.
pub fn rule_is_consistent(idx: &AlcoveIndex, m: u32, rule: LocalityRule) -> Result<bool> {
    let locals = local_modules_with(idx, m, rule)?;
    let vac = ModuleLabel { orbit_rep: Weight::empty(idx.level_rank()), chi: 0 };
    if !locals.contains(&vac) {
        return Ok(false);
    }
    let (lhs, rhs) = local_dimension_identity(idx, m, &locals);
    Ok((lhs - rhs).abs() < 1e-6 * rhs.max(1.0))
}

pub fn local_modules(idx: &AlcoveIndex, m: u32) -> Result<Vec<ModuleLabel>> {
    local_modules_with(idx, m, locality_rule())
}

/// Quantum dimension of the underlying object of a module: |orbit| qdim(rep).
pub fn induced_qdim(idx: &AlcoveIndex, m: u32, label: &ModuleLabel) -> f64 {
    let i = idx.index_of(&label.orbit_rep).expect("label weight in the alcove");
    idx.zm_orbit(i, m).len() as f64 * alcove::qdim(idx.level_rank(), &label.orbit_rep)
}

/// (sum over modules of (qdim For(M) / m)^2, D(C) / m^2).
pub fn local_dimension_identity(idx: &AlcoveIndex, m: u32, locals: &[ModuleLabel]) -> (f64, f64) {
    let lr = idx.level_rank();
    let lhs = locals.iter().map(|l| (induced_qdim(idx, m, l) / m as f64).powi(2)).sum();
    let d: f64 = idx.weights().iter().map(|w| alcove::qdim(lr, w).powi(2)).sum();
    (lhs, d / (m * m) as f64)
}

/// Number of simple summands of the free module A (x) X: the order of Stab_{Z_m}(X).
pub fn free_module_components(idx: &AlcoveIndex, m: u32, x: &Weight) -> Result<u32> {
    check_m(idx.level_rank(), m)?;
    let i = idx.index_of(x).ok_or_else(|| Error::OutsideAlcove(x.to_string()))?;
    Ok(simple_modules(idx, m)?
        .iter()
        .filter(|l| l.orbit_rep == *idx.weight(orbit_min(idx, i, m)))
        .count() as u32)
}

/// Action of the character ell of Z_m: shifts chi by ell modulo the stabiliser order.
pub fn aut_character_action(idx: &AlcoveIndex, m: u32, ell: u32, label: &ModuleLabel) -> Result<ModuleLabel> {
    let i = idx.index_of(&label.orbit_rep).ok_or_else(|| Error::OutsideAlcove(label.orbit_rep.to_string()))?;
    let s = zm_stab_order(idx, i, m);
    if label.chi >= s {
        return Err(Error::InvalidArgument(format!("chi={} outside Z_{s}", label.chi)));
    }
    Ok(ModuleLabel { orbit_rep: label.orbit_rep.clone(), chi: (label.chi + ell) % s })
}

/// Index in Z_m of the subgroup acting trivially on the local modules.
pub fn action_kernel_index(idx: &AlcoveIndex, m: u32) -> Result<u32> {
    let locals: BTreeSet<ModuleLabel> = local_modules(idx, m)?.into_iter().collect();
    let mut kernel = 0;
    for ell in 0..m {
        let trivial = locals
            .iter()
            .map(|l| aut_character_action(idx, m, ell, l))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .zip(locals.iter())
            .all(|(a, b)| a == b);
        if trivial {
            kernel += 1;
        }
    }
    Ok(m / kernel)
}
