//! Reproducible lamination families.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QuakeError, Result};
use crate::hyp::{geodesics_disjoint, Mobius};
use crate::lamination::{Atom, MeasuredLamination};

pub const MAX_RETRIES: usize = 10_000;

/// `n_atoms` disjoint geodesics with random weights, rescaled so the exact
/// norm equals `target_norm`.
pub fn gen_random_bounded(
    n_atoms: usize,
    target_norm: f64,
    seed: u64,
) -> Result<MeasuredLamination> {
    if !(target_norm > 0.0 && target_norm.is_finite()) {
        return Err(QuakeError::Generator(format!("target norm {target_norm}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut atoms: Vec<Atom> = Vec::with_capacity(n_atoms);
    let (lo, hi) = (0.02f64.ln(), PI.ln());
    for i in 0..n_atoms {
        let mut placed = false;
        for _ in 0..MAX_RETRIES {
            let a = rng.gen_range(0.0..TAU);
            let span = rng.gen_range(lo..hi).exp();
            let cand = Atom::new(a, a + span, rng.gen_range(0.1..1.0))?;
            if atoms.iter().all(|x| {
                geodesics_disjoint(&x.geodesic, &cand.geodesic)
                    && !x.geodesic.same_as(&cand.geodesic)
            }) {
                atoms.push(cand);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(QuakeError::Generator(format!(
                "no room for atom {i} after {MAX_RETRIES} tries"
            )));
        }
    }
    let mu = MeasuredLamination::validate(atoms)?;
    if mu.is_empty() {
        return Ok(mu);
    }
    mu.scaled(target_norm / mu.thurston_norm())
}

/// Weight of the dyadic level `k ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule {
    Constant(f64),
    /// `2^{−k}`.
    Pow2,
    /// `1/k²`.
    InvSquare,
    /// Entry `k − 1`.
    Table(Vec<f64>),
}

impl WeightRule {
    pub fn weight(&self, k: usize) -> Result<f64> {
        match self {
            WeightRule::Constant(w) => Ok(*w),
            WeightRule::Pow2 => Ok(0.5f64.powi(k as i32)),
            WeightRule::InvSquare => Ok(1.0 / (k * k) as f64),
            WeightRule::Table(t) => t.get(k - 1).copied().ok_or_else(|| {
                QuakeError::Generator(format!("weight table has no entry for level {k}"))
            }),
        }
    }
}

/// Nested geodesics over the upper arc: level `k` splits `[0, π]` into
/// `2^{k−1}` equal arcs and spans each by one geodesic.
pub fn gen_dyadic_family(depth: usize, rule: &WeightRule) -> Result<MeasuredLamination> {
    let mut atoms = Vec::with_capacity((1 << depth) - 1);
    for k in 1..=depth {
        let parts = 1usize << (k - 1);
        let w = rule.weight(k)?;
        for j in 0..parts {
            let width = PI / parts as f64;
            atoms.push(Atom::new(width * j as f64, width * (j + 1) as f64, w)?);
        }
    }
    MeasuredLamination::validate(atoms)
}

/// `n` geodesics from `vertex` to `vertex + 2π(j+1)/(n+1)`. `weights`
/// has one entry per geodesic, or a single entry shared by all.
pub fn gen_fan(n: usize, vertex: f64, weights: &[f64]) -> Result<MeasuredLamination> {
    let weight = |j: usize| match weights.len() {
        1 => Ok(weights[0]),
        m if m == n => Ok(weights[j]),
        m => Err(QuakeError::Generator(format!(
            "{m} weights for {n} geodesics"
        ))),
    };
    let atoms = (0..n)
        .map(|j| {
            Atom::new(
                vertex,
                vertex + TAU * (j + 1) as f64 / (n + 1) as f64,
                weight(j)?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    MeasuredLamination::validate(atoms)
}

/// `n` geodesics orthogonal to the real axis, consecutive ones at distance
/// `spacing`, centered on 0.
pub fn gen_chain(n: usize, spacing: f64, weight: f64) -> Result<MeasuredLamination> {
    if !(spacing > 0.0) {
        return Err(QuakeError::Generator(format!("spacing {spacing}")));
    }
    let atoms = (0..n)
        .map(|j| {
            let m = Mobius::real_translation(spacing * (j as f64 - (n as f64 - 1.0) / 2.0));
            Atom::new(
                m.apply_angle(FRAC_PI_2),
                m.apply_angle(3.0 * FRAC_PI_2),
                weight,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    MeasuredLamination::validate(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::geodesic_distance;

    #[test]
    fn random_bounded_contract() {
        assert!(gen_random_bounded(0, 1.0, 1).unwrap().is_empty());
        let a = gen_random_bounded(12, 1.5, 9).unwrap();
        assert_eq!(a.len(), 12);
        assert!((a.thurston_norm() - 1.5).abs() < 1e-9);
        assert_eq!(a, gen_random_bounded(12, 1.5, 9).unwrap());
        assert_ne!(a, gen_random_bounded(12, 1.5, 10).unwrap());
        assert!(gen_random_bounded(3, -1.0, 1).is_err());
    }

    #[test]
    fn dyadic_counts_and_rules() {
        assert_eq!(gen_dyadic_family(1, &WeightRule::Pow2).unwrap().len(), 1);
        let d = gen_dyadic_family(4, &WeightRule::Pow2).unwrap();
        assert_eq!(d.len(), 15);
        assert!((d.total_weight() - 4.0 * 0.5).abs() < 1e-12);
        let c = gen_dyadic_family(3, &WeightRule::Constant(2.0)).unwrap();
        assert_eq!(c.total_weight(), 14.0);
        let t = gen_dyadic_family(2, &WeightRule::Table(vec![1.0, 0.25])).unwrap();
        assert_eq!(t.total_weight(), 1.5);
        assert!(gen_dyadic_family(3, &WeightRule::Table(vec![1.0])).is_err());
        assert_eq!(WeightRule::InvSquare.weight(3).unwrap(), 1.0 / 9.0);
    }

    #[test]
    fn fan_shares_vertex() {
        let f = gen_fan(5, 0.7, &[1.0]).unwrap();
        assert_eq!(f.len(), 5);
        assert!(f.atoms().iter().all(|a| a.geodesic.has_endpoint(0.7)));
        assert_eq!(gen_fan(1, 0.0, &[2.0]).unwrap().len(), 1);
        assert!(gen_fan(3, 0.0, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn chain_spacing() {
        let c = gen_chain(4, 0.3, 1.0).unwrap();
        assert_eq!(c.len(), 4);
        let mut d: Vec<f64> = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                d.push(geodesic_distance(&c.atoms()[i].geodesic, &c.atoms()[j].geodesic).unwrap());
            }
        }
        d.sort_by(f64::total_cmp);
        assert!((d[0] - 0.3).abs() < 1e-12 && (d[5] - 0.9).abs() < 1e-12);
        assert!((c.thurston_norm() - 4.0).abs() < 1e-12);
    }
}
