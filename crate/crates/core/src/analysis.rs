//! Cross-ratio distortion diagnostics for circle maps.
//!
//! `qs_constant_estimate` probes Möbius images of the square `(1, i, −1, −i)`
//! (cross-ratio 2) and reports the extreme image cross-ratios.
//! `symmetric_modulus` measures how far evenly spaced 4-tuples in small
//! charts (cross-ratio 4/3) are distorted as the spacing shrinks.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::circle::CircleMap;
use crate::error::{QuakeError, Result};
use crate::hyp::{canonical_angle, circle_cross_ratio, is_ccw_quadruple, Mobius};
use crate::par::{self, Exec};

const SQUARE: [f64; 4] = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];

/// Extreme image cross-ratios of probed square quadruples.
#[derive(Debug, Clone, PartialEq)]
pub struct QsReport {
    pub cr_min: f64,
    pub cr_max: f64,
    pub witness_min: [f64; 4],
    pub witness_max: [f64; 4],
    pub samples: usize,
}

/// Probe parameters: `M = R_ψ ∘ T_τ ∘ R_φ` with `T_τ` the translation along
/// the real axis.
#[derive(Debug, Clone, Copy)]
struct Probe {
    phi: f64,
    tau: f64,
    psi: f64,
}

impl Probe {
    fn quadruple(&self) -> [f64; 4] {
        let m = Mobius::rotation(self.psi)
            .compose(&Mobius::real_translation(self.tau))
            .compose(&Mobius::rotation(self.phi));
        SQUARE.map(|x| m.apply_angle(x))
    }
}

fn image_cr(h: &CircleMap, q: &[f64; 4]) -> Option<f64> {
    let img = q.map(|x| h.eval(x));
    if !is_ccw_quadruple(img) {
        return None;
    }
    Some(circle_cross_ratio(img))
}

#[derive(Clone, Copy)]
struct Extremes {
    min: (f64, Probe),
    max: (f64, Probe),
    broken: bool,
}

impl Extremes {
    fn merge(self, other: Extremes) -> Extremes {
        Extremes {
            min: if other.min.0 < self.min.0 {
                other.min
            } else {
                self.min
            },
            max: if other.max.0 > self.max.0 {
                other.max
            } else {
                self.max
            },
            broken: self.broken || other.broken,
        }
    }
}

/// Estimates the range of image cross-ratios of `h` over cross-ratio-2
/// quadruples. Translation lengths are exponential, capped at
/// `ln(samples)`; the best probes are then polished by a local search.
pub fn qs_constant_estimate(
    h: &CircleMap,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<QsReport> {
    h.check_monotone(4096)?;
    let cap = (samples.max(3) as f64).ln();
    let start = Probe {
        phi: 0.0,
        tau: 0.0,
        psi: 0.0,
    };
    let init = image_cr(h, &start.quadruple())
        .ok_or_else(|| QuakeError::NonMonotone("map reverses the standard quadruple".into()))?;
    let parts = par::map_chunks(exec, samples, seed, |rng: &mut ChaCha8Rng, len| {
        let mut ex = Extremes {
            min: (init, start),
            max: (init, start),
            broken: false,
        };
        for _ in 0..len {
            let p = random_probe(rng, cap);
            match image_cr(h, &p.quadruple()) {
                Some(cr) => {
                    if cr < ex.min.0 {
                        ex.min = (cr, p);
                    }
                    if cr > ex.max.0 {
                        ex.max = (cr, p);
                    }
                }
                None => ex.broken = true,
            }
        }
        ex
    });
    let ex = parts.into_iter().fold(
        Extremes {
            min: (init, start),
            max: (init, start),
            broken: false,
        },
        Extremes::merge,
    );
    if ex.broken {
        return Err(QuakeError::NonMonotone(
            "a probe quadruple lost its cyclic order".into(),
        ));
    }
    let (cr_max, p_max) = polish(h, ex.max, cap, 1.0);
    let (cr_min, p_min) = polish(h, ex.min, cap, -1.0);
    Ok(QsReport {
        cr_min,
        cr_max,
        witness_min: p_min.quadruple(),
        witness_max: p_max.quadruple(),
        samples,
    })
}

fn random_probe(rng: &mut ChaCha8Rng, cap: f64) -> Probe {
    let mean = cap / 4.0;
    let tau = loop {
        let t = -mean * (1.0 - rng.gen::<f64>()).ln();
        if t <= cap {
            break t;
        }
    };
    Probe {
        phi: rng.gen_range(0.0..TAU),
        tau,
        psi: rng.gen_range(0.0..TAU),
    }
}

/// Compass search on the probe parameters; `sign` is +1 to maximize.
fn polish(h: &CircleMap, (mut best, mut p): (f64, Probe), cap: f64, sign: f64) -> (f64, Probe) {
    let mut step = 0.05;
    while step > 1e-7 {
        let mut improved = false;
        for k in 0..6 {
            let d = if k % 2 == 0 { step } else { -step };
            let mut c = p;
            match k / 2 {
                0 => c.phi += d,
                1 => c.tau = (c.tau + d).clamp(0.0, cap),
                _ => c.psi += d,
            }
            if let Some(v) = image_cr(h, &c.quadruple()) {
                if sign * (v - best) > 0.0 {
                    best = v;
                    p = c;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, p)
}

/// Per-scale supremum of `|log(cr(h(Q)) / (4/3))|` over standard 4-tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryProfile {
    pub scales: Vec<f64>,
    pub beta: Vec<f64>,
}

const CHART_HALF_WIDTH: f64 = 3.0 * PI / 8.0;

/// Chart `j` maps the arc of half-width 3π/8 about `jπ/2` onto `[−1, 1]`
/// by a Möbius map of the circle to the line.
fn chart_to_angle(j: usize, x: f64) -> f64 {
    let k = (CHART_HALF_WIDTH * 0.5).tan();
    canonical_angle(j as f64 * FRAC_PI_2 + 2.0 * (x * k).atan())
}

fn angle_to_chart(j: usize, a: f64) -> Option<f64> {
    let rel = canonical_angle(a - j as f64 * FRAC_PI_2 + PI) - PI;
    (rel.abs() <= CHART_HALF_WIDTH).then(|| (rel * 0.5).tan() / (CHART_HALF_WIDTH * 0.5).tan())
}

fn tuple_beta(h: &CircleMap, j: usize, x: f64, delta: f64) -> f64 {
    let q = [0.0, 1.0, 2.0, 3.0].map(|i| chart_to_angle(j, x + i * delta));
    let img = q.map(|a| h.eval(a));
    (circle_cross_ratio(img) / (4.0 / 3.0)).ln().abs()
}

/// Samples standard 4-tuples of chart spacing in `[s/4, s]` for each scale
/// `s`. Half of the tuples are placed to straddle a breakpoint of `h`.
pub fn symmetric_modulus(
    h: &CircleMap,
    scales: &[f64],
    per_scale_samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<SymmetryProfile> {
    if let Some(&s) = scales.iter().find(|&&s| !(s > 0.0 && s < 2.0 / 3.0)) {
        return Err(QuakeError::InvalidParameter(format!(
            "scale {s} outside (0, 2/3)"
        )));
    }
    let breaks: Vec<(usize, f64)> = h
        .breakpoints()
        .into_iter()
        .flat_map(|b| (0..4).filter_map(move |j| angle_to_chart(j, b).map(|x| (j, x))))
        .collect();
    let beta = scales
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let stream_seed = seed ^ (0x9e37_79b9_7f4a_7c15_u64.wrapping_mul(i as u64 + 1));
            par::map_chunks(exec, per_scale_samples, stream_seed, |rng, len| {
                let mut best: f64 = 0.0;
                for _ in 0..len {
                    let delta = s * 4f64.powf(-rng.gen::<f64>());
                    let span = 3.0 * delta;
                    let (j, x) = if !breaks.is_empty() && rng.gen_bool(0.5) {
                        let (j, b) = breaks[rng.gen_range(0..breaks.len())];
                        (j, b - rng.gen_range(0.0..span))
                    } else {
                        (rng.gen_range(0..4), rng.gen_range(-1.0..1.0 - span))
                    };
                    if x < -1.0 || x + span > 1.0 {
                        continue;
                    }
                    best = best.max(tuple_beta(h, j, x, delta));
                }
                best
            })
            .into_iter()
            .fold(0.0, f64::max)
        })
        .collect();
    Ok(SymmetryProfile {
        scales: scales.to_vec(),
        beta,
    })
}
