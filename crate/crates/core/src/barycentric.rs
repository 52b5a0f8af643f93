//! Barycentric (conformally natural) extension of circle maps to the disk.
//!
//! `ex(h)(z)` is the point `w` where the displacement field
//! `ζ ↦ (h(ζ) − w)/(1 − w̄ h(ζ))` has zero average against the harmonic
//! measure of `z`. The harmonic measure is the push-forward of arc length
//! under the isometry taking 0 to `z`, so the average is an integral over
//! a uniform parameter. It is computed with Gauss–Legendre panels that
//! break at the pulled-back corners of `h`, or with the trapezoid rule when
//! `h` is smooth.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::circle::CircleMap;
use crate::error::{QuakeError, Result};
use crate::hyp::{ccw_offset, DiskPoint, Mobius};
use crate::par::{self, Exec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionConfig {
    pub quadrature_n: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    /// Node-count doublings allowed before giving up.
    pub refinements: usize,
}

impl Default for ExtensionConfig {
    fn default() -> Self {
        Self {
            quadrature_n: 1024,
            tol: 1e-8,
            max_iter: 200,
            damping: 0.5,
            refinements: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionResult {
    pub w: DiskPoint,
    pub residual: f64,
    pub iterations: usize,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeltramiSample {
    pub z: DiskPoint,
    pub value: C64,
}

const PANEL: usize = 16;

fn gauss_legendre() -> &'static [(f64, f64); PANEL] {
    static RULE: OnceLock<[(f64, f64); PANEL]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = PANEL;
        let mut rule = [(0.0, 0.0); PANEL];
        for (i, slot) in rule.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// Quadrature of the harmonic measure of `z`: image points `e^{i h(ζ)}`
/// with weights summing to 1.
fn harmonic_nodes(h: &CircleMap, z: DiskPoint, n: usize) -> Vec<(f64, C64)> {
    let to_z = Mobius::from_origin(z);
    let back = to_z.inverse();
    let mut breaks: Vec<f64> = h
        .breakpoints()
        .into_iter()
        .map(|b| back.apply_angle(b))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let image = |t: f64| C64::from_polar(1.0, h.eval(to_z.apply_angle(t)));
    if breaks.is_empty() {
        let w = 1.0 / n as f64;
        return (0..n)
            .map(|k| (w, image(TAU * k as f64 / n as f64)))
            .collect();
    }
    let rule = gauss_legendre();
    let mut nodes = Vec::with_capacity(n + PANEL * breaks.len());
    for i in 0..breaks.len() {
        let from = breaks[i];
        let len = if breaks.len() == 1 {
            TAU
        } else {
            ccw_offset(from, breaks[(i + 1) % breaks.len()])
        };
        let m = ((n as f64 * len / TAU) / PANEL as f64).ceil().max(1.0) as usize;
        let width = len / m as f64;
        for j in 0..m {
            let mid = from + width * (j as f64 + 0.5);
            for &(x, wt) in rule {
                nodes.push((wt * width * 0.5 / TAU, image(mid + 0.5 * width * x)));
            }
        }
    }
    nodes
}

struct Field {
    f: C64,
    a: C64,
    b: C64,
}

fn field(nodes: &[(f64, C64)], w: C64) -> Field {
    let mut out = Field {
        f: C64::new(0.0, 0.0),
        a: C64::new(0.0, 0.0),
        b: C64::new(0.0, 0.0),
    };
    let wc = w.conj();
    for &(wt, zeta) in nodes {
        let den = C64::new(1.0, 0.0) - wc * zeta;
        let disp = (zeta - w) / den;
        out.f += wt * disp;
        out.a += wt * (-1.0 / den);
        out.b += wt * (zeta * disp / den);
    }
    out
}

fn solve(
    nodes: &[(f64, C64)],
    start: C64,
    cfg: &ExtensionConfig,
) -> std::result::Result<(C64, f64, usize), Vec<f64>> {
    let mut w = start;
    let mut trace = Vec::new();
    for it in 0..cfg.max_iter {
        let fl = field(nodes, w);
        let r = fl.f.norm();
        trace.push(r);
        if r < cfg.tol {
            // One more Newton step; it is cheap and sharpens finite differences.
            let d = fl.a.norm_sqr() - fl.b.norm_sqr();
            if d.abs() > 1e-300 {
                let dw = (-fl.a.conj() * fl.f + fl.b * fl.f.conj()) / d;
                let cand = w + dw;
                if cand.norm() < 1.0 && field(nodes, cand).f.norm() <= r {
                    w = cand;
                }
            }
            return Ok((w, field(nodes, w).f.norm(), it));
        }
        let newton = if r < 1e-3 {
            let d = fl.a.norm_sqr() - fl.b.norm_sqr();
            let dw = (-fl.a.conj() * fl.f + fl.b * fl.f.conj()) / d;
            let cand = w + dw;
            (d.abs() > 1e-300 && cand.norm() < 1.0).then_some(cand)
        } else {
            None
        };
        w = match newton {
            Some(c) => c,
            None => {
                let v = cfg.damping * fl.f;
                (w + v) / (C64::new(1.0, 0.0) + w.conj() * v)
            }
        };
        if !(w.norm() < 1.0) {
            return Err(trace);
        }
    }
    Err(trace)
}

/// Evaluates `ex(h)(z)`.
pub fn barycentric_extension(
    h: &CircleMap,
    z: DiskPoint,
    cfg: &ExtensionConfig,
) -> Result<ExtensionResult> {
    let mut n = cfg.quadrature_n.max(PANEL);
    let mut last_trace = Vec::new();
    for _ in 0..=cfg.refinements {
        let nodes = harmonic_nodes(h, z, n);
        let start = C64::from_polar(1.0, h.eval(z.value().arg())) * z.value().norm();
        match solve(&nodes, start, cfg) {
            Ok((w, residual, iterations)) => {
                return Ok(ExtensionResult {
                    w: DiskPoint::new(w)?,
                    residual,
                    iterations,
                    nodes: nodes.len(),
                })
            }
            Err(trace) => last_trace = trace,
        }
        n *= 2;
    }
    Err(QuakeError::NoConvergence {
        iterations: last_trace.len(),
        trace: last_trace,
    })
}

/// Beltrami coefficient `∂_z̄ f / ∂_z f` of `f = ex(h)` by central
/// differences. `step` defaults to `1e-4 (1 − |z|)`.
pub fn beltrami_estimate(
    h: &CircleMap,
    z: DiskPoint,
    step: Option<f64>,
    cfg: &ExtensionConfig,
) -> Result<BeltramiSample> {
    let s = step.unwrap_or(1e-4 * (1.0 - z.value().norm()));
    let at = |dz: C64| -> Result<C64> {
        Ok(
            barycentric_extension(h, DiskPoint::new(z.value() + dz)?, cfg)?
                .w
                .value(),
        )
    };
    let fx = (at(C64::new(s, 0.0))? - at(C64::new(-s, 0.0))?) / (2.0 * s);
    let fy = (at(C64::new(0.0, s))? - at(C64::new(0.0, -s))?) / (2.0 * s);
    let i = C64::new(0.0, 1.0);
    let fz = (fx - i * fy) * 0.5;
    let fzbar = (fx + i * fy) * 0.5;
    if fz.norm() < 1e-10 {
        return Err(QuakeError::Singular(format!(
            "∂f/∂z = {:.3e} at {}",
            fz.norm(),
            z.value()
        )));
    }
    Ok(BeltramiSample {
        z,
        value: fzbar / fz,
    })
}

/// Largest sampled `|Belt(ex h)|` on each circle `|z| = r`.
pub fn asymptotic_conformality_profile(
    h: &CircleMap,
    radii: &[f64],
    samples: usize,
    cfg: &ExtensionConfig,
    exec: Exec,
) -> Result<Vec<(f64, f64)>> {
    let points: Vec<(usize, DiskPoint)> = radii
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| {
            (0..samples).map(move |k| {
                DiskPoint::new(C64::from_polar(r, TAU * (k as f64 + 0.5) / samples as f64))
                    .map(|z| (i, z))
            })
        })
        .collect::<Result<_>>()?;
    let values = par::map_range(exec, points.len(), |k| {
        beltrami_estimate(h, points[k].1, None, cfg).map(|b| b.value.norm())
    });
    let mut out: Vec<(f64, f64)> = radii.iter().map(|&r| (r, 0.0)).collect();
    for (&(i, _), v) in points.iter().zip(values) {
        out[i].1 = out[i].1.max(v?);
    }
    Ok(out)
}
