//! Orientation-preserving circle homeomorphisms, evaluated on angles.

use std::f64::consts::{PI, TAU};

use crate::earthquake::EarthquakeBoundary;
use crate::error::{QuakeError, Result};
use crate::hyp::{canonical_angle, ccw_offset, Mobius};

/// Piecewise linear interpolation through increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    // Lifted images: ys[i + 1] > ys[i], ys[n - 1] < ys[0] + 2π.
    ys: Vec<f64>,
}

impl Tabulated {
    /// Knots `(x, h(x))`, in any order of `x`. Images must be cyclically
    /// increasing with total turn 2π.
    pub fn new(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 3 {
            return Err(QuakeError::InvalidParameter(
                "a tabulated map needs at least 3 knots".into(),
            ));
        }
        for k in knots.iter_mut() {
            *k = (canonical_angle(k.0), canonical_angle(k.1));
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if knots.windows(2).any(|w| w[1].0 - w[0].0 <= 0.0) {
            return Err(QuakeError::NonMonotone("repeated knot".into()));
        }
        let n = knots.len();
        let mut ys = Vec::with_capacity(n);
        ys.push(knots[0].1);
        let mut turn = 0.0;
        for i in 0..n {
            let step = ccw_offset(knots[i].1, knots[(i + 1) % n].1);
            if step <= 0.0 {
                return Err(QuakeError::NonMonotone(format!(
                    "images repeat at knot {i}"
                )));
            }
            turn += step;
            if i + 1 < n {
                ys.push(ys[i] + step);
            }
        }
        if (turn - TAU).abs() > 1e-9 {
            return Err(QuakeError::NonMonotone(format!(
                "images wind {:.6} turns, expected 1",
                turn / TAU
            )));
        }
        Ok(Self {
            xs: knots.iter().map(|k| k.0).collect(),
            ys,
        })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn eval(&self, angle: f64) -> f64 {
        let n = self.xs.len();
        let x = canonical_angle(angle);
        let k = self.xs.partition_point(|&b| b <= x);
        let (x0, y0, x1, y1) = match k {
            0 => (
                self.xs[n - 1] - TAU,
                self.ys[n - 1] - TAU,
                self.xs[0],
                self.ys[0],
            ),
            k if k == n => (
                self.xs[n - 1],
                self.ys[n - 1],
                self.xs[0] + TAU,
                self.ys[0] + TAU,
            ),
            k => (self.xs[k - 1], self.ys[k - 1], self.xs[k], self.ys[k]),
        };
        canonical_angle(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

/// A circle homeomorphism tagged by where it came from.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleMap {
    Identity,
    Mobius(Mobius),
    Earthquake(EarthquakeBoundary),
    Tabulated(Tabulated),
    /// `post ∘ inner ∘ pre`.
    Composite {
        post: Mobius,
        inner: Box<CircleMap>,
        pre: Mobius,
    },
}

impl CircleMap {
    pub fn eval(&self, angle: f64) -> f64 {
        match self {
            CircleMap::Identity => canonical_angle(angle),
            CircleMap::Mobius(m) => m.apply_angle(angle),
            CircleMap::Earthquake(e) => e.eval(angle),
            CircleMap::Tabulated(t) => t.eval(angle),
            CircleMap::Composite { post, inner, pre } => {
                post.apply_angle(inner.eval(pre.apply_angle(angle)))
            }
        }
    }

    pub fn provenance(&self) -> &'static str {
        match self {
            CircleMap::Identity => "identity",
            CircleMap::Mobius(_) => "mobius",
            CircleMap::Earthquake(_) => "earthquake",
            CircleMap::Tabulated(_) => "tabulated",
            CircleMap::Composite { inner, .. } => inner.provenance(),
        }
    }

    /// Angles where the map may fail to be smooth, sorted in `[0, 2π)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match self {
            CircleMap::Identity | CircleMap::Mobius(_) => Vec::new(),
            CircleMap::Earthquake(e) => {
                if e.pieces().len() == 1 && e.breakpoints().len() == 1 {
                    // A lone piece has no corner; its start is only a seam.
                    Vec::new()
                } else {
                    e.breakpoints().to_vec()
                }
            }
            CircleMap::Tabulated(t) => t.knots().map(|k| k.0).collect(),
            CircleMap::Composite { inner, pre, .. } => {
                let back = pre.inverse();
                inner
                    .breakpoints()
                    .into_iter()
                    .map(|b| back.apply_angle(b))
                    .collect()
            }
        };
        out.sort_by(f64::total_cmp);
        out
    }

    /// `m ∘ self`.
    pub fn post_compose(self, m: Mobius) -> CircleMap {
        match self {
            CircleMap::Identity => CircleMap::Mobius(m),
            CircleMap::Mobius(h) => CircleMap::Mobius(m.compose(&h)),
            CircleMap::Composite { post, inner, pre } => CircleMap::Composite {
                post: m.compose(&post),
                inner,
                pre,
            },
            other => CircleMap::Composite {
                post: m,
                inner: Box::new(other),
                pre: Mobius::identity(),
            },
        }
    }

    /// `self ∘ m`.
    pub fn pre_compose(self, m: Mobius) -> CircleMap {
        match self {
            CircleMap::Identity => CircleMap::Mobius(m),
            CircleMap::Mobius(h) => CircleMap::Mobius(h.compose(&m)),
            CircleMap::Composite { post, inner, pre } => CircleMap::Composite {
                post,
                inner,
                pre: pre.compose(&m),
            },
            other => CircleMap::Composite {
                post: Mobius::identity(),
                inner: Box::new(other),
                pre: m,
            },
        }
    }

    /// Checks strict monotonicity and degree 1 on a uniform grid.
    pub fn check_monotone(&self, grid: usize) -> Result<()> {
        let grid = grid.max(3);
        let imgs: Vec<f64> = (0..grid)
            .map(|k| self.eval(TAU * k as f64 / grid as f64))
            .collect();
        let mut turn = 0.0;
        for k in 0..grid {
            let step = ccw_offset(imgs[k], imgs[(k + 1) % grid]);
            if step <= 0.0 {
                return Err(QuakeError::NonMonotone(format!(
                    "image order breaks near angle {:.6}",
                    TAU * k as f64 / grid as f64
                )));
            }
            turn += step;
        }
        if (turn - TAU).abs() > 1e-6 {
            return Err(QuakeError::NonMonotone(format!("degree {:.6}", turn / TAU)));
        }
        Ok(())
    }
}

/// Post-composes `h` with the Möbius map sending `h(targets)` back to
/// `targets`, so the result fixes the three target angles.
pub fn normalize_three_points(h: CircleMap, targets: [f64; 3]) -> Result<CircleMap> {
    let images = targets.map(|t| h.eval(t));
    let fix = Mobius::from_boundary_triples(images, targets)?;
    Ok(h.post_compose(fix))
}

/// Default normalization targets `1, i, −1`.
pub const STANDARD_TRIPLE: [f64; 3] = [0.0, PI / 2.0, PI];

/// Largest circle distance between `h1` and `h2` on a uniform grid.
pub fn boundary_sup_distance(h1: &CircleMap, h2: &CircleMap, grid: usize) -> f64 {
    (0..grid.max(1))
        .map(|k| {
            let x = TAU * k as f64 / grid.max(1) as f64;
            crate::hyp::circle_distance(h1.eval(x), h2.eval(x))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::earthquake::EarthquakeSpec;
    use crate::hyp::{circle_distance, DiskPoint};
    use crate::lamination::{Atom, MeasuredLamination};

    fn mob() -> Mobius {
        Mobius::from_origin(DiskPoint::from_re_im(0.3, -0.4).unwrap())
            .compose(&Mobius::rotation(0.7))
    }

    #[test]
    fn tabulated_interpolates_and_wraps() {
        let t =
            Tabulated::new(vec![(0.0, 0.5), (PI, PI + 0.5), (PI / 2.0, PI / 2.0 + 0.5)]).unwrap();
        for x in [0.1, 1.0, 2.0, 4.0, 6.2] {
            assert!(circle_distance(t.eval(x), x + 0.5) < 1e-12);
        }
        assert!(Tabulated::new(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)]).is_err());
        assert!(Tabulated::new(vec![(0.0, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn tabulated_crossing_zero_image() {
        let t = Tabulated::new(vec![(0.0, 6.0), (2.0, 1.0), (4.0, 3.0)]).unwrap();
        assert!(circle_distance(t.eval(1.0), 6.0 + (1.0 + TAU - 6.0) / 2.0) < 1e-12);
        assert!(CircleMap::Tabulated(t).check_monotone(1000).is_ok());
    }

    #[test]
    fn normalization_of_mobius_is_identity() {
        let h = CircleMap::Mobius(mob());
        let n = normalize_three_points(h, STANDARD_TRIPLE).unwrap();
        for k in 0..50 {
            let x = 0.1 + k as f64 * 0.12;
            assert!(circle_distance(n.eval(x), x) < 1e-12);
        }
    }

    #[test]
    fn normalization_keeps_fixed_map() {
        let n = normalize_three_points(CircleMap::Identity, STANDARD_TRIPLE).unwrap();
        assert!(boundary_sup_distance(&n, &CircleMap::Identity, 500) < 1e-14);
    }

    #[test]
    fn composite_and_breakpoints() {
        let mu = MeasuredLamination::validate([Atom::new(0.5, 2.0, 1.0).unwrap()]).unwrap();
        let e = CircleMap::Earthquake(EarthquakeSpec::with_default_base(mu).boundary_map());
        assert_eq!(e.breakpoints(), vec![0.5, 2.0]);
        let m = mob();
        let c = e.clone().pre_compose(m).post_compose(m.inverse());
        for x in [0.3, 1.9, 5.0] {
            let want = m.inverse().apply_angle(e.eval(m.apply_angle(x)));
            assert!(circle_distance(c.eval(x), want) < 1e-12);
        }
        for b in c.breakpoints() {
            assert!([0.5, 2.0]
                .iter()
                .any(|&p| circle_distance(m.apply_angle(b), p) < 1e-12));
        }
        assert!(c.check_monotone(10_000).is_ok());
        assert_eq!(c.provenance(), "earthquake");
    }

    #[test]
    fn sup_distance_of_rotation() {
        let r = CircleMap::Mobius(Mobius::rotation(0.3));
        assert!((boundary_sup_distance(&r, &CircleMap::Identity, 100) - 0.3).abs() < 1e-12);
    }
}
