//! Convergence experiments for sequences of measured laminations.

use crate::circle::{boundary_sup_distance, normalize_three_points, CircleMap, STANDARD_TRIPLE};
use crate::earthquake::{cocycle, Base, EarthquakeSpec};
use crate::error::{QuakeError, Result};
use crate::hyp::{
    circle_distance, distance_to_geodesic, isometry_to_standard_quadruple, BoundaryPoint,
    DiskPoint, Geodesic, Mobius, Side,
};
use crate::lamination::MeasuredLamination;
use crate::par::{self, Exec};

pub const WINDOW_RADIUS: f64 = 0.99;
pub const BANDWIDTH: f64 = 0.05;

/// Geodesics meeting the Euclidean disk of radius `r`, tested against
/// products of tent functions of the given bandwidth on endpoint pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestWindow {
    r: f64,
    bandwidth: f64,
}

impl Default for TestWindow {
    fn default() -> Self {
        Self {
            r: WINDOW_RADIUS,
            bandwidth: BANDWIDTH,
        }
    }
}

impl TestWindow {
    pub fn new(r: f64, bandwidth: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0 && bandwidth > 0.0 && bandwidth < 1.0) {
            return Err(QuakeError::InvalidParameter(format!(
                "window r = {r}, bandwidth = {bandwidth}"
            )));
        }
        Ok(Self { r, bandwidth })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn contains(&self, g: &Geodesic) -> bool {
        (distance_to_geodesic(DiskPoint::origin(), g) * 0.5).tanh() <= self.r
    }

    fn tent(&self, d: f64) -> f64 {
        (1.0 - d / self.bandwidth).max(0.0)
    }
}

/// Supremum over tent centers `(c₁, c₂)` of `|∫f dμ − ∫f dν|`, where
/// `f(g) = t(p − c₁)t(q − c₂) + t(q − c₁)t(p − c₂)` for `g = {p, q}` in the
/// window. The integrand is piecewise bilinear in the center, so the
/// supremum is attained at endpoint offsets by `0` or `±bandwidth`.
pub fn weak_star_discrepancy(
    mu: &MeasuredLamination,
    nu: &MeasuredLamination,
    window: &TestWindow,
) -> f64 {
    let signed: Vec<(f64, f64, f64)> = mu
        .atoms()
        .iter()
        .map(|a| (a, 1.0))
        .chain(nu.atoms().iter().map(|a| (a, -1.0)))
        .filter(|(a, _)| window.contains(&a.geodesic))
        .flat_map(|(a, s)| {
            let [p, q] = a.geodesic.endpoints();
            [(p, q, s * a.weight), (q, p, s * a.weight)]
        })
        .collect();
    if signed.is_empty() {
        return 0.0;
    }
    let bw = window.bandwidth;
    let mut centers: Vec<f64> = signed
        .iter()
        .flat_map(|&(p, _, _)| [p, p - bw, p + bw])
        .map(crate::hyp::canonical_angle)
        .collect();
    centers.sort_by(f64::total_cmp);
    centers.dedup();
    let mut best: f64 = 0.0;
    for &c1 in &centers {
        let near: Vec<(f64, f64)> = signed
            .iter()
            .filter_map(|&(p, q, w)| {
                let t = window.tent(circle_distance(p, c1));
                (t > 0.0).then_some((q, w * t))
            })
            .collect();
        if near.is_empty() {
            continue;
        }
        for &c2 in &centers {
            let v: f64 = near
                .iter()
                .map(|&(q, w)| w * window.tent(circle_distance(q, c2)))
                .sum();
            best = best.max(v.abs());
        }
    }
    best
}

/// An ordered sequence of laminations with its largest norm.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSequence {
    measures: Vec<MeasuredLamination>,
    max_norm: f64,
    pub description: Option<String>,
}

impl MeasureSequence {
    pub fn new(measures: Vec<MeasuredLamination>) -> Self {
        let max_norm = measures
            .iter()
            .map(|m| m.thurston_norm())
            .fold(0.0, f64::max);
        Self {
            measures,
            max_norm,
            description: None,
        }
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = Some(d.into());
        self
    }

    pub fn measures(&self) -> &[MeasuredLamination] {
        &self.measures
    }

    pub fn max_norm(&self) -> f64 {
        self.max_norm
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }
}

/// How boundary maps were made comparable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// Identity on the stratum of this point for every measure.
    CommonStratum(DiskPoint),
    /// Every map post-composed to fix these three angles.
    ThreePoint([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub index: usize,
    pub norm: f64,
    pub discrepancy: f64,
    pub sup_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayTable {
    pub rows: Vec<DecayRow>,
    pub normalization: Normalization,
    pub pass: bool,
}

/// Columns below this count as identically zero.
const ZERO: f64 = 1e-12;
const DECAY_RANK: f64 = 0.9;

/// Compares each measure of `seq` with `limit` by weak* discrepancy and by
/// sup distance of normalized boundary maps.
///
/// Passes when both columns vanish, or when every nonzero column decreases
/// along the sequence (Spearman against the index ≤ −0.9) and the two
/// columns are rank correlated above 0.9.
pub fn convergence_experiment(
    seq: &MeasureSequence,
    limit: &MeasuredLamination,
    grid: usize,
    window: &TestWindow,
    exec: Exec,
) -> Result<DecayTable> {
    let origin = DiskPoint::origin();
    let through_origin = |m: &MeasuredLamination| {
        m.atoms()
            .iter()
            .any(|a| a.geodesic.side(origin.value()) == Side::On)
    };
    let normalization = if seq.measures.iter().chain([limit]).any(through_origin) {
        Normalization::ThreePoint(STANDARD_TRIPLE)
    } else {
        Normalization::CommonStratum(origin)
    };
    let boundary = |m: &MeasuredLamination| -> Result<CircleMap> {
        match normalization {
            Normalization::CommonStratum(z) => Ok(CircleMap::Earthquake(
                EarthquakeSpec::new(m.clone(), Base::Point(z))?.boundary_map(),
            )),
            Normalization::ThreePoint(t) => normalize_three_points(
                CircleMap::Earthquake(EarthquakeSpec::with_default_base(m.clone()).boundary_map()),
                t,
            ),
        }
    };
    let h_limit = boundary(limit)?;
    let rows = par::map_range(exec, seq.len(), |i| -> Result<DecayRow> {
        let m = &seq.measures[i];
        Ok(DecayRow {
            index: i,
            norm: m.thurston_norm(),
            discrepancy: weak_star_discrepancy(m, limit, window),
            sup_distance: boundary_sup_distance(&boundary(m)?, &h_limit, grid),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let pass = joint_decay(&rows);
    Ok(DecayTable {
        rows,
        normalization,
        pass,
    })
}

fn joint_decay(rows: &[DecayRow]) -> bool {
    let idx: Vec<f64> = rows.iter().map(|r| r.index as f64).collect();
    let a: Vec<f64> = rows.iter().map(|r| r.discrepancy).collect();
    let b: Vec<f64> = rows.iter().map(|r| r.sup_distance).collect();
    let zero = |c: &[f64]| c.iter().all(|&x| x <= ZERO);
    if zero(&a) && zero(&b) {
        return true;
    }
    if rows.len() < 3 {
        return false;
    }
    let decays = |c: &[f64]| zero(c) || spearman(&idx, c) <= -DECAY_RANK;
    decays(&a) && decays(&b) && (zero(&a) || zero(&b) || spearman(&a, &b) > DECAY_RANK)
}

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0;
        for &k in &order[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation, with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

/// Push-forward under the isometry taking `q` to `(1, i, −1, −i)`.
pub fn rescale_by_quadruple(mu: &MeasuredLamination, q: [f64; 4]) -> Result<MeasuredLamination> {
    let m = isometry_to_standard_quadruple(q.map(BoundaryPoint::new))?;
    mu.pushforward_mobius(&m)
}

/// Push-forward under the translation along the radius through `d` that
/// takes `d` to 0.
pub fn rescale_by_disk(mu: &MeasuredLamination, d: DiskPoint) -> Result<MeasuredLamination> {
    mu.pushforward_mobius(&Mobius::to_origin(d))
}

/// Fitted correction `C = T₁^{a₁} ∘ L ∘ T₂^{a₂}` between the limit of
/// sequence cocycles `L` and the limit measure's cocycle `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub sequence_limit: Mobius,
    pub limit_cocycle: Mobius,
    /// Limit atoms through `z₁` and `z₂`, if any.
    pub atoms: [Option<usize>; 2],
    pub a1: f64,
    pub a2: f64,
    pub residual: f64,
    /// True when `C = L` without corrections.
    pub exact: bool,
}

pub const CAUCHY_WINDOW: usize = 5;
pub const CAUCHY_TOL: f64 = 1e-6;
const FIT_RANGE: f64 = 10.0;

/// Measures how the cocycle of the limit differs from the limit of the
/// cocycles along `[z₁, z₂]`. Corrections are translations along the limit
/// atoms through `z₁` and `z₂`, positive in the direction the atom would
/// contribute if it separated the two points.
pub fn cocycle_limit_defect(
    seq: &MeasureSequence,
    limit: &MeasuredLamination,
    z1: DiskPoint,
    z2: DiskPoint,
) -> Result<DefectReport> {
    if seq.len() < CAUCHY_WINDOW {
        return Err(QuakeError::NoLimit(format!(
            "need at least {CAUCHY_WINDOW} terms, have {}",
            seq.len()
        )));
    }
    let tail: Vec<Mobius> = seq.measures[seq.len() - CAUCHY_WINDOW..]
        .iter()
        .map(|m| cocycle(m, &m.stratum_of_point(z1), &m.stratum_of_point(z2)))
        .collect::<Result<_>>()?;
    let spread = tail
        .iter()
        .flat_map(|a| tail.iter().map(move |b| a.distance(b)))
        .fold(0.0, f64::max);
    if spread > CAUCHY_TOL {
        return Err(QuakeError::NoLimit(format!(
            "cocycle tail spread {spread:.3e} exceeds {CAUCHY_TOL:e}"
        )));
    }
    let l = *tail.last().expect("nonempty tail");
    let (s1, s2) = (limit.stratum_of_point(z1), limit.stratum_of_point(z2));
    let c = cocycle(limit, &s1, &s2)?;
    let on = |s: &crate::lamination::StratumSignature| s.on_atoms().next();
    let atoms = [on(&s1), on(&s2)];
    let t1 = |a: f64| match atoms[0] {
        Some(g) => {
            let geo = &limit.atoms()[g].geodesic;
            let o = geo.orientation_with_left(s2.get(g).opposite());
            Mobius::translation_along(geo, a, o)
        }
        None => Mobius::identity(),
    };
    let t2 = |a: f64| match atoms[1] {
        Some(g) => {
            let geo = &limit.atoms()[g].geodesic;
            let o = geo.orientation_with_left(s1.get(g));
            Mobius::translation_along(geo, a, o)
        }
        None => Mobius::identity(),
    };
    let objective = |a1: f64, a2: f64| t1(a1).compose(&l).compose(&t2(a2)).distance(&c);
    let direct = l.distance(&c);
    if direct <= CAUCHY_TOL {
        return Ok(DefectReport {
            sequence_limit: l,
            limit_cocycle: c,
            atoms,
            a1: 0.0,
            a2: 0.0,
            residual: direct,
            exact: true,
        });
    }
    let free = [atoms[0].is_some(), atoms[1].is_some()];
    let (a1, a2) = fit_two(&objective, free);
    Ok(DefectReport {
        sequence_limit: l,
        limit_cocycle: c,
        atoms,
        a1,
        a2,
        residual: objective(a1, a2),
        exact: false,
    })
}

/// Coarse grid, then alternating golden-section searches.
fn fit_two(f: &dyn Fn(f64, f64) -> f64, free: [bool; 2]) -> (f64, f64) {
    let steps = 80;
    let axis = |on: bool| -> Vec<f64> {
        if on {
            (0..=steps)
                .map(|k| -FIT_RANGE + 2.0 * FIT_RANGE * k as f64 / steps as f64)
                .collect()
        } else {
            vec![0.0]
        }
    };
    let (xs, ys) = (axis(free[0]), axis(free[1]));
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for &x in &xs {
        for &y in &ys {
            let v = f(x, y);
            if v < best.0 {
                best = (v, x, y);
            }
        }
    }
    let (_, mut x, mut y) = best;
    let h = 2.0 * FIT_RANGE / steps as f64;
    let mut width = h;
    for _ in 0..60 {
        let (px, py) = (x, y);
        if free[0] {
            x = golden_min(
                |t| f(t, y),
                (x - width).max(-FIT_RANGE),
                (x + width).min(FIT_RANGE),
            );
        }
        if free[1] {
            y = golden_min(
                |t| f(x, t),
                (y - width).max(-FIT_RANGE),
                (y + width).min(FIT_RANGE),
            );
        }
        if (x - px).abs() + (y - py).abs() < 1e-13 {
            break;
        }
        width = ((x - px).abs() + (y - py).abs()).max(1e-9) * 4.0;
        width = width.min(h);
    }
    (x, y)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Sequence of single atoms whose endpoints approach `(p, q)` like `ε/(i+1)`.
pub fn endpoint_perturbation(
    p: f64,
    q: f64,
    weight: f64,
    eps: f64,
    len: usize,
) -> Result<(MeasureSequence, MeasuredLamination)> {
    let atom = |dp: f64, dq: f64| crate::lamination::Atom::new(p + dp, q + dq, weight);
    let measures = (0..len)
        .map(|i| {
            let e = eps / (i + 1) as f64;
            MeasuredLamination::validate([atom(e, -0.5 * e)?])
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = MeasuredLamination::validate([atom(0.0, 0.0)?])?;
    Ok((MeasureSequence::new(measures), limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::Atom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn single(a: f64, b: f64, w: f64) -> MeasuredLamination {
        MeasuredLamination::validate([Atom::new(a, b, w).unwrap()]).unwrap()
    }

    #[test]
    fn discrepancy_examples() {
        let w = TestWindow::default();
        let mu = single(0.3, 2.5, 1.2);
        assert_eq!(weak_star_discrepancy(&mu, &mu, &w), 0.0);
        let heavier = single(0.3, 2.5, 1.5);
        assert!((weak_star_discrepancy(&mu, &heavier, &w) - 0.3).abs() < 1e-12);
        for eps in [0.001, 0.01, 0.03] {
            let moved = single(0.3 + eps, 2.5, 1.2);
            let d = weak_star_discrepancy(&mu, &moved, &w);
            assert!(d <= 1.2 * eps / BANDWIDTH + 1e-12 && d > 0.0);
        }
        let far = single(0.3, 0.31, 5.0);
        assert_eq!(
            weak_star_discrepancy(&far, &MeasuredLamination::empty(), &w),
            0.0
        );
    }

    #[test]
    fn discrepancy_is_a_pseudometric() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let w = TestWindow::default();
        let rand_lam = |rng: &mut ChaCha8Rng| {
            let a = rng.gen_range(0.0..TAU);
            MeasuredLamination::validate([
                Atom::new(a, a + rng.gen_range(0.5..3.0), rng.gen_range(0.1..2.0)).unwrap(),
                Atom::new(
                    a + 3.2,
                    a + 3.2 + rng.gen_range(0.5..2.5),
                    rng.gen_range(0.1..2.0),
                )
                .unwrap(),
            ])
            .unwrap()
        };
        for _ in 0..30 {
            let (x, y, z) = (rand_lam(&mut rng), rand_lam(&mut rng), rand_lam(&mut rng));
            let (xy, yx) = (
                weak_star_discrepancy(&x, &y, &w),
                weak_star_discrepancy(&y, &x, &w),
            );
            assert!((xy - yx).abs() < 1e-12);
            let xz = weak_star_discrepancy(&x, &z, &w);
            let zy = weak_star_discrepancy(&z, &y, &w);
            assert!(xy <= xz + zy + 1e-12);
        }
    }

    #[test]
    fn dense_grid_never_exceeds_exact_sup() {
        let w = TestWindow::default();
        let mu = MeasuredLamination::validate([
            Atom::new(0.3, 2.5, 1.2).unwrap(),
            Atom::new(3.0, 5.0, 0.7).unwrap(),
        ])
        .unwrap();
        let nu = MeasuredLamination::validate([Atom::new(0.33, 2.48, 1.0).unwrap()]).unwrap();
        let exact = weak_star_discrepancy(&mu, &nu, &w);
        let f = |m: &MeasuredLamination, c1: f64, c2: f64| -> f64 {
            m.atoms()
                .iter()
                .map(|a| {
                    let [p, q] = a.geodesic.endpoints();
                    a.weight
                        * (w.tent(circle_distance(p, c1)) * w.tent(circle_distance(q, c2))
                            + w.tent(circle_distance(q, c1)) * w.tent(circle_distance(p, c2)))
                })
                .sum()
        };
        let n = 1200;
        let mut grid_best: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (c1, c2) = (TAU * i as f64 / n as f64, TAU * j as f64 / n as f64);
                grid_best = grid_best.max((f(&mu, c1, c2) - f(&nu, c1, c2)).abs());
            }
        }
        assert!(grid_best <= exact + 1e-12);
        assert!(exact - grid_best < 0.08, "{exact} vs {grid_best}");
    }

    #[test]
    fn constant_sequence_passes_with_zero_table() {
        let mu = single(1.0, 2.5, 0.8);
        let seq = MeasureSequence::new(vec![mu.clone(); 6]);
        let t = convergence_experiment(&seq, &mu, 500, &TestWindow::default(), Exec::Sequential)
            .unwrap();
        assert!(t.pass);
        assert!(t
            .rows
            .iter()
            .all(|r| r.discrepancy == 0.0 && r.sup_distance == 0.0));
        assert_eq!(
            t.normalization,
            Normalization::CommonStratum(DiskPoint::origin())
        );
    }

    #[test]
    fn perturbation_sequence_decays() {
        let (seq, limit) = endpoint_perturbation(1.0, 2.5, 1.0, 0.04, 20).unwrap();
        let t =
            convergence_experiment(&seq, &limit, 2000, &TestWindow::default(), Exec::Sequential)
                .unwrap();
        assert!(t.pass, "{:?}", t.rows);
    }

    #[test]
    fn alternating_sequence_fails() {
        let (a, b) = (single(1.0, 2.5, 1.0), single(4.0, 5.5, 1.0));
        let seq = MeasureSequence::new(
            (0..20)
                .map(|i| if i % 2 == 0 { a.clone() } else { b.clone() })
                .collect(),
        );
        let t = convergence_experiment(&seq, &a, 500, &TestWindow::default(), Exec::Sequential)
            .unwrap();
        assert!(!t.pass);
    }

    #[test]
    fn spearman_basics() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-15);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
        assert_eq!(ranks(&[2.0, 1.0, 2.0]), vec![1.5, 0.0, 1.5]);
    }

    #[test]
    fn rescaling_preserves_norm_and_mass() {
        let mu = MeasuredLamination::validate([
            Atom::new(0.2, 1.0, 0.5).unwrap(),
            Atom::new(1.1, 2.0, 0.7).unwrap(),
            Atom::new(3.0, 5.0, 0.3).unwrap(),
        ])
        .unwrap();
        let m = Mobius::from_origin(DiskPoint::from_re_im(0.6, -0.3).unwrap());
        let q = [0.0, PI / 2.0, PI, 1.5 * PI].map(|x| m.apply_angle(x));
        let r = rescale_by_quadruple(&mu, q).unwrap();
        assert!((r.thurston_norm() - mu.thurston_norm()).abs() < 1e-9);
        let std = [0.0, PI / 2.0, PI, 1.5 * PI];
        assert_eq!(rescale_by_quadruple(&mu, std).unwrap().len(), 3);
        let d = DiskPoint::from_re_im(0.3, 0.6).unwrap();
        let moved = rescale_by_disk(&mu, d).unwrap();
        let before = mu.disk_mass(&crate::lamination::HyperbolicDisk::new(d, 0.5).unwrap());
        let after = moved
            .disk_mass(&crate::lamination::HyperbolicDisk::new(DiskPoint::origin(), 0.5).unwrap());
        assert_eq!(before, after);
        assert_eq!(rescale_by_disk(&mu, DiskPoint::origin()).unwrap(), mu);
    }

    #[test]
    fn constant_sequence_has_no_defect() {
        let mu = single(0.5, 2.0, 1.0);
        let seq = MeasureSequence::new(vec![mu.clone(); 6]);
        let r = cocycle_limit_defect(
            &seq,
            &mu,
            DiskPoint::origin(),
            DiskPoint::from_re_im(0.0, 0.9).unwrap(),
        )
        .unwrap();
        assert!(r.exact && r.residual < 1e-9);
    }

    #[test]
    fn oscillating_tail_has_no_limit() {
        let (a, b) = (single(0.5, 2.0, 1.0), single(0.5, 2.0, 2.0));
        let seq = MeasureSequence::new(
            (0..8)
                .map(|i| if i % 2 == 0 { a.clone() } else { b.clone() })
                .collect(),
        );
        let r = cocycle_limit_defect(
            &seq,
            &a,
            DiskPoint::origin(),
            DiskPoint::from_re_im(0.0, 0.9).unwrap(),
        );
        assert!(matches!(r, Err(QuakeError::NoLimit(_))));
    }
}
