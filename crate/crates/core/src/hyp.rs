//! Hyperbolic-plane primitives in the Poincaré disk (curvature −1).
//!
//! Boundary points are carried as angles so circular order stays exact;
//! complex numbers appear only inside formulas.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{QuakeError, Result};

pub type C64 = Complex64;

/// Tolerance for deciding that two boundary angles coincide.
pub const ANGLE_EPS: f64 = 1e-12;
/// Tolerance on the side function for a point lying on a geodesic.
pub const ON_EPS: f64 = 1e-13;

/// Reduces an angle into `[0, 2π)`.
pub fn canonical_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counterclockwise offset from `from` to `to`, in `[0, 2π)`.
pub fn ccw_offset(from: f64, to: f64) -> f64 {
    canonical_angle(to - from)
}

/// Length of the shorter arc between two angles.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = ccw_offset(a, b);
    d.min(TAU - d)
}

pub fn angles_coincide(a: f64, b: f64) -> bool {
    circle_distance(a, b) <= ANGLE_EPS
}

fn unit(angle: f64) -> C64 {
    C64::from_polar(1.0, angle)
}

/// Chord length between two boundary angles.
fn chord(a: f64, b: f64) -> f64 {
    2.0 * ((b - a) * 0.5).sin().abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(C64);

impl DiskPoint {
    pub fn new(z: C64) -> Result<Self> {
        if z.norm() < 1.0 && z.is_finite() {
            Ok(Self(z))
        } else {
            Err(QuakeError::OutsideDisk(format!("{z}")))
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(C64::new(re, im))
    }

    pub fn origin() -> Self {
        Self(C64::new(0.0, 0.0))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BoundaryPoint(f64);

impl BoundaryPoint {
    pub fn new(angle: f64) -> Self {
        Self(canonical_angle(angle))
    }

    pub fn from_complex(z: C64) -> Self {
        Self::new(z.arg())
    }

    pub fn angle(self) -> f64 {
        self.0
    }

    pub fn to_complex(self) -> C64 {
        unit(self.0)
    }
}

/// Orientation-preserving isometry of the disk, `z ↦ (a z + b)/(b̄ z + ā)`
/// with `|a|² − |b|² = 1`. `M` and `−M` act identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    a: C64,
    b: C64,
}

impl Mobius {
    pub fn identity() -> Self {
        Self {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
        }
    }

    /// Builds the isometry with upper row `(a, b)`, rescaling to unit
    /// determinant. Fails unless `|a| > |b|`.
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !(det > 0.0) || !det.is_finite() {
            return Err(QuakeError::Degenerate(format!(
                "|a|² − |b|² = {det} is not positive"
            )));
        }
        let s = det.sqrt();
        Ok(Self { a: a / s, b: b / s }.canonical_sign())
    }

    fn canonical_sign(self) -> Self {
        if self.a.re < 0.0 || (self.a.re == 0.0 && self.a.im < 0.0) {
            Self {
                a: -self.a,
                b: -self.b,
            }
        } else {
            self
        }
    }

    fn renormalized(a: C64, b: C64) -> Self {
        let det = a.norm_sqr() - b.norm_sqr();
        let s = det.sqrt();
        Self { a: a / s, b: b / s }.canonical_sign()
    }

    /// Rotation `z ↦ e^{iφ} z`.
    pub fn rotation(phi: f64) -> Self {
        Self::renormalized(unit(phi * 0.5), C64::new(0.0, 0.0))
    }

    /// Hyperbolic translation along the real diameter by `t`, toward `+1`
    /// when `t > 0`.
    pub fn real_translation(t: f64) -> Self {
        let h = t * 0.5;
        Self {
            a: C64::new(h.cosh(), 0.0),
            b: C64::new(h.sinh(), 0.0),
        }
    }

    /// The translation along the diameter through `c` mapping `0` to `c`.
    pub fn from_origin(c: DiskPoint) -> Self {
        Self::renormalized(C64::new(1.0, 0.0), c.value())
    }

    /// The translation along the diameter through `c` mapping `c` to `0`.
    pub fn to_origin(c: DiskPoint) -> Self {
        Self::renormalized(C64::new(1.0, 0.0), -c.value())
    }

    /// Entries `(a, b, c, d)` of the unit-determinant matrix.
    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.b.conj(), self.a.conj()]
    }

    pub fn determinant(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    pub fn apply(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    pub fn apply_point(&self, z: DiskPoint) -> DiskPoint {
        let w = self.apply(z.value());
        // Rounding can push a point at distance ~1e-16 from S¹ outward.
        let n = w.norm();
        if n < 1.0 {
            DiskPoint(w)
        } else {
            DiskPoint(w / n * (1.0 - f64::EPSILON))
        }
    }

    /// Image of a boundary angle.
    pub fn apply_angle(&self, angle: f64) -> f64 {
        canonical_angle(self.apply(unit(angle)).arg())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let a = self.a * other.a + self.b * other.b.conj();
        let b = self.a * other.b + self.b * other.a.conj();
        Self::renormalized(a, b)
    }

    pub fn inverse(&self) -> Mobius {
        Self {
            a: self.a.conj(),
            b: -self.b,
        }
        .canonical_sign()
    }

    /// Largest entrywise difference, minimized over the sign ambiguity.
    pub fn distance(&self, other: &Mobius) -> f64 {
        let plus = (self.a - other.a).norm().max((self.b - other.b).norm());
        let minus = (self.a + other.a).norm().max((self.b + other.b).norm());
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &Mobius, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// |trace| of the matrix; greater than 2 for hyperbolic elements.
    pub fn trace_abs(&self) -> f64 {
        2.0 * self.a.re.abs()
    }

    /// Translation length for hyperbolic elements, 0 otherwise.
    pub fn translation_length(&self) -> f64 {
        let half = self.a.re.abs();
        if half <= 1.0 {
            0.0
        } else {
            2.0 * half.acosh()
        }
    }

    /// Boundary fixed points `(repelling, attracting)` of a hyperbolic
    /// element.
    pub fn hyperbolic_fixed_points(&self) -> Option<(f64, f64)> {
        if self.a.re.abs() <= 1.0 + 1e-15 {
            return None;
        }
        // Fixed points solve b̄ z² + (ā − a) z − b = 0.
        let qa = self.b.conj();
        let qb = self.a.conj() - self.a;
        let qc = -self.b;
        if qa.norm() < 1e-300 {
            return None;
        }
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        let z1 = (-qb + disc) / (2.0 * qa);
        let z2 = (-qb - disc) / (2.0 * qa);
        // Derivative at a fixed point is 1/(b̄ z + ā)²; attracting has |·| < 1.
        let deriv = |z: C64| 1.0 / (self.b.conj() * z + self.a.conj()).norm_sqr();
        let (rep, att) = if deriv(z1) < deriv(z2) {
            (z2, z1)
        } else {
            (z1, z2)
        };
        Some((canonical_angle(rep.arg()), canonical_angle(att.arg())))
    }

    /// The unique isometry mapping three counterclockwise boundary angles
    /// `src` onto three counterclockwise boundary angles `dst`.
    pub fn from_boundary_triples(src: [f64; 3], dst: [f64; 3]) -> Result<Mobius> {
        let to_std = |pts: [f64; 3]| -> Result<[C64; 4]> {
            let [z1, z2, z3] = pts.map(unit);
            if (z1 - z2).norm() < ANGLE_EPS
                || (z2 - z3).norm() < ANGLE_EPS
                || (z1 - z3).norm() < ANGLE_EPS
            {
                return Err(QuakeError::Degenerate(format!(
                    "boundary triple {pts:?} has coincident points"
                )));
            }
            Ok([z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)])
        };
        let s = to_std(src)?;
        let d = to_std(dst)?;
        // dst⁻¹ ∘ src in GL₂(ℂ).
        let inv = [d[3], -d[1], -d[2], d[0]];
        let m = [
            inv[0] * s[0] + inv[1] * s[2],
            inv[0] * s[1] + inv[1] * s[3],
            inv[2] * s[0] + inv[3] * s[2],
            inv[2] * s[1] + inv[3] * s[3],
        ];
        let det = (m[0] * m[3] - m[1] * m[2]).sqrt();
        let m = m.map(|x| x / det);
        let scale = m[0].norm().max(m[1].norm());
        let symmetric = (m[3] - m[0].conj()).norm().max((m[2] - m[1].conj()).norm());
        if symmetric > 1e-6 * scale.max(1.0) {
            return Err(QuakeError::Degenerate(format!(
                "triples {src:?} → {dst:?} do not have matching orientation"
            )));
        }
        Mobius::new(m[0], m[1])
    }

    /// Hyperbolic translation along `g` by signed length `t`; for `t > 0`
    /// the attracting fixed point is the terminal endpoint of `orientation`.
    pub fn translation_along(g: &Geodesic, t: f64, orientation: Orientation) -> Mobius {
        if t == 0.0 {
            return Mobius::identity();
        }
        let (start, end) = g.oriented(orientation);
        let (u, v) = (unit(start), unit(end));
        let (ch, sh) = ((t * 0.5).cosh(), (t * 0.5).sinh());
        let a = ch + sh * (v + u) / (v - u);
        let b = -2.0 * sh * u * v / (v - u);
        Self::renormalized(a, b)
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} , {}]", self.a, self.b)
    }
}

/// Which way a geodesic is traversed, relative to its canonical endpoint
/// order `p < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// From `p` to `q`.
    Forward,
    /// From `q` to `p`.
    Backward,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
        }
    }
}

/// Position of a point relative to a geodesic traversed forward (`p → q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    On,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::On => Side::On,
        }
    }
}

/// Unoriented complete geodesic, endpoints stored with `p < q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    p: f64,
    q: f64,
}

impl Geodesic {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let (a, b) = (canonical_angle(a), canonical_angle(b));
        if angles_coincide(a, b) {
            return Err(QuakeError::Degenerate(format!(
                "geodesic endpoints {a} and {b} coincide"
            )));
        }
        Ok(if a < b {
            Self { p: a, q: b }
        } else {
            Self { p: b, q: a }
        })
    }

    pub fn from_points(a: BoundaryPoint, b: BoundaryPoint) -> Result<Self> {
        Self::new(a.angle(), b.angle())
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn endpoints(&self) -> [f64; 2] {
        [self.p, self.q]
    }

    pub fn has_endpoint(&self, angle: f64) -> bool {
        angles_coincide(self.p, angle) || angles_coincide(self.q, angle)
    }

    pub fn same_as(&self, other: &Geodesic) -> bool {
        angles_coincide(self.p, other.p) && angles_coincide(self.q, other.q)
    }

    /// `(start, end)` angles for a given orientation.
    pub fn oriented(&self, orientation: Orientation) -> (f64, f64) {
        match orientation {
            Orientation::Forward => (self.p, self.q),
            Orientation::Backward => (self.q, self.p),
        }
    }

    /// Isometry carrying the real diameter traversed from −1 to 1 onto this
    /// geodesic traversed in `orientation`.
    pub fn frame(&self, orientation: Orientation) -> Mobius {
        let (start, end) = self.oriented(orientation);
        let mid = start + ccw_offset(start, end) * 0.5;
        Mobius::from_boundary_triples([PI, 1.5 * PI, 0.0], [start, mid, end])
            .expect("distinct endpoints give a valid frame")
    }

    /// Point at signed arc length `s` from the frame's base point.
    pub fn point_at(&self, s: f64) -> DiskPoint {
        self.frame(Orientation::Forward)
            .apply_point(DiskPoint(C64::new((s * 0.5).tanh(), 0.0)))
    }

    /// Signed side function: positive to the left of `p → q`, zero on the
    /// geodesic. Smooth across diameters.
    pub fn side_value(&self, z: C64) -> f64 {
        let half = (self.q - self.p) * 0.5;
        let mid = self.p + half;
        half.cos() * (z.norm_sqr() + 1.0) - 2.0 * (z * unit(-mid)).re
    }

    pub fn side(&self, z: C64) -> Side {
        let s = self.side_value(z);
        if s.abs() <= ON_EPS {
            Side::On
        } else if s > 0.0 {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// Side of a boundary angle: the counterclockwise arc from `p` to `q`
    /// lies to the right.
    pub fn boundary_side(&self, angle: f64) -> Side {
        if self.has_endpoint(angle) {
            Side::On
        } else {
            let a = canonical_angle(angle);
            if a > self.p && a < self.q {
                Side::Right
            } else {
                Side::Left
            }
        }
    }

    /// Side of `self` that contains the disjoint geodesic `other`.
    pub fn side_containing(&self, other: &Geodesic) -> Side {
        let s1 = self.boundary_side(other.p);
        if s1 != Side::On {
            s1
        } else {
            self.boundary_side(other.q)
        }
    }

    /// Orientation with `side` on the left.
    pub fn orientation_with_left(&self, side: Side) -> Orientation {
        match side {
            Side::Right => Orientation::Backward,
            _ => Orientation::Forward,
        }
    }
}

impl fmt::Display for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSegment {
    u: DiskPoint,
    v: DiskPoint,
}

impl GeodesicSegment {
    pub fn new(u: DiskPoint, v: DiskPoint) -> Result<Self> {
        if u == v {
            return Err(QuakeError::Degenerate("segment endpoints coincide".into()));
        }
        Ok(Self { u, v })
    }

    pub fn start(&self) -> DiskPoint {
        self.u
    }

    pub fn end(&self) -> DiskPoint {
        self.v
    }

    pub fn length(&self) -> f64 {
        disk_distance(self.u, self.v)
    }

    /// Segment of length `length` through `center` in direction `dir`,
    /// starting `offset` before the center.
    pub fn through(center: DiskPoint, dir: f64, offset: f64, length: f64) -> Result<Self> {
        let m = Mobius::from_origin(center);
        let at = |t: f64| m.apply_point(DiskPoint(unit(dir) * (t * 0.5).tanh()));
        Self::new(at(-offset), at(length - offset))
    }

    pub fn apply(&self, m: &Mobius) -> GeodesicSegment {
        GeodesicSegment {
            u: m.apply_point(self.u),
            v: m.apply_point(self.v),
        }
    }
}

/// Cross-ratio `((a−c)(b−d)) / ((a−d)(b−c))`.
pub fn cross_ratio(a: C64, b: C64, c: C64, d: C64) -> Result<C64> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (pts[i] - pts[j]).norm() == 0.0 {
                return Err(QuakeError::Degenerate(format!(
                    "cross-ratio points {i} and {j} coincide"
                )));
            }
        }
    }
    Ok(((a - c) * (b - d)) / ((a - d) * (b - c)))
}

/// Cross-ratio of four counterclockwise boundary angles, evaluated through
/// chord lengths; accurate for nearly coincident points.
pub fn circle_cross_ratio(q: [f64; 4]) -> f64 {
    let [a, b, c, d] = q;
    (chord(a, c) * chord(b, d)) / (chord(a, d) * chord(b, c))
}

/// True if the four angles are in strict counterclockwise cyclic order.
pub fn is_ccw_quadruple(q: [f64; 4]) -> bool {
    let o1 = ccw_offset(q[0], q[1]);
    let o2 = ccw_offset(q[0], q[2]);
    let o3 = ccw_offset(q[0], q[3]);
    0.0 < o1 && o1 < o2 && o2 < o3
}

pub fn disk_distance(z1: DiskPoint, z2: DiskPoint) -> f64 {
    let (a, b) = (z1.value(), z2.value());
    let r = ((a - b) / (C64::new(1.0, 0.0) - a.conj() * b)).norm();
    2.0 * r.min(1.0).atanh()
}

/// Hyperbolic distance from `z` to the geodesic `g`.
pub fn distance_to_geodesic(z: DiskPoint, g: &Geodesic) -> f64 {
    let m = Mobius::to_origin(z);
    let u = m.apply(unit(g.p));
    let v = m.apply(unit(g.q));
    ((u + v).norm() * 0.5).min(1.0).atanh()
}

/// The isometry sending a counterclockwise cross-ratio-2 quadruple onto
/// `(1, i, −1, −i)`.
pub fn isometry_to_standard_quadruple(q: [BoundaryPoint; 4]) -> Result<Mobius> {
    let angles = q.map(|p| p.angle());
    if !is_ccw_quadruple(angles) {
        return Err(QuakeError::InvalidQuadruple(format!(
            "{angles:?} is not counterclockwise"
        )));
    }
    let cr = circle_cross_ratio(angles);
    if (cr - 2.0).abs() > 1e-9 {
        return Err(QuakeError::InvalidQuadruple(format!(
            "cross-ratio {cr} differs from 2"
        )));
    }
    let m = Mobius::from_boundary_triples([angles[0], angles[1], angles[2]], [0.0, 0.5 * PI, PI])?;
    let last = m.apply_angle(angles[3]);
    if circle_distance(last, 1.5 * PI) > 1e-7 {
        return Err(QuakeError::InvalidQuadruple(format!(
            "fourth point lands at {last}"
        )));
    }
    Ok(m)
}

/// True iff the endpoint pairs are unlinked on the circle. Geodesics that
/// share an ideal endpoint do not meet inside the disk.
pub fn geodesics_disjoint(g: &Geodesic, h: &Geodesic) -> bool {
    let s1 = g.boundary_side(h.p);
    let s2 = g.boundary_side(h.q);
    !matches!(
        (s1, s2),
        (Side::Left, Side::Right) | (Side::Right, Side::Left)
    )
}

/// Infimum of the distance between two disjoint geodesics; zero when they
/// share an ideal endpoint.
pub fn geodesic_distance(g: &Geodesic, h: &Geodesic) -> Result<f64> {
    if !geodesics_disjoint(g, h) {
        return Err(QuakeError::CrossingPair);
    }
    if g.has_endpoint(h.p) || g.has_endpoint(h.q) {
        return Ok(0.0);
    }
    // Order x1 < x2 < x3 < x4 counterclockwise with g = {x1, x4}.
    let start = if g.side_containing(h) == Side::Right {
        g.p
    } else {
        g.q
    };
    let end = if start == g.p { g.q } else { g.p };
    let (mut h1, mut h2) = (h.p, h.q);
    if ccw_offset(start, h2) < ccw_offset(start, h1) {
        std::mem::swap(&mut h1, &mut h2);
    }
    let excess = chord(start, h1) * chord(h2, end) / (chord(start, end) * chord(h1, h2));
    Ok(2.0 * excess.max(0.0).sqrt().asinh())
}

/// Where the closed segment `s` meets `g`, as a fraction of its length from
/// the start; `None` if it does not.
pub fn segment_crossing(s: &GeodesicSegment, g: &Geodesic) -> Option<f64> {
    let su = g.side_value(s.u.value());
    let sv = g.side_value(s.v.value());
    let on = |x: f64| x.abs() <= ON_EPS;
    if on(su) {
        return Some(0.0);
    }
    if on(sv) {
        return Some(1.0);
    }
    if (su > 0.0) == (sv > 0.0) {
        return None;
    }
    // Move the start to 0; the segment becomes a radius.
    let m = Mobius::to_origin(s.u);
    let v = m.apply(s.v.value());
    let radius = v.norm();
    let image = Geodesic::new(m.apply_angle(g.p), m.apply_angle(g.q)).ok()?;
    let half = (image.q - image.p) * 0.5;
    let c = half.cos();
    let k = (v / radius * unit(-(image.p + half))).re;
    // c r² − 2 k r + c = 0; roots are reciprocal, take the one inside.
    let disc = (k * k - c * c).max(0.0).sqrt();
    let qq = k + k.signum() * disc;
    let r = if qq == 0.0 {
        0.0
    } else {
        (c / qq).clamp(0.0, radius)
    };
    Some((r.atanh() / radius.atanh()).clamp(0.0, 1.0))
}

pub fn segment_crosses(s: &GeodesicSegment, g: &Geodesic) -> bool {
    let su = g.side_value(s.u.value());
    let sv = g.side_value(s.v.value());
    su.abs() <= ON_EPS || sv.abs() <= ON_EPS || (su > 0.0) != (sv > 0.0)
}
