//! Earthquake cocycles and maps along finite measured laminations.
//!
//! The cocycle between strata `A` and `B` is the product of left
//! translations along the atoms crossed on the way from `A` to `B`,
//! written in source coordinates with the factor nearest `A` outermost:
//! `cocycle(A, B) = T₁ ∘ T₂ ∘ ⋯ ∘ T_k`. With this order the map is a
//! piecewise isometry whose boundary values agree across every atom.
//!
//! An atom through a query point counts as crossed (closed arcs), with the
//! translation taken from the far side.

use std::f64::consts::TAU;

use crate::error::{QuakeError, Result};
use crate::hyp::{
    angles_coincide, canonical_angle, ccw_offset, disk_distance, DiskPoint, Geodesic, Mobius,
    Orientation, Side,
};
use crate::lamination::{MeasuredLamination, StratumSignature};

/// How an earthquake is pinned down: identity on the stratum of a point,
/// or identity on one side of a designated atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Base {
    Point(DiskPoint),
    AtomSide { atom: usize, side: Side },
}

/// A separating atom together with the orientation of its left translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub atom: usize,
    pub orientation: Orientation,
}

/// A translation between two strata with its axis and length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonIsometry {
    pub value: Mobius,
    pub axis: Geodesic,
    pub length: f64,
}

/// Atoms crossed going from stratum `a` to stratum `b`, nearest `a` first.
pub fn separating_atoms(
    mu: &MeasuredLamination,
    a: &StratumSignature,
    b: &StratumSignature,
) -> Result<Vec<Crossing>> {
    mu.check_realizable(a)?;
    mu.check_realizable(b)?;
    let crossed: Vec<usize> = (0..mu.len())
        .filter(|&g| {
            let (sa, sb) = (a.get(g), b.get(g));
            sa != sb && !(sa == Side::On && sb == Side::On)
        })
        .collect();
    let mut ranked: Vec<(usize, usize)> = crossed
        .iter()
        .map(|&h| {
            let rank = crossed
                .iter()
                .filter(|&&g| g != h && mu.side_containing(h, g) == a.get(h))
                .count();
            (rank, h)
        })
        .collect();
    ranked.sort_unstable();
    Ok(ranked
        .into_iter()
        .map(|(_, g)| {
            let orientation = match a.get(g) {
                Side::On => mu.atoms()[g]
                    .geodesic
                    .orientation_with_left(b.get(g).opposite()),
                side => mu.atoms()[g].geodesic.orientation_with_left(side),
            };
            Crossing {
                atom: g,
                orientation,
            }
        })
        .collect())
}

/// Earthquake cocycle from stratum `a` to stratum `b`.
pub fn cocycle(
    mu: &MeasuredLamination,
    a: &StratumSignature,
    b: &StratumSignature,
) -> Result<Mobius> {
    let crossings = separating_atoms(mu, a, b)?;
    Ok(product(mu, &crossings))
}

fn product(mu: &MeasuredLamination, crossings: &[Crossing]) -> Mobius {
    crossings.iter().fold(Mobius::identity(), |acc, c| {
        let atom = &mu.atoms()[c.atom];
        acc.compose(&Mobius::translation_along(
            &atom.geodesic,
            atom.weight,
            c.orientation,
        ))
    })
}

/// Comparison isometry between two adjacent strata, with its axis.
pub fn adjacent_comparison(
    mu: &MeasuredLamination,
    a: &StratumSignature,
    b: &StratumSignature,
) -> Result<ComparisonIsometry> {
    let crossings = separating_atoms(mu, a, b)?;
    if crossings.len() != 1 {
        return Err(QuakeError::InvalidParameter(format!(
            "strata are separated by {} atoms, not one",
            crossings.len()
        )));
    }
    let atom = &mu.atoms()[crossings[0].atom];
    Ok(ComparisonIsometry {
        value: product(mu, &crossings),
        axis: atom.geodesic,
        length: atom.weight,
    })
}

/// A measure together with its normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct EarthquakeSpec {
    measure: MeasuredLamination,
    base: Base,
    base_sig: StratumSignature,
}

impl EarthquakeSpec {
    pub fn new(measure: MeasuredLamination, base: Base) -> Result<Self> {
        let base_sig = match base {
            Base::Point(z) => measure.stratum_of_point(z),
            Base::AtomSide { atom, side } => {
                if atom >= measure.len() || side == Side::On {
                    return Err(QuakeError::InvalidParameter(format!(
                        "base atom {atom} side {side:?} is not a stratum"
                    )));
                }
                measure.stratum_beside(atom, side)
            }
        };
        measure.check_realizable(&base_sig)?;
        Ok(Self {
            measure,
            base,
            base_sig,
        })
    }

    /// Identity on the stratum of 0, or when 0 lies on an atom, on the
    /// stratum just clockwise of angle 0.
    pub fn with_default_base(measure: MeasuredLamination) -> Self {
        let origin = DiskPoint::origin();
        let through_origin = measure
            .atoms()
            .iter()
            .position(|a| a.geodesic.side(origin.value()) == Side::On);
        let base = match through_origin {
            None => Base::Point(origin),
            Some(atom) => {
                let g = &measure.atoms()[atom].geodesic;
                let side = match g.boundary_side(-1e-9) {
                    Side::On => g.boundary_side(-1e-6),
                    s => s,
                };
                Base::AtomSide { atom, side }
            }
        };
        Self::new(measure, base).expect("default base is always realizable")
    }

    pub fn measure(&self) -> &MeasuredLamination {
        &self.measure
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn base_signature(&self) -> &StratumSignature {
        &self.base_sig
    }

    /// Restriction of the earthquake to the stratum with signature `sig`.
    pub fn isometry_on(&self, sig: &StratumSignature) -> Result<Mobius> {
        cocycle(&self.measure, &self.base_sig, sig)
    }

    pub fn map_point(&self, z: DiskPoint) -> DiskPoint {
        let sig = self.measure.stratum_of_point(z);
        self.isometry_on(&sig)
            .expect("point signatures are realizable")
            .apply_point(z)
    }

    /// Piecewise-Möbius boundary homeomorphism of this earthquake.
    pub fn boundary_map(&self) -> EarthquakeBoundary {
        EarthquakeBoundary::new(self)
    }

    /// Same measure, normalized on another base.
    pub fn rebased(&self, base: Base) -> Result<Self> {
        Self::new(self.measure.clone(), base)
    }
}

/// The comparison isometry `E|_B ∘ (E|_A)⁻¹` of a normalized
/// earthquake, acting in image coordinates.
pub fn comparison_isometry(
    spec: &EarthquakeSpec,
    a: &StratumSignature,
    b: &StratumSignature,
) -> Result<Mobius> {
    Ok(spec
        .isometry_on(b)?
        .compose(&spec.isometry_on(a)?.inverse()))
}

/// Boundary values of an earthquake: Möbius on each arc between
/// consecutive atom endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct EarthquakeBoundary {
    breaks: Vec<f64>,
    // pieces[i] acts on the arc from breaks[i] counterclockwise to breaks[i+1].
    pieces: Vec<Mobius>,
}

impl EarthquakeBoundary {
    fn new(spec: &EarthquakeSpec) -> Self {
        let mut breaks: Vec<f64> = spec
            .measure
            .atoms()
            .iter()
            .flat_map(|a| a.geodesic.endpoints())
            .collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| angles_coincide(*a, *b));
        if breaks.len() > 1 && angles_coincide(breaks[0], *breaks.last().unwrap()) {
            breaks.pop();
        }
        if breaks.is_empty() {
            let sig = spec.measure.stratum_of_boundary(0.0);
            let m = spec
                .isometry_on(&sig)
                .expect("boundary signatures are realizable");
            return Self {
                breaks: vec![0.0],
                pieces: vec![m],
            };
        }
        let n = breaks.len();
        let pieces = (0..n)
            .map(|i| {
                let from = breaks[i];
                let span = if n == 1 {
                    TAU
                } else {
                    ccw_offset(from, breaks[(i + 1) % n])
                };
                let sig = spec.measure.stratum_of_boundary(from + span * 0.5);
                spec.isometry_on(&sig)
                    .expect("boundary signatures are realizable")
            })
            .collect();
        Self { breaks, pieces }
    }

    /// Atom endpoints, sorted; the map is Möbius between consecutive ones.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Mobius] {
        &self.pieces
    }

    fn piece_index(&self, angle: f64) -> usize {
        let x = canonical_angle(angle);
        // Last break at or before x; wraps to the final arc.
        match self.breaks.partition_point(|&b| b <= x) {
            0 => self.breaks.len() - 1,
            k => k - 1,
        }
    }

    pub fn eval(&self, angle: f64) -> f64 {
        self.pieces[self.piece_index(angle)].apply_angle(angle)
    }

    /// Evaluation using the arc ending at `angle` instead of the one
    /// starting there; differs from [`eval`](Self::eval) only at breakpoints.
    pub fn eval_from_left(&self, angle: f64) -> f64 {
        let k = self.piece_index(angle);
        let idx = if angles_coincide(self.breaks[k], angle) && self.breaks.len() > 1 {
            (k + self.breaks.len() - 1) % self.breaks.len()
        } else {
            k
        };
        self.pieces[idx].apply_angle(angle)
    }
}

/// Largest decrease `d(z₁, z₂) − d(E z₁, E z₂)` over sampled pairs.
pub fn quasi_isometry_defect(spec: &EarthquakeSpec, pairs: &[(DiskPoint, DiskPoint)]) -> f64 {
    pairs
        .iter()
        .map(|&(z1, z2)| {
            disk_distance(z1, z2) - disk_distance(spec.map_point(z1), spec.map_point(z2))
        })
        .fold(
            if pairs.is_empty() {
                0.0
            } else {
                f64::NEG_INFINITY
            },
            f64::max,
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::{segment_crossing, GeodesicSegment, C64};
    use crate::lamination::Atom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn lam(atoms: &[(f64, f64, f64)]) -> MeasuredLamination {
        MeasuredLamination::validate(atoms.iter().map(|&(a, b, w)| Atom::new(a, b, w).unwrap()))
            .unwrap()
    }

    fn pt(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn empty_measure_is_identity() {
        let mu = MeasuredLamination::empty();
        let s = mu.stratum_of_point(pt(0.2, 0.3));
        assert_eq!(cocycle(&mu, &s, &s).unwrap(), Mobius::identity());
        let spec = EarthquakeSpec::with_default_base(mu);
        let h = spec.boundary_map();
        for x in [0.0, 1.0, 4.0] {
            assert!((h.eval(x) - x).abs() < 1e-15);
        }
    }

    #[test]
    fn single_atom_cocycle_is_left_translation() {
        let mu = lam(&[(0.0, PI, 1.5)]);
        let below = mu.stratum_of_point(pt(0.0, -0.5));
        let above = mu.stratum_of_point(pt(0.0, 0.5));
        assert_eq!(separating_atoms(&mu, &below, &below).unwrap(), vec![]);
        let c = cocycle(&mu, &below, &above).unwrap();
        // Lower half-disk on the left means traversing 1 → −1.
        let expected =
            Mobius::translation_along(&mu.atoms()[0].geodesic, 1.5, Orientation::Forward);
        assert!(c.approx_eq(&expected, 1e-14));
        let (_, attracting) = c.hyperbolic_fixed_points().unwrap();
        assert!((attracting - PI).abs() < 1e-12);
        let cmp = adjacent_comparison(&mu, &below, &above).unwrap();
        assert_eq!(cmp.length, 1.5);
    }

    #[test]
    fn earthquake_on_upper_half() {
        let mu = lam(&[(0.0, PI, 1.0)]);
        let spec = EarthquakeSpec::new(mu.clone(), Base::Point(pt(0.0, -0.5))).unwrap();
        let z = pt(0.0, 0.5);
        let t = Mobius::translation_along(&mu.atoms()[0].geodesic, 1.0, Orientation::Forward);
        assert!((spec.map_point(z).value() - t.apply(z.value())).norm() < 1e-14);
        let below = pt(0.3, -0.2);
        assert_eq!(spec.map_point(below), below);
        // Seen from below, the upper half slides left, toward −1.
        assert!(spec.map_point(z).value().re < 0.0);
    }

    #[test]
    fn nested_family_in_diameter_order() {
        let mu = lam(&[
            (1.2, 1.9, 1.0),
            (0.2, 2.9, 1.0),
            (0.9, 2.2, 1.0),
            (0.5, 2.6, 1.0),
            (1.4, 1.7, 1.0),
        ]);
        let z1 = pt(0.0, -0.3);
        let z2 = pt(0.0, 0.999_9);
        let order =
            separating_atoms(&mu, &mu.stratum_of_point(z1), &mu.stratum_of_point(z2)).unwrap();
        let seg = GeodesicSegment::new(z1, z2).unwrap();
        let mut oracle: Vec<(f64, usize)> = (0..mu.len())
            .filter_map(|i| segment_crossing(&seg, &mu.atoms()[i].geodesic).map(|t| (t, i)))
            .collect();
        oracle.sort_by(|a, b| a.0.total_cmp(&b.0));
        let got: Vec<usize> = order.iter().map(|c| c.atom).collect();
        let want: Vec<usize> = oracle.iter().map(|x| x.1).collect();
        assert_eq!(got, want);
        assert_eq!(got, vec![1, 3, 2, 0, 4]);
    }

    fn random_lamination(rng: &mut ChaCha8Rng, n: usize) -> MeasuredLamination {
        let mut atoms: Vec<Atom> = Vec::new();
        while atoms.len() < n {
            let a = rng.gen_range(0.0..TAU);
            let b = a + rng.gen_range(0.05..PI);
            let cand = Atom::new(a, b, rng.gen_range(0.1..1.0)).unwrap();
            if atoms
                .iter()
                .all(|x| crate::hyp::geodesics_disjoint(&x.geodesic, &cand.geodesic))
            {
                atoms.push(cand);
            }
        }
        MeasuredLamination::validate(atoms).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng) -> DiskPoint {
        DiskPoint::new(C64::from_polar(
            rng.gen_range(0.0..0.97),
            rng.gen_range(0.0..TAU),
        ))
        .unwrap()
    }

    #[test]
    fn cocycle_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let mu = random_lamination(&mut rng, 10);
            let sigs: Vec<_> = (0..6)
                .map(|_| mu.stratum_of_point(random_point(&mut rng)))
                .collect();
            for a in &sigs {
                assert!(cocycle(&mu, a, a)
                    .unwrap()
                    .approx_eq(&Mobius::identity(), 1e-15));
                for b in &sigs {
                    let ab = cocycle(&mu, a, b).unwrap();
                    let ba = cocycle(&mu, b, a).unwrap();
                    assert!(ab.compose(&ba).approx_eq(&Mobius::identity(), 1e-9));
                    for c in &sigs {
                        let ac = cocycle(&mu, a, c).unwrap();
                        let bc = cocycle(&mu, b, c).unwrap();
                        let scale = ac.entries()[0].norm().max(1.0);
                        assert!(ab.compose(&bc).approx_eq(&ac, 1e-10 * scale * scale));
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_map_is_continuous_and_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let mu = random_lamination(&mut rng, 8);
            let spec = EarthquakeSpec::with_default_base(mu.clone());
            let h = spec.boundary_map();
            for atom in mu.atoms() {
                for e in atom.geodesic.endpoints() {
                    let d = crate::hyp::circle_distance(h.eval(e), h.eval_from_left(e));
                    assert!(d < 1e-10, "jump {d}");
                }
            }
            let n = 1000;
            let imgs: Vec<f64> = (0..n).map(|k| h.eval(TAU * k as f64 / n as f64)).collect();
            let total: f64 = (0..n).map(|k| ccw_offset(imgs[k], imgs[(k + 1) % n])).sum();
            assert!((total - TAU).abs() < 1e-9);
        }
    }

    #[test]
    fn on_atom_points_use_far_side() {
        let mu = lam(&[(0.0, PI, 1.0)]);
        let spec = EarthquakeSpec::new(mu.clone(), Base::Point(pt(0.0, -0.5))).unwrap();
        let z = pt(0.3, 0.0);
        let t = Mobius::translation_along(&mu.atoms()[0].geodesic, 1.0, Orientation::Forward);
        assert!((spec.map_point(z).value() - t.apply(z.value())).norm() < 1e-14);
    }

    #[test]
    fn base_change_post_composes() {
        let mu = lam(&[(0.0, PI, 1.0), (0.3, 0.9, 0.5), (3.5, 5.5, 0.7)]);
        let s1 = EarthquakeSpec::new(mu.clone(), Base::Point(pt(0.0, -0.2))).unwrap();
        let s2 = EarthquakeSpec::new(
            mu.clone(),
            Base::AtomSide {
                atom: 1,
                side: Side::Right,
            },
        )
        .unwrap();
        let (h1, h2) = (s1.boundary_map(), s2.boundary_map());
        let fit = Mobius::from_boundary_triples(
            [h1.eval(0.1), h1.eval(2.0), h1.eval(4.0)],
            [h2.eval(0.1), h2.eval(2.0), h2.eval(4.0)],
        )
        .unwrap();
        for k in 0..100 {
            let x = TAU * k as f64 / 100.0 + 0.003;
            let d = crate::hyp::circle_distance(fit.apply_angle(h1.eval(x)), h2.eval(x));
            assert!(d < 1e-8);
        }
    }

    #[test]
    fn defect_statistic() {
        let spec = EarthquakeSpec::with_default_base(MeasuredLamination::empty());
        let pairs = vec![(pt(0.1, 0.2), pt(-0.4, 0.5))];
        assert!(quasi_isometry_defect(&spec, &pairs).abs() < 1e-12);
        assert_eq!(quasi_isometry_defect(&spec, &[]), 0.0);
    }

    #[test]
    fn bad_base_rejected() {
        let mu = lam(&[(0.0, PI, 1.0)]);
        assert!(EarthquakeSpec::new(
            mu.clone(),
            Base::AtomSide {
                atom: 3,
                side: Side::Left
            }
        )
        .is_err());
        assert!(EarthquakeSpec::new(
            mu,
            Base::AtomSide {
                atom: 0,
                side: Side::On
            }
        )
        .is_err());
    }

    #[test]
    fn default_base_when_origin_on_atom() {
        let mu = lam(&[(0.5, 0.5 + PI, 1.0)]);
        let spec = EarthquakeSpec::with_default_base(mu);
        // Just clockwise of angle 0 lies on the Left of (0.5, 0.5 + π).
        assert_eq!(
            spec.base(),
            Base::AtomSide {
                atom: 0,
                side: Side::Left
            }
        );
    }
}
