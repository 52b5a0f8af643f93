//! Finite atomic measured laminations.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{QuakeError, Result};
use crate::hyp::{
    disk_distance, distance_to_geodesic, geodesic_distance, geodesics_disjoint, segment_crosses,
    DiskPoint, Geodesic, GeodesicSegment, Mobius, Side,
};
use crate::par::{self, Exec};

/// Weights below this are rejected.
pub const MIN_WEIGHT: f64 = 1e-12;
/// Default hyperbolic radius of the disks in the asymptotic profile.
pub const R0_DEFAULT: f64 = 0.5;
/// Inradius of an ideal triangle; disk radii must stay below it.
pub const IDEAL_TRIANGLE_INRADIUS: f64 = 0.549_306_144_334_054_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub geodesic: Geodesic,
    pub weight: f64,
}

impl Atom {
    pub fn new(a: f64, b: f64, weight: f64) -> Result<Self> {
        Ok(Self {
            geodesic: Geodesic::new(a, b)?,
            weight,
        })
    }
}

/// Per-atom side indicator identifying a stratum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StratumSignature {
    sides: Vec<Side>,
}

impl StratumSignature {
    pub fn new(sides: Vec<Side>) -> Self {
        Self { sides }
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn get(&self, atom: usize) -> Side {
        self.sides[atom]
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn on_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.sides
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Side::On)
            .map(|(i, _)| i)
    }
}

/// Closed hyperbolic disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicDisk {
    center: DiskPoint,
    radius: f64,
}

impl HyperbolicDisk {
    /// Radius must be positive and below the ideal-triangle inradius.
    pub fn new(center: DiskPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < IDEAL_TRIANGLE_INRADIUS) {
            return Err(QuakeError::InvalidParameter(format!(
                "disk radius {radius} outside (0, {IDEAL_TRIANGLE_INRADIUS})"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> DiskPoint {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Euclidean distance from the disk to the unit circle.
    pub fn boundary_gap(&self) -> f64 {
        let d0 = disk_distance(DiskPoint::origin(), self.center);
        1.0 - ((d0 + self.radius) * 0.5).tanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormWitness {
    pub value: f64,
    /// Extreme atoms of a maximizing crossing chain.
    pub pair: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledNorm {
    pub value: f64,
    pub witness: Option<GeodesicSegment>,
}

/// Finite list of pairwise disjoint weighted geodesics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasuredLamination {
    atoms: Vec<Atom>,
    // containing[h][g]: side of atom h that contains atom g (On when h == g).
    containing: Vec<Vec<Side>>,
}

impl MeasuredLamination {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Merges duplicate geodesics, rejects tiny weights and crossing pairs.
    pub fn validate(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut merged: Vec<Atom> = Vec::new();
        for (index, atom) in atoms.into_iter().enumerate() {
            if !(atom.weight >= MIN_WEIGHT) || !atom.weight.is_finite() {
                return Err(QuakeError::BadWeight {
                    index,
                    weight: atom.weight,
                });
            }
            match merged
                .iter_mut()
                .find(|a| a.geodesic.same_as(&atom.geodesic))
            {
                Some(existing) => existing.weight += atom.weight,
                None => merged.push(atom),
            }
        }
        for i in 0..merged.len() {
            for j in (i + 1)..merged.len() {
                if !geodesics_disjoint(&merged[i].geodesic, &merged[j].geodesic) {
                    return Err(QuakeError::Crossing {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        let containing = merged
            .iter()
            .enumerate()
            .map(|(h, ah)| {
                merged
                    .iter()
                    .enumerate()
                    .map(|(g, ag)| {
                        if g == h {
                            Side::On
                        } else {
                            ah.geodesic.side_containing(&ag.geodesic)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            atoms: merged,
            containing,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).fold(0.0, f64::max)
    }

    /// Side of atom `h` containing atom `g`.
    pub fn side_containing(&self, h: usize, g: usize) -> Side {
        self.containing[h][g]
    }

    /// Same lamination with every weight multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::validate(self.atoms.iter().map(|a| Atom {
            geodesic: a.geodesic,
            weight: a.weight * factor,
        }))
    }

    pub fn stratum_of_point(&self, z: DiskPoint) -> StratumSignature {
        StratumSignature::new(
            self.atoms
                .iter()
                .map(|a| a.geodesic.side(z.value()))
                .collect(),
        )
    }

    /// Signature of a boundary angle; endpoints of atoms report `On`.
    pub fn stratum_of_boundary(&self, angle: f64) -> StratumSignature {
        StratumSignature::new(
            self.atoms
                .iter()
                .map(|a| a.geodesic.boundary_side(angle))
                .collect(),
        )
    }

    /// Signature of the stratum adjacent to atom `atom` on `side`.
    pub fn stratum_beside(&self, atom: usize, side: Side) -> StratumSignature {
        StratumSignature::new(
            (0..self.len())
                .map(|h| {
                    if h == atom {
                        side
                    } else {
                        self.containing[h][atom]
                    }
                })
                .collect(),
        )
    }

    /// Checks that a signature describes a nonempty stratum, a support
    /// geodesic, or (with several `On` entries) an ideal point of a fan.
    pub fn check_realizable(&self, sig: &StratumSignature) -> Result<()> {
        if sig.len() != self.len() {
            return Err(QuakeError::Unrealizable(format!(
                "signature has {} entries for {} atoms",
                sig.len(),
                self.len()
            )));
        }
        for g in 0..self.len() {
            for h in (g + 1)..self.len() {
                let (sg, sh) = (sig.get(g), sig.get(h));
                let ok = match (sg, sh) {
                    (Side::On, Side::On) => {
                        let (a, b) = (&self.atoms[g].geodesic, &self.atoms[h].geodesic);
                        a.has_endpoint(b.p()) || a.has_endpoint(b.q())
                    }
                    (Side::On, _) => sh == self.containing[h][g],
                    (_, Side::On) => sg == self.containing[g][h],
                    _ => sg == self.containing[g][h] || sh == self.containing[h][g],
                };
                if !ok {
                    return Err(QuakeError::Unrealizable(format!(
                        "sides {sg:?} of atom {g} and {sh:?} of atom {h} do not meet"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total weight of atoms meeting the closed segment.
    pub fn deposited_on_arc(&self, s: &GeodesicSegment) -> f64 {
        self.atoms
            .iter()
            .filter(|a| segment_crosses(s, &a.geodesic))
            .map(|a| a.weight)
            .sum()
    }

    /// Exact norm: the largest total weight of a chain of atoms whose two
    /// extreme members are within distance 1.
    pub fn thurston_norm(&self) -> f64 {
        self.thurston_norm_witness(Exec::default()).value
    }

    pub fn thurston_norm_witness(&self, exec: Exec) -> NormWitness {
        let n = self.len();
        let rows = par::map_range(exec, n, |a| {
            let mut best = NormWitness {
                value: 0.0,
                pair: None,
            };
            for b in a..n {
                let d = if a == b {
                    0.0
                } else {
                    geodesic_distance(&self.atoms[a].geodesic, &self.atoms[b].geodesic)
                        .expect("validated atoms are disjoint")
                };
                if d > 1.0 + 1e-12 {
                    continue;
                }
                let mut total = self.atoms[a].weight;
                if b != a {
                    total += self.atoms[b].weight;
                }
                for h in 0..n {
                    if h != a && h != b && self.containing[h][a] != self.containing[h][b] {
                        total += self.atoms[h].weight;
                    }
                }
                if total > best.value {
                    best = NormWitness {
                        value: total,
                        pair: Some((a, b)),
                    };
                }
            }
            best
        });
        rows.into_iter().fold(
            NormWitness {
                value: 0.0,
                pair: None,
            },
            |acc, r| if r.value > acc.value { r } else { acc },
        )
    }

    /// Monte-Carlo lower estimate of the norm over random closed arcs of
    /// length 1.
    pub fn sampled_norm(&self, samples: usize, seed: u64, exec: Exec) -> SampledNorm {
        if self.is_empty() {
            return SampledNorm {
                value: 0.0,
                witness: None,
            };
        }
        let parts = par::map_chunks(exec, samples, seed, |rng, len| {
            let mut best = SampledNorm {
                value: 0.0,
                witness: None,
            };
            for _ in 0..len {
                let s = self.random_unit_arc(rng);
                let v = self.deposited_on_arc(&s);
                if v > best.value {
                    best = SampledNorm {
                        value: v,
                        witness: Some(s),
                    };
                }
            }
            best
        });
        parts.into_iter().fold(
            SampledNorm {
                value: 0.0,
                witness: None,
            },
            |acc, r| if r.value > acc.value { r } else { acc },
        )
    }

    fn random_unit_arc(&self, rng: &mut ChaCha8Rng) -> GeodesicSegment {
        let center = if rng.gen_bool(0.5) {
            let atom = &self.atoms[rng.gen_range(0..self.len())];
            atom.geodesic.point_at(rng.gen_range(-12.0..12.0))
        } else {
            let d0: f64 = rng.gen_range(0.0..14.0);
            DiskPoint::new(num_complex::Complex64::from_polar(
                (d0 * 0.5).tanh(),
                rng.gen_range(0.0..TAU),
            ))
            .unwrap_or(DiskPoint::origin())
        };
        let dir = rng.gen_range(0.0..TAU);
        let offset = rng.gen_range(0.0..1.0);
        GeodesicSegment::through(center, dir, offset, 1.0).expect("unit arc has distinct endpoints")
    }

    /// Total weight of atoms meeting the closed disk.
    pub fn disk_mass(&self, disk: &HyperbolicDisk) -> f64 {
        self.atoms
            .iter()
            .filter(|a| distance_to_geodesic(disk.center(), &a.geodesic) <= disk.radius() + 1e-12)
            .map(|a| a.weight)
            .sum()
    }

    /// Sampled supremum of [`disk_mass`](Self::disk_mass) over disks of
    /// radius `r0` whose Euclidean distance to the circle is at most `t`.
    pub fn asymptotic_profile(
        &self,
        t: f64,
        r0: f64,
        samples: usize,
        seed: u64,
        exec: Exec,
    ) -> Result<f64> {
        if !(t > 0.0) {
            return Err(QuakeError::InvalidParameter(format!(
                "t = {t} must be positive"
            )));
        }
        HyperbolicDisk::new(DiskPoint::origin(), r0)?;
        if self.is_empty() {
            return Ok(0.0);
        }
        // Disks whose center is at distance ≥ min_d0 from 0 have gap ≤ t.
        let min_d0 = if t >= 1.0 {
            0.0
        } else {
            (2.0 * (1.0 - t).atanh() - r0).max(0.0)
        };
        let parts = par::map_chunks(exec, samples, seed, |rng, len| {
            let mut best: f64 = 0.0;
            for _ in 0..len {
                let Some(center) = self.random_far_center(rng, min_d0, r0) else {
                    continue;
                };
                let disk = HyperbolicDisk { center, radius: r0 };
                if disk.boundary_gap() <= t {
                    best = best.max(self.disk_mass(&disk));
                }
            }
            best
        });
        Ok(parts.into_iter().fold(0.0, f64::max))
    }

    fn random_far_center(&self, rng: &mut ChaCha8Rng, min_d0: f64, r0: f64) -> Option<DiskPoint> {
        let origin = DiskPoint::origin();
        if rng.gen_bool(0.7) {
            let g = &self.atoms[rng.gen_range(0..self.len())].geodesic;
            let base = disk_distance(origin, g.point_at(0.0));
            let lo = (min_d0 - base).max(0.0);
            let s = rng.gen_range(lo..lo + base + 10.0);
            let s = if rng.gen_bool(0.5) { s } else { -s };
            let on_atom = g.point_at(s);
            let rho = r0 * rng.gen_range(0.0..1.0f64).sqrt();
            let shift = Mobius::from_origin(on_atom);
            let c = shift.apply_point(
                DiskPoint::new(num_complex::Complex64::from_polar(
                    (rho * 0.5).tanh(),
                    rng.gen_range(0.0..TAU),
                ))
                .ok()?,
            );
            (disk_distance(origin, c) >= min_d0).then_some(c)
        } else {
            let d0 = min_d0 + rng.gen::<f64>().ln().abs() * 3.0;
            DiskPoint::new(num_complex::Complex64::from_polar(
                (d0 * 0.5).tanh(),
                rng.gen_range(0.0..TAU),
            ))
            .ok()
        }
    }

    /// Splits into atoms meeting the closed Euclidean disk of radius `r`
    /// about 0 and the rest.
    pub fn restrict_to_disk(&self, r: f64) -> Result<(Self, Self)> {
        if !(r > 0.0 && r < 1.0) {
            return Err(QuakeError::InvalidParameter(format!(
                "radius {r} outside (0, 1)"
            )));
        }
        let (inner, outer): (Vec<Atom>, Vec<Atom>) = self.atoms.iter().partition(|a| {
            let d = distance_to_geodesic(DiskPoint::origin(), &a.geodesic);
            (d * 0.5).tanh() <= r
        });
        Ok((Self::validate(inner)?, Self::validate(outer)?))
    }

    /// Push-forward under a map of boundary angles; weights are preserved.
    pub fn pushforward(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok(Atom {
                    geodesic: Geodesic::new(f(a.geodesic.p()), f(a.geodesic.q()))?,
                    weight: a.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if atoms.len() == self.len() {
            for i in 0..atoms.len() {
                for j in (i + 1)..atoms.len() {
                    if atoms[i].geodesic.same_as(&atoms[j].geodesic) {
                        return Err(QuakeError::Degenerate(format!(
                            "atoms {i} and {j} have the same image"
                        )));
                    }
                }
            }
        }
        Self::validate(atoms)
    }

    pub fn pushforward_mobius(&self, m: &Mobius) -> Result<Self> {
        self.pushforward(|x| m.apply_angle(x))
    }
}
