//! Bordered diagrams, domains, and the expected dimension count.
//!
//! A diagram is recorded purely combinatorially: intersection points tagged
//! by the α-object and β-circle through them, and regions carrying an Euler
//! characteristic, convex and concave corner counts, the list of local
//! sectors they own at each point (numbered 0..=3 counterclockwise), and
//! the multiplicity with which they run along each boundary segment of the
//! matched circle. A domain assigns an integer multiplicity to every
//! region.
//!
//! The expected dimension of a domain from x to y against a sequence of
//! chord sets is e(B) + n_x(B) + n_y(B) + ι(ρ⃗) + |ρ⃗|: the Euler measure
//! corrects χ by a quarter per corner, the point measures average the four
//! local multiplicities, and the chord sequence term comes from the grading
//! module. All arithmetic is exact rational; a non-integer total is an
//! error, never a rounding.

use crate::algebra::ChordSet;
use crate::grading::{sequence_maslov, HomologyClass};
use crate::pmc::PointedMatchedCircle;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("point id {0} appears twice")]
    DuplicatePointId(usize),
    #[error("point {point} references α-{kind} {alpha}, but only {max} exist")]
    AlphaOutOfRange { point: usize, kind: &'static str, alpha: usize, max: usize },
    #[error("point {point} references β-circle {beta}, but only {max} exist")]
    BetaOutOfRange { point: usize, beta: usize, max: usize },
    #[error("region {region} lists quadrants for unknown point {point}")]
    UnknownQuadrantPoint { region: usize, point: usize },
    #[error("region {region} lists sector {sector} at point {point}; sectors run 0..=3")]
    BadSector { region: usize, point: usize, sector: u8 },
    #[error("region {region} repeats sector {sector} at point {point}")]
    RepeatedSector { region: usize, point: usize, sector: u8 },
    #[error("region {region} has {got} boundary segments, expected {expected}")]
    WrongSegmentLength { region: usize, expected: usize, got: usize },
    #[error("α-arc count {got} does not match the circle's {expected} handles")]
    ArcCountMismatch { expected: usize, got: usize },
    #[error("domain has {got} multiplicities for {expected} regions")]
    WrongDomainLength { expected: usize, got: usize },
    #[error("unknown point id {0} in a generator")]
    UnknownPoint(usize),
    #[error("generator touches β-circle {beta} {count} times, expected once")]
    BetaCount { beta: usize, count: usize },
    #[error("generator touches α-circle {circle} {count} times, expected once")]
    AlphaCircleCount { circle: usize, count: usize },
    #[error("generator touches α-arc {arc} {count} times")]
    ArcOverused { arc: usize, count: usize },
    #[error("corner defect at point {point} is {got}, expected {want}")]
    CornerDefect { point: usize, got: i64, want: i64 },
    #[error("domain boundary {got:?} does not match the chord sequence total {want:?}")]
    BoundaryMismatch { got: Vec<i64>, want: Vec<i64> },
    #[error("domain boundary {0:?} is nonzero on a closed count")]
    BoundaryNonzero(Vec<i64>),
    #[error("index sum {0} is not an integer")]
    NonIntegralIndex(Rational64),
}

/// An intersection point of an α-object and a β-circle. `arc` selects
/// whether `alpha` indexes an α-arc or an α-circle.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IntersectionPoint {
    pub id: usize,
    pub alpha: usize,
    pub beta: usize,
    pub arc: bool,
}

/// One region of the complement: Euler characteristic, corner counts, the
/// local sectors it owns at each point, and its run along the boundary.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RegionData {
    pub chi: i64,
    pub convex: u32,
    pub concave: u32,
    pub quadrants: BTreeMap<usize, Vec<u8>>,
    pub bseg: Vec<i64>,
}

/// An integer multiplicity per region; the basepoint region is excluded by
/// never being listed.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BorderedDomain {
    pub mult: Vec<i64>,
}

/// A tuple of intersection points, one per β-circle.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub points: BTreeSet<usize>,
}

/// A bordered diagram in combinatorial form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawDiagramData", into = "RawDiagramData")]
pub struct BorderedDiagramData {
    pmc: PointedMatchedCircle,
    num_alpha_arcs: usize,
    num_alpha_circles: usize,
    num_beta: usize,
    points: Vec<IntersectionPoint>,
    regions: Vec<RegionData>,
}

#[derive(Serialize, Deserialize)]
struct RawDiagramData {
    pmc: PointedMatchedCircle,
    num_alpha_arcs: usize,
    num_alpha_circles: usize,
    num_beta: usize,
    points: Vec<IntersectionPoint>,
    regions: Vec<RegionData>,
}

impl TryFrom<RawDiagramData> for BorderedDiagramData {
    type Error = DiagramError;
    fn try_from(raw: RawDiagramData) -> Result<Self, DiagramError> {
        BorderedDiagramData::new(
            raw.pmc,
            raw.num_alpha_arcs,
            raw.num_alpha_circles,
            raw.num_beta,
            raw.points,
            raw.regions,
        )
    }
}

impl From<BorderedDiagramData> for RawDiagramData {
    fn from(d: BorderedDiagramData) -> RawDiagramData {
        RawDiagramData {
            pmc: d.pmc,
            num_alpha_arcs: d.num_alpha_arcs,
            num_alpha_circles: d.num_alpha_circles,
            num_beta: d.num_beta,
            points: d.points,
            regions: d.regions,
        }
    }
}

impl BorderedDiagramData {
    pub fn new(
        pmc: PointedMatchedCircle,
        num_alpha_arcs: usize,
        num_alpha_circles: usize,
        num_beta: usize,
        points: Vec<IntersectionPoint>,
        regions: Vec<RegionData>,
    ) -> Result<Self, DiagramError> {
        if num_alpha_arcs != pmc.num_handles() {
            return Err(DiagramError::ArcCountMismatch {
                expected: pmc.num_handles(),
                got: num_alpha_arcs,
            });
        }
        let mut ids = BTreeSet::new();
        for p in &points {
            if !ids.insert(p.id) {
                return Err(DiagramError::DuplicatePointId(p.id));
            }
            let (kind, max) = if p.arc {
                ("arc", num_alpha_arcs)
            } else {
                ("circle", num_alpha_circles)
            };
            if p.alpha >= max {
                return Err(DiagramError::AlphaOutOfRange {
                    point: p.id,
                    kind,
                    alpha: p.alpha,
                    max,
                });
            }
            if p.beta >= num_beta {
                return Err(DiagramError::BetaOutOfRange {
                    point: p.id,
                    beta: p.beta,
                    max: num_beta,
                });
            }
        }
        let expected_segments = pmc.num_points().saturating_sub(1);
        for (r, region) in regions.iter().enumerate() {
            if region.bseg.len() != expected_segments {
                return Err(DiagramError::WrongSegmentLength {
                    region: r,
                    expected: expected_segments,
                    got: region.bseg.len(),
                });
            }
            for (&point, sectors) in &region.quadrants {
                if !ids.contains(&point) {
                    return Err(DiagramError::UnknownQuadrantPoint { region: r, point });
                }
                let mut seen = [false; 4];
                for &sector in sectors {
                    if sector > 3 {
                        return Err(DiagramError::BadSector { region: r, point, sector });
                    }
                    if seen[sector as usize] {
                        return Err(DiagramError::RepeatedSector { region: r, point, sector });
                    }
                    seen[sector as usize] = true;
                }
            }
        }
        Ok(BorderedDiagramData {
            pmc,
            num_alpha_arcs,
            num_alpha_circles,
            num_beta,
            points,
            regions,
        })
    }

    pub fn pmc(&self) -> &PointedMatchedCircle {
        &self.pmc
    }

    pub fn regions(&self) -> &[RegionData] {
        &self.regions
    }

    pub fn points(&self) -> &[IntersectionPoint] {
        &self.points
    }

    fn point(&self, id: usize) -> Result<&IntersectionPoint, DiagramError> {
        self.points
            .iter()
            .find(|p| p.id == id)
            .ok_or(DiagramError::UnknownPoint(id))
    }

    fn check_domain(&self, domain: &BorderedDomain) -> Result<(), DiagramError> {
        if domain.mult.len() != self.regions.len() {
            return Err(DiagramError::WrongDomainLength {
                expected: self.regions.len(),
                got: domain.mult.len(),
            });
        }
        Ok(())
    }

    /// Checks one-point-per-β-circle, one per α-circle, at most one per arc.
    pub fn validate_generator(&self, generator: &Generator) -> Result<(), DiagramError> {
        let mut beta = vec![0usize; self.num_beta];
        let mut circles = vec![0usize; self.num_alpha_circles];
        let mut arcs = vec![0usize; self.num_alpha_arcs];
        for &id in &generator.points {
            let p = self.point(id)?;
            beta[p.beta] += 1;
            if p.arc {
                arcs[p.alpha] += 1;
            } else {
                circles[p.alpha] += 1;
            }
        }
        for (b, &count) in beta.iter().enumerate() {
            if count != 1 {
                return Err(DiagramError::BetaCount { beta: b, count });
            }
        }
        for (c, &count) in circles.iter().enumerate() {
            if count != 1 {
                return Err(DiagramError::AlphaCircleCount { circle: c, count });
            }
        }
        for (a, &count) in arcs.iter().enumerate() {
            if count > 1 {
                return Err(DiagramError::ArcOverused { arc: a, count });
            }
        }
        Ok(())
    }

    /// All generators: one point from every β-circle, subject to the
    /// α-constraints.
    pub fn enumerate_generators(&self) -> Vec<Generator> {
        let mut by_beta: Vec<Vec<usize>> = vec![Vec::new(); self.num_beta];
        for p in &self.points {
            by_beta[p.beta].push(p.id);
        }
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        fn pick(
            diagram: &BorderedDiagramData,
            by_beta: &[Vec<usize>],
            beta: usize,
            chosen: &mut Vec<usize>,
            out: &mut Vec<Generator>,
        ) {
            if beta == by_beta.len() {
                let generator = Generator { points: chosen.iter().copied().collect() };
                if diagram.validate_generator(&generator).is_ok() {
                    out.push(generator);
                }
                return;
            }
            for &id in &by_beta[beta] {
                chosen.push(id);
                pick(diagram, by_beta, beta + 1, chosen, out);
                chosen.pop();
            }
        }
        pick(self, &by_beta, 0, &mut chosen, &mut out);
        out.sort();
        out
    }

    /// Euler measure e(B) = Σ B_r (χ_r − convex_r/4 + concave_r/4).
    pub fn euler_measure(&self, domain: &BorderedDomain) -> Result<Rational64, DiagramError> {
        self.check_domain(domain)?;
        let mut total = Rational64::from_integer(0);
        for (region, &b) in self.regions.iter().zip(&domain.mult) {
            let corners =
                Rational64::new(region.concave as i64 - region.convex as i64, 4);
            total += Rational64::from_integer(b)
                * (Rational64::from_integer(region.chi) + corners);
        }
        Ok(total)
    }

    /// Point measure n_x(B): a quarter of the local multiplicity of B in
    /// the four sectors at each point of x.
    pub fn point_measure(
        &self,
        domain: &BorderedDomain,
        generator: &Generator,
    ) -> Result<Rational64, DiagramError> {
        self.check_domain(domain)?;
        let mut quarters = 0i64;
        for &id in &generator.points {
            self.point(id)?;
            for (region, &b) in self.regions.iter().zip(&domain.mult) {
                if let Some(sectors) = region.quadrants.get(&id) {
                    quarters += b * sectors.len() as i64;
                }
            }
        }
        Ok(Rational64::new(quarters, 4))
    }

    /// Total multiplicity of the domain along the boundary segments.
    pub fn boundary_reeb(&self, domain: &BorderedDomain) -> Result<HomologyClass, DiagramError> {
        self.check_domain(domain)?;
        let mut segments = vec![0i64; self.pmc.num_points().saturating_sub(1)];
        for (region, &b) in self.regions.iter().zip(&domain.mult) {
            for (seg, &m) in region.bseg.iter().enumerate() {
                segments[seg] += b * m;
            }
        }
        Ok(HomologyClass::new(segments))
    }

    /// Checks the corner defect of the domain at every point: the sectors
    /// 0 and 2 minus the sectors 1 and 3 must total +1 at points of y only,
    /// −1 at points of x only, 0 elsewhere.
    pub fn validate_domain(
        &self,
        domain: &BorderedDomain,
        x: &Generator,
        y: &Generator,
    ) -> Result<(), DiagramError> {
        self.check_domain(domain)?;
        for p in &self.points {
            let mut got = 0i64;
            for (region, &b) in self.regions.iter().zip(&domain.mult) {
                if let Some(sectors) = region.quadrants.get(&p.id) {
                    for &sector in sectors {
                        got += if sector % 2 == 0 { b } else { -b };
                    }
                }
            }
            let in_x = x.points.contains(&p.id);
            let in_y = y.points.contains(&p.id);
            let want = match (in_x, in_y) {
                (true, false) => -1,
                (false, true) => 1,
                _ => 0,
            };
            if got != want {
                return Err(DiagramError::CornerDefect { point: p.id, got, want });
            }
        }
        Ok(())
    }

    /// Expected dimension of a domain against a sequence of chord sets:
    /// e(B) + n_x(B) + n_y(B) + ι(ρ⃗) + |ρ⃗|. The domain's boundary must
    /// total the classes of the sequence, and the sum must be an integer.
    pub fn index(
        &self,
        domain: &BorderedDomain,
        x: &Generator,
        y: &Generator,
        sequence: &[ChordSet],
    ) -> Result<i64, DiagramError> {
        let boundary = self.boundary_reeb(domain)?;
        let want = sequence.iter().fold(
            HomologyClass::zero(self.pmc.num_points()),
            |acc, set| acc.add(&HomologyClass::of_chords(set, self.pmc.num_points())),
        );
        if boundary != want {
            return Err(DiagramError::BoundaryMismatch {
                got: boundary.segments().to_vec(),
                want: want.segments().to_vec(),
            });
        }
        let iota = sequence_maslov(sequence);
        let total = self.euler_measure(domain)?
            + self.point_measure(domain, x)?
            + self.point_measure(domain, y)?
            + Rational64::new(iota.twice(), 2)
            + Rational64::from_integer(sequence.len() as i64);
        if !total.is_integer() {
            return Err(DiagramError::NonIntegralIndex(total));
        }
        Ok(total.to_integer())
    }

    /// Expected dimension of a provincial domain: e(B) + n_x(B) + n_y(B),
    /// requiring zero boundary multiplicity.
    pub fn closed_index(
        &self,
        domain: &BorderedDomain,
        x: &Generator,
        y: &Generator,
    ) -> Result<i64, DiagramError> {
        let boundary = self.boundary_reeb(domain)?;
        if !boundary.is_zero() {
            return Err(DiagramError::BoundaryNonzero(boundary.segments().to_vec()));
        }
        let total = self.euler_measure(domain)?
            + self.point_measure(domain, x)?
            + self.point_measure(domain, y)?;
        if !total.is_integer() {
            return Err(DiagramError::NonIntegralIndex(total));
        }
        Ok(total.to_integer())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ReebChord;

    fn generator(ids: &[usize]) -> Generator {
        Generator { points: ids.iter().copied().collect() }
    }

    fn point(id: usize, alpha: usize, beta: usize, arc: bool) -> IntersectionPoint {
        IntersectionPoint { id, alpha, beta, arc }
    }

    fn set(chords: &[(usize, usize)]) -> ChordSet {
        ChordSet::new(chords.iter().map(|&(a, b)| ReebChord::new(a, b).unwrap())).unwrap()
    }

    /// One bigon between an α-circle and a β-circle, no boundary.
    fn closed_bigon() -> BorderedDiagramData {
        let pmc = PointedMatchedCircle::new(vec![]).unwrap();
        BorderedDiagramData::new(
            pmc,
            0,
            1,
            1,
            vec![point(0, 0, 0, false), point(1, 0, 0, false)],
            vec![RegionData {
                chi: 1,
                convex: 2,
                concave: 0,
                quadrants: BTreeMap::from([(0, vec![1]), (1, vec![0])]),
                bseg: vec![],
            }],
        )
        .unwrap()
    }

    #[test]
    fn closed_bigon_has_index_one() {
        let diagram = closed_bigon();
        let domain = BorderedDomain { mult: vec![1] };
        let x = generator(&[0]);
        let y = generator(&[1]);
        diagram.validate_generator(&x).unwrap();
        diagram.validate_domain(&domain, &x, &y).unwrap();
        assert_eq!(diagram.euler_measure(&domain).unwrap(), Rational64::new(1, 2));
        assert_eq!(diagram.point_measure(&domain, &x).unwrap(), Rational64::new(1, 4));
        assert_eq!(diagram.closed_index(&domain, &x, &y).unwrap(), 1);
    }

    #[test]
    fn zero_domain_has_index_zero() {
        let diagram = closed_bigon();
        let domain = BorderedDomain { mult: vec![0] };
        let x = generator(&[0]);
        diagram.validate_domain(&domain, &x, &x).unwrap();
        assert_eq!(diagram.closed_index(&domain, &x, &x).unwrap(), 0);
    }

    #[test]
    fn corner_defects_catch_wrong_connecting_data() {
        let diagram = closed_bigon();
        let domain = BorderedDomain { mult: vec![1] };
        let x = generator(&[0]);
        let y = generator(&[1]);
        // Swapping x and y flips every expected defect.
        assert!(matches!(
            diagram.validate_domain(&domain, &y, &x),
            Err(DiagramError::CornerDefect { .. })
        ));
    }

    /// A square: two α-circles, two β-circles, four corners, one region.
    #[test]
    fn closed_square_has_index_one() {
        let pmc = PointedMatchedCircle::new(vec![]).unwrap();
        let diagram = BorderedDiagramData::new(
            pmc,
            0,
            2,
            2,
            vec![
                point(0, 0, 0, false),
                point(1, 0, 1, false),
                point(2, 1, 1, false),
                point(3, 1, 0, false),
            ],
            vec![RegionData {
                chi: 1,
                convex: 4,
                concave: 0,
                quadrants: BTreeMap::from([
                    (0, vec![1]),
                    (1, vec![0]),
                    (2, vec![1]),
                    (3, vec![0]),
                ]),
                bseg: vec![],
            }],
        )
        .unwrap();
        let domain = BorderedDomain { mult: vec![1] };
        let x = generator(&[0, 2]);
        let y = generator(&[1, 3]);
        diagram.validate_generator(&x).unwrap();
        diagram.validate_generator(&y).unwrap();
        diagram.validate_domain(&domain, &x, &y).unwrap();
        assert_eq!(diagram.euler_measure(&domain).unwrap(), Rational64::from_integer(0));
        assert_eq!(diagram.closed_index(&domain, &x, &y).unwrap(), 1);
    }

    /// A bigon eaten into the boundary: two of its corners are the
    /// endpoints of the chord [1,2].
    fn boundary_bigon() -> BorderedDiagramData {
        let pmc = PointedMatchedCircle::new(vec![1, 2, 1, 2]).unwrap();
        BorderedDiagramData::new(
            pmc,
            2,
            0,
            1,
            vec![point(0, 0, 0, true), point(1, 0, 0, true)],
            vec![RegionData {
                chi: 1,
                convex: 4,
                concave: 0,
                quadrants: BTreeMap::from([(0, vec![1]), (1, vec![0])]),
                bseg: vec![1, 0, 0],
            }],
        )
        .unwrap()
    }

    #[test]
    fn boundary_bigon_has_index_one() {
        let diagram = boundary_bigon();
        let domain = BorderedDomain { mult: vec![1] };
        let x = generator(&[0]);
        let y = generator(&[1]);
        diagram.validate_domain(&domain, &x, &y).unwrap();
        let sequence = [set(&[(1, 2)])];
        assert_eq!(diagram.index(&domain, &x, &y, &sequence).unwrap(), 1);
    }

    #[test]
    fn boundary_mismatch_is_rejected() {
        let diagram = boundary_bigon();
        let domain = BorderedDomain { mult: vec![1] };
        let x = generator(&[0]);
        let y = generator(&[1]);
        assert!(matches!(
            diagram.index(&domain, &x, &y, &[set(&[(2, 3)])]),
            Err(DiagramError::BoundaryMismatch { .. })
        ));
        assert!(matches!(
            diagram.closed_index(&domain, &x, &y),
            Err(DiagramError::BoundaryNonzero(_))
        ));
    }

    /// Two half-bigons on disjoint handles of a genus-2 circle.
    #[test]
    fn disjoint_half_bigons_add_indices() {
        let pmc = PointedMatchedCircle::new(vec![1, 2, 1, 2, 3, 4, 3, 4]).unwrap();
        let diagram = BorderedDiagramData::new(
            pmc,
            4,
            0,
            2,
            vec![
                point(0, 0, 0, true),
                point(1, 0, 0, true),
                point(2, 2, 1, true),
                point(3, 2, 1, true),
            ],
            vec![
                RegionData {
                    chi: 1,
                    convex: 4,
                    concave: 0,
                    quadrants: BTreeMap::from([(0, vec![1]), (1, vec![0])]),
                    bseg: vec![1, 0, 0, 0, 0, 0, 0],
                },
                RegionData {
                    chi: 1,
                    convex: 4,
                    concave: 0,
                    quadrants: BTreeMap::from([(2, vec![1]), (3, vec![0])]),
                    bseg: vec![0, 0, 0, 0, 1, 0, 0],
                },
            ],
        )
        .unwrap();
        let domain = BorderedDomain { mult: vec![1, 1] };
        let x = generator(&[0, 2]);
        let y = generator(&[1, 3]);
        diagram.validate_generator(&x).unwrap();
        diagram.validate_domain(&domain, &x, &y).unwrap();
        let sequence = [set(&[(1, 2)]), set(&[(5, 6)])];
        assert_eq!(diagram.index(&domain, &x, &y, &sequence).unwrap(), 2);
        // The disjoint-chord identity: with ι = −q/2 the chord terms cancel
        // and the index reduces to the closed-shape measure alone.
        assert_eq!(
            sequence_maslov(&sequence),
            crate::halfint::HalfInteger::from_int(-1)
        );
    }

    #[test]
    fn generator_validation_catches_misuse() {
        let diagram = closed_bigon();
        assert!(matches!(
            diagram.validate_generator(&generator(&[0, 1])),
            Err(DiagramError::BetaCount { beta: 0, count: 2 })
        ));
        assert!(matches!(
            diagram.validate_generator(&generator(&[7])),
            Err(DiagramError::UnknownPoint(7))
        ));
        assert_eq!(diagram.enumerate_generators().len(), 2);
    }

    #[test]
    fn malformed_data_is_rejected() {
        let pmc = PointedMatchedCircle::new(vec![1, 2, 1, 2]).unwrap();
        // Arc count must match the handles of the circle.
        assert!(matches!(
            BorderedDiagramData::new(pmc.clone(), 3, 0, 1, vec![], vec![]),
            Err(DiagramError::ArcCountMismatch { expected: 2, got: 3 })
        ));
        // Boundary segment vectors must have one entry per segment.
        assert!(matches!(
            BorderedDiagramData::new(
                pmc,
                2,
                0,
                1,
                vec![point(0, 0, 0, true)],
                vec![RegionData {
                    chi: 1,
                    convex: 0,
                    concave: 0,
                    quadrants: BTreeMap::new(),
                    bseg: vec![0, 0],
                }],
            ),
            Err(DiagramError::WrongSegmentLength { region: 0, expected: 3, got: 2 })
        ));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let diagram = boundary_bigon();
        let json = serde_json::to_string(&diagram).unwrap();
        let parsed: BorderedDiagramData = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, diagram);
        assert_eq!(serde_json::to_string(&parsed).unwrap(), json);
    }
}
