//! The grading group of a matched circle.
//!
//! A grading element pairs a half-integer Maslov component with a homology
//! class of the cut circle, recorded as one multiplicity per segment between
//! consecutive points. The group law twists the Maslov components by the
//! linking pairing L(α₁, α₂) = Σ_p ∂α₁(p)·m(p, α₂), where ∂α reads off the
//! jump of α across a point and m averages the two neighbouring segment
//! multiplicities. Elements satisfy one congruence: the Maslov component
//! agrees mod 1 with ε(α), a quarter of the number of points where the
//! parity of α changes.
//!
//! The Maslov component of an algebra element is computed by two separate
//! routes here, plus a third in the crossing-count module: from a strand
//! diagram as inversions minus the multiplicity of the starting points, and
//! from a chord set in closed form from the pairwise chord positions. Their
//! agreement is a checked invariant, not an assumption.

use crate::algebra::{classify_pair, ChordPairKind, ChordSet, MatchedGenerator, ReebChord};
use crate::halfint::HalfInteger;
use crate::pmc::PointedMatchedCircle;
use crate::strands::StrandDiagram;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("Maslov component {maslov} is not congruent to ε = {epsilon} mod 1")]
    ParityMismatch { maslov: HalfInteger, epsilon: HalfInteger },
    #[error("gradings live over different circles: {left} vs {right} segments")]
    SizeMismatch { left: usize, right: usize },
    #[error("the zero element carries no grading")]
    ZeroElement,
}

/// A first homology class of the cut circle: one integer multiplicity per
/// segment between consecutive points, index i covering points i+1 and i+2.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct HomologyClass {
    segments: Vec<i64>,
}

impl HomologyClass {
    pub fn new(segments: Vec<i64>) -> Self {
        HomologyClass { segments }
    }

    /// The zero class on a circle with this many points.
    pub fn zero(num_points: usize) -> Self {
        HomologyClass { segments: vec![0; num_points.saturating_sub(1)] }
    }

    /// The class of a single chord: +1 on every segment it covers.
    pub fn of_chord(chord: &ReebChord, num_points: usize) -> Self {
        let mut class = HomologyClass::zero(num_points);
        for seg in chord.minus()..chord.plus() {
            class.segments[seg - 1] += 1;
        }
        class
    }

    pub fn of_chords(chords: &ChordSet, num_points: usize) -> Self {
        chords
            .iter()
            .fold(HomologyClass::zero(num_points), |acc, r| {
                acc.add(&HomologyClass::of_chord(r, num_points))
            })
    }

    /// The class swept by the moving strands of a diagram.
    pub fn of_diagram(d: &StrandDiagram) -> Self {
        let mut class = HomologyClass::zero(d.ambient());
        for &(source, target) in d.strands() {
            for seg in source..target {
                class.segments[seg - 1] += 1;
            }
        }
        class
    }

    pub fn segments(&self) -> &[i64] {
        &self.segments
    }

    pub fn num_segments(&self) -> usize {
        self.segments.len()
    }

    pub fn is_zero(&self) -> bool {
        self.segments.iter().all(|&m| m == 0)
    }

    fn seg(&self, i: isize) -> i64 {
        if i < 0 || i as usize >= self.segments.len() {
            0
        } else {
            self.segments[i as usize]
        }
    }

    pub fn add(&self, other: &HomologyClass) -> Self {
        assert_eq!(self.segments.len(), other.segments.len(), "classes live on one circle");
        HomologyClass {
            segments: self
                .segments
                .iter()
                .zip(&other.segments)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        HomologyClass { segments: self.segments.iter().map(|m| -m).collect() }
    }

    /// The jump ∂α(p): multiplicity left of the point minus multiplicity
    /// right of it. Outside segments count as zero.
    pub fn boundary_at(&self, point: usize) -> i64 {
        let p = point as isize;
        self.seg(p - 2) - self.seg(p - 1)
    }

    /// Local multiplicity m(p, α): the average of the two segments at p.
    pub fn point_multiplicity(&self, point: usize) -> HalfInteger {
        let p = point as isize;
        HalfInteger::from_twice(self.seg(p - 2) + self.seg(p - 1))
    }

    /// m(S, α) over a set of points.
    pub fn multiplicity_of(&self, points: impl IntoIterator<Item = usize>) -> HalfInteger {
        points.into_iter().map(|p| self.point_multiplicity(p)).sum()
    }

    /// The linking pairing L(self, other) = Σ_p ∂self(p)·m(p, other).
    pub fn pairing(&self, other: &HomologyClass) -> HalfInteger {
        assert_eq!(self.segments.len(), other.segments.len(), "classes live on one circle");
        let twice = (1..=self.segments.len() + 1)
            .map(|p| self.boundary_at(p) * other.point_multiplicity(p).twice())
            .sum();
        HalfInteger::from_twice(twice)
    }

    /// ε(α): a quarter of the number of points where the parity of α
    /// changes, reduced mod 1. Always 0 or ½.
    pub fn epsilon(&self) -> HalfInteger {
        let flips = (1..=self.segments.len() + 1)
            .filter(|&p| self.boundary_at(p) % 2 != 0)
            .count() as i64;
        debug_assert_eq!(flips % 2, 0, "parity changes pair up around the circle");
        HalfInteger::from_twice((flips / 2) % 2)
    }
}

impl fmt::Debug for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Multiplicity of a bare chord at a point: 1 inside the span, ½ at either
/// endpoint, 0 outside. Needs no ambient point count.
fn chord_multiplicity_at(point: usize, chord: &ReebChord) -> HalfInteger {
    if chord.minus() < point && point < chord.plus() {
        HalfInteger::from_int(1)
    } else if point == chord.minus() || point == chord.plus() {
        HalfInteger::from_twice(1)
    } else {
        HalfInteger::ZERO
    }
}

/// The pairing L([a,b], σ) = m(b, σ) − m(a, σ) of two bare chords.
pub fn chord_pairing(first: &ReebChord, second: &ReebChord) -> HalfInteger {
    chord_multiplicity_at(first.plus(), second) - chord_multiplicity_at(first.minus(), second)
}

/// The pairing summed over two chord sets.
pub fn set_pairing(first: &ChordSet, second: &ChordSet) -> HalfInteger {
    first
        .iter()
        .flat_map(|r| second.iter().map(move |s| chord_pairing(r, s)))
        .sum()
}

/// An element (j, α) of the grading group, subject to j ≡ ε(α) mod 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGrading", into = "RawGrading")]
pub struct GradingElement {
    maslov: HalfInteger,
    homology: HomologyClass,
}

#[derive(Serialize, Deserialize)]
struct RawGrading {
    maslov2: i64,
    alpha: Vec<i64>,
}

impl TryFrom<RawGrading> for GradingElement {
    type Error = GradingError;
    fn try_from(raw: RawGrading) -> Result<Self, GradingError> {
        GradingElement::new(HalfInteger::from_twice(raw.maslov2), HomologyClass::new(raw.alpha))
    }
}

impl From<GradingElement> for RawGrading {
    fn from(g: GradingElement) -> RawGrading {
        RawGrading { maslov2: g.maslov.twice(), alpha: g.homology.segments }
    }
}

impl GradingElement {
    pub fn new(maslov: HalfInteger, homology: HomologyClass) -> Result<Self, GradingError> {
        let epsilon = homology.epsilon();
        if !maslov.congruent_mod_one(epsilon) {
            return Err(GradingError::ParityMismatch { maslov, epsilon });
        }
        Ok(GradingElement { maslov, homology })
    }

    pub fn identity(num_points: usize) -> Self {
        GradingElement { maslov: HalfInteger::ZERO, homology: HomologyClass::zero(num_points) }
    }

    pub fn maslov(&self) -> HalfInteger {
        self.maslov
    }

    pub fn homology(&self) -> &HomologyClass {
        &self.homology
    }

    /// The twisted group law (j₁, α₁)(j₂, α₂) = (j₁+j₂+L(α₁,α₂), α₁+α₂).
    pub fn compose(&self, other: &GradingElement) -> GradingElement {
        let maslov = self.maslov + other.maslov + self.homology.pairing(&other.homology);
        GradingElement::new(maslov, self.homology.add(&other.homology))
            .expect("composition preserves the parity constraint")
    }

    /// The group inverse (−j + L(α,α), −α).
    pub fn inverse(&self) -> GradingElement {
        let maslov = -self.maslov + self.homology.pairing(&self.homology);
        GradingElement::new(maslov, self.homology.neg())
            .expect("inversion preserves the parity constraint")
    }
}

impl fmt::Debug for GradingElement {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "({}; {:?})", self.maslov, self.homology)
    }
}

/// The central element λⁿ applied to a grading: shifts Maslov by n.
pub fn lambda_pow(n: i64, g: &GradingElement) -> GradingElement {
    GradingElement::new(g.maslov + HalfInteger::from_int(n), g.homology.clone())
        .expect("integer shifts preserve the parity constraint")
}

/// Maslov component of a strand diagram: inversions minus the multiplicity
/// of the source points in the class the diagram sweeps.
pub fn diagram_maslov(d: &StrandDiagram) -> HalfInteger {
    let class = HomologyClass::of_diagram(d);
    HalfInteger::from_int(d.inversions() as i64) - class.multiplicity_of(d.sources())
}

/// Maslov component of a chord set in closed form: −½ per chord, −½ per
/// abutting pair, −1 per interleaved pair.
pub fn chord_set_maslov(chords: &ChordSet) -> HalfInteger {
    let mut twice = -(chords.len() as i64);
    let list = chords.chords();
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            match classify_pair(a, b) {
                ChordPairKind::Abutting => twice -= 1,
                ChordPairKind::Interleaved => twice -= 2,
                _ => {}
            }
        }
    }
    HalfInteger::from_twice(twice)
}

/// Maslov component of an ordered sequence of chord sets: the sum of the
/// set components, corrected by the pairing over earlier-later pairs.
pub fn sequence_maslov(sequence: &[ChordSet]) -> HalfInteger {
    let mut total: HalfInteger = sequence.iter().map(chord_set_maslov).sum();
    for (i, first) in sequence.iter().enumerate() {
        for second in &sequence[i + 1..] {
            total += set_pairing(first, second);
        }
    }
    total
}

/// The full grading of a single strand diagram.
pub fn grade_diagram(d: &StrandDiagram) -> GradingElement {
    GradingElement::new(diagram_maslov(d), HomologyClass::of_diagram(d))
        .expect("diagram gradings satisfy the parity constraint")
}

/// The grading of a surviving generator, read from its expansion. Every
/// expansion term carries the same grading; the first is used.
pub fn grade_generator(
    g: &MatchedGenerator,
    pmc: &PointedMatchedCircle,
) -> Result<GradingElement, GradingError> {
    let expansion = g.expand(pmc);
    let term = expansion.terms().next().ok_or(GradingError::ZeroElement)?;
    Ok(grade_diagram(term))
}

/// Where a grading element sits relative to the idempotent decomposition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Membership {
    /// The class pushes forward to zero on every handle: the element lies in
    /// the subgroup attached to a single idempotent.
    Diagonal,
    /// The class pushes forward to a difference of two idempotents.
    Between { source: BTreeSet<usize>, target: BTreeSet<usize> },
}

/// Pushes ∂α forward along the matching and reads off the idempotents it
/// connects. `None` when some handle receives total weight ±2 or more, so
/// the element connects no pair of idempotents at all.
pub fn refined_membership(
    g: &GradingElement,
    pmc: &PointedMatchedCircle,
) -> Option<Membership> {
    let mut weight = vec![0i64; pmc.num_handles()];
    for p in 1..=pmc.num_points() {
        weight[pmc.label(p) - 1] += g.homology().boundary_at(p);
    }
    debug_assert_eq!(weight.iter().sum::<i64>(), 0, "jumps telescope to zero");
    if weight.iter().any(|w| w.abs() >= 2) {
        return None;
    }
    if weight.iter().all(|&w| w == 0) {
        return Some(Membership::Diagonal);
    }
    let source = weight
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w == -1)
        .map(|(i, _)| i + 1)
        .collect();
    let target = weight
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w == 1)
        .map(|(i, _)| i + 1)
        .collect();
    Some(Membership::Between { source, target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_generators;

    fn class(segments: &[i64]) -> HomologyClass {
        HomologyClass::new(segments.to_vec())
    }

    fn chord(minus: usize, plus: usize) -> ReebChord {
        ReebChord::new(minus, plus).unwrap()
    }

    fn set(chords: &[(usize, usize)]) -> ChordSet {
        ChordSet::new(chords.iter().map(|&(a, b)| chord(a, b))).unwrap()
    }

    fn genus_one() -> PointedMatchedCircle {
        PointedMatchedCircle::new(vec![1, 2, 1, 2]).unwrap()
    }

    #[test]
    fn boundary_reads_jumps_left_minus_right() {
        let a = class(&[1, 0, 0]);
        assert_eq!(a.boundary_at(1), -1);
        assert_eq!(a.boundary_at(2), 1);
        assert_eq!(a.boundary_at(3), 0);
        assert_eq!(a.boundary_at(4), 0);
    }

    #[test]
    fn point_multiplicity_averages_adjacent_segments() {
        let a = class(&[1, 2, 1]);
        assert_eq!(a.point_multiplicity(1), HalfInteger::from_twice(1));
        assert_eq!(a.point_multiplicity(2), HalfInteger::from_twice(3));
        assert_eq!(a.point_multiplicity(4), HalfInteger::from_twice(1));
    }

    #[test]
    fn chord_and_class_pairings_agree() {
        let r = chord(1, 2);
        let s = chord(2, 3);
        assert_eq!(chord_pairing(&r, &s), HalfInteger::from_twice(1));
        let a = HomologyClass::of_chord(&r, 4);
        let b = HomologyClass::of_chord(&s, 4);
        assert_eq!(a.pairing(&b), HalfInteger::from_twice(1));
        assert_eq!(chord_pairing(&chord(1, 3), &chord(2, 4)), HalfInteger::from_int(1));
        assert_eq!(
            HomologyClass::of_chord(&chord(1, 3), 4)
                .pairing(&HomologyClass::of_chord(&chord(2, 4), 4)),
            HalfInteger::from_int(1)
        );
    }

    #[test]
    fn epsilon_counts_parity_changes() {
        assert_eq!(class(&[1, 0, 0]).epsilon(), HalfInteger::from_twice(1));
        assert_eq!(class(&[1, 2, 1]).epsilon(), HalfInteger::ZERO);
        assert_eq!(class(&[0, 0, 0]).epsilon(), HalfInteger::ZERO);
        assert_eq!(class(&[1, 1, 1]).epsilon(), HalfInteger::from_twice(1));
    }

    #[test]
    fn parity_constraint_guards_construction() {
        assert!(GradingElement::new(HalfInteger::from_twice(-1), class(&[1, 0, 0])).is_ok());
        assert!(matches!(
            GradingElement::new(HalfInteger::from_int(-1), class(&[1, 0, 0])),
            Err(GradingError::ParityMismatch { .. })
        ));
        assert!(GradingElement::new(HalfInteger::from_int(-1), class(&[1, 2, 1])).is_ok());
    }

    #[test]
    fn composition_twists_by_the_pairing() {
        let g1 = GradingElement::new(HalfInteger::from_twice(-1), class(&[1, 0, 0])).unwrap();
        let g2 = GradingElement::new(HalfInteger::from_twice(-1), class(&[0, 1, 0])).unwrap();
        let product = g1.compose(&g2);
        assert_eq!(product.maslov(), HalfInteger::from_twice(-1));
        assert_eq!(product.homology(), &class(&[1, 1, 0]));
    }

    #[test]
    fn inverses_cancel_on_both_sides() {
        for segments in [[1, 0, 0], [1, 2, 1], [0, 1, 0], [2, 1, 0]] {
            let alpha = class(&segments);
            let maslov = alpha.epsilon();
            let g = GradingElement::new(maslov, alpha).unwrap();
            let inv = g.inverse();
            assert_eq!(g.compose(&inv), GradingElement::identity(4));
            assert_eq!(inv.compose(&g), GradingElement::identity(4));
        }
    }

    #[test]
    fn lambda_shifts_commute_with_everything() {
        let g = GradingElement::new(HalfInteger::from_twice(-1), class(&[1, 0, 0])).unwrap();
        let shifted = lambda_pow(-1, &g);
        assert_eq!(shifted.maslov(), HalfInteger::from_twice(-3));
        assert_eq!(shifted.homology(), g.homology());
        let h = GradingElement::new(HalfInteger::from_twice(-1), class(&[0, 1, 0])).unwrap();
        assert_eq!(lambda_pow(2, &g).compose(&h), lambda_pow(2, &g.compose(&h)));
        assert_eq!(g.compose(&lambda_pow(2, &h)), lambda_pow(2, &g.compose(&h)));
    }

    #[test]
    fn chord_set_maslov_closed_form() {
        assert_eq!(chord_set_maslov(&set(&[(1, 2)])), HalfInteger::from_twice(-1));
        assert_eq!(chord_set_maslov(&set(&[(1, 3), (2, 4)])), HalfInteger::from_int(-2));
        assert_eq!(chord_set_maslov(&set(&[(1, 2), (2, 3)])), HalfInteger::from_twice(-3));
        assert_eq!(chord_set_maslov(&set(&[(1, 4), (2, 3)])), HalfInteger::from_int(-1));
    }

    #[test]
    fn sequence_maslov_corrects_by_pairings() {
        assert_eq!(
            sequence_maslov(&[set(&[(1, 3)]), set(&[(2, 4)])]),
            HalfInteger::ZERO
        );
        assert_eq!(
            sequence_maslov(&[set(&[(2, 3)]), set(&[(1, 2)])]),
            HalfInteger::from_twice(-3)
        );
        assert_eq!(sequence_maslov(&[set(&[(1, 2)])]), HalfInteger::from_twice(-1));
    }

    #[test]
    fn diagram_and_chord_routes_agree_on_expansions() {
        let pmc = genus_one();
        for g in enumerate_generators(&pmc) {
            let want = chord_set_maslov(g.chords());
            for term in g.expand(&pmc).terms() {
                assert_eq!(diagram_maslov(term), want, "disagreement on {g:?}");
            }
        }
    }

    #[test]
    fn generator_gradings_match_frozen_values() {
        let pmc = genus_one();
        let g = MatchedGenerator::new([1], set(&[(1, 2)]));
        let grading = grade_generator(&g, &pmc).unwrap();
        assert_eq!(grading.maslov(), HalfInteger::from_twice(-1));
        assert_eq!(grading.homology(), &class(&[1, 0, 0]));

        let g = MatchedGenerator::new([1, 2], set(&[(1, 4), (2, 3)]));
        let grading = grade_generator(&g, &pmc).unwrap();
        assert_eq!(grading.maslov(), HalfInteger::from_int(-1));
        assert_eq!(grading.homology(), &class(&[1, 2, 1]));

        let idempotent = MatchedGenerator::idempotent([1]);
        assert_eq!(grade_generator(&idempotent, &pmc).unwrap(), GradingElement::identity(4));

        let dead = MatchedGenerator::new([1, 2], set(&[(1, 2)]));
        assert_eq!(grade_generator(&dead, &pmc), Err(GradingError::ZeroElement));
    }

    #[test]
    fn membership_follows_the_pushed_forward_boundary() {
        let pmc = genus_one();
        let g = GradingElement::new(HalfInteger::from_twice(-1), class(&[1, 0, 0])).unwrap();
        assert_eq!(
            refined_membership(&g, &pmc),
            Some(Membership::Between {
                source: BTreeSet::from([1]),
                target: BTreeSet::from([2]),
            })
        );
        let diag = GradingElement::new(HalfInteger::from_int(-1), class(&[1, 2, 1])).unwrap();
        assert_eq!(refined_membership(&diag, &pmc), Some(Membership::Diagonal));
        let wide = GradingElement::new(HalfInteger::ZERO, class(&[2, 0, 0])).unwrap();
        assert_eq!(refined_membership(&wide, &pmc), None);
        assert_eq!(
            refined_membership(&GradingElement::identity(4), &pmc),
            Some(Membership::Diagonal)
        );
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let json = r#"{"maslov2":-1,"alpha":[1,0,0]}"#;
        let g: GradingElement = serde_json::from_str(json).unwrap();
        assert_eq!(g.maslov(), HalfInteger::from_twice(-1));
        assert_eq!(serde_json::to_string(&g).unwrap(), json);
        assert!(serde_json::from_str::<GradingElement>(r#"{"maslov2":-2,"alpha":[1,0,0]}"#)
            .is_err());
    }
}
