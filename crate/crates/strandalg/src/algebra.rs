//! The algebra attached to a pointed matched circle.
//!
//! Chords run upward between points of the circle cut at the basepoint. A
//! generator is written I(s)·a(ρ): a set s of occupied handle labels together
//! with a consistent set ρ of chords. Expanding a generator rewrites it as a
//! sum of strand diagrams, one term per way of choosing a horizontal strand
//! for each occupied handle that no chord departs from; terms whose targets
//! land twice on one handle are discarded, since no right idempotent sees
//! them. Everything downstream (products, differentials, gradings) is
//! computed through these expansions, while a separate closed-form
//! criterion predicts exactly which generators survive. The two routes are
//! kept independent on purpose so each can audit the other.

use crate::pmc::PointedMatchedCircle;
use crate::strands::{AlgebraElement, StrandDiagram};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("chord [{minus},{plus}] does not run upward")]
    DegenerateChord { minus: usize, plus: usize },
    #[error("points are numbered from 1")]
    PointZero,
    #[error("two chords share the {which} endpoint {point}")]
    RepeatedEndpoint { which: &'static str, point: usize },
    #[error("joined chords are not consistent")]
    InconsistentJoin,
    #[error("point {point} is outside 1..={num_points}")]
    PointOutOfRange { point: usize, num_points: usize },
    #[error("handle label {label} is outside 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },
}

/// An upward chord [ρ⁻, ρ⁺] between two points of the cut circle.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct ReebChord {
    minus: usize,
    plus: usize,
}

impl TryFrom<(usize, usize)> for ReebChord {
    type Error = AlgebraError;
    fn try_from((minus, plus): (usize, usize)) -> Result<Self, AlgebraError> {
        ReebChord::new(minus, plus)
    }
}

impl From<ReebChord> for (usize, usize) {
    fn from(r: ReebChord) -> (usize, usize) {
        (r.minus, r.plus)
    }
}

impl ReebChord {
    pub fn new(minus: usize, plus: usize) -> Result<Self, AlgebraError> {
        if minus == 0 {
            return Err(AlgebraError::PointZero);
        }
        if plus <= minus {
            return Err(AlgebraError::DegenerateChord { minus, plus });
        }
        Ok(ReebChord { minus, plus })
    }

    pub fn minus(&self) -> usize {
        self.minus
    }

    pub fn plus(&self) -> usize {
        self.plus
    }

    /// The chord as a strand.
    pub fn strand(&self) -> (usize, usize) {
        (self.minus, self.plus)
    }
}

impl fmt::Debug for ReebChord {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "[{},{}]", self.minus, self.plus)
    }
}

impl fmt::Display for ReebChord {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// How two chords sit relative to each other on the circle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChordPairKind {
    /// The spans do not touch.
    Disjoint,
    /// One span lies strictly inside the other.
    Nested,
    /// The spans overlap without containment.
    Interleaved,
    /// One chord ends where the other starts.
    Abutting,
    /// The chords share a start or share an end.
    SharedEnd,
}

/// Classifies an unordered pair of chords.
pub fn classify_pair(a: &ReebChord, b: &ReebChord) -> ChordPairKind {
    if a.minus == b.minus || a.plus == b.plus {
        return ChordPairKind::SharedEnd;
    }
    if a.plus == b.minus || b.plus == a.minus {
        return ChordPairKind::Abutting;
    }
    if (a.minus < b.minus && b.minus < a.plus && a.plus < b.plus)
        || (b.minus < a.minus && a.minus < b.plus && b.plus < a.plus)
    {
        return ChordPairKind::Interleaved;
    }
    if (a.minus < b.minus && b.plus < a.plus) || (b.minus < a.minus && a.plus < b.plus) {
        return ChordPairKind::Nested;
    }
    ChordPairKind::Disjoint
}

/// A consistent set of chords: all starts distinct, all ends distinct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(try_from = "Vec<ReebChord>", into = "Vec<ReebChord>")]
pub struct ChordSet {
    chords: Vec<ReebChord>,
}

impl TryFrom<Vec<ReebChord>> for ChordSet {
    type Error = AlgebraError;
    fn try_from(chords: Vec<ReebChord>) -> Result<Self, AlgebraError> {
        ChordSet::new(chords)
    }
}

impl From<ChordSet> for Vec<ReebChord> {
    fn from(set: ChordSet) -> Vec<ReebChord> {
        set.chords
    }
}

impl ChordSet {
    /// Validates consistency and sorts by start point.
    pub fn new(chords: impl IntoIterator<Item = ReebChord>) -> Result<Self, AlgebraError> {
        let mut chords: Vec<ReebChord> = chords.into_iter().collect();
        chords.sort_unstable();
        for w in chords.windows(2) {
            if w[0].minus == w[1].minus {
                return Err(AlgebraError::RepeatedEndpoint { which: "start", point: w[0].minus });
            }
        }
        let mut pluses: Vec<usize> = chords.iter().map(|r| r.plus).collect();
        pluses.sort_unstable();
        for w in pluses.windows(2) {
            if w[0] == w[1] {
                return Err(AlgebraError::RepeatedEndpoint { which: "end", point: w[0] });
            }
        }
        Ok(ChordSet { chords })
    }

    pub fn empty() -> Self {
        ChordSet { chords: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    /// Chords sorted by start point.
    pub fn chords(&self) -> &[ReebChord] {
        &self.chords
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReebChord> {
        self.chords.iter()
    }

    pub fn minus_points(&self) -> BTreeSet<usize> {
        self.chords.iter().map(|r| r.minus).collect()
    }

    pub fn plus_points(&self) -> BTreeSet<usize> {
        self.chords.iter().map(|r| r.plus).collect()
    }

    /// Largest point touched, 0 when empty.
    pub fn max_point(&self) -> usize {
        self.chords.iter().map(|r| r.plus).max().unwrap_or(0)
    }
}

impl fmt::Debug for ChordSet {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.chords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, "}}")
    }
}

/// One round of joining: every chord of `left` whose end meets the start of
/// a chord of `right` is concatenated with it; everything else passes
/// through. The result must again be consistent.
pub fn join_sets(left: &ChordSet, right: &ChordSet) -> Result<ChordSet, AlgebraError> {
    let mut consumed = vec![false; right.len()];
    let mut out: Vec<ReebChord> = Vec::new();
    for r in left.iter() {
        match right.chords.iter().position(|s| s.minus == r.plus) {
            Some(i) => {
                consumed[i] = true;
                out.push(ReebChord::new(r.minus, right.chords[i].plus)?);
            }
            None => out.push(*r),
        }
    }
    for (i, s) in right.chords.iter().enumerate() {
        if !consumed[i] {
            out.push(*s);
        }
    }
    ChordSet::new(out).map_err(|_| AlgebraError::InconsistentJoin)
}

/// A generator I(s)·a(ρ): occupied handle labels and a consistent chord set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MatchedGenerator {
    s: BTreeSet<usize>,
    chords: ChordSet,
}

impl MatchedGenerator {
    pub fn new(s: impl IntoIterator<Item = usize>, chords: ChordSet) -> Self {
        MatchedGenerator { s: s.into_iter().collect(), chords }
    }

    /// A pure idempotent I(s).
    pub fn idempotent(s: impl IntoIterator<Item = usize>) -> Self {
        MatchedGenerator::new(s, ChordSet::empty())
    }

    pub fn occupied(&self) -> &BTreeSet<usize> {
        &self.s
    }

    pub fn chords(&self) -> &ChordSet {
        &self.chords
    }

    /// Checks every label and point against the circle.
    pub fn validate(&self, pmc: &PointedMatchedCircle) -> Result<(), AlgebraError> {
        let max = pmc.num_handles();
        for &label in &self.s {
            if label == 0 || label > max {
                return Err(AlgebraError::LabelOutOfRange { label, max });
            }
        }
        let n = pmc.num_points();
        if self.chords.max_point() > n {
            return Err(AlgebraError::PointOutOfRange {
                point: self.chords.max_point(),
                num_points: n,
            });
        }
        Ok(())
    }

    /// Handle labels of the chord start points, when pairwise distinct.
    fn start_labels(&self, pmc: &PointedMatchedCircle) -> Option<BTreeSet<usize>> {
        distinct_labels(self.chords.iter().map(|r| r.minus()), pmc)
    }

    /// Handle labels of the chord end points, when pairwise distinct.
    fn end_labels(&self, pmc: &PointedMatchedCircle) -> Option<BTreeSet<usize>> {
        distinct_labels(self.chords.iter().map(|r| r.plus()), pmc)
    }

    /// Closed-form test for survival, independent of the expansion: the
    /// chord starts must occupy distinct handles inside s, the chord ends
    /// must occupy distinct handles, and no handle kept occupied across the
    /// generator may collide with a handle the chords move onto.
    pub fn is_nonzero(&self, pmc: &PointedMatchedCircle) -> bool {
        let (Some(starts), Some(ends)) = (self.start_labels(pmc), self.end_labels(pmc)) else {
            return false;
        };
        if !starts.is_subset(&self.s) {
            return false;
        }
        self.s.difference(&starts).all(|label| !ends.contains(label))
    }

    /// Right idempotent of a surviving generator: handles the chords move
    /// onto plus the handles kept occupied throughout.
    pub fn target_idempotent(&self, pmc: &PointedMatchedCircle) -> Option<BTreeSet<usize>> {
        if !self.is_nonzero(pmc) {
            return None;
        }
        let starts = self.start_labels(pmc)?;
        let mut t = self.end_labels(pmc)?;
        t.extend(self.s.difference(&starts));
        Some(t)
    }

    /// Rewrites the generator as a sum of strand diagrams.
    ///
    /// Each term takes one strand per chord, plus one horizontal strand for
    /// every occupied handle no chord departs from, placed at either point of
    /// that handle not already used as a chord endpoint; the sum runs over
    /// all such placements. Terms whose targets land on one handle twice are
    /// dropped. The result is zero exactly when `is_nonzero` says so, but
    /// this code path never consults it.
    pub fn expand(&self, pmc: &PointedMatchedCircle) -> AlgebraElement {
        let n = pmc.num_points();
        let zero = AlgebraElement::zero(n);
        let Some(starts) = self.start_labels(pmc) else {
            return zero;
        };
        if !starts.is_subset(&self.s) {
            return zero;
        }
        let endpoints: BTreeSet<usize> = self
            .chords
            .iter()
            .flat_map(|r| [r.minus(), r.plus()])
            .collect();
        let mut free_choices: Vec<Vec<usize>> = Vec::new();
        for &label in self.s.difference(&starts) {
            let (a, b) = pmc.handle_points(label);
            let choices: Vec<usize> =
                [a, b].into_iter().filter(|p| !endpoints.contains(p)).collect();
            if choices.is_empty() {
                return zero;
            }
            free_choices.push(choices);
        }

        let mut out = zero;
        let mut picks = vec![0usize; free_choices.len()];
        loop {
            let mut strands: Vec<(usize, usize)> =
                self.chords.iter().map(|r| r.strand()).collect();
            for (slot, &i) in picks.iter().enumerate() {
                let p = free_choices[slot][i];
                strands.push((p, p));
            }
            let diagram = StrandDiagram::new(n, strands)
                .expect("chord sets and fresh horizontals form valid diagrams");
            if distinct_labels(diagram.targets().into_iter(), pmc).is_some() {
                out.toggle(diagram);
            }
            // Advance the mixed-radix counter over horizontal placements.
            let mut slot = 0;
            loop {
                if slot == picks.len() {
                    return out;
                }
                picks[slot] += 1;
                if picks[slot] < free_choices[slot].len() {
                    break;
                }
                picks[slot] = 0;
                slot += 1;
            }
        }
    }

    /// Product of two generators through their expansions.
    pub fn multiply(
        &self,
        other: &MatchedGenerator,
        pmc: &PointedMatchedCircle,
    ) -> AlgebraElement {
        self.expand(pmc)
            .multiply(&other.expand(pmc))
            .expect("expansions share the circle's ambient size")
    }

    /// The product in generator form: joined chords over the left labels.
    /// `None` when the product vanishes.
    pub fn multiply_as_generator(
        &self,
        other: &MatchedGenerator,
        pmc: &PointedMatchedCircle,
    ) -> Option<MatchedGenerator> {
        if self.multiply(other, pmc).is_zero() {
            return None;
        }
        let joined = join_sets(&self.chords, &other.chords).ok()?;
        Some(MatchedGenerator::new(self.s.clone(), joined))
    }

    /// Differential of the expansion: all single-crossing resolutions.
    pub fn differential(&self, pmc: &PointedMatchedCircle) -> AlgebraElement {
        self.expand(pmc).differential()
    }
}

/// Labels of the given points, provided no label repeats.
fn distinct_labels(
    points: impl Iterator<Item = usize>,
    pmc: &PointedMatchedCircle,
) -> Option<BTreeSet<usize>> {
    let mut labels = BTreeSet::new();
    for p in points {
        if !labels.insert(pmc.label(p)) {
            return None;
        }
    }
    Some(labels)
}

impl fmt::Debug for MatchedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "I{{")?;
        for (i, label) in self.s.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, "}}·a{:?}", self.chords)
    }
}

/// All consistent chord sets on points 1..=num_points, smallest first, with
/// an optional cap on the number of chords.
pub fn enumerate_chord_sets(num_points: usize, max_chords: Option<usize>) -> Vec<ChordSet> {
    let cap = max_chords.unwrap_or(usize::MAX);
    let mut all_chords: Vec<ReebChord> = Vec::new();
    for minus in 1..=num_points.saturating_sub(1) {
        for plus in minus + 1..=num_points {
            all_chords.push(ReebChord::new(minus, plus).expect("upward by construction"));
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<ReebChord> = Vec::new();
    fn extend(
        all: &[ReebChord],
        from: usize,
        cap: usize,
        current: &mut Vec<ReebChord>,
        out: &mut Vec<ChordSet>,
    ) {
        out.push(ChordSet::new(current.iter().copied()).expect("built consistent"));
        if current.len() == cap {
            return;
        }
        for i in from..all.len() {
            let candidate = all[i];
            let ok = current.iter().all(|r| {
                r.minus() != candidate.minus() && r.plus() != candidate.plus()
            });
            if ok {
                current.push(candidate);
                extend(all, i + 1, cap, current, out);
                current.pop();
            }
        }
    }
    extend(&all_chords, 0, cap, &mut current, &mut out);
    out.sort();
    out
}

/// The basis of surviving generators: for every chord set whose starts and
/// ends each occupy distinct handles, the start handles together with any
/// subset of the handles untouched at both ends.
pub fn enumerate_generators(pmc: &PointedMatchedCircle) -> Vec<MatchedGenerator> {
    let mut out = Vec::new();
    for chords in enumerate_chord_sets(pmc.num_points(), Some(pmc.num_handles())) {
        let starts = distinct_labels(chords.iter().map(|r| r.minus()), pmc);
        let ends = distinct_labels(chords.iter().map(|r| r.plus()), pmc);
        let (Some(starts), Some(ends)) = (starts, ends) else {
            continue;
        };
        let free: Vec<usize> = (1..=pmc.num_handles())
            .filter(|label| !starts.contains(label) && !ends.contains(label))
            .collect();
        for mask in 0u64..(1 << free.len()) {
            let mut s = starts.clone();
            for (i, &label) in free.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s.insert(label);
                }
            }
            out.push(MatchedGenerator::new(s, chords.clone()));
        }
    }
    out.sort();
    out
}
