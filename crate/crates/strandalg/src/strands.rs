//! Strand diagrams over an ordered set of points.
//!
//! A strand diagram on points {1, …, n} is a partial bijection that moves no
//! point downward: a set of strands (source, target) with target ≥ source,
//! sources pairwise distinct and targets pairwise distinct. Its Maslov weight
//! is carried by inversions, the pairs of strands that cross when sources and
//! targets are drawn on two vertical lines. Products concatenate diagrams and
//! survive only when no crossing is lost; the differential resolves one
//! crossing at a time, keeping exactly the resolutions that lose one
//! inversion. Coefficients are ℤ/2 throughout, so elements are finite sets of
//! diagrams under symmetric difference.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrandError {
    #[error("point {point} is outside 1..={ambient}")]
    PointOutOfRange { point: usize, ambient: usize },
    #[error("strand ({start},{end}) moves downward")]
    DownwardStrand { start: usize, end: usize },
    #[error("two strands start at point {0}")]
    DuplicateSource(usize),
    #[error("two strands end at point {0}")]
    DuplicateTarget(usize),
    #[error("ambient sizes differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
}

/// An upward-moving partial bijection on {1, …, ambient}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram", into = "RawDiagram")]
pub struct StrandDiagram {
    ambient: usize,
    strands: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    ambient: usize,
    strands: Vec<(usize, usize)>,
}

impl TryFrom<RawDiagram> for StrandDiagram {
    type Error = StrandError;
    fn try_from(raw: RawDiagram) -> Result<Self, StrandError> {
        StrandDiagram::new(raw.ambient, raw.strands)
    }
}

impl From<StrandDiagram> for RawDiagram {
    fn from(d: StrandDiagram) -> RawDiagram {
        RawDiagram { ambient: d.ambient, strands: d.strands }
    }
}

impl StrandDiagram {
    /// Validates and sorts the strand list by source.
    pub fn new(
        ambient: usize,
        strands: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, StrandError> {
        let mut strands: Vec<(usize, usize)> = strands.into_iter().collect();
        strands.sort_unstable();
        for &(source, target) in &strands {
            for point in [source, target] {
                if point == 0 || point > ambient {
                    return Err(StrandError::PointOutOfRange { point, ambient });
                }
            }
            if target < source {
                return Err(StrandError::DownwardStrand { start: source, end: target });
            }
        }
        for w in strands.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(StrandError::DuplicateSource(w[0].0));
            }
        }
        let mut targets: Vec<usize> = strands.iter().map(|&(_, t)| t).collect();
        targets.sort_unstable();
        for w in targets.windows(2) {
            if w[0] == w[1] {
                return Err(StrandError::DuplicateTarget(w[0]));
            }
        }
        Ok(StrandDiagram { ambient, strands })
    }

    /// The identity on a set of points: one horizontal strand per point.
    pub fn idempotent(ambient: usize, points: impl IntoIterator<Item = usize>) -> Result<Self, StrandError> {
        StrandDiagram::new(ambient, points.into_iter().map(|p| (p, p)))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Strands sorted by source.
    pub fn strands(&self) -> &[(usize, usize)] {
        &self.strands
    }

    pub fn sources(&self) -> BTreeSet<usize> {
        self.strands.iter().map(|&(s, _)| s).collect()
    }

    pub fn targets(&self) -> BTreeSet<usize> {
        self.strands.iter().map(|&(_, t)| t).collect()
    }

    pub fn is_idempotent(&self) -> bool {
        self.strands.iter().all(|&(s, t)| s == t)
    }

    /// Crossings: pairs of strands with sources in one order and targets in
    /// the other. Horizontal strands never cross anything.
    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for (i, &(_, ti)) in self.strands.iter().enumerate() {
            for &(_, tj) in &self.strands[i + 1..] {
                if ti > tj {
                    count += 1;
                }
            }
        }
        count
    }

    /// Concatenation. Zero when the idempotents do not meet or when
    /// composing loses a crossing (inversions fail to add).
    pub fn multiply(&self, other: &StrandDiagram) -> Result<AlgebraElement, StrandError> {
        if self.ambient != other.ambient {
            return Err(StrandError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        if self.targets() != other.sources() {
            return Ok(AlgebraElement::zero(self.ambient));
        }
        let composed: Vec<(usize, usize)> = self
            .strands
            .iter()
            .map(|&(s, t)| {
                let &(_, u) = other
                    .strands
                    .iter()
                    .find(|&&(s2, _)| s2 == t)
                    .expect("targets match sources");
                (s, u)
            })
            .collect();
        let product = StrandDiagram::new(self.ambient, composed)?;
        if product.inversions() == self.inversions() + other.inversions() {
            Ok(AlgebraElement::from_diagram(product))
        } else {
            Ok(AlgebraElement::zero(self.ambient))
        }
    }

    /// Sum of all single-crossing resolutions that lose exactly one
    /// inversion. Swapping the targets of a crossing pair smooths it.
    pub fn differential(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.ambient);
        let inv = self.inversions();
        for (i, &(si, ti)) in self.strands.iter().enumerate() {
            for (j, &(sj, tj)) in self.strands.iter().enumerate().skip(i + 1) {
                if ti <= tj {
                    continue;
                }
                let mut resolved = self.strands.clone();
                resolved[i] = (si, tj);
                resolved[j] = (sj, ti);
                let d = StrandDiagram::new(self.ambient, resolved)
                    .expect("resolution preserves sources and targets");
                if d.inversions() == inv - 1 {
                    out.toggle(d);
                }
            }
        }
        out
    }
}

impl fmt::Debug for StrandDiagram {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &(s, t)) in self.strands.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}→{t}")?;
        }
        write!(f, "}}")
    }
}

/// A ℤ/2 combination of strand diagrams with a fixed ambient point count.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    ambient: usize,
    terms: BTreeSet<StrandDiagram>,
}

impl AlgebraElement {
    pub fn zero(ambient: usize) -> Self {
        AlgebraElement { ambient, terms: BTreeSet::new() }
    }

    pub fn from_diagram(d: StrandDiagram) -> Self {
        let ambient = d.ambient;
        let mut terms = BTreeSet::new();
        terms.insert(d);
        AlgebraElement { ambient, terms }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &StrandDiagram> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds one diagram mod 2: inserts it, or cancels an existing copy.
    pub fn toggle(&mut self, d: StrandDiagram) {
        debug_assert_eq!(d.ambient, self.ambient);
        if !self.terms.remove(&d) {
            self.terms.insert(d);
        }
    }

    /// Sum over ℤ/2: symmetric difference of term sets.
    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, StrandError> {
        if self.ambient != other.ambient {
            return Err(StrandError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        let mut out = self.clone();
        for d in &other.terms {
            out.toggle(d.clone());
        }
        Ok(out)
    }

    /// Bilinear extension of the diagram product. Term pairs are screened
    /// by endpoint bitmasks so mismatched idempotents cost one comparison.
    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement, StrandError> {
        if self.ambient != other.ambient {
            return Err(StrandError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        let mut out = AlgebraElement::zero(self.ambient);
        if self.ambient < 128 {
            let mask = |points: &mut dyn Iterator<Item = usize>| -> u128 {
                points.fold(0u128, |m, p| m | (1 << p))
            };
            let lefts: Vec<(u128, &StrandDiagram)> = self
                .terms
                .iter()
                .map(|d| (mask(&mut d.strands.iter().map(|&(_, t)| t)), d))
                .collect();
            let rights: Vec<(u128, &StrandDiagram)> = other
                .terms
                .iter()
                .map(|d| (mask(&mut d.strands.iter().map(|&(s, _)| s)), d))
                .collect();
            for &(ta, a) in &lefts {
                for &(sb, b) in &rights {
                    if ta != sb {
                        continue;
                    }
                    for d in a.multiply(b)?.terms {
                        out.toggle(d);
                    }
                }
            }
        } else {
            for a in &self.terms {
                for b in &other.terms {
                    for d in a.multiply(b)?.terms {
                        out.toggle(d);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Termwise differential, collected mod 2.
    pub fn differential(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.ambient);
        for d in &self.terms {
            for r in d.differential().terms {
                out.toggle(r);
            }
        }
        out
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{d:?}")?;
        }
        Ok(())
    }
}

/// All strand diagrams on {1, …, ambient}, horizontals included, in a
/// deterministic order. Count is the Bell number B(ambient + 1).
pub fn enumerate_diagrams(ambient: usize) -> Vec<StrandDiagram> {
    let mut out = Vec::new();
    let mut strands: Vec<(usize, usize)> = Vec::new();
    fn extend(
        ambient: usize,
        next_source: usize,
        used_targets: &mut Vec<bool>,
        strands: &mut Vec<(usize, usize)>,
        out: &mut Vec<StrandDiagram>,
    ) {
        if next_source > ambient {
            out.push(
                StrandDiagram::new(ambient, strands.iter().copied())
                    .expect("enumeration emits valid diagrams"),
            );
            return;
        }
        extend(ambient, next_source + 1, used_targets, strands, out);
        for target in next_source..=ambient {
            if used_targets[target] {
                continue;
            }
            used_targets[target] = true;
            strands.push((next_source, target));
            extend(ambient, next_source + 1, used_targets, strands, out);
            strands.pop();
            used_targets[target] = false;
        }
    }
    let mut used = vec![false; ambient + 1];
    extend(ambient, 1, &mut used, &mut strands, &mut out);
    out.sort();
    out
}
