//! Pointed matched circles.
//!
//! A pointed matched circle on 4k points is a two-to-one matching of the
//! points {1, …, 4k} to handle labels {1, …, 2k}, subject to one topological
//! condition: performing 0-surgery on every matched pair must leave a single
//! circle. The surgered 1-manifold is tracked combinatorially, so validity is
//! decided by exact cycle counting rather than by drawing anything.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PmcError {
    #[error("point count {0} is not a multiple of 4")]
    BadSize(usize),
    #[error("matching has {got} entries for {expected} points")]
    WrongLength { expected: usize, got: usize },
    #[error("handle label {label} matches {count} points, expected exactly 2")]
    NotTwoToOne { label: usize, count: usize },
    #[error("handle label {label} is outside 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },
    #[error("surgery along the matched pairs leaves {circles} circles, expected 1")]
    SurgeryDisconnected { circles: usize },
}

/// Counts the circles left after 0-surgery on every matched pair.
///
/// Points are 1..=n in circle order with the basepoint between point n and
/// point 1. Surgery reroutes each point to the successor of its partner, so
/// the circle count is the number of cycles of p ↦ partner(p) + 1 (indices
/// mod n). The empty matching is one unsurgered circle.
pub fn surgery_circle_count(matching: &[usize]) -> Result<usize, PmcError> {
    let n = matching.len();
    if n == 0 {
        return Ok(1);
    }
    let mut partner = vec![usize::MAX; n];
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &label) in matching.iter().enumerate() {
        if let Some(j) = seen.insert(label, i) {
            if partner[j] != usize::MAX {
                return Err(PmcError::NotTwoToOne { label, count: 3 });
            }
            partner[i] = j;
            partner[j] = i;
        }
    }
    if let Some((&label, _)) = seen.iter().find(|&(_, &i)| partner[i] == usize::MAX) {
        return Err(PmcError::NotTwoToOne { label, count: 1 });
    }

    let mut visited = vec![false; n];
    let mut circles = 0;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        circles += 1;
        let mut p = start;
        while !visited[p] {
            visited[p] = true;
            p = (partner[p] + 1) % n;
        }
    }
    Ok(circles)
}

/// A pointed matched circle: 4k points on an oriented circle with a
/// basepoint, matched in pairs by handle labels 1..=2k.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPmc", into = "RawPmc")]
pub struct PointedMatchedCircle {
    num_points: usize,
    matching: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawPmc {
    points: usize,
    matching: Vec<usize>,
}

impl TryFrom<RawPmc> for PointedMatchedCircle {
    type Error = PmcError;
    fn try_from(raw: RawPmc) -> Result<Self, PmcError> {
        if raw.matching.len() != raw.points {
            return Err(PmcError::WrongLength { expected: raw.points, got: raw.matching.len() });
        }
        PointedMatchedCircle::new(raw.matching)
    }
}

impl From<PointedMatchedCircle> for RawPmc {
    fn from(pmc: PointedMatchedCircle) -> RawPmc {
        RawPmc { points: pmc.num_points, matching: pmc.matching }
    }
}

impl PointedMatchedCircle {
    /// Validates a matching given as `matching[p-1] = label of point p`.
    pub fn new(matching: Vec<usize>) -> Result<Self, PmcError> {
        let n = matching.len();
        if !n.is_multiple_of(4) {
            return Err(PmcError::BadSize(n));
        }
        let max = n / 2;
        for &label in &matching {
            if label == 0 || label > max {
                return Err(PmcError::LabelOutOfRange { label, max });
            }
        }
        let mut counts = vec![0usize; max];
        for &label in &matching {
            counts[label - 1] += 1;
        }
        for (i, &count) in counts.iter().enumerate() {
            if count != 2 {
                return Err(PmcError::NotTwoToOne { label: i + 1, count });
            }
        }
        let circles = surgery_circle_count(&matching)?;
        if circles != 1 {
            return Err(PmcError::SurgeryDisconnected { circles });
        }
        Ok(PointedMatchedCircle { num_points: n, matching })
    }

    /// The surface glued from these handles has this genus.
    pub fn genus(&self) -> usize {
        self.num_points / 4
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    /// Number of handle labels, 2k.
    pub fn num_handles(&self) -> usize {
        self.num_points / 2
    }

    /// Handle label of a point (points are 1-based).
    pub fn label(&self, point: usize) -> usize {
        self.matching[point - 1]
    }

    /// The other point carrying the same label.
    pub fn partner(&self, point: usize) -> usize {
        let label = self.label(point);
        (1..=self.num_points)
            .find(|&q| q != point && self.matching[q - 1] == label)
            .expect("matching is two-to-one")
    }

    /// Both points of a handle, in circle order.
    pub fn handle_points(&self, label: usize) -> (usize, usize) {
        let mut it = (1..=self.num_points).filter(|&p| self.matching[p - 1] == label);
        let a = it.next().expect("label present");
        let b = it.next().expect("label present twice");
        (a, b)
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    /// All valid pointed matched circles of a genus, with labels canonically
    /// renumbered by first appearance, in lexicographic matching order.
    pub fn enumerate(genus: usize) -> Vec<PointedMatchedCircle> {
        let n = 4 * genus;
        let mut out = Vec::new();
        let mut matching = vec![0usize; n];
        fn fill(
            matching: &mut Vec<usize>,
            pos: usize,
            next_label: usize,
            out: &mut Vec<PointedMatchedCircle>,
        ) {
            let n = matching.len();
            if pos == n {
                if let Ok(pmc) = PointedMatchedCircle::new(matching.clone()) {
                    out.push(pmc);
                }
                return;
            }
            if matching[pos] != 0 {
                fill(matching, pos + 1, next_label, out);
                return;
            }
            matching[pos] = next_label;
            for q in pos + 1..n {
                if matching[q] == 0 {
                    matching[q] = next_label;
                    fill(matching, pos + 1, next_label + 1, out);
                    matching[q] = 0;
                }
            }
            matching[pos] = 0;
        }
        if n == 0 {
            out.push(PointedMatchedCircle { num_points: 0, matching: Vec::new() });
        } else {
            fill(&mut matching, 0, 1, &mut out);
        }
        out
    }
}

impl fmt::Display for PointedMatchedCircle {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "[")?;
        for (i, label) in self.matching.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PointedMatchedCircle {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_split_matching_is_valid() {
        let pmc = PointedMatchedCircle::new(vec![1, 2, 1, 2]).unwrap();
        assert_eq!(pmc.genus(), 1);
        assert_eq!(pmc.partner(1), 3);
        assert_eq!(pmc.handle_points(2), (2, 4));
    }

    #[test]
    fn nested_and_adjacent_matchings_disconnect() {
        assert_eq!(surgery_circle_count(&[1, 1, 2, 2]).unwrap(), 3);
        assert_eq!(surgery_circle_count(&[1, 2, 2, 1]).unwrap(), 3);
        assert_eq!(surgery_circle_count(&[1, 2, 1, 2]).unwrap(), 1);
        match PointedMatchedCircle::new(vec![1, 1, 2, 2]) {
            Err(PmcError::SurgeryDisconnected { circles: 3 }) => {}
            other => panic!("expected disconnection with 3 circles, got {other:?}"),
        }
    }

    #[test]
    fn size_and_matching_shape_are_checked() {
        assert!(matches!(PointedMatchedCircle::new(vec![1, 1]), Err(PmcError::BadSize(2))));
        assert!(matches!(
            PointedMatchedCircle::new(vec![1, 1, 1, 2]),
            Err(PmcError::NotTwoToOne { .. }) | Err(PmcError::LabelOutOfRange { .. })
        ));
        assert!(matches!(
            PointedMatchedCircle::new(vec![1, 2, 3, 1]),
            Err(PmcError::LabelOutOfRange { label: 3, max: 2 })
        ));
    }

    #[test]
    fn empty_circle_is_the_genus_zero_case() {
        assert_eq!(surgery_circle_count(&[]).unwrap(), 1);
        let pmcs = PointedMatchedCircle::enumerate(0);
        assert_eq!(pmcs.len(), 1);
        assert_eq!(pmcs[0].num_points(), 0);
    }

    #[test]
    fn genus_one_has_a_unique_matching() {
        let pmcs = PointedMatchedCircle::enumerate(1);
        assert_eq!(pmcs.len(), 1);
        assert_eq!(pmcs[0].matching(), &[1, 2, 1, 2]);
    }

    #[test]
    fn twenty_one_of_the_105_genus_two_pairings_survive_surgery() {
        let pmcs = PointedMatchedCircle::enumerate(2);
        assert_eq!(pmcs.len(), 21);
        assert!(pmcs
            .iter()
            .any(|pmc| pmc.matching() == [1, 2, 1, 2, 3, 4, 3, 4]));
        assert!(pmcs
            .iter()
            .any(|pmc| pmc.matching() == [1, 2, 3, 4, 1, 2, 3, 4]));
        // Nested and fully adjacent pairings disconnect.
        assert!(!pmcs
            .iter()
            .any(|pmc| pmc.matching() == [1, 1, 2, 2, 3, 3, 4, 4]));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let json = r#"{"points":4,"matching":[1,2,1,2]}"#;
        let pmc: PointedMatchedCircle = serde_json::from_str(json).unwrap();
        let out = serde_json::to_string(&pmc).unwrap();
        assert_eq!(out, json);
        let again: PointedMatchedCircle = serde_json::from_str(&out).unwrap();
        assert_eq!(serde_json::to_string(&again).unwrap(), json);
    }

    #[test]
    fn invalid_json_is_rejected() {
        let bad = r#"{"points":4,"matching":[1,1,2,2]}"#;
        assert!(serde_json::from_str::<PointedMatchedCircle>(bad).is_err());
    }
}
