//! Cross-cutting algebraic laws, checked exhaustively where small and
//! property-style where not: associativity of strand products, closure of
//! the grading parity under composition, the quadratic behaviour of ε, the
//! agreement of the two pairing routes, and the exact match between the
//! survival criterion and expansion.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use strandalg::algebra::{
    enumerate_chord_sets, enumerate_generators, ChordSet, MatchedGenerator,
};
use strandalg::grading::{set_pairing, GradingElement, HomologyClass};
use strandalg::strands::{enumerate_diagrams, AlgebraElement, StrandDiagram};
use strandalg::{HalfInteger, PointedMatchedCircle};

/// The upward part of a random permutation is always a valid diagram.
fn permutation_diagram(ambient: usize, rng: &mut ChaCha8Rng) -> StrandDiagram {
    let mut targets: Vec<usize> = (1..=ambient).collect();
    targets.shuffle(rng);
    let strands = targets
        .iter()
        .enumerate()
        .map(|(i, &t)| (i + 1, t))
        .filter(|&(s, t)| t >= s);
    StrandDiagram::new(ambient, strands).unwrap()
}

fn random_class(num_points: usize, rng: &mut ChaCha8Rng) -> HomologyClass {
    let segments = (1..num_points).map(|_| rng.gen_range(-3..=3)).collect();
    HomologyClass::new(segments)
}

fn random_grading(num_points: usize, rng: &mut ChaCha8Rng) -> GradingElement {
    let class = random_class(num_points, rng);
    let maslov = HalfInteger::from_twice(class.epsilon().twice() + 2 * rng.gen_range(-4..=4));
    GradingElement::new(maslov, class).unwrap()
}

fn all_chord_sets_on_eight_points() -> &'static [ChordSet] {
    static SETS: OnceLock<Vec<ChordSet>> = OnceLock::new();
    SETS.get_or_init(|| enumerate_chord_sets(8, None))
}

#[test]
fn strand_products_associate_exhaustively_on_four_points() {
    let diagrams = enumerate_diagrams(4);
    assert_eq!(diagrams.len(), 52);
    let elements: Vec<AlgebraElement> = diagrams
        .iter()
        .cloned()
        .map(AlgebraElement::from_diagram)
        .collect();
    for a in &elements {
        let mut seen = 0u32;
        for b in &elements {
            let ab = a.multiply(b).unwrap();
            for c in &elements {
                let bc = b.multiply(c).unwrap();
                let left = ab.multiply(c).unwrap();
                let right = a.multiply(&bc).unwrap();
                assert_eq!(left, right, "({a:?} {b:?}) {c:?}");
                if !left.is_zero() {
                    seen += 1;
                }
            }
        }
        assert!(seen <= 52 * 52);
    }
}

proptest! {
    #[test]
    fn strand_products_associate_on_permutation_diagrams(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AlgebraElement::from_diagram(permutation_diagram(8, &mut rng));
        let b = AlgebraElement::from_diagram(permutation_diagram(8, &mut rng));
        let c = AlgebraElement::from_diagram(permutation_diagram(8, &mut rng));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn grading_composition_associates_and_inverts(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_grading(8, &mut rng);
        let b = random_grading(8, &mut rng);
        let c = random_grading(8, &mut rng);
        prop_assert_eq!(
            a.compose(&b).compose(&c),
            a.compose(&b.compose(&c))
        );
        let identity = GradingElement::identity(8);
        prop_assert_eq!(a.compose(&a.inverse()), identity.clone());
        prop_assert_eq!(a.inverse().compose(&a), identity);
    }

    #[test]
    fn epsilon_is_a_quadratic_refinement_of_the_pairing(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_class(8, &mut rng);
        let b = random_class(8, &mut rng);
        let sum = a.add(&b).epsilon();
        let parts = a.epsilon() + b.epsilon() + a.pairing(&b);
        prop_assert!(sum.congruent_mod_one(parts));
    }

    #[test]
    fn chord_and_class_pairings_agree_on_random_sets(i in 0usize..4156, j in 0usize..4156) {
        let sets = all_chord_sets_on_eight_points();
        prop_assume!(i < sets.len() && j < sets.len());
        let a = &sets[i];
        let b = &sets[j];
        let by_classes = HomologyClass::of_chords(a, 8)
            .pairing(&HomologyClass::of_chords(b, 8));
        prop_assert_eq!(set_pairing(a, b), by_classes);
    }
}

#[test]
fn survival_criterion_matches_expansion_on_genus_two_circles() {
    for matching in [vec![1, 2, 1, 2, 3, 4, 3, 4], vec![1, 2, 3, 4, 1, 2, 3, 4]] {
        let pmc = PointedMatchedCircle::new(matching).unwrap();
        let labels: Vec<usize> = (1..=pmc.num_handles()).collect();
        let mut nonzero = 0u64;
        for chords in all_chord_sets_on_eight_points() {
            for mask in 0u32..1 << labels.len() {
                let s = labels
                    .iter()
                    .enumerate()
                    .filter(|&(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &label)| label);
                let g = MatchedGenerator::new(s, chords.clone());
                let expanded = g.expand(&pmc);
                assert_eq!(
                    g.is_nonzero(&pmc),
                    !expanded.is_zero(),
                    "criterion and expansion disagree on {g:?}"
                );
                if !expanded.is_zero() {
                    nonzero += 1;
                }
            }
        }
        // Spot the census: the surviving count equals the generator list.
        assert_eq!(nonzero as usize, enumerate_generators(&pmc).len());
    }
}
