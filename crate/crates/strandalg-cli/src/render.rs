//! SVG pictures of strand diagrams and layered chord arcs.
//!
//! Marked points sit on dotted horizontal levels, chords are solid rising
//! strands drawn as straight segments, and handles held by an idempotent
//! without a departing chord appear as a dotted pair of horizontals. Two
//! straight strands in one column intersect exactly when their endpoints
//! invert, so the drawn crossings equal the inversion count; each gets a
//! small marker. This is the one place in the project where floating-point
//! coordinates appear; everything upstream is exact.

use strandalg::algebra::{ChordSet, MatchedGenerator, ReebChord};
use strandalg::PointedMatchedCircle;

const X_MARGIN: f64 = 40.0;
const Y_MARGIN: f64 = 30.0;
const LEVEL_GAP: f64 = 36.0;
const COLUMN_WIDTH: f64 = 140.0;

struct Canvas {
    num_points: usize,
    columns: usize,
    body: String,
}

impl Canvas {
    fn new(num_points: usize, columns: usize) -> Canvas {
        Canvas { num_points, columns, body: String::new() }
    }

    fn width(&self) -> f64 {
        2.0 * X_MARGIN + self.columns as f64 * COLUMN_WIDTH
    }

    fn height(&self) -> f64 {
        2.0 * Y_MARGIN + (self.num_points.saturating_sub(1)) as f64 * LEVEL_GAP
    }

    /// Lower points sit lower on the page.
    fn y(&self, point: usize) -> f64 {
        Y_MARGIN + (self.num_points - point) as f64 * LEVEL_GAP
    }

    fn column_x(&self, column: usize) -> (f64, f64) {
        let x0 = X_MARGIN + column as f64 * COLUMN_WIDTH;
        (x0, x0 + COLUMN_WIDTH)
    }

    fn levels(&mut self) {
        let (x0, _) = self.column_x(0);
        let (_, x1) = self.column_x(self.columns.saturating_sub(1));
        for p in 1..=self.num_points {
            let y = self.y(p);
            self.body.push_str(&format!(
                "  <line class=\"level\" x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" \
                 stroke=\"#999\" stroke-dasharray=\"2,4\"/>\n"
            ));
            self.body.push_str(&format!(
                "  <text class=\"point\" x=\"{}\" y=\"{}\" font-size=\"11\" \
                 fill=\"#666\">{p}</text>\n",
                x0 - 18.0,
                y + 4.0
            ));
        }
    }

    /// Solid strands for the chords of one column, with crossing markers at
    /// every inverted pair.
    fn strands(&mut self, column: usize, chords: &[ReebChord]) {
        let (x0, x1) = self.column_x(column);
        for c in chords {
            let (ya, yb) = (self.y(c.minus()), self.y(c.plus()));
            self.body.push_str(&format!(
                "  <line class=\"strand\" x1=\"{x0}\" y1=\"{ya}\" x2=\"{x1}\" y2=\"{yb}\" \
                 stroke=\"#000\" stroke-width=\"2\"/>\n"
            ));
        }
        for (i, a) in chords.iter().enumerate() {
            for b in &chords[i + 1..] {
                let (lo, hi) = if a.minus() < b.minus() { (a, b) } else { (b, a) };
                if lo.plus() <= hi.plus() {
                    continue;
                }
                let (ya0, ya1) = (self.y(lo.minus()), self.y(lo.plus()));
                let (yb0, yb1) = (self.y(hi.minus()), self.y(hi.plus()));
                let t = (yb0 - ya0) / ((yb0 - ya0) - (yb1 - ya1));
                let x = x0 + t * (x1 - x0);
                let y = ya0 + t * (ya1 - ya0);
                self.body.push_str(&format!(
                    "  <circle class=\"crossing\" cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" \
                     fill=\"none\" stroke=\"#c00\" stroke-width=\"1.5\"/>\n"
                ));
            }
        }
    }

    /// Dotted horizontals at both points of a held handle.
    fn handle_pair(&mut self, column: usize, points: (usize, usize)) {
        let (x0, x1) = self.column_x(column);
        for p in [points.0, points.1] {
            let y = self.y(p);
            self.body.push_str(&format!(
                "  <line class=\"pair\" x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" \
                 stroke=\"#000\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\"/>\n"
            ));
        }
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
             viewBox=\"0 0 {:.0} {:.0}\">\n{}</svg>\n",
            self.width(),
            self.height(),
            self.width(),
            self.height(),
            self.body
        )
    }
}

/// One column: the generator's chords as solid strands, its chord-free
/// occupied handles as dotted pairs.
pub fn render_generator(pmc: &PointedMatchedCircle, generator: &MatchedGenerator) -> String {
    let mut canvas = Canvas::new(pmc.num_points(), 1);
    canvas.levels();
    let departing: std::collections::BTreeSet<usize> = generator
        .chords()
        .iter()
        .map(|c| pmc.label(c.minus()))
        .collect();
    for &label in generator.occupied() {
        if !departing.contains(&label) {
            canvas.handle_pair(0, pmc.handle_points(label));
        }
    }
    canvas.strands(0, generator.chords().chords());
    canvas.finish()
}

/// One column per layer, read left to right.
pub fn render_layers(num_points: usize, layers: &[ChordSet]) -> String {
    let mut canvas = Canvas::new(num_points, layers.len().max(1));
    canvas.levels();
    for (column, layer) in layers.iter().enumerate() {
        canvas.strands(column, layer.chords());
    }
    canvas.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use strandalg::algebra::{ChordSet, MatchedGenerator, ReebChord};

    fn count(haystack: &str, needle: &str) -> usize {
        haystack.matches(needle).count()
    }

    #[test]
    fn single_chord_gives_one_rising_strand() {
        let pmc = PointedMatchedCircle::new(vec![1, 2, 1, 2]).unwrap();
        let g = MatchedGenerator::new(
            [1],
            ChordSet::new([ReebChord::new(1, 2).unwrap()]).unwrap(),
        );
        let svg = render_generator(&pmc, &g);
        assert_eq!(count(&svg, "class=\"strand\""), 1);
        assert_eq!(count(&svg, "class=\"crossing\""), 0);
        assert_eq!(count(&svg, "class=\"pair\""), 0);
    }

    #[test]
    fn held_handle_draws_a_dotted_pair() {
        let pmc = PointedMatchedCircle::new(vec![1, 2, 1, 2]).unwrap();
        let g = MatchedGenerator::new(
            [1, 2],
            ChordSet::new([ReebChord::new(1, 3).unwrap()]).unwrap(),
        );
        let svg = render_generator(&pmc, &g);
        assert_eq!(count(&svg, "class=\"strand\""), 1);
        // Label 2 is held: dotted lines at both of its points.
        assert_eq!(count(&svg, "class=\"pair\""), 2);
    }

    #[test]
    fn nested_chords_cross_once() {
        let set = ChordSet::new([
            ReebChord::new(1, 4).unwrap(),
            ReebChord::new(2, 3).unwrap(),
        ])
        .unwrap();
        let svg = render_layers(4, &[set]);
        assert_eq!(count(&svg, "class=\"strand\""), 2);
        assert_eq!(count(&svg, "class=\"crossing\""), 1);
    }

    #[test]
    fn empty_element_is_an_empty_canvas() {
        let svg = render_layers(0, &[]);
        assert!(svg.starts_with("<svg"));
        assert_eq!(count(&svg, "class=\"strand\""), 0);
        assert_eq!(count(&svg, "class=\"level\""), 0);
    }
}
