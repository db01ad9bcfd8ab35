use alloc::string::String;
use alloc::vec::Vec;

use crate::tree::to_json;

use super::engine::{Engine, Prepared};
use super::{Difference, DifferenceKind};

/// Matched pairs costing more than this are reported.
pub(crate) const REPORT_THRESHOLD: f64 = 0.05;

const EXCERPT_CHARS: usize = 120;

pub(crate) fn excerpt(json: String) -> String {
    if json.chars().count() <= EXCERPT_CHARS {
        return json;
    }
    let mut cut: String = json.chars().take(EXCERPT_CHARS).collect();
    cut.push('…');
    cut
}

struct Walker<'e> {
    engine: &'e Engine,
    include_unchanged: bool,
    out: Vec<Difference>,
}

pub(crate) fn differences(
    engine: &Engine,
    a: &Prepared<'_>,
    b: &Prepared<'_>,
    include_unchanged: bool,
) -> Vec<Difference> {
    let mut walker = Walker { engine, include_unchanged, out: Vec::new() };
    let same_container = a.node.node_type() == b.node.node_type() && a.node.node_type().is_container();
    if same_container {
        walker.level(&a.children, &b.children);
    } else {
        let d = engine.distance(a, b);
        walker.pair(a, b, d);
    }
    let mut out = walker.out;
    out.sort_by(|x, y| x.path.cmp(&y.path).then(x.kind.cmp(&y.kind)));
    out
}

impl Walker<'_> {
    fn push(&mut self, path: &str, kind: DifferenceKind, left: Option<String>, right: Option<String>, cost: f64) {
        self.out.push(Difference { path: String::from(path), kind, left, right, cost });
    }

    fn level(&mut self, left: &[Prepared<'_>], right: &[Prepared<'_>]) {
        if left.is_empty() && right.is_empty() {
            return;
        }
        let matrix = self.engine.cost_matrix(left, right);
        let solved = crate::assignment::hungarian_solve(&matrix);
        for &(i, j) in &solved.pairs {
            let cost = matrix.get(i, j);
            match (left.get(i), right.get(j)) {
                (Some(a), Some(b)) => self.pair(a, b, cost),
                (Some(a), None) => {
                    self.push(a.node.path(), DifferenceKind::Missing, Some(excerpt(to_json(a.node))), None, cost)
                }
                (None, Some(b)) => {
                    self.push(b.node.path(), DifferenceKind::Extra, None, Some(excerpt(to_json(b.node))), cost)
                }
                (None, None) => {}
            }
        }
    }

    fn pair(&mut self, a: &Prepared<'_>, b: &Prepared<'_>, cost: f64) {
        let (ta, tb) = (a.node.node_type(), b.node.node_type());
        let labels_differ = a.node.label() != b.node.label();
        let left = || excerpt(to_json(a.node));
        let right = || excerpt(to_json(b.node));
        let label = |n: &Prepared<'_>| n.node.label().map(String::from);

        if cost == 0.0 {
            if self.include_unchanged {
                self.push(a.node.path(), DifferenceKind::Unchanged, Some(left()), Some(right()), 0.0);
            }
            return;
        }

        if ta == tb && ta.is_container() {
            let (s, c) = self.engine.components(a, b);
            if labels_differ && (s > REPORT_THRESHOLD || self.include_unchanged) {
                self.push(a.node.path(), DifferenceKind::KeyRenamed, label(a), label(b), s);
            }
            if c > 0.0 {
                self.level(&a.children, &b.children);
            }
            return;
        }

        if cost <= REPORT_THRESHOLD && !self.include_unchanged {
            return;
        }
        let kind = if ta.is_container() || tb.is_container() {
            DifferenceKind::Restructured
        } else if ta != tb {
            DifferenceKind::TypeChanged
        } else {
            let (s, c) = self.engine.components(a, b);
            if labels_differ && s >= c {
                DifferenceKind::KeyRenamed
            } else {
                DifferenceKind::ValueChanged
            }
        };
        let (l, r) = if kind == DifferenceKind::KeyRenamed { (label(a), label(b)) } else { (Some(left()), Some(right())) };
        self.push(a.node.path(), kind, l, r, cost);
    }
}
