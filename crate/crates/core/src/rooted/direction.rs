//! Direction layer: per line cell, a pair of generators naming its left
//! and right neighbours.
//!
//! The layer turns the ambient line structure into local data, so every
//! other layer can speak of "the cell to the right" without consulting
//! the group. Coherence demands that neighbour claims are mutual.

use crate::group::{GenSym, GroupOracle};
use crate::rooted::{CellView, LayeredPatch, RuleViolation, Word};

/// Direction letters at one cell: `left` and `right` name the
/// generators leading to the adjacent line cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DirPair {
    pub left: GenSym,
    pub right: GenSym,
}

impl DirPair {
    /// The canonical assignment induced by the translation generator.
    pub fn canonical() -> DirPair {
        DirPair { left: GenSym(2), right: GenSym(1) }
    }
}

/// Checks the direction layer.
///
/// Rules: neither letter is the identity; my right neighbour's left
/// letter undoes my right letter, and symmetrically. On a complete
/// patch every supported cell must carry a pair.
pub fn directions_check(oracle: &GroupOracle, patch: &LayeredPatch) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    let root = Word::root();
    for (h, d) in &patch.delta {
        if d.left == GenSym::IDENTITY || d.right == GenSym::IDENTITY {
            out.push(RuleViolation::new(
                "D.degenerate",
                h,
                &root,
                "direction letter is the identity".to_string(),
            ));
            continue;
        }
        let right = oracle.mul_gen(h, d.right);
        match patch.delta_at(&right) {
            CellView::Value(d2) => {
                if d2.left != oracle.gen_inverse(d.right) {
                    out.push(RuleViolation::new(
                        "D.right-coherence",
                        h,
                        &root,
                        format!(
                            "right neighbour {} does not point back",
                            oracle.element_to_string(&right)
                        ),
                    ));
                }
            }
            CellView::Empty => out.push(RuleViolation::new(
                "D.right-coherence",
                h,
                &root,
                format!("right neighbour {} carries no pair", oracle.element_to_string(&right)),
            )),
            CellView::Unknown => {}
        }
        let left = oracle.mul_gen(h, d.left);
        match patch.delta_at(&left) {
            CellView::Value(d2) => {
                if d2.right != oracle.gen_inverse(d.left) {
                    out.push(RuleViolation::new(
                        "D.left-coherence",
                        h,
                        &root,
                        format!(
                            "left neighbour {} does not point back",
                            oracle.element_to_string(&left)
                        ),
                    ));
                }
            }
            CellView::Empty => out.push(RuleViolation::new(
                "D.left-coherence",
                h,
                &root,
                format!("left neighbour {} carries no pair", oracle.element_to_string(&left)),
            )),
            CellView::Unknown => {}
        }
    }
    if patch.complete {
        for h in patch.support_elements() {
            if !patch.delta.contains_key(h) {
                out.push(RuleViolation::new(
                    "D.missing",
                    h,
                    &root,
                    "supported cell carries no direction pair".to_string(),
                ));
            }
        }
    }
    out
}
