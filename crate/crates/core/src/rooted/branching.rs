//! Branching layer: horizontal zones that lengthen by one cell per tree
//! level and choose one subtree to continue into.
//!
//! A zone at tree level n spans n+1 consecutive line cells, marked
//! left end, body cells, right end. Level-0 zones are single seed
//! cells. Every cell of a zone carries the zone's current bit, naming
//! the son the zone continues into; descending there, the left end
//! stays put, the right end turns into a body cell and a fresh right
//! end appears one step further right. The bit at the next level is a
//! fresh choice, so a configuration is a schedule of zone survivals.

use crate::group::GroupOracle;
use crate::rooted::{CellView, LayeredPatch, RuleViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mark {
    /// Level-0 zone, a single cell.
    Seed,
    /// Leftmost cell of a running zone.
    LeftEnd,
    /// Interior cell.
    Body,
    /// Rightmost cell; where the zone grows.
    RightEnd,
}

impl Mark {
    pub fn glyph(self) -> char {
        match self {
            Mark::Seed => 'S',
            Mark::LeftEnd => '>',
            Mark::Body => '=',
            Mark::RightEnd => '<',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BranchSym {
    pub mark: Mark,
    pub bit: bool,
}

impl BranchSym {
    pub fn new(mark: Mark, bit: bool) -> BranchSym {
        BranchSym { mark, bit }
    }
}

/// Checks the branching layer: in-zone neighbours agree (marks chain
/// and bits match), zones continue and grow by one into the son named
/// by their bit, and every non-root cell is licensed either by the cell
/// above it or by a seed or right end just left of that cell.
pub fn branching_check(oracle: &GroupOracle, patch: &LayeredPatch) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    for ((h, w), bs) in &patch.beta {
        horizontal_rules(oracle, patch, h, w, *bs, &mut out);
        growth_rules(oracle, patch, h, w, *bs, &mut out);
        licensing_rule(oracle, patch, h, w, &mut out);
    }
    out
}

fn horizontal_rules(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    h: &crate::group::Element,
    w: &crate::rooted::Word,
    bs: BranchSym,
    out: &mut Vec<RuleViolation>,
) {
    let wants_right = matches!(bs.mark, Mark::LeftEnd | Mark::Body);
    let wants_left = matches!(bs.mark, Mark::Body | Mark::RightEnd);
    if wants_right {
        if let Some(r) = patch.right_of(oracle, h) {
            match patch.beta_at(&r, w) {
                CellView::Value(n) => {
                    if !matches!(n.mark, Mark::Body | Mark::RightEnd) || n.bit != bs.bit {
                        out.push(RuleViolation::new(
                            "B.horizontal",
                            h,
                            w,
                            "zone does not continue to the right".to_string(),
                        ));
                    }
                }
                CellView::Empty => out.push(RuleViolation::new(
                    "B.horizontal",
                    h,
                    w,
                    "zone is cut off on the right".to_string(),
                )),
                CellView::Unknown => {}
            }
        }
    }
    if wants_left {
        if let Some(l) = patch.left_of(oracle, h) {
            match patch.beta_at(&l, w) {
                CellView::Value(n) => {
                    if !matches!(n.mark, Mark::LeftEnd | Mark::Body) || n.bit != bs.bit {
                        out.push(RuleViolation::new(
                            "B.horizontal",
                            h,
                            w,
                            "zone does not continue to the left".to_string(),
                        ));
                    }
                }
                CellView::Empty => out.push(RuleViolation::new(
                    "B.horizontal",
                    h,
                    w,
                    "zone is cut off on the left".to_string(),
                )),
                CellView::Unknown => {}
            }
        }
    }
}

fn growth_rules(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    h: &crate::group::Element,
    w: &crate::rooted::Word,
    bs: BranchSym,
    out: &mut Vec<RuleViolation>,
) {
    let son = w.child(bs.bit);
    let child = patch.beta_at(h, &son);
    let expect_here = match bs.mark {
        Mark::Seed | Mark::LeftEnd => Mark::LeftEnd,
        Mark::Body | Mark::RightEnd => Mark::Body,
    };
    match child {
        CellView::Value(c) => {
            if c.mark != expect_here {
                out.push(RuleViolation::new(
                    "B.growth",
                    h,
                    w,
                    format!("son cell carries {:?}, expected {:?}", c.mark, expect_here),
                ));
            }
        }
        CellView::Empty => out.push(RuleViolation::new(
            "B.growth",
            h,
            w,
            "zone does not continue into its chosen son".to_string(),
        )),
        CellView::Unknown => {}
    }
    // A seed spawns its right end one step right; a right end pushes
    // the fresh right end there.
    if matches!(bs.mark, Mark::Seed | Mark::RightEnd) {
        if let Some(r) = patch.right_of(oracle, h) {
            match patch.beta_at(&r, &son) {
                CellView::Value(c) => {
                    if c.mark != Mark::RightEnd {
                        out.push(RuleViolation::new(
                            "B.growth",
                            h,
                            w,
                            format!("fresh right end carries {:?}", c.mark),
                        ));
                    }
                }
                CellView::Empty => out.push(RuleViolation::new(
                    "B.growth",
                    h,
                    w,
                    "fresh right end is missing".to_string(),
                )),
                CellView::Unknown => {}
            }
        }
    }
}

fn licensing_rule(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    h: &crate::group::Element,
    w: &crate::rooted::Word,
    out: &mut Vec<RuleViolation>,
) {
    let Some((parent, b)) = w.parent() else { return };
    let mut unknown = false;
    match patch.beta_at(h, &parent) {
        CellView::Value(p) => {
            if p.bit == b {
                return;
            }
        }
        CellView::Empty => {}
        CellView::Unknown => unknown = true,
    }
    match patch.left_of(oracle, h) {
        Some(l) => match patch.beta_at(&l, &parent) {
            CellView::Value(lp) => {
                if lp.bit == b && matches!(lp.mark, Mark::Seed | Mark::RightEnd) {
                    return;
                }
            }
            CellView::Empty => {}
            CellView::Unknown => unknown = true,
        },
        None => unknown = true,
    }
    if !unknown {
        out.push(RuleViolation::new(
            "B.licensing",
            h,
            w,
            "cell is not licensed by the level above".to_string(),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupOracle;
    use crate::rooted::{DirPair, Word};

    /// Hand-built two-level fragment on the line: seeds at -1, 0, 1
    /// with bits 1, 0, 1; zones grow into their chosen sons.
    fn demo(complete: bool) -> (GroupOracle, LayeredPatch) {
        let oracle = GroupOracle::lattice(1);
        let mut p = LayeredPatch::new(&oracle, 1, 1, complete);
        let cell = |k: i64| oracle.element_from_string(&k.to_string()).unwrap();
        for h in oracle.ball(1) {
            p.delta.insert(h, DirPair::canonical());
        }
        let seed = |bit| BranchSym::new(Mark::Seed, bit);
        p.beta.insert((cell(-1), Word::root()), seed(true));
        p.beta.insert((cell(0), Word::root()), seed(false));
        p.beta.insert((cell(1), Word::root()), seed(true));
        let w0 = Word(vec![false]);
        let w1 = Word(vec![true]);
        p.beta.insert((cell(0), w0.clone()), BranchSym::new(Mark::LeftEnd, false));
        p.beta.insert((cell(1), w0.clone()), BranchSym::new(Mark::RightEnd, false));
        p.beta.insert((cell(-1), w1.clone()), BranchSym::new(Mark::LeftEnd, false));
        p.beta.insert((cell(0), w1.clone()), BranchSym::new(Mark::RightEnd, false));
        p.beta.insert((cell(1), w1.clone()), BranchSym::new(Mark::LeftEnd, false));
        (oracle, p)
    }

    #[test]
    fn hand_fragment_is_clean() {
        let (oracle, p) = demo(true);
        let vs = branching_check(&oracle, &p);
        assert!(vs.is_empty(), "unexpected violations: {vs:?}");
    }

    #[test]
    fn flipped_bit_breaks_horizontal_agreement() {
        let (oracle, mut p) = demo(true);
        let one = oracle.element_from_string("1").unwrap();
        let w0 = Word(vec![false]);
        p.beta.insert((one, w0), BranchSym::new(Mark::RightEnd, true));
        let vs = branching_check(&oracle, &p);
        assert_eq!(vs.iter().filter(|v| v.rule == "B.horizontal").count(), 2);
    }

    #[test]
    fn removed_left_end_is_flagged_twice() {
        let (oracle, mut p) = demo(true);
        let zero = oracle.element_from_string("0").unwrap();
        let w0 = Word(vec![false]);
        p.beta.remove(&(zero, w0));
        let vs = branching_check(&oracle, &p);
        assert!(vs.iter().any(|v| v.rule == "B.growth"), "seed must see its son missing");
        assert!(vs.iter().any(|v| v.rule == "B.horizontal"), "right end lost its left neighbour");
    }

    #[test]
    fn orphan_cell_fails_licensing() {
        let (oracle, mut p) = demo(true);
        // Retarget the seed at 1 into son 0: its old cell in son 1 is
        // now licensed neither from above nor from the left.
        let one = oracle.element_from_string("1").unwrap();
        p.beta.insert((one.clone(), Word::root()), BranchSym::new(Mark::Seed, false));
        let vs = branching_check(&oracle, &p);
        assert!(
            vs.iter().any(|v| v.rule == "B.licensing" && v.h == one),
            "cell at 1 in son 1 lost both licenses: {vs:?}"
        );
    }

    #[test]
    fn open_boundary_skips_truncated_rules() {
        let (oracle, p) = demo(false);
        // Same data, but unknown outside: still clean, and removing a
        // cell now merely makes its neighbours unknown.
        let mut p2 = p.clone();
        let zero = oracle.element_from_string("0").unwrap();
        p2.beta.remove(&(zero, Word(vec![false])));
        assert!(branching_check(&oracle, &p2).is_empty());
        assert!(branching_check(&oracle, &p).is_empty());
    }
}
