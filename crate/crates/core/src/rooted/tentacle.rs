//! Tentacle layer: mobile read arms anchored to zones.
//!
//! A tentacle is a chain of cells at one level, anchored at a base on
//! the squid column and reaching out to a tip. The tip reads the base
//! layer under itself and the whole chain relays that symbol back, so
//! a machine pinned to its origin column can read remote cells. The
//! base picks up the command its squid tile emits and the command rides
//! the chain; between levels it acts: grow extends the chain by one
//! letter, delete retracts it to a fresh base, growing by the identity
//! copies the chain unchanged.

use crate::group::{GenSym, GroupOracle};
use crate::rooted::tile::{Edge, TileSet};
use crate::rooted::{CellView, LayeredPatch, Mark, RuleViolation, Word};
use crate::subshift::Sym;
use std::fmt;

/// Order handed from the squid column to the tentacle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cmd {
    Delete,
    Grow(GenSym),
}

impl Cmd {
    /// Growing by the identity letter keeps the chain as it is.
    pub const IDLE: Cmd = Cmd::Grow(GenSym::IDENTITY);

    pub fn label(&self) -> String {
        match self {
            Cmd::Delete => "D".to_string(),
            Cmd::Grow(s) => format!("G{}", s.0),
        }
    }
}

impl fmt::Display for Cmd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// One cell of a tentacle chain.
///
/// `prev` and `next` are the generator letters toward the base and the
/// tip; the identity letter marks the two ends. `symb` is the base
/// symbol under the tip, relayed through every cell, and `comm` and
/// `bit` are shared by the whole chain at one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TentacleSym {
    pub bit: bool,
    pub prev: GenSym,
    pub next: GenSym,
    pub symb: Sym,
    pub comm: Cmd,
}

/// Local rules for the tentacle layer.
pub fn tentacle_check(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    tiles: &TileSet,
) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    let id = GenSym::IDENTITY;
    let root = Word::root();

    if patch.complete {
        for h in patch.support_elements() {
            if let CellView::Empty = patch.tentacle_at(h, &root) {
                out.push(RuleViolation::new(
                    "T.root",
                    h,
                    &root,
                    "every root starts a fresh tentacle".to_string(),
                ));
            }
        }
    }

    for ((h, w), t) in &patch.tentacle {
        if !patch.in_support(h, w) {
            continue;
        }

        if w.is_empty() && (t.prev != id || t.next != id) {
            out.push(RuleViolation::new(
                "T.root",
                h,
                w,
                "root tentacles are single fresh tips".to_string(),
            ));
        }

        if t.prev == id {
            match patch.beta_at(h, w) {
                CellView::Value(bs) => {
                    if !matches!(bs.mark, Mark::Seed | Mark::LeftEnd) || bs.bit != t.bit {
                        out.push(RuleViolation::new(
                            "T.base",
                            h,
                            w,
                            "the base must sit on the squid column of its zone".to_string(),
                        ));
                    }
                }
                CellView::Empty => {
                    out.push(RuleViolation::new(
                        "T.base",
                        h,
                        w,
                        "tentacle base without a zone cell".to_string(),
                    ));
                }
                CellView::Unknown => {}
            }
            if let CellView::Value(name) = patch.gamma_at(h, w) {
                if let Some(tile) = tiles.get(name) {
                    if !tile.squid {
                        out.push(RuleViolation::new(
                            "T.base",
                            h,
                            w,
                            format!("base tile `{name}` is not a squid column tile"),
                        ));
                    }
                    let want = match tile.right {
                        Edge::Cmd(c) => c,
                        _ => Cmd::IDLE,
                    };
                    if t.comm != want {
                        out.push(RuleViolation::new(
                            "T.comm",
                            h,
                            w,
                            format!(
                                "base carries {} but the squid tile hands out {}",
                                t.comm, want
                            ),
                        ));
                    }
                }
            }
        }

        if t.next == id {
            // The tip reads the base layer under itself.
            match patch.alpha_at(h) {
                CellView::Value(a) => {
                    if t.symb != a {
                        out.push(RuleViolation::new(
                            "T.symb",
                            h,
                            w,
                            "tip symbol disagrees with the base layer".to_string(),
                        ));
                    }
                }
                CellView::Empty => {
                    out.push(RuleViolation::new(
                        "T.symb",
                        h,
                        w,
                        "tip reads a missing base symbol".to_string(),
                    ));
                }
                CellView::Unknown => {}
            }
        } else {
            let g = oracle.mul_gen(h, t.next);
            match patch.tentacle_at(&g, w) {
                CellView::Value(n) => {
                    if n.prev != oracle.gen_inverse(t.next) {
                        out.push(RuleViolation::new(
                            "T.chain",
                            h,
                            w,
                            "forward link is not reciprocated".to_string(),
                        ));
                    } else {
                        if n.comm != t.comm || n.bit != t.bit {
                            out.push(RuleViolation::new(
                                "T.comm",
                                h,
                                w,
                                "command and bit must ride the whole chain".to_string(),
                            ));
                        }
                        if n.symb != t.symb {
                            out.push(RuleViolation::new(
                                "T.symb",
                                h,
                                w,
                                "chain must relay the tip symbol unchanged".to_string(),
                            ));
                        }
                    }
                }
                CellView::Empty => {
                    out.push(RuleViolation::new(
                        "T.chain",
                        h,
                        w,
                        "chain continues into an empty cell".to_string(),
                    ));
                }
                CellView::Unknown => {}
            }
        }

        if t.prev != id {
            let g = oracle.mul_gen(h, t.prev);
            match patch.tentacle_at(&g, w) {
                CellView::Value(n) => {
                    if n.next != oracle.gen_inverse(t.prev) {
                        out.push(RuleViolation::new(
                            "T.chain",
                            h,
                            w,
                            "backward link is not reciprocated".to_string(),
                        ));
                    }
                }
                CellView::Empty => {
                    out.push(RuleViolation::new(
                        "T.chain",
                        h,
                        w,
                        "chain cell with no predecessor".to_string(),
                    ));
                }
                CellView::Unknown => {}
            }
        }

        // The command acts between this level and the son it grows into.
        let son = w.child(t.bit);
        if patch.in_support(h, &son) {
            match t.comm {
                Cmd::Delete => {
                    if t.prev == id {
                        match patch.tentacle_at(h, &son) {
                            CellView::Value(n) => {
                                if n.prev != id || n.next != id {
                                    out.push(RuleViolation::new(
                                        "T.vertical",
                                        h,
                                        &son,
                                        "delete leaves a fresh base tip".to_string(),
                                    ));
                                }
                            }
                            CellView::Empty => {
                                out.push(RuleViolation::new(
                                    "T.vertical",
                                    h,
                                    &son,
                                    "delete keeps the base alive".to_string(),
                                ));
                            }
                            CellView::Unknown => {}
                        }
                    } else if let CellView::Value(_) = patch.tentacle_at(h, &son) {
                        out.push(RuleViolation::new(
                            "T.vertical",
                            h,
                            &son,
                            "deleted chain cells must vanish".to_string(),
                        ));
                    }
                }
                Cmd::Grow(s) => {
                    let expected_next = if t.next == id && s != id { s } else { t.next };
                    match patch.tentacle_at(h, &son) {
                        CellView::Value(n) => {
                            if n.prev != t.prev || n.next != expected_next {
                                out.push(RuleViolation::new(
                                    "T.vertical",
                                    h,
                                    &son,
                                    "links must carry down unchanged".to_string(),
                                ));
                            }
                        }
                        CellView::Empty => {
                            out.push(RuleViolation::new(
                                "T.vertical",
                                h,
                                &son,
                                "chain fails to continue one level down".to_string(),
                            ));
                        }
                        CellView::Unknown => {}
                    }
                    if t.next == id && s != id {
                        let g = oracle.mul_gen(h, s);
                        if patch.in_support(&g, &son) {
                            match patch.tentacle_at(&g, &son) {
                                CellView::Value(n) => {
                                    if n.prev != oracle.gen_inverse(s) || n.next != id {
                                        out.push(RuleViolation::new(
                                            "T.vertical",
                                            &g,
                                            &son,
                                            "grown tip has the wrong links".to_string(),
                                        ));
                                    }
                                }
                                CellView::Empty => {
                                    out.push(RuleViolation::new(
                                        "T.vertical",
                                        &g,
                                        &son,
                                        "grow must create the new tip".to_string(),
                                    ));
                                }
                                CellView::Unknown => {}
                            }
                        }
                    }
                }
            }
        }

        // Licensing looks upward: a cell must be put there by the level
        // above, either as the continuation of the chain cell below it
        // or as a tip freshly grown by the neighboring old tip.
        if let Some((pw, b)) = w.parent() {
            let below = patch.tentacle_at(h, &pw);
            if !matches!(below, CellView::Unknown) {
                let mut licensed = matches!(below, CellView::Value(u) if u.bit == b);
                if !licensed && t.prev != id && t.next == id {
                    let g = oracle.mul_gen(h, t.prev);
                    match patch.tentacle_at(&g, &pw) {
                        CellView::Value(old) => {
                            licensed = old.next == id
                                && old.bit == b
                                && old.comm == Cmd::Grow(oracle.gen_inverse(t.prev));
                        }
                        CellView::Unknown => licensed = true,
                        CellView::Empty => {}
                    }
                }
                if !licensed {
                    out.push(RuleViolation::new(
                        "T.licensing",
                        h,
                        w,
                        "no command from above creates this cell".to_string(),
                    ));
                }
            }
        }
    }

    // Conditional tiles read the tentacle cell to their left.
    for ((h, w), name) in &patch.gamma {
        if !patch.in_support(h, w) {
            continue;
        }
        let Some(tile) = tiles.get(name) else { continue };
        let Some(a) = tile.cond else { continue };
        let Some(left) = patch.left_of(oracle, h) else { continue };
        match patch.tentacle_at(&left, w) {
            CellView::Value(t) => {
                if t.symb != a {
                    out.push(RuleViolation::new(
                        "T.read",
                        h,
                        w,
                        "delivered symbol disagrees with the read tile".to_string(),
                    ));
                }
            }
            CellView::Empty => {
                out.push(RuleViolation::new(
                    "T.read",
                    h,
                    w,
                    "read tile with no tentacle beside it".to_string(),
                ));
            }
            CellView::Unknown => {}
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Element, GroupOracle};
    use crate::rooted::machine::Machine;
    use crate::rooted::{BranchSym, DirPair};
    use crate::subshift::{Alphabet, Coding};

    fn z() -> GroupOracle {
        GroupOracle::lattice(1)
    }

    fn at(oracle: &GroupOracle, n: i64) -> Element {
        let letter = if n >= 0 { GenSym(1) } else { GenSym(2) };
        let mut h = oracle.identity();
        for _ in 0..n.abs() {
            h = oracle.mul_gen(&h, letter);
        }
        h
    }

    fn w(bits: &[bool]) -> Word {
        Word(bits.to_vec())
    }

    fn tent(bit: bool, prev: GenSym, next: GenSym, symb: Sym, comm: Cmd) -> TentacleSym {
        TentacleSym { bit, prev, next, symb, comm }
    }

    /// Five roots on the radius-2 ball, every zone idling as a lone
    /// base tip, branch words chosen so no two zones share a cell.
    fn demo(oracle: &GroupOracle) -> LayeredPatch {
        let mut p = LayeredPatch::new(oracle, 2, 2, true);
        for n in -2..=2 {
            let h = at(oracle, n);
            p.alpha.insert(h.clone(), Sym(0));
            p.delta.insert(h, DirPair::canonical());
        }
        let zones: [(i64, [bool; 2]); 5] = [
            (-2, [false, false]),
            (-1, [true, false]),
            (0, [false, true]),
            (1, [true, true]),
            (2, [false, false]),
        ];
        for (pos, branch) in zones {
            for level in 0..=2usize {
                let word = w(&branch[..level]);
                let bit = if level < 2 { branch[level] } else { false };
                for col in 0..=level as i64 {
                    if pos + col > 2 {
                        continue;
                    }
                    let mark = if level == 0 {
                        Mark::Seed
                    } else if col == 0 {
                        Mark::LeftEnd
                    } else if col == level as i64 {
                        Mark::RightEnd
                    } else {
                        Mark::Body
                    };
                    p.beta.insert(
                        (at(oracle, pos + col), word.clone()),
                        BranchSym::new(mark, bit),
                    );
                }
                p.tentacle.insert(
                    (at(oracle, pos), word),
                    tent(bit, GenSym::IDENTITY, GenSym::IDENTITY, Sym(0), Cmd::IDLE),
                );
            }
        }
        p
    }

    fn idle_tiles() -> TileSet {
        Machine::example().tileset(&Alphabet::new(["0"]).unwrap())
    }

    #[test]
    fn idling_zones_are_clean() {
        let oracle = z();
        let patch = demo(&oracle);
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.is_empty(), "unexpected violations: {vs:?}");
    }

    #[test]
    fn missing_root_tentacle_is_flagged() {
        let oracle = z();
        let mut patch = demo(&oracle);
        patch.tentacle.remove(&(at(&oracle, 2), Word::root()));
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.iter().any(|v| v.rule == "T.root"), "got: {vs:?}");
    }

    #[test]
    fn grow_extends_the_tip_by_one_letter() {
        let oracle = z();
        let mut patch = demo(&oracle);
        // Zone based at 0 grows rightward between levels 1 and 2.
        let base = at(&oracle, 0);
        let lvl1 = w(&[false]);
        let lvl2 = w(&[false, true]);
        patch.tentacle.insert(
            (base.clone(), lvl1.clone()),
            tent(true, GenSym::IDENTITY, GenSym::IDENTITY, Sym(0), Cmd::Grow(GenSym(1))),
        );
        patch.tentacle.insert(
            (base.clone(), lvl2.clone()),
            tent(false, GenSym::IDENTITY, GenSym(1), Sym(0), Cmd::IDLE),
        );
        patch.tentacle.insert(
            (at(&oracle, 1), lvl2.clone()),
            tent(false, GenSym(2), GenSym::IDENTITY, Sym(0), Cmd::IDLE),
        );
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.is_empty(), "unexpected violations: {vs:?}");

        // Dropping the grown tip breaks the vertical rule.
        patch.tentacle.remove(&(at(&oracle, 1), lvl2));
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.iter().any(|v| v.rule == "T.vertical"), "got: {vs:?}");
        assert!(vs.iter().any(|v| v.rule == "T.chain"), "got: {vs:?}");
    }

    #[test]
    fn delete_retracts_the_chain() {
        let oracle = z();
        let mut patch = demo(&oracle);
        // Zone based at -2 grows at the root, then deletes at level 1.
        let base = at(&oracle, -2);
        let lvl1 = w(&[false]);
        patch.tentacle.insert(
            (base.clone(), Word::root()),
            tent(false, GenSym::IDENTITY, GenSym::IDENTITY, Sym(0), Cmd::Grow(GenSym(1))),
        );
        patch.tentacle.insert(
            (base.clone(), lvl1.clone()),
            tent(false, GenSym::IDENTITY, GenSym(1), Sym(0), Cmd::Delete),
        );
        patch.tentacle.insert(
            (at(&oracle, -1), lvl1.clone()),
            tent(false, GenSym(2), GenSym::IDENTITY, Sym(0), Cmd::Delete),
        );
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.is_empty(), "unexpected violations: {vs:?}");

        // A surviving chain cell below the delete is flagged.
        patch.tentacle.insert(
            (at(&oracle, -1), w(&[false, false])),
            tent(false, GenSym::IDENTITY, GenSym::IDENTITY, Sym(0), Cmd::IDLE),
        );
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.iter().any(|v| v.rule == "T.vertical"), "got: {vs:?}");
    }

    #[test]
    fn asymmetric_links_break_the_chain() {
        let oracle = z();
        let mut patch = demo(&oracle);
        let base = at(&oracle, 1);
        let lvl1 = w(&[true]);
        patch.tentacle.insert(
            (base.clone(), lvl1.clone()),
            tent(true, GenSym::IDENTITY, GenSym(1), Sym(0), Cmd::IDLE),
        );
        // Tip whose backlink points the wrong way.
        patch.tentacle.insert(
            (at(&oracle, 2), lvl1.clone()),
            tent(true, GenSym(1), GenSym::IDENTITY, Sym(0), Cmd::IDLE),
        );
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.iter().any(|v| v.rule == "T.chain"), "got: {vs:?}");
    }

    #[test]
    fn command_and_bit_ride_the_whole_chain() {
        let oracle = z();
        let mut patch = demo(&oracle);
        let base = at(&oracle, 1);
        let lvl1 = w(&[true]);
        patch.tentacle.insert(
            (base.clone(), lvl1.clone()),
            tent(true, GenSym::IDENTITY, GenSym(1), Sym(0), Cmd::IDLE),
        );
        patch.tentacle.insert(
            (at(&oracle, 2), lvl1.clone()),
            tent(true, GenSym(2), GenSym::IDENTITY, Sym(0), Cmd::Delete),
        );
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.iter().any(|v| v.rule == "T.comm"), "got: {vs:?}");
    }

    #[test]
    fn chain_relays_the_tip_symbol() {
        let oracle = z();
        let mut patch = demo(&oracle);
        let base = at(&oracle, 1);
        let lvl1 = w(&[true]);
        patch.alpha.insert(at(&oracle, 2), Sym(1));
        patch.tentacle.insert(
            (base.clone(), lvl1.clone()),
            tent(true, GenSym::IDENTITY, GenSym(1), Sym(0), Cmd::IDLE),
        );
        // Tip reads 1 but the base still claims 0.
        patch.tentacle.insert(
            (at(&oracle, 2), lvl1.clone()),
            tent(true, GenSym(2), GenSym::IDENTITY, Sym(1), Cmd::IDLE),
        );
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.iter().any(|v| v.rule == "T.symb"), "got: {vs:?}");
        assert!(!vs.iter().any(|v| v.rule == "T.chain"), "got: {vs:?}");
    }

    #[test]
    fn unlicensed_son_cell_is_flagged() {
        let oracle = z();
        let mut patch = demo(&oracle);
        // Zone based at 2 continues into the son its bit does not name.
        let base = at(&oracle, 2);
        patch.tentacle.remove(&(base.clone(), w(&[false, false])));
        patch.tentacle.insert(
            (base.clone(), w(&[false, true])),
            tent(false, GenSym::IDENTITY, GenSym::IDENTITY, Sym(0), Cmd::IDLE),
        );
        let vs = tentacle_check(&oracle, &patch, &idle_tiles());
        assert!(vs.iter().any(|v| v.rule == "T.licensing"), "got: {vs:?}");
        assert!(vs.iter().any(|v| v.rule == "T.vertical"), "got: {vs:?}");
    }

    #[test]
    fn read_tiles_check_the_delivered_symbol() {
        let oracle = z();
        let alphabet = Alphabet::new(["0", "1"]).unwrap();
        let one = alphabet.sym("1").unwrap();
        let coding = Coding::new(vec![(vec![], one)]);
        let machine = Machine::coding_tester(&oracle, &coding).unwrap();
        let tiles = machine.tileset(&alphabet);

        let mut patch = LayeredPatch::new(&oracle, 2, 4, false);
        for n in -2..=2 {
            patch.delta.insert(at(&oracle, n), DirPair::canonical());
        }
        let word = w(&[false; 4]);
        patch.gamma.insert((at(&oracle, 1), word.clone()), "read:s0:1>acc".to_string());
        patch.tentacle.insert(
            (at(&oracle, 0), word.clone()),
            tent(false, GenSym::IDENTITY, GenSym::IDENTITY, one, Cmd::IDLE),
        );
        let vs = tentacle_check(&oracle, &patch, &tiles);
        assert!(vs.is_empty(), "unexpected violations: {vs:?}");

        // Deliver the wrong symbol.
        patch.tentacle.insert(
            (at(&oracle, 0), word.clone()),
            tent(false, GenSym::IDENTITY, GenSym::IDENTITY, Sym(0), Cmd::IDLE),
        );
        let vs = tentacle_check(&oracle, &patch, &tiles);
        assert!(vs.iter().any(|v| v.rule == "T.read"), "got: {vs:?}");
    }
}
