//! Layered tilings on the product of a group line with the binary tree.
//!
//! A cell is a pair (h, w): a group element h and a binary tree address
//! w. Five layers live on these cells. The base layer α and the
//! direction layer δ depend on h only (they are constant along the tree
//! by construction). The branching layer β carves the cells into
//! horizontal zones that lengthen by one cell per tree level and choose,
//! per level, which subtree they continue into. The computation layer γ
//! fills each zone with Wang tiles simulating a machine row by row, and
//! the tentacle layer lets that machine read base-layer symbols at
//! remote cells through a growing chain of linked cells.
//!
//! Every checker in this module family treats the patch boundary as
//! open: a rule whose other cell is unknown is skipped, so a patch is
//! judged only on what it can see.

pub mod branching;
pub mod direction;
pub mod machine;
pub mod tentacle;
pub mod tile;
pub mod witness;

use crate::group::{Element, GroupOracle};
use crate::subshift::Sym;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use branching::{BranchSym, Mark};
pub use direction::DirPair;

/// Binary tree address; the empty word is the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<bool>);

impl Word {
    pub fn root() -> Word {
        Word(Vec::new())
    }

    pub fn child(&self, b: bool) -> Word {
        let mut v = self.0.clone();
        v.push(b);
        Word(v)
    }

    /// Splits off the last bit: (parent, bit).
    pub fn parent(&self) -> Option<(Word, bool)> {
        let mut v = self.0.clone();
        let b = v.pop()?;
        Some((Word(v), b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

/// What a patch knows about one cell of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellView<T> {
    /// The cell carries this value.
    Value(T),
    /// The cell is inside the patch and known to be empty.
    Empty,
    /// The cell is outside what the patch describes; rules touching it
    /// are skipped.
    Unknown,
}

impl<T> CellView<T> {
    pub fn value(self) -> Option<T> {
        match self {
            CellView::Value(t) => Some(t),
            _ => None,
        }
    }
}

/// One rule violation at one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleViolation {
    pub rule: String,
    pub h: Element,
    pub w: Word,
    pub detail: String,
}

impl RuleViolation {
    pub fn new(rule: &str, h: &Element, w: &Word, detail: String) -> RuleViolation {
        RuleViolation { rule: rule.to_string(), h: h.clone(), w: w.clone(), detail }
    }
}

/// Finite fragment of a five-layer configuration.
///
/// Layers store only occupied cells. With `complete` set, a cell inside
/// the support that is not stored is known empty; without it, such cells
/// are unknown and rules touching them are skipped. The latter lets a
/// single zone be checked in isolation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredPatch {
    pub radius: u32,
    pub depth: usize,
    pub complete: bool,
    support: BTreeSet<Element>,
    pub alpha: BTreeMap<Element, Sym>,
    pub delta: BTreeMap<Element, DirPair>,
    pub beta: BTreeMap<(Element, Word), BranchSym>,
    /// Tile names; resolved against a tile set when checked.
    pub gamma: BTreeMap<(Element, Word), String>,
    pub tentacle: BTreeMap<(Element, Word), crate::rooted::tentacle::TentacleSym>,
}

impl LayeredPatch {
    pub fn new(oracle: &GroupOracle, radius: u32, depth: usize, complete: bool) -> LayeredPatch {
        LayeredPatch {
            radius,
            depth,
            complete,
            support: oracle.ball(radius).into_iter().collect(),
            alpha: BTreeMap::new(),
            delta: BTreeMap::new(),
            beta: BTreeMap::new(),
            gamma: BTreeMap::new(),
            tentacle: BTreeMap::new(),
        }
    }

    pub fn in_support(&self, h: &Element, w: &Word) -> bool {
        w.len() <= self.depth && self.support.contains(h)
    }

    pub fn support_elements(&self) -> impl Iterator<Item = &Element> {
        self.support.iter()
    }

    fn view_tree<'a, T>(
        &self,
        map: &'a BTreeMap<(Element, Word), T>,
        h: &Element,
        w: &Word,
    ) -> CellView<&'a T> {
        match map.get(&(h.clone(), w.clone())) {
            Some(v) => CellView::Value(v),
            None if self.complete && self.in_support(h, w) => CellView::Empty,
            None => CellView::Unknown,
        }
    }

    fn view_line<'a, T>(&self, map: &'a BTreeMap<Element, T>, h: &Element) -> CellView<&'a T> {
        match map.get(h) {
            Some(v) => CellView::Value(v),
            None if self.complete && self.support.contains(h) => CellView::Empty,
            None => CellView::Unknown,
        }
    }

    pub fn alpha_at(&self, h: &Element) -> CellView<Sym> {
        match self.view_line(&self.alpha, h) {
            CellView::Value(&s) => CellView::Value(s),
            CellView::Empty => CellView::Empty,
            CellView::Unknown => CellView::Unknown,
        }
    }

    pub fn delta_at(&self, h: &Element) -> CellView<DirPair> {
        match self.view_line(&self.delta, h) {
            CellView::Value(&d) => CellView::Value(d),
            CellView::Empty => CellView::Empty,
            CellView::Unknown => CellView::Unknown,
        }
    }

    pub fn beta_at(&self, h: &Element, w: &Word) -> CellView<BranchSym> {
        match self.view_tree(&self.beta, h, w) {
            CellView::Value(&b) => CellView::Value(b),
            CellView::Empty => CellView::Empty,
            CellView::Unknown => CellView::Unknown,
        }
    }

    pub fn gamma_at(&self, h: &Element, w: &Word) -> CellView<&str> {
        match self.view_tree(&self.gamma, h, w) {
            CellView::Value(s) => CellView::Value(s.as_str()),
            CellView::Empty => CellView::Empty,
            CellView::Unknown => CellView::Unknown,
        }
    }

    pub fn tentacle_at(
        &self,
        h: &Element,
        w: &Word,
    ) -> CellView<crate::rooted::tentacle::TentacleSym> {
        match self.view_tree(&self.tentacle, h, w) {
            CellView::Value(&t) => CellView::Value(t),
            CellView::Empty => CellView::Empty,
            CellView::Unknown => CellView::Unknown,
        }
    }

    /// Right neighbour along the direction layer, if it is known.
    pub fn right_of(&self, oracle: &GroupOracle, h: &Element) -> Option<Element> {
        self.delta_at(h).value().map(|d| oracle.mul_gen(h, d.right))
    }

    /// Left neighbour along the direction layer, if it is known.
    pub fn left_of(&self, oracle: &GroupOracle, h: &Element) -> Option<Element> {
        self.delta_at(h).value().map(|d| oracle.mul_gen(h, d.left))
    }
}

/// Runs every layer checker and returns the violations in a fixed
/// order: directions, branching, computation, tentacles, then the
/// global rules. The result is exactly the concatenation of the five
/// individual reports.
pub fn verify(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    tiles: &tile::TileSet,
    alphabet: &crate::subshift::Alphabet,
) -> Vec<RuleViolation> {
    let mut out = direction::directions_check(oracle, patch);
    out.extend(branching::branching_check(oracle, patch));
    out.extend(tile::computation_check(oracle, patch, tiles));
    out.extend(tentacle::tentacle_check(oracle, patch, tiles));
    out.extend(witness::zeta_check(patch, tiles, alphabet));
    out
}
