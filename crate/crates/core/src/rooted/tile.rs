//! Wang tiles for the computation layer.
//!
//! A zone at tree level n is a row of n+1 tiles; descending one level
//! appends one cell on the right. Vertical edges bind a row to the row
//! below it in the son the zone continues into, horizontal edges bind
//! cells of one row. The first four rows are a fixed preamble ending in
//! a head over an empty tape; later rows each apply one machine step.
//!
//! Row layout at level n >= 4: column 0 is the left border (the squid
//! column, which alone may carry command edges), columns 1..=n-2 are
//! tape positions 0..=n-3, column n-1 introduces a fresh blank cell and
//! column n is the right border.

use crate::group::{Element, GroupOracle};
use crate::rooted::tentacle::Cmd;
use crate::rooted::{CellView, LayeredPatch, Mark, RuleViolation, Word};
use crate::subshift::Sym;
use std::collections::BTreeMap;

/// Machine state index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct StateId(pub u16);

/// Tape symbol index; 0 is the blank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TapeSym(pub u8);

impl TapeSym {
    pub const BLANK: TapeSym = TapeSym(0);
}

/// Edge colour of a Wang tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// Faces a cell outside every zone.
    Out,
    /// Neutral interior colour.
    Plain,
    SeedUp,
    SeedH,
    LeftCol,
    MidCol,
    OriginCol,
    RightCol,
    /// Tape cell holding a symbol.
    Sym(TapeSym),
    /// Tape cell under the head in a state.
    Head(StateId, TapeSym),
    /// Head in this state crosses rightwards.
    MoveR(StateId),
    /// Head in this state crosses leftwards.
    MoveL(StateId),
    /// Command handed from the squid column to the tentacle base.
    Cmd(Cmd),
}

impl Edge {
    fn mentions(self, q: StateId) -> bool {
        matches!(self, Edge::Head(p, _) | Edge::MoveR(p) | Edge::MoveL(p) if p == q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub name: String,
    pub bottom: Edge,
    pub top: Edge,
    pub left: Edge,
    pub right: Edge,
    /// Tentacle bases may sit only on squid tiles.
    pub squid: bool,
    /// Conditional tiles assert the base-layer symbol read through the
    /// tentacle to their left.
    pub cond: Option<Sym>,
}

impl Tile {
    pub fn mentions_state(&self, q: StateId) -> bool {
        self.bottom.mentions(q)
            || self.top.mentions(q)
            || self.left.mentions(q)
            || self.right.mentions(q)
    }
}

/// A named, deterministic tile collection compiled from a machine.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TileSet {
    pub tiles: BTreeMap<String, Tile>,
    /// Accepting states; any tile touching one is excluded globally.
    pub accept: Vec<StateId>,
    pub state_names: Vec<String>,
    pub tape_names: Vec<String>,
}

impl TileSet {
    pub fn get(&self, name: &str) -> Option<&Tile> {
        self.tiles.get(name)
    }

    pub fn insert(&mut self, tile: Tile) {
        self.tiles.insert(tile.name.clone(), tile);
    }

    /// Tile names in canonical order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tiles.keys().map(|s| s.as_str())
    }

    /// True when the tile touches an accepting state.
    pub fn is_accepting(&self, tile: &Tile) -> bool {
        self.accept.iter().any(|&q| tile.mentions_state(q))
    }
}

/// Checks the computation layer against a tile set.
///
/// Rules: tiles sit exactly on branching-layer cells; roots carry the
/// seed tile; edges facing out of the zone are `Out`; in-zone
/// horizontal neighbours agree; and a tile's bottom edge matches the
/// top of the tile below when the zone descended from there, or `Out`
/// when the cell below is outside the zone structure.
pub fn computation_check(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    tiles: &TileSet,
) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    for ((h, w), _) in &patch.beta {
        if matches!(patch.gamma_at(h, w), CellView::Empty) {
            out.push(RuleViolation::new(
                "C.empty-link",
                h,
                w,
                "branching cell carries no tile".to_string(),
            ));
        }
    }
    for ((h, w), name) in &patch.gamma {
        let Some(tile) = tiles.get(name) else {
            out.push(RuleViolation::new("C.unknown-tile", h, w, format!("no tile named {name}")));
            continue;
        };
        let beta = patch.beta_at(h, w);
        if matches!(beta, CellView::Empty) {
            out.push(RuleViolation::new(
                "C.empty-link",
                h,
                w,
                "tile outside every branching cell".to_string(),
            ));
        }
        if w.is_empty() && name != "seed" {
            out.push(RuleViolation::new("C.root-seed", h, w, format!("root carries {name}")));
        }
        if let CellView::Value(bs) = beta {
            if matches!(bs.mark, Mark::Seed | Mark::LeftEnd) && tile.left != Edge::Out {
                out.push(RuleViolation::new(
                    "C.exterior",
                    h,
                    w,
                    "left edge must face out".to_string(),
                ));
            }
            if matches!(bs.mark, Mark::Seed | Mark::RightEnd) && tile.right != Edge::Out {
                out.push(RuleViolation::new(
                    "C.exterior",
                    h,
                    w,
                    "right edge must face out".to_string(),
                ));
            }
            if matches!(bs.mark, Mark::LeftEnd | Mark::Body) {
                horizontal_edge(oracle, patch, tiles, h, w, tile, &mut out);
            }
        }
        vertical_edge(patch, tiles, h, w, tile, &mut out);
    }
    out
}

fn horizontal_edge(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    tiles: &TileSet,
    h: &Element,
    w: &Word,
    tile: &Tile,
    out: &mut Vec<RuleViolation>,
) {
    let Some(r) = patch.right_of(oracle, h) else { return };
    match patch.gamma_at(&r, w) {
        CellView::Value(rname) => {
            if let Some(rt) = tiles.get(rname) {
                if tile.right != rt.left {
                    out.push(RuleViolation::new(
                        "C.horizontal",
                        h,
                        w,
                        format!("{} and {} disagree", tile.name, rt.name),
                    ));
                }
            }
        }
        // A missing right tile is already an empty-link or branching
        // violation at the neighbour; do not double-report.
        CellView::Empty | CellView::Unknown => {}
    }
}

fn vertical_edge(
    patch: &LayeredPatch,
    tiles: &TileSet,
    h: &Element,
    w: &Word,
    tile: &Tile,
    out: &mut Vec<RuleViolation>,
) {
    let Some((parent, b)) = w.parent() else { return };
    let below_beta = patch.beta_at(h, &parent);
    match below_beta {
        CellView::Unknown => {}
        CellView::Value(bs) if bs.bit == b => match patch.gamma_at(h, &parent) {
            CellView::Value(bname) => {
                if let Some(bt) = tiles.get(bname) {
                    if tile.bottom != bt.top {
                        out.push(RuleViolation::new(
                            "C.vertical",
                            h,
                            w,
                            format!("{} does not continue {}", tile.name, bt.name),
                        ));
                    }
                }
            }
            CellView::Empty => {}
            CellView::Unknown => {}
        },
        // The cell below is empty or belongs to a zone that went the
        // other way: this cell is fresh, its bottom faces out.
        CellView::Value(_) | CellView::Empty => {
            if tile.bottom != Edge::Out {
                out.push(RuleViolation::new(
                    "C.vertical",
                    h,
                    w,
                    format!("{} has no cell below, bottom must face out", tile.name),
                ));
            }
        }
    }
}
