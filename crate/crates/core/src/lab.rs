//! Patch workbench: whole-patch verification reports, a bounded
//! completion search over undetermined cells, the product coupling
//! rules on toy instances, and deterministic rendering.
//!
//! The completion search treats a patch as a constraint problem: each
//! hole is either structureless or carries a branching symbol paired
//! with a tile, and the layer checkers prune assignments. A violation
//! only prunes once no unassigned hole could still repair it, so the
//! search is exact: it finds a completion exactly when one exists
//! within the domain.

use crate::group::{Element, GenSym, GroupOracle};
use crate::rooted::tile::TileSet;
use crate::rooted::{self, BranchSym, LayeredPatch, Mark, RuleViolation, Word};
use crate::subshift::{Alphabet, Sym};
use crate::tree::{TreePatch, TreeShift};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("patch has {cells} cells, over the completion cap of {cap}")]
    PatchTooLarge { cells: usize, cap: usize },
    #[error("hole {0} lies outside the patch support")]
    HoleOutsideSupport(String),
}

/// One reported rule failure, with its location already printable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub rule: String,
    pub location: String,
    pub detail: String,
}

/// Ordered list of rule failures plus per-family tallies. The report is
/// empty exactly when every checkable rule holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub entries: Vec<ReportEntry>,
}

impl VerificationReport {
    pub fn from_violations(oracle: &GroupOracle, violations: Vec<RuleViolation>) -> Self {
        let entries = violations
            .into_iter()
            .map(|v| ReportEntry {
                location: cell_location(oracle, &v.h, &v.w),
                rule: v.rule,
                detail: v.detail,
            })
            .collect();
        VerificationReport { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Tallies by rule family, the prefix before the first dot.
    pub fn family_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            let family = e.rule.split('.').next().unwrap_or(&e.rule).to_string();
            *out.entry(family).or_insert(0) += 1;
        }
        out
    }
}

fn cell_location(oracle: &GroupOracle, h: &Element, w: &Word) -> String {
    format!("({}, {})", oracle.element_to_string(h), w)
}

/// Runs every layer checker and wraps the result. The entry order is
/// the checker order, so the report equals the union of the individual
/// checkers run one by one.
pub fn verify_report(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    tiles: &TileSet,
    alphabet: &Alphabet,
) -> VerificationReport {
    VerificationReport::from_violations(oracle, rooted::verify(oracle, patch, tiles, alphabet))
}

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_assignments: u64,
    pub cell_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_assignments: 200_000, cell_cap: 400 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub assignments: u64,
    /// True when the whole domain was covered, so an exhausted result
    /// is a proof that no completion exists.
    pub complete_search: bool,
}

#[derive(Debug)]
pub enum Completion {
    Completed { patch: Box<LayeredPatch>, stats: SearchStats },
    Exhausted(SearchStats),
}

/// One candidate value for a hole: structureless, or a branching
/// symbol paired with a tile name.
type Candidate = Option<(BranchSym, String)>;

/// Fills the given holes of `patch` so that every checker passes, by
/// depth-first search in a fixed order: holes sorted by tree level then
/// position, structured candidates before the structureless one. The
/// first completion in that order is returned; if the whole domain
/// fails the result is a proof of exhaustion, and running over the
/// assignment budget reports how far the search got.
pub fn complete(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    tiles: &TileSet,
    alphabet: &Alphabet,
    holes: &[(Element, Word)],
    budget: &Budget,
) -> Result<Completion, LabError> {
    let support: usize = patch.support_elements().count();
    let nodes = (1usize << (patch.depth + 1)).saturating_sub(1);
    let cells = support.saturating_mul(nodes);
    if cells > budget.cell_cap {
        return Err(LabError::PatchTooLarge { cells, cap: budget.cell_cap });
    }
    let mut holes: Vec<(Element, Word)> = holes.to_vec();
    holes.sort_by(|a, b| {
        (a.1.len(), &a.1)
            .cmp(&(b.1.len(), &b.1))
            .then_with(|| oracle.shortlex_cmp(&a.0, &b.0))
    });
    holes.dedup();
    for (h, w) in &holes {
        if !patch.in_support(h, w) {
            return Err(LabError::HoleOutsideSupport(cell_location(oracle, h, w)));
        }
    }

    let mut work = patch.clone();
    for key in &holes {
        work.beta.remove(key);
        work.gamma.remove(key);
    }

    let domain: Vec<Candidate> = {
        let mut d: Vec<Candidate> = Vec::new();
        for mark in [Mark::Seed, Mark::LeftEnd, Mark::Body, Mark::RightEnd] {
            for bit in [false, true] {
                for name in tiles.names() {
                    d.push(Some((BranchSym::new(mark, bit), name.to_string())));
                }
            }
        }
        d.push(None);
        d
    };

    let mut search = Search {
        oracle,
        tiles,
        alphabet,
        holes: &holes,
        domain: &domain,
        work: &mut work,
        assignments: 0,
        max_assignments: budget.max_assignments,
    };
    match search.dfs(0) {
        Outcome::Found => {
            let stats = SearchStats { assignments: search.assignments, complete_search: true };
            Ok(Completion::Completed { patch: Box::new(work), stats })
        }
        Outcome::Shut => Ok(Completion::Exhausted(SearchStats {
            assignments: search.assignments,
            complete_search: true,
        })),
        Outcome::OverBudget => Ok(Completion::Exhausted(SearchStats {
            assignments: search.assignments,
            complete_search: false,
        })),
    }
}

enum Outcome {
    Found,
    Shut,
    OverBudget,
}

struct Search<'a> {
    oracle: &'a GroupOracle,
    tiles: &'a TileSet,
    alphabet: &'a Alphabet,
    holes: &'a [(Element, Word)],
    domain: &'a [Candidate],
    work: &'a mut LayeredPatch,
    assignments: u64,
    max_assignments: u64,
}

impl Search<'_> {
    fn dfs(&mut self, idx: usize) -> Outcome {
        let violations = rooted::verify(self.oracle, self.work, self.tiles, self.alphabet);
        if violations
            .iter()
            .any(|v| self.settled(v, &self.holes[idx..]))
        {
            return Outcome::Shut;
        }
        if idx == self.holes.len() {
            return if violations.is_empty() { Outcome::Found } else { Outcome::Shut };
        }
        let key = self.holes[idx].clone();
        for cand in self.domain {
            if self.assignments == self.max_assignments {
                return Outcome::OverBudget;
            }
            self.assignments += 1;
            if let Some((bs, name)) = cand {
                self.work.beta.insert(key.clone(), *bs);
                self.work.gamma.insert(key.clone(), name.clone());
            }
            let res = self.dfs(idx + 1);
            self.work.beta.remove(&key);
            self.work.gamma.remove(&key);
            match res {
                Outcome::Found => {
                    if let Some((bs, name)) = cand {
                        self.work.beta.insert(key.clone(), *bs);
                        self.work.gamma.insert(key, name.clone());
                    }
                    return Outcome::Found;
                }
                Outcome::OverBudget => return Outcome::OverBudget,
                Outcome::Shut => {}
            }
        }
        Outcome::Shut
    }

    /// A violation prunes only when no unassigned hole sits close
    /// enough to repair it: every rule reads at most one step in the
    /// group and one level in the tree, checked with a margin.
    fn settled(&self, v: &RuleViolation, unassigned: &[(Element, Word)]) -> bool {
        !unassigned.iter().any(|(h, w)| {
            let step = self.oracle.mul(&self.oracle.inverse(&v.h), h);
            let near_group = self.oracle.min_word(&step).len() <= 2;
            let (a, b) = (v.w.0.as_slice(), w.0.as_slice());
            let near_tree = a.len().abs_diff(b.len()) <= 1
                && (a.starts_with(b) || b.starts_with(a));
            near_group && near_tree
        })
    }
}

/// A forbidden pattern over group-word and tree-address cells: the
/// configuration is in violation where every cell takes the stated
/// symbol.
#[derive(Debug, Clone)]
pub struct CoupledForbidden {
    pub cells: Vec<(Vec<GenSym>, Vec<bool>, Sym)>,
}

/// A tree-structure patch coupled with a symbol layer over (line cell,
/// tree cell) pairs; the extra symbol marks cells no embedded tree
/// reaches.
#[derive(Debug, Clone)]
pub struct CoupledPatch {
    pub tree: TreePatch,
    pub star: Sym,
    /// Symbols allowed at root targets.
    pub seed: BTreeSet<Sym>,
    pub forbidden: Vec<CoupledForbidden>,
    pub values: BTreeMap<(Element, Element), Sym>,
}

/// Walks from `n` to the root of its embedded tree and then down the
/// address; None as soon as the tree patch runs out.
pub fn coupled_gamma(
    shift: &TreeShift,
    tree: &TreePatch,
    n: &Element,
    address: &[bool],
) -> Option<Element> {
    let letter = tree.get(n)?;
    let root = shift.oracle().mul_gen(n, letter.root_dir());
    tree.gamma(shift, &root, address)
}

/// Checks the three coupling rules at every stored value cell: root
/// targets carry seed symbols, no forbidden pattern occurs along the
/// embedded tree, and the extra symbol propagates to both sons. Walks
/// or lookups that leave the patch are skipped.
pub fn coupled_check(
    h_oracle: &GroupOracle,
    shift: &TreeShift,
    patch: &CoupledPatch,
) -> VerificationReport {
    let n_oracle = shift.oracle();
    let mut entries = Vec::new();
    let mut push = |rule: &str, h: &Element, n: &Element, detail: String| {
        entries.push(ReportEntry {
            rule: rule.to_string(),
            location: format!(
                "({}, {})",
                h_oracle.element_to_string(h),
                n_oracle.element_to_string(n)
            ),
            detail,
        });
    };
    for ((h, n), &val) in &patch.values {
        let Some(letter) = patch.tree.get(n) else { continue };
        let root = n_oracle.mul_gen(n, letter.root_dir());
        if let Some(&at_root) = patch.values.get(&(h.clone(), root.clone())) {
            if !patch.seed.contains(&at_root) {
                push("Y.root", h, n, "root target carries a non-seed symbol".to_string());
            }
        }
        'pattern: for (pi, p) in patch.forbidden.iter().enumerate() {
            let mut cells = Vec::new();
            for (gw, addr, sym) in &p.cells {
                let Ok(g) = h_oracle.word_eval(gw) else { continue 'pattern };
                let hg = h_oracle.mul(h, &g);
                let Some(target) = coupled_gamma(shift, &patch.tree, n, addr) else {
                    continue 'pattern;
                };
                let Some(&got) = patch.values.get(&(hg, target)) else { continue 'pattern };
                cells.push((got, *sym));
            }
            if !cells.is_empty() && cells.iter().all(|(got, want)| got == want) {
                push("Y.pattern", h, n, format!("forbidden pattern {pi} occurs in full"));
            }
        }
        for b in [false, true] {
            let son = n_oracle.mul_gen(n, letter.son_dir(b));
            if let Some(&at_son) = patch.values.get(&(h.clone(), son)) {
                if (val == patch.star) != (at_son == patch.star) {
                    push(
                        "Y.star",
                        h,
                        n,
                        format!("extra symbol differs from son {}", b as u8),
                    );
                }
            }
        }
    }
    VerificationReport { entries }
}

/// Builds the coupled layer the way the factor-map argument does: every
/// cell some embedded tree reaches is pulled back from the per-root
/// assignment `z`, every other cell gets the extra symbol. Reachability
/// is enumerated from every stored tree cell with addresses up to
/// `address_cap`.
#[allow(clippy::too_many_arguments)]
pub fn coupled_from_roots(
    shift: &TreeShift,
    tree: &TreePatch,
    h_window: &[Element],
    n_window: &[Element],
    star: Sym,
    seed: BTreeSet<Sym>,
    forbidden: Vec<CoupledForbidden>,
    address_cap: usize,
    z: &dyn Fn(&Element, &Element, &[bool]) -> Sym,
) -> CoupledPatch {
    let window: BTreeSet<&Element> = n_window.iter().collect();
    let mut reached: BTreeMap<Element, (Element, Vec<bool>)> = BTreeMap::new();
    let mut frontier: Vec<(Element, Element, Vec<bool>)> = Vec::new();
    for n in tree.cells.keys() {
        if let Some(root) = coupled_gamma(shift, tree, n, &[]) {
            frontier.push((n.clone(), root, Vec::new()));
        }
    }
    while let Some((source, at, addr)) = frontier.pop() {
        if window.contains(&at) {
            let prev = reached.insert(at.clone(), (source.clone(), addr.clone()));
            if let Some((ps, pa)) = prev {
                assert!(
                    ps == source && pa == addr,
                    "two walks reach the same tree cell"
                );
            }
        }
        if addr.len() == address_cap {
            continue;
        }
        if let Some(letter) = tree.get(&at) {
            for b in [false, true] {
                let son = shift.oracle().mul_gen(&at, letter.son_dir(b));
                let mut next = addr.clone();
                next.push(b);
                frontier.push((source.clone(), son, next));
            }
        }
    }
    let mut values = BTreeMap::new();
    for h in h_window {
        for n in n_window {
            let val = match reached.get(n) {
                Some((source, addr)) => z(source, h, addr),
                None => star,
            };
            values.insert((h.clone(), n.clone()), val);
        }
    }
    CoupledPatch { tree: tree.clone(), star, seed, forbidden, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    Svg,
    Dot,
}

/// Draws the patch deterministically: one grid row block per tree word,
/// cells in support order, tentacle links as arrows, reported cells
/// highlighted. Byte-identical output for identical inputs.
pub fn render(
    oracle: &GroupOracle,
    patch: &LayeredPatch,
    style: RenderStyle,
    report: Option<&VerificationReport>,
) -> String {
    let support: Vec<Element> = patch.support_elements().cloned().collect();
    let mut words: BTreeSet<(usize, Word)> = BTreeSet::new();
    for (_, w) in patch.beta.keys().chain(patch.gamma.keys()).chain(patch.tentacle.keys()) {
        words.insert((w.len(), w.clone()));
    }
    let words: Vec<Word> = words.into_iter().map(|(_, w)| w).collect();
    let flagged: BTreeSet<&str> = report
        .map(|r| r.entries.iter().map(|e| e.location.as_str()).collect())
        .unwrap_or_default();
    let col = |h: &Element| support.iter().position(|s| s == h);
    match style {
        RenderStyle::Svg => {
            let cw = 86;
            let ch = 34;
            let left = 120;
            let top = 24;
            let width = left + cw * support.len().max(1) + 20;
            let height = top + (ch + 18) * words.len().max(1) + 20;
            let mut out = String::new();
            out.push_str(&format!(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
                 font-family=\"monospace\" font-size=\"10\">\n"
            ));
            for (wi, w) in words.iter().enumerate() {
                let y = top + wi * (ch + 18);
                out.push_str(&format!(
                    "<text x=\"8\" y=\"{}\" font-size=\"11\">{}</text>\n",
                    y + ch / 2 + 4,
                    xml_escape(&w.to_string())
                ));
                for (hi, h) in support.iter().enumerate() {
                    let x = left + hi * cw;
                    let loc = cell_location(oracle, h, w);
                    let beta = patch.beta.get(&(h.clone(), w.clone()));
                    let gamma = patch.gamma.get(&(h.clone(), w.clone()));
                    let tent = patch.tentacle.get(&(h.clone(), w.clone()));
                    if beta.is_none() && gamma.is_none() && tent.is_none() {
                        continue;
                    }
                    let fill = match beta {
                        Some(bs) if bs.bit => "#cfe0f5",
                        Some(_) => "#e8e8e8",
                        None => "#f7f7f7",
                    };
                    let stroke = if flagged.contains(loc.as_str()) { "#c62828" } else { "#555" };
                    out.push_str(&format!(
                        "<rect class=\"cell\" x=\"{x}\" y=\"{y}\" width=\"{cw}\" height=\"{ch}\" \
                         fill=\"{fill}\" stroke=\"{stroke}\"/>\n"
                    ));
                    let mut label = String::new();
                    if let Some(bs) = beta {
                        label.push(bs.mark.glyph());
                        label.push(if bs.bit { '1' } else { '0' });
                        label.push(' ');
                    }
                    if let Some(name) = gamma {
                        label.push_str(name);
                    }
                    out.push_str(&format!(
                        "<text x=\"{}\" y=\"{}\">{}</text>\n",
                        x + 4,
                        y + 14,
                        xml_escape(&label)
                    ));
                    if let Some(t) = tent {
                        out.push_str(&format!(
                            "<text x=\"{}\" y=\"{}\" fill=\"#7b1fa2\">{}{}</text>\n",
                            x + 4,
                            y + 28,
                            "~",
                            xml_escape(&format!("{}", t.comm))
                        ));
                        if t.next != GenSym::IDENTITY {
                            let to = oracle.mul_gen(h, t.next);
                            if let Some(ci) = col(&to) {
                                let x2 = left + ci * cw;
                                out.push_str(&format!(
                                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" \
                                     stroke=\"#7b1fa2\" marker-end=\"none\"/>\n",
                                    x + cw / 2,
                                    y + ch - 3,
                                    x2 + cw / 2,
                                    y + ch - 3
                                ));
                            }
                        }
                    }
                }
            }
            out.push_str("</svg>\n");
            out
        }
        RenderStyle::Dot => {
            let mut out = String::new();
            out.push_str("digraph patch {\n  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n");
            let id = |h: &Element, w: &Word| {
                format!("c_{}_{}", col(h).map_or(usize::MAX, |i| i), w)
            };
            for ((h, w), name) in &patch.gamma {
                let loc = cell_location(oracle, h, w);
                let color = if flagged.contains(loc.as_str()) { ", color=red" } else { "" };
                out.push_str(&format!(
                    "  {} [label=\"{}\\n{}\"{}];\n",
                    id(h, w),
                    dot_escape(&loc),
                    dot_escape(name),
                    color
                ));
            }
            for ((h, w), t) in &patch.tentacle {
                if t.next != GenSym::IDENTITY {
                    let to = oracle.mul_gen(h, t.next);
                    if patch.tentacle.contains_key(&(to.clone(), w.clone())) {
                        out.push_str(&format!(
                            "  {} -> {} [color=purple];\n",
                            id(h, w),
                            id(&to, w)
                        ));
                    }
                }
            }
            out.push_str("}\n");
            out
        }
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
