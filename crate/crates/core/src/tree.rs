//! A vertex shift on the free group F₂ that encodes rooted binary trees.
//!
//! The map φ sends every reduced word to the word with its last letter
//! dropped, except on the nonnegative a-ray where φ(aⁿ) = aⁿ⁺¹. Dropping
//! a letter has three non-canceling inverses, and the rerouted ray keeps
//! that count at the identity, so φ is exactly 3-to-1 everywhere. The
//! canonical vertex labeling τ records, per vertex, the directions of the
//! three φ-preimages (sorted shortlex), the direction of φ itself, and
//! the vertex's index among its siblings. Two local constraints tie the
//! labels of neighbours together; configurations satisfying them form a
//! shift of finite type over an alphabet of size 4⁴·3.

use crate::group::{Element, GenSym, GroupOracle};
use crate::par;
use std::collections::BTreeMap;

/// The four letter directions of F₂: a, a⁻¹, b, b⁻¹ as generator indices.
pub const K_LETTERS: [GenSym; 4] = [GenSym(1), GenSym(2), GenSym(3), GenSym(4)];

/// Vertex label: preimage directions s₀ ≤ s₁ ≤ s₂ (shortlex by target),
/// the direction p of φ, and the color c ∈ {0,1,2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeLetter {
    pub sons: [GenSym; 3],
    pub parent: GenSym,
    pub color: u8,
}

impl TreeLetter {
    /// Direction of the embedded rooted-tree parent: the preimage slot
    /// two past the vertex's own color, cyclically.
    pub fn root_dir(&self) -> GenSym {
        self.sons[(self.color as usize + 2) % 3]
    }

    /// Direction of son `b` of the embedded binary tree.
    pub fn son_dir(&self, b: bool) -> GenSym {
        self.sons[(self.color as usize + b as usize) % 3]
    }
}

/// Finite fragment of a tree-shift configuration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreePatch {
    pub cells: BTreeMap<Element, TreeLetter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeViolation {
    pub rule: &'static str,
    pub at: Element,
    pub detail: String,
}

/// F₂ together with the rerouted parent map φ and the labeling τ.
#[derive(Debug, Clone)]
pub struct TreeShift {
    oracle: GroupOracle,
}

impl Default for TreeShift {
    fn default() -> Self {
        TreeShift::new()
    }
}

impl TreeShift {
    pub fn new() -> TreeShift {
        TreeShift { oracle: GroupOracle::free(2) }
    }

    pub fn oracle(&self) -> &GroupOracle {
        &self.oracle
    }

    fn on_nonneg_ray(&self, g: &Element) -> bool {
        self.oracle.min_word(g).iter().all(|&l| l == GenSym(1))
    }

    /// Rerouted parent map. 3-to-1 and surjective.
    pub fn phi(&self, g: &Element) -> Element {
        if self.on_nonneg_ray(g) {
            self.oracle.mul_gen(g, GenSym(1))
        } else {
            let word = self.oracle.min_word(g);
            let last = *word.last().expect("off-ray elements are nonempty words");
            self.oracle.mul_gen(g, self.oracle.gen_inverse(last))
        }
    }

    /// The three φ-preimages of g in shortlex order.
    ///
    /// Exactly one letter extension of g fails to be a preimage: the ray
    /// continuation a on the nonnegative ray, the canceling letter
    /// elsewhere. The remaining three extensions reduce back to g under φ.
    pub fn preimages(&self, g: &Element) -> [Element; 3] {
        let banned = if self.on_nonneg_ray(g) {
            GenSym(1)
        } else {
            let word = self.oracle.min_word(g);
            self.oracle.gen_inverse(*word.last().expect("nonempty"))
        };
        let mut pre: Vec<Element> = K_LETTERS
            .iter()
            .filter(|&&k| k != banned)
            .map(|&k| self.oracle.mul_gen(g, k))
            .collect();
        pre.sort_by(|a, b| self.oracle.shortlex_cmp(a, b));
        [pre[0].clone(), pre[1].clone(), pre[2].clone()]
    }

    /// The K-letter d with g·d = h, for h a letter neighbour of g.
    fn step_letter(&self, g: &Element, h: &Element) -> GenSym {
        let diff = self.oracle.mul(&self.oracle.inverse(g), h);
        let word = self.oracle.min_word(&diff);
        debug_assert_eq!(word.len(), 1, "not a letter neighbour");
        word[0]
    }

    /// Canonical label of vertex g.
    pub fn tau(&self, g: &Element) -> TreeLetter {
        let pre = self.preimages(g);
        let sons = [
            self.step_letter(g, &pre[0]),
            self.step_letter(g, &pre[1]),
            self.step_letter(g, &pre[2]),
        ];
        let parent_el = self.phi(g);
        let parent = self.step_letter(g, &parent_el);
        let color = self
            .preimages(&parent_el)
            .iter()
            .position(|p| p == g)
            .expect("g is a preimage of its parent") as u8;
        TreeLetter { sons, parent, color }
    }

    /// Labels of every vertex in the ball of the given radius.
    pub fn tau_build(&self, radius: u32) -> TreePatch {
        let ball = self.oracle.ball(radius);
        let letters = par::map_collect(&ball, |g| (g.clone(), self.tau(g)));
        TreePatch { cells: letters.into_iter().collect() }
    }

    /// Walks the canonical configuration from g along a binary address:
    /// each step moves to the son named by the next address bit.
    pub fn gamma_tau(&self, g: &Element, address: &[bool]) -> Element {
        let mut h = g.clone();
        for &b in address {
            let d = self.tau(&h).son_dir(b);
            h = self.oracle.mul_gen(&h, d);
        }
        h
    }
}

impl TreePatch {
    pub fn get(&self, g: &Element) -> Option<&TreeLetter> {
        self.cells.get(g)
    }

    /// Walks a stored patch along a binary address; None as soon as the
    /// walk needs a vertex the patch does not carry.
    pub fn gamma(&self, shift: &TreeShift, g: &Element, address: &[bool]) -> Option<Element> {
        let mut h = g.clone();
        for &b in address {
            let letter = self.cells.get(&h)?;
            h = shift.oracle().mul_gen(&h, letter.son_dir(b));
        }
        Some(h)
    }
}

/// Checks both local constraints on every cell of the patch. Cells whose
/// required neighbour lies outside the patch are skipped: a patch is
/// judged only on the part of the configuration it can see.
pub fn check_tree_constraints(shift: &TreeShift, patch: &TreePatch) -> Vec<TreeViolation> {
    let oracle = shift.oracle();
    let cells: Vec<(&Element, &TreeLetter)> = patch.cells.iter().collect();
    let per_cell = par::map_collect(&cells, |&(g, letter)| {
        let mut out = Vec::new();
        // Parent backlink: the slot of our own color at the parent must
        // point back down to us.
        let parent = oracle.mul_gen(g, letter.parent);
        if let Some(pl) = patch.cells.get(&parent) {
            let back = pl.sons[letter.color as usize];
            if back != oracle.gen_inverse(letter.parent) {
                out.push(TreeViolation {
                    rule: "parent-backlink",
                    at: g.clone(),
                    detail: format!(
                        "slot {} of the parent points via {} instead of back",
                        letter.color,
                        oracle.gen_name(back)
                    ),
                });
            }
        }
        // Son backlinks: each declared preimage must name us as its
        // parent and carry the slot index as its color.
        for (i, &k) in letter.sons.iter().enumerate() {
            let son = oracle.mul_gen(g, k);
            if let Some(sl) = patch.cells.get(&son) {
                if sl.parent != oracle.gen_inverse(k) {
                    out.push(TreeViolation {
                        rule: "son-backlink",
                        at: g.clone(),
                        detail: format!(
                            "son in slot {i} has parent direction {}",
                            oracle.gen_name(sl.parent)
                        ),
                    });
                }
                if sl.color != i as u8 {
                    out.push(TreeViolation {
                        rule: "son-color",
                        at: g.clone(),
                        detail: format!("son in slot {i} has color {}", sl.color),
                    });
                }
            }
        }
        out
    });
    per_cell.into_iter().flatten().collect()
}
