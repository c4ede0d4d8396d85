//! Finitely generated group oracles with a decidable word problem.
//!
//! Supported shapes: lattices ℤᵈ, free groups F_k, and finite direct
//! products of those. Every oracle carries a fixed symmetric generating
//! set S that contains the identity; balls, geodesics and boundaries are
//! always taken with respect to that S.
//!
//! Generator naming is uniform across shapes: index 0 is the identity
//! generator `1`, and every "primitive direction" (one lattice axis or
//! one free letter, counted across the whole product tree) contributes a
//! pair `x`/`x-` with consecutive letters `a`, `b`, `c`, …

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

/// Index into an oracle's generating set. 0 is always the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenSym(pub u32);

impl GenSym {
    pub const IDENTITY: GenSym = GenSym(0);
}

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("unknown generator name `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    BadGenSym(u32),
    #[error("search budget exhausted after visiting {visited} elements")]
    Budget { visited: usize },
    #[error("malformed element string `{0}` for this group")]
    BadElement(String),
    #[error("invalid group shape: {0}")]
    Shape(String),
}

/// Serializable description of a group; the tree shape of products is
/// preserved so specs round-trip exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Lattice { dim: u8 },
    Free { rank: u8 },
    Product { left: Box<GroupSpec>, right: Box<GroupSpec> },
}

impl GroupSpec {
    pub fn product(left: GroupSpec, right: GroupSpec) -> GroupSpec {
        GroupSpec::Product { left: Box::new(left), right: Box::new(right) }
    }
}

/// One direct factor after flattening the product tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FactorShape {
    /// ℤᵈ component, d ≥ 1.
    Lattice(u8),
    /// F_k component, k ≥ 1. Letters are stored 1-based and signed.
    Free(u8),
}

/// Group element in normal form: one component per flattened factor.
///
/// Lattice components are coordinate vectors; free components are freely
/// reduced words with letter `+j`/`-j` for the j-th letter (1-based) and
/// its inverse. Equality of normal forms is equality in the group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(Vec<Component>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Component {
    Ints(Vec<i64>),
    Word(Vec<i16>),
}

/// Where a generator acts: factor index plus signed 1-based direction.
#[derive(Debug, Clone, Copy)]
struct GenRoute {
    factor: usize,
    dir: i16,
}

/// A group together with its fixed symmetric generating set.
#[derive(Debug, Clone)]
pub struct GroupOracle {
    spec: GroupSpec,
    factors: Vec<FactorShape>,
    gen_names: Vec<String>,
    /// Routes for generators 1.., parallel to `gen_names[1..]`.
    routes: Vec<GenRoute>,
    /// `inv[i]` is the index of the inverse of generator i.
    inv: Vec<GenSym>,
}

fn flatten(spec: &GroupSpec, out: &mut Vec<FactorShape>) -> Result<(), GroupError> {
    match spec {
        GroupSpec::Lattice { dim } => {
            if *dim == 0 {
                return Err(GroupError::Shape("lattice dimension must be at least 1".into()));
            }
            out.push(FactorShape::Lattice(*dim));
            Ok(())
        }
        GroupSpec::Free { rank } => {
            if *rank == 0 {
                return Err(GroupError::Shape("free rank must be at least 1".into()));
            }
            out.push(FactorShape::Free(*rank));
            Ok(())
        }
        GroupSpec::Product { left, right } => {
            flatten(left, out)?;
            flatten(right, out)
        }
    }
}

fn letter_name(i: usize) -> String {
    // a, b, …, z, then aa, ab, … for pathological widths.
    let mut n = i;
    let mut s = String::new();
    loop {
        s.insert(0, (b'a' + (n % 26) as u8) as char);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s
}

impl GroupOracle {
    pub fn new(spec: GroupSpec) -> Result<GroupOracle, GroupError> {
        let mut factors = Vec::new();
        flatten(&spec, &mut factors)?;
        let mut gen_names = vec!["1".to_string()];
        let mut routes = Vec::new();
        let mut inv = vec![GenSym(0)];
        let mut letter = 0usize;
        for (fi, f) in factors.iter().enumerate() {
            let width = match f {
                FactorShape::Lattice(d) => *d,
                FactorShape::Free(k) => *k,
            };
            for local in 1..=width as i16 {
                let name = letter_name(letter);
                letter += 1;
                let plus = gen_names.len() as u32;
                gen_names.push(name.clone());
                gen_names.push(format!("{name}-"));
                routes.push(GenRoute { factor: fi, dir: local });
                routes.push(GenRoute { factor: fi, dir: -local });
                inv.push(GenSym(plus + 1));
                inv.push(GenSym(plus));
            }
        }
        Ok(GroupOracle { spec, factors, gen_names, routes, inv })
    }

    pub fn lattice(dim: u8) -> GroupOracle {
        GroupOracle::new(GroupSpec::Lattice { dim }).expect("dim >= 1")
    }

    pub fn free(rank: u8) -> GroupOracle {
        GroupOracle::new(GroupSpec::Free { rank }).expect("rank >= 1")
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Number of generators including the identity.
    pub fn gen_count(&self) -> usize {
        self.gen_names.len()
    }

    pub fn gens(&self) -> impl Iterator<Item = GenSym> + '_ {
        (0..self.gen_names.len() as u32).map(GenSym)
    }

    /// Generators other than the identity, in index order.
    pub fn proper_gens(&self) -> impl Iterator<Item = GenSym> + '_ {
        (1..self.gen_names.len() as u32).map(GenSym)
    }

    pub fn gen_name(&self, g: GenSym) -> &str {
        &self.gen_names[g.0 as usize]
    }

    pub fn gen_by_name(&self, name: &str) -> Result<GenSym, GroupError> {
        self.gen_names
            .iter()
            .position(|n| n == name)
            .map(|i| GenSym(i as u32))
            .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))
    }

    pub fn gen_inverse(&self, g: GenSym) -> GenSym {
        self.inv[g.0 as usize]
    }

    pub fn identity(&self) -> Element {
        Element(
            self.factors
                .iter()
                .map(|f| match f {
                    FactorShape::Lattice(d) => Component::Ints(vec![0; *d as usize]),
                    FactorShape::Free(_) => Component::Word(Vec::new()),
                })
                .collect(),
        )
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        e.0.iter().all(|c| match c {
            Component::Ints(v) => v.iter().all(|x| *x == 0),
            Component::Word(w) => w.is_empty(),
        })
    }

    /// Right-multiplies by a single generator.
    pub fn mul_gen(&self, e: &Element, g: GenSym) -> Element {
        if g == GenSym::IDENTITY {
            return e.clone();
        }
        let route = self.routes[(g.0 - 1) as usize];
        let mut out = e.clone();
        match &mut out.0[route.factor] {
            Component::Ints(v) => {
                let axis = route.dir.unsigned_abs() as usize - 1;
                v[axis] += if route.dir > 0 { 1 } else { -1 };
            }
            Component::Word(w) => {
                // Free reduction: appending a letter cancels at most one.
                if w.last() == Some(&-route.dir) {
                    w.pop();
                } else {
                    w.push(route.dir);
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let comps = a
            .0
            .iter()
            .zip(&b.0)
            .map(|(x, y)| match (x, y) {
                (Component::Ints(u), Component::Ints(v)) => {
                    Component::Ints(u.iter().zip(v).map(|(p, q)| p + q).collect())
                }
                (Component::Word(u), Component::Word(v)) => {
                    let mut w = u.clone();
                    for &l in v {
                        if w.last() == Some(&-l) {
                            w.pop();
                        } else {
                            w.push(l);
                        }
                    }
                    Component::Word(w)
                }
                _ => unreachable!("components always agree in shape"),
            })
            .collect();
        Element(comps)
    }

    pub fn inverse(&self, e: &Element) -> Element {
        Element(
            e.0.iter()
                .map(|c| match c {
                    Component::Ints(v) => Component::Ints(v.iter().map(|x| -x).collect()),
                    Component::Word(w) => Component::Word(w.iter().rev().map(|l| -l).collect()),
                })
                .collect(),
        )
    }

    /// Evaluates a word over S to its normal form.
    pub fn word_eval(&self, word: &[GenSym]) -> Result<Element, GroupError> {
        let mut e = self.identity();
        for &g in word {
            if g.0 as usize >= self.gen_names.len() {
                return Err(GroupError::BadGenSym(g.0));
            }
            e = self.mul_gen(&e, g);
        }
        Ok(e)
    }

    pub fn word_eval_names(&self, names: &[&str]) -> Result<Element, GroupError> {
        let word = names
            .iter()
            .map(|n| self.gen_by_name(n))
            .collect::<Result<Vec<_>, _>>()?;
        self.word_eval(&word)
    }

    /// Word length of `e` with respect to S (ℓ¹ on lattice factors,
    /// reduced length on free factors, summed over factors).
    pub fn norm(&self, e: &Element) -> u64 {
        e.0.iter()
            .map(|c| match c {
                Component::Ints(v) => v.iter().map(|x| x.unsigned_abs()).sum::<u64>(),
                Component::Word(w) => w.len() as u64,
            })
            .sum()
    }

    /// Ball of radius `r` around the identity, in breadth-first visit
    /// order with generators expanded in index order. This order is the
    /// shortlex order of the elements' minimal words, so it is stable and
    /// deterministic; tests rely on that.
    pub fn ball(&self, r: u32) -> Vec<Element> {
        self.ball_around(&self.identity(), r)
    }

    pub fn ball_around(&self, center: &Element, r: u32) -> Vec<Element> {
        let mut seen: HashMap<Element, ()> = HashMap::new();
        let mut order = Vec::new();
        let mut frontier = VecDeque::new();
        seen.insert(center.clone(), ());
        order.push(center.clone());
        frontier.push_back((center.clone(), 0u32));
        while let Some((e, d)) = frontier.pop_front() {
            if d == r {
                continue;
            }
            for g in self.proper_gens() {
                let n = self.mul_gen(&e, g);
                if !seen.contains_key(&n) {
                    seen.insert(n.clone(), ());
                    order.push(n.clone());
                    frontier.push_back((n, d + 1));
                }
            }
        }
        order
    }

    /// TS ∖ T for a finite set T, deduplicated, in deterministic order.
    pub fn boundary(&self, set: &[Element]) -> Vec<Element> {
        let inside: std::collections::HashSet<&Element> = set.iter().collect();
        let mut out = Vec::new();
        let mut emitted: std::collections::HashSet<Element> = std::collections::HashSet::new();
        for t in set {
            for g in self.proper_gens() {
                let n = self.mul_gen(t, g);
                if !inside.contains(&n) && emitted.insert(n.clone()) {
                    out.push(n);
                }
            }
        }
        out.sort();
        out
    }

    /// Shortest word evaluating to the same element as `word`, ties broken
    /// lexicographically by generator index. Brute-force breadth-first
    /// search; `budget` caps the number of visited elements.
    pub fn geodesic(&self, word: &[GenSym], budget: usize) -> Result<Vec<GenSym>, GroupError> {
        let target = self.word_eval(word)?;
        if self.is_identity(&target) {
            return Ok(Vec::new());
        }
        // BFS from the identity; the first visit of each element uses the
        // lexicographically least among its shortest generator paths
        // because the frontier is expanded in generator index order.
        let mut parent: HashMap<Element, (Element, GenSym)> = HashMap::new();
        let mut frontier = VecDeque::new();
        let id = self.identity();
        parent.insert(id.clone(), (id.clone(), GenSym::IDENTITY));
        frontier.push_back(id);
        let mut visited = 1usize;
        while let Some(e) = frontier.pop_front() {
            for g in self.proper_gens() {
                let n = self.mul_gen(&e, g);
                if parent.contains_key(&n) {
                    continue;
                }
                visited += 1;
                if visited > budget {
                    return Err(GroupError::Budget { visited });
                }
                parent.insert(n.clone(), (e.clone(), g));
                if n == target {
                    let mut path = Vec::new();
                    let mut cur = n;
                    while !self.is_identity(&cur) {
                        let (prev, g) = parent[&cur].clone();
                        path.push(g);
                        cur = prev;
                    }
                    path.reverse();
                    return Ok(path);
                }
                frontier.push_back(n);
            }
        }
        unreachable!("target is reachable: S generates the group")
    }

    /// Minimal (shortlex) word for an element, computed shape-by-shape
    /// without search: lattice moves sorted by axis, free words verbatim,
    /// product factors in order. Used for ordering and display.
    pub fn min_word(&self, e: &Element) -> Vec<GenSym> {
        let mut out = Vec::new();
        let mut base = 1u32; // first generator index of the current factor
        for (c, f) in e.0.iter().zip(&self.factors) {
            match (c, f) {
                (Component::Ints(v), FactorShape::Lattice(_)) => {
                    for (axis, &x) in v.iter().enumerate() {
                        let plus = base + 2 * axis as u32;
                        let g = if x >= 0 { GenSym(plus) } else { GenSym(plus + 1) };
                        for _ in 0..x.unsigned_abs() {
                            out.push(g);
                        }
                    }
                    base += 2 * v.len() as u32;
                }
                (Component::Word(w), FactorShape::Free(k)) => {
                    for &l in w {
                        let plus = base + 2 * (l.unsigned_abs() as u32 - 1);
                        out.push(if l > 0 { GenSym(plus) } else { GenSym(plus + 1) });
                    }
                    base += 2 * *k as u32;
                }
                _ => unreachable!(),
            }
        }
        out
    }

    /// Shortlex comparison: by word length, then by minimal word.
    pub fn shortlex_cmp(&self, a: &Element, b: &Element) -> Ordering {
        self.norm(a)
            .cmp(&self.norm(b))
            .then_with(|| self.min_word(a).cmp(&self.min_word(b)))
    }

    /// Elements in shortlex order, all of word length ≤ `r`.
    pub fn shortlex_ball(&self, r: u32) -> Vec<Element> {
        let mut v = self.ball(r);
        v.sort_by(|a, b| self.shortlex_cmp(a, b));
        v
    }

    /// Serializes an element in normal form. Factors are joined with `|`;
    /// lattice factors print comma-separated coordinates, free factors
    /// print the reduced word (`1` for the empty word).
    pub fn element_to_string(&self, e: &Element) -> String {
        let parts: Vec<String> = e
            .0
            .iter()
            .enumerate()
            .map(|(fi, c)| match c {
                Component::Ints(v) => {
                    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                }
                Component::Word(w) => {
                    if w.is_empty() {
                        "1".to_string()
                    } else {
                        let base = self.factor_letter_base(fi);
                        w.iter()
                            .map(|&l| {
                                let name = letter_name(base + l.unsigned_abs() as usize - 1);
                                if l > 0 {
                                    name
                                } else {
                                    format!("{name}-")
                                }
                            })
                            .collect::<String>()
                    }
                }
            })
            .collect();
        parts.join("|")
    }

    /// Global letter index of the first letter of factor `fi`.
    fn factor_letter_base(&self, fi: usize) -> usize {
        self.factors[..fi]
            .iter()
            .map(|f| match f {
                FactorShape::Lattice(d) => *d as usize,
                FactorShape::Free(k) => *k as usize,
            })
            .sum()
    }

    pub fn element_from_string(&self, s: &str) -> Result<Element, GroupError> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != self.factors.len() {
            return Err(GroupError::BadElement(s.to_string()));
        }
        let bad = || GroupError::BadElement(s.to_string());
        let mut comps = Vec::new();
        for (fi, (part, f)) in parts.iter().zip(&self.factors).enumerate() {
            match f {
                FactorShape::Lattice(d) => {
                    let coords: Vec<i64> = part
                        .split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad())?;
                    if coords.len() != *d as usize {
                        return Err(bad());
                    }
                    comps.push(Component::Ints(coords));
                }
                FactorShape::Free(k) => {
                    let mut w: Vec<i16> = Vec::new();
                    if *part != "1" {
                        let base = self.factor_letter_base(fi);
                        let chars: Vec<char> = part.chars().collect();
                        let mut i = 0;
                        while i < chars.len() {
                            let c = chars[i];
                            if !c.is_ascii_lowercase() {
                                return Err(bad());
                            }
                            let letter = (c as u8 - b'a') as usize;
                            if letter < base || letter >= base + *k as usize {
                                return Err(bad());
                            }
                            let local = (letter - base + 1) as i16;
                            i += 1;
                            let l = if i < chars.len() && chars[i] == '-' {
                                i += 1;
                                -local
                            } else {
                                local
                            };
                            // Keep normal form: reject non-reduced input.
                            if w.last() == Some(&-l) {
                                return Err(bad());
                            }
                            w.push(l);
                        }
                    }
                    comps.push(Component::Word(w));
                }
            }
        }
        Ok(Element(comps))
    }

    /// Number of direct factors after flattening the product tree.
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Generators whose route points into factor `fi`, in index order.
    /// The identity generator is not included.
    pub fn factor_gens(&self, fi: usize) -> Vec<GenSym> {
        self.routes
            .iter()
            .enumerate()
            .filter(|(_, r)| r.factor == fi)
            .map(|(i, _)| GenSym(i as u32 + 1))
            .collect()
    }
}

impl fmt::Display for GenSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// Translation-like self-map h ↦ h·s* along a designated infinite-order
/// generator. All supported shapes are torsion-free on generator 1, so
/// the first proper generator is always a valid choice.
#[derive(Debug, Clone)]
pub struct TranslationAction {
    star: GenSym,
}

impl TranslationAction {
    pub fn new(oracle: &GroupOracle) -> TranslationAction {
        debug_assert!(oracle.gen_count() > 1);
        TranslationAction { star: GenSym(1) }
    }

    pub fn generator(&self) -> GenSym {
        self.star
    }

    pub fn apply(&self, oracle: &GroupOracle, e: &Element) -> Element {
        oracle.mul_gen(e, self.star)
    }

    pub fn apply_inverse(&self, oracle: &GroupOracle, e: &Element) -> Element {
        oracle.mul_gen(e, oracle.gen_inverse(self.star))
    }

    /// Orbit displacement: the j with e = rep·s*^j, where `rep` is the
    /// shortlex-least representative of e's orbit within reach `j_cap`.
    /// Distinct j always give distinct elements (s* has infinite order).
    pub fn orbit_position(&self, oracle: &GroupOracle, e: &Element, j_cap: i64) -> i64 {
        let mut best: Option<(Element, i64)> = None;
        let mut cur = e.clone();
        // Walk j = 0, -1, -2, … then 0, 1, 2, … applying s*^{-j}.
        for j in 0..=j_cap {
            match &best {
                Some((b, _)) if oracle.shortlex_cmp(&cur, b) != Ordering::Less => {}
                _ => best = Some((cur.clone(), j)),
            }
            cur = self.apply_inverse(oracle, &cur);
        }
        let mut cur = self.apply(oracle, e);
        for j in 1..=j_cap {
            match &best {
                Some((b, _)) if oracle.shortlex_cmp(&cur, b) != Ordering::Less => {}
                _ => best = Some((cur.clone(), -j)),
            }
            cur = self.apply(oracle, &cur);
        }
        best.expect("nonempty scan").1
    }
}
