//! Pattern codings and cylinder scans over configurations on a group.
//!
//! A coding is a finite list of (word, symbol) requirements. Evaluated
//! against a position g of a configuration it claims y(g·w) = symbol for
//! every entry; matching is three-valued because a finite window may not
//! determine all required cells. Codings are data, not functions: the
//! same coding can be serialized, deduplicated by its evaluated map, and
//! scanned over patches.

use crate::group::{Element, GenSym, GroupOracle};
use crate::par;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SubshiftError {
    #[error("duplicate symbol name `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("unknown symbol name `{0}`")]
    UnknownSymbol(String),
    #[error("alphabet has {0} symbols, need at least {1}")]
    AlphabetTooSmall(usize, usize),
    #[error("found {found} disjoint ball pairs within radius {radius}, wanted {wanted}")]
    CentersBudget { found: usize, wanted: usize, radius: u32 },
}

/// Index into an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(pub u16);

/// Finite symbol alphabet with stable indices and unique names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Alphabet, SubshiftError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(SubshiftError::DuplicateSymbol(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn syms(&self) -> impl Iterator<Item = Sym> {
        (0..self.names.len() as u16).map(Sym)
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s.0 as usize]
    }

    pub fn sym(&self, name: &str) -> Result<Sym, SubshiftError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Sym(i as u16))
            .ok_or_else(|| SubshiftError::UnknownSymbol(name.to_string()))
    }
}

/// Finite fragment of a configuration: an assignment on a finite support.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pattern {
    pub cells: BTreeMap<Element, Sym>,
}

impl Pattern {
    pub fn new() -> Pattern {
        Pattern { cells: BTreeMap::new() }
    }

    pub fn set(&mut self, at: Element, sym: Sym) {
        self.cells.insert(at, sym);
    }

    pub fn get(&self, at: &Element) -> Option<Sym> {
        self.cells.get(at).copied()
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.cells.keys()
    }
}

/// Finite list of (word, symbol) requirements. Entries keep the words
/// they were built or parsed with; consistency is only checked when the
/// coding is evaluated, so a contradictory coding is representable and
/// reported as refuted rather than rejected up front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coding {
    pub entries: Vec<(Vec<GenSym>, Sym)>,
}

impl Coding {
    pub fn new(entries: Vec<(Vec<GenSym>, Sym)>) -> Coding {
        Coding { entries }
    }

    /// Word-by-word evaluation to a map on group elements. Two entries
    /// that name the same element with different symbols make the coding
    /// contradictory; the offending element is returned.
    pub fn evaluated(
        &self,
        oracle: &GroupOracle,
    ) -> Result<BTreeMap<Element, Sym>, (Element, Sym, Sym)> {
        let mut map = BTreeMap::new();
        for (word, sym) in &self.entries {
            let e = oracle.word_eval(word).expect("coding words use oracle generators");
            match map.get(&e) {
                Some(&prev) if prev != *sym => return Err((e, prev, *sym)),
                _ => {
                    map.insert(e, *sym);
                }
            }
        }
        Ok(map)
    }
}

/// Outcome of testing one coding at one position of a finite pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchVerdict {
    /// Every required cell is present and carries the required symbol.
    Matches,
    /// Some required cell is present with a different symbol, or the
    /// coding itself is contradictory.
    Refuted { reason: String },
    /// No conflict, but at least one required cell is outside the pattern.
    Undetermined,
}

/// Tests whether `coding` holds at position `at` of `pattern`:
/// y(at·w) = sym for every entry (w, sym).
pub fn coding_matches(
    oracle: &GroupOracle,
    pattern: &Pattern,
    coding: &Coding,
    at: &Element,
) -> MatchVerdict {
    let map = match coding.evaluated(oracle) {
        Ok(m) => m,
        Err((e, a, b)) => {
            return MatchVerdict::Refuted {
                reason: format!(
                    "coding is contradictory at {}: symbols {} and {}",
                    oracle.element_to_string(&e),
                    a.0,
                    b.0
                ),
            }
        }
    };
    let mut all_present = true;
    for (e, sym) in &map {
        let cell = oracle.mul(at, e);
        match pattern.get(&cell) {
            Some(s) if s == *sym => {}
            Some(s) => {
                return MatchVerdict::Refuted {
                    reason: format!(
                        "cell {} carries symbol {} but the coding requires {}",
                        oracle.element_to_string(&cell),
                        s.0,
                        sym.0
                    ),
                }
            }
            None => all_present = false,
        }
    }
    if all_present {
        MatchVerdict::Matches
    } else {
        MatchVerdict::Undetermined
    }
}

/// Scan outcome over a whole patch, positions sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScanReport {
    pub matches: Vec<Element>,
    pub undetermined: Vec<Element>,
    pub refuted: usize,
}

fn scan_merge(centers: Vec<(Element, MatchVerdict)>) -> ScanReport {
    let mut report = ScanReport::default();
    for (g, v) in centers {
        match v {
            MatchVerdict::Matches => report.matches.push(g),
            MatchVerdict::Undetermined => report.undetermined.push(g),
            MatchVerdict::Refuted { .. } => report.refuted += 1,
        }
    }
    report.matches.sort();
    report.undetermined.sort();
    report
}

/// Classifies every support position of `pattern` against `coding`.
/// Data-parallel over positions; the merged report is deterministic.
pub fn scan_patch(oracle: &GroupOracle, pattern: &Pattern, coding: &Coding) -> ScanReport {
    let centers: Vec<Element> = pattern.support().cloned().collect();
    let verdicts = par::map_collect(&centers, |g| {
        (g.clone(), coding_matches(oracle, pattern, coding, g))
    });
    scan_merge(verdicts)
}

/// Sequential twin of [`scan_patch`].
pub fn scan_patch_seq(oracle: &GroupOracle, pattern: &Pattern, coding: &Coding) -> ScanReport {
    let centers: Vec<Element> = pattern.support().cloned().collect();
    let verdicts = par::map_collect_seq(&centers, |g| {
        (g.clone(), coding_matches(oracle, pattern, coding, g))
    });
    scan_merge(verdicts)
}

/// A generated family of codings, before and after deduplication by
/// evaluated map.
#[derive(Debug, Clone)]
pub struct CodingFamily {
    pub raw_count: usize,
    pub codings: Vec<Coding>,
}

/// All codings {1 → star, w → x, w⁻¹ → y} with w a nonidentity element of
/// word length ≤ `max_len` and x ≠ y ranging over the full alphabet.
/// Enumerating w and w⁻¹ separately produces every map twice; the family
/// is deduplicated by evaluated map, halving the raw count.
pub fn reflection_codings(
    oracle: &GroupOracle,
    alphabet: &Alphabet,
    star: Sym,
    max_len: u32,
) -> CodingFamily {
    let mut raw_count = 0;
    let mut dedup: BTreeMap<BTreeMap<Element, Sym>, Coding> = BTreeMap::new();
    for e in oracle.ball(max_len) {
        if oracle.is_identity(&e) {
            continue;
        }
        let inv = oracle.inverse(&e);
        for x in alphabet.syms() {
            for y in alphabet.syms() {
                if x == y {
                    continue;
                }
                raw_count += 1;
                let coding = Coding::new(vec![
                    (Vec::new(), star),
                    (oracle.min_word(&e), x),
                    (oracle.min_word(&inv), y),
                ]);
                let key = coding.evaluated(oracle).expect("distinct cells");
                dedup.entry(key).or_insert(coding);
            }
        }
    }
    CodingFamily { raw_count, codings: dedup.into_values().collect() }
}

/// Greedy shortlex choice of ball centers: candidates are scanned in
/// shortlex order and accepted when their n-ball misses the identity and
/// every ball accepted so far. Accepted centers are paired in order.
pub fn disjoint_ball_centers(
    oracle: &GroupOracle,
    n: u32,
    pairs: usize,
    max_radius: u32,
) -> Result<Vec<(Element, Element)>, SubshiftError> {
    let mut taken: Vec<Element> = Vec::new(); // union of accepted balls
    let mut centers: Vec<Element> = Vec::new();
    let id = oracle.identity();
    for cand in oracle.ball(max_radius) {
        if centers.len() == 2 * pairs {
            break;
        }
        if oracle.is_identity(&cand) {
            continue;
        }
        let ball = oracle.ball_around(&cand, n);
        if ball.contains(&id) || ball.iter().any(|e| taken.contains(e)) {
            continue;
        }
        taken.extend(ball);
        centers.push(cand);
    }
    if centers.len() < 2 * pairs {
        return Err(SubshiftError::CentersBudget {
            found: centers.len() / 2,
            wanted: pairs,
            radius: max_radius,
        });
    }
    Ok(centers.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect())
}

/// Codings {1 → star, a·t → x, b·t → y} for the first disjoint ball pair
/// (a, b) at radius `n`, with t ranging over the n-ball and x ≠ y over the
/// alphabet. Such a coding matching at g says the window around g·a
/// locally mimics the window around g·b without copying it.
pub fn ball_mimic_codings(
    oracle: &GroupOracle,
    alphabet: &Alphabet,
    star: Sym,
    n: u32,
    max_radius: u32,
) -> Result<CodingFamily, SubshiftError> {
    let (a, b) = disjoint_ball_centers(oracle, n, 1, max_radius)?[0].clone();
    let mut raw_count = 0;
    let mut dedup: BTreeMap<BTreeMap<Element, Sym>, Coding> = BTreeMap::new();
    for t in oracle.ball(n) {
        let at = oracle.mul(&a, &t);
        let bt = oracle.mul(&b, &t);
        for x in alphabet.syms() {
            for y in alphabet.syms() {
                if x == y {
                    continue;
                }
                raw_count += 1;
                let coding = Coding::new(vec![
                    (Vec::new(), star),
                    (oracle.min_word(&at), x),
                    (oracle.min_word(&bt), y),
                ]);
                let key = coding.evaluated(oracle).expect("balls are disjoint");
                dedup.entry(key).or_insert(coding);
            }
        }
    }
    Ok(CodingFamily { raw_count, codings: dedup.into_values().collect() })
}
