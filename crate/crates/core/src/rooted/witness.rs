//! Whole-patch construction and the global exclusion rules.
//!
//! The builder grows every zone of a complete patch from the root seeds
//! down, all running the same machine in lockstep. The only choice a
//! zone makes is the subtree it continues into, and the schedule here
//! makes that choice so that no two zones ever claim the same cell: at
//! levels just before a power of two, zones sharing a translation orbit
//! take alternating bits, which doubles their spacing right when their
//! spans would meet; every other level separates zones by their
//! position along one fixed direction, cycling through directions so
//! any two distinct bases eventually part ways.
//!
//! The global rules make a configuration illegal when a machine accepts
//! (`Z.qf`) or when the seed and base layers are malformed
//! (`Z.seed-alphabet`). A base restriction extends to a legal full
//! configuration exactly when no zone over it can reach acceptance.

use crate::group::{Element, GenSym, GroupOracle};
use crate::rooted::machine::{Machine, MachineError, Role};
use crate::rooted::tentacle::{Cmd, TentacleSym};
use crate::rooted::tile::{StateId, TileSet};
use crate::rooted::{BranchSym, CellView, DirPair, LayeredPatch, Mark, RuleViolation, Word};
use crate::subshift::{Alphabet, Sym};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("two zones claimed the cell {0}")]
    Collision(String),
    #[error("base layer does not cover {0}")]
    MissingBase(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Levels one below a power of two redistribute zones by orbit parity.
pub fn special_level(level: usize) -> bool {
    (level + 1).is_power_of_two()
}

/// Separation instruction for a non-special level: a direction to
/// compare positions along, and a sign for torsion classes.
pub fn pair_for_level(oracle: &GroupOracle, level: usize) -> Option<(Element, i8)> {
    if special_level(level) {
        return None;
    }
    let k = (0..level).filter(|&l| !special_level(l)).count();
    let idx = k / 2;
    let m = if k % 2 == 0 { -1 } else { 1 };
    let mut r = 1;
    loop {
        let ball = oracle.shortlex_ball(r);
        if ball.len() > idx + 1 {
            return Some((ball[idx + 1].clone(), m));
        }
        r += 1;
    }
}

/// Displacement of `e` along `h`: the j with e = rep·h^j where rep is
/// the shortlex-least element of {e·h^{-i} : |i| <= reach}. Elements in
/// the same <h>-coset and within reach of each other agree on rep, so
/// their j values order them along the coset.
pub fn coset_position(oracle: &GroupOracle, e: &Element, h: &Element, reach: u32) -> i64 {
    let hinv = oracle.inverse(h);
    let mut best: Option<(Element, i64)> = None;
    let consider = |cand: Element, j: i64, best: &mut Option<(Element, i64)>| {
        match best {
            Some((b, _)) if oracle.shortlex_cmp(&cand, b) != std::cmp::Ordering::Less => {}
            _ => *best = Some((cand, j)),
        }
    };
    let mut cur = e.clone();
    for j in 0..=reach as i64 {
        consider(cur.clone(), j, &mut best);
        cur = oracle.mul(&cur, &hinv);
    }
    let mut cur = oracle.mul(e, h);
    for j in 1..=reach as i64 {
        consider(cur.clone(), -j, &mut best);
        cur = oracle.mul(&cur, h);
    }
    best.expect("nonempty scan").1
}

/// Bit assigned to coset position `j`. Without torsion the positions
/// alternate; with a torsion order kappa the sign m picks a direction
/// so that, over both passes m = -1 and m = +1, some pair of
/// consecutive positions still gets distinct bits.
pub fn separation_bit(j: i64, kappa: Option<u64>, m: i8) -> bool {
    match kappa {
        None => j.rem_euclid(2) == 1,
        Some(k) => ((m as i64 * j).rem_euclid(k as i64)) % 2 == 1,
    }
}

/// Levels a zone needs to test a coding of radius `m`: enough to grow
/// to every cell of the ball and back, plus counter headroom.
pub fn separation_bound(oracle: &GroupOracle, m: u32) -> u64 {
    let b = oracle.ball(2 * m).len() as u64;
    2 * b + (64 - (2 * b - 1).leading_zeros() as u64)
}

/// Global rules: no accepting tile anywhere, roots carry seeds, and the
/// base layer stays inside the alphabet.
pub fn zeta_check(
    patch: &LayeredPatch,
    tiles: &TileSet,
    alphabet: &Alphabet,
) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    let root = Word::root();
    for ((h, w), name) in &patch.gamma {
        if !patch.in_support(h, w) {
            continue;
        }
        if let Some(tile) = tiles.get(name) {
            if tiles.is_accepting(tile) {
                out.push(RuleViolation::new(
                    "Z.qf",
                    h,
                    w,
                    format!("accepting tile {name}"),
                ));
            }
        }
    }
    for ((h, w), bs) in &patch.beta {
        if w.is_empty() && bs.mark != Mark::Seed {
            out.push(RuleViolation::new(
                "Z.seed-alphabet",
                h,
                w,
                "roots must carry seeds".to_string(),
            ));
        }
    }
    for (h, s) in &patch.alpha {
        if s.0 as usize >= alphabet.len() {
            out.push(RuleViolation::new(
                "Z.seed-alphabet",
                h,
                &root,
                format!("symbol index {} outside the alphabet", s.0),
            ));
        }
    }
    if patch.complete {
        for h in patch.support_elements() {
            if matches!(patch.beta_at(h, &root), CellView::Empty) {
                out.push(RuleViolation::new(
                    "Z.seed-alphabet",
                    h,
                    &root,
                    "root without a seed".to_string(),
                ));
            }
            if matches!(patch.alpha_at(h), CellView::Empty) {
                out.push(RuleViolation::new(
                    "Z.seed-alphabet",
                    h,
                    &root,
                    "cell without a base symbol".to_string(),
                ));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct WitnessParams {
    pub radius: u32,
    pub depth: usize,
}

/// What one tree node saw during a build: the zones alive there, the
/// cells their tentacles occupied, and which zones were accepting.
#[derive(Debug, Clone, Default)]
pub struct NodeTrace {
    pub zone_bases: Vec<Element>,
    /// Tentacle positions per zone, parallel to `zone_bases`.
    pub tentacles: Vec<Vec<Element>>,
    pub accepting: Vec<Element>,
}

#[derive(Debug, Clone, Default)]
pub struct WitnessTrace {
    pub per_node: BTreeMap<Word, NodeTrace>,
}

#[derive(Debug)]
pub struct WitnessOutcome {
    pub patch: LayeredPatch,
    pub trace: WitnessTrace,
}

struct LiveZone {
    base: Element,
    q: StateId,
    /// Tentacle positions from base to tip.
    chain: Vec<Element>,
    /// Letters between consecutive chain cells.
    hops: Vec<GenSym>,
}

/// Builds the complete patch over `base` values: root seeds everywhere,
/// one zone per root, every zone running `machine` in lockstep, bits
/// chosen by the schedule. Errors rather than ever overwriting a cell.
pub fn witness_build(
    oracle: &GroupOracle,
    alphabet: &Alphabet,
    base: &BTreeMap<Element, Sym>,
    machine: &Machine,
    tiles: &TileSet,
    params: WitnessParams,
) -> Result<WitnessOutcome, WitnessError> {
    if params.depth == 0 {
        return Err(WitnessError::BadParams("depth must be positive".to_string()));
    }
    let mut patch = LayeredPatch::new(oracle, params.radius, params.depth, true);
    let support: Vec<Element> = patch.support_elements().cloned().collect();
    for h in &support {
        let Some(&s) = base.get(h) else {
            return Err(WitnessError::MissingBase(oracle.element_to_string(h)));
        };
        if s.0 as usize >= alphabet.len() {
            return Err(WitnessError::BadParams(format!(
                "base symbol index {} outside the alphabet",
                s.0
            )));
        }
        patch.alpha.insert(h.clone(), s);
        patch.delta.insert(h.clone(), DirPair::canonical());
    }

    let star = GenSym(1);
    let reach = params.radius + params.depth as u32 + 2;
    let zones: Vec<LiveZone> = support
        .iter()
        .map(|h| LiveZone {
            base: h.clone(),
            q: machine.start,
            chain: vec![h.clone()],
            hops: Vec::new(),
        })
        .collect();

    let mut trace = WitnessTrace::default();
    let mut stack = vec![(Word::root(), 0usize, zones)];
    while let Some((word, level, zones)) = stack.pop() {
        let mut node = NodeTrace::default();
        let mut sons: [Vec<LiveZone>; 2] = [Vec::new(), Vec::new()];
        // Orbit-sorted ranks for this node, used at special levels.
        let ranks = special_ranks(oracle, &zones, star, reach);
        let pair = pair_for_level(oracle, level);

        for (zi, mut zone) in zones.into_iter().enumerate() {
            let bit = match &pair {
                None => ranks[zi] % 2 == 1,
                Some((h, m)) => {
                    separation_bit(coset_position(oracle, &zone.base, h, reach), None, *m)
                }
            };

            let tip = zone.chain.last().expect("chain never empties").clone();
            let read = patch.alpha.get(&tip).copied();
            let (row, q_next, cmd, _) = if level < 4 {
                (Machine::preamble_rows()[level].clone(), zone.q, Cmd::IDLE, false)
            } else {
                if read.is_none() && matches!(machine.roles.get(&zone.q), Some(Role::Read { .. }))
                {
                    return Err(WitnessError::MissingBase(oracle.element_to_string(&tip)));
                }
                machine.zone_row(alphabet, level, zone.q, read)?
            };

            // Span cells.
            let mut h = zone.base.clone();
            for (col, name) in row.iter().enumerate() {
                if patch.in_support(&h, &word) {
                    let mark = if level == 0 {
                        Mark::Seed
                    } else if col == 0 {
                        Mark::LeftEnd
                    } else if col == row.len() - 1 {
                        Mark::RightEnd
                    } else {
                        Mark::Body
                    };
                    if tiles.get(name).is_none() {
                        return Err(WitnessError::BadParams(format!(
                            "machine emitted a tile `{name}` missing from the tile set"
                        )));
                    }
                    insert_cell(&mut patch.beta, &h, &word, BranchSym::new(mark, bit), oracle)?;
                    insert_cell(&mut patch.gamma, &h, &word, name.clone(), oracle)?;
                }
                h = oracle.mul_gen(&h, star);
            }

            // Tentacle cells. The whole chain relays the tip symbol.
            let symb = match read {
                Some(s) => s,
                None => return Err(WitnessError::MissingBase(oracle.element_to_string(&tip))),
            };
            for (i, pos) in zone.chain.iter().enumerate() {
                if !patch.in_support(pos, &word) {
                    continue;
                }
                let t = TentacleSym {
                    bit,
                    prev: if i == 0 {
                        GenSym::IDENTITY
                    } else {
                        oracle.gen_inverse(zone.hops[i - 1])
                    },
                    next: if i == zone.chain.len() - 1 {
                        GenSym::IDENTITY
                    } else {
                        zone.hops[i]
                    },
                    symb,
                    comm: cmd,
                };
                insert_cell(&mut patch.tentacle, pos, &word, t, oracle)?;
            }

            node.zone_bases.push(zone.base.clone());
            node.tentacles.push(zone.chain.clone());
            if matches!(machine.roles.get(&zone.q), Some(Role::Accept)) {
                node.accepting.push(zone.base.clone());
            }

            // Apply the command and descend.
            match cmd {
                Cmd::Delete => {
                    zone.chain = vec![zone.base.clone()];
                    zone.hops.clear();
                }
                Cmd::Grow(s) if s != GenSym::IDENTITY => {
                    let new_tip = oracle.mul_gen(&tip, s);
                    zone.chain.push(new_tip);
                    zone.hops.push(s);
                }
                Cmd::Grow(_) => {}
            }
            zone.q = q_next;
            sons[bit as usize].push(zone);
        }

        trace.per_node.insert(word.clone(), node);
        if level < params.depth {
            let [lo, hi] = sons;
            stack.push((word.child(false), level + 1, lo));
            stack.push((word.child(true), level + 1, hi));
        }
    }

    Ok(WitnessOutcome { patch, trace })
}

/// Rank of each zone inside its translation orbit, ordering by
/// displacement along the star generator.
fn special_ranks(
    oracle: &GroupOracle,
    zones: &[LiveZone],
    star: GenSym,
    reach: u32,
) -> Vec<usize> {
    let star_el = oracle.mul_gen(&oracle.identity(), star);
    let mut orbits: BTreeMap<Element, Vec<(i64, usize)>> = BTreeMap::new();
    for (zi, zone) in zones.iter().enumerate() {
        let j = coset_position(oracle, &zone.base, &star_el, reach);
        let mut rep = zone.base.clone();
        let step = oracle.inverse(&star_el);
        for _ in 0..j.abs() {
            rep = if j > 0 { oracle.mul(&rep, &step) } else { oracle.mul(&rep, &star_el) };
        }
        orbits.entry(rep).or_default().push((j, zi));
    }
    let mut ranks = vec![0; zones.len()];
    for members in orbits.values_mut() {
        members.sort();
        for (rank, &(_, zi)) in members.iter().enumerate() {
            ranks[zi] = rank;
        }
    }
    ranks
}

fn insert_cell<T>(
    map: &mut BTreeMap<(Element, Word), T>,
    h: &Element,
    w: &Word,
    value: T,
    oracle: &GroupOracle,
) -> Result<(), WitnessError> {
    if map.insert((h.clone(), w.clone()), value).is_some() {
        return Err(WitnessError::Collision(format!(
            "({}, {})",
            oracle.element_to_string(h),
            w
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rooted::verify;
    use crate::subshift::Coding;

    fn z() -> GroupOracle {
        GroupOracle::lattice(1)
    }

    fn zel(oracle: &GroupOracle, n: i64) -> Element {
        oracle.element_from_string(&n.to_string()).unwrap()
    }

    #[test]
    fn schedule_pins_the_first_directions() {
        let oracle = z();
        for level in [0usize, 1, 3, 7, 15] {
            assert!(special_level(level));
            assert!(pair_for_level(&oracle, level).is_none());
        }
        let pin = |level: usize, n: i64, m: i8| {
            let (h, got_m) = pair_for_level(&oracle, level).unwrap();
            assert_eq!(h, zel(&oracle, n), "direction at level {level}");
            assert_eq!(got_m, m, "sign at level {level}");
        };
        pin(2, 1, -1);
        pin(4, 1, 1);
        pin(5, -1, -1);
        pin(6, -1, 1);
        pin(8, 2, -1);
    }

    #[test]
    fn coset_position_matches_integer_offsets() {
        let oracle = z();
        let one = zel(&oracle, 1);
        for n in -6..=6 {
            assert_eq!(coset_position(&oracle, &zel(&oracle, n), &one, 10), n);
        }
        let two = zel(&oracle, 2);
        // Even and odd classes each order by their own offset.
        assert_eq!(coset_position(&oracle, &zel(&oracle, 4), &two, 10), 2);
        assert_eq!(coset_position(&oracle, &zel(&oracle, 5), &two, 10), 2);
        assert_eq!(coset_position(&oracle, &zel(&oracle, -3), &two, 10), -2);
    }

    #[test]
    fn torsion_bits_separate_consecutive_positions_in_two_passes() {
        // For every small torsion order some adjacent pair of positions
        // gets distinct bits under at least one of the two signs.
        for kappa in 2u64..9 {
            for m in [-1i8, 1] {
                let bits: Vec<bool> =
                    (0..2 * kappa as i64).map(|j| separation_bit(j, Some(kappa), m)).collect();
                assert!(
                    bits.windows(2).any(|p| p[0] != p[1]),
                    "kappa {kappa} sign {m} never separates"
                );
            }
        }
    }

    #[test]
    fn separation_bound_value() {
        let oracle = z();
        assert_eq!(separation_bound(&oracle, 1), 14);
    }

    fn tester_setup(
        oracle: &GroupOracle,
    ) -> (Alphabet, Machine, TileSet) {
        let alphabet = Alphabet::new(["0", "1"]).unwrap();
        let one = alphabet.sym("1").unwrap();
        let coding = Coding::new(vec![(vec![], one)]);
        let machine = Machine::coding_tester(oracle, &coding).unwrap();
        let tiles = machine.tileset(&alphabet);
        (alphabet, machine, tiles)
    }

    fn flat_base(oracle: &GroupOracle, radius: u32, ones: &[i64]) -> BTreeMap<Element, Sym> {
        let mut base = BTreeMap::new();
        for h in oracle.ball(radius) {
            base.insert(h, Sym(0));
        }
        for &n in ones {
            base.insert(zel(oracle, n), Sym(1));
        }
        base
    }

    #[test]
    fn all_zero_base_builds_a_violation_free_patch() {
        let oracle = z();
        let (alphabet, machine, tiles) = tester_setup(&oracle);
        let base = flat_base(&oracle, 4, &[]);
        let out = witness_build(
            &oracle,
            &alphabet,
            &base,
            &machine,
            &tiles,
            WitnessParams { radius: 4, depth: 5 },
        )
        .unwrap();
        let vs = verify(&oracle, &out.patch, &tiles, &alphabet);
        assert!(vs.is_empty(), "unexpected violations: {vs:?}");
        // No zone ever accepts over the all-zero base.
        for node in out.trace.per_node.values() {
            assert!(node.accepting.is_empty());
        }
    }

    #[test]
    fn one_at_origin_forces_acceptance_and_nothing_else() {
        let oracle = z();
        let (alphabet, machine, tiles) = tester_setup(&oracle);
        let base = flat_base(&oracle, 4, &[0]);
        let out = witness_build(
            &oracle,
            &alphabet,
            &base,
            &machine,
            &tiles,
            WitnessParams { radius: 4, depth: 5 },
        )
        .unwrap();
        let vs = verify(&oracle, &out.patch, &tiles, &alphabet);
        assert!(!vs.is_empty(), "acceptance must be flagged");
        assert!(vs.iter().all(|v| v.rule == "Z.qf"), "got: {vs:?}");
        let accepted: Vec<_> = out
            .trace
            .per_node
            .values()
            .flat_map(|n| n.accepting.iter().cloned())
            .collect();
        assert!(accepted.iter().all(|h| *h == oracle.identity()));
        assert!(!accepted.is_empty());
    }

    #[test]
    fn tentacles_of_distinct_zones_never_share_a_cell() {
        let oracle = z();
        let (alphabet, machine, tiles) = tester_setup(&oracle);
        let base = flat_base(&oracle, 4, &[2, -1]);
        let out = witness_build(
            &oracle,
            &alphabet,
            &base,
            &machine,
            &tiles,
            WitnessParams { radius: 4, depth: 5 },
        )
        .unwrap();
        for (w, node) in &out.trace.per_node {
            let mut seen = std::collections::BTreeSet::new();
            for cells in &node.tentacles {
                for c in cells {
                    assert!(seen.insert(c.clone()), "two tentacles on {c:?} at node {w}");
                }
            }
        }
    }
}
