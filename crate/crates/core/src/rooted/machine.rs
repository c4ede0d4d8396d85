//! Machines driving the computation layer, and their compilation to
//! tiles.
//!
//! Two kinds of machine appear. General tape machines (states, tape
//! alphabet, a partial transition table) exercise the full tile
//! repertoire: the head walks the tape, writes, and the row-by-row tile
//! picture is their complete computation history. Zone testers are the
//! restricted machines compiled from a coding: their head never leaves
//! the origin and never writes; instead distinguished states carry
//! roles. A command state hands a grow or retract order to the tentacle
//! through the squid column, a read state consumes the base-layer
//! symbol the tentacle delivers and branches on it, and an accepting
//! state marks that every cell of the coding matched.

use crate::group::{Element, GenSym, GroupOracle};
use crate::rooted::tentacle::Cmd;
use crate::rooted::tile::{Edge, StateId, TapeSym, Tile, TileSet};
use crate::rooted::{BranchSym, DirPair, LayeredPatch, Mark, Word};
use crate::subshift::{Alphabet, Coding, Sym};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("no transition from state {state} on {sym}")]
    MissingRule { state: String, sym: String },
    #[error("head left the simulated tape at level {level}")]
    OffTape { level: usize },
    #[error("machine asked for a read value but none are left")]
    ReadsExhausted,
    #[error("{0}")]
    Invalid(String),
}

/// One transition: next state, written symbol, head move (-1, 0, +1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineStep {
    pub state: StateId,
    pub write: TapeSym,
    pub dir: i8,
}

/// Special behaviour of a state in a zone tester.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Emits a tentacle command, then moves on.
    Command { cmd: Cmd, next: StateId },
    /// Branches on the base-layer symbol delivered by the tentacle.
    Read { expect: Sym, on_match: StateId, on_mismatch: StateId },
    /// Every coding cell matched; excluded configurations contain this.
    Accept,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    pub state_names: Vec<String>,
    /// Index 0 is the blank.
    pub tape_names: Vec<String>,
    pub start: StateId,
    pub rules: BTreeMap<(StateId, TapeSym), MachineStep>,
    pub roles: BTreeMap<StateId, Role>,
}

impl Machine {
    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(|i| StateId(i as u16))
    }

    pub fn accept_state(&self) -> Option<StateId> {
        self.roles.iter().find(|(_, r)| matches!(r, Role::Accept)).map(|(&q, _)| q)
    }

    fn state(&self, q: StateId) -> &str {
        &self.state_names[q.0 as usize]
    }

    fn tape(&self, s: TapeSym) -> &str {
        &self.tape_names[s.0 as usize]
    }

    /// The worked example: four states over tape {_, a, b}, walking
    /// back and forth while rewriting the two leftmost cells.
    pub fn example() -> Machine {
        let names = ["q0", "r", "s", "t"];
        let q = |i: u16| StateId(i);
        let mut rules = BTreeMap::new();
        let blank = TapeSym::BLANK;
        let a = TapeSym(1);
        let b = TapeSym(2);
        rules.insert((q(0), blank), MachineStep { state: q(1), write: a, dir: 1 });
        rules.insert((q(1), blank), MachineStep { state: q(2), write: b, dir: 0 });
        rules.insert((q(2), b), MachineStep { state: q(3), write: a, dir: -1 });
        rules.insert((q(3), a), MachineStep { state: q(2), write: b, dir: 1 });
        Machine {
            state_names: names.iter().map(|s| s.to_string()).collect(),
            tape_names: vec!["_".to_string(), "a".to_string(), "b".to_string()],
            start: q(0),
            rules,
            roles: BTreeMap::new(),
        }
    }

    /// Compiles a coding into a zone tester.
    ///
    /// The machine visits the coding cells in shortlex order, growing
    /// the tentacle letter by letter along a geodesic between
    /// consecutive cells, and reads each cell on arrival. A mismatch
    /// retracts the tentacle and idles; once every cell matched the
    /// machine accepts.
    pub fn coding_tester(oracle: &GroupOracle, coding: &Coding) -> Result<Machine, MachineError> {
        let map = coding
            .evaluated(oracle)
            .map_err(|_| MachineError::Invalid("contradictory coding".to_string()))?;
        let mut cells: Vec<(Element, Sym)> = map.into_iter().collect();
        cells.sort_by(|x, y| oracle.shortlex_cmp(&x.0, &y.0));

        enum Op {
            Grow(GenSym),
            Read(Sym),
        }
        let mut ops = Vec::new();
        let mut cur = oracle.identity();
        for (cell, sym) in cells {
            let hop = oracle.mul(&oracle.inverse(&cur), &cell);
            for letter in oracle.min_word(&hop) {
                ops.push(Op::Grow(letter));
            }
            ops.push(Op::Read(sym));
            cur = cell;
        }

        let mut state_names: Vec<String> = (0..ops.len()).map(|i| format!("s{i}")).collect();
        let acc = StateId(state_names.len() as u16);
        state_names.push("acc".to_string());
        let del = StateId(state_names.len() as u16);
        state_names.push("del".to_string());
        let idle = StateId(state_names.len() as u16);
        state_names.push("idle".to_string());

        let mut roles = BTreeMap::new();
        for (i, op) in ops.iter().enumerate() {
            let here = StateId(i as u16);
            let next = StateId(i as u16 + 1);
            match op {
                Op::Grow(letter) => {
                    roles.insert(here, Role::Command { cmd: Cmd::Grow(*letter), next });
                }
                Op::Read(sym) => {
                    roles.insert(
                        here,
                        Role::Read { expect: *sym, on_match: next, on_mismatch: del },
                    );
                }
            }
        }
        roles.insert(acc, Role::Accept);
        roles.insert(del, Role::Command { cmd: Cmd::Delete, next: idle });
        let mut rules = BTreeMap::new();
        rules.insert(
            (idle, TapeSym::BLANK),
            MachineStep { state: idle, write: TapeSym::BLANK, dir: 0 },
        );
        Ok(Machine {
            state_names,
            tape_names: vec!["_".to_string()],
            start: StateId(0),
            rules,
            roles,
        })
    }

    fn name_transmit(&self, s: TapeSym) -> String {
        format!("transmit:{}", self.tape(s))
    }

    fn name_up(&self, q: StateId, s: TapeSym, q2: StateId, s2: TapeSym) -> String {
        format!("up:{}:{}>{}:{}", self.state(q), self.tape(s), self.state(q2), self.tape(s2))
    }

    fn name_mv_r(&self, q: StateId, s: TapeSym, s2: TapeSym, q2: StateId) -> String {
        format!("mvR:{}:{}>{}:{}", self.state(q), self.tape(s), self.tape(s2), self.state(q2))
    }

    fn name_mv_l(&self, q: StateId, s: TapeSym, s2: TapeSym, q2: StateId) -> String {
        format!("mvL:{}:{}>{}:{}", self.state(q), self.tape(s), self.tape(s2), self.state(q2))
    }

    fn name_arr_r(&self, q: StateId, s: TapeSym) -> String {
        format!("arrR:{}:{}", self.state(q), self.tape(s))
    }

    fn name_arr_l(&self, q: StateId, s: TapeSym) -> String {
        format!("arrL:{}:{}", self.state(q), self.tape(s))
    }

    fn name_cmd(cmd: Cmd) -> String {
        format!("cmd:{}", cmd.label())
    }

    fn name_cmd_up(&self, q: StateId, q2: StateId, cmd: Cmd) -> String {
        format!("cmdup:{}>{}:{}", self.state(q), self.state(q2), cmd.label())
    }

    fn name_read(&self, q: StateId, a: &str, q2: StateId) -> String {
        format!("read:{}:{}>{}", self.state(q), a, self.state(q2))
    }

    /// Compiles the full tile set: preamble and border tiles, transmit
    /// tiles, one tile family per transition, and the role tiles.
    pub fn tileset(&self, alphabet: &Alphabet) -> TileSet {
        let blank = TapeSym::BLANK;
        let mut set = TileSet {
            tiles: BTreeMap::new(),
            accept: Vec::new(),
            state_names: self.state_names.clone(),
            tape_names: self.tape_names.clone(),
        };
        let mut tile = |name: String, bottom, top, left, right, squid, cond| {
            set.tiles.insert(
                name.clone(),
                Tile { name, bottom, top, left, right, squid, cond },
            );
        };

        tile("seed".into(), Edge::Out, Edge::SeedUp, Edge::Out, Edge::Out, true, None);
        tile("seed-left".into(), Edge::SeedUp, Edge::LeftCol, Edge::Out, Edge::SeedH, true, None);
        tile("seed-right".into(), Edge::Out, Edge::MidCol, Edge::SeedH, Edge::Out, false, None);
        tile("left".into(), Edge::LeftCol, Edge::LeftCol, Edge::Out, Edge::Plain, true, None);
        tile("mid".into(), Edge::MidCol, Edge::OriginCol, Edge::Plain, Edge::Plain, false, None);
        tile(
            "origin".into(),
            Edge::OriginCol,
            Edge::Head(self.start, blank),
            Edge::Plain,
            Edge::Plain,
            false,
            None,
        );
        tile("blank".into(), Edge::RightCol, Edge::Sym(blank), Edge::Plain, Edge::Plain, false, None);
        tile("right".into(), Edge::Out, Edge::RightCol, Edge::Plain, Edge::Out, false, None);

        for i in 0..self.tape_names.len() {
            let s = TapeSym(i as u8);
            tile(
                self.name_transmit(s),
                Edge::Sym(s),
                Edge::Sym(s),
                Edge::Plain,
                Edge::Plain,
                false,
                None,
            );
        }

        for (&(q, s), step) in &self.rules {
            match step.dir {
                0 => tile(
                    self.name_up(q, s, step.state, step.write),
                    Edge::Head(q, s),
                    Edge::Head(step.state, step.write),
                    Edge::Plain,
                    Edge::Plain,
                    false,
                    None,
                ),
                d if d > 0 => {
                    tile(
                        self.name_mv_r(q, s, step.write, step.state),
                        Edge::Head(q, s),
                        Edge::Sym(step.write),
                        Edge::Plain,
                        Edge::MoveR(step.state),
                        false,
                        None,
                    );
                    for j in 0..self.tape_names.len() {
                        let s2 = TapeSym(j as u8);
                        tile(
                            self.name_arr_r(step.state, s2),
                            Edge::Sym(s2),
                            Edge::Head(step.state, s2),
                            Edge::MoveR(step.state),
                            Edge::Plain,
                            false,
                            None,
                        );
                    }
                }
                _ => {
                    tile(
                        self.name_mv_l(q, s, step.write, step.state),
                        Edge::Head(q, s),
                        Edge::Sym(step.write),
                        Edge::MoveL(step.state),
                        Edge::Plain,
                        false,
                        None,
                    );
                    for j in 0..self.tape_names.len() {
                        let s2 = TapeSym(j as u8);
                        tile(
                            self.name_arr_l(step.state, s2),
                            Edge::Sym(s2),
                            Edge::Head(step.state, s2),
                            Edge::Plain,
                            Edge::MoveL(step.state),
                            false,
                            None,
                        );
                    }
                }
            }
        }

        for (&q, role) in &self.roles {
            match role {
                Role::Command { cmd, next } => {
                    tile(
                        Machine::name_cmd(*cmd),
                        Edge::LeftCol,
                        Edge::LeftCol,
                        Edge::Out,
                        Edge::Cmd(*cmd),
                        true,
                        None,
                    );
                    tile(
                        self.name_cmd_up(q, *next, *cmd),
                        Edge::Head(q, blank),
                        Edge::Head(*next, blank),
                        Edge::Cmd(*cmd),
                        Edge::Plain,
                        false,
                        None,
                    );
                }
                Role::Read { expect, on_match, on_mismatch } => {
                    for a in alphabet.syms() {
                        let target = if a == *expect { *on_match } else { *on_mismatch };
                        tile(
                            self.name_read(q, alphabet.name(a), target),
                            Edge::Head(q, blank),
                            Edge::Head(target, blank),
                            Edge::Plain,
                            Edge::Plain,
                            false,
                            Some(a),
                        );
                    }
                }
                Role::Accept => {
                    tile(
                        self.name_up(q, blank, q, blank),
                        Edge::Head(q, blank),
                        Edge::Head(q, blank),
                        Edge::Plain,
                        Edge::Plain,
                        false,
                        None,
                    );
                    set.accept.push(q);
                }
            }
        }
        set
    }

    /// The four fixed rows every zone starts with.
    pub fn preamble_rows() -> Vec<Vec<String>> {
        vec![
            vec!["seed".into()],
            vec!["seed-left".into(), "seed-right".into()],
            vec!["left".into(), "mid".into(), "right".into()],
            vec!["left".into(), "origin".into(), "blank".into(), "right".into()],
        ]
    }

    /// One machine row of an origin-pinned zone tester.
    ///
    /// Returns the tile names for the full row at this level, the state
    /// before the next row, and the command the squid column hands to
    /// the tentacle. `read` supplies the base symbol under the tentacle
    /// tip and is consumed exactly when the state is a read state.
    pub fn zone_row(
        &self,
        alphabet: &Alphabet,
        level: usize,
        q: StateId,
        read: Option<Sym>,
    ) -> Result<(Vec<String>, StateId, Cmd, bool), MachineError> {
        let blank = TapeSym::BLANK;
        let (col0, col1, next, cmd, consumed) = match self.roles.get(&q) {
            Some(Role::Accept) => {
                ("left".to_string(), self.name_up(q, blank, q, blank), q, Cmd::IDLE, false)
            }
            Some(Role::Command { cmd, next }) => (
                Machine::name_cmd(*cmd),
                self.name_cmd_up(q, *next, *cmd),
                *next,
                *cmd,
                false,
            ),
            Some(Role::Read { expect, on_match, on_mismatch }) => {
                let a = read.ok_or(MachineError::ReadsExhausted)?;
                let target = if a == *expect { *on_match } else { *on_mismatch };
                (
                    "left".to_string(),
                    self.name_read(q, alphabet.name(a), target),
                    target,
                    Cmd::IDLE,
                    true,
                )
            }
            None => {
                let step = self.rules.get(&(q, blank)).ok_or_else(|| {
                    MachineError::MissingRule {
                        state: self.state(q).to_string(),
                        sym: self.tape(blank).to_string(),
                    }
                })?;
                if step.dir != 0 || step.write != blank {
                    return Err(MachineError::Invalid(
                        "zone testers stay at the origin and never write".to_string(),
                    ));
                }
                (
                    "left".to_string(),
                    self.name_up(q, blank, step.state, blank),
                    step.state,
                    Cmd::IDLE,
                    false,
                )
            }
        };
        if level < 4 {
            return Err(MachineError::Invalid("machine rows start at level 4".to_string()));
        }
        let mut row = vec![col0, col1];
        for _ in 0..level - 3 {
            row.push(self.name_transmit(blank));
        }
        row.push("blank".to_string());
        row.push("right".to_string());
        Ok((row, next, cmd, consumed))
    }

    /// Runs a general machine and returns the tile rows for levels
    /// 0..=`levels`. `reads` supplies base symbols for read states in
    /// the order they fire.
    pub fn simulate_rows(
        &self,
        alphabet: &Alphabet,
        levels: usize,
        reads: &[Sym],
    ) -> Result<Vec<Vec<String>>, MachineError> {
        let blank = TapeSym::BLANK;
        let mut rows = Machine::preamble_rows();
        rows.truncate(levels + 1);
        if levels < 4 {
            return Ok(rows);
        }
        let mut tape: Vec<TapeSym> = Vec::new();
        let mut head: usize = 0;
        let mut q = self.start;
        let mut read_idx = 0;
        for level in 4..=levels {
            // Active tape positions at this level are 0..=level-3.
            while tape.len() < level - 2 {
                tape.push(blank);
            }
            let before = tape.clone();
            let here = head;
            let mut arrival: Option<(usize, String)> = None;
            let col0;
            let head_tile;
            match self.roles.get(&q) {
                Some(Role::Accept) => {
                    col0 = "left".to_string();
                    head_tile = self.name_up(q, before[here], q, before[here]);
                }
                Some(Role::Command { cmd, next }) => {
                    if here != 0 {
                        return Err(MachineError::Invalid(
                            "command state fired away from the origin".to_string(),
                        ));
                    }
                    col0 = Machine::name_cmd(*cmd);
                    head_tile = self.name_cmd_up(q, *next, *cmd);
                    q = *next;
                }
                Some(Role::Read { expect, on_match, on_mismatch }) => {
                    if here != 0 {
                        return Err(MachineError::Invalid(
                            "read state fired away from the origin".to_string(),
                        ));
                    }
                    let a = *reads.get(read_idx).ok_or(MachineError::ReadsExhausted)?;
                    read_idx += 1;
                    let target = if a == *expect { *on_match } else { *on_mismatch };
                    col0 = "left".to_string();
                    head_tile = self.name_read(q, alphabet.name(a), target);
                    q = target;
                }
                None => {
                    col0 = "left".to_string();
                    let s = before[here];
                    let step = self.rules.get(&(q, s)).ok_or_else(|| {
                        MachineError::MissingRule {
                            state: self.state(q).to_string(),
                            sym: self.tape(s).to_string(),
                        }
                    })?;
                    tape[here] = step.write;
                    match step.dir {
                        0 => {
                            head_tile = self.name_up(q, s, step.state, step.write);
                        }
                        d if d > 0 => {
                            if here + 1 > level - 3 {
                                return Err(MachineError::OffTape { level });
                            }
                            head_tile = self.name_mv_r(q, s, step.write, step.state);
                            head = here + 1;
                            arrival = Some((head, self.name_arr_r(step.state, before[head])));
                        }
                        _ => {
                            if here == 0 {
                                return Err(MachineError::OffTape { level });
                            }
                            head_tile = self.name_mv_l(q, s, step.write, step.state);
                            head = here - 1;
                            arrival = Some((head, self.name_arr_l(step.state, before[head])));
                        }
                    }
                    q = step.state;
                }
            }
            let mut row = vec![col0];
            for pos in 0..=level - 3 {
                let tile = if pos == here {
                    head_tile.clone()
                } else {
                    match &arrival {
                        Some((to, name)) if pos == *to => name.clone(),
                        _ => self.name_transmit(before[pos]),
                    }
                };
                row.push(tile);
            }
            row.push("blank".to_string());
            row.push("right".to_string());
            rows.push(row);
        }
        Ok(rows)
    }
}

/// Total schedule length for testing a coding of radius `m` over a
/// symmetric generating set of size `s`: twice the number of words of
/// length at most 2m, plus counter headroom, plus one.
pub fn wait_steps(s: u64, m: u32) -> u64 {
    assert!(s >= 2);
    let mut n: u64 = 0;
    let mut pow: u64 = 1;
    for _ in 0..=(2 * m) {
        n += pow;
        pow *= s;
    }
    2 * n + ceil_log2(n) + 1
}

fn ceil_log2(n: u64) -> u64 {
    assert!(n > 0);
    64 - (n - 1).leading_zeros() as u64
}

/// Wraps precomputed rows into a patch describing one zone along one
/// tree branch, with canonical directions and the matching branching
/// cells. The patch is open: cells outside the zone are unknown.
pub fn zone_patch(
    oracle: &GroupOracle,
    rows: &[Vec<String>],
    branch: &[bool],
) -> Result<LayeredPatch, MachineError> {
    if branch.len() < rows.len() {
        return Err(MachineError::Invalid("branch shorter than the row stack".to_string()));
    }
    let depth = rows.len().saturating_sub(1);
    let mut patch = LayeredPatch::new(oracle, depth as u32 + 1, depth, false);
    let star = GenSym(1);
    for h in oracle.ball(depth as u32 + 1) {
        patch.delta.insert(h, DirPair::canonical());
    }
    for (level, row) in rows.iter().enumerate() {
        if row.len() != level + 1 {
            return Err(MachineError::Invalid(format!(
                "row at level {level} has {} tiles, expected {}",
                row.len(),
                level + 1
            )));
        }
        let w = Word(branch[..level].to_vec());
        let bit = branch[level];
        let mut h = oracle.identity();
        for (col, name) in row.iter().enumerate() {
            let mark = if level == 0 {
                Mark::Seed
            } else if col == 0 {
                Mark::LeftEnd
            } else if col == level {
                Mark::RightEnd
            } else {
                Mark::Body
            };
            patch.beta.insert((h.clone(), w.clone()), BranchSym::new(mark, bit));
            patch.gamma.insert((h.clone(), w.clone()), name.clone());
            h = oracle.mul_gen(&h, star);
        }
    }
    Ok(patch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rooted::tile::computation_check;
    use crate::subshift::Alphabet;

    #[test]
    fn wait_schedule_values() {
        assert_eq!(wait_steps(3, 0), 3);
        assert_eq!(wait_steps(3, 1), 31);
        // Monotone in the radius.
        for m in 0..5 {
            assert!(wait_steps(3, m) < wait_steps(3, m + 1));
        }
    }

    #[test]
    fn example_machine_rows_match_the_worked_history() {
        let m = Machine::example();
        let alphabet = Alphabet::new(["0"]).unwrap();
        let rows = m.simulate_rows(&alphabet, 7, &[]).unwrap();
        assert_eq!(rows[0], vec!["seed"]);
        assert_eq!(rows[1], vec!["seed-left", "seed-right"]);
        assert_eq!(rows[2], vec!["left", "mid", "right"]);
        assert_eq!(rows[3], vec!["left", "origin", "blank", "right"]);
        assert_eq!(rows[4], vec!["left", "mvR:q0:_>a:r", "arrR:r:_", "blank", "right"]);
        assert_eq!(
            rows[5],
            vec!["left", "transmit:a", "up:r:_>s:b", "transmit:_", "blank", "right"]
        );
        assert_eq!(
            rows[6],
            vec!["left", "arrL:t:a", "mvL:s:b>a:t", "transmit:_", "transmit:_", "blank", "right"]
        );
        assert_eq!(
            rows[7],
            vec![
                "left",
                "mvR:t:a>b:s",
                "arrR:s:a",
                "transmit:_",
                "transmit:_",
                "transmit:_",
                "blank",
                "right"
            ]
        );
    }

    #[test]
    fn example_rows_are_deterministic() {
        let m = Machine::example();
        let alphabet = Alphabet::new(["0"]).unwrap();
        let a = m.simulate_rows(&alphabet, 7, &[]).unwrap();
        let b = m.simulate_rows(&alphabet, 7, &[]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn example_rows_tile_a_clean_zone() {
        let oracle = GroupOracle::lattice(1);
        let m = Machine::example();
        let alphabet = Alphabet::new(["0"]).unwrap();
        let rows = m.simulate_rows(&alphabet, 7, &[]).unwrap();
        let tiles = m.tileset(&alphabet);
        let branch = vec![false; 8];
        let patch = zone_patch(&oracle, &rows, &branch).unwrap();
        let vs = computation_check(&oracle, &patch, &tiles);
        assert!(vs.is_empty(), "unexpected violations: {vs:?}");
    }

    #[test]
    fn corrupted_row_breaks_vertical_matching() {
        let oracle = GroupOracle::lattice(1);
        let m = Machine::example();
        let alphabet = Alphabet::new(["0"]).unwrap();
        let mut rows = m.simulate_rows(&alphabet, 7, &[]).unwrap();
        rows[5][1] = "transmit:_".to_string();
        let tiles = m.tileset(&alphabet);
        let patch = zone_patch(&oracle, &rows, &vec![false; 8]).unwrap();
        let vs = computation_check(&oracle, &patch, &tiles);
        assert!(vs.iter().any(|v| v.rule == "C.vertical"), "got: {vs:?}");
    }

    #[test]
    fn tester_for_single_cell_coding_reads_then_resolves() {
        let oracle = GroupOracle::lattice(1);
        let alphabet = Alphabet::new(["0", "1"]).unwrap();
        let one = alphabet.sym("1").unwrap();
        let coding = Coding::new(vec![(vec![], one)]);
        let m = Machine::coding_tester(&oracle, &coding).unwrap();
        assert_eq!(m.state_names, vec!["s0", "acc", "del", "idle"]);
        let acc = m.accept_state().unwrap();
        assert_eq!(m.state(acc), "acc");

        // Matching read walks into acceptance and stays there.
        let (row, q, cmd, used) =
            m.zone_row(&alphabet, 4, m.start, Some(one)).unwrap();
        assert_eq!(row, vec!["left", "read:s0:1>acc", "transmit:_", "blank", "right"]);
        assert_eq!(q, acc);
        assert_eq!(cmd, Cmd::IDLE);
        assert!(used);
        let (row5, q5, _, _) = m.zone_row(&alphabet, 5, q, None).unwrap();
        assert_eq!(
            row5,
            vec!["left", "up:acc:_>acc:_", "transmit:_", "transmit:_", "blank", "right"]
        );
        assert_eq!(q5, acc);

        // Mismatch retracts the tentacle and idles.
        let zero = alphabet.sym("0").unwrap();
        let (_, q, _, _) = m.zone_row(&alphabet, 4, m.start, Some(zero)).unwrap();
        let (row5, q5, cmd5, _) = m.zone_row(&alphabet, 5, q, None).unwrap();
        assert_eq!(row5[0], "cmd:D");
        assert_eq!(cmd5, Cmd::Delete);
        let (_, q6, cmd6, _) = m.zone_row(&alphabet, 6, q5, None).unwrap();
        assert_eq!(m.state(q6), "idle");
        assert_eq!(cmd6, Cmd::IDLE);
    }

    #[test]
    fn tester_walks_are_bounded_by_the_wait_schedule() {
        let oracle = GroupOracle::lattice(1);
        let alphabet = Alphabet::new(["0", "1"]).unwrap();
        let zero = alphabet.sym("0").unwrap();
        // Coding spanning [-2, 2]: radius 2.
        let coding = Coding::new(vec![
            (vec![GenSym(2), GenSym(2)], zero),
            (vec![], zero),
            (vec![GenSym(1), GenSym(1)], zero),
        ]);
        let m = Machine::coding_tester(&oracle, &coding).unwrap();
        // Steps before acc/del/idle: every grow and read op.
        let ops = m.state_names.len() - 3;
        assert!((ops as u64) <= wait_steps(3, 2));
    }
}
