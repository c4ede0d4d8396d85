//! On-disk JSON formats and their conversions to workbench values.
//!
//! Every format is plain data with stable field order, so writing the
//! same value twice produces identical bytes. Group elements travel as
//! their canonical strings, tree addresses as bit strings with "e" for
//! the root, branching symbols as glyph plus bit, and tentacle commands
//! as their labels.

use anyhow::{anyhow, bail, Context, Result};
use forge_core::rooted::machine::Machine;
use forge_core::rooted::tentacle::{Cmd, TentacleSym};
use forge_core::rooted::tile::TileSet;
use forge_core::rooted::{BranchSym, DirPair, Mark, Word};
use forge_core::toeplitz::{WPatch, WValue};
use forge_core::{Alphabet, Coding, GenSym, GroupOracle, LayeredPatch, Pattern, Sym};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub fn parse_group(name: &str) -> Result<GroupOracle> {
    match name {
        "z" => Ok(GroupOracle::lattice(1)),
        "z2" => Ok(GroupOracle::lattice(2)),
        "z3" => Ok(GroupOracle::lattice(3)),
        "f2" => Ok(GroupOracle::free(2)),
        "f3" => Ok(GroupOracle::free(3)),
        other => bail!("unknown group {other:?}, expected one of z, z2, z3, f2, f3"),
    }
}

pub fn parse_alphabet(spec: &str) -> Result<Alphabet> {
    let names: Vec<&str> = spec.split(',').map(str::trim).collect();
    Ok(Alphabet::new(names)?)
}

/// Generator word from comma-separated generator names; empty input is
/// the empty word.
pub fn parse_word(oracle: &GroupOracle, word: &str) -> Result<Vec<GenSym>> {
    word.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Ok(oracle.gen_by_name(t)?))
        .collect()
}

pub fn word_names(oracle: &GroupOracle, word: &[GenSym]) -> Vec<String> {
    word.iter().map(|&g| oracle.gen_name(g).to_string()).collect()
}

fn word_string(w: &Word) -> String {
    if w.is_empty() {
        "e".to_string()
    } else {
        w.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

fn parse_tree_word(s: &str) -> Result<Word> {
    if s == "e" {
        return Ok(Word::root());
    }
    let mut bits = Vec::new();
    for c in s.chars() {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => bail!("bad tree address character {other:?}, expected 0, 1, or e"),
        }
    }
    Ok(Word(bits))
}

pub fn parse_address(s: &str) -> Result<Vec<bool>> {
    Ok(parse_tree_word(s)?.0)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PatternFile {
    pub group: String,
    pub alphabet: Vec<String>,
    pub cells: Vec<(String, String)>,
}

impl PatternFile {
    pub fn build(oracle: &GroupOracle, group: &str, alphabet: &Alphabet, p: &Pattern) -> Self {
        PatternFile {
            group: group.to_string(),
            alphabet: (0..alphabet.len() as u16)
                .map(|i| alphabet.name(Sym(i)).to_string())
                .collect(),
            cells: p
                .cells
                .iter()
                .map(|(at, sym)| (oracle.element_to_string(at), alphabet.name(*sym).to_string()))
                .collect(),
        }
    }

    pub fn load(&self) -> Result<(GroupOracle, Alphabet, Pattern)> {
        let oracle = parse_group(&self.group)?;
        let alphabet = Alphabet::new(self.alphabet.iter().map(String::as_str))?;
        let mut pattern = Pattern::new();
        for (at, name) in &self.cells {
            let e = oracle
                .element_from_string(at)
                .with_context(|| format!("pattern cell {at:?}"))?;
            pattern.set(e, alphabet.sym(name)?);
        }
        Ok((oracle, alphabet, pattern))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CodingFile {
    pub alphabet: Vec<String>,
    pub entries: Vec<(Vec<String>, String)>,
}

impl CodingFile {
    pub fn load(&self, oracle: &GroupOracle) -> Result<(Alphabet, Coding)> {
        let alphabet = Alphabet::new(self.alphabet.iter().map(String::as_str))?;
        let mut entries = Vec::new();
        for (word, name) in &self.entries {
            let gens = word
                .iter()
                .map(|n| Ok(oracle.gen_by_name(n)?))
                .collect::<Result<Vec<GenSym>>>()?;
            entries.push((gens, alphabet.sym(name)?));
        }
        Ok((alphabet, Coding::new(entries)))
    }
}

/// The default tested coding: the symbol "1" forbidden at the origin.
pub fn default_coding() -> CodingFile {
    CodingFile {
        alphabet: vec!["0".to_string(), "1".to_string()],
        entries: vec![(Vec::new(), "1".to_string())],
    }
}

/// Tester machine and tiles for a coding over the given group.
pub fn tester(oracle: &GroupOracle, file: &CodingFile) -> Result<(Alphabet, Machine, TileSet)> {
    let (alphabet, coding) = file.load(oracle)?;
    let machine = Machine::coding_tester(oracle, &coding)?;
    let tiles = machine.tileset(&alphabet);
    Ok((alphabet, machine, tiles))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TentacleFile {
    pub bit: u8,
    pub prev: u32,
    pub next: u32,
    pub symb: String,
    pub comm: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PatchFile {
    pub group: String,
    pub radius: u32,
    pub depth: usize,
    pub complete: bool,
    pub alphabet: Vec<String>,
    pub alpha: Vec<(String, String)>,
    pub delta: Vec<(String, u32, u32)>,
    pub beta: Vec<(String, String, String)>,
    pub gamma: Vec<(String, String, String)>,
    pub tentacle: Vec<(String, String, TentacleFile)>,
}

fn mark_string(bs: BranchSym) -> String {
    format!("{}{}", bs.mark.glyph(), bs.bit as u8)
}

fn parse_mark(s: &str) -> Result<BranchSym> {
    let mut chars = s.chars();
    let (Some(glyph), Some(bit), None) = (chars.next(), chars.next(), chars.next()) else {
        bail!("bad branching symbol {s:?}, expected glyph and bit");
    };
    let mark = match glyph {
        'S' => Mark::Seed,
        '>' => Mark::LeftEnd,
        '=' => Mark::Body,
        '<' => Mark::RightEnd,
        other => bail!("bad branching glyph {other:?}"),
    };
    let bit = match bit {
        '0' => false,
        '1' => true,
        other => bail!("bad branching bit {other:?}"),
    };
    Ok(BranchSym::new(mark, bit))
}

fn parse_cmd(s: &str) -> Result<Cmd> {
    if s == "D" {
        return Ok(Cmd::Delete);
    }
    let rest = s
        .strip_prefix('G')
        .ok_or_else(|| anyhow!("bad tentacle command {s:?}"))?;
    Ok(Cmd::Grow(GenSym(rest.parse()?)))
}

impl PatchFile {
    pub fn build(
        oracle: &GroupOracle,
        group: &str,
        alphabet: &Alphabet,
        patch: &LayeredPatch,
    ) -> Self {
        let el = |h: &forge_core::Element| oracle.element_to_string(h);
        PatchFile {
            group: group.to_string(),
            radius: patch.radius,
            depth: patch.depth,
            complete: patch.complete,
            alphabet: (0..alphabet.len() as u16)
                .map(|i| alphabet.name(Sym(i)).to_string())
                .collect(),
            alpha: patch
                .alpha
                .iter()
                .map(|(h, s)| (el(h), alphabet.name(*s).to_string()))
                .collect(),
            delta: patch
                .delta
                .iter()
                .map(|(h, d)| (el(h), d.left.0, d.right.0))
                .collect(),
            beta: patch
                .beta
                .iter()
                .map(|((h, w), bs)| (el(h), word_string(w), mark_string(*bs)))
                .collect(),
            gamma: patch
                .gamma
                .iter()
                .map(|((h, w), name)| (el(h), word_string(w), name.clone()))
                .collect(),
            tentacle: patch
                .tentacle
                .iter()
                .map(|((h, w), t)| {
                    (
                        el(h),
                        word_string(w),
                        TentacleFile {
                            bit: t.bit as u8,
                            prev: t.prev.0,
                            next: t.next.0,
                            symb: alphabet.name(t.symb).to_string(),
                            comm: t.comm.label(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn load(&self) -> Result<(GroupOracle, Alphabet, LayeredPatch)> {
        let oracle = parse_group(&self.group)?;
        let alphabet = Alphabet::new(self.alphabet.iter().map(String::as_str))?;
        let mut patch = LayeredPatch::new(&oracle, self.radius, self.depth, self.complete);
        let el = |s: &String| {
            oracle
                .element_from_string(s)
                .with_context(|| format!("patch cell {s:?}"))
        };
        for (h, name) in &self.alpha {
            patch.alpha.insert(el(h)?, alphabet.sym(name)?);
        }
        for (h, left, right) in &self.delta {
            patch
                .delta
                .insert(el(h)?, DirPair { left: GenSym(*left), right: GenSym(*right) });
        }
        for (h, w, mark) in &self.beta {
            patch
                .beta
                .insert((el(h)?, parse_tree_word(w)?), parse_mark(mark)?);
        }
        for (h, w, name) in &self.gamma {
            patch
                .gamma
                .insert((el(h)?, parse_tree_word(w)?), name.clone());
        }
        for (h, w, t) in &self.tentacle {
            patch.tentacle.insert(
                (el(h)?, parse_tree_word(w)?),
                TentacleSym {
                    bit: t.bit != 0,
                    prev: GenSym(t.prev),
                    next: GenSym(t.next),
                    symb: alphabet.sym(&t.symb)?,
                    comm: parse_cmd(&t.comm)?,
                },
            );
        }
        Ok((oracle, alphabet, patch))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WComponentsFile(pub Vec<(u32, String)>);

#[derive(Debug, Serialize, Deserialize)]
pub struct WPatchFile {
    pub group_h: String,
    pub group_n: String,
    pub alphabet: Vec<String>,
    pub d: Vec<(String, String, String)>,
    pub y: Vec<(String, String, Option<WComponentsFile>)>,
}

impl WPatchFile {
    pub fn load(&self) -> Result<(GroupOracle, GroupOracle, WPatch)> {
        let h_oracle = parse_group(&self.group_h)?;
        let n_oracle = parse_group(&self.group_n)?;
        let alphabet = Alphabet::new(self.alphabet.iter().map(String::as_str))?;
        let mut patch = WPatch::default();
        let key = |h: &String, n: &String| -> Result<_> {
            Ok((
                h_oracle
                    .element_from_string(h)
                    .with_context(|| format!("first-factor cell {h:?}"))?,
                n_oracle
                    .element_from_string(n)
                    .with_context(|| format!("second-factor cell {n:?}"))?,
            ))
        };
        for (h, n, name) in &self.d {
            patch.d.insert(key(h, n)?, alphabet.sym(name)?);
        }
        for (h, n, value) in &self.y {
            let v = match value {
                None => WValue::Blank,
                Some(WComponentsFile(rows)) => {
                    let mut components = BTreeMap::new();
                    for (gen, name) in rows {
                        components.insert(GenSym(*gen), alphabet.sym(name)?);
                    }
                    WValue::Rep(components)
                }
            };
            patch.y.insert(key(h, n)?, v);
        }
        Ok((h_oracle, n_oracle, patch))
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T> {
    // Resolve before reading so error messages name a real location.
    let resolved = std::fs::canonicalize(path).with_context(|| format!("resolving {path}"))?;
    let text =
        std::fs::read_to_string(&resolved).with_context(|| format!("reading {path}"))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?)
}
