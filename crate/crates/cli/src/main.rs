//! Command-line front end for the workbench: one verb-noun subcommand
//! per library operation, JSON on stdout for machine consumption,
//! SVG/DOT for humans, diagnostics on stderr.
//!
//! Exit codes: 0 for success or a valid/clean result, 1 for reported
//! violations, failed searches, or invalid certificates, 2 for usage
//! errors. Every subcommand is deterministic: identical inputs give
//! byte-identical outputs.

mod files;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use files::{
    default_coding, parse_address, parse_alphabet, parse_group, parse_word, read_json, tester,
    word_names, CodingFile, PatchFile, PatternFile, WPatchFile,
};
use forge_core::lab::{self, Budget, Completion, RenderStyle, VerificationReport};
use forge_core::rooted::machine::Machine;
use forge_core::rooted::witness::{witness_build, WitnessParams};
use forge_core::subshift::{
    ball_mimic_codings, reflection_codings, scan_patch, scan_patch_seq, CodingFamily, ScanReport,
};
use forge_core::toeplitz::{
    toeplitz_decode_step, toeplitz_encode, w_rules_check, CouplingViolation, ToeplitzWord,
};
use forge_core::tree::TreeShift;
use forge_core::{cert, rooted, Alphabet, Coding, GroupOracle, Sym};
use serde_json::json;
use std::collections::BTreeMap;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "forge", version, about = "Symbolic-dynamics workbench")]
struct Cli {
    /// Worker threads for parallel checkers; default is sequential.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group oracles: evaluate words, enumerate balls, find geodesics.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Pattern codings and window scans.
    #[command(subcommand)]
    Subshift(SubshiftCmd),
    /// The rerouted-tree labeling and its walks.
    #[command(subcommand, name = "tree-shift")]
    TreeShift(TreeCmd),
    /// Layered patches: tile compilation, witness building, checking.
    #[command(subcommand, name = "rooted-sft")]
    RootedSft(RootedCmd),
    /// Patch workbench: reports, completion search, rendering.
    #[command(subcommand)]
    Lab(LabCmd),
    /// Counting certificates and witness windows.
    #[command(subcommand)]
    Cert(CertCmd),
    /// Toeplitz codings and coupling rule checks.
    #[command(subcommand)]
    Toeplitz(ToeplitzCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Evaluate a comma-separated generator word.
    Eval {
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// List a ball in visit order.
    Ball {
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long)]
        radius: u32,
    },
    /// Minimal word for an element given by its canonical string.
    Geodesic {
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
}

#[derive(Subcommand)]
enum SubshiftCmd {
    /// Enumerate a forbidden-coding family.
    Codings {
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long, default_value = "0,1,*")]
        alphabet: String,
        #[arg(long, default_value = "*")]
        star: String,
        /// Family kind: "reflection" or "ball-mimic".
        #[arg(long)]
        family: String,
        /// Word length cap (reflection) or ball radius (ball-mimic).
        #[arg(long, default_value_t = 3)]
        size: u32,
    },
    /// Scan a pattern window against one coding.
    Scan {
        #[arg(long)]
        pattern_file: String,
        #[arg(long)]
        coding_file: String,
    },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Lay out the labeling on a ball.
    Build {
        #[arg(long)]
        radius: u32,
    },
    /// Lay out and check the labeling constraints.
    Check {
        #[arg(long)]
        radius: u32,
    },
    /// Walk an address from an element through the laid labeling.
    Gamma {
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value = "1")]
        from: String,
        #[arg(long, default_value = "e")]
        address: String,
    },
}

#[derive(Subcommand)]
enum RootedCmd {
    /// Compile the tester machine for a coding (or the built-in
    /// example machine) into a tile set.
    Compile {
        #[arg(long)]
        coding_file: Option<String>,
        /// Base alphabet for the example machine.
        #[arg(long, default_value = "0,1")]
        alphabet: String,
    },
    /// Build a witness patch over the line from a base configuration.
    Witness {
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        depth: usize,
        /// Comma-separated positions carrying the symbol "1".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        ones: String,
        #[arg(long)]
        coding_file: Option<String>,
    },
    /// Run every layer checker on a stored patch.
    Verify {
        patch_file: String,
        #[arg(long)]
        coding_file: Option<String>,
    },
}

#[derive(Subcommand)]
enum LabCmd {
    /// Whole-patch verification report with family tallies.
    Verify {
        patch_file: String,
        #[arg(long)]
        coding_file: Option<String>,
    },
    /// Search completions of the given holes ("element@address").
    Complete {
        patch_file: String,
        #[arg(long)]
        coding_file: Option<String>,
        #[arg(long = "hole", allow_hyphen_values = true)]
        holes: Vec<String>,
        #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long, default_value_t = 400)]
        cell_cap: usize,
    },
    /// Draw a stored patch.
    Render {
        patch_file: String,
        #[arg(long)]
        coding_file: Option<String>,
        /// "svg" or "dot".
        #[arg(long, default_value = "svg")]
        style: String,
        /// Highlight reported cells.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum CertCmd {
    /// Boundary-ratio bound for a cover size, optionally testing a
    /// ratio against it exactly.
    Epsilon {
        #[arg(long)]
        cover_size: u64,
        #[arg(long)]
        num: Option<u64>,
        #[arg(long)]
        den: Option<u64>,
    },
    /// Smallest centered box under a boundary ratio.
    Box {
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long)]
        num: u64,
        #[arg(long)]
        den: u64,
    },
    /// Pigeonhole certificate for line boxes of the given half-side.
    Check {
        #[arg(long)]
        cover_size: u64,
        #[arg(long = "box")]
        box_side: u32,
        #[arg(long, default_value = "z2")]
        group: String,
    },
    /// Build a witness window and scan it against its family.
    Witness {
        /// "reflection" or "ball-mimic".
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 7)]
        window: i64,
    },
}

#[derive(Subcommand)]
enum ToeplitzCmd {
    /// Code a prefix over a window.
    Encode {
        /// Comma-separated symbol names, position order.
        #[arg(long)]
        prefix: String,
        /// Window as "lo:hi".
        #[arg(long, allow_hyphen_values = true)]
        range: String,
    },
    /// Peel the base track off a coded window.
    Decode {
        #[arg(long, allow_hyphen_values = true)]
        lo: i64,
        /// Comma-separated tokens, "$" for blanks.
        #[arg(long)]
        tokens: String,
    },
    /// Check the two coupling rules on a stored two-layer patch.
    Wcheck {
        #[arg(long)]
        file: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(t) = cli.threads {
        if t > 1 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_raw(&text)
}

/// Writes to stdout, treating a closed pipe as a normal early exit.
fn emit_raw(text: &str) -> Result<()> {
    use std::io::Write;
    if let Err(e) = std::io::stdout().write_all(text.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        return Err(e.into());
    }
    Ok(())
}

/// Shared run settings, resolved once before dispatch.
struct RunConfig {
    /// Worker pool size; absent or 1 keeps every checker sequential.
    threads: Option<usize>,
    /// Global cap on search budgets, always positive.
    budget_cap: u64,
}

impl RunConfig {
    fn resolve(threads: Option<usize>) -> RunConfig {
        let budget_cap = std::env::var("FORGE_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
            .map_or(u64::MAX, |v: u64| v.max(1));
        RunConfig { threads, budget_cap }
    }

    fn parallel(&self) -> bool {
        self.threads.is_some_and(|t| t > 1)
    }
}

fn run(cli: Cli) -> Result<u8> {
    let config = RunConfig::resolve(cli.threads);
    match cli.command {
        Command::Group(cmd) => group_cmd(cmd),
        Command::Subshift(cmd) => subshift_cmd(cmd, config.parallel()),
        Command::TreeShift(cmd) => tree_cmd(cmd),
        Command::RootedSft(cmd) => rooted_cmd(cmd),
        Command::Lab(cmd) => lab_cmd(cmd, &config),
        Command::Cert(cmd) => cert_cmd(cmd, config.parallel()),
        Command::Toeplitz(cmd) => toeplitz_cmd(cmd),
    }
}

fn group_cmd(cmd: GroupCmd) -> Result<u8> {
    match cmd {
        GroupCmd::Eval { group, word } => {
            let oracle = parse_group(&group)?;
            let gens = parse_word(&oracle, &word)?;
            let e = oracle.word_eval(&gens)?;
            let min = oracle.min_word(&e);
            emit(&json!({
                "group": group,
                "element": oracle.element_to_string(&e),
                "min_word": word_names(&oracle, &min),
                "length": min.len(),
            }))?;
            Ok(0)
        }
        GroupCmd::Ball { group, radius } => {
            let oracle = parse_group(&group)?;
            let ball: Vec<String> =
                oracle.ball(radius).iter().map(|e| oracle.element_to_string(e)).collect();
            emit(&json!({
                "group": group,
                "radius": radius,
                "size": ball.len(),
                "elements": ball,
            }))?;
            Ok(0)
        }
        GroupCmd::Geodesic { group, element } => {
            let oracle = parse_group(&group)?;
            let e = oracle.element_from_string(&element)?;
            let min = oracle.min_word(&e);
            emit(&json!({
                "group": group,
                "element": oracle.element_to_string(&e),
                "min_word": word_names(&oracle, &min),
                "length": min.len(),
            }))?;
            Ok(0)
        }
    }
}

fn coding_json(oracle: &GroupOracle, alphabet: &Alphabet, c: &Coding) -> serde_json::Value {
    json!(c
        .entries
        .iter()
        .map(|(w, s)| json!({
            "word": word_names(oracle, w),
            "sym": alphabet.name(*s),
        }))
        .collect::<Vec<_>>())
}

fn family_json(
    oracle: &GroupOracle,
    alphabet: &Alphabet,
    kind: &str,
    family: &CodingFamily,
) -> serde_json::Value {
    json!({
        "family": kind,
        "raw_count": family.raw_count,
        "count": family.codings.len(),
        "codings": family
            .codings
            .iter()
            .map(|c| coding_json(oracle, alphabet, c))
            .collect::<Vec<_>>(),
    })
}

fn scan_json(oracle: &GroupOracle, report: &ScanReport) -> serde_json::Value {
    let names = |v: &Vec<forge_core::Element>| {
        v.iter().map(|e| oracle.element_to_string(e)).collect::<Vec<_>>()
    };
    json!({
        "matches": names(&report.matches),
        "undetermined": names(&report.undetermined),
        "refuted": report.refuted,
    })
}

fn subshift_cmd(cmd: SubshiftCmd, parallel: bool) -> Result<u8> {
    match cmd {
        SubshiftCmd::Codings { group, alphabet, star, family, size } => {
            let oracle = parse_group(&group)?;
            let alphabet = parse_alphabet(&alphabet)?;
            let star = alphabet.sym(&star)?;
            let built = match family.as_str() {
                "reflection" => reflection_codings(&oracle, &alphabet, star, size),
                "ball-mimic" => {
                    ball_mimic_codings(&oracle, &alphabet, star, size, 4 * (size + 1))?
                }
                other => bail!("unknown family {other:?}"),
            };
            emit(&family_json(&oracle, &alphabet, &family, &built))?;
            Ok(0)
        }
        SubshiftCmd::Scan { pattern_file, coding_file } => {
            let pf: PatternFile = read_json(&pattern_file)?;
            let (oracle, alphabet, pattern) = pf.load()?;
            let cf: CodingFile = read_json(&coding_file)?;
            let (_, coding) = cf.load(&oracle)?;
            let _ = &alphabet;
            let report = if parallel {
                scan_patch(&oracle, &pattern, &coding)
            } else {
                scan_patch_seq(&oracle, &pattern, &coding)
            };
            emit(&scan_json(&oracle, &report))?;
            Ok(u8::from(!report.matches.is_empty()))
        }
    }
}

fn tree_cmd(cmd: TreeCmd) -> Result<u8> {
    let shift = TreeShift::new();
    let oracle = shift.oracle();
    match cmd {
        TreeCmd::Build { radius } => {
            let patch = shift.tau_build(radius);
            emit(&json!({
                "radius": radius,
                "cells": patch
                    .cells
                    .iter()
                    .map(|(at, letter)| json!({
                        "at": oracle.element_to_string(at),
                        "color": letter.color,
                        "parent": letter.parent.0,
                    }))
                    .collect::<Vec<_>>(),
            }))?;
            Ok(0)
        }
        TreeCmd::Check { radius } => {
            let patch = shift.tau_build(radius);
            let violations = forge_core::tree::check_tree_constraints(&shift, &patch);
            emit(&json!({
                "radius": radius,
                "cells": patch.cells.len(),
                "violations": violations
                    .iter()
                    .map(|v| json!({
                        "rule": v.rule,
                        "at": oracle.element_to_string(&v.at),
                        "detail": v.detail,
                    }))
                    .collect::<Vec<_>>(),
            }))?;
            Ok(u8::from(!violations.is_empty()))
        }
        TreeCmd::Gamma { radius, from, address } => {
            let patch = shift.tau_build(radius);
            let start = oracle.element_from_string(&from)?;
            let bits = parse_address(&address)?;
            let target = patch.gamma(&shift, &start, &bits);
            emit(&json!({
                "from": oracle.element_to_string(&start),
                "address": address,
                "target": target.map(|t| oracle.element_to_string(&t)),
            }))?;
            Ok(0)
        }
    }
}

fn load_tester(
    oracle: &GroupOracle,
    coding_file: &Option<String>,
) -> Result<(Alphabet, Machine, forge_core::rooted::tile::TileSet)> {
    let file = match coding_file {
        Some(path) => read_json(path)?,
        None => default_coding(),
    };
    tester(oracle, &file)
}

fn tiles_json(alphabet: &Alphabet, tiles: &forge_core::rooted::tile::TileSet) -> serde_json::Value {
    json!({
        "states": tiles.state_names,
        "tape": tiles.tape_names,
        "accept": tiles
            .accept
            .iter()
            .map(|q| tiles.state_names[q.0 as usize].clone())
            .collect::<Vec<_>>(),
        "tiles": tiles
            .tiles
            .values()
            .map(|t| json!({
                "name": t.name,
                "bottom": format!("{:?}", t.bottom),
                "top": format!("{:?}", t.top),
                "left": format!("{:?}", t.left),
                "right": format!("{:?}", t.right),
                "squid": t.squid,
                "cond": t.cond.map(|s| alphabet.name(s).to_string()),
                "accepting": tiles.is_accepting(t),
            }))
            .collect::<Vec<_>>(),
    })
}

fn rooted_cmd(cmd: RootedCmd) -> Result<u8> {
    match cmd {
        RootedCmd::Compile { coding_file, alphabet } => {
            let (alphabet, tiles) = match coding_file {
                Some(path) => {
                    let oracle = GroupOracle::lattice(1);
                    let file: CodingFile = read_json(&path)?;
                    let (alphabet, _, tiles) = tester(&oracle, &file)?;
                    (alphabet, tiles)
                }
                None => {
                    let alphabet = parse_alphabet(&alphabet)?;
                    let machine = Machine::example();
                    let tiles = machine.tileset(&alphabet);
                    (alphabet, tiles)
                }
            };
            emit(&tiles_json(&alphabet, &tiles))?;
            Ok(0)
        }
        RootedCmd::Witness { radius, depth, ones, coding_file } => {
            let oracle = GroupOracle::lattice(1);
            let (alphabet, machine, tiles) = load_tester(&oracle, &coding_file)?;
            let zero = alphabet.sym("0").context("witness bases need a \"0\" symbol")?;
            let one = alphabet.sym("1").context("witness bases need a \"1\" symbol")?;
            let mut base: BTreeMap<forge_core::Element, Sym> =
                oracle.ball(radius).into_iter().map(|h| (h, zero)).collect();
            for token in ones.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let at = oracle.element_from_string(token)?;
                if base.insert(at, one).is_none() {
                    bail!("position {token} lies outside the base window");
                }
            }
            let out = witness_build(
                &oracle,
                &alphabet,
                &base,
                &machine,
                &tiles,
                WitnessParams { radius, depth },
            )?;
            emit(&PatchFile::build(&oracle, "z", &alphabet, &out.patch))?;
            Ok(0)
        }
        RootedCmd::Verify { patch_file, coding_file } => {
            let pf: PatchFile = read_json(&patch_file)?;
            let (oracle, alphabet, patch) = pf.load()?;
            let (_, _, tiles) = load_tester(&oracle, &coding_file)?;
            let violations = rooted::verify(&oracle, &patch, &tiles, &alphabet);
            emit(&json!(violations
                .iter()
                .map(|v| json!({
                    "rule": v.rule,
                    "h": oracle.element_to_string(&v.h),
                    "w": v.w.to_string(),
                    "detail": v.detail,
                }))
                .collect::<Vec<_>>()))?;
            Ok(u8::from(!violations.is_empty()))
        }
    }
}

fn report_json(report: &VerificationReport) -> serde_json::Value {
    json!({
        "total": report.len(),
        "families": report.family_counts(),
        "entries": report.entries,
    })
}

fn lab_cmd(cmd: LabCmd, config: &RunConfig) -> Result<u8> {
    match cmd {
        LabCmd::Verify { patch_file, coding_file } => {
            let pf: PatchFile = read_json(&patch_file)?;
            let (oracle, alphabet, patch) = pf.load()?;
            let (_, _, tiles) = load_tester(&oracle, &coding_file)?;
            let report = lab::verify_report(&oracle, &patch, &tiles, &alphabet);
            emit(&report_json(&report))?;
            Ok(u8::from(!report.is_empty()))
        }
        LabCmd::Complete { patch_file, coding_file, holes, budget, cell_cap } => {
            let pf: PatchFile = read_json(&patch_file)?;
            let (oracle, alphabet, patch) = pf.load()?;
            let (_, _, tiles) = load_tester(&oracle, &coding_file)?;
            let mut parsed = Vec::new();
            for hole in &holes {
                let (h, w) = hole
                    .split_once('@')
                    .with_context(|| format!("hole {hole:?}, expected element@address"))?;
                parsed.push((
                    oracle.element_from_string(h)?,
                    forge_core::rooted::Word(parse_address(w)?),
                ));
            }
            let budget = Budget { max_assignments: budget.min(config.budget_cap), cell_cap };
            let outcome = lab::complete(&oracle, &patch, &tiles, &alphabet, &parsed, &budget)?;
            match outcome {
                Completion::Completed { patch: done, stats } => {
                    eprintln!(
                        "completed after {} assignments (complete search: {})",
                        stats.assignments, stats.complete_search
                    );
                    emit(&PatchFile::build(&oracle, &pf.group, &alphabet, &done))?;
                    Ok(0)
                }
                Completion::Exhausted(stats) => {
                    emit(&json!({
                        "exhausted": true,
                        "assignments": stats.assignments,
                        "complete_search": stats.complete_search,
                    }))?;
                    Ok(1)
                }
            }
        }
        LabCmd::Render { patch_file, coding_file, style, check } => {
            let pf: PatchFile = read_json(&patch_file)?;
            let (oracle, alphabet, patch) = pf.load()?;
            let style = match style.as_str() {
                "svg" => RenderStyle::Svg,
                "dot" => RenderStyle::Dot,
                other => bail!("unknown style {other:?}, expected svg or dot"),
            };
            let report = if check {
                let (_, _, tiles) = load_tester(&oracle, &coding_file)?;
                Some(lab::verify_report(&oracle, &patch, &tiles, &alphabet))
            } else {
                None
            };
            emit_raw(&lab::render(&oracle, &patch, style, report.as_ref()))?;
            Ok(0)
        }
    }
}

fn cert_cmd(cmd: CertCmd, parallel: bool) -> Result<u8> {
    match cmd {
        CertCmd::Epsilon { cover_size, num, den } => {
            let bound = cert::epsilon_bound(cover_size)?;
            let ratio = match (num, den) {
                (Some(n), Some(d)) => json!({
                    "num": n,
                    "den": d,
                    "below": cert::epsilon_below_bound(cover_size, n, d)?,
                }),
                (None, None) => serde_json::Value::Null,
                _ => bail!("--num and --den must be given together"),
            };
            emit(&json!({
                "cover_size": cover_size,
                "bound": bound,
                "ratio": ratio,
            }))?;
            Ok(0)
        }
        CertCmd::Box { group, num, den } => {
            let oracle = parse_group(&group)?;
            let found = cert::folner_box(&oracle, num, den)?;
            emit(&json!({
                "group": group,
                "num": num,
                "den": den,
                "box": found,
            }))?;
            Ok(0)
        }
        CertCmd::Check { cover_size, box_side, group } => {
            if group != "z2" {
                bail!("the certificate counts windows over the plane; use --group z2");
            }
            let line = GroupOracle::lattice(1);
            let cells = cert::box_elements(&line, box_side)?;
            let folner = cert::FolnerBox {
                n: box_side,
                size: cells.len() as u64,
                boundary: cert::boundary_size(&line, &cells),
            };
            let certificate = cert::pigeonhole_certificate(cover_size, &folner, &folner)?;
            emit(&certificate)?;
            Ok(u8::from(!certificate.valid))
        }
        CertCmd::Witness { family, seed, window } => {
            let plane = GroupOracle::lattice(2);
            let line = GroupOracle::lattice(1);
            let alphabet = parse_alphabet("0,1,*")?;
            let (zero, one, star) = (Sym(0), Sym(1), Sym(2));
            let (pattern, built, detail) = match family.as_str() {
                "reflection" => {
                    let (g, t, u) = (5i64, 2i64, 2i64);
                    let table = seeded_table(seed, g - t..=g + t, -u..=u);
                    let p = cert::reflection_witness(
                        &plane, &table, g, t, u, window, zero, one, star,
                    )?;
                    let family = reflection_codings(&line, &alphabet, star, window as u32);
                    (p, family, json!({"g": g, "t_radius": t, "u_radius": u}))
                }
                "ball-mimic" => {
                    let (n, u) = (2i64, 2i64);
                    let table = seeded_table(seed, -n..=n, -u..=u);
                    let (p, pair) = cert::ball_mimic_witness(
                        &plane, &line, &table, n, u, window, zero, one, star,
                    )?;
                    let family =
                        ball_mimic_codings(&line, &alphabet, star, n as u32, 4 * (n as u32 + 1))?;
                    (p, family, json!({"pair": pair, "ball_radius": n, "u_radius": u}))
                }
                other => bail!("unknown family {other:?}"),
            };
            let mut matches = 0usize;
            let mut undetermined = 0usize;
            for coding in &built.codings {
                let report = if parallel {
                    scan_patch(&plane, &pattern, coding)
                } else {
                    scan_patch_seq(&plane, &pattern, coding)
                };
                matches += report.matches.len();
                undetermined += report.undetermined.len();
            }
            emit(&json!({
                "family": family,
                "seed": seed,
                "window": window,
                "parameters": detail,
                "codings": built.codings.len(),
                "matches": matches,
                "undetermined": undetermined,
                "pattern": PatternFile::build(&plane, "z2", &alphabet, &pattern),
            }))?;
            Ok(u8::from(matches != 0))
        }
    }
}

/// Deterministic bit table for witness demos, from a mixed counter.
fn seeded_table(
    seed: u64,
    hs: std::ops::RangeInclusive<i64>,
    ks: std::ops::RangeInclusive<i64>,
) -> BTreeMap<(i64, i64), bool> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
    let mut next = || {
        state ^= state >> 30;
        state = state.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        state ^= state >> 27;
        state = state.wrapping_mul(0x94D0_49BB_1331_11EB);
        state ^ (state >> 31)
    };
    let mut out = BTreeMap::new();
    for h in hs {
        for k in ks.clone() {
            out.insert((h, k), next() & 1 == 1);
        }
    }
    out
}

fn toeplitz_cmd(cmd: ToeplitzCmd) -> Result<u8> {
    match cmd {
        ToeplitzCmd::Encode { prefix, range } => {
            let names: Vec<&str> = prefix.split(',').map(str::trim).collect();
            let mut sorted: Vec<&str> = names.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let alphabet = Alphabet::new(sorted)?;
            let syms = names
                .iter()
                .map(|n| Ok(alphabet.sym(n)?))
                .collect::<Result<Vec<Sym>>>()?;
            let (lo, hi) = range
                .split_once(':')
                .context("range must look like lo:hi")?;
            let (lo, hi) = (lo.trim().parse()?, hi.trim().parse()?);
            let word = toeplitz_encode(&syms, lo, hi)?;
            emit(&json!({
                "lo": word.lo,
                "hi": word.hi(),
                "non_blank": word.non_blank(),
                "tokens": word.tokens(&alphabet),
            }))?;
            Ok(0)
        }
        ToeplitzCmd::Decode { lo, tokens } => {
            let tokens: Vec<&str> = tokens.split(',').map(str::trim).collect();
            let mut names: Vec<&str> = tokens.iter().copied().filter(|t| *t != "$").collect();
            names.sort_unstable();
            names.dedup();
            if names.is_empty() {
                bail!("window carries no symbols at all");
            }
            let alphabet = Alphabet::new(names)?;
            let cells = tokens
                .iter()
                .map(|t| {
                    if *t == "$" {
                        Ok(None)
                    } else {
                        Ok(Some(alphabet.sym(t)?))
                    }
                })
                .collect::<Result<Vec<Option<Sym>>>>()?;
            let word = ToeplitzWord { lo, cells };
            let (base, rest) = toeplitz_decode_step(&word)?;
            emit(&json!({
                "base": alphabet.name(base),
                "window": {
                    "lo": rest.lo,
                    "hi": rest.hi(),
                    "tokens": rest.tokens(&alphabet),
                },
            }))?;
            Ok(0)
        }
        ToeplitzCmd::Wcheck { file } => {
            let wf: WPatchFile = read_json(&file)?;
            let (h_oracle, n_oracle, patch) = wf.load()?;
            let violations = w_rules_check(&h_oracle, &n_oracle, &patch);
            let rows: Vec<serde_json::Value> = violations
                .iter()
                .map(|CouplingViolation { rule, location, detail }| {
                    json!({"rule": rule, "location": location, "detail": detail})
                })
                .collect();
            emit(&json!({ "total": rows.len(), "violations": rows }))?;
            Ok(u8::from(!violations.is_empty()))
        }
    }
}

