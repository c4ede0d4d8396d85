//! Counting certificates that a forbidden-coding family admits no
//! finite cover description, plus the explicit witness windows the
//! argument counts.
//!
//! The chain is: a cover with `b` symbols would transport patterns
//! across a boundary of size `|∂(T×U)|`, so it can distinguish at most
//! `b^|∂(T×U)|` classes; the family supplies `2^{|T||U|}` windows that
//! must all land in distinct classes. Whenever the boxes are thin
//! enough, measured against the bound on `ε` below, the pigeonhole
//! closes the argument. All comparisons here are exact integer
//! arithmetic; floating point only appears in the convenience bound.

use crate::group::{Element, GenSym, GroupOracle, GroupSpec};
use crate::subshift::{Pattern, SubshiftError, Sym};
use num_bigint::BigUint;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("cover needs at least two symbols, got {0}")]
    CoverTooSmall(u64),
    #[error("cover must be nonempty")]
    EmptyCover,
    #[error("ratio denominator must be nonzero")]
    ZeroDenominator,
    #[error("ratio {num}/{den} is too large for exact exponentiation")]
    RatioTooLarge { num: u64, den: u64 },
    #[error("fitting boxes require a lattice group, got {0}")]
    UnsupportedGroup(String),
    #[error("no box with boundary ratio {num}/{den} within side limit {cap}")]
    BoxBudget { num: u64, den: u64, cap: u32 },
    #[error("window radius {got} too small, the construction needs {needed}")]
    WindowTooSmall { needed: i64, got: i64 },
    #[error("bad witness input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Subshift(#[from] SubshiftError),
}

/// Strict upper bound on usable boundary ratios for a cover of `b`
/// symbols: sqrt(1 + log 2 / log b) - 1, the positive root of
/// 2e + e^2 = log 2 / log b.
pub fn epsilon_bound(cover_size: u64) -> Result<f64, CertError> {
    if cover_size < 2 {
        return Err(CertError::CoverTooSmall(cover_size));
    }
    Ok((1.0 + std::f64::consts::LN_2 / (cover_size as f64).ln()).sqrt() - 1.0)
}

/// Exact form of `num/den < epsilon_bound(cover_size)`: with e = n/d the
/// inequality 2e + e^2 < log 2 / log b is equivalent to
/// b^(2nd + n^2) < 2^(d^2), which is decided in exact arithmetic.
pub fn epsilon_below_bound(cover_size: u64, num: u64, den: u64) -> Result<bool, CertError> {
    if cover_size < 2 {
        return Err(CertError::CoverTooSmall(cover_size));
    }
    if den == 0 {
        return Err(CertError::ZeroDenominator);
    }
    let lhs_exp = 2u128 * num as u128 * den as u128 + (num as u128).pow(2);
    let rhs_exp = (den as u128).pow(2);
    let (Ok(lhs_exp), Ok(rhs_exp)) = (u32::try_from(lhs_exp), u32::try_from(rhs_exp)) else {
        return Err(CertError::RatioTooLarge { num, den });
    };
    let lhs = BigUint::from(cover_size).pow(lhs_exp);
    let rhs = BigUint::from(2u32).pow(rhs_exp);
    Ok(lhs < rhs)
}

/// A centered box whose step-one boundary is small relative to its
/// size: |boundary| * den <= num * |size|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FolnerBox {
    /// Half-side: the box is {-n..n}^dim.
    pub n: u32,
    pub size: u64,
    pub boundary: u64,
}

/// Elements of the centered box {-n..n}^dim, built by generator walks.
pub fn box_elements(oracle: &GroupOracle, n: u32) -> Result<Vec<Element>, CertError> {
    let GroupSpec::Lattice { dim } = oracle.spec() else {
        return Err(CertError::UnsupportedGroup(format!("{:?}", oracle.spec())));
    };
    let mut cells = vec![oracle.identity()];
    for axis in 0..*dim {
        let plus = GenSym(2 * axis as u32 + 1);
        let minus = GenSym(2 * axis as u32 + 2);
        let mut next = Vec::with_capacity(cells.len() * (2 * n as usize + 1));
        for e in cells {
            let mut fwd = e.clone();
            let mut bwd = e.clone();
            next.push(e);
            for _ in 0..n {
                fwd = oracle.mul_gen(&fwd, plus);
                bwd = oracle.mul_gen(&bwd, minus);
                next.push(fwd.clone());
                next.push(bwd.clone());
            }
        }
        cells = next;
    }
    Ok(cells)
}

/// Size of the step-one boundary of `cells`: elements reachable from
/// the set by one generator that are not already in it, counted by
/// enumeration.
pub fn boundary_size(oracle: &GroupOracle, cells: &[Element]) -> u64 {
    let inside: BTreeSet<&Element> = cells.iter().collect();
    let mut outside: BTreeSet<Element> = BTreeSet::new();
    for e in cells {
        for s in oracle.proper_gens() {
            let t = oracle.mul_gen(e, s);
            if !inside.contains(&t) {
                outside.insert(t);
            }
        }
    }
    outside.len() as u64
}

const BOX_SIDE_CAP: u32 = 4096;

/// Smallest centered box whose boundary ratio is at most num/den.
pub fn folner_box(oracle: &GroupOracle, num: u64, den: u64) -> Result<FolnerBox, CertError> {
    if den == 0 {
        return Err(CertError::ZeroDenominator);
    }
    for n in 0..=BOX_SIDE_CAP {
        let cells = box_elements(oracle, n)?;
        let boundary = boundary_size(oracle, &cells);
        let size = cells.len() as u64;
        if boundary as u128 * den as u128 <= num as u128 * size as u128 {
            return Ok(FolnerBox { n, size, boundary });
        }
    }
    Err(CertError::BoxBudget { num, den, cap: BOX_SIDE_CAP })
}

/// The full counting certificate for one pair of boxes. Validity means
/// strictly more windows than transportable classes:
/// 2^(t.size * u.size) > cover_size^product_boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub cover_size: u64,
    pub t: FolnerBox,
    pub u: FolnerBox,
    /// |boundary(T x U)| = |bT||U| + |bU||T| + |bT||bU|.
    pub product_boundary: u64,
    /// |T||U|, the exponent of the window count 2^(|T||U|).
    pub window_exponent: u64,
    pub valid: bool,
}

pub fn pigeonhole_certificate(
    cover_size: u64,
    t: &FolnerBox,
    u: &FolnerBox,
) -> Result<Certificate, CertError> {
    if cover_size == 0 {
        return Err(CertError::EmptyCover);
    }
    let product_boundary_wide =
        t.boundary as u128 * u.size as u128 + u.boundary as u128 * t.size as u128
            + t.boundary as u128 * u.boundary as u128;
    let window_exponent_wide = t.size as u128 * u.size as u128;
    let (Ok(product_boundary), Ok(window_exponent)) = (
        u32::try_from(product_boundary_wide),
        u32::try_from(window_exponent_wide),
    ) else {
        return Err(CertError::RatioTooLarge { num: t.size, den: u.size });
    };
    let windows = BigUint::from(2u32).pow(window_exponent);
    let classes = BigUint::from(cover_size).pow(product_boundary);
    let valid = windows > classes;
    if cover_size.is_power_of_two() {
        let log = cover_size.trailing_zeros() as u64;
        debug_assert_eq!(
            valid,
            window_exponent as u64 > log * product_boundary as u64,
            "exponent comparison must agree with the exact one"
        );
    }
    Ok(Certificate {
        cover_size,
        t: *t,
        u: *u,
        product_boundary: product_boundary as u64,
        window_exponent: window_exponent as u64,
        valid,
    })
}

fn plane_cell(oracle: &GroupOracle, x: i64, y: i64) -> Element {
    oracle
        .element_from_string(&format!("{x},{y}"))
        .expect("coordinates form a plane cell")
}

fn require_plane(oracle: &GroupOracle) -> Result<(), CertError> {
    match oracle.spec() {
        GroupSpec::Lattice { dim: 2 } => Ok(()),
        other => Err(CertError::UnsupportedGroup(format!("{other:?}"))),
    }
}

fn check_table(
    p: &BTreeMap<(i64, i64), bool>,
    hs: impl Iterator<Item = i64> + Clone,
    ks: impl Iterator<Item = i64> + Clone,
    what: &str,
) -> Result<(), CertError> {
    let mut expect = 0usize;
    for h in hs {
        for k in ks.clone() {
            expect += 1;
            if !p.contains_key(&(h, k)) {
                return Err(CertError::BadInput(format!(
                    "{what} table misses cell ({h}, {k})"
                )));
            }
        }
    }
    if p.len() != expect {
        return Err(CertError::BadInput(format!(
            "{what} table has {} cells, expected {expect}",
            p.len()
        )));
    }
    Ok(())
}

/// Window of the mirror witness for the table `p` on {g-t..g+t} x U:
/// the column h = 0 carries the hole symbol, the band around g carries
/// p, the band around -g carries the mirror copy p(-h, k), and
/// everything else is `zero`. Every mirror-family coding is refuted on
/// such a window, yet distinct tables give distinct windows.
#[allow(clippy::too_many_arguments)]
pub fn reflection_witness(
    oracle: &GroupOracle,
    p: &BTreeMap<(i64, i64), bool>,
    g: i64,
    t_radius: i64,
    u_radius: i64,
    window: i64,
    zero: Sym,
    one: Sym,
    star: Sym,
) -> Result<Pattern, CertError> {
    require_plane(oracle)?;
    if t_radius < 0 || u_radius < 0 {
        return Err(CertError::BadInput("radii must be nonnegative".to_string()));
    }
    if g - t_radius < 1 {
        return Err(CertError::BadInput(
            "translated band must sit strictly right of the origin".to_string(),
        ));
    }
    let needed = (g + t_radius).max(u_radius);
    if window < needed {
        return Err(CertError::WindowTooSmall { needed, got: window });
    }
    check_table(
        p,
        g - t_radius..=g + t_radius,
        -u_radius..=u_radius,
        "witness",
    )?;
    let bit = |b: bool| if b { one } else { zero };
    let mut out = Pattern::new();
    for h in -window..=window {
        for k in -window..=window {
            let sym = if h == 0 {
                star
            } else if (g - t_radius..=g + t_radius).contains(&h) && k.abs() <= u_radius {
                bit(p[&(h, k)])
            } else if (g - t_radius..=g + t_radius).contains(&-h) && k.abs() <= u_radius {
                bit(p[&(-h, k)])
            } else {
                zero
            };
            out.set(plane_cell(oracle, h, k), sym);
        }
    }
    Ok(out)
}

/// Window of the ball-copy witness for the table `p` on T x U with
/// T = {-n..n}: the column h = 0 carries the hole symbol and both
/// translated bands a+T and b+T carry the same copy of p, with (a, b)
/// the first disjoint ball pair on the line. Returns the window and
/// the pair.
#[allow(clippy::too_many_arguments)]
pub fn ball_mimic_witness(
    oracle: &GroupOracle,
    line: &GroupOracle,
    p: &BTreeMap<(i64, i64), bool>,
    n: i64,
    u_radius: i64,
    window: i64,
    zero: Sym,
    one: Sym,
    star: Sym,
) -> Result<(Pattern, (i64, i64)), CertError> {
    require_plane(oracle)?;
    if n < 0 || u_radius < 0 {
        return Err(CertError::BadInput("radii must be nonnegative".to_string()));
    }
    let pairs = crate::subshift::disjoint_ball_centers(line, n as u32, 1, 4 * (n as u32 + 1))?;
    let (a, b) = &pairs[0];
    let a: i64 = line
        .element_to_string(a)
        .parse()
        .map_err(|_| CertError::BadInput("line element is not an integer".to_string()))?;
    let b: i64 = line
        .element_to_string(b)
        .parse()
        .map_err(|_| CertError::BadInput("line element is not an integer".to_string()))?;
    let needed = (a.abs() + n).max(b.abs() + n).max(u_radius);
    if window < needed {
        return Err(CertError::WindowTooSmall { needed, got: window });
    }
    check_table(p, -n..=n, -u_radius..=u_radius, "witness")?;
    let bit = |b: bool| if b { one } else { zero };
    let mut out = Pattern::new();
    for h in -window..=window {
        for k in -window..=window {
            let sym = if h == 0 {
                star
            } else if (h - a).abs() <= n && k.abs() <= u_radius {
                bit(p[&(h - a, k)])
            } else if (h - b).abs() <= n && k.abs() <= u_radius {
                bit(p[&(h - b, k)])
            } else {
                zero
            };
            out.set(plane_cell(oracle, h, k), sym);
        }
    }
    Ok((out, (a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::{ball_mimic_codings, reflection_codings, scan_patch, Alphabet};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line() -> GroupOracle {
        GroupOracle::lattice(1)
    }

    fn plane() -> GroupOracle {
        GroupOracle::lattice(2)
    }

    #[test]
    fn bound_matches_closed_forms() {
        // log 2 / log 2 = 1 gives the positive root of 2e + e^2 = 1.
        let b2 = epsilon_bound(2).unwrap();
        assert!((b2 - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        // log 2 / log 4 = 1/2 likewise.
        let b4 = epsilon_bound(4).unwrap();
        assert!((b4 - (1.5f64.sqrt() - 1.0)).abs() < 1e-14);
        let mut prev = b2;
        for b in 3..=64 {
            let cur = epsilon_bound(b).unwrap();
            assert!(cur < prev, "bound must shrink as the cover grows");
            prev = cur;
        }
        assert!(matches!(epsilon_bound(1), Err(CertError::CoverTooSmall(1))));
        assert!(matches!(epsilon_bound(0), Err(CertError::CoverTooSmall(0))));
    }

    #[test]
    fn exact_threshold_brackets_the_float_bound() {
        assert!(epsilon_below_bound(2, 41, 100).unwrap());
        assert!(!epsilon_below_bound(2, 42, 100).unwrap());
        assert!(epsilon_below_bound(4, 22, 100).unwrap());
        assert!(!epsilon_below_bound(4, 23, 100).unwrap());
        for b in 2..=16u64 {
            let bound = epsilon_bound(b).unwrap();
            let den = 1000u64;
            let at = (bound * den as f64).floor() as u64;
            assert!(epsilon_below_bound(b, at - 2, den).unwrap());
            assert!(!epsilon_below_bound(b, at + 2, den).unwrap());
        }
        assert!(matches!(
            epsilon_below_bound(2, 1, 0),
            Err(CertError::ZeroDenominator)
        ));
    }

    /// Rational interval enclosing ln(x), from the arctanh series at
    /// (x-1)/(x+1) with an explicit geometric tail bound.
    fn ln_interval(x: u64, terms: u32) -> (BigRational, BigRational) {
        assert!(x >= 2);
        let ratio = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let y = ratio(x as i64 - 1, x as i64 + 1);
        let y2 = &y * &y;
        let mut sum = ratio(0, 1);
        let mut pow = y.clone();
        for k in 0..terms {
            sum += &pow / BigRational::from(BigInt::from(2 * k as i64 + 1));
            pow *= &y2;
        }
        let tail = &pow
            / ((BigRational::from(BigInt::from(1)) - &y2)
                * BigRational::from(BigInt::from(2 * terms as i64 + 1)));
        let two = BigRational::from(BigInt::from(2));
        (&two * &sum, &two * (&sum + &tail))
    }

    #[test]
    fn exact_threshold_agrees_with_interval_logarithms() {
        let (ln2_lo, ln2_hi) = ln_interval(2, 80);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let b = rng.gen_range(2..=16u64);
            let den = rng.gen_range(1..=60u64);
            let num = rng.gen_range(0..den);
            let (lnb_lo, lnb_hi) = ln_interval(b, 80);
            let lhs = BigRational::from(BigInt::from((2 * num * den + num * num) as i64));
            let rhs = BigRational::from(BigInt::from((den * den) as i64));
            let below = if &lhs * &lnb_hi < &rhs * &ln2_lo {
                true
            } else if &lhs * &lnb_lo > &rhs * &ln2_hi {
                false
            } else {
                panic!("interval too coarse for {num}/{den} against cover {b}");
            };
            assert_eq!(
                epsilon_below_bound(b, num, den).unwrap(),
                below,
                "disagreement at {num}/{den}, cover {b}"
            );
        }
    }

    #[test]
    fn line_boxes_have_frozen_sizes() {
        let oracle = line();
        let fat = folner_box(&oracle, 41, 100).unwrap();
        assert_eq!((fat.n, fat.size, fat.boundary), (2, 5, 2));
        let thin = folner_box(&oracle, 1, 10).unwrap();
        assert_eq!((thin.n, thin.size, thin.boundary), (10, 21, 2));
    }

    #[test]
    fn plane_box_boundary_is_the_four_edge_strips() {
        let oracle = plane();
        for n in 0..4u32 {
            let cells = box_elements(&oracle, n).unwrap();
            assert_eq!(cells.len() as u64, ((2 * n + 1) as u64).pow(2));
            assert_eq!(boundary_size(&oracle, &cells), 8 * n as u64 + 4);
            // Boxes are inverse-closed.
            for e in &cells {
                assert!(cells.contains(&oracle.inverse(e)));
            }
        }
        let found = folner_box(&oracle, 1, 2).unwrap();
        assert_eq!((found.n, found.size, found.boundary), (4, 81, 36));
    }

    #[test]
    fn free_group_has_no_boxes() {
        let oracle = GroupOracle::free(2);
        assert!(matches!(
            folner_box(&oracle, 1, 2),
            Err(CertError::UnsupportedGroup(_))
        ));
    }

    #[test]
    fn pigeonhole_frozen_examples() {
        let oracle = line();
        let five = folner_box(&oracle, 41, 100).unwrap();
        let cert = pigeonhole_certificate(2, &five, &five).unwrap();
        assert_eq!(cert.window_exponent, 25);
        assert_eq!(cert.product_boundary, 24);
        assert!(cert.valid);
        let three = FolnerBox { n: 1, size: 3, boundary: 2 };
        let small = pigeonhole_certificate(2, &three, &three).unwrap();
        assert_eq!(small.window_exponent, 9);
        assert_eq!(small.product_boundary, 16);
        assert!(!small.valid);
        let trivial = pigeonhole_certificate(1, &three, &three).unwrap();
        assert!(trivial.valid, "a one-symbol cover distinguishes nothing");
        assert!(matches!(
            pigeonhole_certificate(0, &three, &three),
            Err(CertError::EmptyCover)
        ));
    }

    #[test]
    fn boxes_below_the_bound_always_certify() {
        let oracle = line();
        for b in 2..=16u64 {
            let bound = epsilon_bound(b).unwrap();
            let den = 1000u64;
            let num = (bound * den as f64).floor() as u64 - 1;
            assert!(epsilon_below_bound(b, num, den).unwrap());
            let boxed = folner_box(&oracle, num, den).unwrap();
            let cert = pigeonhole_certificate(b, &boxed, &boxed).unwrap();
            assert!(cert.valid, "cover {b} with box side {}", boxed.n);
        }
    }

    fn syms() -> (Alphabet, Sym, Sym, Sym) {
        let alphabet = Alphabet::new(["0", "1", "*"]).unwrap();
        (alphabet, Sym(0), Sym(1), Sym(2))
    }

    fn random_table(
        rng: &mut ChaCha8Rng,
        hs: impl Iterator<Item = i64> + Clone,
        ks: impl Iterator<Item = i64>,
    ) -> BTreeMap<(i64, i64), bool> {
        let mut out = BTreeMap::new();
        for k in ks {
            for h in hs.clone() {
                out.insert((h, k), rng.gen_bool(0.5));
            }
        }
        out
    }

    #[test]
    fn mirror_witness_refutes_the_whole_family() {
        let (alphabet, zero, one, star) = syms();
        let plane = plane();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_table(&mut rng, 3..=7, -2..=2);
        let w = reflection_witness(&plane, &p, 5, 2, 2, 7, zero, one, star).unwrap();
        assert_eq!(w.cells.len(), 15 * 15);
        // The window reproduces the table and its mirror image.
        for (&(h, k), &bit) in &p {
            let sym = if bit { one } else { zero };
            assert_eq!(w.get(&plane_cell(&plane, h, k)), Some(sym));
            assert_eq!(w.get(&plane_cell(&plane, -h, k)), Some(sym));
        }
        for k in -7..=7 {
            assert_eq!(w.get(&plane_cell(&plane, 0, k)), Some(star));
        }
        let family = reflection_codings(&line(), &alphabet, star, 7);
        assert!(!family.codings.is_empty());
        for coding in &family.codings {
            let report = scan_patch(&plane, &w, coding);
            assert!(report.matches.is_empty(), "a valid window never matches");
        }
    }

    #[test]
    fn mirror_witness_mutation_is_detected() {
        let (alphabet, zero, one, star) = syms();
        let plane = plane();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = random_table(&mut rng, 3..=7, -2..=2);
        let mut w = reflection_witness(&plane, &p, 5, 2, 2, 7, zero, one, star).unwrap();
        // Break the mirror copy at one cell.
        let broken = if p[&(5, 0)] { zero } else { one };
        w.set(plane_cell(&plane, -5, 0), broken);
        let family = reflection_codings(&line(), &alphabet, star, 7);
        let hits: usize = family
            .codings
            .iter()
            .map(|c| scan_patch(&plane, &w, c).matches.len())
            .sum();
        assert!(hits > 0, "a one-cell mismatch must match some coding");
    }

    #[test]
    fn mirror_witness_validates_its_inputs() {
        let (_, zero, one, star) = syms();
        let plane = plane();
        let p = BTreeMap::from([((1, 0), true)]);
        assert!(matches!(
            reflection_witness(&plane, &p, 1, 0, 0, 0, zero, one, star),
            Err(CertError::WindowTooSmall { needed: 1, got: 0 })
        ));
        assert!(matches!(
            reflection_witness(&plane, &p, 1, 1, 0, 7, zero, one, star),
            Err(CertError::BadInput(_))
        ));
        assert!(matches!(
            reflection_witness(&line(), &p, 1, 0, 0, 7, zero, one, star),
            Err(CertError::UnsupportedGroup(_))
        ));
    }

    #[test]
    fn ball_copy_witness_refutes_the_whole_family() {
        let (alphabet, zero, one, star) = syms();
        let plane = plane();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random_table(&mut rng, -2..=2, -2..=2);
        let (w, (a, b)) =
            ball_mimic_witness(&plane, &line(), &p, 2, 2, 7, zero, one, star).unwrap();
        assert_eq!((a, b), (3, -3), "first disjoint pair on the line");
        assert_eq!(w.cells.len(), 15 * 15);
        for (&(t, k), &bit) in &p {
            let sym = if bit { one } else { zero };
            assert_eq!(w.get(&plane_cell(&plane, a + t, k)), Some(sym));
            assert_eq!(w.get(&plane_cell(&plane, b + t, k)), Some(sym));
        }
        let family = ball_mimic_codings(&line(), &alphabet, star, 2, 8).unwrap();
        assert!(!family.codings.is_empty());
        for coding in &family.codings {
            let report = scan_patch(&plane, &w, coding);
            assert!(report.matches.is_empty(), "a valid window never matches");
        }
    }

    #[test]
    fn distinct_tables_differ_exactly_on_both_copies() {
        let (_, zero, one, star) = syms();
        let plane = plane();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = random_table(&mut rng, -2..=2, -2..=2);
        let mut q = p.clone();
        let flips = [(-2, 1), (0, 0), (2, -2)];
        for cell in flips {
            q.insert(cell, !p[&cell]);
        }
        let (wp, pair) =
            ball_mimic_witness(&plane, &line(), &p, 2, 2, 7, zero, one, star).unwrap();
        let (wq, _) = ball_mimic_witness(&plane, &line(), &q, 2, 2, 7, zero, one, star).unwrap();
        let mut expect = BTreeSet::new();
        for (t, k) in flips {
            expect.insert(plane_cell(&plane, pair.0 + t, k));
            expect.insert(plane_cell(&plane, pair.1 + t, k));
        }
        let differ: BTreeSet<Element> = wp
            .cells
            .iter()
            .filter(|(at, sym)| wq.get(at) != Some(**sym))
            .map(|(at, _)| at.clone())
            .collect();
        assert_eq!(differ, expect);
    }

    #[test]
    fn ball_copy_witness_validates_its_window() {
        let (_, zero, one, star) = syms();
        let plane = plane();
        let p = random_table(&mut ChaCha8Rng::seed_from_u64(9), -2..=2, -2..=2);
        assert!(matches!(
            ball_mimic_witness(&plane, &line(), &p, 2, 2, 4, zero, one, star),
            Err(CertError::WindowTooSmall { needed: 5, got: 4 })
        ));
    }
}
