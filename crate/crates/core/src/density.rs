//! Følner sequences in `(Q,+)`, finite-horizon density statistics and
//! verification of arithmetic-progression witnesses.
//!
//! Nothing here claims a limit: densities are reported exactly for each
//! `n` up to a horizon, and searches report absence only relative to the
//! candidates they were given.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

/// A sequence of finite nonempty sets `F_1, F_2, ...` of rationals.
pub trait FolnerSequence: Sync {
    /// The elements of `F_n`, without repetition.
    fn set(&self, n: u64) -> Vec<Rational>;

    /// Membership in `F_n`.
    fn contains(&self, n: u64, x: &Rational) -> bool;
}

/// `F_n = {k/n! : 0 <= k < n·n!}`, the grid of mesh `1/n!` on `[0, n)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StandardFolner;

fn horizon_factorial(n: u64) -> BigInt {
    factorial(u32::try_from(n).expect("horizon fits in u32"))
}

impl FolnerSequence for StandardFolner {
    fn set(&self, n: u64) -> Vec<Rational> {
        standard_folner(n)
    }

    fn contains(&self, n: u64, x: &Rational) -> bool {
        let fact = horizon_factorial(n);
        let scaled = x.scale(&fact);
        scaled.is_integer() && !scaled.is_negative() && scaled.numer() < &(fact * BigInt::from(n))
    }
}

/// A Følner sequence given by explicit sets, `sets[0]` being `F_1`.
#[derive(Clone, Debug, Default)]
pub struct ExplicitFolner {
    sets: Vec<(Vec<Rational>, HashSet<Rational>)>,
}

impl ExplicitFolner {
    pub fn new(sets: Vec<Vec<Rational>>) -> Result<Self> {
        let sets = sets
            .into_iter()
            .enumerate()
            .map(|(i, elems)| {
                let lookup: HashSet<Rational> = elems.iter().cloned().collect();
                if lookup.is_empty() {
                    return Err(Error::InvalidArgument(format!("F_{} is empty", i + 1)));
                }
                let mut elems = lookup.iter().cloned().collect::<Vec<_>>();
                elems.sort();
                Ok((elems, lookup))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExplicitFolner { sets })
    }

    pub fn horizon(&self) -> u64 {
        self.sets.len() as u64
    }
}

impl FolnerSequence for ExplicitFolner {
    fn set(&self, n: u64) -> Vec<Rational> {
        self.sets[(n - 1) as usize].0.clone()
    }

    fn contains(&self, n: u64, x: &Rational) -> bool {
        self.sets[(n - 1) as usize].1.contains(x)
    }
}

/// `{k/n! : 0 <= k < n·n!}`; `|F_n| = n·n!`.
pub fn standard_folner(n: u64) -> Vec<Rational> {
    assert!(n >= 1, "Følner index starts at 1");
    let fact = horizon_factorial(n);
    let count = &fact * BigInt::from(n);
    let mut out = Vec::new();
    let mut k = BigInt::zero();
    while k < count {
        out.push(Rational::new(k.clone(), fact.clone()).expect("n! > 0"));
        k += 1;
    }
    out
}

/// `|(s + F_n) △ F_n| / |F_n|`, which lies in `[0, 2]`.
pub fn folner_defect<F: FolnerSequence + ?Sized>(seq: &F, n: u64, s: &Rational) -> Rational {
    let elems = seq.set(n);
    let stay = elems
        .par_iter()
        .filter(|x| seq.contains(n, &(*x + s)))
        .count();
    // |s + F| = |F|, so the symmetric difference is twice what leaves.
    let size = elems.len() as u64;
    Rational::new(2 * (size - stay as u64), size).expect("F_n is nonempty")
}

fn count_hits<P>(member: &P, elems: &[Rational], shift: Option<&Rational>) -> u64
where
    P: Fn(&Rational) -> bool + Sync,
{
    elems
        .par_iter()
        .filter(|x| match shift {
            Some(q) => member(&(q + *x)),
            None => member(x),
        })
        .count() as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRow {
    pub n: u64,
    pub size: u64,
    pub hits: u64,
    /// `|A ∩ F_n| / |F_n|`.
    pub ratio: Rational,
    /// Largest ratio over this row and every later reported row.
    pub tail_sup: Rational,
}

/// Exact `|A ∩ F_n| / |F_n|` for `n = 1..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub rows: Vec<DensityRow>,
}

impl DensityReport {
    pub fn to_table(&self) -> String {
        let header = ["n", "|F_n|", "|A∩F_n|", "ratio", "tail_sup"];
        let cells: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.n.to_string(),
                    r.size.to_string(),
                    r.hits.to_string(),
                    r.ratio.to_string(),
                    r.tail_sup.to_string(),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..5)
            .map(|c| {
                cells
                    .iter()
                    .map(|row| row[c].chars().count())
                    .chain(std::iter::once(header[c].chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let mut line = |row: &[&str]| {
            let padded: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}", w = w))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&header);
        for row in &cells {
            line(&row.iter().map(String::as_str).collect::<Vec<_>>());
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,size,hits,ratio,tail_sup\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.n, r.size, r.hits, r.ratio, r.tail_sup);
        }
        out
    }
}

pub fn upper_density_report<P, F>(member: P, seq: &F, n_max: u64) -> Result<DensityReport>
where
    P: Fn(&Rational) -> bool + Sync,
    F: FolnerSequence + ?Sized,
{
    if n_max == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let mut rows: Vec<DensityRow> = (1..=n_max)
        .map(|n| {
            let elems = seq.set(n);
            let size = elems.len() as u64;
            let hits = count_hits(&member, &elems, None);
            let ratio = Rational::new(hits, size).expect("F_n is nonempty");
            DensityRow {
                n,
                size,
                hits,
                tail_sup: ratio.clone(),
                ratio,
            }
        })
        .collect();
    for i in (0..rows.len().saturating_sub(1)).rev() {
        if rows[i + 1].tail_sup > rows[i].tail_sup {
            rows[i].tail_sup = rows[i + 1].tail_sup.clone();
        }
    }
    Ok(DensityReport { rows })
}

/// `max_q |A ∩ (q + F_n)| / |F_n|` over the given shifts: a certified
/// lower bound for the shifted density at horizon `n`.
pub fn banach_lower_bound<P, F>(member: P, seq: &F, n: u64, shifts: &[Rational]) -> Result<Rational>
where
    P: Fn(&Rational) -> bool + Sync,
    F: FolnerSequence + ?Sized,
{
    if shifts.is_empty() {
        return Err(Error::InvalidArgument("need at least one shift".into()));
    }
    let elems = seq.set(n);
    let best = shifts
        .iter()
        .map(|q| count_hits(&member, &elems, Some(q)))
        .max()
        .expect("shifts nonempty");
    Ok(Rational::new(best, elems.len() as u64).expect("F_n is nonempty"))
}

/// The first `(p, q)`, scanning `p` candidates in order and, for each, `q`
/// candidates in order, with `p + j q ∈ A` for every `0 <= j <= k`.
pub fn ap_search<P>(
    member: P,
    k: u64,
    p_candidates: &[Rational],
    q_candidates: &[Rational],
) -> Result<Option<(Rational, Rational)>>
where
    P: Fn(&Rational) -> bool,
{
    if q_candidates.iter().any(Rational::is_zero) {
        return Err(Error::InvalidArgument("common difference 0 is not allowed".into()));
    }
    let progression = |p: &Rational, q: &Rational| {
        (0..=k).all(|j| member(&(p + q.scale(&BigInt::from(j)))))
    };
    for p in p_candidates {
        for q in q_candidates {
            if progression(p, q) {
                // evaluate again from scratch; predicates must be pure
                let mut x = p.clone();
                for _ in 0..=k {
                    if !member(&x) {
                        return Err(Error::InvalidArgument(
                            "membership predicate is not deterministic".into(),
                        ));
                    }
                    x = x + q;
                }
                return Ok(Some((p.clone(), q.clone())));
            }
        }
    }
    Ok(None)
}

/// Membership predicates on `Q`, with a small text syntax:
///
/// * `all`, `none`
/// * `U [a,b) [c,d) ...`, optionally followed by `period P`, for unions of
///   half-open intervals (repeated with period `P`)
/// * `int-multiple-of r` for the lattice `rZ`
/// * `{x, y, ...}` for an explicit finite set, `@path` to read one from a
///   file of whitespace-separated rationals
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    All,
    Empty,
    Intervals {
        intervals: Vec<(Rational, Rational)>,
        period: Option<Rational>,
    },
    MultipleOf(Rational),
    Finite(HashSet<Rational>),
}

impl Predicate {
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Predicate::All => true,
            Predicate::Empty => false,
            Predicate::Intervals { intervals, period } => intervals.iter().any(|(a, b)| {
                match period {
                    None => a <= x && x < b,
                    // some m with a <= x - mP < b, i.e. floor((x-a)/P)·P > x - b
                    Some(p) => {
                        let m = (x - a).div_nonzero(p).expect("period is nonzero").floor();
                        p.scale(&m) > x - b
                    }
                }
            }),
            Predicate::MultipleOf(r) => x.div_nonzero(r).expect("lattice step is nonzero").is_integer(),
            Predicate::Finite(set) => set.contains(x),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "all" {
            return Ok(Predicate::All);
        }
        if text == "none" {
            return Ok(Predicate::Empty);
        }
        if let Some(rest) = text.strip_prefix("int-multiple-of") {
            let r: Rational = rest.trim().parse()?;
            if r.is_zero() {
                return Err(Error::Parse("int-multiple-of needs a nonzero step".into()));
            }
            return Ok(Predicate::MultipleOf(r));
        }
        if let Some(path) = text.strip_prefix('@') {
            return Predicate::from_file(Path::new(path.trim()));
        }
        if let Some(inner) = text.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            return Ok(Predicate::Finite(parse_rational_list(inner)?.into_iter().collect()));
        }
        if let Some(rest) = text.strip_prefix('U') {
            return parse_intervals(rest);
        }
        Err(Error::Parse(format!("unrecognised set description {text:?}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Ok(Predicate::Finite(parse_rational_list(&body)?.into_iter().collect()))
    }
}

/// Rationals separated by commas and/or whitespace.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

fn parse_intervals(mut rest: &str) -> Result<Predicate> {
    let mut intervals = Vec::new();
    loop {
        rest = rest.trim_start();
        let Some(body) = rest.strip_prefix('[') else { break };
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse("interval missing closing `)`".into()))?;
        let (a, b) = body[..close]
            .split_once(',')
            .ok_or_else(|| Error::Parse("interval needs two endpoints".into()))?;
        let (a, b): (Rational, Rational) = (a.parse()?, b.parse()?);
        if a >= b {
            return Err(Error::Parse(format!("empty interval [{a},{b})")));
        }
        intervals.push((a, b));
        rest = &body[close + 1..];
    }
    if intervals.is_empty() {
        return Err(Error::Parse("`U` needs at least one interval [a,b)".into()));
    }
    let rest = rest.trim();
    let period = if rest.is_empty() {
        None
    } else if let Some(p) = rest.strip_prefix("period") {
        let p: Rational = p.trim().parse()?;
        if p <= Rational::zero() {
            return Err(Error::Parse("period must be positive".into()));
        }
        Some(p)
    } else {
        return Err(Error::Parse(format!("unexpected trailing text {rest:?}")));
    };
    Ok(Predicate::Intervals { intervals, period })
}
