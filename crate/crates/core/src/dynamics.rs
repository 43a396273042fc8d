//! Commuting permutations of a finite uniform space acting as IP-systems and
//! rational systems, with exhaustive search for multiple-recurrence
//! witnesses.
//!
//! A finite set with the uniform measure stands in for a probability space;
//! its measure-preserving maps are exactly its permutations, so positivity of
//! `μ(A ∩ T_1^{-1}A ∩ ... ∩ T_k^{-1}A)` is decidable by counting points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::codec::{decode, encode, place_value, FactorialWord};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A bijection of `0..N`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// `x -> x + shift (mod n)`.
    pub fn rotation(n: usize, shift: i64) -> Self {
        assert!(n > 0, "rotation of an empty space");
        let s = shift.rem_euclid(n as i64) as usize;
        Permutation {
            images: (0..n).map(|x| (x + s) % n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(Error::InvalidArgument(format!(
                    "image list {images:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutations of different spaces");
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Permutation {
        (0..e).fold(Permutation::identity(self.len()), |acc, _| acc.compose(self))
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|x| self.apply(other.apply(x)) == other.apply(self.apply(x)))
    }

    /// `P^{-1}(A)`.
    pub fn preimage(&self, a: &MeasurableSet) -> MeasurableSet {
        assert_eq!(self.len(), a.space_size(), "set lives on another space");
        MeasurableSet {
            members: self.images.iter().map(|&y| a.members[y]).collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A subset of `0..N` under the uniform probability measure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeasurableSet {
    members: Vec<bool>,
}

impl MeasurableSet {
    pub fn new<I: IntoIterator<Item = usize>>(space_size: usize, points: I) -> Result<Self> {
        if space_size == 0 {
            return Err(Error::InvalidArgument("space must have at least one point".into()));
        }
        let mut members = vec![false; space_size];
        for x in points {
            if x >= space_size {
                return Err(Error::InvalidArgument(format!(
                    "point {x} outside 0..{space_size}"
                )));
            }
            members[x] = true;
        }
        Ok(MeasurableSet { members })
    }

    pub fn full(space_size: usize) -> Self {
        MeasurableSet {
            members: vec![true; space_size],
        }
    }

    pub fn space_size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.get(x).copied().unwrap_or(false)
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.members.len()).filter(|&x| self.members[x])
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    /// `|A| / N`.
    pub fn measure(&self) -> Rational {
        Rational::new(self.count() as u64, self.space_size() as u64)
            .expect("space is nonempty")
    }

    pub fn intersect(&self, other: &MeasurableSet) -> MeasurableSet {
        assert_eq!(self.space_size(), other.space_size());
        MeasurableSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| *a && *b)
                .collect(),
        }
    }
}

/// Generators `T_n` for every `n` in `{-W..W} \ {0}`, all on one space and
/// pairwise commuting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFamily {
    window: u64,
    size: usize,
    generators: BTreeMap<i64, Permutation>,
}

fn window_indices(window: u64) -> impl Iterator<Item = i64> {
    let w = window as i64;
    (-w..=w).filter(|&n| n != 0)
}

impl GeneratorFamily {
    pub fn new(window: u64, generators: BTreeMap<i64, Permutation>) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidArgument("window must be positive".into()));
        }
        let expected: BTreeSet<i64> = window_indices(window).collect();
        let given: BTreeSet<i64> = generators.keys().copied().collect();
        if let Some(n) = given.difference(&expected).next() {
            return Err(Error::InvalidArgument(format!(
                "generator index {n} outside window {window}"
            )));
        }
        if let Some(n) = expected.difference(&given).next() {
            return Err(Error::InvalidArgument(format!(
                "missing generator for index {n}"
            )));
        }
        let size = generators.values().next().map(Permutation::len).unwrap_or(0);
        if size == 0 || generators.values().any(|p| p.len() != size) {
            return Err(Error::InvalidArgument(
                "generators must act on one nonempty space".into(),
            ));
        }
        let fam = GeneratorFamily {
            window,
            size,
            generators,
        };
        check_commuting(std::slice::from_ref(&fam))?;
        Ok(fam)
    }

    /// Every `T_n` equal to the same permutation.
    pub fn uniform(window: u64, p: &Permutation) -> Result<Self> {
        GeneratorFamily::new(window, window_indices(window).map(|n| (n, p.clone())).collect())
    }

    /// `T_n` = rotation by `shift(n)` on `Z/size`.
    pub fn rotations<F: Fn(i64) -> i64>(size: usize, window: u64, shift: F) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("space must have at least one point".into()));
        }
        GeneratorFamily::new(
            window,
            window_indices(window)
                .map(|n| (n, Permutation::rotation(size, shift(n))))
                .collect(),
        )
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn space_size(&self) -> usize {
        self.size
    }

    pub fn generator(&self, n: i64) -> Result<&Permutation> {
        self.generators.get(&n).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "index {n} outside generator window {}",
                self.window
            ))
        })
    }

    pub fn generators(&self) -> impl Iterator<Item = (i64, &Permutation)> {
        self.generators.iter().map(|(&n, p)| (n, p))
    }
}

fn check_commuting(families: &[GeneratorFamily]) -> Result<()> {
    let all: Vec<(usize, i64, &Permutation)> = families
        .iter()
        .enumerate()
        .flat_map(|(j, f)| f.generators().map(move |(n, p)| (j, n, p)))
        .collect();
    for (i, (j1, n1, p1)) in all.iter().enumerate() {
        for (j2, n2, p2) in &all[i + 1..] {
            if !p1.commutes_with(p2) {
                return Err(Error::InvalidArgument(format!(
                    "generator {n1} of system {} does not commute with generator {n2} of system {}",
                    j1 + 1,
                    j2 + 1
                )));
            }
        }
    }
    Ok(())
}

/// `k` rational systems on one space whose generators all commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingSystems {
    families: Vec<GeneratorFamily>,
}

impl CommutingSystems {
    pub fn new(families: Vec<GeneratorFamily>) -> Result<Self> {
        let first = families
            .first()
            .ok_or_else(|| Error::InvalidArgument("need at least one system".into()))?;
        if families.iter().any(|f| f.space_size() != first.space_size()) {
            return Err(Error::InvalidArgument("systems act on different spaces".into()));
        }
        check_commuting(&families)?;
        Ok(CommutingSystems { families })
    }

    pub fn families(&self) -> &[GeneratorFamily] {
        &self.families
    }

    pub fn space_size(&self) -> usize {
        self.families[0].space_size()
    }

    /// The smallest window shared by all systems.
    pub fn window(&self) -> u64 {
        self.families.iter().map(GeneratorFamily::window).min().unwrap_or(0)
    }
}

/// `T_α = T_{t_1} ... T_{t_l}` for a nonempty finite `α ⊂ N`.
pub fn ip_transform(alpha: &BTreeSet<u64>, fam: &GeneratorFamily) -> Result<Permutation> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument("multi-index must be nonempty".into()));
    }
    let mut acc = Permutation::identity(fam.space_size());
    for &t in alpha {
        if t == 0 || t > fam.window() {
            return Err(Error::InvalidArgument(format!(
                "index {t} outside 1..={}",
                fam.window()
            )));
        }
        acc = acc.compose(fam.generator(t as i64)?);
    }
    Ok(acc)
}

/// `T^q = T_{t_1}^{d_1} ... T_{t_l}^{d_l}` for the word of `q`; the empty
/// word gives the identity.
pub fn apply_rational(w: &FactorialWord, fam: &GeneratorFamily) -> Result<Permutation> {
    w.iter()
        .try_fold(Permutation::identity(fam.space_size()), |acc, (t, d)| {
            Ok(acc.compose(&fam.generator(t)?.pow(d)))
        })
}

/// Which word positions a recurrence search may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Restriction {
    /// All of `{-W..W} \ {0}`.
    Full,
    /// Positions `1..=W`: witnesses are nonzero integers.
    PositiveOnly,
    /// Positions `-W..=-1`: witnesses lie in `(1/e - 1, 1/e)`.
    NegativeOnly,
}

impl Restriction {
    fn positions(self, window: u64) -> Vec<i64> {
        window_indices(window)
            .filter(|&t| match self {
                Restriction::Full => true,
                Restriction::PositiveOnly => t > 0,
                Restriction::NegativeOnly => t < 0,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceWitness {
    pub word: FactorialWord,
    pub q: Rational,
    /// `μ(A ∩ (T_1^q)^{-1}A ∩ ... ∩ (T_k^q)^{-1}A)`, always positive.
    pub measure: Rational,
}

/// All nonempty words of exactly `size` digits over `positions`, in
/// lexicographic order of their `(t, d)` pair lists.
fn words_of_size(positions: &[i64], size: usize) -> Vec<FactorialWord> {
    fn go(
        positions: &[i64],
        size: usize,
        prefix: &mut Vec<(i64, u64)>,
        out: &mut Vec<FactorialWord>,
    ) {
        if prefix.len() == size {
            out.push(FactorialWord::from_digits(prefix.iter().copied()).expect("legal digits"));
            return;
        }
        let need = size - prefix.len();
        for (i, &t) in positions.iter().enumerate() {
            if positions.len() - i < need {
                break;
            }
            for d in 1..=t.unsigned_abs() {
                prefix.push((t, d));
                go(&positions[i + 1..], size, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(positions, size, &mut Vec::new(), &mut out);
    out
}

/// Every nonempty word over the restricted window, ascending by number of
/// digits and then lexicographically.
pub fn search_order(window: u64, restrict: Restriction) -> impl Iterator<Item = FactorialWord> {
    let positions = restrict.positions(window);
    (1..=positions.len()).flat_map(move |size| words_of_size(&positions, size))
}

fn recurrence_set(
    w: &FactorialWord,
    systems: &CommutingSystems,
    a: &MeasurableSet,
) -> Result<MeasurableSet> {
    systems.families().iter().try_fold(a.clone(), |acc, fam| {
        Ok(acc.intersect(&apply_rational(w, fam)?.preimage(a)))
    })
}

/// Finds the first word (in [`search_order`]) whose rational `q` gives
/// `μ(A ∩ ⋂_j (T_j^q)^{-1} A) > 0`. Returns `None` when the window is
/// exhausted.
pub fn recurrence_search(
    systems: &CommutingSystems,
    a: &MeasurableSet,
    window: u64,
    restrict: Restriction,
) -> Result<Option<RecurrenceWitness>> {
    if a.space_size() != systems.space_size() {
        return Err(Error::InvalidArgument("set lives on another space".into()));
    }
    if a.count() == 0 {
        return Err(Error::InvalidArgument("the set has measure zero".into()));
    }
    if window == 0 || window > systems.window() {
        return Err(Error::InvalidArgument(format!(
            "search window {window} must be within 1..={}",
            systems.window()
        )));
    }
    check_commuting(systems.families())?;

    let positions = restrict.positions(window);
    for size in 1..=positions.len() {
        let layer = words_of_size(&positions, size);
        // find_first keeps the least witness regardless of scheduling
        let hit = layer.par_iter().find_first(|w| {
            recurrence_set(w, systems, a)
                .map(|s| s.count() > 0)
                .unwrap_or(false)
        });
        if let Some(w) = hit {
            let measure = recurrence_set(w, systems, a)?.measure();
            return Ok(Some(RecurrenceWitness {
                q: decode(w),
                word: w.clone(),
                measure,
            }));
        }
    }
    Ok(None)
}

/// Outcome of reducing an IP-system over the interleaved generators
/// `φ_{2t-1} = T_t^{q_t}`, `φ_{2t} = T_{-t}^{q_{-t}}` to a rational system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReduction {
    pub q: Rational,
    /// The factorial word of `q`.
    pub word: FactorialWord,
    /// `φ_α`, composed directly from the chosen generator powers.
    pub phi: Permutation,
    /// Whether `φ_α` equals `T^q` at every point.
    pub equal: bool,
}

/// Builds `φ_α` from digit `choices` (`1 <= q_t <= |t|`), computes
/// `q = Σ_{2t∈α} q_{-t} c_{-t} + Σ_{2t-1∈α} q_t c_t` and checks
/// `φ_α = T^q` pointwise.
pub fn phi_reduction(
    choices: &BTreeMap<i64, u64>,
    alpha: &BTreeSet<u64>,
    fam: &GeneratorFamily,
) -> Result<PhiReduction> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument("multi-index must be nonempty".into()));
    }
    let mut q = Rational::zero();
    let mut phi = Permutation::identity(fam.space_size());
    for &a in alpha {
        if a == 0 {
            return Err(Error::InvalidArgument("multi-index entries are positive".into()));
        }
        let t = if a % 2 == 1 {
            a.div_ceil(2) as i64
        } else {
            -((a / 2) as i64)
        };
        let d = *choices
            .get(&t)
            .ok_or_else(|| Error::InvalidArgument(format!("no digit chosen for position {t}")))?;
        if d == 0 || d > t.unsigned_abs() {
            return Err(Error::InvalidArgument(format!(
                "digit {d} for position {t} outside 1..={}",
                t.unsigned_abs()
            )));
        }
        q = q + place_value(t).scale(&BigInt::from(d));
        phi = phi.compose(&fam.generator(t)?.pow(d));
    }
    let word = encode(&q);
    let equal = apply_rational(&word, fam)? == phi;
    Ok(PhiReduction {
        q,
        word,
        phi,
        equal,
    })
}

/// Text description of generator families on one space:
///
/// ```text
/// size: 8
/// system            # optional; starts the next family
/// 1: rot 1          # T_1 = rotation by 1 on Z/8
/// -1: 1 2 3 4 5 6 7 0
/// *: rot 1          # every index in the window not listed explicitly
/// A: 0 3            # the measurable set
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SystemDescription {
    pub size: usize,
    pub families: Vec<FamilySpec>,
    pub set: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FamilySpec {
    pub explicit: BTreeMap<i64, GeneratorSpec>,
    pub fallback: Option<GeneratorSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Rotation(i64),
    Images(Vec<usize>),
}

impl GeneratorSpec {
    fn build(&self, size: usize) -> Result<Permutation> {
        match self {
            GeneratorSpec::Rotation(a) => Ok(Permutation::rotation(size, *a)),
            GeneratorSpec::Images(images) => {
                if images.len() != size {
                    return Err(Error::InvalidArgument(format!(
                        "image list has {} entries, space has {size}",
                        images.len()
                    )));
                }
                Permutation::from_images(images.clone())
            }
        }
    }

    fn parse(rest: &str, line_no: usize) -> Result<Self> {
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        let bad = |what: &str| Error::Parse(format!("line {line_no}: {what}"));
        match tokens.as_slice() {
            ["rot", a] => a
                .parse()
                .map(GeneratorSpec::Rotation)
                .map_err(|_| bad("bad rotation amount")),
            [] => Err(bad("empty generator")),
            _ => tokens
                .iter()
                .map(|s| s.parse::<usize>().map_err(|_| bad("bad image")))
                .collect::<Result<Vec<_>>>()
                .map(GeneratorSpec::Images),
        }
    }
}

impl SystemDescription {
    pub fn parse(text: &str) -> Result<Self> {
        let mut size = None;
        let mut families = vec![FamilySpec::default()];
        let mut started = false;
        let mut set = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "system" {
                if started {
                    families.push(FamilySpec::default());
                }
                started = false;
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("line {line_no}: expected `key: value`")))?;
            let key = key.trim();
            let fam = families.last_mut().expect("at least one family");
            match key {
                "size" | "N" => {
                    let n: usize = rest
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("line {line_no}: bad size")))?;
                    size = Some(n);
                }
                "A" => {
                    let pts = rest
                        .split_whitespace()
                        .map(|s| {
                            s.parse::<usize>()
                                .map_err(|_| Error::Parse(format!("line {line_no}: bad point")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    set = Some(pts);
                }
                "*" => {
                    started = true;
                    if fam.fallback.replace(GeneratorSpec::parse(rest, line_no)?).is_some() {
                        return Err(Error::Parse(format!("line {line_no}: duplicate `*`")));
                    }
                }
                _ => {
                    started = true;
                    let n: i64 = key
                        .replace('\u{2212}', "-")
                        .parse()
                        .map_err(|_| Error::Parse(format!("line {line_no}: bad index {key:?}")))?;
                    if n == 0 {
                        return Err(Error::Parse(format!("line {line_no}: index 0")));
                    }
                    if fam
                        .explicit
                        .insert(n, GeneratorSpec::parse(rest, line_no)?)
                        .is_some()
                    {
                        return Err(Error::Parse(format!("line {line_no}: duplicate index {n}")));
                    }
                }
            }
        }
        let size = match size {
            Some(n) if n > 0 => n,
            Some(_) => return Err(Error::Parse("size must be positive".into())),
            None => {
                // infer from the first image list
                families
                    .iter()
                    .flat_map(|f| f.explicit.values().chain(f.fallback.iter()))
                    .find_map(|g| match g {
                        GeneratorSpec::Images(v) if !v.is_empty() => Some(v.len()),
                        _ => None,
                    })
                    .ok_or_else(|| Error::Parse("missing `size:` line".into()))?
            }
        };
        if !started && families.len() > 1 {
            families.pop();
        }
        Ok(SystemDescription {
            size,
            families,
            set,
        })
    }

    /// Instantiates every family on the window `{-W..W} \ {0}`.
    pub fn build(&self, window: u64) -> Result<CommutingSystems> {
        let families = self
            .families
            .iter()
            .map(|spec| {
                let mut gens = BTreeMap::new();
                for n in window_indices(window) {
                    let g = spec.explicit.get(&n).or(spec.fallback.as_ref()).ok_or_else(|| {
                        Error::InvalidArgument(format!("missing generator for index {n}"))
                    })?;
                    gens.insert(n, g.build(self.size)?);
                }
                if let Some(n) = spec.explicit.keys().find(|n| n.unsigned_abs() > window) {
                    return Err(Error::InvalidArgument(format!(
                        "generator index {n} outside window {window}"
                    )));
                }
                GeneratorFamily::new(window, gens)
            })
            .collect::<Result<Vec<_>>>()?;
        CommutingSystems::new(families)
    }

    pub fn measurable_set(&self) -> Result<Option<MeasurableSet>> {
        self.set
            .as_ref()
            .map(|pts| MeasurableSet::new(self.size, pts.iter().copied()))
            .transpose()
    }
}
