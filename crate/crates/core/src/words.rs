//! Words over `{1..k}`, variable words and combinatorial lines, the
//! coefficient map `g` from words onto located rationals, and the extraction
//! of arithmetic progressions from lines.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::codec::{place_value, FactorialWord};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// One symbol of a variable word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Sym(u32),
    /// The variable, ordered after every alphabet letter.
    Var,
}

/// A word of length `n >= 1` over `{1..k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u32>,
    k: u32,
}

impl Word {
    pub fn new(letters: Vec<u32>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("alphabet size must be positive".into()));
        }
        if letters.is_empty() {
            return Err(Error::InvalidArgument("words have length at least 1".into()));
        }
        if let Some(bad) = letters.iter().find(|&&a| a == 0 || a > k) {
            return Err(Error::InvalidArgument(format!(
                "letter {bad} outside alphabet 1..={k}"
            )));
        }
        Ok(Word { letters, k })
    }

    /// Parses concatenated single-digit letters, e.g. `"121"`.
    pub fn parse(s: &str, k: u32) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("bad letter {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters, k)
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet(&self) -> u32 {
        self.k
    }

    /// Rank in the lexicographic enumeration of `W_n`.
    fn index(&self) -> usize {
        self.letters
            .iter()
            .fold(0usize, |acc, &a| acc * self.k as usize + (a as usize - 1))
    }

    fn from_index(mut idx: usize, n: usize, k: u32) -> Word {
        let mut letters = vec![0u32; n];
        for slot in letters.iter_mut().rev() {
            *slot = (idx % k as usize) as u32 + 1;
            idx /= k as usize;
        }
        Word { letters, k }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.letters {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// A word over `{1..k} ∪ {v}` with at least one `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableWord {
    letters: Vec<Letter>,
    k: u32,
}

impl VariableWord {
    pub fn new(letters: Vec<Letter>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("alphabet size must be positive".into()));
        }
        if !letters.contains(&Letter::Var) {
            return Err(Error::InvalidArgument(
                "a variable word needs at least one variable".into(),
            ));
        }
        if let Some(Letter::Sym(bad)) = letters
            .iter()
            .find(|l| matches!(l, Letter::Sym(a) if *a == 0 || *a > k))
        {
            return Err(Error::InvalidArgument(format!(
                "letter {bad} outside alphabet 1..={k}"
            )));
        }
        Ok(VariableWord { letters, k })
    }

    /// Parses e.g. `"1v2"`, the variable spelled `v` (or `υ`).
    pub fn parse(s: &str, k: u32) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'v' | 'υ' => Ok(Letter::Var),
                _ => c
                    .to_digit(10)
                    .map(Letter::Sym)
                    .ok_or_else(|| Error::Parse(format!("bad letter {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        VariableWord::new(letters, k)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Substitutes `alpha` for every variable.
    pub fn substitute(&self, alpha: u32) -> Word {
        assert!((1..=self.k).contains(&alpha), "letter outside alphabet");
        let letters = self
            .letters
            .iter()
            .map(|l| match *l {
                Letter::Sym(a) => a,
                Letter::Var => alpha,
            })
            .collect();
        Word { letters, k: self.k }
    }

    /// The combinatorial line `w(1), ..., w(k)`.
    pub fn line(&self) -> Vec<Word> {
        (1..=self.k).map(|alpha| self.substitute(alpha)).collect()
    }

    /// Indices of the fixed letters and of the variable occurrences.
    pub fn split_positions(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.letters.len()).partition(|&i| self.letters[i] != Letter::Var)
    }
}

impl fmt::Display for VariableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            match l {
                Letter::Sym(a) => write!(f, "{a}")?,
                Letter::Var => f.write_str("v")?,
            }
        }
        Ok(())
    }
}

/// Strictly increasing nonzero positions `t_1 < ... < t_n`, each with
/// `|t_j| >= k`, onto which words of `W_n({1..k})` are placed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Template {
    positions: Vec<i64>,
    k: u32,
}

impl Template {
    pub fn new(positions: Vec<i64>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("alphabet size must be positive".into()));
        }
        if positions.is_empty() {
            return Err(Error::InvalidArgument("template needs at least one position".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "template positions must be strictly increasing".into(),
            ));
        }
        if let Some(&t) = positions.iter().find(|&&t| t.unsigned_abs() < u64::from(k)) {
            return Err(Error::InvalidArgument(format!(
                "position {t} violates |t| >= k = {k}"
            )));
        }
        Ok(Template { positions, k })
    }

    /// Parses comma-separated integers such as `-2,3,5`.
    pub fn parse(s: &str, k: u32) -> Result<Self> {
        let positions = s
            .split(',')
            .map(|p| {
                p.trim()
                    .replace('\u{2212}', "-")
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad template position {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Template::new(positions, k)
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn alphabet(&self) -> u32 {
        self.k
    }

    /// The located word `{t_j -> w_j}`.
    pub fn placed_word(&self, w: &Word) -> Result<FactorialWord> {
        self.check_word(w)?;
        FactorialWord::from_digits(
            self.positions
                .iter()
                .zip(w.letters())
                .map(|(&t, &a)| (t, u64::from(a))),
        )
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "word length {} does not match template length {}",
                w.len(),
                self.len()
            )));
        }
        if w.alphabet() != self.k {
            return Err(Error::InvalidArgument(format!(
                "word alphabet {} does not match template alphabet {}",
                w.alphabet(),
                self.k
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// `c_t`: `(-1)^(-t)/(-t+1)!` for `t < 0`, `(-1)^(t+1) t!` for `t > 0`.
pub fn coefficient(t: i64) -> Result<Rational> {
    if t == 0 {
        return Err(Error::InvalidArgument("coefficient of position 0".into()));
    }
    Ok(place_value(t))
}

/// `g(w) = sum_j w_j c_{t_j}`.
pub fn g_map(w: &Word, tpl: &Template) -> Result<Rational> {
    tpl.check_word(w)?;
    Ok(g_unchecked(w.letters(), tpl))
}

fn g_unchecked(letters: &[u32], tpl: &Template) -> Rational {
    tpl.positions
        .iter()
        .zip(letters)
        .map(|(&t, &a)| place_value(t).scale(&BigInt::from(a)))
        .sum()
}

fn word_count(n: usize, k: u32) -> usize {
    (k as usize)
        .checked_pow(u32::try_from(n).expect("word length fits in u32"))
        .expect("k^n overflows usize")
}

/// `W_n({1..k})` in lexicographic order.
pub fn enumerate_words(n: usize, k: u32) -> impl Iterator<Item = Word> {
    assert!(n >= 1 && k >= 1, "need n >= 1 and k >= 1");
    (0..word_count(n, k)).map(move |i| Word::from_index(i, n, k))
}

/// Variable words of length `n` in lexicographic order with
/// `1 < 2 < ... < k < v`.
pub fn enumerate_variable_words(n: usize, k: u32) -> impl Iterator<Item = VariableWord> {
    assert!(n >= 1 && k >= 1, "need n >= 1 and k >= 1");
    // base k+1 odometer where digit k stands for the variable
    (0..word_count(n, k + 1)).filter_map(move |mut idx| {
        let mut letters = vec![Letter::Var; n];
        for slot in letters.iter_mut().rev() {
            let digit = (idx % (k as usize + 1)) as u32;
            idx /= k as usize + 1;
            *slot = if digit == k {
                Letter::Var
            } else {
                Letter::Sym(digit + 1)
            };
        }
        letters
            .contains(&Letter::Var)
            .then_some(VariableWord { letters, k })
    })
}

/// Membership table over `W_n`, indexed by lexicographic rank.
struct WordTable {
    n: usize,
    k: u32,
    members: Vec<bool>,
}

impl WordTable {
    fn first_line(&self) -> Option<VariableWord> {
        enumerate_variable_words(self.n, self.k).find(|vw| {
            (1..=self.k).all(|alpha| self.members[vw.substitute(alpha).index()])
        })
    }
}

fn check_set<'a, I>(a: I, n: usize, k: u32) -> Result<()>
where
    I: IntoIterator<Item = &'a Word>,
{
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and k >= 1".into()));
    }
    for w in a {
        if w.len() != n || w.alphabet() != k {
            return Err(Error::InvalidArgument(format!(
                "word {w} is not in W_{n} over an alphabet of size {k}"
            )));
        }
    }
    Ok(())
}

/// The first variable word (in enumeration order) whose line lies in `a`.
pub fn find_line(a: &HashSet<Word>, n: usize, k: u32) -> Result<Option<VariableWord>> {
    check_set(a, n, k)?;
    let mut members = vec![false; word_count(n, k)];
    for w in a {
        members[w.index()] = true;
    }
    Ok(WordTable { n, k, members }.first_line())
}

/// `|A ∩ W_n| / k^n`. Words of other lengths or alphabets are ignored.
pub fn dhj_density(a: &HashSet<Word>, n: usize, k: u32) -> Rational {
    let hits = a.iter().filter(|w| w.len() == n && w.alphabet() == k).count();
    Rational::new(hits as u64, word_count(n, k) as u64).expect("k^n is positive")
}

/// A progression `p, p+q, ..., p+(k-1)q` read off a combinatorial line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineProgression {
    pub p: Rational,
    pub q: Rational,
    /// The variable word whose line produced the progression.
    pub line: VariableWord,
    /// Template positions holding fixed letters.
    pub fixed: Vec<i64>,
    /// Template positions holding the variable.
    pub variable: Vec<i64>,
}

impl LineProgression {
    pub fn terms(&self, k: u32) -> Vec<Rational> {
        (0..k)
            .map(|i| &self.p + self.q.scale(&BigInt::from(i)))
            .collect()
    }
}

/// Pulls `A` back along `g` to `W_n`, finds the first combinatorial line
/// there and returns `q = sum_{t in F2} c_t`, `p = q + sum_{t in F1} w_t c_t`
/// where `F1`/`F2` are the fixed/variable positions. Then `p + i q` lies in
/// `A` for `i = 0..k-1`.
pub fn find_progression_via_lines<P>(member: P, tpl: &Template) -> Option<LineProgression>
where
    P: Fn(&Rational) -> bool + Sync,
{
    let (n, k) = (tpl.len(), tpl.alphabet());
    let members: Vec<bool> = (0..word_count(n, k))
        .into_par_iter()
        .map(|i| member(&g_unchecked(Word::from_index(i, n, k).letters(), tpl)))
        .collect();
    let vw = WordTable { n, k, members }.first_line()?;

    let (fixed_idx, var_idx) = vw.split_positions();
    let q: Rational = var_idx.iter().map(|&i| place_value(tpl.positions[i])).sum();
    let fixed_sum: Rational = fixed_idx
        .iter()
        .map(|&i| match vw.letters[i] {
            Letter::Sym(a) => place_value(tpl.positions[i]).scale(&BigInt::from(a)),
            Letter::Var => unreachable!("fixed index holds a letter"),
        })
        .sum();
    let p = &q + fixed_sum;
    debug_assert!(!q.is_zero());

    let witness = LineProgression {
        p,
        q,
        fixed: fixed_idx.iter().map(|&i| tpl.positions[i]).collect(),
        variable: var_idx.iter().map(|&i| tpl.positions[i]).collect(),
        line: vw,
    };
    debug_assert!(witness.terms(k).iter().all(member));
    Some(witness)
}

/// [`find_progression_via_lines`] for an explicit finite set.
pub fn find_progression_in_set(a: &HashSet<Rational>, tpl: &Template) -> Option<LineProgression> {
    find_progression_via_lines(|x| a.contains(x), tpl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn set(words: &[&str], k: u32) -> HashSet<Word> {
        words.iter().map(|s| Word::parse(s, k).unwrap()).collect()
    }

    fn tpl(s: &str, k: u32) -> Template {
        Template::parse(s, k).unwrap()
    }

    #[test]
    fn coefficients() {
        assert_eq!(coefficient(1).unwrap(), r("1"));
        assert_eq!(coefficient(-2).unwrap(), r("1/6"));
        assert_eq!(coefficient(3).unwrap(), r("6"));
        assert_eq!(coefficient(-1).unwrap(), r("-1/2"));
        assert!(coefficient(0).is_err());
    }

    #[test]
    fn g_examples() {
        let t = tpl("-2,3", 2);
        assert_eq!(g_map(&Word::parse("12", 2).unwrap(), &t).unwrap(), r("73/6"));
        assert_eq!(g_map(&Word::parse("11", 2).unwrap(), &t).unwrap(), r("37/6"));
        assert_eq!(
            g_map(&Word::parse("11", 2).unwrap(), &tpl("2,3", 2)).unwrap(),
            r("4")
        );
        assert!(g_map(&Word::parse("1", 2).unwrap(), &t).is_err());
        assert!(g_map(&Word::parse("11", 3).unwrap(), &tpl("-3,3", 2)).is_err());
    }

    #[test]
    fn template_validation() {
        assert!(Template::new(vec![-2, 3], 2).is_ok());
        assert!(Template::new(vec![3, -2], 2).is_err());
        assert!(Template::new(vec![-2, 0, 3], 2).is_err());
        assert!(Template::new(vec![-1, 3], 2).is_err());
        assert!(Template::new(vec![], 2).is_err());
        assert!(Template::new(vec![2, 2], 2).is_err());
        assert_eq!(tpl("\u{2212}2,3,5", 2).positions(), &[-2, 3, 5]);
        assert_eq!(tpl("-2, 3,5", 2).to_string(), "-2,3,5");
    }

    #[test]
    fn lines() {
        let show = |s: &str| -> Vec<String> {
            VariableWord::parse(s, 2)
                .unwrap()
                .line()
                .iter()
                .map(Word::to_string)
                .collect()
        };
        assert_eq!(show("v2"), ["12", "22"]);
        assert_eq!(show("1v"), ["11", "12"]);
        assert_eq!(show("vv"), ["11", "22"]);
        assert!(VariableWord::parse("12", 2).is_err());
        assert!(VariableWord::parse("3v", 2).is_err());
    }

    #[test]
    fn enumeration() {
        let w: Vec<String> = enumerate_words(1, 2).map(|w| w.to_string()).collect();
        assert_eq!(w, ["1", "2"]);
        assert_eq!(enumerate_words(2, 2).count(), 4);
        let vw: Vec<String> = enumerate_variable_words(2, 2).map(|w| w.to_string()).collect();
        assert_eq!(vw, ["1v", "2v", "v1", "v2", "vv"]);
        for (n, k) in [(1, 1), (3, 2), (3, 3), (4, 2), (2, 4)] {
            let total = (k as usize + 1).pow(n as u32) - (k as usize).pow(n as u32);
            assert_eq!(enumerate_variable_words(n, k).count(), total);
            assert_eq!(enumerate_words(n, k).count(), (k as usize).pow(n as u32));
            let words: Vec<_> = enumerate_words(n, k).collect();
            assert!(words.windows(2).all(|p| p[0] < p[1]));
            let vws: Vec<_> = enumerate_variable_words(n, k).collect();
            assert!(vws.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn line_search_examples() {
        let found = find_line(&set(&["11", "12"], 2), 2, 2).unwrap();
        assert_eq!(found.unwrap().to_string(), "1v");
        assert_eq!(find_line(&set(&["12", "21"], 2), 2, 2).unwrap(), None);
        let all: HashSet<Word> = enumerate_words(2, 2).collect();
        assert_eq!(find_line(&all, 2, 2).unwrap().unwrap().to_string(), "1v");
        assert_eq!(find_line(&HashSet::new(), 3, 2).unwrap(), None);
        assert!(find_line(&set(&["1"], 2), 2, 2).is_err());
    }

    #[test]
    fn densities() {
        assert_eq!(dhj_density(&HashSet::new(), 2, 2), r("0"));
        assert_eq!(dhj_density(&set(&["11", "12", "21"], 2), 2, 2), r("3/4"));
        let all: HashSet<Word> = enumerate_words(3, 3).collect();
        assert_eq!(dhj_density(&all, 3, 3), r("1"));
    }

    #[test]
    fn progression_examples() {
        let t = tpl("-2,3", 2);
        let a: HashSet<Rational> = [r("37/6"), r("73/6")].into_iter().collect();
        let found = find_progression_in_set(&a, &t).unwrap();
        assert_eq!((found.p.clone(), found.q.clone()), (r("37/6"), r("6")));
        assert_eq!(found.line.to_string(), "1v");
        assert_eq!(found.fixed, [-2]);
        assert_eq!(found.variable, [3]);

        assert!(find_progression_via_lines(|_| false, &t).is_none());

        let t3 = tpl("-4,3,5", 3);
        let any = find_progression_via_lines(|_| true, &t3).unwrap();
        assert!(!any.q.is_zero());
        assert_eq!(any.terms(3).len(), 3);
        // dom(p) and dom(q) sit inside the template
        for x in [&any.p, &any.q] {
            assert!(encode(x).domain().all(|t| t3.positions().contains(&t)));
        }
    }
}
