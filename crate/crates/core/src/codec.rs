//! Signed factorial-base located words.
//!
//! Every rational `q` has exactly one finite expansion
//!
//! ```text
//! q = sum_{s>=1} d_{-s} (-1)^s / (s+1)!  +  sum_{r>=1} d_r (-1)^(r+1) r!
//! ```
//!
//! with `0 <= d_t <= |t|`. Keeping only the nonzero digits gives a
//! [`FactorialWord`]: a finite map from nonzero positions to digits. The
//! negative positions carry a value strictly inside `(1/e - 1, 1/e)`, the
//! positive positions carry an integer.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, InvEEnclosures, Rational};

/// The value of a unit digit at position `t`:
/// `(-1)^(-t) / (-t+1)!` for `t < 0` and `(-1)^(t+1) t!` for `t > 0`.
///
/// Panics on `t == 0`; use [`crate::words::coefficient`] for a checked form.
pub fn place_value(t: i64) -> Rational {
    assert!(t != 0, "position 0 has no place value");
    let n = t.unsigned_abs();
    let sign_negative = n % 2 == 1;
    let n = u32::try_from(n).expect("position magnitude fits in u32");
    let value = if t < 0 {
        Rational::new(1, factorial(n + 1)).expect("factorial is nonzero")
    } else {
        Rational::from_integer(factorial(n))
    };
    // t < 0: sign is (-1)^|t|; t > 0: sign is (-1)^(t+1).
    let negate = if t < 0 { sign_negative } else { !sign_negative };
    if negate {
        -value
    } else {
        value
    }
}

/// Sparse digit map `t -> d_t` with `1 <= d_t <= |t|` and `t != 0`.
/// The empty word represents zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorialWord {
    digits: BTreeMap<i64, u64>,
}

fn check_digit(t: i64, d: u64) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidWord("position 0 is not allowed".into()));
    }
    if d == 0 || d > t.unsigned_abs() {
        return Err(Error::InvalidWord(format!(
            "digit {d} at position {t} is outside 1..={}",
            t.unsigned_abs()
        )));
    }
    Ok(())
}

impl FactorialWord {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a word from `(position, digit)` pairs, rejecting position 0,
    /// duplicate positions and digits outside `1..=|t|`.
    pub fn from_digits<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, u64)>,
    {
        let mut digits = BTreeMap::new();
        for (t, d) in pairs {
            check_digit(t, d)?;
            if digits.insert(t, d).is_some() {
                return Err(Error::InvalidWord(format!("duplicate position {t}")));
            }
        }
        Ok(FactorialWord { digits })
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn get(&self, t: i64) -> Option<u64> {
        self.digits.get(&t).copied()
    }

    /// `(position, digit)` pairs in ascending position order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.digits.iter().map(|(&t, &d)| (t, d))
    }

    /// `dom(w)`, ascending.
    pub fn domain(&self) -> impl Iterator<Item = i64> + '_ {
        self.digits.keys().copied()
    }

    pub fn negative_domain(&self) -> impl Iterator<Item = i64> + '_ {
        self.domain().filter(|&t| t < 0)
    }

    pub fn positive_domain(&self) -> impl Iterator<Item = i64> + '_ {
        self.domain().filter(|&t| t > 0)
    }

    /// Largest `|t|` over the domain, 0 for the empty word.
    pub fn max_abs_position(&self) -> u64 {
        self.domain().map(i64::unsigned_abs).max().unwrap_or(0)
    }

    /// Union of two words with disjoint domains.
    pub fn disjoint_union(&self, other: &FactorialWord) -> Result<FactorialWord> {
        let mut digits = self.digits.clone();
        for (t, d) in other.iter() {
            if digits.insert(t, d).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "domains overlap at position {t}"
                )));
            }
        }
        Ok(FactorialWord { digits })
    }

    /// Sum of all digits.
    pub fn digit_sum(&self) -> u64 {
        self.digits.values().sum()
    }

    fn push_nonzero(&mut self, t: i64, d: u64) {
        if d != 0 {
            debug_assert!(check_digit(t, d).is_ok());
            self.digits.insert(t, d);
        }
    }
}

impl fmt::Display for FactorialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, d)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}:{d}")?;
        }
        Ok(())
    }
}

impl FromStr for FactorialWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(FactorialWord::empty());
        }
        let mut pairs = Vec::new();
        for item in s.split(',') {
            let (t, d) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected t:d, got {item:?}")))?;
            let t: i64 = t
                .trim()
                .replace('\u{2212}', "-")
                .parse()
                .map_err(|_| Error::Parse(format!("bad position in {item:?}")))?;
            let d: u64 = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad digit in {item:?}")))?;
            pairs.push((t, d));
        }
        FactorialWord::from_digits(pairs)
    }
}

/// The exact value of a word.
pub fn decode(w: &FactorialWord) -> Rational {
    w.iter()
        .map(|(t, d)| place_value(t).scale(&BigInt::from(d)))
        .sum()
}

/// Splits `q` as `z + f` with `z` an integer and `f` strictly inside
/// `(1/e - 1, 1/e)`.
///
/// `z` is `ceil(q - 1/e)`; enclosures are refined until `q - hi` and
/// `q - lo` have the same ceiling.
pub fn split_by_e(q: &Rational) -> (BigInt, Rational) {
    for enc in InvEEnclosures::new() {
        let upper = (q - &enc.lo).ceil();
        let lower = (q - &enc.hi).ceil();
        if upper == lower {
            let f = q - Rational::from_integer(upper.clone());
            return (upper, f);
        }
    }
    unreachable!("enclosure iterator is infinite")
}

/// Positive-position word for an integer, peeling digits least significant
/// first.
pub fn encode_integer(z: &BigInt) -> FactorialWord {
    let mut out = FactorialWord::empty();
    let mut rest = z.clone();
    let mut r: i64 = 1;
    while !rest.is_zero() {
        let radix = BigInt::from(r + 1);
        // (-1)^(r+1): positive for odd r.
        let signed = if r % 2 == 1 { rest.clone() } else { -&rest };
        let d = signed.mod_floor(&radix);
        let contribution = if r % 2 == 1 { d.clone() } else { -&d };
        let (quot, rem) = (&rest - contribution).div_rem(&radix);
        debug_assert!(rem.is_zero());
        out.push_nonzero(r, d.to_u64().expect("digit below radix"));
        rest = quot;
        r += 1;
    }
    out
}

/// Negative-position word for `f` in `(1/e - 1, 1/e)`.
///
/// Fails with [`Error::NotRepresentable`] when `f` lies outside that
/// interval, which shows up as a nonzero residual after the last digit.
pub fn encode_fraction(f: &Rational) -> Result<FactorialWord> {
    // least m with den(f) | (m+1)!
    let den = f.denom();
    let mut m: i64 = 0;
    let mut fact = BigInt::one();
    while !(&fact % den).is_zero() {
        m += 1;
        fact *= BigInt::from(m + 1);
    }
    let scaled = f.scale(&fact);
    debug_assert!(scaled.is_integer());
    let mut c = scaled.numer().clone();

    let mut out = FactorialWord::empty();
    for s in (1..=m).rev() {
        let radix = BigInt::from(s + 1);
        // (-1)^s: positive for even s.
        let signed = if s % 2 == 0 { c.clone() } else { -&c };
        let d = signed.mod_floor(&radix);
        let contribution = if s % 2 == 0 { d.clone() } else { -&d };
        let (quot, rem) = (&c - contribution).div_rem(&radix);
        debug_assert!(rem.is_zero());
        out.push_nonzero(-s, d.to_u64().expect("digit below radix"));
        c = quot;
    }
    if !c.is_zero() {
        return Err(Error::NotRepresentable(format!(
            "{f} is not inside (1/e - 1, 1/e) (residual {c})"
        )));
    }
    Ok(out)
}

/// The unique factorial word of `q`.
pub fn encode(q: &Rational) -> FactorialWord {
    let (z, f) = split_by_e(q);
    let int_part = encode_integer(&z);
    let frac_part = encode_fraction(&f).expect("split_by_e yields a representable fraction");
    int_part
        .disjoint_union(&frac_part)
        .expect("integer and fraction words live on opposite signs")
}
