//! Canonical arbitrary-precision rationals and rational enclosures of `1/e`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact rational number, always stored as `num/den` with `den >= 1` and
/// `gcd(|num|, den) = 1`. Zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in lowest terms. Fails when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Exact quotient, used internally by predicates. Division is not part
    /// of the public arithmetic surface.
    pub(crate) fn div_nonzero(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// `self * n`.
    pub fn scale(&self, n: &BigInt) -> Rational {
        Rational(&self.0 * BigRational::from_integer(n.clone()))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        // Ratio::new already reduced it, but a raw Ratio may not be.
        let (n, d) = r.into();
        Rational(BigRational::new(n, d))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed rational {whole:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("malformed rational {whole:?}: {e}")))
}

/// Accepts `[sign]num[/den]` and terminating decimals `[sign]int.frac`.
/// The sign may be `+`, `-` or U+2212.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let whole = s.trim();
        let (negative, body) = if let Some(rest) = whole.strip_prefix('-') {
            (true, rest)
        } else if let Some(rest) = whole.strip_prefix('\u{2212}') {
            (true, rest)
        } else if let Some(rest) = whole.strip_prefix('+') {
            (false, rest)
        } else {
            (false, whole)
        };

        let value = if let Some((num, den)) = body.split_once('/') {
            let num = parse_int(num, whole)?;
            let den = parse_int(den, whole)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {whole:?}")));
            }
            Rational::new(num, den)?
        } else if let Some((int, frac)) = body.split_once('.') {
            let int = if int.is_empty() {
                BigInt::zero()
            } else {
                parse_int(int, whole)?
            };
            let frac_digits = parse_int(frac, whole)?;
            let scale = num_traits::pow(BigInt::from(10u32), frac.len());
            Rational::new(int * &scale + frac_digits, scale)?
        } else {
            Rational::from_integer(parse_int(body, whole)?)
        };
        Ok(if negative { -value } else { value })
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `lo < 1/e < hi` with `hi - lo = 1/order!`, bounded by two consecutive
/// partial sums of `sum_i (-1)^i / i!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
    pub order: u32,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo < q && q < &self.hi
    }
}

/// Numerator of the partial sum `S_j` over the common denominator `j!`,
/// i.e. `sum_{i=0..j} (-1)^i j!/i!`.
fn partial_sum(j: u32) -> Rational {
    let mut numer = BigInt::zero();
    // j!/i! accumulated from i = j downwards.
    let mut tail = BigInt::one();
    for i in (0..=j).rev() {
        if i % 2 == 0 {
            numer += &tail;
        } else {
            numer -= &tail;
        }
        tail *= BigInt::from(i.max(1));
    }
    Rational(BigRational::new(numer, factorial(j)))
}

/// The enclosure of `1/e` between `S_{m-1}` and `S_m`. Requires `m >= 2`.
pub fn inv_e_enclosure(m: u32) -> Result<Enclosure> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "enclosure order must be at least 2, got {m}"
        )));
    }
    let a = partial_sum(m - 1);
    let b = partial_sum(m);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    Ok(Enclosure { lo, hi, order: m })
}

/// Successive enclosures of `1/e` for orders 2, 3, ..., built incrementally.
#[derive(Clone, Debug)]
pub struct InvEEnclosures {
    prev: Rational,
    term: Rational,
    order: u32,
}

impl InvEEnclosures {
    pub fn new() -> Self {
        // S_1 = 0 and the last term added was -1/1!.
        InvEEnclosures {
            prev: Rational::zero(),
            term: -Rational::one(),
            order: 1,
        }
    }
}

impl Default for InvEEnclosures {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for InvEEnclosures {
    type Item = Enclosure;

    fn next(&mut self) -> Option<Enclosure> {
        self.order += 1;
        let m = BigInt::from(self.order);
        self.term = Rational(-(&self.term.0) / BigRational::from_integer(m));
        let cur = &self.prev + &self.term;
        let (lo, hi) = if self.prev < cur {
            (self.prev.clone(), cur.clone())
        } else {
            (cur.clone(), self.prev.clone())
        };
        self.prev = cur;
        Some(Enclosure {
            lo,
            hi,
            order: self.order,
        })
    }
}

/// Compares `q` with `1/e`. Never returns `Equal` since `1/e` is irrational.
pub fn cmp_inv_e(q: &Rational) -> Ordering {
    for enc in InvEEnclosures::new() {
        if q <= &enc.lo {
            return Ordering::Less;
        }
        if q >= &enc.hi {
            return Ordering::Greater;
        }
    }
    unreachable!("enclosure iterator is infinite")
}

/// True when `q` lies strictly inside `(1/e - 1, 1/e)`.
pub fn in_fraction_interval(q: &Rational) -> bool {
    cmp_inv_e(q) == Ordering::Less && cmp_inv_e(&(q + Rational::one())) == Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(r("1/2") + r("1/3"), r("5/6"));
        assert_eq!(Rational::new(2, 4).unwrap(), r("1/2"));
        assert_eq!(Rational::new(2, 4).unwrap().numer(), &BigInt::from(1));
        assert_eq!(r("-1/2") * r("-2/3"), r("1/3"));
        assert_eq!(-r("1/3"), r("-1/3"));
        assert_eq!(r("1/3") - r("1/2"), r("-1/6"));
        assert!(r("-1/2") < r("1/3"));
    }

    #[test]
    fn canonical_form() {
        let z = Rational::new(0, -7).unwrap();
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
        let q = Rational::new(6, -4).unwrap();
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(r("5/6").to_string(), "5/6");
        assert_eq!(r("-4/2").to_string(), "-2");
        assert_eq!(r("0").to_string(), "0");
        assert_eq!(r("+3/9").to_string(), "1/3");
        assert_eq!(r("\u{2212}2").to_string(), "-2");
        assert_eq!(r("0.5"), r("1/2"));
        assert_eq!(r("-1.25"), r("-5/4"));
        assert_eq!(r(".5"), r("1/2"));
        for bad in ["", "1/0", "a", "1/", "/2", "1.", "1/-2", "--1", "1.2.3", "1e3"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn enclosure_examples() {
        let e4 = inv_e_enclosure(4).unwrap();
        assert_eq!((e4.lo.clone(), e4.hi.clone()), (r("1/3"), r("3/8")));
        assert_eq!(e4.width(), r("1/24"));
        let e6 = inv_e_enclosure(6).unwrap();
        assert_eq!((e6.lo, e6.hi), (r("11/30"), r("53/144")));
        assert!(inv_e_enclosure(1).is_err());
        assert!(inv_e_enclosure(0).is_err());
    }

    #[test]
    fn incremental_matches_direct() {
        for (enc, m) in InvEEnclosures::new().zip(2..30) {
            assert_eq!(enc, inv_e_enclosure(m).unwrap());
            let width = Rational::new(1, factorial(m)).unwrap();
            assert_eq!(enc.width(), width);
            // denominators divide m!
            assert!((factorial(m) % enc.lo.denom()).is_zero());
            assert!((factorial(m) % enc.hi.denom()).is_zero());
        }
    }

    #[test]
    fn enclosures_nest() {
        let encs: Vec<_> = InvEEnclosures::new().take(25).collect();
        for w in encs.windows(2) {
            let (outer, inner) = (&w[0], &w[1]);
            assert!(outer.lo <= inner.lo && inner.hi <= outer.hi);
            assert!(inner.width() < outer.width());
        }
        // each enclosure contains every finer one's midpoint
        let last = encs.last().unwrap();
        let mid = (&last.lo + &last.hi) * r("1/2");
        for e in &encs {
            assert!(e.contains(&mid));
        }
    }

    #[test]
    fn compare_with_inv_e() {
        assert_eq!(cmp_inv_e(&r("1/3")), Ordering::Less);
        assert_eq!(cmp_inv_e(&r("3/8")), Ordering::Greater);
        assert_eq!(cmp_inv_e(&r("36787944/100000000")), Ordering::Less);
        assert_eq!(cmp_inv_e(&r("36787945/100000000")), Ordering::Greater);
        assert!(in_fraction_interval(&r("0")));
        assert!(in_fraction_interval(&r("-1/2")));
        assert!(!in_fraction_interval(&r("-2/3")));
        assert!(!in_fraction_interval(&r("1/2")));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn small() -> impl Strategy<Value = Rational> {
        (-60i64..=60, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d).unwrap())
    }

    fn big() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| Rational::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn ring_laws_small(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a - &a, Rational::zero());
        }

        #[test]
        fn ring_laws_big(a in big(), b in big(), c in big()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        }

        #[test]
        fn canonical_and_text(a in big()) {
            prop_assert!(a.denom() >= &BigInt::one());
            prop_assert!(a.numer().gcd(a.denom()).is_one());
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }

        #[test]
        fn order_is_total(a in small(), b in small()) {
            let ab = a.cmp(&b);
            prop_assert_eq!(ab.reverse(), b.cmp(&a));
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            prop_assert_eq!(ab == Ordering::Less, (&b - &a) > Rational::zero());
        }
    }
}
