//! Exact Laurent series over the rationals.
//!
//! A [`LaurentSeries`] is a finite sum `Σ c_k t^k` together with a
//! truncation order. An element with truncation order `N` is only known
//! modulo `O(t^N)`; an element without one is an honest Laurent polynomial.
//! Every operation propagates the truncation window, so asking for a
//! coefficient that is not determined fails loudly instead of returning a
//! silent zero.
//!
//! Text format: `t^-1 + 2 + 3/2*t^2 + O(t^5)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

/// Number of correct terms used when a quotient is requested without an
/// explicit precision.
pub const DEFAULT_DIVISION_TERMS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("valuation is not determined below the truncation order t^{trunc}")]
    IndeterminateValuation { trunc: i64 },
    #[error("division by an exactly zero series")]
    DivisionByZero,
    #[error("coefficient of t^{exponent} requested, but the series is only known modulo t^{trunc}")]
    BeyondPrecision { exponent: i64, trunc: i64 },
    #[error("cannot parse Laurent series: {0}")]
    Parse(String),
}

/// Valuation of a series; `Infinite` only for the exact zero element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn add_exp(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Laurent exponent overflow")
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i64, Rational>,
    /// `None` means exact.
    trunc: Option<i64>,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        LaurentSeries {
            coeffs: BTreeMap::new(),
            trunc: None,
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The formal parameter `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_integer(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    /// `c * t^k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        LaurentSeries { coeffs, trunc: None }
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and everything at or above `trunc` is dropped.
    pub fn from_terms<I>(terms: I, trunc: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (k, c) in terms {
            if trunc.is_some_and(|n| k >= n) {
                continue;
            }
            *coeffs.entry(k).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentSeries { coeffs, trunc }
    }

    /// Truncation order, `None` when exact.
    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// True only for the exact zero element (not for `O(t^N)`).
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.trunc.is_none()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Largest stored exponent, if any.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Forgets everything at or above `t^order`.
    pub fn truncated(&self, order: i64) -> Self {
        let trunc = min_trunc(self.trunc, Some(order));
        LaurentSeries::from_terms(self.terms().map(|(k, c)| (k, c.clone())), trunc)
    }

    pub fn valuation(&self) -> Result<Valuation, LaurentError> {
        match (self.coeffs.keys().next(), self.trunc) {
            (Some(k), _) => Ok(Valuation::Finite(*k)),
            (None, None) => Ok(Valuation::Infinite),
            (None, Some(trunc)) => Err(LaurentError::IndeterminateValuation { trunc }),
        }
    }

    /// A guaranteed lower bound for the valuation; `None` for exact zero.
    fn valuation_floor(&self) -> Option<i64> {
        self.coeffs.keys().next().copied().or(self.trunc)
    }

    /// Leading coefficient and its exponent, when determined.
    pub fn leading(&self) -> Result<Option<(i64, &Rational)>, LaurentError> {
        match self.valuation()? {
            Valuation::Finite(k) => Ok(Some((k, &self.coeffs[&k]))),
            Valuation::Infinite => Ok(None),
        }
    }

    pub fn coefficient_at(&self, k: i64) -> Result<Rational, LaurentError> {
        if let Some(trunc) = self.trunc {
            if k >= trunc {
                return Err(LaurentError::BeyondPrecision { exponent: k, trunc });
            }
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (add_exp(*e, k), c.clone()))
                .collect(),
            trunc: self.trunc.map(|n| add_exp(n, k)),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentSeries::from_terms(std::iter::empty(), self.trunc);
        }
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplicative inverse with `terms` correct terms. The inverse of an
    /// exact monomial is exact.
    pub fn invert(&self, terms: usize) -> Result<Self, LaurentError> {
        let (v, lead) = match self.leading()? {
            Some((v, lead)) => (v, lead.clone()),
            None => return Err(LaurentError::DivisionByZero),
        };
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(LaurentSeries::monomial(lead.recip(), -v));
        }
        let available = self.trunc.map_or(usize::MAX, |n| (n - v) as usize);
        let terms = terms.min(available);
        let lead_inv = lead.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(terms);
        for k in 0..terms {
            if k == 0 {
                out.push(lead_inv.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for (j, b) in out.iter().enumerate() {
                let exp = v + (k - j) as i64;
                if let Some(a) = self.coeffs.get(&exp) {
                    acc += a * b;
                }
            }
            out.push(-(acc * &lead_inv));
        }
        Ok(LaurentSeries::from_terms(
            out.into_iter()
                .enumerate()
                .map(|(k, c)| (k as i64 - v, c)),
            Some(terms as i64 - v),
        ))
    }

    pub fn div(&self, rhs: &Self, terms: usize) -> Result<Self, LaurentError> {
        Ok(self * &rhs.invert(terms)?)
    }

    /// Compares leading behaviour: `Less` if `self` has strictly smaller
    /// valuation than `other`. Errors when either valuation is undetermined.
    pub fn cmp_valuation(&self, other: &Self) -> Result<Ordering, LaurentError> {
        Ok(self.valuation()?.cmp(&other.valuation()?))
    }
}

impl Default for LaurentSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for LaurentSeries {
    fn from(c: Rational) -> Self {
        LaurentSeries::constant(c)
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let trunc = min_trunc(self.trunc, rhs.trunc);
        LaurentSeries::from_terms(
            self.terms().chain(rhs.terms()).map(|(k, c)| (k, c.clone())),
            trunc,
        )
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
            trunc: self.trunc,
        }
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        let (Some(fa), Some(fb)) = (self.valuation_floor(), rhs.valuation_floor()) else {
            return LaurentSeries::zero();
        };
        let trunc = min_trunc(
            self.trunc.map(|n| add_exp(n, fb)),
            rhs.trunc.map(|n| add_exp(n, fa)),
        );
        let mut terms = Vec::with_capacity(self.coeffs.len() * rhs.coeffs.len());
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &rhs.coeffs {
                terms.push((add_exp(*ka, *kb), ca * cb));
            }
        }
        LaurentSeries::from_terms(terms, trunc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: &LaurentSeries) -> LaurentSeries {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, c: &Rational, k: i64) -> fmt::Result {
    let power = match k {
        0 => String::new(),
        1 => "t".to_string(),
        _ => format!("t^{k}"),
    };
    if k == 0 {
        write!(f, "{c}")
    } else if c.is_one() {
        f.write_str(&power)
    } else {
        write!(f, "{c}*{power}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.coeffs {
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            write_monomial(f, &c.abs(), *k)?;
        }
        match (first, self.trunc) {
            (true, None) => f.write_str("0"),
            (true, Some(n)) => write!(f, "O(t^{n})"),
            (false, Some(n)) => write!(f, " + O(t^{n})"),
            (false, None) => Ok(()),
        }
    }
}

fn parse_int(s: &str) -> Result<i64, LaurentError> {
    s.parse::<i64>()
        .map_err(|_| LaurentError::Parse(format!("bad exponent `{s}`")))
}

fn parse_power(s: &str) -> Result<i64, LaurentError> {
    match s.strip_prefix('t') {
        Some("") => Ok(1),
        Some(rest) => match rest.strip_prefix('^') {
            Some(e) => parse_int(e.trim_start_matches('(').trim_end_matches(')')),
            None => Err(LaurentError::Parse(format!("bad power `{s}`"))),
        },
        None => Err(LaurentError::Parse(format!("bad power `{s}`"))),
    }
}

fn parse_rational(s: &str) -> Result<Rational, LaurentError> {
    Rational::from_str(s).map_err(|_| LaurentError::Parse(format!("bad coefficient `{s}`")))
}

impl FromStr for LaurentSeries {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(LaurentError::Parse("empty input".into()));
        }
        // Split into signed terms; a sign directly after `^` belongs to the exponent.
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !matches!(prev, Some('^') | Some('(') | None) {
                pieces.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && prev.is_none() {
                negative = ch == '-';
            } else {
                current.push(ch);
            }
            prev = Some(ch);
        }
        pieces.push((negative, current));

        let mut terms = Vec::new();
        let mut trunc: Option<i64> = None;
        for (negative, body) in pieces {
            if body.is_empty() {
                return Err(LaurentError::Parse(format!("empty term in `{s}`")));
            }
            if let Some(inner) = body.strip_prefix("O(").and_then(|b| b.strip_suffix(')')) {
                let n = parse_power(inner)?;
                trunc = Some(trunc.map_or(n, |m| m.min(n)));
                continue;
            }
            let (coeff, k) = match body.split_once('*') {
                Some((c, p)) => (parse_rational(c)?, parse_power(p)?),
                None if body.starts_with('t') => (Rational::one(), parse_power(&body)?),
                None => (parse_rational(&body)?, 0),
            };
            terms.push((k, if negative { -coeff } else { coeff }));
        }
        Ok(LaurentSeries::from_terms(terms, trunc))
    }
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building rationals in tests and examples.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ls(s: &str) -> LaurentSeries {
        s.parse().unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(ls("t^-1 + 2").valuation().unwrap(), Valuation::Finite(-1));
        assert_eq!(LaurentSeries::zero().valuation().unwrap(), Valuation::Infinite);
        assert_eq!(ls("t^2 + t^3").valuation().unwrap(), Valuation::Finite(2));
        assert_eq!(
            ls("O(t^3)").valuation(),
            Err(LaurentError::IndeterminateValuation { trunc: 3 })
        );
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(ls("1 + t") * ls("1 - t"), ls("1 - t^2"));
        let sum = ls("t^-1") + ls("-t^-1");
        assert!(sum.is_exact_zero());
        let prod = ls("2 + t + O(t^3)") * ls("t^2");
        assert_eq!(prod, ls("2*t^2 + t^3 + O(t^5)"));
        assert_eq!(prod.trunc(), Some(5));
    }

    #[test]
    fn truncation_of_products_uses_partner_valuation() {
        let a = ls("1 + O(t^2)");
        let b = ls("t^-1 + t + O(t^3)");
        // a*b = t^-1 + ... known modulo t^min(2-1, 3+0) = t^1
        let p = &a * &b;
        assert_eq!(p.trunc(), Some(1));
        assert_eq!(p.coefficient_at(-1).unwrap(), rat(1, 1));
        // hidden zero times anything stays a hidden zero with a shifted window
        let z = ls("O(t^4)") * ls("t^-2 + 5");
        assert_eq!(z.trunc(), Some(2));
        assert!(z.valuation().is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(ls("1 + t").invert(3).unwrap(), ls("1 - t + t^2 + O(t^3)"));
        assert_eq!(ls("t").invert(7).unwrap(), ls("t^-1"));
        assert!(ls("t").invert(7).unwrap().is_exact());
        assert_eq!(ls("2 + t").invert(2).unwrap(), ls("1/2 - 1/4*t + O(t^2)"));
        assert_eq!(
            LaurentSeries::zero().invert(3),
            Err(LaurentError::DivisionByZero)
        );
    }

    #[test]
    fn invert_respects_input_precision() {
        let a = ls("t + t^2 + O(t^3)");
        let inv = a.invert(10).unwrap();
        assert_eq!(inv.trunc(), Some(1));
        assert_eq!(inv, ls("t^-1 - 1 + O(t)"));
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(ls("t^-1 + 2 + 3*t").coefficient_at(1).unwrap(), rat(3, 1));
        assert_eq!(ls("t^2").coefficient_at(0).unwrap(), rat(0, 1));
        assert_eq!(
            ls("1 + t + O(t^2)").coefficient_at(5),
            Err(LaurentError::BeyondPrecision { exponent: 5, trunc: 2 })
        );
    }

    #[test]
    fn text_format() {
        let s = ls("t^-1 + 2 + 3/2*t^2");
        assert_eq!(s.to_string(), "t^-1 + 2 + 3/2*t^2");
        assert_eq!(ls(" -t + 1 - 2/3 * t ^ -2 ").to_string(), "-2/3*t^-2 + 1 - t");
        assert_eq!(ls("0").to_string(), "0");
        assert_eq!(ls("O(t^4)").to_string(), "O(t^4)");
        assert_eq!(ls("5 + O(t^1)").to_string(), "5 + O(t^1)");
        assert!("1 + + t".parse::<LaurentSeries>().is_err());
        assert!("t^x".parse::<LaurentSeries>().is_err());
        assert!("".parse::<LaurentSeries>().is_err());
    }

    fn arb_series(max_len: usize) -> impl Strategy<Value = LaurentSeries> {
        prop::collection::vec((-4i64..6, -6i64..7, 1i64..4), 0..max_len).prop_map(|ts| {
            LaurentSeries::from_terms(ts.into_iter().map(|(k, n, d)| (k, rat(n, d))), None)
        })
    }

    fn arb_nonzero(max_len: usize) -> impl Strategy<Value = LaurentSeries> {
        arb_series(max_len).prop_filter("nonzero", |s| !s.is_exact_zero())
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in arb_nonzero(5), b in arb_nonzero(5)) {
            let va = a.valuation().unwrap().finite().unwrap();
            let vb = b.valuation().unwrap().finite().unwrap();
            prop_assert_eq!((&a * &b).valuation().unwrap(), Valuation::Finite(va + vb));
        }

        #[test]
        fn inverse_is_correct_to_requested_order(a in arb_nonzero(5), m in 1usize..8) {
            let inv = a.invert(m).unwrap();
            let err = &(&a * &inv) - &LaurentSeries::one();
            // the defect is zero below t^m, whether or not it is exact
            for k in -10..(m as i64) {
                prop_assert!(err.coefficient_at(k).unwrap().is_zero());
            }
        }

        #[test]
        fn ring_laws(a in arb_series(4), b in arb_series(4), c in arb_series(4)) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn text_round_trip(a in arb_series(6), n in prop::option::of(6i64..9)) {
            let a = match n { Some(n) => a.truncated(n), None => a };
            let back: LaurentSeries = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
