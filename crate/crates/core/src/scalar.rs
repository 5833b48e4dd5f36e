//! Exact surds.
//!
//! [`Scalar`] is a single signed square root of a nonnegative rational, the
//! form every generator entry, `c(T)` and Clebsch-Gordan coefficient takes.
//! [`Surd`] is a finite rational combination of square roots of squarefree
//! integers; it is closed under `+` and `*`, so products of generator matrices
//! stay exact. All arithmetic is checked and reports `None` on `i128`
//! overflow, at which point callers drop to `f64`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Rational numbers used throughout.
pub type Rational = Ratio<i128>;

/// Largest integer we factor by trial division when reducing radicands.
const FACTOR_LIMIT: u128 = 1 << 62;

fn rational_to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

/// Exact square root of a nonnegative rational, if it is rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let m = q.denom().sqrt();
    if n * n == *q.numer() && m * m == *q.denom() {
        Some(Rational::new(n, m))
    } else {
        None
    }
}

/// Splits `n = s^2 * f` with `f` squarefree.
fn squarefree_split(mut n: u128) -> Option<(u128, u128)> {
    if n > FACTOR_LIMIT {
        return None;
    }
    let mut s = 1u128;
    let mut f = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            f *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    f *= n;
    Some((s, f))
}

/// `sign * sqrt(radicand)` with `radicand >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    sign: i8,
    radicand: Rational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { sign: 0, radicand: Rational::zero() }
    }

    pub fn one() -> Self {
        Scalar { sign: 1, radicand: Rational::from_integer(1) }
    }

    /// `sign * sqrt(r)`; a zero radicand forces sign 0.
    pub fn signed_sqrt(sign: i8, r: Rational) -> Self {
        assert!(!r.is_negative(), "negative radicand");
        if r.is_zero() || sign == 0 {
            Scalar::zero()
        } else {
            Scalar { sign: sign.signum(), radicand: r }
        }
    }

    pub fn sqrt(r: Rational) -> Self {
        Scalar::signed_sqrt(1, r)
    }

    /// Embeds a rational `q` as `sign(q) * sqrt(q^2)`.
    pub fn from_rational(q: Rational) -> Option<Self> {
        let sq = q.checked_mul(&q)?;
        let sign = if q.is_zero() {
            0
        } else if q.is_positive() {
            1
        } else {
            -1
        };
        Some(Scalar::signed_sqrt(sign, sq))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(n as i128)).expect("small integer")
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The square of the value, always rational.
    pub fn square(&self) -> Rational {
        self.radicand
    }

    /// The value itself when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        rational_sqrt(&self.radicand).map(|r| r * Rational::from_integer(self.sign as i128))
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * rational_to_f64(&self.radicand).sqrt()
    }

    pub fn neg(&self) -> Self {
        Scalar { sign: -self.sign, radicand: self.radicand }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Option<Scalar> {
        if self.is_zero() || other.is_zero() {
            return Some(Scalar::zero());
        }
        Some(Scalar { sign: self.sign * other.sign, radicand: self.radicand.checked_mul(&other.radicand)? })
    }

    /// Sum of two scalars whose radicands differ by a rational square factor.
    /// `None` when the sum leaves the `sign*sqrt(q)` form (or on overflow).
    pub fn try_add(&self, other: &Scalar) -> Option<Scalar> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        let t = rational_sqrt(&(self.radicand / other.radicand))?;
        // self = sa * t * sqrt(rb)
        let c = t * Rational::from_integer(self.sign as i128) + Rational::from_integer(other.sign as i128);
        let sign = if c.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        };
        Some(Scalar::signed_sqrt(sign, c.checked_mul(&c)?.checked_mul(&other.radicand)?))
    }

    pub fn to_surd(&self) -> Option<Surd> {
        Surd::from_scalar(self)
    }
}

impl fmt::Display for Scalar {
    /// Rendered as `s*sqrt(n/m)`; zero is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}*sqrt({}/{})", self.sign, self.radicand.numer(), self.radicand.denom())
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts the `Display` form, a plain rational like `-3/4`, or `sqrt(n/m)`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar `{s}`"));
        let parse_q = |t: &str| -> Result<Rational, Error> {
            let t = t.trim();
            match t.split_once('/') {
                Some((a, b)) => {
                    let a: i128 = a.trim().parse().map_err(|_| bad())?;
                    let b: i128 = b.trim().parse().map_err(|_| bad())?;
                    if b == 0 {
                        return Err(bad());
                    }
                    Ok(Rational::new(a, b))
                }
                None => t.parse::<i128>().map(Rational::from_integer).map_err(|_| bad()),
            }
        };
        if let Some(idx) = s.find("sqrt(") {
            let head = s[..idx].trim_end_matches('*').trim();
            let sign: i8 = match head {
                "" | "+" | "1" | "+1" => 1,
                "-" | "-1" => -1,
                "0" => 0,
                _ => return Err(bad()),
            };
            let inner = s[idx + 5..].strip_suffix(')').ok_or_else(bad)?;
            let r = parse_q(inner)?;
            if r.is_negative() {
                return Err(bad());
            }
            Ok(Scalar::signed_sqrt(sign, r))
        } else {
            Scalar::from_rational(parse_q(s)?).ok_or_else(bad)
        }
    }
}

/// `sum_k c_k sqrt(f_k)` over distinct squarefree `f_k`, rational `c_k`.
///
/// Distinct square roots of squarefree integers are linearly independent over
/// the rationals, so this normal form makes equality and zero tests exact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Surd {
    terms: BTreeMap<u128, Rational>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Surd { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Surd::from_rational(Rational::from_integer(n as i128))
    }

    pub fn from_scalar(s: &Scalar) -> Option<Self> {
        if s.is_zero() {
            return Some(Surd::zero());
        }
        // sqrt(n/m) = sqrt(n*m)/m
        let n = *s.radicand.numer();
        let m = *s.radicand.denom();
        let nm = n.checked_mul(m)?;
        let (sq, f) = squarefree_split(nm as u128)?;
        let coeff = Rational::new(sq as i128, m) * Rational::from_integer(s.sign as i128);
        let mut terms = BTreeMap::new();
        terms.insert(f, coeff);
        Some(Surd { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when no irrational part is present.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).copied(),
            _ => None,
        }
    }

    /// The `sign*sqrt(q)` form when only one radical is present.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (&f, c) = self.terms.iter().next()?;
                let sign = if c.is_positive() { 1 } else { -1 };
                let r = c.checked_mul(c)?.checked_mul(&Rational::from_integer(f as i128))?;
                Some(Scalar::signed_sqrt(sign, r))
            }
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(f, c)| rational_to_f64(c) * (*f as f64).sqrt()).sum()
    }

    pub fn neg(&self) -> Self {
        Surd { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }

    pub fn checked_add(&self, other: &Surd) -> Option<Surd> {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let e = terms.entry(*k).or_insert_with(Rational::zero);
            *e = e.checked_add(v)?;
            if e.is_zero() {
                terms.remove(k);
            }
        }
        Some(Surd { terms })
    }

    pub fn checked_sub(&self, other: &Surd) -> Option<Surd> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Surd) -> Option<Surd> {
        let mut out = Surd::zero();
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let h = f.gcd(g);
                let key = (f / h).checked_mul(g / h)?;
                let c = a.checked_mul(b)?.checked_mul(&Rational::from_integer(h as i128))?;
                let mut t = BTreeMap::new();
                t.insert(key, c);
                out = out.checked_add(&Surd { terms: t })?;
            }
        }
        Some(out)
    }

    pub fn checked_scale(&self, q: &Rational) -> Option<Surd> {
        if q.is_zero() {
            return Some(Surd::zero());
        }
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            terms.insert(*k, v.checked_mul(q)?);
        }
        Some(Surd { terms })
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *k == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*sqrt({k})")?;
            }
        }
        Ok(())
    }
}
