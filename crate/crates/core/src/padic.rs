//! Elements of `Q_p` at fixed absolute precision.
//!
//! A nonzero value is stored as `p^v * u` where `u` is a unit known modulo
//! `p^(N - v)`; `N` is the guaranteed absolute precision of the value. A
//! value indistinguishable from zero is the distinguished `O(p^N)`, which
//! only carries the bound. All norms and valuations are exact powers of `p`
//! and arithmetic never touches floating point.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("operands belong to different contexts (p = {0} vs p = {1})")]
    ContextMismatch(u64, u64),
    #[error("value is indistinguishable from zero at the working precision")]
    PrecisionExhausted,
    #[error("value has negative valuation, not in the ring of integers")]
    NotIntegral,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision must be at least 1, got {0}")]
    BadPrecision(i64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Shared `(p, N)` pair for a family of computations. Default precision is 32.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    prime: u64,
    precision: i64,
}

pub const DEFAULT_PRECISION: i64 = 32;

impl PrecisionContext {
    pub fn new(prime: u64, precision: i64) -> Result<Self, PadicError> {
        if !is_prime(prime) {
            return Err(PadicError::NotPrime(prime));
        }
        if precision < 1 {
            return Err(PadicError::BadPrecision(precision));
        }
        Ok(Self { prime, precision })
    }

    pub fn with_default_precision(prime: u64) -> Result<Self, PadicError> {
        Self::new(prime, DEFAULT_PRECISION)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }
}

/// `p^k` as a big integer; `k` must be nonnegative.
fn pow_p(p: u64, k: i64) -> BigUint {
    debug_assert!(k >= 0);
    BigUint::from(p).pow(k as u32)
}

/// Inverse of `a` modulo `m` (`gcd(a, m) = 1`).
fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one(), "mod_inverse of a non-unit");
    let r = e.x.mod_floor(&m);
    r.to_biguint().expect("mod_floor of positive modulus")
}

/// Exact absolute value `|x|_p`, either a known power of `p` or a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsValue {
    /// `|x| = p^exponent`.
    Exact(i64),
    /// `|x| <= p^exponent` (precision-zero value).
    AtMost(i64),
}

impl AbsValue {
    pub fn exponent(&self) -> i64 {
        match self {
            AbsValue::Exact(e) | AbsValue::AtMost(e) => *e,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AbsValue::Exact(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Unit {
    valuation: i64,
    /// Unit part, `0 < digits < p^(precision - valuation)`, not divisible by p.
    digits: BigUint,
}

/// An element of `Q_p` known modulo `p^N` where `N` is `self.precision()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicNumber {
    prime: u64,
    precision: i64,
    repr: Option<Unit>,
}

impl PadicNumber {
    /// The distinguished precision-zero value `O(p^N)`.
    pub fn precision_zero(ctx: &PrecisionContext) -> Self {
        Self {
            prime: ctx.prime,
            precision: ctx.precision,
            repr: None,
        }
    }

    fn precision_zero_raw(prime: u64, precision: i64) -> Self {
        Self {
            prime,
            precision,
            repr: None,
        }
    }

    /// Canonicalizing constructor: the value `p^base_val * value`, known
    /// modulo `p^precision` absolutely (so `value` matters modulo
    /// `p^(precision - base_val)`).
    fn from_shifted(prime: u64, precision: i64, base_val: i64, value: BigInt) -> Self {
        let rel = precision - base_val;
        if rel <= 0 {
            return Self::precision_zero_raw(prime, precision);
        }
        let modulus = BigInt::from(pow_p(prime, rel));
        let mut v = value.mod_floor(&modulus);
        if v.is_zero() {
            return Self::precision_zero_raw(prime, precision);
        }
        let p = BigInt::from(prime);
        let mut shift = 0i64;
        while (&v % &p).is_zero() {
            v /= &p;
            shift += 1;
        }
        let valuation = base_val + shift;
        if valuation >= precision {
            return Self::precision_zero_raw(prime, precision);
        }
        let digits = v.to_biguint().expect("mod_floor is nonnegative");
        Self {
            prime,
            precision,
            repr: Some(Unit { valuation, digits }),
        }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::precision_zero(ctx)
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self::from_integer(1, ctx)
    }

    pub fn from_integer(n: i64, ctx: &PrecisionContext) -> Self {
        Self::from_shifted(ctx.prime, ctx.precision, 0, BigInt::from(n))
    }

    pub fn from_bigint(n: &BigInt, ctx: &PrecisionContext) -> Self {
        Self::from_shifted(ctx.prime, ctx.precision, 0, n.clone())
    }

    /// Image of `num/den` in `Q_p` at the context precision. The valuation is
    /// `v_p(num) - v_p(den)`, computed exactly.
    pub fn from_rational(num: i64, den: i64, ctx: &PrecisionContext) -> Result<Self, PadicError> {
        Self::from_big_rational(&BigInt::from(num), &BigInt::from(den), ctx)
    }

    pub fn from_big_rational(
        num: &BigInt,
        den: &BigInt,
        ctx: &PrecisionContext,
    ) -> Result<Self, PadicError> {
        if den.is_zero() {
            return Err(PadicError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::precision_zero(ctx));
        }
        let p = BigInt::from(ctx.prime);
        let mut n = num.clone();
        let mut vn = 0i64;
        while (&n % &p).is_zero() {
            n /= &p;
            vn += 1;
        }
        let mut d = den.clone();
        let mut vd = 0i64;
        while (&d % &p).is_zero() {
            d /= &p;
            vd += 1;
        }
        let valuation = vn - vd;
        let rel = ctx.precision - valuation;
        if rel <= 0 {
            return Ok(Self::precision_zero(ctx));
        }
        let modulus = BigInt::from(pow_p(ctx.prime, rel));
        let d_mod = d
            .mod_floor(&modulus)
            .to_biguint()
            .expect("nonnegative residue");
        let d_inv = BigInt::from(mod_inverse(&d_mod, &pow_p(ctx.prime, rel)));
        Ok(Self::from_shifted(
            ctx.prime,
            ctx.precision,
            valuation,
            n * d_inv,
        ))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Guaranteed absolute precision: the value is known modulo `p^N`.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// `None` for the precision-zero value (valuation at least `N`).
    pub fn valuation(&self) -> Option<i64> {
        self.repr.as_ref().map(|u| u.valuation)
    }

    pub fn unit_digits(&self) -> Option<&BigUint> {
        self.repr.as_ref().map(|u| &u.digits)
    }

    pub fn is_precision_zero(&self) -> bool {
        self.repr.is_none()
    }

    /// `|x|_p` as an exact power of `p`, or the bound for precision-zero.
    pub fn abs_value(&self) -> AbsValue {
        match &self.repr {
            Some(u) => AbsValue::Exact(-u.valuation),
            None => AbsValue::AtMost(-self.precision),
        }
    }

    fn check_context(&self, other: &Self) -> Result<(), PadicError> {
        if self.prime != other.prime {
            return Err(PadicError::ContextMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_context(other)?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_context(other)?;
        Ok(self.mul(other))
    }

    /// Sum, exact modulo `p^min(Nx, Ny)`.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "context mismatch");
        let precision = self.precision.min(other.precision);
        match (&self.repr, &other.repr) {
            (None, None) => Self::precision_zero_raw(self.prime, precision),
            (Some(u), None) | (None, Some(u)) => Self::from_shifted(
                self.prime,
                precision,
                u.valuation,
                BigInt::from(u.digits.clone()),
            ),
            (Some(ux), Some(uy)) => {
                let m = ux.valuation.min(uy.valuation);
                let zx = BigInt::from(ux.digits.clone())
                    * BigInt::from(pow_p(self.prime, ux.valuation - m));
                let zy = BigInt::from(uy.digits.clone())
                    * BigInt::from(pow_p(self.prime, uy.valuation - m));
                Self::from_shifted(self.prime, precision, m, zx + zy)
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            None => self.clone(),
            Some(u) => Self::from_shifted(
                self.prime,
                self.precision,
                u.valuation,
                -BigInt::from(u.digits.clone()),
            ),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; valuations add, relative precisions take the minimum.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "context mismatch");
        match (&self.repr, &other.repr) {
            (None, None) => Self::precision_zero_raw(self.prime, self.precision + other.precision),
            (Some(u), None) => {
                Self::precision_zero_raw(self.prime, u.valuation + other.precision)
            }
            (None, Some(u)) => Self::precision_zero_raw(self.prime, u.valuation + self.precision),
            (Some(ux), Some(uy)) => {
                let v = ux.valuation + uy.valuation;
                let rel = (self.precision - ux.valuation).min(other.precision - uy.valuation);
                Self::from_shifted(
                    self.prime,
                    v + rel,
                    v,
                    BigInt::from(&ux.digits * &uy.digits),
                )
            }
        }
    }

    /// Multiplicative inverse. The relative precision is preserved, so the
    /// absolute precision of the result is `N - 2v`.
    pub fn inv(&self) -> Result<Self, PadicError> {
        let u = self.repr.as_ref().ok_or(PadicError::PrecisionExhausted)?;
        let rel = self.precision - u.valuation;
        let modulus = pow_p(self.prime, rel);
        let digits = mod_inverse(&u.digits, &modulus);
        Ok(Self {
            prime: self.prime,
            precision: rel - u.valuation,
            repr: Some(Unit {
                valuation: -u.valuation,
                digits,
            }),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Image in the residue field `F_p`; requires `x` integral.
    pub fn residue(&self) -> Result<crate::residue::ResidueElement, PadicError> {
        match &self.repr {
            None => {
                // O(p^N) with N >= 1 sits in pZ_p.
                if self.precision < 1 {
                    return Err(PadicError::PrecisionExhausted);
                }
                Ok(crate::residue::ResidueElement::new(self.prime, 0))
            }
            Some(u) => {
                if u.valuation < 0 {
                    return Err(PadicError::NotIntegral);
                }
                if u.valuation > 0 {
                    Ok(crate::residue::ResidueElement::new(self.prime, 0))
                } else {
                    let r = (&u.digits % BigUint::from(self.prime))
                        .to_u64_digits()
                        .first()
                        .copied()
                        .unwrap_or(0);
                    Ok(crate::residue::ResidueElement::new(self.prime, r))
                }
            }
        }
    }

    /// True when `self - other` is indistinguishable from zero.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        self.sub(other).is_precision_zero()
    }

    /// Drop the guaranteed precision to `precision` (never raises it).
    pub fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        match &self.repr {
            None => Self::precision_zero_raw(self.prime, precision),
            Some(u) => Self::from_shifted(
                self.prime,
                precision,
                u.valuation,
                BigInt::from(u.digits.clone()),
            ),
        }
    }

    /// Base-p digits of the unit part, least significant first.
    pub fn unit_digit_expansion(&self) -> Vec<u64> {
        match &self.repr {
            None => Vec::new(),
            Some(u) => {
                let mut digits = Vec::new();
                let mut v = u.digits.clone();
                let p = BigUint::from(self.prime);
                while !v.is_zero() {
                    let d = (&v % &p).to_u64_digits().first().copied().unwrap_or(0);
                    digits.push(d);
                    v /= &p;
                }
                digits
            }
        }
    }

    /// The canonical integer representative of the unit part.
    pub fn unit_bigint(&self) -> Option<BigInt> {
        self.repr
            .as_ref()
            .map(|u| BigInt::from(u.digits.clone()))
    }

    /// If the value is a p-adic integer times a power of p with small unit,
    /// render it as the exact rational it equals modulo `p^N`.
    pub fn to_value_bigint(&self) -> Option<(i64, BigInt)> {
        self.repr
            .as_ref()
            .map(|u| (u.valuation, BigInt::from(u.digits.clone())))
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            None => write!(f, "O({}^{})", self.prime, self.precision),
            Some(u) => {
                let digits = self.unit_digit_expansion();
                let terms: Vec<String> = digits
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| **d != 0)
                    .map(|(i, d)| match i {
                        0 => format!("{d}"),
                        1 => {
                            if *d == 1 {
                                format!("{}", self.prime)
                            } else {
                                format!("{}*{}", d, self.prime)
                            }
                        }
                        _ => {
                            if *d == 1 {
                                format!("{}^{}", self.prime, i)
                            } else {
                                format!("{}*{}^{}", d, self.prime, i)
                            }
                        }
                    })
                    .collect();
                let unit = terms.join(" + ");
                if u.valuation == 0 {
                    write!(f, "({}) + O({}^{})", unit, self.prime, self.precision)
                } else {
                    write!(
                        f,
                        "{}^{}*({}) + O({}^{})",
                        self.prime, u.valuation, unit, self.prime, self.precision
                    )
                }
            }
        }
    }
}

/// Parse a rational string `"num"` or `"num/den"` into big integers.
pub fn parse_rational(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some((num, den))
}

/// `v_p` of a big integer; `None` for zero.
pub fn bigint_valuation(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.abs();
    while (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    Some(v)
}

/// `|num/den|_p` exponent: `v_p(den) - v_p(num)`.
pub fn rational_abs_exponent(num: &BigInt, den: &BigInt, p: u64) -> Option<i64> {
    let vn = bigint_valuation(num, p)?;
    let vd = bigint_valuation(den, p).expect("nonzero denominator");
    Some(vd - vn)
}

#[allow(unused)]
fn sign_ok(s: Sign) -> bool {
    s != Sign::Minus
}
