//! Closed-form lower-bound coefficients (all as multiples of `n/k`) and the
//! falling-factorial ratio estimate.
//!
//! | name    | coefficient                                  |
//! |---------|----------------------------------------------|
//! | `bz1`   | `1.02`                                       |
//! | `bz2`   | `(k/81)^(1/3)`                               |
//! | `thm12` | `1.64 k / (k+1)`                             |
//! | `bzr`   | `C_r k^(1/b)` with `b = C(2r-1, r)`, `C_r = (2r-1)^-(1+1/b)` |
//! | `pi`    | `Π_{j=r+1..k} j^r / (j^r - 1)`               |
//!
//! Rational coefficients are exact. Roots are enclosed between two rationals
//! obtained from integer `n`-th roots, refined until the 3-decimal rendering
//! is certain. `pi` is exact up to [`PI_EXACT_LIMIT`]; beyond that the tail of
//! the product is enclosed by integral estimates.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_u64, powi, ratio, Rational, Scalar};

/// Largest `k` for which `pi` is an exact product.
pub const PI_EXACT_LIMIT: u64 = 2000;

/// Default significant digits carried for root coefficients.
pub const ROOT_DIGITS: u32 = 30;

/// Columns of the `r = 2` comparison table.
pub const TABLE1_K: [u64; 8] = [3, 4, 5, 10, 50, 100, 200, 400];

/// Columns `(r, k)` of the multiple-twins comparison table.
pub const TABLE2_RK: [(usize, &str); 7] = [
    (3, "4"),
    (3, "10"),
    (3, "100"),
    (3, "1000"),
    (3, "10000000000"),
    (4, "10000000000"),
    (4, "10000000000000000000000000000000000000000"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundName {
    Bz1,
    Bz2,
    Thm12,
    Bzr,
    Pi,
}

impl BoundName {
    pub const ALL: [BoundName; 5] = [
        BoundName::Bz1,
        BoundName::Bz2,
        BoundName::Thm12,
        BoundName::Bzr,
        BoundName::Pi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Bz1 => "bz1",
            BoundName::Bz2 => "bz2",
            BoundName::Thm12 => "thm12",
            BoundName::Bzr => "bzr",
            BoundName::Pi => "pi",
        }
    }

    pub fn uses_r(self) -> bool {
        matches!(self, BoundName::Bzr | BoundName::Pi)
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

/// An exact value, or a certified enclosure `lower <= x <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(Rational),
    Enclosure { lower: Rational, upper: Rational },
}

impl Coefficient {
    pub fn lower(&self) -> &Rational {
        match self {
            Coefficient::Exact(q) => q,
            Coefficient::Enclosure { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            Coefficient::Exact(q) => q,
            Coefficient::Enclosure { upper, .. } => upper,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficient::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        let mid = (self.lower() + self.upper()) / Rational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// 3-decimal round-half-even rendering, if the enclosure decides it.
    pub fn render3(&self) -> Option<String> {
        let lo = render_fixed(self.lower(), 3);
        (lo == render_fixed(self.upper(), 3)).then_some(lo)
    }

    /// Decimal expansion of the lower end truncated to `sig` significant digits.
    pub fn significant_digits(&self, sig: usize) -> String {
        let q = self.lower();
        let int = q.to_integer();
        let int_digits = if int.is_zero() { 0 } else { int.to_string().len() };
        let places = sig.saturating_sub(int_digits).max(1);
        let scaled = (q * Rational::from_integer(BigInt::from(10u32).pow(places as u32)))
            .floor()
            .to_integer();
        let text = format!("{:0>width$}", scaled.to_string(), width = places + 1);
        let (a, b) = text.split_at(text.len() - places);
        let b = trim_leading_zero_budget(b, sig, int_digits);
        format!("{a}.{b}")
    }

    /// Certified order, or `None` while the enclosures overlap.
    pub fn certified_cmp(&self, other: &Coefficient) -> Option<Ordering> {
        if self.lower() > other.upper() {
            Some(Ordering::Greater)
        } else if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if self.is_exact() && other.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

// Leading zeros after the point do not count as significant.
fn trim_leading_zero_budget(frac: &str, sig: usize, int_digits: usize) -> String {
    if int_digits > 0 {
        return frac.to_string();
    }
    let zeros = frac.chars().take_while(|&c| c == '0').count();
    frac.chars().take(zeros + sig).collect()
}

/// Round-half-even of a nonnegative rational to `places` decimals.
pub fn render_fixed(q: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = q * Rational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let frac = &scaled - Rational::from_integer(floor.clone());
    let half = Rational::new(1.into(), 2.into());
    let rounded = match frac.cmp(&half) {
        Ordering::Greater => floor + 1,
        Ordering::Less => floor,
        Ordering::Equal if floor.is_even() => floor,
        Ordering::Equal => floor + 1,
    };
    let (int, rem) = rounded.div_rem(&scale);
    if places == 0 {
        return int.to_string();
    }
    format!("{int}.{:0>width$}", rem.to_string(), width = places as usize)
}

/// A named coefficient at one `(k, r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub name: BoundName,
    #[serde(serialize_with = "ser_display")]
    pub k: BigUint,
    pub r: Option<usize>,
    #[serde(skip)]
    pub coefficient: Coefficient,
    /// ≥ 30 significant digits (exact values print their expansion)
    pub digits: String,
    pub rendered: String,
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Coefficient `name` at `(k, r)`, rendered to 3 decimals.
pub fn bound_coefficient(name: BoundName, k: &BigUint, r: Option<usize>) -> Result<BoundValue> {
    let mut precision = ROOT_DIGITS + 10;
    loop {
        let coefficient = evaluate(name, k, r, precision)?;
        if let Some(rendered) = coefficient.render3() {
            let digits = coefficient.significant_digits(ROOT_DIGITS as usize);
            return Ok(BoundValue {
                name,
                k: k.clone(),
                r: if name.uses_r() { r } else { None },
                coefficient,
                digits,
                rendered,
            });
        }
        if precision > 400 || name == BoundName::Pi {
            return Err(Error::Domain(format!("cannot decide the rendering of {name} at k={k}")));
        }
        precision *= 2;
    }
}

pub fn bound_coefficient_at(name: BoundName, k: u64, r: Option<usize>) -> Result<BoundValue> {
    bound_coefficient(name, &BigUint::from(k), r)
}

/// The coefficient with root enclosures of width below `10^-precision`.
pub fn evaluate(name: BoundName, k: &BigUint, r: Option<usize>, precision: u32) -> Result<Coefficient> {
    if *k < BigUint::from(2u32) {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    let need_r = || -> Result<usize> {
        match r {
            Some(r) if r >= 2 => Ok(r),
            Some(r) => Err(Error::Domain(format!("r must be at least 2, got {r}"))),
            None => Err(Error::Domain(format!("{name} needs r"))),
        }
    };
    Ok(match name {
        BoundName::Bz1 => Coefficient::Exact(bz1()),
        BoundName::Thm12 => {
            let k = BigInt::from(k.clone());
            Coefficient::Exact(Rational::new(BigInt::from(41) * &k, BigInt::from(25) * (k + 1)))
        }
        BoundName::Bz2 => root_enclosure(&BigInt::from(k.clone()), &BigInt::from(81), 3, 1, precision),
        BoundName::Bzr => {
            let r = need_r()?;
            let d = 2 * r as u64 - 1;
            let b = binomial(d, r as u64);
            let b = u32::try_from(b).map_err(|_| Error::Domain(format!("r={r} too large")))?;
            root_enclosure(&BigInt::from(k.clone()), &BigInt::from(d), b, d, precision)
        }
        BoundName::Pi => {
            let r = need_r()?;
            if *k < BigUint::from(r) {
                return Err(Error::Domain(format!("pi needs k >= r, got k={k}, r={r}")));
            }
            pi_enclosure(r as u32, k)
        }
    })
}

pub fn bz1() -> Rational {
    ratio(51, 50)
}

/// `1.64 k / (k+1)`.
pub fn thm12<S: Scalar>(k: u64) -> S {
    ratio::<S>(41, 25) * from_u64::<S>(k) / from_u64::<S>(k + 1)
}

/// `Π_{j=r+1..k} j^r / (j^r - 1)`; the empty product when `k <= r`.
pub fn pi_product<S: Scalar>(r: u32, k: u64) -> S {
    let mut acc = S::one();
    for j in (r as u64 + 1)..=k {
        let p = powi(from_u64::<S>(j), r);
        acc = acc * p.clone() / (p - S::one());
    }
    acc
}

/// `4k / (3(k+1))`, the closed form of `Π_{j=4..k} j^2/(j^2-1)`.
pub fn telescoped_r2<S: Scalar>(k: u64) -> S {
    from_u64::<S>(4 * k) / from_u64::<S>(3 * (k + 1))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Encloses `(num/den)^(1/n) / divisor`.
fn root_enclosure(num: &BigInt, den: &BigInt, n: u32, divisor: u64, precision: u32) -> Coefficient {
    let ten = BigInt::from(10u32);
    let scaled = num * ten.clone().pow(precision * n);
    let (x, rem) = scaled.div_rem(den);
    let y = x.nth_root(n);
    let unit = Rational::new(BigInt::one(), BigInt::from(divisor) * ten.pow(precision));
    let lower = Rational::from_integer(y.clone()) * unit.clone();
    if rem.is_zero() && Pow::pow(&y, n) == x {
        return Coefficient::Exact(lower);
    }
    let upper = Rational::from_integer(y + 1) * unit;
    Coefficient::Enclosure { lower, upper }
}

fn pi_enclosure(r: u32, k: &BigUint) -> Coefficient {
    let limit = k.to_u64().filter(|&k| k <= PI_EXACT_LIMIT);
    let a = limit.unwrap_or(PI_EXACT_LIMIT);
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for j in (r as u64 + 1)..=a {
        let p = BigInt::from(j).pow(r);
        den *= &p - 1u32;
        num *= p;
    }
    let head = Rational::new(num, den);
    if limit.is_some() {
        return Coefficient::Exact(head);
    }
    // Σ_{j=a+1..k} -ln(1 - j^-r) lies in [∫_{a+1}^{k+1} x^-r dx, (1 + 2(a+1)^-r) ∫_a^k x^-r dx]
    let k = BigInt::from(k.clone());
    let inv_pow = |x: &BigInt| Rational::new(BigInt::one(), x.pow(r - 1));
    let rm1 = Rational::from_integer(BigInt::from(r - 1));
    let a = BigInt::from(a);
    let sum_lo = (inv_pow(&(&a + 1)) - inv_pow(&(&k + 1))) / rm1.clone();
    let sum_hi = (inv_pow(&a) - inv_pow(&k)) / rm1;
    let slack = Rational::one() + Rational::new(BigInt::from(2), Pow::pow(&a + 1u32, r));
    let log_hi = sum_hi * slack;
    let lower = &head * (Rational::one() + sum_lo);
    let upper = &head / (Rational::one() - log_hi);
    Coefficient::Enclosure { lower, upper }
}

/// Outcome of [`crossover_k`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind", content = "k")]
pub enum Crossover {
    /// Largest `k` with `a(k) >= b(k)`.
    At(u64),
    /// `a >= b` at every scanned `k` up to the limit.
    LimitReached(u64),
    /// `a < b` already at the first scanned `k`.
    Never,
}

/// Largest `k <= limit` with `a(k) >= b(k)`.
///
/// Every `k` up to 1024 is checked; past that the scan doubles `k` and
/// bisects the first bracket where the comparison flips, which presumes a
/// single change of sign there (true for the monotone pairs tabulated here).
pub fn crossover_k(a: BoundName, b: BoundName, r: Option<usize>, limit: u64) -> Result<Crossover> {
    let start = match (a.uses_r() || b.uses_r(), r) {
        (true, Some(r)) => (r as u64).max(2),
        _ => 2,
    };
    let at_least = |k: u64| -> Result<bool> { compare(a, b, k, r).map(|o| o != Ordering::Less) };
    let mut last = None;
    let dense = limit.min(1024);
    for k in start..=dense {
        if at_least(k)? {
            last = Some(k);
        }
    }
    let mut prev = dense;
    let mut prev_ok = last == Some(dense);
    while prev < limit {
        let next = prev.saturating_mul(2).min(limit);
        let ok = at_least(next)?;
        if prev_ok && !ok {
            let (mut lo, mut hi) = (prev, next);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if at_least(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            last = Some(lo);
        } else if ok {
            last = Some(next);
        }
        prev = next;
        prev_ok = ok;
    }
    Ok(match last {
        None => Crossover::Never,
        Some(k) if k == limit => Crossover::LimitReached(limit),
        Some(k) => Crossover::At(k),
    })
}

fn compare(a: BoundName, b: BoundName, k: u64, r: Option<usize>) -> Result<Ordering> {
    let k = BigUint::from(k);
    let mut precision = 20;
    loop {
        let x = evaluate(a, &k, r, precision)?;
        let y = evaluate(b, &k, r, precision)?;
        if let Some(o) = x.certified_cmp(&y) {
            return Ok(o);
        }
        if precision >= 320 {
            // enclosures of `pi` cannot shrink further; use the midpoints
            return Ok(x.to_f64().partial_cmp(&y.to_f64()).unwrap_or(Ordering::Equal));
        }
        precision *= 2;
    }
}

/// Falling-factorial ratio against its power approximation.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BinomRatio {
    #[serde(serialize_with = "ser_display")]
    pub exact: Rational,
    pub approx: f64,
    pub rel_error: f64,
}

/// `C(N-ℓ, M-ℓ)/C(N, M) = Π_{i<ℓ} (M-i)/(N-i)` against `(M/N)^ℓ`.
pub fn binom_ratio(n: u64, m: u64, ell: u64) -> Result<BinomRatio> {
    if !(ell <= m && m <= n) || n == 0 {
        return Err(Error::Domain(format!(
            "binom_ratio needs 0 <= l <= M <= N, N > 0; got N={n}, M={m}, l={ell}"
        )));
    }
    let exact: Rational = falling_ratio(n, m, ell);
    let approx_q = powi(ratio::<Rational>(m, n), ell as u32);
    let rel = if exact.is_zero() {
        Rational::zero()
    } else {
        (&exact - &approx_q).abs() / &exact
    };
    Ok(BinomRatio {
        approx: approx_q.to_f64().unwrap_or(f64::NAN),
        rel_error: rel.to_f64().unwrap_or(f64::NAN),
        exact,
    })
}

/// `Π_{i<ℓ} (M-i)/(N-i)` in any scalar type.
pub fn falling_ratio<S: Scalar>(n: u64, m: u64, ell: u64) -> S {
    (0..ell).fold(S::one(), |acc, i| acc * ratio::<S>(m - i, n - i))
}
