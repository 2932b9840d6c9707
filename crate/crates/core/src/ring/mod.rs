//! Finite valuation rings.
//!
//! Two families are supported:
//!
//! * `Z/p^r`, written `zpr:<p>,<r>`, with uniformizer `p`;
//! * `F_p[x]/(f^r)` for a monic irreducible `f`, written
//!   `polyq:<p>,<r>,<c0>,<c1>,...` (coefficients of `f` low-to-high), with
//!   uniformizer `f`.
//!
//! Every element is stored as a canonical code in `[0, q^r)`. For `Z/p^r`
//! the code is the least nonnegative residue; for the polynomial family it is
//! the base-`p` number whose digits are the coefficients of the fully reduced
//! representative, lowest degree first. Equality of elements is therefore
//! equality of codes.

pub(crate) mod poly;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default ceiling on how many elements `enumerate_*` will list.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

const MAX_DIGITS: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not supported: the residue field must have odd order")]
    EvenCharacteristic,
    #[error("nilpotency degree r must be at least 1")]
    BadNilpotency,
    #[error("modulus polynomial {0:?} is not monic of degree >= 1 with coefficients in [0, p)")]
    NotMonic(Vec<u64>),
    #[error("modulus polynomial {0:?} is reducible over Z/{1}")]
    Reducible(Vec<u64>, u64),
    #[error("ring order p^{digits} overflows 63 bits")]
    TooLarge { digits: u64 },
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("{0} is not a unit")]
    NotUnit(String),
    #[error("code {code} is out of range for a ring of order {order}")]
    OutOfRange { code: u64, order: u64 },
    #[error("ring of order {order} exceeds the enumeration cap {cap}; use implicit-adjacency paths instead")]
    EnumerationCap { order: u64, cap: u64 },
    #[error("cannot parse ring spec {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingFamily {
    IntegerModular,
    PolynomialQuotient,
}

/// A validated finite valuation ring. Cheap to clone.
#[derive(Clone)]
pub struct RingSpec {
    inner: Arc<RingInner>,
}

struct RingInner {
    family: RingFamily,
    p: u64,
    r: u32,
    f: Vec<u64>,
    q: u64,
    order: u64,
    // polynomial family: number of base-p digits (= r * deg f) and the monic
    // modulus f^r, low-to-high
    width: usize,
    modulus: Vec<u64>,
    digit_pow: Vec<u64>,
    tag: u64,
}

/// An element of a specific [`RingSpec`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RingElem {
    ring: u64,
    code: u64,
}

impl RingElem {
    /// Canonical code of this element.
    pub fn code(self) -> u64 {
        self.code
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Build a validated ring. `f` is ignored for the integer family.
pub fn make_ring(
    family: RingFamily,
    p: u64,
    r: u32,
    f: Option<&[u64]>,
) -> Result<RingSpec, RingError> {
    RingSpec::new(family, p, r, f)
}

impl RingSpec {
    pub fn new(family: RingFamily, p: u64, r: u32, f: Option<&[u64]>) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if p == 2 {
            return Err(RingError::EvenCharacteristic);
        }
        if r < 1 {
            return Err(RingError::BadNilpotency);
        }
        let (f, n) = match family {
            RingFamily::IntegerModular => (Vec::new(), 1u64),
            RingFamily::PolynomialQuotient => {
                let f = f.unwrap_or(&[]).to_vec();
                if f.len() < 2 || f.last() != Some(&1) || f.iter().any(|&c| c >= p) {
                    return Err(RingError::NotMonic(f));
                }
                if !poly::is_irreducible(&f, p) {
                    return Err(RingError::Reducible(f, p));
                }
                let n = (f.len() - 1) as u64;
                (f, n)
            }
        };
        let digits = n * r as u64;
        let order = checked_pow(p, digits)
            .filter(|&o| o <= i64::MAX as u64)
            .ok_or(RingError::TooLarge { digits })?;
        let q = checked_pow(p, n).expect("q divides order");

        let (width, modulus, digit_pow) = match family {
            RingFamily::IntegerModular => (0, Vec::new(), Vec::new()),
            RingFamily::PolynomialQuotient => {
                let width = digits as usize;
                if width > MAX_DIGITS {
                    return Err(RingError::TooLarge { digits });
                }
                let modulus = poly::pow(&f, r, p);
                let digit_pow = (0..width).map(|i| p.pow(i as u32)).collect();
                (width, modulus, digit_pow)
            }
        };

        let mut hasher = DefaultHasher::new();
        (family, p, r, &f).hash(&mut hasher);
        let tag = hasher.finish();

        Ok(RingSpec {
            inner: Arc::new(RingInner {
                family,
                p,
                r,
                f,
                q,
                order,
                width,
                modulus,
                digit_pow,
                tag,
            }),
        })
    }

    pub fn family(&self) -> RingFamily {
        self.inner.family
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    /// Nilpotency degree of the uniformizer.
    pub fn r(&self) -> u32 {
        self.inner.r
    }

    /// Residue-field cardinality.
    pub fn q(&self) -> u64 {
        self.inner.q
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    /// Modulus polynomial `f` (empty for the integer family).
    pub fn modulus_poly(&self) -> &[u64] {
        &self.inner.f
    }

    /// Number of units, `q^r - q^(r-1)`.
    pub fn unit_count(&self) -> u64 {
        self.order() - self.order() / self.q()
    }

    pub fn owns(&self, x: RingElem) -> bool {
        x.ring == self.inner.tag && x.code < self.inner.order
    }

    fn check(&self, x: RingElem) -> Result<u64, RingError> {
        if x.ring != self.inner.tag {
            return Err(RingError::MixedRings);
        }
        Ok(x.code)
    }

    fn wrap(&self, code: u64) -> RingElem {
        RingElem {
            ring: self.inner.tag,
            code,
        }
    }

    /// Element with the given canonical code.
    pub fn elem(&self, code: u64) -> Result<RingElem, RingError> {
        if code >= self.order() {
            return Err(RingError::OutOfRange {
                code,
                order: self.order(),
            });
        }
        Ok(self.wrap(code))
    }

    /// Element with a code already known to be in range.
    pub(crate) fn elem_unchecked(&self, code: u64) -> RingElem {
        debug_assert!(code < self.order());
        self.wrap(code)
    }

    pub fn zero(&self) -> RingElem {
        self.wrap(0)
    }

    pub fn one(&self) -> RingElem {
        self.wrap(1)
    }

    /// Image of an integer under `Z -> R`.
    pub fn from_int(&self, value: i64) -> RingElem {
        let m = match self.family() {
            RingFamily::IntegerModular => self.order(),
            RingFamily::PolynomialQuotient => self.p(),
        };
        self.wrap(value.rem_euclid(m as i64) as u64)
    }

    /// Element from polynomial coefficients (low-to-high); reduced mod `f^r`.
    /// For the integer family the coefficients are evaluated at `x = p`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> RingElem {
        let p = self.p();
        match self.family() {
            RingFamily::IntegerModular => {
                let m = self.order();
                let code = coeffs.iter().rev().fold(0u64, |acc, &c| {
                    ((acc as u128 * p as u128 + c as u128) % m as u128) as u64
                });
                self.wrap(code)
            }
            RingFamily::PolynomialQuotient => {
                let reduced: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
                let (_, rem) = poly::divrem_monic(&reduced, &self.inner.modulus, p);
                self.wrap(self.encode(&rem))
            }
        }
    }

    /// Coefficient vector of the canonical representative, length `r * deg f`
    /// for the polynomial family and `r` (base-`p` digits) for the integer family.
    pub fn coefficients(&self, x: RingElem) -> Vec<u64> {
        let p = self.p();
        let len = match self.family() {
            RingFamily::IntegerModular => self.r() as usize,
            RingFamily::PolynomialQuotient => self.inner.width,
        };
        let mut rest = x.code;
        (0..len)
            .map(|_| {
                let d = rest % p;
                rest /= p;
                d
            })
            .collect()
    }

    /// The fixed uniformizer: `p` or `f`.
    pub fn uniformizer(&self) -> RingElem {
        match self.family() {
            RingFamily::IntegerModular => {
                // r = 1: p == 0 in Z/p
                self.wrap(self.p() % self.order())
            }
            RingFamily::PolynomialQuotient => {
                let f = self.inner.f.clone();
                self.from_coeffs(&f)
            }
        }
    }

    fn decode(&self, code: u64, out: &mut [u64; MAX_DIGITS]) {
        let p = self.inner.p;
        let mut rest = code;
        for slot in out.iter_mut().take(self.inner.width) {
            *slot = rest % p;
            rest /= p;
        }
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .zip(&self.inner.digit_pow)
            .map(|(&d, &w)| d * w)
            .sum()
    }

    // ---- raw arithmetic on codes -------------------------------------

    pub(crate) fn add_code(&self, a: u64, b: u64) -> u64 {
        match self.inner.family {
            RingFamily::IntegerModular => {
                let s = a + b;
                if s >= self.inner.order {
                    s - self.inner.order
                } else {
                    s
                }
            }
            RingFamily::PolynomialQuotient => {
                let p = self.inner.p;
                let (mut x, mut y) = (a, b);
                let mut out = 0;
                for &w in &self.inner.digit_pow {
                    out += ((x % p + y % p) % p) * w;
                    x /= p;
                    y /= p;
                }
                out
            }
        }
    }

    pub(crate) fn neg_code(&self, a: u64) -> u64 {
        match self.inner.family {
            RingFamily::IntegerModular => {
                if a == 0 {
                    0
                } else {
                    self.inner.order - a
                }
            }
            RingFamily::PolynomialQuotient => {
                let p = self.inner.p;
                let mut x = a;
                let mut out = 0;
                for &w in &self.inner.digit_pow {
                    out += ((p - x % p) % p) * w;
                    x /= p;
                }
                out
            }
        }
    }

    pub(crate) fn sub_code(&self, a: u64, b: u64) -> u64 {
        self.add_code(a, self.neg_code(b))
    }

    pub(crate) fn mul_code(&self, a: u64, b: u64) -> u64 {
        match self.inner.family {
            RingFamily::IntegerModular => {
                ((a as u128 * b as u128) % self.inner.order as u128) as u64
            }
            RingFamily::PolynomialQuotient => {
                let p = self.inner.p;
                let w = self.inner.width;
                let mut da = [0u64; MAX_DIGITS];
                let mut db = [0u64; MAX_DIGITS];
                self.decode(a, &mut da);
                self.decode(b, &mut db);
                let mut prod = [0u64; 2 * MAX_DIGITS];
                for i in 0..w {
                    if da[i] == 0 {
                        continue;
                    }
                    for j in 0..w {
                        prod[i + j] = (prod[i + j] + poly::mul_mod(da[i], db[j], p)) % p;
                    }
                }
                let m = &self.inner.modulus;
                for k in (w..2 * w).rev() {
                    let coef = prod[k];
                    if coef == 0 {
                        continue;
                    }
                    for (j, &mj) in m.iter().enumerate().take(w) {
                        let idx = k - w + j;
                        prod[idx] = (prod[idx] + p - poly::mul_mod(coef, mj, p)) % p;
                    }
                    prod[k] = 0;
                }
                self.encode(&prod[..w])
            }
        }
    }

    pub(crate) fn pow_code(&self, a: u64, mut exp: u64) -> u64 {
        let mut base = a;
        let mut acc = 1 % self.inner.order;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_code(acc, base);
            }
            base = self.mul_code(base, base);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn valuation_code(&self, a: u64) -> u32 {
        let r = self.inner.r;
        if a == 0 {
            return r;
        }
        match self.inner.family {
            RingFamily::IntegerModular => {
                let mut k = 0;
                let mut x = a;
                while x % self.inner.p == 0 {
                    x /= self.inner.p;
                    k += 1;
                }
                k
            }
            RingFamily::PolynomialQuotient => {
                let p = self.inner.p;
                let mut digits = [0u64; MAX_DIGITS];
                self.decode(a, &mut digits);
                let mut cur = poly::trim(digits[..self.inner.width].to_vec());
                let mut k = 0;
                loop {
                    let (quot, rem) = poly::divrem_monic(&cur, &self.inner.f, p);
                    if !rem.is_empty() {
                        return k;
                    }
                    cur = quot;
                    k += 1;
                }
            }
        }
    }

    pub(crate) fn is_unit_code(&self, a: u64) -> bool {
        match self.inner.family {
            RingFamily::IntegerModular => a % self.inner.p != 0,
            RingFamily::PolynomialQuotient => self.valuation_code(a) == 0,
        }
    }

    /// Inverse of a unit code: residue-field inverse `a^(q-2)`, then Newton
    /// steps `b <- b(1 + e)` with `e = 1 - ab`; each step doubles the
    /// valuation of `e`.
    pub(crate) fn inv_code(&self, a: u64) -> Option<u64> {
        if !self.is_unit_code(a) {
            return None;
        }
        let one = 1 % self.inner.order;
        let mut b = self.pow_code(a, self.inner.q - 2);
        for _ in 0..64 {
            let e = self.sub_code(one, self.mul_code(a, b));
            if e == 0 {
                return Some(b);
            }
            b = self.mul_code(b, self.add_code(one, e));
        }
        None
    }

    // ---- checked element API ------------------------------------------

    pub fn add(&self, a: RingElem, b: RingElem) -> Result<RingElem, RingError> {
        Ok(self.wrap(self.add_code(self.check(a)?, self.check(b)?)))
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> Result<RingElem, RingError> {
        Ok(self.wrap(self.sub_code(self.check(a)?, self.check(b)?)))
    }

    pub fn neg(&self, a: RingElem) -> Result<RingElem, RingError> {
        Ok(self.wrap(self.neg_code(self.check(a)?)))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> Result<RingElem, RingError> {
        Ok(self.wrap(self.mul_code(self.check(a)?, self.check(b)?)))
    }

    pub fn pow(&self, a: RingElem, exp: u64) -> Result<RingElem, RingError> {
        Ok(self.wrap(self.pow_code(self.check(a)?, exp)))
    }

    /// `true` iff `a` lies outside the maximal ideal `(z)`.
    ///
    /// Panics if `a` belongs to another ring.
    pub fn is_unit(&self, a: RingElem) -> bool {
        let code = self.check(a).expect("element of another ring");
        self.is_unit_code(code)
    }

    /// Valuation in `[0, r]`, with `v(0) = r`.
    ///
    /// Panics if `a` belongs to another ring.
    pub fn valuation(&self, a: RingElem) -> u32 {
        let code = self.check(a).expect("element of another ring");
        self.valuation_code(code)
    }

    pub fn invert(&self, a: RingElem) -> Result<RingElem, RingError> {
        let code = self.check(a)?;
        let inv = self
            .inv_code(code)
            .ok_or_else(|| RingError::NotUnit(self.display(a)))?;
        debug_assert_eq!(self.mul_code(code, inv), 1 % self.order());
        Ok(self.wrap(inv))
    }

    /// `a / b` for a unit `b`.
    pub fn div(&self, a: RingElem, b: RingElem) -> Result<RingElem, RingError> {
        let inv = self.invert(b)?;
        self.mul(a, inv)
    }

    fn enumeration_guard(&self, cap: u64) -> Result<(), RingError> {
        if self.order() > cap {
            return Err(RingError::EnumerationCap {
                order: self.order(),
                cap,
            });
        }
        Ok(())
    }

    /// All elements in increasing code order.
    pub fn enumerate_elements(&self, cap: u64) -> Result<Vec<RingElem>, RingError> {
        self.enumeration_guard(cap)?;
        Ok((0..self.order()).map(|c| self.wrap(c)).collect())
    }

    /// All units in increasing code order.
    pub fn enumerate_units(&self, cap: u64) -> Result<Vec<RingElem>, RingError> {
        self.enumeration_guard(cap)?;
        Ok((0..self.order())
            .filter(|&c| self.is_unit_code(c))
            .map(|c| self.wrap(c))
            .collect())
    }

    /// Human-readable form: an integer, or a polynomial like `1+2x^2`.
    pub fn display(&self, a: RingElem) -> String {
        match self.family() {
            RingFamily::IntegerModular => a.code.to_string(),
            RingFamily::PolynomialQuotient => {
                let coeffs = self.coefficients(a);
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "x".to_string(),
                        (1, c) => format!("{c}x"),
                        (i, 1) => format!("x^{i}"),
                        (i, c) => format!("{c}x^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
        }
    }
}

fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.inner, &other.inner);
        a.family == b.family && a.p == b.p && a.r == b.r && a.f == b.f
    }
}

impl Eq for RingSpec {}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            RingFamily::IntegerModular => write!(f, "zpr:{},{}", self.p(), self.r()),
            RingFamily::PolynomialQuotient => {
                write!(f, "polyq:{},{}", self.p(), self.r())?;
                for c in &self.inner.f {
                    write!(f, ",{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingSpec({self})")
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parse_err = |reason: &str| RingError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let (kind, rest) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| parse_err("expected `zpr:` or `polyq:` prefix"))?;
        let nums: Vec<u64> = rest
            .split(',')
            .map(|s| s.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| parse_err(&e.to_string()))?;
        match kind {
            "zpr" => {
                let [p, r] = nums[..] else {
                    return Err(parse_err("expected `zpr:<p>,<r>`"));
                };
                let r = u32::try_from(r).map_err(|_| parse_err("r out of range"))?;
                RingSpec::new(RingFamily::IntegerModular, p, r, None)
            }
            "polyq" => {
                if nums.len() < 4 {
                    return Err(parse_err("expected `polyq:<p>,<r>,<f coefficients>`"));
                }
                let r = u32::try_from(nums[1]).map_err(|_| parse_err("r out of range"))?;
                RingSpec::new(RingFamily::PolynomialQuotient, nums[0], r, Some(&nums[2..]))
            }
            other => Err(parse_err(&format!("unknown ring family {other:?}"))),
        }
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9() -> RingSpec {
        "zpr:3,2".parse().unwrap()
    }

    fn f3x2() -> RingSpec {
        "polyq:3,2,0,1".parse().unwrap()
    }

    #[test]
    fn construction_examples() {
        let r = make_ring(RingFamily::IntegerModular, 3, 2, None).unwrap();
        assert_eq!((r.q(), r.order()), (3, 9));
        let r = make_ring(RingFamily::PolynomialQuotient, 3, 2, Some(&[0, 1])).unwrap();
        assert_eq!((r.q(), r.order()), (3, 9));
        assert_eq!(
            make_ring(RingFamily::IntegerModular, 4, 1, None).unwrap_err(),
            RingError::NotPrime(4)
        );
        assert_eq!(
            make_ring(RingFamily::IntegerModular, 3, 0, None).unwrap_err(),
            RingError::BadNilpotency
        );
        assert_eq!(
            make_ring(RingFamily::IntegerModular, 2, 3, None).unwrap_err(),
            RingError::EvenCharacteristic
        );
        assert!(matches!(
            make_ring(RingFamily::PolynomialQuotient, 3, 1, Some(&[2, 0, 1])),
            Err(RingError::Reducible(..))
        ));
        assert!(matches!(
            make_ring(RingFamily::PolynomialQuotient, 3, 1, Some(&[1, 2])),
            Err(RingError::NotMonic(..))
        ));
        let f9 = make_ring(RingFamily::PolynomialQuotient, 3, 1, Some(&[1, 0, 1])).unwrap();
        assert_eq!((f9.q(), f9.order()), (9, 9));
    }

    #[test]
    fn spec_text_round_trip() {
        for text in ["zpr:3,2", "zpr:101,1", "polyq:3,2,0,1", "polyq:5,1,2,0,1"] {
            let spec: RingSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!(matches!(
            "zpr:4,2".parse::<RingSpec>(),
            Err(RingError::NotPrime(4))
        ));
        assert!(matches!("foo:3,2".parse::<RingSpec>(), Err(RingError::Parse { .. })));
        assert!(matches!("zpr:3".parse::<RingSpec>(), Err(RingError::Parse { .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let r = z9();
        let e = |c| r.elem(c).unwrap();
        assert_eq!(r.add(e(4), e(7)).unwrap(), e(2));
        assert_eq!(r.mul(e(3), e(3)).unwrap(), e(0));
        assert_eq!(r.sub(e(1), e(5)).unwrap(), e(5));
        assert_eq!(r.neg(e(0)).unwrap(), e(0));

        let s = f3x2();
        let one_plus_x = s.from_coeffs(&[1, 1]);
        let one_plus_2x = s.from_coeffs(&[1, 2]);
        assert_eq!(s.mul(one_plus_x, one_plus_2x).unwrap(), s.one());
    }

    #[test]
    fn mixed_ring_operands_rejected() {
        let (a, b) = (z9(), f3x2());
        assert_eq!(a.add(a.one(), b.one()).unwrap_err(), RingError::MixedRings);
        assert_eq!(a.invert(b.one()).unwrap_err(), RingError::MixedRings);
    }

    #[test]
    fn units_and_valuation() {
        let r = z9();
        let e = |c| r.elem(c).unwrap();
        assert!(r.is_unit(e(5)));
        assert!(!r.is_unit(e(6)));
        assert_eq!(r.valuation(e(0)), 2);
        assert_eq!(r.valuation(e(3)), 1);
        assert_eq!(r.valuation(e(5)), 0);

        let s = f3x2();
        assert!(!s.is_unit(s.uniformizer()));
        assert_eq!(s.valuation(s.from_coeffs(&[0, 2])), 1);
    }

    #[test]
    fn inversion_examples() {
        let r = z9();
        assert_eq!(r.invert(r.elem(5).unwrap()).unwrap(), r.elem(2).unwrap());
        assert!(matches!(
            r.invert(r.elem(3).unwrap()),
            Err(RingError::NotUnit(_))
        ));
        let s = f3x2();
        assert_eq!(
            s.invert(s.from_coeffs(&[1, 1])).unwrap(),
            s.from_coeffs(&[1, 2])
        );
    }

    #[test]
    fn enumeration_counts() {
        for (text, elems, units) in [
            ("zpr:3,2", 9, 6),
            ("polyq:3,2,0,1", 9, 6),
            ("zpr:3,3", 27, 18),
        ] {
            let spec: RingSpec = text.parse().unwrap();
            assert_eq!(spec.enumerate_elements(DEFAULT_ENUMERATION_CAP).unwrap().len(), elems);
            assert_eq!(spec.enumerate_units(DEFAULT_ENUMERATION_CAP).unwrap().len(), units);
        }
        let big: RingSpec = "zpr:3,2".parse().unwrap();
        assert!(matches!(
            big.enumerate_elements(5),
            Err(RingError::EnumerationCap { order: 9, cap: 5 })
        ));
    }

    #[test]
    fn uniformizer_nilpotency() {
        for text in ["zpr:5,3", "polyq:3,3,1,0,1", "zpr:7,1"] {
            let s: RingSpec = text.parse().unwrap();
            let z = s.uniformizer();
            let r = s.r() as u64;
            assert_eq!(s.pow(z, r).unwrap(), s.zero());
            if r > 1 {
                assert_ne!(s.pow(z, r - 1).unwrap(), s.zero());
            }
        }
    }

    #[test]
    fn display_forms() {
        let s = f3x2();
        assert_eq!(s.display(s.from_coeffs(&[1, 2])), "1+2x");
        assert_eq!(s.display(s.zero()), "0");
        let r = z9();
        assert_eq!(r.display(r.elem(7).unwrap()), "7");
    }
}
