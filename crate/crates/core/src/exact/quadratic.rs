use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Exact real scalar of the form `a + b*sqrt(c)` with rational `a`, `b`, `c`.
///
/// Canonical form: `c` is a nonnegative integer with no square factor below
/// 10^6; when the root collapses to a rational the number is stored with
/// `b = c = 0`. Comparisons are certified: same-radicand comparisons are
/// decided algebraically, cross-radicand ones by an exact equality test
/// followed by interval refinement of the square roots until the sign of the
/// difference is determined.
///
/// Arithmetic is only defined within a single quadratic extension: combining
/// two irrational values with different radicands panics.
#[derive(Clone)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl QuadraticNumber {
    /// Builds `a + b*sqrt(c)` in canonical form. Fails when `c < 0`.
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::Parse(format!("negative radicand {c}")));
        }
        Ok(Self::canonical(a, b, c))
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadraticNumber {
            a,
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    /// `sqrt(c)` for `c >= 0`.
    pub fn sqrt(c: Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), c)
    }

    fn canonical(a: Rational, mut b: Rational, mut c: Rational) -> Self {
        debug_assert!(!c.is_negative());
        if b.is_zero() || c.is_zero() {
            return Self::from_rational(a);
        }
        // Integerize the radicand: sqrt(p/q) = sqrt(p*q)/q.
        if !c.is_integer() {
            b = b / Rational::from_big(c.denom().clone(), BigInt::from(1)).unwrap();
            c = Rational::from_big(c.numer() * c.denom(), BigInt::from(1)).unwrap();
        }
        let mut rad = c.numer().clone();
        let mut scale = BigInt::from(1);
        // Pull out small square factors so equal values share a representation.
        let mut k = BigInt::from(2);
        let limit = BigInt::from(1000);
        while &k <= &limit && &k * &k <= rad {
            let kk = &k * &k;
            while (&rad % &kk).is_zero() {
                rad /= &kk;
                scale *= &k;
            }
            k += 1;
        }
        let root = rad.sqrt();
        if &root * &root == rad {
            // Perfect square: the whole number is rational.
            let folded = b * Rational::from_big(&scale * root, BigInt::from(1)).unwrap();
            return Self::from_rational(a + folded);
        }
        QuadraticNumber {
            a,
            b: b * Rational::from_big(scale, BigInt::from(1)).unwrap(),
            c: Rational::from_big(rad, BigInt::from(1)).unwrap(),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn root_coefficient(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Rational value when the root part vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.a.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * self.c.to_f64().sqrt()
    }

    /// Radicand shared by both operands, if they lie in one extension.
    fn joint_radicand(&self, other: &Self) -> Option<Rational> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Some(Rational::zero()),
            (false, true) => Some(self.c.clone()),
            (true, false) => Some(other.c.clone()),
            (false, false) => (self.c == other.c).then(|| self.c.clone()),
        }
    }

    fn expect_joint(&self, other: &Self, op: &str) -> Rational {
        self.joint_radicand(other).unwrap_or_else(|| {
            panic!(
                "mixed radicands in {op}: sqrt({}) vs sqrt({})",
                self.c, other.c
            )
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::canonical(&self.a * r, &self.b * r, self.c.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(a + b sqrt(c)) = (a - b sqrt(c)) / (a^2 - b^2 c); the norm is
        // nonzero because sqrt(c) is irrational in canonical form.
        let norm = &self.a * &self.a - &(&self.b * &self.b) * &self.c;
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = norm.recip()?;
        Ok(Self::canonical(
            &self.a * &inv,
            -&self.b * inv,
            self.c.clone(),
        ))
    }

    pub fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::from_rational(Rational::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Certified total-order comparison.
    pub fn compare(&self, other: &Self) -> Ordering {
        // Difference is A + B sqrt(c1) + C sqrt(c2).
        let a = &self.a - &other.a;
        sign_of_sum(&a, &self.b, &self.c, &(-&other.b), &other.c)
    }
}

/// Sign of `A + B*sqrt(c1) + C*sqrt(c2)` with canonical integer radicands.
fn sign_of_sum(a: &Rational, b: &Rational, c1: &Rational, c: &Rational, c2: &Rational) -> Ordering {
    let b_live = !b.is_zero() && !c1.is_zero();
    let c_live = !c.is_zero() && !c2.is_zero();
    match (b_live, c_live) {
        (false, false) => a.sign(),
        (true, false) => sign_one_root(a, b, c1),
        (false, true) => sign_one_root(a, c, c2),
        (true, true) => {
            if c1 == c2 {
                return sign_one_root(a, &(b + c), c1);
            }
            // Exact equality test: with distinct canonical radicands the sum
            // vanishes only when A = 0 and B sqrt(c1) = -C sqrt(c2).
            if a.is_zero()
                && b.sign() == (-c).sign()
                && &(b * b) * c1 == &(c * c) * c2
            {
                return Ordering::Equal;
            }
            // Not equal: refine enclosures of both roots until the sign of
            // the sum is pinned down.
            let mut bits = 32u64;
            loop {
                let (lo1, hi1) = sqrt_enclosure(c1, bits);
                let (lo2, hi2) = sqrt_enclosure(c2, bits);
                let (blo, bhi) = mul_interval(b, &lo1, &hi1);
                let (clo, chi) = mul_interval(c, &lo2, &hi2);
                let lo = a + &blo + &clo;
                let hi = a + &bhi + &chi;
                if lo.is_positive() {
                    return Ordering::Greater;
                }
                if hi.is_negative() {
                    return Ordering::Less;
                }
                bits *= 2;
                assert!(bits <= 1 << 20, "interval refinement failed to separate");
            }
        }
    }
}

/// Sign of `A + B*sqrt(c)` where `sqrt(c)` is irrational.
fn sign_one_root(a: &Rational, b: &Rational, c: &Rational) -> Ordering {
    let sa = a.sign();
    let sb = b.sign();
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: compare |A|^2 against |B|^2 c. Equality is impossible
    // because sqrt(c) is irrational.
    match (a * a).cmp(&(&(b * b) * c)) {
        Ordering::Greater => sa,
        _ => sb,
    }
}

/// Rational enclosure `[m, m+1]/2^bits` of `sqrt(c)` for integer `c`.
fn sqrt_enclosure(c: &Rational, bits: u64) -> (Rational, Rational) {
    let scaled = c.numer() << (2 * bits);
    let m = scaled.sqrt();
    let denom = BigInt::from(1) << bits;
    (
        Rational::from_big(m.clone(), denom.clone()).unwrap(),
        Rational::from_big(m + 1, denom).unwrap(),
    )
}

fn mul_interval(k: &Rational, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    if k.is_negative() {
        (k * hi, k * lo)
    } else {
        (k * lo, k * hi)
    }
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for QuadraticNumber {}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let c = self.expect_joint(rhs, "addition");
        QuadraticNumber::canonical(&self.a + &rhs.a, &self.b + &rhs.b, c)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let c = self.expect_joint(rhs, "subtraction");
        QuadraticNumber::canonical(&self.a - &rhs.a, &self.b - &rhs.b, c)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let c = self.expect_joint(rhs, "multiplication");
        // (a + b r)(a' + b' r) with r^2 = c.
        let a = &self.a * &rhs.a + &(&self.b * &rhs.b) * &c;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadraticNumber::canonical(a, b, c)
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
        }
    }
}

impl From<Rational> for QuadraticNumber {
    fn from(a: Rational) -> Self {
        Self::from_rational(a)
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.c);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, self.b.abs(), self.c)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.c)
        }
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for QuadraticNumber {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("QuadraticNumber", 4)?;
        s.serialize_field("a", &self.a)?;
        s.serialize_field("b", &self.b)?;
        s.serialize_field("c", &self.c)?;
        s.serialize_field("float", &self.to_f64())?;
        s.end()
    }
}

impl<'de> serde::Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            a: Rational,
            b: Rational,
            c: Rational,
        }
        let raw = Raw::deserialize(deserializer)?;
        QuadraticNumber::new(raw.a, raw.b, raw.c).map_err(serde::de::Error::custom)
    }
}
