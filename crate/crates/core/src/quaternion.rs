//! Exact arithmetic in Hamilton's quaternion algebra over ℚ.
//!
//! Elements are written `w + x·I + y·J + z·K` with `I² = J² = −1` and
//! `K = IJ = −JI`. The maximal order used throughout is the Hurwitz order
//! ℤ[I, J, (1+I+J+K)/2]: all four coordinates integral, or all four in
//! ½ + ℤ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime, val_rat};
use crate::error::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of Hamilton's quaternions over ℚ in the basis {1, I, J, K}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatQuaternion {
    pub w: BigRational,
    pub x: BigRational,
    pub y: BigRational,
    pub z: BigRational,
}

impl RatQuaternion {
    pub fn new(w: BigRational, x: BigRational, y: BigRational, z: BigRational) -> Self {
        Self { w, x, y, z }
    }

    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self::new(rat(w), rat(x), rat(y), rat(z))
    }

    pub fn from_scalar(c: BigRational) -> Self {
        Self::new(c, BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Self::from_ints(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Self::from_ints(0, 0, 0, 1)
    }

    pub fn coords(&self) -> [&BigRational; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.w.is_one() && self.is_central()
    }

    /// True iff the element lies in the center ℚ of the algebra.
    pub fn is_central(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.w * c, &self.x * c, &self.y * c, &self.z * c)
    }

    pub fn reduced_norm(&self) -> BigRational {
        self.coords().iter().map(|c| *c * *c).fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn reduced_trace(&self) -> BigRational {
        &self.w + &self.w
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.reduced_norm();
        if n.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.conjugate().scale(&n.recip()))
    }

    /// Integer power; negative exponents go through [`inverse`](Self::inverse).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn is_hurwitz(&self) -> bool {
        self.to_hurwitz().is_some()
    }

    /// The element as a [`HurwitzElement`], if it lies in the Hurwitz order
    /// and its doubled coordinates fit in an `i64`.
    pub fn to_hurwitz(&self) -> Option<HurwitzElement> {
        let mut doubled = [0i64; 4];
        for (slot, c) in doubled.iter_mut().zip(self.coords()) {
            let two_c = c * rat(2);
            if !two_c.is_integer() {
                return None;
            }
            *slot = two_c.to_integer().to_i64()?;
        }
        HurwitzElement::new(doubled[0], doubled[1], doubled[2], doubled[3]).ok()
    }

    /// The largest `e` such that `p^{−e}·q` lies in the p-local Hurwitz order.
    ///
    /// At an odd prime 2 is a unit, so this is the minimum p-adic valuation
    /// of the four coordinates.
    pub fn content_valuation(&self, p: u64) -> Result<i64> {
        check_odd_prime(p)?;
        self.coords()
            .iter()
            .filter_map(|c| val_rat(c, p))
            .min()
            .ok_or(Error::ZeroElement)
    }

    /// Height `∏_v max{1, |q|_v^{d(v)}}` as an exact rational.
    ///
    /// The archimedean factor is `max(1, N(q))`, the factor at the ramified
    /// prime 2 is `max(1, |N(q)|₂)`, and each odd prime p contributes
    /// `max(1, p^{−e_p(q)})`. The odd factors multiply to the lcm of the odd
    /// parts of the coordinate denominators.
    pub fn height(&self) -> Result<BigRational> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = self.reduced_norm();
        let arch = if n > BigRational::one() { n.clone() } else { BigRational::one() };
        let v2 = val_rat(&n, 2).expect("nonzero norm");
        let two_adic = if v2 < 0 { arith::rat_pow(2, -v2) } else { BigRational::one() };
        let odd = self
            .coords()
            .iter()
            .map(|c| arith::odd_part(c.denom()))
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        Ok(arch * two_adic * BigRational::from_integer(odd))
    }

    /// Whether `q` is an S-unit of the Hurwitz order: denominators and norm
    /// supported on the finite primes of S only.
    pub fn is_s_unit(&self, s: &SPlaceSet) -> bool {
        if self.is_zero() {
            return false;
        }
        let n = self.reduced_norm();
        for part in [n.numer(), n.denom()] {
            if !support_within(part, s) {
                return false;
            }
        }
        let mut clear = BigRational::one();
        for &l in s.primes() {
            let e = self.content_valuation(l).expect("odd prime, nonzero element");
            if e < 0 {
                clear *= arith::rat_pow(l, -e);
            }
        }
        self.scale(&clear).is_hurwitz()
    }
}

/// True iff every prime factor of `n` (including 2) is one of the S-primes.
fn support_within(n: &BigInt, s: &SPlaceSet) -> bool {
    let mut rest = n.abs();
    for &l in s.primes() {
        let l = BigInt::from(l);
        while (&rest % &l).is_zero() {
            rest /= &l;
        }
    }
    rest.is_one()
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        Err(Error::EvenPrime)
    } else if !is_prime(p) {
        Err(Error::NotPrime(p))
    } else {
        Ok(())
    }
}

impl<'a> Mul<&'a RatQuaternion> for &'a RatQuaternion {
    type Output = RatQuaternion;

    fn mul(self, o: &RatQuaternion) -> RatQuaternion {
        let (a1, b1, c1, d1) = (&self.w, &self.x, &self.y, &self.z);
        let (a2, b2, c2, d2) = (&o.w, &o.x, &o.y, &o.z);
        RatQuaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul for RatQuaternion {
    type Output = RatQuaternion;
    fn mul(self, o: RatQuaternion) -> RatQuaternion {
        &self * &o
    }
}

impl<'a> Add<&'a RatQuaternion> for &'a RatQuaternion {
    type Output = RatQuaternion;
    fn add(self, o: &RatQuaternion) -> RatQuaternion {
        RatQuaternion::new(&self.w + &o.w, &self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }
}

impl<'a> Sub<&'a RatQuaternion> for &'a RatQuaternion {
    type Output = RatQuaternion;
    fn sub(self, o: &RatQuaternion) -> RatQuaternion {
        RatQuaternion::new(&self.w - &o.w, &self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }
}

impl Neg for &RatQuaternion {
    type Output = RatQuaternion;
    fn neg(self) -> RatQuaternion {
        RatQuaternion::new(-&self.w, -&self.x, -&self.y, -&self.z)
    }
}

impl fmt::Display for RatQuaternion {
    /// Canonical text form, e.g. `-1/2 + 1/2*I - J - 3/2*K`; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        if !self.w.is_zero() {
            write!(f, "{}", self.w)?;
            first = false;
        }
        for (c, name) in [(&self.x, "I"), (&self.y, "J"), (&self.z, "K")] {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if mag.is_one() {
                f.write_str(name)?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for RatQuaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RatQuaternion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for RatQuaternion {
    type Err = Error;

    /// Parses `w + x*I + y*J + z*K` with integer or `p/q` coefficients.
    /// Whitespace is ignored, terms may appear in any order and repeated
    /// basis terms are summed.
    fn from_str(s: &str) -> Result<Self> {
        let text: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty quaternion".into()));
        }
        let mut acc = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        let mut pos = 0;
        let mut first = true;
        while pos < text.len() {
            let mut negative = false;
            match text[pos] {
                '+' => pos += 1,
                '-' => {
                    negative = true;
                    pos += 1;
                }
                _ if first => {}
                c => return Err(Error::Parse(format!("expected '+' or '-' before {c:?}"))),
            }
            first = false;
            let (coef, slot, next) = parse_term(&text, pos)?;
            pos = next;
            acc[slot] += if negative { -coef } else { coef };
        }
        let [w, x, y, z] = acc;
        Ok(Self::new(w, x, y, z))
    }
}

fn basis_slot(c: char) -> Option<usize> {
    match c {
        'I' => Some(1),
        'J' => Some(2),
        'K' => Some(3),
        _ => None,
    }
}

fn parse_term(text: &[char], mut pos: usize) -> Result<(BigRational, usize, usize)> {
    if let Some(slot) = text.get(pos).and_then(|&c| basis_slot(c)) {
        return Ok((BigRational::one(), slot, pos + 1));
    }
    let num = take_digits(text, &mut pos)?;
    let mut coef = BigRational::from_integer(num);
    if text.get(pos) == Some(&'/') {
        pos += 1;
        let den = take_digits(text, &mut pos)?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        coef /= BigRational::from_integer(den);
    }
    if text.get(pos) == Some(&'*') {
        pos += 1;
        let slot = text
            .get(pos)
            .and_then(|&c| basis_slot(c))
            .ok_or_else(|| Error::Parse("expected I, J or K after '*'".into()))?;
        return Ok((coef, slot, pos + 1));
    }
    Ok((coef, 0, pos))
}

fn take_digits(text: &[char], pos: &mut usize) -> Result<BigInt> {
    let start = *pos;
    while *pos < text.len() && text[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse(format!("expected a number at offset {start}")));
    }
    let digits: String = text[start..*pos].iter().collect();
    digits.parse().map_err(|_| Error::Parse(digits))
}

/// An element of the Hurwitz order stored by doubled coordinates:
/// the element is `(a + b·I + c·J + d·K)/2` with `a ≡ b ≡ c ≡ d (mod 2)`.
///
/// The derived ordering is lexicographic on `(a, b, c, d)`, which is the
/// canonical order for every enumeration in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HurwitzElement {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl HurwitzElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let parity = a.rem_euclid(2);
        if [b, c, d].iter().any(|v| v.rem_euclid(2) != parity) {
            return Err(Error::InvalidInput(format!(
                "doubled coordinates ({a}, {b}, {c}, {d}) have mixed parity"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// From ordinary integer coordinates.
    pub fn from_integral(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self { a: 2 * w, b: 2 * x, c: 2 * y, d: 2 * z }
    }

    pub fn one() -> Self {
        Self::from_integral(1, 0, 0, 0)
    }

    pub fn doubled(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_half_odd(&self) -> bool {
        self.a.rem_euclid(2) == 1
    }

    /// Reduced norm `(a² + b² + c² + d²)/4`; always an integer.
    pub fn norm(&self) -> u64 {
        let sq: i128 = self.doubled().iter().map(|&v| (v as i128) * (v as i128)).sum();
        (sq / 4) as u64
    }

    pub fn conjugate(&self) -> Self {
        Self { a: self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn to_rational(&self) -> RatQuaternion {
        let half = |v: i64| BigRational::new(BigInt::from(v), BigInt::from(2));
        RatQuaternion::new(half(self.a), half(self.b), half(self.c), half(self.d))
    }

    /// Coordinates in the ℤ-basis {1, I, J, ω} with ω = (1+I+J+K)/2.
    pub fn basis_coords(&self) -> [i64; 4] {
        let d = self.d;
        [(self.a - d) / 2, (self.b - d) / 2, (self.c - d) / 2, d]
    }

    fn from_basis_coords(v: [i64; 4]) -> Self {
        let [al, be, ga, de] = v;
        Self { a: 2 * al + de, b: 2 * be + de, c: 2 * ga + de, d: de }
    }

    /// Index `[𝒟 : q𝒟]`, computed as the absolute determinant of the
    /// ℤ-linear map `x ↦ q·x` on the Hurwitz lattice.
    pub fn order_index(&self) -> Result<BigUint> {
        if self.doubled() == [0; 4] {
            return Err(Error::ZeroElement);
        }
        let basis = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]].map(Self::from_basis_coords);
        // Column j holds the image of the j-th basis vector.
        let mut m = vec![vec![BigInt::zero(); 4]; 4];
        for (j, e) in basis.iter().enumerate() {
            let img = *self * *e;
            for (i, v) in img.basis_coords().into_iter().enumerate() {
                m[i][j] = BigInt::from(v);
            }
        }
        Ok(det_bareiss(m).abs().to_biguint().expect("absolute value"))
    }
}

impl Mul for HurwitzElement {
    type Output = HurwitzElement;

    fn mul(self, o: HurwitzElement) -> HurwitzElement {
        let [a1, b1, c1, d1] = self.doubled();
        let [a2, b2, c2, d2] = o.doubled();
        // (X/2)(Y/2) = XY/4, so the doubled product is XY/2.
        let p = [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ];
        debug_assert!(p.iter().all(|v| v % 2 == 0));
        HurwitzElement { a: p[0] / 2, b: p[1] / 2, c: p[2] / 2, d: p[3] / 2 }
    }
}

impl Neg for HurwitzElement {
    type Output = HurwitzElement;
    fn neg(self) -> HurwitzElement {
        HurwitzElement { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl fmt::Display for HurwitzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_rational().fmt(f)
    }
}

/// Fraction-free Gaussian elimination.
pub(crate) fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// The set S = {∞, ℓ₁, …, ℓ_h} of places: the archimedean place is always
/// present, the finite part is a sorted list of distinct odd primes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SPlaceSet {
    primes: Vec<u64>,
}

impl SPlaceSet {
    pub fn new<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self> {
        let mut primes: Vec<u64> = primes.into_iter().collect();
        for &p in &primes {
            check_odd_prime(p)?;
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(Self { primes })
    }

    /// S = {∞}.
    pub fn archimedean() -> Self {
        Self::default()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    /// Largest finite place norm, or 1 when S is purely archimedean.
    pub fn max_norm(&self) -> u64 {
        self.primes.last().copied().unwrap_or(1)
    }
}

impl fmt::Display for SPlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{∞")?;
        for p in &self.primes {
            write!(f, ",{p}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> RatQuaternion {
        s.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn basis_relations() {
        let (i, j, k) = (RatQuaternion::i(), RatQuaternion::j(), RatQuaternion::k());
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, -&k);
        assert_eq!(&i * &i, q("-1"));
        assert_eq!(&j * &j, q("-1"));
        assert_eq!(&k * &k, q("-1"));
        assert_eq!(&q("1+I") * &q("1-I"), q("2"));
    }

    #[test]
    fn norms_of_presentation_generators() {
        assert_eq!(RatQuaternion::one().reduced_norm(), r(1, 1));
        assert_eq!(q("-1 + I - J - 3*K").reduced_norm(), r(12, 1));
        assert_eq!(q("-9 - 7*I - J + 7*K").reduced_norm(), r(180, 1));
    }

    #[test]
    fn inverses() {
        assert_eq!(RatQuaternion::one().inverse().unwrap(), RatQuaternion::one());
        assert_eq!(RatQuaternion::i().inverse().unwrap(), q("-I"));
        assert_eq!(q("1+I").inverse().unwrap(), q("1/2 - 1/2*I"));
        assert_eq!(RatQuaternion::zero().inverse(), Err(Error::ZeroElement));
    }

    #[test]
    fn hurwitz_membership() {
        assert!(q("1/2 + 1/2*I + 1/2*J + 1/2*K").is_hurwitz());
        assert!(q("-1/2 + 1/2*I - 1/2*J - 3/2*K").is_hurwitz());
        assert!(!q("1/3*I").is_hurwitz());
        assert!(!q("1/2 + 1/2*I").is_hurwitz());
        assert!(q("3 - 7*K").is_hurwitz());
    }

    #[test]
    fn content_valuations() {
        assert_eq!(q("1+I").content_valuation(3), Ok(0));
        assert_eq!(q("1/3*I + 1/3*J").content_valuation(3), Ok(-1));
        assert_eq!(q("3+3*I").content_valuation(3), Ok(1));
        assert_eq!(RatQuaternion::zero().content_valuation(3), Err(Error::ZeroElement));
        assert_eq!(q("1").content_valuation(2), Err(Error::EvenPrime));
        assert_eq!(q("1").content_valuation(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn heights() {
        assert_eq!(q("1").height().unwrap(), r(1, 1));
        assert_eq!(q("I+J").height().unwrap(), r(2, 1));
        assert_eq!(q("1/3*I + 1/3*J").height().unwrap(), r(3, 1));
        // N = 1/4: 2-adic factor 4, archimedean factor 1.
        assert_eq!(q("1/2").height().unwrap(), r(4, 1));
        assert_eq!(RatQuaternion::zero().height(), Err(Error::ZeroElement));
    }

    #[test]
    fn s_units() {
        let s35 = SPlaceSet::new([3, 5]).unwrap();
        let s3 = SPlaceSet::new([3]).unwrap();
        assert!(RatQuaternion::i().is_s_unit(&SPlaceSet::archimedean()));
        assert!(RatQuaternion::i().is_s_unit(&s35));
        assert!(q("-1/2 + 1/2*I - 1/2*J - 3/2*K").is_s_unit(&s35));
        assert!(!q("1+I").is_s_unit(&s3));
        assert!(q("1/3 + 1/3*I + 1/3*J").is_s_unit(&s3));
        assert!(!q("1/3 + 1/3*I + 1/3*J").is_s_unit(&SPlaceSet::new([5]).unwrap()));
        assert!(!RatQuaternion::zero().is_s_unit(&s35));
    }

    #[test]
    fn order_indices() {
        assert_eq!(HurwitzElement::one().order_index().unwrap(), BigUint::from(1u32));
        assert_eq!(HurwitzElement::from_integral(1, 1, 0, 0).order_index().unwrap(), BigUint::from(4u32));
        assert_eq!(HurwitzElement::from_integral(1, 1, 1, 0).order_index().unwrap(), BigUint::from(9u32));
        assert_eq!(HurwitzElement::new(0, 0, 0, 0).unwrap().order_index(), Err(Error::ZeroElement));
    }

    #[test]
    fn hurwitz_parity_is_enforced() {
        assert!(HurwitzElement::new(1, 1, 1, 1).is_ok());
        assert!(HurwitzElement::new(1, 1, 1, 2).is_err());
        assert_eq!(HurwitzElement::new(1, -1, 1, 1).unwrap().norm(), 1);
    }

    #[test]
    fn text_format() {
        let cases = ["0", "1", "-I", "-1/2 + 1/2*I - J - 3/2*K", "7*K", "2/3 - 5*J"];
        for c in cases {
            assert_eq!(q(c).to_string(), c);
        }
        assert_eq!(q(" 1 +  2 * I - K + K "), RatQuaternion::from_ints(1, 2, 0, 0));
        assert_eq!(q("K + 1/2"), q("1/2 + K"));
        for bad in ["", "1 + ", "2I", "1/0", "I*J", "1 ++ I", "x"] {
            assert!(bad.parse::<RatQuaternion>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn s_place_sets() {
        let s = SPlaceSet::new([5, 3, 5]).unwrap();
        assert_eq!(s.primes(), &[3, 5]);
        assert_eq!(s.max_norm(), 5);
        assert_eq!(s.to_string(), "{∞,3,5}");
        assert_eq!(SPlaceSet::new([2]), Err(Error::EvenPrime));
        assert_eq!(SPlaceSet::new([4]), Err(Error::NotPrime(4)));
        assert_eq!(SPlaceSet::archimedean().max_norm(), 1);
    }
}
