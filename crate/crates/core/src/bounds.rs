//! Explicit constants for the height bound on generators of S-unit groups
//! of a central simple division algebra, computed for an arbitrary algebra
//! shape `(n, d, s, r1, r2, covolume)` in arbitrary-precision arithmetic.
//!
//! The convex body is the product of balls `X(c)`, with `c` chosen so that
//! Minkowski's lattice point theorem applies to the maximal order. From
//! `c` the engine derives the archimedean norm bound `m_X`, the constants
//! `T1`–`T6`, the archimedean factor `μ1`, and finally the two height
//! bounds: the general one (`μ1·T6·T3·T3'·T4`) and the closed form
//! `f2·m'·covolume^e`.
//!
//! `covolume` is `Vol(B_ℝ/𝒟)`, i.e. the square root of the absolute
//! discriminant of the order. For the Hurwitz order it is 2.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::factorial;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_DIGITS: u32 = 64;
/// Below this many digits the advertised 10⁻³⁰ error bound would not hold.
pub const MIN_PRECISION_DIGITS: u32 = 34;
pub const MAX_PRECISION_DIGITS: u32 = 10_000;

const RM: RoundingMode = RoundingMode::ToEven;

/// Archimedean place types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaceKind {
    /// Real place where the algebra splits: `B_v ≅ M_d(ℝ)`.
    RealSplit,
    /// Complex place: `B_v ≅ M_d(ℂ)`.
    Complex,
    /// Real place where the algebra ramifies: `B_v ≅ M_{d/2}(ℍ)`.
    RamifiedH,
}

impl PlaceKind {
    /// `[k_v : ℝ]`.
    pub fn local_degree(self) -> u32 {
        match self {
            PlaceKind::Complex => 2,
            _ => 1,
        }
    }
}

/// Upper bounds for the minimal constants `δ1(A_v, m)`, `δ2(A_v, m)`:
/// `δ1 ≤ m^{[k_v:ℝ]}`, `δ2 ≤ 2^{[k_v:ℝ]m(m−1)}`, and when `A_v = k_v`
/// also `δ2 ≤ ((m−1)!)^{[k_v:ℝ]}`. The smaller bound is returned.
pub fn delta_bounds(kind: PlaceKind, m: u32) -> Result<(BigUint, BigUint)> {
    if m == 0 {
        return Err(Error::InvalidInput("matrix size m must be at least 1".into()));
    }
    let deg = kind.local_degree() as usize;
    let delta1 = num_traits::pow(BigUint::from(m), deg);
    let generic = num_traits::pow(BigUint::from(2u32), deg * (m as usize) * (m as usize - 1));
    let delta2 = match kind {
        PlaceKind::RamifiedH => generic,
        _ => generic.min(num_traits::pow(factorial(m - 1), deg)),
    };
    Ok((delta1, delta2))
}

/// How the covolume `Vol(B_ℝ/𝒟)` was supplied.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Covolume {
    Rational(BigRational),
    /// Square root of a positive rational (typically a discriminant).
    Sqrt(BigRational),
    /// Decimal literal, parsed at engine precision.
    Decimal(String),
}

impl Covolume {
    pub fn from_int(n: i64) -> Self {
        Covolume::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn sqrt_of(n: i64) -> Self {
        Covolume::Sqrt(BigRational::from_integer(BigInt::from(n)))
    }

    fn is_positive(&self) -> bool {
        match self {
            Covolume::Rational(r) | Covolume::Sqrt(r) => r.is_positive(),
            Covolume::Decimal(s) => {
                let t = s.trim_start_matches('+');
                !t.starts_with('-') && t.chars().any(|c| c.is_ascii_digit() && c != '0')
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            let n: BigInt = n.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.trim().parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl FromStr for Covolume {
    type Err = Error;

    /// Accepts `7`, `22/7`, `sqrt(5)`, `sqrt(5/3)` and decimal literals
    /// such as `2.2360679` or `1.5e3`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let cov = if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            Covolume::Sqrt(parse_rational(inner).ok_or_else(|| Error::Parse(format!("bad radicand {inner:?}")))?)
        } else if let Some(r) = parse_rational(t) {
            Covolume::Rational(r)
        } else {
            let ok = !t.is_empty()
                && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
                && t.chars().any(|c| c.is_ascii_digit());
            if !ok {
                return Err(Error::Parse(format!("bad covolume {t:?}")));
            }
            Covolume::Decimal(t.to_string())
        };
        Ok(cov)
    }
}

impl fmt::Display for Covolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Covolume::Rational(r) => write!(f, "{r}"),
            Covolume::Sqrt(r) => write!(f, "sqrt({r})"),
            Covolume::Decimal(s) => f.write_str(s),
        }
    }
}

impl Serialize for Covolume {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Covolume {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
            Float(f64),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(s) => s,
            Raw::Int(i) => i.to_string(),
            Raw::Float(x) => x.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Shape data of a central simple division algebra of degree `d` over a
/// number field of degree `n`, with `s` ramified real places.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraShape {
    pub n: u32,
    pub d: u32,
    pub s: u32,
    pub r1: u32,
    pub r2: u32,
    pub covolume: Covolume,
}

impl AlgebraShape {
    pub fn new(n: u32, d: u32, s: u32, r1: u32, r2: u32, covolume: Covolume) -> Result<Self> {
        let shape = Self { n, d, s, r1, r2, covolume };
        shape.validate()?;
        Ok(shape)
    }

    /// Hamilton's quaternions over ℚ with the Hurwitz order.
    pub fn hurwitz() -> Self {
        Self { n: 1, d: 2, s: 1, r1: 1, r2: 0, covolume: Covolume::from_int(2) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidShape(m));
        if self.n == 0 || self.d == 0 {
            return bad("n and d must be positive".into());
        }
        if self.n != self.r1 + 2 * self.r2 {
            return bad(format!("n = {} but r1 + 2·r2 = {}", self.n, self.r1 + 2 * self.r2));
        }
        if self.s > self.r1 {
            return bad(format!("s = {} exceeds r1 = {}", self.s, self.r1));
        }
        if self.s > 0 && (self.d < 2 || self.d % 2 == 1) {
            return bad(format!("a ramified real place needs even d ≥ 2, got d = {}", self.d));
        }
        if !self.covolume.is_positive() {
            return bad(format!("covolume {} must be positive", self.covolume));
        }
        Ok(())
    }

    /// Archimedean places present, with multiplicities.
    pub fn places(&self) -> [(PlaceKind, u32); 3] {
        [
            (PlaceKind::RealSplit, self.r1 - self.s),
            (PlaceKind::RamifiedH, self.s),
            (PlaceKind::Complex, self.r2),
        ]
    }

    /// `m(v)`: size of the matrix algebra at an archimedean place.
    pub fn matrix_size(&self, kind: PlaceKind) -> u32 {
        match kind {
            PlaceKind::RamifiedH => self.d / 2,
            _ => self.d,
        }
    }

    /// `d(v)`: degree of the local division algebra at an archimedean place.
    pub fn local_division_degree(&self, kind: PlaceKind) -> u32 {
        match kind {
            PlaceKind::RamifiedH => 2,
            _ => 1,
        }
    }

    /// `e = 2n / (d(2n − s))`, exact.
    pub fn exponent_e(&self) -> BigRational {
        BigRational::new(BigInt::from(2 * self.n), BigInt::from(self.d * (2 * self.n - self.s)))
    }
}

/// `((d−1)!·d)^n · (d·2^{(d/2)(d−2)} / (4(d−1)!))^s`, exact.
pub fn mu1_bound(shape: &AlgebraShape) -> BigRational {
    let d = shape.d;
    let fact = BigInt::from(factorial(d - 1));
    let leading = BigRational::from_integer(num_traits::pow(&fact * BigInt::from(d), shape.n as usize));
    if shape.s == 0 {
        return leading;
    }
    let two_pow = num_traits::pow(BigInt::from(2), ((d / 2) * (d - 2)) as usize);
    let ramified = BigRational::new(BigInt::from(d) * two_pow, BigInt::from(4) * fact);
    leading * num_traits::pow(ramified, shape.s as usize)
}

/// An arbitrary-precision real tagged with the number of significant
/// decimal digits it is reported to.
#[derive(Clone, Debug)]
pub struct Real {
    value: BigFloat,
    digits: u32,
}

impl Real {
    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    /// Decimal rendering with the tagged number of significant digits.
    pub fn to_decimal(&self) -> String {
        format_decimal(&self.value, self.digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal().parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal())
    }
}

/// Rounds to `digits` significant decimal digits (half-up on the digit
/// expansion) and renders plainly, or in scientific notation for very
/// large or small magnitudes. Trailing zeros are dropped.
pub fn format_decimal(x: &BigFloat, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut cc = Consts::new().expect("constant cache");
    let Ok((sign, mut mant, mut exp)) = x.convert_to_radix(Radix::Dec, RoundingMode::None, &mut cc) else {
        return "NaN".into();
    };
    let digits = digits as usize;
    if mant.len() > digits {
        let round_up = mant[digits] >= 5;
        mant.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    mant.insert(0, 1);
                    mant.truncate(digits);
                    exp += 1;
                    break;
                }
                i -= 1;
                if mant[i] == 9 {
                    mant[i] = 0;
                } else {
                    mant[i] += 1;
                    break;
                }
            }
        }
    }
    while mant.len() > 1 && mant.last() == Some(&0) {
        mant.pop();
    }
    let sgn = if sign == Sign::Neg { "-" } else { "" };
    let ds: String = mant.iter().map(|d| char::from(b'0' + d)).collect();
    // value = 0.ds × 10^exp
    let exp = exp as i64;
    let body = if (-20..=40).contains(&exp) {
        if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), ds)
        } else if (exp as usize) >= ds.len() {
            format!("{}{}", ds, "0".repeat(exp as usize - ds.len()))
        } else {
            format!("{}.{}", &ds[..exp as usize], &ds[exp as usize..])
        }
    } else {
        let (head, tail) = ds.split_at(1);
        if tail.is_empty() {
            format!("{head}e{}", exp - 1)
        } else {
            format!("{head}.{tail}e{}", exp - 1)
        }
    };
    format!("{sgn}{body}")
}

/// The constants `T1`–`T6`.
#[derive(Clone, Debug, Serialize)]
pub struct TConstants {
    pub t1: Real,
    pub t2: Real,
    pub t3: Real,
    pub t3prime: Real,
    pub t4: Real,
    pub t5: Real,
    /// `max_W T1^{a(W)} T2^{b(W)} T5^{b(V∞∖W)}` over subsets W of the
    /// archimedean places.
    pub t6: Real,
    /// The coarser closed-form bound `m'·max{1, (cd)^{nd}}` on `T6`.
    pub t6_closed_form_bound: Real,
    /// `m'_{S_f}`.
    pub m_prime: Real,
}

/// Everything the engine derives for one shape and one set of finite places.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub shape: AlgebraShape,
    /// Residue-field sizes of the finite places in S.
    pub finite_place_norms: Vec<u64>,
    pub precision_digits: u32,
    /// Relative error bound on every reported real.
    pub relative_error_bound: String,
    pub covolume: Real,
    pub discriminant: Real,
    pub z: Real,
    pub c: Real,
    pub c_lt_one: bool,
    pub m_x: Real,
    pub m_x_paper: Real,
    #[serde(serialize_with = "serialize_display")]
    pub e: BigRational,
    pub t1: Real,
    pub t2: Real,
    pub t3: Real,
    pub t3prime: Real,
    pub t4: Real,
    pub t5: Real,
    pub t6: Real,
    pub t6_closed_form_bound: Real,
    pub m_prime: Real,
    pub mu1_bound: Real,
    /// S must contain every finite place of norm ≤ this threshold (`m_X^{1/d}`).
    pub place_threshold: Real,
    /// Outward-rounded integer form of `place_threshold`.
    #[serde(serialize_with = "serialize_display")]
    pub max_required_place_norm: BigInt,
    pub height_bound_thm43: Real,
    pub f1: Option<Real>,
    pub f2: Option<Real>,
    /// `f1·covolume^e`, the closed-form place threshold.
    pub place_threshold_closed_form: Option<Real>,
    pub height_bound_thm51: Option<Real>,
}

fn serialize_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Arbitrary-precision evaluator for the bound constants.
pub struct BoundsEngine {
    digits: u32,
    bits: usize,
    cc: Consts,
}

impl fmt::Debug for BoundsEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundsEngine").field("digits", &self.digits).field("bits", &self.bits).finish()
    }
}

impl BoundsEngine {
    pub fn new(digits: u32) -> Result<Self> {
        if !(MIN_PRECISION_DIGITS..=MAX_PRECISION_DIGITS).contains(&digits) {
            return Err(Error::InvalidInput(format!(
                "precision must be between {MIN_PRECISION_DIGITS} and {MAX_PRECISION_DIGITS} digits, got {digits}"
            )));
        }
        // log2(10) < 3.33; 128 guard bits absorb the rounding of every
        // intermediate step.
        let bits = ((digits as usize * 333) / 100 + 128).div_ceil(64) * 64;
        let cc = Consts::new().map_err(|e| Error::InvalidInput(format!("constant cache: {e:?}")))?;
        Ok(Self { digits, bits, cc })
    }

    pub fn with_default_precision() -> Self {
        Self::new(DEFAULT_PRECISION_DIGITS).expect("default precision is valid")
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn real(&self, value: BigFloat) -> Real {
        Real { value, digits: self.digits }
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.bits)
    }

    pub fn bigint(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, self.bits, RM, &mut self.cc)
    }

    pub fn rational(&mut self, q: &BigRational) -> BigFloat {
        let n = self.bigint(q.numer());
        let d = self.bigint(q.denom());
        n.div(&d, self.bits, RM)
    }

    pub fn ratio(&self, num: i64, den: i64) -> BigFloat {
        self.int(num).div(&self.int(den), self.bits, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.cc)
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    /// Integer power, negative exponents allowed.
    pub fn powi(&self, x: &BigFloat, e: i64) -> BigFloat {
        let p = x.powi(e.unsigned_abs() as usize, self.bits, RM);
        if e < 0 {
            self.div(&self.int(1), &p)
        } else {
            p
        }
    }

    /// `x^(num/den)` for `x > 0`.
    pub fn pow_ratio(&mut self, x: &BigFloat, num: i64, den: i64) -> BigFloat {
        if num % den == 0 {
            return self.powi(x, num / den);
        }
        let y = self.ratio(num, den);
        x.pow(&y, self.bits, RM, &mut self.cc)
    }

    pub fn max(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        if self.cmp(a, b) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub fn cmp(&self, a: &BigFloat, b: &BigFloat) -> Ordering {
        match a.cmp(b) {
            Some(x) if x < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Relative tolerance on reported values.
    pub fn relative_error_bound(&self) -> String {
        format!("1e-{}", self.digits - 2)
    }

    pub fn covolume(&mut self, shape: &AlgebraShape) -> BigFloat {
        match &shape.covolume {
            Covolume::Rational(r) => self.rational(r),
            Covolume::Sqrt(r) => {
                let x = self.rational(r);
                self.sqrt(&x)
            }
            Covolume::Decimal(s) => BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut self.cc),
        }
    }

    /// `z = 2^{d²(r1−s)} · (2π²)^{(d/2)²s} · (2π)^{d²r2}`, so that
    /// `Vol(X(c)) = z·c^{d²(n−s/2)}`.
    pub fn volume_constant_z(&mut self, shape: &AlgebraShape) -> BigFloat {
        let d2 = (shape.d * shape.d) as i64;
        let pi = self.pi();
        let two = self.int(2);
        let two_pi = self.mul(&two, &pi);
        let two_pi_sq = self.mul(&two_pi, &pi);
        let half_d_sq = ((shape.d / 2) * (shape.d / 2)) as i64;
        let split = self.powi(&two, d2 * (shape.r1 - shape.s) as i64);
        let ram = self.powi(&two_pi_sq, half_d_sq * shape.s as i64);
        let cplx = self.powi(&two_pi, d2 * shape.r2 as i64);
        let t = self.mul(&split, &ram);
        self.mul(&t, &cplx)
    }

    /// `c = (2^{d²n}·covolume / z)^{1/(d²(n−s/2))}`.
    pub fn minkowski_c(&mut self, shape: &AlgebraShape) -> BigFloat {
        let d2 = (shape.d * shape.d) as i64;
        let z = self.volume_constant_z(shape);
        let cov = self.covolume(shape);
        let two_pow = self.powi(&self.int(2), d2 * shape.n as i64);
        let base = self.div(&self.mul(&two_pow, &cov), &z);
        self.pow_ratio(&base, 2, d2 * (2 * shape.n - shape.s) as i64)
    }

    /// `m_X` from the per-place bounds, over the place types actually present:
    /// split real `((cd)^{d²})^n`, ramified real `((dc/2)^{d²/2})^n`,
    /// complex `((dc²)^{d²})^{n/2}`.
    pub fn m_x_tight(&mut self, shape: &AlgebraShape, c: &BigFloat) -> BigFloat {
        let (n, d) = (shape.n as i64, shape.d as i64);
        let df = self.int(d);
        let cd = self.mul(c, &df);
        let mut best: Option<BigFloat> = None;
        let mut consider = |this: &Self, v: BigFloat| {
            best = Some(match best.take() {
                Some(b) => this.max(&b, &v),
                None => v,
            });
        };
        if shape.r1 > shape.s {
            let v = self.powi(&cd, d * d * n);
            consider(self, v);
        }
        if shape.s > 0 {
            let half = self.div(&cd, &self.int(2));
            let v = self.pow_ratio(&half, d * d * n, 2);
            consider(self, v);
        }
        if shape.r2 > 0 {
            let dc2 = self.mul(&cd, c);
            let v = self.pow_ratio(&dc2, d * d * n, 2);
            consider(self, v);
        }
        best.expect("every shape has an archimedean place")
    }

    /// The coarse uniform formula: `(cd)^{nd²}` if `2cd ≥ 1`, otherwise
    /// `(cd/2)^{nd²/2}`.
    pub fn m_x_paper(&mut self, shape: &AlgebraShape, c: &BigFloat) -> BigFloat {
        let (n, d) = (shape.n as i64, shape.d as i64);
        let cd = self.mul(c, &self.int(d));
        let two_cd = self.mul(&cd, &self.int(2));
        if self.cmp(&two_cd, &self.int(1)) != Ordering::Less {
            self.powi(&cd, n * d * d)
        } else {
            let half = self.div(&cd, &self.int(2));
            self.pow_ratio(&half, n * d * d, 2)
        }
    }

    /// `m'_{S_f} = max_w (#k(w))^{d(v)/d}`, the inner maximum over
    /// archimedean places v; 1 when S has no finite places.
    pub fn m_prime(&mut self, shape: &AlgebraShape, finite_place_norms: &[u64]) -> BigFloat {
        let dv = if shape.s > 0 { 2 } else { 1 };
        let mut best = self.int(1);
        for &q in finite_place_norms {
            let v = self.pow_ratio(&self.int(q as i64), dv, shape.d as i64);
            best = self.max(&best, &v);
        }
        best
    }

    pub fn t_constants(
        &mut self,
        shape: &AlgebraShape,
        c: &BigFloat,
        m_x: &BigFloat,
        finite_place_norms: &[u64],
    ) -> TConstants {
        let n = shape.n as i64;
        let d = shape.d as i64;
        let one = self.int(1);
        let t1 = self.max(&one, c);
        let m_prime = self.m_prime(shape, finite_place_norms);
        let t2 = self.pow_ratio(&m_prime, 1, n);
        let mx_root = self.pow_ratio(m_x, 1, d * n);
        let t5 = self.max(&one, &mx_root);

        // The product only depends on how many places of each type lie in W.
        let [(_, n_split), (_, n_ram), (_, n_cplx)] = shape.places();
        let m_split = shape.matrix_size(PlaceKind::RealSplit) as i64;
        let m_ram = shape.matrix_size(PlaceKind::RamifiedH) as i64;
        let mut t6 = self.int(0);
        for i in 0..=n_split as i64 {
            for j in 0..=n_ram as i64 {
                for k in 0..=n_cplx as i64 {
                    let a_w = i * m_split + j * m_ram + 2 * k * d;
                    let b_w = i + j + 2 * k;
                    let v = self.mul(&self.mul(&self.powi(&t1, a_w), &self.powi(&t2, b_w)), &self.powi(&t5, n - b_w));
                    t6 = self.max(&t6, &v);
                }
            }
        }

        let cd = self.mul(c, &self.int(d));
        let cd_pow = self.powi(&cd, n * d);
        let t6_closed = self.mul(&m_prime, &self.max(&one, &cd_pow));
        TConstants {
            t1: self.real(t1),
            t2: self.real(t2),
            t3: self.real(one.clone()),
            t3prime: self.real(one.clone()),
            t4: self.real(one),
            t5: self.real(t5),
            t6: self.real(t6),
            t6_closed_form_bound: self.real(t6_closed),
            m_prime: self.real(m_prime),
        }
    }

    /// `μ1 · T6 · T3 · T3' · T4`.
    pub fn theorem43_bound(&mut self, shape: &AlgebraShape, t: &TConstants) -> BigFloat {
        let mu1 = self.rational(&mu1_bound(shape));
        let prod = [&t.t6, &t.t3, &t.t3prime, &t.t4].iter().fold(mu1, |acc, r| self.mul(&acc, r.value()));
        prod
    }

    /// Shared `(2/π)^{2ndr2/(2n−s)} · (2√2/π)^{nds/(2n−s)}` factor of f1, f2.
    fn f_common(&mut self, shape: &AlgebraShape) -> BigFloat {
        let (n, d, s, r2) = (shape.n as i64, shape.d as i64, shape.s as i64, shape.r2 as i64);
        let pi = self.pi();
        let two_over_pi = self.div(&self.int(2), &pi);
        let two_sqrt2 = self.mul(&self.int(2), &self.sqrt(&self.int(2)));
        let two_sqrt2_over_pi = self.div(&two_sqrt2, &pi);
        let x = self.pow_ratio(&two_over_pi, 2 * n * d * r2, 2 * n - s);
        let y = self.pow_ratio(&two_sqrt2_over_pi, n * d * s, 2 * n - s);
        self.mul(&x, &y)
    }

    /// Closed forms `f1(n, d)` and `f2(n, d)`; only valid when `c ≥ 1`.
    pub fn f1_f2(&mut self, shape: &AlgebraShape) -> Result<(BigFloat, BigFloat)> {
        let c = self.minkowski_c(shape);
        if self.cmp(&c, &self.int(1)) == Ordering::Less {
            return Err(Error::CLessThanOne { c: format_decimal(&c, 20) });
        }
        let (n, d, s) = (shape.n as i64, shape.d as i64, shape.s as i64);
        let common = self.f_common(shape);
        let df = self.int(d);
        let f1 = self.mul(&self.powi(&df, n * d), &common);
        let fact = self.bigint(&BigInt::from(factorial(shape.d - 1)));
        let two_exp = s * (d * d - 2 * d - 4) / 2;
        let f2 = [
            self.powi(&df, n * d + n + s),
            self.powi(&fact, n - s),
            self.powi(&self.int(2), two_exp),
            common,
        ]
        .iter()
        .fold(self.int(1), |acc, v| self.mul(&acc, v));
        Ok((f1, f2))
    }

    /// Largest integer that is certainly not above `x`, after enlarging `x`
    /// by the relative error bound. Used for "S must contain every place of
    /// norm ≤ x" decisions, where over-inclusion is safe.
    pub fn outward_floor(&mut self, x: &BigFloat) -> BigInt {
        let slack = self.pow_ratio(&self.int(10), -((self.digits - 4) as i64), 1);
        let widened = self.mul(x, &self.add(&self.int(1), &slack));
        let f = widened.floor();
        let text = format_decimal(&f, self.digits + 20);
        text.split('.').next().unwrap_or("0").parse().unwrap_or_default()
    }

    /// Full report. When `c < 1` the closed-form fields are `None`.
    pub fn bound_report(&mut self, shape: &AlgebraShape, finite_place_norms: &[u64]) -> Result<BoundReport> {
        shape.validate()?;
        let e = shape.exponent_e();
        if e > BigRational::one() {
            return Err(Error::InvalidShape(format!("exponent e = {e} exceeds 1")));
        }
        let mut norms = finite_place_norms.to_vec();
        norms.sort_unstable();
        norms.dedup();
        if let Some(&bad) = norms.iter().find(|&&q| q < 2) {
            return Err(Error::InvalidInput(format!("finite place norm {bad} must be at least 2")));
        }

        let cov = self.covolume(shape);
        let disc = self.mul(&cov, &cov);
        let z = self.volume_constant_z(shape);
        let c = self.minkowski_c(shape);
        let c_lt_one = self.cmp(&c, &self.int(1)) == Ordering::Less;
        let m_x = self.m_x_tight(shape, &c);
        let m_x_paper = self.m_x_paper(shape, &c);
        let t = self.t_constants(shape, &c, &m_x, &norms);
        let mu1 = self.rational(&mu1_bound(shape));
        let place_threshold = self.pow_ratio(&m_x, 1, shape.d as i64);
        let max_required_place_norm = self.outward_floor(&place_threshold);
        let thm43 = self.theorem43_bound(shape, &t);

        let cov_e = {
            let (num, den) = (e.numer().try_into().unwrap_or(1i64), e.denom().try_into().unwrap_or(1i64));
            self.pow_ratio(&cov, num, den)
        };
        let (f1, f2, closed_threshold, thm51) = match self.f1_f2(shape) {
            Ok((f1, f2)) => {
                let thr = self.mul(&f1, &cov_e);
                let bound = self.mul(&self.mul(&f2, t.m_prime.value()), &cov_e);
                (Some(self.real(f1)), Some(self.real(f2)), Some(self.real(thr)), Some(self.real(bound)))
            }
            Err(Error::CLessThanOne { .. }) => (None, None, None, None),
            Err(other) => return Err(other),
        };

        Ok(BoundReport {
            shape: shape.clone(),
            finite_place_norms: norms,
            precision_digits: self.digits,
            relative_error_bound: self.relative_error_bound(),
            covolume: self.real(cov),
            discriminant: self.real(disc),
            z: self.real(z),
            c: self.real(c),
            c_lt_one,
            m_x: self.real(m_x),
            m_x_paper: self.real(m_x_paper),
            e,
            t1: t.t1,
            t2: t.t2,
            t3: t.t3,
            t3prime: t.t3prime,
            t4: t.t4,
            t5: t.t5,
            t6: t.t6,
            t6_closed_form_bound: t.t6_closed_form_bound,
            m_prime: t.m_prime,
            mu1_bound: self.real(mu1),
            place_threshold: self.real(place_threshold),
            max_required_place_norm,
            height_bound_thm43: self.real(thm43),
            f1,
            f2,
            place_threshold_closed_form: closed_threshold,
            height_bound_thm51: thm51,
        })
    }

    /// [`bound_report`](Self::bound_report), failing when the closed forms
    /// are unavailable (`c < 1`).
    pub fn thresholds_and_final(&mut self, shape: &AlgebraShape, finite_place_norms: &[u64]) -> Result<BoundReport> {
        let report = self.bound_report(shape, finite_place_norms)?;
        if report.c_lt_one {
            return Err(Error::CLessThanOne { c: report.c.to_decimal() });
        }
        Ok(report)
    }
}
