//! Finite-precision p-adic numbers, 2×2 p-adic matrices and the explicit
//! splitting `ρ_p : B ⊗ ℚ_p → M₂(ℚ_p)` of the Hamilton quaternions at odd
//! primes.
//!
//! Every [`PAdic`] carries its absolute precision: the value is known
//! modulo `p^prec`. Arithmetic propagates precision conservatively, and
//! callers that need a certified valuation get an
//! [`Error::InsufficientPrecision`] instead of a silently wrong answer.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{inv_mod, pow_u64, rat_pow, val_int, val_rat};
use crate::error::{Error, Result};
use crate::quaternion::{check_odd_prime, RatQuaternion};

/// Largest precision (in p-adic digits) any splitting may be lifted to.
pub const MAX_PRECISION: u32 = 4096;

/// Default working precision for splittings.
pub const DEFAULT_PRECISION: u32 = 32;

/// `p^val · unit`, known modulo `p^prec`.
///
/// A value that is zero to working precision has `unit == 0` and
/// `val == prec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdic {
    p: u64,
    val: i64,
    prec: i64,
    unit: BigInt,
}

fn modulus(p: u64, digits: i64) -> BigInt {
    pow_u64(p, digits.max(0) as u32)
}

impl PAdic {
    pub fn zero(p: u64, prec: i64) -> Self {
        Self { p, val: prec, prec, unit: BigInt::zero() }
    }

    /// Normalises `p^base · r` known modulo `p^prec`.
    fn from_scaled(p: u64, base: i64, r: BigInt, prec: i64) -> Self {
        if base >= prec {
            return Self::zero(p, prec);
        }
        let r = r.mod_floor(&modulus(p, prec - base));
        match val_int(&r, p) {
            None => Self::zero(p, prec),
            Some(t) => {
                let val = base + t as i64;
                let unit = (r / pow_u64(p, t as u32)).mod_floor(&modulus(p, prec - val));
                Self { p, val, prec, unit }
            }
        }
    }

    /// `q` reduced to absolute precision `prec`.
    pub fn from_rational(q: &BigRational, p: u64, prec: i64) -> Self {
        let Some(v) = val_rat(q, p) else {
            return Self::zero(p, prec);
        };
        if v >= prec {
            return Self::zero(p, prec);
        }
        let scaled = q / rat_pow(p, v);
        let m = modulus(p, prec - v);
        let den_inv = inv_mod(scaled.denom(), &m).expect("denominator is a p-unit");
        let unit = (scaled.numer() * den_inv).mod_floor(&m);
        Self { p, val: v, prec, unit }
    }

    pub fn from_int(n: i64, p: u64, prec: i64) -> Self {
        Self::from_scaled(p, 0, BigInt::from(n), prec)
    }

    pub fn from_bigint(n: &BigInt, p: u64, prec: i64) -> Self {
        Self::from_scaled(p, 0, n.clone(), prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the value is known modulo `p^precision()`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation, or `None` when the value is zero to working precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Unit part, defined modulo `p^(precision − valuation)`.
    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Representative in `[0, p^prec)` for values of non-negative valuation.
    pub fn residue(&self) -> Option<BigInt> {
        if self.val < 0 && !self.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        Some(&self.unit * modulus(self.p, self.val))
    }

    /// Value lowered to absolute precision `prec` (never raised).
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::from_scaled(self.p, self.val, self.unit.clone(), prec)
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { p: self.p, val: self.val + k, prec: self.prec + k, unit: self.unit.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let prec = self.prec.min(o.prec);
        let base = self.val.min(o.val);
        if base >= prec {
            return Self::zero(self.p, prec);
        }
        let lift = |x: &Self| {
            if x.is_zero() {
                BigInt::zero()
            } else {
                &x.unit * modulus(x.p, x.val - base)
            }
        };
        Self::from_scaled(self.p, base, lift(self) + lift(o), prec)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let unit = (-&self.unit).mod_floor(&modulus(self.p, self.prec - self.val));
        Self { unit, ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let prec = (self.prec + o.val).min(o.prec + self.val);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p, prec);
        }
        let val = self.val + o.val;
        let unit = (&self.unit * &o.unit).mod_floor(&modulus(self.p, prec - val));
        Self { p: self.p, val, prec, unit }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InsufficientPrecision { p: self.p, needed: self.prec + 1, available: self.prec });
        }
        let rel = self.prec - self.val;
        let unit = inv_mod(&self.unit, &modulus(self.p, rel)).expect("unit");
        Ok(Self { p: self.p, val: -self.val, prec: rel - self.val, unit })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.p, self.prec)
        } else {
            write!(f, "{}^{}·{} + O({}^{})", self.p, self.val, self.unit, self.p, self.prec)
        }
    }
}

/// A 2×2 matrix over ℚ_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicMatrix2 {
    pub entries: [[PAdic; 2]; 2],
}

impl PAdicMatrix2 {
    pub fn new(m00: PAdic, m01: PAdic, m10: PAdic, m11: PAdic) -> Self {
        Self { entries: [[m00, m01], [m10, m11]] }
    }

    pub fn from_ints(m: [[i64; 2]; 2], p: u64, prec: i64) -> Self {
        let e = |v| PAdic::from_int(v, p, prec);
        Self::new(e(m[0][0]), e(m[0][1]), e(m[1][0]), e(m[1][1]))
    }

    pub fn from_bigints(m: &[[BigInt; 2]; 2], p: u64, prec: i64) -> Self {
        let e = |v: &BigInt| PAdic::from_bigint(v, p, prec);
        Self::new(e(&m[0][0]), e(&m[0][1]), e(&m[1][0]), e(&m[1][1]))
    }

    pub fn identity(p: u64, prec: i64) -> Self {
        Self::from_ints([[1, 0], [0, 1]], p, prec)
    }

    pub fn prime(&self) -> u64 {
        self.entries[0][0].prime()
    }

    /// Smallest absolute precision among the entries.
    pub fn precision(&self) -> i64 {
        self.iter().map(PAdic::precision).min().expect("four entries")
    }

    pub fn iter(&self) -> impl Iterator<Item = &PAdic> {
        self.entries.iter().flatten()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        let [[e, f], [g, h]] = &o.entries;
        Self::new(
            a.mul(e).add(&b.mul(g)),
            a.mul(f).add(&b.mul(h)),
            c.mul(e).add(&d.mul(g)),
            c.mul(f).add(&d.mul(h)),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        let [[e, f], [g, h]] = &o.entries;
        Self::new(a.add(e), b.add(f), c.add(g), d.add(h))
    }

    pub fn scale(&self, s: &PAdic) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Self::new(s.mul(a), s.mul(b), s.mul(c), s.mul(d))
    }

    pub fn neg(&self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Self::new(a.neg(), b.neg(), c.neg(), d.neg())
    }

    pub fn det(&self) -> PAdic {
        let [[a, b], [c, d]] = &self.entries;
        a.mul(d).sub(&b.mul(c))
    }

    /// Entrywise congruence to absolute precision `prec`.
    pub fn congruent(&self, o: &Self, prec: i64) -> bool {
        self.iter().zip(o.iter()).all(|(x, y)| {
            let diff = x.sub(y);
            diff.is_zero() && diff.precision() >= prec || diff.valuation().is_some_and(|v| v >= prec)
        })
    }

    /// Minimum valuation of the entries, certified against the precision of
    /// entries that vanish to working precision.
    pub fn min_valuation(&self) -> Result<i64> {
        let p = self.prime();
        let e1 = self.iter().filter_map(PAdic::valuation).min().ok_or(Error::SingularMatrix)?;
        if let Some(z) = self.iter().filter(|x| x.is_zero()).map(PAdic::precision).min() {
            if z < e1 {
                return Err(Error::InsufficientPrecision { p, needed: e1, available: z });
            }
        }
        Ok(e1)
    }

    /// Smith-form exponents `(e1, e2)`: `e1` is the minimum entry valuation
    /// and `e1 + e2` the valuation of the determinant.
    pub fn elementary_divisors(&self) -> Result<(i64, i64)> {
        let e1 = self.min_valuation()?;
        let det = self.det();
        let vdet = det.valuation().ok_or(Error::InsufficientPrecision {
            p: self.prime(),
            needed: det.precision() + 1,
            available: det.precision(),
        })?;
        Ok((e1, vdet - e1))
    }
}

impl fmt::Display for PAdicMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// The smallest `x ≥ 1`, then smallest `y ≥ 0`, with `x² + y² ≡ −1 (mod p)`.
///
/// `x` is kept nonzero so that Newton lifting on `x` has a unit derivative.
pub fn solve_sum_of_squares(p: u64) -> Result<(u64, u64)> {
    check_odd_prime(p)?;
    let p128 = p as u128;
    for x in 1..p128 {
        let need = (p128 - 1 + p128 * p128 - x * x % p128) % p128;
        if let Some(y) = (0..p128).find(|y| y * y % p128 == need) {
            return Ok((x as u64, y as u64));
        }
    }
    unreachable!("-1 is a sum of two squares modulo every odd prime")
}

/// A splitting `ρ_p(I) = [[0, 1], [−1, 0]]`, `ρ_p(J) = [[a, b], [b, −a]]`
/// with `a² + b² ≡ −1 (mod p^precision)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingData {
    p: u64,
    precision: u32,
    a: BigInt,
    b: BigInt,
}

/// Lifts the mod-p solution of `a² + b² = −1` to precision `p^k` by Newton
/// iteration on `a` (b stays fixed).
pub fn hensel_lift_splitting(p: u64, k: u32) -> Result<SplittingData> {
    check_odd_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidInput("splitting precision must be at least 1".into()));
    }
    if k > MAX_PRECISION {
        return Err(Error::PrecisionOverflow { requested: k, max: MAX_PRECISION });
    }
    let (x, y) = solve_sum_of_squares(p)?;
    let mut a = BigInt::from(x);
    let b = BigInt::from(y);
    let target = pow_u64(p, k);
    let mut digits = 1u32;
    while digits < k {
        digits = (2 * digits).min(k);
        let m = pow_u64(p, digits);
        let f: BigInt = &a * &a + &b * &b + 1;
        let df_inv = inv_mod(&(&a * 2), &m).expect("2a is a p-unit");
        a = (&a - &f * &df_inv).mod_floor(&m);
    }
    let a = a.mod_floor(&target);
    debug_assert!((&a * &a + &b * &b + BigInt::from(1)).mod_floor(&target).is_zero());
    Ok(SplittingData { p, precision: k, a, b: b.mod_floor(&target) })
}

impl SplittingData {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The lifted pair `(a, b)` as residues modulo `p^precision`.
    pub fn ab(&self) -> (&BigInt, &BigInt) {
        (&self.a, &self.b)
    }

    fn prec(&self) -> i64 {
        self.precision as i64
    }

    pub fn rho_i(&self) -> PAdicMatrix2 {
        PAdicMatrix2::from_ints([[0, 1], [-1, 0]], self.p, self.prec())
    }

    pub fn rho_j(&self) -> PAdicMatrix2 {
        let e = |v: &BigInt| PAdic::from_bigint(v, self.p, self.prec());
        PAdicMatrix2::new(e(&self.a), e(&self.b), e(&self.b), e(&-&self.a))
    }

    /// `ρ(K) = ρ(I)ρ(J) = [[b, −a], [−a, −b]]`.
    pub fn rho_k(&self) -> PAdicMatrix2 {
        let e = |v: &BigInt| PAdic::from_bigint(v, self.p, self.prec());
        PAdicMatrix2::new(e(&self.b), e(&-&self.a), e(&-&self.a), e(&-&self.b))
    }

    /// Integer matrix of `ρ(q)` mod `p^precision` for a p-integral `q`.
    fn integral_image(&self, q: &RatQuaternion) -> [[BigInt; 2]; 2] {
        let m = pow_u64(self.p, self.precision);
        let red = |c: &BigRational| {
            let inv = inv_mod(c.denom(), &m).expect("p-integral coordinate");
            (c.numer() * inv).mod_floor(&m)
        };
        let (w, x, y, z) = (red(&q.w), red(&q.x), red(&q.y), red(&q.z));
        let (a, b) = (&self.a, &self.b);
        let ya = &y * a;
        let yb = &y * b;
        let za = &z * a;
        let zb = &z * b;
        [
            [&w + &ya + &zb, &x + &yb - &za],
            [&yb - &x - &za, &w - &ya - &zb],
        ]
    }

    /// `ρ(q) = w·Id + x·ρ(I) + y·ρ(J) + z·ρ(K)`.
    ///
    /// The content `p^e` of `q` is split off first, so every entry is known
    /// to `precision` digits beyond that content.
    pub fn apply(&self, q: &RatQuaternion) -> PAdicMatrix2 {
        let Ok(e) = q.content_valuation(self.p) else {
            return PAdicMatrix2::from_ints([[0, 0], [0, 0]], self.p, self.prec());
        };
        let primitive = q.scale(&rat_pow(self.p, -e));
        let m = self.integral_image(&primitive);
        PAdicMatrix2::from_bigints(&m, self.p, self.prec()).scale(&PAdic::from_int(1, self.p, self.prec()).shift(e))
    }

    /// Like [`apply`](Self::apply) but without the content shift: the
    /// matrix of the p-primitive part `p^{−e}·q`, with integral entries.
    pub fn apply_primitive(&self, q: &RatQuaternion) -> Result<PAdicMatrix2> {
        let e = q.content_valuation(self.p)?;
        let primitive = q.scale(&rat_pow(self.p, -e));
        Ok(PAdicMatrix2::from_bigints(&self.integral_image(&primitive), self.p, self.prec()))
    }
}

/// `ρ_p(q)` for a fresh splitting at precision `k`.
pub fn apply_splitting(q: &RatQuaternion, split: &SplittingData) -> PAdicMatrix2 {
    split.apply(q)
}

/// `|q|_p = p^{−e1}` with `e1` the minimum entry valuation of `ρ_p(q)`.
pub fn local_abs_with(q: &RatQuaternion, split: &SplittingData) -> Result<BigRational> {
    if q.is_zero() {
        return Err(Error::ZeroElement);
    }
    let e1 = split.apply(q).min_valuation()?;
    Ok(rat_pow(split.prime(), -e1))
}

pub fn local_abs(q: &RatQuaternion, p: u64, k: u32) -> Result<BigRational> {
    local_abs_with(q, &hensel_lift_splitting(p, k)?)
}

impl PAdic {
    /// One, at the given precision.
    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_scaled(p, 0, BigInt::one(), prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> RatQuaternion {
        s.parse().unwrap()
    }

    #[test]
    fn sums_of_squares() {
        assert_eq!(solve_sum_of_squares(3), Ok((1, 1)));
        assert_eq!(solve_sum_of_squares(5), Ok((2, 0)));
        assert_eq!(solve_sum_of_squares(7), Ok((2, 3)));
        assert_eq!(solve_sum_of_squares(2), Err(Error::EvenPrime));
        for p in [11u64, 13, 17, 19, 23, 101] {
            let (x, y) = solve_sum_of_squares(p).unwrap();
            assert_eq!((x * x + y * y + 1) % p, 0);
        }
    }

    #[test]
    fn hensel_lifts() {
        let s = hensel_lift_splitting(5, 2).unwrap();
        assert_eq!(s.ab(), (&BigInt::from(7), &BigInt::from(0)));
        let s = hensel_lift_splitting(3, 1).unwrap();
        assert_eq!(s.ab(), (&BigInt::from(1), &BigInt::from(1)));
        let s = hensel_lift_splitting(3, 2).unwrap();
        let (a, b) = s.ab();
        assert_eq!((a * a + b * b) % 9, BigInt::from(8));
        assert_eq!(
            hensel_lift_splitting(3, MAX_PRECISION + 1),
            Err(Error::PrecisionOverflow { requested: MAX_PRECISION + 1, max: MAX_PRECISION })
        );
    }

    #[test]
    fn splitting_relations() {
        for p in [3u64, 5, 7, 11, 13] {
            for k in [1u32, 2, 7, 32] {
                let s = hensel_lift_splitting(p, k).unwrap();
                let kk = k as i64;
                let minus_id = PAdicMatrix2::identity(p, kk).neg();
                let (i, j) = (s.rho_i(), s.rho_j());
                assert!(i.mul(&i).congruent(&minus_id, kk));
                assert!(j.mul(&j).congruent(&minus_id, kk));
                assert!(i.mul(&j).congruent(&j.mul(&i).neg(), kk));
                assert!(i.mul(&j).congruent(&s.rho_k(), kk));
            }
        }
    }

    #[test]
    fn splitting_images() {
        let s = hensel_lift_splitting(7, 10).unwrap();
        assert!(s.apply(&RatQuaternion::one()).congruent(&PAdicMatrix2::identity(7, 10), 10));
        assert!(s.apply(&RatQuaternion::i()).congruent(&s.rho_i(), 10));
        let s = hensel_lift_splitting(5, 10).unwrap();
        let det = s.apply(&q("1 + I + J")).det();
        assert_eq!(det.residue(), Some(BigInt::from(3)));
        assert!(det.precision() >= 10);
    }

    #[test]
    fn scalar_arithmetic() {
        let p = 5;
        let x = PAdic::from_rational(&BigRational::new(3.into(), 10.into()), p, 6);
        assert_eq!(x.valuation(), Some(-1));
        let y = PAdic::from_int(10, p, 6);
        let prod = x.mul(&y);
        assert_eq!(prod.residue(), Some(BigInt::from(3)));
        let half = PAdic::from_rational(&BigRational::new(1.into(), 2.into()), p, 6);
        assert_eq!(half.mul(&PAdic::from_int(2, p, 6)).residue(), Some(BigInt::one()));
        let z = PAdic::from_int(25, p, 2);
        assert!(z.is_zero());
        assert_eq!(PAdic::from_int(7, p, 4).div(&PAdic::from_int(7, p, 4)).unwrap().residue(), Some(BigInt::one()));
        assert!(PAdic::zero(p, 3).inverse().is_err());
        // Cancellation loses no more precision than the inputs carry.
        let a = PAdic::from_int(26, p, 4);
        let b = PAdic::from_int(1, p, 4);
        let d = a.sub(&b);
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.precision(), 4);
    }

    #[test]
    fn elementary_divisor_examples() {
        let m = PAdicMatrix2::from_ints([[3, 0], [0, 1]], 3, 10);
        assert_eq!(m.elementary_divisors(), Ok((0, 1)));
        let m = PAdicMatrix2::from_ints([[9, 3], [0, 3]], 3, 10);
        assert_eq!(m.elementary_divisors(), Ok((1, 2)));
        let m = PAdicMatrix2::from_ints([[0, 0], [0, 0]], 3, 10);
        assert_eq!(m.elementary_divisors(), Err(Error::SingularMatrix));
        let m = PAdicMatrix2::from_ints([[1, 1], [1, 1]], 3, 10);
        assert!(matches!(m.elementary_divisors(), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn norm_p_elements_are_primitive_with_divisors_0_1() {
        let s = hensel_lift_splitting(3, 16).unwrap();
        for g in crate::enumerate::enumerate_by_norm(3).unwrap().elements {
            assert_eq!(s.apply(&g.to_rational()).elementary_divisors(), Ok((0, 1)), "{g}");
        }
    }

    #[test]
    fn local_absolute_values() {
        assert_eq!(local_abs(&RatQuaternion::one(), 3, 8), Ok(BigRational::one()));
        assert_eq!(local_abs(&q("1/3*I + 1/3*J"), 3, 8), Ok(BigRational::from_integer(3.into())));
        assert_eq!(local_abs(&q("3 + 3*I"), 3, 8), Ok(BigRational::new(1.into(), 3.into())));
        assert_eq!(local_abs(&RatQuaternion::zero(), 3, 8), Err(Error::ZeroElement));
    }
}
