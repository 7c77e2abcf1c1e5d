//! Hurwitz elements of prescribed reduced norm.
//!
//! An element `(A + B·I + C·J + D·K)/2` has norm m iff
//! `A² + B² + C² + D² = 4m` with all four doubled coordinates of equal
//! parity. Every list returned here is sorted lexicographically on the
//! doubled coordinates.

use std::collections::{BTreeMap, HashSet};

use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quaternion::{HurwitzElement, SPlaceSet};

/// All Hurwitz elements of one reduced norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormClassEnumeration {
    pub norm: u64,
    pub elements: Vec<HurwitzElement>,
}

impl NormClassEnumeration {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Solutions with fixed first coordinate `a`: iterate `b, c` and solve for `d`.
fn scan_slice(a: i64, target: i64, bound: i64) -> Vec<HurwitzElement> {
    let parity = a.rem_euclid(2);
    let rest = target - a * a;
    let mut out = Vec::new();
    if rest < 0 {
        return out;
    }
    let mut b = -bound;
    if b.rem_euclid(2) != parity {
        b += 1;
    }
    while b <= bound {
        let rest_b = rest - b * b;
        if rest_b >= 0 {
            let mut c = -bound;
            if c.rem_euclid(2) != parity {
                c += 1;
            }
            while c <= bound {
                let d2 = rest_b - c * c;
                if d2 >= 0 {
                    let d = d2.sqrt();
                    if d * d == d2 && d.rem_euclid(2) == parity {
                        // Ascending d order: −d before +d.
                        if d > 0 {
                            out.push(HurwitzElement::new(a, b, c, -d).expect("parity"));
                        }
                        out.push(HurwitzElement::new(a, b, c, d).expect("parity"));
                    }
                }
                c += 2;
            }
        }
        b += 2;
    }
    out
}

/// Every Hurwitz element with reduced norm `m`, found by scanning the box
/// `|A|, |B|, |C|, |D| ≤ 2√m`. The first coordinate is split across worker
/// threads; the merge preserves the single-threaded order.
pub fn enumerate_by_norm(m: u64) -> Result<NormClassEnumeration> {
    if m == 0 {
        return Err(Error::InvalidInput("norm must be at least 1".into()));
    }
    let target = i64::try_from(m)
        .ok()
        .and_then(|m| m.checked_mul(4))
        .ok_or_else(|| Error::InvalidInput(format!("norm {m} too large")))?;
    let bound = target.sqrt();
    let elements: Vec<HurwitzElement> = (-bound..=bound)
        .into_par_iter()
        .map(|a| scan_slice(a, target, bound))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
    Ok(NormClassEnumeration { norm: m, elements })
}

/// Plain four-fold box scan, kept deliberately naive so it can serve as an
/// independent cross-check of [`enumerate_by_norm`].
pub fn enumerate_by_norm_naive(m: u64) -> Vec<HurwitzElement> {
    let target = 4 * m as i64;
    let bound = target.sqrt() + 1;
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    if a * a + b * b + c * c + d * d == target {
                        if let Ok(h) = HurwitzElement::new(a, b, c, d) {
                            out.push(h);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The generating set for S-units: elements of norm 1 or ℓ for ℓ in S.
pub fn generating_set(s: &SPlaceSet) -> Result<Vec<HurwitzElement>> {
    let mut out = enumerate_by_norm(1)?.elements;
    for &l in s.primes() {
        out.extend(enumerate_by_norm(l)?.elements);
    }
    out.sort();
    Ok(out)
}

/// Integral elements of height at most `max_norm` (height equals norm on
/// the Hurwitz order), grouped by ascending norm.
pub fn bounded_height_integral(max_norm: u64) -> Result<Vec<HurwitzElement>> {
    if max_norm == 0 {
        return Err(Error::InvalidInput("height bound must be at least 1".into()));
    }
    let mut out = Vec::new();
    for m in 1..=max_norm {
        out.extend(enumerate_by_norm(m)?.elements);
    }
    out.sort();
    Ok(out)
}

/// [`bounded_height_integral`] for a rational bound `x ≥ 1`.
pub fn bounded_height_integral_rat(x: &BigRational) -> Result<Vec<HurwitzElement>> {
    if x.is_negative() || x.floor().to_integer() < 1.into() {
        return Err(Error::InvalidInput(format!("height bound {x} is below 1")));
    }
    let n = x
        .floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidInput(format!("height bound {x} too large")))?;
    bounded_height_integral(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitGroupReport {
    pub elements: Vec<HurwitzElement>,
    /// Element order ↦ number of units of that order.
    pub order_counts: BTreeMap<u32, usize>,
    pub elements_of_order_two: Vec<HurwitzElement>,
}

fn element_order(u: HurwitzElement) -> Option<u32> {
    let one = HurwitzElement::one();
    let mut acc = u;
    for k in 1..=24 {
        if acc == one {
            return Some(k);
        }
        acc = acc * u;
    }
    None
}

/// Checks that the 24 norm-one Hurwitz elements form a group and records
/// the orders of its elements.
pub fn unit_group_check() -> Result<UnitGroupReport> {
    let units = enumerate_by_norm(1)?.elements;
    if units.len() != 24 {
        return Err(Error::ClosureFailure(format!("expected 24 units, found {}", units.len())));
    }
    let set: HashSet<HurwitzElement> = units.iter().copied().collect();
    for &u in &units {
        for &v in &units {
            if !set.contains(&(u * v)) {
                return Err(Error::ClosureFailure(format!("{u} · {v} is not a unit")));
            }
        }
        let inv = u.conjugate();
        if !set.contains(&inv) || u * inv != HurwitzElement::one() {
            return Err(Error::ClosureFailure(format!("{u} has no inverse among the units")));
        }
    }
    let mut order_counts = BTreeMap::new();
    let mut elements_of_order_two = Vec::new();
    for &u in &units {
        let ord = element_order(u).ok_or_else(|| Error::ClosureFailure(format!("{u} has infinite order")))?;
        *order_counts.entry(ord).or_insert(0) += 1;
        if ord == 2 {
            elements_of_order_two.push(u);
        }
    }
    if elements_of_order_two.len() != 1 {
        return Err(Error::ClosureFailure(format!(
            "expected exactly one element of order 2, found {}",
            elements_of_order_two.len()
        )));
    }
    Ok(UnitGroupReport { elements: units, order_counts, elements_of_order_two })
}
