//! Bruhat–Tits trees of `GL₂(ℚ_p)` at odd primes and the action of
//! quaternion S-units on them through the splittings of [`crate::padic`].
//!
//! A vertex is the homothety class of a rank-2 ℤ_p-lattice, stored by its
//! unique primitive Hermite form: the lattice spanned by the columns of
//! `[[p^a, c], [0, p^b]]` with `0 ≤ c < p^a`, contained in ℤ_p² but not in
//! pℤ_p². Its distance to the base vertex ℤ_p² is `a + b`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{pow_u64, val_int};
use crate::enumerate::{enumerate_by_norm, generating_set};
use crate::error::{Error, Result};
use crate::padic::{hensel_lift_splitting, PAdic, PAdicMatrix2, SplittingData, DEFAULT_PRECISION};
use crate::quaternion::{check_odd_prime, RatQuaternion, SPlaceSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TreeVertex {
    p: u64,
    a: u32,
    b: u32,
    #[serde(serialize_with = "serialize_bigint")]
    c: BigInt,
}

fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl TreeVertex {
    pub fn base(p: u64) -> Self {
        Self { p, a: 0, b: 0, c: BigInt::zero() }
    }

    /// Validated constructor for the normal form `(a, b, c)`.
    pub fn new(p: u64, a: u32, b: u32, c: BigInt) -> Result<Self> {
        check_odd_prime(p)?;
        if c.is_negative() || c >= pow_u64(p, a) {
            return Err(Error::InvalidInput(format!("c = {c} outside [0, {p}^{a})")));
        }
        if a >= 1 && b >= 1 && (&c % p).is_zero() {
            return Err(Error::InvalidInput(format!("({a}, {b}, {c}) is not primitive at {p}")));
        }
        Ok(Self { p, a, b, c })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn abc(&self) -> (u32, u32, &BigInt) {
        (self.a, self.b, &self.c)
    }

    pub fn distance_to_base(&self) -> u32 {
        self.a + self.b
    }

    /// Columns of the Hermite basis `[[p^a, c], [0, p^b]]`.
    pub fn basis(&self) -> [[BigInt; 2]; 2] {
        [[pow_u64(self.p, self.a), self.c.clone()], [BigInt::zero(), pow_u64(self.p, self.b)]]
    }

    /// All `p + 1` vertices adjacent to this one, sorted.
    pub fn neighbors(&self) -> Vec<TreeVertex> {
        let basis = self.basis();
        let p = BigInt::from(self.p);
        let mut subs: Vec<[[BigInt; 2]; 2]> = (0..self.p)
            .map(|t| [[p.clone(), BigInt::from(t)], [BigInt::zero(), BigInt::from(1)]])
            .collect();
        subs.push([[BigInt::from(1), BigInt::zero()], [BigInt::zero(), p.clone()]]);
        let mut out: Vec<TreeVertex> = subs
            .iter()
            .map(|s| vertex_from_integer_basis(&mat_mul(&basis, s), self.p).expect("index-p sublattice"))
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn mat_mul(x: &[[BigInt; 2]; 2], y: &[[BigInt; 2]; 2]) -> [[BigInt; 2]; 2] {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn int_det(m: &[[BigInt; 2]; 2]) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Vertex of the lattice spanned by the columns of an invertible integer
/// matrix, computed with just enough p-adic precision to be exact.
pub fn vertex_from_integer_basis(m: &[[BigInt; 2]; 2], p: u64) -> Result<TreeVertex> {
    let vdet = val_int(&int_det(m), p).ok_or(Error::SingularMatrix)? as i64;
    let mat = PAdicMatrix2::from_bigints(m, p, vdet + 2);
    canonicalize(&mat)
}

/// Exact elementary divisors `(e1, e2)` of an invertible integer matrix.
pub fn integer_elementary_divisors(m: &[[BigInt; 2]; 2], p: u64) -> Result<(i64, i64)> {
    let vdet = val_int(&int_det(m), p).ok_or(Error::SingularMatrix)? as i64;
    let e1 = m.iter().flatten().filter_map(|x| val_int(x, p)).min().expect("nonzero determinant") as i64;
    Ok((e1, vdet - e1))
}

fn insufficient(p: u64, needed: i64, available: i64) -> Error {
    Error::InsufficientPrecision { p, needed, available }
}

/// Normal form of the lattice class spanned by the columns of `m`.
pub fn canonicalize(m: &PAdicMatrix2) -> Result<TreeVertex> {
    canonicalize_with_margin(m).map(|(v, _)| v)
}

/// [`canonicalize`], also returning how many p-adic digits of precision
/// were left unused by the reduction.
pub fn canonicalize_with_margin(m: &PAdicMatrix2) -> Result<(TreeVertex, i64)> {
    let p = m.prime();
    let [[m00, m01], [m10, m11]] = m.entries.clone();
    // Column operations only: put the bottom-row entry of least valuation in
    // the second column and clear the bottom-left entry with it.
    let order = |x: &PAdic| x.valuation().unwrap_or(i64::MAX);
    let (top0, bot0, top1, bot1) = if order(&m10) < order(&m11) { (m01, m11, m00, m10) } else { (m00, m10, m01, m11) };
    let Some(beta) = bot1.valuation() else {
        return Err(if m.iter().all(PAdic::is_zero) {
            Error::SingularMatrix
        } else {
            insufficient(p, bot1.precision() + 1, bot1.precision())
        });
    };
    let t = bot0.div(&bot1)?;
    let top0 = top0.sub(&t.mul(&top1));
    let alpha = top0.valuation().ok_or_else(|| insufficient(p, top0.precision() + 1, top0.precision()))?;
    // Rescale the second column so its bottom entry is exactly p^beta.
    let unit1 = PAdic::from_bigint(bot1.unit(), p, bot1.precision() - beta);
    let c_full = top1.div(&unit1)?;
    if c_full.precision() < alpha {
        return Err(insufficient(p, alpha, c_full.precision()));
    }
    let vc = c_full.valuation().filter(|&v| v < alpha);
    let shift = [Some(alpha), Some(beta), vc].into_iter().flatten().min().expect("nonempty");
    let a = alpha - shift;
    let b = beta - shift;
    let modulus = pow_u64(p, a as u32);
    let c = match vc {
        None => BigInt::zero(),
        Some(_) => c_full.shift(-shift).residue().expect("non-negative valuation").mod_floor(&modulus),
    };
    let margin = (c_full.precision() - alpha)
        .min(top0.precision() - alpha - 1)
        .min(bot1.precision() - beta - 1);
    Ok((TreeVertex { p, a: a as u32, b: b as u32, c }, margin))
}

fn basis_padic(v: &TreeVertex, prec: i64) -> PAdicMatrix2 {
    PAdicMatrix2::from_bigints(&v.basis(), v.p, prec)
}

/// `ρ_p(γ)·L` for a precomputed image matrix; returns the vertex and the
/// unused precision margin.
pub fn act_matrix(image: &PAdicMatrix2, v: &TreeVertex) -> Result<(TreeVertex, i64)> {
    let prec = image.precision() + (v.a + v.b) as i64 + 2;
    canonicalize_with_margin(&image.mul(&basis_padic(v, prec)))
}

/// Action of a nonzero quaternion on a vertex by left multiplication of
/// `ρ_p(γ)` on a lattice basis. Scalars act trivially.
pub fn act(gamma: &RatQuaternion, v: &TreeVertex, split: &SplittingData) -> Result<TreeVertex> {
    if split.prime() != v.p {
        return Err(Error::InvalidInput(format!("splitting at {} applied to a vertex at {}", split.prime(), v.p)));
    }
    let image = split.apply_primitive(gamma)?;
    act_matrix(&image, v).map(|(w, _)| w)
}

/// Tree distance: `e2 − e1` for the change of basis between the two
/// Hermite lattices.
pub fn distance(v1: &TreeVertex, v2: &TreeVertex) -> Result<u32> {
    if v1.p != v2.p {
        return Err(Error::InvalidInput("vertices belong to trees at different primes".into()));
    }
    let b1 = v1.basis();
    let adj = [[b1[1][1].clone(), -&b1[0][1]], [BigInt::zero(), b1[0][0].clone()]];
    let (e1, e2) = integer_elementary_divisors(&mat_mul(&adj, &v2.basis()), v1.p)?;
    Ok((e2 - e1) as u32)
}

/// All vertices within distance `radius` of the base vertex, sorted.
pub fn ball(p: u64, radius: u32) -> Vec<TreeVertex> {
    let mut seen: HashSet<TreeVertex> = HashSet::new();
    let mut frontier = vec![TreeVertex::base(p)];
    seen.insert(TreeVertex::base(p));
    for _ in 0..radius {
        let mut next = Vec::new();
        for v in &frontier {
            for w in v.neighbors() {
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub p: u64,
    pub generators: usize,
    pub neighbors: Vec<TreeVertex>,
    /// Number of norm-p elements sending the base vertex to each neighbor.
    pub hits: Vec<usize>,
}

/// Checks that the norm-p Hurwitz elements move the base vertex onto every
/// one of its `p + 1` neighbors.
pub fn verify_neighbor_coverage(p: u64) -> Result<CoverageReport> {
    check_odd_prime(p)?;
    let split = hensel_lift_splitting(p, DEFAULT_PRECISION)?;
    let gens = enumerate_by_norm(p)?.elements;
    let base = TreeVertex::base(p);
    let images: Vec<TreeVertex> = gens
        .par_iter()
        .map(|g| act(&g.to_rational(), &base, &split))
        .collect::<Result<_>>()?;
    let neighbors = base.neighbors();
    let hits: Vec<usize> = neighbors.iter().map(|n| images.iter().filter(|v| *v == n).count()).collect();
    let missing = hits.iter().filter(|&&h| h == 0).count();
    if missing > 0 || images.iter().any(|v| v.distance_to_base() != 1) {
        return Err(Error::CoverageFailure { p, missing, total: neighbors.len() });
    }
    Ok(CoverageReport { p, generators: gens.len(), neighbors, hits })
}

/// One vertex per prime of S_f, in ascending prime order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductVertex {
    pub components: Vec<TreeVertex>,
}

impl ProductVertex {
    pub fn base(s: &SPlaceSet) -> Self {
        Self { components: s.primes().iter().map(|&p| TreeVertex::base(p)).collect() }
    }
}

impl fmt::Display for ProductVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|v| format!("{}:{v}", v.p)).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitivityReport {
    pub primes: Vec<u64>,
    pub radius: u32,
    pub precision: u32,
    pub generators: usize,
    pub ball_sizes: Vec<usize>,
    pub target_vertices: usize,
    pub reached: usize,
    pub bfs_levels: u32,
    pub min_precision_margin: i64,
    /// Every reached vertex with a quaternion moving the base vertex onto it.
    pub witnesses: Vec<(ProductVertex, RatQuaternion)>,
}

/// Breadth-first search from the base vertex of `∏_{ℓ∈S} T_ℓ`, using the
/// generating set of norm-1 and norm-ℓ elements, restricted to the product
/// of radius-`radius` balls. Fails unless every vertex of that product is
/// reached. Each reached vertex gets an explicit witness, re-checked by a
/// direct action of the witness on the base vertex.
pub fn verify_product_transitivity(s: &SPlaceSet, radius: u32) -> Result<TransitivityReport> {
    let precision = 2 * radius + 8;
    let splits: Vec<SplittingData> =
        s.primes().iter().map(|&p| hensel_lift_splitting(p, precision)).collect::<Result<_>>()?;
    let gens: Vec<RatQuaternion> = generating_set(s)?.iter().map(|g| g.to_rational()).collect();
    // images[g][i] = ρ_{ℓ_i}(g), computed once.
    let images: Vec<Vec<PAdicMatrix2>> = gens
        .iter()
        .map(|g| splits.iter().map(|sp| sp.apply_primitive(g)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let balls: Vec<Vec<TreeVertex>> = s.primes().iter().map(|&p| ball(p, radius)).collect();
    let ball_sizes: Vec<usize> = balls.iter().map(Vec::len).collect();
    let target_vertices: usize = ball_sizes.iter().product();

    let base = ProductVertex::base(s);
    let mut witness: HashMap<ProductVertex, RatQuaternion> = HashMap::new();
    witness.insert(base.clone(), RatQuaternion::one());
    let mut frontier = vec![base.clone()];
    let mut levels = 0;
    let mut min_margin = i64::MAX;
    while !frontier.is_empty() {
        let moves: Vec<Vec<(ProductVertex, i64)>> = frontier
            .par_iter()
            .map(|u| {
                images
                    .iter()
                    .map(|img| {
                        let mut comps = Vec::with_capacity(u.components.len());
                        let mut margin = i64::MAX;
                        for (m, v) in img.iter().zip(&u.components) {
                            let (w, mg) = act_matrix(m, v)?;
                            margin = margin.min(mg);
                            comps.push(w);
                        }
                        Ok((ProductVertex { components: comps }, margin))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (u, row) in frontier.iter().zip(moves) {
            for (g, (w, margin)) in gens.iter().zip(row) {
                min_margin = min_margin.min(margin);
                if w.components.iter().any(|v| v.distance_to_base() > radius) || witness.contains_key(&w) {
                    continue;
                }
                let wu = g * &witness[u];
                witness.insert(w.clone(), wu);
                next.push(w);
            }
        }
        next.sort();
        if !next.is_empty() {
            levels += 1;
        }
        frontier = next;
    }
    if min_margin <= 0 {
        return Err(insufficient(s.primes().first().copied().unwrap_or(0), precision as i64 - min_margin + 1, precision as i64));
    }

    let reached = witness.len();
    if reached != target_vertices {
        return Err(Error::UnreachedVertex { radius, unreached: target_vertices.saturating_sub(reached) });
    }

    let witnesses: BTreeMap<ProductVertex, RatQuaternion> = witness.into_iter().collect();
    witnesses.par_iter().try_for_each(|(v, w)| -> Result<()> {
        for (sp, target) in splits.iter().zip(&v.components) {
            let got = act(w, &TreeVertex::base(sp.prime()), sp)?;
            if &got != target {
                return Err(Error::WitnessMismatch { vertex: v.to_string() });
            }
        }
        Ok(())
    })?;

    Ok(TransitivityReport {
        primes: s.primes().to_vec(),
        radius,
        precision,
        generators: gens.len(),
        ball_sizes,
        target_vertices,
        reached,
        bfs_levels: levels,
        min_precision_margin: if min_margin == i64::MAX { precision as i64 } else { min_margin },
        witnesses: witnesses.into_iter().collect(),
    })
}
