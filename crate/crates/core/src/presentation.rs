//! Words in the two generators `a`, `b` and the relator check for the
//! presentation of the S-unit group at S = {∞, 3, 5}.
//!
//! The generators `a = −1 + I − J − 3K` and `b = −9 − 7I − J + 7K` have
//! reduced norms 12 and 180, which are not S-units, so relators can only
//! hold modulo the center. Each relator is therefore checked to evaluate
//! to a nonzero rational scalar.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::rat_pow;
use crate::error::{Error, Result};
use crate::quaternion::{HurwitzElement, RatQuaternion, SPlaceSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    A,
    B,
}

impl Generator {
    fn letter(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
        }
    }
}

/// A freely reduced word: adjacent syllables use different generators and
/// every exponent is nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    syllables: Vec<(Generator, i64)>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_syllables<I: IntoIterator<Item = (Generator, i64)>>(it: I) -> Self {
        let mut w = Self::empty();
        for (g, e) in it {
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, g: Generator, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, exp)) if *last == g => {
                *exp += e;
                if *exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((g, e)),
        }
    }

    pub fn syllables(&self) -> &[(Generator, i64)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Free-group product (concatenation followed by reduction).
    pub fn concat(&self, o: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &o.syllables {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word::from_syllables(self.syllables.iter().rev().map(|&(g, e)| (g, -e)))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::empty(), |acc, _| acc.concat(&base))
    }

    /// Exact value of the word under `a ↦ a_val`, `b ↦ b_val`.
    pub fn evaluate(&self, a_val: &RatQuaternion, b_val: &RatQuaternion) -> Result<RatQuaternion> {
        if a_val.is_zero() || b_val.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut acc = RatQuaternion::one();
        for &(g, e) in &self.syllables {
            let base = match g {
                Generator::A => a_val,
                Generator::B => b_val,
            };
            acc = &acc * &base.pow(e)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for &(g, e) in &self.syllables {
            write!(f, "{}", g.letter())?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses words such as `b^-1a^-2ba^-1` and `(ba^2b^-1)^2`; `1` is the
    /// empty word. Unicode superscripts (`a⁻¹`, `b²`) are accepted too.
    fn from_str(s: &str) -> Result<Self> {
        let text: Vec<char> = normalise_superscripts(s).chars().filter(|c| !c.is_whitespace()).collect();
        if text.iter().collect::<String>() == "1" {
            return Ok(Word::empty());
        }
        let mut pos = 0;
        let w = parse_sequence(&text, &mut pos)?;
        if pos != text.len() {
            return Err(Error::Parse(format!("unexpected {:?} in word", text[pos])));
        }
        Ok(w)
    }
}

fn normalise_superscripts(s: &str) -> String {
    let mut out = String::new();
    let mut in_sup = false;
    for ch in s.chars() {
        let mapped = match ch {
            '⁻' => Some('-'),
            '⁰' => Some('0'),
            '¹' => Some('1'),
            '²' => Some('2'),
            '³' => Some('3'),
            '⁴' => Some('4'),
            '⁵' => Some('5'),
            '⁶' => Some('6'),
            '⁷' => Some('7'),
            '⁸' => Some('8'),
            '⁹' => Some('9'),
            _ => None,
        };
        match mapped {
            Some(m) => {
                if !in_sup {
                    out.push('^');
                    in_sup = true;
                }
                out.push(m);
            }
            None => {
                in_sup = false;
                out.push(ch);
            }
        }
    }
    out
}

fn parse_exponent(text: &[char], pos: &mut usize) -> Result<i64> {
    if text.get(*pos) != Some(&'^') {
        return Ok(1);
    }
    *pos += 1;
    let start = *pos;
    if text.get(*pos) == Some(&'-') {
        *pos += 1;
    }
    while text.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
        *pos += 1;
    }
    let s: String = text[start..*pos].iter().collect();
    s.parse().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))
}

fn parse_sequence(text: &[char], pos: &mut usize) -> Result<Word> {
    let mut w = Word::empty();
    let mut any = false;
    while let Some(&c) = text.get(*pos) {
        let atom = match c {
            'a' | 'b' => {
                *pos += 1;
                let g = if c == 'a' { Generator::A } else { Generator::B };
                Word::from_syllables([(g, 1)])
            }
            '(' => {
                *pos += 1;
                let inner = parse_sequence(text, pos)?;
                if text.get(*pos) != Some(&')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                *pos += 1;
                inner
            }
            ')' => break,
            other => return Err(Error::Parse(format!("unexpected {other:?} in word"))),
        };
        let e = parse_exponent(text, pos)?;
        w = w.concat(&atom.pow(e));
        any = true;
    }
    if !any {
        return Err(Error::Parse("empty word".into()));
    }
    Ok(w)
}

/// The generators `a` and `b` of the presentation.
pub fn presentation_generators() -> (RatQuaternion, RatQuaternion) {
    (RatQuaternion::from_ints(-1, 1, -1, -3), RatQuaternion::from_ints(-9, -7, -1, 7))
}

/// The eight relators, as transcribed from the published presentation.
pub const RELATORS: [(&str, &str); 8] = [
    ("r1", "(b^-1a^-1ba^-1)^3"),
    ("r2", "(b^-1a^-2ba^-1b^-1a^-1)^2"),
    ("r3", "(a^-1b^-1a^-1b^-1a^-1ba^-1)^2"),
    ("r4", "b^-1abab^-1a^-1b^2ab^-1aba^2b^-1abab^-1a^2ba^2b^-1a^-1ba^-2b^-1a^-2"),
    ("r5", "(ba^2b^-1aba^-1b)^2"),
    ("r6", "b^-1a^3ba^2b^-1ab^-1a^-2ba^-1b^-1a"),
    ("r7", "b^-2a^-1ba^-1b^-1aba^2b^-2a^-2ba^-1"),
    ("r8", "ab^-1a^2ba^-1b^-1a^-2ba^-2b^-1aba"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelatorOutcome {
    pub name: String,
    pub word: String,
    pub value: RatQuaternion,
    pub central: bool,
}

impl RelatorOutcome {
    /// The scalar value when central.
    pub fn scalar(&self) -> Option<&BigRational> {
        self.central.then_some(&self.value.w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelatorReport {
    pub outcomes: Vec<RelatorOutcome>,
}

impl RelatorReport {
    pub fn all_central(&self) -> bool {
        self.outcomes.iter().all(|o| o.central)
    }
}

/// Evaluates every relator under the standard assignment, without failing
/// on a non-central result.
pub fn evaluate_relators() -> Result<RelatorReport> {
    let (a, b) = presentation_generators();
    let outcomes = RELATORS
        .iter()
        .map(|(name, text)| {
            let word: Word = text.parse()?;
            let value = word.evaluate(&a, &b)?;
            let central = value.is_central() && !value.is_zero();
            Ok(RelatorOutcome { name: name.to_string(), word: text.to_string(), value, central })
        })
        .collect::<Result<_>>()?;
    Ok(RelatorReport { outcomes })
}

/// Like [`evaluate_relators`], failing on the first non-central relator.
pub fn verify_relators() -> Result<RelatorReport> {
    let report = evaluate_relators()?;
    if let Some(bad) = report.outcomes.iter().find(|o| !o.central) {
        return Err(Error::NonCentralRelator { name: bad.name.clone() });
    }
    Ok(report)
}

/// Searches scalars `c = ±2^i·∏ ℓ^{j_ℓ}` (`|i|, |j_ℓ| ≤ max_exp`) with `q/c` a
/// Hurwitz element of S-unit norm. Candidates are tried by increasing total
/// exponent, positive sign first, so the answer is deterministic.
pub fn rescale_to_s_unit_bounded(q: &RatQuaternion, s: &SPlaceSet, max_exp: u32) -> Option<(BigRational, HurwitzElement)> {
    if q.is_zero() {
        return None;
    }
    let mut primes = vec![2u64];
    primes.extend_from_slice(s.primes());
    let range: Vec<i64> = (-(max_exp as i64)..=max_exp as i64).collect();
    let mut candidates: Vec<Vec<i64>> = vec![vec![]];
    for _ in &primes {
        candidates = candidates
            .into_iter()
            .flat_map(|c| range.iter().map(move |&e| [c.clone(), vec![e]].concat()))
            .collect();
    }
    candidates.sort_by_key(|exps| (exps.iter().map(|e| e.unsigned_abs()).sum::<u64>(), exps.clone()));
    for exps in candidates {
        let mag = primes.iter().zip(&exps).fold(BigRational::one(), |acc, (&p, &e)| acc * rat_pow(p, e));
        for c in [mag.clone(), -mag] {
            let scaled = q.scale(&c.recip());
            if let Some(h) = scaled.to_hurwitz() {
                if h.to_rational().is_s_unit(s) {
                    return Some((c, h));
                }
            }
        }
    }
    None
}

pub fn rescale_to_s_unit(q: &RatQuaternion, s: &SPlaceSet) -> Option<(BigRational, HurwitzElement)> {
    rescale_to_s_unit_bounded(q, s, 4)
}

/// Whether a rational is ±1 times a product of powers of the given primes.
pub fn is_supported_on(x: &BigRational, primes: &[u64]) -> bool {
    if x.is_zero() {
        return false;
    }
    [x.numer().abs(), x.denom().abs()].into_iter().all(|mut n: BigInt| {
        for &p in primes {
            while (&n % p).is_zero() {
                n /= p;
            }
        }
        n.is_one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parsing_and_reduction() {
        assert_eq!(w("aa^-1"), Word::empty());
        assert_eq!(w("1"), Word::empty());
        assert_eq!(w("ab^2b^-2a"), Word::from_syllables([(Generator::A, 2)]));
        assert_eq!(w("(ab)^2").to_string(), "abab");
        assert_eq!(w("(ab)^-1").to_string(), "b^-1a^-1");
        assert_eq!(w("b⁻¹a³b"), w("b^-1a^3b"));
        for bad in ["", "c", "(ab", "a^", "ab)"] {
            assert!(bad.parse::<Word>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn evaluation() {
        let (a, b) = presentation_generators();
        assert!(Word::empty().evaluate(&a, &b).unwrap().is_one());
        assert_eq!(w("a").evaluate(&a, &b).unwrap(), a);
        assert!(w("(ab)(ab)^-1").evaluate(&a, &b).unwrap().is_one());
        assert_eq!(w("a").evaluate(&RatQuaternion::zero(), &b), Err(Error::ZeroElement));
    }

    #[test]
    fn relators_are_central() {
        let report = verify_relators().unwrap();
        assert_eq!(report.outcomes.len(), 8);
        assert!(report.all_central());
        let r1 = &report.outcomes[0];
        assert_eq!(r1.scalar(), Some(&BigRational::new(1.into(), 1728.into())));
        let r8 = &report.outcomes[7];
        assert_eq!(r8.scalar(), Some(&BigRational::one()));
        // Central values are supported on {2, 3, 5}.
        for o in &report.outcomes {
            assert!(is_supported_on(o.scalar().unwrap(), &[2, 3, 5]), "{}", o.name);
        }
    }

    #[test]
    fn non_central_words_are_detected() {
        let (a, b) = presentation_generators();
        let v = w("ab").evaluate(&a, &b).unwrap();
        assert!(!v.is_central());
    }

    #[test]
    fn rescaling() {
        let s = SPlaceSet::new([3, 5]).unwrap();
        let (a, b) = presentation_generators();
        let (c, h) = rescale_to_s_unit(&a, &s).unwrap();
        assert_eq!(c, BigRational::from_integer(2.into()));
        assert_eq!(h.norm(), 3);
        let (c, h) = rescale_to_s_unit(&b, &s).unwrap();
        assert_eq!(c, BigRational::from_integer(2.into()));
        assert_eq!(h.norm(), 45);
        let (c, h) = rescale_to_s_unit(&RatQuaternion::i(), &SPlaceSet::archimedean()).unwrap();
        assert!(c.is_one());
        assert_eq!(h.norm(), 1);
        // 1 + I has norm 2 and no admissible rescaling.
        assert!(rescale_to_s_unit(&"1+I".parse().unwrap(), &s).is_none());
    }
}
