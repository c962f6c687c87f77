//! The Newton polygon as a multiset of exact slopes.
//!
//! Internally a polygon is the sorted multiset of slopes with
//! multiplicities; the piecewise-linear rendering (breakpoints) is derived
//! on demand. `ord` is slopes `{0, 1}`, `ss` is slope `1/2` with
//! multiplicity `2`, and `(s/t, (t-s)/t)` has both slopes with
//! multiplicity `t`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("slope {0} outside [0, 1]")]
    SlopeOutOfRange(Rational),
    #[error("slopes {0} and {1} have unequal multiplicities {2} and {3}")]
    Asymmetric(Rational, Rational, u64, u64),
    #[error("breakpoint after slope {0} is not integral (partial sum {1})")]
    NonIntegralBreakpoint(Rational, Rational),
    #[error("total multiplicity {0} is odd")]
    OddHeight(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("empty polygon label")]
    Empty,
    #[error("malformed term {0:?}")]
    BadTerm(String),
    #[error("malformed fraction {0:?}")]
    BadFraction(String),
    #[error("fractions {0} and {1} are not complementary slopes s/t, (t-s)/t")]
    NotComplementary(Rational, Rational),
}

/// A `p`-divisible group `G_{c,d}` with `gcd(c, d) = 1`, contributing the
/// slope `d/(c+d)` with height `(c+d)·multiplicity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsoclinicBlock {
    pub codim: u64,
    pub dim: u64,
    pub multiplicity: u64,
}

impl IsoclinicBlock {
    pub fn new(codim: u64, dim: u64, multiplicity: u64) -> Self {
        assert!(codim + dim > 0, "block must have positive height");
        assert_eq!(codim.gcd(&dim), 1, "c and d must be coprime");
        IsoclinicBlock {
            codim,
            dim,
            multiplicity,
        }
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.dim as i64, (self.codim + self.dim) as i64)
    }

    pub fn height(&self) -> u64 {
        (self.codim + self.dim) * self.multiplicity
    }
}

/// A symmetric multiset of exact slopes in `[0, 1]`, stored as strictly
/// increasing `(slope, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct NewtonPolygon {
    entries: Vec<(Rational, u64)>,
}

impl NewtonPolygon {
    pub fn empty() -> Self {
        NewtonPolygon::default()
    }

    /// Builds a polygon from an arbitrary multiset of `(slope, mult)` pairs,
    /// merging repeats and dropping zero multiplicities.
    pub fn from_slopes<I: IntoIterator<Item = (Rational, u64)>>(slopes: I) -> Self {
        let mut map: BTreeMap<Rational, u64> = BTreeMap::new();
        for (s, mult) in slopes {
            if mult > 0 {
                *map.entry(s.reduced()).or_insert(0) += mult;
            }
        }
        NewtonPolygon {
            entries: map.into_iter().collect(),
        }
    }

    pub fn from_blocks(blocks: &[IsoclinicBlock]) -> Self {
        Self::from_slopes(blocks.iter().map(|b| (b.slope(), b.height())))
    }

    /// The isoclinic polygon of the given height with a single slope.
    pub fn isoclinic(slope: Rational, height: u64) -> Self {
        Self::from_slopes([(slope, height)])
    }

    /// `ord^k`: slopes 0 and 1 with multiplicity `k` each.
    pub fn ordinary(k: u64) -> Self {
        Self::from_slopes([(Rational::zero(), k), (Rational::one(), k)])
    }

    /// `ss^k`: slope 1/2 with multiplicity `2k`.
    pub fn supersingular(k: u64) -> Self {
        Self::from_slopes([(Rational::new(1, 2), 2 * k)])
    }

    /// Multiset union; heights and dimensions add.
    pub fn amalgamate<'a, I: IntoIterator<Item = &'a NewtonPolygon>>(polys: I) -> Self {
        Self::from_slopes(
            polys
                .into_iter()
                .flat_map(|p| p.entries.iter().copied()),
        )
    }

    pub fn entries(&self) -> &[(Rational, u64)] {
        &self.entries
    }

    /// Total multiplicity, i.e. `2g` for the polygon of a genus-`g` Jacobian.
    pub fn height(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Sum of slope·multiplicity; equals `g` for a valid polygon.
    pub fn dimension(&self) -> Rational {
        self.entries
            .iter()
            .map(|&(s, m)| s * Rational::from_integer(m as i64))
            .sum()
    }

    pub fn multiplicity_of(&self, slope: Rational) -> u64 {
        let slope = slope.reduced();
        self.entries
            .iter()
            .find(|&&(s, _)| s == slope)
            .map_or(0, |&(_, m)| m)
    }

    /// Multiplicity of the slope 0.
    pub fn p_rank(&self) -> u64 {
        self.multiplicity_of(Rational::zero())
    }

    /// True iff the polygon is nonempty and its only slope is 1/2.
    pub fn is_supersingular(&self) -> bool {
        self.entries.len() == 1 && self.entries[0].0 == Rational::new(1, 2)
    }

    /// Checks slope range, symmetry, and integral breakpoints.
    pub fn validate(&self) -> Result<(), PolygonError> {
        let total = self.height();
        if total % 2 != 0 {
            return Err(PolygonError::OddHeight(total));
        }
        let mut partial = Rational::zero();
        for &(s, mult) in &self.entries {
            if s.is_negative() || s > Rational::one() {
                return Err(PolygonError::SlopeOutOfRange(s));
            }
            let dual = Rational::one() - s;
            let dual_mult = self.multiplicity_of(dual);
            if dual_mult != mult {
                return Err(PolygonError::Asymmetric(s, dual, mult, dual_mult));
            }
            partial += s * Rational::from_integer(mult as i64);
            if !partial.is_integer() {
                return Err(PolygonError::NonIntegralBreakpoint(s, partial));
            }
        }
        Ok(())
    }

    /// Breakpoints of the lower convex rendering, from `(0, 0)` to `(2g, g)`.
    pub fn breakpoints(&self) -> Vec<(u64, Rational)> {
        let mut pts = Vec::with_capacity(self.entries.len() + 1);
        let mut x = 0u64;
        let mut y = Rational::zero();
        pts.push((x, y));
        for &(s, mult) in &self.entries {
            x += mult;
            y += s * Rational::from_integer(mult as i64);
            pts.push((x, y));
        }
        pts
    }

    /// Canonical label: `ord^k`, `ss^k`, `(s/t,(t-s)/t)^k` joined by the
    /// given separator, factors ordered by increasing first slope,
    /// exponent 1 omitted.
    pub fn label_with(&self, sep: &str) -> String {
        if self.entries.is_empty() {
            return "0".to_string();
        }
        // factor text keyed by its least slope, for deterministic ordering
        let mut factors: Vec<(Rational, String)> = Vec::new();
        let half = Rational::new(1, 2);
        let push = |factors: &mut Vec<(Rational, String)>, s: Rational, base: &str, exp: u64| {
            if exp == 1 {
                factors.push((s, base.to_string()));
            } else {
                factors.push((s, format!("{base}^{exp}")));
            }
        };
        for &(s, mult) in &self.entries {
            if s > half {
                continue; // handled with its dual
            }
            if s.is_zero() {
                push(&mut factors, s, "ord", mult);
            } else if s == half {
                debug_assert!(mult % 2 == 0);
                push(&mut factors, s, "ss", mult / 2);
            } else {
                let t = *s.denom() as u64;
                debug_assert!(
                    mult % t == 0,
                    "multiplicity {mult} of slope {s} not divisible by its denominator"
                );
                let base = format!("({},{})", s, Rational::one() - s);
                push(&mut factors, s, &base, mult / t);
            }
        }
        factors
            .into_iter()
            .map(|(_, txt)| txt)
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn label(&self) -> String {
        self.label_with(" ⊕ ")
    }

    /// ASCII variant joining factors with `+`.
    pub fn label_ascii(&self) -> String {
        self.label_with(" + ")
    }
}

impl core::fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.label())
    }
}

fn parse_fraction(text: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::BadFraction(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: i64 = text.trim().parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

fn parse_term(text: &str) -> Result<NewtonPolygon, ParseError> {
    let text = text.trim();
    let (base, exp) = match text.rsplit_once('^') {
        Some((b, e)) => {
            let exp: u64 = e
                .trim()
                .parse()
                .map_err(|_| ParseError::BadTerm(text.to_string()))?;
            (b.trim(), exp)
        }
        None => (text, 1),
    };
    match base {
        "ord" => Ok(NewtonPolygon::ordinary(exp)),
        "ss" => Ok(NewtonPolygon::supersingular(exp)),
        _ => {
            let inner = base
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| ParseError::BadTerm(text.to_string()))?;
            let (left, right) = inner
                .split_once(',')
                .ok_or_else(|| ParseError::BadTerm(text.to_string()))?;
            let a = parse_fraction(left)?;
            let b = parse_fraction(right)?;
            if a + b != Rational::one() {
                return Err(ParseError::NotComplementary(a, b));
            }
            let t = *a.denom() as u64;
            if *b.denom() as u64 != t {
                return Err(ParseError::NotComplementary(a, b));
            }
            Ok(NewtonPolygon::from_slopes([(a, t * exp), (b, t * exp)]))
        }
    }
}

/// Parses the label grammar `TERM (" ⊕ " TERM)*` with `TERM` one of
/// `ord`, `ss`, `(s/t,(t-s)/t)`, optionally followed by `^k`. The ASCII
/// separator `+` is accepted too, and the two fractions may appear in
/// either order.
pub fn parse_label(text: &str) -> Result<NewtonPolygon, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    if text == "0" {
        return Ok(NewtonPolygon::empty());
    }
    let mut parts: Vec<NewtonPolygon> = Vec::new();
    for chunk in text.replace('⊕', "+").split('+') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            return Err(ParseError::BadTerm(text.to_string()));
        }
        parts.push(parse_term(chunk)?);
    }
    Ok(NewtonPolygon::amalgamate(parts.iter()))
}
