//! Linear equations over the variables of one algebraic table.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::geometry::PointId;

/// Exact rational scalar used by every table.
pub type Rational = BigRational;

/// The three algebraic tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    /// Segment lengths.
    Len,
    /// Logarithms of segment lengths (and of sines when enabled).
    LogLen,
    /// Squared segment lengths.
    SqLen,
}

impl Table {
    pub const ALL: [Table; 3] = [Table::Len, Table::LogLen, Table::SqLen];

    pub fn keyword(self) -> &'static str {
        match self {
            Table::Len => "len",
            Table::LogLen => "loglen",
            Table::SqLen => "sqlen",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Table> {
        match s {
            "len" => Some(Table::Len),
            "loglen" => Some(Table::LogLen),
            "sqlen" => Some(Table::SqLen),
            _ => None,
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A table variable, without its table tag.
///
/// `Seg(a, b)` always has `a < b`. `Sin(x, v, y)` is the sine of the angle at
/// vertex `v` between the lines `vx` and `vy`, with `x < y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarKey {
    Seg(PointId, PointId),
    Sin(PointId, PointId, PointId),
}

impl VarKey {
    /// Canonical segment key, or `None` for a zero-length segment.
    pub fn seg(a: PointId, b: PointId) -> Option<VarKey> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(VarKey::Seg(a, b)),
            std::cmp::Ordering::Greater => Some(VarKey::Seg(b, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Canonical sine key for the angle at `vertex` between rays to `x` and `y`.
    pub fn sin(x: PointId, vertex: PointId, y: PointId) -> Option<VarKey> {
        if x == vertex || y == vertex || x == y {
            return None;
        }
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        Some(VarKey::Sin(x, vertex, y))
    }

    pub fn points(&self) -> Vec<PointId> {
        match *self {
            VarKey::Seg(a, b) => vec![a, b],
            VarKey::Sin(x, v, y) => vec![x, v, y],
        }
    }

    pub fn is_sine(&self) -> bool {
        matches!(self, VarKey::Sin(..))
    }
}

/// A variable tagged with the table it lives in. Pivot order is `(table, key)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub table: Table,
    pub key: VarKey,
}

/// `sum(coef * var) + constant = 0` over one table, kept normalized: no zero
/// coefficients, integral entries with content 1, and a positive leading
/// coefficient in pivot order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    table: Table,
    terms: BTreeMap<VarKey, Rational>,
    constant: Rational,
}

impl Equation {
    pub fn new(
        table: Table,
        terms: impl IntoIterator<Item = (VarKey, Rational)>,
        constant: Rational,
    ) -> Equation {
        let mut map: BTreeMap<VarKey, Rational> = BTreeMap::new();
        for (k, c) in terms {
            let slot = map.entry(k).or_insert_with(Rational::zero);
            *slot += c;
        }
        let mut eq = Equation {
            table,
            terms: map,
            constant,
        };
        eq.normalize();
        eq
    }

    /// Builds an equation from integer coefficients over segments, skipping
    /// zero-length segments (their value is zero in `Len` and `SqLen`).
    pub fn from_segments(table: Table, terms: &[(i64, PointId, PointId)], constant: i64) -> Equation {
        Equation::new(
            table,
            terms
                .iter()
                .filter_map(|&(c, a, b)| VarKey::seg(a, b).map(|k| (k, Rational::from_integer(c.into())))),
            Rational::from_integer(constant.into()),
        )
    }

    /// Builds a raw (unnormalized) linear form. Used for residuals.
    pub(crate) fn raw(table: Table, terms: BTreeMap<VarKey, Rational>, constant: Rational) -> Equation {
        Equation {
            table,
            terms,
            constant,
        }
    }

    pub fn table(&self) -> Table {
        self.table
    }

    pub fn terms(&self) -> &BTreeMap<VarKey, Rational> {
        &self.terms
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, key: &VarKey) -> Option<&Rational> {
        self.terms.get(key)
    }

    /// `0 = 0`.
    pub fn is_tautology(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    /// `c = 0` with `c != 0`.
    pub fn is_contradiction(&self) -> bool {
        self.terms.is_empty() && !self.constant.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.is_tautology()
    }

    pub fn leading(&self) -> Option<(&VarKey, &Rational)> {
        self.terms.iter().next()
    }

    pub fn uses_sines(&self) -> bool {
        self.terms.keys().any(VarKey::is_sine)
    }

    pub fn points(&self) -> Vec<PointId> {
        let mut pts: Vec<PointId> = self.terms.keys().flat_map(|k| k.points()).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Scales by an integer factor so every entry is integral with gcd 1 and
    /// the leading coefficient (or the constant, for a bare constant) is positive.
    pub fn normalize(&mut self) {
        let factor = self.normalize_factor();
        self.scale_in_place(&factor);
    }

    /// Normalizes and returns the factor the equation was multiplied by.
    pub(crate) fn normalize_returning_factor(&mut self) -> Rational {
        let factor = self.normalize_factor();
        self.scale_in_place(&factor);
        factor
    }

    fn scale_in_place(&mut self, factor: &Rational) {
        if factor.is_one() {
            return;
        }
        for c in self.terms.values_mut() {
            *c *= factor;
        }
        self.constant *= factor;
    }

    fn normalize_factor(&mut self) -> Rational {
        self.terms.retain(|_, c| !c.is_zero());
        let mut lcm = BigInt::one();
        for c in self.terms.values().chain(std::iter::once(&self.constant)) {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for c in self.terms.values().chain(std::iter::once(&self.constant)) {
            let scaled = c.numer() * (&lcm / c.denom());
            gcd = gcd.gcd(&scaled);
        }
        if gcd.is_zero() {
            return Rational::one();
        }
        let lead_negative = match self.terms.values().next() {
            Some(c) => c.is_negative(),
            None => self.constant.is_negative(),
        };
        if lead_negative {
            Rational::new(-lcm, gcd)
        } else {
            Rational::new(lcm, gcd)
        }
    }

    /// `self + factor * other`, unnormalized. Tables must match.
    pub fn add_scaled(&mut self, other: &Equation, factor: &Rational) {
        debug_assert_eq!(self.table, other.table);
        for (k, c) in &other.terms {
            let prod = c * factor;
            match self.terms.get_mut(k) {
                Some(slot) => {
                    *slot += prod;
                    if slot.is_zero() {
                        self.terms.remove(k);
                    }
                }
                None => {
                    if !prod.is_zero() {
                        self.terms.insert(*k, prod);
                    }
                }
            }
        }
        self.constant += &other.constant * factor;
    }

    /// Relabels points. `None` when a segment or angle collapses.
    pub fn map_points(&self, f: impl Fn(PointId) -> PointId) -> Option<Equation> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            let key = match *k {
                VarKey::Seg(a, b) => VarKey::seg(f(a), f(b))?,
                VarKey::Sin(x, v, y) => VarKey::sin(f(x), f(v), f(y))?,
            };
            terms.push((key, c.clone()));
        }
        Some(Equation::new(self.table, terms, self.constant.clone()))
    }

    pub fn scaled(&self, factor: &Rational) -> Equation {
        let mut out = Equation::raw(self.table, BTreeMap::new(), Rational::zero());
        out.add_scaled(self, factor);
        out
    }

    /// Renders with point names, e.g. `sqlen +1 a b -1 c d = 0`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        EquationDisplay { eq: self, names }
    }
}

struct EquationDisplay<'a> {
    eq: &'a Equation,
    names: &'a [String],
}

fn name(names: &[String], p: PointId) -> String {
    names
        .get(p.index())
        .cloned()
        .unwrap_or_else(|| format!("#{}", p.0))
}

pub(crate) fn fmt_signed(c: &Rational) -> String {
    if c.is_negative() {
        format!("{c}")
    } else {
        format!("+{c}")
    }
}

impl fmt::Display for EquationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.eq.table)?;
        for (k, c) in &self.eq.terms {
            match *k {
                VarKey::Seg(a, b) => write!(
                    f,
                    " {} {} {}",
                    fmt_signed(c),
                    name(self.names, a),
                    name(self.names, b)
                )?,
                VarKey::Sin(x, v, y) => write!(
                    f,
                    " {} sin {} {} {}",
                    fmt_signed(c),
                    name(self.names, x),
                    name(self.names, v),
                    name(self.names, y)
                )?,
            }
        }
        // stored form is `lhs + constant = 0`
        write!(f, " = {}", -&self.eq.constant)
    }
}

/// Parses `2`, `-3`, `+1/2`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// JSON form of a rational: decimal strings for numerator and denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Option<Rational> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(num, den))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    var: VarKey,
    coef: RationalJson,
}

#[derive(Serialize, Deserialize)]
struct EquationJson {
    table: Table,
    terms: Vec<TermJson>,
    constant: RationalJson,
}

impl Serialize for Equation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EquationJson {
            table: self.table,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermJson {
                    var: *k,
                    coef: c.into(),
                })
                .collect(),
            constant: (&self.constant).into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Equation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = EquationJson::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for t in j.terms {
            let c = t
                .coef
                .to_rational()
                .ok_or_else(|| D::Error::custom("bad rational coefficient"))?;
            if terms.insert(t.var, c).is_some() {
                return Err(D::Error::custom("duplicate variable in equation"));
            }
        }
        let constant = j
            .constant
            .to_rational()
            .ok_or_else(|| D::Error::custom("bad rational constant"))?;
        // keep the exact stored form so tampering stays visible to checkers
        Ok(Equation::raw(j.table, terms, constant))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u16) -> PointId {
        PointId(i)
    }

    #[test]
    fn normalization_clears_denominators_and_sign() {
        let e = Equation::new(
            Table::Len,
            [
                (VarKey::Seg(p(0), p(1)), Rational::new((-1).into(), 2.into())),
                (VarKey::Seg(p(1), p(2)), Rational::new(3.into(), 4.into())),
            ],
            Rational::zero(),
        );
        let coefs: Vec<String> = e.terms().values().map(|c| c.to_string()).collect();
        assert_eq!(coefs, ["2", "-3"]);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let e = Equation::from_segments(Table::SqLen, &[(1, p(0), p(1)), (-1, p(1), p(0))], 0);
        assert!(e.is_tautology());
        let e = Equation::from_segments(Table::Len, &[(1, p(0), p(0))], 0);
        assert!(e.is_tautology());
    }

    #[test]
    fn bare_constant_normalizes_to_one() {
        let e = Equation::new(Table::Len, [], Rational::from_integer((-6).into()));
        assert!(e.is_contradiction());
        assert_eq!(e.constant(), &Rational::one());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("+1/2"), Some(Rational::new(1.into(), 2.into())));
        assert_eq!(parse_rational("-3"), Some(Rational::from_integer((-3).into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
