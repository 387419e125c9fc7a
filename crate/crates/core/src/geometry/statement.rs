//! Geometric statements and their canonical forms.
//!
//! Every statement kind has a fixed arity and a symmetry group acting on its
//! argument positions. The canonical form is the lexicographically smallest
//! image of the arguments under that group, so two statements describing the
//! same relation compare equal and hash identically.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::PointId;
use crate::ar::Equation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Coll,
    Cyclic,
    Para,
    Perp,
    Cong,
    EqAngle,
    EqRatio,
    Midpoint,
    AREq,
}

impl Kind {
    pub const POINT_KINDS: [Kind; 8] = [
        Kind::Coll,
        Kind::Cyclic,
        Kind::Para,
        Kind::Perp,
        Kind::Cong,
        Kind::EqAngle,
        Kind::EqRatio,
        Kind::Midpoint,
    ];

    /// Number of point arguments; `None` for equations.
    pub fn arity(self) -> Option<usize> {
        match self {
            Kind::Coll | Kind::Midpoint => Some(3),
            Kind::Cyclic | Kind::Para | Kind::Perp | Kind::Cong => Some(4),
            Kind::EqAngle | Kind::EqRatio => Some(8),
            Kind::AREq => None,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Coll => "coll",
            Kind::Cyclic => "cyclic",
            Kind::Para => "para",
            Kind::Perp => "perp",
            Kind::Cong => "cong",
            Kind::EqAngle => "eqangle",
            Kind::EqRatio => "eqratio",
            Kind::Midpoint => "midpoint",
            Kind::AREq => "areq",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Kind> {
        Some(match s {
            "coll" => Kind::Coll,
            "cyclic" => Kind::Cyclic,
            "para" => Kind::Para,
            "perp" => Kind::Perp,
            "cong" => Kind::Cong,
            "eqangle" => Kind::EqAngle,
            "eqratio" => Kind::EqRatio,
            "midpoint" => Kind::Midpoint,
            "areq" => Kind::AREq,
            _ => return None,
        })
    }
}

/// A relation between points. `Midpoint([m, a, b])` says `m` is the midpoint
/// of `ab`. `EqAngle` compares directed angles between lines modulo pi:
/// `angle(l0, l1) = angle(l2, l3)` with `l_i = (args[2i], args[2i+1])`.
/// `EqRatio` says `|s0| / |s1| = |s2| / |s3|` over the same segment layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statement {
    Coll([PointId; 3]),
    Cyclic([PointId; 4]),
    Para([PointId; 4]),
    Perp([PointId; 4]),
    Cong([PointId; 4]),
    EqAngle([PointId; 8]),
    EqRatio([PointId; 8]),
    Midpoint([PointId; 3]),
    #[serde(rename = "areq")]
    AREq(Equation),
}

impl Statement {
    /// Builds a statement from a kind and argument list, without canonicalizing.
    pub fn from_args(kind: Kind, args: &[PointId]) -> Option<Statement> {
        if Some(args.len()) != kind.arity() {
            return None;
        }
        Some(match kind {
            Kind::Coll => Statement::Coll(args.try_into().ok()?),
            Kind::Cyclic => Statement::Cyclic(args.try_into().ok()?),
            Kind::Para => Statement::Para(args.try_into().ok()?),
            Kind::Perp => Statement::Perp(args.try_into().ok()?),
            Kind::Cong => Statement::Cong(args.try_into().ok()?),
            Kind::EqAngle => Statement::EqAngle(args.try_into().ok()?),
            Kind::EqRatio => Statement::EqRatio(args.try_into().ok()?),
            Kind::Midpoint => Statement::Midpoint(args.try_into().ok()?),
            Kind::AREq => return None,
        })
    }

    pub fn coll(a: PointId, b: PointId, c: PointId) -> Statement {
        canonicalize(&Statement::Coll([a, b, c]))
    }

    pub fn cyclic(a: PointId, b: PointId, c: PointId, d: PointId) -> Statement {
        canonicalize(&Statement::Cyclic([a, b, c, d]))
    }

    pub fn para(a: PointId, b: PointId, c: PointId, d: PointId) -> Statement {
        canonicalize(&Statement::Para([a, b, c, d]))
    }

    pub fn perp(a: PointId, b: PointId, c: PointId, d: PointId) -> Statement {
        canonicalize(&Statement::Perp([a, b, c, d]))
    }

    pub fn cong(a: PointId, b: PointId, c: PointId, d: PointId) -> Statement {
        canonicalize(&Statement::Cong([a, b, c, d]))
    }

    pub fn midpoint(m: PointId, a: PointId, b: PointId) -> Statement {
        canonicalize(&Statement::Midpoint([m, a, b]))
    }

    pub fn eqangle(args: [PointId; 8]) -> Statement {
        canonicalize(&Statement::EqAngle(args))
    }

    pub fn eqratio(args: [PointId; 8]) -> Statement {
        canonicalize(&Statement::EqRatio(args))
    }

    pub fn areq(eq: Equation) -> Statement {
        canonicalize(&Statement::AREq(eq))
    }

    pub fn kind(&self) -> Kind {
        match self {
            Statement::Coll(_) => Kind::Coll,
            Statement::Cyclic(_) => Kind::Cyclic,
            Statement::Para(_) => Kind::Para,
            Statement::Perp(_) => Kind::Perp,
            Statement::Cong(_) => Kind::Cong,
            Statement::EqAngle(_) => Kind::EqAngle,
            Statement::EqRatio(_) => Kind::EqRatio,
            Statement::Midpoint(_) => Kind::Midpoint,
            Statement::AREq(_) => Kind::AREq,
        }
    }

    /// Point arguments in stored order; empty for equations.
    pub fn args(&self) -> &[PointId] {
        match self {
            Statement::Coll(a) | Statement::Midpoint(a) => a,
            Statement::Cyclic(a) | Statement::Para(a) | Statement::Perp(a) | Statement::Cong(a) => a,
            Statement::EqAngle(a) | Statement::EqRatio(a) => a,
            Statement::AREq(_) => &[],
        }
    }

    fn args_mut(&mut self) -> &mut [PointId] {
        match self {
            Statement::Coll(a) | Statement::Midpoint(a) => a,
            Statement::Cyclic(a) | Statement::Para(a) | Statement::Perp(a) | Statement::Cong(a) => a,
            Statement::EqAngle(a) | Statement::EqRatio(a) => a,
            Statement::AREq(_) => &mut [],
        }
    }

    pub fn equation(&self) -> Option<&Equation> {
        match self {
            Statement::AREq(e) => Some(e),
            _ => None,
        }
    }

    /// Sorted distinct points mentioned by the statement.
    pub fn points(&self) -> Vec<PointId> {
        let mut pts = match self {
            Statement::AREq(e) => e.points(),
            _ => self.args().to_vec(),
        };
        pts.sort();
        pts.dedup();
        pts
    }

    /// Applies a permutation of argument positions: `out[i] = args[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Statement {
        let mut out = self.clone();
        let src = self.args();
        let dst = out.args_mut();
        for (i, &j) in perm.iter().enumerate() {
            dst[i] = src[j];
        }
        out
    }

    /// Relabels points and canonicalizes the result.
    pub fn map_points(&self, f: impl Fn(PointId) -> PointId) -> Option<Statement> {
        let out = match self {
            Statement::AREq(e) => Statement::AREq(e.map_points(f)?),
            s => {
                let mut out = s.clone();
                for p in out.args_mut() {
                    *p = f(*p);
                }
                out
            }
        };
        Some(canonicalize(&out))
    }

    pub fn is_canonical(&self) -> bool {
        &canonicalize(self) == self
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        StatementDisplay { st: self, names }
    }
}

struct StatementDisplay<'a> {
    st: &'a Statement,
    names: &'a [String],
}

impl fmt::Display for StatementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.st {
            Statement::AREq(e) => write!(f, "areq {}", e.display_with(self.names)),
            st => {
                f.write_str(st.kind().keyword())?;
                for p in st.args() {
                    match self.names.get(p.index()) {
                        Some(n) => write!(f, " {n}")?,
                        None => write!(f, " #{}", p.0)?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

fn sort_pair(a: &mut [PointId]) {
    if a[0] > a[1] {
        a.swap(0, 1);
    }
}

/// The dihedral group of order 8 acting on four slots `(x0, x1, x2, x3)` of an
/// equality `r(x0, x1) = r(x2, x3)`: swapping sides, reversing both sides, and
/// exchanging the inner slots.
const D4: [[usize; 4]; 8] = [
    [0, 1, 2, 3],
    [2, 3, 0, 1],
    [1, 0, 3, 2],
    [3, 2, 1, 0],
    [0, 2, 1, 3],
    [1, 3, 0, 2],
    [2, 0, 3, 1],
    [3, 1, 2, 0],
];

fn canonical_quad_of_pairs(args: &[PointId; 8]) -> [PointId; 8] {
    let mut pairs = [[PointId(0); 2]; 4];
    for (i, pair) in pairs.iter_mut().enumerate() {
        pair.copy_from_slice(&args[2 * i..2 * i + 2]);
        sort_pair(pair);
    }
    let mut best: Option<[PointId; 8]> = None;
    for perm in &D4 {
        let mut cand = [PointId(0); 8];
        for (slot, &src) in perm.iter().enumerate() {
            cand[2 * slot] = pairs[src][0];
            cand[2 * slot + 1] = pairs[src][1];
        }
        if best.map_or(true, |b| cand < b) {
            best = Some(cand);
        }
    }
    best.expect("D4 is non-empty")
}

/// Returns the canonical representative of a statement's symmetry orbit.
pub fn canonicalize(s: &Statement) -> Statement {
    let mut out = s.clone();
    match &mut out {
        Statement::Coll(a) => a.sort(),
        Statement::Cyclic(a) => a.sort(),
        Statement::Para(a) | Statement::Perp(a) | Statement::Cong(a) => {
            sort_pair(&mut a[0..2]);
            sort_pair(&mut a[2..4]);
            if a[2..4] < a[0..2] {
                a.swap(0, 2);
                a.swap(1, 3);
            }
        }
        Statement::EqAngle(a) | Statement::EqRatio(a) => *a = canonical_quad_of_pairs(a),
        Statement::Midpoint(a) => sort_pair(&mut a[1..3]),
        Statement::AREq(e) => e.normalize(),
    }
    out
}

fn close_group(arity: usize, generators: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let identity: Vec<usize> = (0..arity).collect();
    let mut group = vec![identity];
    let mut frontier = 0;
    while frontier < group.len() {
        let g = group[frontier].clone();
        frontier += 1;
        for h in generators {
            let composed: Vec<usize> = h.iter().map(|&i| g[i]).collect();
            if !group.contains(&composed) {
                group.push(composed);
            }
        }
    }
    group.sort();
    group
}

fn swap(arity: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..arity).collect();
    p.swap(i, j);
    p
}

fn pair_layout(perm: [usize; 4]) -> Vec<usize> {
    perm.iter().flat_map(|&s| [2 * s, 2 * s + 1]).collect()
}

/// Full symmetry group of a kind as argument-position permutations.
/// Equations have no positional symmetry (the group is trivial and empty-arity).
pub fn symmetry_group(kind: Kind) -> &'static [Vec<usize>] {
    static GROUPS: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    let groups = GROUPS.get_or_init(|| {
        Kind::POINT_KINDS
            .iter()
            .map(|&k| {
                let n = k.arity().unwrap();
                let gens: Vec<Vec<usize>> = match k {
                    Kind::Coll | Kind::Cyclic => (1..n).map(|i| swap(n, 0, i)).collect(),
                    Kind::Para | Kind::Perp | Kind::Cong => {
                        vec![swap(n, 0, 1), swap(n, 2, 3), vec![2, 3, 0, 1]]
                    }
                    Kind::EqAngle | Kind::EqRatio => {
                        let mut g: Vec<Vec<usize>> = (0..4).map(|i| swap(n, 2 * i, 2 * i + 1)).collect();
                        g.push(pair_layout([2, 3, 0, 1]));
                        g.push(pair_layout([1, 0, 3, 2]));
                        g.push(pair_layout([0, 2, 1, 3]));
                        g
                    }
                    Kind::Midpoint => vec![swap(n, 1, 2)],
                    Kind::AREq => unreachable!(),
                };
                close_group(n, &gens)
            })
            .collect()
    });
    match Kind::POINT_KINDS.iter().position(|&k| k == kind) {
        Some(i) => &groups[i],
        None => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(i: u16) -> PointId {
        PointId(i)
    }

    #[test]
    fn group_orders() {
        let orders: Vec<usize> = Kind::POINT_KINDS.iter().map(|&k| symmetry_group(k).len()).collect();
        assert_eq!(orders, [6, 24, 8, 8, 8, 128, 128, 2]);
    }

    #[test]
    fn coll_sorts() {
        assert_eq!(Statement::coll(p(2), p(0), p(1)), Statement::Coll([p(0), p(1), p(2)]));
    }

    #[test]
    fn cong_pair_swap() {
        assert_eq!(
            Statement::cong(p(2), p(3), p(0), p(1)),
            Statement::Cong([p(0), p(1), p(2), p(3)])
        );
        assert_eq!(
            Statement::cong(p(3), p(2), p(1), p(0)),
            Statement::Cong([p(0), p(1), p(2), p(3)])
        );
    }

    #[test]
    fn midpoint_keeps_center() {
        assert_eq!(Statement::midpoint(p(5), p(3), p(1)), Statement::Midpoint([p(5), p(1), p(3)]));
    }

    #[test]
    fn eqangle_cross_symmetry() {
        // angle(l0,l1) = angle(l2,l3)  <=>  angle(l0,l2) = angle(l1,l3)
        let a = Statement::eqangle([p(0), p(1), p(2), p(3), p(4), p(5), p(6), p(7)]);
        let b = Statement::eqangle([p(0), p(1), p(4), p(5), p(2), p(3), p(6), p(7)]);
        assert_eq!(a, b);
    }

    fn arb_statement() -> impl Strategy<Value = Statement> {
        (0usize..8, proptest::collection::vec(0u16..12, 8)).prop_map(|(k, ids)| {
            let kind = Kind::POINT_KINDS[k];
            let n = kind.arity().unwrap();
            let args: Vec<PointId> = ids[..n].iter().map(|&i| PointId(i)).collect();
            Statement::from_args(kind, &args).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn canonical_is_orbit_constant(s in arb_statement(), g in 0usize..128) {
            let group = symmetry_group(s.kind());
            let image = s.permuted(&group[g % group.len()]);
            prop_assert_eq!(canonicalize(&image), canonicalize(&s));
        }

        #[test]
        fn canonical_is_idempotent_and_minimal(s in arb_statement()) {
            let c = canonicalize(&s);
            prop_assert_eq!(canonicalize(&c), c.clone());
            // brute force: minimum over the whole orbit
            let min = symmetry_group(s.kind()).iter().map(|g| s.permuted(g)).min().unwrap();
            prop_assert_eq!(c, min);
        }
    }
}
