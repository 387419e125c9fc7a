//! Configuration detection over a numerical diagram.
//!
//! Each family is defined as "all tuples of the family's shape for which
//! `numeric_holds` passes". Detection prunes with sorted invariant keys and
//! conservative windows, then confirms every candidate with `numeric_holds`
//! on the canonical statement, so the result is exactly the brute-force set.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::diagram::{numeric_holds, Coordinates};
use crate::geometry::{PointId, Statement};

/// Triangles `first` and `second` similar under `first[i] <-> second[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimilarPair {
    pub first: [PointId; 3],
    pub second: [PointId; 3],
    /// Opposite orientations.
    pub reflected: bool,
}

/// Line `vertex, point` bisects the angle between lines `vertex, sides[0]`
/// and `vertex, sides[1]` (internally or externally).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bisector {
    pub vertex: PointId,
    pub sides: [PointId; 2],
    pub point: PointId,
}

/// Detected configurations, each family a sorted set of canonical members.
///
/// Point families contain only statements whose segments have distinct
/// endpoints and which relate two different segments: `coll` over 3 distinct
/// points, `cyclic` over 4, `para`/`perp`/`cong` over two different segments,
/// `midpoint` over 3 distinct points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigSet {
    pub coll: BTreeSet<Statement>,
    pub cyclic: BTreeSet<Statement>,
    pub para: BTreeSet<Statement>,
    pub perp: BTreeSet<Statement>,
    pub cong: BTreeSet<Statement>,
    pub midpoint: BTreeSet<Statement>,
    pub similar: BTreeSet<SimilarPair>,
    pub bisectors: BTreeSet<Bisector>,
}

impl ConfigSet {
    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.coll
            .iter()
            .chain(&self.cyclic)
            .chain(&self.para)
            .chain(&self.perp)
            .chain(&self.cong)
            .chain(&self.midpoint)
    }

    pub fn len(&self) -> usize {
        self.statements().count() + self.similar.len() + self.bisectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub(crate) fn segments(n: usize) -> Vec<(PointId, PointId)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push((PointId::from(a), PointId::from(b)));
        }
    }
    out
}

fn pid(i: usize) -> PointId {
    PointId::from(i)
}

/// Indices `j` with `keys[j]` circularly within `w` of `x` (period `period`).
/// `keys` is sorted and lies in `[0, period)`.
pub(crate) fn circular_window(keys: &[f64], x: f64, w: f64, period: f64) -> Vec<usize> {
    let n = keys.len();
    if w * 2.0 >= period {
        return (0..n).collect();
    }
    let mut out = Vec::new();
    let mut range = |lo: f64, hi: f64| {
        let start = keys.partition_point(|&k| k < lo);
        let end = keys.partition_point(|&k| k <= hi);
        out.extend(start..end);
    };
    let (lo, hi) = (x - w, x + w);
    range(lo.max(0.0), hi.min(period));
    if lo < 0.0 {
        range(lo + period, period);
    }
    if hi > period {
        range(0.0, hi - period);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Indices `j` with `keys[j]` within `w` of `x`; `keys` sorted.
pub(crate) fn linear_window(keys: &[f64], x: f64, w: f64) -> std::ops::Range<usize> {
    keys.partition_point(|&k| k < x - w)..keys.partition_point(|&k| k <= x + w)
}

struct SegTable {
    segs: Vec<(PointId, PointId)>,
    /// Segment ids sorted by direction in `[0, pi)`.
    by_dir: Vec<usize>,
    dir_keys: Vec<f64>,
    dir: Vec<f64>,
    len: Vec<f64>,
    min_len: f64,
}

impl SegTable {
    fn new(c: &Coordinates) -> SegTable {
        let segs = segments(c.len());
        let scale = c.scale();
        let dir: Vec<f64> = segs
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (c.point(a), c.point(b));
                (q[1] - p[1]).atan2(q[0] - p[0]).rem_euclid(PI)
            })
            .collect();
        let len: Vec<f64> = segs.iter().map(|&(a, b)| c.length(a, b) / scale).collect();
        let mut by_dir: Vec<usize> = (0..segs.len()).collect();
        by_dir.sort_by(|&i, &j| dir[i].total_cmp(&dir[j]));
        let dir_keys = by_dir.iter().map(|&i| dir[i]).collect();
        let min_len = len.iter().cloned().fold(f64::INFINITY, f64::min);
        SegTable {
            segs,
            by_dir,
            dir_keys,
            dir,
            len,
            min_len,
        }
    }

    /// Segment pairs whose directions differ by `offset` (mod pi) closely
    /// enough that a normalized cross or dot residual below `tol` is possible.
    fn angle_pairs(&self, offset: f64, tol: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.segs.len() {
            // |sin(theta)| * |u| * |v| < tol and |sin t| >= 2t/pi for t <= pi/2
            let w = FRAC_PI_2 * tol / (self.len[i] * self.min_len) + 1e-12;
            let target = (self.dir[i] + offset).rem_euclid(PI);
            for k in circular_window(&self.dir_keys, target, w, PI) {
                let j = self.by_dir[k];
                if j > i {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Detects every configuration family in `c` at tolerance `tol`.
pub fn detect_configurations(c: &Coordinates, tol: f64) -> ConfigSet {
    let n = c.len();
    let mut cfg = ConfigSet::default();
    let holds = |s: &Statement| numeric_holds(s, c, tol);

    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                let s = Statement::coll(pid(a), pid(b), pid(d));
                if holds(&s) {
                    cfg.coll.insert(s);
                }
            }
        }
    }

    for a in 0..n {
        for b in a + 1..n {
            for m in 0..n {
                if m == a || m == b {
                    continue;
                }
                let s = Statement::midpoint(pid(m), pid(a), pid(b));
                if holds(&s) {
                    cfg.midpoint.insert(s);
                }
            }
        }
    }

    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                for e in d + 1..n {
                    let s = Statement::cyclic(pid(a), pid(b), pid(d), pid(e));
                    if holds(&s) {
                        cfg.cyclic.insert(s);
                    }
                }
            }
        }
    }

    let segs = SegTable::new(c);
    for (offset, perp) in [(0.0, false), (FRAC_PI_2, true)] {
        for (i, j) in segs.angle_pairs(offset, tol) {
            let ((a, b), (p, q)) = (segs.segs[i], segs.segs[j]);
            let s = if perp {
                Statement::perp(a, b, p, q)
            } else {
                Statement::para(a, b, p, q)
            };
            if holds(&s) {
                if perp {
                    cfg.perp.insert(s);
                } else {
                    cfg.para.insert(s);
                }
            }
        }
    }

    // squared normalized lengths, residual is their absolute difference
    let mut by_sq: Vec<(f64, usize)> = segs.len.iter().enumerate().map(|(i, l)| (l * l, i)).collect();
    by_sq.sort_by(|x, y| x.0.total_cmp(&y.0));
    let sq_keys: Vec<f64> = by_sq.iter().map(|x| x.0).collect();
    for (k, &(v, i)) in by_sq.iter().enumerate() {
        for k2 in linear_window(&sq_keys, v, tol + 1e-12) {
            if k2 <= k {
                continue;
            }
            let j = by_sq[k2].1;
            let ((a, b), (p, q)) = (segs.segs[i], segs.segs[j]);
            let s = Statement::cong(a, b, p, q);
            if holds(&s) {
                cfg.cong.insert(s);
            }
        }
    }

    detect_similar(c, tol, &mut cfg);
    detect_bisectors(c, tol, &mut cfg);
    cfg
}

/// The three ratio equalities that define `t1 ~ t2` under `t1[i] <-> t2[i]`.
pub fn similarity_statements(t1: [PointId; 3], t2: [PointId; 3]) -> [Statement; 3] {
    let side = |t: [PointId; 3], i: usize| (t[i], t[(i + 1) % 3]);
    let ratio = |i: usize, j: usize| {
        let (a, b) = side(t1, i);
        let (d, e) = side(t2, i);
        let (p, q) = side(t1, j);
        let (r, s) = side(t2, j);
        Statement::eqratio([a, b, d, e, p, q, r, s])
    };
    [ratio(0, 1), ratio(1, 2), ratio(0, 2)]
}

/// Canonical representative of a correspondence: the smallest over the six
/// simultaneous relabelings and the exchange of the two triangles.
pub fn canonical_similar(t1: [PointId; 3], t2: [PointId; 3], reflected: bool) -> SimilarPair {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best: Option<SimilarPair> = None;
    for (x, y) in [(t1, t2), (t2, t1)] {
        for p in PERMS {
            let cand = SimilarPair {
                first: [x[p[0]], x[p[1]], x[p[2]]],
                second: [y[p[0]], y[p[1]], y[p[2]]],
                reflected,
            };
            if best.map_or(true, |b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best.expect("six relabelings")
}

fn detect_similar(c: &Coordinates, tol: f64, cfg: &mut ConfigSet) {
    let n = c.len();
    let mut tris: Vec<(f64, [PointId; 3])> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                let t = [pid(a), pid(b), pid(d)];
                if cfg.coll.contains(&Statement::coll(t[0], t[1], t[2])) {
                    continue;
                }
                let l = [c.length(t[0], t[1]), c.length(t[1], t[2]), c.length(t[2], t[0])];
                let max = l.iter().cloned().fold(0.0, f64::max);
                let min = l.iter().cloned().fold(f64::INFINITY, f64::min);
                tris.push(((max / min).ln(), t));
            }
        }
    }
    tris.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let keys: Vec<f64> = tris.iter().map(|t| t.0).collect();
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for (i, &(k, t1)) in tris.iter().enumerate() {
        for j in linear_window(&keys, k, 4.0 * tol + 1e-12) {
            if j <= i {
                continue;
            }
            let t2 = tris[j].1;
            for p in PERMS {
                let u = [t2[p[0]], t2[p[1]], t2[p[2]]];
                if similarity_statements(t1, u).iter().all(|s| numeric_holds(s, c, tol)) {
                    let reflected = (c.area2(t1[0], t1[1], t1[2]) > 0.0) != (c.area2(u[0], u[1], u[2]) > 0.0);
                    cfg.similar.insert(canonical_similar(t1, u, reflected));
                }
            }
        }
    }
}

/// The angle equality defining a bisector configuration.
pub fn bisector_statement(b: &Bisector) -> Statement {
    let (a, [x, y], d) = (b.vertex, b.sides, b.point);
    Statement::eqangle([a, x, a, d, a, d, a, y])
}

fn detect_bisectors(c: &Coordinates, tol: f64, cfg: &mut ConfigSet) {
    let n = c.len();
    for a in 0..n {
        for x in 0..n {
            for y in x + 1..n {
                if a == x || a == y || cfg.coll.contains(&Statement::coll(pid(a), pid(x), pid(y))) {
                    continue;
                }
                for d in 0..n {
                    if d == a || d == x || d == y {
                        continue;
                    }
                    let b = Bisector {
                        vertex: pid(a),
                        sides: [pid(x), pid(y)],
                        point: pid(d),
                    };
                    if numeric_holds(&bisector_statement(&b), c, tol) {
                        cfg.bisectors.insert(b);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{build_diagram, TAU_CHECK};
    use crate::geometry::parse_problem;

    fn p(i: u16) -> PointId {
        PointId(i)
    }

    #[test]
    fn square_configurations() {
        let c = Coordinates::from_points(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let cfg = detect_configurations(&c, TAU_CHECK);
        for (a, b, d) in [(0, 1, 2), (1, 2, 3), (2, 3, 0), (3, 0, 1)] {
            assert!(cfg.perp.contains(&Statement::perp(p(a), p(b), p(b), p(d))));
        }
        for (a, b, d, e) in [(0, 1, 1, 2), (1, 2, 2, 3), (2, 3, 3, 0), (0, 1, 2, 3)] {
            assert!(cfg.cong.contains(&Statement::cong(p(a), p(b), p(d), p(e))));
        }
        assert!(cfg.perp.contains(&Statement::perp(p(0), p(2), p(1), p(3))));
        assert_eq!(cfg.cyclic.len(), 1);
        assert!(cfg.coll.is_empty());
    }

    #[test]
    fn constructed_midpoint_detected() {
        let pr = parse_problem("a = free; b = free; m = midpoint a b; ? coll m a b").unwrap();
        let c = build_diagram(&pr, 3).unwrap();
        let cfg = detect_configurations(&c, TAU_CHECK);
        assert!(cfg.midpoint.contains(&Statement::midpoint(p(2), p(0), p(1))));
    }

    #[test]
    fn window_wraps_around() {
        let keys = [0.01, 1.0, 3.13];
        let got = circular_window(&keys, 0.0, 0.05, PI);
        assert_eq!(got, vec![0, 2]);
    }
}
