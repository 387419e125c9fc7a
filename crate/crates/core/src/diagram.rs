//! Randomized numerical models of problems and numeric evaluation of statements.
//!
//! Residuals are normalized by powers of the diagram scale (the larger side of
//! the bounding box), so tolerances are unit-free.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ar::{Equation, Table, VarKey};
use crate::geometry::{ConstructionKind, PointId, Problem, Statement};

/// Construction accuracy: every implied statement must hold to this residual.
pub const TAU_BUILD: f64 = 1e-10;
/// Matcher decision tolerance.
pub const TAU_CHECK: f64 = 1e-7;
/// Minimum separation between distinct objects, relative to the scale.
pub const DELTA_SEP: f64 = 1e-3;
/// Resampling attempts before giving up.
pub const R_MAX: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("no non-degenerate diagram found after {attempts} attempts")]
    DegenerateProblem { attempts: u32 },
    #[error("construction of `{name}` (step {step}) has no solution")]
    UnsolvableConstruction { step: usize, name: String },
}

pub type Point = [f64; 2];

/// Floating-point coordinates for every point of a problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coordinates {
    points: Vec<Point>,
    seed: u64,
    scale: f64,
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

fn mul(a: Point, t: f64) -> Point {
    [a[0] * t, a[1] * t]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm2(a: Point) -> f64 {
    dot(a, a)
}

fn dist(a: Point, b: Point) -> f64 {
    norm2(sub(a, b)).sqrt()
}

fn rot90(a: Point) -> Point {
    [-a[1], a[0]]
}

fn bbox_scale(points: &[Point]) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = [lo[0].min(p[0]), lo[1].min(p[1])];
        hi = [hi[0].max(p[0]), hi[1].max(p[1])];
    }
    let s = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Circumcenter of a triangle, `None` when (nearly) collinear.
pub(crate) fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let d = 2.0 * cross(ab, ac);
    let scale = norm2(ab).max(norm2(ac));
    if d.abs() <= 1e-14 * scale {
        return None;
    }
    let (b2, c2) = (norm2(ab), norm2(ac));
    let ux = (ac[1] * b2 - ab[1] * c2) / d;
    let uy = (ab[0] * c2 - ac[0] * b2) / d;
    Some(add(a, [ux, uy]))
}

fn line_line(a: Point, b: Point, c: Point, d: Point) -> Option<Point> {
    let u = sub(b, a);
    let v = sub(d, c);
    let den = cross(u, v);
    if den.abs() <= DELTA_SEP * (norm2(u) * norm2(v)).sqrt() {
        return None;
    }
    let t = cross(sub(c, a), v) / den;
    Some(add(a, mul(u, t)))
}

fn line_circle(a: Point, b: Point, o: Point, r: f64) -> Vec<Point> {
    let u = sub(b, a);
    let uu = norm2(u);
    // |a + t u - o|^2 = r^2
    let w = sub(a, o);
    let half_b = dot(u, w);
    let c = norm2(w) - r * r;
    let disc = half_b * half_b - uu * c;
    if disc < 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    vec![
        add(a, mul(u, (-half_b - s) / uu)),
        add(a, mul(u, (-half_b + s) / uu)),
    ]
}

fn circle_circle(o1: Point, r1: f64, o2: Point, r2: f64) -> Vec<Point> {
    let d = dist(o1, o2);
    if d == 0.0 || d > r1 + r2 || d < (r1 - r2).abs() {
        return vec![];
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let e = mul(sub(o2, o1), 1.0 / d);
    let base = add(o1, mul(e, a));
    let off = mul(rot90(e), h);
    vec![add(base, off), sub(base, off)]
}

fn sub_seed(seed: u64, attempt: u32) -> u64 {
    // splitmix64 step over (seed, attempt)
    let mut z = seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

enum AttemptError {
    Unsolvable(usize),
    Degenerate,
}

fn pick_new(cands: Vec<Point>, built: &[Point], sep: f64, rng: &mut ChaCha8Rng) -> Option<Point> {
    let fresh: Vec<Point> = cands
        .into_iter()
        .filter(|c| built.iter().all(|p| dist(*c, *p) > sep))
        .collect();
    match fresh.len() {
        0 => None,
        1 => Some(fresh[0]),
        _ => {
            if dist(fresh[0], fresh[1]) <= sep {
                // tangent: both roots coincide
                return Some(fresh[0]);
            }
            Some(fresh[rng.gen_range(0..fresh.len())])
        }
    }
}

fn attempt(problem: &Problem, rng: &mut ChaCha8Rng) -> Result<Vec<Point>, AttemptError> {
    let mut pts: Vec<Point> = Vec::with_capacity(problem.num_points());
    for (step, c) in problem.constructions().iter().enumerate() {
        let inp: Vec<Point> = c.inputs.iter().map(|p| pts[p.index()]).collect();
        let sep = DELTA_SEP * bbox_scale(&pts).max(1e-9);
        let x = match c.kind {
            ConstructionKind::Free { at: Some(at) } => at,
            ConstructionKind::Free { at: None } => [rng.gen::<f64>(), rng.gen::<f64>()],
            ConstructionKind::OnLine => {
                let t = rng.gen_range(-0.5..1.5);
                add(inp[0], mul(sub(inp[1], inp[0]), t))
            }
            ConstructionKind::OnCircle => {
                let r = dist(inp[0], inp[1]);
                let th = rng.gen_range(0.0..std::f64::consts::TAU);
                add(inp[0], [r * th.cos(), r * th.sin()])
            }
            ConstructionKind::Midpoint => mul(add(inp[0], inp[1]), 0.5),
            ConstructionKind::Foot => {
                let u = sub(inp[2], inp[1]);
                let t = dot(sub(inp[0], inp[1]), u) / norm2(u);
                add(inp[1], mul(u, t))
            }
            ConstructionKind::Circumcenter => {
                circumcenter(inp[0], inp[1], inp[2]).ok_or(AttemptError::Degenerate)?
            }
            ConstructionKind::IntersectLineLine => {
                line_line(inp[0], inp[1], inp[2], inp[3]).ok_or(AttemptError::Unsolvable(step))?
            }
            ConstructionKind::IntersectLineCircle => {
                let cands = line_circle(inp[0], inp[1], inp[2], dist(inp[2], inp[3]));
                if cands.is_empty() {
                    return Err(AttemptError::Unsolvable(step));
                }
                pick_new(cands, &pts, sep, rng).ok_or(AttemptError::Degenerate)?
            }
            ConstructionKind::IntersectCircleCircle => {
                let cands = circle_circle(
                    inp[0],
                    dist(inp[0], inp[1]),
                    inp[2],
                    dist(inp[2], inp[3]),
                );
                if cands.is_empty() {
                    return Err(AttemptError::Unsolvable(step));
                }
                pick_new(cands, &pts, sep, rng).ok_or(AttemptError::Degenerate)?
            }
            ConstructionKind::ReflectLine => {
                let u = sub(inp[2], inp[1]);
                let t = dot(sub(inp[0], inp[1]), u) / norm2(u);
                let foot = add(inp[1], mul(u, t));
                sub(mul(foot, 2.0), inp[0])
            }
            ConstructionKind::ReflectPoint => sub(mul(inp[1], 2.0), inp[0]),
            ConstructionKind::ParallelThrough | ConstructionKind::PerpendicularThrough => {
                let mut u = sub(inp[2], inp[1]);
                if matches!(c.kind, ConstructionKind::PerpendicularThrough) {
                    u = rot90(u);
                }
                let mut t = rng.gen_range(0.3..1.2);
                if rng.gen::<bool>() {
                    t = -t;
                }
                add(inp[0], mul(u, t))
            }
        };
        if !x[0].is_finite() || !x[1].is_finite() {
            return Err(AttemptError::Degenerate);
        }
        pts.push(x);
    }
    Ok(pts)
}

fn nondegenerate(problem: &Problem, c: &Coordinates) -> bool {
    let pts = &c.points;
    let sep = DELTA_SEP * c.scale;
    for i in 0..pts.len() {
        for j in 0..i {
            if dist(pts[i], pts[j]) < sep {
                return false;
            }
        }
    }
    for con in problem.constructions() {
        let inp: Vec<Point> = con.inputs.iter().map(|p| pts[p.index()]).collect();
        let ok = match con.kind {
            ConstructionKind::Circumcenter | ConstructionKind::Foot | ConstructionKind::ReflectLine => {
                // defining triples must not be collinear
                let area = cross(sub(inp[1], inp[0]), sub(inp[2], inp[0])).abs();
                area >= DELTA_SEP * c.scale * c.scale
            }
            _ => true,
        };
        if !ok {
            return false;
        }
        if con.implied.iter().any(|s| !numeric_holds(s, c, TAU_BUILD)) {
            return false;
        }
    }
    true
}

/// Samples a diagram for `problem`, deterministically in `seed`.
pub fn build_diagram(problem: &Problem, seed: u64) -> Result<Coordinates, DiagramError> {
    let mut unsolvable: Option<usize> = None;
    let mut all_unsolvable = true;
    for k in 0..R_MAX {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, k));
        match attempt(problem, &mut rng) {
            Ok(points) => {
                all_unsolvable = false;
                let coords = Coordinates::with_seed(points, seed);
                if nondegenerate(problem, &coords) {
                    return Ok(coords);
                }
            }
            Err(AttemptError::Unsolvable(step)) => unsolvable = Some(step),
            Err(AttemptError::Degenerate) => all_unsolvable = false,
        }
    }
    match unsolvable {
        Some(step) if all_unsolvable => Err(DiagramError::UnsolvableConstruction {
            step,
            name: problem.names()[problem.constructions()[step].out.index()].clone(),
        }),
        _ => Err(DiagramError::DegenerateProblem { attempts: R_MAX }),
    }
}

impl Coordinates {
    /// Wraps explicit coordinates (seed recorded as 0).
    pub fn from_points(points: Vec<Point>) -> Coordinates {
        Coordinates::with_seed(points, 0)
    }

    fn with_seed(points: Vec<Point>, seed: u64) -> Coordinates {
        let scale = bbox_scale(&points);
        Coordinates { points, seed, scale }
    }

    pub fn point(&self, p: PointId) -> Point {
        self.points[p.index()]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Coordinates with every point multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Coordinates {
        Coordinates::with_seed(self.points.iter().map(|&p| mul(p, factor)).collect(), self.seed)
    }

    pub fn length(&self, a: PointId, b: PointId) -> f64 {
        dist(self.point(a), self.point(b))
    }

    /// Directed angle from line `ab` to line `cd`, in `[0, pi)`.
    pub fn line_angle(&self, a: PointId, b: PointId, c: PointId, d: PointId) -> f64 {
        let u = sub(self.point(b), self.point(a));
        let v = sub(self.point(d), self.point(c));
        cross(u, v).atan2(dot(u, v)).rem_euclid(std::f64::consts::PI)
    }

    /// Dot product of `b - a` and `d - c`, normalized by scale squared.
    pub fn perp_dot(&self, a: PointId, b: PointId, c: PointId, d: PointId) -> f64 {
        let u = sub(self.point(b), self.point(a));
        let v = sub(self.point(d), self.point(c));
        dot(u, v) / (self.scale * self.scale)
    }

    /// `(|ac|^2 + |bd|^2 - |ad|^2 - |bc|^2) / 2`, normalized by scale squared.
    /// Zero exactly when `ab` is perpendicular to `cd`.
    pub fn perp_identity(&self, a: PointId, b: PointId, c: PointId, d: PointId) -> f64 {
        let sq = |x: PointId, y: PointId| norm2(sub(self.point(x), self.point(y)));
        (sq(a, c) + sq(b, d) - sq(a, d) - sq(b, c)) / (2.0 * self.scale * self.scale)
    }

    /// Twice the signed triangle area, normalized by scale squared.
    pub fn area2(&self, a: PointId, b: PointId, c: PointId) -> f64 {
        cross(sub(self.point(b), self.point(a)), sub(self.point(c), self.point(a))) / (self.scale * self.scale)
    }

    /// Numeric value of a table variable under this valuation.
    pub fn var_value(&self, table: Table, key: &VarKey) -> f64 {
        match (*key, table) {
            (VarKey::Seg(a, b), Table::Len) => self.length(a, b) / self.scale,
            (VarKey::Seg(a, b), Table::SqLen) => {
                let l = self.length(a, b) / self.scale;
                l * l
            }
            (VarKey::Seg(a, b), Table::LogLen) => (self.length(a, b) / self.scale).ln(),
            (VarKey::Sin(x, v, y), _) => {
                let u = sub(self.point(x), self.point(v));
                let w = sub(self.point(y), self.point(v));
                let s = cross(u, w).abs() / (norm2(u) * norm2(w)).sqrt();
                s.ln()
            }
        }
    }

    pub fn equation_residual(&self, eq: &Equation) -> f64 {
        use num_traits::ToPrimitive;
        let mut total = eq.constant().to_f64().unwrap_or(f64::NAN);
        let mut weight = 0.0f64;
        for (k, c) in eq.terms() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            total += c * self.var_value(eq.table(), k);
            weight += c.abs();
        }
        total / weight.max(1.0)
    }

    /// Scale-normalized residual of a statement; zero when it holds exactly.
    pub fn residual(&self, s: &Statement) -> f64 {
        let sc2 = self.scale * self.scale;
        match s {
            Statement::Coll([a, b, c]) => self.area2(*a, *b, *c).abs(),
            Statement::Para([a, b, c, d]) => {
                let u = sub(self.point(*b), self.point(*a));
                let v = sub(self.point(*d), self.point(*c));
                cross(u, v).abs() / sc2
            }
            Statement::Perp([a, b, c, d]) => self.perp_dot(*a, *b, *c, *d).abs(),
            Statement::Cong([a, b, c, d]) => {
                (norm2(sub(self.point(*a), self.point(*b))) - norm2(sub(self.point(*c), self.point(*d)))).abs()
                    / sc2
            }
            Statement::Cyclic(args) => self.cyclic_residual(args),
            Statement::EqAngle([a, b, c, d, e, f, g, h]) => {
                let t1 = self.line_angle(*a, *b, *c, *d);
                let t2 = self.line_angle(*e, *f, *g, *h);
                let pi = std::f64::consts::PI;
                let diff = (t1 - t2).rem_euclid(pi);
                diff.min(pi - diff)
            }
            Statement::EqRatio([a, b, c, d, e, f, g, h]) => {
                let l = [
                    self.length(*a, *b),
                    self.length(*c, *d),
                    self.length(*e, *f),
                    self.length(*g, *h),
                ];
                if l.iter().any(|&x| x <= 0.0) {
                    (l[0] * l[3] - l[1] * l[2]).abs() / sc2
                } else {
                    (l[0].ln() - l[1].ln() - l[2].ln() + l[3].ln()).abs()
                }
            }
            Statement::Midpoint([m, a, b]) => {
                let mid = mul(add(self.point(*a), self.point(*b)), 0.5);
                dist(self.point(*m), mid) / self.scale
            }
            Statement::AREq(eq) => self.equation_residual(eq).abs(),
        }
    }

    fn cyclic_residual(&self, args: &[PointId; 4]) -> f64 {
        let mut distinct = args.to_vec();
        distinct.sort();
        distinct.dedup();
        if distinct.len() < 4 {
            return 0.0;
        }
        // circumcenter of the best-conditioned triple, then equidistance of the fourth
        let mut best: Option<(f64, usize)> = None;
        for skip in 0..4 {
            let t: Vec<PointId> = (0..4).filter(|&i| i != skip).map(|i| args[i]).collect();
            let area = self.area2(t[0], t[1], t[2]).abs();
            if best.map_or(true, |(a, _)| area > a) {
                best = Some((area, skip));
            }
        }
        let (area, skip) = best.unwrap();
        if area < 1e-12 {
            return f64::INFINITY;
        }
        let t: Vec<Point> = (0..4).filter(|&i| i != skip).map(|i| self.point(args[i])).collect();
        let Some(o) = circumcenter(t[0], t[1], t[2]) else {
            return f64::INFINITY;
        };
        let r2 = norm2(sub(t[0], o));
        (norm2(sub(self.point(args[skip]), o)) - r2).abs() / (self.scale * self.scale)
    }

    /// JSON dump with point names.
    pub fn to_json(&self, problem: &Problem) -> String {
        #[derive(Serialize)]
        struct Named<'a> {
            name: &'a str,
            x: f64,
            y: f64,
        }
        #[derive(Serialize)]
        struct Dump<'a> {
            seed: u64,
            scale: f64,
            points: Vec<Named<'a>>,
        }
        let dump = Dump {
            seed: self.seed,
            scale: self.scale,
            points: problem
                .names()
                .iter()
                .zip(&self.points)
                .map(|(n, p)| Named {
                    name: n,
                    x: p[0],
                    y: p[1],
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dump).expect("diagram serializes")
    }
}

/// Whether `s` holds in `c` up to the normalized tolerance `tol`.
pub fn numeric_holds(s: &Statement, c: &Coordinates, tol: f64) -> bool {
    let r = c.residual(s);
    r < tol
}
