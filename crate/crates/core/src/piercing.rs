//! Common-point detection for families of disks and ellipse regions, and the
//! stretch quantities evaluated at a candidate center.
//!
//! The depth of a point `x` with respect to a disk family is
//! `F(x) = max_i (|x - c_i| - r_i)`; the family has a common point iff
//! `min F <= 0`. `F` is convex, and its minimum is attained at a point where at
//! most three disks are active, so small subfamilies can be solved exactly by
//! enumerating the 1-, 2- and 3-active stationary points.

use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::geom::{in_disk, Disk, EllipseRegion, Point, Segment};
use crate::scalar::{sign_with_band, Scalar, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairOverlap {
    /// Interiors overlap (including containment).
    Overlap,
    Tangent,
    Disjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    NonEmpty,
    /// The common intersection is a single point (within tolerance).
    Tangent,
    Empty,
}

impl Verdict {
    pub fn has_common_point(self) -> bool {
        !matches!(self, Self::Empty)
    }

    fn from_depth<T: Scalar>(depth: T, band: T) -> Self {
        match sign_with_band(depth, band) {
            Ordering::Less => Self::NonEmpty,
            Ordering::Equal => Self::Tangent,
            Ordering::Greater => Self::Empty,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiercingResult<T> {
    pub verdict: Verdict,
    /// Present unless the verdict is `Empty`.
    pub witness: Option<Point<T>>,
    /// Minimized depth; negative when the witness is strictly inside every region.
    pub depth: T,
    /// Minimizer of the depth function, reported even when the family is empty.
    pub deepest: Point<T>,
    pub iterations: usize,
}

impl<T: Scalar> PiercingResult<T> {
    fn from_minimum(deepest: Point<T>, depth: T, band: T, iterations: usize) -> Self {
        let verdict = Verdict::from_depth(depth, band);
        Self {
            verdict,
            witness: verdict.has_common_point().then_some(deepest),
            depth,
            deepest,
            iterations,
        }
    }
}

fn family_scale<T: Scalar>(disks: &[Disk<T>]) -> T {
    disks.iter().fold(T::zero(), |acc, d| acc.max(d.scale()))
}

/// Depth of `x`: the largest signed distance to any disk.
pub fn depth_at<T: Scalar>(disks: &[Disk<T>], x: Point<T>) -> T {
    disks.iter().fold(T::neg_infinity(), |acc, d| acc.max(d.excess(x)))
}

pub fn pairwise_intersect<T: Scalar>(d1: &Disk<T>, d2: &Disk<T>, tol: &Tolerance<T>) -> PairOverlap {
    let gap = d1.center.distance(d2.center) - (d1.radius + d2.radius);
    match sign_with_band(gap, tol.pierce(d1.scale().max(d2.scale()))) {
        Ordering::Less => PairOverlap::Overlap,
        Ordering::Equal => PairOverlap::Tangent,
        Ordering::Greater => PairOverlap::Disjoint,
    }
}

/// Intersection points of the two bounding circles (lens vertices): none, one
/// (tangency) or two. Concentric circles yield none.
pub fn circle_intersections<T: Scalar>(d1: &Disk<T>, d2: &Disk<T>) -> Vec<Point<T>> {
    let delta = d2.center - d1.center;
    let d = delta.norm();
    if d == T::zero() {
        return Vec::new();
    }
    let (r1, r2) = (d1.radius, d2.radius);
    if d > r1 + r2 || d < (r1 - r2).abs() {
        return Vec::new();
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (d + d);
    let h2 = r1 * r1 - a * a;
    let u = delta * (T::one() / d);
    let base = d1.center + u * a;
    if h2 <= T::zero() {
        return vec![base];
    }
    let h = h2.sqrt();
    vec![base + u.perp() * h, base - u.perp() * h]
}

fn better<T: Scalar>(cand: (Point<T>, T), best: &Option<(Point<T>, T)>, tie: T) -> bool {
    match best {
        None => true,
        Some((bp, bv)) => {
            cand.1 < *bv - tie || ((cand.1 - *bv).abs() <= tie && cand.0.lex_cmp(bp) == Ordering::Less)
        }
    }
}

/// Points where all three disks have equal signed distance `t`, i.e. solutions
/// of `|x - c_i| = r_i + t` (the additively weighted circumcenters).
fn equal_depth_points<T: Scalar>(d: [&Disk<T>; 3]) -> Vec<Point<T>> {
    let c1 = d[0].center;
    let e2 = d[1].center - c1;
    let e3 = d[2].center - c1;
    let det = e2.cross(e3);
    let span = e2.norm_squared().max(e3.norm_squared());
    if det.abs() <= T::epsilon() * T::lit(16.0) * span {
        return Vec::new();
    }
    let (r1, r2, r3) = (d[0].radius, d[1].radius, d[2].radius);
    let half = T::lit(0.5);
    // 2 e_i . x = |e_i|^2 - r_i^2 + r1^2 - 2 t (r_i - r1), with c1 at the origin.
    let k = Point::new(
        (e2.norm_squared() - r2 * r2 + r1 * r1) * half,
        (e3.norm_squared() - r3 * r3 + r1 * r1) * half,
    );
    let m = Point::new(r1 - r2, r1 - r3);
    let solve = |rhs: Point<T>| Point::new((rhs.x * e3.y - rhs.y * e2.y) / det, (e2.x * rhs.y - e3.x * rhs.x) / det);
    let p = solve(k);
    let q = solve(m);
    // |p + t q|^2 = (t + r1)^2
    let a = q.norm_squared() - T::one();
    let b = (p.dot(q) - r1) * T::lit(2.0);
    let c = p.norm_squared() - r1 * r1;
    let mut roots = Vec::with_capacity(2);
    if a.abs() <= T::epsilon() * T::lit(64.0) {
        if b != T::zero() {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - T::lit(4.0) * a * c;
        if disc >= T::zero() {
            let s = disc.sqrt();
            let qq = -half * (b + if b >= T::zero() { s } else { -s });
            if qq != T::zero() {
                roots.push(qq / a);
                roots.push(c / qq);
            } else {
                roots.push(-b / (a + a));
            }
        }
    }
    let slack = T::epsilon() * T::lit(64.0) * (T::one() + span.sqrt() + r1.max(r2).max(r3));
    roots
        .into_iter()
        .filter(|t| t.is_finite() && *t + r1 >= -slack && *t + r2 >= -slack && *t + r3 >= -slack)
        .map(|t| c1 + p + q * t)
        .collect()
}

/// Exact minimizer of the depth over one to three disks, with the number of
/// candidates examined.
///
/// Candidates: every center, the balanced point on every center segment, and
/// the equal-depth points of the triple. Ties on the value go to the
/// lexicographically smallest point.
pub fn exact_minimax<T: Scalar>(disks: &[Disk<T>]) -> (Point<T>, T, usize) {
    assert!(
        (1..=3).contains(&disks.len()),
        "exact_minimax handles one to three disks"
    );
    let tie = T::epsilon() * T::lit(8.0) * (T::one() + family_scale(disks));
    let mut best: Option<(Point<T>, T)> = None;
    let mut examined = 0;
    let mut consider = |x: Point<T>, best: &mut Option<(Point<T>, T)>| {
        examined += 1;
        let v = depth_at(disks, x);
        if v.is_finite() && better((x, v), best, tie) {
            *best = Some((x, v));
        }
    };
    for d in disks {
        consider(d.center, &mut best);
    }
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            let (di, dj) = (&disks[i], &disks[j]);
            let delta = dj.center - di.center;
            let d = delta.norm();
            if d == T::zero() {
                continue;
            }
            let s = ((d + di.radius - dj.radius) * T::lit(0.5)).max(T::zero()).min(d);
            consider(di.center + delta * (s / d), &mut best);
        }
    }
    if disks.len() == 3 {
        for x in equal_depth_points([&disks[0], &disks[1], &disks[2]]) {
            consider(x, &mut best);
        }
    }
    let (x, v) = best.expect("at least one candidate");
    (x, v, examined)
}

/// Removes every disk that contains another disk of the family; the common
/// intersection is unchanged.
pub fn drop_containers<T: Scalar>(disks: &[Disk<T>], tol: &Tolerance<T>) -> Vec<Disk<T>> {
    let band = tol.pierce(family_scale(disks));
    let mut keep: Vec<bool> = vec![true; disks.len()];
    for j in 0..disks.len() {
        for i in 0..disks.len() {
            if i == j || !keep[i] || !keep[j] {
                continue;
            }
            let (di, dj) = (&disks[i], &disks[j]);
            if di.center.distance(dj.center) <= dj.radius - di.radius + band {
                keep[j] = false;
            }
        }
    }
    disks
        .iter()
        .zip(keep)
        .filter_map(|(d, k)| k.then_some(*d))
        .collect()
}

/// Range of x-coordinates over the lens `d1 ∩ d2`, or `None` if the disks are
/// disjoint.
///
/// The extremes of a lens are attained at its vertices or at the leftmost and
/// rightmost points of either circle that lie in the other disk.
pub fn lens_x_extent<T: Scalar>(d1: &Disk<T>, d2: &Disk<T>) -> Option<(T, T)> {
    let gap = d1.center.distance(d2.center) - (d1.radius + d2.radius);
    if gap > T::zero() {
        return None;
    }
    let mut candidates = circle_intersections(d1, d2);
    for (d, other) in [(d1, d2), (d2, d1)] {
        for sign in [T::one(), -T::one()] {
            let x = d.center + Point::new(d.radius * sign, T::zero());
            if other.excess(x) <= T::zero() {
                candidates.push(x);
            }
        }
    }
    if candidates.is_empty() {
        // tangent within rounding: fall back to the balanced point
        let delta = d2.center - d1.center;
        let x = d1.center + delta * (d1.radius / (d1.radius + d2.radius).max(T::min_positive_value()));
        candidates.push(x);
    }
    let lo = candidates.iter().fold(T::infinity(), |acc, p| acc.min(p.x));
    let hi = candidates.iter().fold(T::neg_infinity(), |acc, p| acc.max(p.x));
    Some((lo, hi))
}

/// Lens-vertex decision for up to three disks: after dropping containers, the
/// family has a common point iff some pairwise circle intersection point lies
/// in the remaining disk (or at most two disks overlap).
pub fn lens_decision<T: Scalar>(disks: &[Disk<T>], tol: &Tolerance<T>) -> bool {
    let reduced = drop_containers(disks, tol);
    match reduced.len() {
        0 | 1 => true,
        2 => pairwise_intersect(&reduced[0], &reduced[1], tol) != PairOverlap::Disjoint,
        3 => {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                if pairwise_intersect(&reduced[i], &reduced[j], tol) == PairOverlap::Disjoint {
                    return false;
                }
            }
            [(0, 1, 2), (0, 2, 1), (1, 2, 0)].iter().any(|&(i, j, k)| {
                circle_intersections(&reduced[i], &reduced[j])
                    .into_iter()
                    .any(|x| in_disk(x, &reduced[k], tol).is_inside())
            })
        }
        _ => unreachable!("at most three disks"),
    }
}

/// Exact decision for three disks, reporting the deepest point as witness.
pub fn triple_intersect_exact<T: Scalar>(
    d1: &Disk<T>,
    d2: &Disk<T>,
    d3: &Disk<T>,
    tol: &Tolerance<T>,
) -> PiercingResult<T> {
    let all = [*d1, *d2, *d3];
    let reduced = drop_containers(&all, tol);
    let (x, _, examined) = exact_minimax(&reduced);
    // evaluate against the full family so the reported depth never understates
    let depth = depth_at(&all, x);
    PiercingResult::from_minimum(x, depth, tol.pierce(family_scale(&all)), examined)
}

/// Subgradient schedule for [`pierce_disks`].
const DECAY: f64 = 0.98;
const MAX_ITERATIONS: usize = 1_000_000;

/// Decides whether a disk family has a common point.
///
/// Normalized subgradient descent on `F` from the centroid of the centers with
/// geometrically decaying steps, stopped once a step falls below
/// `1e-12 * (1 + scale)`, then polished by solving every subfamily of at most
/// three of the most active disks exactly.
pub fn pierce_disks<T: Scalar>(disks: &[Disk<T>], tol: &Tolerance<T>) -> PiercingResult<T> {
    assert!(!disks.is_empty(), "pierce_disks needs at least one disk");
    let scale = family_scale(disks);
    let band = tol.pierce(scale);
    if disks.len() == 1 {
        return PiercingResult::from_minimum(disks[0].center, -disks[0].radius, band, 0);
    }
    let inv_n = T::one() / T::lit(disks.len() as f64);
    let mut x = disks
        .iter()
        .fold(Point::origin(), |acc, d| acc + d.center * inv_n);
    let spread = disks
        .iter()
        .fold(T::zero(), |acc, d| acc.max(d.center.distance(x) + d.radius));
    let stop = T::lit(1e-12) * (T::one() + scale);
    let mut step = spread.max(stop) * T::lit(0.5);
    let decay = T::lit(DECAY);
    let mut best = (x, depth_at(disks, x));
    let mut iterations = 0;
    while step >= stop && iterations < MAX_ITERATIONS {
        iterations += 1;
        let (active, _) = disks
            .iter()
            .map(|d| (d, d.excess(x)))
            .fold((None, T::neg_infinity()), |(ad, av), (d, v)| {
                if v > av {
                    (Some(d), v)
                } else {
                    (ad, av)
                }
            });
        let Some(g) = active.and_then(|d| (x - d.center).normalized()) else {
            break;
        };
        x = x - g * step;
        let v = depth_at(disks, x);
        if v < best.1 {
            best = (x, v);
        }
        step = step * decay;
    }
    let (x, v, examined) = polish(disks, best, band);
    PiercingResult::from_minimum(x, v, band, iterations + examined)
}

fn polish<T: Scalar>(disks: &[Disk<T>], start: (Point<T>, T), band: T) -> (Point<T>, T, usize) {
    let tie = T::epsilon() * T::lit(8.0) * (T::one() + family_scale(disks));
    let mut order: Vec<usize> = (0..disks.len()).collect();
    order.sort_by(|&i, &j| {
        disks[j]
            .excess(start.0)
            .partial_cmp(&disks[i].excess(start.0))
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut best = Some(start);
    let mut examined = 0;
    for width in [6usize, 12, usize::MAX] {
        let k = width.min(disks.len());
        let top = &order[..k];
        let mut lower = T::neg_infinity();
        for subset in subsets_up_to_three(k) {
            let sub: Vec<Disk<T>> = subset.iter().map(|&i| disks[top[i]]).collect();
            let (x, sub_value, n) = exact_minimax(&sub);
            examined += n;
            lower = lower.max(sub_value);
            let v = depth_at(disks, x);
            if better((x, v), &best, tie) {
                best = Some((x, v));
            }
        }
        let (_, v) = best.expect("seeded");
        // certified optimal once the best value meets the subfamily lower bound
        if v - lower <= band * T::lit(1e-3) || k == disks.len() {
            break;
        }
    }
    let (x, v) = best.expect("seeded");
    (x, v, examined)
}

fn subsets_up_to_three(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..k {
        out.push(vec![a]);
        for b in (a + 1)..k {
            out.push(vec![a, b]);
            for c in (b + 1)..k {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

/// Decides whether a family of ellipse regions has a common point by
/// minimizing `max_i (focal_sum_i(x) - 2 a_i)` with nested golden-section
/// searches (the function is convex, so each one-dimensional slice is
/// unimodal).
pub fn pierce_ellipses<T: Scalar>(regions: &[EllipseRegion<T>], tol: &Tolerance<T>) -> PiercingResult<T> {
    assert!(!regions.is_empty(), "pierce_ellipses needs at least one region");
    let scale = regions.iter().fold(T::zero(), |acc, e| {
        acc.max(e.focus_a.max_abs()).max(e.focus_b.max_abs()).max(e.semimajor)
    });
    let band = tol.pierce(scale);
    let depth = |x: Point<T>| regions.iter().fold(T::neg_infinity(), |acc, e| acc.max(e.excess(x)));
    if regions.len() == 1 {
        let e = &regions[0];
        let mid = e.focus_a.midpoint(e.focus_b);
        return PiercingResult::from_minimum(mid, depth(mid), band, 0);
    }
    let reach = regions.iter().fold(T::zero(), |acc, e| acc.max(e.semimajor));
    let (mut lo, mut hi) = (
        Point::new(T::infinity(), T::infinity()),
        Point::new(T::neg_infinity(), T::neg_infinity()),
    );
    for e in regions {
        for f in [e.focus_a, e.focus_b] {
            lo = Point::new(lo.x.min(f.x), lo.y.min(f.y));
            hi = Point::new(hi.x.max(f.x), hi.y.max(f.y));
        }
    }
    let pad = Point::new(reach, reach);
    let (lo, hi) = (lo - pad, hi + pad);
    let mut evaluations = 0usize;
    let mut inner = |x: T| {
        let (y, v, n) = golden_min(lo.y, hi.y, |y| depth(Point::new(x, y)));
        evaluations += n;
        (y, v)
    };
    let (x, _, _) = golden_min(lo.x, hi.x, |x| inner(x).1);
    let (y, _) = inner(x);
    let witness = Point::new(x, y);
    PiercingResult::from_minimum(witness, depth(witness), band, evaluations)
}

const GOLDEN_STEPS: usize = 90;

fn golden_min<T: Scalar>(mut a: T, mut b: T, mut f: impl FnMut(T) -> T) -> (T, T, usize) {
    let ratio = T::lit(0.618_033_988_749_894_9);
    let mut c = b - (b - a) * ratio;
    let mut d = a + (b - a) * ratio;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_STEPS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * ratio;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * ratio;
            fd = f(d);
        }
    }
    let (x, v) = if fc <= fd { (c, fc) } else { (d, fd) };
    (x, v, GOLDEN_STEPS + 2)
}

/// Named stretch constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StretchBound {
    /// `2/sqrt(3)`, the conjectured optimum (ellipse form).
    TwoOverSqrt3,
    /// `sqrt(2)`, attained by any common point of the diametral disks.
    Sqrt2,
    /// `sqrt(5)`, attained by the midpoint of the shortest matched pair.
    Sqrt5,
    /// `2.5`, the classical midpoint bound.
    FiveHalves,
}

impl StretchBound {
    pub const ALL: [Self; 4] = [Self::TwoOverSqrt3, Self::Sqrt2, Self::Sqrt5, Self::FiveHalves];

    pub fn value<T: Scalar>(self) -> T {
        match self {
            Self::TwoOverSqrt3 => T::lit(2.0) / T::lit(3.0).sqrt(),
            Self::Sqrt2 => T::SQRT_2(),
            Self::Sqrt5 => T::lit(5.0).sqrt(),
            Self::FiveHalves => T::lit(2.5),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchReport<T> {
    pub center: Point<T>,
    pub bound: T,
    /// `(|a_i - o| + |b_i - o|) / |a_i - b_i|`, `None` for zero-length pairs.
    pub ratios: Vec<Option<T>>,
    /// Indices of zero-length pairs with their distance to the center.
    pub zero_length: Vec<(usize, T)>,
    pub max_ratio: T,
    pub holds: bool,
    /// Distance from the center to each matched segment.
    pub segment_distances: Vec<T>,
    /// Every segment distance is at most half its pair length (within tolerance).
    pub segment_distance_holds: bool,
}

/// Stretch ratios of `o` against every pair, checked against `bound`.
pub fn stretch_report<T: Scalar>(
    pairs: &[(Point<T>, Point<T>)],
    o: Point<T>,
    bound: T,
    tol: &Tolerance<T>,
) -> StretchReport<T> {
    let scale = pairs
        .iter()
        .fold(o.max_abs(), |acc, (a, b)| acc.max(a.max_abs()).max(b.max_abs()));
    let band = tol.pierce(scale);
    let mut ratios = Vec::with_capacity(pairs.len());
    let mut zero_length = Vec::new();
    let mut segment_distances = Vec::with_capacity(pairs.len());
    let mut max_ratio = T::zero();
    let mut segment_distance_holds = true;
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let len = a.distance(b);
        let dist = Segment::new(a, b).distance_to(o);
        segment_distances.push(dist);
        if dist > len * T::lit(0.5) + band {
            segment_distance_holds = false;
        }
        if len == T::zero() {
            zero_length.push((i, a.distance(o)));
            ratios.push(None);
            continue;
        }
        let r = (a.distance(o) + b.distance(o)) / len;
        max_ratio = max_ratio.max(r);
        ratios.push(Some(r));
    }
    StretchReport {
        center: o,
        bound,
        ratios,
        zero_length,
        max_ratio,
        holds: max_ratio <= bound + band,
        segment_distances,
        segment_distance_holds,
    }
}

/// Midpoint of a shortest pair; the lowest index wins ties.
pub fn midpoint_shortest_edge<T: Scalar>(pairs: &[(Point<T>, Point<T>)]) -> Point<T> {
    assert!(!pairs.is_empty(), "need at least one pair");
    let mut best = 0;
    let mut best_len = pairs[0].0.distance(pairs[0].1);
    for (i, (a, b)) in pairs.iter().enumerate().skip(1) {
        let len = a.distance(*b);
        if len < best_len {
            best = i;
            best_len = len;
        }
    }
    pairs[best].0.midpoint(pairs[best].1)
}
