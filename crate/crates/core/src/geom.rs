//! Planar primitives and tolerance-aware predicates.

use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{sign_with_band, Scalar, Tolerance};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    /// Builds a point from `f64` coordinates.
    pub fn from_f64(x: f64, y: f64) -> Self {
        Self::new(T::lit(x), T::lit(y))
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Self) -> Self {
        let half = T::lit(0.5);
        Self::new((self.x + other.x) * half, (self.y + other.y) * half)
    }

    /// Counter-clockwise rotation by a right angle.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    /// Point on the segment `self -> other` at parameter `t`.
    pub fn lerp(self, other: Self, t: T) -> Self {
        self + (other - self) * t
    }

    /// Unit vector, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| self * (T::one() / n))
    }

    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs())
    }

    /// Lexicographic (x, then y) comparison; used as a deterministic tie rule.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.x
            .partial_cmp(&other.x)
            .unwrap_or(Ordering::Equal)
            .then(self.y.partial_cmp(&other.y).unwrap_or(Ordering::Equal))
    }
}

impl<T: Scalar> Add for Point<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Point<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Mul<T> for Point<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

impl<T: Scalar> Neg for Point<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Largest absolute coordinate over a set of points.
pub fn scale_of<T: Scalar>(points: &[Point<T>]) -> T {
    points.iter().fold(T::zero(), |acc, p| acc.max(p.max_abs()))
}

/// Oriented segment from `p` (tail) to `q` (head). Zero length is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment<T> {
    pub p: Point<T>,
    pub q: Point<T>,
}

impl<T: Scalar> Segment<T> {
    pub const fn new(p: Point<T>, q: Point<T>) -> Self {
        Self { p, q }
    }

    pub fn reversed(self) -> Self {
        Self::new(self.q, self.p)
    }

    pub fn length(&self) -> T {
        self.p.distance(self.q)
    }

    pub fn midpoint(&self) -> Point<T> {
        self.p.midpoint(self.q)
    }

    pub fn is_degenerate(&self) -> bool {
        self.p == self.q
    }

    pub fn diametral_disk(&self) -> Disk<T> {
        Disk::diametral(self.p, self.q)
    }

    /// Euclidean distance from `x` to the closed segment.
    pub fn distance_to(&self, x: Point<T>) -> T {
        let d = self.q - self.p;
        let len2 = d.norm_squared();
        if len2 == T::zero() {
            return x.distance(self.p);
        }
        let t = ((x - self.p).dot(d) / len2).max(T::zero()).min(T::one());
        x.distance(self.p.lerp(self.q, t))
    }

    /// Orthogonal projection of `x` onto the supporting line, with its
    /// parameter along `p -> q`. `None` for a zero-length segment.
    pub fn foot_of(&self, x: Point<T>) -> Option<(Point<T>, T)> {
        let d = self.q - self.p;
        let len2 = d.norm_squared();
        if len2 == T::zero() {
            return None;
        }
        let t = (x - self.p).dot(d) / len2;
        Some((self.p.lerp(self.q, t), t))
    }
}

/// Closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk<T> {
    pub center: Point<T>,
    pub radius: T,
}

impl<T: Scalar> Disk<T> {
    pub fn new(center: Point<T>, radius: T) -> Self {
        Self { center, radius }
    }

    /// Smallest disk covering `p` and `q`.
    pub fn diametral(p: Point<T>, q: Point<T>) -> Self {
        Self::new(p.midpoint(q), p.distance(q) * T::lit(0.5))
    }

    /// Signed distance to the disk: negative inside, zero on the circle.
    pub fn excess(&self, x: Point<T>) -> T {
        x.distance(self.center) - self.radius
    }

    pub fn scale(&self) -> T {
        self.center.max_abs() + self.radius
    }
}

/// Region bounded by an ellipse given by its foci and semimajor axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseRegion<T> {
    pub focus_a: Point<T>,
    pub focus_b: Point<T>,
    pub semimajor: T,
}

impl<T: Scalar> EllipseRegion<T> {
    pub fn new(focus_a: Point<T>, focus_b: Point<T>, semimajor: T) -> Self {
        Self { focus_a, focus_b, semimajor }
    }

    /// The region `{x : |x-a| + |x-b| <= factor * |a-b|}`.
    pub fn with_stretch(a: Point<T>, b: Point<T>, factor: T) -> Self {
        Self::new(a, b, factor * a.distance(b) * T::lit(0.5))
    }

    pub fn focal_sum(&self, x: Point<T>) -> T {
        x.distance(self.focus_a) + x.distance(self.focus_b)
    }

    /// Focal sum minus the major axis length; non-positive inside.
    pub fn excess(&self, x: Point<T>) -> T {
        self.focal_sum(x) - (self.semimajor + self.semimajor)
    }

    pub fn is_well_formed(&self) -> bool {
        self.focus_a.is_finite()
            && self.focus_b.is_finite()
            && self.semimajor.is_finite()
            && self.semimajor + self.semimajor >= self.focus_a.distance(self.focus_b)
    }
}

/// One branch of a hyperbola with foci `focus_a`, `focus_b`, selected by a
/// point it passes through: the locus `|a - x| - |b - x| = |a - t| - |b - t|`.
///
/// When the constant equals `±|a - b|` the branch degenerates to a ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaSide<T> {
    pub focus_a: Point<T>,
    pub focus_b: Point<T>,
    pub through: Point<T>,
}

impl<T: Scalar> HyperbolaSide<T> {
    pub fn new(focus_a: Point<T>, focus_b: Point<T>, through: Point<T>) -> Self {
        Self { focus_a, focus_b, through }
    }

    pub fn focal_difference(&self, x: Point<T>) -> T {
        self.focus_a.distance(x) - self.focus_b.distance(x)
    }

    pub fn constant(&self) -> T {
        self.focal_difference(self.through)
    }

    /// True when the branch collapses to a ray (constant is `±|a-b|`).
    pub fn is_degenerate(&self, tol: &Tolerance<T>) -> bool {
        let gap = self.focus_a.distance(self.focus_b) - self.constant().abs();
        gap <= tol.boundary(self.scale())
    }

    fn scale(&self) -> T {
        scale_of(&[self.focus_a, self.focus_b, self.through])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Self::Left => Self::Right,
            Self::Right => Self::Left,
            Self::Collinear => Self::Collinear,
        }
    }
}

/// Position of a point relative to a closed region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

impl Containment {
    /// Interior or boundary.
    pub fn is_inside(self) -> bool {
        !matches!(self, Self::Exterior)
    }
}

/// Result of a closed-segment intersection test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Crossing {
    Disjoint,
    /// Interiors cross at a single point.
    Proper,
    /// The segments touch at an endpoint or overlap collinearly.
    Improper,
}

impl Crossing {
    pub fn crosses(self) -> bool {
        !matches!(self, Self::Disjoint)
    }

    pub fn is_improper(self) -> bool {
        matches!(self, Self::Improper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HyperbolaRegion {
    OnArc,
    /// `|a-x| - |b-x|` below the arc constant.
    SideOfFocusA,
    /// `|a-x| - |b-x|` above the arc constant.
    SideOfFocusB,
}

fn classify_band<T: Scalar>(value: T, band: T) -> Containment {
    match sign_with_band(value, band) {
        Ordering::Less => Containment::Interior,
        Ordering::Equal => Containment::Boundary,
        Ordering::Greater => Containment::Exterior,
    }
}

/// Sign of `(b - a) x (c - a)`; collinear within `tol.collinear(scale)`.
pub fn orientation<T: Scalar>(a: Point<T>, b: Point<T>, c: Point<T>, tol: &Tolerance<T>) -> Orientation {
    let cross = (b - a).cross(c - a);
    let scale = scale_of(&[a, b, c]);
    match sign_with_band(cross, tol.collinear(scale)) {
        Ordering::Greater => Orientation::Left,
        Ordering::Less => Orientation::Right,
        Ordering::Equal => Orientation::Collinear,
    }
}

pub fn in_disk<T: Scalar>(p: Point<T>, d: &Disk<T>, tol: &Tolerance<T>) -> Containment {
    let scale = scale_of(&[p, d.center]).max(d.radius);
    classify_band(d.excess(p), tol.boundary(scale))
}

pub fn in_ellipse<T: Scalar>(e: &EllipseRegion<T>, x: Point<T>, tol: &Tolerance<T>) -> Containment {
    let scale = scale_of(&[x, e.focus_a, e.focus_b]).max(e.semimajor);
    classify_band(e.excess(x), tol.boundary(scale))
}

pub fn hyperbola_side<T: Scalar>(h: &HyperbolaSide<T>, x: Point<T>, tol: &Tolerance<T>) -> HyperbolaRegion {
    let scale = h.scale().max(x.max_abs());
    match sign_with_band(h.focal_difference(x) - h.constant(), tol.boundary(scale)) {
        Ordering::Less => HyperbolaRegion::SideOfFocusA,
        Ordering::Equal => HyperbolaRegion::OnArc,
        Ordering::Greater => HyperbolaRegion::SideOfFocusB,
    }
}

fn within_box<T: Scalar>(s: &Segment<T>, x: Point<T>, band: T) -> bool {
    x.x >= s.p.x.min(s.q.x) - band
        && x.x <= s.p.x.max(s.q.x) + band
        && x.y >= s.p.y.min(s.q.y) - band
        && x.y <= s.p.y.max(s.q.y) + band
}

/// Closed-segment intersection with the improper (touching) case reported
/// separately.
pub fn segments_cross<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>, tol: &Tolerance<T>) -> Crossing {
    let o1 = orientation(s1.p, s1.q, s2.p, tol);
    let o2 = orientation(s1.p, s1.q, s2.q, tol);
    let o3 = orientation(s2.p, s2.q, s1.p, tol);
    let o4 = orientation(s2.p, s2.q, s1.q, tol);
    use Orientation::Collinear;
    let strict = |a: Orientation, b: Orientation| a != Collinear && b != Collinear && a != b;
    if strict(o1, o2) && strict(o3, o4) {
        return Crossing::Proper;
    }
    let band = tol.boundary(scale_of(&[s1.p, s1.q, s2.p, s2.q]));
    let touches = (o1 == Collinear && within_box(s1, s2.p, band))
        || (o2 == Collinear && within_box(s1, s2.q, band))
        || (o3 == Collinear && within_box(s2, s1.p, band))
        || (o4 == Collinear && within_box(s2, s1.q, band));
    if touches {
        Crossing::Improper
    } else {
        Crossing::Disjoint
    }
}

/// Intersection point of the supporting lines, `None` when parallel.
pub fn line_intersection<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>) -> Option<Point<T>> {
    let d1 = s1.q - s1.p;
    let d2 = s2.q - s2.p;
    let denom = d1.cross(d2);
    if denom == T::zero() {
        return None;
    }
    let t = (s2.p - s1.p).cross(d2) / denom;
    Some(s1.p.lerp(s1.q, t))
}

/// Strict interior membership in triangle `(a, b, c)`; false for degenerate
/// triangles.
pub fn strictly_inside_triangle<T: Scalar>(
    x: Point<T>,
    a: Point<T>,
    b: Point<T>,
    c: Point<T>,
    tol: &Tolerance<T>,
) -> bool {
    let o = orientation(a, b, c, tol);
    if o == Orientation::Collinear {
        return false;
    }
    orientation(a, b, x, tol) == o && orientation(b, c, x, tol) == o && orientation(c, a, x, tol) == o
}

/// Whether the oriented segment `s1` points to `s2`: the head of `s1` lies in
/// the interior of both the triangle `(tail(s1), s2.p, s2.q)` and the
/// diametral disk of `s2`.
///
/// Zero-length `s2` and degenerate triangles never qualify.
pub fn points_to<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>, tol: &Tolerance<T>) -> bool {
    if s2.is_degenerate() {
        return false;
    }
    strictly_inside_triangle(s1.q, s1.p, s2.p, s2.q, tol)
        && in_disk(s1.q, &s2.diametral_disk(), tol) == Containment::Interior
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point<f64>;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn p(x: f64, y: f64) -> P {
        P::new(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(p(0., 0.), p(1., 0.), p(0., 1.), &tol()), Orientation::Left);
        assert_eq!(orientation(p(0., 0.), p(1., 0.), p(2., 0.), &tol()), Orientation::Collinear);
        assert_eq!(orientation(p(0., 0.), p(0., 1.), p(1., 1.), &tol()), Orientation::Right);
    }

    #[test]
    fn in_disk_examples() {
        let unit = Disk::new(p(0., 0.), 1.0);
        assert_eq!(in_disk(p(0., 0.), &unit, &tol()), Containment::Interior);
        assert_eq!(in_disk(p(1., 0.), &unit, &tol()), Containment::Boundary);
        let d = Disk::diametral(p(0., 0.), p(1., 0.));
        assert_eq!(in_disk(p(0.5, 0.5), &d, &tol()), Containment::Boundary);
        assert_eq!(in_disk(p(0.5, 0.6), &d, &tol()), Containment::Exterior);
    }

    #[test]
    fn crossing_examples() {
        let x = segments_cross(
            &Segment::new(p(0., 0.), p(2., 2.)),
            &Segment::new(p(0., 2.), p(2., 0.)),
            &tol(),
        );
        assert_eq!(x, Crossing::Proper);
        let apart = segments_cross(
            &Segment::new(p(0., 0.), p(1., 0.)),
            &Segment::new(p(2., 0.), p(3., 0.)),
            &tol(),
        );
        assert_eq!(apart, Crossing::Disjoint);
        let touch = segments_cross(
            &Segment::new(p(0., 0.), p(1., 1.)),
            &Segment::new(p(1., 1.), p(2., 0.)),
            &tol(),
        );
        assert!(touch.crosses());
        assert!(touch.is_improper());
        // T-junction: endpoint in the interior of the other segment.
        let tee = segments_cross(
            &Segment::new(p(0., 0.), p(2., 0.)),
            &Segment::new(p(1., 0.), p(1., 1.)),
            &tol(),
        );
        assert_eq!(tee, Crossing::Improper);
    }

    #[test]
    fn points_to_examples() {
        let s2 = Segment::new(p(0., 1.), p(1., 0.));
        assert!(points_to(&Segment::new(p(0., -2.), p(0.5, 0.4)), &s2, &tol()));
        assert!(!points_to(&Segment::new(p(0., -2.), p(0.5, -0.5)), &s2, &tol()));
        assert!(!points_to(&Segment::new(p(0., -2.), p(0., 1.)), &s2, &tol()));
    }

    #[test]
    fn points_to_degenerate_cases() {
        // zero-length target
        let z = Segment::new(p(0., 0.), p(0., 0.));
        assert!(!points_to(&Segment::new(p(1., 1.), p(0., 0.)), &z, &tol()));
        // collinear triangle
        let s2 = Segment::new(p(0., 0.), p(2., 0.));
        assert!(!points_to(&Segment::new(p(-1., 0.), p(1., 0.)), &s2, &tol()));
    }

    #[test]
    fn hyperbola_examples() {
        let h = HyperbolaSide::new(p(-1., 0.), p(1., 0.), p(0., 0.));
        assert_eq!(hyperbola_side(&h, p(0., 0.), &tol()), HyperbolaRegion::OnArc);
        assert_eq!(hyperbola_side(&h, p(0.5, 0.), &tol()), HyperbolaRegion::SideOfFocusB);
        assert_eq!(hyperbola_side(&h, p(-3., 1.), &tol()), HyperbolaRegion::SideOfFocusA);
        assert!(!h.is_degenerate(&tol()));
        let ray = HyperbolaSide::new(p(-1., 0.), p(1., 0.), p(3., 0.));
        assert!(ray.is_degenerate(&tol()));
        assert_eq!(hyperbola_side(&ray, p(5., 0.), &tol()), HyperbolaRegion::OnArc);
        assert_eq!(hyperbola_side(&ray, p(5., 1.), &tol()), HyperbolaRegion::SideOfFocusA);
    }

    #[test]
    fn ellipse_examples() {
        let circle = EllipseRegion::new(p(0., 0.), p(0., 0.), 1.0);
        assert_eq!(in_ellipse(&circle, p(0., 0.5), &tol()), Containment::Interior);
        let e = EllipseRegion::new(p(0., 0.), p(1., 0.), 1.0 / 3f64.sqrt());
        let centroid = p(0.5, 3f64.sqrt() / 6.0);
        assert_eq!(in_ellipse(&e, centroid, &tol()), Containment::Boundary);
        assert_eq!(in_ellipse(&e, p(0.5, 1.0), &tol()), Containment::Exterior);
    }

    #[test]
    fn segment_distance_and_foot() {
        let s = Segment::new(p(0., 0.), p(2., 0.));
        assert_eq!(s.distance_to(p(1., 3.)), 3.0);
        assert_eq!(s.distance_to(p(-3., 4.)), 5.0);
        let (f, t) = s.foot_of(p(3., 1.)).unwrap();
        assert_eq!(f, p(3., 0.));
        assert_eq!(t, 1.5);
        assert!(Segment::new(p(1., 1.), p(1., 1.)).foot_of(p(0., 0.)).is_none());
    }

    #[test]
    fn line_intersection_of_diagonals() {
        let a = Segment::new(p(0., 0.), p(2., 2.));
        let b = Segment::new(p(0., 2.), p(2., 0.));
        assert_eq!(line_intersection(&a, &b), Some(p(1., 1.)));
        let c = Segment::new(p(0., 1.), p(2., 3.));
        assert_eq!(line_intersection(&a, &c), None);
    }

    #[test]
    fn works_in_single_precision() {
        let t = Tolerance::<f32>::default();
        let a = Point::<f32>::new(0.0, 0.0);
        let b = Point::<f32>::new(1.0, 0.0);
        assert_eq!(orientation(a, b, Point::new(0.0, 1.0), &t), Orientation::Left);
        let d = Disk::diametral(a, b);
        assert_eq!(in_disk(Point::new(0.5, 0.5), &d, &t), Containment::Boundary);
    }
}
