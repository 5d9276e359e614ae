//! Generators for the fixed instances: the red-blue families whose max-sum
//! matchings have no common disk point, the equilateral tightness set and the
//! singleton-intersection set.
//!
//! Every generator checks its own claims before returning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{orientation, strictly_inside_triangle, Orientation, Point};
use crate::matching::{heuristic_from, max_sum_bruteforce, verify_2opt_maximality, Matching, PointSet, BRUTE_FORCE_CAP};
use crate::piercing::{lens_x_extent, triple_intersect_exact, Verdict};
use crate::scalar::{Scalar, Tolerance};

/// A colored instance together with its optimal matching and the three pairs
/// whose disks have no common point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleInstance<T> {
    pub name: String,
    #[serde(skip)]
    pub point_set: Option<PointSet<T>>,
    pub epsilon: T,
    pub n: usize,
    pub claimed_optimum: Matching<T>,
    /// Indices into `claimed_optimum.pairs()`.
    pub empty_triple: [usize; 3],
    /// The optimum was confirmed by exhaustive search (otherwise by 2-opt only).
    pub exhaustively_verified: bool,
    /// Named points of the base triangle: `a, b, c, a', b', c'` as indices.
    pub base: [usize; 6],
}

impl<T: Scalar> CounterexampleInstance<T> {
    pub fn points(&self) -> &PointSet<T> {
        self.point_set.as_ref().expect("generated instances carry their point set")
    }
}

/// Largest admissible perturbation for the three-pair family, `(5 - sqrt 10 - sqrt 3) / 4`.
pub fn three_pair_epsilon_limit<T: Scalar>() -> T {
    (T::lit(5.0) - T::lit(10.0).sqrt() - T::lit(3.0).sqrt()) / T::lit(4.0)
}

/// Largest pair count accepted by [`many_pair_counterexample`].
pub const MANY_PAIR_MAX_N: usize = 32;

/// Largest admissible perturbation for the `n`-pair family, `1 / (10 (2n - 1))`.
pub fn many_pair_epsilon_limit<T: Scalar>(n: usize) -> T {
    T::one() / (T::lit(10.0) * T::lit((2 * n - 1) as f64))
}

/// Default perturbation: 0.9 of the family's limit.
pub fn default_epsilon<T: Scalar>(n: usize) -> T {
    let limit: T = if n <= 3 { three_pair_epsilon_limit() } else { many_pair_epsilon_limit(n) };
    limit * T::lit(0.9)
}

fn check_epsilon<T: Scalar>(epsilon: T, limit: T) -> Result<()> {
    if epsilon > T::zero() && epsilon < limit && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon.to_f64(),
            constraint: format!("0 < epsilon < {:.17}", limit.to_f64()),
        })
    }
}

/// The base triangle: `a = (-1, 0)`, `b = (1, 0)`, `c = (0, sqrt 3)`,
/// `c' = (0, 3)`, with `a'` on `bc` and `b'` on `ac` at distance `epsilon`
/// from `c`.
fn base_points<T: Scalar>(epsilon: T) -> [Point<T>; 6] {
    let sqrt3 = T::lit(3.0).sqrt();
    let a = Point::new(-T::one(), T::zero());
    let b = Point::new(T::one(), T::zero());
    let c = Point::new(T::zero(), sqrt3);
    let c2 = Point::new(T::zero(), T::lit(3.0));
    let half = T::lit(0.5);
    // unit(b - c) = (1/2, -sqrt3/2), unit(a - c) = (-1/2, -sqrt3/2)
    let a2 = c + Point::new(half, -sqrt3 * half) * epsilon;
    let b2 = c + Point::new(-half, -sqrt3 * half) * epsilon;
    [a, b, c, a2, b2, c2]
}

/// Three red and three blue points whose unique max-sum matching
/// `{(a,a'), (b,b'), (c,c')}` has diametral disks without a common point.
pub fn three_pair_counterexample<T: Scalar>(epsilon: T, tol: &Tolerance<T>) -> Result<CounterexampleInstance<T>> {
    check_epsilon(epsilon, three_pair_epsilon_limit())?;
    let [a, b, c, a2, b2, c2] = base_points(epsilon);
    let ps = PointSet::colored(vec![a, b, c], vec![a2, b2, c2])?;
    let claimed = Matching::new(&ps, &[(0, 3), (1, 4), (2, 5)])?;
    let oracle = max_sum_bruteforce(&ps, tol)?;
    if oracle.matching.pairs() != claimed.pairs() || !oracle.is_unique {
        return Err(Error::CheckFailed(format!(
            "exhaustive optimum {:?} (unique: {}) differs from the claimed matching",
            oracle.matching.pairs(),
            oracle.is_unique
        )));
    }
    let inst = CounterexampleInstance {
        name: format!("thm2_eps{}", epsilon.to_f64()),
        point_set: Some(ps),
        epsilon,
        n: 3,
        claimed_optimum: claimed,
        empty_triple: [0, 1, 2],
        exhaustively_verified: true,
        base: [0, 1, 2, 3, 4, 5],
    };
    check_empty_triple(&inst, tol)?;
    Ok(inst)
}

/// The `n`-pair family (`n >= 4`): the three-pair base plus `n - 3` blue points
/// evenly spaced on the open segment `b'a'` and `n - 3` red points on the
/// horizontal line through `c` at `x = ±epsilon * i / (n - 2)` (odd `i` to the
/// right, even `i` to the left).
///
/// Red points are `a, b, c, a_1..`, blue points `a', b', c', a'_1..`. The
/// optimum is exhaustive within the brute-force cap and a 2-opt local optimum
/// started from the expected matching beyond it.
pub fn many_pair_counterexample<T: Scalar>(
    n: usize,
    epsilon: T,
    tol: &Tolerance<T>,
) -> Result<CounterexampleInstance<T>> {
    if n < 4 {
        return Err(Error::OutOfRange { name: "n", value: n as f64, constraint: "n >= 4".into() });
    }
    if n > MANY_PAIR_MAX_N {
        return Err(Error::OutOfRange { name: "n", value: n as f64, constraint: format!("n <= {MANY_PAIR_MAX_N}") });
    }
    check_epsilon(epsilon, many_pair_epsilon_limit(n))?;
    let [a, b, c, a2, b2, c2] = base_points(epsilon);
    let extra = n - 3;
    let denom = T::lit((n - 2) as f64);
    let mut red = vec![a, b, c];
    let mut blue = vec![a2, b2, c2];
    for i in 1..=extra {
        let t = T::lit(i as f64) / denom;
        blue.push(b2.lerp(a2, t));
        let side = if i % 2 == 1 { T::one() } else { -T::one() };
        red.push(Point::new(c.x + side * epsilon * t, c.y));
    }
    let ps = PointSet::colored(red, blue)?;
    let (ia, ib, ic, ia2, ib2, ic2) = (0, 1, 2, n, n + 1, n + 2);

    let (claimed, exhaustive) = if 2 * n <= BRUTE_FORCE_CAP {
        (max_sum_bruteforce(&ps, tol)?.matching, true)
    } else {
        let mut start = vec![(ia, ia2), (ib, ib2), (ic, ic2)];
        start.extend((1..=extra).map(|i| (2 + i, n + 2 + i)));
        let h = heuristic_from(&ps, &start, tol)?;
        if !verify_2opt_maximality(&ps, &h.matching, tol).is_empty() {
            return Err(Error::CheckFailed("local search ended at a non 2-opt matching".into()));
        }
        (h.matching, false)
    };
    let partner_of_c2 = claimed.partner(ic2).expect("perfect matching");
    if partner_of_c2 != ic && !(3..n).contains(&partner_of_c2) {
        return Err(Error::CheckFailed(format!(
            "c' is matched to point {partner_of_c2}, expected c or one of the added red points"
        )));
    }
    let pair = |i: usize| claimed.pair_of(i).expect("perfect matching");
    let inst = CounterexampleInstance {
        name: format!("thm3_n{n}"),
        point_set: Some(ps),
        epsilon,
        n,
        empty_triple: [pair(ia), pair(ib), pair(ic2)],
        claimed_optimum: claimed,
        exhaustively_verified: exhaustive,
        base: [ia, ib, ic, ia2, ib2, ic2],
    };
    check_empty_triple(&inst, tol)?;
    Ok(inst)
}

fn check_empty_triple<T: Scalar>(inst: &CounterexampleInstance<T>, tol: &Tolerance<T>) -> Result<()> {
    let disks = inst.claimed_optimum.disks(inst.points());
    let [i, j, k] = inst.empty_triple;
    let r = triple_intersect_exact(&disks[i], &disks[j], &disks[k], tol);
    if r.verdict != Verdict::Empty {
        return Err(Error::CheckFailed(format!("named triple is {:?} with depth {}", r.verdict, r.depth)));
    }
    // the lens with a's disk lies left of the axis, the lens with b's disk right
    let left = lens_x_extent(&disks[i], &disks[k]);
    let right = lens_x_extent(&disks[j], &disks[k]);
    match (left, right) {
        (Some((_, hi)), Some((lo, _))) if hi < T::zero() && lo > T::zero() => Ok(()),
        _ => Err(Error::CheckFailed(format!("lenses not separated by the axis: {left:?}, {right:?}"))),
    }
}

/// Two coincident points at each vertex of an equilateral triangle with
/// vertices `(0,0)`, `(side,0)`, `(side/2, side*sqrt(3)/2)`.
pub fn equilateral_tightness<T: Scalar>(side: T) -> Result<PointSet<T>> {
    if !(side > T::zero() && side.is_finite()) {
        return Err(Error::OutOfRange { name: "side", value: side.to_f64(), constraint: "side > 0".into() });
    }
    let v = [
        Point::new(T::zero(), T::zero()),
        Point::new(side, T::zero()),
        Point::new(side * T::lit(0.5), side * T::lit(3.0).sqrt() * T::lit(0.5)),
    ];
    PointSet::uncolored(vec![v[0], v[0], v[1], v[1], v[2], v[2]])
}

/// Pairs of the singleton instance: every triangle vertex matched to a copy of `z`.
pub const SINGLETON_PAIRS: [(usize, usize); 3] = [(0, 3), (1, 4), (2, 5)];

/// The set `{a, b, c, z, z, z}` with `z` strictly inside triangle `abc`; the
/// matching [`SINGLETON_PAIRS`] is max-sum and its disks meet only at `z`.
pub fn singleton_disk_instance<T: Scalar>(
    a: Point<T>,
    b: Point<T>,
    c: Point<T>,
    z: Point<T>,
    tol: &Tolerance<T>,
) -> Result<PointSet<T>> {
    if orientation(a, b, c, tol) == Orientation::Collinear {
        return Err(Error::InvalidPointSet("triangle vertices are collinear".into()));
    }
    if !strictly_inside_triangle(z, a, b, c, tol) {
        return Err(Error::NotInterior);
    }
    let ps = PointSet::uncolored(vec![a, b, c, z, z, z])?;
    let claimed = Matching::new(&ps, &SINGLETON_PAIRS)?;
    let oracle = max_sum_bruteforce(&ps, tol)?;
    if oracle.matching.cost() > claimed.cost() + tol.cost(claimed.cost()) {
        return Err(Error::CheckFailed("star matching is not max-sum".into()));
    }
    Ok(ps)
}
