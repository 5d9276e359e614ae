//! Max-sum matchings: exhaustive oracle, 2-opt certificate and a local-search
//! heuristic for instances beyond the exhaustive cap.

use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{scale_of, Disk, Point, Segment};
use crate::scalar::{Scalar, Tolerance};

/// Largest point count the exhaustive search accepts (both modes).
pub const BRUTE_FORCE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

/// An even-sized point set, optionally split into equally many red and blue
/// points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    points: Vec<Point<T>>,
    coloring: Option<Vec<Color>>,
}

impl<T: Scalar> PointSet<T> {
    pub fn uncolored(points: Vec<Point<T>>) -> Result<Self> {
        Self::validated(points, None)
    }

    /// Red points occupy indices `0..n`, blue points `n..2n`.
    pub fn colored(red: Vec<Point<T>>, blue: Vec<Point<T>>) -> Result<Self> {
        let coloring = std::iter::repeat_n(Color::Red, red.len())
            .chain(std::iter::repeat_n(Color::Blue, blue.len()))
            .collect();
        let mut points = red;
        points.extend(blue);
        Self::validated(points, Some(coloring))
    }

    pub fn with_coloring(points: Vec<Point<T>>, coloring: Option<Vec<Color>>) -> Result<Self> {
        Self::validated(points, coloring)
    }

    fn validated(points: Vec<Point<T>>, coloring: Option<Vec<Color>>) -> Result<Self> {
        if points.is_empty() || !points.len().is_multiple_of(2) {
            return Err(Error::InvalidPointSet(format!(
                "need a positive even number of points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidPointSet(format!("point {i} has a non-finite coordinate")));
        }
        if let Some(colors) = &coloring {
            if colors.len() != points.len() {
                return Err(Error::InvalidPointSet("coloring length differs from point count".into()));
            }
            let red = colors.iter().filter(|c| **c == Color::Red).count();
            if 2 * red != points.len() {
                return Err(Error::InvalidPointSet(format!(
                    "colored sets need |R| = |B|, got {red} red of {}",
                    points.len()
                )));
            }
        }
        Ok(Self { points, coloring })
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point<T> {
        self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of pairs in a perfect matching.
    pub fn pair_count(&self) -> usize {
        self.points.len() / 2
    }

    pub fn coloring(&self) -> Option<&[Color]> {
        self.coloring.as_deref()
    }

    pub fn is_colored(&self) -> bool {
        self.coloring.is_some()
    }

    pub fn color(&self, i: usize) -> Option<Color> {
        self.coloring.as_ref().map(|c| c[i])
    }

    pub fn indices_of(&self, color: Color) -> Vec<usize> {
        match &self.coloring {
            Some(c) => (0..c.len()).filter(|&i| c[i] == color).collect(),
            None => Vec::new(),
        }
    }

    pub fn scale(&self) -> T {
        scale_of(&self.points)
    }

    pub fn distance(&self, i: usize, j: usize) -> T {
        self.points[i].distance(self.points[j])
    }

    /// Applies `f` to every point, keeping the coloring.
    pub fn map_points(&self, f: impl Fn(Point<T>) -> Point<T>) -> Result<Self> {
        Self::validated(self.points.iter().map(|&p| f(p)).collect(), self.coloring.clone())
    }

    /// Replaces one point, keeping its color.
    pub fn with_point(&self, i: usize, p: Point<T>) -> Result<Self> {
        let mut points = self.points.clone();
        points[i] = p;
        Self::validated(points, self.coloring.clone())
    }
}

/// A perfect matching stored in canonical form: every pair `(i, j)` has
/// `i < j` and pairs are sorted by first index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matching<T> {
    pairs: Vec<(usize, usize)>,
    cost: T,
}

fn canonical(pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = pairs.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
    out.sort_unstable();
    out
}

/// Sums pair lengths in canonical order so every code path produces the same bits.
fn canonical_cost<T: Scalar>(ps: &PointSet<T>, canonical_pairs: &[(usize, usize)]) -> T {
    canonical_pairs
        .iter()
        .fold(T::zero(), |acc, &(i, j)| acc + ps.distance(i, j))
}

impl<T: Scalar> Matching<T> {
    /// Validates `pairs` as a perfect matching of `ps` and computes its cost.
    pub fn new(ps: &PointSet<T>, pairs: &[(usize, usize)]) -> Result<Self> {
        let pairs = canonical(pairs);
        validate(ps, &pairs)?;
        let cost = canonical_cost(ps, &pairs);
        Ok(Self { pairs, cost })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn cost(&self) -> T {
        self.cost
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The point matched with `i`.
    pub fn partner(&self, i: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == i {
                Some(b)
            } else if b == i {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Index of the pair containing point `i`.
    pub fn pair_of(&self, i: usize) -> Option<usize> {
        self.pairs.iter().position(|&(a, b)| a == i || b == i)
    }

    pub fn point_pairs(&self, ps: &PointSet<T>) -> Vec<(Point<T>, Point<T>)> {
        self.pairs.iter().map(|&(i, j)| (ps.point(i), ps.point(j))).collect()
    }

    pub fn segments(&self, ps: &PointSet<T>) -> Vec<Segment<T>> {
        self.pairs
            .iter()
            .map(|&(i, j)| Segment::new(ps.point(i), ps.point(j)))
            .collect()
    }

    pub fn disks(&self, ps: &PointSet<T>) -> Vec<Disk<T>> {
        self.pairs
            .iter()
            .map(|&(i, j)| Disk::diametral(ps.point(i), ps.point(j)))
            .collect()
    }
}

fn validate<T: Scalar>(ps: &PointSet<T>, pairs: &[(usize, usize)]) -> Result<()> {
    if pairs.len() != ps.pair_count() {
        return Err(Error::InvalidMatching(format!(
            "expected {} pairs, got {}",
            ps.pair_count(),
            pairs.len()
        )));
    }
    let mut seen = vec![false; ps.len()];
    for &(i, j) in pairs {
        for k in [i, j] {
            if k >= ps.len() {
                return Err(Error::InvalidMatching(format!("index {k} out of range")));
            }
            if seen[k] {
                return Err(Error::InvalidMatching(format!("index {k} used twice")));
            }
            seen[k] = true;
        }
        if let (Some(ci), Some(cj)) = (ps.color(i), ps.color(j)) {
            if ci == cj {
                return Err(Error::InvalidMatching(format!("pair ({i}, {j}) is monochromatic")));
            }
        }
    }
    Ok(())
}

/// Total Euclidean length of a matching, summed in ascending pair order.
pub fn cost<T: Scalar>(ps: &PointSet<T>, pairs: &[(usize, usize)]) -> Result<T> {
    Matching::new(ps, pairs).map(|m| m.cost())
}

/// Calls `visit` with every perfect matching of `ps` (bichromatic when the set
/// is colored) in canonical form, together with its cost.
///
/// Uncolored sets are enumerated in lexicographic order of the canonical pair
/// list; colored sets in lexicographic order of the blue permutation.
pub fn for_each_matching<T: Scalar>(
    ps: &PointSet<T>,
    mut visit: impl FnMut(&[(usize, usize)], T),
) -> Result<u64> {
    if ps.len() > BRUTE_FORCE_CAP {
        return Err(Error::SizeLimit { size: ps.len(), cap: BRUTE_FORCE_CAP });
    }
    let n = ps.len();
    let dist: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| ps.distance(i, j)).collect()).collect();
    let mut count = 0u64;
    if ps.is_colored() {
        let reds = ps.indices_of(Color::Red);
        let blues = ps.indices_of(Color::Blue);
        let mut used = vec![false; blues.len()];
        let mut pairs = Vec::with_capacity(reds.len());
        let mut scratch = Vec::with_capacity(reds.len());
        colored_rec(&reds, &blues, &dist, &mut used, &mut pairs, &mut scratch, &mut count, &mut visit);
    } else {
        let mut pairs = Vec::with_capacity(n / 2);
        uncolored_rec(n, 0u32, &dist, T::zero(), &mut pairs, &mut count, &mut visit);
    }
    Ok(count)
}

fn uncolored_rec<T: Scalar>(
    n: usize,
    used: u32,
    dist: &[Vec<T>],
    acc: T,
    pairs: &mut Vec<(usize, usize)>,
    count: &mut u64,
    visit: &mut impl FnMut(&[(usize, usize)], T),
) {
    let Some(i) = (0..n).find(|&i| used & (1 << i) == 0) else {
        *count += 1;
        visit(pairs, acc);
        return;
    };
    for j in (i + 1)..n {
        if used & (1 << j) != 0 {
            continue;
        }
        pairs.push((i, j));
        uncolored_rec(n, used | (1 << i) | (1 << j), dist, acc + dist[i][j], pairs, count, visit);
        pairs.pop();
    }
}

#[allow(clippy::too_many_arguments)]
fn colored_rec<T: Scalar>(
    reds: &[usize],
    blues: &[usize],
    dist: &[Vec<T>],
    used: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    scratch: &mut Vec<(usize, usize)>,
    count: &mut u64,
    visit: &mut impl FnMut(&[(usize, usize)], T),
) {
    let k = pairs.len();
    if k == reds.len() {
        scratch.clear();
        scratch.extend(pairs.iter().map(|&(i, j)| (i.min(j), i.max(j))));
        scratch.sort_unstable();
        let total = scratch.iter().fold(T::zero(), |acc, &(i, j)| acc + dist[i][j]);
        *count += 1;
        visit(scratch, total);
        return;
    }
    for b in 0..blues.len() {
        if used[b] {
            continue;
        }
        used[b] = true;
        pairs.push((reds[k], blues[b]));
        colored_rec(reds, blues, dist, used, pairs, scratch, count, visit);
        pairs.pop();
        used[b] = false;
    }
}

/// Result of the exhaustive search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxSumResult<T> {
    pub matching: Matching<T>,
    /// No other matching is within the tie band of the optimum.
    pub is_unique: bool,
    /// Number of matchings within the tie band (including the returned one).
    pub optimal_count: u64,
    pub evaluated: u64,
}

/// Exhaustive max-sum matching.
///
/// Among matchings within `tol.cost(max)` of the maximum, the one with the
/// lexicographically smallest canonical pair list is returned.
pub fn max_sum_bruteforce<T: Scalar>(ps: &PointSet<T>, tol: &Tolerance<T>) -> Result<MaxSumResult<T>> {
    let mut best = T::neg_infinity();
    for_each_matching(ps, |_, c| {
        if c > best {
            best = c;
        }
    })?;
    let band = tol.cost(best);
    let mut chosen: Option<(Vec<(usize, usize)>, T)> = None;
    let mut optimal_count = 0u64;
    let evaluated = for_each_matching(ps, |pairs, c| {
        if c >= best - band {
            optimal_count += 1;
            let better = match &chosen {
                None => true,
                Some((current, _)) => pairs.cmp(current.as_slice()) == Ordering::Less,
            };
            if better {
                chosen = Some((pairs.to_vec(), c));
            }
        }
    })?;
    let (pairs, cost) = chosen.expect("a non-empty point set has at least one matching");
    Ok(MaxSumResult {
        matching: Matching { pairs, cost },
        is_unique: optimal_count == 1,
        optimal_count,
        evaluated,
    })
}

/// An exchange between two matched pairs that increases the total length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Improvement<T> {
    /// Indices into the matching's pair list.
    pub first: usize,
    pub second: usize,
    /// The two replacement pairs (point indices).
    pub rematch: [(usize, usize); 2],
    pub gain: T,
}

/// The allowed exchanges for two pairs: one when colored (red keeps its role),
/// two when uncolored.
fn exchanges<T: Scalar>(
    ps: &PointSet<T>,
    (a, a2): (usize, usize),
    (b, b2): (usize, usize),
) -> Vec<[(usize, usize); 2]> {
    if ps.is_colored() {
        let orient = |(x, y): (usize, usize)| {
            if ps.color(x) == Some(Color::Red) {
                (x, y)
            } else {
                (y, x)
            }
        };
        let (ra, ba) = orient((a, a2));
        let (rb, bb) = orient((b, b2));
        vec![[(ra, bb), (rb, ba)]]
    } else {
        vec![[(a, b), (a2, b2)], [(a, b2), (a2, b)]]
    }
}

/// Every pair-of-pairs exchange that improves the matching by more than the
/// tolerance. Empty output is necessary, not sufficient, for optimality.
pub fn verify_2opt_maximality<T: Scalar>(
    ps: &PointSet<T>,
    m: &Matching<T>,
    tol: &Tolerance<T>,
) -> Vec<Improvement<T>> {
    let band = tol.cost(m.cost());
    let pairs = m.pairs();
    let mut out = Vec::new();
    for first in 0..pairs.len() {
        for second in (first + 1)..pairs.len() {
            let (a, a2) = pairs[first];
            let (b, b2) = pairs[second];
            let old = ps.distance(a, a2) + ps.distance(b, b2);
            for rematch in exchanges(ps, pairs[first], pairs[second]) {
                let new = ps.distance(rematch[0].0, rematch[0].1) + ps.distance(rematch[1].0, rematch[1].1);
                let gain = new - old;
                if gain > band {
                    out.push(Improvement { first, second, rematch, gain });
                }
            }
        }
    }
    out
}

/// Local-search result; never claimed optimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicResult<T> {
    pub matching: Matching<T>,
    pub heuristic: bool,
    pub improvement_rounds: usize,
}

/// Greedy farthest-pair start followed by best-improvement 2-opt until no
/// exchange gains more than the tolerance.
pub fn max_sum_heuristic<T: Scalar>(ps: &PointSet<T>, tol: &Tolerance<T>) -> Result<HeuristicResult<T>> {
    let n = ps.len();
    let mut free = vec![true; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for _ in 0..n / 2 {
        let mut best: Option<(T, usize, usize)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                if !free[i] || !free[j] {
                    continue;
                }
                if let (Some(ci), Some(cj)) = (ps.color(i), ps.color(j)) {
                    if ci == cj {
                        continue;
                    }
                }
                let d = ps.distance(i, j);
                if best.is_none_or(|(bd, _, _)| d > bd) {
                    best = Some((d, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("balanced sets always leave a feasible pair");
        free[i] = false;
        free[j] = false;
        pairs.push((i, j));
    }
    heuristic_from(ps, &pairs, tol)
}

/// Runs the 2-opt improvement phase from a given perfect matching.
pub fn heuristic_from<T: Scalar>(
    ps: &PointSet<T>,
    start: &[(usize, usize)],
    tol: &Tolerance<T>,
) -> Result<HeuristicResult<T>> {
    let mut m = Matching::new(ps, start)?;
    let mut rounds = 0;
    while rounds < 10_000 {
        let improvements = verify_2opt_maximality(ps, &m, tol);
        let Some(best) = improvements
            .into_iter()
            .max_by(|x, y| x.gain.partial_cmp(&y.gain).unwrap_or(Ordering::Equal))
        else {
            break;
        };
        let mut pairs: Vec<_> = m
            .pairs()
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != best.first && *k != best.second)
            .map(|(_, &p)| p)
            .collect();
        pairs.extend(best.rematch);
        m = Matching::new(ps, &pairs)?;
        rounds += 1;
    }
    Ok(HeuristicResult { matching: m, heuristic: true, improvement_rounds: rounds })
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point<f64>;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn pts(c: &[(f64, f64)]) -> Vec<P> {
        c.iter().map(|&(x, y)| P::new(x, y)).collect()
    }

    #[test]
    fn cost_examples() {
        let ps = PointSet::uncolored(pts(&[(0., 0.), (0., 0.)])).unwrap();
        assert_eq!(cost(&ps, &[(0, 1)]).unwrap(), 0.0);
        let sq = PointSet::uncolored(pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        let c = cost(&sq, &[(0, 2), (1, 3)]).unwrap();
        assert!((c - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn invalid_matchings_rejected() {
        let sq = PointSet::uncolored(pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        assert!(matches!(cost(&sq, &[(0, 1), (1, 2)]), Err(Error::InvalidMatching(_))));
        assert!(matches!(cost(&sq, &[(0, 1)]), Err(Error::InvalidMatching(_))));
        assert!(matches!(cost(&sq, &[(0, 1), (2, 9)]), Err(Error::InvalidMatching(_))));
        let col = PointSet::colored(pts(&[(0., 0.), (1., 0.)]), pts(&[(1., 1.), (0., 1.)])).unwrap();
        assert!(matches!(cost(&col, &[(0, 1), (2, 3)]), Err(Error::InvalidMatching(_))));
    }

    #[test]
    fn invalid_point_sets_rejected() {
        assert!(PointSet::uncolored(pts(&[(0., 0.)])).is_err());
        assert!(PointSet::<f64>::uncolored(vec![]).is_err());
        assert!(PointSet::uncolored(vec![P::new(f64::NAN, 0.), P::new(0., 0.)]).is_err());
        assert!(PointSet::colored(pts(&[(0., 0.), (1., 1.)]), pts(&[(2., 2.), (3., 3.), (4., 4.), (5., 5.)])).is_err());
    }

    #[test]
    fn coincident_pairs_cross_match() {
        let ps = PointSet::uncolored(pts(&[(0., 0.), (0., 0.), (1., 0.), (1., 0.)])).unwrap();
        let r = max_sum_bruteforce(&ps, &tol()).unwrap();
        assert_eq!(r.matching.pairs(), &[(0, 2), (1, 3)]);
        assert_eq!(r.matching.cost(), 2.0);
        assert!(!r.is_unique);
        assert_eq!(r.optimal_count, 2);
    }

    #[test]
    fn enumeration_counts() {
        let six = PointSet::uncolored(pts(&[(0., 0.), (1., 0.), (2., 0.), (3., 1.), (4., 2.), (5., 0.)])).unwrap();
        assert_eq!(for_each_matching(&six, |_, _| {}).unwrap(), 15);
        let col = PointSet::colored(pts(&[(0., 0.), (1., 0.), (2., 0.)]), pts(&[(3., 1.), (4., 2.), (5., 0.)])).unwrap();
        assert_eq!(for_each_matching(&col, |_, _| {}).unwrap(), 6);
    }

    #[test]
    fn size_cap_enforced() {
        let many: Vec<P> = (0..18).map(|i| P::new(i as f64, 0.0)).collect();
        let ps = PointSet::uncolored(many).unwrap();
        assert!(matches!(max_sum_bruteforce(&ps, &tol()), Err(Error::SizeLimit { size: 18, cap: 16 })));
    }

    #[test]
    fn colored_square_side_matching_violates_2opt() {
        // a'(0,0) blue, a(1,0) red, b(1,1) red, b'(0,1) blue
        let ps = PointSet::colored(pts(&[(1., 0.), (1., 1.)]), pts(&[(0., 0.), (0., 1.)])).unwrap();
        let sides = Matching::new(&ps, &[(0, 2), (1, 3)]).unwrap();
        assert_eq!(sides.cost(), 2.0);
        let v = verify_2opt_maximality(&ps, &sides, &tol());
        assert_eq!(v.len(), 1);
        assert!((v[0].gain - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-12);
        let best = max_sum_bruteforce(&ps, &tol()).unwrap();
        assert!(verify_2opt_maximality(&ps, &best.matching, &tol()).is_empty());
    }

    #[test]
    fn heuristic_reaches_optimum_on_small_sets() {
        let ps = PointSet::uncolored(pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.), (0.5, 2.), (0.4, -1.)])).unwrap();
        let exact = max_sum_bruteforce(&ps, &tol()).unwrap();
        let h = max_sum_heuristic(&ps, &tol()).unwrap();
        assert!(h.heuristic);
        assert!(verify_2opt_maximality(&ps, &h.matching, &tol()).is_empty());
        assert!(h.matching.cost() <= exact.matching.cost() + 1e-12);
    }

    #[test]
    fn partner_lookup() {
        let ps = PointSet::uncolored(pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        let m = Matching::new(&ps, &[(3, 1), (2, 0)]).unwrap();
        assert_eq!(m.pairs(), &[(0, 2), (1, 3)]);
        assert_eq!(m.partner(3), Some(1));
        assert_eq!(m.pair_of(2), Some(0));
    }
}
