//! Relative position of the three segments of a 3-pair matching.
//!
//! Two segments of a max-sum matching either cross or one of them, suitably
//! oriented, points to the other. Orientation is recomputed from geometry: the
//! head of a pointing segment is whichever endpoint lies inside the triangle
//! formed with the other segment.
//!
//! Labels, with `k` the number of crossing pairs:
//!
//! | k | pointing pattern                                              | label |
//! |---|---------------------------------------------------------------|-------|
//! | 3 | -                                                             | A     |
//! | 1 | free segment points to both crossing ones, different heads    | B     |
//! | 2 | -                                                             | C     |
//! | 1 | both crossing segments point to the free one                  | D     |
//! | 1 | free segment points to both crossing ones, same head          | E     |
//! | 0 | one segment points to both with one head, the two tails on the same side of the sink | F |
//! | 0 | as F, tails on opposite sides                                  | G     |
//! | 0 | cyclic                                                        | H     |
//! | 1 | chain through the free segment                                | I     |
//! | 0 | one segment points to both with different heads               | J     |
//!
//! The split of {C, D} and {E, F, G} is a reading of the figures only; the
//! group labels are exposed so downstream checks need not depend on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{in_disk, line_intersection, orientation, points_to, segments_cross, Point, Segment};
use crate::matching::{Matching, PointSet};
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairRelation {
    Cross,
    FirstPointsToSecond,
    SecondPointsToFirst,
    /// Disjoint and neither segment points to the other; impossible in a
    /// max-sum matching.
    ConvexDisjoint,
}

impl PairRelation {
    pub fn reversed(self) -> Self {
        match self {
            Self::FirstPointsToSecond => Self::SecondPointsToFirst,
            Self::SecondPointsToFirst => Self::FirstPointsToSecond,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    NotMaxSumCompatible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseGroup {
    A,
    B,
    CD,
    EFG,
    H,
    I,
    J,
    NotMaxSumCompatible,
}

impl CaseLabel {
    pub const ALL: [Self; 10] =
        [Self::A, Self::B, Self::C, Self::D, Self::E, Self::F, Self::G, Self::H, Self::I, Self::J];

    pub fn group(self) -> CaseGroup {
        match self {
            Self::A => CaseGroup::A,
            Self::B => CaseGroup::B,
            Self::C | Self::D => CaseGroup::CD,
            Self::E | Self::F | Self::G => CaseGroup::EFG,
            Self::H => CaseGroup::H,
            Self::I => CaseGroup::I,
            Self::J => CaseGroup::J,
            Self::NotMaxSumCompatible => CaseGroup::NotMaxSumCompatible,
        }
    }

    /// Labels with a direct witness construction.
    pub fn has_direct_witness(self) -> bool {
        matches!(self, Self::A | Self::B | Self::C | Self::D | Self::E | Self::F | Self::G)
    }

    pub fn is_hard(self) -> bool {
        matches!(self, Self::H | Self::I | Self::J)
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotMaxSumCompatible => f.write_str("not-max-sum-compatible"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Oriented pointing between two of the segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pointing<T> {
    pub from: usize,
    pub to: usize,
    pub head: Point<T>,
    pub tail: Point<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification<T> {
    pub label: CaseLabel,
    pub group: CaseGroup,
    /// `relations[i][j]` describes segment `i` against segment `j`; `None` on
    /// the diagonal.
    pub relations: [[Option<PairRelation>; 3]; 3],
    pub pointing: Vec<Pointing<T>>,
    /// Some predicate is within a widened band of its decision boundary, or a
    /// segment has zero length.
    pub fragile: bool,
}

/// Head of `s1` when some orientation of it points to `s2`.
fn head_toward<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>, tol: &Tolerance<T>) -> Option<(Point<T>, Point<T>)> {
    if points_to(s1, s2, tol) {
        Some((s1.q, s1.p))
    } else if points_to(&s1.reversed(), s2, tol) {
        Some((s1.p, s1.q))
    } else {
        None
    }
}

pub fn pair_relation<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>, tol: &Tolerance<T>) -> PairRelation {
    if segments_cross(s1, s2, tol).crosses() {
        PairRelation::Cross
    } else if head_toward(s1, s2, tol).is_some() {
        PairRelation::FirstPointsToSecond
    } else if head_toward(s2, s1, tol).is_some() {
        PairRelation::SecondPointsToFirst
    } else {
        PairRelation::ConvexDisjoint
    }
}

struct Analysis<T> {
    label: CaseLabel,
    relations: [[Option<PairRelation>; 3]; 3],
    pointing: Vec<Pointing<T>>,
}

fn analyze<T: Scalar>(segs: &[Segment<T>; 3], tol: &Tolerance<T>) -> Analysis<T> {
    let mut relations = [[None; 3]; 3];
    let mut pointing = Vec::new();
    let mut crossing = Vec::new();
    let mut compatible = true;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let rel = pair_relation(&segs[i], &segs[j], tol);
        relations[i][j] = Some(rel);
        relations[j][i] = Some(rel.reversed());
        match rel {
            PairRelation::Cross => crossing.push((i, j)),
            PairRelation::FirstPointsToSecond => {
                let (head, tail) = head_toward(&segs[i], &segs[j], tol).expect("relation found a head");
                pointing.push(Pointing { from: i, to: j, head, tail });
            }
            PairRelation::SecondPointsToFirst => {
                let (head, tail) = head_toward(&segs[j], &segs[i], tol).expect("relation found a head");
                pointing.push(Pointing { from: j, to: i, head, tail });
            }
            PairRelation::ConvexDisjoint => compatible = false,
        }
    }
    let label = if compatible { label_of(segs, &crossing, &pointing, tol) } else { CaseLabel::NotMaxSumCompatible };
    Analysis { label, relations, pointing }
}

fn label_of<T: Scalar>(
    segs: &[Segment<T>; 3],
    crossing: &[(usize, usize)],
    pointing: &[Pointing<T>],
    tol: &Tolerance<T>,
) -> CaseLabel {
    let out_of = |i: usize| pointing.iter().filter(|p| p.from == i).collect::<Vec<_>>();
    match crossing.len() {
        3 => CaseLabel::A,
        2 => CaseLabel::C,
        1 => {
            let (y, z) = crossing[0];
            let x = 3 - y - z;
            let from_x = out_of(x);
            match from_x.len() {
                2 if from_x[0].head == from_x[1].head => CaseLabel::E,
                2 => CaseLabel::B,
                0 => CaseLabel::D,
                _ => CaseLabel::I,
            }
        }
        _ => {
            let Some(source) = (0..3).find(|&i| out_of(i).len() == 2) else {
                return CaseLabel::H;
            };
            let out = out_of(source);
            if out[0].head != out[1].head {
                return CaseLabel::J;
            }
            let middle = pointing.iter().find(|p| p.from != source).expect("three relations");
            let sink = &segs[middle.to];
            let s_side = orientation(sink.p, sink.q, out[0].tail, tol);
            let m_side = orientation(sink.p, sink.q, middle.tail, tol);
            if s_side == m_side {
                CaseLabel::F
            } else {
                CaseLabel::G
            }
        }
    }
}

/// Factor applied to the base tolerance when probing for fragility.
const FRAGILITY_WIDENING: f64 = 1e3;

pub fn classify_segments<T: Scalar>(segs: &[Segment<T>; 3], tol: &Tolerance<T>) -> Classification<T> {
    let a = analyze(segs, tol);
    let wide = analyze(segs, &Tolerance::new(tol.base() * T::lit(FRAGILITY_WIDENING)));
    let exact = analyze(segs, &Tolerance::new(T::zero()));
    let fragile = segs.iter().any(|s| s.is_degenerate())
        || [&wide, &exact].iter().any(|o| o.label != a.label || o.relations != a.relations);
    Classification { label: a.label, group: a.label.group(), relations: a.relations, pointing: a.pointing, fragile }
}

/// Classifies a matching of exactly three pairs.
pub fn classify_three<T: Scalar>(ps: &PointSet<T>, m: &Matching<T>, tol: &Tolerance<T>) -> Result<Classification<T>> {
    let segs: [Segment<T>; 3] = m
        .segments(ps)
        .try_into()
        .map_err(|v: Vec<_>| Error::InvalidMatching(format!("expected 3 pairs, got {}", v.len())))?;
    Ok(classify_segments(&segs, tol))
}

fn crossing_point<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>) -> Option<Point<T>> {
    line_intersection(s1, s2)
}

fn foot_within<T: Scalar>(seg: &Segment<T>, x: Point<T>) -> Option<Point<T>> {
    seg.foot_of(x).and_then(|(f, t)| (t >= T::zero() && t <= T::one()).then_some(f))
}

/// Direct common point of the three disks for labels A to G, verified against
/// every disk before it is returned.
pub fn witness_easy_case<T: Scalar>(
    segs: &[Segment<T>; 3],
    class: &Classification<T>,
    tol: &Tolerance<T>,
) -> Result<Point<T>> {
    if !class.label.has_direct_witness() {
        return Err(Error::ConstructionFailure(format!("label {} has no direct construction", class.label)));
    }
    let crossing: Vec<(usize, usize)> = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .filter(|&(i, j)| class.relations[i][j] == Some(PairRelation::Cross))
        .collect();
    let pointing = &class.pointing;
    let mut candidates: Vec<Point<T>> = Vec::new();
    match class.label {
        CaseLabel::A => {
            let v = |i: usize, j: usize| crossing_point(&segs[i], &segs[j]);
            let mut feet = Vec::new();
            for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                if let (Some(apex), Some(s), Some(t)) = (v(i, j), v(i, k), v(j, k)) {
                    let side = Segment::new(s, t);
                    if let Some(f) = foot_within(&side, apex) {
                        feet.push((side.length(), f));
                    }
                }
            }
            feet.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
            candidates.extend(feet.into_iter().map(|(_, f)| f));
            candidates.extend(v(0, 1));
        }
        CaseLabel::B => {
            let (y, z) = crossing[0];
            let x = 3 - y - z;
            let to = |t: usize| pointing.iter().find(|p| p.from == x && p.to == t).map(|p| p.head);
            candidates.extend(to(z));
            candidates.extend(to(y));
            if let Some(u) = crossing_point(&segs[y], &segs[z]) {
                candidates.extend(foot_within(&segs[x], u));
            }
        }
        CaseLabel::C => {
            let p = pointing[0];
            let x = 3 - p.from - p.to;
            candidates.push(p.head);
            let u = crossing_point(&segs[x], &segs[p.from]);
            let w = crossing_point(&segs[x], &segs[p.to]);
            candidates.extend(u);
            candidates.extend(w);
            if let Some(w) = w {
                candidates.extend(foot_within(&segs[p.from], w));
            }
            if let Some(u) = u {
                candidates.extend(foot_within(&segs[p.to], u));
            }
        }
        CaseLabel::D => {
            let (y, z) = crossing[0];
            let head = |s: usize| pointing.iter().find(|p| p.from == s).map(|p| p.head);
            let (hy, hz) = (head(y), head(z));
            candidates.extend(hz);
            candidates.extend(hy);
            if let (Some(hy), Some(hz), Some(u)) = (hy, hz, crossing_point(&segs[y], &segs[z])) {
                candidates.extend(foot_within(&Segment::new(hz, hy), u));
            }
        }
        _ => {
            let source = (0..3).find(|&i| pointing.iter().filter(|p| p.from == i).count() == 2);
            if let Some(s) = source {
                candidates.extend(pointing.iter().find(|p| p.from == s).map(|p| p.head));
            }
        }
    }
    let disks = segs.map(|s| s.diametral_disk());
    candidates
        .into_iter()
        .find(|&c| disks.iter().all(|d| in_disk(c, d, tol).is_inside()))
        .ok_or_else(|| Error::ConstructionFailure(format!("no candidate lies in all three disks for label {}", class.label)))
}
