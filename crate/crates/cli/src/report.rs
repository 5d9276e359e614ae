//! The `match` pipeline and its JSON report.

use std::time::Instant;

use mmp_core::classify::{classify_three, CaseGroup, CaseLabel};
use mmp_core::matching::{max_sum_bruteforce, max_sum_heuristic, BRUTE_FORCE_CAP};
use mmp_core::piercing::{
    midpoint_shortest_edge, pairwise_intersect, pierce_disks, pierce_ellipses, stretch_report, PairOverlap,
    StretchBound, Verdict,
};
use mmp_core::{EllipseRegion, Matching, Point, PointSet, Tolerance};
use serde::{Deserialize, Serialize};

use crate::document::PointSetDocument;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingSummary {
    pub pairs: Vec<(usize, usize)>,
    pub cost: f64,
    /// `"exhaustive"` or `"local-search"`.
    pub method: String,
    /// Only known for exhaustive search.
    pub unique: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiercingSummary {
    pub verdict: Verdict,
    pub witness: Option<Point>,
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseVerdict {
    pub pairs: (usize, usize),
    pub overlap: PairOverlap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchCheck {
    pub bound: StretchBound,
    pub value: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchAt {
    pub center: Point,
    pub max_ratio: f64,
    pub checks: Vec<StretchCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipseCheck {
    pub bound: StretchBound,
    pub factor: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub label: CaseLabel,
    pub group: CaseGroup,
    pub fragile: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: Option<String>,
    pub input_sha256: String,
    pub colored: bool,
    pub n: usize,
    pub tolerance: f64,
    pub matching: MatchingSummary,
    pub piercing: PiercingSummary,
    pub pairwise: Vec<PairwiseVerdict>,
    /// Stretch at the witness; absent when the disks have no common point.
    pub witness_stretch: Option<StretchAt>,
    pub midpoint_stretch: StretchAt,
    pub ellipse: EllipseCheck,
    pub case: Option<CaseSummary>,
    /// Common point for uncolored sets, pairwise overlap for colored ones.
    pub invariant_holds: bool,
    pub timing_ms: f64,
}

fn stretch_at(pairs: &[(Point, Point)], center: Point, tol: &Tolerance<f64>) -> StretchAt {
    let checks: Vec<StretchCheck> = StretchBound::ALL
        .into_iter()
        .map(|bound| {
            let value = bound.value();
            StretchCheck { bound, value, holds: stretch_report(pairs, center, value, tol).holds }
        })
        .collect();
    let max_ratio = stretch_report(pairs, center, StretchBound::FiveHalves.value(), tol).max_ratio;
    StretchAt { center, max_ratio, checks }
}

/// Computes the max-sum matching (exhaustive unless `heuristic`) and reports
/// on it.
pub fn run_match(
    doc: &PointSetDocument,
    ps: &PointSet,
    heuristic: bool,
    ellipse_bound: StretchBound,
    tol: &Tolerance<f64>,
) -> mmp_core::Result<RunReport> {
    let start = Instant::now();
    let (m, method, unique) = if heuristic {
        (max_sum_heuristic(ps, tol)?.matching, "local-search", None)
    } else {
        if ps.len() > BRUTE_FORCE_CAP {
            return Err(mmp_core::Error::SizeLimit { size: ps.len(), cap: BRUTE_FORCE_CAP });
        }
        let r = max_sum_bruteforce(ps, tol)?;
        (r.matching, "exhaustive", Some(r.is_unique))
    };
    let mut report = report_for(doc, ps, &m, tol, ellipse_bound)?;
    report.matching.method = method.into();
    report.matching.unique = unique;
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Report for a given matching; `timing_ms` is left at zero.
pub fn report_for(
    doc: &PointSetDocument,
    ps: &PointSet,
    m: &Matching,
    tol: &Tolerance<f64>,
    ellipse_bound: StretchBound,
) -> mmp_core::Result<RunReport> {
    let pairs = m.point_pairs(ps);
    let disks = m.disks(ps);
    let pierce = pierce_disks(&disks, tol);

    let mut pairwise = Vec::new();
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            pairwise.push(PairwiseVerdict { pairs: (i, j), overlap: pairwise_intersect(&disks[i], &disks[j], tol) });
        }
    }

    let factor = ellipse_bound.value();
    let ellipses: Vec<EllipseRegion> = pairs.iter().map(|&(a, b)| EllipseRegion::with_stretch(a, b, factor)).collect();
    let ellipse = EllipseCheck { bound: ellipse_bound, factor, verdict: pierce_ellipses(&ellipses, tol).verdict };

    let case = if m.len() == 3 && !ps.is_colored() {
        let c = classify_three(ps, m, tol)?;
        Some(CaseSummary { label: c.label, group: c.group, fragile: c.fragile })
    } else {
        None
    };

    let invariant_holds = if ps.is_colored() {
        pairwise.iter().all(|p| p.overlap != PairOverlap::Disjoint)
    } else {
        pierce.verdict.has_common_point()
    };

    Ok(RunReport {
        name: doc.name.clone(),
        input_sha256: doc.digest(),
        colored: ps.is_colored(),
        n: m.len(),
        tolerance: tol.base(),
        matching: MatchingSummary { pairs: m.pairs().to_vec(), cost: m.cost(), method: "given".into(), unique: None },
        witness_stretch: pierce.witness.map(|w| stretch_at(&pairs, w, tol)),
        midpoint_stretch: stretch_at(&pairs, midpoint_shortest_edge(&pairs), tol),
        piercing: PiercingSummary { verdict: pierce.verdict, witness: pierce.witness, depth: pierce.depth },
        pairwise,
        ellipse,
        case,
        invariant_holds,
        timing_ms: 0.0,
    })
}
