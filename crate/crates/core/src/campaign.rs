//! Random-instance campaigns: exhaustive optimum, piercing, stretch and (for
//! three uncolored pairs) case labels, aggregated over seeded trials.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_segments, witness_easy_case, CaseLabel};
use crate::error::{Error, Result};
use crate::geom::{Point, Segment};
use crate::matching::{max_sum_bruteforce, PointSet, BRUTE_FORCE_CAP};
use crate::piercing::{
    midpoint_shortest_edge, pairwise_intersect, pierce_disks, stretch_report, PairOverlap, StretchBound, Verdict,
};
use crate::scalar::Tolerance;

type P = Point<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    /// Number of pairs.
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub colored: bool,
    pub tolerance: f64,
}

impl CampaignConfig {
    pub fn new(n: usize, trials: u64, seed: u64, colored: bool) -> Self {
        Self { n, trials, seed, colored, tolerance: Tolerance::<f64>::default().base() }
    }
}

/// Fixed-width histogram over `[lo, hi]`; values outside land in the end bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Self { lo, hi, counts: vec![0; bins] }
    }

    pub fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        let t = ((x - self.lo) / (self.hi - self.lo) * bins as f64).floor();
        let i = if t.is_nan() || t < 0.0 { 0 } else { (t as usize).min(bins - 1) };
        self.counts[i] += 1;
    }
}

const HISTOGRAM_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub verdicts: BTreeMap<String, u64>,
    /// Uncolored instances whose disks have no common point.
    pub common_point_violations: u64,
    /// Matched disk pairs that are disjoint.
    pub pairwise_disjoint: u64,
    /// Pairs of pairs violating `|(a+a') - (b+b')| <= |a-a'| + |b-b'|`.
    pub pair_sum_violations: u64,
    /// Colored instances with an empty common intersection (allowed).
    pub empty_intersections: u64,
    /// Largest stretch at the witness over instances with a witness.
    pub max_witness_ratio: f64,
    pub sqrt2_violations: u64,
    /// Witness farther than half a pair length from its segment.
    pub segment_distance_violations: u64,
    pub max_midpoint_ratio: f64,
    pub sqrt5_violations: u64,
    pub five_halves_violations: u64,
    pub witness_ratio_histogram: Histogram,
    pub midpoint_ratio_histogram: Histogram,
    pub labels: BTreeMap<String, u64>,
    pub fragile: u64,
    /// Non-fragile three-pair instances without a label in A..J.
    pub unlabeled: u64,
    pub direct_witness_failures: u64,
    pub hard_case_failures: u64,
}

impl CampaignReport {
    /// Every guaranteed property held. Empty colored intersections are not
    /// failures.
    pub fn is_clean(&self) -> bool {
        self.common_point_violations == 0
            && self.pairwise_disjoint == 0
            && self.pair_sum_violations == 0
            && self.sqrt2_violations == 0
            && self.segment_distance_violations == 0
            && self.sqrt5_violations == 0
            && self.five_halves_violations == 0
            && self.unlabeled == 0
            && self.direct_witness_failures == 0
            && self.hard_case_failures == 0
    }
}

/// Per-trial findings.
#[derive(Debug, Clone, Default)]
struct Trial {
    verdict: Option<Verdict>,
    pairwise_disjoint: u64,
    pair_sum_violations: u64,
    witness_ratio: Option<f64>,
    sqrt2_ok: bool,
    segment_distance_ok: bool,
    midpoint_ratio: f64,
    sqrt5_ok: bool,
    five_halves_ok: bool,
    label: Option<CaseLabel>,
    fragile: bool,
    direct_witness_ok: bool,
    hard_case_ok: bool,
}

/// The point set of trial `trial`: `2n` points uniform on `[-1, 1]^2`, the
/// first `n` red when colored.
pub fn random_instance(cfg: &CampaignConfig, trial: u64) -> Result<PointSet<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial);
    let pts: Vec<P> =
        (0..2 * cfg.n).map(|_| P::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
    if cfg.colored {
        PointSet::colored(pts[..cfg.n].to_vec(), pts[cfg.n..].to_vec())
    } else {
        PointSet::uncolored(pts)
    }
}

fn run_trial(cfg: &CampaignConfig, trial: u64, tol: &Tolerance<f64>) -> Result<Trial> {
    let ps = random_instance(cfg, trial)?;
    let m = max_sum_bruteforce(&ps, tol)?.matching;
    let pairs = m.point_pairs(&ps);
    let disks = m.disks(&ps);
    let mut t = Trial { sqrt2_ok: true, segment_distance_ok: true, direct_witness_ok: true, hard_case_ok: true, ..Trial::default() };

    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            if pairwise_intersect(&disks[i], &disks[j], tol) == PairOverlap::Disjoint {
                t.pairwise_disjoint += 1;
            }
            let ((a, a2), (b, b2)) = (pairs[i], pairs[j]);
            let lhs = ((a + a2) - (b + b2)).norm();
            let rhs = a.distance(a2) + b.distance(b2);
            if lhs > rhs + tol.base() {
                t.pair_sum_violations += 1;
            }
        }
    }

    let pierce = pierce_disks(&disks, tol);
    t.verdict = Some(pierce.verdict);
    if let Some(w) = pierce.witness {
        let s = stretch_report(&pairs, w, StretchBound::Sqrt2.value(), tol);
        t.witness_ratio = Some(s.max_ratio);
        t.sqrt2_ok = s.holds;
        t.segment_distance_ok = s.segment_distance_holds;
    }

    let mid = midpoint_shortest_edge(&pairs);
    let s5 = stretch_report(&pairs, mid, StretchBound::Sqrt5.value(), tol);
    t.midpoint_ratio = s5.max_ratio;
    t.sqrt5_ok = s5.holds;
    t.five_halves_ok = stretch_report(&pairs, mid, StretchBound::FiveHalves.value(), tol).holds;

    if cfg.n == 3 && !cfg.colored {
        let segs: [Segment<f64>; 3] = [0, 1, 2].map(|i| Segment::new(pairs[i].0, pairs[i].1));
        let class = classify_segments(&segs, tol);
        t.label = Some(class.label);
        t.fragile = class.fragile;
        if !class.fragile {
            if class.label.has_direct_witness() {
                t.direct_witness_ok = witness_easy_case(&segs, &class, tol).is_ok();
            } else if class.label.is_hard() {
                t.hard_case_ok = pierce.verdict.has_common_point();
            }
        }
    }
    Ok(t)
}

/// Runs `cfg.trials` independent trials; the aggregate depends only on the
/// configuration.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    if cfg.n == 0 || 2 * cfg.n > BRUTE_FORCE_CAP {
        return Err(Error::SizeLimit { size: 2 * cfg.n, cap: BRUTE_FORCE_CAP });
    }
    let tol = Tolerance::new(cfg.tolerance);
    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i, &tol))
        .collect::<Result<_>>()?;

    let mut r = CampaignReport {
        config: *cfg,
        verdicts: BTreeMap::new(),
        common_point_violations: 0,
        pairwise_disjoint: 0,
        pair_sum_violations: 0,
        empty_intersections: 0,
        max_witness_ratio: 0.0,
        sqrt2_violations: 0,
        segment_distance_violations: 0,
        max_midpoint_ratio: 0.0,
        sqrt5_violations: 0,
        five_halves_violations: 0,
        witness_ratio_histogram: Histogram::new(1.0, StretchBound::Sqrt2.value(), HISTOGRAM_BINS),
        midpoint_ratio_histogram: Histogram::new(1.0, StretchBound::FiveHalves.value(), HISTOGRAM_BINS),
        labels: BTreeMap::new(),
        fragile: 0,
        unlabeled: 0,
        direct_witness_failures: 0,
        hard_case_failures: 0,
    };
    for t in trials {
        let verdict = t.verdict.expect("every trial pierces");
        *r.verdicts.entry(format!("{verdict:?}")).or_insert(0) += 1;
        if verdict == Verdict::Empty {
            if cfg.colored {
                r.empty_intersections += 1;
            } else {
                r.common_point_violations += 1;
            }
        }
        r.pairwise_disjoint += t.pairwise_disjoint;
        r.pair_sum_violations += t.pair_sum_violations;
        if let Some(w) = t.witness_ratio {
            r.max_witness_ratio = r.max_witness_ratio.max(w);
            r.witness_ratio_histogram.add(w);
        }
        if !cfg.colored {
            r.sqrt2_violations += u64::from(!t.sqrt2_ok);
            r.segment_distance_violations += u64::from(!t.segment_distance_ok);
        }
        r.max_midpoint_ratio = r.max_midpoint_ratio.max(t.midpoint_ratio);
        r.midpoint_ratio_histogram.add(t.midpoint_ratio);
        r.sqrt5_violations += u64::from(!t.sqrt5_ok);
        r.five_halves_violations += u64::from(!t.five_halves_ok);
        if let Some(label) = t.label {
            *r.labels.entry(label.to_string()).or_insert(0) += 1;
            if t.fragile {
                r.fragile += 1;
            } else if label == CaseLabel::NotMaxSumCompatible {
                r.unlabeled += 1;
            }
        }
        r.direct_witness_failures += u64::from(!t.direct_witness_ok);
        r.hard_case_failures += u64::from(!t.hard_case_ok);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_clamps() {
        let mut h = Histogram::new(1.0, 2.0, 4);
        for x in [0.5, 1.0, 1.3, 1.99, 2.0, 7.0, f64::NAN] {
            h.add(x);
        }
        assert_eq!(h.counts, vec![3, 1, 0, 3]);
    }

    #[test]
    fn instances_are_reproducible() {
        let cfg = CampaignConfig::new(3, 10, 5, false);
        assert_eq!(random_instance(&cfg, 4).unwrap(), random_instance(&cfg, 4).unwrap());
        assert_ne!(random_instance(&cfg, 4).unwrap(), random_instance(&cfg, 5).unwrap());
        let colored = CampaignConfig::new(3, 10, 5, true);
        assert!(random_instance(&colored, 0).unwrap().is_colored());
    }

    #[test]
    fn size_cap() {
        let cfg = CampaignConfig::new(9, 1, 0, false);
        assert_eq!(run_campaign(&cfg), Err(Error::SizeLimit { size: 18, cap: 16 }));
    }

    #[test]
    fn small_campaign_is_clean() {
        let r = run_campaign(&CampaignConfig::new(3, 60, 1, false)).unwrap();
        assert!(r.is_clean(), "{r:?}");
        assert_eq!(r.labels.values().sum::<u64>(), 60);
        assert!(r.max_witness_ratio <= 2f64.sqrt() + 1e-9);
    }
}
