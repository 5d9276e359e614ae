//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mmp_core::campaign::{run_campaign, CampaignConfig, CampaignReport};
use mmp_core::constructions::{
    equilateral_tightness, many_pair_counterexample, many_pair_epsilon_limit, three_pair_counterexample,
    three_pair_epsilon_limit,
};
use mmp_core::geom::EllipseRegion;
use mmp_core::lemmas::{run_lemma, LemmaConfig, LemmaId, LemmaTrialReport};
use mmp_core::matching::{cost, for_each_matching, max_sum_bruteforce};
use mmp_core::piercing::{pierce_ellipses, stretch_report, triple_intersect_exact, StretchBound, Verdict};
use mmp_core::{Point, Tolerance};

const CAMPAIGN_SEED: u64 = 20_240_601;
const LEMMA_SEED: u64 = 7;
const TRIALS: u64 = 500;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"))
}

fn tol() -> Tolerance<f64> {
    Tolerance::default()
}

fn three_pair_reproduction() -> Outcome {
    let start = Instant::now();
    let eps = 0.02;
    let t = tol();
    let inst = three_pair_counterexample(eps, &t).map_err(|e| e.to_string())?;
    let ps = inst.points();
    let oracle = max_sum_bruteforce(ps, &t).map_err(|e| e.to_string())?;
    check(oracle.evaluated == 6, format!("evaluated {} matchings", oracle.evaluated))?;
    check(oracle.is_unique, "optimum not unique")?;
    check(oracle.matching.pairs() == [(0, 3), (1, 4), (2, 5)], "optimum is not {(a,a'),(b,b'),(c,c')}")?;
    let lower = 7.0 - 3f64.sqrt() - 2.0 * eps;
    check(oracle.matching.cost() >= lower, format!("cost {} below {lower}", oracle.matching.cost()))?;
    // c' with a or b, the other two on the short sides
    let alt = 2.0 + 10f64.sqrt();
    for pairs in [[(0, 5), (1, 3), (2, 4)], [(0, 4), (1, 5), (2, 3)]] {
        let c = cost(ps, &pairs).map_err(|e| e.to_string())?;
        check((c - alt).abs() < 1e-9, format!("alternative {pairs:?} costs {c}, expected {alt}"))?;
    }
    let disks = inst.claimed_optimum.disks(ps);
    let r = triple_intersect_exact(&disks[0], &disks[1], &disks[2], &t);
    check(r.verdict == Verdict::Empty, format!("verdict {:?}", r.verdict))?;
    check(r.depth > 10.0 * t.pierce(3.0), format!("depth {} not clear of the band", r.depth))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("cost {:.6}, depth {:.3e}", oracle.matching.cost(), r.depth))
}

fn threshold_fidelity() -> Outcome {
    let t = tol();
    let limit: f64 = three_pair_epsilon_limit();
    check((limit - (5.0 - 10f64.sqrt() - 3f64.sqrt()) / 4.0).abs() == 0.0, "three-pair limit formula")?;
    check(three_pair_counterexample(0.026, &t).is_ok(), "0.026 rejected")?;
    check(three_pair_counterexample(0.027, &t).is_err(), "0.027 accepted")?;
    for n in 4..=8 {
        let lim: f64 = many_pair_epsilon_limit(n);
        check((lim - 1.0 / (10.0 * (2 * n - 1) as f64)).abs() == 0.0, format!("limit formula n={n}"))?;
        for eps in [lim, lim * 1.01, 0.5] {
            check(many_pair_counterexample(n, eps, &t).is_err(), format!("n={n} accepted eps={eps}"))?;
        }
        check(many_pair_counterexample(n, 0.9 * lim, &t).is_ok(), format!("n={n} rejected 0.9*limit"))?;
    }
    Ok("0.026 accepted, 0.027 rejected, n=4..8 limits enforced".into())
}

fn many_pair_reproduction() -> Outcome {
    let start = Instant::now();
    let t = tol();
    for n in 4..=6 {
        let eps = 0.9 * many_pair_epsilon_limit::<f64>(n);
        let inst = many_pair_counterexample(n, eps, &t).map_err(|e| e.to_string())?;
        let ps = inst.points();
        let m1_lower = 7.0 - 3f64.sqrt() - 2.0 * eps;
        let m2_upper = 10f64.sqrt() + 2.0 + eps + 2.0 * (n as f64 - 2.0) * eps;
        check(m1_lower > m2_upper + 1e-9, format!("n={n}: bounds {m1_lower} vs {m2_upper}"))?;
        check(inst.claimed_optimum.cost() >= m1_lower, format!("n={n}: optimum below the M1 bound"))?;
        let [ia, ib, _, _, _, ic2] = inst.base;
        // every matching pairing c' with a or b stays under the M2 bound
        let mut worst_m2 = f64::NEG_INFINITY;
        for_each_matching(ps, |pairs, c| {
            if pairs.iter().any(|&(x, y)| (x == ic2 || y == ic2) && [x, y].iter().any(|&v| v == ia || v == ib)) {
                worst_m2 = worst_m2.max(c);
            }
        })
        .map_err(|e| e.to_string())?;
        check(worst_m2 <= m2_upper + 1e-9, format!("n={n}: an M2 matching costs {worst_m2} > {m2_upper}"))?;
        let disks = inst.claimed_optimum.disks(ps);
        let [i, j, k] = inst.empty_triple;
        check(
            triple_intersect_exact(&disks[i], &disks[j], &disks[k], &t).verdict == Verdict::Empty,
            format!("n={n}: named triple not empty"),
        )?;
        if n == 4 {
            let best = max_sum_bruteforce(ps, &t).map_err(|e| e.to_string())?.matching;
            let partner = best.partner(ic2).expect("perfect");
            check(partner != ia && partner != ib, "n=4: optimum matches c' to a or b")?;
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok("n=4,5,6 bounds separate, named triples empty".into())
}

fn uncolored_campaigns() -> Vec<CampaignReport> {
    (2..=6).map(|n| run_campaign(&CampaignConfig::new(n, TRIALS, CAMPAIGN_SEED, false)).expect("campaign")).collect()
}

fn colored_campaigns() -> Vec<CampaignReport> {
    (2..=5).map(|n| run_campaign(&CampaignConfig::new(n, TRIALS, CAMPAIGN_SEED, true)).expect("campaign")).collect()
}

fn main_theorem(reports: &[CampaignReport], elapsed: Duration) -> Outcome {
    for r in reports {
        let n = r.config.n;
        check(r.common_point_violations == 0, format!("n={n}: {} empty intersections", r.common_point_violations))?;
        check(r.sqrt2_violations == 0, format!("n={n}: sqrt2 stretch violated"))?;
        check(
            r.max_witness_ratio <= 2f64.sqrt() + 1e-9,
            format!("n={n}: max ratio {}", r.max_witness_ratio),
        )?;
    }
    within(elapsed, Duration::from_secs(120))?;
    let worst = reports.iter().map(|r| r.max_witness_ratio).fold(0.0, f64::max);
    Ok(format!("5 x {TRIALS} instances, 0 violations, max witness ratio {worst:.6}"))
}

fn pairwise_overlap(reports: &[CampaignReport]) -> Outcome {
    for r in reports {
        let n = r.config.n;
        check(r.pairwise_disjoint == 0, format!("n={n}: {} disjoint disk pairs", r.pairwise_disjoint))?;
        check(r.pair_sum_violations == 0, format!("n={n}: pair-sum inequality violated"))?;
    }
    let empty: u64 = reports.iter().map(|r| r.empty_intersections).sum();
    Ok(format!("4 x {TRIALS} colored instances, 0 disjoint pairs ({empty} empty triple intersections)"))
}

fn stretch_ladder(all: &[&CampaignReport]) -> Outcome {
    for r in all {
        let n = r.config.n;
        check(r.sqrt5_violations == 0, format!("n={n} colored={}: sqrt5 at midpoint violated", r.config.colored))?;
        check(r.five_halves_violations == 0, format!("n={n}: 2.5 at midpoint violated"))?;
    }
    let t = tol();
    let ps = equilateral_tightness(1.0).map_err(|e| e.to_string())?;
    let m = max_sum_bruteforce(&ps, &t).map_err(|e| e.to_string())?.matching;
    let pairs = m.point_pairs(&ps);
    let centroid = Point::new(0.5, 3f64.sqrt() / 6.0);
    let bound = StretchBound::TwoOverSqrt3.value::<f64>();
    let s = stretch_report(&pairs, centroid, bound, &t);
    for r in &s.ratios {
        let r = r.ok_or("zero-length pair in the optimum")?;
        check((r - bound).abs() < 1e-9, format!("centroid ratio {r}"))?;
    }
    let shrunk: Vec<EllipseRegion<f64>> =
        pairs.iter().map(|&(a, b)| EllipseRegion::with_stretch(a, b, 0.99 * bound)).collect();
    let verdict = pierce_ellipses(&shrunk, &t).verdict;
    check(verdict == Verdict::Empty, format!("ellipses at 0.99 * 2/sqrt3: {verdict:?}"))?;
    Ok("midpoint bounds hold on all campaign instances, equilateral tight at 2/sqrt3".into())
}

fn lemma_suite() -> (Outcome, Vec<LemmaTrialReport>) {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for id in LemmaId::ALL {
        let cfg = LemmaConfig::new(id.default_trials(), LEMMA_SEED);
        match run_lemma(id, &cfg) {
            Ok(r) => {
                if !r.is_clean() || r.hypothesis_matches != cfg.trials {
                    failures.push(format!("{id}: {} violations, {} certificate failures", r.violations, r.certificate_failures));
                }
                reports.push(r);
            }
            Err(e) => failures.push(format!("{id}: {e}")),
        }
        match run_lemma(id, &cfg.negative()) {
            Ok(r) if r.violations >= 1 => reports.push(r),
            Ok(_) => failures.push(format!("{id}: negative control found no violation")),
            Err(e) => failures.push(format!("{id} negative: {e}")),
        }
    }
    if let Err(e) = within(start.elapsed(), Duration::from_secs(300)) {
        failures.push(e);
    }
    let outcome = if failures.is_empty() {
        Ok(format!("{} checkers clean, every negative control caught", LemmaId::ALL.len()))
    } else {
        Err(failures.join("; "))
    };
    (outcome, reports)
}

fn classifier_dichotomy(n3: &CampaignReport) -> Outcome {
    check(n3.config.n == 3 && !n3.config.colored, "needs the three-pair uncolored campaign")?;
    check(n3.unlabeled == 0, format!("{} non-fragile instances unlabeled", n3.unlabeled))?;
    check(n3.direct_witness_failures == 0, format!("{} direct witness failures", n3.direct_witness_failures))?;
    check(n3.hard_case_failures == 0, format!("{} hard-case instances without a common point", n3.hard_case_failures))?;
    Ok(format!("labels {:?}, {} fragile", n3.labels, n3.fragile))
}

fn segment_distance(reports: &[CampaignReport]) -> Outcome {
    for r in reports {
        check(
            r.segment_distance_violations == 0,
            format!("n={}: {} witnesses too far from a segment", r.config.n, r.segment_distance_violations),
        )?;
    }
    Ok("witness within half a pair length of every segment".into())
}

fn determinism(unc: &[CampaignReport], col: &[CampaignReport], lemmas: &[LemmaTrialReport]) -> Outcome {
    let json = |v: &dyn erased::Json| v.json();
    let again_unc = uncolored_campaigns();
    let again_col = colored_campaigns();
    check(json(&unc.to_vec()) == json(&again_unc), "uncolored campaign JSON differs")?;
    check(json(&col.to_vec()) == json(&again_col), "colored campaign JSON differs")?;
    for r in lemmas {
        let mut cfg = LemmaConfig::new(r.trials, r.seed);
        if r.negative_control {
            cfg = cfg.negative();
        }
        let again = run_lemma(r.lemma, &cfg).map_err(|e| e.to_string())?;
        check(json(r) == json(&again), format!("{} report JSON differs", r.lemma))?;
    }
    Ok("campaign and lemma reports reproduce byte for byte".into())
}

mod erased {
    pub trait Json {
        fn json(&self) -> String;
    }

    impl<T: serde::Serialize> Json for T {
        fn json(&self) -> String {
            serde_json::to_string(self).expect("serializable")
        }
    }
}

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut report = |k: usize, name: &str, outcome: Outcome| {
        match outcome {
            Ok(detail) => println!("criterion {k:>2}: PASS  {name}: {detail}"),
            Err(why) => {
                all_pass = false;
                println!("criterion {k:>2}: FAIL  {name}: {why}");
            }
        }
    };

    report(1, "three-pair counterexample", three_pair_reproduction());
    report(2, "threshold fidelity", threshold_fidelity());
    report(3, "n-pair counterexample", many_pair_reproduction());

    let start = Instant::now();
    let unc = uncolored_campaigns();
    let unc_elapsed = start.elapsed();
    report(4, "common point of uncolored disks", main_theorem(&unc, unc_elapsed));
    let col = colored_campaigns();
    report(5, "pairwise overlap of colored disks", pairwise_overlap(&col));
    let both: Vec<&CampaignReport> = unc.iter().chain(col.iter()).collect();
    report(6, "stretch ladder", stretch_ladder(&both));
    let (lemma_outcome, lemma_reports) = lemma_suite();
    report(7, "lemma suite", lemma_outcome);
    report(8, "classifier dichotomy", classifier_dichotomy(&unc[1]));
    report(9, "segment distance", segment_distance(&unc));
    report(10, "determinism", determinism(&unc, &col, &lemma_reports));

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
