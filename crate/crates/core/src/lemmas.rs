//! Randomized checks of the exchange and distance inequalities behind the
//! three-pair argument.
//!
//! Each checker draws instances of its hypothesis from a seed-derived stream
//! (one ChaCha substream per trial), evaluates the conclusion, and reports
//! the signed margin: positive on the correct side. A margin below
//! `-band` is a violation, `|margin| <= band` is logged as a near equality.
//!
//! Sampling is uniform on `[-1, 1]^2` where a direct filter is practical.
//! Configurations around a right-angle point `z` are drawn as diameters of
//! circles through `z`: center direction `phi`, radius `rho` and diameter
//! angle `psi in (0, pi)` measured from the center direction, which places
//! `z` to the left of the oriented diameter. The three-segment samplers draw
//! their parameters from windows where the hypothesis is not rare and then
//! filter on the exact hypothesis.
//!
//! Negative controls drop part of the hypothesis and must show violations.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    hyperbola_side, orientation, points_to, scale_of, segments_cross, strictly_inside_triangle, HyperbolaRegion,
    HyperbolaSide, Orientation, Point, Segment,
};
use crate::matching::{max_sum_bruteforce, Matching, PointSet};
use crate::scalar::Tolerance;

type P = Point<f64>;
type Tol = Tolerance<f64>;

/// Acceptance rate under which a sampler is reported as starved.
pub const MIN_ACCEPTANCE: f64 = 1e-4;
/// Attempts allowed for a single trial before the run is declared starved.
pub const ATTEMPTS_PER_TRIAL: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    /// A disk of radius at most `|pq|/2` meeting `D_pq` has its center within
    /// stretch `sqrt 5` of `p, q`.
    Sqrt5Disk,
    /// Exchange inequality for right angles at `z` when one segment points to
    /// the other.
    RightAngleExchange,
    /// Same inequality for four points in convex position, with `q` to the
    /// left of the line `z -> p` as in the non-convex case.
    ConvexRightAngleExchange,
    /// Cyclic pointing around a right-angle point: rotating partners improves.
    RotationCyclic,
    /// Pointing chain with the end segments crossing: rotating improves.
    RotationChainCrossing,
    /// One segment pointing with both ends: the matching is not optimal.
    RotationDoublePointing,
    /// The partner of an optimally matched point lies on the far side of the
    /// hyperbola through the other partner.
    HyperbolaSide,
    /// Extending a matched segment beyond its endpoint keeps optimality.
    Extension,
    ExtensionColored,
    /// Point on a circle, chord to the end, ray from the center: exchange
    /// inequality.
    CircleRay,
}

impl LemmaId {
    pub const ALL: [Self; 10] = [
        Self::Sqrt5Disk,
        Self::RightAngleExchange,
        Self::ConvexRightAngleExchange,
        Self::RotationCyclic,
        Self::RotationChainCrossing,
        Self::RotationDoublePointing,
        Self::HyperbolaSide,
        Self::Extension,
        Self::ExtensionColored,
        Self::CircleRay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sqrt5Disk => "sqrt5-disk",
            Self::RightAngleExchange => "right-angle-exchange",
            Self::ConvexRightAngleExchange => "convex-right-angle-exchange",
            Self::RotationCyclic => "rotation-cyclic",
            Self::RotationChainCrossing => "rotation-chain-crossing",
            Self::RotationDoublePointing => "rotation-double-pointing",
            Self::HyperbolaSide => "hyperbola-side",
            Self::Extension => "extension",
            Self::ExtensionColored => "extension-colored",
            Self::CircleRay => "circle-ray",
        }
    }

    /// Checkers that call the exhaustive matching oracle per trial.
    pub fn uses_oracle(self) -> bool {
        matches!(
            self,
            Self::RotationCyclic
                | Self::RotationChainCrossing
                | Self::RotationDoublePointing
                | Self::HyperbolaSide
                | Self::Extension
                | Self::ExtensionColored
        )
    }

    /// Default number of accepted trials.
    pub fn default_trials(self) -> u64 {
        if self.uses_oracle() {
            1_000
        } else {
            10_000
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| Error::OutOfRange {
            name: "lemma",
            value: f64::NAN,
            constraint: format!(
                "one of {}",
                Self::ALL.iter().map(|id| id.name()).collect::<Vec<_>>().join(", ")
            ),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaConfig {
    pub trials: u64,
    pub seed: u64,
    pub negative_control: bool,
    pub tolerance: f64,
}

impl LemmaConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self { trials, seed, negative_control: false, tolerance: Tol::default().base() }
    }

    pub fn negative(mut self) -> Self {
        self.negative_control = true;
        self
    }

    pub fn with_tolerance(mut self, tol: &Tol) -> Self {
        self.tolerance = tol.base();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaTrialReport {
    pub lemma: LemmaId,
    pub seed: u64,
    pub negative_control: bool,
    pub trials: u64,
    /// Samples drawn, including rejected ones.
    pub attempted: u64,
    pub hypothesis_matches: u64,
    pub violations: u64,
    pub near_equalities: u64,
    /// Smallest margin over accepted trials.
    pub worst_margin: f64,
    pub branches: BTreeMap<String, u64>,
    /// Proof-internal facts that failed to hold on an accepted trial.
    pub certificate_failures: u64,
}

impl LemmaTrialReport {
    pub fn acceptance_rate(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.hypothesis_matches as f64 / self.attempted as f64
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations == 0 && self.certificate_failures == 0
    }
}

/// Outcome of one accepted trial.
#[derive(Debug, Clone, Default)]
struct Outcome {
    margin: f64,
    band: f64,
    /// Equality is a success for non-strict conclusions and is not logged.
    strict: bool,
    /// Set when the conclusion is decided by something other than the band
    /// rule on `margin`.
    violated: Option<bool>,
    branch: Option<&'static str>,
    certificate_ok: bool,
}

impl Outcome {
    fn new(margin: f64, band: f64) -> Self {
        Self { margin, band, strict: true, violated: None, branch: None, certificate_ok: true }
    }

    fn non_strict(mut self) -> Self {
        self.strict = false;
        self
    }

    fn violated(mut self, v: bool) -> Self {
        self.violated = Some(v);
        self
    }

    fn is_violation(&self) -> bool {
        self.violated.unwrap_or(self.margin < -self.band)
    }

    fn branch(mut self, b: &'static str) -> Self {
        self.branch = Some(b);
        self
    }

    fn certificate(mut self, ok: bool) -> Self {
        self.certificate_ok &= ok;
        self
    }
}

/// Per-trial generator: `Ok(None)` is a rejected sample.
type Sampler = fn(&mut ChaCha8Rng, &Tol, bool) -> Result<Option<Outcome>>;

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trials(id: LemmaId, cfg: &LemmaConfig, sampler: Sampler) -> Result<LemmaTrialReport> {
    if cfg.trials == 0 {
        return Err(Error::OutOfRange { name: "trials", value: 0.0, constraint: "trials >= 1".into() });
    }
    let tol = Tol::new(cfg.tolerance);
    let per_trial: Vec<Result<(u64, Option<Outcome>)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            for attempt in 1..=ATTEMPTS_PER_TRIAL {
                if let Some(o) = sampler(&mut rng, &tol, cfg.negative_control)? {
                    return Ok((attempt, Some(o)));
                }
            }
            Ok((ATTEMPTS_PER_TRIAL, None))
        })
        .collect();

    let mut report = LemmaTrialReport {
        lemma: id,
        seed: cfg.seed,
        negative_control: cfg.negative_control,
        trials: cfg.trials,
        attempted: 0,
        hypothesis_matches: 0,
        violations: 0,
        near_equalities: 0,
        worst_margin: f64::INFINITY,
        branches: BTreeMap::new(),
        certificate_failures: 0,
    };
    let mut starved = false;
    for r in per_trial {
        let (attempts, outcome) = r?;
        report.attempted += attempts;
        let Some(o) = outcome else {
            starved = true;
            continue;
        };
        report.hypothesis_matches += 1;
        if o.is_violation() {
            report.violations += 1;
        } else if o.strict && o.margin.abs() <= o.band {
            report.near_equalities += 1;
        }
        report.worst_margin = report.worst_margin.min(o.margin);
        if let Some(b) = o.branch {
            *report.branches.entry(b.to_string()).or_insert(0) += 1;
        }
        if !o.certificate_ok {
            report.certificate_failures += 1;
        }
    }
    if starved || report.acceptance_rate() < MIN_ACCEPTANCE {
        return Err(Error::SamplerStarvation { accepted: report.hypothesis_matches, attempted: report.attempted });
    }
    Ok(report)
}

/// Runs the checker for `id`.
pub fn run_lemma(id: LemmaId, cfg: &LemmaConfig) -> Result<LemmaTrialReport> {
    let sampler: Sampler = match id {
        LemmaId::Sqrt5Disk => sqrt5_disk,
        LemmaId::RightAngleExchange => right_angle_exchange,
        LemmaId::ConvexRightAngleExchange => convex_right_angle_exchange,
        LemmaId::RotationCyclic => rotation_cyclic,
        LemmaId::RotationChainCrossing => rotation_chain_crossing,
        LemmaId::RotationDoublePointing => rotation_double_pointing,
        LemmaId::HyperbolaSide => hyperbola_side_trial,
        LemmaId::Extension => extension_uncolored,
        LemmaId::ExtensionColored => extension_colored,
        LemmaId::CircleRay => circle_ray,
    };
    run_trials(id, cfg, sampler)
}

pub fn check_sqrt5_disk(trials: u64, seed: u64) -> Result<LemmaTrialReport> {
    run_lemma(LemmaId::Sqrt5Disk, &LemmaConfig::new(trials, seed))
}

pub fn check_right_angle_exchange(trials: u64, seed: u64) -> Result<LemmaTrialReport> {
    run_lemma(LemmaId::RightAngleExchange, &LemmaConfig::new(trials, seed))
}

pub fn check_convex_right_angle_exchange(trials: u64, seed: u64) -> Result<LemmaTrialReport> {
    run_lemma(LemmaId::ConvexRightAngleExchange, &LemmaConfig::new(trials, seed))
}

/// Runs one of the three rotation checkers.
pub fn check_rotation(id: LemmaId, trials: u64, seed: u64) -> Result<LemmaTrialReport> {
    match id {
        LemmaId::RotationCyclic | LemmaId::RotationChainCrossing | LemmaId::RotationDoublePointing => {
            run_lemma(id, &LemmaConfig::new(trials, seed))
        }
        other => Err(Error::OutOfRange {
            name: "lemma",
            value: f64::NAN,
            constraint: format!("{other} is not a rotation checker"),
        }),
    }
}

pub fn check_hyperbola_side(trials: u64, seed: u64) -> Result<LemmaTrialReport> {
    run_lemma(LemmaId::HyperbolaSide, &LemmaConfig::new(trials, seed))
}

pub fn check_extension(trials: u64, seed: u64, colored: bool) -> Result<LemmaTrialReport> {
    let id = if colored { LemmaId::ExtensionColored } else { LemmaId::Extension };
    run_lemma(id, &LemmaConfig::new(trials, seed))
}

pub fn check_circle_ray(trials: u64, seed: u64) -> Result<LemmaTrialReport> {
    run_lemma(LemmaId::CircleRay, &LemmaConfig::new(trials, seed))
}

fn uniform_point(rng: &mut ChaCha8Rng) -> P {
    P::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..=hi.ln()).exp()
}

/// `z + k * rot90(u - z)`: the partner of `u` seen from `z` at a right angle,
/// with `z` to the left of the oriented segment `u -> partner`.
fn right_angle_partner(z: P, u: P, k: f64) -> P {
    z + (u - z).perp() * k
}

fn band(tol: &Tol, pts: &[P]) -> f64 {
    tol.pierce(scale_of(pts))
}

fn is_left(a: P, b: P, x: P, tol: &Tol) -> bool {
    orientation(a, b, x, tol) == Orientation::Left
}

fn is_right(a: P, b: P, x: P, tol: &Tol) -> bool {
    orientation(a, b, x, tol) == Orientation::Right
}

fn points(p: P, p2: P, q: P, q2: P, tol: &Tol) -> bool {
    points_to(&Segment::new(p, p2), &Segment::new(q, q2), tol)
}

fn convex_position(pts: [P; 4], tol: &Tol) -> bool {
    (0..4).all(|i| {
        let o: Vec<P> = (0..4).filter(|&j| j != i).map(|j| pts[j]).collect();
        orientation(o[0], o[1], o[2], tol) != Orientation::Collinear
            && !strictly_inside_triangle(pts[i], o[0], o[1], o[2], tol)
    })
}

fn sqrt5_disk(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    let p = uniform_point(rng);
    let q = uniform_point(rng);
    let r_pq = p.distance(q) / 2.0;
    if r_pq == 0.0 {
        return Ok(None);
    }
    let r_max = if negative { 3.0 * r_pq } else { r_pq };
    let r = rng.gen_range(0.0..=r_max);
    // center uniform in the disk of radius r + r_pq about the midpoint
    let reach = r + r_pq;
    let rad = reach * rng.gen_range(0.0f64..=1.0).sqrt();
    let ang = rng.gen_range(0.0..2.0 * PI);
    let o = p.midpoint(q) + P::new(ang.cos(), ang.sin()) * rad;
    let margin = 5f64.sqrt() * p.distance(q) - (p.distance(o) + q.distance(o));
    Ok(Some(Outcome::new(margin, band(tol, &[p, q, o])).non_strict()))
}

/// Draws `p, p', q, q', z` with right angles at `z` and `z` left of both
/// oriented segments.
fn right_angle_configuration(rng: &mut ChaCha8Rng) -> [P; 5] {
    let z = uniform_point(rng);
    let p = uniform_point(rng);
    let q = uniform_point(rng);
    let p2 = right_angle_partner(z, p, log_uniform(rng, 0.2, 5.0));
    let q2 = right_angle_partner(z, q, log_uniform(rng, 0.2, 5.0));
    [p, p2, q, q2, z]
}

/// `(|p - q'| - |q - q'|) - (|p - z| - |q - z|)`.
fn exchange_margin(p: P, q: P, q2: P, z: P) -> f64 {
    (p.distance(q2) - q.distance(q2)) - (p.distance(z) - q.distance(z))
}

fn right_angle_exchange(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    let [p, p2, q, q2, z] = right_angle_configuration(rng);
    if !is_right(p, p2, q, tol) {
        return Ok(None);
    }
    if !negative && !(points(p, p2, q, q2, tol) && is_left(z, p, q, tol)) {
        return Ok(None);
    }
    let margin = exchange_margin(p, q, q2, z);
    let crossing = is_right(z, p2, q, tol);
    let cert = segments_cross(&Segment::new(p, q2), &Segment::new(q, z), tol).crosses() == crossing;
    let out = Outcome::new(margin, band(tol, &[p, p2, q, q2, z]))
        .branch(if crossing { "crossing" } else { "reflected" })
        .certificate(negative || cert);
    Ok(Some(out))
}

fn convex_right_angle_exchange(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    let [p, p2, q, q2, z] = right_angle_configuration(rng);
    if !(is_right(p, p2, q, tol) && is_left(p, p2, q2, tol) && convex_position([p, p2, q, q2], tol)) {
        return Ok(None);
    }
    // Without `q` left of the line z -> p the convex statement has
    // counterexamples; the negative control drops exactly that condition.
    if !negative && !is_left(z, p, q, tol) {
        return Ok(None);
    }
    let margin = exchange_margin(p, q, q2, z);
    let cert = segments_cross(&Segment::new(p, q2), &Segment::new(q, z), tol).crosses();
    Ok(Some(Outcome::new(margin, band(tol, &[p, p2, q, q2, z])).certificate(negative || cert)))
}

/// Parameter windows for a three-segment configuration around `z`; angles of
/// the second and third center directions are relative to the first.
struct Windows {
    phi_b: (f64, f64),
    phi_c: (f64, f64),
    psi: [(f64, f64); 3],
    rho_b: (f64, f64),
    rho_c: (f64, f64),
}

const CYCLIC: Windows = Windows {
    phi_b: (2.0 * PI / 3.0 - 0.8, 2.0 * PI / 3.0 + 0.8),
    phi_c: (-2.0 * PI / 3.0 - 0.8, -2.0 * PI / 3.0 + 0.8),
    psi: [(0.0, PI), (0.0, PI), (0.0, PI)],
    rho_b: (0.4, 2.5),
    rho_c: (0.4, 2.5),
};

const CHAIN_CROSSING: Windows = Windows {
    phi_b: (1.8, PI),
    phi_c: (-1.8, -0.1),
    psi: [(2.0, PI), (2.0, PI), (2.0, PI)],
    rho_b: (0.3, 5.0),
    rho_c: (0.3, 5.0),
};

const DOUBLE_POINTING: Windows = Windows {
    phi_b: (0.3, 2.0),
    phi_c: (-PI, -1.9),
    psi: [(1.0, 2.8), (1.7, PI), (1.7, PI)],
    rho_b: (0.08, 0.9),
    rho_c: (0.15, 2.2),
};

/// Seven points `[a, a', b, b', c, c', z]`; each segment is a diameter of a
/// circle through `z`, oriented so that `z` is on its left.
fn rotation_configuration(rng: &mut ChaCha8Rng, w: &Windows) -> [P; 7] {
    let z = uniform_point(rng);
    let phi_a = rng.gen_range(-PI..PI);
    let rho_a = log_uniform(rng, 0.2, 1.5);
    let phis = [phi_a, phi_a + rng.gen_range(w.phi_b.0..=w.phi_b.1), phi_a + rng.gen_range(w.phi_c.0..=w.phi_c.1)];
    let rhos = [rho_a, rho_a * log_uniform(rng, w.rho_b.0, w.rho_b.1), rho_a * log_uniform(rng, w.rho_c.0, w.rho_c.1)];
    let mut out = [z; 7];
    for i in 0..3 {
        let psi = rng.gen_range(w.psi[i].0..w.psi[i].1).max(1e-6);
        let m = z + P::new(phis[i].cos(), phis[i].sin()) * rhos[i];
        let d = P::new((phis[i] + psi).cos(), (phis[i] + psi).sin()) * rhos[i];
        out[2 * i] = m - d;
        out[2 * i + 1] = m + d;
    }
    out
}

/// `(|a - b'| + |b - c'| + |c - a'|) - (|a - a'| + |b - b'| + |c - c'|)`.
fn rotation_gain(pts: &[P; 7]) -> f64 {
    let [a, a2, b, b2, c, c2, _] = *pts;
    (a.distance(b2) + b.distance(c2) + c.distance(a2)) - (a.distance(a2) + b.distance(b2) + c.distance(c2))
}

/// Gap between the optimum and the matching `{(a,a'), (b,b'), (c,c')}`.
fn oracle_gap(pts: &[P; 7], tol: &Tol) -> Result<f64> {
    let ps = PointSet::uncolored(pts[..6].to_vec())?;
    let identity = Matching::new(&ps, &[(0, 1), (2, 3), (4, 5)])?;
    let best = max_sum_bruteforce(&ps, tol)?;
    Ok(best.matching.cost() - identity.cost())
}

/// The matching must be strictly beaten by the optimum and, when
/// `require_gain`, by the rotated matching itself.
fn rotation_outcome(pts: &[P; 7], tol: &Tol, require_gain: bool) -> Result<Outcome> {
    let b = band(tol, pts);
    let gap = oracle_gap(pts, tol)?;
    let identity_optimal = gap <= tol.cost(pts[..6].iter().map(|p| p.max_abs()).sum());
    let gain = rotation_gain(pts);
    let margin = if require_gain { gain.min(gap) } else { gap };
    let violated = identity_optimal || (require_gain && gain < -b);
    Ok(Outcome::new(margin, b).violated(violated))
}

fn rotation_cyclic(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    let pts = rotation_configuration(rng, &CYCLIC);
    let [a, a2, b, b2, c, c2, _] = pts;
    if !is_left(a, b, c, tol) {
        return Ok(None);
    }
    if !negative && !(points(a, a2, b, b2, tol) && points(b, b2, c, c2, tol) && points(c, c2, a, a2, tol)) {
        return Ok(None);
    }
    rotation_outcome(&pts, tol, true).map(Some)
}

fn rotation_chain_crossing(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    let pts = rotation_configuration(rng, &CHAIN_CROSSING);
    let [a, a2, b, b2, c, c2, _] = pts;
    if !is_left(a, b, c, tol) {
        return Ok(None);
    }
    let hypothesis = points(a, a2, b, b2, tol)
        && points(b, b2, c, c2, tol)
        && segments_cross(&Segment::new(a, a2), &Segment::new(c, c2), tol).crosses()
        && is_right(c, c2, a, tol)
        && is_left(c, c2, a2, tol);
    if !negative && !hypothesis {
        return Ok(None);
    }
    rotation_outcome(&pts, tol, true).map(Some)
}

fn rotation_double_pointing(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    if negative {
        // no structure at all: the identity matching is optimal now and then
        let pts: [P; 7] = std::array::from_fn(|_| uniform_point(rng));
        return rotation_outcome(&pts, tol, false).map(Some);
    }
    let pts = rotation_configuration(rng, &DOUBLE_POINTING);
    let [a, a2, b, b2, c, c2, z] = pts;
    let none_right = [b, b2, c, c2, z].iter().all(|&x| !is_right(a, a2, x, tol));
    if !(none_right && points(b2, b, a, a2, tol) && points(b, b2, c, c2, tol) && points(c, c2, a, a2, tol)) {
        return Ok(None);
    }
    let mut out = rotation_outcome(&pts, tol, false)?;
    if strictly_inside_triangle(b, a, a2, z, tol) {
        let crosses = segments_cross(&Segment::new(b, z), &Segment::new(a, b2), tol).crosses();
        out = out.branch("b-in-triangle").certificate(crosses && rotation_gain(&pts) > 0.0);
    } else {
        // {(a,a'), (b,b')} itself is not optimal on its four points
        let pair = PointSet::uncolored(vec![a, a2, b, b2])?;
        let own = Matching::new(&pair, &[(0, 1), (2, 3)])?.cost();
        let best = max_sum_bruteforce(&pair, tol)?.matching.cost();
        out = out.branch("b-outside-triangle").certificate(best - own > tol.cost(own));
    }
    Ok(Some(out))
}

fn hyperbola_side_trial(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    let pts: Vec<P> = (0..4).map(|_| uniform_point(rng)).collect();
    let ps = PointSet::uncolored(pts.clone())?;
    let best = max_sum_bruteforce(&ps, tol)?;
    let mut pairs = best.matching.pairs().to_vec();
    if negative {
        // a suboptimal matching: re-pair across the optimal pairs
        let [(i, j), (k, l)] = [pairs[0], pairs[1]];
        pairs = vec![(i, k), (j, l)];
        let alt = Matching::new(&ps, &pairs)?;
        if best.matching.cost() - alt.cost() <= tol.cost(best.matching.cost()) {
            pairs = vec![(i, l), (j, k)];
        }
    }
    let first = rng.gen_range(0..2);
    let (mut a, mut a2) = pairs[first];
    let (mut b, mut b2) = pairs[1 - first];
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut a, &mut a2);
    }
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut b, &mut b2);
    }
    let (a, a2, b, b2) = (pts[a], pts[a2], pts[b], pts[b2]);
    let h = HyperbolaSide::new(a, b, b2);
    let margin = h.focal_difference(a2) - h.constant();
    let region = hyperbola_side(&h, a2, tol);
    let out = Outcome::new(margin, band(tol, &[a, a2, b, b2])).non_strict().branch(match region {
        HyperbolaRegion::OnArc => "on-arc",
        HyperbolaRegion::SideOfFocusB => "side-of-b",
        HyperbolaRegion::SideOfFocusA => "side-of-a",
    });
    Ok(Some(out))
}

fn extension(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool, colored: bool) -> Result<Option<Outcome>> {
    let pts: Vec<P> = (0..6).map(|_| uniform_point(rng)).collect();
    let ps = if colored { PointSet::colored(pts[..3].to_vec(), pts[3..].to_vec())? } else { PointSet::uncolored(pts)? };
    let best = max_sum_bruteforce(&ps, tol)?.matching;
    let (mut a1, mut b1) = best.pairs()[rng.gen_range(0..3)];
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut a1, &mut b1);
    }
    let lambda = if negative { rng.gen_range(0.05..0.95) } else { 1.0 + rng.gen_range(0.0..1.5f64).max(1e-3) };
    let c = ps.point(a1).lerp(ps.point(b1), lambda);
    let moved = ps.with_point(b1, c)?;
    let substituted = Matching::new(&moved, best.pairs())?;
    let oracle = max_sum_bruteforce(&moved, tol)?.matching;
    let margin = substituted.cost() - oracle.cost();
    Ok(Some(Outcome::new(margin, tol.cost(oracle.cost())).non_strict()))
}

fn extension_uncolored(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    extension(rng, tol, negative, false)
}

fn extension_colored(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    extension(rng, tol, negative, true)
}

fn circle_ray(rng: &mut ChaCha8Rng, tol: &Tol, negative: bool) -> Result<Option<Outcome>> {
    let p = uniform_point(rng);
    let p2 = uniform_point(rng);
    let r = p.distance(p2) / 2.0;
    if r == 0.0 {
        return Ok(None);
    }
    let o = p.midpoint(p2);
    // z on the half of the circle to the left of p -> p'
    let base = (p2.y - p.y).atan2(p2.x - p.x);
    let theta = base + rng.gen_range(0.0..PI).max(1e-9);
    let z = o + P::new(theta.cos(), theta.sin()) * r;
    let q = z.lerp(p2, rng.gen_range(0.0..1.0));
    let t = if negative { rng.gen_range(0.0..1.0) } else { 1.0 + rng.gen_range(0.0..3.0f64).max(1e-9) };
    let q2 = o.lerp(z, t);
    let margin = (p.distance(q) + p2.distance(q2)) - (p.distance(p2) + q.distance(q2));
    let branch = if p.distance(p2) >= q2.distance(p2) { "near-end" } else { "far-end" };
    Ok(Some(Outcome::new(margin, band(tol, &[p, p2, q, q2, z])).branch(branch)))
}
