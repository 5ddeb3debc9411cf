//! Oracle harness: checks rules and pipelines against the exact solver on
//! seeded random instances.
//!
//! Candidate `i` for rule `r` is drawn from a `ChaCha8Rng` seeded with the
//! run seed and stream `(r << 32) | i`. Candidates are evaluated in parallel
//! batches and consumed in index order, so reports do not depend on the
//! thread count.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{planted_clusters, GenSpec, Planted};
use crate::graph::{EdgeKind, FuzzyGraph, VertexId};
use crate::pipelines::{degeneracy_bound, closure_bound, kernelize, Mode, NoReason, Verdict};
use crate::rules::apply_rule;
use crate::solver::{exact_decide, SolverLimits};

const BATCH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Applicable instances wanted per rule (or instances per pipeline).
    pub samples: usize,
    pub seed: u64,
    /// Largest generated instance.
    pub max_n: usize,
    /// Largest generated budget.
    pub max_k: i64,
    /// Largest generated weight.
    pub max_weight: u32,
    /// Candidates tried per wanted sample before giving up.
    pub attempts_per_sample: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 200,
            seed: 7,
            max_n: 9,
            max_k: 4,
            max_weight: 3,
            attempts_per_sample: 400,
        }
    }
}

impl VerifyConfig {
    fn check(&self) -> Result<()> {
        if self.max_n < 3 || self.max_weight == 0 || self.max_k < 0 {
            return Err(Error::usage("verify needs max_n >= 3, max_weight >= 1 and max_k >= 0"));
        }
        Ok(())
    }

    fn limits(&self) -> SolverLimits {
        SolverLimits::with_max_n(self.max_n)
    }
}

fn candidate_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Evaluates candidates in parallel batches and keeps the first `wanted`
/// hits in index order. Returns the hits and the number of candidates used.
fn collect_hits<T: Send>(
    wanted: usize,
    max_candidates: usize,
    eval: impl Fn(u64) -> Result<Option<T>> + Sync,
) -> Result<(Vec<T>, usize)> {
    let mut hits = Vec::with_capacity(wanted);
    let mut next = 0usize;
    while hits.len() < wanted && next < max_candidates {
        let end = (next + BATCH).min(max_candidates);
        let batch: Vec<Result<Option<T>>> = (next..end).into_par_iter().map(|i| eval(i as u64)).collect();
        for (offset, r) in batch.into_iter().enumerate() {
            if let Some(hit) = r? {
                hits.push(hit);
                if hits.len() == wanted {
                    return Ok((hits, next + offset + 1));
                }
            }
        }
        next = end;
    }
    Ok((hits, next))
}

fn weight(rng: &mut ChaCha8Rng, max_weight: u32) -> u32 {
    rng.gen_range(1..=max_weight)
}

fn random_pair(rng: &mut ChaCha8Rng, p_real: f64, p_fuzzy: f64, max_weight: u32) -> (EdgeKind, u32) {
    let r: f64 = rng.gen();
    if r < p_real {
        (EdgeKind::Real, weight(rng, max_weight))
    } else if r < p_real + p_fuzzy {
        (EdgeKind::Fuzzy, 0)
    } else {
        (EdgeKind::Non, weight(rng, max_weight))
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, max_weight: u32) -> FuzzyGraph {
    let p_real = rng.gen_range(0.1..0.8);
    let p_fuzzy = rng.gen_range(0.0..(1.0 - p_real));
    let mut g = FuzzyGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let (kind, w) = random_pair(rng, p_real, p_fuzzy, max_weight);
            g.set_pair(u, v, kind, w).expect("fresh pair");
        }
    }
    g
}

/// Few real edges, mostly fuzzy pairs: conflicts sit on long real paths that
/// the local rules cannot settle.
fn sparse_graph(rng: &mut ChaCha8Rng, n: usize, max_weight: u32) -> FuzzyGraph {
    let p_real = rng.gen_range(0.15..0.4);
    let p_fuzzy = (1.0 - p_real) * rng.gen_range(0.5..0.9);
    let mut g = FuzzyGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let (kind, w) = random_pair(rng, p_real, p_fuzzy, max_weight);
            g.set_pair(u, v, kind, w).expect("fresh pair");
        }
    }
    g
}

/// Planted clusters with a few flips and some heavier pairs.
fn noisy_planted(rng: &mut ChaCha8Rng, n: usize, max_weight: u32) -> FuzzyGraph {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    let spec = GenSpec {
        planted: Some(Planted {
            cluster_sizes: sizes,
            budget: rng.gen_range(0..=3.min(n * (n - 1) / 2)),
        }),
        ..GenSpec::new(n, 0.0, rng.gen_range(0.0..0.5), 1, rng.gen())
    };
    let mut g = match planted_clusters(&spec) {
        Ok(p) => p.graph,
        Err(_) => return random_graph(rng, n, max_weight),
    };
    for u in 0..n {
        for v in u + 1..n {
            if g.kind(u, v) != EdgeKind::Fuzzy && rng.gen_bool(0.3) {
                let kind = g.kind(u, v);
                g.set_pair(u, v, kind, weight(rng, max_weight)).expect("live pair");
            }
        }
    }
    g
}

/// A real clique of twins (identical closed real neighborhoods) inside a
/// random graph.
fn twin_clique(rng: &mut ChaCha8Rng, n: usize, size: usize, max_weight: u32) -> FuzzyGraph {
    let mut g = random_graph(rng, n, max_weight);
    let mut ids: Vec<VertexId> = (0..n).collect();
    ids.shuffle(rng);
    let (clique, rest) = ids.split_at(size.min(n));
    for (i, &a) in clique.iter().enumerate() {
        for &b in &clique[i + 1..] {
            g.set_pair(a, b, EdgeKind::Real, weight(rng, max_weight)).expect("live pair");
        }
    }
    for &u in rest {
        let real = rng.gen_bool(0.3);
        for &a in clique {
            let (kind, w) = if real {
                (EdgeKind::Real, weight(rng, max_weight))
            } else if rng.gen_bool(0.4) {
                (EdgeKind::Fuzzy, 0)
            } else {
                (EdgeKind::Non, weight(rng, max_weight))
            };
            g.set_pair(u, a, kind, w).expect("live pair");
        }
    }
    g
}

/// A fuzzy clique `X` whose members are real exactly to a real clique `K`.
fn fuzzy_clique_over_real_clique(rng: &mut ChaCha8Rng, n: usize, max_weight: u32) -> FuzzyGraph {
    let mut g = random_graph(rng, n, max_weight);
    let mut ids: Vec<VertexId> = (0..n).collect();
    ids.shuffle(rng);
    let s = rng.gen_range(1..=(n - 2).min(3));
    let t = rng.gen_range(2..=n - s);
    let (kset, tail) = ids.split_at(s);
    let (xset, rest) = tail.split_at(t);
    for (i, &a) in kset.iter().enumerate() {
        for &b in &kset[i + 1..] {
            g.set_pair(a, b, EdgeKind::Real, weight(rng, max_weight)).expect("live pair");
        }
    }
    for (i, &x) in xset.iter().enumerate() {
        for &y in &xset[i + 1..] {
            g.set_pair(x, y, EdgeKind::Fuzzy, 0).expect("live pair");
        }
        for &a in kset {
            g.set_pair(x, a, EdgeKind::Real, weight(rng, max_weight)).expect("live pair");
        }
        for &u in rest {
            let (kind, w) = if rng.gen_bool(0.2) {
                (EdgeKind::Fuzzy, 0)
            } else {
                (EdgeKind::Non, weight(rng, max_weight))
            };
            g.set_pair(x, u, kind, w).expect("live pair");
        }
    }
    g
}

/// A random instance from a mix of shapes, biased towards ones that make
/// `rule` applicable. `rule = 0` draws from the plain mix.
pub fn shaped_instance(rng: &mut ChaCha8Rng, rule: u8, cfg: &VerifyConfig) -> (FuzzyGraph, i64) {
    let n = rng.gen_range(3..=cfg.max_n);
    let w = cfg.max_weight;
    let k_cap = match rule {
        3 => cfg.max_k.min(n as i64 - 3),
        8 | 9 => cfg.max_k.min(2),
        _ => cfg.max_k,
    };
    let k = rng.gen_range(0..=k_cap.max(0));
    let g = match (rule, rng.gen_range(0..5)) {
        (3, 0..=2) => {
            let size = rng.gen_range((k as usize + 3).min(n)..=n);
            twin_clique(rng, n, size, w)
        }
        (9, 0..=2) if n >= 4 => fuzzy_clique_over_real_clique(rng, n, w),
        (_, 0) => random_graph(rng, n, w),
        (_, 1) => noisy_planted(rng, n, w),
        (_, 2) => {
            let size = rng.gen_range(2..=n);
            twin_clique(rng, n, size, w)
        }
        (_, 3) => sparse_graph(rng, n, w),
        _ if n >= 4 => fuzzy_clique_over_real_clique(rng, n, w),
        _ => random_graph(rng, n, w),
    };
    (g, k)
}

/// Applies `rules` (with `c` recomputed each time) until none applies or
/// `k` turns negative.
fn preprocess(g: &mut FuzzyGraph, k: &mut i64, rules: &[u8]) -> Result<()> {
    'outer: while *k >= 0 {
        for &r in rules {
            let c = g.fuzzy_closure().c;
            if apply_rule(r, g, k, c)?.applied {
                continue 'outer;
            }
        }
        break;
    }
    Ok(())
}

/// Rules whose exhaustive application is assumed before the rule under test.
fn prerequisites(rule: u8) -> &'static [u8] {
    match rule {
        3 => &[1, 2],
        8 | 9 => &[4, 5, 6, 7],
        _ => &[],
    }
}

/// One instance on which a rule applied.
#[derive(Clone, Debug)]
pub struct RuleSample {
    /// The generated instance.
    pub input: (FuzzyGraph, i64),
    /// The instance the rule was applied to (after prerequisites).
    pub before: (FuzzyGraph, i64),
    pub after: (FuzzyGraph, i64),
    pub before_yes: bool,
    pub after_yes: bool,
}

impl RuleSample {
    pub fn agrees(&self) -> bool {
        self.before_yes == self.after_yes
    }
}

#[derive(Clone, Debug)]
pub struct RuleReport {
    pub rule: u8,
    pub wanted: usize,
    pub candidates: usize,
    pub samples: Vec<RuleSample>,
}

impl RuleReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &RuleSample> {
        self.samples.iter().filter(|s| !s.agrees())
    }

    pub fn passed(&self) -> bool {
        self.samples.len() >= self.wanted && self.mismatches().next().is_none()
    }
}

fn rule_candidate(rule: u8, cfg: &VerifyConfig, index: u64) -> Result<Option<RuleSample>> {
    let mut rng = candidate_rng(cfg.seed, (u64::from(rule) << 32) | index);
    let (g, k) = shaped_instance(&mut rng, rule, cfg);
    let (mut pre, mut kp) = (g.clone(), k);
    preprocess(&mut pre, &mut kp, prerequisites(rule))?;
    if kp < 0 {
        return Ok(None);
    }
    let (mut post, mut ka) = (pre.clone(), kp);
    let c = pre.fuzzy_closure().c;
    if !apply_rule(rule, &mut post, &mut ka, c)?.applied {
        return Ok(None);
    }
    let limits = cfg.limits();
    let before_yes = exact_decide(&pre, kp, limits)?;
    let after_yes = exact_decide(&post, ka, limits)?;
    Ok(Some(RuleSample {
        input: (g, k),
        before: (pre, kp),
        after: (post, ka),
        before_yes,
        after_yes,
    }))
}

/// Checks one rule on `cfg.samples` instances where it applies.
pub fn check_rule(rule: u8, cfg: &VerifyConfig) -> Result<RuleReport> {
    cfg.check()?;
    if !(1..=9).contains(&rule) {
        return Err(Error::usage(format!("no rule {rule}; rules are numbered 1 to 9")));
    }
    let max = cfg.samples.saturating_mul(cfg.attempts_per_sample);
    let (samples, candidates) = collect_hits(cfg.samples, max, |i| rule_candidate(rule, cfg, i))?;
    Ok(RuleReport {
        rule,
        wanted: cfg.samples,
        candidates,
        samples,
    })
}

pub fn check_rules(cfg: &VerifyConfig) -> Result<Vec<RuleReport>> {
    (1..=9).map(|r| check_rule(r, cfg)).collect()
}

/// One instance run through a pipeline.
#[derive(Clone, Debug)]
pub struct PipelineSample {
    pub input: (FuzzyGraph, i64),
    pub input_yes: bool,
    /// `None` for a No verdict.
    pub output_yes: Option<bool>,
    pub no_reason: Option<NoReason>,
    pub output_n: usize,
    pub bound: u64,
}

impl PipelineSample {
    pub fn agrees(&self) -> bool {
        self.input_yes == self.output_yes.unwrap_or(false)
    }

    /// On yes-instances the output respects the size bound and the size
    /// check never rejects.
    pub fn within_bound(&self) -> bool {
        !self.input_yes
            || (self.no_reason != Some(NoReason::SizeBoundExceeded) && self.output_n as u64 <= self.bound)
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub mode: Mode,
    pub samples: Vec<PipelineSample>,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(|s| s.agrees() && s.within_bound())
    }
}

pub fn run_pipeline_sample(mode: Mode, g: FuzzyGraph, k: i64, limits: SolverLimits) -> Result<PipelineSample> {
    let input_yes = exact_decide(&g, k, limits)?;
    let result = kernelize(mode, g.clone(), k)?;
    let params = result.trace.initial;
    let bound = match mode {
        Mode::Degeneracy => degeneracy_bound(k, params.d),
        Mode::Closure => closure_bound(k, params.c),
    };
    let (output_yes, no_reason, output_n) = match &result.verdict {
        Verdict::Reduced { graph, k } => (Some(exact_decide(graph, *k, limits)?), None, graph.vertex_count()),
        Verdict::No(reason) => (None, Some(*reason), result.trace.final_n),
    };
    Ok(PipelineSample {
        input: (g, k),
        input_yes,
        output_yes,
        no_reason,
        output_n,
        bound,
    })
}

/// Runs a pipeline on `cfg.samples` instances and compares answers.
pub fn check_pipeline(mode: Mode, cfg: &VerifyConfig) -> Result<PipelineReport> {
    cfg.check()?;
    let stream = match mode {
        Mode::Degeneracy => 10,
        Mode::Closure => 11,
    };
    let limits = cfg.limits();
    let (samples, _) = collect_hits(cfg.samples, cfg.samples, |i| {
        let mut rng = candidate_rng(cfg.seed, (stream << 32) | i);
        let (g, k) = shaped_instance(&mut rng, 0, cfg);
        run_pipeline_sample(mode, g, k, limits).map(Some)
    })?;
    Ok(PipelineReport { mode, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(samples: usize) -> VerifyConfig {
        VerifyConfig {
            samples,
            max_n: 7,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn every_rule_finds_applicable_instances() {
        for rule in 1..=9 {
            let report = check_rule(rule, &small(15)).unwrap();
            assert!(report.passed(), "rule {rule}: {} samples", report.samples.len());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = check_rule(2, &small(20)).unwrap();
        let b = check_rule(2, &small(20)).unwrap();
        assert_eq!(a.candidates, b.candidates);
        let graphs = |r: &RuleReport| r.samples.iter().map(|s| s.input.clone()).collect::<Vec<_>>();
        assert_eq!(graphs(&a), graphs(&b));
    }

    #[test]
    fn pipelines_agree_on_small_instances() {
        for mode in [Mode::Degeneracy, Mode::Closure] {
            let cfg = VerifyConfig {
                max_k: 3,
                ..small(30)
            };
            let report = check_pipeline(mode, &cfg).unwrap();
            assert_eq!(report.samples.len(), 30);
            assert!(report.passed());
        }
    }

    #[test]
    fn bad_config_is_usage_error() {
        let cfg = VerifyConfig {
            max_n: 2,
            ..VerifyConfig::default()
        };
        assert!(matches!(check_rule(1, &cfg), Err(Error::Usage(_))));
        assert!(matches!(check_rule(10, &VerifyConfig::default()), Err(Error::Usage(_))));
    }
}
