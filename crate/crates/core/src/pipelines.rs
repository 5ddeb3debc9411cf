//! Exhaustive rule drivers: the degeneracy kernel (Rules 1–3) and the
//! closure kernel (Rules 4–9 and 1).

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::FuzzyGraph;
use crate::rules::{self, PairScan, Rule2Scan, RuleOutcome, TraceEntry};

/// Which kernel to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Degeneracy,
    Closure,
}

impl Mode {
    pub fn from_name(s: &str) -> Option<Mode> {
        match s {
            "degeneracy" => Some(Mode::Degeneracy),
            "closure" => Some(Mode::Closure),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoReason {
    NegativeBudget,
    SizeBoundExceeded,
}

impl NoReason {
    pub fn name(self) -> &'static str {
        match self {
            NoReason::NegativeBudget => "negative_budget",
            NoReason::SizeBoundExceeded => "size_bound_exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// An equivalent instance. Vertex ids are those of the input; deleted
    /// vertices are tombstoned.
    Reduced { graph: FuzzyGraph, k: i64 },
    No(NoReason),
}

/// Parameters of the input instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InitialParams {
    pub n: usize,
    pub k: i64,
    pub d: usize,
    pub c: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelTrace {
    pub entries: Vec<TraceEntry>,
    pub initial: InitialParams,
    pub final_n: usize,
    pub final_k: i64,
    /// `counts[r]` is the number of applications of rule `r` (index 0 unused).
    pub counts: [usize; 10],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelResult {
    pub verdict: Verdict,
    pub bound_used: u64,
    pub trace: KernelTrace,
}

impl KernelResult {
    pub fn is_no(&self) -> bool {
        matches!(self.verdict, Verdict::No(_))
    }
}

fn saturate(x: u128) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

/// `30 k³ max(d, 1)`, or 0 for negative `k`.
pub fn degeneracy_bound(k: i64, d: usize) -> u64 {
    if k < 0 {
        return 0;
    }
    let k = k as u128;
    let k3 = k.saturating_mul(k).saturating_mul(k);
    saturate(30u128.saturating_mul(k3).saturating_mul(d.max(1) as u128))
}

/// `30 k² max(c, 1)²`, or 0 for negative `k`.
pub fn closure_bound(k: i64, c: usize) -> u64 {
    if k < 0 {
        return 0;
    }
    let (k, c) = (k as u128, c.max(1) as u128);
    saturate(30u128.saturating_mul(k.saturating_mul(k)).saturating_mul(c.saturating_mul(c)))
}

/// Lexicographic progress measure: vertices, budget, fuzzy pairs.
fn measure(g: &FuzzyGraph, k: i64) -> (usize, i64, usize) {
    (g.vertex_count(), k, g.fuzzy_pair_count())
}

struct Run<'a> {
    g: FuzzyGraph,
    k: i64,
    entries: Vec<TraceEntry>,
    counts: [usize; 10],
    observer: &'a mut dyn FnMut(&FuzzyGraph, i64, &TraceEntry),
}

impl Run<'_> {
    /// Records an applied rule. Returns false when nothing was applied.
    fn record(&mut self, out: RuleOutcome, before: (usize, i64, usize)) -> Result<bool> {
        let Some(entry) = out.entry else {
            return Ok(false);
        };
        let after = measure(&self.g, self.k);
        let progress = after.0 < before.0
            || (after.0 == before.0 && after.1 < before.1)
            || (after.0 == before.0 && after.1 == before.1 && after.2 < before.2);
        if !progress {
            return Err(Error::Internal(format!(
                "rule {} did not decrease (n, k, fuzzy pairs): {before:?} -> {after:?}",
                entry.rule
            )));
        }
        (self.observer)(&self.g, self.k, &entry);
        self.counts[entry.rule as usize] += 1;
        self.entries.push(entry);
        Ok(true)
    }

    fn finish(self, initial: InitialParams, bound: u64) -> KernelResult {
        let trace = KernelTrace {
            entries: self.entries,
            initial,
            final_n: self.g.vertex_count(),
            final_k: self.k,
            counts: self.counts,
        };
        let verdict = if self.k < 0 {
            Verdict::No(NoReason::NegativeBudget)
        } else if self.g.vertex_count() as u64 > bound {
            Verdict::No(NoReason::SizeBoundExceeded)
        } else {
            Verdict::Reduced {
                graph: self.g,
                k: self.k,
            }
        };
        KernelResult {
            verdict,
            bound_used: bound,
            trace,
        }
    }
}

fn initial_params(g: &FuzzyGraph, k: i64) -> InitialParams {
    InitialParams {
        n: g.vertex_count(),
        k,
        d: g.fuzzy_degeneracy_ordering().d,
        c: g.fuzzy_closure().c,
    }
}

pub fn degeneracy_kernelize(g: FuzzyGraph, k: i64) -> Result<KernelResult> {
    degeneracy_kernelize_with(g, k, &mut |_, _, _| {})
}

/// Applies Rules 1, 2, 3 (in that priority, restarting after every
/// application) until none applies or `k` drops below zero. `observer` sees
/// the graph after every application.
pub fn degeneracy_kernelize_with(
    g: FuzzyGraph,
    k: i64,
    observer: &mut dyn FnMut(&FuzzyGraph, i64, &TraceEntry),
) -> Result<KernelResult> {
    let initial = initial_params(&g, k);
    let bound = degeneracy_bound(k, initial.d);
    let mut run = Run {
        g,
        k,
        entries: Vec::new(),
        counts: [0; 10],
        observer,
    };
    let mut scan = Rule2Scan::default();
    while run.k >= 0 {
        let before = measure(&run.g, run.k);
        let mut out = rules::apply_rule1(&mut run.g, &mut run.k)?;
        if !out.applied {
            out = scan.apply(&mut run.g, &mut run.k);
        }
        if !out.applied {
            let sigma = run.g.fuzzy_degeneracy_ordering();
            out = rules::apply_rule3(&mut run.g, &mut run.k, &sigma)?;
        }
        if let Some(entry) = &out.entry {
            scan.observe(&run.g, entry);
        }
        if !run.record(out, before)? {
            break;
        }
    }
    Ok(run.finish(initial, bound))
}

pub fn closure_kernelize(g: FuzzyGraph, k: i64) -> Result<KernelResult> {
    closure_kernelize_with(g, k, &mut |_, _, _| {})
}

/// Applies the first applicable of Rules 4, 5, 6, 7, then 8, then 9, then 1,
/// restarting after every application, with `c` fixed to the closure of the
/// input.
pub fn closure_kernelize_with(
    g: FuzzyGraph,
    k: i64,
    observer: &mut dyn FnMut(&FuzzyGraph, i64, &TraceEntry),
) -> Result<KernelResult> {
    let initial = initial_params(&g, k);
    let bound = closure_bound(k, initial.c);
    let c = initial.c;
    let mut run = Run {
        g,
        k,
        entries: Vec::new(),
        counts: [0; 10],
        observer,
    };
    let mut scans = [PairScan::new(4), PairScan::new(5), PairScan::new(6)];
    'outer: while run.k >= 0 {
        let before = measure(&run.g, run.k);
        for rule in [4, 5, 6, 7, 8, 9, 1] {
            let out = match rule {
                4..=6 => scans[rule as usize - 4].apply(&mut run.g, &mut run.k, c),
                _ => rules::apply_rule(rule, &mut run.g, &mut run.k, c)?,
            };
            if let Some(entry) = &out.entry {
                scans.iter_mut().for_each(|s| s.observe(entry));
            }
            if run.record(out, before)? {
                continue 'outer;
            }
        }
        break;
    }
    Ok(run.finish(initial, bound))
}

pub fn kernelize(mode: Mode, g: FuzzyGraph, k: i64) -> Result<KernelResult> {
    match mode {
        Mode::Degeneracy => degeneracy_kernelize(g, k),
        Mode::Closure => closure_kernelize(g, k),
    }
}

/// Size and parameter summary of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceStats {
    pub n: usize,
    pub k: i64,
    pub real: usize,
    pub fuzzy: usize,
    pub non: usize,
    pub real_weight: u64,
    pub non_weight: u64,
    pub d: usize,
    pub c: usize,
    pub degeneracy_bound: u64,
    pub closure_bound: u64,
}

pub fn instance_stats(g: &FuzzyGraph, k: i64) -> InstanceStats {
    let s = g.pair_summary();
    let d = g.fuzzy_degeneracy_ordering().d;
    let c = g.fuzzy_closure().c;
    InstanceStats {
        n: g.vertex_count(),
        k,
        real: s.real,
        fuzzy: s.fuzzy,
        non: s.non,
        real_weight: s.real_weight,
        non_weight: s.non_weight,
        d,
        c,
        degeneracy_bound: degeneracy_bound(k, d),
        closure_bound: closure_bound(k, c),
    }
}

impl fmt::Display for InstanceStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        writeln!(f, "k {}", self.k)?;
        writeln!(f, "real {}", self.real)?;
        writeln!(f, "fuzzy {}", self.fuzzy)?;
        writeln!(f, "non {}", self.non)?;
        writeln!(f, "real_weight {}", self.real_weight)?;
        writeln!(f, "non_weight {}", self.non_weight)?;
        writeln!(f, "degeneracy {}", self.d)?;
        writeln!(f, "closure {}", self.c)?;
        writeln!(f, "degeneracy_bound {}", self.degeneracy_bound)?;
        writeln!(f, "closure_bound {}", self.closure_bound)
    }
}
