//! The nine reduction rules.
//!
//! Every `apply_ruleN` scans its candidates in ascending id order, rewrites
//! the first hit and reports the rewrite as a [`TraceEntry`]. When nothing
//! applies the graph and `k` are left untouched. Kind changes out of a fuzzy
//! pair, and the Non→Real / Real→Non conversions, always produce weight 1.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, FuzzyGraph, VertexId};
use crate::structure::DegeneracyOrdering;

/// One primitive mutation inside a rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceOp {
    /// `{u, v}` changed from `before` to `after` (kind, weight).
    Set {
        u: VertexId,
        v: VertexId,
        before: (EdgeKind, u32),
        after: (EdgeKind, u32),
    },
    Delete(VertexId),
}

/// A single rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: u8,
    pub ops: Vec<TraceOp>,
    pub k_before: i64,
    pub k_after: i64,
}

impl TraceEntry {
    /// Replays the entry, checking that the recorded pre-state matches.
    pub fn replay(&self, g: &mut FuzzyGraph, k: &mut i64) -> Result<()> {
        if *k != self.k_before {
            return Err(Error::Invariant(format!(
                "rule {} expects k = {}, found {}",
                self.rule, self.k_before, k
            )));
        }
        for op in &self.ops {
            match *op {
                TraceOp::Set { u, v, before, after } => {
                    let found = g.classify(u, v)?;
                    if found != before {
                        return Err(Error::Invariant(format!(
                            "rule {}: pair ({u}, {v}) is {:?}, trace expects {:?}",
                            self.rule, found, before
                        )));
                    }
                    g.set_pair(u, v, after.0, after.1)?;
                }
                TraceOp::Delete(v) => g.delete_vertex(v)?,
            }
        }
        *k = self.k_after;
        Ok(())
    }

    /// Vertices removed by this application.
    pub fn deleted(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ops.iter().filter_map(|op| match op {
            TraceOp::Delete(v) => Some(*v),
            _ => None,
        })
    }
}

/// Replays a whole trace over a copy of its input instance.
pub fn replay(g: &mut FuzzyGraph, k: &mut i64, entries: &[TraceEntry]) -> Result<()> {
    entries.iter().try_for_each(|e| e.replay(g, k))
}

/// Result of trying one rule once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleOutcome {
    pub applied: bool,
    pub entry: Option<TraceEntry>,
}

impl RuleOutcome {
    fn skipped() -> Self {
        RuleOutcome::default()
    }
}

/// Collects the ops of one application while performing them.
struct Edit<'a> {
    g: &'a mut FuzzyGraph,
    ops: Vec<TraceOp>,
}

impl<'a> Edit<'a> {
    fn new(g: &'a mut FuzzyGraph) -> Self {
        Edit { g, ops: Vec::new() }
    }

    fn set(&mut self, u: VertexId, v: VertexId, kind: EdgeKind, weight: u32) {
        let before = (self.g.kind(u, v), self.g.weight(u, v));
        self.g
            .set_pair(u, v, kind, weight)
            .expect("rules only write valid pairs of live vertices");
        self.ops.push(TraceOp::Set {
            u,
            v,
            before,
            after: (kind, weight),
        });
    }

    fn delete(&mut self, v: VertexId) {
        self.g.delete_vertex(v).expect("rules only delete live vertices");
        self.ops.push(TraceOp::Delete(v));
    }

    fn finish(self, rule: u8, k_before: i64, k_after: i64) -> RuleOutcome {
        RuleOutcome {
            applied: true,
            entry: Some(TraceEntry {
                rule,
                ops: self.ops,
                k_before,
                k_after,
            }),
        }
    }
}

fn exceeds(count: usize, k: i64) -> bool {
    count as i64 > k
}

fn set_of(capacity: usize, vs: &[VertexId]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(capacity);
    vs.iter().for_each(|&v| s.insert(v));
    s
}

/// Changes `{u, v}` to `kind` with weight 1 and charges the old weight to `k`.
fn convert(g: &mut FuzzyGraph, k: &mut i64, rule: u8, u: VertexId, v: VertexId, kind: EdgeKind) -> RuleOutcome {
    let k_before = *k;
    *k -= i64::from(g.weight(u, v));
    let mut edit = Edit::new(g);
    edit.set(u, v, kind, 1);
    edit.finish(rule, k_before, *k)
}

/// First pair `(u, v)`, `u < v`, satisfying `pred`.
fn first_pair(g: &FuzzyGraph, mut pred: impl FnMut(VertexId, VertexId) -> bool) -> Option<(VertexId, VertexId)> {
    let vs: Vec<VertexId> = g.vertices().collect();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if pred(u, v) {
                return Some((u, v));
            }
        }
    }
    None
}

/// Removes a real component whose pairs are all real or fuzzy.
pub fn apply_rule1(g: &mut FuzzyGraph, k: &mut i64) -> Result<RuleOutcome> {
    for comp in g.real_components() {
        let members = set_of(g.capacity(), &comp);
        let clean = comp.iter().all(|&x| {
            let fuzzy_inside = g.fuzzy_row(x).intersection_count(&members);
            g.real_degree(x) + fuzzy_inside + 1 == comp.len()
        });
        if clean {
            let mut edit = Edit::new(g);
            comp.iter().for_each(|&v| edit.delete(v));
            return Ok(edit.finish(1, *k, *k));
        }
    }
    Ok(RuleOutcome::skipped())
}

fn rule2_hit(g: &FuzzyGraph, k: i64, u: VertexId, v: VertexId) -> bool {
    g.kind(u, v) != EdgeKind::Real && exceeds(g.common_real(u, v), k)
}

/// A nonedge or fuzzy edge with more than `k` common real neighbors becomes real.
pub fn apply_rule2(g: &mut FuzzyGraph, k: &mut i64) -> Result<RuleOutcome> {
    let kk = *k;
    match first_pair(g, |u, v| rule2_hit(g, kk, u, v)) {
        Some((u, v)) => Ok(convert(g, k, 2, u, v, EdgeKind::Real)),
        None => Ok(RuleOutcome::skipped()),
    }
}

/// Incremental version of the Rule 2 search.
///
/// Returns the same pair a fresh scan would, provided [`observe`](Self::observe)
/// sees every entry applied to the graph in between.
#[derive(Clone, Debug, Default)]
pub(crate) struct Rule2Scan {
    cursor: (VertexId, VertexId),
    dirty: BTreeSet<(VertexId, VertexId)>,
    k: Option<i64>,
}

impl Rule2Scan {
    pub(crate) fn apply(&mut self, g: &mut FuzzyGraph, k: &mut i64) -> RuleOutcome {
        if self.k != Some(*k) {
            *self = Rule2Scan {
                k: Some(*k),
                ..Rule2Scan::default()
            };
        }
        let Some((u, v)) = self.next_hit(g, *k) else {
            return RuleOutcome::skipped();
        };
        let out = convert(g, k, 2, u, v, EdgeKind::Real);
        if let Some(entry) = &out.entry {
            self.observe(g, entry);
        }
        out
    }

    fn next_hit(&mut self, g: &FuzzyGraph, k: i64) -> Option<(VertexId, VertexId)> {
        let mut stale = Vec::new();
        let mut found = None;
        for &(u, v) in &self.dirty {
            if g.is_live(u) && g.is_live(v) && rule2_hit(g, k, u, v) {
                found = Some((u, v));
                break;
            }
            stale.push((u, v));
        }
        stale.iter().for_each(|p| {
            self.dirty.remove(p);
        });
        if found.is_some() {
            return found;
        }
        let (cu, cv) = self.cursor;
        for u in g.vertices().skip_while(|&u| u < cu) {
            let mut cand = g.alive_set().clone();
            cand.difference_with(g.real_row(u));
            let start = if u == cu { cv.max(u + 1) } else { u + 1 };
            for v in cand.ones().skip_while(|&v| v < start) {
                if exceeds(g.common_real(u, v), k) {
                    self.cursor = (u, v);
                    return Some((u, v));
                }
            }
        }
        self.cursor = (g.capacity(), 0);
        None
    }

    /// Records which pairs may have become Rule 2 hits after `entry` was applied.
    pub(crate) fn observe(&mut self, g: &FuzzyGraph, entry: &TraceEntry) {
        if Some(entry.k_after) != self.k {
            self.k = None;
            return;
        }
        let cursor = self.cursor;
        let mut mark = |a: VertexId, b: VertexId| {
            let p = (a.min(b), a.max(b));
            if p < cursor {
                self.dirty.insert(p);
            }
        };
        for op in &entry.ops {
            let TraceOp::Set { u, v, .. } = *op else { continue };
            if !(g.is_live(u) && g.is_live(v)) {
                continue;
            }
            mark(u, v);
            if g.kind(u, v) == EdgeKind::Real {
                g.real_neighbors(v).filter(|&x| x != u).for_each(|x| mark(u, x));
                g.real_neighbors(u).filter(|&x| x != v).for_each(|x| mark(v, x));
            }
        }
    }
}

/// Shrinks a critical clique of size at least `k + 3` by one vertex,
/// rerouting fuzzy edges so the clique keeps its outside contacts.
pub fn apply_rule3(g: &mut FuzzyGraph, k: &mut i64, sigma: &DegeneracyOrdering) -> Result<RuleOutcome> {
    let min_size = *k + 3;
    for clique in g.critical_cliques() {
        if (clique.len() as i64) < min_size {
            continue;
        }
        if clique.iter().any(|&x| sigma.position(x).is_none()) {
            return Err(Error::usage("degeneracy ordering does not cover the graph"));
        }
        let v = sigma.first_of(clique.iter().copied()).expect("clique is nonempty");
        let members = set_of(g.capacity(), &clique);
        let mut moves = Vec::new();
        for u in g.vertices().filter(|&u| !members.contains(u)) {
            let mut contacts = g.fuzzy_row(u).clone();
            contacts.intersect_with(&members);
            if let Some(vu) = sigma.first_of(contacts.ones()) {
                if vu != v {
                    if g.kind(u, v) != EdgeKind::Non {
                        return Err(Error::Internal(format!(
                            "rule 3: pair ({u}, {v}) should be a nonedge"
                        )));
                    }
                    moves.push((u, vu));
                }
            }
        }
        let mut edit = Edit::new(g);
        for (u, vu) in moves {
            let w = edit.g.weight(u, v);
            edit.set(u, vu, EdgeKind::Non, w);
            edit.set(u, v, EdgeKind::Fuzzy, 0);
        }
        edit.delete(v);
        return Ok(edit.finish(3, *k, *k));
    }
    Ok(RuleOutcome::skipped())
}

fn one_sided(g: &FuzzyGraph, u: VertexId, v: VertexId, k: i64) -> bool {
    exceeds(g.real_non(u, v), k) || exceeds(g.real_non(v, u), k)
}

/// The kind Rule 4, 5 or 6 would give `{u, v}`, if it applies there.
fn pair_target(rule: u8, g: &FuzzyGraph, u: VertexId, v: VertexId, k: i64, c: usize) -> Option<EdgeKind> {
    match (rule, g.kind(u, v)) {
        (4, EdgeKind::Non) if exceeds(g.common_real(u, v), k) => Some(EdgeKind::Real),
        (5, EdgeKind::Real) if one_sided(g, u, v, k) => Some(EdgeKind::Non),
        (6, EdgeKind::Fuzzy) if g.common_neighbors(u, v, EdgeKind::Fuzzy, EdgeKind::Fuzzy) < c => {
            if exceeds(g.common_real(u, v), k) {
                Some(EdgeKind::Real)
            } else if one_sided(g, u, v, k) {
                Some(EdgeKind::Non)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn apply_pair_rule(rule: u8, g: &mut FuzzyGraph, k: &mut i64, c: usize) -> RuleOutcome {
    let kk = *k;
    match first_pair(g, |u, v| pair_target(rule, g, u, v, kk, c).is_some()) {
        Some((u, v)) => {
            let kind = pair_target(rule, g, u, v, kk, c).expect("hit");
            convert(g, k, rule, u, v, kind)
        }
        None => RuleOutcome::skipped(),
    }
}

/// A nonedge with more than `k` common real neighbors becomes real.
pub fn apply_rule4(g: &mut FuzzyGraph, k: &mut i64) -> Result<RuleOutcome> {
    Ok(apply_pair_rule(4, g, k, 0))
}

/// A real edge whose endpoint has more than `k` real neighbors that are
/// nonneighbors of the other endpoint becomes a nonedge.
pub fn apply_rule5(g: &mut FuzzyGraph, k: &mut i64) -> Result<RuleOutcome> {
    Ok(apply_pair_rule(5, g, k, 0))
}

/// A fuzzy edge with fewer than `c` common fuzzy neighbors is decided by
/// its real neighborhoods, like Rules 4 and 5.
pub fn apply_rule6(g: &mut FuzzyGraph, k: &mut i64, c: usize) -> Result<RuleOutcome> {
    Ok(apply_pair_rule(6, g, k, c))
}

/// Incremental version of the Rule 4, 5 and 6 searches.
///
/// Whether one of these rules applies to `{x, y}` depends on the kinds of
/// pairs at `x` and `y` and on `k`, so a kind change at `{u, v}` can only
/// create hits on pairs touching `u` or `v`. Every live pair before `resume`
/// that avoids `dirty` is known to be no hit. Deleting a vertex lowers
/// common fuzzy counts elsewhere, so for Rule 6 it resets the scan.
#[derive(Clone, Debug)]
pub(crate) struct PairScan {
    rule: u8,
    k: Option<i64>,
    resume: (VertexId, VertexId),
    dirty: FixedBitSet,
}

impl PairScan {
    pub(crate) fn new(rule: u8) -> Self {
        debug_assert!((4..=6).contains(&rule));
        PairScan {
            rule,
            k: None,
            resume: (0, 0),
            dirty: FixedBitSet::new(),
        }
    }

    pub(crate) fn apply(&mut self, g: &mut FuzzyGraph, k: &mut i64, c: usize) -> RuleOutcome {
        if self.k != Some(*k) {
            self.k = Some(*k);
            self.resume = (0, 0);
            self.dirty = FixedBitSet::with_capacity(g.capacity());
        }
        let Some((u, v, kind)) = self.next_hit(g, *k, c) else {
            return RuleOutcome::skipped();
        };
        convert(g, k, self.rule, u, v, kind)
    }

    fn next_hit(&mut self, g: &FuzzyGraph, k: i64, c: usize) -> Option<(VertexId, VertexId, EdgeKind)> {
        let rule = self.rule;
        let mut best: Option<(VertexId, VertexId, EdgeKind)> = None;
        for d in self.dirty.ones().filter(|&d| g.is_live(d)) {
            for x in g.vertices().filter(|&x| x != d) {
                let p = (d.min(x), d.max(x));
                if p >= self.resume || best.is_some_and(|(a, b, _)| (a, b) <= p) {
                    continue;
                }
                if let Some(kind) = pair_target(rule, g, p.0, p.1, k, c) {
                    best = Some((p.0, p.1, kind));
                }
            }
        }
        self.dirty.clear();
        if best.is_none() {
            let (ru, rv) = self.resume;
            'scan: for u in g.vertices().skip_while(|&u| u < ru) {
                let start = if u == ru { rv.max(u + 1) } else { u + 1 };
                for v in g.vertices().skip_while(|&v| v < start) {
                    if let Some(kind) = pair_target(rule, g, u, v, k, c) {
                        best = Some((u, v, kind));
                        break 'scan;
                    }
                }
            }
        }
        self.resume = match best {
            Some((u, v, _)) => (u, v),
            None => (g.capacity(), 0),
        };
        best
    }

    /// Records the vertices at which `entry` may have created hits.
    pub(crate) fn observe(&mut self, entry: &TraceEntry) {
        if Some(entry.k_after) != self.k {
            self.k = None;
            return;
        }
        for op in &entry.ops {
            match *op {
                TraceOp::Set { u, v, before, after } if before.0 != after.0 => {
                    self.dirty.insert(u);
                    self.dirty.insert(v);
                }
                TraceOp::Set { .. } => {}
                TraceOp::Delete(_) if self.rule == 6 => {
                    self.k = None;
                    return;
                }
                TraceOp::Delete(_) => {}
            }
        }
    }
}

fn rule7_candidate(g: &FuzzyGraph, v: VertexId, k: i64, c: usize) -> bool {
    let real_limit = 2 * k * c as i64;
    exceeds(g.real_degree(v), real_limit) && g.fuzzy_degree(v) >= c.max(1)
}

/// Decides fuzzy edges at a vertex with more than `2kc` real and at least
/// `c` fuzzy neighbors.
///
/// One application keeps converting fuzzy edges at the same vertex until it
/// drops below either threshold, so the graph stays fuzzy `c`-closed.
pub fn apply_rule7(g: &mut FuzzyGraph, k: &mut i64, c: usize) -> Result<RuleOutcome> {
    let kk = *k;
    let Some(v) = g.vertices().find(|&v| rule7_candidate(g, v, kk, c)) else {
        return Ok(RuleOutcome::skipped());
    };
    let mut edit = Edit::new(g);
    while rule7_candidate(edit.g, v, kk, c) {
        let g = &*edit.g;
        let pick = g.fuzzy_neighbors(v).find_map(|u| {
            if exceeds(g.common_real(v, u), kk) {
                Some((u, EdgeKind::Real))
            } else if exceeds(g.real_non(v, u), kk) {
                Some((u, EdgeKind::Non))
            } else {
                None
            }
        });
        let Some((u, kind)) = pick else {
            return Err(Error::Internal(format!(
                "rule 7: vertex {v} has no decidable fuzzy neighbor; is the graph fuzzy {c}-closed?"
            )));
        };
        edit.set(u, v, kind, 1);
    }
    Ok(edit.finish(7, kk, kk))
}

/// Greedy real clique grown from `u` over neighbors sharing at least
/// `min_common` real neighbors with it.
fn clique_around(g: &FuzzyGraph, u: VertexId, min_common: i64) -> Vec<VertexId> {
    let mut clique = vec![u];
    for w in g.real_neighbors(u) {
        if (g.common_real(u, w) as i64) >= min_common && clique.iter().all(|&x| g.kind(x, w) == EdgeKind::Real) {
            clique.push(w);
        }
    }
    clique.sort_unstable();
    clique
}

/// Removes one vertex from a real clique of size at least `3kc + 2`, moving
/// its real and nonedges to outside vertices onto fuzzy contacts in the clique.
pub fn apply_rule8(g: &mut FuzzyGraph, k: &mut i64, c: usize) -> Result<RuleOutcome> {
    let kc3 = 3 * *k * c as i64;
    let min_size = kc3 + 2;
    let found = g
        .vertices()
        .filter(|&u| g.real_degree(u) as i64 + 1 >= min_size)
        .map(|u| clique_around(g, u, kc3))
        .find(|clique| clique.len() as i64 >= min_size);
    let Some(clique) = found else {
        return Ok(RuleOutcome::skipped());
    };
    let v = clique[0];
    let members = set_of(g.capacity(), &clique);
    let moves: Vec<(VertexId, VertexId)> = g
        .vertices()
        .filter(|&u| !members.contains(u) && g.kind(u, v) != EdgeKind::Fuzzy)
        .filter_map(|u| clique.iter().find(|&&w| g.kind(u, w) == EdgeKind::Fuzzy).map(|&w| (u, w)))
        .collect();
    let mut edit = Edit::new(g);
    for (u, w) in moves {
        let (kind, weight) = (edit.g.kind(u, v), edit.g.weight(u, v));
        edit.set(u, w, kind, weight);
    }
    edit.delete(v);
    Ok(edit.finish(8, *k, *k))
}

/// Removes one vertex from a large fuzzy clique of vertices whose real
/// neighborhood is exactly the same real clique.
pub fn apply_rule9(g: &mut FuzzyGraph, k: &mut i64, c: usize) -> Result<RuleOutcome> {
    let limit = 2 * *k + c as i64 + 1;
    let mut classes: Vec<Vec<VertexId>> = Vec::new();
    let mut index: HashMap<&FixedBitSet, usize> = HashMap::new();
    for v in g.vertices() {
        let row = g.real_row(v);
        match index.get(row) {
            Some(&i) => classes[i].push(v),
            None => {
                index.insert(row, classes.len());
                classes.push(vec![v]);
            }
        }
    }
    let hit = classes.into_iter().find(|x| {
        let clique: Vec<VertexId> = g.real_row(x[0]).ones().collect();
        !clique.is_empty() && x.len() as i64 > limit && g.is_fuzzy_clique(x) && g.is_real_clique(&clique)
    });
    let Some(x) = hit else {
        return Ok(RuleOutcome::skipped());
    };
    let mut edit = Edit::new(g);
    edit.delete(x[0]);
    Ok(edit.finish(9, *k, *k))
}

/// Applies rule `rule` once. Rule 3 uses a freshly computed degeneracy
/// ordering; Rules 6 to 9 use the closure bound `c`.
pub fn apply_rule(rule: u8, g: &mut FuzzyGraph, k: &mut i64, c: usize) -> Result<RuleOutcome> {
    match rule {
        1 => apply_rule1(g, k),
        2 => apply_rule2(g, k),
        3 => {
            let sigma = g.fuzzy_degeneracy_ordering();
            apply_rule3(g, k, &sigma)
        }
        4 => apply_rule4(g, k),
        5 => apply_rule5(g, k),
        6 => apply_rule6(g, k, c),
        7 => apply_rule7(g, k, c),
        8 => apply_rule8(g, k, c),
        9 => apply_rule9(g, k, c),
        _ => Err(Error::usage(format!("no rule {rule}; rules are numbered 1 to 9"))),
    }
}
