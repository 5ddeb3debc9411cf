//! Exact brute-force solver, used as the correctness oracle for the rules,
//! pipelines and reductions.
//!
//! Clusterings are enumerated as restricted growth strings over a vertex
//! order. The search accumulates cost as vertices are placed and cuts every
//! branch that cannot beat the best clustering found so far.

use std::collections::VecDeque;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, FuzzyGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverLimits {
    /// Largest number of live vertices the solver accepts.
    pub max_n: usize,
    /// Only consider clusterings whose clusters are connected by real edges.
    pub prune_connected: bool,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_n: 12,
            prune_connected: true,
        }
    }
}

impl SolverLimits {
    pub fn new(max_n: usize, prune_connected: bool) -> Result<Self> {
        if max_n == 0 {
            return Err(Error::usage("max_n must be at least 1"));
        }
        Ok(SolverLimits {
            max_n,
            prune_connected,
        })
    }

    pub fn with_max_n(max_n: usize) -> Self {
        SolverLimits {
            max_n: max_n.max(1),
            ..SolverLimits::default()
        }
    }

    fn check(&self, g: &FuzzyGraph) -> Result<()> {
        if g.vertex_count() > self.max_n {
            return Err(Error::Capability(format!(
                "instance has {} vertices, solver limit max_n is {}",
                g.vertex_count(),
                self.max_n
            )));
        }
        Ok(())
    }
}

/// Restricted growth strings of length `n` in lexicographic order.
///
/// Every set partition of `{0, .., n-1}` appears exactly once: element `i`
/// gets label `a[i] <= 1 + max(a[..i])`.
#[derive(Clone, Debug)]
pub struct RestrictedGrowth {
    labels: Vec<usize>,
    prefix_max: Vec<usize>,
    first: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            labels: vec![0; n],
            prefix_max: vec![0; n],
            first: true,
            done: false,
        }
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.labels.clone());
        }
        let n = self.labels.len();
        // prefix_max[i] = max(labels[..i]) for i >= 1.
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.labels[i] <= self.prefix_max[i] {
                self.labels[i] += 1;
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.prefix_max[j] = self.prefix_max[j - 1].max(self.labels[j - 1]);
                }
                return Some(self.labels.clone());
            }
        }
        self.done = true;
        None
    }
}

/// Every set partition of `{0, .., n-1}`, in restricted-growth-string order.
pub fn enumerate_partitions(n: usize) -> impl Iterator<Item = Clustering> {
    RestrictedGrowth::new(n)
        .map(|labels| Clustering::from_labels(labels.into_iter().enumerate()).expect("labels partition"))
}

struct Search<'a> {
    g: &'a FuzzyGraph,
    order: Vec<VertexId>,
    /// `real[i][j]` / `non[i][j]`: weight between order positions `i` and `j < i`.
    real: Vec<Vec<i64>>,
    non: Vec<Vec<i64>>,
    labels: Vec<usize>,
    best: i64,
    best_labels: Option<Vec<usize>>,
    connected: bool,
    stop_at_or_below: Option<i64>,
    stopped: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a FuzzyGraph, order: Vec<VertexId>, connected: bool) -> Self {
        let m = order.len();
        let mut real = vec![vec![0i64; m]; m];
        let mut non = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in 0..i {
                let (u, v) = (order[i], order[j]);
                let w = i64::from(g.weight(u, v));
                match g.kind(u, v) {
                    EdgeKind::Real => real[i][j] = w,
                    EdgeKind::Non => non[i][j] = w,
                    EdgeKind::Fuzzy => {}
                }
            }
        }
        Search {
            g,
            order,
            real,
            non,
            labels: vec![0; m],
            best: i64::MAX,
            best_labels: None,
            connected,
            stop_at_or_below: None,
            stopped: false,
        }
    }

    fn run(&mut self) {
        if self.order.is_empty() {
            if 0 < self.best {
                self.best = 0;
                self.best_labels = Some(Vec::new());
            }
            return;
        }
        self.labels[0] = 0;
        self.descend(1, 0, 0);
    }

    fn descend(&mut self, pos: usize, max_label: usize, cost: i64) {
        if self.stopped {
            return;
        }
        if pos == self.order.len() {
            if cost < self.best && (!self.connected || self.clusters_connected()) {
                self.best = cost;
                self.best_labels = Some(self.labels.clone());
                if self.stop_at_or_below.is_some_and(|t| cost <= t) {
                    self.stopped = true;
                }
            }
            return;
        }
        let labels_available = max_label + 2;
        let mut real_to = vec![0i64; labels_available];
        let mut non_to = vec![0i64; labels_available];
        let mut real_total = 0;
        for j in 0..pos {
            let l = self.labels[j];
            real_to[l] += self.real[pos][j];
            non_to[l] += self.non[pos][j];
            real_total += self.real[pos][j];
        }
        let mut options: Vec<(i64, usize)> = (0..labels_available)
            .map(|l| (real_total - real_to[l] + non_to[l], l))
            .collect();
        options.sort_unstable();
        for (delta, l) in options {
            if cost + delta >= self.best {
                break;
            }
            self.labels[pos] = l;
            self.descend(pos + 1, max_label.max(l), cost + delta);
            if self.stopped {
                return;
            }
        }
    }

    fn clusters_connected(&self) -> bool {
        let m = self.order.len();
        let mut seen = vec![false; m];
        let mut groups_seen = std::collections::HashSet::new();
        for s in 0..m {
            if seen[s] {
                continue;
            }
            if !groups_seen.insert(self.labels[s]) {
                // A second real-connected piece of a cluster already visited.
                return false;
            }
            seen[s] = true;
            let mut queue = vec![s];
            while let Some(x) = queue.pop() {
                for y in 0..m {
                    if !seen[y]
                        && self.labels[y] == self.labels[x]
                        && self.g.kind(self.order[x], self.order[y]) == EdgeKind::Real
                    {
                        seen[y] = true;
                        queue.push(y);
                    }
                }
            }
        }
        true
    }

    fn clustering(&self) -> Option<Clustering> {
        self.best_labels.as_ref().map(|labels| {
            Clustering::from_labels(self.order.iter().copied().zip(labels.iter().copied()))
                .expect("labels partition")
        })
    }
}

/// Vertex order in which every vertex after the first of its real component
/// has an earlier real neighbor; this makes opening clusters expensive early.
fn bfs_order(g: &FuzzyGraph, vertices: &[VertexId]) -> Vec<VertexId> {
    let mut inside = vec![false; g.capacity()];
    for &v in vertices {
        inside[v] = true;
    }
    let mut seen = vec![false; g.capacity()];
    let mut order = Vec::with_capacity(vertices.len());
    for &s in vertices {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for y in g.real_neighbors(x) {
                if inside[y] && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

/// Optimum over the given vertex set, searching only below `bound` (exclusive).
fn solve_part(
    g: &FuzzyGraph,
    vertices: &[VertexId],
    connected: bool,
    bound: i64,
    stop_at_or_below: Option<i64>,
) -> Option<(i64, Clustering)> {
    let mut search = Search::new(g, bfs_order(g, vertices), connected);
    search.best = bound;
    search.stop_at_or_below = stop_at_or_below;
    // Seed the bound with the one-cluster solution. In connected mode every
    // part is a real component, so that cluster is connected.
    let single = Clustering::from_clusters(vec![vertices.to_vec()]).expect("one cluster");
    let single_cost = part_cost(g, vertices, &single);
    if single_cost < search.best {
        search.best = single_cost;
        search.best_labels = Some(vec![0; vertices.len()]);
        if stop_at_or_below.is_some_and(|t| single_cost <= t) {
            return search.clustering().map(|c| (single_cost, c));
        }
    }
    search.run();
    let best = search.best;
    search.clustering().map(|c| (best, c))
}

fn part_cost(g: &FuzzyGraph, vertices: &[VertexId], cl: &Clustering) -> i64 {
    let mut total = 0;
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            let same = cl.cluster_of(u) == cl.cluster_of(v);
            match g.kind(u, v) {
                EdgeKind::Real if !same => total += i64::from(g.weight(u, v)),
                EdgeKind::Non if same => total += i64::from(g.weight(u, v)),
                _ => {}
            }
        }
    }
    total
}

/// A minimum-cost clustering and its cost.
pub fn optimal_clustering(g: &FuzzyGraph, limits: SolverLimits) -> Result<(i64, Clustering)> {
    limits.check(g)?;
    let vertices: Vec<VertexId> = g.vertices().collect();
    if !limits.prune_connected {
        return solve_part(g, &vertices, false, i64::MAX, None)
            .ok_or_else(|| Error::Internal("search found no clustering".into()));
    }
    let mut total = 0;
    let mut clusters = Vec::new();
    for comp in g.real_components() {
        let (c, cl) = solve_part(g, &comp, true, i64::MAX, None)
            .ok_or_else(|| Error::Internal("search found no clustering".into()))?;
        total += c;
        clusters.extend(cl.clusters().iter().cloned());
    }
    Ok((total, Clustering::from_clusters(clusters)?))
}

/// Minimum clustering cost over all partitions of the live vertices.
pub fn optimal_cost(g: &FuzzyGraph, limits: SolverLimits) -> Result<i64> {
    optimal_clustering(g, limits).map(|(c, _)| c)
}

/// Whether some clustering costs at most `k`.
pub fn exact_decide(g: &FuzzyGraph, k: i64, limits: SolverLimits) -> Result<bool> {
    limits.check(g)?;
    if k < 0 {
        return Ok(false);
    }
    let vertices: Vec<VertexId> = g.vertices().collect();
    if !limits.prune_connected {
        return Ok(solve_part(g, &vertices, false, k + 1, Some(k)).is_some());
    }
    // Components are independent; each must be solved optimally within the
    // budget left over by the others.
    let mut budget = k;
    for comp in g.real_components() {
        if comp.len() == 1 {
            continue;
        }
        match solve_part(g, &comp, true, budget + 1, None) {
            Some((c, _)) => budget -= c,
            None => return Ok(false),
        }
    }
    Ok(true)
}
