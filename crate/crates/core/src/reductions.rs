//! Hardness constructions that map Multicut, 3-SAT and Clique instances to
//! correlation clustering, together with small brute-force oracles for the
//! source problems.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, FuzzyGraph, VertexId};
use crate::simple::SimpleGraph;

/// Number of edge subsets [`brute_force_multicut`] may enumerate.
pub const DEFAULT_MULTICUT_BUDGET: u64 = 50_000_000;

/// Largest input accepted by the SAT and clique oracles.
pub const ORACLE_MAX_N: usize = 20;

/// Edge Multicut: delete at most `k` edges so that no terminal pair stays connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulticutInstance {
    pub graph: SimpleGraph,
    pub terminal_pairs: Vec<(VertexId, VertexId)>,
    pub k: i64,
}

impl MulticutInstance {
    /// Checks that the graph has no tombstones and that every pair consists of
    /// two distinct vertices of the graph, with no pair listed twice.
    pub fn new(graph: SimpleGraph, terminal_pairs: Vec<(VertexId, VertexId)>, k: i64) -> Result<Self> {
        let n = graph.capacity();
        if graph.vertex_count() != n {
            return Err(Error::usage("multicut graph must not contain deleted vertices"));
        }
        let mut seen = BTreeSet::new();
        for &(s, t) in &terminal_pairs {
            if s >= n || t >= n {
                return Err(Error::usage(format!("terminal pair ({s}, {t}) out of range for {n} vertices")));
            }
            if s == t {
                return Err(Error::usage(format!("terminal pair ({s}, {t}) repeats a vertex")));
            }
            if !seen.insert((s.min(t), s.max(t))) {
                return Err(Error::usage(format!("terminal pair ({s}, {t}) listed twice")));
            }
        }
        Ok(MulticutInstance {
            graph,
            terminal_pairs,
            k,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.capacity()
    }

    /// Partners of every vertex in ascending order.
    pub fn partners(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for &(s, t) in &self.terminal_pairs {
            out[s].push(t);
            out[t].push(s);
        }
        for p in &mut out {
            p.sort_unstable();
        }
        out
    }

    /// Vertices that occur in some terminal pair, ascending.
    pub fn terminals(&self) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self.terminal_pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
        set.into_iter().collect()
    }
}

/// A 3-CNF formula. Literals are nonzero DIMACS integers: `i` is variable
/// `i`, `-i` its negation, with `1 <= i <= num_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for (j, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::usage(format!(
                        "clause {} has literal {lit} outside 1..={num_vars}",
                        j + 1
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
        })
    }
}

fn set_real(g: &mut FuzzyGraph, u: VertexId, v: VertexId) {
    g.set_pair(u, v, EdgeKind::Real, 1).expect("fresh pair between live vertices");
}

fn set_non(g: &mut FuzzyGraph, u: VertexId, v: VertexId) {
    g.set_pair(u, v, EdgeKind::Non, 1).expect("fresh pair between live vertices");
}

/// Edge Multicut to correlation clustering.
///
/// Each terminal `v` gets a chain of `|T_v|` real cliques of size `Δ + 1`
/// hanging off `v`; the `i`-th clique of `v` and the `j`-th clique of `u`
/// are joined by a perfect Non matching when `u` is the `i`-th partner of `v`
/// and `v` the `j`-th partner of `u`. Everything else is fuzzy.
pub fn multicut_to_cc(mc: &MulticutInstance) -> (FuzzyGraph, i64) {
    let n = mc.vertex_count();
    let size = mc.graph.max_degree() + 1;
    let partners = mc.partners();
    let mut first = vec![0; n];
    let mut total = n;
    for v in 0..n {
        first[v] = total;
        total += partners[v].len() * size;
    }
    let clique = |v: VertexId, i: usize| first[v] + i * size;

    let mut g = FuzzyGraph::new(total);
    for (u, v) in mc.graph.edges() {
        set_real(&mut g, u, v);
    }
    for v in 0..n {
        for i in 0..partners[v].len() {
            let q = clique(v, i);
            for a in 0..size {
                for b in a + 1..size {
                    set_real(&mut g, q + a, q + b);
                }
                if i == 0 {
                    set_real(&mut g, v, q + a);
                } else {
                    let prev = clique(v, i - 1);
                    for b in 0..size {
                        set_real(&mut g, prev + b, q + a);
                    }
                }
            }
        }
    }
    for &(u, v) in &mc.terminal_pairs {
        let i = partners[v].binary_search(&u).expect("partner listed");
        let j = partners[u].binary_search(&v).expect("partner listed");
        let (qv, qu) = (clique(v, i), clique(u, j));
        for p in 0..size {
            set_non(&mut g, qv + p, qu + p);
        }
    }
    debug_assert!(non_pairs_form_matching(&g));
    (g, mc.k)
}

/// True when every vertex has at most one Non pair.
pub fn non_pairs_form_matching(g: &FuzzyGraph) -> bool {
    g.vertices().all(|v| g.non_degree(v) <= 1)
}

/// Replaces every real edge `{u, v}` by a path `u - x_uv - v` and makes
/// `{u, v}` fuzzy. The new vertices are appended in ascending edge order.
pub fn subdivide_real_edges(g: &FuzzyGraph, k: i64) -> (FuzzyGraph, i64) {
    let (g, _) = g.compact();
    let n = g.capacity();
    let unit = g.vertices().all(|u| {
        g.vertices()
            .filter(|&v| v > u)
            .all(|v| g.kind(u, v) == EdgeKind::Fuzzy || g.weight(u, v) == 1)
    });
    if !unit || !non_pairs_form_matching(&g) {
        log::warn!("subdivision expects unit weights and Non pairs forming a matching");
    }
    let edges = g.real_graph().edges();
    let mut out = FuzzyGraph::new(n + edges.len());
    for u in 0..n {
        for v in u + 1..n {
            if g.kind(u, v) == EdgeKind::Non {
                out.set_pair(u, v, EdgeKind::Non, g.weight(u, v)).expect("live pair");
            }
        }
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        set_real(&mut out, u, n + i);
        set_real(&mut out, v, n + i);
    }
    debug_assert!({
        let real = out.real_graph();
        real.degeneracy() <= 2 && real.closure().c <= 2
    });
    (out, k)
}

/// Vertex roles in the tree built by [`sat3_to_tree_multicut`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatTreeLayout {
    /// Per variable: (gadget root, positive leaf, negative leaf).
    pub variables: Vec<[VertexId; 3]>,
    /// Per clause: (w1, w2, x, y, z). `w1` is the parent of `x` and `y`,
    /// `w2` the gadget root with children `w1` and `z`.
    pub clauses: Vec<[VertexId; 5]>,
    /// Fresh spine vertices joining the gadget roots, bottom first.
    pub spine: Vec<VertexId>,
}

/// 3-SAT to Edge Multicut on binary trees, with budget `n + 2m`.
///
/// The three literal leaves of a clause are pairwise terminal pairs, so two
/// cuts inside the clause gadget are needed and every such pair of cuts
/// leaves exactly one literal attached to the rest of the tree.
pub fn sat3_to_tree_multicut(phi: &CnfFormula) -> MulticutInstance {
    sat3_to_tree_multicut_with_layout(phi).0
}

pub fn sat3_to_tree_multicut_with_layout(phi: &CnfFormula) -> (MulticutInstance, SatTreeLayout) {
    let n = phi.num_vars;
    let m = phi.clauses.len();
    let roots = n + m;
    let total = 3 * n + 5 * m + roots.saturating_sub(1);
    let mut edges = Vec::with_capacity(total.saturating_sub(1));
    let mut pairs = Vec::new();
    let mut layout = SatTreeLayout {
        variables: Vec::with_capacity(n),
        clauses: Vec::with_capacity(m),
        spine: Vec::new(),
    };
    let mut gadget_roots = Vec::with_capacity(roots);

    for i in 0..n {
        let (p, pos, neg) = (3 * i, 3 * i + 1, 3 * i + 2);
        edges.push((p, pos));
        edges.push((p, neg));
        pairs.push((pos, neg));
        layout.variables.push([p, pos, neg]);
        gadget_roots.push(p);
    }
    let leaf_of = |lit: i32| {
        let i = lit.unsigned_abs() as usize - 1;
        if lit > 0 {
            3 * i + 1
        } else {
            3 * i + 2
        }
    };
    for (j, clause) in phi.clauses.iter().enumerate() {
        let b = 3 * n + 5 * j;
        let [w1, w2, x, y, z] = [b, b + 1, b + 2, b + 3, b + 4];
        edges.extend([(w1, x), (w1, y), (w2, w1), (w2, z)]);
        pairs.extend([(x, y), (x, z), (y, z)]);
        for (leaf, &lit) in [x, y, z].into_iter().zip(clause) {
            pairs.push((leaf, leaf_of(lit)));
        }
        layout.clauses.push([w1, w2, x, y, z]);
        gadget_roots.push(w2);
    }
    let mut next = 3 * n + 5 * m;
    if let Some((&r0, rest)) = gadget_roots.split_first() {
        let mut top = r0;
        for &r in rest {
            edges.push((next, top));
            edges.push((next, r));
            layout.spine.push(next);
            top = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, total);
    let graph = SimpleGraph::from_edges(total, &edges).expect("gadget edges are distinct");
    let k = (n + 2 * m) as i64;
    let mc = MulticutInstance::new(graph, pairs, k).expect("gadget terminal pairs are distinct");
    debug_assert!(mc.graph.is_binary_tree());
    debug_assert!(mc.terminals().iter().all(|&t| mc.graph.degree(t) == 1));
    (mc, layout)
}

/// Edge Multicut on a binary tree with leaf terminals to correlation clustering.
///
/// Each terminal `v` gets two new real neighbours `v1`, `v2`; each pair
/// `(u, v)` turns `{u1, v1}` and `{u2, v2}` into Non pairs.
pub fn tree_multicut_to_cc(mc: &MulticutInstance) -> Result<(FuzzyGraph, i64)> {
    if !mc.graph.is_binary_tree() {
        return Err(Error::usage("tree multicut input is not a binary tree"));
    }
    let terminals = mc.terminals();
    if let Some(&t) = terminals.iter().find(|&&t| mc.graph.degree(t) != 1) {
        return Err(Error::usage(format!("terminal {t} is not a leaf of the tree")));
    }
    let n = mc.vertex_count();
    let mut slot = vec![usize::MAX; n];
    for (i, &t) in terminals.iter().enumerate() {
        slot[t] = n + 2 * i;
    }
    let mut g = FuzzyGraph::new(n + 2 * terminals.len());
    for (u, v) in mc.graph.edges() {
        set_real(&mut g, u, v);
    }
    for &t in &terminals {
        set_real(&mut g, t, slot[t]);
        set_real(&mut g, t, slot[t] + 1);
    }
    for &(u, v) in &mc.terminal_pairs {
        set_non(&mut g, slot[u], slot[v]);
        set_non(&mut g, slot[u] + 1, slot[v] + 1);
    }
    debug_assert!(g.real_graph().is_binary_tree());
    Ok((g, mc.k))
}

/// Clique to correlation clustering whose real graph is a star.
///
/// A centre `n` is Real to every vertex, edges of `g` become fuzzy and
/// non-edges Non(1); the budget is `n - k`.
pub fn clique_to_cc_star(g: &SimpleGraph, k: i64) -> Result<(FuzzyGraph, i64)> {
    let n = g.capacity();
    if g.vertex_count() != n {
        return Err(Error::usage("clique input must not contain deleted vertices"));
    }
    if k < 1 || k > n as i64 {
        return Err(Error::usage(format!("clique size {k} outside 1..={n}")));
    }
    let mut out = FuzzyGraph::new(n + 1);
    for u in 0..n {
        set_real(&mut out, u, n);
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                set_non(&mut out, u, v);
            }
        }
    }
    debug_assert!(out.real_graph().is_star());
    Ok((out, n as i64 - k))
}

/// Number of subsets of size at most `k` from `m` elements, saturating.
fn subsets_up_to(m: usize, k: usize) -> u64 {
    let mut total: u64 = 0;
    let mut binom: u128 = 1;
    for i in 0..=k.min(m) {
        total = total.saturating_add(u64::try_from(binom).unwrap_or(u64::MAX));
        binom = binom * (m - i) as u128 / (i + 1) as u128;
    }
    total
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Decides Edge Multicut by enumerating edge subsets in order of size.
pub fn brute_force_multicut(mc: &MulticutInstance) -> Result<bool> {
    brute_force_multicut_with_budget(mc, DEFAULT_MULTICUT_BUDGET)
}

pub fn brute_force_multicut_with_budget(mc: &MulticutInstance, budget: u64) -> Result<bool> {
    if mc.k < 0 {
        return Ok(false);
    }
    if mc.terminal_pairs.is_empty() {
        return Ok(true);
    }
    let edges = mc.graph.edges();
    let m = edges.len();
    let k = (mc.k as usize).min(m);
    let needed = subsets_up_to(m, k);
    if needed > budget {
        return Err(Error::Capability(format!(
            "multicut enumeration needs {needed} subsets, budget is {budget}"
        )));
    }
    let n = mc.vertex_count();
    let separates = |removed: &[bool]| {
        let mut uf = UnionFind::new(n);
        for (e, &(u, v)) in edges.iter().enumerate() {
            if !removed[e] {
                uf.union(u, v);
            }
        }
        mc.terminal_pairs.iter().all(|&(s, t)| uf.find(s) != uf.find(t))
    };
    let mut removed = vec![false; m];
    for size in 0..=k {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            for &e in &idx {
                removed[e] = true;
            }
            let ok = separates(&removed);
            for &e in &idx {
                removed[e] = false;
            }
            if ok {
                return Ok(true);
            }
            let Some(pos) = (0..size).rev().find(|&i| idx[i] < m - size + i) else {
                break;
            };
            idx[pos] += 1;
            for i in pos + 1..size {
                idx[i] = idx[i - 1] + 1;
            }
        }
    }
    Ok(false)
}

/// Decides 3-SAT by trying every assignment.
pub fn brute_force_sat(phi: &CnfFormula) -> Result<bool> {
    if phi.num_vars > ORACLE_MAX_N {
        return Err(Error::Capability(format!(
            "formula has {} variables, oracle limit is {ORACLE_MAX_N}",
            phi.num_vars
        )));
    }
    let mut assignment = vec![false; phi.num_vars];
    for mask in 0u32..(1 << phi.num_vars) {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = mask >> i & 1 == 1;
        }
        if phi.is_satisfied_by(&assignment) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Decides whether `g` has a clique on `k` vertices.
pub fn brute_force_clique(g: &SimpleGraph, k: i64) -> Result<bool> {
    let n = g.capacity();
    if n > ORACLE_MAX_N {
        return Err(Error::Capability(format!(
            "graph has {n} vertices, oracle limit is {ORACLE_MAX_N}"
        )));
    }
    if k <= 0 {
        return Ok(true);
    }
    let adj: Vec<u32> = (0..n)
        .map(|u| {
            if g.vertices().any(|x| x == u) {
                g.neighbors(u).fold(0, |acc, v| acc | 1 << v)
            } else {
                0
            }
        })
        .collect();
    let live: u32 = g.vertices().fold(0, |acc, v| acc | 1 << v);
    fn extend(adj: &[u32], candidates: u32, need: u32) -> bool {
        if need == 0 {
            return true;
        }
        if candidates.count_ones() < need {
            return false;
        }
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            if extend(adj, rest & adj[v as usize], need - 1) {
                return true;
            }
        }
        false
    }
    Ok(k <= n as i64 && extend(&adj, live, k as u32))
}
