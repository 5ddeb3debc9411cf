//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any blocking criterion fails.

use std::time::{Duration, Instant};

use fuzzycc_core::generators::{planted_clusters, GenSpec, Planted};
use fuzzycc_core::io::{parse_trace, serialize_instance, serialize_trace};
use fuzzycc_core::pipelines::{closure_kernelize_with, degeneracy_kernelize, degeneracy_kernelize_with};
use fuzzycc_core::reductions::{
    brute_force_clique, brute_force_multicut, brute_force_sat, clique_to_cc_star, multicut_to_cc,
    non_pairs_form_matching, sat3_to_tree_multicut, subdivide_real_edges, tree_multicut_to_cc, CnfFormula,
    MulticutInstance,
};
use fuzzycc_core::verify::{check_pipeline, check_rules, RuleReport, VerifyConfig};
use fuzzycc_core::{
    apply_rule, exact_decide, kernelize, optimal_clustering, optimal_cost, replay, EdgeKind, FuzzyGraph, Mode,
    SimpleGraph, SolverLimits, Verdict,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn suite_config() -> VerifyConfig {
    VerifyConfig {
        samples: 200,
        seed: 7,
        max_n: 9,
        max_k: 4,
        max_weight: 3,
        ..VerifyConfig::default()
    }
}

fn rule_soundness(reports: &[RuleReport]) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for r in reports {
        let bad = r.mismatches().count();
        pass &= r.passed();
        let yes = r.samples.iter().filter(|s| s.before_yes).count();
        let mut part = format!("r{}={}/{} ({yes} yes)", r.rule, r.samples.len(), r.wanted);
        if bad > 0 {
            part.push_str(&format!(" {bad} MISMATCHES"));
        }
        parts.push(part);
    }
    Outcome::new(pass, parts.join(" "))
}

fn pipeline_equivalence() -> (Outcome, Outcome) {
    let cfg = VerifyConfig {
        max_k: 3,
        ..suite_config()
    };
    let mut eq_parts = Vec::new();
    let mut bound_parts = Vec::new();
    let (mut eq_pass, mut bound_pass) = (true, true);
    for mode in [Mode::Degeneracy, Mode::Closure] {
        let report = match check_pipeline(mode, &cfg) {
            Ok(r) => r,
            Err(e) => {
                return (
                    Outcome::new(false, format!("{mode:?}: {e}")),
                    Outcome::new(false, format!("{mode:?}: {e}")),
                )
            }
        };
        let bad = report.samples.iter().filter(|s| !s.agrees()).count();
        let yes = report.samples.iter().filter(|s| s.input_yes).count();
        let over = report.samples.iter().filter(|s| !s.within_bound()).count();
        eq_pass &= bad == 0 && report.samples.len() >= cfg.samples;
        bound_pass &= over == 0;
        eq_parts.push(format!("{mode:?}: {} instances ({yes} yes), {bad} mismatches", report.samples.len()));
        bound_parts.push(format!("{mode:?}: {yes} yes-instances, {over} over bound"));
    }
    let (extra_yes, extra_over) = planted_bound_check();
    bound_pass &= extra_over == 0;
    bound_parts.push(format!("planted: {extra_yes} yes-instances, {extra_over} over bound"));
    (
        Outcome::new(eq_pass, eq_parts.join("; ")),
        Outcome::new(bound_pass, bound_parts.join("; ")),
    )
}

/// Solver-certified planted yes-instances with n up to 12 and k up to 3.
fn planted_bound_check() -> (usize, usize) {
    let results: Vec<(bool, bool)> = (0..120u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(6..=12);
            let a = rng.gen_range(3..n);
            let spec = GenSpec {
                d_max: if rng.gen_bool(0.5) { Some(rng.gen_range(0..=2)) } else { None },
                planted: Some(Planted {
                    cluster_sizes: vec![a, n - a],
                    budget: rng.gen_range(0..=3),
                }),
                ..GenSpec::new(n, 0.0, rng.gen_range(0.0..0.3), 1, seed)
            };
            let p = planted_clusters(&spec).expect("valid spec");
            let limits = SolverLimits::with_max_n(12);
            if !exact_decide(&p.graph, p.k, limits).unwrap() {
                return (false, false);
            }
            let mut over = false;
            for mode in [Mode::Degeneracy, Mode::Closure] {
                let r = kernelize(mode, p.graph.clone(), p.k).unwrap();
                over |= match r.verdict {
                    Verdict::Reduced { graph, .. } => graph.vertex_count() as u64 > r.bound_used,
                    Verdict::No(_) => true,
                };
            }
            (true, over)
        })
        .collect();
    (
        results.iter().filter(|r| r.0).count(),
        results.iter().filter(|r| r.1).count(),
    )
}

fn decide(g: &FuzzyGraph, k: i64) -> bool {
    exact_decide(g, k, SolverLimits::with_max_n(24)).unwrap()
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn subsets<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for item in items {
        let mut grown: Vec<Vec<T>> = out
            .iter()
            .filter(|s| s.len() < max)
            .map(|s| {
                let mut s = s.clone();
                s.push(item.clone());
                s
            })
            .collect();
        out.append(&mut grown);
    }
    out
}

/// Labelled trees on `n >= 2` vertices, decoded from every Prüfer sequence.
fn all_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    let len = n - 2;
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..len)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect();
            let mut degree = vec![1; n];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut edges = Vec::with_capacity(n - 1);
            for &s in &seq {
                let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
                edges.push((leaf, s));
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
            edges.push((rest[0], rest[1]));
            edges
        })
        .collect()
}

struct Tally {
    cases: usize,
    yes: usize,
    mismatches: usize,
    structure_failures: usize,
}

impl Tally {
    /// Each result is (oracles agree, structure holds, source answer).
    fn of(results: Vec<(bool, bool, bool)>) -> Tally {
        Tally {
            cases: results.len(),
            yes: results.iter().filter(|r| r.2).count(),
            mismatches: results.iter().filter(|r| !r.0).count(),
            structure_failures: results.iter().filter(|r| !r.1).count(),
        }
    }
}

fn multicut_cases() -> Tally {
    let mut cases = Vec::new();
    for n in 1..=4 {
        let pairs = all_pairs(n);
        for edges in subsets(&pairs, pairs.len()) {
            let g = SimpleGraph::from_edges(n, &edges).unwrap();
            if g.max_degree() > 2 {
                continue;
            }
            for terminals in subsets(&pairs, 2) {
                for k in 0..=2 {
                    cases.push(MulticutInstance::new(g.clone(), terminals.clone(), k).unwrap());
                }
            }
        }
    }
    Tally::of(
        cases
            .par_iter()
            .map(|mc| {
                let (g, k) = multicut_to_cc(mc);
                let shape = non_pairs_form_matching(&g) && k == mc.k;
                let yes = brute_force_multicut(mc).unwrap();
                (yes == decide(&g, k), shape, yes)
            })
            .collect(),
    )
}

fn tree_cases() -> Tally {
    let mut cases = Vec::new();
    for n in 2..=6 {
        for edges in all_trees(n) {
            let g = SimpleGraph::from_edges(n, &edges).unwrap();
            if !g.is_binary_tree() {
                continue;
            }
            let leaves: Vec<usize> = (0..n).filter(|&v| g.degree(v) == 1).collect();
            for (i, &s) in leaves.iter().enumerate() {
                for &t in &leaves[i + 1..] {
                    for k in 0..=2 {
                        cases.push(MulticutInstance::new(g.clone(), vec![(s, t)], k).unwrap());
                    }
                }
            }
        }
    }
    Tally::of(
        cases
            .par_iter()
            .map(|mc| {
                let (g, k) = tree_multicut_to_cc(mc).unwrap();
                let shape = g.real_graph().is_binary_tree() && k == mc.k;
                let yes = brute_force_multicut(mc).unwrap();
                (yes == decide(&g, k), shape, yes)
            })
            .collect(),
    )
}

fn literal(code: usize) -> i32 {
    let v = (code / 2 + 1) as i32;
    if code.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

fn all_clauses(vars: usize) -> Vec<[i32; 3]> {
    let lits = 2 * vars;
    (0..lits.pow(3))
        .map(|c| [literal(c % lits), literal(c / lits % lits), literal(c / lits / lits)])
        .collect()
}

fn sat_cases() -> Tally {
    let clauses = all_clauses(3);
    let mut formulas: Vec<CnfFormula> = clauses.iter().map(|&c| CnfFormula::new(3, vec![c]).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let mut satisfiable = Vec::new();
    for a in &clauses {
        for b in &clauses {
            let phi = CnfFormula::new(3, vec![*a, *b]).unwrap();
            if brute_force_sat(&phi).unwrap() {
                satisfiable.push(phi);
            } else {
                formulas.push(phi);
            }
        }
    }
    formulas.extend(satisfiable.choose_multiple(&mut rng, 150).cloned());
    // Three clauses over two of the three variables are often unsatisfiable.
    let narrow = all_clauses(2);
    for _ in 0..40 {
        let picked: Vec<[i32; 3]> = (0..3).map(|_| *narrow.choose(&mut rng).unwrap()).collect();
        formulas.push(CnfFormula::new(3, picked).unwrap());
    }
    Tally::of(
        formulas
            .par_iter()
            .map(|phi| {
                let mc = sat3_to_tree_multicut(phi);
                let shape = mc.graph.is_binary_tree()
                    && mc.terminals().iter().all(|&t| mc.graph.degree(t) == 1)
                    && mc.k == (phi.num_vars + 2 * phi.clauses.len()) as i64;
                let yes = brute_force_sat(phi).unwrap();
                (yes == brute_force_multicut(&mc).unwrap(), shape, yes)
            })
            .collect(),
    )
}

fn random_simple(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for (u, v) in all_pairs(n) {
        if rng.gen_bool(p) {
            g.add_edge(u, v);
        }
    }
    g
}

fn clique_cases() -> Tally {
    let mut graphs = Vec::new();
    for n in 1..=5 {
        let pairs = all_pairs(n);
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            graphs.push(SimpleGraph::from_edges(n, &edges).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for n in 6..=7 {
        for _ in 0..300 {
            let p = rng.gen_range(0.2..0.9);
            graphs.push(random_simple(&mut rng, n, p));
        }
    }
    let cases: Vec<(SimpleGraph, i64)> = graphs
        .into_iter()
        .flat_map(|g| {
            let n = g.capacity() as i64;
            (1..=n).map(move |k| (g.clone(), k))
        })
        .collect();
    Tally::of(
        cases
            .par_iter()
            .map(|(g, k)| {
                let (cc, k2) = clique_to_cc_star(g, *k).unwrap();
                let shape = cc.real_graph().is_star() && k2 == g.capacity() as i64 - k;
                let yes = brute_force_clique(g, *k).unwrap();
                (yes == decide(&cc, k2), shape, yes)
            })
            .collect(),
    )
}

fn subdivision_cases() -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut cases = Vec::new();
    for _ in 0..1500 {
        let n = rng.gen_range(2..=5);
        let mut pairs = all_pairs(n);
        pairs.shuffle(&mut rng);
        let real = rng.gen_range(0..=4.min(pairs.len()));
        let mut g = FuzzyGraph::new(n);
        let mut matched = vec![false; n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if i < real {
                g.set_pair(u, v, EdgeKind::Real, 1).unwrap();
            } else if !matched[u] && !matched[v] && rng.gen_bool(0.6) {
                g.set_pair(u, v, EdgeKind::Non, 1).unwrap();
                matched[u] = true;
                matched[v] = true;
            }
        }
        cases.push((g, rng.gen_range(0..=2)));
    }
    Tally::of(
        cases
            .par_iter()
            .map(|(g, k)| {
                let (out, k2) = subdivide_real_edges(g, *k);
                let real = out.real_graph();
                let shape = real.degeneracy() <= 2 && real.closure().c <= 2 && k2 == *k;
                let yes = decide(g, *k);
                (yes == decide(&out, k2), shape, yes)
            })
            .collect(),
    )
}

fn reductions() -> (Outcome, Vec<(&'static str, Tally)>) {
    let tallies = vec![
        ("multicut", multicut_cases()),
        ("tree-multicut", tree_cases()),
        ("3sat", sat_cases()),
        ("clique", clique_cases()),
        ("subdivision", subdivision_cases()),
    ];
    let pass = tallies.iter().all(|(_, t)| t.mismatches == 0 && t.cases > 0);
    let detail = tallies
        .iter()
        .map(|(name, t)| format!("{name} {}/{} ({} yes)", t.cases - t.mismatches, t.cases, t.yes))
        .collect::<Vec<_>>()
        .join(", ");
    (Outcome::new(pass, detail), tallies)
}

/// Structural checks on the small cases plus larger random inputs.
fn structure(small: &[(&'static str, Tally)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures: usize = small.iter().map(|(_, t)| t.structure_failures).sum();
    let mut checked: usize = small.iter().map(|(_, t)| t.cases).sum();
    for _ in 0..40 {
        let n = rng.gen_range(5..=14);
        let g = random_simple(&mut rng, n, 0.3);
        let mut pairs = all_pairs(n);
        pairs.shuffle(&mut rng);
        pairs.truncate(rng.gen_range(0..=4));
        let mc = MulticutInstance::new(g.clone(), pairs, 3).unwrap();
        let (out, _) = multicut_to_cc(&mc);
        failures += usize::from(!non_pairs_form_matching(&out));

        let mut cc = FuzzyGraph::new(n);
        for (u, v) in g.edges() {
            cc.set_pair(u, v, EdgeKind::Real, 1).unwrap();
        }
        let (sub, _) = subdivide_real_edges(&cc, 2);
        let real = sub.real_graph();
        failures += usize::from(real.degeneracy() > 2 || real.closure().c > 2);

        let (star, _) = clique_to_cc_star(&g, rng.gen_range(1..=n as i64)).unwrap();
        failures += usize::from(!star.real_graph().is_star());

        let vars = rng.gen_range(1..=6);
        let clauses = (0..rng.gen_range(0..=8))
            .map(|_| [0; 3].map(|_| literal(rng.gen_range(0..2 * vars))))
            .collect();
        let phi = CnfFormula::new(vars, clauses).unwrap();
        let tree = sat3_to_tree_multicut(&phi);
        failures += usize::from(
            !tree.graph.is_binary_tree() || !tree.terminals().iter().all(|&t| tree.graph.degree(t) == 1),
        );
        let (tcc, _) = tree_multicut_to_cc(&tree).unwrap();
        failures += usize::from(!tcc.real_graph().is_binary_tree());
        checked += 5;
    }
    Outcome::new(failures == 0, format!("{checked} outputs checked, {failures} failures"))
}

fn monotonicity(reports: &[RuleReport]) -> Outcome {
    let inputs: Vec<(FuzzyGraph, i64)> = reports.iter().flat_map(|r| r.samples.iter().map(|s| s.input.clone())).collect();
    let results: Vec<(usize, bool)> = inputs
        .par_iter()
        .map(|(g, k)| {
            let d0 = g.fuzzy_degeneracy_ordering().d;
            let c0 = g.fuzzy_closure().c;
            let mut ok = true;
            let mut steps = 0;
            degeneracy_kernelize_with(g.clone(), *k, &mut |h, _, _| {
                steps += 1;
                ok &= h.fuzzy_degeneracy_ordering().d <= d0;
            })
            .unwrap();
            closure_kernelize_with(g.clone(), *k, &mut |h, _, _| {
                steps += 1;
                ok &= h.fuzzy_closure().c <= c0;
            })
            .unwrap();
            (steps, ok)
        })
        .collect();
    let steps: usize = results.iter().map(|r| r.0).sum();
    let bad = results.iter().filter(|r| !r.1).count();
    Outcome::new(
        bad == 0 && !inputs.is_empty(),
        format!("{} instances, {steps} rule applications, {bad} violations", inputs.len()),
    )
}

fn random_fuzzy(rng: &mut ChaCha8Rng, n: usize) -> FuzzyGraph {
    let p_real = rng.gen_range(0.0..0.7);
    let p_fuzzy = rng.gen_range(0.0..(1.0 - p_real));
    let mut g = FuzzyGraph::new(n);
    for (u, v) in all_pairs(n) {
        let r: f64 = rng.gen();
        if r < p_real {
            g.set_pair(u, v, EdgeKind::Real, rng.gen_range(1..=3)).unwrap();
        } else if r >= p_real + p_fuzzy {
            g.set_pair(u, v, EdgeKind::Non, rng.gen_range(1..=3)).unwrap();
        }
    }
    g
}

/// Minimum over all vertex orderings of the largest number of later neighbors.
fn degeneracy_by_orderings(adj: &[u32]) -> usize {
    fn search(adj: &[u32], remaining: u32, worst: usize, best: &mut usize) {
        if remaining == 0 {
            *best = (*best).min(worst);
            return;
        }
        let mut rest = remaining;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let later = (adj[v] & remaining & !(1 << v)).count_ones() as usize;
            let w = worst.max(later);
            if w < *best {
                search(adj, remaining & !(1 << v), w, best);
            }
        }
    }
    let mut best = usize::MAX;
    search(adj, (1u32 << adj.len()) - 1, 0, &mut best);
    if adj.is_empty() {
        0
    } else {
        best
    }
}

fn definitional_oracles() -> Outcome {
    let bad: usize = (0..500u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let n = rng.gen_range(1..=8);
            let g = random_fuzzy(&mut rng, n);
            let adj: Vec<u32> = (0..n)
                .map(|u| (0..n).filter(|&v| v != u && g.kind(u, v) == EdgeKind::Fuzzy).fold(0, |a, v| a | 1 << v))
                .collect();
            let ord = g.fuzzy_degeneracy_ordering();
            let mut wrong = usize::from(ord.d != degeneracy_by_orderings(&adj));
            // The reported ordering must certify its own degeneracy.
            let mut seen = 0u32;
            for (i, &v) in ord.sigma.iter().enumerate().rev() {
                let later = (adj[v] & seen).count_ones() as usize;
                wrong += usize::from(later != ord.ordering_degree[i] || later > ord.d);
                seen |= 1 << v;
            }
            let mut closure = 0;
            for (u, v) in all_pairs(n) {
                if adj[u] >> v & 1 == 0 {
                    closure = closure.max((adj[u] & adj[v]).count_ones() as usize + 1);
                }
            }
            wrong + usize::from(g.fuzzy_closure().c != closure)
        })
        .sum();
    Outcome::new(bad == 0, format!("500 graphs, {bad} disagreements"))
}

fn zero_cost() -> Outcome {
    let bad = (0..500u64)
        .into_par_iter()
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
            let n = rng.gen_range(1..=8);
            let g = random_fuzzy(&mut rng, n);
            let clean = g
                .real_components()
                .iter()
                .all(|c| c.iter().all(|&u| c.iter().all(|&v| u == v || g.kind(u, v) != EdgeKind::Non)));
            let zero = optimal_cost(&g, SolverLimits::default()).unwrap() == 0;
            clean != zero
        })
        .count();
    Outcome::new(bad == 0, format!("500 instances, {bad} disagreements"))
}

/// Fuzzy degeneracy ordering of the subgraph induced by `cluster`.
fn induced_ordering(g: &FuzzyGraph, cluster: &[usize]) -> Vec<usize> {
    let mut h = g.clone();
    for v in g.vertices().filter(|v| !cluster.contains(v)).collect::<Vec<_>>() {
        h.delete_vertex(v).unwrap();
    }
    h.fuzzy_degeneracy_ordering().sigma
}

fn large_cluster_clique() -> Outcome {
    let results: Vec<(usize, usize)> = (0..80u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
            let big = rng.gen_range(7..=10);
            let small = rng.gen_range(1..=12 - big);
            let spec = GenSpec {
                d_max: Some(rng.gen_range(0..=1)),
                planted: Some(Planted {
                    cluster_sizes: vec![big, small],
                    budget: rng.gen_range(0..=1),
                }),
                ..GenSpec::new(big + small, 0.0, 0.0, 1, seed)
            };
            let p = planted_clusters(&spec).unwrap();
            let (mut g, mut k) = (p.graph, p.k);
            while k >= 0 && apply_rule(2, &mut g, &mut k, 0).unwrap().applied {}
            if k < 0 {
                return (0, 0);
            }
            let (best, cl) = optimal_clustering(&g, SolverLimits::with_max_n(12)).unwrap();
            if best > k {
                return (0, 0);
            }
            let d = g.fuzzy_degeneracy_ordering().d as i64;
            let (mut checked, mut bad) = (0, 0);
            for cluster in cl.clusters() {
                let t = cluster.len() as i64;
                if t <= 2 * k + 2 * d {
                    continue;
                }
                checked += 1;
                let sigma = induced_ordering(&g, cluster);
                let head = &sigma[..(t - 2 * d - 2 * k - 1) as usize];
                if !g.is_real_clique(head) {
                    bad += 1;
                }
            }
            (checked, bad)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    let bad: usize = results.iter().map(|r| r.1).sum();
    Outcome::new(
        bad == 0 && checked >= 20,
        format!("{checked} large clusters checked, {bad} without a real-clique prefix"),
    )
}

fn determinism(reports: &[RuleReport]) -> Outcome {
    let mut problems = Vec::new();
    for seed in 0..30u64 {
        let spec = GenSpec {
            d_max: Some(2),
            planted: Some(Planted {
                cluster_sizes: vec![12, 9, 7, 5, 3],
                budget: 4,
            }),
            ..GenSpec::new(36, 0.0, 0.0, 1, seed)
        };
        let a = planted_clusters(&spec).unwrap();
        let b = planted_clusters(&spec).unwrap();
        if serialize_instance(&a.graph, a.k) != serialize_instance(&b.graph, b.k) {
            problems.push(format!("seed {seed}: generator output differs"));
        }
        for mode in [Mode::Degeneracy, Mode::Closure] {
            let r1 = kernelize(mode, a.graph.clone(), a.k).unwrap();
            let r2 = kernelize(mode, b.graph.clone(), b.k).unwrap();
            let t1 = serialize_trace(&r1.trace.entries);
            if t1 != serialize_trace(&r2.trace.entries) || r1.verdict != r2.verdict {
                problems.push(format!("seed {seed} {mode:?}: kernel output differs"));
            }
            let entries = parse_trace(&t1).unwrap();
            let (mut g, mut k) = (a.graph.clone(), a.k);
            if replay(&mut g, &mut k, &entries).is_err() {
                problems.push(format!("seed {seed} {mode:?}: replay rejected"));
                continue;
            }
            match &r1.verdict {
                Verdict::Reduced { graph, k: kr } => {
                    if &g != graph || k != *kr || serialize_instance(&g, k) != serialize_instance(graph, *kr) {
                        problems.push(format!("seed {seed} {mode:?}: replay differs"));
                    }
                }
                Verdict::No(_) => {
                    if k != r1.trace.final_k || g.vertex_count() != r1.trace.final_n {
                        problems.push(format!("seed {seed} {mode:?}: replay differs"));
                    }
                }
            }
        }
    }
    let again = check_rules(&VerifyConfig {
        samples: 30,
        ..suite_config()
    })
    .unwrap();
    for (r, s) in again.iter().zip(reports) {
        let same = r
            .samples
            .iter()
            .zip(&s.samples)
            .all(|(x, y)| serialize_instance(&x.input.0, x.input.1) == serialize_instance(&y.input.0, y.input.1));
        if !same {
            problems.push(format!("rule {}: harness samples differ between runs", r.rule));
        }
    }
    let detail = if problems.is_empty() {
        "30 planted instances x 2 pipelines, traces replayed; harness reruns identical".to_owned()
    } else {
        problems.join("; ")
    };
    Outcome::new(problems.is_empty(), detail)
}

fn performance() -> Outcome {
    let spec = GenSpec {
        d_max: Some(5),
        planted: Some(Planted {
            cluster_sizes: vec![20; 100],
            budget: 10,
        }),
        ..GenSpec::new(2000, 0.0, 0.0, 1, 11)
    };
    let p = planted_clusters(&spec).unwrap();
    let start = Instant::now();
    let result = degeneracy_kernelize(p.graph, p.k).unwrap();
    let elapsed = start.elapsed();
    let outcome = match &result.verdict {
        Verdict::Reduced { graph, k } => format!("kernel n={} k={k}", graph.vertex_count()),
        Verdict::No(r) => format!("verdict NO {}", r.name()),
    };
    Outcome::new(
        elapsed < Duration::from_secs(60),
        format!("n=2000 k=10 d<=5 in {:.2}s, {outcome}", elapsed.as_secs_f64()),
    )
}

fn main() {
    let mut lines: Vec<(u32, &str, Outcome, bool)> = Vec::new();
    let timed = |f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut o = f();
        o.detail = format!("{} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        o
    };
    let mut reports = Vec::new();
    lines.push((
        1,
        "rule soundness",
        timed(&mut || {
            reports = check_rules(&suite_config()).expect("rule harness");
            rule_soundness(&reports)
        }),
        true,
    ));
    let start = Instant::now();
    let (mut eq, bounds) = pipeline_equivalence();
    eq.detail = format!("{} [{:.1}s]", eq.detail, start.elapsed().as_secs_f64());
    lines.push((2, "pipeline equivalence", eq, true));
    lines.push((3, "kernel size bounds", bounds, true));
    let mut small = Vec::new();
    lines.push((
        4,
        "reduction equivalences",
        timed(&mut || {
            let (o, t) = reductions();
            small = t;
            o
        }),
        true,
    ));
    lines.push((5, "construction structure", timed(&mut || structure(&small)), true));
    lines.push((6, "parameter monotonicity", timed(&mut || monotonicity(&reports)), true));
    lines.push((7, "definitional oracles", timed(&mut definitional_oracles), true));
    lines.push((8, "zero-cost characterization", timed(&mut zero_cost), true));
    lines.push((9, "large clusters contain real cliques", timed(&mut large_cluster_clique), true));
    lines.push((10, "determinism and replay", timed(&mut || determinism(&reports)), true));
    lines.push((11, "performance smoke test", performance(), false));

    let mut failed = false;
    for (n, name, o, blocking) in &lines {
        let status = match (o.pass, blocking) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FLAGGED (soft target)",
        };
        println!("criterion {n:>2} {name}: {status}: {}", o.detail);
        failed |= !o.pass && *blocking;
    }
    if failed {
        std::process::exit(1);
    }
}
