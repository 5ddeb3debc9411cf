use fuzzycc_core::io::{
    parse_clustering, parse_cnf, parse_dimacs_graph, parse_instance, parse_multicut, parse_trace, serialize_clustering,
    serialize_cnf, serialize_dimacs_graph, serialize_instance, serialize_multicut, serialize_trace,
};
use fuzzycc_core::{
    clique_to_cc_star, generate, kernelize, multicut_to_cc, sat3_to_tree_multicut, tree_multicut_to_cc, CnfFormula,
    EdgeKind, Error, GenSpec, Mode, Planted, SimpleGraph, Verdict,
};

const FOUR: &str = "\
# four vertices, unlisted pairs are Non with weight 1
fcc 4 non
k 2
e 1 2 3
e 2 3 1
f 1 3
f 3 4
x 1 4 2
";

#[test]
fn four_vertex_example_matches_file() {
    let (g, k) = parse_instance(FOUR).unwrap();
    assert_eq!(k, 2);
    assert_eq!(g.vertex_count(), 4);
    for line in FOUR.lines().filter(|l| !l.starts_with('#')).skip(2) {
        let t: Vec<&str> = line.split_whitespace().collect();
        let u: usize = t[1].parse::<usize>().unwrap() - 1;
        let v: usize = t[2].parse::<usize>().unwrap() - 1;
        let (kind, w) = match t[0] {
            "e" => (EdgeKind::Real, t[3].parse().unwrap()),
            "x" => (EdgeKind::Non, t[3].parse().unwrap()),
            _ => (EdgeKind::Fuzzy, 0),
        };
        assert_eq!((g.kind(u, v), g.weight(u, v)), (kind, w), "{line}");
        assert_eq!((g.kind(v, u), g.weight(v, u)), (kind, w), "{line}");
    }
    assert_eq!((g.kind(1, 3), g.weight(1, 3)), (EdgeKind::Non, 1));
}

#[test]
fn duplicate_pair_reports_line() {
    let err = parse_instance("fcc 3 non\nk 0\ne 1 2 3\ne 1 2 3\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
}

#[test]
fn two_vertex_fuzzy_default() {
    let (g, k) = parse_instance("fcc 2 fuzzy\nk 0\n").unwrap();
    assert_eq!(k, 0);
    assert_eq!(g.kind(0, 1), EdgeKind::Fuzzy);
}

fn specs() -> Vec<GenSpec> {
    let mut out = Vec::new();
    for seed in 0..12u64 {
        let n = 5 + (seed as usize * 7) % 30;
        out.push(GenSpec::new(n, 0.3, 0.3, 1 + seed as u32 % 4, seed));
        out.push(GenSpec {
            d_max: Some(seed as usize % 4),
            ..GenSpec::new(n, 0.5, 0.0, 2, seed)
        });
        out.push(GenSpec {
            c_max: Some(1 + seed as usize % 3),
            ..GenSpec::new(n, 0.4, 0.2, 1, seed)
        });
        let sizes = vec![n / 3, n / 3, n - 2 * (n / 3)];
        out.push(GenSpec {
            planted: Some(Planted {
                cluster_sizes: sizes,
                budget: seed as usize % 5,
            }),
            ..GenSpec::new(n, 0.0, 0.2, 1, seed)
        });
    }
    out
}

#[test]
fn generator_outputs_round_trip() {
    for spec in specs() {
        let gen = generate(&spec).unwrap();
        let text = serialize_instance(&gen.graph, gen.k);
        let (g, k) = parse_instance(&text).unwrap();
        assert_eq!(g, gen.graph, "{spec:?}");
        assert_eq!(k, gen.k);
        assert_eq!(serialize_instance(&g, k), text);
        assert_eq!(text, serialize_instance(&generate(&spec).unwrap().graph, gen.k));
        if let Some(w) = &gen.witness {
            assert_eq!(&parse_clustering(&serialize_clustering(w)).unwrap(), w);
        }
    }
}

#[test]
fn kernel_outputs_and_traces_round_trip() {
    for spec in specs() {
        let gen = generate(&spec).unwrap();
        for mode in [Mode::Degeneracy, Mode::Closure] {
            let r = kernelize(mode, gen.graph.clone(), gen.k.max(1)).unwrap();
            let entries = &r.trace.entries;
            assert_eq!(&parse_trace(&serialize_trace(entries)).unwrap(), entries);
            if let Verdict::Reduced { graph, k } = &r.verdict {
                let text = serialize_instance(graph, *k);
                let (h, k2) = parse_instance(&text).unwrap();
                assert_eq!(serialize_instance(&h, k2), text);
            }
        }
    }
}

#[test]
fn reduction_outputs_round_trip() {
    let phi = CnfFormula::new(3, vec![[1, -2, 3], [-1, 2, -3]]).unwrap();
    assert_eq!(parse_cnf(&serialize_cnf(&phi)).unwrap(), phi);
    let mc = sat3_to_tree_multicut(&phi);
    let mc_text = serialize_multicut(&mc);
    assert_eq!(serialize_multicut(&parse_multicut(&mc_text).unwrap()), mc_text);
    for (g, k) in [tree_multicut_to_cc(&mc).unwrap(), multicut_to_cc(&mc)] {
        let text = serialize_instance(&g, k);
        assert_eq!(serialize_instance(&parse_instance(&text).unwrap().0, k), text);
    }

    let mut sg = SimpleGraph::new(5);
    for (u, v) in [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)] {
        sg.add_edge(u, v);
    }
    let d = serialize_dimacs_graph(&sg);
    assert_eq!(serialize_dimacs_graph(&parse_dimacs_graph(&d).unwrap()), d);
    let (star, k) = clique_to_cc_star(&sg, 3).unwrap();
    let text = serialize_instance(&star, k);
    assert_eq!(parse_instance(&text).unwrap().0, star);

    // Sparse input: the star output is mostly Non pairs.
    let path = SimpleGraph::from_edges(8, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let (star, k) = clique_to_cc_star(&path, 2).unwrap();
    let text = serialize_instance(&star, k);
    assert!(text.starts_with("fcc 9 non\n"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with('x')).count(), 0);
    assert_eq!(parse_instance(&text).unwrap().0, star);
}
