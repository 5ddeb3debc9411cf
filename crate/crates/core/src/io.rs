//! Text formats: instances, Multicut instances, DIMACS CNF and edge files,
//! clusterings and kernel traces. Vertex ids are 1-based in every format.

use std::collections::HashSet;
use std::fmt::Write;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, FuzzyGraph, VertexId};
use crate::reductions::{CnfFormula, MulticutInstance};
use crate::rules::{TraceEntry, TraceOp};
use crate::simple::SimpleGraph;

/// Non-blank lines with `#` comments removed, paired with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> + '_ {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} '{tok}'")))
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<VertexId> {
    let v: usize = number(line, tok, "vertex")?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

fn weight(line: usize, tok: &str) -> Result<u32> {
    let w: u32 = number(line, tok, "weight")?;
    if w == 0 {
        return Err(Error::parse(line, "weights must be positive"));
    }
    Ok(w)
}

fn arity(line: usize, tokens: &[&str], expected: usize) -> Result<()> {
    if tokens.len() != expected {
        return Err(Error::parse(
            line,
            format!("'{}' expects {} fields, found {}", tokens[0], expected - 1, tokens.len() - 1),
        ));
    }
    Ok(())
}

fn kind_letter(kind: EdgeKind) -> char {
    match kind {
        EdgeKind::Real => 'e',
        EdgeKind::Non => 'x',
        EdgeKind::Fuzzy => 'f',
    }
}

/// Parses the `fcc` instance format.
pub fn parse_instance(text: &str) -> Result<(FuzzyGraph, i64)> {
    let mut lines = records(text);
    let Some((line, header)) = lines.next() else {
        return Err(Error::parse(1, "missing 'fcc <n> <fuzzy|non>' header"));
    };
    if header[0] != "fcc" || header.len() != 3 {
        return Err(Error::parse(line, "expected header 'fcc <n> <fuzzy|non>'"));
    }
    let n: usize = number(line, header[1], "vertex count")?;
    let mut g = match header[2] {
        "fuzzy" => FuzzyGraph::new(n),
        "non" => FuzzyGraph::with_nonedges(n, 1)?,
        other => return Err(Error::parse(line, format!("unknown default kind '{other}'"))),
    };
    let Some((line, kline)) = lines.next() else {
        return Err(Error::parse(line + 1, "missing 'k <int>' line"));
    };
    if kline[0] != "k" {
        return Err(Error::parse(line, "expected 'k <int>' after the header"));
    }
    arity(line, &kline, 2)?;
    let k: i64 = number(line, kline[1], "budget")?;

    let mut seen = HashSet::new();
    for (line, tokens) in lines {
        let (kind, expected) = match tokens[0] {
            "e" => (EdgeKind::Real, 4),
            "x" => (EdgeKind::Non, 4),
            "f" => (EdgeKind::Fuzzy, 3),
            "k" => return Err(Error::parse(line, "budget given twice")),
            "fcc" => return Err(Error::parse(line, "header given twice")),
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        };
        if tokens.len() != expected {
            let msg = if kind == EdgeKind::Fuzzy && tokens.len() == 4 {
                "fuzzy pairs carry no weight".to_owned()
            } else {
                format!("'{}' expects {} fields, found {}", tokens[0], expected - 1, tokens.len() - 1)
            };
            return Err(Error::parse(line, msg));
        }
        let u = vertex(line, tokens[1], n)?;
        let v = vertex(line, tokens[2], n)?;
        if u == v {
            return Err(Error::parse(line, format!("self pair at vertex {}", u + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line, format!("duplicate pair {} {}", u + 1, v + 1)));
        }
        let w = if kind == EdgeKind::Fuzzy {
            0
        } else {
            weight(line, tokens[3])?
        };
        g.set_pair(u, v, kind, w).map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok((g, k))
}

/// Canonical text of an instance. Tombstoned vertices are dropped and the
/// rest renumbered. The default kind is whichever needs fewer records, with
/// ties going to `fuzzy`; records are sorted by kind (e, x, f) and ids.
pub fn serialize_instance(g: &FuzzyGraph, k: i64) -> String {
    let g = if g.is_compact() { g.clone() } else { g.compact().0 };
    let n = g.capacity();
    let mut pairs: Vec<(EdgeKind, VertexId, VertexId, u32)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((g.kind(u, v), u, v, g.weight(u, v)));
        }
    }
    let listed_under_fuzzy = |p: &&(EdgeKind, VertexId, VertexId, u32)| p.0 != EdgeKind::Fuzzy;
    let listed_under_non = |p: &&(EdgeKind, VertexId, VertexId, u32)| !(p.0 == EdgeKind::Non && p.3 == 1);
    let fuzzy_count = pairs.iter().filter(listed_under_fuzzy).count();
    let non_count = pairs.iter().filter(listed_under_non).count();
    let (default, mut listed): (&str, Vec<_>) = if fuzzy_count <= non_count {
        ("fuzzy", pairs.iter().filter(listed_under_fuzzy).collect())
    } else {
        ("non", pairs.iter().filter(listed_under_non).collect())
    };
    listed.sort();
    let mut out = format!("fcc {n} {default}\nk {k}\n");
    for &&(kind, u, v, w) in &listed {
        match kind {
            EdgeKind::Fuzzy => writeln!(out, "f {} {}", u + 1, v + 1),
            _ => writeln!(out, "{} {} {} {w}", kind_letter(kind), u + 1, v + 1),
        }
        .expect("writing to a String");
    }
    out
}

/// Parses `mc <n> <m> <r> <k>` followed by `m` edge and `r` pair lines.
pub fn parse_multicut(text: &str) -> Result<MulticutInstance> {
    let mut lines = records(text);
    let Some((line, header)) = lines.next() else {
        return Err(Error::parse(1, "missing 'mc <n> <m> <r> <k>' header"));
    };
    if header[0] != "mc" || header.len() != 5 {
        return Err(Error::parse(line, "expected header 'mc <n> <m> <r> <k>'"));
    }
    let n: usize = number(line, header[1], "vertex count")?;
    let m: usize = number(line, header[2], "edge count")?;
    let r: usize = number(line, header[3], "pair count")?;
    let k: i64 = number(line, header[4], "budget")?;
    let mut graph = SimpleGraph::new(n);
    let mut edges = 0;
    let mut pairs = Vec::new();
    let mut seen_pairs = HashSet::new();
    let mut last = line;
    for (line, tokens) in lines {
        last = line;
        match tokens[0] {
            "edge" => {
                arity(line, &tokens, 3)?;
                let u = vertex(line, tokens[1], n)?;
                let v = vertex(line, tokens[2], n)?;
                if u == v {
                    return Err(Error::parse(line, "self loop"));
                }
                if graph.has_edge(u, v) {
                    return Err(Error::parse(line, format!("duplicate edge {} {}", u + 1, v + 1)));
                }
                graph.add_edge(u, v);
                edges += 1;
            }
            "pair" => {
                arity(line, &tokens, 3)?;
                let s = vertex(line, tokens[1], n)?;
                let t = vertex(line, tokens[2], n)?;
                if s == t {
                    return Err(Error::parse(line, "terminal pair repeats a vertex"));
                }
                if !seen_pairs.insert((s.min(t), s.max(t))) {
                    return Err(Error::parse(line, format!("duplicate pair {} {}", s + 1, t + 1)));
                }
                pairs.push((s, t));
            }
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    if edges != m || pairs.len() != r {
        return Err(Error::parse(
            last,
            format!("header announces {m} edges and {r} pairs, found {edges} and {}", pairs.len()),
        ));
    }
    MulticutInstance::new(graph, pairs, k).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn serialize_multicut(mc: &MulticutInstance) -> String {
    let edges = mc.graph.edges();
    let mut out = format!(
        "mc {} {} {} {}\n",
        mc.vertex_count(),
        edges.len(),
        mc.terminal_pairs.len(),
        mc.k
    );
    for (u, v) in edges {
        writeln!(out, "edge {} {}", u + 1, v + 1).expect("writing to a String");
    }
    for &(s, t) in &mc.terminal_pairs {
        writeln!(out, "pair {} {}", s + 1, t + 1).expect("writing to a String");
    }
    out
}

/// DIMACS lines with `c` comment lines dropped.
fn dimacs_records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> + '_ {
    records(text).filter(|(_, t)| t[0] != "c")
}

/// DIMACS `p cnf` with exactly three literals per clause. Clauses may span
/// lines; each ends with `0`.
pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut lines = dimacs_records(text);
    let Some((line, header)) = lines.next() else {
        return Err(Error::parse(1, "missing 'p cnf <vars> <clauses>' header"));
    };
    if header.len() != 4 || header[0] != "p" || header[1] != "cnf" {
        return Err(Error::parse(line, "expected header 'p cnf <vars> <clauses>'"));
    }
    let num_vars: usize = number(line, header[2], "variable count")?;
    let num_clauses: usize = number(line, header[3], "clause count")?;
    let mut clauses = Vec::with_capacity(num_clauses);
    let mut current: Vec<i32> = Vec::new();
    let mut last = line;
    for (line, tokens) in lines {
        last = line;
        for tok in tokens {
            let lit: i32 = number(line, tok, "literal")?;
            if lit == 0 {
                let clause: [i32; 3] = current.as_slice().try_into().map_err(|_| {
                    Error::parse(line, format!("clause has {} literals, expected 3", current.len()))
                })?;
                clauses.push(clause);
                current.clear();
                continue;
            }
            if lit.unsigned_abs() as usize > num_vars {
                return Err(Error::parse(line, format!("literal {lit} outside 1..={num_vars}")));
            }
            current.push(lit);
        }
    }
    if !current.is_empty() {
        return Err(Error::parse(last, "last clause is not terminated by 0"));
    }
    if clauses.len() != num_clauses {
        return Err(Error::parse(
            last,
            format!("header announces {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(num_vars, clauses).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn serialize_cnf(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.num_vars, phi.clauses.len());
    for [a, b, c] in &phi.clauses {
        writeln!(out, "{a} {b} {c} 0").expect("writing to a String");
    }
    out
}

/// DIMACS `p edge <n> <m>` (or `p col`) graph with `e u v` lines.
pub fn parse_dimacs_graph(text: &str) -> Result<SimpleGraph> {
    let mut lines = dimacs_records(text);
    let Some((line, header)) = lines.next() else {
        return Err(Error::parse(1, "missing 'p edge <n> <m>' header"));
    };
    if header.len() != 4 || header[0] != "p" || !matches!(header[1], "edge" | "col") {
        return Err(Error::parse(line, "expected header 'p edge <n> <m>'"));
    }
    let n: usize = number(line, header[2], "vertex count")?;
    let m: usize = number(line, header[3], "edge count")?;
    let mut g = SimpleGraph::new(n);
    let mut edges = 0;
    let mut last = line;
    for (line, tokens) in lines {
        last = line;
        if tokens[0] != "e" {
            return Err(Error::parse(line, format!("unknown record '{}'", tokens[0])));
        }
        arity(line, &tokens, 3)?;
        let u = vertex(line, tokens[1], n)?;
        let v = vertex(line, tokens[2], n)?;
        if u == v {
            return Err(Error::parse(line, "self loop"));
        }
        if g.has_edge(u, v) {
            return Err(Error::parse(line, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
        g.add_edge(u, v);
        edges += 1;
    }
    if edges != m {
        return Err(Error::parse(last, format!("header announces {m} edges, found {edges}")));
    }
    Ok(g)
}

pub fn serialize_dimacs_graph(g: &SimpleGraph) -> String {
    let edges = g.edges();
    let mut out = format!("p edge {} {}\n", g.capacity(), edges.len());
    for (u, v) in edges {
        writeln!(out, "e {} {}", u + 1, v + 1).expect("writing to a String");
    }
    out
}

/// One line per cluster with ascending ids, clusters ordered by first id.
pub fn serialize_clustering(cl: &Clustering) -> String {
    let mut out = String::new();
    for c in cl.clusters() {
        let ids: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_clustering(text: &str) -> Result<Clustering> {
    let mut clusters = Vec::new();
    let mut seen = HashSet::new();
    for (line, tokens) in records(text) {
        let mut cluster = Vec::with_capacity(tokens.len());
        for tok in tokens {
            let v = vertex(line, tok, usize::MAX)?;
            if !seen.insert(v) {
                return Err(Error::parse(line, format!("vertex {} appears twice", v + 1)));
            }
            cluster.push(v);
        }
        clusters.push(cluster);
    }
    Clustering::from_clusters(clusters)
}

fn pair_state((kind, w): (EdgeKind, u32)) -> String {
    format!("{}{w}", kind_letter(kind))
}

fn parse_pair_state(line: usize, tok: &str) -> Result<(EdgeKind, u32)> {
    let mut chars = tok.chars();
    let kind = match chars.next() {
        Some('e') => EdgeKind::Real,
        Some('x') => EdgeKind::Non,
        Some('f') => EdgeKind::Fuzzy,
        _ => return Err(Error::parse(line, format!("invalid pair state '{tok}'"))),
    };
    let w: u32 = number(line, chars.as_str(), "weight")?;
    if (kind == EdgeKind::Fuzzy) != (w == 0) {
        return Err(Error::parse(line, format!("pair state '{tok}' has the wrong weight for its kind")));
    }
    Ok((kind, w))
}

/// `rule <id> k <before> <after>` per entry, followed by its indented
/// `set u v <old> <new>` and `del v` operations.
pub fn serialize_trace(entries: &[TraceEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        writeln!(out, "rule {} k {} {}", e.rule, e.k_before, e.k_after).expect("writing to a String");
        for op in &e.ops {
            match *op {
                TraceOp::Set { u, v, before, after } => writeln!(
                    out,
                    "  set {} {} {} {}",
                    u + 1,
                    v + 1,
                    pair_state(before),
                    pair_state(after)
                ),
                TraceOp::Delete(v) => writeln!(out, "  del {}", v + 1),
            }
            .expect("writing to a String");
        }
    }
    out
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceEntry>> {
    let mut entries: Vec<TraceEntry> = Vec::new();
    for (line, tokens) in records(text) {
        match tokens[0] {
            "rule" => {
                arity(line, &tokens, 5)?;
                if tokens[2] != "k" {
                    return Err(Error::parse(line, "expected 'rule <id> k <before> <after>'"));
                }
                entries.push(TraceEntry {
                    rule: number(line, tokens[1], "rule id")?,
                    ops: Vec::new(),
                    k_before: number(line, tokens[3], "budget")?,
                    k_after: number(line, tokens[4], "budget")?,
                });
            }
            "set" | "del" => {
                let Some(entry) = entries.last_mut() else {
                    return Err(Error::parse(line, "operation before the first rule line"));
                };
                let op = if tokens[0] == "set" {
                    arity(line, &tokens, 5)?;
                    TraceOp::Set {
                        u: vertex(line, tokens[1], usize::MAX)?,
                        v: vertex(line, tokens[2], usize::MAX)?,
                        before: parse_pair_state(line, tokens[3])?,
                        after: parse_pair_state(line, tokens[4])?,
                    }
                } else {
                    arity(line, &tokens, 2)?;
                    TraceOp::Delete(vertex(line, tokens[1], usize::MAX)?)
                };
                entry.ops.push(op);
            }
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    Ok(entries)
}
