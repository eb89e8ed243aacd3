//! `qalist`: the alist sparse-matrix format extended with GF(q) labels.
//!
//! ```text
//! n m q
//! max_var_degree max_check_degree
//! var degrees (n values)
//! check degrees (m values)
//! n lines of 1-based check indices, one line per variable
//! m lines of 1-based variable indices, one line per check
//! labels:
//! m lines of labels in [1, q-1], aligned with the check lines above
//! ```
//!
//! A plain alist header `n m` means q = 2. Without a `labels:` block every
//! label is 1. Zero padding inside adjacency lines is accepted on input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::graph::{Edge, TannerGraph};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

pub fn to_qalist(graph: &TannerGraph) -> String {
    let mut out = String::new();
    let n = graph.n();
    let m = graph.m();
    let var_deg: Vec<usize> = (0..n).map(|v| graph.var_degree(v)).collect();
    let check_deg: Vec<usize> = (0..m).map(|c| graph.check_degree(c)).collect();
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    writeln!(out, "{n} {m} {}", graph.field().q()).unwrap();
    writeln!(
        out,
        "{} {}",
        var_deg.iter().max().copied().unwrap_or(0),
        check_deg.iter().max().copied().unwrap_or(0)
    )
    .unwrap();
    writeln!(out, "{}", join(&mut var_deg.iter().copied())).unwrap();
    writeln!(out, "{}", join(&mut check_deg.iter().copied())).unwrap();
    for v in 0..n {
        let mut it = graph.var_edges(v).iter().map(|&e| graph.edges()[e].check + 1);
        writeln!(out, "{}", join(&mut it)).unwrap();
    }
    for c in 0..m {
        let mut it = graph.check_edges(c).iter().map(|e| e.var + 1);
        writeln!(out, "{}", join(&mut it)).unwrap();
    }
    out.push_str("labels:\n");
    for c in 0..m {
        let mut it = graph.check_edges(c).iter().map(|e| e.label.value() as usize);
        writeln!(out, "{}", join(&mut it)).unwrap();
    }
    out
}

pub fn write_graph(graph: &TannerGraph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_qalist(graph))?;
    Ok(())
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<TannerGraph> {
    parse_qalist(&fs::read_to_string(path)?)
}

struct Token {
    value: usize,
    column: usize,
}

struct Line {
    number: usize,
    text: String,
}

impl Line {
    fn tokens(&self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        let bytes = self.text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            let word = &self.text[start..i];
            let value = word.parse::<usize>().map_err(|_| {
                Error::parse(self.number, start + 1, format!("expected an integer, found `{word}`"))
            })?;
            out.push(Token {
                value,
                column: start + 1,
            });
        }
        Ok(out)
    }

    fn expect_count(&self, count: usize, what: &str) -> Result<Vec<Token>> {
        let toks = self.tokens()?;
        if toks.len() != count {
            return Err(Error::parse(
                self.number,
                1,
                format!("expected {count} {what}, found {}", toks.len()),
            ));
        }
        Ok(toks)
    }
}

pub fn parse_qalist(text: &str) -> Result<TannerGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            text: l.to_string(),
        })
        .filter(|l| !l.text.trim().is_empty());
    let mut next_line = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(text.lines().count() + 1, 1, format!("unexpected end of input, expected {what}")))
    };

    let header = next_line("header")?;
    let head = header.tokens()?;
    if head.len() != 2 && head.len() != 3 {
        return Err(Error::parse(header.number, 1, "header must be `n m` or `n m q`"));
    }
    let (n, m) = (head[0].value, head[1].value);
    let q = head.get(2).map_or(2, |t| t.value);
    if !q.is_power_of_two() || q < 2 {
        return Err(Error::parse(header.number, head[2].column, format!("q = {q} is not a power of two")));
    }
    let field = Field::new(q.trailing_zeros())
        .map_err(|e| Error::parse(header.number, head[2].column, e.to_string()))?;

    let _max = next_line("maximum degrees")?.expect_count(2, "maximum degrees")?;
    let var_deg_line = next_line("variable degrees")?;
    let var_deg: Vec<usize> = var_deg_line
        .expect_count(n, "variable degrees")?
        .iter()
        .map(|t| t.value)
        .collect();
    let check_deg_line = next_line("check degrees")?;
    let check_deg: Vec<usize> = check_deg_line
        .expect_count(m, "check degrees")?
        .iter()
        .map(|t| t.value)
        .collect();

    let mut var_adj: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let line = next_line("variable adjacency")?;
        let mut adj = Vec::new();
        for t in line.tokens()?.into_iter().filter(|t| t.value != 0) {
            if t.value > m {
                return Err(Error::parse(line.number, t.column, format!("check index {} > {m}", t.value)));
            }
            adj.push(t.value - 1);
        }
        if adj.len() != var_deg[v] {
            return Err(Error::parse(
                line.number,
                1,
                format!("variable {} lists {} checks, degree says {}", v + 1, adj.len(), var_deg[v]),
            ));
        }
        var_adj.push(adj);
    }

    let mut check_adj: Vec<Vec<usize>> = Vec::with_capacity(m);
    for c in 0..m {
        let line = next_line("check adjacency")?;
        let mut adj = Vec::new();
        for t in line.tokens()?.into_iter().filter(|t| t.value != 0) {
            if t.value > n {
                return Err(Error::parse(line.number, t.column, format!("variable index {} > {n}", t.value)));
            }
            adj.push(t.value - 1);
        }
        if adj.len() != check_deg[c] {
            return Err(Error::parse(
                line.number,
                1,
                format!("check {} lists {} variables, degree says {}", c + 1, adj.len(), check_deg[c]),
            ));
        }
        check_adj.push(adj);
    }

    // both adjacency views must describe the same edge set
    let mut from_vars: Vec<(usize, usize)> = var_adj
        .iter()
        .enumerate()
        .flat_map(|(v, cs)| cs.iter().map(move |&c| (c, v)))
        .collect();
    let mut from_checks: Vec<(usize, usize)> = check_adj
        .iter()
        .enumerate()
        .flat_map(|(c, vs)| vs.iter().map(move |&v| (c, v)))
        .collect();
    from_vars.sort_unstable();
    from_checks.sort_unstable();
    if from_vars != from_checks {
        return Err(Error::parse(
            check_deg_line.number,
            1,
            "variable and check adjacency lists disagree",
        ));
    }

    let mut edges = Vec::with_capacity(from_checks.len());
    match lines.next() {
        None => {
            for (c, vs) in check_adj.iter().enumerate() {
                for &v in vs {
                    edges.push(Edge { check: c, var: v, label: FieldElement::ONE });
                }
            }
        }
        Some(marker) => {
            if marker.text.trim() != "labels:" {
                return Err(Error::parse(marker.number, 1, "expected `labels:` or end of input"));
            }
            for (c, vs) in check_adj.iter().enumerate() {
                let line = lines.next().ok_or_else(|| {
                    Error::parse(marker.number + c + 1, 1, format!("missing label line for check {}", c + 1))
                })?;
                let toks = line.expect_count(vs.len(), "labels")?;
                for (t, &v) in toks.iter().zip(vs) {
                    if t.value == 0 || t.value >= q {
                        return Err(Error::parse(
                            line.number,
                            t.column,
                            format!("label {} outside [1, {}]", t.value, q - 1),
                        ));
                    }
                    edges.push(Edge { check: c, var: v, label: FieldElement::new(t.value as u8) });
                }
            }
            if let Some(extra) = lines.next() {
                return Err(Error::parse(extra.number, 1, "trailing content after labels"));
            }
        }
    }
    TannerGraph::new(field, n, m, edges)
}
