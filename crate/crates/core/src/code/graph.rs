use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::distribution::{DegreeDistribution, LabelDistribution};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub check: usize,
    pub var: usize,
    pub label: FieldElement,
}

/// Bipartite graph with a nonzero label on every edge.
///
/// Edges are stored check-major and sorted by variable index inside each
/// check; that order is the canonical edge numbering used everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    field: Field,
    n: usize,
    m: usize,
    edges: Vec<Edge>,
    check_start: Vec<usize>,
    var_edges: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn new(field: Field, n: usize, m: usize, mut edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            if e.check >= m || e.var >= n {
                return Err(Error::Graph(format!(
                    "edge ({}, {}) outside {m} checks x {n} variables",
                    e.check, e.var
                )));
            }
            if e.label.is_zero() || e.label.value() as usize >= field.q() {
                return Err(Error::Graph(format!(
                    "edge ({}, {}) has invalid label {}",
                    e.check, e.var, e.label
                )));
            }
        }
        edges.sort_by_key(|e| (e.check, e.var));
        if let Some(w) = edges
            .windows(2)
            .find(|w| w[0].check == w[1].check && w[0].var == w[1].var)
        {
            return Err(Error::Graph(format!(
                "parallel edge between check {} and variable {}",
                w[0].check, w[0].var
            )));
        }
        let mut check_start = vec![0usize; m + 1];
        for e in &edges {
            check_start[e.check + 1] += 1;
        }
        for c in 0..m {
            check_start[c + 1] += check_start[c];
        }
        let mut var_edges = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            var_edges[e.var].push(id);
        }
        Ok(TannerGraph {
            field,
            n,
            m,
            edges,
            check_start,
            var_edges,
        })
    }

    /// Builds a graph from parity-check rows of `(variable, coefficient)`;
    /// zero coefficients are dropped.
    pub fn from_rows(field: Field, n: usize, rows: &[Vec<(usize, FieldElement)>]) -> Result<Self> {
        let edges = rows
            .iter()
            .enumerate()
            .flat_map(|(c, row)| {
                row.iter()
                    .filter(|(_, h)| !h.is_zero())
                    .map(move |&(var, label)| Edge { check: c, var, label })
            })
            .collect();
        Self::new(field, n, rows.len(), edges)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of variable nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of check nodes.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn check_edge_range(&self, c: usize) -> std::ops::Range<usize> {
        self.check_start[c]..self.check_start[c + 1]
    }

    pub fn check_edges(&self, c: usize) -> &[Edge] {
        &self.edges[self.check_edge_range(c)]
    }

    /// Edge ids incident to variable `v`, in increasing check order.
    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_edges[v]
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_start[c + 1] - self.check_start[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_edges[v].len()
    }

    pub fn labels(&self) -> Vec<FieldElement> {
        self.edges.iter().map(|e| e.label).collect()
    }

    /// Same topology with new labels, given in canonical edge order.
    pub fn with_labels(&self, labels: &[FieldElement]) -> Result<Self> {
        if labels.len() != self.edges.len() {
            return Err(Error::Graph(format!(
                "{} labels for {} edges",
                labels.len(),
                self.edges.len()
            )));
        }
        if let Some(bad) = labels
            .iter()
            .find(|h| h.is_zero() || h.value() as usize >= self.field.q())
        {
            return Err(Error::Graph(format!("invalid label {bad}")));
        }
        let mut g = self.clone();
        for (e, h) in g.edges.iter_mut().zip(labels) {
            e.label = *h;
        }
        Ok(g)
    }

    /// Parity-check rows `(variable, label)`.
    pub fn rows(&self) -> Vec<Vec<(usize, FieldElement)>> {
        (0..self.m)
            .map(|c| self.check_edges(c).iter().map(|e| (e.var, e.label)).collect())
            .collect()
    }

    /// Whether `word` satisfies every check.
    pub fn is_codeword(&self, word: &[FieldElement]) -> bool {
        (0..self.m).all(|c| {
            self.check_edges(c)
                .iter()
                .fold(FieldElement::ZERO, |acc, e| acc + self.field.mul(e.label, word[e.var]))
                .is_zero()
        })
    }
}

fn node_counts(fractions: &[f64], total: usize, what: &str) -> Result<Vec<usize>> {
    fractions
        .iter()
        .map(|f| {
            let x = f * total as f64;
            let r = x.round();
            if (x - r).abs() > 1e-6 {
                Err(Error::InfeasibleDegrees(format!(
                    "{what} node count {x} is not integral"
                )))
            } else {
                Ok(r as usize)
            }
        })
        .collect()
}

/// Samples a configuration-model graph with i.i.d. labels.
///
/// Parallel edges are removed by random socket swaps (up to 100 tries per
/// conflict); if that fails, the whole pairing is redrawn (up to 100 times).
pub fn sample_graph(
    field: &Field,
    n: usize,
    dd: &DegreeDistribution,
    labels: &LabelDistribution,
    seed: u64,
) -> Result<TannerGraph> {
    let mut rng = rng::stream(seed, &[]);
    let var_counts = node_counts(&dd.var_node_fractions(), n, "variable")?;
    if var_counts.iter().sum::<usize>() != n {
        return Err(Error::InfeasibleDegrees("variable counts do not sum to n".into()));
    }
    let mut var_sockets = Vec::new();
    let mut v = 0;
    for (deg, &count) in var_counts.iter().enumerate() {
        for _ in 0..count {
            var_sockets.extend(std::iter::repeat_n(v, deg));
            v += 1;
        }
    }
    let num_edges = var_sockets.len();
    let check_counts: Vec<usize> = dd
        .rho()
        .iter()
        .enumerate()
        .map(|(deg, r)| {
            if deg == 0 || *r == 0.0 {
                return Ok(0);
            }
            let x = r * num_edges as f64 / deg as f64;
            let rounded = x.round();
            if (x - rounded).abs() > 1e-6 {
                Err(Error::InfeasibleDegrees(format!(
                    "{x} checks of degree {deg} is not integral"
                )))
            } else {
                Ok(rounded as usize)
            }
        })
        .collect::<Result<_>>()?;
    let mut check_sockets = Vec::with_capacity(num_edges);
    let mut c = 0;
    for (deg, &count) in check_counts.iter().enumerate() {
        for _ in 0..count {
            check_sockets.extend(std::iter::repeat_n(c, deg));
            c += 1;
        }
    }
    let m = c;
    if check_sockets.len() != num_edges {
        return Err(Error::InfeasibleDegrees(format!(
            "{num_edges} variable sockets but {} check sockets",
            check_sockets.len()
        )));
    }

    for _ in 0..100 {
        check_sockets.shuffle(&mut rng);
        if let Some(pairs) = repair_parallel_edges(&var_sockets, &mut check_sockets, &mut rng) {
            let mut edges: Vec<Edge> = pairs
                .into_iter()
                .map(|(var, check)| Edge {
                    check,
                    var,
                    label: FieldElement::ONE,
                })
                .collect();
            edges.sort_by_key(|e| (e.check, e.var));
            for e in &mut edges {
                e.label = labels.sample(&mut rng);
            }
            return TannerGraph::new(*field, n, m, edges);
        }
    }
    Err(Error::InfeasibleDegrees(
        "could not avoid parallel edges".into(),
    ))
}

fn repair_parallel_edges<R: Rng>(
    var_sockets: &[usize],
    check_sockets: &mut [usize],
    rng: &mut R,
) -> Option<Vec<(usize, usize)>> {
    let len = var_sockets.len();
    let mut counts: HashMap<(usize, usize), u32> = HashMap::with_capacity(len);
    for i in 0..len {
        *counts.entry((var_sockets[i], check_sockets[i])).or_default() += 1;
    }
    for i in 0..len {
        let (vi, ci) = (var_sockets[i], check_sockets[i]);
        if counts[&(vi, ci)] <= 1 {
            continue;
        }
        let mut fixed = false;
        for _ in 0..100 {
            let k = rng.random_range(0..len);
            let (vk, ck) = (var_sockets[k], check_sockets[k]);
            if vk == vi || ck == ci {
                continue;
            }
            let free = |key: (usize, usize)| counts.get(&key).copied().unwrap_or(0) == 0;
            if !free((vi, ck)) || !free((vk, ci)) {
                continue;
            }
            *counts.get_mut(&(vi, ci)).unwrap() -= 1;
            *counts.get_mut(&(vk, ck)).unwrap() -= 1;
            *counts.entry((vi, ck)).or_default() += 1;
            *counts.entry((vk, ci)).or_default() += 1;
            check_sockets.swap(i, k);
            fixed = true;
            break;
        }
        if !fixed {
            return None;
        }
    }
    Some(
        var_sockets
            .iter()
            .copied()
            .zip(check_sockets.iter().copied())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: u32) -> Field {
        Field::new(s).unwrap()
    }

    #[test]
    fn regular_36_counts() {
        let field = f(2);
        let dd = DegreeDistribution::regular(3, 6).unwrap();
        let g = sample_graph(&field, 12, &dd, &LabelDistribution::uniform(&field), 1).unwrap();
        assert_eq!(g.m(), 6);
        assert_eq!(g.num_edges(), 36);
        assert!((0..12).all(|v| g.var_degree(v) == 3));
        assert!((0..6).all(|c| g.check_degree(c) == 6));
    }

    #[test]
    fn regular_3_27_check_count() {
        let field = f(2);
        let dd = DegreeDistribution::regular(3, 27).unwrap();
        let g = sample_graph(&field, 513, &dd, &LabelDistribution::uniform(&field), 9).unwrap();
        assert_eq!(g.m(), 57);
        let var_sum: usize = (0..g.n()).map(|v| g.var_degree(v)).sum();
        let check_sum: usize = (0..g.m()).map(|c| g.check_degree(c)).sum();
        assert_eq!(var_sum, check_sum);
    }

    #[test]
    fn infeasible_lengths() {
        let field = f(2);
        let dd = DegreeDistribution::regular(3, 6).unwrap();
        assert!(matches!(
            sample_graph(&field, 13, &dd, &LabelDistribution::uniform(&field), 1),
            Err(Error::InfeasibleDegrees(_))
        ));
    }

    #[test]
    fn label_histogram_matches_distribution() {
        let field = f(3);
        let dd = DegreeDistribution::regular(3, 6).unwrap();
        let weights = vec![0.0, 0.4, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1];
        let ld = LabelDistribution::new(weights.clone()).unwrap();
        let g = sample_graph(&field, 33_334, &dd, &ld, 4).unwrap();
        let total = g.num_edges() as f64;
        assert!(total >= 1e5);
        let mut hist = vec![0usize; 8];
        for e in g.edges() {
            hist[e.label.value() as usize] += 1;
        }
        for (h, w) in hist.iter().zip(&weights) {
            let sigma = (total * w * (1.0 - w)).sqrt();
            assert!((*h as f64 - total * w).abs() <= 4.0 * sigma.max(1e-9));
        }
    }

    #[test]
    fn rejects_zero_label_and_parallel_edges() {
        let field = f(2);
        let e = |check, var, label| Edge {
            check,
            var,
            label: FieldElement::new(label),
        };
        assert!(TannerGraph::new(field, 2, 1, vec![e(0, 0, 0)]).is_err());
        assert!(TannerGraph::new(field, 2, 1, vec![e(0, 0, 1), e(0, 0, 2)]).is_err());
        assert!(TannerGraph::new(field, 2, 1, vec![e(0, 0, 1), e(0, 1, 4)]).is_err());
    }

    #[test]
    fn no_parallel_edges_in_dense_small_graphs() {
        let field = f(2);
        let dd = DegreeDistribution::regular(3, 4).unwrap();
        for seed in 0..50 {
            let g = sample_graph(&field, 8, &dd, &LabelDistribution::uniform(&field), seed).unwrap();
            assert_eq!(g.num_edges(), 24);
        }
    }
}
