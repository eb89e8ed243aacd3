//! Edge-label design for finite-length codes.
//!
//! Two local constructions make a check resolve its partially erased
//! neighbours on its own:
//! * `{alpha^(t*j)}` for `t < s/j` resolves up to `s/j` neighbours erased to
//!   type at most `j` (the monomials occupy disjoint degree ranges);
//! * a *universal pair* `(1, h)` resolves two neighbours of any types
//!   `j1 + j2 <= s`.
//!
//! [`optimize_labels`] finds stopping sets by repeated binary peeling and
//! places these labels on the checks inside them. Topology is never changed.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::TannerGraph;
use crate::decoder::{check_locally_resolvable, is_stopping_set, Peeler};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::rng;
use crate::subgroup::reduced_basis;

pub const DEFAULT_RUNS: usize = 1000;

/// Largest `j <= jmax` dividing `s`.
pub fn divisor_fallback(s: usize, jmax: usize) -> usize {
    (1..=jmax.min(s)).rev().find(|j| s % j == 0).unwrap_or(1)
}

/// `{alpha^(t*jmax)}` for `t = 0..s/jmax`.
pub fn resolvable_labels(field: &Field, jmax: usize) -> Result<Vec<FieldElement>> {
    let s = field.s() as usize;
    if jmax == 0 || s % jmax != 0 {
        return Err(Error::Divisibility { divisor: jmax, value: s });
    }
    Ok((0..s / jmax).map(|t| field.alpha_pow((t * jmax) as i64)).collect())
}

fn independent(vectors: &[FieldElement]) -> bool {
    reduced_basis(vectors.iter().copied()).len() == vectors.len()
}

/// Every `h` that survives the exclusion chain: for each `k = 1..s-1` the set
/// `{w_1..w_{s-k}, h w_1..h w_k}` must be a basis, with `w_i = alpha^(i-1)`.
pub fn universal_candidates(field: &Field) -> Vec<FieldElement> {
    let s = field.s() as usize;
    let omega: Vec<FieldElement> = (0..s).map(|i| field.alpha_pow(i as i64)).collect();
    field
        .elements()
        .filter(|&h| {
            (1..s).all(|k| {
                let mut set: Vec<FieldElement> = omega[..s - k].to_vec();
                set.extend(omega[..k].iter().map(|&w| field.mul(h, w)));
                independent(&set)
            })
        })
        .filter(|h| !h.is_zero())
        .collect()
}

/// `(1, h)` with `h` the smallest surviving candidate.
pub fn universal_pair(field: &Field) -> (FieldElement, FieldElement) {
    let h = universal_candidates(field)
        .first()
        .copied()
        .unwrap_or(FieldElement::ONE);
    (FieldElement::ONE, h)
}

/// Brute-force check that `(h1, h2)` resolves every `(j1, j2)` with `j1 + j2 <= s`.
pub fn is_universal(field: &Field, h1: FieldElement, h2: FieldElement) -> bool {
    let s = field.s() as usize;
    (0..=s).all(|j1| {
        (0..=s - j1).all(|j2| check_locally_resolvable(field, &[h1, h2], &[j1, j2]).unwrap_or(false))
    })
}

/// Residual sets from repeated peeling, deduplicated, with occurrence ranks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoppingSetSample {
    /// Sorted variable indices of each distinct residual set, in discovery order.
    pub sets: Vec<Vec<usize>>,
    /// Number of stored sets containing each variable.
    pub rank: Vec<usize>,
}

/// Runs the binary peeling decoder `runs` times with erasure probability `eps`.
pub fn sample_stopping_sets(graph: &TannerGraph, eps: f64, runs: usize, seed: u64) -> Result<StoppingSetSample> {
    let n = graph.n();
    let residuals: Vec<Vec<usize>> = (0..runs)
        .into_par_iter()
        .map_init(
            || Peeler::new(graph),
            |peeler, r| {
                let mut stream = rng::stream(seed, &[r as u64]);
                let mut erased: Vec<bool> =
                    (0..n).map(|_| rand::Rng::random_bool(&mut stream, eps)).collect();
                peeler.peel(&mut erased);
                (0..n).filter(|&v| erased[v]).collect()
            },
        )
        .collect();
    let mut seen = HashSet::new();
    let mut sets = Vec::new();
    for set in residuals.into_iter().filter(|s| !s.is_empty()) {
        if seen.insert(set.clone()) {
            let mut mask = vec![false; n];
            set.iter().for_each(|&v| mask[v] = true);
            if !is_stopping_set(graph, &mask) {
                return Err(Error::Graph("peeling residual is not a stopping set".into()));
            }
            sets.push(set);
        }
    }
    let mut rank = vec![0; n];
    for set in &sets {
        for &v in set {
            rank[v] += 1;
        }
    }
    Ok(StoppingSetSample { sets, rank })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelOverride {
    pub check: usize,
    /// Position of the edge inside the check's (variable-sorted) edge list.
    pub edge_position: usize,
    pub old_label: FieldElement,
    pub new_label: FieldElement,
    /// Algorithm step (3, 4 or 5) that assigned the label.
    pub step: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingPlan {
    pub overrides: Vec<LabelOverride>,
}

const PLAN_HEADER: &str = "check_index,edge_position,old_label,new_label,step";

impl LabelingPlan {
    pub fn is_empty(&self) -> bool {
        self.overrides.is_empty()
    }

    /// The relabelled graph; topology is unchanged.
    pub fn apply(&self, graph: &TannerGraph) -> Result<TannerGraph> {
        let mut labels = graph.labels();
        for o in &self.overrides {
            let range = graph.check_edge_range(o.check);
            if o.edge_position >= range.len() {
                return Err(Error::Graph(format!(
                    "check {} has no edge at position {}",
                    o.check, o.edge_position
                )));
            }
            labels[range.start + o.edge_position] = o.new_label;
        }
        graph.with_labels(&labels)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{PLAN_HEADER}")?;
        for o in &self.overrides {
            writeln!(
                out,
                "{},{},{},{},{}",
                o.check, o.edge_position, o.old_label, o.new_label, o.step
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h.trim() == PLAN_HEADER => {}
            Some((_, Ok(_))) | None => return Err(Error::parse(1, 1, format!("expected header `{PLAN_HEADER}`"))),
            Some((_, Err(e))) => return Err(e.into()),
        }
        let mut overrides = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::parse(i + 1, 1, "expected 5 fields"));
            }
            let num = |k: usize| -> Result<usize> {
                fields[k]
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(i + 1, k + 1, format!("bad number `{}`", fields[k])))
            };
            overrides.push(LabelOverride {
                check: num(0)?,
                edge_position: num(1)?,
                old_label: FieldElement::new(num(2)? as u8),
                new_label: FieldElement::new(num(3)? as u8),
                step: num(4)? as u8,
            });
        }
        Ok(LabelingPlan { overrides })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub jmax: usize,
    pub runs: usize,
    /// Erasure probability for the peeling runs.
    pub eps: f64,
    pub seed: u64,
}

/// Stopping-set-guided relabelling.
///
/// 1. Peel `runs` random erasure patterns and keep the distinct residuals.
/// 2. Rank variables by how many residuals contain them; `Sigma` is their union.
/// 3. Checks with exactly two neighbours in `Sigma` get the universal pair.
/// 4. Checks with `3..=s/j` neighbours in `Sigma` get `{alpha^(t*j)}`.
///    Ranks of variables touched in 3 and 4 drop to zero.
/// 5. Residuals are visited by increasing size; every untouched check with at
///    least two neighbours in the residual relabels the edges to its
///    `kappa' = min(#nonzero-rank neighbours, s/j)` highest-ranked neighbours
///    (pair if `kappa' = 2`, monomials otherwise; skipped if `kappa' <= 1`).
///
/// `j` is `jmax`, or the largest divisor of `s` below it.
pub fn optimize_labels(graph: &TannerGraph, config: &OptimizeConfig) -> Result<LabelingPlan> {
    let field = graph.field();
    let s = field.s() as usize;
    if config.jmax == 0 || config.jmax > s {
        return Err(Error::Config(format!("jmax = {} outside 1..={s}", config.jmax)));
    }
    if !(0.0..=1.0).contains(&config.eps) {
        return Err(Error::Config(format!("peeling probability {} outside [0, 1]", config.eps)));
    }
    let j = divisor_fallback(s, config.jmax);
    let kappa = s / j;
    let monomials = resolvable_labels(field, j)?;
    let pair = universal_pair(field);

    let sample = sample_stopping_sets(graph, config.eps, config.runs, config.seed)?;
    let mut rank = sample.rank.clone();
    let in_sigma: Vec<bool> = rank.iter().map(|&r| r > 0).collect();

    let mut plan = LabelingPlan::default();
    let mut locked = vec![false; graph.m()];
    let assign = |plan: &mut LabelingPlan, c: usize, positions: &[usize], labels: &[FieldElement], step: u8| {
        let edges = graph.check_edges(c);
        for (&p, &l) in positions.iter().zip(labels) {
            plan.overrides.push(LabelOverride {
                check: c,
                edge_position: p,
                old_label: edges[p].label,
                new_label: l,
                step,
            });
        }
    };

    // steps 3 and 4
    for c in 0..graph.m() {
        let positions: Vec<usize> = graph
            .check_edges(c)
            .iter()
            .enumerate()
            .filter(|(_, e)| in_sigma[e.var])
            .map(|(p, _)| p)
            .collect();
        let d = positions.len();
        let (labels, step): (Vec<FieldElement>, u8) = if d == 2 {
            (vec![pair.0, pair.1], 3)
        } else if d > 2 && d <= kappa {
            (monomials[..d].to_vec(), 4)
        } else {
            continue;
        };
        assign(&mut plan, c, &positions, &labels, step);
        for &p in &positions {
            rank[graph.check_edges(c)[p].var] = 0;
        }
        locked[c] = true;
    }

    // step 5
    let mut order: Vec<usize> = (0..sample.sets.len()).collect();
    order.sort_by_key(|&i| sample.sets[i].len());
    let mut member = vec![false; graph.n()];
    for i in order {
        let set = &sample.sets[i];
        set.iter().for_each(|&v| member[v] = true);
        for c in 0..graph.m() {
            if locked[c] {
                continue;
            }
            let inside: Vec<usize> = graph
                .check_edges(c)
                .iter()
                .enumerate()
                .filter(|(_, e)| member[e.var])
                .map(|(p, _)| p)
                .collect();
            if inside.len() < 2 {
                continue;
            }
            let mut ranked: Vec<usize> = inside
                .into_iter()
                .filter(|&p| rank[graph.check_edges(c)[p].var] > 0)
                .collect();
            let kappa_prime = ranked.len().min(kappa);
            if kappa_prime <= 1 {
                continue;
            }
            let var_of = |p: usize| graph.check_edges(c)[p].var;
            ranked.sort_by(|&a, &b| rank[var_of(b)].cmp(&rank[var_of(a)]).then(var_of(a).cmp(&var_of(b))));
            let mut chosen = ranked[..kappa_prime].to_vec();
            chosen.sort_unstable();
            let labels = if kappa_prime == 2 {
                vec![pair.0, pair.1]
            } else {
                monomials[..kappa_prime].to_vec()
            };
            assign(&mut plan, c, &chosen, &labels, 5);
            locked[c] = true;
        }
        set.iter().for_each(|&v| member[v] = false);
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::observe;
    use crate::code::{sample_graph, DegreeDistribution, Edge, LabelDistribution};
    use crate::decoder::{Outcome, SetDecoder};

    #[test]
    fn divisor_fallback_examples() {
        assert_eq!(divisor_fallback(4, 3), 2);
        assert_eq!(divisor_fallback(6, 4), 3);
        assert_eq!(divisor_fallback(6, 3), 3);
        assert_eq!(divisor_fallback(3, 2), 1);
    }

    #[test]
    fn resolvable_label_sets() {
        let f8 = Field::new(3).unwrap();
        let labels = resolvable_labels(&f8, 1).unwrap();
        assert_eq!(labels, vec![FieldElement::ONE, f8.alpha(), f8.alpha_pow(2)]);
        let f4 = Field::new(2).unwrap();
        assert_eq!(resolvable_labels(&f4, 2).unwrap(), vec![FieldElement::ONE]);
        assert!(resolvable_labels(&f8, 2).is_err());
    }

    #[test]
    fn gf4_exclusion_leaves_two() {
        let f = Field::new(2).unwrap();
        let c = universal_candidates(&f);
        assert_eq!(c, vec![f.alpha(), f.alpha_pow(2)]);
        assert_eq!(universal_pair(&f), (FieldElement::ONE, f.alpha()));
        assert!(is_universal(&f, FieldElement::ONE, f.alpha()));
        assert!(!is_universal(&f, FieldElement::ONE, FieldElement::ONE));
    }

    #[test]
    fn binary_pair_is_trivial() {
        let f = Field::new(1).unwrap();
        assert_eq!(universal_pair(&f), (FieldElement::ONE, FieldElement::ONE));
        assert!(is_universal(&f, FieldElement::ONE, FieldElement::ONE));
    }

    #[test]
    fn candidates_are_exactly_the_universal_elements() {
        for s in 2..=5 {
            let f = Field::new(s).unwrap();
            let brute: Vec<FieldElement> = f
                .nonzero_elements()
                .filter(|&h| is_universal(&f, FieldElement::ONE, h))
                .collect();
            assert_eq!(universal_candidates(&f), brute, "s = {s}");
        }
    }

    #[test]
    fn no_stopping_sets_means_empty_plan() {
        let f = Field::new(2).unwrap();
        let dd = DegreeDistribution::regular(3, 6).unwrap();
        let g = sample_graph(&f, 60, &dd, &LabelDistribution::uniform(&f), 1).unwrap();
        let cfg = OptimizeConfig { jmax: 1, runs: 50, eps: 0.0, seed: 0 };
        assert!(optimize_labels(&g, &cfg).unwrap().is_empty());
    }

    #[test]
    fn four_cycle_gets_universal_pair() {
        let f = Field::new(2).unwrap();
        let e = |c, v| Edge { check: c, var: v, label: FieldElement::ONE };
        let g = TannerGraph::new(f, 2, 2, vec![e(0, 0), e(0, 1), e(1, 0), e(1, 1)]).unwrap();
        let erased = vec![observe(FieldElement::ZERO, 1); 2];
        let before = SetDecoder::new(&g).decode_sets(&erased, 20).unwrap();
        assert_eq!(before.outcome, Outcome::Stalled);
        let cfg = OptimizeConfig { jmax: 1, runs: 20, eps: 1.0, seed: 3 };
        let plan = optimize_labels(&g, &cfg).unwrap();
        assert!(plan.overrides.iter().all(|o| o.step == 3));
        let g2 = plan.apply(&g).unwrap();
        let after = SetDecoder::new(&g2).decode_sets(&erased, 20).unwrap();
        assert_eq!(after.outcome, Outcome::Success);
    }

    #[test]
    fn plan_preserves_topology_and_round_trips() {
        let f = Field::new(3).unwrap();
        let dd = DegreeDistribution::regular(3, 6).unwrap();
        let g = sample_graph(&f, 120, &dd, &LabelDistribution::uniform(&f), 5).unwrap();
        let cfg = OptimizeConfig { jmax: 1, runs: 200, eps: 0.45, seed: 2 };
        let plan = optimize_labels(&g, &cfg).unwrap();
        assert!(!plan.is_empty());
        let g2 = plan.apply(&g).unwrap();
        for (a, b) in g.edges().iter().zip(g2.edges()) {
            assert_eq!((a.check, a.var), (b.check, b.var));
            assert!(!b.label.is_zero());
        }
        let mut buf = Vec::new();
        plan.write_csv(&mut buf).unwrap();
        assert_eq!(LabelingPlan::read_csv(&buf[..]).unwrap(), plan);
    }
}
