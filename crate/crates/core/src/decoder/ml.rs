use crate::code::TannerGraph;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SymbolSet};
use crate::subgroup::{channel_subgroup, coset_decompose};

/// Result of maximum-likelihood erasure decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MlOutcome {
    /// Exactly one codeword is consistent with the observation.
    Unique(Vec<FieldElement>),
    /// Several are; the solution space has dimension `rank_deficiency` over GF(2).
    Ambiguous { rank_deficiency: usize },
    /// No codeword is consistent (cannot happen for genuine channel output).
    Inconsistent,
}

impl MlOutcome {
    pub fn is_unique(&self) -> bool {
        matches!(self, MlOutcome::Unique(_))
    }
}

/// Dense GF(2) matrix with rows packed into `u64` words.
struct BitMatrix {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            words,
            rows: vec![vec![0; words]; rows],
        }
    }

    fn flip(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] ^= 1 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    /// Reduced row echelon form over the first `cols` columns; returns pivots.
    fn reduce(&mut self, cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..self.rows.len()).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && row[c / 64] >> (c % 64) & 1 == 1 {
                    for w in 0..self.words {
                        row[w] ^= pivot[w];
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows.len() {
                break;
            }
        }
        pivots
    }
}

/// Exact ML decoding over the erasure pattern `received`.
///
/// Each variable lies in a coset `r + span(b_1..b_j)`; writing it as
/// `r + sum c_k b_k` with binary unknowns `c_k` turns every parity check
/// into `s` linear equations over GF(2).
pub fn ml_decode(graph: &TannerGraph, received: &[SymbolSet]) -> Result<MlOutcome> {
    if received.len() != graph.n() {
        return Err(Error::Precondition(format!(
            "received {} symbols for a code of length {}",
            received.len(),
            graph.n()
        )));
    }
    let field = graph.field();
    let s = field.s() as usize;
    let mut reps = Vec::with_capacity(graph.n());
    let mut col_start = Vec::with_capacity(graph.n() + 1);
    let mut bases = Vec::with_capacity(graph.n());
    let mut cols = 0;
    for (v, set) in received.iter().enumerate() {
        let coset = coset_decompose(*set).ok_or_else(|| {
            Error::Precondition(format!("variable {v}: observation {set:?} is not a coset"))
        })?;
        reps.push(coset.representative);
        col_start.push(cols);
        cols += coset.subgroup.dim();
        bases.push(coset.subgroup.basis().to_vec());
    }
    col_start.push(cols);

    let rhs_col = cols;
    let mut mat = BitMatrix::new(graph.m() * s, cols + 1);
    for c in 0..graph.m() {
        let mut rhs = FieldElement::ZERO;
        for e in graph.check_edges(c) {
            rhs = rhs + field.mul(e.label, reps[e.var]);
            for (k, b) in bases[e.var].iter().enumerate() {
                let coeff = field.mul(e.label, *b).value();
                for bit in 0..s {
                    if coeff >> bit & 1 == 1 {
                        mat.flip(c * s + bit, col_start[e.var] + k);
                    }
                }
            }
        }
        for bit in 0..s {
            if rhs.value() >> bit & 1 == 1 {
                mat.flip(c * s + bit, rhs_col);
            }
        }
    }

    let pivots = mat.reduce(cols);
    let rank = pivots.len();
    if (rank..mat.rows.len()).any(|r| mat.get(r, rhs_col)) {
        return Ok(MlOutcome::Inconsistent);
    }
    if rank < cols {
        return Ok(MlOutcome::Ambiguous {
            rank_deficiency: cols - rank,
        });
    }
    let mut coeffs = vec![false; cols];
    for (r, &p) in pivots.iter().enumerate() {
        coeffs[p] = mat.get(r, rhs_col);
    }
    let word = (0..graph.n())
        .map(|v| {
            bases[v]
                .iter()
                .enumerate()
                .filter(|(k, _)| coeffs[col_start[v] + k])
                .fold(reps[v], |x, (_, b)| x + *b)
        })
        .collect();
    Ok(MlOutcome::Unique(word))
}

/// True if `sum h_i x_i = 0` with `x_i` in `M_0^{types[i]}` forces every `x_i = 0`.
pub fn check_locally_resolvable(field: &Field, labels: &[FieldElement], types: &[usize]) -> Result<bool> {
    if labels.len() != types.len() {
        return Err(Error::Precondition(format!(
            "{} labels but {} erasure types",
            labels.len(),
            types.len()
        )));
    }
    let sets: Vec<Vec<FieldElement>> = types
        .iter()
        .map(|&j| channel_subgroup(field, j).map(|h| h.set().iter().collect()))
        .collect::<Result<_>>()?;
    // enumerate partial sums with an odometer, skipping the all-zero tuple
    let mut idx = vec![0usize; sets.len()];
    loop {
        let mut carry = true;
        for (i, set) in sets.iter().enumerate() {
            if !carry {
                break;
            }
            idx[i] += 1;
            if idx[i] == set.len() {
                idx[i] = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            return Ok(true);
        }
        let sum = idx
            .iter()
            .zip(&sets)
            .zip(labels)
            .fold(FieldElement::ZERO, |acc, ((&i, set), &h)| acc + field.mul(h, set[i]));
        if sum.is_zero() {
            return Ok(false);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::observe;
    use crate::code::{sample_graph, DegreeDistribution, Edge, LabelDistribution};
    use rand::Rng;

    fn consistent_solutions(g: &TannerGraph, received: &[SymbolSet]) -> Vec<Vec<FieldElement>> {
        let choices: Vec<Vec<FieldElement>> = received.iter().map(|s| s.iter().collect()).collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; g.n()];
        loop {
            let word: Vec<FieldElement> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            if g.is_codeword(&word) {
                out.push(word);
            }
            let mut v = 0;
            loop {
                if v == g.n() {
                    return out;
                }
                idx[v] += 1;
                if idx[v] < choices[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }

    #[test]
    fn fully_known_is_unique() {
        let f = Field::new(2).unwrap();
        let dd = DegreeDistribution::regular(2, 4).unwrap();
        let g = sample_graph(&f, 8, &dd, &LabelDistribution::uniform(&f), 3).unwrap();
        let zero = vec![SymbolSet::singleton(FieldElement::ZERO); 8];
        assert_eq!(ml_decode(&g, &zero).unwrap(), MlOutcome::Unique(vec![FieldElement::ZERO; 8]));
    }

    #[test]
    fn agrees_with_enumeration() {
        let mut rng = crate::rng::stream(17, &[]);
        for s in [2u32, 3] {
            let f = Field::new(s).unwrap();
            let dd = DegreeDistribution::regular(2, 4).unwrap();
            for seed in 0..40 {
                let g = sample_graph(&f, 8, &dd, &LabelDistribution::uniform(&f), seed).unwrap();
                let word = crate::code::random_codeword(&g, &mut rng);
                // at most 6 erased positions keeps enumeration small
                let received: Vec<SymbolSet> = word
                    .iter()
                    .enumerate()
                    .map(|(v, &x)| {
                        let j = if v < 6 { rng.random_range(0..=s as usize) } else { 0 };
                        observe(x, j)
                    })
                    .collect();
                let sols = consistent_solutions(&g, &received);
                assert!(sols.contains(&word));
                match ml_decode(&g, &received).unwrap() {
                    MlOutcome::Unique(w) => {
                        assert_eq!(sols.len(), 1);
                        assert_eq!(w, word);
                    }
                    MlOutcome::Ambiguous { rank_deficiency } => {
                        assert_eq!(sols.len(), 1 << rank_deficiency);
                    }
                    MlOutcome::Inconsistent => panic!("channel output is always consistent"),
                }
            }
        }
    }

    #[test]
    fn inconsistent_detected() {
        let f = Field::new(2).unwrap();
        let g = TannerGraph::new(
            f,
            1,
            1,
            vec![Edge { check: 0, var: 0, label: FieldElement::ONE }],
        )
        .unwrap();
        assert_eq!(
            ml_decode(&g, &[SymbolSet::singleton(FieldElement::new(2))]).unwrap(),
            MlOutcome::Inconsistent
        );
    }

    #[test]
    fn local_resolvability_examples() {
        let f = Field::new(2).unwrap();
        let a = f.alpha();
        assert!(check_locally_resolvable(&f, &[FieldElement::ONE, a], &[1, 1]).unwrap());
        assert!(!check_locally_resolvable(&f, &[FieldElement::ONE, FieldElement::ONE], &[1, 1]).unwrap());
        assert!(check_locally_resolvable(&f, &[a], &[2]).unwrap());
        assert!(check_locally_resolvable(&f, &[], &[]).unwrap());
    }
}
