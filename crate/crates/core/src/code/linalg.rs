use rand::Rng;

use super::graph::TannerGraph;
use crate::gf::{Field, FieldElement};

/// Dense parity-check matrix in row-reduced echelon form over GF(q).
/// Returns the reduced rows and the pivot column of each.
fn row_reduce(graph: &TannerGraph) -> (Vec<Vec<FieldElement>>, Vec<usize>) {
    let field: &Field = graph.field();
    let n = graph.n();
    let mut rows: Vec<Vec<FieldElement>> = (0..graph.m())
        .map(|c| {
            let mut row = vec![FieldElement::ZERO; n];
            for e in graph.check_edges(c) {
                row[e.var] = e.label;
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][col]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col];
            let (pivot_row, other) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (x, y) in other.iter_mut().zip(pivot_row) {
                *x = *x + field.mul(factor, *y);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Rank of the parity-check matrix over GF(q).
pub fn gf_rank(graph: &TannerGraph) -> usize {
    row_reduce(graph).1.len()
}

/// A basis of the code (null space of the parity-check matrix).
pub fn nullspace_basis(graph: &TannerGraph) -> Vec<Vec<FieldElement>> {
    let (rows, pivots) = row_reduce(graph);
    let n = graph.n();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![FieldElement::ZERO; n];
            v[free] = FieldElement::ONE;
            // characteristic 2: x_pivot = -sum = sum
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = row[free];
            }
            v
        })
        .collect()
}

/// A uniformly random codeword.
pub fn random_codeword<R: Rng + ?Sized>(graph: &TannerGraph, rng: &mut R) -> Vec<FieldElement> {
    let field = graph.field();
    let q = field.q() as u8;
    let mut word = vec![FieldElement::ZERO; graph.n()];
    for basis in nullspace_basis(graph) {
        let coeff = FieldElement::new(rng.random_range(0..q));
        for (w, b) in word.iter_mut().zip(&basis) {
            *w = *w + field.mul(coeff, *b);
        }
    }
    word
}
