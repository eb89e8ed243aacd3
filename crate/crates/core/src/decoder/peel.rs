use crate::code::TannerGraph;

/// Binary erasure peeling on the graph topology (labels ignored).
///
/// Holds scratch buffers so repeated runs on the same graph do not allocate.
pub struct Peeler<'g> {
    graph: &'g TannerGraph,
    erased_count: Vec<usize>,
    queue: Vec<usize>,
}

impl<'g> Peeler<'g> {
    pub fn new(graph: &'g TannerGraph) -> Self {
        Peeler {
            graph,
            erased_count: vec![0; graph.m()],
            queue: Vec::new(),
        }
    }

    /// Removes erased variables that sit alone on some check until none do.
    /// `erased` is updated in place and ends as the maximum stopping set
    /// contained in the original erasure set.
    pub fn peel(&mut self, erased: &mut [bool]) {
        let g = self.graph;
        assert_eq!(erased.len(), g.n(), "erasure mask length");
        self.erased_count.iter_mut().for_each(|c| *c = 0);
        for c in 0..g.m() {
            self.erased_count[c] = g.check_edges(c).iter().filter(|e| erased[e.var]).count();
        }
        self.queue.clear();
        self.queue.extend((0..g.m()).filter(|&c| self.erased_count[c] == 1));
        while let Some(c) = self.queue.pop() {
            if self.erased_count[c] != 1 {
                continue;
            }
            let Some(v) = g.check_edges(c).iter().map(|e| e.var).find(|&v| erased[v]) else {
                continue;
            };
            erased[v] = false;
            for &e in g.var_edges(v) {
                let c2 = g.edges()[e].check;
                self.erased_count[c2] -= 1;
                if self.erased_count[c2] == 1 {
                    self.queue.push(c2);
                }
            }
        }
    }
}

/// The residual (maximum stopping set) left by peeling `erased`.
pub fn peel_binary(graph: &TannerGraph, erased: &[bool]) -> Vec<bool> {
    let mut out = erased.to_vec();
    Peeler::new(graph).peel(&mut out);
    out
}

/// True if every check touching `set` touches it at least twice.
pub fn is_stopping_set(graph: &TannerGraph, set: &[bool]) -> bool {
    (0..graph.m()).all(|c| {
        let k = graph.check_edges(c).iter().filter(|e| set[e.var]).count();
        k != 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{sample_graph, DegreeDistribution, LabelDistribution};
    use crate::gf::Field;

    fn brute_max_stopping_set(g: &TannerGraph, erased: &[bool]) -> Vec<bool> {
        // union of all stopping sets inside `erased` is itself one (and maximal)
        let idx: Vec<usize> = (0..g.n()).filter(|&v| erased[v]).collect();
        let mut best = vec![false; g.n()];
        for mask in 0u32..(1 << idx.len()) {
            let mut set = vec![false; g.n()];
            for (b, &v) in idx.iter().enumerate() {
                set[v] = mask >> b & 1 == 1;
            }
            if is_stopping_set(g, &set) {
                for v in 0..g.n() {
                    best[v] |= set[v];
                }
            }
        }
        best
    }

    #[test]
    fn empty_stays_empty() {
        let f = Field::new(1).unwrap();
        let dd = DegreeDistribution::regular(3, 6).unwrap();
        let g = sample_graph(&f, 12, &dd, &LabelDistribution::uniform(&f), 0).unwrap();
        assert_eq!(peel_binary(&g, &[false; 12]), vec![false; 12]);
    }

    #[test]
    fn matches_exhaustive_stopping_sets() {
        let f = Field::new(1).unwrap();
        let dd = DegreeDistribution::regular(2, 4).unwrap();
        let mut rng = crate::rng::stream(9, &[]);
        for seed in 0..30 {
            let g = sample_graph(&f, 12, &dd, &LabelDistribution::uniform(&f), seed).unwrap();
            for _ in 0..20 {
                let erased: Vec<bool> = (0..12).map(|_| rand::Rng::random_bool(&mut rng, 0.5)).collect();
                let peeled = peel_binary(&g, &erased);
                assert!(is_stopping_set(&g, &peeled));
                assert_eq!(peeled, brute_max_stopping_set(&g, &erased));
            }
        }
    }
}
