//! Iterative set-message decoding.
//!
//! Messages are sets of candidate symbols. A check node sends each neighbour
//! the set of values consistent with the parity equation given the sets it
//! received from the other neighbours:
//! `CTV_i = h_i^{-1} * sum_{k != i} h_k * VTC_k` (sums are sumsets).
//! A variable node intersects its channel set with all other incoming check
//! messages. The schedule is flooding: every check, then every variable.

mod ml;
mod peel;

pub use ml::{check_locally_resolvable, ml_decode, MlOutcome};
pub use peel::{is_stopping_set, peel_binary, Peeler};

use serde::{Deserialize, Serialize};

use crate::channel::ReceivedSymbol;
use crate::code::TannerGraph;
use crate::error::{Error, Result};
use crate::gf::{Field, SymbolSet};

pub const DEFAULT_MAX_ITERS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    /// A fixed point with unresolved variables.
    Stalled,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    /// Final candidate set of every variable.
    pub sets: Vec<SymbolSet>,
    pub iterations: usize,
    pub outcome: Outcome,
}

impl DecodeResult {
    pub fn resolved(&self) -> Vec<bool> {
        self.sets.iter().map(|s| s.is_singleton()).collect()
    }

    pub fn unresolved_count(&self) -> usize {
        self.sets.iter().filter(|s| !s.is_singleton()).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    CheckToVar,
    VarToCheck,
}

/// One message as recorded by the debug trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub edge: usize,
    pub direction: Direction,
    pub mask: u64,
}

/// Decoder with reusable message buffers for one graph.
pub struct SetDecoder<'g> {
    graph: &'g TannerGraph,
    vtc: Vec<SymbolSet>,
    ctv: Vec<SymbolSet>,
    scaled: Vec<SymbolSet>,
    suffix: Vec<SymbolSet>,
    channel: Vec<SymbolSet>,
    trace: Option<Vec<TraceEntry>>,
}

impl<'g> SetDecoder<'g> {
    pub fn new(graph: &'g TannerGraph) -> Self {
        let e = graph.num_edges();
        let max_dc = (0..graph.m()).map(|c| graph.check_degree(c)).max().unwrap_or(0);
        SetDecoder {
            graph,
            vtc: vec![SymbolSet::EMPTY; e],
            ctv: vec![SymbolSet::EMPTY; e],
            scaled: vec![SymbolSet::EMPTY; max_dc],
            suffix: vec![SymbolSet::EMPTY; max_dc + 1],
            channel: vec![SymbolSet::EMPTY; graph.n()],
            trace: None,
        }
    }

    /// Records every message of every iteration (iteration 0 holds the
    /// initial variable-to-check messages).
    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn take_trace(&mut self) -> Vec<TraceEntry> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn decode(&mut self, received: &[ReceivedSymbol], max_iters: usize) -> Result<DecodeResult> {
        let sets: Vec<SymbolSet> = received.iter().map(|r| r.set).collect();
        self.decode_sets(&sets, max_iters)
    }

    /// Decodes from raw channel sets.
    pub fn decode_sets(&mut self, channel: &[SymbolSet], max_iters: usize) -> Result<DecodeResult> {
        let graph = self.graph;
        if channel.len() != graph.n() {
            return Err(Error::Precondition(format!(
                "received {} symbols for a code of length {}",
                channel.len(),
                graph.n()
            )));
        }
        self.channel.copy_from_slice(channel);
        if channel.iter().all(|s| s.is_singleton()) {
            return Ok(DecodeResult {
                sets: channel.to_vec(),
                iterations: 0,
                outcome: Outcome::Success,
            });
        }
        for (i, e) in graph.edges().iter().enumerate() {
            self.vtc[i] = channel[e.var];
            self.ctv[i] = graph.field().full_set();
        }
        self.record(0, Direction::VarToCheck);

        let mut finals = channel.to_vec();
        for iteration in 1..=max_iters {
            let mut changed = self.check_update();
            self.record(iteration, Direction::CheckToVar);
            changed |= self.variable_update(&mut finals);
            self.record(iteration, Direction::VarToCheck);
            if finals.iter().all(|s| s.is_singleton()) {
                return Ok(DecodeResult {
                    sets: finals,
                    iterations: iteration,
                    outcome: Outcome::Success,
                });
            }
            if !changed {
                return Ok(DecodeResult {
                    sets: finals,
                    iterations: iteration,
                    outcome: Outcome::Stalled,
                });
            }
        }
        Ok(DecodeResult {
            sets: finals,
            iterations: max_iters,
            outcome: Outcome::IterationLimit,
        })
    }

    fn record(&mut self, iteration: usize, direction: Direction) {
        if let Some(trace) = self.trace.as_mut() {
            let msgs = match direction {
                Direction::CheckToVar => &self.ctv,
                Direction::VarToCheck => &self.vtc,
            };
            trace.extend(msgs.iter().enumerate().map(|(edge, m)| TraceEntry {
                iteration,
                edge,
                direction,
                mask: m.mask(),
            }));
        }
    }

    fn check_update(&mut self) -> bool {
        let graph = self.graph;
        let field: &Field = graph.field();
        let full = field.full_set();
        let mut changed = false;
        for c in 0..graph.m() {
            let range = graph.check_edge_range(c);
            let edges = graph.check_edges(c);
            let d = edges.len();
            for (k, e) in edges.iter().enumerate() {
                self.scaled[k] = field.scale_set_unchecked(e.label, self.vtc[range.start + k]);
            }
            self.suffix[d] = SymbolSet::singleton(crate::gf::FieldElement::ZERO);
            for k in (0..d).rev() {
                self.suffix[k] = field.sumset_unchecked(self.scaled[k], self.suffix[k + 1]);
            }
            let mut prefix = SymbolSet::singleton(crate::gf::FieldElement::ZERO);
            for (k, e) in edges.iter().enumerate() {
                let others = if prefix == full {
                    full
                } else {
                    field.sumset_unchecked(prefix, self.suffix[k + 1])
                };
                let inv = field.inv(e.label).expect("labels are nonzero");
                let msg = field.scale_set_unchecked(inv, others);
                let slot = &mut self.ctv[range.start + k];
                if *slot != msg {
                    *slot = msg;
                    changed = true;
                }
                prefix = field.sumset_unchecked(prefix, self.scaled[k]);
            }
        }
        changed
    }

    fn variable_update(&mut self, finals: &mut [SymbolSet]) -> bool {
        let graph = self.graph;
        let mut changed = false;
        for (v, fin) in finals.iter_mut().enumerate() {
            let edges = graph.var_edges(v);
            let chan = self.channel[v];
            let mut all = chan;
            for &e in edges {
                all = all.intersect(self.ctv[e]);
            }
            *fin = all;
            for (k, &e) in edges.iter().enumerate() {
                let mut msg = chan;
                for (k2, &e2) in edges.iter().enumerate() {
                    if k2 != k {
                        msg = msg.intersect(self.ctv[e2]);
                    }
                }
                if self.vtc[e] != msg {
                    self.vtc[e] = msg;
                    changed = true;
                }
            }
        }
        changed
    }
}

/// One-shot decode; see [`SetDecoder`] for buffer reuse.
pub fn decode(graph: &TannerGraph, received: &[ReceivedSymbol], max_iters: usize) -> Result<DecodeResult> {
    SetDecoder::new(graph).decode(received, max_iters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::observe;
    use crate::code::Edge;
    use crate::gf::FieldElement;

    fn fig2(h1: u8, h2: u8) -> TannerGraph {
        // two variables, two checks, both connecting both variables
        let f = Field::new(2).unwrap();
        let e = |c, v, l| Edge { check: c, var: v, label: FieldElement::new(l) };
        TannerGraph::new(f, 2, 2, vec![e(0, 0, 1), e(0, 1, 1), e(1, 0, h1), e(1, 1, h2)]).unwrap()
    }

    #[test]
    fn no_erasures_is_immediate_success() {
        let g = fig2(1, 2);
        let sets = vec![SymbolSet::singleton(FieldElement::new(3)); 2];
        let r = SetDecoder::new(&g).decode_sets(&sets, 10).unwrap();
        assert_eq!(r.outcome, Outcome::Success);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.sets, sets);
    }

    #[test]
    fn distinct_labels_resolve_the_four_cycle() {
        let g = fig2(1, 2);
        let erased = vec![observe(FieldElement::ZERO, 1); 2];
        let r = SetDecoder::new(&g).decode_sets(&erased, 10).unwrap();
        assert_eq!(r.outcome, Outcome::Success);
        assert!(r.sets.iter().all(|s| *s == SymbolSet::singleton(FieldElement::ZERO)));
    }

    #[test]
    fn equal_labels_stall() {
        let g = fig2(1, 1);
        let erased = vec![observe(FieldElement::ZERO, 1); 2];
        let r = SetDecoder::new(&g).decode_sets(&erased, 10).unwrap();
        assert_eq!(r.outcome, Outcome::Stalled);
        assert!(r.sets.iter().all(|s| *s == SymbolSet::from_elements([0, 1])));
    }

    #[test]
    fn iteration_limit_reported() {
        let g = fig2(1, 2);
        let erased = vec![observe(FieldElement::ZERO, 1); 2];
        let r = SetDecoder::new(&g).decode_sets(&erased, 0).unwrap();
        assert_eq!(r.outcome, Outcome::IterationLimit);
    }

    #[test]
    fn trace_records_every_message() {
        let g = fig2(1, 1);
        let erased = vec![observe(FieldElement::ZERO, 1); 2];
        let mut dec = SetDecoder::new(&g);
        dec.enable_trace();
        let r = dec.decode_sets(&erased, 10).unwrap();
        let trace = dec.take_trace();
        assert_eq!(trace.len(), g.num_edges() * (1 + 2 * r.iterations));
    }

    #[test]
    fn length_mismatch_rejected() {
        let g = fig2(1, 2);
        assert!(SetDecoder::new(&g).decode_sets(&[SymbolSet::EMPTY], 5).is_err());
    }
}
