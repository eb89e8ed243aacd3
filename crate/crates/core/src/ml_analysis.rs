//! Finite-length maximum-likelihood failure analysis.
//!
//! Two ensembles are covered. For the standard random ensemble (i.i.d.
//! uniform parity-check entries) the failure probability is a multinomial
//! average over erasure profiles of `1 - psi`, where `psi` is the probability
//! that the erased columns are *partially* independent: no nonzero vector with
//! entry `i` in `M_0^{o_i}` lies in their null space. For the regular LDPC
//! ensemble a union bound over consistent vectors is used.
//!
//! Everything that can overflow (multinomials, `q^(n-k)`, polynomial
//! coefficients) is kept in natural-log space.

use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::QmbcParams;
use crate::code::{sample_graph, DegreeDistribution, LabelDistribution, TannerGraph};
use crate::decoder::ml_decode;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SymbolSet};
use crate::rng;
use crate::subgroup::channel_subgroup;

/// Profiles lighter than the heaviest by more than this many nats are skipped.
pub const PROFILE_MARGIN_NATS: f64 = 60.0;
pub const DEFAULT_RANDOM_ORDERINGS: usize = 100;

/// `chi[j][j'] = |{a / b : a in M_0^j, b in M_0^j' \ {0}}|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiTable {
    chi: Vec<Vec<u64>>,
}

impl ChiTable {
    pub fn compute(field: &Field) -> Self {
        let s = field.s() as usize;
        let sets: Vec<SymbolSet> = (0..=s)
            .map(|j| channel_subgroup(field, j).expect("j <= s").set())
            .collect();
        let chi = (0..=s)
            .map(|j| {
                (0..=s)
                    .map(|jp| {
                        let mut quot = SymbolSet::EMPTY;
                        for a in sets[j] {
                            for b in sets[jp].iter().filter(|b| !b.is_zero()) {
                                let r = field.div(a, b).expect("nonzero divisor");
                                quot = quot.union(SymbolSet::singleton(r));
                            }
                        }
                        quot.len() as u64
                    })
                    .collect()
            })
            .collect();
        ChiTable { chi }
    }

    pub fn get(&self, j: usize, jp: usize) -> u64 {
        self.chi[j][jp]
    }

    pub fn s(&self) -> usize {
        self.chi.len() - 1
    }
}

/// Cardinalities `|E_0|..|E_s|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErasureProfile {
    counts: Vec<usize>,
}

impl ErasureProfile {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::Config("a profile needs |E_0| and at least |E_1|".into()));
        }
        Ok(ErasureProfile { counts })
    }

    /// Profile with `|E_0| = 0` and the given erased counts `|E_1|..|E_s|`.
    pub fn erased(counts: &[usize]) -> Result<Self> {
        let mut c = vec![0];
        c.extend_from_slice(counts);
        Self::new(c)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, j: usize) -> usize {
        self.counts[j]
    }

    pub fn s(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `|E|`, the number of partially erased positions.
    pub fn erased_len(&self) -> usize {
        self.counts[1..].iter().sum()
    }

    /// Erasure types in non-increasing order.
    pub fn types_descending(&self) -> Vec<usize> {
        (1..=self.s()).rev().flat_map(|j| std::iter::repeat_n(j, self.counts[j])).collect()
    }
}

/// `eta[w]`: consistent vectors with exactly `w` nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub eta: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn total(&self) -> BigUint {
        self.eta.iter().sum()
    }
}

/// `prod_j (1 + (2^j - 1) y)^{|E_j|}`, coefficient by coefficient.
pub fn consistent_weight_enum(profile: &ErasureProfile) -> WeightEnumerator {
    let mut poly = vec![BigUint::one()];
    for j in 1..=profile.s() {
        let a = BigUint::from((1u64 << j) - 1);
        for _ in 0..profile.count(j) {
            let mut next = vec![BigUint::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c * &a;
            }
            poly = next;
        }
    }
    WeightEnumerator { eta: poly }
}

/// Probability that `m` i.i.d. uniform nonzero elements of GF(q) sum to zero.
pub fn zero_sum_probability(m: usize, q: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::Config(format!("zero-sum probability needs m >= 2, got {m}")));
    }
    if q < 2 {
        return Err(Error::Config(format!("q = {q} is not a field size")));
    }
    let ratio = 1.0 / (1.0 - q as f64);
    Ok((1.0 - ratio.powi(m as i32 - 1)) / q as f64)
}

/// How the orderings of the lower bound are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingStrategy {
    pub random_orderings: usize,
    pub seed: u64,
}

impl Default for OrderingStrategy {
    fn default() -> Self {
        OrderingStrategy {
            random_orderings: DEFAULT_RANDOM_ORDERINGS,
            seed: 0,
        }
    }
}

/// Exclusion ratios this close to 1 are treated as 1. The ratio is a sum of
/// logs, so an exact tie can land a rounding error below zero; rounding the
/// factor down to 0 keeps the result a lower bound.
const LN_TIE_TOLERANCE: f64 = 1e-10;

/// `ln prod_i (1 - prod_{l<i} chi[o_l][o_i] / q^{n-k})^+`, or `-inf` if a factor is 0.
fn ln_psi_for_order(order: &[usize], ln_chi: &[Vec<f64>], ln_qnk: f64) -> f64 {
    let s = ln_chi.len() - 1;
    let mut seen = vec![0usize; s + 1];
    let mut total = 0.0;
    for &o in order {
        let ln_excl: f64 = (1..=s).map(|j| seen[j] as f64 * ln_chi[j][o]).sum::<f64>() - ln_qnk;
        if ln_excl >= -LN_TIE_TOLERANCE {
            return f64::NEG_INFINITY;
        }
        total += (-ln_excl.exp()).ln_1p();
        seen[o] += 1;
    }
    total
}

fn ln_psi_lower_bound(profile: &ErasureProfile, n_minus_k: usize, chi: &ChiTable, strategy: &OrderingStrategy) -> f64 {
    let s = profile.s();
    let ln_chi: Vec<Vec<f64>> = (0..=s)
        .map(|j| (0..=s).map(|jp| (chi.get(j, jp) as f64).ln()).collect())
        .collect();
    let ln_qnk = n_minus_k as f64 * ((1u64 << s) as f64).ln();
    let desc = profile.types_descending();
    let mut asc = desc.clone();
    asc.reverse();
    let mut best = ln_psi_for_order(&desc, &ln_chi, ln_qnk).max(ln_psi_for_order(&asc, &ln_chi, ln_qnk));
    let mut stream = rng::stream(strategy.seed, &[]);
    let mut order = desc;
    for _ in 0..strategy.random_orderings {
        order.shuffle(&mut stream);
        best = best.max(ln_psi_for_order(&order, &ln_chi, ln_qnk));
    }
    best
}

/// Lower bound on `psi`: the best sequential-exclusion product over the
/// non-increasing, non-decreasing and `strategy.random_orderings` random orderings.
pub fn psi_lower_bound(profile: &ErasureProfile, n_minus_k: usize, chi: &ChiTable, strategy: &OrderingStrategy) -> f64 {
    ln_psi_lower_bound(profile, n_minus_k, chi, strategy).exp()
}

fn is_subfield(field: &Field, set: SymbolSet) -> bool {
    set.iter().all(|a| set.iter().all(|b| set.contains(field.mul(a, b))))
}

/// Checks that the types present form a divisibility chain of divisors of
/// `s` whose channel subgroups are subfields in this representation.
pub fn check_subfield_chain(field: &Field, profile: &ErasureProfile) -> Result<()> {
    let s = field.s() as usize;
    if profile.s() != s {
        return Err(Error::Config(format!("profile has {} types, field has s = {s}", profile.s())));
    }
    let present: Vec<usize> = (1..=s).filter(|&j| profile.count(j) > 0).collect();
    for &j in &present {
        if s % j != 0 {
            return Err(Error::Precondition(format!("erasure type {j} does not divide s = {s}")));
        }
        if !is_subfield(field, channel_subgroup(field, j)?.set()) {
            return Err(Error::Precondition(format!(
                "erasure type {j}: M_0^{j} is not a subfield in this representation"
            )));
        }
    }
    for (a, &j1) in present.iter().enumerate() {
        for &j2 in &present[a + 1..] {
            if j2 % j1 != 0 {
                return Err(Error::Precondition(format!(
                    "erasure types {j1} and {j2} do not form a divisibility chain"
                )));
            }
        }
    }
    Ok(())
}

fn ln_psi_exact(profile: &ErasureProfile, n_minus_k: usize) -> f64 {
    let s = profile.s();
    let ln2 = std::f64::consts::LN_2;
    let ln_qnk = (n_minus_k * s) as f64 * ln2;
    let mut bits = 0usize;
    let mut total = 0.0;
    for o in profile.types_descending() {
        if bits >= n_minus_k * s {
            return f64::NEG_INFINITY;
        }
        let ln_excl = bits as f64 * ln2 - ln_qnk;
        total += (-ln_excl.exp()).ln_1p();
        bits += o;
    }
    total
}

/// Exact `psi` when the present types form a subfield chain.
pub fn psi_exact_subfield(field: &Field, profile: &ErasureProfile, n_minus_k: usize) -> Result<f64> {
    check_subfield_chain(field, profile)?;
    Ok(ln_psi_exact(profile, n_minus_k).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Exact,
    Bound,
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tag::Exact => "exact",
            Tag::Bound => "bound",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisValue {
    pub value: f64,
    pub tag: Tag,
    /// Upper bound on the probability mass of profiles left out of the sum.
    pub skipped_mass_bound: f64,
}

struct LnFactorial(Vec<f64>);

impl LnFactorial {
    fn new(n: usize) -> Self {
        let mut t = vec![0.0; n + 1];
        for k in 1..=n {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        LnFactorial(t)
    }

    fn get(&self, k: usize) -> f64 {
        self.0[k]
    }
}

/// Profiles with their multinomial log-weights, heavy ones only.
struct ProfileSum {
    profiles: Vec<(Vec<usize>, f64)>,
    skipped_mass_bound: f64,
}

fn enumerate_profiles(n: usize, eps: &[f64]) -> ProfileSum {
    let parts = eps.len();
    let lf = LnFactorial::new(n);
    let ln_eps: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ln_weight = |counts: &[usize]| -> f64 {
        let mut w = lf.get(n);
        for (c, le) in counts.iter().zip(&ln_eps) {
            w -= lf.get(*c);
            if *c > 0 {
                w += *c as f64 * le;
            }
        }
        w
    };

    // a feasible profile near the mean gives a lower bound on the maximum weight
    let mut mode: Vec<usize> = eps.iter().map(|e| (n as f64 * e).floor() as usize).collect();
    let heaviest = (0..parts).max_by(|&a, &b| eps[a].total_cmp(&eps[b])).unwrap_or(0);
    mode[heaviest] += n - mode.iter().sum::<usize>();
    let threshold = ln_weight(&mode) - PROFILE_MARGIN_NATS;

    let mut out = ProfileSum {
        profiles: Vec::new(),
        skipped_mass_bound: 0.0,
    };
    let mut counts = vec![0usize; parts];
    let suffix_mass: Vec<f64> = (0..=parts).map(|t| eps[t.min(parts)..].iter().sum()).collect();

    // depth-first over e_0, e_1, ...; a prefix is pruned when its marginal
    // probability is already below the threshold, which also bounds the mass lost
    fn recurse(
        t: usize,
        remaining: usize,
        prefix_ln: f64,
        counts: &mut Vec<usize>,
        ctx: &(&LnFactorial, &[f64], &[f64], f64, usize),
        out: &mut ProfileSum,
    ) {
        let (lf, eps, suffix_mass, threshold, parts) = *ctx;
        if t == parts - 1 {
            if remaining > 0 && eps[t] == 0.0 {
                return;
            }
            counts[t] = remaining;
            let w = prefix_ln - lf.get(remaining) + if remaining > 0 { remaining as f64 * eps[t].ln() } else { 0.0 };
            if w >= threshold {
                out.profiles.push((counts.clone(), w));
            } else {
                out.skipped_mass_bound += w.exp();
            }
            return;
        }
        let max_here = if eps[t] == 0.0 { 0 } else { remaining };
        for c in 0..=max_here {
            let rest = remaining - c;
            let rest_mass = suffix_mass[t + 1];
            if rest > 0 && rest_mass == 0.0 {
                continue;
            }
            let ln_here = prefix_ln - lf.get(c) + if c > 0 { c as f64 * eps[t].ln() } else { 0.0 };
            // marginal of (e_0..e_t, rest) under the multinomial
            let marginal = ln_here - lf.get(rest) + if rest > 0 { rest as f64 * rest_mass.ln() } else { 0.0 };
            if marginal < threshold {
                out.skipped_mass_bound += marginal.exp();
                continue;
            }
            counts[t] = c;
            recurse(t + 1, rest, ln_here, counts, ctx, out);
        }
    }

    let ctx = (&lf, eps, &suffix_mass[..], threshold, parts);
    recurse(0, n, lf.get(n), &mut counts, &ctx, &mut out);

    // tighten to the true maximum
    let max = out.profiles.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let cut = max - PROFILE_MARGIN_NATS;
    let mut kept = Vec::with_capacity(out.profiles.len());
    for p in out.profiles {
        if p.1 >= cut {
            kept.push(p);
        } else {
            out.skipped_mass_bound += p.1.exp();
        }
    }
    out.profiles = kept;
    out
}

/// `ln sum exp(x_i)` in the given order.
fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `ln(1 - exp(x))` for `x <= 0`.
fn ln_one_minus_exp(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

fn all_eps(params: &QmbcParams) -> Vec<f64> {
    (0..=params.s() as usize).map(|j| params.eps(j)).collect()
}

/// Expected ML failure probability over the random ensemble with `(n-k) x n`
/// parity-check matrices; exact when every profile meets the subfield
/// conditions, otherwise an upper bound.
pub fn snbre_failure(field: &Field, params: &QmbcParams, n: usize, k: usize, strategy: &OrderingStrategy) -> Result<AnalysisValue> {
    if n == 0 || k == 0 || k >= n {
        return Err(Error::Config(format!("need 0 < k < n, got n = {n}, k = {k}")));
    }
    if params.s() != field.s() {
        return Err(Error::Config("channel and field disagree on s".into()));
    }
    let chi = ChiTable::compute(field);
    let sum = enumerate_profiles(n, &all_eps(params));
    let terms: Vec<(f64, bool)> = sum
        .profiles
        .par_iter()
        .map(|(counts, lw)| {
            let profile = ErasureProfile { counts: counts.clone() };
            let (ln_psi, exact) = if check_subfield_chain(field, &profile).is_ok() {
                (ln_psi_exact(&profile, n - k), true)
            } else {
                (ln_psi_lower_bound(&profile, n - k, &chi, strategy), false)
            };
            (lw + ln_one_minus_exp(ln_psi), exact)
        })
        .collect();
    let logs: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let exact = terms.iter().all(|t| t.1);
    Ok(AnalysisValue {
        value: log_sum_exp(&logs).exp().min(1.0),
        tag: if exact { Tag::Exact } else { Tag::Bound },
        skipped_mass_bound: sum.skipped_mass_bound,
    })
}

/// Natural log of a big integer (`-inf` for zero).
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits < 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 0..n {
        let next = &row[k] * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(next);
    }
    row
}

fn poly_mul(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Coefficients of `((1 + y)^dc - dc y)^m`: the coefficient of `y^t` counts
/// the `t`-subsets of the `m dc` check sockets that meet every check either
/// zero times or at least twice.
pub fn check_configuration_poly(dc: usize, m: usize) -> Vec<BigUint> {
    let mut base = binomial_row(dc);
    base[1] = BigUint::zero();
    let mut result = vec![BigUint::one()];
    let mut power = base;
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul(&result, &power);
        }
        e >>= 1;
        if e > 0 {
            power = poly_mul(&power, &power);
        }
    }
    result
}

/// Union bound on the expected ML failure probability of the regular
/// `(dv, dc)` ensemble with uniform labels.
pub fn ldpc_ml_upper_bound(field: &Field, dv: usize, dc: usize, n: usize, params: &QmbcParams) -> Result<AnalysisValue> {
    if dv < 2 || dc < 2 || (n * dv) % dc != 0 {
        return Err(Error::Divisibility { divisor: dc, value: n * dv });
    }
    if params.s() != field.s() {
        return Err(Error::Config("channel and field disagree on s".into()));
    }
    let q = field.q() as f64;
    let m = n * dv / dc;
    let coef = check_configuration_poly(dc, m);
    let ln_coef: Vec<f64> = coef.iter().map(ln_big).collect();
    let edges = binomial_row(n * dv);
    let ln_edges: Vec<f64> = edges.iter().map(ln_big).collect();
    let ln_label = -(q - 1.0).ln() * dv as f64 / dc as f64;

    let sum = enumerate_profiles(n, &all_eps(params));
    let logs: Vec<f64> = sum
        .profiles
        .par_iter()
        .map(|(counts, lw)| {
            let profile = ErasureProfile { counts: counts.clone() };
            let eta = consistent_weight_enum(&profile);
            let inner: Vec<f64> = (1..eta.eta.len())
                .filter_map(|w| {
                    let idx = w * dv;
                    let c = ln_coef.get(idx).copied().unwrap_or(f64::NEG_INFINITY);
                    if c == f64::NEG_INFINITY {
                        return None;
                    }
                    Some(ln_big(&eta.eta[w]) + c - ln_edges[idx] + w as f64 * ln_label)
                })
                .collect();
            lw + log_sum_exp(&inner).min(0.0)
        })
        .collect();
    Ok(AnalysisValue {
        value: log_sum_exp(&logs).exp().min(1.0),
        tag: Tag::Bound,
        skipped_mass_bound: sum.skipped_mass_bound,
    })
}

/// Failure count from a Monte Carlo experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McEstimate {
    pub failures: u64,
    pub trials: u64,
}

impl McEstimate {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    /// Binomial standard deviation of the rate at probability `p`.
    pub fn sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

fn random_matrix_graph<R: rand::Rng>(field: &Field, rows: usize, n: usize, rng: &mut R) -> TannerGraph {
    let q = field.q() as u8;
    let rows: Vec<Vec<(usize, FieldElement)>> = (0..rows)
        .map(|_| (0..n).map(|v| (v, FieldElement::new(rng.random_range(0..q)))).collect())
        .collect();
    TannerGraph::from_rows(*field, n, &rows).expect("valid random matrix")
}

/// Monte Carlo estimate of `1 - psi` for a fixed profile: a random
/// `(n-k) x |E|` matrix, ML-decoded on the zero word.
pub fn psi_monte_carlo(field: &Field, profile: &ErasureProfile, n_minus_k: usize, trials: u64, seed: u64) -> McEstimate {
    let types = profile.types_descending();
    let received: Vec<SymbolSet> = types
        .iter()
        .map(|&j| channel_subgroup(field, j).expect("valid type").set())
        .collect();
    let failures = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(seed, &[t]);
            let g = random_matrix_graph(field, n_minus_k, types.len(), &mut r);
            u64::from(!ml_decode(&g, &received).expect("lengths agree").is_unique())
        })
        .sum();
    McEstimate { failures, trials }
}

/// Monte Carlo ML failure rate over the random ensemble and the channel.
pub fn snbre_monte_carlo(field: &Field, params: &QmbcParams, n: usize, k: usize, trials: u64, seed: u64) -> McEstimate {
    let failures = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(seed, &[t]);
            let g = random_matrix_graph(field, n - k, n, &mut r);
            let received: Vec<SymbolSet> = (0..n)
                .map(|_| crate::channel::observe(FieldElement::ZERO, params.sample_type(&mut r)))
                .collect();
            u64::from(!ml_decode(&g, &received).expect("lengths agree").is_unique())
        })
        .sum();
    McEstimate { failures, trials }
}

/// Monte Carlo ML failure rate over freshly sampled `(dv, dc)` graphs with
/// uniform labels. With `random_codeword` a random codeword is sent instead
/// of the zero word.
pub fn ldpc_ml_monte_carlo(
    field: &Field,
    dv: usize,
    dc: usize,
    n: usize,
    params: &QmbcParams,
    trials: u64,
    seed: u64,
    random_codeword: bool,
) -> Result<McEstimate> {
    let dd = DegreeDistribution::regular(dv, dc)?;
    let labels = LabelDistribution::uniform(field);
    let failures = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<u64> {
            let g = sample_graph(field, n, &dd, &labels, rng::derive_seed(seed, &[t, 0]))?;
            let mut r = rng::stream(seed, &[t, 1]);
            let word = if random_codeword {
                crate::code::random_codeword(&g, &mut r)
            } else {
                vec![FieldElement::ZERO; n]
            };
            let received: Vec<SymbolSet> = word
                .iter()
                .map(|&x| crate::channel::observe(x, params.sample_type(&mut r)))
                .collect();
            Ok(u64::from(!ml_decode(&g, &received)?.is_unique()))
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(McEstimate { failures, trials })
}

/// One analysis row: `eps_1..eps_s,value,tag,skipped_mass_bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRow {
    pub epsilon: Vec<f64>,
    pub result: AnalysisValue,
}

pub fn write_analysis_csv<W: Write>(mut out: W, rows: &[AnalysisRow]) -> Result<()> {
    let s = rows.first().map_or(0, |r| r.epsilon.len());
    let mut header: Vec<String> = (1..=s).map(|j| format!("eps_{j}")).collect();
    header.extend(["value", "tag", "skipped_mass_bound"].map(String::from));
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        let mut fields: Vec<String> = r.epsilon.iter().map(|e| format!("{e}")).collect();
        fields.push(format!("{:e}", r.result.value));
        fields.push(r.result.tag.to_string());
        fields.push(format!("{:e}", r.result.skipped_mass_bound));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}
