//! Density evolution over subgroup-valued messages.
//!
//! Under the all-zero codeword every decoder message is an additive subgroup,
//! so the message law at each iteration is a probability vector over the
//! [`SubgroupTable`]. `z` is the variable-to-check law and `w` the
//! check-to-variable law.
//!
//! The check update conditions on the label `h` of the outgoing edge: an
//! incoming subgroup `H` on an edge with label `h'` contributes `(h'/h) H` to
//! the sumset, so the scaled law is folded `i - 1` times with the span table
//! and then mixed over `h`. The variable update folds `i - 1` CTV laws with
//! the intersection table and finally intersects with the channel subgroup
//! `M_0^j` drawn with probability `eps_j`.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{DegreeDistribution, LabelDistribution};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::subgroup::SubgroupTable;

pub const DEFAULT_DELTA: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 2000;
pub const DEFAULT_BISECTION_TOL: f64 = 1e-4;
/// Largest `s` accepted unless [`DeConfig::allow_large_field`] is set.
pub const DEFAULT_DE_MAX_S: u32 = 4;

/// Changes smaller than this between iterations mean a fixed point was hit.
const STAGNATION: f64 = 1e-14;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeConfig {
    pub s: u32,
    pub dd: DegreeDistribution,
    pub labels: LabelDistribution,
    /// `eps_1..eps_s`; ignored by the threshold searches, which set it.
    pub epsilon: Vec<f64>,
    pub max_iters: usize,
    pub delta: f64,
    pub bisection_tol: f64,
    pub allow_large_field: bool,
}

impl DeConfig {
    pub fn new(s: u32, dd: DegreeDistribution, labels: LabelDistribution) -> Self {
        DeConfig {
            s,
            dd,
            labels,
            epsilon: vec![0.0; s as usize],
            max_iters: DEFAULT_MAX_ITERS,
            delta: DEFAULT_DELTA,
            bisection_tol: DEFAULT_BISECTION_TOL,
            allow_large_field: false,
        }
    }

    pub fn with_epsilon(mut self, epsilon: Vec<f64>) -> Self {
        self.epsilon = epsilon;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) || !(self.bisection_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.labels.weights().len() != 1 << self.s {
            return Err(Error::Config(format!(
                "label distribution has {} entries, expected q = {}",
                self.labels.weights().len(),
                1u64 << self.s
            )));
        }
        if self.epsilon.len() != self.s as usize {
            return Err(Error::Config(format!(
                "expected {} erasure probabilities, got {}",
                self.s,
                self.epsilon.len()
            )));
        }
        Ok(())
    }
}

/// Precomputed tables for one configuration; reusable across many epsilons.
pub struct DensityEvolution {
    table: SubgroupTable,
    dd: DegreeDistribution,
    /// For every outgoing label `h` in the support: `(L(h), [(h'/h, L(h'))])`.
    ratios: Vec<(f64, Vec<(FieldElement, f64)>)>,
    max_iters: usize,
    delta: f64,
    bisection_tol: f64,
}

/// P_error per iteration, starting with iteration 0 (the channel).
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub p_error: Vec<f64>,
    /// Final VTC law.
    pub z: Vec<f64>,
}

impl Trajectory {
    pub fn final_error(&self) -> f64 {
        *self.p_error.last().expect("trajectory has iteration 0")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub threshold: f64,
    /// False if some probe ended with `delta < P_error < 10 delta`.
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub direction: Vec<f64>,
    pub threshold: f64,
    pub epsilon: Vec<f64>,
    pub converged: bool,
}

impl DensityEvolution {
    pub fn new(config: &DeConfig) -> Result<Self> {
        config.validate()?;
        let max_s = if config.allow_large_field {
            crate::gf::MAX_S
        } else {
            DEFAULT_DE_MAX_S
        };
        let field = Field::new(config.s)?;
        let table = SubgroupTable::with_max_s(&field, max_s)?;
        let support: Vec<(FieldElement, f64)> = config.labels.support().collect();
        let ratios = support
            .iter()
            .map(|&(h, wh)| {
                let per: Vec<(FieldElement, f64)> = support
                    .iter()
                    .map(|&(h2, w2)| (field.div(h2, h).expect("nonzero label"), w2))
                    .collect();
                (wh, per)
            })
            .collect();
        Ok(DensityEvolution {
            table,
            dd: config.dd.clone(),
            ratios,
            max_iters: config.max_iters,
            delta: config.delta,
            bisection_tol: config.bisection_tol,
        })
    }

    pub fn table(&self) -> &SubgroupTable {
        &self.table
    }

    /// VTC law at iteration 0: `eps_j` on `M_0^j`.
    pub fn initial(&self, epsilon: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.table.len()];
        let eps0 = (1.0 - epsilon.iter().sum::<f64>()).max(0.0);
        z[self.table.channel_index(0)] += eps0;
        for (k, e) in epsilon.iter().enumerate() {
            z[self.table.channel_index(k + 1)] += e;
        }
        z
    }

    /// One CTV update: `w` from `z`.
    pub fn check_update(&self, z: &[f64]) -> Vec<f64> {
        let t = self.table.len();
        let mut w = vec![0.0; t];
        for (wh, per) in &self.ratios {
            let scaled = scale_law(&self.table, z, per);
            let mut power = scaled.clone();
            for (i, rho) in self.dd.rho().iter().enumerate().skip(2) {
                if i > 2 {
                    power = convolve(&power, &scaled, |a, b| self.table.span(a, b));
                }
                if *rho > 0.0 {
                    for (acc, p) in w.iter_mut().zip(&power) {
                        *acc += wh * rho * p;
                    }
                }
            }
        }
        normalize(&mut w);
        w
    }

    /// One VTC update: `z` from `w` and the channel.
    pub fn variable_update(&self, w: &[f64], epsilon: &[f64]) -> Vec<f64> {
        let t = self.table.len();
        let mut folded = vec![0.0; t];
        let mut power = full_group_law(t);
        for (i, lambda) in self.dd.lambda().iter().enumerate().skip(1) {
            if i > 1 {
                power = convolve(&power, w, |a, b| self.table.meet(a, b));
            }
            if *lambda > 0.0 && i >= 2 {
                for (acc, p) in folded.iter_mut().zip(&power) {
                    *acc += lambda * p;
                }
            }
        }
        let mut z = intersect_channel(&self.table, &folded, epsilon);
        normalize(&mut z);
        z
    }

    /// Runs until `P_error < delta`, a fixed point, or `max_iters`.
    pub fn run(&self, epsilon: &[f64]) -> Trajectory {
        self.run_with(epsilon, |_, _| {})
    }

    /// As [`run`](Self::run), calling `observe(l, z)` for every iteration.
    pub fn run_with(&self, epsilon: &[f64], mut observe: impl FnMut(usize, &[f64])) -> Trajectory {
        let mut z = self.initial(epsilon);
        let mut p_error = vec![error_mass(&z)];
        observe(0, &z);
        for l in 1..=self.max_iters {
            let prev = *p_error.last().unwrap();
            if prev < self.delta {
                break;
            }
            let w = self.check_update(&z);
            z = self.variable_update(&w, epsilon);
            let p = error_mass(&z);
            p_error.push(p);
            observe(l, &z);
            if (prev - p).abs() < STAGNATION {
                break;
            }
        }
        Trajectory { p_error, z }
    }

    fn succeeds(&self, epsilon: &[f64]) -> (bool, bool) {
        let p = self.run(epsilon).final_error();
        (p < self.delta, p > self.delta && p < 10.0 * self.delta)
    }

    /// Largest `c` with `base + c * direction` inside the region.
    pub fn bisect(&self, base: &[f64], direction: &[f64]) -> Result<ThresholdResult> {
        if base.len() != direction.len() || direction.len() != self.table.field().s() as usize {
            return Err(Error::Config("direction has the wrong dimension".into()));
        }
        if direction.iter().any(|d| *d < 0.0) || direction.iter().all(|d| *d == 0.0) {
            return Err(Error::Config("direction must be nonnegative and nonzero".into()));
        }
        let point = |c: f64| -> Vec<f64> { base.iter().zip(direction).map(|(b, d)| b + c * d).collect() };
        let budget = 1.0 - base.iter().sum::<f64>();
        let mut hi = budget / direction.iter().sum::<f64>();
        for (b, d) in base.iter().zip(direction) {
            if *d > 0.0 {
                hi = hi.min((1.0 - b) / d);
            }
        }
        let mut converged = true;
        let (ok, flag) = self.succeeds(&point(hi));
        converged &= !flag;
        if ok {
            return Ok(ThresholdResult { threshold: hi, converged });
        }
        let mut lo = 0.0;
        let (ok0, flag0) = self.succeeds(&point(0.0));
        converged &= !flag0;
        if !ok0 {
            return Ok(ThresholdResult { threshold: 0.0, converged });
        }
        while hi - lo > self.bisection_tol {
            let mid = 0.5 * (lo + hi);
            let (ok, flag) = self.succeeds(&point(mid));
            converged &= !flag;
            if ok {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(ThresholdResult {
            threshold: 0.5 * (lo + hi),
            converged,
        })
    }

    pub fn threshold_scan(&self, direction: &[f64]) -> Result<ThresholdResult> {
        let base = vec![0.0; direction.len()];
        self.bisect(&base, direction)
    }

    /// Boundary along a fan of `resolution` directions in the plane of
    /// coordinates `axes`, measured from `base`.
    pub fn region_trace_slice(
        &self,
        resolution: usize,
        axes: (usize, usize),
        base: &[f64],
    ) -> Result<Vec<RegionPoint>> {
        let s = self.table.field().s() as usize;
        if axes.0 >= s || axes.1 >= s || axes.0 == axes.1 || base.len() != s {
            return Err(Error::Config("invalid region slice".into()));
        }
        if resolution < 2 {
            return Err(Error::Config("region resolution must be at least 2".into()));
        }
        (0..resolution)
            .into_par_iter()
            .map(|i| {
                let theta = FRAC_PI_2 * i as f64 / (resolution - 1) as f64;
                let mut dir = vec![0.0; s];
                dir[axes.0] = theta.cos().max(0.0);
                dir[axes.1] = theta.sin().max(0.0);
                // exact axes at the fan ends
                if i == 0 {
                    dir[axes.1] = 0.0;
                }
                if i == resolution - 1 {
                    dir[axes.0] = 0.0;
                }
                let r = self.bisect(base, &dir)?;
                let epsilon = base.iter().zip(&dir).map(|(b, d)| b + r.threshold * d).collect();
                Ok(RegionPoint {
                    direction: dir,
                    threshold: r.threshold,
                    epsilon,
                    converged: r.converged,
                })
            })
            .collect()
    }

    /// Full two-dimensional region (q = 4), or the `(eps_1, eps_2)` slice otherwise.
    pub fn region_trace(&self, resolution: usize) -> Result<Vec<RegionPoint>> {
        let s = self.table.field().s() as usize;
        if s < 2 {
            return Err(Error::Config("region tracing needs s >= 2".into()));
        }
        self.region_trace_slice(resolution, (0, 1), &vec![0.0; s])
    }
}

/// Mass off `{0}` (index 0), summed directly to avoid cancellation near 0.
fn error_mass(z: &[f64]) -> f64 {
    z[1..].iter().sum()
}

/// The updates are polynomial maps of high degree in the total mass, so
/// rounding drift away from 1 is amplified every iteration unless removed.
fn normalize(law: &mut [f64]) {
    let total: f64 = law.iter().sum();
    if total > 0.0 {
        law.iter_mut().for_each(|p| *p /= total);
    }
}

fn full_group_law(t: usize) -> Vec<f64> {
    let mut v = vec![0.0; t];
    v[t - 1] = 1.0;
    v
}

fn scale_law(table: &SubgroupTable, z: &[f64], ratios: &[(FieldElement, f64)]) -> Vec<f64> {
    let mut out = vec![0.0; z.len()];
    for &(g, wg) in ratios {
        for (t, p) in z.iter().enumerate() {
            if *p != 0.0 {
                out[table.scale(g, t)] += wg * p;
            }
        }
    }
    out
}

fn convolve(a: &[f64], b: &[f64], op: impl Fn(usize, usize) -> usize) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for (i, pa) in a.iter().enumerate() {
        if *pa == 0.0 {
            continue;
        }
        for (j, pb) in b.iter().enumerate() {
            if *pb != 0.0 {
                out[op(i, j)] += pa * pb;
            }
        }
    }
    out
}

fn intersect_channel(table: &SubgroupTable, law: &[f64], epsilon: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; law.len()];
    let eps0 = (1.0 - epsilon.iter().sum::<f64>()).max(0.0);
    for j in 0..=epsilon.len() {
        let e = if j == 0 { eps0 } else { epsilon[j - 1] };
        if e == 0.0 {
            continue;
        }
        let ch = table.channel_index(j);
        for (t, p) in law.iter().enumerate() {
            if *p != 0.0 {
                out[table.meet(t, ch)] += e * p;
            }
        }
    }
    out
}

/// Law of the outgoing CTV on an edge labelled `h` at a check with `count`
/// other neighbours whose VTC messages are i.i.d. `incoming`.
pub fn check_convolution(
    table: &SubgroupTable,
    incoming: &[f64],
    count: usize,
    labels: &LabelDistribution,
    h: FieldElement,
) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Config("check convolution needs count >= 1".into()));
    }
    let field = table.field();
    let ratios: Vec<(FieldElement, f64)> = labels
        .support()
        .map(|(h2, w)| field.div(h2, h).map(|g| (g, w)))
        .collect::<Result<_>>()?;
    let scaled = scale_law(table, incoming, &ratios);
    let mut power = scaled.clone();
    for _ in 1..count {
        power = convolve(&power, &scaled, |a, b| table.span(a, b));
    }
    Ok(power)
}

/// Law of the VTC at a variable with `count` other neighbours whose CTV
/// messages are i.i.d. `ctv`, after intersecting with the channel set.
pub fn variable_convolution(table: &SubgroupTable, ctv: &[f64], count: usize, epsilon: &[f64]) -> Vec<f64> {
    let mut power = full_group_law(table.len());
    for _ in 0..count {
        power = convolve(&power, ctv, |a, b| table.meet(a, b));
    }
    intersect_channel(table, &power, epsilon)
}

/// P_error trajectory for `config`.
pub fn de_iterate(config: &DeConfig) -> Result<Trajectory> {
    Ok(DensityEvolution::new(config)?.run(&config.epsilon))
}

pub fn threshold_scan(config: &DeConfig, direction: &[f64]) -> Result<ThresholdResult> {
    DensityEvolution::new(config)?.threshold_scan(direction)
}

pub fn region_trace(config: &DeConfig, resolution: usize) -> Result<Vec<RegionPoint>> {
    DensityEvolution::new(config)?.region_trace(resolution)
}

/// Uniform on `{alpha^(t * jmax)}`, `t = 0..s/jmax`.
pub fn optimal_label_distribution(field: &Field, jmax: usize) -> Result<LabelDistribution> {
    let s = field.s() as usize;
    if jmax == 0 || s % jmax != 0 {
        return Err(Error::Divisibility { divisor: jmax, value: s });
    }
    let support: Vec<FieldElement> = (0..s / jmax).map(|t| field.alpha_pow((t * jmax) as i64)).collect();
    LabelDistribution::uniform_on(field, &support)
}

/// `y_{l+1} = eps * lambda(1 - rho(1 - y_l / divisor))`, from `y_0 = eps`.
/// With `divisor = 1` this is binary-erasure density evolution.
pub fn scalar_recurrence(dd: &DegreeDistribution, eps: f64, divisor: f64, iters: usize) -> Vec<f64> {
    let mut y = vec![eps];
    for _ in 0..iters {
        let prev = *y.last().unwrap();
        y.push(eps * dd.lambda_poly(1.0 - dd.rho_poly(1.0 - prev / divisor)));
    }
    y
}

/// Binary-erasure threshold of `dd` by bisection on the scalar recurrence.
pub fn bec_threshold(dd: &DegreeDistribution) -> f64 {
    let ok = |eps: f64| {
        let mut y = eps;
        for _ in 0..DEFAULT_MAX_ITERS {
            let next = eps * dd.lambda_poly(1.0 - dd.rho_poly(1.0 - y));
            if next < DEFAULT_DELTA {
                return true;
            }
            if (y - next).abs() < STAGNATION {
                return false;
            }
            y = next;
        }
        y < DEFAULT_DELTA
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn write_region_csv<W: Write>(mut out: W, points: &[RegionPoint]) -> Result<()> {
    let s = points.first().map_or(0, |p| p.direction.len());
    let mut header: Vec<String> = (1..=s).map(|j| format!("d_{j}")).collect();
    header.extend(["threshold".to_string(), "converged".to_string()]);
    writeln!(out, "{}", header.join(","))?;
    for p in points {
        let mut row: Vec<String> = p.direction.iter().map(|d| format!("{d:.12}")).collect();
        row.push(format!("{:.6}", p.threshold));
        row.push(p.converged.to_string());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Dump `iter,P_error,z_1..z_T` for one run.
pub fn write_trajectory_csv<W: Write>(mut out: W, de: &DensityEvolution, epsilon: &[f64]) -> Result<()> {
    let t = de.table().len();
    let mut header = vec!["iter".to_string(), "P_error".to_string()];
    header.extend((1..=t).map(|i| format!("z_{i}")));
    writeln!(out, "{}", header.join(","))?;
    let mut rows = Vec::new();
    de.run_with(epsilon, |l, z| {
        let mut row = vec![l.to_string(), format!("{:e}", error_mass(z))];
        row.extend(z.iter().map(|p| format!("{p:e}")));
        rows.push(row.join(","));
    });
    for r in rows {
        writeln!(out, "{r}")?;
    }
    Ok(())
}
