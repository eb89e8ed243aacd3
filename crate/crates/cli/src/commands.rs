use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use qmbc_core::code::{read_graph, sample_graph, to_qalist, write_graph};
use qmbc_core::de::{self, DeConfig, DensityEvolution, RegionPoint};
use qmbc_core::labeling::{optimize_labels, OptimizeConfig};
use qmbc_core::ml_analysis::{self, AnalysisRow, OrderingStrategy};
use qmbc_core::sim::{self, ExperimentConfig, GraphMode, LabelMode, Sidecar};
use qmbc_core::{DegreeDistribution, Field, FieldElement, LabelDistribution, QmbcParams, TannerGraph};

use crate::args::*;
use crate::parse::LabelSpec;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Writes `bytes` to `path`, or to stdout without one.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let result = match path {
        Some(p) => File::create(p).and_then(|f| {
            let mut w = BufWriter::new(f);
            w.write_all(bytes)?;
            w.flush()
        }),
        None => std::io::stdout().write_all(bytes),
    };
    result.map_err(|source| CliError::Output {
        path: path.map_or_else(|| "stdout".into(), |p| p.display().to_string()),
        source,
    })
}

fn label_distribution(field: &Field, spec: &LabelSpec, jmax: usize) -> Result<LabelDistribution> {
    Ok(match spec {
        LabelSpec::Uniform => LabelDistribution::uniform(field),
        LabelSpec::Optimal => de::optimal_label_distribution(field, jmax)?,
        LabelSpec::Single(k) => {
            let g = field
                .element(*k as usize)
                .ok_or_else(|| usage(format!("{k} is not an element of GF({})", field.q())))?;
            LabelDistribution::degenerate(field, g)?
        }
        LabelSpec::Explicit(w) => {
            if w.len() != field.q() {
                return Err(usage(format!("explicit labels need {} weights, got {}", field.q(), w.len())));
            }
            LabelDistribution::new(w.clone())?
        }
        LabelSpec::Optimized => {
            return Err(usage("`optimized` labels only apply to `simulate`; use `label-optimize` for graphs"));
        }
    })
}

fn check_len(name: &str, v: &[f64], s: u32) -> Result<()> {
    if v.len() != s as usize {
        return Err(usage(format!("--{name} needs {s} comma-separated values, got {}", v.len())));
    }
    Ok(())
}

pub fn capacity(shared: &Shared, a: &CapacityArgs) -> Result<()> {
    let field = Field::new(a.s)?;
    check_len("eps", &a.eps, a.s)?;
    let params = QmbcParams::new(&field, a.eps.clone())?;
    let c = qmbc_core::capacity(&params);
    let text = format!("capacity,bits_per_use\n{},{}\n", c, c * a.s as f64);
    emit(shared.out.as_deref(), text.as_bytes())
}

fn de_config(a: &DeArgs) -> Result<DeConfig> {
    let e = &a.ensemble;
    let field = Field::new(e.s)?;
    let mut cfg = DeConfig::new(
        e.s,
        DegreeDistribution::regular(e.dv, e.dc)?,
        label_distribution(&field, &a.labels, a.jmax)?,
    );
    cfg.delta = a.delta;
    cfg.max_iters = a.max_iters;
    cfg.bisection_tol = a.tol;
    cfg.allow_large_field = a.allow_large_field;
    Ok(cfg)
}

fn region_csv(points: &[RegionPoint]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    de::write_region_csv(&mut buf, points)?;
    Ok(buf)
}

pub fn de_threshold(shared: &Shared, a: &DeThresholdArgs) -> Result<()> {
    let s = a.de.ensemble.s;
    check_len("direction", &a.direction, s)?;
    let base = a.base.clone().unwrap_or_else(|| vec![0.0; s as usize]);
    check_len("base", &base, s)?;
    let de = DensityEvolution::new(&de_config(&a.de)?)?;
    let r = de.bisect(&base, &a.direction)?;
    if !r.converged {
        eprintln!("warning: density evolution ended between delta and 10*delta near the threshold");
    }
    let epsilon = base.iter().zip(&a.direction).map(|(b, d)| b + r.threshold * d).collect();
    let point = RegionPoint {
        direction: a.direction.clone(),
        threshold: r.threshold,
        epsilon,
        converged: r.converged,
    };
    emit(shared.out.as_deref(), &region_csv(&[point])?)?;
    if let (Some(path), Some(eps)) = (&a.trajectory_out, &a.trajectory_eps) {
        check_len("trajectory-eps", eps, s)?;
        let mut buf = Vec::new();
        de::write_trajectory_csv(&mut buf, &de, eps)?;
        emit(Some(path), &buf)?;
    }
    Ok(())
}

pub fn de_region(shared: &Shared, a: &DeRegionArgs) -> Result<()> {
    let s = a.de.ensemble.s as usize;
    if a.axes.len() != 2 || a.axes.iter().any(|x| x.fract() != 0.0 || *x < 1.0 || *x > s as f64) {
        return Err(usage(format!("--axes needs two erasure types in 1..={s}")));
    }
    let axes = (a.axes[0] as usize - 1, a.axes[1] as usize - 1);
    let de = DensityEvolution::new(&de_config(&a.de)?)?;
    let points = de.region_trace_slice(a.resolution, axes, &vec![0.0; s])?;
    emit(shared.out.as_deref(), &region_csv(&points)?)
}

pub fn simulate(shared: &Shared, a: &SimulateArgs) -> Result<()> {
    let e = &a.ensemble;
    let field = Field::new(e.s)?;
    let labels = match &a.labels {
        LabelSpec::Optimized => LabelMode::Optimized {
            jmax: a.jmax,
            runs: a.runs,
            eps: a.label_eps,
        },
        LabelSpec::Uniform => LabelMode::Uniform,
        LabelSpec::Single(k) => LabelMode::Single { label: *k },
        other => LabelMode::Explicit {
            weights: label_distribution(&field, other, a.jmax)?.weights().to_vec(),
        },
    };
    let grid = a.sweep.grid(e.s as usize).map_err(usage)?;
    let config = ExperimentConfig {
        s: e.s,
        dd: DegreeDistribution::regular(e.dv, e.dc)?,
        n: a.n,
        labels,
        grid,
        trials: a.trials,
        max_iters: a.max_iters,
        seed: shared.seed,
        graph_mode: match a.graph {
            GraphModeArg::Fixed => GraphMode::Fixed,
            GraphModeArg::Resample => GraphMode::Resample,
        },
        out: shared.out.as_ref().map(|p| p.display().to_string()),
    };
    let points = if a.binary {
        sim::run_binary_baseline(&config)?
    } else {
        sim::run_ser_sweep(&config)?
    };
    let mut buf = Vec::new();
    sim::write_ser_csv(&mut buf, &points)?;
    emit(shared.out.as_deref(), &buf)?;

    let sidecar_path = a.sidecar.clone().or_else(|| {
        shared.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = sidecar_path {
        let mut json = Vec::new();
        sim::write_sidecar(
            &mut json,
            &Sidecar {
                config,
                commit: env!("QMBC_COMMIT").to_string(),
                binary_baseline: a.binary,
            },
        )?;
        emit(Some(&path), &json)?;
    }
    Ok(())
}

fn degree_distribution_of(graph: &TannerGraph) -> Result<DegreeDistribution> {
    let mut var = Vec::new();
    let mut chk = Vec::new();
    let bump = |v: &mut Vec<f64>, d: usize| {
        if v.len() <= d {
            v.resize(d + 1, 0.0);
        }
        v[d] += 1.0;
    };
    (0..graph.n()).for_each(|v| bump(&mut var, graph.var_degree(v)));
    (0..graph.m()).for_each(|c| bump(&mut chk, graph.check_degree(c)));
    Ok(DegreeDistribution::from_node_perspective(&var, &chk)?)
}

pub fn label_optimize(shared: &Shared, a: &LabelOptimizeArgs) -> Result<()> {
    let graph = read_graph(&a.graph)?;
    let eps = match a.eps {
        Some(e) => e,
        None => de::bec_threshold(&degree_distribution_of(&graph)?),
    };
    let plan = optimize_labels(
        &graph,
        &OptimizeConfig {
            jmax: a.jmax,
            runs: a.runs,
            eps,
            seed: shared.seed,
        },
    )?;
    let mut buf = Vec::new();
    plan.write_csv(&mut buf)?;
    emit(shared.out.as_deref(), &buf)?;
    if let Some(path) = &a.graph_out {
        write_graph(&plan.apply(&graph)?, path)?;
    }
    Ok(())
}

fn analysis_csv(rows: &[AnalysisRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    ml_analysis::write_analysis_csv(&mut buf, rows)?;
    Ok(buf)
}

pub fn ml_snbre(shared: &Shared, a: &MlSnbreArgs) -> Result<()> {
    let field = Field::new(a.s)?;
    let strategy = OrderingStrategy {
        random_orderings: a.orderings,
        seed: shared.seed,
    };
    let rows = a
        .sweep
        .grid(a.s as usize)
        .map_err(usage)?
        .into_iter()
        .map(|eps| {
            let params = QmbcParams::new(&field, eps.clone())?;
            let result = ml_analysis::snbre_failure(&field, &params, a.n, a.k, &strategy)?;
            Ok(AnalysisRow { epsilon: eps, result })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(shared.out.as_deref(), &analysis_csv(&rows)?)
}

pub fn ml_ldpc_bound(shared: &Shared, a: &MlLdpcArgs) -> Result<()> {
    let e = &a.ensemble;
    let field = Field::new(e.s)?;
    let rows = a
        .sweep
        .grid(e.s as usize)
        .map_err(usage)?
        .into_iter()
        .map(|eps| {
            let channel = if a.full_erasure {
                let mut merged = vec![0.0; eps.len()];
                merged[eps.len() - 1] = eps.iter().sum();
                merged
            } else {
                eps.clone()
            };
            let params = QmbcParams::new(&field, channel)?;
            let result = ml_analysis::ldpc_ml_upper_bound(&field, e.dv, e.dc, a.n, &params)?;
            Ok(AnalysisRow { epsilon: eps, result })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(shared.out.as_deref(), &analysis_csv(&rows)?)
}

pub fn graph_gen(shared: &Shared, a: &GraphGenArgs) -> Result<()> {
    let e = &a.ensemble;
    let field = Field::new(e.s)?;
    let dd = DegreeDistribution::regular(e.dv, e.dc)?;
    let labels = label_distribution(&field, &a.labels, a.jmax)?;
    let graph = sample_graph(&field, a.n, &dd, &labels, shared.seed)?;
    emit(shared.out.as_deref(), to_qalist(&graph).as_bytes())
}

pub fn graph_validate(shared: &Shared, a: &GraphValidateArgs) -> Result<()> {
    let graph = read_graph(&a.graph)?;
    let labels_ok = graph.labels().iter().all(|l| *l != FieldElement::ZERO);
    let rank = qmbc_core::code::gf_rank(&graph);
    let text = format!(
        "n,m,q,edges,rank,rate\n{},{},{},{},{},{}\n",
        graph.n(),
        graph.m(),
        graph.field().q(),
        graph.num_edges(),
        rank,
        (graph.n() - rank) as f64 / graph.n() as f64
    );
    debug_assert!(labels_ok);
    emit(shared.out.as_deref(), text.as_bytes())
}
