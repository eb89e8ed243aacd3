use std::collections::HashMap;
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, SerPoint};
use crate::error::{Error, Result};

const FIXED_COLUMNS: [&str; 8] = [
    "trials",
    "erased_symbols",
    "ser",
    "ci_lo",
    "ci_hi",
    "outcome_success",
    "outcome_stalled",
    "outcome_limit",
];

pub fn write_ser_csv<W: Write>(mut out: W, points: &[SerPoint]) -> Result<()> {
    let s = points.first().map_or(0, |p| p.epsilon.len());
    let mut header: Vec<String> = (1..=s).map(|j| format!("eps_{j}")).collect();
    header.extend(FIXED_COLUMNS.iter().map(|c| c.to_string()));
    writeln!(out, "{}", header.join(","))?;
    for p in points {
        let mut row: Vec<String> = p.epsilon.iter().map(|e| e.to_string()).collect();
        row.push(p.trials.to_string());
        row.push(p.erased_symbols.to_string());
        // shortest round-trip formatting keeps write/read lossless
        row.push(format!("{:e}", p.ser));
        row.push(format!("{:e}", p.ci_lo));
        row.push(format!("{:e}", p.ci_hi));
        row.push(p.outcome_success.to_string());
        row.push(p.outcome_stalled.to_string());
        row.push(p.outcome_limit.to_string());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn load_ser_csv<R: BufRead>(input: R) -> Result<Vec<SerPoint>> {
    let mut lines = input.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::parse(1, 1, "empty file"));
    };
    let header = header?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut s = 0;
    while index.contains_key(format!("eps_{}", s + 1).as_str()) {
        s += 1;
    }
    if s == 0 {
        return Err(Error::MissingColumn("eps_1".into()));
    }
    let fixed: Vec<usize> = FIXED_COLUMNS
        .iter()
        .map(|c| index.get(c).copied().ok_or_else(|| Error::MissingColumn(c.to_string())))
        .collect::<Result<_>>()?;

    let mut points = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |col: usize| -> Result<&str> {
            fields
                .get(col)
                .copied()
                .ok_or_else(|| Error::parse(i + 1, col + 1, format!("missing value for `{}`", names[col])))
        };
        let float = |col: usize| -> Result<f64> {
            get(col)?
                .parse()
                .map_err(|_| Error::parse(i + 1, col + 1, format!("`{}` is not a number", names[col])))
        };
        let int = |col: usize| -> Result<u64> {
            get(col)?
                .parse()
                .map_err(|_| Error::parse(i + 1, col + 1, format!("`{}` is not an integer", names[col])))
        };
        let epsilon = (1..=s)
            .map(|j| float(index[format!("eps_{j}").as_str()]))
            .collect::<Result<_>>()?;
        points.push(SerPoint {
            epsilon,
            trials: int(fixed[0])?,
            erased_symbols: int(fixed[1])?,
            ser: float(fixed[2])?,
            ci_lo: float(fixed[3])?,
            ci_hi: float(fixed[4])?,
            outcome_success: int(fixed[5])?,
            outcome_stalled: int(fixed[6])?,
            outcome_limit: int(fixed[7])?,
        });
    }
    Ok(points)
}

/// Everything needed to replay a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub config: ExperimentConfig,
    pub commit: String,
    pub binary_baseline: bool,
}

pub fn write_sidecar<W: Write>(out: W, sidecar: &Sidecar) -> Result<()> {
    serde_json::to_writer_pretty(out, sidecar)?;
    Ok(())
}

pub fn read_sidecar<R: Read>(input: R) -> Result<Sidecar> {
    Ok(serde_json::from_reader(input)?)
}
