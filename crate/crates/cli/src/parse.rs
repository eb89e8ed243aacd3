//! Value parsers for list-, label- and grid-valued flags.

#[derive(Clone, Debug, PartialEq)]
pub enum LabelSpec {
    Uniform,
    /// Uniform on the resolvable set for `jmax`.
    Optimal,
    /// Stopping-set-guided relabelling (simulation only).
    Optimized,
    Single(u8),
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sweep {
    /// Only `eps_j` varies, linearly from `start` to `stop`.
    Linear { j: usize, start: f64, stop: f64, points: usize },
    Points(Vec<Vec<f64>>),
}

impl Sweep {
    pub fn grid(&self, s: usize) -> Result<Vec<Vec<f64>>, String> {
        match self {
            Sweep::Linear { j, start, stop, points } => {
                if *j == 0 || *j > s {
                    return Err(format!("sweep type {j} outside 1..={s}"));
                }
                Ok((0..*points)
                    .map(|i| {
                        let t = if *points == 1 { 0.0 } else { i as f64 / (*points - 1) as f64 };
                        let mut eps = vec![0.0; s];
                        eps[j - 1] = start + t * (stop - start);
                        eps
                    })
                    .collect())
            }
            Sweep::Points(p) => {
                if let Some(bad) = p.iter().find(|e| e.len() != s) {
                    return Err(format!("grid point {bad:?} does not have {s} entries"));
                }
                Ok(p.clone())
            }
        }
    }
}

pub fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number")))
        .collect()
}

pub fn parse_labels(text: &str) -> Result<LabelSpec, String> {
    match text {
        "uniform" => return Ok(LabelSpec::Uniform),
        "optimal" => return Ok(LabelSpec::Optimal),
        "optimized" => return Ok(LabelSpec::Optimized),
        _ => {}
    }
    if let Some(v) = text.strip_prefix("single:") {
        return v
            .trim()
            .parse::<u8>()
            .map(LabelSpec::Single)
            .map_err(|_| format!("`{v}` is not a field element"));
    }
    if let Some(w) = text.strip_prefix("explicit:") {
        return parse_list(w).map(LabelSpec::Explicit);
    }
    Err(format!(
        "unknown label mode `{text}` (expected uniform, optimal, optimized, single:<k> or explicit:<weights>)"
    ))
}

pub fn parse_sweep(text: &str) -> Result<Sweep, String> {
    if let Some(rest) = text.strip_prefix("j=") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 4 {
            return Err("linear sweep syntax is j=<type>:<start>:<stop>:<points>".into());
        }
        let j = parts[0].parse().map_err(|_| format!("`{}` is not a type", parts[0]))?;
        let start = parts[1].parse().map_err(|_| format!("`{}` is not a number", parts[1]))?;
        let stop = parts[2].parse().map_err(|_| format!("`{}` is not a number", parts[2]))?;
        let points: usize = parts[3].parse().map_err(|_| format!("`{}` is not a count", parts[3]))?;
        if points == 0 {
            return Err("a sweep needs at least one point".into());
        }
        return Ok(Sweep::Linear { j, start, stop, points });
    }
    let points: Vec<Vec<f64>> = text
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_list)
        .collect::<Result<_, _>>()?;
    if points.is_empty() {
        return Err("empty sweep".into());
    }
    Ok(Sweep::Points(points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_labels() {
        assert_eq!(parse_list("0.2, 0.1").unwrap(), vec![0.2, 0.1]);
        assert!(parse_list("0.2,x").is_err());
        assert_eq!(parse_labels("single:3").unwrap(), LabelSpec::Single(3));
        assert_eq!(parse_labels("explicit:0,0.5,0.5,0").unwrap(), LabelSpec::Explicit(vec![0.0, 0.5, 0.5, 0.0]));
        assert!(parse_labels("fancy").is_err());
    }

    #[test]
    fn sweeps() {
        let s = parse_sweep("j=2:0.1:0.3:3").unwrap();
        let g = s.grid(2).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0], vec![0.0, 0.1]);
        assert!((g[2][1] - 0.3).abs() < 1e-15);
        assert!(s.grid(1).is_err());
        let p = parse_sweep("0.1,0;0.2,0.05").unwrap();
        assert_eq!(p.grid(2).unwrap()[1], vec![0.2, 0.05]);
        assert!(p.grid(3).is_err());
        assert!(parse_sweep("j=1:0:1").is_err());
    }
}
