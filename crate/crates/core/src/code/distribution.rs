use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

/// Edge-perspective degree distributions; `lambda[i]` is the fraction of
/// edges attached to variable nodes of degree `i` (likewise `rho` for checks).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    lambda: Vec<f64>,
    rho: Vec<f64>,
}

fn validate_family(name: &str, coeffs: &[f64]) -> Result<()> {
    if coeffs.iter().any(|c| !(*c >= 0.0)) {
        return Err(Error::Distribution(format!("{name} has a negative coefficient")));
    }
    if coeffs.iter().take(2).any(|c| *c != 0.0) {
        return Err(Error::Distribution(format!(
            "{name} must start at degree 2"
        )));
    }
    let total: f64 = coeffs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Distribution(format!("{name} sums to {total}")));
    }
    Ok(())
}

impl DegreeDistribution {
    /// `lambda` and `rho` indexed by degree (entries 0 and 1 must be zero).
    pub fn new(lambda: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        validate_family("lambda", &lambda)?;
        validate_family("rho", &rho)?;
        Ok(DegreeDistribution { lambda, rho })
    }

    pub fn regular(dv: usize, dc: usize) -> Result<Self> {
        if dv < 2 || dc < 2 {
            return Err(Error::Distribution(format!(
                "regular ({dv},{dc}) needs degrees >= 2"
            )));
        }
        let mut lambda = vec![0.0; dv + 1];
        let mut rho = vec![0.0; dc + 1];
        lambda[dv] = 1.0;
        rho[dc] = 1.0;
        Ok(DegreeDistribution { lambda, rho })
    }

    /// From node-perspective fractions (fraction of nodes of each degree).
    pub fn from_node_perspective(var_nodes: &[f64], check_nodes: &[f64]) -> Result<Self> {
        fn convert(nodes: &[f64]) -> Vec<f64> {
            let total: f64 = nodes.iter().enumerate().map(|(i, l)| i as f64 * l).sum();
            nodes
                .iter()
                .enumerate()
                .map(|(i, l)| i as f64 * l / total)
                .collect()
        }
        Self::new(convert(var_nodes), convert(check_nodes))
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn max_var_degree(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn max_check_degree(&self) -> usize {
        self.rho.len() - 1
    }

    /// `lambda(x) = sum_i lambda_i x^(i-1)`.
    pub fn lambda_poly(&self, x: f64) -> f64 {
        poly_eval(&self.lambda, x)
    }

    pub fn rho_poly(&self, x: f64) -> f64 {
        poly_eval(&self.rho, x)
    }

    /// Fraction of variable nodes of each degree.
    pub fn var_node_fractions(&self) -> Vec<f64> {
        node_fractions(&self.lambda)
    }

    pub fn check_node_fractions(&self) -> Vec<f64> {
        node_fractions(&self.rho)
    }

    /// Regular `(dv, dc)` if both families are single-degree.
    pub fn as_regular(&self) -> Option<(usize, usize)> {
        let single = |c: &[f64]| {
            let nz: Vec<usize> = (0..c.len()).filter(|&i| c[i] > 0.0).collect();
            (nz.len() == 1).then(|| nz[0])
        };
        Some((single(&self.lambda)?, single(&self.rho)?))
    }
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| if *c == 0.0 { 0.0 } else { c * x.powi(i as i32 - 1) })
        .sum()
}

fn node_fractions(edge: &[f64]) -> Vec<f64> {
    let total: f64 = edge
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c / i as f64)
        .sum();
    edge.iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { 0.0 } else { c / i as f64 / total })
        .collect()
}

/// Design rate `1 - (sum rho_i / i) / (sum lambda_i / i)`.
pub fn design_rate(dd: &DegreeDistribution) -> f64 {
    let integral = |c: &[f64]| -> f64 {
        c.iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x / i as f64)
            .sum()
    };
    1.0 - integral(&dd.rho) / integral(&dd.lambda)
}

/// Probability weight per field element; element 0 always has weight 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelDistribution {
    weights: Vec<f64>,
}

impl LabelDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights[0] != 0.0 {
            return Err(Error::Distribution(
                "label distribution must give zero weight to 0".into(),
            ));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Distribution("negative label weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Distribution(format!("label weights sum to {total}")));
        }
        Ok(LabelDistribution { weights })
    }

    /// Uniform over all nonzero elements.
    pub fn uniform(field: &Field) -> Self {
        Self::uniform_on(field, &field.nonzero_elements().collect::<Vec<_>>())
            .expect("nonzero support")
    }

    /// Uniform on a support of nonzero elements (duplicates collapse).
    pub fn uniform_on(field: &Field, support: &[FieldElement]) -> Result<Self> {
        let mut weights = vec![0.0; field.q()];
        let mut distinct: Vec<FieldElement> = support.to_vec();
        distinct.sort();
        distinct.dedup();
        if distinct.is_empty() || distinct.iter().any(|g| g.is_zero() || g.value() as usize >= field.q()) {
            return Err(Error::Distribution("support must be nonzero field elements".into()));
        }
        let w = 1.0 / distinct.len() as f64;
        for g in distinct {
            weights[g.value() as usize] = w;
        }
        Ok(LabelDistribution { weights })
    }

    /// All mass on one label.
    pub fn degenerate(field: &Field, label: FieldElement) -> Result<Self> {
        Self::uniform_on(field, &[label])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, g: FieldElement) -> f64 {
        self.weights[g.value() as usize]
    }

    pub fn support(&self) -> impl Iterator<Item = (FieldElement, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(g, w)| (FieldElement::new(g as u8), *w))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = FieldElement::ONE;
        for (g, w) in self.support() {
            acc += w;
            last = g;
            if u < acc {
                return g;
            }
        }
        last
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_rates() {
        assert!((design_rate(&DegreeDistribution::regular(3, 6).unwrap()) - 0.5).abs() < 1e-15);
        assert!(
            (design_rate(&DegreeDistribution::regular(3, 27).unwrap()) - 8.0 / 9.0).abs() < 1e-15
        );
    }

    #[test]
    fn perspective_round_trip() {
        let dd = DegreeDistribution::new(
            vec![0.0, 0.0, 0.3, 0.5, 0.0, 0.2],
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.4, 0.6],
        )
        .unwrap();
        let back = DegreeDistribution::from_node_perspective(
            &dd.var_node_fractions(),
            &dd.check_node_fractions(),
        )
        .unwrap();
        for (a, b) in dd.lambda().iter().zip(back.lambda()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in dd.rho().iter().zip(back.rho()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(DegreeDistribution::new(vec![0.0, 0.0, 0.5], vec![0.0, 0.0, 1.0]).is_err());
        assert!(DegreeDistribution::new(vec![0.0, 1.0], vec![0.0, 0.0, 1.0]).is_err());
        let f = Field::new(2).unwrap();
        assert!(LabelDistribution::new(vec![0.5, 0.5, 0.0, 0.0]).is_err());
        assert!(LabelDistribution::uniform_on(&f, &[FieldElement::ZERO]).is_err());
    }

    #[test]
    fn polynomials() {
        let dd = DegreeDistribution::regular(3, 6).unwrap();
        assert!((dd.lambda_poly(0.5) - 0.25).abs() < 1e-15);
        assert!((dd.rho_poly(0.5) - 0.5f64.powi(5)).abs() < 1e-15);
        assert_eq!(dd.as_regular(), Some((3, 6)));
    }
}
