//! The q-ary multi-bit channel: a symbol is either read exactly or only its
//! `s - j` most significant bits survive (a partial erasure of type `j`).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SymbolSet};
use crate::rng;

/// Partial-erasure probabilities `eps_1..eps_s`; `eps_0` is implied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QmbcParams {
    s: u32,
    epsilon: Vec<f64>,
}

impl QmbcParams {
    pub fn new(field: &Field, epsilon: Vec<f64>) -> Result<Self> {
        if epsilon.len() != field.s() as usize {
            return Err(Error::Distribution(format!(
                "expected {} erasure probabilities, got {}",
                field.s(),
                epsilon.len()
            )));
        }
        if epsilon.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            return Err(Error::Distribution(
                "erasure probabilities must be nonnegative".into(),
            ));
        }
        let total: f64 = epsilon.iter().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::Distribution(format!(
                "erasure probabilities sum to {total} > 1"
            )));
        }
        Ok(QmbcParams {
            s: field.s(),
            epsilon,
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `eps_1..eps_s`.
    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn eps0(&self) -> f64 {
        (1.0 - self.epsilon.iter().sum::<f64>()).max(0.0)
    }

    /// `eps_j` for `j = 0..=s`.
    pub fn eps(&self, j: usize) -> f64 {
        if j == 0 {
            self.eps0()
        } else {
            self.epsilon[j - 1]
        }
    }

    /// Draws an erasure type.
    pub fn sample_type<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (k, e) in self.epsilon.iter().enumerate() {
            acc += e;
            if u < acc {
                return k + 1;
            }
        }
        0
    }
}

/// One channel output: the erasure type and the observed set `M_x^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceivedSymbol {
    pub erasure_type: usize,
    pub set: SymbolSet,
}

/// `M_x^j`: the `2^j` consecutive symbols sharing the top `s - j` bits of `x`.
pub fn observe(x: FieldElement, j: usize) -> SymbolSet {
    let width = 1usize << j;
    let base = (x.value() as usize) & !(width - 1);
    SymbolSet::range(base, width)
}

/// Sends `codeword` through the channel using the stream for `seed`.
pub fn transmit(codeword: &[FieldElement], params: &QmbcParams, seed: u64) -> Vec<ReceivedSymbol> {
    let mut r = rng::stream(seed, &[]);
    transmit_with(codeword, params, &mut r)
}

pub fn transmit_with<R: Rng + ?Sized>(
    codeword: &[FieldElement],
    params: &QmbcParams,
    rng: &mut R,
) -> Vec<ReceivedSymbol> {
    codeword
        .iter()
        .map(|&x| {
            let j = params.sample_type(rng);
            ReceivedSymbol {
                erasure_type: j,
                set: observe(x, j),
            }
        })
        .collect()
}

/// Capacity in q-ary symbols per channel use: `1 - sum_j j * eps_j / s`.
pub fn capacity(params: &QmbcParams) -> f64 {
    let weighted: f64 = params
        .epsilon
        .iter()
        .enumerate()
        .map(|(k, e)| (k + 1) as f64 * e)
        .sum();
    1.0 - weighted / params.s as f64
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// `I(X;Y) = H(Y) - H(Y|X)` in bits, enumerating every output set directly.
pub fn mutual_information_numeric(params: &QmbcParams, input: &[f64]) -> Result<f64> {
    let q = 1usize << params.s;
    if input.len() != q {
        return Err(Error::Distribution(format!(
            "input distribution has {} entries, expected {q}",
            input.len()
        )));
    }
    if input.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::Distribution("negative input probability".into()));
    }
    let total: f64 = input.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Distribution(format!(
            "input distribution sums to {total}"
        )));
    }
    let mut h_y = 0.0;
    let mut h_y_given_x = 0.0;
    for j in 0..=params.s as usize {
        let e = params.eps(j);
        h_y_given_x -= plogp(e);
        let width = 1usize << j;
        for block in (0..q).step_by(width) {
            let mass: f64 = input[block..block + width].iter().sum();
            h_y -= plogp(mass * e);
        }
    }
    Ok(h_y - h_y_given_x)
}
