//! Kernel functions for the support vector regressor.

use serde::{Deserialize, Serialize};

/// Kernel specification as it appears in grids and config files. RBF and
/// polynomial gammas of `None` mean "scale": resolve to `1/(d·Var(X))` on
/// the matrix the solver actually sees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Linear,
    Rbf { gamma: Option<f64> },
    Poly { degree: u32, gamma: Option<f64>, coef0: f64 },
}

impl Kernel {
    pub fn rbf() -> Self {
        Kernel::Rbf { gamma: None }
    }

    /// Short display form for CV reports.
    pub fn label(&self) -> String {
        match self {
            Kernel::Linear => "linear".into(),
            Kernel::Rbf { gamma: None } => "rbf".into(),
            Kernel::Rbf { gamma: Some(g) } => format!("rbf(γ={g})"),
            Kernel::Poly { degree, .. } => format!("poly(d={degree})"),
        }
    }

    /// Pin the gamma against a concrete training matrix.
    pub fn resolve(&self, x: &[Vec<f64>]) -> ResolvedKernel {
        let resolve_gamma = |gamma: Option<f64>| gamma.unwrap_or_else(|| scale_gamma(x));
        match *self {
            Kernel::Linear => ResolvedKernel::Linear,
            Kernel::Rbf { gamma } => ResolvedKernel::Rbf {
                gamma: resolve_gamma(gamma),
            },
            Kernel::Poly {
                degree,
                gamma,
                coef0,
            } => ResolvedKernel::Poly {
                degree,
                gamma: resolve_gamma(gamma),
                coef0,
            },
        }
    }
}

/// `1/(d·Var)` where Var is the variance of all matrix entries pooled.
fn scale_gamma(x: &[Vec<f64>]) -> f64 {
    let d = x.first().map(|r| r.len()).unwrap_or(0);
    if d == 0 {
        return 1.0;
    }
    let count = (x.len() * d) as f64;
    let mean: f64 = x.iter().flat_map(|r| r.iter()).sum::<f64>() / count;
    let var: f64 = x
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / count;
    if var < 1e-12 {
        1.0 / d as f64
    } else {
        1.0 / (d as f64 * var)
    }
}

/// A kernel with every parameter pinned; this is what models persist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolvedKernel {
    Linear,
    Rbf { gamma: f64 },
    Poly { degree: u32, gamma: f64, coef0: f64 },
}

impl ResolvedKernel {
    #[inline]
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            ResolvedKernel::Linear => dot(a, b),
            ResolvedKernel::Rbf { gamma } => {
                let mut dist = 0.0;
                for (x, y) in a.iter().zip(b) {
                    let d = x - y;
                    dist += d * d;
                }
                (-gamma * dist).exp()
            }
            ResolvedKernel::Poly {
                degree,
                gamma,
                coef0,
            } => (gamma * dot(a, b) + coef0).powi(degree as i32),
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
