//! Levi-Civita connection of `α` and covariant derivatives of `β`.

use crate::error::Result;
use crate::finsler::riemannian_metric;
use crate::numdiff;
use crate::point::{inverse, DiscPoint, Mat2};

use super::NUMERIC_RADIUS;

/// `gamma[k][i][j]` holds `Γ̄^k_ij`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChristoffelSymbols {
    pub gamma: [[[f64; 2]; 2]; 2],
}

impl ChristoffelSymbols {
    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[k][i][j]
    }

    pub fn max_abs_diff(&self, other: &ChristoffelSymbols) -> f64 {
        let mut out: f64 = 0.0;
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    out = out.max((self.gamma[k][i][j] - other.gamma[k][i][j]).abs());
                }
            }
        }
        out
    }
}

#[inline]
fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// `Γ̄^k_ij = 2(δ_ki x^j + δ_kj x^i − δ_ij x^k) / (1 − |x|²)`.
pub fn christoffel(x: &DiscPoint) -> ChristoffelSymbols {
    let c = x.coords();
    let gap = x.gap();
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for (k, plane) in gamma.iter_mut().enumerate() {
        for (i, row) in plane.iter_mut().enumerate() {
            for (j, g) in row.iter_mut().enumerate() {
                *g = 2.0 * (delta(k, i) * c[j] + delta(k, j) * c[i] - delta(i, j) * c[k]) / gap;
            }
        }
    }
    ChristoffelSymbols { gamma }
}

/// Levi-Civita symbols from central differences of `a_ij`.
pub fn christoffel_numeric(x: &DiscPoint) -> Result<ChristoffelSymbols> {
    x.require_radius(NUMERIC_RADIUS)?;
    let metric = |p: [f64; 2]| -> [f64; 4] {
        let s = 1.0 / (1.0 - p[0] * p[0] - p[1] * p[1]).powi(2);
        [s, 0.0, 0.0, s]
    };
    let p = x.coords();
    // d[l] = ∂_l a, flattened row-major
    let d: [[f64; 4]; 2] =
        std::array::from_fn(|l| numdiff::partial_vec(&metric, p, l, numdiff::STEP));
    let da = |l: usize, i: usize, j: usize| d[l][2 * i + j];
    let inv = inverse(&riemannian_metric(x)).expect("conformal metric is invertible");
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for (k, plane) in gamma.iter_mut().enumerate() {
        for (i, row) in plane.iter_mut().enumerate() {
            for (j, g) in row.iter_mut().enumerate() {
                *g = 0.5
                    * (0..2)
                        .map(|l| inv[k][l] * (da(j, l, i) + da(i, l, j) - da(l, i, j)))
                        .sum::<f64>();
            }
        }
    }
    Ok(ChristoffelSymbols { gamma })
}

/// Covariant derivatives of `β` with respect to `α` and the tensors built
/// from them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaDerivatives {
    /// `b_{i|j}`
    pub b_cov: Mat2,
    /// `r_ij`, symmetric part of `b_{i|j}`
    pub r: Mat2,
    /// `s_ij`, antisymmetric part of `b_{i|j}`
    pub s: Mat2,
    /// `s^i_j = a^{ih} s_hj`
    pub s_mixed: Mat2,
    /// `s_j = b_i s^i_j`
    pub s_low: [f64; 2],
    /// `e_ij = r_ij + b_i s_j + b_j s_i`
    pub e: Mat2,
    /// `b_{i|j|k}`, indexed `[i][j][k]`
    pub b_cov2: [[[f64; 2]; 2]; 2],
}

impl BetaDerivatives {
    /// `e_ij ξ^i ξ^j`.
    pub fn e00(&self, xi: [f64; 2]) -> f64 {
        quad(&self.e, xi)
    }

    /// `s_i ξ^i`.
    pub fn s0(&self, xi: [f64; 2]) -> f64 {
        self.s_low[0] * xi[0] + self.s_low[1] * xi[1]
    }

    /// `b_{i|j} ξ^i ξ^j`.
    pub fn phi(&self, xi: [f64; 2]) -> f64 {
        quad(&self.b_cov, xi)
    }

    /// `b_{i|j|k} ξ^i ξ^j ξ^k`.
    pub fn psi(&self, xi: [f64; 2]) -> f64 {
        let mut out = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out += self.b_cov2[i][j][k] * xi[i] * xi[j] * xi[k];
                }
            }
        }
        out
    }

    /// `(b_{i|j|k} − b_{i|k|j}) ξ^i ξ^j`, i.e. `F·τ_k`.
    pub fn antisymmetrized(&self, xi: [f64; 2]) -> [f64; 2] {
        std::array::from_fn(|k| {
            let mut out = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    out += (self.b_cov2[i][j][k] - self.b_cov2[i][k][j]) * xi[i] * xi[j];
                }
            }
            out
        })
    }

    fn scaled(mut self, w: f64) -> Self {
        for i in 0..2 {
            self.s_low[i] *= w;
            for j in 0..2 {
                self.b_cov[i][j] *= w;
                self.r[i][j] *= w;
                self.s[i][j] *= w;
                self.s_mixed[i][j] *= w;
                self.e[i][j] *= w;
                for k in 0..2 {
                    self.b_cov2[i][j][k] *= w;
                }
            }
        }
        self
    }
}

pub(crate) fn quad(m: &Mat2, v: [f64; 2]) -> f64 {
    m[0][0] * v[0] * v[0] + (m[0][1] + m[1][0]) * v[0] * v[1] + m[1][1] * v[1] * v[1]
}

/// `b_{i|j} = ((1 + |x|²)δ_ij − 2x^i x^j) / (1 − |x|²)²`.
fn b_cov_raw(p: [f64; 2]) -> Mat2 {
    let r2 = p[0] * p[0] + p[1] * p[1];
    let g2 = (1.0 - r2) * (1.0 - r2);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| ((1.0 + r2) * delta(i, j) - 2.0 * p[i] * p[j]) / g2)
    })
}

/// `∂b_{i|j}/∂x^k`, differentiated by hand.
fn b_cov_gradient(p: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
    let r2 = p[0] * p[0] + p[1] * p[1];
    let gap = 1.0 - r2;
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let numer = (1.0 + r2) * delta(i, j) - 2.0 * p[i] * p[j];
                let d_numer =
                    2.0 * p[k] * delta(i, j) - 2.0 * (delta(i, k) * p[j] + p[i] * delta(j, k));
                d_numer / (gap * gap) + 4.0 * p[k] * numer / (gap * gap * gap)
            })
        })
    })
}

fn second_covariant(
    b_cov: &Mat2,
    gradient: &[[[f64; 2]; 2]; 2],
    gamma: &ChristoffelSymbols,
) -> [[[f64; 2]; 2]; 2] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                gradient[i][j][k]
                    - (0..2)
                        .map(|m| {
                            b_cov[i][m] * gamma.get(m, j, k) + b_cov[j][m] * gamma.get(m, i, k)
                        })
                        .sum::<f64>()
            })
        })
    })
}

/// Closed forms for `b_{i|j}`, `r`, `s`, `e` and the hand-differentiated
/// second covariant derivative `b_{i|j|k}`.
pub fn beta_derivatives(x: &DiscPoint) -> BetaDerivatives {
    let p = x.coords();
    let b = crate::finsler::one_form(x);
    let a_inv = x.gap() * x.gap();
    let b_cov = b_cov_raw(p);
    let r: Mat2 =
        std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (b_cov[i][j] + b_cov[j][i])));
    let s: Mat2 =
        std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (b_cov[i][j] - b_cov[j][i])));
    let s_mixed: Mat2 = std::array::from_fn(|i| std::array::from_fn(|j| a_inv * s[i][j]));
    let s_low: [f64; 2] = std::array::from_fn(|j| b[0] * s_mixed[0][j] + b[1] * s_mixed[1][j]);
    let e: Mat2 = std::array::from_fn(|i| {
        std::array::from_fn(|j| r[i][j] + b[i] * s_low[j] + b[j] * s_low[i])
    });
    let b_cov2 = second_covariant(&b_cov, &b_cov_gradient(p), &christoffel(x));
    BetaDerivatives {
        b_cov,
        r,
        s,
        s_mixed,
        s_low,
        e,
        b_cov2,
    }
}

/// [`beta_derivatives`] scaled as if `β` were multiplied by `weight`.
pub(crate) fn beta_derivatives_weighted(x: &DiscPoint, weight: f64) -> BetaDerivatives {
    beta_derivatives(x).scaled(weight)
}

/// `b_{i|j}` from the defining formula `∂b_i/∂x^j − b_k Γ̄^k_ij` with the
/// partial derivatives taken numerically.
pub fn b_cov_numeric(x: &DiscPoint) -> Result<Mat2> {
    x.require_radius(NUMERIC_RADIUS)?;
    let form = |p: [f64; 2]| {
        let gap = 1.0 - p[0] * p[0] - p[1] * p[1];
        [p[0] / gap, p[1] / gap]
    };
    let p = x.coords();
    let b = form(p);
    let gamma = christoffel(x);
    let d: [[f64; 2]; 2] =
        std::array::from_fn(|j| numdiff::partial_vec(&form, p, j, numdiff::STEP));
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| d[j][i] - (0..2).map(|k| b[k] * gamma.get(k, i, j)).sum::<f64>())
    }))
}

/// `b_{i|j|k}` with `∂b_{i|j}/∂x^k` taken by central differences of the
/// closed-form `b_{i|j}`.
pub fn b_cov2_numeric(x: &DiscPoint) -> Result<[[[f64; 2]; 2]; 2]> {
    x.require_radius(NUMERIC_RADIUS)?;
    let p = x.coords();
    let flat = |q: [f64; 2]| {
        let m = b_cov_raw(q);
        [m[0][0], m[0][1], m[1][0], m[1][1]]
    };
    let d: [[f64; 4]; 2] =
        std::array::from_fn(|k| numdiff::partial_vec(&flat, p, k, numdiff::STEP));
    let gradient =
        std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| d[k][2 * i + j])));
    Ok(second_covariant(&b_cov_raw(p), &gradient, &christoffel(x)))
}
