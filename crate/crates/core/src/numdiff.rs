//! Central finite differences used by the numeric oracle routes.
//!
//! All helpers are second-order accurate. Functions of four variables take
//! the phase-space layout `[x1, x2, ξ1, ξ2]`.

/// Step used for first and second derivatives throughout the numeric routes.
pub const STEP: f64 = 1e-5;

/// Relative step for the five-point stencils; callers scale it by the
/// local length scale `1 − |x|²`.
pub const STEP4: f64 = 2e-3;

/// Step for Hessians in ξ, scaled with the vector length.
pub fn hessian_step(xi_norm: f64) -> f64 {
    STEP * xi_norm.max(1.0)
}

/// `df/dt` at `t` by a symmetric difference quotient.
pub fn derivative<F: Fn(f64) -> f64>(f: F, t: f64, h: f64) -> f64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// `∂f/∂p_i` at `p`.
pub fn partial<const N: usize, F>(f: &F, p: [f64; N], i: usize, h: f64) -> f64
where
    F: Fn([f64; N]) -> f64,
{
    let mut plus = p;
    let mut minus = p;
    plus[i] += h;
    minus[i] -= h;
    (f(plus) - f(minus)) / (2.0 * h)
}

/// `∂²f/∂p_i∂p_j` at `p`. The diagonal uses the three-point stencil, the
/// off-diagonal the four-corner stencil.
pub fn second_partial<const N: usize, F>(f: &F, p: [f64; N], i: usize, j: usize, h: f64) -> f64
where
    F: Fn([f64; N]) -> f64,
{
    if i == j {
        let mut plus = p;
        let mut minus = p;
        plus[i] += h;
        minus[i] -= h;
        return (f(plus) - 2.0 * f(p) + f(minus)) / (h * h);
    }
    let shifted = |si: f64, sj: f64| {
        let mut q = p;
        q[i] += si * h;
        q[j] += sj * h;
        f(q)
    };
    (shifted(1.0, 1.0) - shifted(1.0, -1.0) - shifted(-1.0, 1.0) + shifted(-1.0, -1.0))
        / (4.0 * h * h)
}

/// Partial derivative of a vector-valued map, component by component.
pub fn partial_vec<const N: usize, const M: usize, F>(
    f: &F,
    p: [f64; N],
    i: usize,
    h: f64,
) -> [f64; M]
where
    F: Fn([f64; N]) -> [f64; M],
{
    let mut plus = p;
    let mut minus = p;
    plus[i] += h;
    minus[i] -= h;
    let (a, b) = (f(plus), f(minus));
    std::array::from_fn(|k| (a[k] - b[k]) / (2.0 * h))
}

/// Second partial of a vector-valued map, component by component.
pub fn second_partial_vec<const N: usize, const M: usize, F>(
    f: &F,
    p: [f64; N],
    i: usize,
    j: usize,
    h: f64,
) -> [f64; M]
where
    F: Fn([f64; N]) -> [f64; M],
{
    std::array::from_fn(|k| second_partial(&|q: [f64; N]| f(q)[k], p, i, j, h))
}

/// Fourth-order five-point `∂f/∂p_i`.
pub fn partial4<const N: usize, F>(f: &F, p: [f64; N], i: usize, h: f64) -> f64
where
    F: Fn([f64; N]) -> f64,
{
    let at = |s: f64| {
        let mut q = p;
        q[i] += s * h;
        f(q)
    };
    (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h)
}

/// Fourth-order `∂²f/∂p_i∂p_j`: the five-point stencil on the diagonal, nested
/// five-point first differences off it.
pub fn second_partial4<const N: usize, F>(f: &F, p: [f64; N], i: usize, j: usize, h: f64) -> f64
where
    F: Fn([f64; N]) -> f64,
{
    if i == j {
        let at = |s: f64| {
            let mut q = p;
            q[i] += s * h;
            f(q)
        };
        return (-at(-2.0) + 16.0 * at(-1.0) - 30.0 * at(0.0) + 16.0 * at(1.0) - at(2.0))
            / (12.0 * h * h);
    }
    partial4(&|q: [f64; N]| partial4(f, q, j, h), p, i, h)
}

/// [`partial4`] applied to each component of a vector-valued map.
pub fn partial4_vec<const N: usize, const M: usize, F>(
    f: &F,
    p: [f64; N],
    i: usize,
    h: f64,
) -> [f64; M]
where
    F: Fn([f64; N]) -> [f64; M],
{
    let at = |s: f64| {
        let mut q = p;
        q[i] += s * h;
        f(q)
    };
    let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
    std::array::from_fn(|k| (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h))
}

/// [`second_partial4`] applied to each component of a vector-valued map.
pub fn second_partial4_vec<const N: usize, const M: usize, F>(
    f: &F,
    p: [f64; N],
    i: usize,
    j: usize,
    h: f64,
) -> [f64; M]
where
    F: Fn([f64; N]) -> [f64; M],
{
    std::array::from_fn(|k| second_partial4(&|q: [f64; N]| f(q)[k], p, i, j, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_on_polynomials() {
        let f = |p: [f64; 2]| p[0].powi(3) * p[1] + p[1] * p[1];
        let p = [0.7, -0.3];
        assert!((partial(&f, p, 0, 1e-4) - 3.0 * 0.49 * -0.3).abs() < 1e-8);
        assert!((second_partial(&f, p, 0, 1, 1e-4) - 3.0 * 0.49).abs() < 1e-6);
        assert!((second_partial(&f, p, 1, 1, 1e-4) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn fourth_order_stencils() {
        let f = |p: [f64; 2]| (p[0] * p[1]).sin() + p[0].exp();
        let p = [0.4, 0.9];
        let (c, s) = ((0.36f64).cos(), (0.36f64).sin());
        assert!((partial4(&f, p, 0, 1e-3) - (0.9 * c + 0.4f64.exp())).abs() < 1e-11);
        assert!((second_partial4(&f, p, 0, 0, 1e-3) - (-0.81 * s + 0.4f64.exp())).abs() < 1e-8);
        assert!((second_partial4(&f, p, 0, 1, 1e-3) - (c - 0.36 * s)).abs() < 1e-8);
        let e1 = (partial4(&|q: [f64; 1]| q[0].sin(), [1.0], 0, 2e-2) - 1f64.cos()).abs();
        let e2 = (partial4(&|q: [f64; 1]| q[0].sin(), [1.0], 0, 1e-2) - 1f64.cos()).abs();
        assert!((e1 / e2 - 16.0).abs() < 0.5);
    }

    #[test]
    fn error_shrinks_quadratically() {
        let exact = 1.0_f64.cos();
        let e1 = (derivative(f64::sin, 1.0, 1e-2) - exact).abs();
        let e2 = (derivative(f64::sin, 1.0, 5e-3) - exact).abs();
        assert!((e1 / e2 - 4.0).abs() < 0.05);
    }
}
