//! One-dimensional bracketing searches.

/// `(√5 − 1) / 2`, the golden-section shrink factor.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[lo, hi]` by golden-section search, stopping
/// once the bracket is narrower than `tol`. Returns the bracket midpoint.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    debug_assert!(lo < hi);
    let mut b = hi - INV_PHI * (hi - lo);
    let mut c = lo + INV_PHI * (hi - lo);
    let mut fb = f(b);
    let mut fc = f(c);
    // Each pass shrinks by INV_PHI; the cap only matters for pathological tol.
    for _ in 0..500 {
        if hi - lo <= tol {
            break;
        }
        if fb >= fc {
            hi = c;
            c = b;
            fc = fb;
            b = hi - INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            lo = b;
            b = c;
            fb = fc;
            c = lo + INV_PHI * (hi - lo);
            fc = f(c);
        }
    }
    0.5 * (lo + hi)
}

/// Bisection on the sign of `g`. Requires a sign change on `[lo, hi]`;
/// otherwise returns `None`.
pub fn bisect_sign<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Some(lo);
    }
    if g_hi == 0.0 {
        return Some(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return Some(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
