//! Random instances for the suites. Every trial draws from its own ChaCha
//! stream, so a trial's inputs depend only on `(seed, trial)`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::functional::{GridFunctional, GridSpec};

/// Streams above this offset are reserved for the auxiliary instance sets.
pub const AUX_STREAM: u64 = 1 << 40;

pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `a x²/2 + b x + Σ c_j |x − k_j| + d·ln(1 + e^{x − m})` with random
/// coefficients. With `restrict`, the domain is cut to a random subinterval
/// that still contains the middle fifth of the grid.
pub fn random_convex_grid<R: Rng + ?Sized>(rng: &mut R, spec: GridSpec, restrict: bool) -> GridFunctional {
    let (lo, hi) = (spec.x_min, spec.x_max);
    let (mid, w) = (0.5 * (lo + hi), hi - lo);
    let a = rng.random_range(0.1..3.0);
    let b = rng.random_range(-1.0..1.0);
    let kinks: Vec<(f64, f64)> = (0..3)
        .map(|_| (rng.random_range(0.0..1.0), mid + 0.3 * w * rng.random_range(-1.0..1.0)))
        .collect();
    let d = rng.random_range(0.0..1.0);
    let m = mid + 0.25 * w * rng.random_range(-1.0..1.0);
    let f = move |x: f64| {
        0.5 * a * x * x + b * x + kinks.iter().map(|(c, k)| c * (x - k).abs()).sum::<f64>() + d * softplus(x - m)
    };
    let result = if restrict {
        let l = rng.random_range(lo..mid - 0.1 * w);
        let r = rng.random_range(mid + 0.1 * w..hi);
        GridFunctional::from_fn_on(spec, l, r, f)
    } else {
        GridFunctional::from_fn(spec, f)
    };
    result.expect("finite convex samples")
}

/// Random piecewise-linear functional with 3 to 12 breakpoints. Convex ones
/// have sorted slopes; the others interpolate random values. One in four gets
/// a restricted domain.
pub fn random_piecewise_linear<R: Rng + ?Sized>(rng: &mut R, spec: GridSpec, convex: bool) -> GridFunctional {
    let (lo, hi) = (spec.x_min, spec.x_max);
    let k = rng.random_range(3..=12);
    let mut knots: Vec<f64> = (0..k).map(|_| rng.random_range(lo..hi)).collect();
    knots.sort_by(f64::total_cmp);
    let f: Box<dyn Fn(f64) -> f64> = if convex {
        let mut slopes: Vec<f64> = (0..=k).map(|_| rng.random_range(-5.0..5.0)).collect();
        slopes.sort_by(f64::total_cmp);
        let c = rng.random_range(-2.0..2.0);
        Box::new(move |x| {
            c + slopes[0] * (x - lo)
                + knots
                    .iter()
                    .zip(slopes.windows(2))
                    .map(|(&t, s)| (s[1] - s[0]) * (x - t).max(0.0))
                    .sum::<f64>()
        })
    } else {
        let xs: Vec<f64> = std::iter::once(lo).chain(knots).chain(std::iter::once(hi)).collect();
        let ys: Vec<f64> = xs.iter().map(|_| rng.random_range(-5.0..5.0)).collect();
        Box::new(move |x| {
            let j = xs.partition_point(|&t| t <= x).clamp(1, xs.len() - 1);
            let (x0, x1) = (xs[j - 1], xs[j]);
            if x1 > x0 {
                ys[j - 1] + (ys[j] - ys[j - 1]) * (x - x0) / (x1 - x0)
            } else {
                ys[j]
            }
        })
    };
    let result = if rng.random_range(0..4) == 0 {
        let w = hi - lo;
        let l = rng.random_range(lo..lo + 0.4 * w);
        let r = rng.random_range(hi - 0.4 * w..hi);
        GridFunctional::from_fn_on(spec, l, r, f)
    } else {
        GridFunctional::from_fn(spec, f)
    };
    result.expect("finite piecewise-linear samples")
}

/// Up to `k` distinct entries of `pool`, in increasing order.
pub fn pick<R: Rng + ?Sized>(rng: &mut R, pool: &[usize], k: usize) -> Vec<usize> {
    let mut out: Vec<usize> = sample(rng, pool.len(), k.min(pool.len()))
        .into_iter()
        .map(|j| pool[j])
        .collect();
    out.sort_unstable();
    out
}
