//! Independent Monte Carlo integrator over the original multidimensional
//! functional definitions, used to validate the dimensional collapse and the
//! region decompositions end to end.
//!
//! Estimates are deterministic: samples are split across 64 counter-based
//! partitions keyed by `(seed, partition)` and combined in fixed index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::rational_to_f64;
use crate::functionals::{FunctionalValue, Regime, SieveParams, Which};
use crate::poly::Poly;

const PARTITIONS: u64 = 64;
/// lower cutoff for the kernel variable y; the excluded mass near the 1/y
/// singularity is O(delta^2) for the difference kernel and is negligible
/// against the statistical error at any sample count this module supports
const DELTA: f64 = 1e-6;

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct McResult {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Region families whose volumes the oracle can estimate.
#[derive(Clone, Copy, Debug)]
pub enum McRegion {
    /// `lambda * R_k`, the scaled standard simplex
    ScaledSimplex(f64),
    /// `R_k'`, the extended simplex
    ExtendedSimplex,
    /// `(1+eps) * R_k' ∩ eta * R_k`, the regime support of the params
    Support,
}

/// Per-coordinate bounding box edge for the support of a regime.
fn box_edge(params: &SieveParams) -> f64 {
    match params.regime {
        Regime::Standard | Regime::Extended => 1.0,
        Regime::Epsilon => 1.0 + rational_to_f64(&params.eps),
    }
}

/// Indicator of the regime support at a point (all coordinates nonnegative).
fn in_support(params: &SieveParams, t: &[f64]) -> bool {
    let sum: f64 = t.iter().sum();
    let min = t.iter().cloned().fold(f64::INFINITY, f64::min);
    match params.regime {
        Regime::Standard => sum <= 1.0,
        Regime::Extended => sum - min <= 1.0,
        Regime::Epsilon => {
            sum - min <= 1.0 + rational_to_f64(&params.eps)
                && sum <= rational_to_f64(&params.eta)
        }
    }
}

/// Monomial coefficients of `f` as floats, for fast Horner evaluation.
fn monomial_f64(f: &Poly) -> Vec<f64> {
    f.to_monomial()
        .coeffs()
        .iter()
        .map(rational_to_f64)
        .collect()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `F(t) = f(t_1 + ... + t_k)` truncated to the regime support.
fn big_f(params: &SieveParams, coeffs: &[f64], t: &[f64]) -> f64 {
    if in_support(params, t) {
        horner(coeffs, t.iter().sum())
    } else {
        0.0
    }
}

/// Runs `samples` evaluations of `value` (given a uniform point in
/// `[0,1]^dims`) split over fixed partitions, returning mean and standard
/// error of `value`.
fn run<V: Fn(&[f64]) -> f64 + Sync>(
    dims: usize,
    samples: u64,
    seed: u64,
    value: V,
) -> McResult {
    let mut total = 0.0;
    let mut total_sq = 0.0;
    let mut point = vec![0.0; dims];
    for part in 0..PARTITIONS {
        let n = samples / PARTITIONS + u64::from(part < samples % PARTITIONS);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(part);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            for c in point.iter_mut() {
                *c = rng.gen::<f64>();
            }
            let v = value(&point);
            sum += v;
            sum_sq += v * v;
        }
        total += sum;
        total_sq += sum_sq;
    }
    let n = samples as f64;
    let mean = total / n;
    let var = (total_sq / n - mean * mean).max(0.0) / (n - 1.0).max(1.0);
    McResult {
        estimate: mean,
        std_error: var.sqrt(),
        samples,
        seed,
    }
}

/// Rejection-sampling volume estimate of a region family.
pub fn mc_volume(
    region: McRegion,
    k: u32,
    params: &SieveParams,
    samples: u64,
    seed: u64,
) -> McResult {
    let k = k as usize;
    let (edge, inside): (f64, Box<dyn Fn(&[f64]) -> bool + Sync>) = match region {
        McRegion::ScaledSimplex(lambda) => (
            lambda,
            Box::new(move |t: &[f64]| t.iter().sum::<f64>() <= lambda),
        ),
        McRegion::ExtendedSimplex => (
            1.0,
            Box::new(|t: &[f64]| {
                let sum: f64 = t.iter().sum();
                let min = t.iter().cloned().fold(f64::INFINITY, f64::min);
                sum - min <= 1.0
            }),
        ),
        McRegion::Support => {
            let p = params.clone();
            (box_edge(params), Box::new(move |t: &[f64]| in_support(&p, t)))
        }
    };
    let box_vol = edge.powi(k as i32);
    run(k, samples, seed, move |u| {
        let pt: Vec<f64> = u.iter().map(|c| c * edge).collect();
        if inside(&pt) {
            box_vol
        } else {
            0.0
        }
    })
}

/// Direct Monte Carlo estimate of the multidimensional functional at
/// `F = f(t_1+...+t_k)` truncated to the regime support, for a single index
/// `i = k` (all indices agree by symmetry). Squared inner integrals are
/// estimated with two independent copies of the integration variable.
pub fn mc_functional(
    which: Which,
    params: &SieveParams,
    f: &Poly,
    samples: u64,
    seed: u64,
) -> McResult {
    let k = params.k as usize;
    let coeffs = monomial_f64(f);
    let c = box_edge(params);
    let theta = rational_to_f64(&params.theta);
    let ell = rational_to_f64(&params.ell);
    let eps = rational_to_f64(&params.eps);
    let p = params.clone();
    match which {
        Which::I => {
            let weight = c.powi(k as i32);
            run(k, samples, seed, move |u| {
                let t: Vec<f64> = u.iter().map(|x| x * c).collect();
                let v = big_f(&p, &coeffs, &t);
                weight * v * v
            })
        }
        Which::J => {
            // (t_1..t_{k-1}, u, v); the epsilon regime restricts the outer
            // variables to (1-eps) * R_{k-1}
            let weight = c.powi(k as i32 + 1);
            let outer_cap = match p.regime {
                Regime::Epsilon => 1.0 - eps,
                _ => f64::INFINITY,
            };
            run(k + 1, samples, seed, move |u| {
                let outer_sum: f64 = u[..k - 1].iter().map(|x| x * c).sum();
                if outer_sum > outer_cap {
                    return 0.0;
                }
                let mut t: Vec<f64> = u[..k - 1].iter().map(|x| x * c).collect();
                t.push(u[k - 1] * c);
                let a = big_f(&p, &coeffs, &t);
                t[k - 1] = u[k] * c;
                let b = big_f(&p, &coeffs, &t);
                weight * a * b
            })
        }
        Which::Q => {
            // (y, t_1..t_{k-1}, t_k); t_k ranges over (0, 1/theta - y)
            let y_width = 1.0 / theta - DELTA;
            let tk_width = 1.0 / theta;
            let weight = y_width * c.powi(k as i32 - 1) * tk_width;
            run(k + 1, samples, seed, move |u| {
                let y = DELTA + u[0] * y_width;
                let tk = u[k] * tk_width;
                if tk > 1.0 / theta - y {
                    return 0.0;
                }
                let outer_sum: f64 = u[1..k].iter().map(|x| x * c).sum();
                if p.regime == Regime::Epsilon {
                    let phi = if y < 1.0 / (ell * theta) {
                        1.0 + eps
                    } else {
                        1.0 - eps
                    };
                    if outer_sum > phi {
                        return 0.0;
                    }
                }
                let mut t: Vec<f64> = u[1..k].iter().map(|x| x * c).collect();
                t.push(tk);
                let a = big_f(&p, &coeffs, &t);
                t[k - 1] = tk + y;
                let b = big_f(&p, &coeffs, &t);
                let diff = b - a;
                weight * (1.0 - ell * theta * y) / y * diff * diff
            })
        }
    }
}

/// Distance between an exact/collapsed value and a Monte Carlo estimate in
/// units of the estimate's standard error.
pub fn compare(exact: &FunctionalValue, mc: &McResult) -> f64 {
    (exact.numeric - mc.estimate).abs() / mc.std_error
}

/// Scales a collapsed library value onto the multidimensional normalization
/// the oracle estimates.
pub fn bridged(params: &SieveParams, value: &FunctionalValue) -> FunctionalValue {
    value.scale(&crate::functionals::oracle_scale(params))
}

/// Draws a random cubic with coefficients in [-1, 1], deterministically.
pub fn random_cubic(seed: u64, basis: crate::poly::Basis) -> Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let coeffs: Vec<_> = (0..4)
        .map(|_| {
            let x: f64 = rng.gen_range(-1.0..1.0);
            crate::exact::rat((x * 1000.0).round() as i64, 1000)
        })
        .collect();
    Poly::new(coeffs, basis)
}
