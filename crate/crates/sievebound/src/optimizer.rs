//! Quadratic-form assembly over polynomial coefficient bases, Rayleigh
//! quotient minimization via a generalized symmetric eigenproblem, and
//! conversion of omega bounds into `DHL` statements.

use num::{One, Signed, Zero};

use crate::error::OptimizeError;
use crate::exact::{rat_int, rational_to_f64, Rational};
use crate::functionals::{
    bilinear, omega_value, EvalMode, FunctionalValue, SieveParams, Which,
};
use crate::poly::{Basis, Poly};

/// Numerator and denominator quadratic forms of the omega quotient restricted
/// to the span of `basis`: `omega(sum x_i basis_i) = x'Ax / x'Bx + ell k`.
#[derive(Clone, Debug)]
pub struct QuadraticFormPair {
    pub params: SieveParams,
    pub basis: Vec<Poly>,
    /// numerator form `k (Q + theta (1-ell) J)`, numeric with error bounds
    pub a: Vec<Vec<f64>>,
    pub a_err: Vec<Vec<f64>>,
    /// denominator form `I`, exact
    pub b: Vec<Vec<Rational>>,
}

/// Outcome of a bound computation, ready for `DHL` reporting.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub params: SieveParams,
    pub bound: f64,
    pub error_est: f64,
    pub witness: Poly,
    pub rho: i64,
    pub method: BoundMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    Eigen,
    FixedWitness,
}

/// The hypothesis under which a given `theta` is admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assumption {
    Unconditional,
    Geh,
    GehPartial,
}

/// A `DHL` statement derived from a bound.
#[derive(Clone, Debug)]
pub struct DhlStatement {
    pub k: u32,
    pub rho: i64,
    pub assumption: Assumption,
}

/// Builds the pair of quadratic forms by polarization of the regime
/// functionals; diagonal entries are the plain functional values.
pub fn assemble(
    params: &SieveParams,
    basis: &[Poly],
    mode: EvalMode,
) -> Result<QuadraticFormPair, OptimizeError> {
    if basis.is_empty() {
        return Err(OptimizeError::EmptyBasis);
    }
    let n = basis.len();
    let jc = &params.theta * (Rational::one() - &params.ell);
    let numerator = |f: &Poly, g: &Poly| -> Result<FunctionalValue, OptimizeError> {
        let q = bilinear(params, f, g, Which::Q, mode)?;
        let v = if jc.is_zero() {
            q
        } else {
            let j = bilinear(params, f, g, Which::J, mode)?;
            q.add(&j.scale(&jc))
        };
        Ok(v.scale(&rat_int(params.k as i64)))
    };
    let mut a = vec![vec![0.0; n]; n];
    let mut a_err = vec![vec![0.0; n]; n];
    let mut b = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let num = numerator(&basis[i], &basis[j])?;
            a[i][j] = num.numeric;
            a[j][i] = num.numeric;
            a_err[i][j] = num.error_bound;
            a_err[j][i] = num.error_bound;
            let den = bilinear(params, &basis[i], &basis[j], Which::I, EvalMode::Exact)?;
            let den = den
                .as_rational()
                .expect("I of polynomials is rational")
                .clone();
            b[i][j] = den.clone();
            b[j][i] = den;
        }
    }
    Ok(QuadraticFormPair {
        params: params.clone(),
        basis: basis.to_vec(),
        a,
        a_err,
        b,
    })
}

/// Smallest generalized eigenvalue of `A x = lambda B x` by Cholesky
/// reduction and Jacobi rotations, with an a-posteriori residual check.
/// Returns `(lambda_min, coefficients, error_estimate)`; the omega bound is
/// `lambda_min + ell k`.
pub fn min_rayleigh(pair: &QuadraticFormPair) -> Result<(f64, Vec<f64>, f64), OptimizeError> {
    let n = pair.basis.len();
    let b: Vec<Vec<f64>> = pair
        .b
        .iter()
        .map(|row| row.iter().map(rational_to_f64).collect())
        .collect();
    let l = cholesky(&b).ok_or(OptimizeError::DependentBasis)?;
    // M = L^{-1} A L^{-T}, symmetric
    let y = forward_solve_matrix(&l, &pair.a); // Y = L^{-1} A
    let yt = transpose(&y);
    let m = transpose(&forward_solve_matrix(&l, &yt)); // (L^{-1} Y')' = Y L^{-T}
    let (eigvals, eigvecs) = jacobi_eigen(&m);
    let (idx, &lambda) = eigvals
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .expect("nonempty");
    let v: Vec<f64> = (0..n).map(|i| eigvecs[i][idx]).collect();
    // back-substitute L' x = v
    let mut x = v.clone();
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= l[j][i] * x[j];
        }
        x[i] = s / l[i][i];
    }
    // fix sign: first nonzero coefficient positive
    if let Some(first) = x.iter().find(|c| c.abs() > 1e-12) {
        if *first < 0.0 {
            for c in &mut x {
                *c = -*c;
            }
        }
    }
    // residual ||Ax - lambda Bx|| against ||A||
    let ax = mat_vec(&pair.a, &x);
    let bx = mat_vec(&b, &x);
    let xnorm = x.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-300);
    let residual = ax
        .iter()
        .zip(&bx)
        .map(|(p, q)| (p - lambda * q).powi(2))
        .sum::<f64>()
        .sqrt()
        / xnorm;
    let a_norm = frobenius(&pair.a).max(1e-300);
    if residual > 1e-10 * a_norm {
        return Err(OptimizeError::ResidualTooLarge(residual / a_norm));
    }
    // first-order perturbation: ||dA|| / lambda_min(B)
    let (b_eigs, _) = jacobi_eigen(&b);
    let b_min = b_eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let da = frobenius(&pair.a_err);
    let error_est = if b_min > 0.0 { da / b_min } else { f64::INFINITY };
    Ok((lambda, x, error_est))
}

/// Evaluates the omega quotient at a fixed witness polynomial.
pub fn fixed_witness_bound(
    params: &SieveParams,
    witness: &Poly,
    mode: EvalMode,
) -> Result<BoundReport, OptimizeError> {
    let omega = omega_value(params, witness, mode)?;
    Ok(BoundReport {
        params: params.clone(),
        bound: omega.numeric,
        error_est: omega.error_bound,
        witness: witness.clone(),
        rho: omega.numeric.floor() as i64,
        method: BoundMethod::FixedWitness,
    })
}

/// Minimizes the omega quotient over the span of `(c - x)^j`, `j = 0..degree`
/// with `c = 1` (standard, extended) or `1 + eps` (epsilon); if an `eps_grid`
/// is given, scans it (epsilon regime only) with `ell` re-derived from the
/// equality constraint, returning the best bound.
pub fn optimize(
    params: &SieveParams,
    degree: usize,
    eps_grid: Option<&[Rational]>,
    mode: EvalMode,
) -> Result<BoundReport, OptimizeError> {
    let candidates: Vec<SieveParams> = match eps_grid {
        None => vec![params.clone()],
        Some(grid) => {
            let mut out = Vec::with_capacity(grid.len());
            for eps in grid {
                out.push(
                    crate::functionals::SieveParams::epsilon(
                        params.k,
                        params.theta.clone(),
                        eps.clone(),
                    )
                    .map_err(|e| OptimizeError::Infeasible(e.to_string()))?,
                );
            }
            out
        }
    };
    let mut best: Option<BoundReport> = None;
    for cand in candidates {
        cand.validate()
            .map_err(|e| OptimizeError::Infeasible(e.to_string()))?;
        let shift = Rational::one() + &cand.eps;
        let c = match cand.regime {
            crate::functionals::Regime::Epsilon => shift,
            _ => Rational::one(),
        };
        let basis: Vec<Poly> = (0..=degree)
            .map(|j| {
                let mut coeffs = vec![Rational::zero(); j];
                coeffs.push(Rational::one());
                Poly::new(coeffs, Basis::Shifted(c.clone()))
            })
            .collect();
        let pair = assemble(&cand, &basis, mode)?;
        let (lambda, coeffs, error_est) = min_rayleigh(&pair)?;
        let ellk = rational_to_f64(&cand.ell) * cand.k as f64;
        let bound = lambda + ellk;
        let witness = coeffs
            .iter()
            .zip(&basis)
            .fold(Poly::zero(), |acc, (c, b)| {
                acc.add(&b.scale(&crate::exact::rational_from_f64(*c).unwrap_or_else(Rational::zero)))
            });
        let report = BoundReport {
            params: cand,
            bound,
            error_est,
            witness,
            rho: bound.floor() as i64,
            method: BoundMethod::Eigen,
        };
        best = Some(match best {
            Some(prev) if prev.bound <= report.bound => prev,
            _ => report,
        });
    }
    Ok(best.expect("at least one candidate"))
}

/// Converts a bound into the `DHL` statement it proves: `rho = floor(bound)`
/// (an integer `m` must strictly exceed the bound, and the statement holds
/// with `rho = m - 1`).
pub fn dhl(report: &BoundReport) -> DhlStatement {
    let assumption = if report.params.theta == crate::exact::rat(1, 4) {
        Assumption::Unconditional
    } else if report.params.theta == crate::exact::rat(1, 2) {
        Assumption::Geh
    } else {
        Assumption::GehPartial
    };
    DhlStatement {
        k: report.params.k,
        rho: report.bound.floor() as i64,
        assumption,
    }
}

fn cholesky(b: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = b.len();
    let scale = (0..n).map(|i| b[i][i].abs()).fold(0.0, f64::max).max(1e-300);
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = b[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 1e-12 * scale {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Solves `L X = M` column-wise for lower-triangular `L`.
fn forward_solve_matrix(l: &[Vec<f64>], m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = l.len();
    let cols = m[0].len();
    let mut x = vec![vec![0.0; cols]; n];
    for c in 0..cols {
        for i in 0..n {
            let mut s = m[i][c];
            for j in 0..i {
                s -= l[i][j] * x[j][c];
            }
            x[i][c] = s / l[i][i];
        }
    }
    x
}

fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j]).collect())
        .collect()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix; returns
/// `(eigenvalues, eigenvector columns)`.
fn jacobi_eigen(m: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let norm = frobenius(m).max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let (aip, aiq) = (a[i][p], a[i][q]);
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let (api, aqi) = (a[p][i], a[q][i]);
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for i in 0..n {
                    let (vip, viq) = (v[i][p], v[i][q]);
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }
    let eig = (0..n).map(|i| a[i][i]).collect();
    (eig, v)
}
