//! The variational functionals `I`, `J`, `Q` of the three sieve regimes
//! (standard, extended, epsilon-enlarged) for collapsed test functions
//! `F(t_1,...,t_k) = f(t_1+...+t_k)`, plus the omega quotient they define and
//! the bilinear (polarized) forms used for quadratic-form assembly.
//!
//! Normalization conventions, fixed once per regime:
//! * standard: the barred, factorial-free one-dimensional forms
//!   (`std_i = int_0^1 f^2 t^{k-1}`, three-piece `std_q`, `std_j` scaled by
//!   `(k-1)!` to match);
//! * extended and epsilon: the collapsed multidimensional forms including
//!   their `1/(k-3)!`, `1/(k-2)!`, `1/(k-1)!` prefactors.
//!
//! The omega quotient `k (Q + theta (1-ell) J) / I + ell k` is invariant under
//! common rescaling, so the two conventions agree wherever they overlap; the
//! bridge factor between them is `1/(k-1)!` (see [`oracle_scale`]).

use num::{One, Signed, Zero};

use crate::error::FunctionalError;
use crate::exact::{factorial, rat_int, LogValue, Rational};
use crate::poly::{MPoly, Poly};
use crate::regions::{kernel_integral_exact, kernel_integral_quadrature, Region};

/// Sieve support regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Standard simplex `t_1 + ... + t_k <= 1`.
    Standard,
    /// Extended simplex: every `(k-1)`-subsum at most 1.
    Extended,
    /// Epsilon-enlarged simplex `(1+eps) R_k'` intersected with `eta R_k`.
    Epsilon,
}

/// Full parameter set of a sieve evaluation.
#[derive(Clone, Debug)]
pub struct SieveParams {
    pub regime: Regime,
    pub k: u32,
    pub theta: Rational,
    pub ell: Rational,
    pub eps: Rational,
    pub eta: Rational,
}

impl SieveParams {
    pub fn standard(k: u32, theta: Rational) -> Self {
        SieveParams {
            regime: Regime::Standard,
            k,
            theta,
            ell: Rational::one(),
            eps: Rational::zero(),
            eta: Rational::one(),
        }
    }

    pub fn extended(k: u32, theta: Rational) -> Self {
        SieveParams {
            regime: Regime::Extended,
            k,
            theta,
            ell: Rational::one(),
            eps: Rational::zero(),
            eta: Rational::one(),
        }
    }

    /// Epsilon regime with `eta = 1 + eps` and `ell` tied to the equality
    /// `2 theta (1 + eps) + 1/ell = 1`.
    pub fn epsilon(k: u32, theta: Rational, eps: Rational) -> Result<Self, FunctionalError> {
        let eta = Rational::one() + &eps;
        let slack = Rational::one() - rat_int(2) * &theta * &eta;
        if !slack.is_positive() {
            return Err(FunctionalError::Constraint(format!(
                "2*theta*(1+eps) = {} leaves no room for ell",
                rat_int(2) * &theta * &eta
            )));
        }
        let ell = Rational::one() / slack;
        let p = SieveParams {
            regime: Regime::Epsilon,
            k,
            theta,
            ell,
            eps,
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Epsilon regime with every parameter chosen explicitly.
    pub fn epsilon_with(
        k: u32,
        theta: Rational,
        eps: Rational,
        ell: Rational,
        eta: Rational,
    ) -> Result<Self, FunctionalError> {
        let p = SieveParams {
            regime: Regime::Epsilon,
            k,
            theta,
            ell,
            eps,
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FunctionalError> {
        if self.k < 2 {
            return Err(FunctionalError::Constraint(format!(
                "k must be at least 2, got {}",
                self.k
            )));
        }
        if self.regime == Regime::Extended && self.k < 3 {
            return Err(FunctionalError::ExtendedNeedsK3(self.k));
        }
        if !self.theta.is_positive() || self.theta > rat(1, 2) {
            return Err(FunctionalError::Constraint(format!(
                "theta must lie in (0, 1/2], got {}",
                self.theta
            )));
        }
        if self.eps.is_negative() || self.eps >= Rational::one() {
            return Err(FunctionalError::Constraint(format!(
                "eps must lie in [0, 1), got {}",
                self.eps
            )));
        }
        if self.eta < Rational::one() + &self.eps {
            return Err(FunctionalError::Constraint(format!(
                "eta must be at least 1 + eps, got {}",
                self.eta
            )));
        }
        match self.regime {
            Regime::Standard | Regime::Extended => {
                if !self.ell.is_one() {
                    return Err(FunctionalError::Constraint(
                        "standard and extended regimes fix ell = 1".into(),
                    ));
                }
            }
            Regime::Epsilon => {
                if self.eps.is_positive() {
                    if self.ell <= Rational::one() {
                        return Err(FunctionalError::Constraint(format!(
                            "ell must exceed 1 when eps > 0, got {}",
                            self.ell
                        )));
                    }
                    let lhs = rat_int(2) * &self.theta * &self.eta + Rational::one() / &self.ell;
                    if lhs > Rational::one() {
                        return Err(FunctionalError::Constraint(format!(
                            "2*theta*eta + 1/ell = {lhs} exceeds 1"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// How to evaluate a kernel integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalMode {
    Exact,
    Quadrature { tol: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Quadrature,
}

/// A functional value: exact closed form when available, always a numeric
/// rendering with a guaranteed absolute error bound.
#[derive(Clone, Debug)]
pub struct FunctionalValue {
    pub exact: Option<LogValue>,
    pub numeric: f64,
    pub error_bound: f64,
    pub method: Method,
}

impl FunctionalValue {
    pub fn from_logvalue(v: LogValue) -> Self {
        let (numeric, error_bound) = v.to_f64_default();
        FunctionalValue {
            exact: Some(v),
            numeric,
            error_bound,
            method: Method::Exact,
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        FunctionalValue::from_logvalue(LogValue::from_rational(r))
    }

    pub fn from_quadrature(value: f64, error_bound: f64) -> Self {
        FunctionalValue {
            exact: None,
            numeric: value,
            error_bound,
            method: Method::Quadrature,
        }
    }

    /// The exact rational value, when this is exact and log-free.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.exact.as_ref().and_then(|v| v.as_rational())
    }

    pub fn add(&self, other: &FunctionalValue) -> FunctionalValue {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => FunctionalValue::from_logvalue(a + b),
            _ => FunctionalValue {
                exact: None,
                numeric: self.numeric + other.numeric,
                error_bound: self.error_bound + other.error_bound,
                method: Method::Quadrature,
            },
        }
    }

    pub fn scale(&self, c: &Rational) -> FunctionalValue {
        let cf = crate::exact::rational_to_f64(c);
        match &self.exact {
            Some(v) => FunctionalValue::from_logvalue(v.scale(c)),
            None => FunctionalValue {
                exact: None,
                numeric: self.numeric * cf,
                error_bound: self.error_bound * cf.abs(),
                method: Method::Quadrature,
            },
        }
    }
}

fn rat(n: i64, d: i64) -> Rational {
    crate::exact::rat(n, d)
}

/// `int_0^1 f(t)^2 t^{k-1} dt`, the factorial-free standard-regime
/// denominator.
pub fn std_i(f: &Poly, k: u32) -> FunctionalValue {
    let p = f.mul(f).mul(&t_power(k - 1));
    FunctionalValue::from_rational(p.integrate(&Rational::zero(), &Rational::one()))
}

/// `(k-1)! / (k-2)! * int_0^1 (int_t^1 f)^2 t^{k-2} dt`, scaled to the same
/// normalization as [`std_i`].
pub fn std_j(f: &Poly, k: u32) -> FunctionalValue {
    let anti = f.antiderivative();
    // int_t^1 f = A(1) - A(t)
    let inner = Poly::constant(anti.eval(&Rational::one())).sub(&anti);
    let p = inner.mul(&inner).mul(&t_power(k - 2));
    let scale = factorial(k - 1) / factorial(k - 2);
    FunctionalValue::from_rational(p.integrate(&Rational::zero(), &Rational::one()) * scale)
}

/// The three pieces of the standard-regime `Q`: difference kernel near the
/// origin, plain `f^2` band, and the boundary-corrected band.
pub fn std_q_parts(
    f: &Poly,
    k: u32,
    theta: &Rational,
    mode: EvalMode,
) -> Result<[FunctionalValue; 3], FunctionalError> {
    // variables (t, y); the kernel variable is y
    let t = || MPoly::var(2, 0);
    let y = || MPoly::var(2, 1);
    let one = || MPoly::constant(2, Rational::one());
    let inv_theta = Rational::one() / theta;

    // difference piece: {t > 0, y > 0, t + y < 1}
    let mut d1 = Region::new(2);
    d1.constrain(&t())?;
    d1.constrain(&y())?;
    d1.constrain(&one().sub(&t()).sub(&y()))?;
    let diff = f.to_mpoly(2, 0).sub(&f.shift_substitute());
    let d1_integrand = diff.pow(2).mul(&t_power(k - 1).to_mpoly(2, 0));

    // middle band: {0 < t < 1, 1 < t + y < 1/theta}
    let mut band = Region::new(2);
    band.constrain(&t())?;
    band.constrain(&one().sub(&t()))?;
    band.constrain(&t().add(&y()).sub(&one()))?;
    band.constrain(&MPoly::constant(2, inv_theta.clone()).sub(&t()).sub(&y()))?;
    let band_integrand = f.to_mpoly(2, 0).pow(2).mul(&t_power(k - 1).to_mpoly(2, 0));

    // boundary band: {0 < t < 1, t + y > 1/theta, y < 1/theta}
    let mut edge = Region::new(2);
    edge.constrain(&t())?;
    edge.constrain(&one().sub(&t()))?;
    edge.constrain(&t().add(&y()).sub(&MPoly::constant(2, inv_theta.clone())))?;
    edge.constrain(&MPoly::constant(2, inv_theta.clone()).sub(&y()))?;
    let shifted = t()
        .add(&y())
        .sub(&MPoly::constant(2, inv_theta.clone()));
    let weight = t_power(k - 1)
        .to_mpoly(2, 0)
        .sub(&poly_pow(&shifted, k - 1));
    let edge_integrand = f.to_mpoly(2, 0).pow(2).mul(&weight);

    let pieces = [
        (d1, d1_integrand),
        (band, band_integrand),
        (edge, edge_integrand),
    ];
    let mut out = Vec::with_capacity(3);
    for (region, integrand) in pieces {
        out.push(kernel_value(&region, 1, &integrand, theta, mode)?);
    }
    Ok(out.try_into().expect("three pieces"))
}

/// Sum of the three standard-regime `Q` pieces.
pub fn std_q(
    f: &Poly,
    k: u32,
    theta: &Rational,
    mode: EvalMode,
) -> Result<FunctionalValue, FunctionalError> {
    let [a, b, c] = std_q_parts(f, k, theta, mode)?;
    Ok(a.add(&b).add(&c))
}

/// `1/(k-3)! int_0^1 int_0^t int_t^{1+s/(k-1)} f(x)^2 (t-s)^{k-3} dx ds dt`.
pub fn ext_i(f: &Poly, k: u32) -> Result<FunctionalValue, FunctionalError> {
    if k < 3 {
        return Err(FunctionalError::ExtendedNeedsK3(k));
    }
    // variables (s, t, x)
    let (s, t) = (MPoly::var(3, 0), MPoly::var(3, 1));
    let integrand = f
        .to_mpoly(3, 2)
        .pow(2)
        .mul(&poly_pow(&t.sub(&s), k - 3));
    let upper_x = MPoly::constant(3, Rational::one()).add(&s.scale(&rat(1, k as i64 - 1)));
    let after_x = integrand.integrate_affine(2, &t, &upper_x)?;
    let after_s = after_x.integrate_affine(0, &MPoly::zero(3), &t)?;
    let total = after_s.integrate_affine(1, &MPoly::zero(3), &MPoly::constant(3, Rational::one()))?;
    let value = total
        .as_constant()
        .expect("fully integrated value is constant");
    Ok(FunctionalValue::from_rational(
        value / factorial(k - 3),
    ))
}

/// Extended-regime `Q` over the split four-variable region: the difference
/// kernel applies where the shifted argument stays inside the support
/// (`x + y < 1 + s/(k-1)`), the plain `f(x)^2` where it leaves it.
pub fn ext_q(
    f: &Poly,
    k: u32,
    theta: &Rational,
    mode: EvalMode,
) -> Result<FunctionalValue, FunctionalError> {
    if k < 3 {
        return Err(FunctionalError::ExtendedNeedsK3(k));
    }
    // variables (y, s, t, x)
    let y = || MPoly::var(4, 0);
    let s = || MPoly::var(4, 1);
    let t = || MPoly::var(4, 2);
    let x = || MPoly::var(4, 3);
    let cst = |r: Rational| MPoly::constant(4, r);
    let inv_theta = Rational::one() / theta;
    let km1 = rat(1, k as i64 - 1);

    let mut base = Region::new(4);
    base.constrain(&y())?;
    base.constrain(&cst(inv_theta.clone()).sub(&y()))?;
    base.constrain(&s())?;
    base.constrain(&t().sub(&s()))?;
    base.constrain(&cst(Rational::one()).sub(&t()))?;
    base.constrain(&x().sub(&t()))?;
    let support_edge = cst(Rational::one()).add(&s().scale(&km1)).sub(&x());
    base.constrain(&support_edge)?;
    base.constrain(&cst(inv_theta).sub(&x()).add(&t()).sub(&y()))?;

    let weight = poly_pow(&t().sub(&s()), k - 3);
    let fx = f.to_mpoly(4, 3);
    let fxy = f
        .shift_substitute()
        .compose(&[MPoly::var(4, 3), MPoly::var(4, 0)]);

    // inside: x + y < 1 + s/(k-1), difference kernel
    let mut inside = base.clone();
    inside.constrain(&cst(Rational::one()).add(&s().scale(&km1)).sub(&x()).sub(&y()))?;
    let inside_integrand = fx.sub(&fxy).pow(2).mul(&weight);

    // outside: x + y > 1 + s/(k-1), shifted argument truncated away
    let mut outside = base;
    outside.constrain(&x().add(&y()).sub(&cst(Rational::one())).sub(&s().scale(&km1)))?;
    let outside_integrand = fx.pow(2).mul(&weight);

    let a = kernel_value(&inside, 0, &inside_integrand, theta, mode)?;
    let b = kernel_value(&outside, 0, &outside_integrand, theta, mode)?;
    let inv_fact = Rational::one() / factorial(k - 3);
    Ok(a.add(&b).scale(&inv_fact))
}

/// `1/(k-1)! int_0^{1+eps} f(t)^2 t^{k-1} dt`.
pub fn eps_i(f: &Poly, k: u32, eps: &Rational) -> FunctionalValue {
    let p = f.mul(f).mul(&t_power(k - 1));
    let upper = Rational::one() + eps;
    FunctionalValue::from_rational(p.integrate(&Rational::zero(), &upper) / factorial(k - 1))
}

/// `1/(k-2)! int_0^{1-eps} (int_t^{1+eps} f)^2 t^{k-2} dt`.
pub fn eps_j(f: &Poly, k: u32, eps: &Rational) -> FunctionalValue {
    let anti = f.antiderivative();
    let upper = Rational::one() + eps;
    let inner = Poly::constant(anti.eval(&upper)).sub(&anti);
    let p = inner.mul(&inner).mul(&t_power(k - 2));
    let lim = Rational::one() - eps;
    FunctionalValue::from_rational(p.integrate(&Rational::zero(), &lim) / factorial(k - 2))
}

/// Epsilon-regime `Q` over the three-variable `H` region with kernel
/// `(1 - ell theta y)/y`. The kernel variable splits at `1/(ell theta)`
/// (where the `t`-range shrinks to `1 - eps`); independently, the integrand
/// is the difference kernel where `x + y < 1 + eps` and `f(x)^2` beyond.
pub fn eps_q(
    f: &Poly,
    k: u32,
    theta: &Rational,
    ell: &Rational,
    eps: &Rational,
    mode: EvalMode,
) -> Result<FunctionalValue, FunctionalError> {
    // variables (y, t, x)
    let y = || MPoly::var(3, 0);
    let t = || MPoly::var(3, 1);
    let x = || MPoly::var(3, 2);
    let cst = |r: Rational| MPoly::constant(3, r);
    let inv_theta = Rational::one() / theta;
    let inv_lt = Rational::one() / (ell * theta);
    let upper = Rational::one() + eps;

    let mut base = Region::new(3);
    base.constrain(&y())?;
    base.constrain(&cst(inv_theta.clone()).sub(&y()))?;
    base.constrain(&t())?;
    base.constrain(&x().sub(&t()))?;
    base.constrain(&cst(upper.clone()).sub(&x()))?;
    base.constrain(&cst(inv_theta).sub(&x()).add(&t()).sub(&y()))?;

    let weight = t_power(k - 2).to_mpoly(3, 1);
    let fx = f.to_mpoly(3, 2);
    let fxy = f
        .shift_substitute()
        .compose(&[MPoly::var(3, 2), MPoly::var(3, 0)]);
    let diff_integrand = fx.sub(&fxy).pow(2).mul(&weight);
    let square_integrand = fx.pow(2).mul(&weight);

    let mut total: Option<FunctionalValue> = None;
    for low_y in [true, false] {
        for inside in [true, false] {
            let mut region = base.clone();
            if low_y {
                region.constrain(&cst(inv_lt.clone()).sub(&y()))?;
            } else {
                region.constrain(&y().sub(&cst(inv_lt.clone())))?;
                region.constrain(&cst(Rational::one() - eps).sub(&t()))?;
            }
            if inside {
                region.constrain(&cst(upper.clone()).sub(&x()).sub(&y()))?;
            } else {
                region.constrain(&x().add(&y()).sub(&cst(upper.clone())))?;
            }
            let integrand = if inside { &diff_integrand } else { &square_integrand };
            let w = ell * theta;
            let piece = kernel_value(&region, 0, integrand, &w, mode)?;
            total = Some(match total {
                Some(acc) => acc.add(&piece),
                None => piece,
            });
        }
    }
    let inv_fact = Rational::one() / factorial(k - 2);
    Ok(total.expect("four pieces").scale(&inv_fact))
}

/// Regime-dispatched `I`.
pub fn i_value(params: &SieveParams, f: &Poly) -> Result<FunctionalValue, FunctionalError> {
    params.validate()?;
    Ok(match params.regime {
        Regime::Standard => std_i(f, params.k),
        Regime::Extended => ext_i(f, params.k)?,
        Regime::Epsilon => eps_i(f, params.k, &params.eps),
    })
}

/// Regime-dispatched `J`.
pub fn j_value(params: &SieveParams, f: &Poly) -> Result<FunctionalValue, FunctionalError> {
    params.validate()?;
    Ok(match params.regime {
        Regime::Standard => std_j(f, params.k),
        // ell = 1 removes J from the quotient in the extended regime
        Regime::Extended => FunctionalValue::from_rational(Rational::zero()),
        Regime::Epsilon => eps_j(f, params.k, &params.eps),
    })
}

/// Regime-dispatched `Q`.
pub fn q_value(
    params: &SieveParams,
    f: &Poly,
    mode: EvalMode,
) -> Result<FunctionalValue, FunctionalError> {
    params.validate()?;
    match params.regime {
        Regime::Standard => std_q(f, params.k, &params.theta, mode),
        Regime::Extended => ext_q(f, params.k, &params.theta, mode),
        Regime::Epsilon => eps_q(
            f,
            params.k,
            &params.theta,
            &params.ell,
            &params.eps,
            mode,
        ),
    }
}

/// The omega quotient `k (Q + theta (1 - ell) J) / I + ell k`; exact whenever
/// `Q` is (the denominator `I` is always rational).
pub fn omega_value(
    params: &SieveParams,
    f: &Poly,
    mode: EvalMode,
) -> Result<FunctionalValue, FunctionalError> {
    let i = i_value(params, f)?;
    let i_rat = i
        .as_rational()
        .expect("I of a polynomial is rational")
        .clone();
    if i_rat.is_zero() {
        return Err(FunctionalError::ZeroDenominator);
    }
    let q = q_value(params, f, mode)?;
    let jc = &params.theta * (Rational::one() - &params.ell);
    let j = if jc.is_zero() {
        FunctionalValue::from_rational(Rational::zero())
    } else {
        j_value(params, f)?
    };
    let kq = rat_int(params.k as i64);
    let numer = q.add(&j.scale(&jc)).scale(&kq);
    let shift = &params.ell * &kq;
    let scaled = numer.scale(&(Rational::one() / i_rat));
    Ok(match &scaled.exact {
        Some(v) => FunctionalValue::from_logvalue(&v.clone() + &LogValue::from_rational(shift)),
        None => FunctionalValue {
            exact: None,
            numeric: scaled.numeric + crate::exact::rational_to_f64(&shift),
            error_bound: scaled.error_bound,
            method: Method::Quadrature,
        },
    })
}

/// Which quadratic functional a bilinear form refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    I,
    Q,
    J,
}

/// Polarization `B(f, g) = (Phi(f+g) - Phi(f) - Phi(g)) / 2` of the chosen
/// quadratic functional; symmetric, with `B(f, f) = Phi(f)`.
pub fn bilinear(
    params: &SieveParams,
    f: &Poly,
    g: &Poly,
    which: Which,
    mode: EvalMode,
) -> Result<FunctionalValue, FunctionalError> {
    let eval = |h: &Poly| -> Result<FunctionalValue, FunctionalError> {
        match which {
            Which::I => i_value(params, h),
            Which::Q => q_value(params, h, mode),
            Which::J => j_value(params, h),
        }
    };
    let sum = eval(&f.add(g))?;
    let ff = eval(f)?;
    let gg = eval(g)?;
    let half = rat(1, 2);
    Ok(sum
        .add(&ff.scale(&rat_int(-1)))
        .add(&gg.scale(&rat_int(-1)))
        .scale(&half))
}

/// Conversion factor from this crate's per-regime normalization to the raw
/// multidimensional functionals of the collapsed `F = f(P_1)`: multiply the
/// library's `I`, `Q`, `J` by this factor. Only the standard regime differs
/// (its barred forms drop a common `1/(k-1)!`).
pub fn oracle_scale(params: &SieveParams) -> Rational {
    match params.regime {
        Regime::Standard => Rational::one() / factorial(params.k - 1),
        Regime::Extended | Regime::Epsilon => Rational::one(),
    }
}

/// The combinatorial volume factor of the extended-regime collapse: an
/// `(k-3)`-fold nested integral with closed form
/// `(t - (k-1) s)^{k-3} / ((k-2)! (k-3)!)`, computed here by its defining
/// recursion (bivariate in `(t, s)`).
pub fn nested_volume(k: u32) -> Result<MPoly, FunctionalError> {
    assert!(k >= 3);
    if k == 3 {
        return Ok(MPoly::constant(2, Rational::one()));
    }
    let prev = nested_volume(k - 1)?;
    // lift to (t, s, u): previous evaluated at (t - s, u)
    let t = MPoly::var(3, 0);
    let s = MPoly::var(3, 1);
    let u = MPoly::var(3, 2);
    let lifted = prev.compose(&[t.sub(&s), u]);
    let upper = t.sub(&s).scale(&rat(1, k as i64 - 2));
    let integrated = lifted.integrate_affine(2, &s, &upper)?;
    Ok(integrated.partial_eval(2, &Rational::zero()))
}

/// Closed form `(t - (k-1) s)^{k-3} / ((k-2)! (k-3)!)` matching
/// [`nested_volume`].
pub fn nested_volume_closed_form(k: u32) -> MPoly {
    assert!(k >= 3);
    let t = MPoly::var(2, 0);
    let s = MPoly::var(2, 1);
    let base = t.sub(&s.scale(&rat_int(k as i64 - 1)));
    let scale = Rational::one() / (factorial(k - 2) * factorial(k - 3));
    poly_pow(&base, k - 3).scale(&scale)
}

fn kernel_value(
    region: &Region,
    y_var: usize,
    integrand: &MPoly,
    w: &Rational,
    mode: EvalMode,
) -> Result<FunctionalValue, FunctionalError> {
    match mode {
        EvalMode::Exact => {
            let v = kernel_integral_exact(region, y_var, integrand, w)?;
            Ok(FunctionalValue::from_logvalue(v))
        }
        EvalMode::Quadrature { tol } => {
            let (v, e) = kernel_integral_quadrature(region, y_var, integrand, w, tol)?;
            Ok(FunctionalValue::from_quadrature(v, e))
        }
    }
}

/// `t^n` as a univariate polynomial.
fn t_power(n: u32) -> Poly {
    let mut coeffs = vec![Rational::zero(); n as usize];
    coeffs.push(Rational::one());
    Poly::new(coeffs, crate::poly::Basis::Monomial)
}

fn poly_pow(p: &MPoly, n: u32) -> MPoly {
    p.pow(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::poly::Basis;

    fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    fn one_minus_x() -> Poly {
        Poly::from_i64(&[1, -1], Basis::Monomial)
    }

    #[test]
    fn std_i_examples() {
        assert_eq!(std_i(&one(), 2).as_rational(), Some(&rat(1, 2)));
        assert_eq!(std_i(&one_minus_x(), 2).as_rational(), Some(&rat(1, 12)));
        assert_eq!(std_i(&Poly::zero(), 5).as_rational(), Some(&rat(0, 1)));
    }

    #[test]
    fn std_j_examples() {
        assert_eq!(std_j(&one(), 2).as_rational(), Some(&rat(1, 3)));
        assert_eq!(std_j(&Poly::zero(), 4).as_rational(), Some(&rat(0, 1)));
    }

    #[test]
    fn std_q_constant_k2() {
        let parts = std_q_parts(&one(), 2, &rat(1, 2), EvalMode::Exact).unwrap();
        // difference piece vanishes for constants
        assert!(parts[0].exact.as_ref().unwrap().is_zero());
        // middle band: 2 ln 2 - 3/4
        let mut band = LogValue::from_rational(rat(-3, 4));
        band.add_log_term(&rat(2, 1), &rat(2, 1)).unwrap();
        assert_eq!(parts[1].exact.as_ref().unwrap(), &band);
        // edge band: 17/12 - 2 ln 2
        let mut edge = LogValue::from_rational(rat(17, 12));
        edge.add_log_term(&rat(2, 1), &rat(-2, 1)).unwrap();
        assert_eq!(parts[2].exact.as_ref().unwrap(), &edge);
        // logs cancel in the sum
        let total = std_q(&one(), 2, &rat(1, 2), EvalMode::Exact).unwrap();
        assert_eq!(total.as_rational(), Some(&rat(2, 3)));
    }

    #[test]
    fn omega_standard_constant() {
        let params = SieveParams::standard(2, rat(1, 2));
        let omega = omega_value(&params, &one(), EvalMode::Exact).unwrap();
        assert_eq!(omega.as_rational(), Some(&rat(14, 3)));
    }

    #[test]
    fn ext_i_examples() {
        // witness coefficients live in the (1-x) basis, like the table rows
        let f = Poly::from_i64(&[12, 63, 100], Basis::Shifted(Rational::one()));
        assert_eq!(ext_i(&f, 4).unwrap().as_rational(), Some(&rat(2977019, 51030)));
        // k = 3: int_0^1 int_0^t (1 + s/2 - t) ds dt = 1/4
        assert_eq!(ext_i(&one(), 3).unwrap().as_rational(), Some(&rat(1, 4)));
        assert_eq!(ext_i(&Poly::zero(), 5).unwrap().as_rational(), Some(&rat(0, 1)));
        assert!(matches!(
            ext_i(&one(), 2),
            Err(FunctionalError::ExtendedNeedsK3(2))
        ));
    }

    #[test]
    fn eps_i_and_j_examples() {
        // (1/1!) int_0^{4/3} t dt = 8/9
        assert_eq!(eps_i(&one(), 2, &rat(1, 3)).as_rational(), Some(&rat(8, 9)));
        assert_eq!(eps_j(&one(), 2, &rat(1, 3)).as_rational(), Some(&rat(56, 81)));
        assert_eq!(eps_j(&one(), 2, &rat(0, 1)).as_rational(), Some(&rat(1, 3)));
        // eps = 0 reduces eps_i to std_i / (k-1)!
        let f = one_minus_x();
        for k in [2u32, 4] {
            let a = eps_i(&f, k, &rat(0, 1));
            let b = std_i(&f, k)
                .as_rational()
                .cloned()
                .map(|v| v / factorial(k - 1))
                .unwrap();
            assert_eq!(a.as_rational(), Some(&b));
        }
    }

    #[test]
    fn eps_q_degenerates_to_std_q() {
        // eps = 0, ell = 1: eps_q = std_q / (k-1)!
        let f = one_minus_x();
        for k in [2u32, 3] {
            let theta = rat(1, 4);
            let a = eps_q(&f, k, &theta, &Rational::one(), &Rational::zero(), EvalMode::Exact)
                .unwrap();
            let b = std_q(&f, k, &theta, EvalMode::Exact).unwrap();
            let bridged = b.exact.unwrap().scale(&(Rational::one() / factorial(k - 1)));
            assert_eq!(a.exact.unwrap(), bridged);
        }
    }

    #[test]
    fn ell_invariance_at_eps_zero() {
        // with eps = 0, eta = 1 the omega quotient is independent of ell
        let f = Poly::from_i64(&[1, 2, -1, 1], Basis::Monomial);
        let theta = rat(1, 4);
        let mut values = Vec::new();
        for ell in [1i64, 2, 5] {
            let params = SieveParams::epsilon_with(
                2,
                theta.clone(),
                Rational::zero(),
                rat_int(ell),
                Rational::one(),
            )
            .unwrap();
            let omega = omega_value(&params, &f, EvalMode::Exact).unwrap();
            values.push(omega.exact.unwrap());
        }
        assert_eq!(values[0], values[1]);
        assert_eq!(values[0], values[2]);
    }

    #[test]
    fn bilinear_std_i_example() {
        let params = SieveParams::standard(2, rat(1, 2));
        // B(1, 1-x) = int_0^1 (1-t) t dt = 1/6
        let b = bilinear(&params, &one(), &one_minus_x(), Which::I, EvalMode::Exact).unwrap();
        assert_eq!(b.as_rational(), Some(&rat(1, 6)));
        // polarization identity
        let same = bilinear(&params, &one_minus_x(), &one_minus_x(), Which::I, EvalMode::Exact)
            .unwrap();
        assert_eq!(same.as_rational(), std_i(&one_minus_x(), 2).as_rational());
        let zero = bilinear(&params, &one(), &Poly::zero(), Which::I, EvalMode::Exact).unwrap();
        assert_eq!(zero.as_rational(), Some(&rat(0, 1)));
    }

    #[test]
    fn nested_volume_identity_small() {
        for k in 3..=5u32 {
            assert_eq!(nested_volume(k).unwrap(), nested_volume_closed_form(k));
        }
    }

    #[test]
    fn params_validation() {
        assert!(SieveParams::standard(2, rat(1, 2)).validate().is_ok());
        assert!(SieveParams::standard(1, rat(1, 2)).validate().is_err());
        assert!(SieveParams::standard(2, rat(2, 3)).validate().is_err());
        assert!(SieveParams::extended(2, rat(1, 4)).validate().is_err());
        // constraint 2*theta*eta + 1/ell <= 1
        assert!(SieveParams::epsilon(2, rat(1, 4), rat(1, 3)).is_ok());
        assert!(SieveParams::epsilon_with(2, rat(1, 2), rat(1, 3), rat_int(4), rat(4, 3)).is_err());
    }

    #[test]
    fn ext_q_constant_quadrature_close_to_exact() {
        let theta = rat(1, 4);
        let exact = ext_q(&one(), 3, &theta, EvalMode::Exact).unwrap();
        let quad = ext_q(&one(), 3, &theta, EvalMode::Quadrature { tol: 1e-8 }).unwrap();
        assert!((exact.numeric - quad.numeric).abs() < 1e-6);
    }
}
