use num::{One, Signed, Zero};

use crate::error::PolyError;
use crate::exact::{rat_int, LogValue, Rational};
use crate::poly::MPoly;

/// One `cofactor * ln(slope * x_var + intercept)` summand. A zero slope is
/// permitted and denotes a constant (rational) log argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTerm {
    pub cofactor: MPoly,
    pub var: usize,
    pub slope: Rational,
    pub intercept: Rational,
}

/// Polynomial plus polynomial-times-log terms; the closed-form field the
/// kernel antiderivatives live in. Products of two logs are unrepresentable
/// by construction and the integrator reports them as unsupported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogPoly {
    arity: usize,
    pub poly: MPoly,
    pub logs: Vec<LogTerm>,
}

impl LogPoly {
    pub fn from_mpoly(poly: MPoly) -> Self {
        let arity = poly.arity();
        LogPoly {
            arity,
            poly,
            logs: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn push_log(&mut self, term: LogTerm) {
        assert_eq!(term.cofactor.arity(), self.arity);
        if !term.cofactor.is_zero() {
            self.logs.push(term);
        }
    }

    /// Exact definite integral in `x_var` between affine limits. The
    /// polynomial part integrates directly; `v^n ln(a v + b)` summands use the
    /// closed-form antiderivative. Log arguments evaluated at a limit must
    /// stay affine in at most one variable, otherwise the form is
    /// unsupported.
    pub fn integrate_affine(
        &self,
        var: usize,
        lower: &MPoly,
        upper: &MPoly,
    ) -> Result<LogPoly, PolyError> {
        let mut out = LogPoly::from_mpoly(self.poly.integrate_affine(var, lower, upper)?);
        for term in &self.logs {
            if term.var == var {
                integrate_log_in_own_var(term, var, lower, upper, &mut out)?;
            } else {
                // log factor independent of the integration variable
                let integrated = term.cofactor.integrate_affine(var, lower, upper)?;
                out.push_log(LogTerm {
                    cofactor: integrated,
                    var: term.var,
                    slope: term.slope.clone(),
                    intercept: term.intercept.clone(),
                });
            }
        }
        Ok(out)
    }

    /// Collapses a fully-constant LogPoly into an exact scalar.
    pub fn to_logvalue(&self) -> Result<LogValue, PolyError> {
        let mut acc = LogValue::from_rational(
            self.poly
                .as_constant()
                .ok_or_else(|| PolyError::UnsupportedForm("non-constant polynomial part".into()))?,
        );
        for term in &self.logs {
            let c = term
                .cofactor
                .as_constant()
                .ok_or_else(|| PolyError::UnsupportedForm("non-constant log cofactor".into()))?;
            if !term.slope.is_zero() {
                return Err(PolyError::UnsupportedForm(
                    "log argument still depends on a variable".into(),
                ));
            }
            if !term.intercept.is_positive() {
                return Err(PolyError::LogArgumentSign);
            }
            acc.add_log_term(&term.intercept, &c)?;
        }
        Ok(acc)
    }
}

/// Integrates `cofactor(v, ...) * ln(a v + b)` in `v` between affine limits.
fn integrate_log_in_own_var(
    term: &LogTerm,
    var: usize,
    lower: &MPoly,
    upper: &MPoly,
    out: &mut LogPoly,
) -> Result<(), PolyError> {
    let arity = term.cofactor.arity();
    let a = &term.slope;
    let b = &term.intercept;
    if a.is_zero() {
        // constant argument: plain polynomial integration times ln(b)
        let integrated = term.cofactor.integrate_affine(var, lower, upper)?;
        out.push_log(LogTerm {
            cofactor: integrated,
            var,
            slope: Rational::zero(),
            intercept: b.clone(),
        });
        return Ok(());
    }
    let root = -(b / a); // where the argument vanishes
    for (j, cj) in term.cofactor.coeffs_in(var).into_iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        // antiderivative of v^j ln(a v + b):
        //   R(v) ln(a v + b) + P(v),
        //   R(v) = (v^{j+1} - r^{j+1}) / (j+1),  r = -b/a,
        //   P(v) = -(1/(j+1)) * sum_{m=0..j} r^{j-m} v^{m+1}/(m+1)
        let jp1 = rat_int(j as i64 + 1);
        let mut r_pow = vec![Rational::one()];
        for _ in 0..=j {
            r_pow.push(r_pow.last().unwrap() * &root);
        }
        let mut p_part = MPoly::zero(arity);
        for m in 0..=j {
            let coeff = -&r_pow[j - m] / (&jp1 * rat_int(m as i64 + 1));
            p_part = p_part.add(&MPoly::var(arity, var).pow(m as u32 + 1).scale(&coeff));
        }
        let v = MPoly::var(arity, var);
        let r_cof = v
            .pow(j as u32 + 1)
            .sub(&MPoly::constant(arity, r_pow[j + 1].clone()))
            .scale(&(Rational::one() / &jp1));

        for (limit, sign) in [(upper, 1i64), (lower, -1i64)] {
            let sign = rat_int(sign);
            // polynomial piece
            let p_at = p_part.compose_var(var, limit);
            out.poly = out.poly.add(&cj.mul(&p_at).scale(&sign));
            // log piece: argument a*limit + b must stay affine in <= 1 var
            let arg = limit.scale(a).add(&MPoly::constant(arity, b.clone()));
            let r_at = r_cof.compose_var(var, limit);
            let cof = cj.mul(&r_at).scale(&sign);
            if cof.is_zero() {
                continue;
            }
            match affine_single_var(&arg) {
                Some((None, c)) => {
                    // constant argument
                    if c.is_zero() {
                        // integrable boundary singularity: cofactor must vanish
                        return Err(PolyError::LogArgumentSign);
                    }
                    if c.is_negative() {
                        return Err(PolyError::LogArgumentSign);
                    }
                    out.push_log(LogTerm {
                        cofactor: cof,
                        var,
                        slope: Rational::zero(),
                        intercept: c,
                    });
                }
                Some((Some(w), intercept)) => {
                    let slope = arg.coeffs_in(w)[1]
                        .as_constant()
                        .ok_or(PolyError::NonAffineLimit)?;
                    out.push_log(LogTerm {
                        cofactor: cof,
                        var: w,
                        slope,
                        intercept,
                    });
                }
                None => {
                    return Err(PolyError::UnsupportedForm(
                        "log argument affine in more than one variable".into(),
                    ))
                }
            }
        }
    }
    Ok(())
}

/// For an affine polynomial: `Some((Some(var), intercept))` if it involves a
/// single variable, `Some((None, c))` if constant, `None` otherwise.
fn affine_single_var(p: &MPoly) -> Option<(Option<usize>, Rational)> {
    if !p.is_affine() {
        return None;
    }
    let mut var = None;
    for (e, _) in p.terms() {
        if let Some(i) = e.iter().position(|&k| k == 1) {
            match var {
                None => var = Some(i),
                Some(j) if j == i => {}
                _ => return None,
            }
        }
    }
    Some((var, p.constant_term()))
}
