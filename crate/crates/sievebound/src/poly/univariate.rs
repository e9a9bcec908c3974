use std::fmt;

use num::{One, Signed, Zero};

use crate::error::PolyError;
use crate::exact::{format_rational, parse_rational, rat_int, Rational};
use crate::poly::MPoly;

/// Coefficient basis for a univariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Powers of `x`.
    Monomial,
    /// Powers of `(c - x)` for a rational shift `c`.
    Shifted(Rational),
}

/// Univariate polynomial with rational coefficients and a declared basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
    basis: Basis,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>, basis: Basis) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, basis }
    }

    pub fn zero() -> Self {
        Poly::new(vec![], Basis::Monomial)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c], Basis::Monomial)
    }

    pub fn var() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()], Basis::Monomial)
    }

    pub fn from_i64(coeffs: &[i64], basis: Basis) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat_int(c)).collect(), basis)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let at = match &self.basis {
            Basis::Monomial => x.clone(),
            Basis::Shifted(c) => c - x,
        };
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &at + c;
        }
        acc
    }

    /// Rewrites into the monomial basis (pointwise-equal polynomial).
    pub fn to_monomial(&self) -> Poly {
        match &self.basis {
            Basis::Monomial => self.clone(),
            Basis::Shifted(c) => {
                // Horner in (c - x)
                let mut acc: Vec<Rational> = vec![];
                for coef in self.coeffs.iter().rev() {
                    // acc = acc * (c - x) + coef
                    let mut next = vec![Rational::zero(); acc.len() + 1];
                    for (i, a) in acc.iter().enumerate() {
                        next[i] += a * c;
                        next[i + 1] -= a;
                    }
                    next[0] += coef;
                    acc = next;
                }
                Poly::new(acc, Basis::Monomial)
            }
        }
    }

    /// Rewrites into `target`; the result is pointwise equal.
    pub fn change_basis(&self, target: &Basis) -> Poly {
        if &self.basis == target {
            return self.clone();
        }
        let mono = self.to_monomial();
        match target {
            Basis::Monomial => mono,
            Basis::Shifted(c) => {
                // b_j = (-1)^j p^(j)(c) / j!
                let mut coeffs = Vec::new();
                let mut deriv = mono;
                let mut fact = Rational::one();
                let mut j: u64 = 0;
                loop {
                    let mut b = deriv.eval(c) / &fact;
                    if j % 2 == 1 {
                        b = -b;
                    }
                    coeffs.push(b);
                    if deriv.is_zero() {
                        break;
                    }
                    deriv = deriv.derivative();
                    j += 1;
                    fact *= rat_int(j as i64);
                    if j > 256 {
                        break; // cannot happen for trimmed polynomials
                    }
                }
                Poly::new(coeffs, Basis::Shifted(c.clone()))
            }
        }
    }

    fn unified(&self, other: &Poly) -> (Poly, Poly) {
        if self.basis == other.basis {
            (self.clone(), other.clone())
        } else {
            (self.to_monomial(), other.to_monomial())
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (a, b) = self.unified(other);
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in a.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out, a.basis)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(
            self.coeffs.iter().map(|c| -c).collect(),
            self.basis.clone(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(
            self.coeffs.iter().map(|a| a * c).collect(),
            self.basis.clone(),
        )
    }

    /// Product; convolution is basis-independent for a shared basis.
    pub fn mul(&self, other: &Poly) -> Poly {
        let (a, b) = self.unified(other);
        if a.is_zero() || b.is_zero() {
            return Poly::new(vec![], a.basis);
        }
        let mut out = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, ca) in a.coeffs.iter().enumerate() {
            for (j, cb) in b.coeffs.iter().enumerate() {
                out[i + j] += ca * cb;
            }
        }
        Poly::new(out, a.basis)
    }

    /// d/dx in the monomial basis.
    pub fn derivative(&self) -> Poly {
        let mono = self.to_monomial();
        let coeffs = mono
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        Poly::new(coeffs, Basis::Monomial)
    }

    /// Antiderivative with zero constant term, in the monomial basis.
    pub fn antiderivative(&self) -> Poly {
        let mono = self.to_monomial();
        let mut coeffs = vec![Rational::zero()];
        for (i, c) in mono.coeffs.iter().enumerate() {
            coeffs.push(c / rat_int(i as i64 + 1));
        }
        Poly::new(coeffs, Basis::Monomial)
    }

    /// Exact definite integral over `[a, b]`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// Expands `p(x + y)` as a bivariate polynomial in `(x, y)`.
    pub fn shift_substitute(&self) -> MPoly {
        let mono = self.to_monomial();
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let xy = x.add(&y);
        let mut acc = MPoly::zero(2);
        let mut pow = MPoly::constant(2, Rational::one());
        for c in &mono.coeffs {
            acc = acc.add(&pow.scale(c));
            pow = pow.mul(&xy);
        }
        acc
    }

    /// Lifts into an `arity`-variate polynomial in variable `var`.
    pub fn to_mpoly(&self, arity: usize, var: usize) -> MPoly {
        let mono = self.to_monomial();
        let x = MPoly::var(arity, var);
        let mut acc = MPoly::zero(arity);
        let mut pow = MPoly::constant(arity, Rational::one());
        for c in &mono.coeffs {
            acc = acc.add(&pow.scale(c));
            pow = pow.mul(&x);
        }
        acc
    }

    /// Parses the CLI literal `"c0,c1,c2,...@basis"` with basis one of
    /// `x`, `1-x`, `1+eps-x`. The trailing `@basis` defaults to `x`.
    pub fn parse(literal: &str, eps: Option<&Rational>) -> Result<Poly, PolyError> {
        let (coeff_part, basis_part) = match literal.split_once('@') {
            Some((c, b)) => (c, b.trim()),
            None => (literal, "x"),
        };
        let basis = match basis_part {
            "x" => Basis::Monomial,
            "1-x" => Basis::Shifted(Rational::one()),
            "1+eps-x" => {
                let eps = eps.ok_or(PolyError::MissingEpsilon)?;
                Basis::Shifted(Rational::one() + eps)
            }
            _ => return Err(PolyError::ParsePoly(literal.to_string())),
        };
        let coeffs: Result<Vec<Rational>, _> = coeff_part
            .split(',')
            .map(|s| parse_rational(s).map_err(|_| PolyError::ParsePoly(literal.to_string())))
            .collect();
        Ok(Poly::new(coeffs?, basis))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let var = match &self.basis {
            Basis::Monomial => "x".to_string(),
            Basis::Shifted(c) => format!("({}-x)", format_rational(c)),
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let ca = c.abs();
            match i {
                0 => write!(f, "{}", format_rational(&ca))?,
                _ => {
                    if !ca.is_one() {
                        write!(f, "{}*", format_rational(&ca))?;
                    }
                    if i == 1 {
                        write!(f, "{var}")?;
                    } else {
                        write!(f, "{var}^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
