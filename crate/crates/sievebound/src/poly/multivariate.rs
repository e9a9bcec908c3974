use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::PolyError;
use crate::exact::{rat_int, Rational};

/// Multivariate polynomial with rational coefficients, finitely supported
/// exponent map. Arity is small (at most the four variables `y, s, t, x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(arity: usize) -> Self {
        MPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(arity);
        if !c.is_zero() {
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity);
        let mut exp = vec![0; arity];
        exp[i] = 1;
        let mut p = MPoly::zero(arity);
        p.terms.insert(exp, Rational::one());
        p
    }

    /// `a*x_i + b` as a polynomial.
    pub fn affine(arity: usize, i: usize, a: Rational, b: Rational) -> Self {
        MPoly::var(arity, i).scale(&a).add(&MPoly::constant(arity, b))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.total_degree() <= 1
    }

    fn insert(&mut self, exp: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            // re-borrow to remove; key reconstruction avoided by retain below
        }
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out.normalized()
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.arity);
        }
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = MPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exp, ca * cb);
            }
        }
        out.normalized()
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::constant(self.arity, Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.arity);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut term = crate::exact::rational_to_f64(c);
            for (i, &k) in e.iter().enumerate() {
                term *= point[i].powi(k as i32);
            }
            acc += term;
        }
        acc
    }

    /// Substitutes every variable: `exprs[i]` replaces `x_i`. All `exprs`
    /// share a common (possibly different) arity.
    pub fn compose(&self, exprs: &[MPoly]) -> MPoly {
        assert_eq!(exprs.len(), self.arity);
        let new_arity = exprs.first().map_or(0, |e| e.arity);
        let mut pow_cache: Vec<Vec<MPoly>> = exprs
            .iter()
            .map(|e| vec![MPoly::constant(new_arity, Rational::one()), e.clone()])
            .collect();
        let mut out = MPoly::zero(new_arity);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(new_arity, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while pow_cache[i].len() <= k as usize {
                    let next = pow_cache[i].last().unwrap().mul(&exprs[i]);
                    pow_cache[i].push(next);
                }
                term = term.mul(&pow_cache[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Substitutes a single variable by an expression of the same arity.
    pub fn compose_var(&self, var: usize, expr: &MPoly) -> MPoly {
        let exprs: Vec<MPoly> = (0..self.arity)
            .map(|i| {
                if i == var {
                    expr.clone()
                } else {
                    MPoly::var(self.arity, i)
                }
            })
            .collect();
        self.compose(&exprs)
    }

    /// Fixes `x_var = value` and drops the variable, reducing arity by one.
    pub fn partial_eval(&self, var: usize, value: &Rational) -> MPoly {
        assert!(var < self.arity);
        let mut out = MPoly::zero(self.arity - 1);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            for _ in 0..e[var] {
                coeff *= value;
            }
            let mut exp: Vec<u32> = Vec::with_capacity(self.arity - 1);
            exp.extend(e[..var].iter().copied());
            exp.extend(e[var + 1..].iter().copied());
            out.insert(exp, coeff);
        }
        out.normalized()
    }

    /// Antiderivative in `x_var` (zero constant).
    pub fn antiderivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.arity);
        for (e, c) in &self.terms {
            let mut exp = e.clone();
            exp[var] += 1;
            out.insert(exp.clone(), c / rat_int(exp[var] as i64));
        }
        out.normalized()
    }

    /// Exact definite integral in `x_var` between affine limits in the
    /// remaining variables. Limits share this polynomial's arity; their
    /// dependence on `x_var` is rejected.
    pub fn integrate_affine(
        &self,
        var: usize,
        lower: &MPoly,
        upper: &MPoly,
    ) -> Result<MPoly, PolyError> {
        for lim in [lower, upper] {
            if lim.arity != self.arity {
                return Err(PolyError::ArityMismatch(lim.arity, self.arity));
            }
            if !lim.is_affine() || lim.degree_in(var) > 0 {
                return Err(PolyError::NonAffineLimit);
            }
        }
        let anti = self.antiderivative(var);
        Ok(anti
            .compose_var(var, upper)
            .sub(&anti.compose_var(var, lower)))
    }

    /// The unique constant coefficient (the value when all exponents vanish).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.arity])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Some(c) iff the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.keys().all(|e| e.iter().all(|&k| k == 0)) {
            Some(self.constant_term())
        } else {
            None
        }
    }

    /// Splits into coefficients of powers of `x_var`: index `j` holds the
    /// polynomial coefficient of `x_var^j` (with `x_var` exponent zeroed).
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.arity); deg + 1];
        for (e, c) in &self.terms {
            let j = e[var] as usize;
            let mut exp = e.clone();
            exp[var] = 0;
            out[j].insert(exp, c.clone());
        }
        out.into_iter().map(|p| p.normalized()).collect()
    }
}
