//! Polynomial algebra over exact rationals: univariate polynomials with basis
//! changes, low-arity multivariate polynomials, log-extended integrands, and
//! definite integration with affine limits.

mod logpoly;
mod multivariate;
mod univariate;

pub use logpoly::{LogPoly, LogTerm};
pub use multivariate::MPoly;
pub use univariate::{Basis, Poly};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int, LogValue, Rational};
    use num::{One, Zero};
    use proptest::prelude::*;

    #[test]
    fn ring_ops_identities() {
        let one_plus = Poly::from_i64(&[1, 1], Basis::Monomial);
        let one_minus = Poly::from_i64(&[1, -1], Basis::Monomial);
        assert_eq!(
            one_plus.mul(&one_minus),
            Poly::from_i64(&[1, 0, -1], Basis::Monomial)
        );
        let f = Poly::from_i64(&[3, 25, -1, 1], Basis::Shifted(rat_int(1)));
        assert!(f.sub(&f).is_zero());
        let sq = f.to_monomial().mul(&f.to_monomial());
        assert_eq!(sq.degree(), Some(6));
        assert_eq!(sq.coeffs()[6], rat_int(1));
    }

    #[test]
    fn change_basis_shifted_to_monomial() {
        // coefficients (3,25,-1,1) in basis (1-x) -> 28 - 26x + 2x^2 - x^3
        let f = Poly::from_i64(&[3, 25, -1, 1], Basis::Shifted(rat_int(1)));
        let mono = f.change_basis(&Basis::Monomial);
        assert_eq!(mono, Poly::from_i64(&[28, -26, 2, -1], Basis::Monomial));
        // f(1-x) = 3 + 25x - x^2 + x^3
        for x in [rat(0, 1), rat(1, 3), rat(7, 5)] {
            let u = rat_int(1) - &x;
            assert_eq!(
                f.eval(&u),
                rat_int(3) + rat_int(25) * &x - &x * &x + &x * &x * &x
            );
        }
    }

    #[test]
    fn change_basis_identity_on_same_basis() {
        let f = Poly::from_i64(&[12, 63, 100], Basis::Monomial);
        assert_eq!(f.change_basis(&Basis::Monomial), f);
    }

    #[test]
    fn change_basis_eps_shift_pointwise() {
        // (1,5,3) in basis (1+eps-x), eps=1/3: agree at sample points with
        // 1 + 5(4/3-x) + 3(4/3-x)^2
        let c = rat(4, 3);
        let f = Poly::from_i64(&[1, 5, 3], Basis::Shifted(c.clone()));
        let mono = f.change_basis(&Basis::Monomial);
        for x in [rat(0, 1), rat(1, 2), rat(4, 3)] {
            let u = &c - &x;
            let expect = rat_int(1) + rat_int(5) * &u + rat_int(3) * &u * &u;
            assert_eq!(mono.eval(&x), expect);
        }
    }

    #[test]
    fn shift_substitute_examples() {
        // x^2 -> x^2 + 2xy + y^2
        let p = Poly::from_i64(&[0, 0, 1], Basis::Monomial);
        let s = p.shift_substitute();
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let expect = x.pow(2).add(&x.mul(&y).scale(&rat_int(2))).add(&y.pow(2));
        assert_eq!(s, expect);
        // constants are shift-invariant
        let c = Poly::constant(rat(7, 2));
        assert_eq!(c.shift_substitute(), MPoly::constant(2, rat(7, 2)));
        // p = 1-x: p(x) - p(x+y) = y
        let p = Poly::from_i64(&[1, -1], Basis::Monomial);
        let diff = p.to_mpoly(2, 0).sub(&p.shift_substitute());
        assert_eq!(diff, MPoly::var(2, 1));
    }

    #[test]
    fn integrate_monomial() {
        for k in 1..8i64 {
            let p = Poly::new(
                {
                    let mut c = vec![Rational::zero(); k as usize];
                    c.push(Rational::one());
                    c
                },
                Basis::Monomial,
            )
            .derivative()
            .scale(&rat(1, k)); // t^{k-1}
            assert_eq!(p.integrate(&rat_int(0), &rat_int(1)), rat(1, k));
        }
    }

    #[test]
    fn integrate_difference_kernel_inner() {
        // f = 1-x, k=2: int_0^{1-y} (f(t)-f(t+y))^2 t dt = y^2 (1-y)^2 / 2
        let f = Poly::from_i64(&[1, -1], Basis::Monomial);
        let vars = 2; // (t, y)
        let ft = f.to_mpoly(vars, 0);
        let fty = f.shift_substitute(); // f(t+y) in (t, y)
        let integrand = ft.sub(&fty).pow(2).mul(&MPoly::var(vars, 0));
        let lower = MPoly::zero(vars);
        let upper = MPoly::constant(vars, Rational::one()).sub(&MPoly::var(vars, 1));
        let got = integrand.integrate_affine(0, &lower, &upper).unwrap();
        let y = MPoly::var(vars, 1);
        let expect = y
            .pow(2)
            .mul(&MPoly::constant(vars, Rational::one()).sub(&y).pow(2))
            .scale(&rat(1, 2));
        assert_eq!(got, expect);
    }

    #[test]
    fn integrate_poly_times_log() {
        // int_0^{1/2} x ln(1-x) dx = (3/8) ln 2 - 5/16
        let mut p = LogPoly::from_mpoly(MPoly::zero(1));
        p.push_log(LogTerm {
            cofactor: MPoly::var(1, 0),
            var: 0,
            slope: rat_int(-1),
            intercept: rat_int(1),
        });
        let out = p
            .integrate_affine(0, &MPoly::zero(1), &MPoly::constant(1, rat(1, 2)))
            .unwrap();
        let got = out.to_logvalue().unwrap();
        let mut expect = LogValue::from_rational(rat(-5, 16));
        expect.add_log_term(&rat(2, 1), &rat(3, 8)).unwrap();
        assert_eq!(got, expect);
        let (v, _) = got.to_f64(128);
        assert!((v - (0.375 * std::f64::consts::LN_2 - 0.3125)).abs() < 1e-14);
    }

    #[test]
    fn non_affine_limit_rejected() {
        let p = MPoly::var(2, 0);
        let bad = MPoly::var(2, 1).pow(2);
        assert!(p.integrate_affine(0, &MPoly::zero(2), &bad).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-6i64..6, 1i64..4), 1..5)
            .prop_map(|cs| Poly::new(cs.into_iter().map(|(n, d)| rat(n, d)).collect(), Basis::Monomial))
    }

    proptest! {
        #[test]
        fn derivative_of_antiderivative_is_identity(p in arb_poly()) {
            prop_assert_eq!(p.antiderivative().derivative(), p.clone().to_monomial());
        }

        #[test]
        fn integral_interval_additivity(p in arb_poly(), a in -4i64..0, b in 0i64..4, c in 4i64..8) {
            let (a, b, c) = (rat_int(a), rat_int(b), rat_int(c));
            let whole = p.integrate(&a, &c);
            let split = p.integrate(&a, &b) + p.integrate(&b, &c);
            prop_assert_eq!(whole, split);
        }

        #[test]
        fn change_basis_involution(p in arb_poly(), c in -3i64..4) {
            let shifted = p.change_basis(&Basis::Shifted(rat_int(c)));
            prop_assert_eq!(shifted.change_basis(&Basis::Monomial), p);
        }

        #[test]
        fn shift_substitute_at_zero_recovers(p in arb_poly()) {
            let s = p.shift_substitute();
            let back = s.partial_eval(1, &Rational::zero());
            prop_assert_eq!(back, p.to_mpoly(1, 0));
        }
    }
}
