//! Acceptance gate: every criterion prints a single pass/fail line.

use std::time::Instant;

use num::{One, Signed, Zero};
use sievebound::exact::{parse_rational, rat, rat_int, Rational};
use sievebound::functionals::{
    ext_i, ext_q, i_value, nested_volume, nested_volume_closed_form, omega_value, q_value,
    std_q_parts, EvalMode, Regime, SieveParams, Which,
};
use sievebound::optimizer::fixed_witness_bound;
use sievebound::oracle::{bridged, compare, mc_functional, random_cubic};
use sievebound::poly::{Basis, Poly};
use sievebound_cli::commands::{table_b, table_c, table_e, table_g};
use sievebound_cli::report::Report;
use sievebound_cli::targets;

fn verdict(n: u32, what: &str, ok: bool) {
    println!(
        "criterion {n:2}: {} — {what}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {what}");
}

fn worked_witness() -> Poly {
    Poly::from_i64(&[12, 63, 100], Basis::Shifted(Rational::one()))
}

fn fresh_report() -> Report {
    Report::new("acceptance", Default::default())
}

#[test]
fn criterion_01_exact_extended_i() {
    let start = Instant::now();
    let v = ext_i(&worked_witness(), 4).unwrap();
    let ok = v.as_rational() == Some(&parse_rational("2977019/51030").unwrap())
        && start.elapsed().as_secs_f64() < 1.0;
    verdict(1, "extended I(k=4) = 2977019/51030 exactly, under 1 s", ok);
}

#[test]
fn criterion_02_extended_q_closed_form() {
    let t = targets::load();
    let q = ext_q(&worked_witness(), 4, &rat(1, 2), EvalMode::Exact).unwrap();
    let reference = t.worked_example.q_reference().unwrap();
    let (diff, diff_err) = (q.exact.as_ref().unwrap() - &reference).to_f64(256);
    let params = SieveParams::extended(4, rat(1, 2));
    let omega = omega_value(&params, &worked_witness(), EvalMode::Exact).unwrap();
    let ok = diff.abs() + diff_err < 1e-9 && omega.numeric < t.worked_example.omega_upper;
    verdict(
        2,
        "extended Q(k=4, theta=1/2) matches the reference closed form at 256-bit; omega < 8.80105",
        ok,
    );
}

#[test]
fn criterion_03_standard_table() {
    let start = Instant::now();
    let t = targets::load();
    let mut report = fresh_report();
    table_c(&t, &mut report).unwrap();
    let ok = report.results.len() == 18
        && report.all_passed()
        && start.elapsed().as_secs_f64() < 60.0;
    verdict(3, "all 18 standard-simplex cells within 1e-3, under 1 min", ok);
}

#[test]
fn criterion_04_enlarged_table() {
    let t = targets::load();
    let mut report = fresh_report();
    table_g(&t, &mut report).unwrap();
    let witness_ok = report.results.len() == 9 && report.all_passed();
    let mut corroboration = fresh_report();
    table_e(&t, &mut corroboration).unwrap();
    let ok = witness_ok && corroboration.all_passed();
    verdict(
        4,
        "all 9 enlarged-simplex witness cells within 1e-3; quadratic-only targets bounded",
        ok,
    );
}

#[test]
fn criterion_05_extended_table_spot_checks() {
    let t = targets::load();
    let mut ok = true;
    for row in t.extended.iter().filter(|r| (3..=5).contains(&r.k)) {
        for (theta, expected) in [(rat(1, 4), row.theta_quarter), (rat(1, 2), row.theta_half)] {
            let params = SieveParams::extended(row.k, theta);
            let f = Poly::parse(&row.witness, None).unwrap();
            let b = fixed_witness_bound(&params, &f, EvalMode::Exact).unwrap();
            ok &= (b.bound - expected).abs() <= 2e-3;
        }
    }
    verdict(5, "extended-simplex cells k in {3,4,5}, both theta, within 2e-3", ok);
}

#[test]
fn criterion_06_dhl_ledger() {
    let t = targets::load();
    let mut report = fresh_report();
    table_b(&t, &mut report).unwrap();
    let ok = report.results.len() == 18 && report.all_passed();
    verdict(6, "floor(bound) reproduces the full DHL ledger including bold entries", ok);
}

#[test]
fn criterion_07_nested_volume_identity() {
    let ok = (3..=8).all(|k| nested_volume(k).unwrap() == nested_volume_closed_form(k));
    verdict(7, "nested volume equals its closed form symbolically for k = 3..8", ok);
}

#[test]
fn criterion_08_ell_invariance() {
    let mut ok = true;
    for k in [2u32, 5] {
        for theta in [rat(1, 4), rat(1, 2)] {
            for i in 0..5u64 {
                let f = random_cubic(800 + i, Basis::Monomial);
                let mut values = Vec::new();
                for ell in [1i64, 2, 5] {
                    let params = SieveParams::epsilon_with(
                        k,
                        theta.clone(),
                        Rational::zero(),
                        rat_int(ell),
                        Rational::one(),
                    )
                    .unwrap();
                    values.push(omega_value(&params, &f, EvalMode::Exact).unwrap().numeric);
                }
                let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - values.iter().cloned().fold(f64::INFINITY, f64::min);
                ok &= spread < 1e-8;
            }
        }
    }
    verdict(
        8,
        "omega spread < 1e-8 across ell in {1,2,5} at eps = 0, k in {2,5}, both theta",
        ok,
    );
}

#[test]
fn criterion_09_collapse_validation() {
    let start = Instant::now();
    let samples = 10_000_000;
    let seed = 42;
    let mut ok = true;
    for k in [3u32, 4, 5] {
        let regimes = [
            SieveParams::standard(k, rat(1, 4)),
            SieveParams::extended(k, rat(1, 4)),
            SieveParams::epsilon(k, rat(1, 4), rat(1, 5)).unwrap(),
        ];
        for params in regimes {
            for c in 0..3u64 {
                let f = random_cubic(seed + 1000 * c + u64::from(k), Basis::Monomial);
                for which in [Which::I, Which::J, Which::Q] {
                    if which == Which::J && params.regime == Regime::Extended {
                        continue;
                    }
                    let exact = match which {
                        Which::I => i_value(&params, &f).unwrap(),
                        Which::J => {
                            sievebound::functionals::j_value(&params, &f).unwrap()
                        }
                        Which::Q => q_value(&params, &f, EvalMode::Exact).unwrap(),
                    };
                    let exact = bridged(&params, &exact);
                    let mc = mc_functional(which, &params, &f, samples, seed);
                    let z = compare(&exact, &mc);
                    if z > 4.0 {
                        println!(
                            "  collapse outlier: {:?} k={k} f{c} {:?}: z = {z:.2}",
                            params.regime, which
                        );
                        ok = false;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < 300.0;
    verdict(
        9,
        "10^7-sample Monte Carlo agrees with collapsed values at z <= 4, under 5 min",
        ok,
    );
}

#[test]
fn criterion_10_property_suite() {
    let mut ok = true;
    // positivity of I for nonzero polynomials across regimes
    for i in 0..5u64 {
        let f = random_cubic(900 + i, Basis::Monomial);
        for params in [
            SieveParams::standard(3, rat(1, 4)),
            SieveParams::extended(4, rat(1, 4)),
            SieveParams::epsilon(5, rat(1, 4), rat(1, 6)).unwrap(),
        ] {
            ok &= i_value(&params, &f).unwrap().as_rational().unwrap().is_positive();
        }
    }
    // the difference-kernel piece vanishes on constants; all pieces are
    // nonnegative and sum to the assembled Q
    let one = Poly::from_i64(&[1], Basis::Monomial);
    let parts = std_q_parts(&one, 3, &rat(1, 4), EvalMode::Exact).unwrap();
    ok &= parts[0].as_rational() == Some(&Rational::zero());
    ok &= parts.iter().all(|p| p.numeric >= 0.0);
    let whole = sievebound::functionals::std_q(&one, 3, &rat(1, 4), EvalMode::Exact).unwrap();
    let sum = parts[0].add(&parts[1]).add(&parts[2]);
    ok &= sum.exact == whole.exact && (sum.numeric - whole.numeric).abs() < 1e-14;
    // parallelogram identity exercises the E- and H-region decompositions as
    // bilinear forms: Q(f+g) + Q(f-g) = 2Q(f) + 2Q(g)
    let f = Poly::from_i64(&[1, 2, 0, 1], Basis::Monomial);
    let g = Poly::from_i64(&[0, 1, -1], Basis::Monomial);
    for params in [
        SieveParams::extended(4, rat(1, 4)),
        SieveParams::epsilon(3, rat(1, 4), rat(1, 4)).unwrap(),
    ] {
        let q = |p: &Poly| {
            q_value(&params, p, EvalMode::Exact)
                .unwrap()
                .exact
                .unwrap()
        };
        let lhs = &q(&f.add(&g)) + &q(&f.sub(&g));
        let rhs = (&q(&f) + &q(&g)).scale(&rat_int(2));
        let (diff, err) = (&lhs - &rhs).to_f64(256);
        ok &= diff.abs() + err < 1e-30;
    }
    // exact and quadrature paths agree within their declared error bounds on
    // every regime's kernel region
    for (params, f) in [
        (SieveParams::standard(3, rat(1, 4)), random_cubic(77, Basis::Monomial)),
        (SieveParams::extended(4, rat(1, 4)), random_cubic(78, Basis::Monomial)),
        (
            SieveParams::epsilon(3, rat(1, 4), rat(1, 5)).unwrap(),
            random_cubic(79, Basis::Monomial),
        ),
    ] {
        let exact = q_value(&params, &f, EvalMode::Exact).unwrap();
        let quad = q_value(&params, &f, EvalMode::Quadrature { tol: 1e-10 }).unwrap();
        ok &= (exact.numeric - quad.numeric).abs()
            <= exact.error_bound + quad.error_bound + 1e-12;
    }
    verdict(
        10,
        "positivity, vanishing difference kernel on constants, piece additivity, exact vs quadrature",
        ok,
    );
}
