//! Command implementations shared by the binary and the integration tests.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use sievebound::exact::{parse_rational, rat, rat_int, Rational};
use sievebound::functionals::{
    i_value, j_value, nested_volume, nested_volume_closed_form, omega_value, q_value, EvalMode,
    FunctionalValue, Method, Regime, SieveParams, Which,
};
use sievebound::optimizer::{dhl, fixed_witness_bound, optimize, Assumption, BoundReport};
use sievebound::oracle::{bridged, compare, mc_functional, random_cubic};
use sievebound::poly::{Basis, Poly};

use crate::report::{Report, ResultEntry};
use crate::{targets, CliError};

/// Raw parameter flags as given on the command line or in a config file.
#[derive(Clone, Debug, Default)]
pub struct ParamSpec {
    pub regime: Option<String>,
    pub k: Option<u32>,
    pub theta: Option<String>,
    pub ell: Option<String>,
    pub eps: Option<String>,
    pub eta: Option<String>,
}

impl ParamSpec {
    pub fn build(&self) -> Result<SieveParams, CliError> {
        let regime = self
            .regime
            .as_deref()
            .ok_or_else(|| CliError::Usage("--regime is required".into()))?;
        let k = self
            .k
            .ok_or_else(|| CliError::Usage("--k is required".into()))?;
        let theta = parse_rational(
            self.theta
                .as_deref()
                .ok_or_else(|| CliError::Usage("--theta is required".into()))?,
        )?;
        let params = match regime {
            "standard" => SieveParams::standard(k, theta),
            "extended" => SieveParams::extended(k, theta),
            "epsilon" => {
                let eps = match self.eps.as_deref() {
                    Some(s) => parse_rational(s)?,
                    None => Rational::zero(),
                };
                let eta = match self.eta.as_deref() {
                    Some(s) => parse_rational(s)?,
                    None => Rational::one() + &eps,
                };
                let ell = match self.ell.as_deref() {
                    Some(s) => parse_rational(s)?,
                    None if eps.is_zero() => Rational::one(),
                    // tie ell to the equality case of 2*theta*eta + 1/ell <= 1
                    None => {
                        let slack = Rational::one() - rat_int(2) * &theta * &eta;
                        if !slack.is_positive() {
                            return Err(CliError::Constraint(format!(
                                "2*theta*eta = {} >= 1 leaves no admissible ell",
                                rat_int(2) * &theta * &eta
                            )));
                        }
                        Rational::one() / slack
                    }
                };
                SieveParams::epsilon_with(k, theta, eps, ell, eta)?
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown regime {other:?} (expected standard, extended, or epsilon)"
                )))
            }
        };
        params.validate().map_err(CliError::from)?;
        Ok(params)
    }
}

fn param_map(params: &SieveParams) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    map.insert(
        "regime".into(),
        match params.regime {
            Regime::Standard => "standard",
            Regime::Extended => "extended",
            Regime::Epsilon => "epsilon",
        }
        .to_string(),
    );
    map.insert("k".into(), params.k.to_string());
    map.insert("theta".into(), params.theta.to_string());
    map.insert("ell".into(), params.ell.to_string());
    map.insert("eps".into(), params.eps.to_string());
    map.insert("eta".into(), params.eta.to_string());
    map
}

fn method_str(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Quadrature => "quadrature",
    }
}

fn value_entry(name: &str, v: &FunctionalValue) -> ResultEntry {
    let mut e = ResultEntry::new(name, v.numeric, v.error_bound, method_str(v.method));
    if let Some(lv) = &v.exact {
        e = e.exact(lv.to_string());
    }
    e
}

fn eval_mode(tol: Option<f64>) -> EvalMode {
    match tol {
        Some(tol) => EvalMode::Quadrature { tol },
        None => EvalMode::Exact,
    }
}

fn parse_poly(literal: &str, basis: Option<&str>, eps: &Rational) -> Result<Poly, CliError> {
    let owned;
    let lit = if literal.contains('@') {
        literal
    } else {
        owned = format!("{literal}@{}", basis.unwrap_or("x"));
        &owned
    };
    Ok(Poly::parse(lit, Some(eps))?)
}

/// `eval`: functional breakdown (I, J, Q, omega) at a given polynomial.
pub fn cmd_eval(
    spec: &ParamSpec,
    poly: &str,
    basis: Option<&str>,
    tol: Option<f64>,
) -> Result<Report, CliError> {
    let params = spec.build()?;
    let f = parse_poly(poly, basis, &params.eps)?;
    let mode = eval_mode(tol);
    let mut map = param_map(&params);
    map.insert("poly".into(), format!("{f}"));
    let mut report = Report::new("eval", map);
    report.push(value_entry("I", &i_value(&params, &f)?));
    report.push(value_entry("J", &j_value(&params, &f)?));
    report.push(value_entry("Q", &q_value(&params, &f, mode)?));
    report.push(value_entry("omega", &omega_value(&params, &f, mode)?));
    Ok(report)
}

fn bound_entries(report: &mut Report, b: &BoundReport) {
    let method = match b.method {
        sievebound::optimizer::BoundMethod::Eigen => "eigen",
        sievebound::optimizer::BoundMethod::FixedWitness => "witness",
    };
    let statement = dhl(b);
    let assumption = match statement.assumption {
        Assumption::Unconditional => "unconditional",
        Assumption::Geh => "GEH",
        Assumption::GehPartial => "partial GEH",
    };
    report.push(
        ResultEntry::new("bound", b.bound, b.error_est, method).detail(format!(
            "witness {}",
            b.witness
        )),
    );
    report.push(
        ResultEntry::new("rho", statement.rho as f64, 0.0, method).detail(format!(
            "DHL[{}; {}] ({assumption})",
            statement.k, statement.rho
        )),
    );
    for (j, c) in b.witness.coeffs().iter().enumerate() {
        report.push(
            ResultEntry::new(
                format!("witness_c{j}"),
                sievebound::exact::rational_to_f64(c),
                0.0,
                method,
            )
            .exact(c.to_string()),
        );
    }
}

/// `optimize`: eigen-minimization over a shifted power basis, with an
/// optional epsilon grid scan.
pub fn cmd_optimize(
    spec: &ParamSpec,
    degree: usize,
    eps_grid: Option<&str>,
    tol: Option<f64>,
) -> Result<Report, CliError> {
    let params = spec.build()?;
    let grid = match eps_grid {
        None => None,
        Some(s) => Some(
            s.split(',')
                .map(|p| parse_rational(p.trim()).map_err(CliError::from))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let best = optimize(&params, degree, grid.as_deref(), eval_mode(tol))?;
    let mut map = param_map(&best.params);
    map.insert("degree".into(), degree.to_string());
    let mut report = Report::new("optimize", map);
    bound_entries(&mut report, &best);
    Ok(report)
}

fn witness_bound(params: &SieveParams, literal: &str) -> Result<BoundReport, CliError> {
    let f = Poly::parse(literal, Some(&params.eps))?;
    Ok(fixed_witness_bound(params, &f, EvalMode::Exact)?)
}

/// `table`: recompute one of the five bound tables against stored targets.
pub fn cmd_table(name: &str) -> Result<Report, CliError> {
    let t = targets::load();
    let mut map = BTreeMap::new();
    map.insert("table".into(), name.to_uppercase());
    let mut report = Report::new("table", map);
    match name.to_ascii_uppercase().as_str() {
        "B" => table_b(&t, &mut report)?,
        "C" => table_c(&t, &mut report)?,
        "D" => table_d(&t, &mut report)?,
        "E" => table_e(&t, &mut report)?,
        "G" => table_g(&t, &mut report)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown table {other:?} (expected B, C, D, E, or G)"
            )))
        }
    }
    Ok(report)
}

pub fn table_c(t: &targets::Targets, report: &mut Report) -> Result<(), CliError> {
    for row in &t.standard {
        for (theta, label, expected) in [
            (rat(1, 4), "1/4", row.theta_quarter),
            (rat(1, 2), "1/2", row.theta_half),
        ] {
            let params = SieveParams::standard(row.k, theta);
            let b = witness_bound(&params, &row.witness)?;
            report.push(
                ResultEntry::new(
                    format!("omega k={} theta={label}", row.k),
                    b.bound,
                    b.error_est,
                    "witness",
                )
                .against(expected, 1e-3),
            );
        }
    }
    Ok(())
}

pub fn table_d(t: &targets::Targets, report: &mut Report) -> Result<(), CliError> {
    for row in &t.extended {
        for (theta, label, expected) in [
            (rat(1, 4), "1/4", row.theta_quarter),
            (rat(1, 2), "1/2", row.theta_half),
        ] {
            let name = format!("omega_ext k={} theta={label}", row.k);
            if !row.supported {
                report.push(
                    ResultEntry::new(name, f64::NAN, 0.0, "none")
                        .detail("collapsed evaluator requires k >= 3"),
                );
                continue;
            }
            let params = SieveParams::extended(row.k, theta);
            let b = witness_bound(&params, &row.witness)?;
            report.push(
                ResultEntry::new(name, b.bound, b.error_est, "witness").against(expected, 2e-3),
            );
        }
    }
    Ok(())
}

fn enlarged_params(row: &targets::EnlargedRow) -> Result<SieveParams, CliError> {
    Ok(SieveParams::epsilon(
        row.k,
        rat(1, 4),
        parse_rational(&row.eps)?,
    )?)
}

pub fn table_g(t: &targets::Targets, report: &mut Report) -> Result<(), CliError> {
    for row in &t.enlarged {
        let params = enlarged_params(row)?;
        let b = witness_bound(&params, &row.witness)?;
        report.push(
            ResultEntry::new(
                format!("omega_eps k={} eps={}", row.k, row.eps),
                b.bound,
                b.error_est,
                "witness",
            )
            .against(row.bound, 1e-3),
        );
    }
    Ok(())
}

pub fn table_e(t: &targets::Targets, report: &mut Report) -> Result<(), CliError> {
    // corroboration: the witness bound must stay below the quadratic-only
    // optimum plus the rounding tolerance
    for row in &t.enlarged {
        let params = enlarged_params(row)?;
        let b = witness_bound(&params, &row.witness)?;
        report.push(
            ResultEntry::new(
                format!("omega_eps k={} eps={}", row.k, row.eps),
                b.bound,
                b.error_est,
                "witness",
            )
            .check(b.bound <= row.quadratic_bound + 1e-3)
            .detail(format!("quadratic optimum target {}", row.quadratic_bound)),
        );
    }
    Ok(())
}

pub fn table_b(t: &targets::Targets, report: &mut Report) -> Result<(), CliError> {
    for (idx, row) in t.enlarged.iter().enumerate() {
        let params = enlarged_params(row)?;
        let b = witness_bound(&params, &row.witness)?;
        let rho = dhl(&b).rho;
        let expected = t.dhl.unconditional[idx];
        let mut e = ResultEntry::new(
            format!("rho k={} unconditional", row.k),
            rho as f64,
            0.0,
            "witness",
        )
        .against(expected as f64, 0.0);
        if row.k >= t.dhl.unconditional_new_from_k {
            e = e.detail("new");
        }
        report.push(e);
    }
    for (idx, k) in (2u32..=10).enumerate() {
        // theta = 1/2 throughout; the k = 4 entry comes from the extended
        // simplex, the rest from the standard simplex
        let b = if k == 4 {
            let row = t.extended.iter().find(|r| r.k == 4).expect("k=4 row");
            witness_bound(&SieveParams::extended(4, rat(1, 2)), &row.witness)?
        } else {
            let row = t.standard.iter().find(|r| r.k == k).expect("standard row");
            witness_bound(&SieveParams::standard(k, rat(1, 2)), &row.witness)?
        };
        let rho = dhl(&b).rho;
        let expected = t.dhl.geh[idx];
        let mut e = ResultEntry::new(format!("rho k={k} GEH"), rho as f64, 0.0, "witness")
            .against(expected as f64, 0.0);
        if k >= t.dhl.geh_new_from_k {
            e = e.detail("new");
        }
        report.push(e);
    }
    Ok(())
}

/// `verify`: oracle, identity, and table suites with a nonzero exit on any
/// failure.
pub fn cmd_verify(
    suite: &str,
    k: Option<u32>,
    samples: u64,
    seed: u64,
    z_tol: f64,
) -> Result<Report, CliError> {
    let mut map = BTreeMap::new();
    map.insert("suite".into(), suite.to_string());
    map.insert("samples".into(), samples.to_string());
    map.insert("seed".into(), seed.to_string());
    let mut report = Report::new("verify", map);
    match suite {
        "identities" => verify_identities(&mut report, seed)?,
        "collapse" => verify_collapse(&mut report, k, samples, seed, z_tol)?,
        "tables" => {
            let t = targets::load();
            table_c(&t, &mut report)?;
            table_g(&t, &mut report)?;
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite {other:?} (expected identities, collapse, or tables)"
            )))
        }
    }
    Ok(report)
}

fn verify_identities(report: &mut Report, seed: u64) -> Result<(), CliError> {
    for k in 3..=8 {
        let lhs = nested_volume(k)?;
        let rhs = nested_volume_closed_form(k);
        let equal = lhs == rhs;
        report.push(
            ResultEntry::new(format!("nested-volume k={k}"), f64::from(equal), 0.0, "exact")
                .check(equal)
                .detail("symbolic equality with the closed form"),
        );
    }
    // the ell parameter must not move the epsilon-regime quotient at eps = 0
    for k in [2u32, 5] {
        for (theta, label) in [(rat(1, 4), "1/4"), (rat(1, 2), "1/2")] {
            for i in 0..5u64 {
                let f = random_cubic(seed.wrapping_add(i), Basis::Monomial);
                let mut values = Vec::new();
                for ell in [1i64, 2, 5] {
                    let params = SieveParams::epsilon_with(
                        k,
                        theta.clone(),
                        Rational::zero(),
                        rat_int(ell),
                        Rational::one(),
                    )?;
                    values.push(omega_value(&params, &f, EvalMode::Exact)?.numeric);
                }
                let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - values.iter().cloned().fold(f64::INFINITY, f64::min);
                report.push(
                    ResultEntry::new(
                        format!("ell-invariance k={k} theta={label} f{i}"),
                        spread,
                        0.0,
                        "exact",
                    )
                    .check(spread < 1e-8)
                    .detail("omega spread across ell in {1, 2, 5}"),
                );
            }
        }
    }
    Ok(())
}

fn verify_collapse(
    report: &mut Report,
    k: Option<u32>,
    samples: u64,
    seed: u64,
    z_tol: f64,
) -> Result<(), CliError> {
    let ks: Vec<u32> = k.map(|k| vec![k]).unwrap_or_else(|| vec![3, 4, 5]);
    for &k in &ks {
        let regimes: Vec<(&str, SieveParams)> = vec![
            ("standard", SieveParams::standard(k, rat(1, 4))),
            ("extended", SieveParams::extended(k, rat(1, 4))),
            ("epsilon", SieveParams::epsilon(k, rat(1, 4), rat(1, 5))?),
        ];
        for (label, params) in regimes {
            for c in 0..3u64 {
                let f = random_cubic(seed.wrapping_add(1000 * c + u64::from(k)), Basis::Monomial);
                for which in [Which::I, Which::J, Which::Q] {
                    if which == Which::J && params.regime == Regime::Extended {
                        // ell = 1 removes J from the extended quotient
                        continue;
                    }
                    let exact = match which {
                        Which::I => i_value(&params, &f)?,
                        Which::J => j_value(&params, &f)?,
                        Which::Q => q_value(&params, &f, EvalMode::Exact)?,
                    };
                    let exact = bridged(&params, &exact);
                    let mc = mc_functional(which, &params, &f, samples, seed);
                    let z = compare(&exact, &mc);
                    let name = format!(
                        "{label} k={k} f{c} {}",
                        match which {
                            Which::I => "I",
                            Which::J => "J",
                            Which::Q => "Q",
                        }
                    );
                    report.push(
                        ResultEntry::new(name, mc.estimate, mc.std_error, "monte-carlo")
                            .against(exact.numeric, z_tol * mc.std_error)
                            .detail(format!("z = {z:.2}")),
                    );
                }
            }
        }
    }
    Ok(())
}
