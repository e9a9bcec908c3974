//! Embedded reference targets for the reproduced tables.

use serde::Deserialize;
use sievebound::exact::{parse_rational, LogValue, Rational};

use crate::CliError;

#[derive(Debug, Deserialize)]
pub struct Targets {
    pub version: u32,
    pub standard: Vec<StandardRow>,
    pub extended: Vec<ExtendedRow>,
    pub enlarged: Vec<EnlargedRow>,
    pub dhl: DhlRows,
    pub worked_example: WorkedExample,
}

#[derive(Debug, Deserialize)]
pub struct StandardRow {
    pub k: u32,
    pub theta_quarter: f64,
    pub theta_half: f64,
    pub witness: String,
}

#[derive(Debug, Deserialize)]
pub struct ExtendedRow {
    pub k: u32,
    pub theta_quarter: f64,
    pub theta_half: f64,
    pub witness: String,
    #[serde(default = "yes")]
    pub supported: bool,
}

#[derive(Debug, Deserialize)]
pub struct EnlargedRow {
    pub k: u32,
    pub eps: String,
    pub bound: f64,
    pub quadratic_bound: f64,
    pub witness: String,
}

#[derive(Debug, Deserialize)]
pub struct DhlRows {
    pub unconditional: Vec<i64>,
    pub unconditional_new_from_k: u32,
    pub geh: Vec<i64>,
    pub geh_new_from_k: u32,
}

#[derive(Debug, Deserialize)]
pub struct WorkedExample {
    pub witness: String,
    pub i_exact: String,
    pub i_lower: f64,
    pub q_c53: String,
    pub q_c3: String,
    pub q_c1: String,
    pub q_denom: String,
    pub q_c65: String,
    pub q_ca: String,
    pub q_upper: f64,
    pub omega_upper: f64,
}

fn yes() -> bool {
    true
}

pub fn load() -> Targets {
    toml::from_str(include_str!("../data/targets.toml")).expect("embedded targets parse")
}

impl WorkedExample {
    /// Reconstructs the reference closed form of the worked example's `Q`
    /// value as a canonical log-linear combination.
    pub fn q_reference(&self) -> Result<LogValue, CliError> {
        let denom = parse_rational(&self.q_denom)?;
        let c53 = parse_rational(&self.q_c53)? / &denom;
        let c3 = parse_rational(&self.q_c3)? / &denom;
        let c1 = parse_rational(&self.q_c1)? / &denom;
        let c65 = parse_rational(&self.q_c65)?;
        let ca = parse_rational(&self.q_ca)?;
        let five_thirds: Rational = parse_rational("5/3")?;
        let three: Rational = parse_rational("3")?;
        let six_fifths: Rational = parse_rational("6/5")?;
        let four: Rational = parse_rational("4")?;
        let mut v = LogValue::from_rational(c1);
        v = &v + &LogValue::ln(&five_thirds)?.scale(&c53);
        v = &v + &LogValue::ln(&three)?.scale(&c3);
        v = &v + &LogValue::ln(&six_fifths)?.scale(&c65);
        v = &v + &LogValue::arcoth(&four)?.scale(&ca);
        Ok(v)
    }
}
