//! Value tables for the closed forms, with CSV and JSON renderings.
//!
//! Columns are always the inputs, the exact value as JSON, then the numeric real and
//! imaginary parts from direct summation.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use qgauss::evaluator::{eval_lemma1, eval_prime_power_odd, eval_prime_power_two, reflection_product};
use qgauss::oracle::phi_numeric_within;
use qgauss::{ComplexApprox, Error, ExactGaussValue, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// `Φ(a, 2)` for `1 ≤ a ≤ max`.
    Lemma1,
    /// `Φ(p^k, 2l)` for an odd prime `p`, `1 ≤ k ≤ max-k`.
    Prop10,
    /// `Φ(2^k, 2l)` for odd `l`, `1 ≤ k ≤ max-k`.
    Prop11,
    /// `Φ(p^k, 2l)·Φ(p^k, -2l)` for `1 ≤ k ≤ max-k`.
    Reflection,
}

impl TableKind {
    fn inputs(self) -> &'static [&'static str] {
        match self {
            TableKind::Lemma1 => &["a"],
            _ => &["p", "k", "l"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
    pub exact: ExactGaussValue,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub kind: TableKind,
    pub rows: Vec<Row>,
}

const DEFAULT_PRIME: u64 = 3;

fn prime_power_modulus(p: u64, k: u32, limits: &Limits) -> Result<u64> {
    match p.checked_pow(k) {
        Some(m) if m <= limits.max_modulus => Ok(m),
        m => Err(Error::OutOfRange {
            what: "modulus",
            value: m.map_or(u128::MAX, u128::from),
            bound: limits.max_modulus,
        }),
    }
}

fn row(inputs: (Option<u64>, Option<u64>, Option<u32>, Option<i64>), exact: ExactGaussValue, numeric: ComplexApprox) -> Row {
    let (a, p, k, l) = inputs;
    Row {
        a,
        p,
        k,
        l,
        exact,
        re: numeric.re,
        im: numeric.im,
    }
}

impl Table {
    /// Builds the table. `max` only applies to `lemma1`; `p` defaults to 3 where a
    /// prime is needed and is fixed to 2 for `prop11`.
    pub fn build(kind: TableKind, max: u64, p: Option<u64>, max_k: u32, l: i64, limits: &Limits) -> Result<Self> {
        let mut rows = Vec::new();
        let two_l = l
            .checked_mul(2)
            .ok_or_else(|| Error::Precondition(format!("l = {l} is too large")))?;
        match kind {
            TableKind::Lemma1 => {
                for a in 1..=max {
                    let numeric = phi_numeric_within(a, 2, limits)?;
                    rows.push(row((Some(a), None, None, None), eval_lemma1(a), numeric));
                }
            }
            TableKind::Prop10 | TableKind::Prop11 | TableKind::Reflection => {
                let p = match kind {
                    TableKind::Prop11 => 2,
                    _ => p.unwrap_or(DEFAULT_PRIME),
                };
                if kind == TableKind::Prop10 && p == 2 {
                    return Err(Error::NotOddPrime(p));
                }
                for k in 1..=max_k {
                    let modulus = prime_power_modulus(p, k, limits)?;
                    let (exact, numeric) = match kind {
                        TableKind::Reflection => {
                            let plus = phi_numeric_within(modulus, two_l, limits)?;
                            let minus = phi_numeric_within(modulus, -two_l, limits)?;
                            (reflection_product(p, k, l)?, plus * minus)
                        }
                        TableKind::Prop11 => (eval_prime_power_two(k, l)?, phi_numeric_within(modulus, two_l, limits)?),
                        _ => (eval_prime_power_odd(p, k, l)?, phi_numeric_within(modulus, two_l, limits)?),
                    };
                    rows.push(row((None, Some(p), Some(k), Some(l)), exact, numeric));
                }
            }
        }
        Ok(Table { kind, rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let inputs = self.kind.inputs();
        let mut header: Vec<&str> = inputs.to_vec();
        header.extend(["exact", "re", "im"]);
        writer.write_record(&header)?;
        for r in &self.rows {
            let mut record: Vec<String> = inputs
                .iter()
                .map(|name| match *name {
                    "a" => r.a.map(|v| v.to_string()),
                    "p" => r.p.map(|v| v.to_string()),
                    "k" => r.k.map(|v| v.to_string()),
                    _ => r.l.map(|v| v.to_string()),
                })
                .map(Option::unwrap_or_default)
                .collect();
            record.push(serde_json::to_string(&r.exact).expect("values always serialize"));
            record.push(format!("{:?}", r.re));
            record.push(format!("{:?}", r.im));
            writer.write_record(&record)?;
        }
        writer.flush()
    }
}
