//! Closed-form evaluation of `Φ(a, b)` for even `b`.
//!
//! The modulus is split into prime powers with the multiplicative rule
//! `Φ(mn, l) = Φ(m, nl)·Φ(n, ml)` for coprime `m, n`. Within each prime power the common
//! factor of modulus and numerator is stripped with `Φ(ka, kb) = √k·Φ(a, b)`, which is
//! valid because the numerator stays even, and what is left is one of the prime-power
//! base cases. Each step is recorded in a [`DerivationTrace`].

mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_value::ExactGaussValue;
use crate::limits::Limits;
use crate::modular::{self, legendre, mod_pow};

pub use verify::{induction_check, induction_check_within, verify_ls, verify_ls_within};

/// The pair `(a, b)` naming `Φ(a, b) = a^(-1/2) Σ_{n<a} exp(πi n² b / a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussSumQuery {
    pub modulus: u64,
    pub numerator: i64,
}

impl GaussSumQuery {
    pub fn new(modulus: u64, numerator: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::NonPositiveModulus(0));
        }
        Ok(GaussSumQuery { modulus, numerator })
    }

    /// Same value, numerator reduced into `0..2a`.
    pub fn reduced(&self) -> Self {
        GaussSumQuery {
            modulus: self.modulus,
            numerator: reduce(self.numerator as i128, self.modulus),
        }
    }
}

impl fmt::Display for GaussSumQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi({}, {})", self.modulus, self.numerator)
    }
}

fn reduce(numerator: i128, modulus: u64) -> i64 {
    numerator.rem_euclid(2 * modulus as i128) as i64
}

/// Which rule produced a trace step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Rule {
    /// `Φ(1, b) = 1`, the single term `n = 0`.
    Unit,
    /// `Φ(a, 2)` from the residue of `a` mod 4.
    Lemma1,
    /// Split over coprime factors of the modulus.
    Lemma2 { pieces: Vec<GaussSumQuery> },
    /// `Φ(ka, kb) = √k·Φ(a, b)`.
    Lemma3 { factor: u64, reduced: GaussSumQuery },
    /// Odd prime power, numerator coprime to `p`.
    Prop10,
    /// `2^k` with `k ≥ 3`, odd `l`.
    Prop11,
    /// `Φ(2, 2l)` and `Φ(4, 2l)` for odd `l`.
    SmallCase,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Unit => "Unit",
            Rule::Lemma1 => "Lemma1",
            Rule::Lemma2 { .. } => "Lemma2",
            Rule::Lemma3 { .. } => "Lemma3",
            Rule::Prop10 => "Prop10",
            Rule::Prop11 => "Prop11",
            Rule::SmallCase => "SmallCase",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub query: GaussSumQuery,
    pub value: ExactGaussValue,
}

/// Steps in dependency order: every query a step refers to was produced by an earlier
/// step, and the last step is the requested query.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn value(&self) -> Option<&ExactGaussValue> {
        self.steps.last().map(|s| &s.value)
    }

    /// Recomputes every step from its rule and returns the final value.
    ///
    /// Base steps are re-evaluated from their query, composite steps combine the
    /// replayed values of the queries they reference. Any disagreement with a recorded
    /// value is an error.
    pub fn replay(&self) -> Result<ExactGaussValue> {
        let mut replayed: Vec<(GaussSumQuery, ExactGaussValue)> = Vec::with_capacity(self.steps.len());
        let lookup = |replayed: &[(GaussSumQuery, ExactGaussValue)], q: &GaussSumQuery, index: usize| {
            replayed
                .iter()
                .rev()
                .find(|(known, _)| known == q)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Precondition(format!("trace step {index} refers to unknown {q}")))
        };
        for (index, step) in self.steps.iter().enumerate() {
            let q = step.query;
            let value = match &step.rule {
                Rule::Unit => {
                    if q.modulus != 1 {
                        return Err(mismatch(index));
                    }
                    ExactGaussValue::one()
                }
                Rule::Lemma1 => {
                    if q.numerator != 2 {
                        return Err(mismatch(index));
                    }
                    eval_lemma1(q.modulus)
                }
                Rule::Prop10 | Rule::Prop11 | Rule::SmallCase => {
                    let pp = modular::prime_power(q.modulus).ok_or_else(|| mismatch(index))?;
                    if q.numerator % 2 != 0 {
                        return Err(mismatch(index));
                    }
                    eval_prime_power(pp.prime, pp.exponent, q.numerator / 2)?
                }
                Rule::Lemma3 { factor, reduced } => {
                    lookup(&replayed, reduced, index)?.scale_sqrt(*factor)
                }
                Rule::Lemma2 { pieces } => {
                    let mut product = ExactGaussValue::one();
                    for piece in pieces {
                        product = &product * &lookup(&replayed, piece, index)?;
                    }
                    product
                }
            };
            if value != step.value {
                return Err(mismatch(index));
            }
            replayed.push((q, value));
        }
        replayed
            .pop()
            .map(|(_, v)| v)
            .ok_or_else(|| Error::Precondition("empty trace".into()))
    }
}

fn mismatch(index: usize) -> Error {
    Error::Precondition(format!("trace step {index} does not replay"))
}

/// `Φ(a, 2)` by the residue of `a` mod 4: `1+i`, `1`, `0`, `i`.
pub fn eval_lemma1(a: u64) -> ExactGaussValue {
    assert!(a >= 1, "Phi(a, 2) needs a >= 1");
    match a % 4 {
        0 => ExactGaussValue::one_plus_i(),
        1 => ExactGaussValue::one(),
        2 => ExactGaussValue::zero(),
        _ => ExactGaussValue::i(),
    }
}

/// `Φ(p^k, 2l)` for an odd prime `p ∤ l`: `1` for even `k`, `(l/p)·Φ(p^k, 2)` for odd `k`.
pub fn eval_prime_power_odd(p: u64, k: u32, l: i64) -> Result<ExactGaussValue> {
    if p == 2 || !modular::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if k == 0 {
        return Err(Error::Precondition("exponent must be at least 1".into()));
    }
    let symbol = legendre(l, p)?;
    if symbol == 0 {
        return Err(Error::NotCoprime(p as i128, l as i128));
    }
    if k % 2 == 0 {
        return Ok(ExactGaussValue::one());
    }
    // only p^k mod 4 matters to the four-case table
    let base = eval_lemma1(4 + mod_pow(p, k as u64, 4));
    Ok(if symbol == 1 { base } else { -&base })
}

/// `Φ(2^k, 2l)` for odd `l`.
///
/// `k = 1` gives `0` and even `k` gives `1 + i^l`; odd `k ≥ 3` gives `√2·ζ₈^l`.
pub fn eval_prime_power_two(k: u32, l: i64) -> Result<ExactGaussValue> {
    if l % 2 == 0 {
        return Err(Error::EvenArgument(l));
    }
    match k {
        0 => Err(Error::Precondition("exponent must be at least 1".into())),
        1 => Ok(ExactGaussValue::zero()),
        k if k % 2 == 0 => Ok(if l.rem_euclid(4) == 1 {
            ExactGaussValue::one_plus_i()
        } else {
            ExactGaussValue::one_plus_i().conj()
        }),
        _ => Ok(ExactGaussValue::sqrt(2).rotate(l.rem_euclid(8))),
    }
}

/// `Φ(p^k, 2l)` for any prime `p ∤ l`.
pub fn eval_prime_power(p: u64, k: u32, l: i64) -> Result<ExactGaussValue> {
    if p == 2 {
        eval_prime_power_two(k, l)
    } else {
        eval_prime_power_odd(p, k, l)
    }
}

/// `Φ(a, b)` for even `b`, with its derivation.
pub fn eval_phi(q: &GaussSumQuery) -> Result<(ExactGaussValue, DerivationTrace)> {
    eval_phi_within(q, &Limits::default())
}

pub fn eval_phi_within(q: &GaussSumQuery, limits: &Limits) -> Result<(ExactGaussValue, DerivationTrace)> {
    if q.modulus == 0 {
        return Err(Error::NonPositiveModulus(0));
    }
    if q.numerator % 2 != 0 {
        return Err(Error::OddNumerator(q.numerator));
    }
    let factorization = modular::factorize_within(q.modulus, limits.max_modulus)?;
    let reduced = q.reduced();
    let mut trace = DerivationTrace::default();
    let value = match factorization.factors.as_slice() {
        [] => {
            trace.steps.push(TraceStep {
                rule: Rule::Unit,
                query: reduced,
                value: ExactGaussValue::one(),
            });
            ExactGaussValue::one()
        }
        [pp] => eval_piece(pp.prime, pp.exponent, reduced.numerator, &mut trace),
        factors => {
            let mut pieces = Vec::with_capacity(factors.len());
            let mut value = ExactGaussValue::one();
            for pp in factors {
                let part = pp.value();
                let cofactor = q.modulus / part;
                let numerator = reduce(reduced.numerator as i128 * cofactor as i128, part);
                pieces.push(GaussSumQuery {
                    modulus: part,
                    numerator,
                });
                value = &value * &eval_piece(pp.prime, pp.exponent, numerator, &mut trace);
            }
            trace.steps.push(TraceStep {
                rule: Rule::Lemma2 { pieces },
                query: reduced,
                value: value.clone(),
            });
            value
        }
    };
    Ok((value, trace))
}

/// `Φ(a, b)` for even `b`, without the trace.
pub fn phi_exact(modulus: u64, numerator: i64) -> Result<ExactGaussValue> {
    Ok(eval_phi(&GaussSumQuery::new(modulus, numerator)?)?.0)
}

/// Evaluates `Φ(p^k, numerator)` for an even numerator reduced into `0..2p^k`.
fn eval_piece(p: u64, k: u32, numerator: i64, trace: &mut DerivationTrace) -> ExactGaussValue {
    let modulus = p.pow(k);
    let query = GaussSumQuery { modulus, numerator };
    if k == 0 {
        trace.steps.push(TraceStep {
            rule: Rule::Unit,
            query,
            value: ExactGaussValue::one(),
        });
        return ExactGaussValue::one();
    }
    let l = numerator / 2;
    let strip = if l == 0 {
        k
    } else {
        let mut s = 0;
        let mut rest = l as u64;
        while s < k && rest % p == 0 {
            rest /= p;
            s += 1;
        }
        s
    };
    if strip > 0 {
        let factor = p.pow(strip);
        let inner_modulus = modulus / factor;
        let inner = GaussSumQuery {
            modulus: inner_modulus,
            numerator: reduce((numerator / factor as i64) as i128, inner_modulus),
        };
        let value = eval_piece(p, k - strip, inner.numerator, trace).scale_sqrt(factor);
        trace.steps.push(TraceStep {
            rule: Rule::Lemma3 {
                factor,
                reduced: inner,
            },
            query,
            value: value.clone(),
        });
        return value;
    }
    let rule = match (p, k) {
        _ if l == 1 => Rule::Lemma1,
        (2, 1) | (2, 2) => Rule::SmallCase,
        (2, _) => Rule::Prop11,
        _ => Rule::Prop10,
    };
    let value = if rule == Rule::Lemma1 {
        eval_lemma1(modulus)
    } else {
        eval_prime_power(p, k, l).expect("p does not divide l after stripping")
    };
    trace.steps.push(TraceStep {
        rule,
        query,
        value: value.clone(),
    });
    value
}

/// `Φ(p^k, 2l)·Φ(p^k, -2l)`: `1` for odd `p`, `2` for `p = 2, k ≥ 3`.
///
/// For `p = 2` and `k ∈ {1, 2}` the product is computed the same way and comes out as
/// `0` and `2`.
pub fn reflection_product(p: u64, k: u32, l: i64) -> Result<ExactGaussValue> {
    if !modular::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if l.rem_euclid(p as i64) == 0 {
        return Err(Error::NotCoprime(p as i128, l as i128));
    }
    Ok(&eval_prime_power(p, k, l)? * &eval_prime_power(p, k, -l)?)
}

/// Exact `Φ(a, b)` that also covers odd numerators over even moduli by *assuming* the
/// reciprocity relation `Φ(a, 2b) = √i·Φ(2b, -a)`.
///
/// For odd `d` and even `c`, `Φ(c, d) = ζ₈·conj(Φ(d, c))`. Verification code must not use
/// this, since it presupposes what is being verified.
pub fn eval_phi_assuming_ls(modulus: u64, numerator: i64) -> Result<ExactGaussValue> {
    let q = GaussSumQuery::new(modulus, numerator)?.reduced();
    if q.numerator % 2 == 0 {
        return phi_exact(q.modulus, q.numerator);
    }
    if q.modulus % 2 == 1 {
        return Err(Error::OddNumerator(numerator));
    }
    let swapped = phi_exact(q.numerator as u64, q.modulus as i64)?;
    Ok(swapped.conj().rotate(1))
}
