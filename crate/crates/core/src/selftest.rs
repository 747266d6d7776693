//! The acceptance criteria as runnable checks, shared by the `self-test` command and the
//! `acceptance` test target.

use std::collections::HashMap;
use std::time::Instant;

use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::evaluator::{eval_lemma1, eval_prime_power, induction_check_within, phi_exact, reflection_product};
use crate::exact_value::{ComplexApprox, ExactGaussValue};
use crate::limits::Limits;
use crate::modular::{count_sqrt_closed, is_prime, sylvester_count, SqrtCountQuery};
use crate::oracle::{self, phi_numeric, sylvester_brute};
use crate::sweep;

/// Absolute tolerance for every numeric comparison.
pub const TOLERANCE: f64 = 1e-6;

/// Numerator offsets `l` used by the prime-power criteria.
pub const PRIME_POWER_NUMERATORS: [i64; 8] = [1, -1, 3, -3, 5, 7, 9, -5];

const MAX_REPORTED: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// The first few failing cases.
    pub examples: Vec<String>,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "[{verdict}] criterion {}: {} ({} cases, {} failures, {:.1}s)",
            self.id, self.title, self.cases, self.failures, self.seconds
        );
        for example in &self.examples {
            line.push_str("\n        ");
            line.push_str(example);
        }
        line
    }
}

struct Tally {
    cases: usize,
    failures: usize,
    examples: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(describe());
            }
        }
    }

    fn error(&mut self, what: String) {
        self.check(false, || what);
    }

    fn finish(self, id: u8, title: &'static str, started: Instant) -> CriterionOutcome {
        CriterionOutcome {
            id,
            title,
            cases: self.cases,
            failures: self.failures,
            examples: self.examples,
            seconds: started.elapsed().as_secs_f64(),
        }
    }
}

fn agrees(exact: &ExactGaussValue, numeric: &ComplexApprox) -> bool {
    exact.to_complex().agrees_with(numeric, TOLERANCE)
}

fn int(n: i64) -> ExactGaussValue {
    ExactGaussValue::from_integer(n)
}

/// Every prime power `p^k ≤ bound` as `(p, k, p^k)`, ordered by prime then exponent.
pub fn prime_powers_up_to(bound: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for p in (2..=bound).filter(|&p| is_prime(p)) {
        let (mut k, mut pk) = (1u32, p);
        while pk <= bound {
            out.push((p, k, pk));
            k += 1;
            pk *= p;
        }
    }
    out
}

/// The prime powers used by criteria 3 and 4: odd `p^k ≤ 2000` and `2^k`, `k ≤ 11`.
fn evaluation_prime_powers() -> Vec<(u64, u32, u64)> {
    let mut out: Vec<_> = prime_powers_up_to(2000).into_iter().filter(|&(p, _, _)| p != 2).collect();
    out.extend((1..=11).map(|k| (2, k, 1u64 << k)));
    out
}

/// 1: the four-case table for `Φ(a, 2)` against summation, `1 ≤ a ≤ 10⁴`.
pub fn criterion_lemma1() -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    let table = [
        ExactGaussValue::new(BigRational::from_integer(1.into()), 2, 1),
        int(1),
        ExactGaussValue::zero(),
        ExactGaussValue::new(BigRational::from_integer(1.into()), 1, 2),
    ];
    for a in 1..=10_000u64 {
        let value = eval_lemma1(a);
        let table_ok = value == table[(a % 4) as usize];
        let pipeline_ok = phi_exact(a, 2).is_ok_and(|v| v == value);
        match phi_numeric(a, 2) {
            Ok(numeric) => tally.check(table_ok && pipeline_ok && agrees(&value, &numeric), || {
                format!("a={a}: closed {value}, numeric {numeric}")
            }),
            Err(e) => tally.error(format!("a={a}: {e}")),
        }
    }
    tally.finish(1, "Phi(a, 2) four-case table, 1 <= a <= 10^4", started)
}

/// 2: closed-form square-root counts against enumeration for every `p^j ≤ 4096`.
pub fn criterion_counting() -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    for (p, j, m) in prime_powers_up_to(4096) {
        let counts = match oracle::square_root_counts(m) {
            Ok(c) => c,
            Err(e) => {
                tally.error(format!("{p}^{j}: {e}"));
                continue;
            }
        };
        for (t, &brute) in counts.iter().enumerate() {
            let closed = SqrtCountQuery::new(t as i64, p, j).map(|q| count_sqrt_closed(&q));
            tally.check(closed == Ok(brute), || {
                format!("x^2 = {t} mod {p}^{j}: closed {closed:?}, enumerated {brute}")
            });
        }
    }
    tally.finish(2, "square-root counts mod p^j <= 4096, every residue", started)
}

/// 3: prime-power closed forms against summation and the Fourier expansion.
pub fn criterion_prime_powers() -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    for (p, k, pk) in evaluation_prime_powers() {
        for &l in PRIME_POWER_NUMERATORS.iter().filter(|&&l| l.gcd(&(p as i64)) == 1) {
            let outcome = (|| -> Result<(bool, String)> {
                let closed = eval_prime_power(p, k, l)?;
                let numeric = phi_numeric(pk, 2 * l)?;
                let fourier = oracle::fourier_check(p, k, l, TOLERANCE)?;
                Ok((
                    agrees(&closed, &numeric) && fourier.passed,
                    format!("Phi({pk}, {}): closed {closed}, numeric {numeric}, fourier {:?}", 2 * l, fourier.failing_step),
                ))
            })();
            match outcome {
                Ok((ok, detail)) => tally.check(ok, || detail),
                Err(e) => tally.error(format!("p={p} k={k} l={l}: {e}")),
            }
        }
    }
    tally.finish(3, "prime-power closed forms vs summation and Fourier expansion", started)
}

/// 4: the reflection product is exactly 1 for odd `p` and 2 for `2^k`, `k ≥ 3`.
pub fn criterion_reflection() -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    for (p, k, _) in evaluation_prime_powers() {
        let expected = match (p, k) {
            (2, 1) => ExactGaussValue::zero(),
            (2, _) => int(2),
            _ => int(1),
        };
        for &l in PRIME_POWER_NUMERATORS.iter().filter(|&&l| l.gcd(&(p as i64)) == 1) {
            let product = reflection_product(p, k, l);
            tally.check(product.as_ref() == Ok(&expected), || {
                format!("p={p} k={k} l={l}: {product:?}, expected {expected}")
            });
        }
    }
    tally.finish(4, "reflection product, exact", started)
}

/// Exact `Φ(a, r)` for every `a ≤ max` and even `r` in `0..2a`.
struct SmallModulusTable {
    values: HashMap<(u64, i64), ExactGaussValue>,
}

impl SmallModulusTable {
    fn new(max: u64) -> Result<Self> {
        let mut values = HashMap::new();
        for a in 1..=max {
            for r in (0..2 * a as i64).step_by(2) {
                values.insert((a, r), phi_exact(a, r)?);
            }
        }
        Ok(SmallModulusTable { values })
    }

    fn get(&self, a: u64, numerator: i64) -> &ExactGaussValue {
        &self.values[&(a, numerator.rem_euclid(2 * a as i64))]
    }
}

/// Pairs for the numeric part of criterion 5: all coprime `a, b ≤ 40` plus 300 seeded
/// random coprime pairs from the full `a, b ≤ 300` range.
pub fn multiplicative_numeric_pairs() -> Vec<(u64, u64)> {
    let mut pairs: Vec<(u64, u64)> = (1..=40u64)
        .flat_map(|a| (1..=40u64).map(move |b| (a, b)))
        .filter(|&(a, b)| a.gcd(&b) == 1)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut sampled = 0;
    while sampled < 300 {
        let (a, b) = (rng.gen_range(1..=300u64), rng.gen_range(1..=300u64));
        if a.gcd(&b) == 1 && (a > 40 || b > 40) {
            pairs.push((a, b));
            sampled += 1;
        }
    }
    pairs
}

/// 5: the multiplicative and scaling rules.
///
/// Structural equality over every coprime `a, b ≤ 300`, even `|l| ≤ 20`, and every
/// `a ≤ 100`, even `|b| ≤ 20`, `k ≤ 20`. Numeric cross-checks, odd `l` included, over the
/// pairs from [`multiplicative_numeric_pairs`] and the odd-numerator scaling grid.
pub fn criterion_multiplicative() -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    let table = match SmallModulusTable::new(300) {
        Ok(t) => t,
        Err(e) => {
            tally.error(format!("building the small-modulus table: {e}"));
            return tally.finish(5, "multiplicative and scaling rules", started);
        }
    };

    // the statement is symmetric in (a, b), so a ≤ b covers the grid
    for a in 1..=300u64 {
        for b in (a..=300u64).filter(|&b| a.gcd(&b) == 1) {
            for l in (-20..=20i64).step_by(2) {
                let whole = phi_exact(a * b, l);
                let split = table.get(a, b as i64 * l) * table.get(b, a as i64 * l);
                tally.check(whole.as_ref() == Ok(&split), || {
                    format!("Phi({}, {l}): {whole:?} vs split {split}", a * b)
                });
            }
        }
    }

    for a in 1..=100u64 {
        for b in (-20..=20i64).step_by(2) {
            let base = table.get(a, b);
            for k in 1..=20u64 {
                let scaled = phi_exact(k * a, k as i64 * b);
                let expected = base.scale_sqrt(k);
                tally.check(scaled.as_ref() == Ok(&expected), || {
                    format!("Phi({}, {}): {scaled:?} vs sqrt({k})*{base}", k * a, k as i64 * b)
                });
            }
        }
    }

    for (a, b) in multiplicative_numeric_pairs() {
        for l in -20..=20i64 {
            let outcome = (|| -> Result<bool> {
                let whole = phi_numeric(a * b, l)?;
                let split = phi_numeric(a, b as i64 * l)? * phi_numeric(b, a as i64 * l)?;
                let mut ok = whole.agrees_with(&split, TOLERANCE);
                if l % 2 == 0 {
                    ok &= agrees(&phi_exact(a * b, l)?, &whole);
                }
                Ok(ok)
            })();
            tally.check(outcome == Ok(true), || format!("numeric Phi({}, {l}) split a={a} b={b}: {outcome:?}", a * b));
        }
    }

    // scaling with an odd numerator needs an even modulus
    for a in (2..=100u64).step_by(2) {
        for b in (-19..=19i64).step_by(2) {
            for k in 1..=20u64 {
                let outcome = (|| -> Result<bool> {
                    let scaled = phi_numeric(k * a, k as i64 * b)?;
                    let base = phi_numeric(a, b)?.scale((k as f64).sqrt());
                    Ok(scaled.agrees_with(&base, TOLERANCE))
                })();
                tally.check(outcome == Ok(true), || format!("numeric scaling a={a} b={b} k={k}: {outcome:?}"));
            }
        }
    }
    tally.finish(5, "multiplicative and scaling rules, exact with numeric cross-check", started)
}

/// 6: the reciprocity relation over `1 ≤ a, b ≤ 200`.
pub fn criterion_reciprocity(workers: usize) -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    match sweep::verify_ls_grid(200, 200, TOLERANCE, workers, &Limits::default()) {
        Ok(summary) => {
            tally.cases = summary.total;
            tally.failures = summary.failures.len();
            tally.examples = summary
                .failures
                .iter()
                .take(MAX_REPORTED)
                .map(|r| format!("{}: difference {:.3e} at {:?}", r.query, r.difference, r.failing_step))
                .collect();
        }
        Err(e) => tally.error(format!("sweep aborted: {e}")),
    }
    tally.finish(6, "Phi(a, 2b) = sqrt(i) Phi(2b, -a), 1 <= a, b <= 200", started)
}

/// Limits for the induction replay: `Φ(2bp^k, -a)` reaches about `9.3·10⁷` terms.
pub fn induction_limits() -> Limits {
    Limits::default().with_max_terms(100_000_000)
}

/// 100 seeded tuples `(a, b, p, k)` with `gcd(p, ab) = 1`, `p ≤ 31`, `k ≤ 4`,
/// `a, b ≤ 50`; every fourth tuple has `p = 2`.
pub fn induction_tuples() -> Vec<(u64, u64, u64, u32)> {
    let odd_primes: Vec<u64> = (3..=31).filter(|&p| is_prime(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    (0..100)
        .map(|i| {
            let p = if i % 4 == 0 {
                2
            } else {
                odd_primes[rng.gen_range(0..odd_primes.len())]
            };
            let k = rng.gen_range(1..=4u32);
            loop {
                let (a, b) = (rng.gen_range(1..=50u64), rng.gen_range(1..=50u64));
                if (a * b) % p != 0 {
                    return (a, b, p, k);
                }
            }
        })
        .collect()
}

/// 7: step-by-step replay of the induction on seeded tuples.
pub fn criterion_induction() -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    let limits = induction_limits();
    for (a, b, p, k) in induction_tuples() {
        match induction_check_within(a, b, p, k, TOLERANCE, &limits) {
            Ok(report) => tally.check(report.passed, || {
                format!("a={a} b={b} p={p} k={k}: failed at {:?}", report.failing_step)
            }),
            Err(e) => tally.error(format!("a={a} b={b} p={p} k={k}: {e}")),
        }
    }
    tally.finish(7, "induction replay on 100 seeded tuples", started)
}

/// 8: `(a-1)(b-1)/2` against grid enumeration for coprime odd `a, b`, `ab ≤ 2500`.
pub fn criterion_sylvester() -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    for a in (1..=2500u64).step_by(2) {
        for b in (1..=2500 / a).filter(|&b| b % 2 == 1 && a.gcd(&b) == 1) {
            let closed = sylvester_count(a, b);
            let brute = sylvester_brute(a, b);
            tally.check(closed.is_ok() && closed == brute, || {
                format!("a={a} b={b}: closed {closed:?}, enumerated {brute:?}")
            });
        }
    }
    tally.finish(8, "lattice count (a-1)(b-1)/2, coprime odd a, b with ab <= 2500", started)
}

/// Runs every criterion in order.
pub fn run_all(workers: usize) -> Vec<CriterionOutcome> {
    vec![
        criterion_lemma1(),
        criterion_counting(),
        criterion_prime_powers(),
        criterion_reflection(),
        criterion_multiplicative(),
        criterion_reciprocity(workers),
        criterion_induction(),
        criterion_sylvester(),
    ]
}
