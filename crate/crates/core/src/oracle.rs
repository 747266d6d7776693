//! Independent ground truth.
//!
//! Nothing here uses the closed forms: sums are evaluated term by term, square roots are
//! counted by enumerating every residue and lattice points by walking the grid.
//! [`fourier_check`] is the one exception, since its job is to compare all three routes.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator;
use crate::exact_value::{ComplexApprox, ExactGaussValue};
use crate::limits::Limits;
use crate::modular::{self, check_sylvester_args};

const EPS: f64 = f64::EPSILON;

/// Per-term error of `exp(iθ)` for `θ = π·r/a`, `|θ| ≤ π`: about 2.5 ulp in the angle
/// (scaled by π) plus one ulp in each of sin and cos.
const TERM_ERR: f64 = 32.0 * EPS;

/// One comparison inside a verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    pub label: String,
    pub lhs: ComplexApprox,
    pub rhs: ComplexApprox,
    /// `|lhs - rhs|`, or infinity when an exact identity attached to the step failed.
    pub difference: f64,
    /// Outcome of the structural comparison, when the step has one.
    pub exact_identity: Option<bool>,
    pub passed: bool,
}

impl StepCheck {
    pub fn numeric(label: impl Into<String>, lhs: ComplexApprox, rhs: ComplexApprox, tol: f64) -> Self {
        Self::build(label.into(), lhs, rhs, None, tol)
    }

    pub fn with_exact(
        label: impl Into<String>,
        lhs: ComplexApprox,
        rhs: ComplexApprox,
        identity_holds: bool,
        tol: f64,
    ) -> Self {
        Self::build(label.into(), lhs, rhs, Some(identity_holds), tol)
    }

    fn build(label: String, lhs: ComplexApprox, rhs: ComplexApprox, exact: Option<bool>, tol: f64) -> Self {
        let difference = if exact == Some(false) {
            f64::INFINITY
        } else {
            lhs.distance(&rhs)
        };
        let passed = difference <= tol + lhs.err + rhs.err;
        StepCheck {
            label,
            lhs,
            rhs,
            difference,
            exact_identity: exact,
            passed,
        }
    }
}

/// Outcome of checking one identity instance.
///
/// `lhs`, `rhs` and `difference` describe the first failing step, or the final step when
/// everything passed, so `passed` holds iff `difference ≤ tolerance + lhs.err + rhs.err`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub query: String,
    pub exact: Option<ExactGaussValue>,
    pub lhs: ComplexApprox,
    pub rhs: ComplexApprox,
    pub difference: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub failing_step: Option<String>,
    pub steps: Vec<StepCheck>,
}

impl VerificationReport {
    pub fn from_steps(
        query: impl Into<String>,
        exact: Option<ExactGaussValue>,
        steps: Vec<StepCheck>,
        tolerance: f64,
    ) -> Self {
        assert!(!steps.is_empty(), "a verification needs at least one step");
        let failing = steps.iter().position(|s| !s.passed);
        let shown = &steps[failing.unwrap_or(steps.len() - 1)];
        VerificationReport {
            query: query.into(),
            exact,
            lhs: shown.lhs,
            rhs: shown.rhs,
            difference: shown.difference,
            tolerance,
            passed: failing.is_none(),
            failing_step: failing.map(|i| steps[i].label.clone()),
            steps,
        }
    }
}

/// Neumaier-compensated accumulator for one real component.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Accumulates weighted terms `w·exp(iπ·r/half_period)` for exact residues `r`.
struct PhaseSum {
    half_period: f64,
    re: Compensated,
    im: Compensated,
    weight: f64,
    terms: f64,
}

impl PhaseSum {
    fn new(half_period: u64) -> Self {
        PhaseSum {
            half_period: half_period as f64,
            re: Compensated::default(),
            im: Compensated::default(),
            weight: 0.0,
            terms: 0.0,
        }
    }

    /// Adds `weight·exp(iπ·r/half_period)` with `0 ≤ r < 2·half_period`.
    fn push(&mut self, r: u64, weight: u64) {
        // move the angle into (-π, π] before converting to floating point
        let r = r as f64;
        let signed = if r > self.half_period { r - 2.0 * self.half_period } else { r };
        let (s, c) = (std::f64::consts::PI * (signed / self.half_period)).sin_cos();
        let w = weight as f64;
        self.re.add(w * c);
        self.im.add(w * s);
        self.weight += w;
        self.terms += 1.0;
    }

    /// Returns the sum times `scale⁻¹ᐟ²`.
    fn finish(&self, scale: u64) -> ComplexApprox {
        let (re, im) = (self.re.value(), self.im.value());
        let magnitude = re.hypot(im);
        let raw_err = self.weight * TERM_ERR
            + 3.0 * EPS * magnitude
            + 2.0 * self.terms * self.weight * EPS * EPS;
        let root = (scale as f64).sqrt();
        let (re, im) = (re / root, im / root);
        let err = raw_err / root * (1.0 + 2.0 * EPS) + 2.0 * EPS * re.hypot(im);
        ComplexApprox::new(re, im, err)
    }
}

fn check_terms(what: &'static str, n: u64, limits: &Limits) -> Result<()> {
    if n > limits.max_terms {
        return Err(Error::OutOfRange {
            what,
            value: n as u128,
            bound: limits.max_terms,
        });
    }
    Ok(())
}

/// Direct summation of `Φ(a, b)` under the default limits.
pub fn phi_numeric(a: u64, b: i64) -> Result<ComplexApprox> {
    phi_numeric_within(a, b, &Limits::default())
}

/// `a^(-1/2) Σ_{n<a} exp(πi n² b / a)` with an explicit error bound.
///
/// The phase `n²b mod 2a` is tracked exactly in integers, so only the final conversion
/// of each angle to floating point rounds.
pub fn phi_numeric_within(a: u64, b: i64, limits: &Limits) -> Result<ComplexApprox> {
    if a == 0 {
        return Err(Error::NonPositiveModulus(0));
    }
    check_terms("modulus", a, limits)?;
    let period = 2 * a;
    let b = (b as i128).rem_euclid(period as i128) as u64;
    let twice_b = (2 * b) % period;
    let mut sum = PhaseSum::new(a);
    // n²b and its forward difference (2n+1)b, both mod 2a
    let (mut phase, mut step) = (0u64, b);
    for _ in 0..a {
        sum.push(phase, 1);
        phase += step;
        if phase >= period {
            phase -= period;
        }
        step += twice_b;
        if step >= period {
            step -= period;
        }
    }
    Ok(sum.finish(a))
}

/// Exhaustive `#{x mod m : x² ≡ t}` under the default limits.
pub fn count_sqrt_brute(t: i64, m: u64) -> Result<u64> {
    count_sqrt_brute_within(t, m, &Limits::default())
}

pub fn count_sqrt_brute_within(t: i64, m: u64, limits: &Limits) -> Result<u64> {
    check_modulus(m, limits)?;
    let t = (t as i128).rem_euclid(m as i128) as u128;
    let m = m as u128;
    Ok((0..m).filter(|x| x * x % m == t).count() as u64)
}

/// `counts[t] = #{x mod m : x² ≡ t}` for every `t`, from one pass over all `x`.
pub fn square_root_counts(m: u64) -> Result<Vec<u64>> {
    square_root_counts_within(m, &Limits::default())
}

pub fn square_root_counts_within(m: u64, limits: &Limits) -> Result<Vec<u64>> {
    check_modulus(m, limits)?;
    let mut counts = vec![0u64; m as usize];
    let wide = m as u128;
    for x in 0..wide {
        counts[(x * x % wide) as usize] += 1;
    }
    Ok(counts)
}

fn check_modulus(m: u64, limits: &Limits) -> Result<()> {
    if m == 0 {
        return Err(Error::NonPositiveModulus(0));
    }
    if m > limits.max_modulus {
        return Err(Error::OutOfRange {
            what: "modulus",
            value: m as u128,
            bound: limits.max_modulus,
        });
    }
    Ok(())
}

/// `p^(-k/2) Σ_n N(n)·exp(2πi·n·l/p^k)` with `N(n)` the enumerated square-root counts.
pub fn fourier_expansion(p: u64, k: u32, l: i64, limits: &Limits) -> Result<ComplexApprox> {
    let m = prime_power_modulus(p, k, limits)?;
    check_terms("modulus", m, limits)?;
    let counts = square_root_counts_within(m, limits)?;
    let l = (l as i128).rem_euclid(m as i128) as u128;
    let mut sum = PhaseSum::new(m);
    for (n, &count) in counts.iter().enumerate() {
        if count > 0 {
            // exp(2πi·nl/m) = exp(πi·(2nl mod 2m)/m)
            let r = (2 * n as u128 * l) % (2 * m as u128);
            sum.push(r as u64, count);
        }
    }
    Ok(sum.finish(m))
}

fn prime_power_modulus(p: u64, k: u32, limits: &Limits) -> Result<u64> {
    if !modular::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Precondition("exponent must be at least 1".into()));
    }
    match (p as u128).checked_pow(k) {
        Some(m) if m <= limits.max_modulus as u128 => Ok(m as u64),
        m => Err(Error::OutOfRange {
            what: "modulus",
            value: m.unwrap_or(u128::MAX),
            bound: limits.max_modulus,
        }),
    }
}

/// Compares the finite Fourier expansion of `Φ(p^k, 2l)` with direct summation and with
/// the closed form.
pub fn fourier_check(p: u64, k: u32, l: i64, tol: f64) -> Result<VerificationReport> {
    fourier_check_within(p, k, l, tol, &Limits::default())
}

pub fn fourier_check_within(p: u64, k: u32, l: i64, tol: f64, limits: &Limits) -> Result<VerificationReport> {
    let m = prime_power_modulus(p, k, limits)?;
    if (l as i128).gcd(&(p as i128)) != 1 {
        return Err(Error::NotCoprime(p as i128, l as i128));
    }
    let numerator = l
        .checked_mul(2)
        .ok_or_else(|| Error::Precondition(format!("2·{l} overflows")))?;
    let expansion = fourier_expansion(p, k, l, limits)?;
    let direct = phi_numeric_within(m, numerator, limits)?;
    let closed = evaluator::eval_prime_power(p, k, l)?;
    let steps = vec![
        StepCheck::numeric("fourier-vs-direct", expansion, direct, tol),
        StepCheck::numeric("closed-vs-fourier", closed.to_complex(), expansion, tol),
    ];
    Ok(VerificationReport::from_steps(
        format!("Phi({m}, {numerator}) as a Fourier expansion, p={p} k={k} l={l}"),
        Some(closed),
        steps,
        tol,
    ))
}

/// Walks the `b × a` grid counting `as + bt > ab`.
pub fn sylvester_brute(a: u64, b: u64) -> Result<u64> {
    sylvester_brute_within(a, b, &Limits::default())
}

pub fn sylvester_brute_within(a: u64, b: u64, limits: &Limits) -> Result<u64> {
    check_sylvester_args(a, b)?;
    let cells = a as u128 * b as u128;
    if cells > limits.max_modulus as u128 {
        return Err(Error::OutOfRange {
            what: "a*b",
            value: cells,
            bound: limits.max_modulus,
        });
    }
    let ab = a as u128 * b as u128;
    let mut count = 0u64;
    for s in 0..b as u128 {
        for t in 0..a as u128 {
            if a as u128 * s + b as u128 * t > ab {
                count += 1;
            }
        }
    }
    Ok(count)
}
