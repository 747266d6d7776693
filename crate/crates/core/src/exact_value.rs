//! The value algebra `{0} ∪ {c·√m·ζ₈^e}` and its floating-point shadow.
//!
//! Every closed form produced by the evaluator is either zero or a positive rational `c`
//! times the square root of a squarefree integer `m` times an eighth root of unity
//! `ζ₈^e = exp(iπe/4)`. The representation is canonical, so structural equality is
//! complex-number equality: `c√m = c'√m'` with `m, m'` squarefree forces `c = c'` and
//! `m = m'`, and the unit is then determined.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    Root8 {
        coeff: BigRational,
        radicand: u64,
        octant: u8,
    },
}

/// An exact value `c·√m·ζ₈^e`, or zero.
///
/// Invariants: `c > 0`, `m ≥ 1` squarefree, `0 ≤ e < 8`. Zero has its own variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct ExactGaussValue(Repr);

/// Splits `m` as `s²·r` with `r` squarefree. Returns `(s, r)`.
pub fn squarefree_decomposition(mut m: u64) -> (u64, u64) {
    assert!(m > 0, "squarefree decomposition of zero");
    let mut square_root = 1u64;
    let mut squarefree = 1u64;
    let mut p = 2u64;
    while p.checked_mul(p).is_some_and(|pp| pp <= m) {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            square_root *= p.pow(e / 2);
            if e % 2 == 1 {
                squarefree *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        squarefree *= m;
    }
    (square_root, squarefree)
}

impl ExactGaussValue {
    pub fn zero() -> Self {
        ExactGaussValue(Repr::Zero)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// The imaginary unit, `ζ₈²`.
    pub fn i() -> Self {
        Self::zeta8_pow(2)
    }

    /// `1 + i = √2·ζ₈`.
    pub fn one_plus_i() -> Self {
        Self::new(BigRational::one(), 2, 1)
    }

    pub fn zeta8_pow(e: i64) -> Self {
        Self::new(BigRational::one(), 1, e)
    }

    pub fn sqrt(m: u64) -> Self {
        Self::new(BigRational::one(), m, 0)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), 1, 0)
    }

    /// Builds `coeff·√radicand·ζ₈^octant` and brings it to canonical form.
    ///
    /// A zero coefficient or radicand gives zero, a negative coefficient is absorbed
    /// into the octant, square factors of the radicand move into the coefficient and the
    /// octant is reduced mod 8.
    pub fn new(coeff: BigRational, radicand: u64, octant: i64) -> Self {
        if coeff.is_zero() || radicand == 0 {
            return Self::zero();
        }
        let (square_root, squarefree) = squarefree_decomposition(radicand);
        let mut octant = octant;
        let mut coeff = coeff * BigRational::from_integer(BigInt::from(square_root));
        if coeff.is_negative() {
            coeff = -coeff;
            octant += 4;
        }
        ExactGaussValue(Repr::Root8 {
            coeff,
            radicand: squarefree,
            octant: octant.rem_euclid(8) as u8,
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Zero)
    }

    pub fn coeff(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Zero => None,
            Repr::Root8 { coeff, .. } => Some(coeff),
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        match self.0 {
            Repr::Zero => None,
            Repr::Root8 { radicand, .. } => Some(radicand),
        }
    }

    pub fn octant(&self) -> Option<u8> {
        match self.0 {
            Repr::Zero => None,
            Repr::Root8 { octant, .. } => Some(octant),
        }
    }

    /// `|x|² = c²·m`, always rational.
    pub fn norm_squared(&self) -> BigRational {
        match &self.0 {
            Repr::Zero => BigRational::zero(),
            Repr::Root8 { coeff, radicand, .. } => {
                coeff * coeff * BigRational::from_integer(BigInt::from(*radicand))
            }
        }
    }

    pub fn conj(&self) -> Self {
        match &self.0 {
            Repr::Zero => Self::zero(),
            Repr::Root8 {
                coeff,
                radicand,
                octant,
            } => ExactGaussValue(Repr::Root8 {
                coeff: coeff.clone(),
                radicand: *radicand,
                octant: (8 - octant) % 8,
            }),
        }
    }

    /// Multiplies by `ζ₈^e`.
    pub fn rotate(&self, e: i64) -> Self {
        match &self.0 {
            Repr::Zero => Self::zero(),
            Repr::Root8 {
                coeff,
                radicand,
                octant,
            } => ExactGaussValue(Repr::Root8 {
                coeff: coeff.clone(),
                radicand: *radicand,
                octant: (*octant as i64 + e).rem_euclid(8) as u8,
            }),
        }
    }

    /// Multiplies by `√k`.
    pub fn scale_sqrt(&self, k: u64) -> Self {
        self * &Self::sqrt(k)
    }

    /// Multiplies by a rational factor.
    pub fn scale(&self, factor: &BigRational) -> Self {
        self * &Self::new(factor.clone(), 1, 0)
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.0 {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Root8 {
                coeff,
                radicand,
                octant,
            } => {
                // 1/(c√m ζ^e) = √m ζ^-e / (c m)
                let denom = coeff * BigRational::from_integer(BigInt::from(*radicand));
                Ok(ExactGaussValue(Repr::Root8 {
                    coeff: denom.recip(),
                    radicand: *radicand,
                    octant: (8 - octant) % 8,
                }))
            }
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Floating-point value with a bound on the rounding error.
    pub fn to_complex(&self) -> ComplexApprox {
        let (coeff, radicand, octant) = match &self.0 {
            Repr::Zero => return ComplexApprox::exact(0.0, 0.0),
            Repr::Root8 {
                coeff,
                radicand,
                octant,
            } => (coeff, *radicand, *octant),
        };
        // Odd octants with an even radicand are multiples of ±1±i, which are exact.
        let (m, unit_scale) = if octant % 2 == 1 && radicand % 2 == 0 {
            (radicand / 2, 1.0)
        } else if octant % 2 == 1 {
            (radicand, std::f64::consts::FRAC_1_SQRT_2)
        } else {
            (radicand, 1.0)
        };
        let mut roundings = 0u32;
        let c = coeff.to_f64().unwrap_or(f64::INFINITY);
        if !coeff.is_integer() || coeff.numer().bits() > 53 {
            roundings += 1;
        }
        let magnitude = if m == 1 {
            c
        } else {
            roundings += if c == 1.0 { 1 } else { 2 };
            c * (m as f64).sqrt()
        };
        let magnitude = if unit_scale == 1.0 {
            magnitude
        } else {
            roundings += 2;
            magnitude * unit_scale
        };
        let (re, im) = match octant {
            0 => (magnitude, 0.0),
            1 => (magnitude, magnitude),
            2 => (0.0, magnitude),
            3 => (-magnitude, magnitude),
            4 => (-magnitude, 0.0),
            5 => (-magnitude, -magnitude),
            6 => (0.0, -magnitude),
            _ => (magnitude, -magnitude),
        };
        let err = if roundings == 0 {
            0.0
        } else {
            // each rounding is relative to the magnitude; the unit adds a factor √2
            2.0 * (roundings + 1) as f64 * EPS * magnitude.abs()
        };
        ComplexApprox::new(re, im, err)
    }
}

impl Mul<&ExactGaussValue> for &ExactGaussValue {
    type Output = ExactGaussValue;

    fn mul(self, rhs: &ExactGaussValue) -> ExactGaussValue {
        match (&self.0, &rhs.0) {
            (Repr::Zero, _) | (_, Repr::Zero) => ExactGaussValue::zero(),
            (
                Repr::Root8 {
                    coeff: c1,
                    radicand: m1,
                    octant: e1,
                },
                Repr::Root8 {
                    coeff: c2,
                    radicand: m2,
                    octant: e2,
                },
            ) => {
                // m1, m2 squarefree: √m1·√m2 = g·√((m1/g)(m2/g)) with g = gcd(m1, m2)
                let g = m1.gcd(m2);
                let radicand = u64::try_from((m1 / g) as u128 * (m2 / g) as u128)
                    .expect("radicand of a product exceeds 64 bits");
                let coeff = c1 * c2 * BigRational::from_integer(BigInt::from(g));
                ExactGaussValue(Repr::Root8 {
                    coeff,
                    radicand,
                    octant: (e1 + e2) % 8,
                })
            }
        }
    }
}

impl Mul for ExactGaussValue {
    type Output = ExactGaussValue;

    fn mul(self, rhs: ExactGaussValue) -> ExactGaussValue {
        &self * &rhs
    }
}

impl Neg for &ExactGaussValue {
    type Output = ExactGaussValue;

    fn neg(self) -> ExactGaussValue {
        self.rotate(4)
    }
}

impl fmt::Display for ExactGaussValue {
    /// Renders as `0`, `i`, `1+i`, `-sqrt(3)*i`, `3/2*sqrt(5)*zeta8^3` and so on.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (coeff, radicand, octant) = match &self.0 {
            Repr::Zero => return f.write_str("0"),
            Repr::Root8 {
                coeff,
                radicand,
                octant,
            } => (coeff, *radicand, *octant),
        };
        let diagonal = octant % 2 == 1 && radicand % 2 == 0;
        let m = if diagonal { radicand / 2 } else { radicand };

        let mut magnitude = Vec::new();
        if !coeff.is_one() || m == 1 {
            magnitude.push(coeff.to_string());
        }
        if m > 1 {
            magnitude.push(format!("sqrt({m})"));
        }
        let magnitude = magnitude.join("*");
        let is_unit = magnitude == "1";

        if diagonal {
            let unit = match octant {
                1 => "1+i",
                3 => "-1+i",
                5 => "-1-i",
                _ => "1-i",
            };
            return if is_unit {
                f.write_str(unit)
            } else {
                write!(f, "{magnitude}*({unit})")
            };
        }
        match (octant, is_unit) {
            (0, _) => write!(f, "{magnitude}"),
            (2, true) => f.write_str("i"),
            (2, false) => write!(f, "{magnitude}*i"),
            (4, _) => write!(f, "-{magnitude}"),
            (6, true) => f.write_str("-i"),
            (6, false) => write!(f, "-{magnitude}*i"),
            (_, true) => write!(f, "zeta8^{octant}"),
            (_, false) => write!(f, "{magnitude}*zeta8^{octant}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Wire {
    Zero,
    Root8 {
        coeff: String,
        radicand: u64,
        octant: u8,
    },
}

impl From<ExactGaussValue> for Wire {
    fn from(value: ExactGaussValue) -> Self {
        match value.0 {
            Repr::Zero => Wire::Zero,
            Repr::Root8 {
                coeff,
                radicand,
                octant,
            } => Wire::Root8 {
                coeff: coeff.to_string(),
                radicand,
                octant,
            },
        }
    }
}

impl TryFrom<Wire> for ExactGaussValue {
    type Error = String;

    fn try_from(wire: Wire) -> std::result::Result<Self, String> {
        match wire {
            Wire::Zero => Ok(ExactGaussValue::zero()),
            Wire::Root8 {
                coeff,
                radicand,
                octant,
            } => {
                let coeff: BigRational = coeff
                    .parse()
                    .map_err(|e| format!("invalid rational coefficient {coeff:?}: {e}"))?;
                if !coeff.is_positive() {
                    return Err(format!("coefficient must be positive, got {coeff}"));
                }
                if radicand == 0 {
                    return Err("radicand must be at least 1".into());
                }
                if octant > 7 {
                    return Err(format!("octant must be in 0..8, got {octant}"));
                }
                Ok(ExactGaussValue::new(coeff, radicand, octant as i64))
            }
        }
    }
}

/// A complex number `re + i·im` together with a bound `err` on its distance from the
/// value it approximates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64, err: f64) -> Self {
        debug_assert!(err >= 0.0);
        ComplexApprox { re, im, err }
    }

    pub fn exact(re: f64, im: f64) -> Self {
        Self::new(re, im, 0.0)
    }

    pub fn zero() -> Self {
        Self::exact(0.0, 0.0)
    }

    /// `ζ₈ = exp(iπ/4)`.
    pub fn zeta8() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(h, h, EPS)
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im, self.err)
    }

    /// `|self - other|` as computed.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }

    /// True iff the two approximations are within `tol` of each other once both
    /// error bounds are allowed for.
    pub fn agrees_with(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol + self.err + other.err
    }

    pub fn scale(&self, factor: f64) -> Self {
        let re = self.re * factor;
        let im = self.im * factor;
        let err = self.err * factor.abs() + 2.0 * EPS * re.hypot(im);
        Self::new(re, im, err)
    }

    /// Quotient, or `None` when the divisor's error disc contains zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        let d = rhs.abs();
        if d <= rhs.err {
            return None;
        }
        let d2 = rhs.re * rhs.re + rhs.im * rhs.im;
        let re = (self.re * rhs.re + self.im * rhs.im) / d2;
        let im = (self.im * rhs.re - self.re * rhs.im) / d2;
        let propagated = (self.err * d + self.abs() * rhs.err) / (d * (d - rhs.err));
        let rounding = 8.0 * EPS * self.abs() / d;
        Some(Self::new(re, im, propagated + rounding))
    }
}

impl Add for ComplexApprox {
    type Output = ComplexApprox;

    fn add(self, rhs: ComplexApprox) -> ComplexApprox {
        let re = self.re + rhs.re;
        let im = self.im + rhs.im;
        let rounding = 2.0 * EPS * (self.abs() + rhs.abs());
        ComplexApprox::new(re, im, self.err + rhs.err + rounding)
    }
}

impl Sub for ComplexApprox {
    type Output = ComplexApprox;

    fn sub(self, rhs: ComplexApprox) -> ComplexApprox {
        self + ComplexApprox::new(-rhs.re, -rhs.im, rhs.err)
    }
}

impl Mul for ComplexApprox {
    type Output = ComplexApprox;

    fn mul(self, rhs: ComplexApprox) -> ComplexApprox {
        let re = self.re * rhs.re - self.im * rhs.im;
        let im = self.re * rhs.im + self.im * rhs.re;
        let (a, b) = (self.abs(), rhs.abs());
        let propagated = a * rhs.err + b * self.err + self.err * rhs.err;
        let rounding = 4.0 * EPS * a * b;
        ComplexApprox::new(re, im, propagated + rounding)
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{:.12} {} {:.12}i (±{:.1e})", self.re, sign, self.im.abs(), self.err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: i64, m: u64, e: i64) -> ExactGaussValue {
        ExactGaussValue::new(BigRational::from_integer(c.into()), m, e)
    }

    fn q(n: i64, d: i64, m: u64, e: i64) -> ExactGaussValue {
        ExactGaussValue::new(BigRational::new(n.into(), d.into()), m, e)
    }

    #[test]
    fn canonical_form_absorbs_squares() {
        assert_eq!(v(1, 8, 0), v(2, 2, 0));
        assert_eq!(v(1, 8, 0).coeff().unwrap(), &BigRational::from_integer(2.into()));
        assert_eq!(v(1, 8, 0).radicand(), Some(2));
        assert_eq!(v(3, 72, 9), v(18, 2, 1));
        assert_eq!(v(-1, 1, 0), v(1, 1, 4));
        assert!(v(0, 5, 3).is_zero());
        assert!(v(4, 0, 3).is_zero());
    }

    #[test]
    fn squarefree_split() {
        assert_eq!(squarefree_decomposition(1), (1, 1));
        assert_eq!(squarefree_decomposition(12), (2, 3));
        assert_eq!(squarefree_decomposition(72), (6, 2));
        assert_eq!(squarefree_decomposition(97 * 97 * 5), (97, 5));
        assert_eq!(squarefree_decomposition(2_147_483_647), (1, 2_147_483_647));
    }

    #[test]
    fn mul_examples() {
        // (1+i)(1-i) = 2
        assert_eq!(v(1, 2, 1) * v(1, 2, 7), v(2, 1, 0));
        assert!((ExactGaussValue::zero() * v(3, 5, 2)).is_zero());
        assert!((v(3, 5, 2) * ExactGaussValue::zero()).is_zero());
        // i·i = -1
        assert_eq!(v(1, 1, 2) * v(1, 1, 2), v(1, 1, 4));
        // √6·√10 = 2√15
        assert_eq!(v(1, 6, 0) * v(1, 10, 0), v(2, 15, 0));
    }

    #[test]
    fn conj_examples() {
        assert_eq!(v(1, 2, 1).conj(), v(1, 2, 7));
        assert_eq!(v(1, 1, 0).conj(), v(1, 1, 0));
        assert!(ExactGaussValue::zero().conj().is_zero());
    }

    #[test]
    fn scale_sqrt_examples() {
        assert_eq!(v(1, 1, 2).scale_sqrt(2), v(1, 2, 2));
        assert_eq!(v(1, 2, 1).scale_sqrt(2), v(2, 1, 1));
        assert!(ExactGaussValue::zero().scale_sqrt(5).is_zero());
    }

    #[test]
    fn div_examples() {
        assert_eq!(v(1, 2, 1).div(&v(1, 2, 1)).unwrap(), v(1, 1, 0));
        assert_eq!(v(1, 1, 0).div(&v(1, 1, 2)).unwrap(), v(1, 1, 6));
        // 2/(1+i) = 1-i, checked below against complex division
        assert_eq!(v(2, 1, 0).div(&v(1, 2, 1)).unwrap(), v(1, 2, 7));
        assert_eq!(v(1, 1, 0).div(&ExactGaussValue::zero()), Err(Error::DivisionByZero));
        assert_eq!(v(1, 3, 0).inv().unwrap(), q(1, 3, 3, 0));
    }

    #[test]
    fn complex_division_agrees_with_exact_division() {
        let two = ComplexApprox::exact(2.0, 0.0);
        let one_plus_i = ComplexApprox::exact(1.0, 1.0);
        let quotient = two.checked_div(&one_plus_i).unwrap();
        assert!(quotient.agrees_with(&v(1, 2, 7).to_complex(), 0.0));
        assert!(two.checked_div(&ComplexApprox::new(0.0, 1e-3, 1e-2)).is_none());
    }

    #[test]
    fn to_complex_examples() {
        let one_plus_i = v(1, 2, 1).to_complex();
        assert!((one_plus_i.re - 1.0).abs() <= 1e-12 && (one_plus_i.im - 1.0).abs() <= 1e-12);
        assert!(one_plus_i.err <= 1e-12);
        assert_eq!(ExactGaussValue::zero().to_complex(), ComplexApprox::exact(0.0, 0.0));
        let i = v(1, 1, 2).to_complex();
        assert_eq!((i.re, i.im), (0.0, 1.0));
        assert!(i.err <= 1e-15);
        let z = q(3, 2, 5, 3).to_complex();
        let expected = 1.5 * 5f64.sqrt();
        assert!((z.abs() - expected).abs() <= z.err + 1e-15);
    }

    #[test]
    fn display() {
        assert_eq!(ExactGaussValue::zero().to_string(), "0");
        assert_eq!(v(1, 1, 0).to_string(), "1");
        assert_eq!(v(1, 1, 2).to_string(), "i");
        assert_eq!(v(1, 1, 4).to_string(), "-1");
        assert_eq!(v(1, 1, 6).to_string(), "-i");
        assert_eq!(v(1, 2, 1).to_string(), "1+i");
        assert_eq!(v(1, 2, 7).to_string(), "1-i");
        assert_eq!(v(1, 2, 5).to_string(), "-1-i");
        assert_eq!(v(1, 2, 3).to_string(), "-1+i");
        assert_eq!(v(1, 2, 2).to_string(), "sqrt(2)*i");
        assert_eq!(v(1, 3, 2).to_string(), "sqrt(3)*i");
        assert_eq!(v(2, 1, 0).to_string(), "2");
        assert_eq!(v(3, 6, 1).to_string(), "3*sqrt(3)*(1+i)");
        assert_eq!(q(1, 2, 1, 6).to_string(), "-1/2*i");
        assert_eq!(v(1, 1, 1).to_string(), "zeta8^1");
        assert_eq!(q(3, 2, 5, 3).to_string(), "3/2*sqrt(5)*zeta8^3");
    }

    #[test]
    fn json_encoding() {
        let json = serde_json::to_string(&v(1, 2, 1)).unwrap();
        assert_eq!(json, r#"{"kind":"root8","coeff":"1","radicand":2,"octant":1}"#);
        let json = serde_json::to_string(&q(3, 2, 5, 3)).unwrap();
        assert_eq!(json, r#"{"kind":"root8","coeff":"3/2","radicand":5,"octant":3}"#);
        assert_eq!(serde_json::to_string(&ExactGaussValue::zero()).unwrap(), r#"{"kind":"zero"}"#);

        let parsed: ExactGaussValue =
            serde_json::from_str(r#"{"kind":"root8","coeff":"1/1","radicand":8,"octant":0}"#).unwrap();
        assert_eq!(parsed, v(2, 2, 0));
        for bad in [
            r#"{"kind":"root8","coeff":"0","radicand":2,"octant":0}"#,
            r#"{"kind":"root8","coeff":"-1","radicand":2,"octant":0}"#,
            r#"{"kind":"root8","coeff":"1","radicand":0,"octant":0}"#,
            r#"{"kind":"root8","coeff":"1","radicand":2,"octant":8}"#,
            r#"{"kind":"root8","coeff":"1.5","radicand":2,"octant":0}"#,
        ] {
            assert!(serde_json::from_str::<ExactGaussValue>(bad).is_err(), "{bad}");
        }
    }

    fn arb_value() -> impl Strategy<Value = ExactGaussValue> {
        prop_oneof![
            1 => Just(ExactGaussValue::zero()),
            9 => (1i64..50, 1i64..12, 1u64..200, 0i64..8).prop_map(|(n, d, m, e)| q(n, d, m, e)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn canonicalization_is_idempotent(s in 1u64..40, m in 1u64..500, e in 0i64..8, c in 1i64..30) {
            let (root, sqfree) = squarefree_decomposition(s * s * m);
            prop_assert_eq!(v(c, s * s * m, e), v(c * root as i64, sqfree, e));
        }

        #[test]
        fn structural_equality_matches_numeric_equality(x in arb_value(), y in arb_value()) {
            let (cx, cy) = (x.to_complex(), y.to_complex());
            let close = cx.distance(&cy) <= cx.err + cy.err + 1e-9;
            prop_assert_eq!(x == y, close);
        }

        #[test]
        fn mul_is_commutative_and_associative(x in arb_value(), y in arb_value(), z in arb_value()) {
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn conj_is_an_involution_and_distributes(x in arb_value(), y in arb_value()) {
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        }

        #[test]
        fn product_with_conjugate_is_norm(x in arb_value()) {
            let p = &x * &x.conj();
            if x.is_zero() {
                prop_assert!(p.is_zero());
            } else {
                prop_assert_eq!(p.octant(), Some(0));
                prop_assert_eq!(p, ExactGaussValue::new(x.norm_squared(), 1, 0));
            }
        }

        #[test]
        fn scale_sqrt_composes(x in arb_value(), j in 1u64..60, k in 1u64..60) {
            prop_assert_eq!(x.scale_sqrt(j).scale_sqrt(k), x.scale_sqrt(j * k));
        }

        #[test]
        fn division_inverts_multiplication(x in arb_value(), y in arb_value()) {
            prop_assume!(!y.is_zero());
            prop_assert_eq!((&x * &y).div(&y).unwrap(), x);
        }

        #[test]
        fn to_complex_is_a_ring_homomorphism(x in arb_value(), y in arb_value()) {
            let exact = (&x * &y).to_complex();
            let numeric = x.to_complex() * y.to_complex();
            prop_assert!(exact.agrees_with(&numeric, 0.0), "{} vs {}", exact, numeric);
        }

        #[test]
        fn json_round_trip(x in arb_value()) {
            let json = serde_json::to_string(&x).unwrap();
            let back: ExactGaussValue = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, x);
        }
    }

    #[test]
    fn random_pairs_equality_agrees_with_numeric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            // small ranges so that equal pairs actually occur
            q(rng.gen_range(1..4), rng.gen_range(1..3), rng.gen_range(1..9), rng.gen_range(0..8))
        };
        let mut equal = 0;
        for _ in 0..10_000 {
            let (x, y) = (pick(&mut rng), pick(&mut rng));
            let (cx, cy) = (x.to_complex(), y.to_complex());
            let close = cx.distance(&cy) <= cx.err + cy.err + 1e-12;
            assert_eq!(x == y, close, "{x} vs {y}");
            equal += usize::from(x == y);
        }
        assert!(equal > 0);
    }
}
