use num_rational::BigRational;

use qgauss::evaluator::{
    eval_lemma1, eval_phi, eval_prime_power_odd, eval_prime_power_two, induction_check, reflection_product, verify_ls,
};
use qgauss::modular::{count_sqrt_closed, factorize, legendre, sylvester_count};
use qgauss::oracle::{count_sqrt_brute, fourier_check, phi_numeric, sylvester_brute};
use qgauss::{ExactGaussValue, GaussSumQuery, PrimePower, SqrtCountQuery};

fn v(c: i64, m: u64, e: i64) -> ExactGaussValue {
    ExactGaussValue::new(BigRational::from_integer(c.into()), m, e)
}

fn phi(a: u64, b: i64) -> ExactGaussValue {
    eval_phi(&GaussSumQuery::new(a, b).unwrap()).unwrap().0
}

#[test]
fn value_algebra() {
    assert_eq!(&v(1, 2, 1) * &v(1, 2, 7), v(2, 1, 0));
    assert_eq!(&ExactGaussValue::zero() * &v(3, 5, 2), ExactGaussValue::zero());
    assert_eq!(&v(1, 1, 2) * &v(1, 1, 2), v(1, 1, 4));
    assert_eq!(v(1, 2, 1).conj(), v(1, 2, 7));
    assert_eq!(v(1, 1, 2).scale_sqrt(2), v(1, 2, 2));
    assert_eq!(v(1, 2, 1).scale_sqrt(2), v(2, 1, 1));
    assert_eq!(v(1, 2, 1).div(&v(1, 2, 1)).unwrap(), v(1, 1, 0));
    assert_eq!(v(1, 1, 0).div(&v(1, 1, 2)).unwrap(), v(1, 1, 6));
    assert_eq!(v(2, 1, 0).div(&v(1, 2, 1)).unwrap(), v(1, 2, 7));
    assert!(v(1, 1, 0).div(&ExactGaussValue::zero()).is_err());
    assert_eq!(v(1, 8, 0), v(2, 2, 0));
    let z = v(1, 2, 1).to_complex();
    assert!((z.re - 1.0).abs() < 1e-12 && (z.im - 1.0).abs() < 1e-12 && z.err <= 1e-12);
}

#[test]
fn modular_helpers() {
    let pp = |prime, exponent| PrimePower { prime, exponent };
    assert_eq!(factorize(12).unwrap().factors, vec![pp(2, 2), pp(3, 1)]);
    assert_eq!(factorize(9999).unwrap().factors, vec![pp(3, 2), pp(11, 1), pp(101, 1)]);
    assert_eq!(legendre(1, 7).unwrap(), 1);
    assert_eq!(legendre(2, 5).unwrap(), -1);
    assert_eq!(legendre(3, 5).unwrap(), -1);
    for (t, p, j, expected) in [(0, 2, 3, 2), (1, 2, 3, 4), (27, 3, 4, 0), (4, 3, 2, 2)] {
        let q = SqrtCountQuery::new(t, p, j).unwrap();
        assert_eq!(count_sqrt_closed(&q), expected, "t={t} p={p} j={j}");
    }
    assert_eq!(count_sqrt_brute(0, 8).unwrap(), 2);
    assert_eq!(count_sqrt_brute(1, 8).unwrap(), 4);
    assert_eq!(count_sqrt_brute(2, 4).unwrap(), 0);
    for (a, b, s) in [(3, 5, 4), (1, 7, 0), (7, 9, 24), (5, 7, 12)] {
        assert_eq!(sylvester_count(a, b).unwrap(), s);
        assert_eq!(sylvester_brute(a, b).unwrap(), s);
    }
}

#[test]
fn closed_forms() {
    assert_eq!(eval_lemma1(4), ExactGaussValue::one_plus_i());
    assert_eq!(eval_lemma1(5), ExactGaussValue::one());
    assert!(eval_lemma1(6).is_zero());
    assert_eq!(eval_prime_power_odd(3, 2, 5).unwrap(), ExactGaussValue::one());
    assert_eq!(eval_prime_power_odd(5, 1, 2).unwrap(), v(1, 1, 4));
    assert_eq!(eval_prime_power_odd(3, 1, 1).unwrap(), ExactGaussValue::i());
    assert!(eval_prime_power_odd(3, 1, 6).is_err());
    assert_eq!(eval_prime_power_two(3, 1).unwrap(), ExactGaussValue::one_plus_i());
    assert_eq!(eval_prime_power_two(4, 1).unwrap(), ExactGaussValue::one_plus_i());
    assert!(eval_prime_power_two(1, 1).unwrap().is_zero());
    assert_eq!(eval_prime_power_two(2, 3).unwrap(), v(1, 2, 7));
    assert_eq!(reflection_product(7, 3, 2).unwrap(), ExactGaussValue::one());
    assert_eq!(reflection_product(2, 5, 3).unwrap(), ExactGaussValue::from_integer(2));
    assert!(reflection_product(2, 1, 1).unwrap().is_zero());
}

#[test]
fn composite_moduli() {
    assert_eq!(phi(15, 2), ExactGaussValue::i());
    assert_eq!(phi(6, 4), v(1, 2, 2));
    assert_eq!(phi(1, 14), ExactGaussValue::one());
    assert_eq!(phi(9, 6), v(1, 3, 2));
    assert!(eval_phi(&GaussSumQuery::new(7, 3).unwrap()).is_err());
    assert!(GaussSumQuery::new(0, 2).is_err());
}

#[test]
fn oracle_and_verification() {
    let one = phi_numeric(1, 12345).unwrap();
    assert!((one.re - 1.0).abs() < 1e-15 && one.im.abs() < 1e-15);
    assert!(phi_numeric(4, 2).unwrap().agrees_with(&ExactGaussValue::one_plus_i().to_complex(), 1e-9));
    assert!(phi_numeric(5, 2).unwrap().agrees_with(&ExactGaussValue::one().to_complex(), 1e-9));
    for (a, b) in [(1, 1), (3, 1), (4, 3)] {
        assert!(verify_ls(a, b, 1e-6).unwrap().passed, "a={a} b={b}");
    }
    for (p, k, l) in [(3, 2, 1), (2, 3, 1), (5, 1, 2)] {
        assert!(fourier_check(p, k, l, 1e-6).unwrap().passed, "p={p} k={k} l={l}");
    }
    for (a, b, p, k) in [(1, 1, 3, 1), (5, 1, 2, 2), (3, 5, 7, 2)] {
        let report = induction_check(a, b, p, k, 1e-6).unwrap();
        assert!(report.passed, "{report:?}");
    }
    assert!(induction_check(3, 5, 3, 1, 1e-6).is_err());
}
