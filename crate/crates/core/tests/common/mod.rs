//! Arbitrary-precision reference values for the entropy code.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};

/// Fractional bits carried by oracle results.
const RESULT_BITS: u64 = 128;
/// Working precision of the mantissa during squaring.
const WORK_BITS: u64 = 256;

/// `log2(v)` scaled by `2^RESULT_BITS`, by repeated squaring of the mantissa.
pub fn log2_fixed(v: &BigUint) -> BigInt {
    assert!(v.bits() > 0, "log2 of zero");
    let k = v.bits() - 1;
    let mut y = if k >= WORK_BITS {
        v >> (k - WORK_BITS)
    } else {
        v << (WORK_BITS - k)
    };
    let two = BigUint::from(1u8) << (WORK_BITS + 1);
    let mut result = BigInt::from(k) << RESULT_BITS;
    for i in 1..=RESULT_BITS {
        y = (&y * &y) >> WORK_BITS;
        if y >= two {
            y >>= 1;
            result += BigInt::from(1u8) << (RESULT_BITS - i);
        }
    }
    result
}

fn to_f64(x: &BigInt) -> f64 {
    // keep 64 fractional bits; the integer part fits comfortably in i128
    let shifted: BigInt = x >> (RESULT_BITS - 64);
    let small = i128::try_from(&shifted).expect("oracle value out of range");
    small as f64 / 2f64.powi(64)
}

/// `log2(2^s - 1)` evaluated on the exact integer.
pub fn log2_pow2_minus_one(s: u64) -> f64 {
    let v = (BigUint::from(1u8) << s) - BigUint::from(1u8);
    to_f64(&log2_fixed(&v))
}

pub fn log2(n: u64) -> f64 {
    to_f64(&log2_fixed(&BigUint::from(n)))
}

/// Deng entropy of the box sizes `sizes` over `total` nodes, as
/// `(total, nonspecificity, discord)`.
pub fn deng(sizes: &[u64], total: u64) -> (f64, f64, f64) {
    let log_total = log2_fixed(&BigUint::from(total));
    let mut nonspecificity = BigInt::from(0u8);
    let mut discord = BigInt::from(0u8);
    for &s in sizes {
        let exact = (BigUint::from(1u8) << s) - BigUint::from(1u8);
        nonspecificity += BigInt::from(s) * log2_fixed(&exact);
        // -m log2 m with m = s / total
        discord += BigInt::from(s) * (&log_total - log2_fixed(&BigUint::from(s)));
    }
    let n = BigInt::from(total);
    let nonspecificity = &nonspecificity / &n;
    let discord = &discord / &n;
    let sum = &nonspecificity + &discord;
    (to_f64(&sum), to_f64(&nonspecificity), to_f64(&discord))
}

#[test]
fn oracle_self_check() {
    assert_eq!(log2(1024), 10.0);
    assert!((log2(3) - 1.584962500721156).abs() < 1e-15);
    assert!((log2_pow2_minus_one(2) - 3f64.log2()).abs() < 1e-15);
    let (total, ns, dc) = deng(&[1, 1], 2);
    assert_eq!((total, ns, dc), (1.0, 0.0, 1.0));
}
