//! Brute-force floor roots used as ground truth for the engine.
//!
//! The oracle works on `num_bigint::BigUint` and only borrows the digit
//! vector of its input, so it shares no arithmetic with the engine.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decimal::DecimalNatural;
use crate::engine::{extract_root, RootKind, RootResult};

fn to_big(x: &DecimalNatural) -> BigUint {
    if x.is_zero() {
        return BigUint::default();
    }
    BigUint::from_radix_le(x.digits(), 10).expect("digits are base 10")
}

fn from_big(v: &BigUint) -> DecimalNatural {
    DecimalNatural::from_le_digits(v.to_radix_le(10)).expect("to_radix_le yields base-10 digits")
}

/// The unique `r` with `r^k <= x < (r+1)^k`, by binary search.
pub fn floor_root(x: &DecimalNatural, kind: RootKind) -> DecimalNatural {
    let (root, _) = floor_root_rem(x, kind);
    root
}

/// Floor root together with `x - root^k`.
pub fn floor_root_rem(x: &DecimalNatural, kind: RootKind) -> (DecimalNatural, DecimalNatural) {
    let target = to_big(x);
    let k = kind.exponent();
    let pow = |r: &BigUint| -> BigUint {
        let mut acc = BigUint::from(1u32);
        for _ in 0..k {
            acc *= r;
        }
        acc
    };

    // r < 10^ceil(digits / k) always holds
    let exp = x.digit_count().div_ceil(k as usize) as u32;
    let mut lo = BigUint::default();
    let mut hi = BigUint::from(10u32).pow(exp);
    // invariant: lo^k <= x < hi^k
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if pow(&mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rem = &target - pow(&lo);
    (from_big(&lo), from_big(&rem))
}

/// A disagreement between the engine and the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub input: DecimalNatural,
    pub engine_root: DecimalNatural,
    pub engine_remainder: DecimalNatural,
    pub oracle_root: DecimalNatural,
    pub oracle_remainder: DecimalNatural,
}

/// Outcome of a differential run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub kind: RootKind,
    pub checked: u64,
    /// Smallest mismatching input, if any.
    pub mismatch: Option<Mismatch>,
}

impl VerifyReport {
    pub fn is_success(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn check_one<F>(x: DecimalNatural, kind: RootKind, engine: &F) -> Option<Mismatch>
where
    F: Fn(&DecimalNatural, RootKind) -> (DecimalNatural, DecimalNatural),
{
    let (engine_root, engine_remainder) = engine(&x, kind);
    let (oracle_root, oracle_remainder) = floor_root_rem(&x, kind);
    if engine_root == oracle_root && engine_remainder == oracle_remainder {
        None
    } else {
        Some(Mismatch {
            input: x,
            engine_root,
            engine_remainder,
            oracle_root,
            oracle_remainder,
        })
    }
}

fn engine_pair(x: &DecimalNatural, kind: RootKind) -> (DecimalNatural, DecimalNatural) {
    let RootResult { root, remainder, .. } = extract_root(x, kind);
    (root, remainder)
}

fn smallest(a: Option<Mismatch>, b: Option<Mismatch>) -> Option<Mismatch> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if a.input <= b.input { a } else { b }),
        (a, b) => a.or(b),
    }
}

/// Checks the engine against the oracle for every `x` in `[lo, hi]`.
pub fn verify_range(lo: &DecimalNatural, hi: &DecimalNatural, kind: RootKind) -> VerifyReport {
    verify_range_with(lo, hi, kind, engine_pair)
}

/// [`verify_range`] with a substitute engine.
pub fn verify_range_with<F>(
    lo: &DecimalNatural,
    hi: &DecimalNatural,
    kind: RootKind,
    engine: F,
) -> VerifyReport
where
    F: Fn(&DecimalNatural, RootKind) -> (DecimalNatural, DecimalNatural) + Sync,
{
    assert!(lo <= hi, "verify_range requires lo <= hi");
    const CHUNK: u64 = 4096;

    let (lo_b, hi_b) = (to_big(lo), to_big(hi));
    let span = &hi_b - &lo_b;
    let chunks = (&span / CHUNK) + 1u32;
    let chunks: u64 = chunks.try_into().expect("range too large to enumerate");

    let mismatch = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = &lo_b + BigUint::from(c * CHUNK);
            let mut x = from_big(&start);
            for _ in 0..CHUNK {
                if x > *hi {
                    break;
                }
                // inputs within a chunk ascend, so the first hit is the chunk minimum
                if let Some(m) = check_one(x.clone(), kind, &engine) {
                    return Some(m);
                }
                x = x.add(&DecimalNatural::one());
            }
            None
        })
        .reduce(|| None, smallest);

    VerifyReport {
        kind,
        checked: u64::try_from(span + 1u32).expect("chunk count fit, so does the span"),
        mismatch,
    }
}

/// Uniformly random digit count in `1..=max_digits`, then uniformly random
/// digits with a nonzero leading digit.
pub fn random_natural<R: Rng>(rng: &mut R, max_digits: usize) -> DecimalNatural {
    assert!(max_digits >= 1);
    let len = rng.gen_range(1..=max_digits);
    let mut digits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..10)).collect();
    digits[len - 1] = rng.gen_range(1..10);
    DecimalNatural::from_le_digits(digits).expect("digits are in range")
}

/// Differential check on `count` seeded random inputs of up to `max_digits`
/// digits.
pub fn verify_random(kind: RootKind, count: u64, max_digits: usize, seed: u64) -> VerifyReport {
    verify_random_with(kind, count, max_digits, seed, engine_pair)
}

/// [`verify_random`] with a substitute engine.
pub fn verify_random_with<F>(
    kind: RootKind,
    count: u64,
    max_digits: usize,
    seed: u64,
    engine: F,
) -> VerifyReport
where
    F: Fn(&DecimalNatural, RootKind) -> (DecimalNatural, DecimalNatural) + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<DecimalNatural> = (0..count).map(|_| random_natural(&mut rng, max_digits)).collect();
    let mismatch = inputs
        .into_par_iter()
        .map(|x| check_one(x, kind, &engine))
        .reduce(|| None, smallest);
    VerifyReport {
        kind,
        checked: count,
        mismatch,
    }
}
