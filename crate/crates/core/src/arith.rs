//! Arbitrary-precision modular arithmetic and probable-prime generation.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::error::{Error, Result};

/// Rounds of Miller-Rabin applied to every generated prime. 64 independent
/// rounds bound the composite probability by 4^-64, far below the 2^-80 target.
pub const MILLER_RABIN_ROUNDS: u32 = 64;

const SMALL_PRIMES: [u32; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Multiplicative inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
///
/// Returns `None` for zero divisors; key-generation callers treat that as a
/// regeneration trigger.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if *m < BigUint::from(2u32) {
        return None;
    }
    // Extended Euclid over signed integers.
    let mut r0 = BigInt::from(m.clone());
    let mut r1 = BigInt::from(a % m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if !r0.is_one() {
        return None;
    }
    let m_int = BigInt::from(m.clone());
    let inv = t0.mod_floor(&m_int);
    inv.to_biguint()
}

/// Reduce a signed value into the canonical residue range `[0, m)`.
pub fn residue(v: &BigInt, m: &BigUint) -> BigUint {
    v.mod_floor(&BigInt::from(m.clone()))
        .to_biguint()
        .expect("mod_floor of positive modulus is nonnegative")
}

/// Map a residue in `[0, m)` to the centered range `[-(m-1)/2, m/2]`.
pub fn centered(v: &BigUint, m: &BigUint) -> BigInt {
    let half = m >> 1;
    if *v > half {
        BigInt::from(v.clone()) - BigInt::from(m.clone())
    } else {
        BigInt::from(v.clone())
    }
}

/// `(a * b) mod m`
pub fn mul_mod(a: &BigUint, b: &BigUint, m: &BigUint) -> BigUint {
    (a * b) % m
}

/// `(a + b) mod m`
pub fn add_mod(a: &BigUint, b: &BigUint, m: &BigUint) -> BigUint {
    (a + b) % m
}

/// `(a - b) mod m`; operands need not be reduced.
pub fn sub_mod(a: &BigUint, b: &BigUint, m: &BigUint) -> BigUint {
    let a = a % m;
    let b = b % m;
    if a >= b {
        a - b
    } else {
        m - b + a
    }
}

/// Combine residues `x ≡ xp (mod p)`, `x ≡ xq (mod q)` for coprime p, q.
pub fn crt_pair(xp: &BigUint, p: &BigUint, xq: &BigUint, q: &BigUint) -> BigUint {
    let p_inv = mod_inverse(p, q).expect("crt_pair requires coprime moduli");
    let diff = sub_mod(xq, &(xp % q), q);
    xp + p * mul_mod(&diff, &p_inv, q)
}

/// Miller-Rabin with `rounds` random bases.
pub fn is_probable_prime(n: &BigUint, rounds: u32, rng: &mut impl RngCore) -> bool {
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    if *n < two {
        return false;
    }
    if *n == two || *n == three {
        return true;
    }
    if n.is_even() {
        return false;
    }
    for sp in SMALL_PRIMES.iter().skip(1) {
        let sp = BigUint::from(*sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }

    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Generate a probable prime in `[2^(bits-1), 2^bits]`.
///
/// Loops until a candidate passes trial division plus [`MILLER_RABIN_ROUNDS`]
/// rounds of Miller-Rabin; termination fails only with negligible probability.
pub fn gen_prime(bits: u32, rng: &mut impl RngCore) -> Result<BigUint> {
    if bits < 2 {
        return Err(Error::InvalidParams(format!(
            "prime bit-length must be at least 2, got {bits}"
        )));
    }
    let top = BigUint::one() << (bits - 1) as u64;
    loop {
        let mut candidate = rng.gen_biguint(bits as u64);
        candidate |= &top; // pin the bit-length
        candidate |= BigUint::one(); // odd
        if is_probable_prime(&candidate, MILLER_RABIN_ROUNDS, rng) {
            return Ok(candidate);
        }
    }
}

/// Uniform draw from `[lo, hi)`.
pub fn rand_range(lo: &BigUint, hi: &BigUint, rng: &mut impl RngCore) -> BigUint {
    rng.gen_biguint_range(lo, hi)
}

/// Uniform draw from `[0, bound)`.
pub fn rand_below(bound: &BigUint, rng: &mut impl RngCore) -> BigUint {
    rng.gen_biguint_below(bound)
}

/// Exact power of two as a big integer.
pub fn pow2(bits: u32) -> BigUint {
    BigUint::one() << bits as u64
}

/// `gcd(a, b)`
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Try to interpret a `BigUint` as usize, for bin counts and indices.
pub fn to_usize(v: &BigUint) -> Option<usize> {
    v.to_usize()
}
