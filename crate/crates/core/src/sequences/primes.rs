//! Primality testing, the segmented sieve, and prime-valued lists defined by
//! a filter over the primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::window::WindowSource;
use super::SequenceError;

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs (the first twelve prime
/// bases suffice below 3.3e24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Number of fixed Miller-Rabin bases used above 64 bits.
pub const BIG_MR_ROUNDS: usize = 24;

/// Primality for arbitrary integers: deterministic below 2^64, otherwise a
/// Miller-Rabin test over the first [`BIG_MR_ROUNDS`] primes as bases.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if !n.is_positive() {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let bases = first_primes(BIG_MR_ROUNDS);
    for &p in bases.iter().chain([41u64, 43, 47, 53, 59, 61, 67, 71].iter()) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for a in bases {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x).mod_floor(n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Plain Eratosthenes sieve of all primes `<= limit`.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 64u64;
    loop {
        let ps = simple_sieve(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Primes in `(lo, hi]` by sieving the segment with base primes up to
/// `sqrt(hi)`.
pub fn sieve_segment(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= lo || hi < 2 {
        return Vec::new();
    }
    let start = lo + 1;
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for p in simple_sieve(isqrt(hi)) {
        let first = (p * p).max(start.div_ceil(p) * p);
        let mut m = first;
        while m <= hi {
            composite[(m - start) as usize] = true;
            m += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(i, &c)| !c && start + *i as u64 >= 2)
        .map(|(i, _)| start + i as u64)
        .collect()
}

/// Segment width for prime-type windows: wide enough to amortize the base
/// sieve, narrow enough to stay cache friendly.
pub(crate) fn segment_end(lo: u64) -> u64 {
    lo.saturating_add((1u64 << 16).max(lo / 8).min(1 << 22))
}

/// All primes, ascending.
pub struct PrimeSource;

impl WindowSource for PrimeSource {
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        Ok(sieve_segment(lo, hi))
    }
    fn window_end(&self, lo: u64) -> u64 {
        segment_end(lo)
    }
}

/// Primes `p >= a` with `p = a (mod q)`.
pub struct ApSource {
    pub a: u64,
    pub q: u64,
}

impl WindowSource for ApSource {
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        let r = self.a % self.q;
        Ok(sieve_segment(lo, hi)
            .into_iter()
            .filter(|&p| p >= self.a && p % self.q == r)
            .collect())
    }
    fn window_end(&self, lo: u64) -> u64 {
        segment_end(lo.max(self.a))
    }
}

/// Distinct prime factors by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `g` (mod `p`) generates the multiplicative group mod the prime
/// `p`, given the distinct prime factors of `p - 1`.
pub fn is_primitive_root(g: u64, p: u64, factors_of_p_minus_1: &[u64]) -> bool {
    let g = g % p;
    if g == 0 {
        return false;
    }
    factors_of_p_minus_1
        .iter()
        .all(|&r| pow_mod(g, (p - 1) / r, p) != 1)
}

/// Least positive primitive root of the prime `p`.
pub fn least_primitive_root(p: u64) -> u64 {
    let f = distinct_prime_factors(p - 1);
    (1..p).find(|&g| is_primitive_root(g, p, &f)).unwrap_or(1)
}

/// Multiplicative order of `g` mod the prime `p` by direct iteration.
pub fn order_mod(g: u64, p: u64) -> u64 {
    let g = g % p;
    assert!(g != 0);
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, g, p);
        k += 1;
    }
    k
}

/// Whether `a = x^m` for some integers `x` and `m > 1`.
pub fn is_perfect_power(a: i64) -> bool {
    if a == 0 || a == 1 || a == -1 {
        return true;
    }
    let mag = a.unsigned_abs();
    for m in 2..64u32 {
        if a < 0 && m % 2 == 0 {
            continue;
        }
        let root = (mag as f64).powf(1.0 / m as f64).round() as u64;
        for x in root.saturating_sub(1)..=root + 1 {
            if x >= 2 && x.checked_pow(m) == Some(mag) {
                return true;
            }
        }
        if (1u64 << m.min(63)) > mag {
            break;
        }
    }
    false
}

/// Primes whose least positive primitive root is `a` (for `a > 0`), or whose
/// largest negative primitive root is `a` (for `a < 0`).
pub struct PrimitiveRootSource {
    pub a: i64,
}

impl PrimitiveRootSource {
    pub fn qualifies(&self, p: u64) -> bool {
        let f = distinct_prime_factors(p - 1);
        let residue = |b: i64| b.rem_euclid(p as i64) as u64;
        if self.a > 0 {
            if !is_primitive_root(residue(self.a), p, &f) {
                return false;
            }
            (1..self.a).all(|b| !is_primitive_root(residue(b), p, &f))
        } else {
            if !is_primitive_root(residue(self.a), p, &f) {
                return false;
            }
            (self.a + 1..0).all(|b| !is_primitive_root(residue(b), p, &f))
        }
    }
}

impl WindowSource for PrimitiveRootSource {
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        Ok(sieve_segment(lo, hi)
            .into_iter()
            .filter(|&p| self.qualifies(p))
            .collect())
    }
    fn window_end(&self, lo: u64) -> u64 {
        segment_end(lo)
    }
}
