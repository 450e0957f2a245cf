//! Primes of special shapes: Proth primes, primes represented by a
//! polynomial, and simultaneous prime values of polynomial systems.

use num_bigint::BigInt;

use super::poly::IntPoly;
use super::primes::{is_prime_u64, is_probable_prime, pow_mod, segment_end, sieve_segment};
use super::window::WindowSource;
use super::SequenceError;

/// Whether `v = k * 2^m + 1` with `k` odd and `0 < k < 2^m`.
pub fn is_proth_number(v: u64) -> bool {
    if v < 3 {
        return false;
    }
    let n = v - 1;
    let m = n.trailing_zeros();
    let k = n >> m;
    m < 64 && k < (1u64 << m)
}

/// Proth's criterion: a Proth number `v` is prime iff `a^((v-1)/2) = -1`
/// for a quadratic non-residue `a`. Returns `None` if no non-residue turns
/// up among small bases (which happens for perfect squares).
pub fn proth_criterion(v: u64) -> Option<bool> {
    if !is_proth_number(v) {
        return None;
    }
    if v == 3 {
        return Some(true);
    }
    for a in 2..200u64 {
        match jacobi(a, v) {
            -1 => return Some(pow_mod(a, (v - 1) / 2, v) == v - 1),
            0 if a < v => return Some(false),
            _ => {}
        }
    }
    None
}

/// Jacobi symbol `(a / n)` for odd `n > 0`.
pub fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

pub struct ProthSource;

impl ProthSource {
    /// All Proth numbers in `(lo, hi]`, unsorted.
    pub fn proth_numbers(lo: u64, hi: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for m in 1..63u32 {
            let step = 1u64 << m;
            if step + 1 > hi {
                break;
            }
            // smallest odd k with k * 2^m + 1 > lo
            let mut k = if lo < step + 1 { 1 } else { (lo - 1) / step + 1 };
            if k % 2 == 0 {
                k += 1;
            }
            while k < step {
                let Some(v) = k.checked_mul(step).and_then(|x| x.checked_add(1)) else {
                    break;
                };
                if v > hi {
                    break;
                }
                out.push(v);
                k += 2;
            }
        }
        out
    }
}

impl WindowSource for ProthSource {
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        let mut v: Vec<u64> = Self::proth_numbers(lo, hi)
            .into_iter()
            .filter(|&n| is_prime_u64(n))
            .collect();
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }
    fn window_end(&self, lo: u64) -> u64 {
        lo.max(32).saturating_mul(2)
    }
}

/// Primes of the form `f(x)` with `x` ranging over all integers.
pub struct PolyFormSource {
    pub poly: IntPoly,
}

impl PolyFormSource {
    pub fn new(poly: IntPoly) -> Result<Self, SequenceError> {
        if poly.degree() == 0 || poly.leading() <= 0 {
            return Err(SequenceError::InvalidParams(format!(
                "polynomial {poly} must be non-constant with positive leading coefficient"
            )));
        }
        Ok(PolyFormSource { poly })
    }

    /// Integer points `x` with `lo < f(x) <= hi`.
    fn values_in(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        let radius = self.poly.monotone_radius();
        let (lo, hi) = (lo as i128, hi as i128);
        let mut out = Vec::new();
        for dir in [1i128, -1] {
            let mut x: i128 = if dir == 1 { 0 } else { -1 };
            loop {
                let v = self
                    .poly
                    .eval(x)
                    .ok_or_else(|| SequenceError::Overflow(format!("{} at {x}", self.poly)))?;
                if v > lo && v <= hi {
                    out.push(v as u64);
                }
                if x.abs() > radius {
                    let next = self
                        .poly
                        .eval(x + dir)
                        .ok_or_else(|| SequenceError::Overflow(format!("{} at {x}", self.poly)))?;
                    let growing = next > v;
                    if (growing && v > hi) || (!growing && v <= lo) {
                        break;
                    }
                }
                x += dir;
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

impl WindowSource for PolyFormSource {
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        Ok(self
            .values_in(lo, hi)?
            .into_iter()
            .filter(|&v| is_prime_u64(v))
            .collect())
    }
    fn window_end(&self, lo: u64) -> u64 {
        lo.max(64).saturating_mul(4)
    }
}

/// Positive integers `q` at which every polynomial of the system takes a
/// prime value.
pub struct HypothesisHSource {
    pub polys: Vec<IntPoly>,
    has_identity: bool,
}

impl HypothesisHSource {
    pub fn new(polys: Vec<IntPoly>) -> Self {
        let has_identity = polys.iter().any(IntPoly::is_identity);
        HypothesisHSource { polys, has_identity }
    }

    pub fn all_prime_at(&self, q: u64) -> Result<bool, SequenceError> {
        for f in &self.polys {
            if f.is_identity() {
                if !is_prime_u64(q) {
                    return Ok(false);
                }
                continue;
            }
            let v = f
                .eval(q as i128)
                .ok_or_else(|| SequenceError::Overflow(format!("{f} at {q}")))?;
            let prime = if v < 2 {
                false
            } else if v <= u64::MAX as i128 {
                is_prime_u64(v as u64)
            } else {
                is_probable_prime(&BigInt::from(v))
            };
            if !prime {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl WindowSource for HypothesisHSource {
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        let mut out = Vec::new();
        if self.has_identity {
            for q in sieve_segment(lo, hi) {
                if self.all_prime_at(q)? {
                    out.push(q);
                }
            }
        } else {
            for q in lo + 1..=hi {
                if self.all_prime_at(q)? {
                    out.push(q);
                }
            }
        }
        Ok(out)
    }
    fn window_end(&self, lo: u64) -> u64 {
        segment_end(lo)
    }
}
