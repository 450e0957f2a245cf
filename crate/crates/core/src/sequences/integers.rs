//! Squarefree numbers, numbers of the form `x^2 + d y^2`, partition counts
//! and counts of monic irreducible polynomials over finite fields.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::primes::{distinct_prime_factors, isqrt, simple_sieve};
use super::state::{StateReader, StateWriter};
use super::window::WindowSource;
use super::{Generator, SequenceError};
use crate::kernel::ExactScalar;

pub struct SquarefreeSource;

impl WindowSource for SquarefreeSource {
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        let start = lo + 1;
        let mut hit = vec![false; (hi - lo) as usize];
        for p in simple_sieve(isqrt(hi)) {
            let sq = p * p;
            let mut m = start.div_ceil(sq) * sq;
            while m <= hi {
                hit[(m - start) as usize] = true;
                m += sq;
            }
        }
        Ok((0..hit.len())
            .filter(|&i| !hit[i])
            .map(|i| start + i as u64)
            .collect())
    }
    fn window_end(&self, lo: u64) -> u64 {
        lo + (1 << 16)
    }
}

pub fn is_squarefree(n: u64) -> bool {
    let mut d = 2u64;
    let mut n = n;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        if n % d == 0 {
            n /= d;
        }
        d += 1;
    }
    true
}

/// Positive integers `x^2 + d y^2` with `x, y >= 0`.
pub struct TwoSquareSource {
    pub d: u64,
}

impl WindowSource for TwoSquareSource {
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError> {
        let start = lo + 1;
        let mut hit = vec![false; (hi - lo) as usize];
        let mut y = 0u64;
        while self.d * y * y <= hi {
            let base = self.d * y * y;
            // x^2 in [start - base, hi - base]
            let x_lo = if base >= start { 0 } else { ceil_sqrt(start - base) };
            let x_hi = isqrt(hi - base);
            for x in x_lo..=x_hi {
                let v = base + x * x;
                if v >= start && v <= hi {
                    hit[(v - start) as usize] = true;
                }
            }
            y += 1;
        }
        Ok((0..hit.len())
            .filter(|&i| hit[i])
            .map(|i| start + i as u64)
            .collect())
    }
    fn window_end(&self, lo: u64) -> u64 {
        lo + (1 << 16)
    }
}

fn ceil_sqrt(n: u64) -> u64 {
    let r = isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Generalized pentagonal numbers `k(3k-1)/2` for `k = 1, -1, 2, -2, ...`
/// up to `limit`, paired with the sign `(-1)^(k+1)`.
fn pentagonal_offsets(limit: u64) -> impl Iterator<Item = (u64, bool)> {
    (1u64..)
        .flat_map(|k| {
            let plus = k % 2 == 1;
            [(k * (3 * k - 1) / 2, plus), (k * (3 * k + 1) / 2, plus)]
        })
        .take_while(move |(g, _)| *g <= limit)
}

/// `p(n)` through Euler's pentagonal-number recurrence.
pub struct Partitions {
    table: Vec<BigInt>,
}

impl Partitions {
    pub fn new() -> Self {
        Partitions { table: Vec::new() }
    }

    pub fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        Ok(Partitions { table: r.ints()? })
    }

    fn step(&mut self) -> BigInt {
        let n = self.table.len() as u64;
        let v = if n == 0 {
            BigInt::one()
        } else {
            let mut acc = BigInt::zero();
            for (g, plus) in pentagonal_offsets(n) {
                let t = &self.table[(n - g) as usize];
                if plus {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            acc
        };
        self.table.push(v.clone());
        v
    }
}

impl Generator for Partitions {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        Ok(ExactScalar::from(self.step()))
    }
    fn encode(&self, w: &mut StateWriter) {
        w.ints(self.table.iter());
    }
}

/// `p*(n)`, partitions into distinct parts. From
/// `prod(1 + x^k) * prod(1 - x^k) = prod(1 - x^(2k))`: the pentagonal
/// recurrence for `p*` carries an extra `(-1)^j` whenever `n = j(3j-1)`.
pub struct StrictPartitions {
    table: Vec<BigInt>,
}

impl StrictPartitions {
    pub fn new() -> Self {
        StrictPartitions { table: Vec::new() }
    }

    pub fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        Ok(StrictPartitions { table: r.ints()? })
    }

    fn step(&mut self) -> BigInt {
        let n = self.table.len() as u64;
        let v = if n == 0 {
            BigInt::one()
        } else {
            let mut acc = BigInt::zero();
            for (g, plus) in pentagonal_offsets(n) {
                let t = &self.table[(n - g) as usize];
                if plus {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            // n = 2 * g for a generalized pentagonal g = j(3j-1)/2, j != 0
            if n % 2 == 0 {
                if let Some(plus) = pentagonal_offsets(n / 2)
                    .find(|(g, _)| *g == n / 2)
                    .map(|(_, plus)| plus)
                {
                    // (-1)^j, while the offset sign is (-1)^(j+1)
                    if plus {
                        acc -= 1;
                    } else {
                        acc += 1;
                    }
                }
            }
            acc
        };
        self.table.push(v.clone());
        v
    }
}

impl Generator for StrictPartitions {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        Ok(ExactScalar::from(self.step()))
    }
    fn encode(&self, w: &mut StateWriter) {
        w.ints(self.table.iter());
    }
}

/// Mobius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `q = p^e` for a prime `p` and `e >= 1`.
pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let f = distinct_prime_factors(q);
    f.len() == 1
}

/// Number of monic irreducible polynomials of degree exactly `d` over the
/// field with `q` elements: `(1/d) sum_{e | d} mu(e) q^(d/e)`.
pub fn irreducible_of_degree(q: u64, d: u64) -> BigInt {
    let qb = BigInt::from(q);
    let mut acc = BigInt::zero();
    for e in (1..=d).filter(|e| d % e == 0) {
        let mu = mobius(e);
        if mu != 0 {
            let t = num_traits::pow(qb.clone(), (d / e) as usize);
            if mu > 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
    }
    acc / BigInt::from(d)
}

/// `M(q, n)`, monic irreducibles of degree at most `n`.
pub fn irreducible_count(q: u64, n: u64) -> Result<BigInt, SequenceError> {
    if !is_prime_power(q) {
        return Err(SequenceError::InvalidParams(format!("{q} is not a prime power")));
    }
    Ok((1..=n).map(|d| irreducible_of_degree(q, d)).sum())
}

pub struct IrreducibleCounts {
    q: u64,
    degree: u64,
    total: BigInt,
}

impl IrreducibleCounts {
    pub fn new(q: u64) -> Self {
        IrreducibleCounts {
            q,
            degree: 0,
            total: BigInt::zero(),
        }
    }

    pub fn decode(q: u64, r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        Ok(IrreducibleCounts {
            q,
            degree: r.u64()?,
            total: r.int()?,
        })
    }
}

impl Generator for IrreducibleCounts {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        self.degree += 1;
        self.total += irreducible_of_degree(self.q, self.degree);
        Ok(ExactScalar::from(self.total.clone()))
    }
    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.degree).int(&self.total);
    }
}
