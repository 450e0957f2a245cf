//! Tangent, secant (Euler), Bernoulli and Springer numbers from integer
//! triangles, and harmonic numbers of order `m`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::state::{StateReader, StateWriter};
use super::{Generator, SequenceError};
use crate::kernel::ExactScalar;

/// Rows of the Entringer triangle `E(k, j)`: `E(0,0) = 1`, `E(k,0) = 0`,
/// `E(k,j) = E(k,j-1) + E(k-1,k-j)`. The zigzag number `A(k) = E(k,k)`
/// counts alternating permutations; odd `k` gives tangent numbers and even
/// `k` the absolute secant numbers.
#[derive(Clone, Debug)]
pub struct Entringer {
    row: Vec<BigInt>,
}

impl Entringer {
    pub fn new() -> Self {
        Entringer {
            row: vec![BigInt::one()],
        }
    }

    /// Current row index `k`.
    pub fn k(&self) -> u64 {
        self.row.len() as u64 - 1
    }

    /// `A(k)` for the current row.
    pub fn zigzag(&self) -> &BigInt {
        self.row.last().expect("non-empty")
    }

    pub fn advance(&mut self) {
        let k = self.row.len();
        let mut next = Vec::with_capacity(k + 1);
        next.push(BigInt::zero());
        for j in 1..=k {
            let v = &next[j - 1] + &self.row[k - j];
            next.push(v);
        }
        self.row = next;
    }

    fn encode(&self, w: &mut StateWriter) {
        w.ints(self.row.iter());
    }

    fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        let row = r.ints()?;
        if row.is_empty() {
            return Err(SequenceError::BadState("empty Entringer row".into()));
        }
        Ok(Entringer { row })
    }

    /// Advance to the next row of the given parity and return its zigzag number.
    fn next_with_parity(&mut self, odd: bool) -> BigInt {
        loop {
            self.advance();
            if (self.k() % 2 == 1) == odd {
                return self.zigzag().clone();
            }
        }
    }
}

/// `T(n)` for `n >= 1`: `tan x = sum T(n) x^(2n-1)/(2n-1)!`.
pub struct Tangent(Entringer);

impl Tangent {
    pub fn new() -> Self {
        Tangent(Entringer::new())
    }
    pub fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        Ok(Tangent(Entringer::decode(r)?))
    }
}

impl Generator for Tangent {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        Ok(ExactScalar::from(self.0.next_with_parity(true)))
    }
    fn encode(&self, w: &mut StateWriter) {
        self.0.encode(w);
    }
}

/// `(-1)^n E_{2n}` for `n >= 1`.
pub struct Euler(Entringer);

impl Euler {
    pub fn new() -> Self {
        Euler(Entringer::new())
    }
    pub fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        Ok(Euler(Entringer::decode(r)?))
    }
}

impl Generator for Euler {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        Ok(ExactScalar::from(self.0.next_with_parity(false)))
    }
    fn encode(&self, w: &mut StateWriter) {
        self.0.encode(w);
    }
}

/// `(-1)^(n-1) B_{2n}` for `n >= 1`, recovered from the tangent numbers via
/// `T(n) = (-1)^(n-1) 4^n (4^n - 1) B_{2n} / (2n)`.
pub struct Bernoulli {
    tangent: Entringer,
    n: u64,
}

impl Bernoulli {
    pub fn new() -> Self {
        Bernoulli {
            tangent: Entringer::new(),
            n: 0,
        }
    }
    pub fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        let n = r.u64()?;
        Ok(Bernoulli {
            tangent: Entringer::decode(r)?,
            n,
        })
    }
}

pub fn bernoulli_from_tangent(t: &BigInt, n: u64) -> ExactScalar {
    let four_n = BigInt::one() << (2 * n);
    let den = &four_n * (&four_n - 1u32);
    ExactScalar::from_fraction(t * BigInt::from(2 * n), den)
}

impl Generator for Bernoulli {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        self.n += 1;
        let t = self.tangent.next_with_parity(true);
        Ok(bernoulli_from_tangent(&t, self.n))
    }
    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.n);
        self.tangent.encode(w);
    }
}

/// `E_{2k}` modulo `m` for `k = 0..=kmax`, signs included, from the
/// Entringer triangle reduced mod `m`.
pub fn euler_numbers_mod(kmax: usize, m: &BigInt) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut row = vec![BigInt::one()];
    let mut out = vec![BigInt::one()];
    for k in 1..=2 * kmax {
        let mut next = Vec::with_capacity(k + 1);
        next.push(BigInt::zero());
        for j in 1..=k {
            let v = (&next[j - 1] + &row[k - j]).mod_floor(m);
            next.push(v);
        }
        row = next;
        if k % 2 == 0 {
            let a = row[k].clone();
            // E_{2i} = (-1)^i A(2i)
            out.push(if (k / 2) % 2 == 1 { (m - a).mod_floor(m) } else { a });
        }
    }
    out
}

/// Springer numbers `S_n`, `n >= 0`: `1/(cos x - sin x) = sum S_n x^n/n!`.
/// Writing `cos x - sin x = sqrt(2) cos(x + pi/4)`, the `n`-th derivative of
/// `sec y` is `sec y * P_n(tan y)` with `P_{n+1} = t P_n + (1 + t^2) P_n'`,
/// so `S_n = P_n(1)`.
pub struct Springer {
    poly: Vec<BigInt>,
    started: bool,
}

impl Springer {
    pub fn new() -> Self {
        Springer {
            poly: vec![BigInt::one()],
            started: false,
        }
    }
    pub fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        let started = r.u64()? == 1;
        let poly = r.ints()?;
        Ok(Springer { poly, started })
    }
}

impl Generator for Springer {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        if self.started {
            let p = &self.poly;
            let d = p.len();
            let mut next = vec![BigInt::zero(); d + 1];
            for (j, slot) in next.iter_mut().enumerate() {
                if j >= 1 && j - 1 < d {
                    *slot += &p[j - 1] * BigInt::from(j);
                }
                if j + 1 < d {
                    *slot += &p[j + 1] * BigInt::from(j + 1);
                }
            }
            while next.len() > 1 && next.last().is_some_and(Zero::is_zero) {
                next.pop();
            }
            self.poly = next;
        }
        self.started = true;
        Ok(ExactScalar::from(self.poly.iter().sum::<BigInt>()))
    }
    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.started as u64).ints(self.poly.iter());
    }
}

/// `H_n^(m) = sum_{k<=n} 1/k^m`, `n >= 1`.
pub struct Harmonic {
    m: u32,
    n: u64,
    sum: ExactScalar,
}

impl Harmonic {
    pub fn new(m: u32) -> Self {
        Harmonic {
            m,
            n: 0,
            sum: ExactScalar::zero(),
        }
    }
    pub fn decode(m: u32, r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        let n = r.u64()?;
        let sum = r.scalar()?;
        Ok(Harmonic { m, n, sum })
    }
}

impl Generator for Harmonic {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        self.n += 1;
        let den = num_traits::pow(BigInt::from(self.n), self.m as usize);
        self.sum += &ExactScalar::from_fraction(1, den);
        Ok(self.sum.clone())
    }
    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.n).scalar(&self.sum);
    }
}
