use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use super::primes::simple_sieve;
use super::SequenceError;

/// Univariate polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        IntPoly { coeffs }
    }

    pub fn identity() -> Self {
        IntPoly::new(vec![0, 1])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().expect("non-empty")
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs == [0, 1]
    }

    /// Exact value at `x`, or `None` on `i128` overflow.
    pub fn eval(&self, x: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(c as i128)?;
        }
        Some(acc)
    }

    /// Value modulo `m` at `x`, in `[0, m)`.
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        let m = m as i128;
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x as i128 + c as i128).rem_euclid(m);
        }
        acc as u64
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::new(vec![0]);
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as i64)
                .collect(),
        )
    }

    /// Radius beyond which the polynomial is monotone (Cauchy bound on the
    /// real roots of the derivative).
    pub fn monotone_radius(&self) -> i128 {
        let d = self.derivative();
        if d.degree() == 0 {
            return 0;
        }
        let lead = d.leading().unsigned_abs() as i128;
        let max = d.coeffs[..d.degree()]
            .iter()
            .map(|c| c.unsigned_abs() as i128)
            .max()
            .unwrap_or(0);
        1 + (max + lead - 1) / lead
    }

    pub fn content(&self) -> i64 {
        self.coeffs.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    /// Irreducibility over the integers for degree <= 3; higher degrees are
    /// only screened for content and rational roots.
    pub fn looks_irreducible(&self) -> bool {
        let d = self.degree();
        if d == 0 || self.content().abs() != 1 {
            return false;
        }
        match d {
            1 => true,
            2 => {
                let (c, b, a) = (self.coeffs[0] as i128, self.coeffs[1] as i128, self.coeffs[2] as i128);
                let disc = b * b - 4 * a * c;
                disc < 0 || !is_square_i128(disc)
            }
            _ => !self.has_rational_root(),
        }
    }

    fn has_rational_root(&self) -> bool {
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return true;
        }
        let lead = self.leading();
        let divisors = |v: i64| -> Vec<i64> {
            let v = v.unsigned_abs();
            (1..=v)
                .take_while(|d| d * d <= v)
                .filter(|d| v % d == 0)
                .flat_map(|d| [d, v / d])
                .map(|d| d as i64)
                .collect()
        };
        for p in divisors(c0) {
            for q in divisors(lead) {
                for s in [p, -p] {
                    // q^deg * f(s/q) = sum c_i s^i q^(deg-i)
                    let deg = self.degree() as u32;
                    let mut acc: i128 = 0;
                    let mut ok = true;
                    for (i, &c) in self.coeffs.iter().enumerate() {
                        let term = (s as i128)
                            .checked_pow(i as u32)
                            .and_then(|t| t.checked_mul((q as i128).checked_pow(deg - i as u32)?))
                            .and_then(|t| t.checked_mul(c as i128));
                        match term.and_then(|t| acc.checked_add(t)) {
                            Some(a) => acc = a,
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok && acc == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn is_square_i128(v: i128) -> bool {
    if v < 0 {
        return false;
    }
    let r = (v as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|x| x >= 0 && x * x == v)
}

/// A prime dividing `f_1(q) * ... * f_k(q)` for every integer `q`, searched
/// among primes up to `bound`.
pub fn fixed_prime_divisor(polys: &[IntPoly], bound: u64) -> Option<u64> {
    simple_sieve(bound).into_iter().find(|&l| {
        (0..l).all(|r| polys.iter().any(|f| f.eval_mod(r, l) == 0))
    })
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 && !(i == 0 && first) {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, 1) => {}
                _ => write!(f, "{mag}")?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| SequenceError::Parse(format!("polynomial '{s}': {why}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(bad("empty"));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1i64, &rest[1..]),
                b'-' => (-1i64, &rest[1..]),
                _ if rest.len() == text.len() => (1i64, rest),
                _ => return Err(bad("expected '+' or '-'")),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (coef, power) = match term.find('x') {
                None => (term.parse::<i64>().map_err(|_| bad("bad constant"))?, 0usize),
                Some(xpos) => {
                    let c = term[..xpos].trim_end_matches('*');
                    let c = if c.is_empty() {
                        1
                    } else {
                        c.parse::<i64>().map_err(|_| bad("bad coefficient"))?
                    };
                    let tail = &term[xpos + 1..];
                    let p = if tail.is_empty() {
                        1
                    } else if let Some(e) = tail.strip_prefix('^') {
                        e.parse::<usize>().map_err(|_| bad("bad exponent"))?
                    } else {
                        return Err(bad("unexpected text after x"));
                    };
                    if p > 32 {
                        return Err(bad("degree too large"));
                    }
                    (c, p)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] += sign * coef;
        }
        Ok(IntPoly::new(coeffs))
    }
}
