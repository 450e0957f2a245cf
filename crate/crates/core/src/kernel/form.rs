use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::{big_pow, ExactScalar};
use super::KernelError;

/// `sum c_i * ln v_i` over positive exact values `v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogLinearForm {
    terms: Vec<(i128, ExactScalar)>,
}

impl LogLinearForm {
    pub fn new(terms: Vec<(i128, ExactScalar)>) -> Result<Self, KernelError> {
        if let Some((_, v)) = terms.iter().find(|(_, v)| !v.is_positive()) {
            return Err(KernelError::NonPositive(v.to_string()));
        }
        Ok(LogLinearForm { terms })
    }

    /// Convenience constructor from small integer values.
    pub fn from_ints(terms: &[(i128, u64)]) -> Result<Self, KernelError> {
        Self::new(
            terms
                .iter()
                .map(|&(c, v)| (c, ExactScalar::from(v)))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[(i128, ExactScalar)] {
        &self.terms
    }

    /// Merges repeated values and drops zero coefficients and unit values.
    pub fn simplified(&self) -> LogLinearForm {
        let mut out: Vec<(i128, ExactScalar)> = Vec::with_capacity(self.terms.len());
        for (c, v) in &self.terms {
            if *c == 0 || v == &ExactScalar::one() {
                continue;
            }
            match out.iter_mut().find(|(_, w)| w == v) {
                Some(slot) => slot.0 += c,
                None => out.push((*c, v.clone())),
            }
        }
        out.retain(|(c, _)| *c != 0);
        LogLinearForm { terms: out }
    }

    /// Upper bound on the bit length of either side of the exact product
    /// identity `prod_{c>0} v^c = prod_{c<0} v^-c`.
    pub fn exact_cost_bits(&self) -> u128 {
        let (mut pos, mut neg) = (0u128, 0u128);
        for (c, v) in &self.terms {
            let b = c.unsigned_abs().saturating_mul(2 * v.log2_bound() as u128);
            if *c > 0 {
                pos = pos.saturating_add(b);
            } else {
                neg = neg.saturating_add(b);
            }
        }
        pos.max(neg)
    }

    /// Rewrites the form over a pairwise-coprime integer basis. The result
    /// has no repeated bases, so it is identically zero exactly when the
    /// returned list is empty.
    pub fn over_coprime_basis(&self) -> Vec<(BigInt, BigInt)> {
        let mut raw: Vec<BigInt> = Vec::new();
        for (_, v) in &self.terms {
            let (n, d) = v.parts();
            for x in [n, d] {
                if !x.is_one() && !raw.contains(x) {
                    raw.push(x.clone());
                }
            }
        }
        let basis = coprime_basis(raw);
        let mut exps: Vec<BigInt> = vec![BigInt::zero(); basis.len()];
        for (c, v) in &self.terms {
            let c = BigInt::from(*c);
            let (n, d) = v.parts();
            for (i, b) in basis.iter().enumerate() {
                let en = valuation(n, b);
                let ed = valuation(d, b);
                if en != ed {
                    exps[i] += &c * BigInt::from(en as i64 - ed as i64);
                }
            }
        }
        basis
            .into_iter()
            .zip(exps)
            .filter(|(_, e)| !e.is_zero())
            .collect()
    }

    /// Exact sign via the product identity. Only call within budget.
    pub fn exact_sign(&self) -> Ordering {
        let mut lhs = BigInt::one();
        let mut rhs = BigInt::one();
        for (c, v) in &self.terms {
            let e = c.unsigned_abs() as u64;
            let (n, d) = v.parts();
            // c ln(n/d): n^c goes to the side of c, d^c to the other
            let (num_side, den_side) = if *c > 0 {
                (&mut lhs, &mut rhs)
            } else {
                (&mut rhs, &mut lhs)
            };
            *num_side *= big_pow(n, e);
            if !d.is_one() {
                *den_side *= big_pow(d, e);
            }
        }
        lhs.cmp(&rhs)
    }
}

/// Multiplicity of `b` (> 1) in `x`.
fn valuation(x: &BigInt, b: &BigInt) -> u64 {
    let mut x = x.clone();
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(b);
        if !r.is_zero() {
            return k;
        }
        x = q;
        k += 1;
    }
}

/// Refines positive integers into a pairwise-coprime set such that each
/// input is a product of powers of the set's elements.
pub fn coprime_basis(mut items: Vec<BigInt>) -> Vec<BigInt> {
    items.retain(|x| !x.is_one());
    'outer: loop {
        items.sort();
        items.dedup();
        for i in 0..items.len() {
            for j in (i + 1)..items.len() {
                let g = items[i].gcd(&items[j]);
                if !g.is_one() {
                    let a = &items[i] / &g;
                    let b = &items[j] / &g;
                    let mut next: Vec<BigInt> = items
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, x)| x.clone())
                        .collect();
                    next.extend([a, b, g].into_iter().filter(|x| !x.is_one()));
                    items = next;
                    continue 'outer;
                }
            }
        }
        return items;
    }
}
