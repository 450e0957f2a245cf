use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::sequences::combinatorial::{clf_mod, mod_inverse};
use crate::sequences::primes::is_prime_u64;
use crate::sequences::zigzag::euler_numbers_mod;
use crate::sequences::SequenceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CongruenceId {
    #[serde(rename = "CLF-8")]
    Clf8,
    #[serde(rename = "CLF-16")]
    Clf16,
}

impl fmt::Display for CongruenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CongruenceId::Clf8 => "CLF-8",
            CongruenceId::Clf16 => "CLF-16",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub prime: u64,
    pub congruence_id: CongruenceId,
    pub lhs_residue: u64,
    pub rhs_residue: u64,
    pub verdict: bool,
}

/// Checks, modulo `p^3`,
///
/// * `sum_{k<p} P_k / 8^k  = 1 + 2 (-1|p) p^2 E_{p-3}`
/// * `sum_{k<p} P_k / 16^k = (-1|p) - p^2 E_{p-3}`
///
/// where `P_k` are the Catalan-Larcombe-French numbers.
pub fn clf_euler_congruence(p: u64) -> Result<[CongruenceReport; 2], SequenceError> {
    if p % 2 == 0 || !is_prime_u64(p) {
        return Err(SequenceError::InvalidParams(format!("{p} is not an odd prime")));
    }
    if p > 1 << 20 {
        return Err(SequenceError::InvalidParams(format!("prime {p} is too large")));
    }
    let m = BigInt::from(p).pow(3);
    let clf = clf_mod(p as usize, &m).expect("(k+1)^2 is a unit mod p^3 for k < p - 1");
    let euler = euler_numbers_mod(((p - 3) / 2) as usize, &m);
    let e = euler.last().expect("at least E_0").clone();
    let legendre = if p % 4 == 1 { BigInt::one() } else { -BigInt::one() };
    let p2 = BigInt::from(p * p);

    let lhs = |base: u64| {
        let inv = mod_inverse(&BigInt::from(base), &m).expect("odd modulus");
        let mut w = BigInt::one();
        let mut s = BigInt::from(0);
        for c in &clf {
            s = (s + c * &w) % &m;
            w = (w * &inv) % &m;
        }
        s.mod_floor(&m)
    };
    let rhs8: BigInt = BigInt::one() + &legendre * &p2 * &e * 2;
    let rhs8 = rhs8.mod_floor(&m);
    let rhs16 = (&legendre - &p2 * &e).mod_floor(&m);

    let report = |id, l: BigInt, r: BigInt| CongruenceReport {
        prime: p,
        congruence_id: id,
        lhs_residue: l.to_u64().expect("below p^3"),
        rhs_residue: r.to_u64().expect("below p^3"),
        verdict: l == r,
    };
    Ok([
        report(CongruenceId::Clf8, lhs(8), rhs8),
        report(CongruenceId::Clf16, lhs(16), rhs16),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::combinatorial::clf_by_recurrence;
    use crate::sequences::zigzag::Euler;
    use crate::sequences::Generator;
    use num_rational::BigRational;

    // Exact rational evaluation, reduced mod p^3 at the end.
    fn oracle(p: u64) -> (i64, i64, i64, i64) {
        let m = BigInt::from(p).pow(3);
        let clf = clf_by_recurrence(p as usize);
        let reduce = |r: BigRational| {
            let inv = mod_inverse(r.denom(), &m).unwrap();
            (r.numer() * inv).mod_floor(&m).to_i64().unwrap()
        };
        let sum = |b: i64| {
            let mut s = BigRational::from_integer(BigInt::from(0));
            for (k, c) in clf.iter().enumerate() {
                s += BigRational::new(c.clone(), BigInt::from(b).pow(k as u32));
            }
            reduce(s)
        };
        let mut eg = Euler::new();
        let mut e = BigInt::one();
        for k in 1..=(p - 3) / 2 {
            let v = eg.next_value().unwrap().to_integer().unwrap();
            e = if k % 2 == 1 { -v } else { v };
        }
        let leg: i64 = if p % 4 == 1 { 1 } else { -1 };
        let p2 = BigInt::from(p * p);
        let r8 = reduce(BigRational::from_integer(BigInt::one() + 2 * leg * &p2 * &e));
        let r16 = reduce(BigRational::from_integer(BigInt::from(leg) - &p2 * &e));
        (sum(8), r8, sum(16), r16)
    }

    #[test]
    fn residues_at_three() {
        let [a, b] = clf_euler_congruence(3).unwrap();
        assert_eq!((a.lhs_residue, a.rhs_residue, a.verdict), (10, 10, true));
        assert_eq!((b.lhs_residue, b.rhs_residue, b.verdict), (17, 17, true));
        assert_eq!(a.congruence_id.to_string(), "CLF-8");
    }

    #[test]
    fn matches_exact_rational_oracle() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let [a, b] = clf_euler_congruence(p).unwrap();
            let (l8, r8, l16, r16) = oracle(p);
            assert_eq!((a.lhs_residue as i64, a.rhs_residue as i64), (l8, r8), "p={p}");
            assert_eq!((b.lhs_residue as i64, b.rhs_residue as i64), (l16, r16), "p={p}");
            assert!(a.verdict && b.verdict, "p={p}");
        }
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(clf_euler_congruence(2).is_err());
        assert!(clf_euler_congruence(9).is_err());
        assert!(clf_euler_congruence(1).is_err());
    }
}
