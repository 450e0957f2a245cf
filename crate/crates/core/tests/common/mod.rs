#![allow(dead_code)]

pub mod dual;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use arithseq::kernel::ExactScalar;

use arithseq::sequences::{self, SequenceId};
use arithseq::verify::Property;

pub fn id(s: &str) -> SequenceId {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// One cheap instance of every sequence family.
pub const FAMILIES: &[&str] = &[
    "primes",
    "primes_in_ap[1,4]",
    "primitive_root_primes[2]",
    "primitive_root_primes[-2]",
    "proth",
    "polyform[x^2+1]",
    "hypothesis_h[x,x+2]",
    "squarefree",
    "two_square[1]",
    "partitions",
    "strict_partitions",
    "bernoulli",
    "euler",
    "harmonic[2]",
    "irreducible_count[3]",
    "lucas[3,2]",
    "fibonacci",
    "bell",
    "derangement",
    "springer",
    "tangent",
    "central_trinomial",
    "motzkin",
    "franel[3]",
    "g",
    "apery[2]",
    "schroeder",
    "domb",
    "clf",
    "prefix_sum[primes]",
];

/// Serializes after `k` terms, restores, and compares the next `more` terms
/// and the re-encoded state with an uninterrupted stream.
pub fn checkpoint_round_trip(name: &str, k: usize, more: usize) -> Result<(), String> {
    let seq = id(name);
    let mut a = sequences::open(&seq).map_err(|e| e.to_string())?;
    for _ in 0..k {
        a.next_term().map_err(|e| e.to_string())?;
    }
    let state = a.state();
    let mut b = sequences::restore(&state).map_err(|e| format!("{name}: restore: {e}"))?;
    if b.state() != state {
        return Err(format!("{name}: re-encoded state differs at k={k}"));
    }
    for _ in 0..more {
        let (x, y) = (a.next_term().map_err(|e| e.to_string())?, b.next_term().map_err(|e| e.to_string())?);
        if x != y {
            return Err(format!("{name}: term {} differs after restore at k={k}", x.index));
        }
    }
    Ok(())
}

/// Sign of `sum c_i ln v_i` from the exact products `prod v_i^c_i` vs 1.
pub fn naive_sign(terms: &[(i128, &ExactScalar)]) -> Ordering {
    let mut lhs = BigInt::one();
    let mut rhs = BigInt::one();
    for (c, v) in terms {
        let e = c.unsigned_abs() as u32;
        if *c > 0 {
            lhs *= num_traits::pow(v.numer().clone(), e as usize);
            rhs *= num_traits::pow(v.denom().clone(), e as usize);
        } else if *c < 0 {
            rhs *= num_traits::pow(v.numer().clone(), e as usize);
            lhs *= num_traits::pow(v.denom().clone(), e as usize);
        }
    }
    lhs.cmp(&rhs)
}

/// Exceptions of a root, ratio or value-ratio property computed from raw
/// powers; `values[i]` is the term with index `base + i`.
pub fn naive_exceptions(values: &[ExactScalar], base: u64, property: Property, range: (u64, u64)) -> Vec<u64> {
    let v = |n: u64| &values[(n - base) as usize];
    let mut out = Vec::new();
    for n in range.0..=range.1 {
        let c = n as i128;
        let holds = match property {
            Property::RootDecreasing => naive_sign(&[(c + 1, v(n)), (-c, v(n + 1))]) == Ordering::Greater,
            Property::RootIncreasing => naive_sign(&[(c + 1, v(n)), (-c, v(n + 1))]) == Ordering::Less,
            Property::RatioIncreasing | Property::RatioDecreasing => {
                let s = naive_sign(&[
                    ((c + 1) * (c + 2), v(n)),
                    (-2 * c * (c + 2), v(n + 1)),
                    (c * (c + 1), v(n + 2)),
                ]);
                s == if property == Property::RatioIncreasing { Ordering::Greater } else { Ordering::Less }
            }
            Property::ValueRatioIncreasing => naive_sign(&[(1, v(n)), (-2, v(n + 1)), (1, v(n + 2))]) == Ordering::Greater,
            Property::ValueRatioDecreasing => naive_sign(&[(1, v(n)), (-2, v(n + 1)), (1, v(n + 2))]) == Ordering::Less,
            other => panic!("no naive oracle for {other}"),
        };
        if !holds {
            out.push(n);
        }
    }
    out
}

pub fn first_values(name: &str, count: usize) -> Vec<ExactScalar> {
    let mut s = sequences::open(&id(name)).unwrap();
    (0..count).map(|_| s.next_term().unwrap().value).collect()
}

pub fn int_values(name: &str, count: usize) -> Vec<BigInt> {
    first_values(name, count)
        .into_iter()
        .map(|v| v.to_integer().expect("integer sequence"))
        .collect()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// `C(n,k)` for `k = 0..=n`.
pub fn pascal_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A random form: plain random terms, exact multiplicative identities, or
/// near-ties `p^(n+1)` against `q^n` with `q` close to `p^(1+1/n)`.
pub fn random_form(rng: &mut ChaCha8Rng) -> Vec<(i128, ExactScalar)> {
    match rng.gen_range(0..3) {
        0 => (0..rng.gen_range(1..5))
            .map(|_| {
                let c = rng.gen_range(-60i128..=60);
                let num = rng.gen_range(1u64..1_000_000);
                let den = if rng.gen_bool(0.3) { rng.gen_range(1u64..1000) } else { 1 };
                (c, ExactScalar::from_fraction(num, den))
            })
            .collect(),
        1 => {
            let x = rng.gen_range(2u64..500);
            let y = rng.gen_range(2u64..500);
            let (a, b) = (rng.gen_range(1u64..6), rng.gen_range(1u64..6));
            let u = &ExactScalar::from(x).pow(a) * &ExactScalar::from(y);
            let v = ExactScalar::from(x).pow(b);
            let c = rng.gen_range(1i128..20);
            // c*b ln u - c*a ln v - c*b ln y = 0, perturbed half the time
            let k = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-1i128..=1) };
            vec![(c * b as i128, u), (-(c * a as i128), v), (-(c * b as i128) + k, ExactScalar::from(y))]
        }
        _ => {
            let n = rng.gen_range(1u64..300);
            let p = rng.gen_range(2u64..100_000);
            let target = (p as f64).powf(1.0 + 1.0 / n as f64);
            let q = (target.round() as i64 + rng.gen_range(-2i64..=2)).max(1) as u64;
            vec![(n as i128 + 1, ExactScalar::from(p)), (-(n as i128), ExactScalar::from(q))]
        }
    }
}
