//! Second, independent definitions of sequences that the library builds
//! from recurrences or a single sum.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{binomial, factorial, pascal_row, first_values, int_values, is_prime_trial};
use arithseq::kernel::ExactScalar;
use arithseq::sequences::combinatorial::clf_by_recurrence;

fn check<T: PartialEq + std::fmt::Display>(name: &str, got: &[T], want: &[T]) -> Result<(), String> {
    for (n, (g, w)) in got.iter().zip(want).enumerate() {
        if g != w {
            return Err(format!("{name}: term {n} is {g}, second definition gives {w}"));
        }
    }
    Ok(())
}

/// `T_n = sum C(n,2k) C(2k,k)` and `M_n = sum C(n,2k) C(2k,k)/(k+1)`.
pub fn trinomial_and_motzkin(nmax: u64) -> Result<(), String> {
    let cen: Vec<BigInt> = (0..=nmax / 2).map(|k| binomial(2 * k, k)).collect();
    let (mut t, mut m) = (Vec::new(), Vec::new());
    for n in 0..=nmax {
        let row = pascal_row(n);
        let terms = (0..=n as usize / 2).map(|k| (k, &row[2 * k] * &cen[k]));
        t.push(terms.clone().map(|(_, x)| x).sum::<BigInt>());
        m.push(terms.map(|(k, x)| x / BigInt::from(k + 1)).sum::<BigInt>());
    }
    check("central_trinomial", &int_values("central_trinomial", nmax as usize + 1), &t)?;
    check("motzkin", &int_values("motzkin", nmax as usize + 1), &m)
}

/// `S_n = sum C(n+k,2k) C(2k,k)/(k+1)`.
pub fn schroeder(nmax: u64) -> Result<(), String> {
    let cen: Vec<BigInt> = (0..=nmax).map(|k| binomial(2 * k, k)).collect();
    let s: Vec<BigInt> = (0..=nmax)
        .map(|n| {
            // C(n+k, 2k), stepped in k
            let mut c = BigInt::one();
            let mut sum = BigInt::zero();
            for k in 0..=n {
                sum += &c * &cen[k as usize] / BigInt::from(k + 1);
                c = c * BigInt::from(n + k + 1) * BigInt::from(n - k) / BigInt::from((2 * k + 1) * (2 * k + 2));
            }
            sum
        })
        .collect();
    check("schroeder", &int_values("schroeder", nmax as usize + 1), &s)
}

/// `P_n = sum C(2k,k)^2 C(2(n-k),n-k)^2 / C(n,k)`, summed as
/// `(1/n!) sum C(2k,k)^2 C(2(n-k),n-k)^2 k! (n-k)!`.
pub fn clf_first_sum(nmax: u64) -> Result<(), String> {
    let cen: Vec<BigInt> = (0..=nmax).map(|k| binomial(2 * k, k)).collect();
    let fact: Vec<BigInt> = (0..=nmax).map(factorial).collect();
    let p: Vec<BigInt> = (0..=nmax as usize)
        .map(|n| {
            let s: BigInt = (0..=n)
                .map(|k| &cen[k] * &cen[k] * &cen[n - k] * &cen[n - k] * &fact[k] * &fact[n - k])
                .sum();
            let (q, r) = s.div_rem(&fact[n]);
            assert!(r.is_zero());
            q
        })
        .collect();
    check("clf", &int_values("clf", nmax as usize + 1), &p)
}

/// The corrected three-term recurrence against the stream's sums.
pub fn clf_recurrence(count: usize) -> Result<(), String> {
    check("clf recurrence", &clf_by_recurrence(count), &int_values("clf", count))
}

/// Tangent numbers from `tan' = 1 + tan^2`: with `tan x = sum t_n x^n/n!`,
/// `t_{n+1} = sum_k C(n,k) t_k t_{n-k}` for `n >= 1` and `t_1 = 1`.
pub fn tangent(count: usize) -> Result<(), String> {
    let top = 2 * count;
    let mut t = vec![BigInt::zero(); top + 1];
    t[1] = BigInt::one();
        for n in 1..top {
        let row = pascal_row(n as u64);
        let mut s = BigInt::zero();
        for k in (1..n).step_by(2) {
            if (n - k) % 2 == 1 {
                s += &row[k] * &t[k] * &t[n - k];
            }
        }
        t[n + 1] = s;
    }
    let odd: Vec<BigInt> = (0..count).map(|i| t[2 * i + 1].clone()).collect();
    check("tangent", &int_values("tangent", count), &odd)
}

/// `(-1)^(n-1) B_{2n}` for `1 <= n <= count` from
/// `sum_{k<=m} C(m+1,k) B_k = 0`, carried as integers `B_k * L` where `L` is
/// the product of the primes up to `2 count + 1`.
pub fn bernoulli(count: usize) -> Result<(), String> {
    let top = 2 * count as u64;
    let l: BigInt = (2..=top + 1).filter(|&p| is_prime_trial(p)).map(BigInt::from).product();
    let mut b = vec![BigInt::zero(); top as usize + 1];
    b[0] = l.clone();
    b[1] = -(&l / BigInt::from(2));
    for m in (2..=top).step_by(2) {
        let row = pascal_row(m + 1);
        let mut s = &row[0] * &b[0] + &row[1] * &b[1];
        for k in (2..m).step_by(2) {
            s += &row[k as usize] * &b[k as usize];
        }
        let (q, r) = (-s).div_rem(&BigInt::from(m + 1));
        assert!(r.is_zero());
        b[m as usize] = q;
    }
    let want: Vec<ExactScalar> = (1..=count)
        .map(|n| {
            let v = BigRational::new(b[2 * n].clone(), l.clone());
            ExactScalar::from(if n % 2 == 1 { v } else { -v })
        })
        .collect();
    check("bernoulli", &first_values("bernoulli", count), &want)
}

/// `(-1)^n E_{2n}` for `1 <= n <= count` from `sum_{k even} C(m,k) E_{m-k} = 0`.
pub fn euler(count: usize) -> Result<(), String> {
    let top = 2 * count as u64;
    let mut e = vec![BigInt::zero(); top as usize + 1];
    e[0] = BigInt::one();
    for m in (2..=top).step_by(2) {
        let row = pascal_row(m);
        let mut s = BigInt::zero();
        for k in (2..=m).step_by(2) {
            s += &row[k as usize] * &e[(m - k) as usize];
        }
        e[m as usize] = -s;
    }
    let want: Vec<BigInt> = (1..=count).map(|n| e[2 * n].abs()).collect();
    check("euler", &int_values("euler", count), &want)
}

/// Springer numbers as `n!` times the coefficients of `1/(cos x - sin x)`.
pub fn springer(count: usize) -> Result<(), String> {
    let c: Vec<BigRational> = (0..count as u64)
        .map(|k| {
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            // cos contributes at even k, -sin at odd k
            let s = if k % 2 == 0 { sign } else { -sign };
            BigRational::new(BigInt::from(s), factorial(k))
        })
        .collect();
    let mut inv: Vec<BigRational> = Vec::with_capacity(count);
    for n in 0..count {
        let mut acc = if n == 0 { BigRational::one() } else { BigRational::zero() };
        for k in 1..=n {
            acc -= &c[k] * &inv[n - k];
        }
        inv.push(acc / &c[0]);
    }
    let want: Vec<BigInt> = inv
        .iter()
        .enumerate()
        .map(|(n, v)| (v * BigRational::from_integer(factorial(n as u64))).to_integer())
        .collect();
    check("springer", &int_values("springer", count), &want)
}
