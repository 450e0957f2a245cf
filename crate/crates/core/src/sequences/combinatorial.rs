//! Combinatorial families: Lucas sequences, Bell and derangement numbers,
//! three-term recurrences (central trinomial, Motzkin), and binomial sums
//! (Franel, `g_n`, Apery, Schroeder, Domb, Catalan-Larcombe-French).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::state::{StateReader, StateWriter};
use super::{Generator, SequenceError};
use crate::kernel::ExactScalar;

/// `u_0 = 0, u_1 = 1, u_{n+1} = A u_n - B u_{n-1}`.
pub struct Lucas {
    a: BigInt,
    b: BigInt,
    prev: BigInt,
    cur: BigInt,
    n: u64,
}

impl Lucas {
    pub fn validate(a: i64, b: i64) -> Result<(), SequenceError> {
        if (a, b) == (1, -1) {
            return Ok(());
        }
        let ok = a > 1 && b != 0 && (a as i128) * (a as i128) > 4 * b as i128 && (a > 2 || b >= -9);
        if ok {
            Ok(())
        } else {
            Err(SequenceError::InvalidParams(format!(
                "lucas[{a},{b}] needs A > 1, B != 0, A^2 > 4B and (A > 2 or B >= -9)"
            )))
        }
    }

    pub fn new(a: i64, b: i64) -> Self {
        Lucas {
            a: a.into(),
            b: b.into(),
            prev: BigInt::zero(),
            cur: BigInt::zero(),
            n: 0,
        }
    }

    pub fn decode(a: i64, b: i64, r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        let mut l = Lucas::new(a, b);
        l.n = r.u64()?;
        l.prev = r.int()?;
        l.cur = r.int()?;
        Ok(l)
    }
}

impl Generator for Lucas {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        let v = match self.n {
            0 => BigInt::zero(),
            1 => BigInt::one(),
            _ => &self.a * &self.cur - &self.b * &self.prev,
        };
        self.n += 1;
        self.prev = std::mem::replace(&mut self.cur, v.clone());
        Ok(v.into())
    }
    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.n).int(&self.prev).int(&self.cur);
    }
}

/// Bell numbers from the Bell triangle: each row starts with the last entry
/// of the previous row, and `B_n` is the first entry of row `n`.
pub struct Bell {
    row: Vec<BigInt>,
}

impl Bell {
    pub fn new() -> Self {
        Bell { row: Vec::new() }
    }
    pub fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        Ok(Bell { row: r.ints()? })
    }
}

impl Generator for Bell {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        if self.row.is_empty() {
            self.row.push(BigInt::one());
        } else {
            let mut next = Vec::with_capacity(self.row.len() + 1);
            next.push(self.row.last().expect("non-empty").clone());
            for x in &self.row {
                let v = next.last().expect("non-empty") + x;
                next.push(v);
            }
            self.row = next;
        }
        Ok(self.row[0].clone().into())
    }
    fn encode(&self, w: &mut StateWriter) {
        w.ints(self.row.iter());
    }
}

/// `D_0 = 1`, `D_n = n D_{n-1} + (-1)^n`.
pub struct Derangement {
    n: u64,
    cur: BigInt,
}

impl Derangement {
    pub fn new() -> Self {
        Derangement {
            n: 0,
            cur: BigInt::zero(),
        }
    }
    pub fn decode(r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        Ok(Derangement {
            n: r.u64()?,
            cur: r.int()?,
        })
    }
}

impl Generator for Derangement {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        self.cur = if self.n == 0 {
            BigInt::one()
        } else {
            let sign = if self.n % 2 == 0 { 1 } else { -1 };
            &self.cur * BigInt::from(self.n) + sign
        };
        self.n += 1;
        Ok(self.cur.clone().into())
    }
    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.n).int(&self.cur);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeTerm {
    /// `(n+1) T_{n+1} = (2n+1) T_n + 3n T_{n-1}`
    CentralTrinomial,
    /// `(n+3) M_{n+1} = (2n+3) M_n + 3n M_{n-1}`
    Motzkin,
}

/// Families with `a_0 = a_1 = 1` and a three-term holonomic recurrence.
pub struct ThreeTermRecurrence {
    kind: ThreeTerm,
    n: u64,
    prev: BigInt,
    cur: BigInt,
}

impl ThreeTermRecurrence {
    pub fn new(kind: ThreeTerm) -> Self {
        ThreeTermRecurrence {
            kind,
            n: 0,
            prev: BigInt::zero(),
            cur: BigInt::zero(),
        }
    }
    pub fn decode(kind: ThreeTerm, r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        let mut g = ThreeTermRecurrence::new(kind);
        g.n = r.u64()?;
        g.prev = r.int()?;
        g.cur = r.int()?;
        Ok(g)
    }
}

impl Generator for ThreeTermRecurrence {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        let v = if self.n < 2 {
            BigInt::one()
        } else {
            // produce a_{m+1} from a_m, a_{m-1}
            let m = BigInt::from(self.n - 1);
            let (lead, mid) = match self.kind {
                ThreeTerm::CentralTrinomial => (&m + 1, &m * 2 + 1),
                ThreeTerm::Motzkin => (&m + 3, &m * 2 + 3),
            };
            let num: BigInt = mid * &self.cur + m * 3 * &self.prev;
            debug_assert!(num.is_multiple_of(&lead));
            num / lead
        };
        self.n += 1;
        self.prev = std::mem::replace(&mut self.cur, v.clone());
        Ok(v.into())
    }
    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.n).int(&self.prev).int(&self.cur);
    }
}

/// Row `C(n, 0..=n)`.
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// `C(n+k, k)` for `k = 0..=n`.
fn upper_binomials(n: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n + k + 1) / BigInt::from(k + 1);
        out.push(c.clone());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinomialSum {
    /// `sum C(n,k)^r`
    Franel(u32),
    /// `sum C(n,k)^2 C(2k,k)`
    G,
    /// `sum C(n,k)^r C(n+k,k)^r`
    Apery(u32),
    /// `sum C(n,k) C(n+k,k) / (k+1)`
    Schroeder,
    /// `sum C(n,k)^2 C(2k,k) C(2(n-k),n-k)`
    Domb,
    /// `2^n sum C(n,2k) C(2k,k)^2 4^(n-2k)`
    Clf,
}

pub struct BinomialSums {
    kind: BinomialSum,
    n: u64,
    central: Vec<BigInt>,
}

impl BinomialSums {
    pub fn new(kind: BinomialSum) -> Self {
        BinomialSums {
            kind,
            n: 0,
            central: vec![BigInt::one()],
        }
    }

    pub fn decode(kind: BinomialSum, r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        let mut g = BinomialSums::new(kind);
        g.n = r.u64()?;
        Ok(g)
    }

    /// `C(2k,k)` for `k <= upto`.
    fn central_upto(&mut self, upto: u64) -> &[BigInt] {
        while (self.central.len() as u64) <= upto {
            let k = self.central.len() as u64;
            let prev = &self.central[k as usize - 1];
            // C(2k,k) = C(2k-2,k-1) * 2(2k-1)/k
            let v = prev * BigInt::from(2 * (2 * k - 1)) / BigInt::from(k);
            self.central.push(v);
        }
        &self.central
    }

    pub fn term(&mut self, n: u64) -> BigInt {
        let row = binomial_row(n);
        match self.kind {
            BinomialSum::Franel(r) => row.iter().map(|c| num_traits::pow(c.clone(), r as usize)).sum(),
            BinomialSum::G => {
                let cen = self.central_upto(n);
                row.iter().zip(cen).map(|(c, b)| c * c * b).sum()
            }
            BinomialSum::Apery(r) => {
                let up = upper_binomials(n);
                row.iter()
                    .zip(&up)
                    .map(|(c, u)| num_traits::pow(c * u, r as usize))
                    .sum()
            }
            BinomialSum::Schroeder => {
                let up = upper_binomials(n);
                row.iter()
                    .zip(&up)
                    .enumerate()
                    .map(|(k, (c, u))| c * u / BigInt::from(k + 1))
                    .sum()
            }
            BinomialSum::Domb => {
                let cen = self.central_upto(n).to_vec();
                (0..=n as usize)
                    .map(|k| &row[k] * &row[k] * &cen[k] * &cen[n as usize - k])
                    .sum()
            }
            BinomialSum::Clf => {
                let cen = self.central_upto(n / 2).to_vec();
                let s: BigInt = (0..=n as usize / 2)
                    .map(|k| &row[2 * k] * &cen[k] * &cen[k] << (2 * (n as usize - 2 * k)))
                    .sum();
                s << n as usize
            }
        }
    }
}

impl Generator for BinomialSums {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        let v = self.term(self.n);
        self.n += 1;
        Ok(v.into())
    }
    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.n);
    }
}

/// CLF numbers by the three-term recurrence
/// `(n+1)^2 P_{n+1} = (24n(n+1) + 8) P_n - 128 n^2 P_{n-1}`.
pub fn clf_by_recurrence(count: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::one(), BigInt::from(8)];
    while p.len() < count {
        let n = p.len() as u64 - 1;
        let nb = BigInt::from(n);
        let num: BigInt = (&nb * (&nb + 1) * 24 + 8) * &p[n as usize] - &nb * &nb * 128 * &p[n as usize - 1];
        let den = (&nb + 1) * (&nb + 1);
        debug_assert!(num.is_multiple_of(&den));
        p.push(num / den);
    }
    p.truncate(count);
    p
}

/// `P_n` modulo `m` for `n < count`, by the recurrence with modular
/// division; requires `gcd(n+1, m) = 1` for every step, which holds for
/// `m = p^3` when `count <= p`.
pub fn clf_mod(count: usize, m: &BigInt) -> Option<Vec<BigInt>> {
    let mut p = vec![BigInt::one().mod_floor(m), BigInt::from(8).mod_floor(m)];
    while p.len() < count {
        let n = p.len() as u64 - 1;
        let nb = BigInt::from(n);
        let num: BigInt = (&nb * (&nb + 1) * 24 + 8) * &p[n as usize] - &nb * &nb * 128 * &p[n as usize - 1];
        let den = (&nb + 1) * (&nb + 1);
        let inv = mod_inverse(&den, m)?;
        p.push((num * inv).mod_floor(m));
    }
    p.truncate(count);
    Some(p)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn take(g: &mut dyn Generator, n: usize) -> Vec<BigInt> {
        (0..n).map(|_| g.next_value().unwrap().to_integer().unwrap()).collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lucas_values_and_validation() {
        let f = take(&mut Lucas::new(1, -1), 11);
        assert_eq!(f[10], BigInt::from(55));
        assert_eq!(take(&mut Lucas::new(2, -1), 6), big(&[0, 1, 2, 5, 12, 29]));
        assert!(Lucas::validate(1, -1).is_ok());
        assert!(Lucas::validate(2, 1).is_err());
        assert!(Lucas::validate(2, -10).is_err());
        assert!(Lucas::validate(3, -10).is_ok());
        assert!(Lucas::validate(3, 0).is_err());
        let u = take(&mut Lucas::new(5, 6), 40);
        assert!(u.windows(2).skip(1).all(|w| w[0] < w[1]));
    }

    fn set_partitions(n: usize) -> u64 {
        // restricted growth strings
        fn go(i: usize, n: usize, max: usize) -> u64 {
            if i == n {
                return 1;
            }
            (0..=max + 1).map(|b| go(i + 1, n, max.max(b))).sum()
        }
        if n == 0 {
            1
        } else {
            go(1, n, 0)
        }
    }

    fn derangements(n: usize) -> u64 {
        fn go(i: usize, n: usize, used: &mut Vec<bool>) -> u64 {
            if i == n {
                return 1;
            }
            let mut c = 0;
            for j in 0..n {
                if j != i && !used[j] {
                    used[j] = true;
                    c += go(i + 1, n, used);
                    used[j] = false;
                }
            }
            c
        }
        go(0, n, &mut vec![false; n])
    }

    #[test]
    fn bell_and_derangements_match_brute_force() {
        let b = take(&mut Bell::new(), 9);
        assert_eq!(&b[..7], &big(&[1, 1, 2, 5, 15, 52, 203])[..]);
        for (n, v) in b.iter().enumerate() {
            assert_eq!(*v, BigInt::from(set_partitions(n)));
        }
        let d = take(&mut Derangement::new(), 8);
        for (n, v) in d.iter().enumerate() {
            assert_eq!(*v, BigInt::from(derangements(n)), "D_{n}");
        }
        assert_eq!(d[4], BigInt::from(9));
    }

    #[test]
    fn three_term_recurrences_match_binomial_sums() {
        let t = take(&mut ThreeTermRecurrence::new(ThreeTerm::CentralTrinomial), 501);
        let m = take(&mut ThreeTermRecurrence::new(ThreeTerm::Motzkin), 501);
        assert_eq!(&t[..6], &big(&[1, 1, 3, 7, 19, 51])[..]);
        assert_eq!(&m[..6], &big(&[1, 1, 2, 4, 9, 21])[..]);
        let mut cen = vec![BigInt::one()];
        for k in 1..=250u64 {
            let v = &cen[k as usize - 1] * BigInt::from(2 * (2 * k - 1)) / BigInt::from(k);
            cen.push(v);
        }
        for n in 0..=500u64 {
            let row = binomial_row(n);
            let mut tn = BigInt::zero();
            let mut mn = BigInt::zero();
            for k in 0..=(n / 2) as usize {
                let base = &row[2 * k] * &cen[k];
                mn += &base / BigInt::from(k + 1);
                tn += base;
            }
            assert_eq!(t[n as usize], tn, "T_{n}");
            assert_eq!(m[n as usize], mn, "M_{n}");
        }
    }

    #[test]
    fn binomial_sum_spot_values() {
        let t = |k, n| take(&mut BinomialSums::new(k), n);
        assert_eq!(t(BinomialSum::Franel(3), 5), big(&[1, 2, 10, 56, 346]));
        assert_eq!(t(BinomialSum::Franel(2), 5), big(&[1, 2, 6, 20, 70]));
        assert_eq!(t(BinomialSum::Apery(2), 4), big(&[1, 5, 73, 1445]));
        assert_eq!(t(BinomialSum::Apery(1), 5), big(&[1, 3, 13, 63, 321]));
        assert_eq!(t(BinomialSum::Schroeder, 5), big(&[1, 2, 6, 22, 90]));
        assert_eq!(t(BinomialSum::Domb, 5), big(&[1, 4, 28, 256, 2716]));
        assert_eq!(t(BinomialSum::G, 3), big(&[1, 3, 15]));
        assert_eq!(t(BinomialSum::Clf, 4), big(&[1, 8, 80, 896]));
    }

    #[test]
    fn schroeder_second_form() {
        let s = take(&mut BinomialSums::new(BinomialSum::Schroeder), 301);
        for n in 0..=300u64 {
            let mut acc = BigInt::zero();
            for k in 0..=n {
                let c1 = &binomial_row(n + k)[2 * k as usize];
                let c2 = &binomial_row(2 * k)[k as usize];
                acc += c1 * c2 / BigInt::from(k + 1);
            }
            assert_eq!(s[n as usize], acc, "S_{n}");
        }
    }

    /// First defining sum: sum_k C(2k,k)^2 C(2(n-k),n-k)^2 / C(n,k).
    fn clf_first_sum(n: u64) -> BigInt {
        let row = binomial_row(n);
        let cen = |k: u64| binomial_row(2 * k)[k as usize].clone();
        let mut num = num_rational::BigRational::zero();
        for k in 0..=n {
            let a = cen(k);
            let b = cen(n - k);
            num += num_rational::BigRational::new(&a * &a * &b * &b, row[k as usize].clone());
        }
        assert!(num.is_integer());
        num.to_integer()
    }

    #[test]
    fn clf_recurrence_agrees_with_both_sums() {
        let rec = clf_by_recurrence(101);
        let sums = take(&mut BinomialSums::new(BinomialSum::Clf), 101);
        assert_eq!(rec, sums);
        for n in 0..=100u64 {
            assert_eq!(clf_first_sum(n), sums[n as usize], "P_{n}");
        }
    }

    #[test]
    fn clf_printed_recurrence_is_inconsistent() {
        // (n+1) P_{n+1} = (24n(n+1)+8) P_n - 128 n^2 P_{n-1} at n = 1
        let p2 = (BigInt::from(56) * 8 - 128) / 2;
        assert_eq!(p2, BigInt::from(160));
        assert_ne!(p2, clf_by_recurrence(3)[2]);
    }

    #[test]
    fn clf_modular_recurrence() {
        let m = BigInt::from(7 * 7 * 7);
        let exact = clf_by_recurrence(7);
        let modded = clf_mod(7, &m).unwrap();
        use num_integer::Integer;
        for k in 0..7 {
            assert_eq!(modded[k], exact[k].mod_floor(&m));
        }
    }
}
