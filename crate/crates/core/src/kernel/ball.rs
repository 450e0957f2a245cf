//! Fixed-point ball arithmetic: a real number is enclosed as
//! `[mid - rad, mid + rad] * 2^-prec` with `mid`, `rad` integers and
//! `rad >= 0`. Every operation rounds outward, so the enclosure is rigorous.

use std::cell::RefCell;
use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::ExactScalar;

/// Extra working bits carried through a logarithm before rounding back.
const LN_GUARD_BITS: u32 = 48;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl Ball {
    pub fn zero(prec: u32) -> Ball {
        Ball {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_integer(v: &BigInt, prec: u32) -> Ball {
        Ball {
            mid: v << prec,
            rad: BigInt::zero(),
            prec,
        }
    }

    /// Builds a ball directly from fixed-point parts. `rad` must be >= 0.
    pub fn from_parts(mid: BigInt, rad: BigInt, prec: u32) -> Ball {
        debug_assert!(!rad.is_negative());
        Ball { mid, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> &BigInt {
        &self.rad
    }

    /// Lower endpoint in units of `2^-prec`.
    pub fn lo(&self) -> BigInt {
        &self.mid - &self.rad
    }

    /// Upper endpoint in units of `2^-prec`.
    pub fn hi(&self) -> BigInt {
        &self.mid + &self.rad
    }

    /// Sign of every point in the ball, or `None` if the ball touches zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo().is_positive() {
            Some(Ordering::Greater)
        } else if self.hi().is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.sign().is_none()
    }

    pub fn add(&self, other: &Ball) -> Ball {
        assert_eq!(self.prec, other.prec, "ball precision mismatch");
        Ball {
            mid: &self.mid + &other.mid,
            rad: &self.rad + &other.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        assert_eq!(self.prec, other.prec, "ball precision mismatch");
        Ball {
            mid: &self.mid - &other.mid,
            rad: &self.rad + &other.rad,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    /// Multiplication by an exact integer; no rounding happens.
    pub fn scale(&self, c: &BigInt) -> Ball {
        Ball {
            mid: &self.mid * c,
            rad: &self.rad * c.abs(),
            prec: self.prec,
        }
    }

    /// Division by a positive integer, rounding outward.
    pub fn div_int(&self, d: &BigInt) -> Ball {
        assert!(d.is_positive(), "division by non-positive integer");
        let mid = self.mid.div_floor(d);
        let rad = ceil_div(&self.rad, d) + 1u32;
        Ball {
            mid,
            rad,
            prec: self.prec,
        }
    }

    /// Re-expresses the ball at a lower precision, widening it to cover
    /// the truncation.
    pub fn round_to(&self, prec: u32) -> Ball {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Ball {
                mid: &self.mid << (prec - self.prec),
                rad: &self.rad << (prec - self.prec),
                prec,
            },
            Ordering::Less => {
                let s = self.prec - prec;
                Ball {
                    mid: &self.mid >> s,
                    rad: (&self.rad >> s) + 2u32,
                    prec,
                }
            }
        }
    }

    /// Smallest ball containing both arguments.
    pub fn hull(&self, other: &Ball) -> Ball {
        assert_eq!(self.prec, other.prec, "ball precision mismatch");
        let lo = self.lo().min(other.lo());
        let hi = self.hi().max(other.hi());
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let rad = &hi - &mid;
        Ball {
            mid,
            rad,
            prec: self.prec,
        }
    }

    /// Approximate midpoint as `f64` (diagnostics only).
    pub fn mid_f64(&self) -> f64 {
        fixed_to_f64(&self.mid, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        fixed_to_f64(&self.rad, self.prec)
    }

    /// Natural logarithm of every point in the ball. `None` unless the ball
    /// lies strictly inside `(0, inf)`.
    pub fn ln(&self) -> Option<Ball> {
        let lo = self.lo();
        if !lo.is_positive() {
            return None;
        }
        let a = ln_dyadic(&lo, -(self.prec as i64), self.prec);
        let b = ln_dyadic(&self.hi(), -(self.prec as i64), self.prec);
        Some(a.hull(&b))
    }
}

fn ceil_div(a: &BigInt, d: &BigInt) -> BigInt {
    -((-a).div_floor(d))
}

fn fixed_to_f64(v: &BigInt, prec: u32) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().unwrap_or(f64::NAN) * (-(prec as f64)).exp2()
    } else {
        let drop = bits - 900;
        (v >> drop).to_f64().unwrap_or(f64::NAN) * (drop as f64 - prec as f64).exp2()
    }
}

/// Sums `atanh(z)` for `z = z_fixed / 2^w`, with `|z| <= 1/3`.
///
/// Returns the truncated sum in units of `2^-w` and the number of series
/// terms used. Each term carries at most 4 units of rounding error and the
/// discarded tail is at most 3 units, so the sum is within `4 * terms + 4`
/// units of the exact value for the given `z_fixed`.
fn atanh_series(z_fixed: &BigInt, w: u32) -> (BigInt, u64) {
    let negative = z_fixed.is_negative();
    let z = z_fixed.abs();
    let z2: BigInt = (&z * &z) >> w;
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut denom = 1u64;
    while !power.is_zero() {
        sum += &power / denom;
        terms += 1;
        denom += 2;
        power = (&power * &z2) >> w;
    }
    if negative {
        sum = -sum;
    }
    (sum, terms)
}

thread_local! {
    static LN2_CACHE: RefCell<Vec<(u32, Ball)>> = const { RefCell::new(Vec::new()) };
}

/// `ln 2` at `w` fractional bits.
pub fn ln2(w: u32) -> Ball {
    if let Some(hit) = LN2_CACHE.with(|c| {
        c.borrow()
            .iter()
            .find(|(p, _)| *p == w)
            .map(|(_, b)| b.clone())
    }) {
        return hit;
    }
    let work = w + 16;
    // ln 2 = 2 atanh(1/3); the input 1/3 is truncated by < 1 unit and
    // d/dz 2 atanh(z) <= 9/4 at z = 1/3.
    let third = (BigInt::one() << work) / 3u32;
    let (s, terms) = atanh_series(&third, work);
    let mid = s << 1u32;
    let rad = BigInt::from(8 * terms + 16);
    let ball = Ball::from_parts(mid, rad, work).round_to(w);
    LN2_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= 8 {
            c.remove(0);
        }
        c.push((w, ball.clone()));
    });
    ball
}

/// Natural logarithm of the positive dyadic `m * 2^exp2` at `prec` bits.
pub fn ln_dyadic(m: &BigInt, exp2: i64, prec: u32) -> Ball {
    assert!(m.is_positive(), "logarithm of non-positive value");
    let bits = m.bits() as i64;
    // m * 2^exp2 = 2^k * y with y in [1, 2)
    let mut k = bits - 1 + exp2;
    let kbits = 64 - (k.unsigned_abs() + 1).leading_zeros();
    let w = prec + LN_GUARD_BITS + kbits;
    let shift = w as i64 - (bits - 1);
    let (y, inexact) = if shift >= 0 {
        (m << (shift as u64), false)
    } else {
        let s = (-shift) as u64;
        let y = m >> s;
        let dropped = m - (&y << s);
        (y, !dropped.is_zero())
    };
    let mut unit = BigInt::one() << w;
    // Move y into [1/sqrt(2), sqrt(2)] so the atanh argument stays small.
    if &y * &y > (&unit * &unit) << 1u32 {
        k += 1;
        unit <<= 1u32;
    }
    // z = (y - 1) / (y + 1), truncated towards -inf at w bits.
    let z = ((&y - &unit) << w).div_floor(&(&y + &unit));
    let (s, terms) = atanh_series(&z, w);
    let mut mid = s << 1u32;
    // series (2 * (4t + 4)), z rounding (3), y truncation (4)
    let mut rad = BigInt::from(8 * terms + 8 + 3 + if inexact { 4 } else { 0 });
    if k != 0 {
        let l2 = ln2(w);
        let kb = BigInt::from(k);
        mid += l2.mid() * &kb;
        rad += l2.rad() * kb.abs();
    }
    Ball::from_parts(mid, rad, w).round_to(prec)
}

/// Natural logarithm of a positive exact integer.
pub fn ln_integer(v: &BigInt, prec: u32) -> Ball {
    ln_dyadic(v, 0, prec)
}

/// Natural logarithm of a positive exact scalar.
pub fn ln_scalar(v: &ExactScalar, prec: u32) -> Ball {
    let (n, d) = v.parts();
    let ln_n = ln_integer(n, prec);
    if d.is_one() {
        ln_n
    } else {
        ln_n.sub(&ln_integer(d, prec))
    }
}
