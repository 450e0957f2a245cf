//! Rigorous comparison of n-th roots, root ratios and related bounds.
//!
//! Every comparison reduces to the sign of a form `sum c_i ln v_i`. Signs are
//! first sought with outward-rounded ball arithmetic; a `Zero` answer is only
//! produced after an exact multiplicative identity check, and near-ties fall
//! back to exact big-integer powers when those fit the configured budget.

pub mod ball;
pub mod form;
pub mod scalar;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ball::Ball;
pub use form::LogLinearForm;
pub use scalar::ExactScalar;

use scalar::big_pow;

/// Largest exact power, in bits, that `cmp_cross_power` will build.
pub const DEFAULT_EXACT_BUDGET_BITS: u64 = 1 << 28;

/// Near-ties whose exact powers stay below this size are settled exactly
/// before any precision escalation.
pub const DEFAULT_EXACT_FAST_BITS: u64 = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("exact power of {needed} bits exceeds budget of {budget} bits")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("sign undecided at {precision_reached} bits")]
    Indeterminate { precision_reached: u32 },
    #[error("value must be positive, got {0}")]
    NonPositive(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub max_bits: u32,
    pub escalation_factor: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_bits: 128,
            max_bits: 1 << 20,
            escalation_factor: 2,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(initial_bits: u32, max_bits: u32, escalation_factor: u32) -> Result<Self, KernelError> {
        if initial_bits == 0 || initial_bits > max_bits {
            return Err(KernelError::InvalidArgument(format!(
                "need 0 < initial_bits <= max_bits, got {initial_bits} and {max_bits}"
            )));
        }
        if escalation_factor < 2 {
            return Err(KernelError::InvalidArgument(
                "escalation factor must be at least 2".into(),
            ));
        }
        Ok(PrecisionPolicy {
            initial_bits,
            max_bits,
            escalation_factor,
        })
    }

    /// Working precisions tried in order, ending at `max_bits`.
    fn ladder(&self) -> impl Iterator<Item = u32> + '_ {
        let mut next = Some(self.initial_bits);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= self.max_bits {
                None
            } else {
                Some(
                    cur.saturating_mul(self.escalation_factor)
                        .min(self.max_bits),
                )
            };
            Some(cur)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignResult {
    Negative,
    Zero,
    Positive,
    Indeterminate { precision_reached: u32 },
}

impl SignResult {
    fn from_ordering(o: Ordering) -> SignResult {
        match o {
            Ordering::Less => SignResult::Negative,
            Ordering::Equal => SignResult::Zero,
            Ordering::Greater => SignResult::Positive,
        }
    }

    pub fn to_ordering(self) -> Result<Ordering, KernelError> {
        match self {
            SignResult::Negative => Ok(Ordering::Less),
            SignResult::Zero => Ok(Ordering::Equal),
            SignResult::Positive => Ok(Ordering::Greater),
            SignResult::Indeterminate { precision_reached } => {
                Err(KernelError::Indeterminate { precision_reached })
            }
        }
    }
}

/// A result together with the highest ball precision used to reach it
/// (zero when decided purely by exact arithmetic).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision<T> {
    pub value: T,
    pub precision_bits: u32,
}

/// A positive value with its logarithm cached at the policy's initial
/// precision. Scans reuse one of these across consecutive comparisons.
#[derive(Clone, Debug)]
pub struct Prepared {
    value: ExactScalar,
    ln: Ball,
}

impl Prepared {
    pub fn value(&self) -> &ExactScalar {
        &self.value
    }

    pub fn ln(&self) -> &Ball {
        &self.ln
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub policy: PrecisionPolicy,
    pub exact_budget_bits: u64,
    pub exact_fast_bits: u64,
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::new(PrecisionPolicy::default())
    }
}

impl Kernel {
    pub fn new(policy: PrecisionPolicy) -> Kernel {
        Kernel {
            policy,
            exact_budget_bits: DEFAULT_EXACT_BUDGET_BITS,
            exact_fast_bits: DEFAULT_EXACT_FAST_BITS,
        }
    }

    pub fn prepare(&self, value: &ExactScalar) -> Result<Prepared, KernelError> {
        if !value.is_positive() {
            return Err(KernelError::NonPositive(value.to_string()));
        }
        Ok(Prepared {
            ln: ball::ln_scalar(value, self.policy.initial_bits),
            value: value.clone(),
        })
    }

    /// Ordering of `a^(1/m)` against `b^(1/n)`, decided as `a^n` vs `b^m`.
    pub fn cmp_cross_power(
        &self,
        a: &ExactScalar,
        m: u64,
        b: &ExactScalar,
        n: u64,
    ) -> Result<Ordering, KernelError> {
        if !a.is_positive() {
            return Err(KernelError::NonPositive(a.to_string()));
        }
        if !b.is_positive() {
            return Err(KernelError::NonPositive(b.to_string()));
        }
        if m == 0 || n == 0 {
            return Err(KernelError::InvalidArgument("root index must be positive".into()));
        }
        let need_a = n as u128 * a.log2_bound() as u128;
        let need_b = m as u128 * b.log2_bound() as u128;
        let needed = need_a.max(need_b);
        if needed > self.exact_budget_bits as u128 {
            return Err(KernelError::BudgetExceeded {
                needed,
                budget: self.exact_budget_bits,
            });
        }
        // (p/q)^n vs (r/s)^m  <=>  p^n s^m vs r^m q^n
        let (p, q) = a.parts();
        let (r, s) = b.parts();
        let lhs = big_pow(p, n) * big_pow(s, m);
        let rhs = big_pow(r, m) * big_pow(q, n);
        Ok(lhs.cmp(&rhs))
    }

    pub fn sign_log_linear(&self, form: &LogLinearForm) -> SignResult {
        self.evaluate(form).value
    }

    pub fn evaluate(&self, form: &LogLinearForm) -> Decision<SignResult> {
        let prepared: Vec<(i128, Prepared)> = form
            .terms()
            .iter()
            .map(|(c, v)| {
                (
                    *c,
                    self.prepare(v).expect("LogLinearForm holds positive values"),
                )
            })
            .collect();
        let refs: Vec<(i128, &Prepared)> = prepared.iter().map(|(c, p)| (*c, p)).collect();
        self.evaluate_prepared(&refs)
    }

    /// Sign of `sum c_i ln v_i` using cached initial-precision logarithms.
    pub fn evaluate_prepared(&self, terms: &[(i128, &Prepared)]) -> Decision<SignResult> {
        let mut merged: Vec<(i128, &Prepared)> = Vec::with_capacity(terms.len());
        for &(c, p) in terms {
            if c == 0 || p.value == ExactScalar::one() {
                continue;
            }
            match merged.iter_mut().find(|(_, q)| q.value == p.value) {
                Some(slot) => slot.0 += c,
                None => merged.push((c, p)),
            }
        }
        merged.retain(|(c, _)| *c != 0);
        let exact = |value| Decision {
            value,
            precision_bits: 0,
        };
        if merged.is_empty() {
            return exact(SignResult::Zero);
        }

        let initial = self.policy.initial_bits;
        let mut sum = Ball::zero(initial);
        for (c, p) in &merged {
            sum = sum.add(&p.ln.scale(&BigInt::from(*c)));
        }
        if let Some(o) = sum.sign() {
            return Decision {
                value: SignResult::from_ordering(o),
                precision_bits: initial,
            };
        }

        let form = LogLinearForm::new(
            merged
                .iter()
                .map(|(c, p)| (*c, p.value.clone()))
                .collect(),
        )
        .expect("prepared values are positive");
        let cost = form.exact_cost_bits();
        if cost <= self.exact_fast_bits as u128 {
            return Decision {
                value: SignResult::from_ordering(form.exact_sign()),
                precision_bits: initial,
            };
        }

        let reduced = form.over_coprime_basis();
        if reduced.is_empty() {
            return Decision {
                value: SignResult::Zero,
                precision_bits: initial,
            };
        }

        let mut reached = initial;
        for prec in self.policy.ladder().skip(1) {
            reached = prec;
            let mut sum = Ball::zero(prec);
            for (base, e) in &reduced {
                sum = sum.add(&ball::ln_integer(base, prec).scale(e));
            }
            if let Some(o) = sum.sign() {
                return Decision {
                    value: SignResult::from_ordering(o),
                    precision_bits: prec,
                };
            }
        }
        if cost <= self.exact_budget_bits as u128 {
            return Decision {
                value: SignResult::from_ordering(form.exact_sign()),
                precision_bits: reached,
            };
        }
        Decision {
            value: SignResult::Indeterminate {
                precision_reached: reached,
            },
            precision_bits: reached,
        }
    }

    fn decide(&self, terms: &[(i128, &Prepared)]) -> Result<Decision<Ordering>, KernelError> {
        let d = self.evaluate_prepared(terms);
        Ok(Decision {
            value: d.value.to_ordering()?,
            precision_bits: d.precision_bits,
        })
    }

    /// Ordering of `a_n^(1/n)` against `a_next^(1/(n+1))`.
    pub fn root_step_cmp(
        &self,
        a_n: &ExactScalar,
        a_next: &ExactScalar,
        n: u64,
    ) -> Result<Decision<Ordering>, KernelError> {
        let (x, y) = (self.prepare(a_n)?, self.prepare(a_next)?);
        self.root_step_prepared(&x, &y, n)
    }

    pub fn root_step_prepared(
        &self,
        a_n: &Prepared,
        a_next: &Prepared,
        n: u64,
    ) -> Result<Decision<Ordering>, KernelError> {
        if n == 0 {
            return Err(KernelError::InvalidArgument("n must be >= 1".into()));
        }
        let n = n as i128;
        // (n+1) ln a_n - n ln a_{n+1} > 0  <=>  a_n^(1/n) > a_{n+1}^(1/(n+1))
        self.decide(&[(n + 1, a_n), (-n, a_next)])
    }

    /// Ordering of `r_{n+1}` against `r_n`, where
    /// `r_n = a_{n+1}^(1/(n+1)) / a_n^(1/n)`.
    pub fn ratio_step_cmp(
        &self,
        a_n: &ExactScalar,
        a_n1: &ExactScalar,
        a_n2: &ExactScalar,
        n: u64,
    ) -> Result<Decision<Ordering>, KernelError> {
        let (x, y, z) = (self.prepare(a_n)?, self.prepare(a_n1)?, self.prepare(a_n2)?);
        self.ratio_step_prepared(&x, &y, &z, n)
    }

    pub fn ratio_step_prepared(
        &self,
        a_n: &Prepared,
        a_n1: &Prepared,
        a_n2: &Prepared,
        n: u64,
    ) -> Result<Decision<Ordering>, KernelError> {
        let coeffs = ratio_coefficients(n)?;
        self.decide(&[(coeffs[0], a_n), (coeffs[1], a_n1), (coeffs[2], a_n2)])
    }

    /// Ordering of `p_{n+1}^(1/(n+1)) / p_n^(1/n)` against
    /// `1 - ln(ln n) / (2 n^2)`, both sides evaluated in ball arithmetic.
    pub fn refined_firoozbakht_cmp(
        &self,
        p_n: &ExactScalar,
        p_n1: &ExactScalar,
        n: u64,
    ) -> Result<Decision<Ordering>, KernelError> {
        if n <= 4 {
            return Err(KernelError::InvalidArgument("refined bound needs n > 4".into()));
        }
        if !p_n.is_positive() || !p_n1.is_positive() {
            return Err(KernelError::NonPositive(format!("{p_n}, {p_n1}")));
        }
        let mut reached = 0;
        for prec in self.policy.ladder() {
            reached = prec;
            if let Some(gap) = refined_gap(p_n, p_n1, n, prec) {
                if let Some(o) = gap.sign() {
                    // gap = bound - ratio (in log form, scaled by n(n+1))
                    return Ok(Decision {
                        value: o.reverse(),
                        precision_bits: prec,
                    });
                }
            }
        }
        Err(KernelError::Indeterminate {
            precision_reached: reached,
        })
    }

    /// Ordering of `(alpha + 1) * sum_alpha` against `n * p_n^alpha`.
    /// `Less` means `sum_{k<=n} p_k^alpha / n < p_n^alpha / (alpha + 1)`.
    pub fn power_mean_cmp(
        &self,
        sum_alpha: &ExactScalar,
        p_n: &ExactScalar,
        n: u64,
        alpha: u32,
    ) -> Ordering {
        let lhs = sum_alpha * &ExactScalar::from(alpha as u64 + 1);
        let rhs = &p_n.pow(alpha as u64) * &ExactScalar::from(n);
        lhs.cmp(&rhs)
    }
}

/// Coefficients of `ln a_n, ln a_{n+1}, ln a_{n+2}` in the ratio-step form.
pub fn ratio_coefficients(n: u64) -> Result<[i128; 3], KernelError> {
    if n == 0 {
        return Err(KernelError::InvalidArgument("n must be >= 1".into()));
    }
    if n > 1 << 40 {
        return Err(KernelError::InvalidArgument("n exceeds 2^40".into()));
    }
    let n = n as i128;
    Ok([(n + 1) * (n + 2), -2 * n * (n + 2), n * (n + 1)])
}

/// `n(n+1) ln(1 - lnln n / 2n^2) - [n ln p_{n+1} - (n+1) ln p_n]` as a ball.
/// Positive means the ratio lies below the bound.
fn refined_gap(p_n: &ExactScalar, p_n1: &ExactScalar, n: u64, prec: u32) -> Option<Ball> {
    let nb = BigInt::from(n);
    let ln_n = ball::ln_integer(&nb, prec);
    let lnln = ln_n.ln()?;
    let two_n2: BigInt = BigInt::from(2) * &nb * &nb;
    let x = lnln.div_int(&two_n2);
    let one_minus_x = Ball::from_integer(&BigInt::one(), prec).sub(&x);
    let bound = one_minus_x.ln()?.scale(&(&nb * (&nb + 1u32)));
    let lhs = ball::ln_scalar(p_n1, prec)
        .scale(&nb)
        .sub(&ball::ln_scalar(p_n, prec).scale(&(&nb + 1u32)));
    Some(bound.sub(&lhs))
}

/// `(1 - p_{n+1}^(1/(n+1)) / p_n^(1/n)) * n^2 / ln ln n`, evaluated at
/// `prec` bits and reported as a float. Diagnostic only.
pub fn refined_firoozbakht_margin(p_n: &ExactScalar, p_n1: &ExactScalar, n: u64, prec: u32) -> f64 {
    let nb = BigInt::from(n);
    // d = ln p_{n+1}/(n+1) - ln p_n/n, carried as n(n+1) d to keep precision
    let scaled = ball::ln_scalar(p_n1, prec)
        .scale(&nb)
        .sub(&ball::ln_scalar(p_n, prec).scale(&(&nb + 1u32)));
    let d = scaled.mid_f64() / (n as f64 * (n as f64 + 1.0));
    let one_minus_ratio = -d.exp_m1();
    let lnln = (n as f64).ln().ln();
    one_minus_ratio * (n as f64) * (n as f64) / lnln
}

/// `a^(1/m)` vs `b^(1/n)` with the default budget.
pub fn cmp_cross_power(a: &ExactScalar, m: u64, b: &ExactScalar, n: u64) -> Result<Ordering, KernelError> {
    Kernel::default().cmp_cross_power(a, m, b, n)
}

pub fn sign_log_linear(form: &LogLinearForm, policy: PrecisionPolicy) -> SignResult {
    Kernel::new(policy).sign_log_linear(form)
}

pub fn root_step_cmp(a_n: &ExactScalar, a_next: &ExactScalar, n: u64) -> Result<Ordering, KernelError> {
    Kernel::default().root_step_cmp(a_n, a_next, n).map(|d| d.value)
}

pub fn ratio_step_cmp(
    a_n: &ExactScalar,
    a_n1: &ExactScalar,
    a_n2: &ExactScalar,
    n: u64,
) -> Result<Ordering, KernelError> {
    Kernel::default()
        .ratio_step_cmp(a_n, a_n1, a_n2, n)
        .map(|d| d.value)
}

pub fn refined_firoozbakht_cmp(
    p_n: &ExactScalar,
    p_n1: &ExactScalar,
    n: u64,
    policy: PrecisionPolicy,
) -> Result<Ordering, KernelError> {
    Kernel::new(policy)
        .refined_firoozbakht_cmp(p_n, p_n1, n)
        .map(|d| d.value)
}

pub fn power_mean_cmp(sum_alpha: &ExactScalar, p_n: &ExactScalar, n: u64, alpha: u32) -> Ordering {
    Kernel::default().power_mean_cmp(sum_alpha, p_n, n, alpha)
}
