//! Log-space arithmetic helpers.
//!
//! Moment formulas multiply gamma functions of arguments up to a few hundred,
//! so additive terms are carried as `(sign, ln|term|)` pairs and combined with
//! a single rescaled exponentiation at the end.

/// A real number represented as `sign * exp(ln_mag)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// `+1.0`, `-1.0`, or `0.0`.
    pub sign: f64,
    /// Natural log of the magnitude; `-inf` encodes zero.
    pub ln_mag: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0.0,
        ln_mag: f64::NEG_INFINITY,
    };

    pub fn new(sign: f64, ln_mag: f64) -> Self {
        if sign == 0.0 || ln_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        SignedLog {
            sign: sign.signum(),
            ln_mag,
        }
    }

    /// Encode a finite `f64`.
    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            SignedLog {
                sign: v.signum(),
                ln_mag: v.abs().ln(),
            }
        }
    }

    pub fn value(self) -> f64 {
        self.sign * self.ln_mag.exp()
    }
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Sum of signed log-space terms, returned in the same representation.
///
/// The terms are rescaled by the largest magnitude and accumulated with
/// compensated summation, so cancellation between terms costs only the
/// unavoidable relative error of the difference itself.
pub fn signed_log_sum(terms: &[SignedLog]) -> SignedLog {
    let max_ln = terms
        .iter()
        .map(|t| t.ln_mag)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_ln == f64::NEG_INFINITY {
        return SignedLog::ZERO;
    }
    // Kahan accumulation of sign * exp(ln - max_ln).
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        if t.sign == 0.0 {
            continue;
        }
        let x = t.sign * (t.ln_mag - max_ln).exp();
        let y = x - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    if sum == 0.0 {
        return SignedLog::ZERO;
    }
    SignedLog::new(sum.signum(), max_ln + sum.abs().ln())
}
