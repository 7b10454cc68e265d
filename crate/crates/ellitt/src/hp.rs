//! Configurable-precision complex arithmetic and truncation control.
//!
//! Every other module threads a [`PrecisionContext`] through its operations;
//! the context fixes the working precision (in decimal digits), the target
//! truncation error for infinite products, and the tolerances used when two
//! independently computed quantities are compared.
//!
//! Complex numbers are stored in rectangular form (MPC via the `rug` crate);
//! products accumulate directly in working precision, never in log space,
//! because the identities under test involve exact cancellations near unit
//! modulus.

use rug::ops::CompleteRound;
use rug::{Complex, Float};

/// Working complex type: arbitrary-precision rectangular complex numbers.
pub type C = Complex;

/// Evaluation mode for quadrature inner loops.
///
/// `FastDouble` is permitted only inside torus-quadrature inner loops; all
/// series identities run in `HighPrecision`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    HighPrecision,
    FastDouble,
}

/// Precision settings threaded explicitly through every computation.
///
/// Invariants: `digits >= 15`, `0 < tail_eps < 1`, `0 < rel_tol < 1`,
/// `abs_floor > 0`, and `rel_tol >= 10^(5 - digits)` so the comparison
/// tolerance is never finer than the representable precision.
#[derive(Debug, Clone)]
pub struct PrecisionContext {
    /// Decimal working precision.
    pub digits: u32,
    /// Target truncation error for infinite products.
    pub tail_eps: f64,
    /// Relative comparison tolerance.
    pub rel_tol: f64,
    /// Magnitude floor below which values are treated as zero.
    pub abs_floor: f64,
    /// Binary precision derived from `digits` (plus guard digits).
    prec: u32,
}

/// Errors raised by the numerical kernels.
#[derive(Debug, thiserror::Error)]
pub enum NumError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("evaluation hit a pole: {0}")]
    Pole(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("quadrature failed to converge: {0}")]
    NoConvergence(String),
    #[error("contour infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, NumError>;

impl PrecisionContext {
    /// Context with the given decimal precision and tolerances.
    ///
    /// # Panics
    /// Panics if the invariants listed on the type are violated; precision
    /// settings are programmer input, not data.
    pub fn new(digits: u32, tail_eps: f64, rel_tol: f64, abs_floor: f64) -> Self {
        assert!(digits >= 15, "digits must be at least 15");
        assert!(tail_eps > 0.0 && tail_eps < 1.0, "tail_eps must lie in (0,1)");
        assert!(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must lie in (0,1)");
        assert!(abs_floor > 0.0, "abs_floor must be positive");
        assert!(
            rel_tol.log10() >= 5.0 - digits as f64,
            "rel_tol finer than representable precision"
        );
        // 10 guard digits, converted to bits, rounded up to a 64-bit limb.
        let bits = (((digits + 10) as f64) * std::f64::consts::LOG2_10).ceil() as u32;
        let prec = bits.div_ceil(64) * 64;
        PrecisionContext { digits, tail_eps, rel_tol, abs_floor, prec }
    }

    /// Default context: 60 digits, tails below 1e-45, comparisons at 1e-30.
    pub fn standard() -> Self {
        PrecisionContext::new(60, 1e-45, 1e-30, 1e-40)
    }

    /// Binary working precision.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Binary working precision as the `(real, imag)` pair expected by
    /// complex incomplete-computation values.
    pub fn prec2(&self) -> (u32, u32) {
        (self.prec, self.prec)
    }

    /// Complex zero at working precision.
    pub fn zero(&self) -> C {
        Complex::new(self.prec)
    }

    /// Complex one at working precision.
    pub fn one(&self) -> C {
        Complex::with_val(self.prec, (1, 0))
    }

    /// Complex value from rectangular `f64` parts.
    pub fn c(&self, re: f64, im: f64) -> C {
        Complex::with_val(self.prec, (re, im))
    }

    /// Real value at working precision.
    pub fn f(&self, x: f64) -> Float {
        Float::with_val(self.prec, x)
    }

    /// Complex number of modulus `r` and phase `theta` (radians).
    pub fn polar(&self, r: f64, theta: f64) -> C {
        let th = Float::with_val(self.prec, theta);
        let (sin, cos) = th.sin_cos(Float::new(self.prec));
        Complex::with_val(self.prec, (&cos * r, &sin * r))
    }

    /// |x| at working precision.
    pub fn abs(&self, x: &C) -> Float {
        x.abs_ref().complete((self.prec, self.prec)).into_real_imag().0
    }

    /// True iff both magnitudes sit below `abs_floor` (treated as zero), or
    /// `|x - y| <= rel_tol * max(|x|, |y|)`.
    pub fn approx_equal(&self, x: &C, y: &C) -> bool {
        let diff = self.abs(&(x - y).complete((self.prec, self.prec)));
        let scale = self.abs(x).max(&self.abs(y));
        if scale <= self.f(self.abs_floor) {
            return true;
        }
        diff <= scale * self.f(self.rel_tol)
    }

    /// Relative difference `|x - y| / max(|x|, |y|, abs_floor)` as `f64`
    /// (zero when both magnitudes sit below `abs_floor`).
    pub fn rel_err(&self, x: &C, y: &C) -> f64 {
        let diff = self.abs(&(x - y).complete((self.prec, self.prec)));
        let mut scale = self.abs(x).max(&self.abs(y));
        if scale <= self.f(self.abs_floor) {
            return 0.0;
        }
        scale = scale.max(&self.f(self.abs_floor));
        (diff / scale).to_f64()
    }
}

/// Smallest `N` with `modulus^N / (1 - modulus) < tail_eps`, so that dropping
/// product factors of total exponent at least `N` perturbs the result by less
/// than `O(tail_eps)` in relative terms.
pub fn truncation_order(modulus: f64, tail_eps: f64) -> Result<u32> {
    if !(modulus > 0.0) || modulus >= 1.0 {
        return Err(NumError::InvalidParameter(format!(
            "truncation_order requires modulus in (0,1), got {modulus}"
        )));
    }
    if !(tail_eps > 0.0 && tail_eps < 1.0) {
        return Err(NumError::InvalidParameter(format!(
            "truncation_order requires tail_eps in (0,1), got {tail_eps}"
        )));
    }
    // Closed-form estimate, then nudge to the exact threshold (the direct
    // check below is in f64, which is ample: tails only bound dropped terms).
    let target = tail_eps * (1.0 - modulus);
    let mut n = (target.ln() / modulus.ln()).ceil().max(1.0) as u32;
    while n > 1 && modulus.powi(n as i32 - 1) < target {
        n -= 1;
    }
    while modulus.powi(n as i32) >= target {
        n += 1;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_order_pinned_values() {
        // 0.5^101 / 0.5 = 2^-100 < 1e-30 and no smaller N works
        // (0.5^100 / 0.5 = 2^-99 ~ 1.58e-30 is still too large).
        assert_eq!(truncation_order(0.5, 1e-30).unwrap(), 101);
        // 0.1 / 0.9 < 0.5 already at N = 1.
        assert_eq!(truncation_order(0.1, 0.5).unwrap(), 1);
    }

    #[test]
    fn truncation_order_matches_log_oracle() {
        // Oracle: exact log evaluation, checked over a parameter sweep.
        for &(m, eps) in &[(0.9, 1e-10), (0.3, 1e-45), (0.77, 1e-25), (0.15, 1e-40)] {
            let n = truncation_order(m, eps).unwrap();
            let target = eps * (1.0 - m);
            assert!(m.powi(n as i32) < target);
            assert!(m.powi(n as i32 - 1) >= target, "N={n} not minimal for ({m},{eps})");
        }
    }

    #[test]
    fn truncation_order_rejects_divergent_modulus() {
        assert!(truncation_order(1.0, 1e-10).is_err());
        assert!(truncation_order(1.5, 1e-10).is_err());
    }

    #[test]
    fn approx_equal_basics() {
        let ctx = PrecisionContext::standard();
        let one = ctx.one();
        assert!(ctx.approx_equal(&one, &one));

        let ctx2 = PrecisionContext::new(30, 1e-20, 1e-12, 1e-30);
        // Below the floor both values count as zero.
        assert!(ctx2.approx_equal(&ctx2.zero(), &ctx2.c(1e-40, 0.0)));
        // 2e-12 relative difference exceeds rel_tol = 1e-12.
        assert!(!ctx2.approx_equal(&ctx2.c(1.0, 0.0), &ctx2.c(1.0 + 2e-12, 0.0)));
    }

    #[test]
    fn approx_equal_symmetric_reflexive() {
        let ctx = PrecisionContext::standard();
        let xs = [ctx.c(1.25, -0.5), ctx.c(0.0, 3.0), ctx.c(-2.0, 1e-3)];
        for x in &xs {
            assert!(ctx.approx_equal(x, x));
            for y in &xs {
                assert_eq!(ctx.approx_equal(x, y), ctx.approx_equal(y, x));
            }
        }
    }
}
