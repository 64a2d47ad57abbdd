//! Truncation policy and the adaptive-precision driver for infinite series.
//!
//! Alternating q-series with large arguments lose most of their digits to
//! cancellation: the largest term can exceed the sum by many orders of
//! magnitude. [`evaluate`] first sums in double precision, estimates the
//! rounding error from the accumulated term magnitudes, and re-runs the same
//! series in [`BigReal`] arithmetic with enough bits when the estimate is too
//! large.

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::numeric::{BigReal, Cx, CxSum, Real, C64};

/// Relative accuracy every accepted evaluation must reach.
pub const ACCURACY_TARGET: f64 = 1.0e-14;

/// Extra terms of slack in the a-priori rounding error bound.
const ERROR_BOUND_SLACK: usize = 8;

/// Truncation, tolerance and precision policy for infinite sums and products.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    /// Term-magnitude stopping threshold relative to the partial sum.
    pub rel_tol: f64,
    /// Starting working precision; 53 selects native doubles first.
    pub precision_bits: u32,
    /// Ceiling for automatic precision escalation.
    pub max_precision_bits: u32,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 512,
            rel_tol: 1e-16,
            precision_bits: 53,
            max_precision_bits: 256,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64, precision_bits: u32) -> Result<Self> {
        let ctrl = SeriesControl {
            max_terms,
            rel_tol,
            precision_bits,
            max_precision_bits: precision_bits.max(SeriesControl::default().max_precision_bits),
        };
        ctrl.validate()?;
        Ok(ctrl)
    }

    /// Fixed high working precision, no escalation beyond `bits`.
    pub fn with_bits(bits: u32) -> Self {
        SeriesControl {
            precision_bits: bits,
            max_precision_bits: bits,
            ..SeriesControl::default()
        }
    }

    pub fn max_precision(mut self, bits: u32) -> Self {
        self.max_precision_bits = bits;
        self
    }

    pub fn terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(QError::Domain("max_terms must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(QError::Domain(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.precision_bits < f64::MANTISSA_DIGITS {
            return Err(QError::Domain(format!(
                "precision_bits must be at least 53, got {}",
                self.precision_bits
            )));
        }
        if self.max_precision_bits < self.precision_bits {
            return Err(QError::Domain(
                "max_precision_bits is below precision_bits".into(),
            ));
        }
        Ok(())
    }
}

/// A summed series together with the data needed to bound its rounding error.
#[derive(Clone, Debug)]
pub struct SeriesSum<R> {
    pub value: Cx<R>,
    /// Sum of term magnitudes.
    pub magnitude: f64,
    /// Magnitude of the leading term.
    pub lead: f64,
    pub terms: usize,
}

impl<R: Real> SeriesSum<R> {
    /// Componentwise sum of two series evaluated at the same precision.
    pub(crate) fn combine(self, other: SeriesSum<R>) -> SeriesSum<R> {
        SeriesSum {
            value: self.value + other.value,
            magnitude: self.magnitude + other.magnitude,
            lead: self.lead.max(other.lead),
            terms: self.terms.max(other.terms),
        }
    }

    fn error_bound(&self) -> f64 {
        let u = self.value.re.unit_roundoff();
        (self.terms + ERROR_BOUND_SLACK) as f64 * u * self.magnitude
    }
}

/// How a series ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Termination {
    /// Infinite series; stop on the tolerance rule.
    Tolerance,
    /// All terms beyond this index vanish identically.
    AfterIndex(usize),
}

/// Sums `first, next(0, first), next(1, ..), ...`.
///
/// Stops after two consecutive terms with `|t| <= rel_tol * |partial sum|`,
/// or at the terminating index. A series whose final term ratio is not below
/// one is reported as not converged.
pub(crate) fn sum_terms<R, F>(
    what: &str,
    first: Cx<R>,
    mut next: F,
    termination: Termination,
    ctrl: &SeriesControl,
) -> Result<SeriesSum<R>>
where
    R: Real,
    F: FnMut(usize, &Cx<R>) -> Cx<R>,
{
    let zero = first.re.zero_like();
    let tol_sq = zero.lift(ctrl.rel_tol * ctrl.rel_tol);
    let mut acc = CxSum::new(&zero);
    let lead = first.abs_f64();
    let mut magnitude = 0.0;
    let mut term = first;
    let mut prev_abs = f64::NAN;
    let mut small_run = 0;
    let mut k = 0usize;
    loop {
        let term_abs = term.abs_f64();
        magnitude += term_abs;
        acc.add(term.clone());
        let terms = k + 1;
        if let Termination::AfterIndex(last) = termination {
            if k >= last {
                return Ok(SeriesSum {
                    value: acc.value(),
                    magnitude,
                    lead,
                    terms,
                });
            }
        }
        let partial = acc.value();
        if term.norm_sqr() <= tol_sq.clone() * partial.norm_sqr() {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 2 && termination == Termination::Tolerance {
            if term_abs > 0.0 && prev_abs > 0.0 && term_abs >= prev_abs {
                return Err(QError::NotConverged {
                    what: format!("{what}: term ratio is not below one"),
                    max_terms: ctrl.max_terms,
                });
            }
            return Ok(SeriesSum {
                value: partial,
                magnitude,
                lead,
                terms,
            });
        }
        if terms >= ctrl.max_terms {
            return Err(QError::NotConverged {
                what: what.to_string(),
                max_terms: ctrl.max_terms,
            });
        }
        prev_abs = term_abs;
        term = next(k, &term);
        k += 1;
    }
}

/// A series that can be evaluated at any working precision.
pub(crate) trait SeriesJob: Sync {
    fn describe(&self) -> String;
    fn run<R: Real>(&self, unit: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>>;
}

/// Result of an adaptive evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    /// Working precision that produced `value`.
    pub bits: u32,
    /// A-priori bound on the accumulated rounding error.
    pub error_bound: f64,
}

fn bits_needed(sum_err: f64, floor: f64) -> u32 {
    // bits b with 2^-b * sum_err/u <= TARGET * floor, sum_err measured at unit roundoff u = 1
    let ratio = sum_err / (ACCURACY_TARGET * floor);
    if ratio <= 1.0 {
        0
    } else {
        ratio.log2().ceil() as u32
    }
}

/// Evaluates `job`, escalating precision until the rounding error bound is
/// below [`ACCURACY_TARGET`] relative to the value.
///
/// At the precision ceiling the bound may instead be measured against the
/// leading term of the series; if even that fails the evaluation is refused
/// with [`QError::Cancellation`].
pub(crate) fn evaluate<J: SeriesJob>(job: &J, ctrl: &SeriesControl) -> Result<Evaluation> {
    ctrl.validate()?;
    let cap = ctrl.max_precision_bits.max(ctrl.precision_bits);
    let mut bits = ctrl.precision_bits;
    loop {
        let (value, bound, magnitude, lead, terms) = if bits <= f64::MANTISSA_DIGITS {
            let s = job.run(&1.0f64, ctrl)?;
            let b = s.error_bound();
            (s.value.to_c64(), b, s.magnitude, s.lead, s.terms)
        } else {
            let s = job.run(&BigReal::from_f64(1.0, bits), ctrl)?;
            let b = s.error_bound();
            (s.value.to_c64(), b, s.magnitude, s.lead, s.terms)
        };
        let size = value.norm();
        if bound <= ACCURACY_TARGET * size {
            return Ok(Evaluation {
                value,
                bits,
                error_bound: bound,
            });
        }
        let unit_err = (terms + ERROR_BOUND_SLACK) as f64 * magnitude;
        let noise = bound;
        let needed = bits_needed(unit_err, size.max(noise)) + 16;
        if bits >= cap {
            if bound <= ACCURACY_TARGET * size.max(lead) {
                return Ok(Evaluation {
                    value,
                    bits,
                    error_bound: bound,
                });
            }
            return Err(QError::Cancellation {
                what: job.describe(),
                required_bits: needed.max(bits + 1),
                max_bits: cap,
            });
        }
        let next = needed.max(bits * 2).div_ceil(32) * 32;
        bits = next.min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Geometric {
        ratio: f64,
    }

    impl SeriesJob for Geometric {
        fn describe(&self) -> String {
            "geometric".into()
        }
        fn run<R: Real>(&self, unit: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
            let r = unit.lift(self.ratio);
            sum_terms(
                "geometric",
                Cx::real(unit.one_like()),
                |_, t| t.scale(&r),
                Termination::Tolerance,
                ctrl,
            )
        }
    }

    #[test]
    fn geometric_series_converges_in_doubles() {
        let ev = evaluate(&Geometric { ratio: 0.5 }, &SeriesControl::default()).unwrap();
        assert_eq!(ev.bits, 53);
        assert!((ev.value.re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cap_on_terms_reports_non_convergence() {
        let ctrl = SeriesControl::default().terms(10);
        let err = evaluate(&Geometric { ratio: 0.9 }, &ctrl).unwrap_err();
        assert!(matches!(err, QError::NotConverged { max_terms: 10, .. }));
    }

    #[test]
    fn divergent_series_is_rejected() {
        let err = evaluate(&Geometric { ratio: 1.5 }, &SeriesControl::default()).unwrap_err();
        assert!(matches!(err, QError::NotConverged { .. }));
    }

    /// sum_k (-x)^k / k! at large x cancels catastrophically.
    struct ExpNeg {
        x: f64,
    }

    impl SeriesJob for ExpNeg {
        fn describe(&self) -> String {
            "exp(-x)".into()
        }
        fn run<R: Real>(&self, unit: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
            let x = unit.lift(-self.x);
            sum_terms(
                "exp",
                Cx::real(unit.one_like()),
                |k, t| t.scale(&(x.clone() / x.lift((k + 1) as f64))),
                Termination::Tolerance,
                ctrl,
            )
        }
    }

    #[test]
    fn cancellation_triggers_escalation() {
        let ev = evaluate(&ExpNeg { x: 30.0 }, &SeriesControl::default()).unwrap();
        assert!(ev.bits > 53);
        let want = (-30.0f64).exp();
        assert!(((ev.value.re - want) / want).abs() < 1e-13, "{:?}", ev);
    }

    #[test]
    fn cancellation_beyond_cap_is_refused() {
        let ctrl = SeriesControl::default().max_precision(64).terms(2000);
        let err = evaluate(&ExpNeg { x: 60.0 }, &ctrl).unwrap_err();
        assert!(matches!(err, QError::Cancellation { max_bits: 64, .. }));
    }

    #[test]
    fn control_validation() {
        assert!(SeriesControl::new(0, 1e-10, 53).is_err());
        assert!(SeriesControl::new(10, 1.5, 53).is_err());
        assert!(SeriesControl::new(10, 1e-10, 32).is_err());
        assert!(SeriesControl::new(10, 1e-10, 512).is_ok());
    }
}
