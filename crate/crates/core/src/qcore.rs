//! q-arithmetic: q-numbers, q-factorials, q-shifted factorials, the
//! generalized q-integers indexed by `alpha`, and the q-gamma function.
//!
//! Every routine is generic over [`Real`], so the same code runs in native
//! doubles and in [`crate::numeric::BigReal`] at any precision.

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::numeric::{Cx, Real, C64};
use crate::series::SeriesControl;

/// The deformation pair `(q, alpha)` with `0 < q < 1` and `alpha > -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct QParams {
    q: f64,
    alpha: f64,
}

#[derive(Deserialize)]
struct RawParams {
    q: f64,
    alpha: f64,
}

impl TryFrom<RawParams> for QParams {
    type Error = QError;
    fn try_from(raw: RawParams) -> Result<Self> {
        QParams::new(raw.q, raw.alpha)
    }
}

impl QParams {
    pub fn new(q: f64, alpha: f64) -> Result<Self> {
        check_q(&q)?;
        check_alpha(&alpha)?;
        Ok(QParams { q, alpha })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `q^(2 alpha + 1)`, the reflection weight of the difference operator.
    pub fn reflection_weight(&self) -> f64 {
        self.q.powf(2.0 * self.alpha + 1.0)
    }
}

pub(crate) fn check_q<R: Real>(q: &R) -> Result<()> {
    let qf = q.to_f64();
    if q > &q.zero_like() && q < &q.one_like() {
        Ok(())
    } else {
        Err(QError::Domain(format!("q must lie in (0, 1), got {qf}")))
    }
}

fn check_alpha<R: Real>(alpha: &R) -> Result<()> {
    if alpha > &alpha.lift(-1.0) {
        Ok(())
    } else {
        Err(QError::Domain(format!(
            "alpha must exceed -1, got {}",
            alpha.to_f64()
        )))
    }
}

/// `[x]_q = (1 - q^x) / (1 - q)`.
pub fn q_number<R: Real>(x: &R, q: &R) -> Result<R> {
    check_q(q)?;
    let one = q.one_like();
    Ok((one.clone() - q.powf(x)) / (one - q.clone()))
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial<R: Real>(n: u32, q: &R) -> Result<R> {
    check_q(q)?;
    let one = q.one_like();
    let mut acc = one.clone();
    let mut qk = one.clone();
    for _ in 0..n {
        qk = qk * q.clone();
        acc = acc * ((one.clone() - qk.clone()) / (one.clone() - q.clone()));
    }
    Ok(acc)
}

/// Finite q-shifted factorial `(a; q)_n = prod_{k<n} (1 - a q^k)`.
pub fn q_pochhammer<R: Real>(a: &R, q: &R, n: u32) -> Result<R> {
    check_q(q)?;
    Ok(pochhammer_unchecked(a, q, n))
}

pub(crate) fn pochhammer_unchecked<R: Real>(a: &R, q: &R, n: u32) -> R {
    let one = q.one_like();
    let mut acc = one.clone();
    let mut aqk = a.clone();
    for _ in 0..n {
        acc = acc * (one.clone() - aqk.clone());
        aqk = aqk * q.clone();
    }
    acc
}

/// `(a; q)_n` for complex `a`.
pub fn q_pochhammer_complex(a: C64, q: f64, n: u32) -> Result<C64> {
    check_q(&q)?;
    let mut acc = C64::new(1.0, 0.0);
    let mut aqk = a;
    for _ in 0..n {
        acc *= C64::new(1.0, 0.0) - aqk;
        aqk *= q;
    }
    Ok(acc)
}

/// `(a; q)_inf`, extended until the multiplicative update `|a q^k|` drops
/// below `ctrl.rel_tol`.
pub fn q_pochhammer_inf<R: Real>(a: &R, q: &R, ctrl: &SeriesControl) -> Result<R> {
    check_q(q)?;
    let one = q.one_like();
    let tol = q.lift(ctrl.rel_tol);
    let mut acc = one.clone();
    let mut aqk = a.clone();
    for _ in 0..ctrl.max_terms {
        if aqk.abs() < tol {
            return Ok(acc);
        }
        acc = acc * (one.clone() - aqk.clone());
        aqk = aqk * q.clone();
    }
    Err(QError::NotConverged {
        what: format!("infinite q-product (a = {:e}, q = {})", a.to_f64(), q.to_f64()),
        max_terms: ctrl.max_terms,
    })
}

/// `(a; q)_inf` for complex `a`, same stopping rule as [`q_pochhammer_inf`].
pub fn q_pochhammer_inf_complex(a: C64, q: f64, ctrl: &SeriesControl) -> Result<C64> {
    check_q(&q)?;
    let mut acc = Cx::new(1.0, 0.0);
    let mut aqk = Cx::new(a.re, a.im);
    for _ in 0..ctrl.max_terms {
        if aqk.abs_f64() < ctrl.rel_tol {
            return Ok(acc.to_c64());
        }
        acc = acc * (Cx::new(1.0, 0.0) - aqk.clone());
        aqk = aqk.scale(&q);
    }
    Err(QError::NotConverged {
        what: "infinite complex q-product".into(),
        max_terms: ctrl.max_terms,
    })
}

/// Generalized q-integer: `[2m]_{q,alpha} = [2m]_q` and
/// `[2m+1]_{q,alpha} = [2m + 2 alpha + 2]_q`.
///
/// This is the parity split under which `(q;q)_{n,alpha}` factors into
/// `(q^2;q^2)` and `(q^{2 alpha + 2};q^2)` products and `[n]_{q,-1/2} = [n]_q`.
pub fn gen_q_integer<R: Real>(n: u32, q: &R, alpha: &R) -> Result<R> {
    check_q(q)?;
    check_alpha(alpha)?;
    let index = q.lift(f64::from(n));
    if n.is_multiple_of(2) {
        q_number(&index, q)
    } else {
        let two_alpha = alpha.clone() + alpha.clone();
        q_number(&(index + two_alpha + q.one_like()), q)
    }
}

/// Generalized q-factorial `[n]_{q,alpha}! = prod_{k=1}^{n} [k]_{q,alpha}`.
pub fn gen_q_factorial<R: Real>(n: u32, q: &R, alpha: &R) -> Result<R> {
    let mut acc = q.one_like();
    for k in 1..=n {
        acc = acc * gen_q_integer(k, q, alpha)?;
    }
    if n == 0 {
        check_q(q)?;
        check_alpha(alpha)?;
    }
    Ok(acc)
}

/// Generalized q-shifted factorial `(q; q)_{n,alpha} = (1-q)^n [n]_{q,alpha}!`.
pub fn gen_q_shifted_factorial<R: Real>(n: u32, q: &R, alpha: &R) -> Result<R> {
    let fact = gen_q_factorial(n, q, alpha)?;
    let one_minus_q = q.one_like() - q.clone();
    Ok(one_minus_q.powi(n as i32) * fact)
}

/// Even/odd product rewriting of `(q; q)_{n,alpha}`:
/// `(q^2;q^2)_m (q^{2 alpha + 2};q^2)_m` for `n = 2m` and
/// `(q^2;q^2)_m (q^{2 alpha + 2};q^2)_{m+1}` for `n = 2m + 1`.
pub fn gen_q_shifted_factorial_products<R: Real>(n: u32, q: &R, alpha: &R) -> Result<R> {
    check_q(q)?;
    check_alpha(alpha)?;
    let q2 = q.clone() * q.clone();
    let shifted = q.powf(&(alpha.clone() + alpha.clone() + q.lift(2.0)));
    let m = n / 2;
    let upper = if n.is_multiple_of(2) { m } else { m + 1 };
    Ok(pochhammer_unchecked(&q2, &q2, m) * pochhammer_unchecked(&shifted, &q2, upper))
}

/// q-Gamma through the two infinite products
/// `Gamma_q(z) = (q;q)_inf / (q^z;q)_inf * (1-q)^(1-z)`.
///
/// Positive integers use the telescoped finite form `(q;q)_{z-1} / (1-q)^(z-1)`.
/// Non-positive integers are poles; other `z <= 0` are outside the supported
/// domain.
pub fn q_gamma<R: Real>(z: &R, q: &R, ctrl: &SeriesControl) -> Result<R> {
    check_q(q)?;
    let zf = z.to_f64();
    let one = q.one_like();
    let is_integer = zf.fract() == 0.0 && z.lift(zf) == *z;
    if zf <= 0.0 {
        return if is_integer {
            Err(QError::Pole(zf))
        } else {
            Err(QError::Domain(format!(
                "q-gamma is only provided for z > 0, got {zf}"
            )))
        };
    }
    let one_minus_q = one.clone() - q.clone();
    if is_integer && zf < f64::from(u32::MAX) {
        let m = zf as u32 - 1;
        return Ok(pochhammer_unchecked(q, q, m) / one_minus_q.powi(m as i32));
    }
    let top = q_pochhammer_inf(q, q, ctrl)?;
    let bottom = q_pochhammer_inf(&q.powf(z), q, ctrl)?;
    Ok(top / bottom * one_minus_q.powf(&(one - z.clone())))
}

/// Generalized q-factorial through q-gamma values in base `q^2`:
/// `[2m]_{q,alpha}! = (1+q)^{2m} Gamma(alpha+m+1) Gamma(m+1) / Gamma(alpha+1)` and
/// `[2m+1]_{q,alpha}! = (1+q)^{2m+1} Gamma(alpha+m+2) Gamma(m+1) / Gamma(alpha+1)`.
pub fn gen_q_factorial_gamma_form<R: Real>(
    n: u32,
    q: &R,
    alpha: &R,
    ctrl: &SeriesControl,
) -> Result<R> {
    check_q(q)?;
    check_alpha(alpha)?;
    let q2 = q.clone() * q.clone();
    let m = n / 2;
    let one = q.one_like();
    let shift = if n.is_multiple_of(2) { m + 1 } else { m + 2 };
    let num = q_gamma(&(alpha.clone() + q.lift(f64::from(shift))), &q2, ctrl)?
        * q_gamma(&q.lift(f64::from(m + 1)), &q2, ctrl)?;
    let den = q_gamma(&(alpha.clone() + one.clone()), &q2, ctrl)?;
    Ok((one + q.clone()).powi(n as i32) * num / den)
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + f64::from(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::BigReal;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn q_number_examples() {
        assert_eq!(q_number(&1.0, &0.5).unwrap(), 1.0);
        assert_eq!(q_number(&2.0, &0.5).unwrap(), 1.5);
        assert_eq!(q_number(&0.0, &0.5).unwrap(), 0.0);
        assert!(matches!(q_number(&1.0, &1.0), Err(QError::Domain(_))));
        assert!(q_number(&1.0, &0.0).is_err());
    }

    #[test]
    fn q_factorial_examples() {
        assert_eq!(q_factorial(0, &0.5).unwrap(), 1.0);
        assert_eq!(q_factorial(3, &0.5).unwrap(), 2.625);
        let near = q_factorial(4, &0.9999).unwrap();
        assert!(rel(near, 24.0) < 0.01);
        assert!(q_factorial(2, &1.5).is_err());
    }

    #[test]
    fn q_pochhammer_examples() {
        assert_eq!(q_pochhammer(&0.7, &0.5, 0).unwrap(), 1.0);
        assert_eq!(q_pochhammer(&0.5, &0.5, 2).unwrap(), 0.375);
        assert_eq!(q_pochhammer(&1.0, &0.5, 3).unwrap(), 0.0);
        let z = q_pochhammer_complex(C64::new(0.5, 0.0), 0.5, 2).unwrap();
        assert_eq!(z, C64::new(0.375, 0.0));
    }

    #[test]
    fn q_pochhammer_inf_examples() {
        let ctrl = SeriesControl::default();
        assert_eq!(q_pochhammer_inf(&0.0, &0.5, &ctrl).unwrap(), 1.0);
        // frozen from a 300-bit product truncated at |a q^k| < 1e-80
        let v = q_pochhammer_inf(&0.5, &0.5, &ctrl).unwrap();
        assert!(rel(v, 0.288_788_095_086_602_42) < 1e-15);
        let w = q_pochhammer_inf(&0.5, &0.5, &ctrl).unwrap();
        assert!(w > 0.0 && w < 1.0);
        let z = q_pochhammer_inf_complex(C64::new(0.5, 0.0), 0.5, &ctrl).unwrap();
        assert!(rel(z.re, 0.288_788_095_086_602_42) < 1e-15);
    }

    #[test]
    fn q_pochhammer_inf_high_precision() {
        let ctrl = SeriesControl::with_bits(200).tolerance(1e-30);
        let q = BigReal::from_f64(0.5, 200);
        let v = q_pochhammer_inf(&q, &q, &ctrl).unwrap();
        assert!(rel(v.to_f64(), 0.288_788_095_086_602_42) < 1e-16);
    }

    #[test]
    fn q_pochhammer_inf_reports_cap() {
        let ctrl = SeriesControl::default().terms(20);
        let err = q_pochhammer_inf(&0.5, &0.99, &ctrl).unwrap_err();
        assert!(matches!(err, QError::NotConverged { .. }));
    }

    #[test]
    fn gen_q_integer_examples() {
        assert_eq!(gen_q_integer(3, &0.5, &-0.5).unwrap(), 1.75);
        // even index carries no alpha shift
        assert_eq!(gen_q_integer(2, &0.5, &0.0).unwrap(), 1.5);
        assert_eq!(gen_q_integer(2, &0.5, &0.7).unwrap(), 1.5);
        // odd index: [1]_{q,alpha} = [2 alpha + 2]_q
        let odd = gen_q_integer(1, &0.5, &0.3).unwrap();
        assert!(rel(odd, q_number(&2.6, &0.5).unwrap()) < 1e-15);
        assert_eq!(gen_q_integer(0, &0.5, &-0.5).unwrap(), 0.0);
        for n in 0..12 {
            let a = gen_q_integer(n, &0.7, &-0.5).unwrap();
            let b = q_number(&f64::from(n), &0.7).unwrap();
            assert!((a - b).abs() <= 1e-15 * b.abs().max(1.0));
        }
        assert!(gen_q_integer(1, &0.5, &-1.0).is_err());
    }

    #[test]
    fn gen_q_shifted_factorial_examples() {
        assert_eq!(gen_q_shifted_factorial(0, &0.5, &0.3).unwrap(), 1.0);
        let direct = gen_q_shifted_factorial(4, &0.5, &0.25).unwrap();
        let q2 = 0.25;
        let products =
            q_pochhammer(&q2, &q2, 2).unwrap() * q_pochhammer(&0.5f64.powf(2.5), &q2, 2).unwrap();
        assert!(rel(direct, products) < 1e-14);
        let reduced = gen_q_shifted_factorial(5, &0.5, &-0.5).unwrap();
        assert!(rel(reduced, q_pochhammer(&0.5, &0.5, 5).unwrap()) < 1e-15);
    }

    #[test]
    fn q_gamma_examples() {
        let ctrl = SeriesControl::default();
        assert_eq!(q_gamma(&1.0, &0.5, &ctrl).unwrap(), 1.0);
        assert!(rel(q_gamma(&3.0, &0.5, &ctrl).unwrap(), 1.5) < 1e-15);
        let near = q_gamma(&5.0, &0.9999, &ctrl).unwrap();
        assert!(rel(near, 24.0) < 0.01);
        // frozen from the 300-bit product form
        assert!(rel(q_gamma(&2.5, &0.5, &ctrl).unwrap(), 1.190_593_625_027_527_5) < 1e-14);
        assert!(rel(q_gamma(&0.7, &0.3, &ctrl).unwrap(), 1.174_140_446_904_072) < 1e-14);
    }

    #[test]
    fn q_gamma_rejects_nonpositive() {
        let ctrl = SeriesControl::default();
        assert_eq!(q_gamma(&0.0, &0.5, &ctrl), Err(QError::Pole(0.0)));
        assert_eq!(q_gamma(&-2.0, &0.5, &ctrl), Err(QError::Pole(-2.0)));
        assert!(matches!(q_gamma(&-0.5, &0.5, &ctrl), Err(QError::Domain(_))));
    }

    #[test]
    fn gamma_form_matches_product_form() {
        let ctrl = SeriesControl::default();
        for n in 0..10 {
            for &alpha in &[-0.5, 0.0, 0.75, 2.0] {
                let a = gen_q_factorial(n, &0.6, &alpha).unwrap();
                let b = gen_q_factorial_gamma_form(n, &0.6, &alpha, &ctrl).unwrap();
                assert!(rel(a, b) < 1e-13, "n={n} alpha={alpha}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
    }

    #[test]
    fn params_validation() {
        assert!(QParams::new(0.5, 0.0).is_ok());
        assert!(QParams::new(1.0, 0.0).is_err());
        assert!(QParams::new(0.5, -1.0).is_err());
        assert!(QParams::new(f64::NAN, 0.0).is_err());
        let p: std::result::Result<QParams, _> = serde_json::from_str(r#"{"q":0.5,"alpha":-2}"#);
        assert!(p.is_err());
    }
}
