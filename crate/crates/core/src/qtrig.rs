//! Generalized q²-cosine, q²-sine and q²-exponential.
//!
//! With `c_k = q^{k(k+1)} / ((q^{2α+2};q²)_k (q²;q²)_k)` and
//! `s_k = q^{k(k+1)} / ((q^{2α+2};q²)_{k+1} (q²;q²)_k)`:
//!
//! ```text
//! cos_α(x) = Σ (-1)^k c_k x^{2k}
//! sin_α(x) = Σ (-1)^k s_k x^{2k+1}
//! e_α(x)   = cos_α(-ix) + i sin_α(-ix)
//! ```
//!
//! At α = -1/2 these are the classical q²-trigonometric functions.

use crate::error::Result;
use crate::numeric::{Cx, Real, C64};
use crate::qcore::QParams;
use crate::series::{evaluate, sum_terms, Evaluation, SeriesControl, SeriesJob, SeriesSum, Termination};

/// One pair of series coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigCoefficient {
    pub k: usize,
    pub c_k: f64,
    pub s_k: f64,
}

/// Iterator over `(k, c_k, s_k)` built by the two-term recurrences.
#[derive(Debug, Clone)]
pub struct TrigCoefficients {
    q2: f64,
    qa: f64,
    q2k: f64,
    c: f64,
    s: f64,
    k: usize,
}

impl TrigCoefficients {
    pub fn new(params: &QParams) -> Self {
        let q = params.q();
        let qa = q.powf(2.0 * params.alpha() + 2.0);
        TrigCoefficients {
            q2: q * q,
            qa,
            q2k: 1.0,
            c: 1.0,
            s: 1.0 / (1.0 - qa),
            k: 0,
        }
    }
}

impl Iterator for TrigCoefficients {
    type Item = TrigCoefficient;

    fn next(&mut self) -> Option<TrigCoefficient> {
        let out = TrigCoefficient {
            k: self.k,
            c_k: self.c,
            s_k: self.s,
        };
        let q2k1 = self.q2k * self.q2;
        self.c *= q2k1 / ((1.0 - self.qa * self.q2k) * (1.0 - q2k1));
        self.s *= q2k1 / ((1.0 - self.qa * q2k1) * (1.0 - q2k1));
        self.q2k = q2k1;
        self.k += 1;
        Some(out)
    }
}

/// A real argument `sign · [(1-q)] · q^exponent`, formed exactly at the
/// working precision instead of being rounded to a double first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeArg {
    pub negative: bool,
    pub exponent: i32,
    pub one_minus_q: bool,
}

impl LatticeArg {
    /// `(1-q) q^exponent`.
    pub fn scaled(exponent: i32) -> Self {
        LatticeArg {
            negative: false,
            exponent,
            one_minus_q: true,
        }
    }

    /// `q^exponent`.
    pub fn plain(exponent: i32) -> Self {
        LatticeArg {
            negative: false,
            exponent,
            one_minus_q: false,
        }
    }

    pub fn negated(self) -> Self {
        LatticeArg {
            negative: !self.negative,
            ..self
        }
    }

    pub fn value(&self, q: f64) -> f64 {
        self.lift(&1.0, &q)
    }

    fn lift<R: Real>(&self, unit: &R, q: &R) -> R {
        let mut v = q.powi(self.exponent);
        if self.one_minus_q {
            v = v * (unit.one_like() - q.clone());
        }
        if self.negative {
            -v
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Arg {
    Point(C64),
    Lattice(LatticeArg),
}

impl Arg {
    fn lift<R: Real>(&self, unit: &R, q: &R) -> Cx<R> {
        match self {
            Arg::Point(z) => Cx::lift(unit, *z),
            Arg::Lattice(l) => Cx::real(l.lift(unit, q)),
        }
    }

    fn is_real(&self) -> bool {
        match self {
            Arg::Point(z) => z.im == 0.0,
            Arg::Lattice(_) => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Cos,
    CosM1,
    Sin,
    Exp,
}

struct TrigJob {
    kind: Kind,
    arg: Arg,
    q: f64,
    alpha: f64,
}

impl SeriesJob for TrigJob {
    fn describe(&self) -> String {
        let name = match self.kind {
            Kind::Cos => "cos",
            Kind::CosM1 => "cosm1",
            Kind::Sin => "sin",
            Kind::Exp => "e",
        };
        let x = match self.arg {
            Arg::Point(z) => z,
            Arg::Lattice(l) => C64::new(l.value(self.q), 0.0),
        };
        format!("{name}_alpha(x = {x}; q = {}, alpha = {})", self.q, self.alpha)
    }

    fn run<R: Real>(&self, unit: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
        let q = unit.lift(self.q);
        let alpha = unit.lift(self.alpha);
        let x = self.arg.lift(unit, &q);
        match self.kind {
            Kind::Cos => cos_alpha_in(&x, &q, &alpha, ctrl),
            Kind::CosM1 => cosm1_alpha_in(&x, &q, &alpha, ctrl),
            Kind::Sin => sin_alpha_in(&x, &q, &alpha, ctrl),
            Kind::Exp => exp_alpha_in(&x, &q, &alpha, ctrl),
        }
    }
}

fn shifted_base<R: Real>(q: &R, alpha: &R) -> R {
    let two = q.lift(2.0);
    q.powf(&(two * alpha.clone() + q.lift(2.0)))
}

/// `Σ (-1)^k c_k x^{2k}` at the precision of `q`.
pub fn cos_alpha_in<R: Real>(x: &Cx<R>, q: &R, alpha: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
    cos_series(x, q, alpha, ctrl, false)
}

/// `cos_α(x) - 1`, summed from `k = 1` so small arguments keep full
/// relative accuracy.
pub fn cosm1_alpha_in<R: Real>(x: &Cx<R>, q: &R, alpha: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
    cos_series(x, q, alpha, ctrl, true)
}

fn cos_series<R: Real>(
    x: &Cx<R>,
    q: &R,
    alpha: &R,
    ctrl: &SeriesControl,
    skip_constant: bool,
) -> Result<SeriesSum<R>> {
    let one = q.one_like();
    let q2 = q.clone() * q.clone();
    let qa = shifted_base(q, alpha);
    let neg_x2 = -(x.clone() * x.clone());
    let mut q2k = one.clone();
    let mut first = Cx::real(one.clone());
    if skip_constant {
        // c_1 = q^2 / ((1 - q^{2α+2})(1 - q^2))
        let c1 = q2.clone() / ((one.clone() - qa.clone()) * (one.clone() - q2.clone()));
        first = neg_x2.scale(&c1);
        q2k = q2.clone();
    }
    sum_terms(
        "generalized q-cosine series",
        first,
        move |_, t| {
            let q2k1 = q2k.clone() * q2.clone();
            let r = q2k1.clone() / ((one.clone() - qa.clone() * q2k.clone()) * (one.clone() - q2k1.clone()));
            q2k = q2k1;
            (t.clone() * neg_x2.clone()).scale(&r)
        },
        Termination::Tolerance,
        ctrl,
    )
}

/// `Σ (-1)^k s_k x^{2k+1}` at the precision of `q`.
pub fn sin_alpha_in<R: Real>(x: &Cx<R>, q: &R, alpha: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
    let one = q.one_like();
    let q2 = q.clone() * q.clone();
    let qa = shifted_base(q, alpha);
    let neg_x2 = -(x.clone() * x.clone());
    let s0 = one.clone() / (one.clone() - qa.clone());
    let mut q2k = one.clone();
    sum_terms(
        "generalized q-sine series",
        x.scale(&s0),
        move |_, t| {
            let q2k1 = q2k.clone() * q2.clone();
            let r = q2k1.clone() / ((one.clone() - qa.clone() * q2k1.clone()) * (one.clone() - q2k1.clone()));
            q2k = q2k1;
            (t.clone() * neg_x2.clone()).scale(&r)
        },
        Termination::Tolerance,
        ctrl,
    )
}

/// `cos_α(-ix) + i sin_α(-ix)` at the precision of `q`.
pub fn exp_alpha_in<R: Real>(x: &Cx<R>, q: &R, alpha: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
    let minus_ix = -x.mul_i();
    let c = cos_alpha_in(&minus_ix, q, alpha, ctrl)?;
    let mut s = sin_alpha_in(&minus_ix, q, alpha, ctrl)?;
    s.value = s.value.mul_i();
    Ok(c.combine(s))
}

fn run(kind: Kind, arg: Arg, params: &QParams, ctrl: &SeriesControl) -> Result<Evaluation> {
    let job = TrigJob {
        kind,
        arg,
        q: params.q(),
        alpha: params.alpha(),
    };
    let mut ev = evaluate(&job, ctrl)?;
    if arg.is_real() {
        // real argument: every term of every series is real
        debug_assert!(ev.value.im.abs() <= 1e-14 * ev.value.re.abs().max(f64::MIN_POSITIVE));
        ev.value.im = 0.0;
    }
    Ok(ev)
}

/// Generalized q²-cosine `cos_α(x; q²)`.
pub fn cos_alpha(x: C64, params: &QParams, ctrl: &SeriesControl) -> Result<C64> {
    Ok(run(Kind::Cos, Arg::Point(x), params, ctrl)?.value)
}

/// Generalized q²-sine `sin_α(x; q²)`.
pub fn sin_alpha(x: C64, params: &QParams, ctrl: &SeriesControl) -> Result<C64> {
    Ok(run(Kind::Sin, Arg::Point(x), params, ctrl)?.value)
}

/// Generalized q²-exponential `e_α(x; q²)`; real for real `x`.
pub fn exp_alpha(x: C64, params: &QParams, ctrl: &SeriesControl) -> Result<C64> {
    Ok(run(Kind::Exp, Arg::Point(x), params, ctrl)?.value)
}

/// `cos_α` at a lattice argument, with the achieved precision.
pub fn cos_alpha_lattice(arg: LatticeArg, params: &QParams, ctrl: &SeriesControl) -> Result<Evaluation> {
    run(Kind::Cos, Arg::Lattice(arg), params, ctrl)
}

/// `cos_α - 1` at a lattice argument.
pub fn cosm1_alpha_lattice(arg: LatticeArg, params: &QParams, ctrl: &SeriesControl) -> Result<Evaluation> {
    run(Kind::CosM1, Arg::Lattice(arg), params, ctrl)
}

pub fn sin_alpha_lattice(arg: LatticeArg, params: &QParams, ctrl: &SeriesControl) -> Result<Evaluation> {
    run(Kind::Sin, Arg::Lattice(arg), params, ctrl)
}

pub fn exp_alpha_lattice(arg: LatticeArg, params: &QParams, ctrl: &SeriesControl) -> Result<Evaluation> {
    run(Kind::Exp, Arg::Lattice(arg), params, ctrl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::BigReal;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn p(q: f64, alpha: f64) -> QParams {
        QParams::new(q, alpha).unwrap()
    }

    #[test]
    fn values_at_zero() {
        let ctrl = SeriesControl::default();
        let pr = p(0.5, 0.3);
        assert_eq!(cos_alpha(c(0.0), &pr, &ctrl).unwrap(), c(1.0));
        assert_eq!(sin_alpha(c(0.0), &pr, &ctrl).unwrap(), c(0.0));
        assert_eq!(exp_alpha(c(0.0), &pr, &ctrl).unwrap(), c(1.0));
    }

    #[test]
    fn coefficients_start_correctly_and_stay_positive() {
        let pr = p(0.5, 0.0);
        let co: Vec<_> = TrigCoefficients::new(&pr).take(20).collect();
        assert_eq!(co[0].c_k, 1.0);
        assert!((co[0].s_k - 4.0 / 3.0).abs() < 1e-15);
        assert!(co.iter().all(|t| t.c_k > 0.0 && t.s_k > 0.0));
        // c_1 = q^2 / ((1-q^2)(1-q^2))
        assert!((co[1].c_k - 0.25 / (0.75 * 0.75)).abs() < 1e-15);
    }

    #[test]
    fn classical_q2_functions_at_minus_half() {
        // direct summation of the classical series at 300 bits
        let ctrl = SeriesControl::default();
        let pr = p(0.5, -0.5);
        let cv = cos_alpha(c(0.4), &pr, &ctrl).unwrap();
        let sv = sin_alpha(c(0.4), &pr, &ctrl).unwrap();
        assert!((cv.re - 0.894_630_244_026_712_4).abs() < 1e-15);
        assert!((sv.re - 0.751_773_627_070_181_5).abs() < 1e-15);
    }

    #[test]
    fn exp_is_real_on_real_axis() {
        let v = exp_alpha(c(0.3), &p(0.5, 0.0), &SeriesControl::default()).unwrap();
        assert_eq!(v.im, 0.0);
        assert!((v.re - 1.453_134_502_630_941_2).abs() < 1e-14, "{v}");
    }

    #[test]
    fn exp_splits_into_cos_and_sin() {
        let ctrl = SeriesControl::default();
        let pr = p(0.6, 0.7);
        let y = 1.3;
        let e = exp_alpha(C64::new(0.0, -y), &pr, &ctrl).unwrap();
        let cv = cos_alpha(c(y), &pr, &ctrl).unwrap();
        let sv = sin_alpha(c(y), &pr, &ctrl).unwrap();
        assert!((e - C64::new(cv.re, -sv.re)).norm() < 1e-14);
    }

    #[test]
    fn large_lattice_argument_escalates() {
        let pr = p(0.5, 0.0);
        let ev = cos_alpha_lattice(LatticeArg::scaled(-8), &pr, &SeriesControl::default()).unwrap();
        assert!(ev.bits > 53);
        let big = BigReal::from_f64(1.0, 320);
        let q = big.lift(0.5);
        let x = Cx::real(q.powi(-8) * (big.one_like() - q.clone()));
        let want = cos_alpha_in(&x, &q, &big.zero_like(), &SeriesControl::default())
            .unwrap()
            .value
            .to_c64();
        assert!(((ev.value.re - want.re) / want.re).abs() < 1e-13);
    }

    #[test]
    fn cosm1_keeps_small_differences() {
        let pr = p(0.5, 0.0);
        let ctrl = SeriesControl::default();
        let x = LatticeArg::scaled(20);
        let m1 = cosm1_alpha_lattice(x, &pr, &ctrl).unwrap().value.re;
        // leading term -c_1 y^2 with c_1 = 0.25 / 0.75^2
        let y = x.value(0.5);
        let lead = -0.25 / (0.75 * 0.75) * y * y;
        assert!(((m1 - lead) / lead).abs() < 1e-11);
        let big = LatticeArg::scaled(-2);
        let full = cos_alpha_lattice(big, &pr, &ctrl).unwrap().value.re;
        let shifted = cosm1_alpha_lattice(big, &pr, &ctrl).unwrap().value.re;
        assert!((full - 1.0 - shifted).abs() < 1e-15);
    }

    #[test]
    fn lattice_sign_flips_sine() {
        let pr = p(0.5, 1.0);
        let ctrl = SeriesControl::default();
        let a = sin_alpha_lattice(LatticeArg::scaled(1), &pr, &ctrl).unwrap().value;
        let b = sin_alpha_lattice(LatticeArg::scaled(1).negated(), &pr, &ctrl).unwrap().value;
        assert_eq!(a, -b);
    }
}
