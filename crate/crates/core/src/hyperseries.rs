//! Basic hypergeometric series `r phi s` and the q-Bessel function built on
//! `1 phi 1`.

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::numeric::{Cx, Real, C64};
use crate::qcore::{check_q, q_pochhammer_inf};
use crate::series::{evaluate, sum_terms, SeriesControl, SeriesJob, SeriesSum, Termination};

/// Tolerance used to recognise parameters of the form `base^(-k)`.
const LATTICE_MATCH_TOL: f64 = 1e-12;

/// A basic hypergeometric series
/// `sum_k [(-1)^k q^{k(k-1)/2}]^{1+s-r} (a_1..a_r;q)_k / (b_1..b_s;q)_k x^k/(q;q)_k`.
///
/// The base travels with the specification, so a series in `q^2` never
/// depends on an ambient `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiSpec {
    pub numerator: Vec<C64>,
    pub denominator: Vec<C64>,
    pub base: f64,
    pub argument: C64,
}

/// If `a = base^(-k)` for an integer `k >= 0`, returns `k`.
fn negative_lattice_index(a: C64, base: f64) -> Option<usize> {
    if a.im != 0.0 || a.re <= 0.0 {
        return None;
    }
    let k = -a.re.ln() / base.ln();
    let rounded = k.round();
    if !(0.0..=1e6).contains(&rounded) {
        return None;
    }
    let back = a.re * base.powi(rounded as i32);
    ((back - 1.0).abs() <= LATTICE_MATCH_TOL).then_some(rounded as usize)
}

impl PhiSpec {
    pub fn new(numerator: Vec<C64>, denominator: Vec<C64>, base: f64, argument: C64) -> Result<Self> {
        let spec = PhiSpec {
            numerator,
            denominator,
            base,
            argument,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `1 phi 1 (0; b; base; argument)`.
    pub fn phi11_zero(b: f64, base: f64, argument: C64) -> Result<Self> {
        PhiSpec::new(vec![C64::new(0.0, 0.0)], vec![C64::new(b, 0.0)], base, argument)
    }

    pub fn r(&self) -> usize {
        self.numerator.len()
    }

    pub fn s(&self) -> usize {
        self.denominator.len()
    }

    /// Index of the last non-vanishing term of a terminating series.
    pub fn terminating_index(&self) -> Option<usize> {
        self.numerator
            .iter()
            .filter_map(|&a| negative_lattice_index(a, self.base))
            .min()
    }

    pub fn validate(&self) -> Result<()> {
        check_q(&self.base).map_err(|_| {
            QError::InvalidSpec(format!("base must lie in (0, 1), got {}", self.base))
        })?;
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        if !self.numerator.iter().chain(&self.denominator).all(finite) || !finite(&self.argument) {
            return Err(QError::InvalidSpec("non-finite parameter".into()));
        }
        if self.r() > self.s() + 1 {
            return Err(QError::InvalidSpec(format!(
                "r = {} exceeds s + 1 = {}",
                self.r(),
                self.s() + 1
            )));
        }
        if let Some(b) = self
            .denominator
            .iter()
            .find(|&&b| negative_lattice_index(b, self.base).is_some())
        {
            return Err(QError::InvalidSpec(format!(
                "denominator parameter {b} is a non-positive power of the base"
            )));
        }
        if self.r() == self.s() + 1
            && self.argument.norm() >= 1.0
            && self.terminating_index().is_none()
        {
            return Err(QError::InvalidSpec(
                "r = s + 1 needs |argument| < 1 or a terminating numerator".into(),
            ));
        }
        Ok(())
    }
}

struct PhiJob<'a> {
    spec: &'a PhiSpec,
}

impl SeriesJob for PhiJob<'_> {
    fn describe(&self) -> String {
        format!(
            "{}phi{} at argument {}",
            self.spec.r(),
            self.spec.s(),
            self.spec.argument
        )
    }

    fn run<R: Real>(&self, unit: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
        phi_rs_in(self.spec, unit, ctrl)
    }
}

/// `r phi s` summed at the working precision of `unit`.
pub fn phi_rs_in<R: Real>(spec: &PhiSpec, unit: &R, ctrl: &SeriesControl) -> Result<SeriesSum<R>> {
    spec.validate()?;
    let one = Cx::real(unit.one_like());
    let q = unit.lift(spec.base);
    let x = Cx::lift(unit, spec.argument);
    let nums: Vec<Cx<R>> = spec.numerator.iter().map(|&a| Cx::lift(unit, a)).collect();
    let dens: Vec<Cx<R>> = spec.denominator.iter().map(|&b| Cx::lift(unit, b)).collect();
    let sign_power = 1 + spec.s() - spec.r();
    let termination = match spec.terminating_index() {
        Some(n) => Termination::AfterIndex(n),
        None => Termination::Tolerance,
    };
    let mut qk = unit.one_like();
    sum_terms(
        "basic hypergeometric series",
        one.clone(),
        move |_, term| {
            // ratio t_{k+1}/t_k with qk = q^k
            let mut ratio = x.clone();
            for a in &nums {
                ratio = ratio * (one.clone() - a.scale(&qk));
            }
            for b in &dens {
                ratio = ratio / (one.clone() - b.scale(&qk));
            }
            let qk1 = qk.clone() * q.clone();
            let mut scalar = (unit.one_like() - qk1.clone()).powi(-1);
            for _ in 0..sign_power {
                scalar = -(scalar * qk.clone());
            }
            qk = qk1;
            term.clone() * ratio.scale(&scalar)
        },
        termination,
        ctrl,
    )
}

/// Evaluates `r phi s` with automatic precision escalation.
pub fn phi_rs(spec: &PhiSpec, ctrl: &SeriesControl) -> Result<C64> {
    spec.validate()?;
    Ok(evaluate(&PhiJob { spec }, ctrl)?.value)
}

/// True when `x^nu` is evaluated on the branch cut of the principal power.
pub fn on_branch_cut(nu: f64, x: C64) -> bool {
    x.im == 0.0 && x.re < 0.0 && nu.fract() != 0.0
}

/// q-Bessel function
/// `J_nu(x;q) = (q^{nu+1};q)_inf / (q;q)_inf * x^nu * 1phi1(0; q^{nu+1}; q; q^2 x^2)`.
///
/// `x^nu` is the principal power; see [`on_branch_cut`].
pub fn q_bessel(nu: f64, x: C64, q: f64, ctrl: &SeriesControl) -> Result<C64> {
    check_q(&q)?;
    if !(nu > -1.0) {
        return Err(QError::Domain(format!("nu must exceed -1, got {nu}")));
    }
    let shifted = q.powf(nu + 1.0);
    let prefactor = q_pochhammer_inf(&shifted, &q, ctrl)? / q_pochhammer_inf(&q, &q, ctrl)?;
    let power = if x == C64::new(0.0, 0.0) {
        match nu.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => return Ok(C64::new(0.0, 0.0)),
            Some(std::cmp::Ordering::Equal) => C64::new(1.0, 0.0),
            _ => {
                return Err(QError::Domain(format!(
                    "J_nu is singular at x = 0 for nu = {nu}"
                )))
            }
        }
    } else {
        x.powf(nu)
    };
    let spec = PhiSpec::phi11_zero(shifted, q, x * x * (q * q))?;
    Ok(phi_rs(&spec, ctrl)? * power * prefactor)
}
