//! The generalized q²-Fourier transform on the symmetric grid.
//!
//! For `x = s·qⁿ` the transform is the Jackson sum
//!
//! ```text
//! f̂(x) = C (1-q) Σ_k q^{k(2α+2)} Σ_σ f(σq^k) e_α(-i(1-q)σ s q^{n+k})
//! ```
//!
//! and `e_α(-iy) = cos_α(y) - i sin_α(y)`, so every kernel value is one of
//! `cos_α((1-q)q^j)` or `sin_α((1-q)q^j)`. A [`TransformPlan`] tabulates those
//! once for all `j` the two windows can produce.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::numeric::{sum_c64, sum_f64, C64};
use crate::qcalculus::{lp_norm, GridFunction, GridWindow, NormExponent, Sign};
use crate::qcore::{q_gamma, q_pochhammer_inf, QParams};
use crate::qtrig::{cos_alpha_lattice, sin_alpha_lattice, LatticeArg};
use crate::series::SeriesControl;

/// Relative agreement required between the two forms of `C_{α,q}`.
const NORM_CHECK_TOL: f64 = 1e-12;

/// Tolerance on `ln(1-q)/ln(q)` being an even integer under `strict_grid`.
const GRID_CONDITION_TOL: f64 = 1e-9;

/// `C_{α,q} = (1-q)^α (q^{2α+2};q²)_∞ / (2 (q²;q²)_∞)`, checked against
/// `(1+q)^{-α} / (2 Γ_{q²}(α+1))`.
pub fn norm_constant(params: &QParams, ctrl: &SeriesControl) -> Result<f64> {
    let (q, a) = (params.q(), params.alpha());
    let q2 = q * q;
    let num = q_pochhammer_inf(&q.powf(2.0 * a + 2.0), &q2, ctrl)?;
    let den = q_pochhammer_inf(&q2, &q2, ctrl)?;
    let c = (1.0 - q).powf(a) * num / (2.0 * den);
    let via_gamma = (1.0 + q).powf(-a) / (2.0 * q_gamma(&(a + 1.0), &q2, ctrl)?);
    if !(c > 0.0) || ((c - via_gamma) / c).abs() > NORM_CHECK_TOL {
        return Err(QError::Domain(format!(
            "norm constant check failed: product form {c:e}, q-Gamma form {via_gamma:e}"
        )));
    }
    Ok(c)
}

/// `(q^{2α+2};q²)_∞ / (q²;q²)_∞`.
fn product_ratio(params: &QParams, ctrl: &SeriesControl) -> Result<f64> {
    let (q, a) = (params.q(), params.alpha());
    let q2 = q * q;
    Ok(q_pochhammer_inf(&q.powf(2.0 * a + 2.0), &q2, ctrl)? / q_pochhammer_inf(&q2, &q2, ctrl)?)
}

/// `ln(1-q)/ln(q)`.
pub fn grid_exponent(q: f64) -> f64 {
    (1.0 - q).ln() / q.ln()
}

/// The integer `p` with `1-q = q^p`, if `q` is within rounding of one.
///
/// Near such `q` the kernel is extremely sensitive to its argument, and the
/// double nearest to e.g. the golden ratio misses `1-q = q²` by about 1e-17,
/// which is enough to change `cos_α((1-q)q^{-14})` by forty orders of
/// magnitude. Plans therefore place kernel arguments on the lattice exactly.
pub fn lattice_shift(q: f64) -> Option<i32> {
    let p = grid_exponent(q);
    let r = p.round();
    (r >= 1.0 && (p - r).abs() <= GRID_CONDITION_TOL).then_some(r as i32)
}

/// The kernel argument `(1-q)q^j`, exactly on the lattice when possible.
fn kernel_arg(shift: Option<i32>, j: i32) -> LatticeArg {
    match shift {
        Some(p) => LatticeArg::plain(j + p),
        None => LatticeArg::scaled(j),
    }
}

/// An output window wide enough for round trips of functions supported on
/// `input` to reach double precision.
///
/// Towards large `|x|` the kernel decays like `q^{j²/2}` on the lattice, so
/// `margin = ⌈sqrt(ln 1e16 / ln(1/q))⌉` exponents past the reflected support
/// suffice. Towards `x → 0` the measure `q^{n(2α+2)}` must fall below 1e-14.
pub fn suggested_output_window(params: &QParams, input: GridWindow) -> GridWindow {
    let lq = -params.q().ln();
    let margin = ((1e16f64).ln() / lq).sqrt().ceil() as i32;
    let span = input.n_max() - input.n_min();
    let tail = ((1e14f64).ln() / ((2.0 * params.alpha() + 2.0) * lq)).ceil() as i32;
    GridWindow::new(input.n_min() - span - margin, input.n_max() + tail)
        .expect("lower bound is below the upper bound")
}

/// `cos_α` and `sin_α` at `(1-q)q^j` for a contiguous range of `j`.
#[derive(Debug, Clone)]
struct KernelTable {
    j_min: i32,
    entries: Vec<Result<(f64, f64)>>,
}

impl KernelTable {
    fn build(params: &QParams, j_min: i32, j_max: i32, ctrl: &SeriesControl) -> Self {
        let shift = lattice_shift(params.q());
        let entries = (j_min..=j_max)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|j| {
                let arg = kernel_arg(shift, j);
                let c = cos_alpha_lattice(arg, params, ctrl)?.value.re;
                let s = sin_alpha_lattice(arg, params, ctrl)?.value.re;
                Ok((c, s))
            })
            .collect();
        KernelTable { j_min, entries }
    }

    fn get(&self, j: i32) -> Result<(f64, f64)> {
        self.entries[(j - self.j_min) as usize].clone()
    }

    /// Fails on the first kernel value the precision policy refused.
    fn check(&self) -> Result<()> {
        self.entries.iter().try_for_each(|e| e.as_ref().map(|_| ()).map_err(Clone::clone))
    }
}

/// Everything a transform between two fixed windows needs.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    params: QParams,
    norm_constant: f64,
    input_window: GridWindow,
    output_window: GridWindow,
    ctrl: SeriesControl,
    strict_grid: bool,
    kernel: KernelTable,
}

/// Plan with condition `ln(1-q)/ln(q) ∈ 2ℤ` left unchecked.
pub fn make_plan(
    params: QParams,
    input_window: GridWindow,
    output_window: GridWindow,
    ctrl: SeriesControl,
) -> Result<TransformPlan> {
    make_plan_with(params, input_window, output_window, ctrl, false)
}

/// With `strict_grid`, rejects `q` unless `ln(1-q)/ln(q)` is an even integer.
pub fn make_plan_with(
    params: QParams,
    input_window: GridWindow,
    output_window: GridWindow,
    ctrl: SeriesControl,
    strict_grid: bool,
) -> Result<TransformPlan> {
    ctrl.validate()?;
    let q = params.q();
    if strict_grid {
        let p = grid_exponent(q);
        let even = (p / 2.0).round() * 2.0;
        if even < 2.0 || (p - even).abs() > GRID_CONDITION_TOL {
            return Err(QError::GridIncompatible { q });
        }
    }
    let norm_constant = norm_constant(&params, &ctrl)?;
    let kernel = KernelTable::build(
        &params,
        input_window.n_min() + output_window.n_min(),
        input_window.n_max() + output_window.n_max(),
        &ctrl,
    );
    Ok(TransformPlan {
        params,
        norm_constant,
        input_window,
        output_window,
        ctrl,
        strict_grid,
        kernel,
    })
}

impl TransformPlan {
    pub fn params(&self) -> &QParams {
        &self.params
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn input_window(&self) -> GridWindow {
        self.input_window
    }

    pub fn output_window(&self) -> GridWindow {
        self.output_window
    }

    pub fn ctrl(&self) -> &SeriesControl {
        &self.ctrl
    }

    pub fn strict_grid(&self) -> bool {
        self.strict_grid
    }

    fn expect(&self, f: &GridFunction, window: GridWindow, role: &str) -> Result<()> {
        if f.params() != &self.params {
            return Err(QError::GridMismatch(format!(
                "{role} has q = {}, alpha = {}; plan has q = {}, alpha = {}",
                f.params().q(),
                f.params().alpha(),
                self.params.q(),
                self.params.alpha()
            )));
        }
        if f.window() != window {
            return Err(QError::GridMismatch(format!(
                "{role} lives on window {}, plan expects {window}",
                f.window()
            )));
        }
        Ok(())
    }

    /// `q^{k(2α+2)}`, the Jackson weight times `|t|^{2α+1}` at `t = ±q^k`.
    fn measure(&self, k: i32) -> f64 {
        (f64::from(k) * (2.0 * self.params.alpha() + 2.0) * self.params.q().ln()).exp()
    }

    /// `C(1-q) Σ_k w_k Σ_σ f(σq^k) [C_j + i·dir·σ s S_j]` at every `(s, n)` of `to`.
    fn apply(&self, f: &GridFunction, to: GridWindow, dir: f64) -> Result<GridFunction> {
        self.kernel.check()?;
        let from = f.window();
        let scale = self.norm_constant * (1.0 - self.params.q());
        let weighted: Vec<(C64, C64)> = from
            .exponents()
            .zip(f.pos().iter().zip(f.neg()))
            .map(|(k, (&a, &b))| {
                let w = self.measure(k);
                ((a + b) * w, (a - b) * w)
            })
            .collect();
        let point = |s: Sign, n: i32| -> Result<C64> {
            let mut terms = Vec::with_capacity(weighted.len());
            for (k, &(even, odd)) in from.exponents().zip(&weighted) {
                let (c, sn) = self.kernel.get(n + k)?;
                terms.push(even * c + odd * C64::new(0.0, dir * s.factor() * sn));
            }
            Ok(sum_c64(terms) * scale)
        };
        GridFunction::try_from_lattice(self.params, to, point)
    }
}

/// `f̂` on the plan's output window.
pub fn forward_transform(f: &GridFunction, plan: &TransformPlan) -> Result<GridFunction> {
    plan.expect(f, plan.input_window, "input")?;
    plan.apply(f, plan.output_window, -1.0)
}

/// The inverse transform of `g` (sampled on the output window), evaluated on
/// the input window.
pub fn inverse_transform(g: &GridFunction, plan: &TransformPlan) -> Result<GridFunction> {
    plan.expect(g, plan.output_window, "transform")?;
    plan.apply(g, plan.input_window, 1.0)
}

#[derive(Clone, Copy, PartialEq)]
enum HalfLine {
    Cosine,
    Sine,
}

fn half_line(f: &GridFunction, plan: &TransformPlan, which: HalfLine) -> Result<GridFunction> {
    let to = if f.window() == plan.input_window {
        plan.output_window
    } else if f.window() == plan.output_window {
        plan.input_window
    } else {
        return Err(QError::GridMismatch(format!(
            "window {} matches neither plan window ({} or {})",
            f.window(),
            plan.input_window,
            plan.output_window
        )));
    };
    plan.expect(f, f.window(), "input")?;
    plan.kernel.check()?;
    let from = f.window();
    let scale = 2.0 * plan.norm_constant * (1.0 - plan.params.q());
    let weighted: Vec<C64> = from.exponents().zip(f.pos()).map(|(k, &v)| v * plan.measure(k)).collect();
    let pos = to
        .exponents()
        .map(|n| {
            let mut terms = Vec::with_capacity(weighted.len());
            for (k, &v) in from.exponents().zip(&weighted) {
                let (c, s) = plan.kernel.get(n + k)?;
                terms.push(v * if which == HalfLine::Cosine { c } else { s });
            }
            Ok(sum_c64(terms) * scale)
        })
        .collect::<Result<Vec<_>>>()?;
    let neg = match which {
        HalfLine::Cosine => pos.clone(),
        HalfLine::Sine => pos.iter().map(|&z| -z).collect(),
    };
    GridFunction::new(plan.params, to, pos, neg)
}

/// `g(qⁿ) = 2C ∫₀^∞ cos_α((1-q)x qⁿ) f(x) x^{2α+1} d_q x` from the positive
/// branch of `f`, extended evenly. Maps the input window to the output
/// window or back, whichever `f` lives on.
pub fn cosine_transform_grid(f: &GridFunction, plan: &TransformPlan) -> Result<GridFunction> {
    half_line(f, plan, HalfLine::Cosine)
}

/// The sine counterpart of [`cosine_transform_grid`], extended oddly.
pub fn sine_transform_grid(f: &GridFunction, plan: &TransformPlan) -> Result<GridFunction> {
    half_line(f, plan, HalfLine::Sine)
}

/// `Σ_k q^{k(2α+2)} |f(q^k)|²` over the positive branch.
pub fn grid_energy(f: &GridFunction) -> f64 {
    let a = f.params().alpha();
    let lq = f.params().q().ln();
    sum_f64(
        f.window()
            .exponents()
            .zip(f.pos())
            .map(|(k, v)| (f64::from(k) * (2.0 * a + 2.0) * lq).exp() * v.norm_sqr()),
    )
}

/// Truncated orthogonality sum with the exponents actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalitySum {
    pub value: f64,
    pub k_lo: i32,
    pub k_hi: i32,
}

/// `Σ_k q^{(α+1)(2k+n+m)} C'² cos_α(q^{n+k}) cos_α(q^{m+k})` with
/// `C' = (q^{2α+2};q²)_∞/(q²;q²)_∞`, which should equal `δ_{nm}`.
///
/// Inside `k_range` the sum stops upward once two consecutive terms fall
/// below `rel_tol` of the partial sum, and downward at the first kernel
/// value the precision policy refuses. The bounds used are reported.
pub fn orthogonality_delta(
    n: i32,
    m: i32,
    params: &QParams,
    k_range: GridWindow,
    ctrl: &SeriesControl,
) -> Result<OrthogonalitySum> {
    let cp = product_ratio(params, ctrl)?;
    let (q, a) = (params.q(), params.alpha());
    let term = |k: i32| -> Result<f64> {
        let cn = cos_alpha_lattice(LatticeArg::plain(n + k), params, ctrl)?.value.re;
        let cm = if n == m {
            cn
        } else {
            cos_alpha_lattice(LatticeArg::plain(m + k), params, ctrl)?.value.re
        };
        let w = ((a + 1.0) * f64::from(2 * k + n + m) * q.ln()).exp();
        Ok(w * cp * cp * cn * cm)
    };
    let start = 0.clamp(k_range.n_min(), k_range.n_max());
    let mut up = Vec::new();
    let mut small = 0;
    let mut k_hi = start;
    for k in start..=k_range.n_max() {
        let t = term(k)?;
        up.push(t);
        k_hi = k;
        let partial: f64 = up.iter().sum();
        small = if t.abs() <= ctrl.rel_tol * partial.abs() { small + 1 } else { 0 };
        if small >= 2 {
            break;
        }
    }
    let mut down = Vec::new();
    let mut k_lo = start;
    for k in (k_range.n_min()..start).rev() {
        match term(k) {
            Ok(t) => {
                down.push(t);
                k_lo = k;
            }
            Err(e) if e.is_numerical() => break,
            Err(e) => return Err(e),
        }
    }
    // ascending k, so the result does not depend on where the scan started
    let value = sum_f64(down.into_iter().rev().chain(up));
    Ok(OrthogonalitySum { value, k_lo, k_hi })
}

/// One row of a verification report.
///
/// For complex or pointwise comparisons `expected` and `actual` are the
/// moduli at the worst point and `error` is the measure compared against the
/// tolerance (relative unless the suite says otherwise).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCase {
    pub label: String,
    pub expected: f64,
    pub actual: f64,
    pub abs_error: f64,
    pub error: f64,
    /// Reported only; does not affect `passed`.
    #[serde(default)]
    pub informational: bool,
}

/// Outcome of a verification suite; `passed` iff `max_error <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub tolerance: f64,
    pub max_error: f64,
    pub passed: bool,
    pub cases: Vec<VerifyCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerifyReport {
    pub fn new(suite: &str, tolerance: f64) -> Self {
        VerifyReport {
            suite: suite.to_string(),
            tolerance,
            max_error: 0.0,
            passed: true,
            cases: Vec::new(),
            note: None,
        }
    }

    fn push(&mut self, case: VerifyCase) {
        if !case.informational {
            // NaN counts as a failure
            if !(case.error <= self.max_error) {
                self.max_error = if case.error.is_nan() { f64::INFINITY } else { case.error };
            }
            self.passed = self.max_error <= self.tolerance;
        }
        self.cases.push(case);
    }

    /// Adds a case whose error is `|actual - expected| / scale`.
    pub fn relative(&mut self, label: impl Into<String>, expected: f64, actual: f64, scale: f64) {
        let abs_error = (actual - expected).abs();
        let error = if abs_error == 0.0 { 0.0 } else { abs_error / scale.abs() };
        self.push(VerifyCase {
            label: label.into(),
            expected,
            actual,
            abs_error,
            error,
            informational: false,
        });
    }

    /// Adds a case measured by absolute error.
    pub fn absolute(&mut self, label: impl Into<String>, expected: f64, actual: f64) {
        self.relative(label, expected, actual, 1.0);
    }

    /// Adds a precomputed case.
    pub fn case(&mut self, case: VerifyCase) {
        self.push(case);
    }

    /// Adds a case that is reported but not judged.
    pub fn inform(&mut self, label: impl Into<String>, expected: f64, actual: f64) {
        let abs_error = (actual - expected).abs();
        self.push(VerifyCase {
            label: label.into(),
            expected,
            actual,
            abs_error,
            error: if expected != 0.0 { abs_error / expected.abs() } else { abs_error },
            informational: true,
        });
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Folds another report into this one.
    pub fn absorb(&mut self, other: VerifyReport) {
        for c in other.cases {
            self.push(c);
        }
    }
}

/// Compares `‖f‖_{q,α,2}` with `‖f̂‖_{q,α,2}` on the plan's windows.
pub fn plancherel_check(f: &GridFunction, plan: &TransformPlan) -> Result<VerifyReport> {
    let fh = forward_transform(f, plan)?;
    let a = lp_norm(f, NormExponent::Finite(2.0))?;
    let b = lp_norm(&fh, NormExponent::Finite(2.0))?;
    let mut report = VerifyReport::new("plancherel", 1e-6);
    report.relative("L2 norm of f vs its transform", a, b, a);
    Ok(report)
}

/// The root in (0, 1) of `q^{2m} + q - 1 = 0`, so that `1-q = q^{2m}`.
pub fn solve_q(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(QError::Domain("m must be a positive integer".into()));
    }
    let e = 2 * m as i32;
    let f = |q: f64| q.powi(e) + q - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // bisect until the bracket cannot shrink further
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if f(lo).abs() <= f(hi).abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn norm_constants() {
        let ctrl = SeriesControl::default();
        let c0 = norm_constant(&QParams::new(0.5, 0.0).unwrap(), &ctrl).unwrap();
        assert!((c0 - 0.5).abs() < 1e-15);
        // direct 300-bit product evaluation
        let ch = norm_constant(&QParams::new(0.5, -0.5).unwrap(), &ctrl).unwrap();
        assert!((ch - 0.430_733_891_452_756_36).abs() < 1e-15);
        let c1 = norm_constant(&QParams::new(0.5, 1.0).unwrap(), &ctrl).unwrap();
        assert!((c1 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn solve_q_roots() {
        assert_eq!(solve_q(1).unwrap(), 0.618_033_988_749_894_9);
        assert!((solve_q(2).unwrap() - 0.724_491_959_000_515_6).abs() < 1e-15);
        assert!(solve_q(0).is_err());
    }

    #[test]
    fn lattice_shift_detection() {
        assert_eq!(lattice_shift(0.5), Some(1));
        assert_eq!(lattice_shift(solve_q(1).unwrap()), Some(2));
        assert_eq!(lattice_shift(solve_q(3).unwrap()), Some(6));
        assert_eq!(lattice_shift(0.7), None);
    }

    #[test]
    fn strict_grid_flag() {
        let w = GridWindow::new(0, 2).unwrap();
        let ctrl = SeriesControl::default();
        let p = QParams::new(0.5, 0.0).unwrap();
        assert!(matches!(
            make_plan_with(p, w, w, ctrl, true),
            Err(QError::GridIncompatible { .. })
        ));
        let p = QParams::new(solve_q(1).unwrap(), 0.0).unwrap();
        assert!(make_plan_with(p, w, w, ctrl, true).is_ok());
    }

    #[test]
    fn even_point_mass_transform() {
        let p = QParams::new(0.5, 0.0).unwrap();
        let win = GridWindow::new(-2, 2).unwrap();
        let out = GridWindow::new(-3, 5).unwrap();
        let mut v = vec![c(0.0); 5];
        v[2] = c(1.0);
        let f = GridFunction::new(p, win, v.clone(), v).unwrap();
        let plan = make_plan(p, win, out, SeriesControl::default()).unwrap();
        let fh = forward_transform(&f, &plan).unwrap();
        let ctrl = SeriesControl::default();
        for (_, n, val) in fh.samples() {
            let k = cos_alpha_lattice(kernel_arg(lattice_shift(0.5), n), &p, &ctrl).unwrap().value.re;
            let want = 2.0 * plan.norm_constant() * 0.5 * k;
            assert!((val - c(want)).norm() <= 1e-15 * want.abs().max(1e-300), "{n}: {val} vs {want}");
        }
    }

    #[test]
    fn windows_are_enforced() {
        let p = QParams::new(0.5, 0.0).unwrap();
        let a = GridWindow::new(0, 3).unwrap();
        let b = GridWindow::new(-1, 4).unwrap();
        let plan = make_plan(p, a, b, SeriesControl::default()).unwrap();
        let wrong = GridFunction::zeros(p, b);
        assert!(matches!(forward_transform(&wrong, &plan), Err(QError::GridMismatch(_))));
        let zero = GridFunction::zeros(p, a);
        assert_eq!(forward_transform(&zero, &plan).unwrap().sup_norm(), 0.0);
        let other = GridFunction::zeros(QParams::new(0.5, 0.1).unwrap(), a);
        assert!(forward_transform(&other, &plan).is_err());
    }

    #[test]
    fn orthogonality_is_symmetric() {
        let p = QParams::new(0.5, 0.0).unwrap();
        let ctrl = SeriesControl::with_bits(256);
        let k = GridWindow::new(-6, 40).unwrap();
        let a = orthogonality_delta(0, 2, &p, k, &ctrl).unwrap();
        let b = orthogonality_delta(2, 0, &p, k, &ctrl).unwrap();
        assert_eq!(a.value, b.value);
        assert!(a.value.abs() < 1e-6);
        let d = orthogonality_delta(0, 0, &p, k, &ctrl).unwrap();
        assert!((d.value - 1.0).abs() < 1e-6, "{d:?}");
    }

    #[test]
    fn report_pass_rule() {
        let mut r = VerifyReport::new("x", 1e-6);
        r.relative("a", 1.0, 1.0 + 1e-9, 1.0);
        assert!(r.passed);
        r.inform("b", 1.0, 2.0);
        assert!(r.passed);
        r.absolute("c", 0.0, 1e-3);
        assert!(!r.passed);
        assert_eq!(r.max_error, 1e-3);
        let mut r = VerifyReport::new("y", 1.0);
        r.relative("nan", 1.0, f64::NAN, 1.0);
        assert!(!r.passed);
    }
}
