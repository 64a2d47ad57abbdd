//! Functions on the symmetric q-grid `{±qⁿ : n_min <= n <= n_max}`, the
//! Dunkl-type operator `∂_{q,α}`, Jackson integrals and weighted norms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::numeric::{sum_c64, sum_f64, C64};
use crate::qcore::{q_number, QParams};

/// Boundary contributions above this fraction of an integral raise the
/// window warning.
pub const WINDOW_WARNING_TOL: f64 = 1e-12;

/// Exponent range `n_min..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWindow")]
pub struct GridWindow {
    n_min: i32,
    n_max: i32,
}

#[derive(Deserialize)]
struct RawWindow {
    n_min: i32,
    n_max: i32,
}

impl TryFrom<RawWindow> for GridWindow {
    type Error = QError;
    fn try_from(r: RawWindow) -> Result<Self> {
        GridWindow::new(r.n_min, r.n_max)
    }
}

impl GridWindow {
    pub fn new(n_min: i32, n_max: i32) -> Result<Self> {
        if n_min > n_max {
            return Err(QError::InvalidSpec(format!(
                "empty window: n_min = {n_min} exceeds n_max = {n_max}"
            )));
        }
        Ok(GridWindow { n_min, n_max })
    }

    pub fn n_min(&self) -> i32 {
        self.n_min
    }

    pub fn n_max(&self) -> i32 {
        self.n_max
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: i32) -> bool {
        (self.n_min..=self.n_max).contains(&n)
    }

    pub fn exponents(&self) -> std::ops::RangeInclusive<i32> {
        self.n_min..=self.n_max
    }

    fn index(&self, n: i32) -> Option<usize> {
        self.contains(n).then(|| (n - self.n_min) as usize)
    }

    /// The window shrunk by `by` exponents on each side.
    pub fn shrink(&self, by: i32) -> Result<Self> {
        GridWindow::new(self.n_min + by, self.n_max - by)
    }
}

impl std::fmt::Display for GridWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.n_min, self.n_max)
    }
}

impl std::str::FromStr for GridWindow {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || QError::Parse(format!("window must look like nmin:nmax, got {s:?}"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        GridWindow::new(a, b)
    }
}

/// Branch of the symmetric grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Complex samples at `+qⁿ` and `-qⁿ` over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    params: QParams,
    window: GridWindow,
    pos: Vec<C64>,
    neg: Vec<C64>,
}

impl GridFunction {
    pub fn new(params: QParams, window: GridWindow, pos: Vec<C64>, neg: Vec<C64>) -> Result<Self> {
        if pos.len() != window.len() || neg.len() != window.len() {
            return Err(QError::InvalidSpec(format!(
                "window {window} needs {} samples per branch, got {} and {}",
                window.len(),
                pos.len(),
                neg.len()
            )));
        }
        if let Some(z) = pos.iter().chain(&neg).find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(QError::InvalidSpec(format!("non-finite grid value {z}")));
        }
        Ok(GridFunction {
            params,
            window,
            pos,
            neg,
        })
    }

    pub fn zeros(params: QParams, window: GridWindow) -> Self {
        let z = vec![C64::new(0.0, 0.0); window.len()];
        GridFunction {
            params,
            window,
            pos: z.clone(),
            neg: z,
        }
    }

    /// Samples `f` at every grid point `±qⁿ`.
    pub fn from_fn<F>(params: QParams, window: GridWindow, f: F) -> Result<Self>
    where
        F: Fn(f64) -> C64,
    {
        let q = params.q();
        let pos = window.exponents().map(|n| f(q.powi(n))).collect();
        let neg = window.exponents().map(|n| f(-q.powi(n))).collect();
        GridFunction::new(params, window, pos, neg)
    }

    /// Samples a function given in lattice form `(sign, n)`, in parallel.
    pub fn try_from_lattice<F>(params: QParams, window: GridWindow, f: F) -> Result<Self>
    where
        F: Fn(Sign, i32) -> Result<C64> + Sync,
    {
        let branch = |s: Sign| -> Result<Vec<C64>> {
            window
                .exponents()
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|n| f(s, n))
                .collect()
        };
        let pos = branch(Sign::Plus)?;
        let neg = branch(Sign::Minus)?;
        GridFunction::new(params, window, pos, neg)
    }

    pub fn params(&self) -> &QParams {
        &self.params
    }

    pub fn window(&self) -> GridWindow {
        self.window
    }

    pub fn pos(&self) -> &[C64] {
        &self.pos
    }

    pub fn neg(&self) -> &[C64] {
        &self.neg
    }

    pub fn branch(&self, s: Sign) -> &[C64] {
        match s {
            Sign::Plus => &self.pos,
            Sign::Minus => &self.neg,
        }
    }

    pub fn get(&self, s: Sign, n: i32) -> Option<C64> {
        self.window.index(n).map(|i| self.branch(s)[i])
    }

    /// The grid abscissa `±qⁿ`.
    pub fn point(&self, s: Sign, n: i32) -> f64 {
        s.factor() * self.params.q().powi(n)
    }

    /// Iterates `(sign, n, value)`, plus branch first.
    pub fn samples(&self) -> impl Iterator<Item = (Sign, i32, C64)> + '_ {
        let w = self.window;
        w.exponents()
            .zip(&self.pos)
            .map(|(n, &v)| (Sign::Plus, n, v))
            .chain(w.exponents().zip(&self.neg).map(|(n, &v)| (Sign::Minus, n, v)))
    }

    pub fn map<F: Fn(C64) -> C64>(&self, f: F) -> Result<Self> {
        GridFunction::new(
            self.params,
            self.window,
            self.pos.iter().map(|&z| f(z)).collect(),
            self.neg.iter().map(|&z| f(z)).collect(),
        )
    }

    pub fn scale(&self, c: C64) -> Result<Self> {
        self.map(|z| z * c)
    }

    fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.window != other.window || self.params != other.params {
            return Err(QError::GridMismatch(format!(
                "window {} (q = {}, alpha = {}) vs window {} (q = {}, alpha = {})",
                self.window,
                self.params.q(),
                self.params.alpha(),
                other.window,
                other.params.q(),
                other.params.alpha()
            )));
        }
        Ok(())
    }

    /// Pointwise `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &GridFunction, b: C64) -> Result<Self> {
        self.check_same_grid(other)?;
        let mix = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(&u, &v)| a * u + b * v).collect();
        GridFunction::new(self.params, self.window, mix(&self.pos, &other.pos), mix(&self.neg, &other.neg))
    }

    /// Restriction to a sub-window.
    pub fn restrict(&self, window: GridWindow) -> Result<Self> {
        let (Some(lo), Some(hi)) = (self.window.index(window.n_min), self.window.index(window.n_max)) else {
            return Err(QError::GridMismatch(format!(
                "window {window} is not inside {}",
                self.window
            )));
        };
        GridFunction::new(
            self.params,
            window,
            self.pos[lo..=hi].to_vec(),
            self.neg[lo..=hi].to_vec(),
        )
    }

    /// Largest `|f|` over both branches.
    pub fn sup_norm(&self) -> f64 {
        self.pos.iter().chain(&self.neg).map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Even and odd parts of a grid function.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenOddParts {
    pub even: GridFunction,
    pub odd: GridFunction,
}

impl EvenOddParts {
    pub fn recombine(&self) -> Result<GridFunction> {
        self.even.combine(C64::new(1.0, 0.0), &self.odd, C64::new(1.0, 0.0))
    }
}

/// `f_e(x) = (f(x)+f(-x))/2`, `f_o(x) = (f(x)-f(-x))/2`.
///
/// When the samples allow it, `even + odd` reproduces `f` bit for bit; the
/// halves are exact in binary and `(a+b)/2 + (a-b)/2` rounds back to `a`
/// whenever neither half loses low bits.
pub fn even_odd_parts(f: &GridFunction) -> EvenOddParts {
    let mut ep = Vec::with_capacity(f.pos.len());
    let mut op = Vec::with_capacity(f.pos.len());
    for (&a, &b) in f.pos.iter().zip(&f.neg) {
        ep.push((a + b) * 0.5);
        op.push((a - b) * 0.5);
    }
    let en = ep.clone();
    let on = op.iter().map(|&z| -z).collect();
    EvenOddParts {
        even: GridFunction {
            params: f.params,
            window: f.window,
            pos: ep,
            neg: en,
        },
        odd: GridFunction {
            params: f.params,
            window: f.window,
            pos: op,
            neg: on,
        },
    }
}

/// Which difference quotient acts on the even part.
///
/// `Eigen` uses `[f_e(x/q) - f_e(x)] / ((1-q)x)`, for which
/// `∂ cos_α(λx) = -λ/(1-q) sin_α(λx)`, `∂ sin_α(λx) = λ/(1-q) cos_α(λx)` and
/// `∂ e_α(λx) = λ/(1-q) e_α(λx)` hold exactly. `AsWritten` puts the factor
/// `q^{2α+1}` on `f_e(x)` as well; the two agree at `α = -1/2`.
/// Both use `[f_o(x) - q^{2α+1} f_o(qx)] / ((1-q)x)` on the odd part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeForm {
    #[default]
    Eigen,
    AsWritten,
}

impl std::str::FromStr for DerivativeForm {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen" => Ok(DerivativeForm::Eigen),
            "as-written" => Ok(DerivativeForm::AsWritten),
            _ => Err(QError::Parse(format!(
                "derivative form must be eigen or as-written, got {s:?}"
            ))),
        }
    }
}

fn dunkl_at(
    fe_in: C64,
    fe_out: C64,
    fo_mid: C64,
    fo_in: C64,
    x: f64,
    q: f64,
    w: f64,
    form: DerivativeForm,
) -> C64 {
    // fe_out = f_e(x/q), fe_in = f_e(x), fo_mid = f_o(x), fo_in = f_o(qx)
    let even_weight = match form {
        DerivativeForm::Eigen => 1.0,
        DerivativeForm::AsWritten => w,
    };
    let den = (1.0 - q) * x;
    (fe_out - fe_in * even_weight) / den + (fo_mid - fo_in * w) / den
}

/// `∂_{q,α} f` at every grid point whose neighbours `x/q` and `qx` are
/// sampled; the result lives on the window shrunk by one on each side.
pub fn q_derivative_alpha(f: &GridFunction, form: DerivativeForm) -> Result<GridFunction> {
    let w = f.window;
    if w.len() < 3 {
        return Err(QError::WindowTooSmall(format!(
            "the q-derivative needs at least 3 exponents, window {w} has {}",
            w.len()
        )));
    }
    let out = w.shrink(1)?;
    let parts = even_odd_parts(f);
    let q = f.params.q();
    let wgt = q.powf(2.0 * f.params.alpha() + 1.0);
    let branch = |s: Sign| -> Vec<C64> {
        let fe = parts.even.branch(s);
        let fo = parts.odd.branch(s);
        out.exponents()
            .map(|n| {
                let i = (n - w.n_min) as usize;
                // x/q = ±q^{n-1} sits at index i-1, qx at i+1
                dunkl_at(fe[i], fe[i - 1], fo[i], fo[i + 1], f.point(s, n), q, wgt, form)
            })
            .collect()
    };
    GridFunction::new(f.params, out, branch(Sign::Plus), branch(Sign::Minus))
}

/// `∂_{q,α} f(x)` for a callable `f`. At `x = 0` the value is
/// `[2α+2]_q f'(0)` and `f'(0)` must be supplied.
pub fn q_derivative_alpha_fn<F>(
    f: F,
    x: f64,
    params: &QParams,
    form: DerivativeForm,
    derivative_at_zero: Option<C64>,
) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    let q = params.q();
    if x == 0.0 {
        let d = derivative_at_zero.ok_or(QError::MissingDerivative)?;
        return Ok(d * q_number(&(2.0 * params.alpha() + 2.0), &q)?);
    }
    if !x.is_finite() {
        return Err(QError::Domain(format!("x must be finite, got {x}")));
    }
    let even = |y: f64| (f(y) + f(-y)) * 0.5;
    let odd = |y: f64| (f(y) - f(-y)) * 0.5;
    let wgt = q.powf(2.0 * params.alpha() + 1.0);
    Ok(dunkl_at(
        even(x),
        even(x / q),
        odd(x),
        odd(q * x),
        x,
        q,
        wgt,
        form,
    ))
}

/// A truncated Jackson sum with an estimate of what the window cut off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacksonSum {
    pub value: C64,
    /// Magnitude of the two boundary terms.
    pub tail_estimate: f64,
    /// Boundary terms exceed [`WINDOW_WARNING_TOL`] of the sum.
    pub window_warning: bool,
}

fn finish(terms: Vec<C64>) -> JacksonSum {
    let value = sum_c64(terms.iter().copied());
    let tail_estimate = match (terms.first(), terms.last()) {
        (Some(a), Some(b)) if terms.len() > 1 => a.norm() + b.norm(),
        (Some(a), _) => a.norm(),
        _ => 0.0,
    };
    let window_warning = tail_estimate > WINDOW_WARNING_TOL * value.norm() && tail_estimate > 0.0;
    JacksonSum {
        value,
        tail_estimate,
        window_warning,
    }
}

/// `(1-q) Σ qⁿ f(qⁿ)` over the window.
pub fn jackson_integral_0_inf(f: &GridFunction) -> JacksonSum {
    let q = f.params.q();
    let terms = f
        .window
        .exponents()
        .zip(&f.pos)
        .map(|(n, &v)| v * ((1.0 - q) * q.powi(n)))
        .collect();
    finish(terms)
}

/// `(1-q) Σ qⁿ [f(qⁿ) + f(-qⁿ)]` over the window.
///
/// Each pair is added before weighting, so odd functions integrate to an
/// exact zero.
pub fn jackson_integral_r(f: &GridFunction) -> JacksonSum {
    let q = f.params.q();
    let terms = f
        .window
        .exponents()
        .zip(f.pos.iter().zip(&f.neg))
        .map(|(n, (&a, &b))| (a + b) * ((1.0 - q) * q.powi(n)))
        .collect();
    finish(terms)
}

/// `p` in `‖f‖_{q,α,p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormExponent {
    Finite(f64),
    Infinity,
}

/// `|x|^{2α+1}` at `x = ±qⁿ`.
pub fn grid_weight(params: &QParams, n: i32) -> f64 {
    (f64::from(n) * (2.0 * params.alpha() + 1.0) * params.q().ln()).exp()
}

/// Weighted norm `(∫ |f|^p |x|^{2α+1} d_q x)^{1/p}` over both branches, or
/// `sup |f(x)| |x|^{2α+1}` for `p = ∞`.
pub fn lp_norm(f: &GridFunction, p: NormExponent) -> Result<f64> {
    let q = f.params.q();
    let pairs = f.window.exponents().zip(f.pos.iter().zip(&f.neg));
    match p {
        NormExponent::Infinity => Ok(pairs
            .map(|(n, (a, b))| a.norm().max(b.norm()) * grid_weight(&f.params, n))
            .fold(0.0, f64::max)),
        NormExponent::Finite(p) => {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(QError::Domain(format!("norm exponent must be >= 1, got {p}")));
            }
            let total = sum_f64(pairs.map(|(n, (a, b))| {
                let w = (1.0 - q) * q.powi(n) * grid_weight(&f.params, n);
                (a.norm().powf(p) + b.norm().powf(p)) * w
            }));
            Ok(total.powf(1.0 / p))
        }
    }
}
