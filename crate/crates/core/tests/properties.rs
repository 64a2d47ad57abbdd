use proptest::prelude::*;

use q2fourier::gridio::{parse_csv, parse_json, to_csv, to_json};
use q2fourier::qcalculus::{even_odd_parts, jackson_integral_r, q_derivative_alpha, DerivativeForm, GridFunction, GridWindow, Sign};
use q2fourier::qcore::{gen_q_factorial, gen_q_integer, gen_q_shifted_factorial, gen_q_shifted_factorial_products, q_pochhammer};
use q2fourier::qfourier::{forward_transform, make_plan, suggested_output_window};
use q2fourier::qtrig::{cos_alpha, sin_alpha};
use q2fourier::{QParams, SeriesControl, C64};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn grid(p: QParams, lo: i32, vals: &[(f64, f64, f64, f64)]) -> GridFunction {
    let w = GridWindow::new(lo, lo + vals.len() as i32 - 1).unwrap();
    let pos = vals.iter().map(|v| C64::new(v.0, v.1)).collect();
    let neg = vals.iter().map(|v| C64::new(v.2, v.3)).collect();
    GridFunction::new(p, w, pos, neg).unwrap()
}

fn values(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_recurrence(a in -2.0..2.0f64, q in 0.05..0.95f64, n in 0u32..30) {
        let lhs = q_pochhammer(&a, &q, n + 1).unwrap();
        let rhs = q_pochhammer(&a, &q, n).unwrap() * (1.0 - a * q.powi(n as i32));
        prop_assert!(close(lhs, rhs, 1e-13) || (lhs - rhs).abs() < 1e-300);
    }

    #[test]
    fn gen_factorial_ratio_is_gen_integer(q in 0.05..0.95f64, alpha in -0.5..3.0f64, n in 1u32..25) {
        let ratio = gen_q_factorial(n, &q, &alpha).unwrap() / gen_q_factorial(n - 1, &q, &alpha).unwrap();
        prop_assert!(close(ratio, gen_q_integer(n, &q, &alpha).unwrap(), 1e-13));
    }

    #[test]
    fn shifted_factorial_product_form(q in 0.05..0.95f64, alpha in -0.5..3.0f64, n in 0u32..25) {
        let a = gen_q_shifted_factorial(n, &q, &alpha).unwrap();
        let b = gen_q_shifted_factorial_products(n, &q, &alpha).unwrap();
        prop_assert!(close(a, b, 1e-12));
    }

    #[test]
    fn trig_parity(q in 0.1..0.9f64, alpha in -0.5..2.0f64, x in -3.0..3.0f64) {
        let p = QParams::new(q, alpha).unwrap();
        let ctrl = SeriesControl::default();
        let c = |x: f64| cos_alpha(C64::new(x, 0.0), &p, &ctrl).unwrap();
        let s = |x: f64| sin_alpha(C64::new(x, 0.0), &p, &ctrl).unwrap();
        prop_assert_eq!(c(x), c(-x));
        prop_assert_eq!(s(x), -s(-x));
    }

    #[test]
    fn transform_is_linear(f in values(1..6), g in values(1..6), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let n = f.len().min(g.len());
        let p = QParams::new(0.5, 0.0).unwrap();
        let (f, g) = (grid(p, 0, &f[..n]), grid(p, 0, &g[..n]));
        let out = suggested_output_window(&p, f.window());
        let plan = make_plan(p, f.window(), out, SeriesControl::default()).unwrap();
        let (a, b) = (C64::new(a, 0.0), C64::new(b, 0.0));
        let lhs = forward_transform(&f.combine(a, &g, b).unwrap(), &plan).unwrap();
        let rhs = forward_transform(&f, &plan).unwrap().combine(a, &forward_transform(&g, &plan).unwrap(), b).unwrap();
        let scale = lhs.sup_norm().max(1.0);
        for ((_, _, x), (_, _, y)) in lhs.samples().zip(rhs.samples()) {
            prop_assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn hermitian_symmetry_for_real_input(v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6), alpha in prop::sample::select(vec![-0.5, 0.0, 1.0])) {
        let p = QParams::new(0.5, alpha).unwrap();
        let vals: Vec<_> = v.iter().map(|&(a, b)| (a, 0.0, b, 0.0)).collect();
        let f = grid(p, -1, &vals);
        let out = suggested_output_window(&p, f.window());
        let plan = make_plan(p, f.window(), out, SeriesControl::default()).unwrap();
        let fh = forward_transform(&f, &plan).unwrap();
        let scale = fh.sup_norm().max(f64::MIN_POSITIVE);
        for n in out.exponents() {
            let (up, down) = (fh.get(Sign::Plus, n).unwrap(), fh.get(Sign::Minus, n).unwrap());
            prop_assert!((down - up.conj()).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn even_odd_recombine(v in values(1..8), q in 0.1..0.9f64) {
        let f = grid(QParams::new(q, 0.0).unwrap(), -2, &v);
        let parts = even_odd_parts(&f);
        let back = parts.recombine().unwrap();
        for ((_, _, x), (_, _, y)) in f.samples().zip(back.samples()) {
            prop_assert!((x - y).norm() <= 1e-15 * x.norm().max(1.0));
        }
    }

    #[test]
    fn odd_functions_integrate_to_zero(v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..8), alpha in -0.5..2.0f64) {
        let vals: Vec<_> = v.iter().map(|&(a, b)| (a, b, -a, -b)).collect();
        let f = grid(QParams::new(0.5, alpha).unwrap(), 0, &vals);
        prop_assert_eq!(jackson_integral_r(&f).value, C64::new(0.0, 0.0));
    }

    #[test]
    fn derivative_is_linear(f in values(3..8), a in -2.0..2.0f64) {
        let p = QParams::new(0.6, 0.5).unwrap();
        let f = grid(p, 0, &f);
        let a = C64::new(a, 0.0);
        let d = q_derivative_alpha(&f.scale(a).unwrap(), DerivativeForm::Eigen).unwrap();
        let e = q_derivative_alpha(&f, DerivativeForm::Eigen).unwrap().scale(a).unwrap();
        for ((_, _, x), (_, _, y)) in d.samples().zip(e.samples()) {
            prop_assert!((x - y).norm() <= 1e-13 * x.norm().max(1.0));
        }
    }

    #[test]
    fn grid_files_round_trip(v in prop::collection::vec((any::<f64>(), -1e300..1e300f64, -1e-300..1e-300f64, -5.0..5.0f64), 1..6), lo in -20i32..20) {
        let v: Vec<_> = v.into_iter().map(|(a, b, c, d)| (if a.is_finite() { a } else { 0.0 }, b, c, d)).collect();
        let f = grid(QParams::new(0.3, 1.5).unwrap(), lo, &v);
        let csv = to_csv(&f).unwrap();
        let g = parse_csv(&csv, *f.params()).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(to_csv(&g).unwrap(), csv);
        let json = to_json(&f).unwrap();
        let h = parse_json(&json).unwrap();
        prop_assert_eq!(&h, &f);
        prop_assert_eq!(to_json(&h).unwrap(), json);
    }
}
