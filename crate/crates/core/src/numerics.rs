//! Composite Simpson quadrature, golden-section extremum search and sign-change
//! bisection.

/// `(3 - sqrt(5)) / 2`, the golden-section interior fraction.
const GOLDEN_FRACTION: f64 = 0.381_966_011_250_105_1;

/// Composite Simpson rule over equally spaced samples. `values.len()` must be
/// odd and at least 3.
pub fn simpson_samples(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(
        n >= 3 && n % 2 == 1,
        "Simpson needs an even number of panels"
    );
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (values[0] + values[n - 1] + 4.0 * odd + 2.0 * even)
}

/// Simpson on `values` and on every other sample of `values`. Returns the fine
/// estimate and the absolute change from the coarse one. Needs `len - 1`
/// divisible by 4.
pub fn simpson_step_doubling(values: &[f64], h: f64) -> (f64, f64) {
    let fine = simpson_samples(values, h);
    let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
    let coarse = simpson_samples(&coarse, 2.0 * h);
    (fine, (fine - coarse).abs())
}

/// Composite Simpson of `f` over `[a, b]` with `panels` (even, >= 4 and
/// divisible by 4) panels, with the step-doubling delta.
pub fn simpson_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> (f64, f64) {
    assert!(panels >= 4 && panels.is_multiple_of(4));
    let h = (b - a) / panels as f64;
    let values: Vec<f64> = (0..=panels)
        .map(|i| {
            let t = if i == panels { b } else { a + h * i as f64 };
            f(t)
        })
        .collect();
    simpson_step_doubling(&values, h)
}

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping when the
/// bracket is narrower than `tol`. The better of the bracket endpoints and
/// the interior estimate is returned as `(x, f(x))`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let fa = f(lo);
    let fb = f(hi);
    let mut a = lo;
    let mut b = hi;
    let mut x1 = a + GOLDEN_FRACTION * (b - a);
    let mut x2 = b - GOLDEN_FRACTION * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + GOLDEN_FRACTION * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - GOLDEN_FRACTION * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    let candidates = [(lo, fa), (hi, fb), (x1, f1), (x2, f2), (mid, f(mid))];
    candidates
        .into_iter()
        .fold((lo, fa), |best, c| if c.1 < best.1 { c } else { best })
}

/// Golden-section search for a maximum.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_section_min(|t| -f(t), a, b, tol);
    (x, -v)
}

/// Bisection for a sign change of `f` on `[a, b]`, where `f(a)` and `f(b)`
/// have opposite signs. Stops when the bracket is below `tol`.
pub fn bisect_sign_change<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
