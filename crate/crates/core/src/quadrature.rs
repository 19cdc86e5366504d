//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Maximum bisection depth before giving up on a subinterval.
pub const MAX_DEPTH: u32 = 48;

/// One G7K15 panel: `(kronrod estimate, |kronrod - gauss|)`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = half * XGK[k];
        let s = f(centre - dx) + f(centre + dx);
        kronrod += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` (either orientation) to absolute tolerance
/// `tol` by recursive bisection.
///
/// Fails with the offending subinterval when a panel cannot reach its share
/// of the tolerance within [`MAX_DEPTH`] bisections or produces a non-finite
/// value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let (whole, err) = gk15(&f, a, b);
    recurse(&f, a, b, whole, err, tol, 0)
}

fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, err: f64, tol: f64, depth: u32) -> Result<f64> {
    if !whole.is_finite() {
        return Err(Error::Quadrature { lo: a, hi: b });
    }
    // roundoff floor relative to the panel value
    if err <= tol.max(50.0 * f64::EPSILON * whole.abs()) {
        return Ok(whole);
    }
    if depth >= MAX_DEPTH || b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
        return Err(Error::Quadrature { lo: a, hi: b });
    }
    let mid = 0.5 * (a + b);
    let (left, el) = gk15(f, a, mid);
    let (right, er) = gk15(f, mid, b);
    Ok(recurse(f, a, mid, left, el, 0.5 * tol, depth + 1)? + recurse(f, mid, b, right, er, 0.5 * tol, depth + 1)?)
}
