//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! Integrands are fallible so that nested integrals can propagate their own
//! convergence failures.

// Node and weight tables are quoted in full.
#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections of any one subinterval.
    pub max_depth: u32,
    /// Radius beyond which `[a, ∞)` integrals switch to the `r = c/t` map.
    pub tail_cutoff_radius: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-9, rel_tol: 1e-6, max_depth: 60, tail_cutoff_radius: 1000.0 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self, ball_radius: f64) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::param("quadrature", "tolerances must be > 0"));
        }
        if !(self.tail_cutoff_radius > ball_radius && self.tail_cutoff_radius.is_finite()) {
            return Err(Error::param("tail_cutoff_radius", "must be finite and exceed D"));
        }
        Ok(())
    }
}

/// An integral estimate with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

impl core::ops::Add for Integral {
    type Output = Integral;
    fn add(self, o: Integral) -> Integral {
        Integral { value: self.value + o.value, error: self.error + o.error }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

fn kronrod<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs_k = k.abs();
    let mut fv = [(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        fv[j] = (f1, f2);
        k += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * k;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let value = k * h;
    let asc = asc * h.abs();
    let abs_k = abs_k * h.abs();
    // Error scaling of the classic QUADPACK routine.
    let mut err = ((k - g) * h).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * libm::fmin(1.0, libm::pow(200.0 * err / asc, 1.5));
    }
    if abs_k > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = libm::fmax(err, 50.0 * f64::EPSILON * abs_k);
    }
    if !value.is_finite() {
        return Err(Error::Quadrature { lower: a, upper: b, partial: value, error: f64::INFINITY });
    }
    Ok((value, err))
}

const MAX_PIECES: usize = 2000;

/// `∫_a^b f`, adaptive until the error estimate meets
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(Integral::default());
    }
    let (value, error) = kronrod(&mut f, a, b)?;
    let tol = |v: f64| libm::fmax(cfg.abs_tol, cfg.rel_tol * v.abs());
    if error <= tol(value) {
        return Ok(Integral { value, error });
    }
    let mut pieces: Vec<Piece> = Vec::with_capacity(32);
    pieces.push(Piece { a, b, value, error, depth: 0 });
    let mut total = value;
    let mut total_err = error;
    loop {
        if total_err <= tol(total) {
            return Ok(Integral { value: total, error: total_err });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < cfg.max_depth && splittable(p.a, p.b))
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst.filter(|_| pieces.len() < MAX_PIECES) else {
            return Err(Error::Quadrature { lower: a, upper: b, partial: total, error: total_err });
        };
        let p = pieces[i];
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = kronrod(&mut f, p.a, m)?;
        let (v2, e2) = kronrod(&mut f, m, p.b)?;
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        pieces[i] = Piece { a: p.a, b: m, value: v1, error: e1, depth: p.depth + 1 };
        pieces.push(Piece { a: m, b: p.b, value: v2, error: e2, depth: p.depth + 1 });
        // Resum occasionally so running corrections do not drift.
        if pieces.len() % 64 == 0 {
            total = pieces.iter().map(|p| p.value).sum();
            total_err = pieces.iter().map(|p| p.error).sum();
        }
    }
}

fn splittable(a: f64, b: f64) -> bool {
    let m = 0.5 * (a + b);
    m > a.min(b) && m < a.max(b) && (b - a).abs() > 4.0 * f64::EPSILON * (a.abs() + b.abs())
}

/// `∫_a^∞ f`. The head up to the tail cutoff is integrated directly, the rest
/// through `r = c/t` on `(0, 1]`.
pub fn integrate_to_infinity<F>(mut f: F, a: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = libm::fmax(a, cfg.tail_cutoff_radius);
    let head = if c > a { integrate(&mut f, a, c, cfg)? } else { Integral::default() };
    let tail = integrate(|t: f64| Ok(f(c / t)? * c / (t * t)), 0.0, 1.0, cfg)?;
    Ok(head + tail)
}

/// `∫_a^b f` for integrands with inverse-square-root behaviour at either end,
/// through `r = a + (b − a)(1 − cos πt)/2`.
pub fn integrate_sqrt_ends<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(Integral::default());
    }
    let half = 0.5 * (b - a);
    integrate(
        |t: f64| {
            let r = a + half * (1.0 - libm::cos(PI * t));
            Ok(f(r)? * half * PI * libm::sin(PI * t))
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Nodes and weights of the 15-point Kronrod rule on `panels` equal pieces of
/// `[a, b]`. The fixed-rule counterpart of [`integrate`].
pub fn fixed_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(15 * panels);
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let c = lo + 0.5 * width;
        let h = 0.5 * width;
        for j in 0..7 {
            out.push((c - h * XGK[j], h * WGK[j]));
        }
        out.push((c, h * WGK[7]));
        for j in (0..7).rev() {
            out.push((c + h * XGK[j], h * WGK[j]));
        }
    }
    out
}

/// [`fixed_rule`] through the cosine map of [`integrate_sqrt_ends`].
pub fn fixed_rule_sqrt_ends(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    fixed_rule(0.0, 1.0, panels)
        .into_iter()
        .map(|(t, w)| (a + half * (1.0 - libm::cos(PI * t)), w * half * PI * libm::sin(PI * t)))
        .collect()
}

/// [`fixed_rule`] on `[c, ∞)` through `r = c/t`.
pub fn fixed_rule_tail(c: f64, panels: usize) -> Vec<(f64, f64)> {
    fixed_rule(0.0, 1.0, panels).into_iter().map(|(t, w)| (c / t, w * c / (t * t))).collect()
}
