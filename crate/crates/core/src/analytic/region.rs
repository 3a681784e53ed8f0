//! Geometry of LoS-ball holes: overlap weights, distance laws and the
//! non-associated area.

use core::f64::consts::PI;

use crate::error::Result;
use crate::quadrature::{integrate_sqrt_ends, QuadratureConfig};

pub(crate) fn clamped_acos(c: f64) -> f64 {
    libm::acos(c.clamp(-1.0, 1.0))
}

fn clamped_sqrt(x: f64) -> f64 {
    if x > -1e-12 {
        libm::sqrt(x.max(0.0))
    } else {
        f64::NAN
    }
}

/// Cosine of the angle at the eavesdropper between the hole centre at
/// distance `u` and a point of the circle of radius `r` on the hole boundary.
fn boundary_cosine(u: f64, r: f64, d: f64) -> f64 {
    (u * u + r * r - d * d) / (2.0 * u * r)
}

/// C₁(u) = min{D, max{0, D − u}}.
pub fn c1(u: f64, d: f64) -> f64 {
    d.min((d - u).max(0.0))
}

/// C₂(u) = min{D, max{u − D, D − u}}.
pub fn c2(u: f64, d: f64) -> f64 {
    d.min((u - d).max(d - u))
}

/// C₃(u) = max{D, u − D}.
pub fn c3(u: f64, d: f64) -> f64 {
    d.max(u - d)
}

/// Angular measure of the circle of radius `r` around the eavesdropper that
/// lies outside a hole of radius `d` centred at distance `u`, in C-function
/// form, for `r ≤ d`.
pub fn in_ball_weight(u: f64, r: f64, d: f64) -> f64 {
    let mut w = 0.0;
    if r >= c1(u, d) {
        w += 2.0 * PI;
    }
    if r >= c2(u, d) && u > 0.0 {
        w -= 2.0 * clamped_acos(boundary_cosine(u, r, d));
    }
    w
}

/// The same measure for `r ≥ d`.
pub fn out_ball_weight(u: f64, r: f64, d: f64) -> f64 {
    if u > 0.0 && r >= c3(u, d) && r <= u + d {
        2.0 * PI - 2.0 * clamped_acos(boundary_cosine(u, r, d))
    } else {
        2.0 * PI
    }
}

/// [`in_ball_weight`] written case by case on the position of the hole.
pub fn in_ball_weight_by_case(u: f64, r: f64, d: f64) -> f64 {
    if u < d {
        if r >= d - u {
            2.0 * (PI - clamped_acos(boundary_cosine(u, r, d)))
        } else {
            0.0
        }
    } else if u < 2.0 * d {
        if r >= u - d {
            2.0 * PI - 2.0 * clamped_acos(boundary_cosine(u, r, d))
        } else {
            2.0 * PI
        }
    } else {
        2.0 * PI
    }
}

/// [`out_ball_weight`] written case by case.
pub fn out_ball_weight_by_case(u: f64, r: f64, d: f64) -> f64 {
    let lower = if u < 2.0 * d { d } else { u - d };
    if r >= lower && r <= u + d {
        2.0 * PI - 2.0 * clamped_acos(boundary_cosine(u, r, d))
    } else {
        2.0 * PI
    }
}

/// Distance between the eavesdropper and the intended receiver when the
/// receiver sits at angle `phi` on the circle of radius `r0` around the
/// transmitter, itself at distance `r_e` from the eavesdropper.
pub fn pair_distance(phi: f64, r_e: f64, r0: f64) -> f64 {
    clamped_sqrt(r0 * r0 + r_e * r_e - 2.0 * r0 * r_e * libm::cos(phi))
}

/// Density h(u) of [`pair_distance`] for a uniform angle; zero off the open
/// support `(|r_e − r0|, r_e + r0)`.
pub fn pair_distance_pdf(u: f64, r_e: f64, r0: f64) -> f64 {
    if !(u > (r_e - r0).abs() && u < r_e + r0) {
        return 0.0;
    }
    let k = r0 * r0 + r_e * r_e - u * u;
    let disc = 4.0 * r0 * r0 * r_e * r_e - k * k;
    if disc <= 0.0 {
        return 0.0;
    }
    2.0 * u / (PI * libm::sqrt(disc))
}

/// P(U ≥ w) for the pair distance U.
pub fn pair_distance_survival(w: f64, r_e: f64, r0: f64) -> f64 {
    if w <= (r_e - r0).abs() {
        return 1.0;
    }
    if w >= r_e + r0 {
        return 0.0;
    }
    1.0 - clamped_acos((r0 * r0 + r_e * r_e - w * w) / (2.0 * r0 * r_e)) / PI
}

/// Area of one of the two lens halves cut from a disk of radius `d` by a
/// second disk of the same radius at distance `r`.
pub fn hole_area(r: f64, d: f64) -> f64 {
    if r >= 2.0 * d {
        return 0.0;
    }
    let h = 0.5 * r;
    d * d * clamped_acos(h / d) - h * clamped_sqrt(d * d - h * h)
}

/// Density of the distance to the nearest point of a PPP of intensity `lambda`.
pub fn nn_pdf(v: f64, lambda: f64) -> f64 {
    if v < 0.0 {
        return 0.0;
    }
    2.0 * PI * lambda * v * libm::exp(-lambda * PI * v * v)
}

/// Joint density of the first two nearest-neighbour distances, zero unless
/// `0 < v1 < v2`.
pub fn nn2_pdf(v1: f64, v2: f64, lambda: f64) -> f64 {
    if !(v1 > 0.0 && v1 < v2) {
        return 0.0;
    }
    let a = 2.0 * PI * lambda;
    a * a * v1 * v2 * libm::exp(-lambda * PI * v2 * v2)
}

/// ξ(v2): fraction of the LoS ball of the nearest receiver that is not
/// associated with the second-nearest one, clamped to 1.
pub fn partial_fraction(v2: f64, lambda_r: f64, d: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if v2 >= 2.0 * d || lambda_r == 0.0 {
        return Ok(0.0);
    }
    let area = integrate_sqrt_ends(|r| Ok(hole_area(r, d) * r), v2, 2.0 * d, cfg)?.value;
    let denom = d * d - 0.25 * v2 * v2;
    Ok((2.0 * lambda_r * area / denom).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hole_area_values() {
        let d = 200.0;
        assert_eq!(hole_area(2.0 * d, d), 0.0);
        assert!((hole_area(0.0, d) - PI * d * d / 2.0).abs() < 1e-9);
        let a = hole_area(200.0, d);
        assert!((a - (4e4 * PI / 3.0 - 100.0 * 3e4f64.sqrt())).abs() < 1e-8);
        assert!((a - 24_567.394).abs() < 1e-3);
    }

    #[test]
    fn pdf_reference_value() {
        let h = pair_distance_pdf(100.0 * 2f64.sqrt(), 100.0, 100.0);
        assert!((h - 200.0 * 2f64.sqrt() / (PI * 2e4)).abs() < 1e-15);
        assert!((h - 4.50e-3).abs() < 5e-6);
        assert_eq!(pair_distance_pdf(5.0, 100.0, 120.0), 0.0);
        assert_eq!(pair_distance_pdf(250.0, 100.0, 120.0), 0.0);
        assert_eq!(pair_distance_pdf(140.0, 80.0, 100.0), pair_distance_pdf(140.0, 100.0, 80.0));
    }

    #[test]
    fn weights_at_extremes() {
        let d = 200.0;
        for r in [1.0, 50.0, 199.0] {
            assert_eq!(in_ball_weight(0.0, r, d), 0.0);
            assert_eq!(in_ball_weight(450.0, r, d), 2.0 * PI);
        }
        assert_eq!(out_ball_weight(0.0, 250.0, d), 2.0 * PI);
    }
}
