//! Matrix exponential and the matrix cosine/sine, by scaling and squaring a
//! truncated Taylor series.
//!
//! The matrices handled here are small (at most 16×16 after embedding) and of
//! moderate norm, so a plain Taylor series on `A/2^s` with `‖A/2^s‖_F ≤ 1/2`
//! is accurate to rounding. Quaternionic input is exponentiated through its
//! complex embedding.

use super::mat::Mat;
use super::scalar::Field;
use crate::error::{dim_err, Result};

/// Highest Taylor term kept.
pub const MAX_TERMS: usize = 18;
/// Scaling target for `‖A‖_F / 2^s`.
pub const SCALED_NORM: f64 = 0.5;

fn squarings_for(norm: f64) -> u32 {
    if norm <= SCALED_NORM {
        0
    } else {
        (norm / SCALED_NORM).log2().ceil().max(0.0) as u32
    }
}

/// `e^A`.
///
/// `exp(0) = I` exactly: the series short-circuits once a term vanishes.
pub fn mat_exp(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(dim_err("mat_exp", format!("{}x{} is not square", a.rows(), a.cols())));
    }
    if a.field() == Field::Quaternion {
        let e = exp_square(&a.complex_embedding());
        return Ok(Mat::from_complex_embedding(&e));
    }
    Ok(exp_square(a))
}

fn exp_square(a: &Mat) -> Mat {
    let n = a.rows();
    let norm = a.frobenius_norm();
    let s = squarings_for(norm);
    let scaled = a.scale(0.5f64.powi(s as i32));
    let mut sum = Mat::identity(n, a.field());
    let mut term = Mat::identity(n, a.field());
    for k in 1..=MAX_TERMS {
        term = (&term * &scaled).scale(1.0 / k as f64);
        let tn = term.frobenius_norm();
        sum += &term;
        if tn <= f64::EPSILON * 1e-3 * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `(cos Z, sin Z)` by their power series.
///
/// The odd and even terms of the exponential series of the scaled argument
/// give sine and cosine; the double-angle formulas undo the scaling. Works
/// natively over every field since only powers of `Z` appear.
pub fn mat_cos_sin(z: &Mat) -> Result<(Mat, Mat)> {
    if !z.is_square() {
        return Err(dim_err("mat_cos_sin", format!("{}x{} is not square", z.rows(), z.cols())));
    }
    let n = z.rows();
    let s = squarings_for(z.frobenius_norm());
    let scaled = z.scale(0.5f64.powi(s as i32));
    let sq = &scaled * &scaled;
    let mut cos = Mat::identity(n, z.field());
    let mut sin = scaled.clone();
    let mut even = Mat::identity(n, z.field());
    let mut odd = scaled.clone();
    let mut k = 1usize;
    while 2 * k < MAX_TERMS + 2 {
        // even_k = (−1)^k Z^{2k}/(2k)!,  odd_k = (−1)^k Z^{2k+1}/(2k+1)!
        even = (&even * &sq).scale(-1.0 / ((2 * k - 1) * (2 * k)) as f64);
        odd = (&odd * &sq).scale(-1.0 / ((2 * k) * (2 * k + 1)) as f64);
        cos += &even;
        sin += &odd;
        if even.frobenius_norm().max(odd.frobenius_norm()) <= f64::EPSILON * 1e-3 {
            break;
        }
        k += 1;
    }
    for _ in 0..s {
        let c2 = &(&cos * &cos) - &(&sin * &sin);
        let s2 = (&sin * &cos).scale(2.0);
        cos = c2;
        sin = s2;
    }
    Ok((cos, sin))
}
