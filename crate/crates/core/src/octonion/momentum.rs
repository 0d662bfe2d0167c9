//! Momentum certificate for the octonionic geodesics.
//!
//! For a unit `x`, `y ⟂ x` with `n = ‖y‖`, take the orthonormal frame
//! `x₁ = x`, `x₂ = y/n`, `x₃ = x₁ × x₂` completed by Gram–Schmidt, and the
//! basis of `𝔤 = ℝ⁷⋊𝔬(7)`
//!
//! ```text
//! (x_i, λL_{x_i}),   (0, L_{x_i}),   (0, G_j)      (G_j a basis of 𝔤₂)
//! ```
//!
//! with dual basis `δ_i, ν_i, ζ_j`. The cometric sends `δ_i` to
//! `(x_i, λL_{x_i})` and kills `ν_i, ζ_j`. With `X = (x, λL_x + Z(x,y))` and
//! `Z = Z(x,y)`, the covector `α = δ₁ + cν₁ + dν₃` is the initial momentum of
//! `exp(tX)exp(−tZ)` exactly when `b(α) = X − Z`, `α∘ad_X = 0` and
//! `α∘ad_Z = 0` on `𝔤₂`, which forces `c = 2/(3λ)` and `d = −2n/(3λ²)`.

use super::cross::{basis_vector, cross, dot, norm, scale, Vec7};
use super::g2::build_g2_basis;
use super::motion::{standard_basis, MotionElement};
use super::{check_octo_inputs, l_op, z_op};
use crate::error::{Result, ScrewError};
use crate::tolerances;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// A covector on `ℝ⁷⋊𝔬(7)`, stored as coefficients against the dual of a
/// declared basis.
#[derive(Clone, Debug)]
pub struct Covector {
    /// Coefficients against the dual basis.
    pub coefficients: Vec<f64>,
    /// The functional in standard coordinates: `α(v) = weights · coords(v)`.
    weights: DVector<f64>,
}

impl Covector {
    pub fn eval(&self, v: &MotionElement) -> f64 {
        self.weights.dot(&DVector::from_column_slice(&v.coords()))
    }
}

/// Orthonormal frame from Gram–Schmidt over `seed` followed by `e₁, …, e₇`.
pub fn complete_frame(seed: &[Vec7]) -> Vec<Vec7> {
    let mut frame: Vec<Vec7> = Vec::with_capacity(7);
    for v in seed.iter().copied().chain((0..7).map(basis_vector)) {
        let mut w = v;
        for _ in 0..2 {
            for f in &frame {
                let c = dot(f, &w);
                w = std::array::from_fn(|i| w[i] - c * f[i]);
            }
        }
        let n = norm(&w);
        if n > 1e-8 && frame.len() < 7 {
            frame.push(scale(1.0 / n, &w));
        }
    }
    frame
}

/// Residuals of the momentum conditions for one geodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumCertificate {
    pub lambda: f64,
    /// `‖y‖`.
    pub n: f64,
    pub c: f64,
    pub d: f64,
    /// `‖b(α) − (X − Z)‖`.
    pub cometric_residual: f64,
    /// `max |α([X, X′])|` over a basis of `𝔤`.
    pub ad_x_residual: f64,
    /// `max |α(0, [Z, W])|` over a basis of `𝔤₂`.
    pub ad_z_residual: f64,
    /// `max |α(0, G_j)|`: the momentum vanishes on `{0}×𝔤₂`.
    pub g2_vanishing: f64,
    /// `½ α(b(α))`.
    pub hamiltonian: f64,
    /// `|½ α(b(α)) − ½‖x‖²|`.
    pub hamiltonian_residual: f64,
    /// Distance of the adapted dual pairing from the identity.
    pub duality_residual: f64,
}

impl MomentumCertificate {
    pub fn max_residual(&self) -> f64 {
        self.cometric_residual
            .max(self.ad_x_residual)
            .max(self.ad_z_residual)
            .max(self.g2_vanishing)
            .max(self.hamiltonian_residual)
            .max(self.duality_residual)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Builds the adapted basis and `α = δ₁ + cν₁ + dν₃` and evaluates all the
/// momentum conditions. `y = 0` takes `α = δ₁`.
pub fn certify_octo_momentum(x: &Vec7, y: &Vec7, lambda: f64) -> Result<MomentumCertificate> {
    momentum_residuals(x, y, lambda, None)
}

/// Same as [`certify_octo_momentum`], with `(c, d)` overridden when given.
pub fn momentum_residuals(x: &Vec7, y: &Vec7, lambda: f64, coefficients: Option<(f64, f64)>) -> Result<MomentumCertificate> {
    check_octo_inputs(x, y, lambda)?;
    if (norm(x) - 1.0).abs() > tolerances::EXACT {
        return Err(ScrewError::Precondition(format!(
            "x must be a unit vector (|x| = {}); rescale the parameter first",
            norm(x)
        )));
    }
    let n = norm(y);
    let degenerate = n <= tolerances::EXACT;
    let frame = if degenerate {
        complete_frame(&[*x])
    } else {
        let x2 = scale(1.0 / n, y);
        complete_frame(&[*x, x2, cross(x, &x2)])
    };
    if frame.len() != 7 {
        return Err(ScrewError::Numeric("frame completion lost rank".into()));
    }

    let g2 = build_g2_basis();
    let mut basis: Vec<MotionElement> = frame
        .iter()
        .map(|f| MotionElement::new(*f, l_op(f).scale(lambda)))
        .collect::<Result<_>>()?;
    basis.extend(frame.iter().map(|f| MotionElement::pure_rotation(l_op(f))));
    basis.extend(g2.elements().iter().map(|g| MotionElement::pure_rotation(g.clone())));

    let coords = DMatrix::from_fn(28, 28, |r, c| basis[c].coords()[r]);
    let dual = coords.clone().try_inverse().ok_or(ScrewError::Singular("adapted basis"))?;
    let duality_residual = (&dual * &coords - DMatrix::<f64>::identity(28, 28)).amax();

    let (c, d) = coefficients.unwrap_or(if degenerate {
        (0.0, 0.0)
    } else {
        (2.0 / (3.0 * lambda), -2.0 * n / (3.0 * lambda * lambda))
    });
    let mut coefficients = vec![0.0; 28];
    coefficients[0] = 1.0;
    coefficients[7] = c;
    coefficients[9] = d;
    let alpha = Covector {
        weights: dual.transpose() * DVector::from_column_slice(&coefficients),
        coefficients,
    };

    // b(α) = Σ α(δ-slot i)·(x_i, λL_{x_i})
    let mut b_alpha = MotionElement::zero();
    for (i, e) in basis.iter().take(7).enumerate() {
        b_alpha = b_alpha.add(&e.scale(alpha.coefficients[i]));
    }
    let z = z_op(x, y);
    let big_x = MotionElement::new(*x, &l_op(x).scale(lambda) + &z)?;
    let big_z = MotionElement::pure_rotation(z);
    let cometric_residual = b_alpha.dist(&big_x.sub(&big_z));

    let ad_x_residual = standard_basis()
        .iter()
        .map(|e| alpha.eval(&big_x.bracket(e)).abs())
        .fold(0.0, f64::max);
    let ad_z_residual = g2
        .elements()
        .iter()
        .map(|w| alpha.eval(&big_z.bracket(&MotionElement::pure_rotation(w.clone()))).abs())
        .fold(0.0, f64::max);
    let g2_vanishing = g2
        .elements()
        .iter()
        .map(|w| alpha.eval(&MotionElement::pure_rotation(w.clone())).abs())
        .fold(0.0, f64::max);
    let hamiltonian = 0.5 * alpha.eval(&b_alpha);
    Ok(MomentumCertificate {
        lambda,
        n,
        c,
        d,
        cometric_residual,
        ad_x_residual,
        ad_z_residual,
        g2_vanishing,
        hamiltonian,
        hamiltonian_residual: (hamiltonian - 0.5 * dot(x, x)).abs(),
        duality_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_pair() {
        let c = certify_octo_momentum(&basis_vector(0), &basis_vector(1), 1.0).unwrap();
        assert!((c.c - 2.0 / 3.0).abs() < 1e-15 && (c.d + 2.0 / 3.0).abs() < 1e-15);
        assert!(c.passes(1e-9), "{c:?}");
        assert!((c.hamiltonian - 0.5).abs() < 1e-12);
    }

    #[test]
    fn vanishing_y() {
        let c = certify_octo_momentum(&basis_vector(3), &[0.0; 7], -0.5).unwrap();
        assert_eq!((c.c, c.d), (0.0, 0.0));
        assert!(c.passes(1e-9));
    }

    #[test]
    fn wrong_coefficients_fail() {
        let x = basis_vector(0);
        let y = scale(0.8, &basis_vector(2));
        let ok = certify_octo_momentum(&x, &y, 0.5).unwrap();
        assert!(ok.passes(1e-9));
        // α = δ₁ alone is not a momentum when y ≠ 0
        let bad = momentum_residuals(&x, &y, 0.5, Some((0.0, 0.0))).unwrap();
        assert!(bad.ad_x_residual > 0.1);
        let bad = momentum_residuals(&x, &y, 0.5, Some((ok.c, -ok.d))).unwrap();
        assert!(bad.ad_x_residual > 0.1);
    }

    #[test]
    fn preconditions() {
        assert!(certify_octo_momentum(&scale(2.0, &basis_vector(0)), &basis_vector(1), 1.0).is_err());
        assert!(certify_octo_momentum(&basis_vector(0), &basis_vector(0), 1.0).is_err());
        assert!(certify_octo_momentum(&basis_vector(0), &basis_vector(1), 0.0).is_err());
    }

    #[test]
    fn frame_is_orthonormal() {
        let x = basis_vector(0);
        let f = complete_frame(&[x, basis_vector(1), cross(&x, &basis_vector(1))]);
        assert_eq!(f.len(), 7);
        for i in 0..7 {
            for j in 0..7 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&f[i], &f[j]) - want).abs() < 1e-15);
            }
        }
        assert_eq!(f[2], basis_vector(3));
    }
}
