//! Rigid motions of the three-dimensional space forms as 4×4 matrices.
//!
//! For `κ ∈ {1, −1, 0}` the group `G_κ` is `SO(4)`, `SO_o(1,3)` or the
//! Euclidean motion group, with Lie algebra
//! `{[[0, −κaᵗ], [a, B]] : a ∈ ℝ³, B ∈ 𝔬(3)}`. The map
//! `[[0, −κaᵗ], [a, B]] ↦ (L_a, B)` is an isomorphism onto `𝔤_κ` for
//! `K = SO(3)`.

use crate::algebra::{mat_exp, Field, Mat, Scalar};
use crate::compactgroups::{hat3, vee3};
use crate::error::{Result, ScrewError};
use crate::screwcore::{is_degenerate_pitch, Curvature, KkElement};

/// `[[0, −κaᵗ], [a, B]]`.
pub fn algebra_element(kappa: i64, a: [f64; 3], b: &Mat) -> Mat {
    let mut m = Mat::zeros(4, 4, Field::Real);
    for i in 0..3 {
        m.set(i + 1, 0, Scalar::real(a[i]));
        m.set(0, i + 1, Scalar::real(-(kappa as f64) * a[i]));
        for j in 0..3 {
            m.set(i + 1, j + 1, Scalar::real(b.re(i, j)));
        }
    }
    m
}

/// `D_λ(x) = [[0, −κxᵗ], [x, λL_x]]`.
pub fn distribution_element(kappa: i64, lambda: f64, x: [f64; 3]) -> Mat {
    algebra_element(kappa, x, &hat3(x).scale(lambda))
}

/// The isomorphism onto `𝔤_κ` for `K = SO(3)`.
pub fn to_kk(m: &Mat, kappa: i64) -> Result<KkElement> {
    let k = Curvature::from_sign(kappa)?;
    let a = [m.re(1, 0), m.re(2, 0), m.re(3, 0)];
    KkElement::new(hat3(a), m.block(1, 1, 3, 3), k)
}

/// Inverse of [`to_kk`].
pub fn from_kk(e: &KkElement) -> Mat {
    algebra_element(e.k.sign(), vee3(&e.x), &e.y)
}

/// The explicit geodesic
/// `exp(t[[0, −κxᵗ], [x, L_{λx+y}]]) · exp(t[[0, 0], [0, −L_y]])`.
///
/// Requires `λ² ≠ κ`, the pitches where the system is controllable.
pub fn space_form_geodesic(kappa: i64, lambda: f64, x: [f64; 3], y: [f64; 3], t: f64) -> Result<Mat> {
    let k = Curvature::from_sign(kappa)?;
    if is_degenerate_pitch(k, lambda) {
        return Err(ScrewError::Precondition(format!(
            "lambda^2 = kappa (kappa = {kappa}, lambda = {lambda}): no sub-Riemannian structure"
        )));
    }
    let rot = hat3([lambda * x[0] + y[0], lambda * x[1] + y[1], lambda * x[2] + y[2]]);
    let a = algebra_element(kappa, x, &rot).scale(t);
    let b = algebra_element(kappa, [0.0; 3], &hat3(y)).scale(-t);
    Ok(&mat_exp(&a)? * &mat_exp(&b)?)
}

/// Group relation residual of a 4×4 element: `gᵗ J g = J` with
/// `J = diag(κ, 1, 1, 1)` for `κ = ±1`; for `κ = 0` the first row must be
/// `e₀ᵗ` and the rotation block orthogonal.
pub fn group_residual(g: &Mat, kappa: i64) -> f64 {
    if kappa == 0 {
        let mut r = (g.re(0, 0) - 1.0).abs();
        for j in 1..4 {
            r = r.max(g.re(0, j).abs());
        }
        let b = g.block(1, 1, 3, 3);
        return r.max(b.unitarity_residual());
    }
    let j = Mat::diagonal(
        &[Scalar::real(kappa as f64), Scalar::ONE, Scalar::ONE, Scalar::ONE],
        Field::Real,
    );
    let lhs = &(&g.transpose() * &j) * g;
    lhs.dist(&j) / (1.0 + g.frobenius_norm().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bracket;

    #[test]
    fn isomorphism_respects_brackets() {
        let b1 = hat3([0.3, -0.2, 0.9]);
        let b2 = hat3([-1.0, 0.4, 0.1]);
        for kappa in [-1, 0, 1] {
            let m1 = algebra_element(kappa, [1.0, 2.0, -0.5], &b1);
            let m2 = algebra_element(kappa, [-0.7, 0.1, 0.3], &b2);
            let lhs = to_kk(&bracket(&m1, &m2).unwrap(), kappa).unwrap();
            let rhs = crate::screwcore::kk_bracket(&to_kk(&m1, kappa).unwrap(), &to_kk(&m2, kappa).unwrap()).unwrap();
            assert!(lhs.dist(&rhs) < 1e-14, "kappa {kappa}");
            assert!(from_kk(&to_kk(&m1, kappa).unwrap()).max_abs_diff(&m1) == 0.0);
        }
    }

    #[test]
    fn geodesic_examples() {
        let g = space_form_geodesic(1, 0.5, [0.0; 3], [0.0; 3], 3.0).unwrap();
        assert!(g.max_abs_diff(&Mat::identity(4, Field::Real)) == 0.0);

        let t = 1.3;
        let g = space_form_geodesic(0, 1.0, [1.0, 0.0, 0.0], [0.0; 3], t).unwrap();
        let want = Mat::from_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[t, 1.0, 0.0, 0.0],
            &[0.0, 0.0, t.cos(), -t.sin()],
            &[0.0, 0.0, t.sin(), t.cos()],
        ]);
        assert!(g.max_abs_diff(&want) < 1e-14);

        for kappa in [-1, 0, 1] {
            let g = space_form_geodesic(kappa, 0.3, [0.4, -1.1, 0.2], [1.0, 0.5, -0.3], 2.0).unwrap();
            assert!(group_residual(&g, kappa) < 1e-12);
        }
        let g = space_form_geodesic(1, 0.3, [0.4, -1.1, 0.2], [1.0, 0.5, -0.3], 4.0).unwrap();
        assert!(g.block(1, 1, 3, 3).unitarity_residual() > 1e-3);
        assert!(space_form_geodesic(1, -1.0, [1.0, 0.0, 0.0], [0.0; 3], 1.0).is_err());
        assert!(space_form_geodesic(0, 0.0, [1.0, 0.0, 0.0], [0.0; 3], 1.0).is_err());
    }
}
