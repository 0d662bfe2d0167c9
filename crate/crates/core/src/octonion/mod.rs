//! The octonionic screw system on `ℝ⁷⋊SO(7)`.
//!
//! The distribution at the identity is `D^λ = {(x, λL_x) : x ∈ ℝ⁷}`, where
//! `L_x v = x × v` uses the octonionic cross product. For `λ ≠ 0` it is
//! bracket generating in one step, and for `x ⟂ y`
//!
//! ```text
//! γ_{x,y}(t) = exp(t(x, λL_x + Z(x,y))) · exp(−t(0, Z(x,y)))
//! ```
//!
//! is a sub-Riemannian geodesic with initial velocity `(x, λL_x)`, where
//! `Z(x,y) = 3x∧y − L_{x×y} ∈ 𝔤₂`. The second factor carries a minus sign:
//! that is what makes the initial velocity horizontal and what the momentum
//! certificate in [`momentum`] confirms.

pub mod cross;
pub mod g2;
pub mod momentum;
pub mod motion;

pub use cross::{bracket_ll, cross, l_op, wedge, z_op, BracketLL, CrossTable, Vec7};
pub use g2::{build_g2_basis, split_o7, G2Basis, O7Split};
pub use momentum::{certify_octo_momentum, MomentumCertificate};
pub use motion::{motion_exp, motion_mul, MotionElement};

use crate::algebra::{mat_exp, numeric_rank, Mat};
use crate::controllability::{rank_with_gap, ControllabilityReport};
use crate::error::{Result, ScrewError};
use crate::tolerances;
use cross::{basis_vector, dot, norm};
use serde::{Deserialize, Serialize};

pub(crate) fn check_octo_inputs(x: &Vec7, y: &Vec7, lambda: f64) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(ScrewError::Precondition(format!("lambda must be nonzero and finite, got {lambda}")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(ScrewError::Domain("non-finite input vector".into()));
    }
    let scale = (norm(x) * norm(y)).max(1.0);
    if dot(x, y).abs() > tolerances::TIGHT * scale {
        return Err(ScrewError::Precondition(format!(
            "x and y must be orthogonal (<x, y> = {:e})",
            dot(x, y)
        )));
    }
    Ok(())
}

/// Rank test for `D^λ + [D^λ, D^λ]` on `ℝ⁷⋊𝔬(7)`.
///
/// The 28 vectors `(e_s, λL_{e_s})` and `(2e_i×e_j, λ[L_{e_i}, L_{e_j}])` are
/// ranked in the affine representation; the cross-check ranks the lifts
/// together with their actual brackets.
pub fn octo_controllability(lambda: f64) -> ControllabilityReport {
    let lifts: Vec<MotionElement> = (0..7)
        .map(|s| {
            let e = basis_vector(s);
            MotionElement {
                translation: e,
                rotation: l_op(&e).scale(lambda),
            }
        })
        .collect();
    let mut family: Vec<Mat> = lifts.iter().map(|m| m.to_affine_algebra()).collect();
    let mut brackets = family.clone();
    for i in 0..7 {
        for j in i + 1..7 {
            let (ei, ej) = (basis_vector(i), basis_vector(j));
            let v = MotionElement {
                translation: cross::scale(2.0, &cross(&ei, &ej)),
                rotation: crate::algebra::commutator(&l_op(&ei), &l_op(&ej)).scale(lambda),
            };
            family.push(v.to_affine_algebra());
            brackets.push(lifts[i].bracket(&lifts[j]).to_affine_algebra());
        }
    }
    let gap = rank_with_gap(&family, tolerances::RANK_RELATIVE);
    let cross_rank = numeric_rank(&brackets, tolerances::RANK_RELATIVE);
    ControllabilityReport {
        system: format!("R7 x SO(7) lambda={lambda}"),
        model: "octonion".into(),
        group: Some("R7xSO(7)".into()),
        k: None,
        kappa: None,
        lambda,
        dim_g: 28,
        dim_span: gap.rank,
        predicted: lambda != 0.0,
        observed: gap.rank == 28,
        kept_eigenvalue_ratio: gap.kept_ratio,
        dropped_eigenvalue_ratio: gap.dropped_ratio,
        cross_check_rank: Some(cross_rank),
        alternate_predicate: None,
        discrepancy: false,
    }
}

/// The generators `X = (x, λL_x + Z(x,y))` and `Z = (0, Z(x,y))`.
pub fn octo_generators(x: &Vec7, y: &Vec7, lambda: f64) -> (MotionElement, MotionElement) {
    let z = z_op(x, y);
    let big_x = MotionElement {
        translation: *x,
        rotation: &l_op(x).scale(lambda) + &z,
    };
    (big_x, MotionElement::pure_rotation(z))
}

/// `γ_{x,y}(t)` as a rigid motion.
pub fn octo_geodesic(x: &Vec7, y: &Vec7, lambda: f64, t: f64) -> Result<MotionElement> {
    check_octo_inputs(x, y, lambda)?;
    let (a, z) = octo_generators(x, y, lambda);
    let g = &mat_exp(&a.to_affine_algebra().scale(t))? * &mat_exp(&z.to_affine_algebra().scale(-t))?;
    MotionElement::from_affine(&g)
}

/// `γ⁻¹γ′ = e^{tZ} X e^{−tZ} − Z`; equals `(x, λL_x)` at `t = 0`.
pub fn octo_left_log_derivative(x: &Vec7, y: &Vec7, lambda: f64, t: f64) -> Result<MotionElement> {
    check_octo_inputs(x, y, lambda)?;
    let (a, z) = octo_generators(x, y, lambda);
    let za = z.to_affine_algebra();
    let e = mat_exp(&za.scale(t))?;
    let einv = mat_exp(&za.scale(-t))?;
    MotionElement::from_affine(&(&(&(&e * &a.to_affine_algebra()) * &einv) - &za))
}

/// Worst-case residuals of a sampled octonionic geodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OctoCertificate {
    pub samples: usize,
    /// `‖γ⁻¹γ′(0) − (x, λL_x)‖`.
    pub initial_velocity: f64,
    /// Largest `‖A − λL_u‖` for `γ⁻¹γ′ = (u, A)`.
    pub horizontality: f64,
    /// Largest `|‖u‖ − ‖x‖|`.
    pub speed_deviation: f64,
    /// Largest `‖RᵗR − I‖` for the rotation parts of sampled points.
    pub orthogonality: f64,
}

impl OctoCertificate {
    pub fn max_residual(&self) -> f64 {
        self.initial_velocity
            .max(self.horizontality)
            .max(self.speed_deviation)
            .max(self.orthogonality)
    }
}

/// Samples `γ_{x,y}` and its left logarithmic derivative at `times`.
pub fn octo_sample(x: &Vec7, y: &Vec7, lambda: f64, times: &[f64]) -> Result<(Vec<MotionElement>, OctoCertificate)> {
    check_octo_inputs(x, y, lambda)?;
    let v0 = octo_left_log_derivative(x, y, lambda, 0.0)?;
    let want = MotionElement {
        translation: *x,
        rotation: l_op(x).scale(lambda),
    };
    let mut cert = OctoCertificate {
        samples: times.len(),
        initial_velocity: v0.dist(&want),
        horizontality: 0.0,
        speed_deviation: 0.0,
        orthogonality: 0.0,
    };
    let mut points = Vec::with_capacity(times.len());
    for &t in times {
        let g = octo_geodesic(x, y, lambda, t)?;
        let v = octo_left_log_derivative(x, y, lambda, t)?;
        cert.horizontality = cert.horizontality.max(v.rotation.dist(&l_op(&v.translation).scale(lambda)));
        cert.speed_deviation = cert.speed_deviation.max((norm(&v.translation) - norm(x)).abs());
        cert.orthogonality = cert.orthogonality.max(g.rotation.unitarity_residual());
        points.push(g);
    }
    Ok((points, cert))
}

/// `max_t ‖γ_{cx,cy}(t) − γ_{x,y}(ct)‖`.
pub fn scaling_law_residual(x: &Vec7, y: &Vec7, lambda: f64, c: f64, times: &[f64]) -> Result<f64> {
    let (cx, cy) = (cross::scale(c, x), cross::scale(c, y));
    let mut worst = 0.0f64;
    for &t in times {
        let a = octo_geodesic(&cx, &cy, lambda, t)?;
        let b = octo_geodesic(x, y, lambda, c * t)?;
        worst = worst.max(a.dist(&b));
    }
    Ok(worst)
}

/// `max_t ‖γ_{cx,y}(t) − γ_{x,y}(ct)‖`: scaling `x` alone scales both
/// generators, since `Z` is bilinear.
pub fn momentum_scaling_residual(x: &Vec7, y: &Vec7, lambda: f64, c: f64, times: &[f64]) -> Result<f64> {
    let cx = cross::scale(c, x);
    let mut worst = 0.0f64;
    for &t in times {
        let a = octo_geodesic(&cx, y, lambda, t)?;
        let b = octo_geodesic(x, y, lambda, c * t)?;
        worst = worst.max(a.dist(&b));
    }
    Ok(worst)
}

/// Seeded pair with `‖x‖ = 1`, `y ⟂ x` and `‖y‖ ∈ [0.25, 2)`.
pub fn random_orthogonal_pair(seed: u64) -> (Vec7, Vec7) {
    use rand::Rng;
    let mut r = crate::rng::seeded(seed);
    let x: Vec7 = crate::rng::gaussian_vec(&mut r, 7).try_into().expect("length 7");
    let x = cross::scale(1.0 / norm(&x), &x);
    let y0: Vec7 = crate::rng::gaussian_vec(&mut r, 7).try_into().expect("length 7");
    let y = cross::axpy(-dot(&y0, &x), &x, &y0);
    let y = cross::axpy(-dot(&y, &x), &x, &y);
    let len = r.gen_range(0.25..2.0);
    (x, cross::scale(len / norm(&y), &y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::uniform_grid;

    #[test]
    fn controllability_examples() {
        assert_eq!(octo_controllability(1.0).dim_span, 28);
        assert_eq!(octo_controllability(-0.5).dim_span, 28);
        let r = octo_controllability(0.0);
        assert_eq!((r.dim_span, r.observed, r.predicted), (7, false, false));
        assert_eq!(octo_controllability(2.0).cross_check_rank, Some(28));
    }

    #[test]
    fn geodesic_examples() {
        let (x, y) = random_orthogonal_pair(1);
        assert!(octo_geodesic(&x, &y, 1.0, 0.0).unwrap().dist(&MotionElement::identity()) < 1e-15);
        let g = octo_geodesic(&x, &[0.0; 7], 0.5, 1.3).unwrap();
        let want = motion_exp(&MotionElement { translation: x, rotation: l_op(&x).scale(0.5) }.scale(1.3)).unwrap();
        assert!(g.dist(&want) < 1e-13);
        assert!(octo_geodesic(&x, &x, 1.0, 1.0).is_err());
        assert!(octo_geodesic(&x, &y, 0.0, 1.0).is_err());
    }

    #[test]
    fn sampled_curve_is_horizontal() {
        for seed in 0..5 {
            let (x, y) = random_orthogonal_pair(seed);
            let (_, c) = octo_sample(&x, &y, -1.0, &uniform_grid(5.0, 11)).unwrap();
            assert!(c.max_residual() <= 1e-10, "{c:?}");
        }
    }

    #[test]
    fn scaling_x_alone_reparametrizes() {
        let (x, y) = random_orthogonal_pair(4);
        let times = uniform_grid(2.0, 5);
        assert!(momentum_scaling_residual(&x, &y, 0.5, 1.7, &times).unwrap() <= 1e-9);
        assert!(scaling_law_residual(&x, &y, 0.5, 1.0, &times).unwrap() <= 1e-12);
    }

    #[test]
    fn random_pairs_are_admissible() {
        for s in 0..20 {
            let (x, y) = random_orthogonal_pair(s);
            assert!((norm(&x) - 1.0).abs() < 1e-15);
            assert!(dot(&x, &y).abs() < 1e-15);
            assert!(certify_octo_momentum(&x, &y, 0.5).unwrap().passes(1e-9));
        }
    }
}
