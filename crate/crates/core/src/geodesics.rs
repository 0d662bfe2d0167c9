//! Closed-form sub-Riemannian geodesics of the screw systems.
//!
//! For `λ² ≠ k` and `X, Y ∈ 𝔨` the curve
//!
//! ```text
//! γ(t) = exp(t(X + λL_X + L_Y)) · exp(−tL_Y)
//! ```
//!
//! is a normal geodesic through the identity, and every geodesic through the
//! identity has this form. In `𝔤_k` coordinates the two generators are
//! `A = (X, λX + Y)` and `B = (0, Y)`. The curve is evaluated in the block
//! representation, and its left logarithmic derivative
//! `γ⁻¹γ′ = e^{tB} A e^{−tB} − B` comes from the product rule, so no finite
//! differences are involved.
//!
//! Only normal geodesics are produced. The distributions have step 2, so
//! there are no strictly abnormal ones to add.

use crate::algebra::{commutator, inner, mat_exp, Mat};
use crate::error::{dim_err, Result, ScrewError};
use crate::screwcore::{
    g_lambda_k, group_relation_residual, h_lambda_k, horizontal_lift, horizontal_residual, sub_riemannian_norm,
    Curvature, KkElement, ScrewSystem,
};
use crate::spaceform;
use crate::tolerances;
use serde::{Deserialize, Serialize};

/// Default sampling interval end.
pub const DEFAULT_T_MAX: f64 = 5.0;
/// Default number of sample points.
pub const DEFAULT_SAMPLES: usize = 101;

/// Generators `(X, Y)` of one geodesic.
#[derive(Clone, Debug)]
pub struct GeodesicSpec {
    sys: ScrewSystem,
    x: Mat,
    y: Mat,
}

impl GeodesicSpec {
    pub fn new(sys: ScrewSystem, x: Mat, y: Mat) -> Result<Self> {
        if sys.is_degenerate() {
            return Err(ScrewError::Precondition(format!(
                "lambda^2 = k ({sys}): the geodesic formula needs lambda^2 != k"
            )));
        }
        let g = sys.group();
        for (name, m) in [("X", &x), ("Y", &y)] {
            if m.shape() != (g.n(), g.n()) {
                return Err(dim_err("GeodesicSpec", format!("{name} is {:?}, group {g}", m.shape())));
            }
            if m.anti_hermitian_residual() > tolerances::TIGHT {
                return Err(ScrewError::Domain(format!("{name} is not anti-Hermitian")));
            }
        }
        Ok(GeodesicSpec { sys, x, y })
    }

    /// Seeded generators of Frobenius size about `scale`.
    pub fn random(sys: ScrewSystem, seed: u64, scale: f64) -> Result<Self> {
        let x = sys.random_k(seed.wrapping_mul(2), scale);
        let y = sys.random_k(seed.wrapping_mul(2).wrapping_add(1), scale);
        GeodesicSpec::new(sys, x, y)
    }

    pub fn sys(&self) -> &ScrewSystem {
        &self.sys
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    /// `A = X + λL_X + L_Y`.
    pub fn a(&self) -> KkElement {
        KkElement {
            x: self.x.clone(),
            y: &self.x.scale(self.sys.lambda()) + &self.y,
            k: self.sys.k(),
        }
    }

    /// `B = L_Y`.
    pub fn b(&self) -> KkElement {
        KkElement::h_axis(self.y.clone(), self.sys.k())
    }

    /// `‖X‖`, the speed of the curve.
    pub fn speed(&self) -> f64 {
        inner(&self.x, &self.x).sqrt()
    }

    /// `‖[X, Y]‖`.
    pub fn commutator_norm(&self) -> f64 {
        commutator(&self.x, &self.y).frobenius_norm()
    }

    /// Same generators scaled by `c`.
    pub fn scaled(&self, c: f64) -> GeodesicSpec {
        GeodesicSpec {
            sys: self.sys.clone(),
            x: self.x.scale(c),
            y: self.y.scale(c),
        }
    }
}

/// `γ(t)` in the block representation.
pub fn geodesic_point(spec: &GeodesicSpec, t: f64) -> Result<Mat> {
    let a = mat_exp(&spec.a().block_rep().scale(t))?;
    let b = mat_exp(&spec.b().block_rep().scale(-t))?;
    Ok(&a * &b)
}

/// `exp(t(X + λL_X))`, the one-parameter subgroup with the same initial
/// velocity.
pub fn one_parameter_point(spec: &GeodesicSpec, t: f64) -> Result<Mat> {
    mat_exp(&horizontal_lift(&spec.x, &spec.sys).block_rep().scale(t))
}

/// `γ(t)⁻¹γ′(t) = e^{tB} A e^{−tB} − B`, computed in the block representation.
pub fn left_log_derivative(spec: &GeodesicSpec, t: f64) -> Result<KkElement> {
    let bb = spec.b().block_rep();
    let e = mat_exp(&bb.scale(t))?;
    let einv = mat_exp(&bb.scale(-t))?;
    let m = &(&(&e * &spec.a().block_rep()) * &einv) - &bb;
    KkElement::from_block_rep(&m, spec.sys.k())
}

/// `count` uniform times on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| t_max * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Samples of a geodesic on a uniform grid.
#[derive(Clone, Debug)]
pub struct CurveSample {
    pub times: Vec<f64>,
    /// Block-representation group elements.
    pub points: Vec<Mat>,
    pub left_log_derivatives: Vec<KkElement>,
}

/// Samples `γ` at `count` uniform times on `[0, t_max]`.
///
/// The exponentials of the step are computed once and accumulated by
/// multiplication, which on these grids stays within a few hundred ulps of
/// evaluating [`geodesic_point`] at every time.
pub fn sample(spec: &GeodesicSpec, t_max: f64, count: usize) -> Result<CurveSample> {
    if count == 0 || !t_max.is_finite() || t_max < 0.0 {
        return Err(ScrewError::Domain(format!("bad sampling grid: t_max {t_max}, count {count}")));
    }
    let times = uniform_grid(t_max, count);
    let dt = if count > 1 { times[1] } else { 0.0 };
    let ab = spec.a().block_rep();
    let bb = spec.b().block_rep();
    let step_a = mat_exp(&ab.scale(dt))?;
    let step_b = mat_exp(&bb.scale(dt))?;
    let step_binv = mat_exp(&bb.scale(-dt))?;
    let n2 = ab.rows();
    let ident = Mat::identity(n2, ab.field());
    let (mut pa, mut pb, mut pbinv) = (ident.clone(), ident.clone(), ident);
    let mut points = Vec::with_capacity(count);
    let mut logs = Vec::with_capacity(count);
    for i in 0..count {
        if i > 0 {
            pa = &pa * &step_a;
            pb = &pb * &step_b;
            pbinv = &pbinv * &step_binv;
        }
        points.push(&pa * &pbinv);
        let m = &(&(&pb * &ab) * &pbinv) - &bb;
        logs.push(KkElement::from_block_rep(&m, spec.sys.k())?);
    }
    Ok(CurveSample {
        times,
        points,
        left_log_derivatives: logs,
    })
}

/// Worst-case residuals of a sampled geodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCertificate {
    pub samples: usize,
    /// Largest distance of `γ⁻¹γ′` from `E^λ`.
    pub horizontality: f64,
    /// Largest `|‖γ⁻¹γ′‖_sub − ‖X‖|`.
    pub speed_deviation: f64,
    /// Largest relative residual of the group relations at sampled points.
    pub group_relation: f64,
    /// `‖[X, Y]‖`.
    pub commutator_norm: f64,
}

impl GeodesicCertificate {
    pub fn passes(&self, tol: f64) -> bool {
        self.horizontality <= tol && self.speed_deviation <= tol && self.group_relation <= tol
    }
}

/// Certificate from an existing sample.
pub fn certify_sample(spec: &GeodesicSpec, s: &CurveSample) -> GeodesicCertificate {
    let lambda = spec.sys.lambda();
    let speed = spec.speed();
    let mut c = GeodesicCertificate {
        samples: s.times.len(),
        horizontality: 0.0,
        speed_deviation: 0.0,
        group_relation: 0.0,
        commutator_norm: spec.commutator_norm(),
    };
    for (p, v) in s.points.iter().zip(&s.left_log_derivatives) {
        c.horizontality = c.horizontality.max(horizontal_residual(v, lambda));
        c.speed_deviation = c.speed_deviation.max((sub_riemannian_norm(v, lambda) - speed).abs());
        c.group_relation = c.group_relation.max(group_relation_residual(p, spec.sys.k()));
    }
    c
}

pub fn certify(spec: &GeodesicSpec, t_max: f64, count: usize) -> Result<GeodesicCertificate> {
    Ok(certify_sample(spec, &sample(spec, t_max, count)?))
}

/// Horizontality and speed only, from left logarithmic derivatives; the
/// cheap path used by large sweeps.
pub fn velocity_residuals(spec: &GeodesicSpec, t_max: f64, count: usize) -> Result<(f64, f64)> {
    let s = sample(spec, t_max, count)?;
    let lambda = spec.sys.lambda();
    let speed = spec.speed();
    let mut h = 0.0f64;
    let mut d = 0.0f64;
    for v in &s.left_log_derivatives {
        h = h.max(horizontal_residual(v, lambda));
        d = d.max((sub_riemannian_norm(v, lambda) - speed).abs());
    }
    Ok((h, d))
}

/// `sup_t ‖γ(t) − exp(t(X + λL_X))‖ / max(1, ‖exp(t(X + λL_X))‖)` over the
/// given times, both sides evaluated directly.
pub fn single_exponential_gap(spec: &GeodesicSpec, times: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in times {
        let g = geodesic_point(spec, t)?;
        let e = one_parameter_point(spec, t)?;
        worst = worst.max(g.dist(&e) / e.frobenius_norm().max(1.0));
    }
    Ok(worst)
}

/// Whether the curve collapses to a one-parameter subgroup, decided both
/// algebraically and from samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationCheck {
    pub commutator_norm: f64,
    pub sup_gap: f64,
    /// `‖[X, Y]‖ ≤` the commuting threshold.
    pub commuting: bool,
    /// `sup_gap ≤` the gap tolerance.
    pub single_exponential: bool,
}

impl DegenerationCheck {
    pub fn consistent(&self) -> bool {
        self.commuting == self.single_exponential
    }
}

pub fn degeneration_check(spec: &GeodesicSpec, times: &[f64]) -> Result<DegenerationCheck> {
    let gap = single_exponential_gap(spec, times)?;
    let c = spec.commutator_norm();
    Ok(DegenerationCheck {
        commutator_norm: c,
        sup_gap: gap,
        commuting: c <= tolerances::COMMUTING,
        single_exponential: gap <= tolerances::TIGHT,
    })
}

/// Hypotheses that make the product-of-exponentials criterion applicable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    /// `max |h(e, v)|` for `e` in a basis of `E^λ`, `v` in one of `{0}×𝔨`.
    pub orthogonality: f64,
    /// Smallest eigenvalue of `h` on `E^λ` (orthonormal lifts).
    pub min_eigenvalue: f64,
    /// `max |h(e_i, e_j) − δ_ij|` on the lifted orthonormal basis.
    pub gram_deviation: f64,
    /// Dimension of the `h`-orthogonal complement of `{0}×𝔨`; equals
    /// `dim 𝔨` when it is exactly `E^λ`.
    pub complement_dim: usize,
    /// Distance of `X + λL_X` from `E^λ`.
    pub u_residual: f64,
    /// Size of the translation part of `L_Y`.
    pub z_residual: f64,
    pub passed: bool,
}

/// Checks that `E^λ = ({0}×𝔨)^⊥` for `h_{λ,k}`, that `h` is positive
/// definite on `E^λ`, and that the generators split accordingly.
pub fn verify_geodesic_criterion(spec: &GeodesicSpec) -> Result<CriterionReport> {
    let sys = &spec.sys;
    let lifts = sys.horizontal_basis();
    let verts: Vec<KkElement> = sys.basis().elements().iter().map(|b| KkElement::h_axis(b.clone(), sys.k())).collect();
    let mut orth = 0.0f64;
    for e in &lifts {
        for v in &verts {
            orth = orth.max(h_lambda_k(e, v, sys)?.abs());
        }
    }
    let d = lifts.len();
    let mut gram = nalgebra::DMatrix::zeros(d, d);
    let mut dev = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let h = h_lambda_k(&lifts[i], &lifts[j], sys)?;
            gram[(i, j)] = h;
            dev = dev.max((h - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    let min_eig = crate::algebra::symmetric_eigenvalues(&gram).first().copied().unwrap_or(0.0);

    // complement of the vertical axis: kernel of the map w ↦ (g(w, v_j))_j
    let full = sys.full_basis();
    let m = nalgebra::DMatrix::from_fn(verts.len(), full.len(), |j, i| g_lambda_k(&full[i], &verts[j], sys));
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > tolerances::RANK_RELATIVE * smax).count();
    let complement_dim = full.len() - rank;

    let u_residual = horizontal_residual(&horizontal_lift(&spec.x, sys), sys.lambda());
    let z_residual = spec.b().x.frobenius_norm();
    let passed = orth <= tolerances::TIGHT
        && min_eig > tolerances::POSITIVITY
        && complement_dim == d
        && u_residual <= tolerances::TIGHT
        && z_residual <= tolerances::TIGHT;
    Ok(CriterionReport {
        orthogonality: orth,
        min_eigenvalue: min_eig,
        gram_deviation: dev,
        complement_dim,
        u_residual,
        z_residual,
        passed,
    })
}

/// Geodesic of the space form of curvature `κ` through the explicit 4×4
/// formula; see [`spaceform::space_form_geodesic`].
pub fn space_form_geodesic(kappa: i64, lambda: f64, x: [f64; 3], y: [f64; 3], t: f64) -> Result<Mat> {
    spaceform::space_form_geodesic(kappa, lambda, x, y, t)
}

/// Largest relative disagreement, over `times`, between the 4×4 space-form
/// geodesic and the `SO(3)` construction in `𝔤_κ`, measured as
/// `‖Ad_g − Ad_h‖_F / max(1, ‖Ad_g‖_F)` on an orthonormal basis.
///
/// The two live in different matrix groups (for `κ = 1`, `SO(4)` versus
/// `SO(3)×SO(3)`, which differ by a covering), so they are compared through
/// their adjoint actions on `𝔤_κ`, which the Lie algebra isomorphism
/// identifies exactly.
pub fn cross_model_residual(kappa: i64, lambda: f64, x: [f64; 3], y: [f64; 3], times: &[f64]) -> Result<f64> {
    use crate::compactgroups::{hat3, CompactGroupId};
    let k = Curvature::from_sign(kappa)?;
    let sys = ScrewSystem::new(CompactGroupId::so(3)?, k, lambda)?;
    let spec = GeodesicSpec::new(sys.clone(), hat3(x), hat3(y))?;
    let basis = sys.full_basis();
    let ab = spec.a().block_rep();
    let bb = spec.b().block_rep();
    let rot = hat3([lambda * x[0] + y[0], lambda * x[1] + y[1], lambda * x[2] + y[2]]);
    let a4 = spaceform::algebra_element(kappa, x, &rot);
    let b4 = spaceform::algebra_element(kappa, [0.0; 3], &hat3(y)).scale(-1.0);
    let mut worst = 0.0f64;
    for &t in times {
        let g = &mat_exp(&ab.scale(t))? * &mat_exp(&bb.scale(-t))?;
        let ginv = &mat_exp(&bb.scale(t))? * &mat_exp(&ab.scale(-t))?;
        let h = &mat_exp(&a4.scale(t))? * &mat_exp(&b4.scale(t))?;
        let hinv = &mat_exp(&b4.scale(-t))? * &mat_exp(&a4.scale(-t))?;
        let (mut diff, mut size) = (0.0f64, 0.0f64);
        for e in &basis {
            let lhs = KkElement::from_block_rep(&(&(&g * &e.block_rep()) * &ginv), k)?;
            let rhs = spaceform::to_kk(&(&(&h * &spaceform::from_kk(e)) * &hinv), kappa)?;
            diff += lhs.dist(&rhs).powi(2);
            size += lhs.norm().powi(2);
        }
        worst = worst.max(diff.sqrt() / size.sqrt().max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn spec(g: &str, k: Curvature, l: f64, seed: u64) -> GeodesicSpec {
        GeodesicSpec::random(ScrewSystem::new(g.parse().unwrap(), k, l).unwrap(), seed, 1.0).unwrap()
    }

    #[test]
    fn starts_at_identity() {
        let s = spec("SU2", Curvature::Negative, 0.5, 1);
        assert_eq!(geodesic_point(&s, 0.0).unwrap(), Mat::identity(4, Field::Complex));
        let v = left_log_derivative(&s, 0.0).unwrap();
        assert!(v.dist(&horizontal_lift(s.x(), s.sys())) < 1e-15);
    }

    #[test]
    fn rejects_degenerate_pitch() {
        let sys = ScrewSystem::new("SU2".parse().unwrap(), Curvature::Positive, 1.0).unwrap();
        assert!(matches!(GeodesicSpec::random(sys, 1, 1.0), Err(ScrewError::Precondition(_))));
    }

    #[test]
    fn vanishing_y_is_a_one_parameter_subgroup() {
        let s = spec("SO4", Curvature::Positive, 0.75, 2);
        let s = GeodesicSpec::new(s.sys().clone(), s.x().clone(), Mat::zeros(4, 4, Field::Real)).unwrap();
        for t in [0.3, 2.0, 5.0] {
            assert!(geodesic_point(&s, t).unwrap().max_abs_diff(&one_parameter_point(&s, t).unwrap()) < 1e-12);
            assert!(left_log_derivative(&s, t).unwrap().dist(&horizontal_lift(s.x(), s.sys())) < 1e-12);
        }
    }

    #[test]
    fn sampling_matches_direct_evaluation() {
        for k in Curvature::ALL {
            let s = spec("Sp2", k, 0.5, 3);
            let smp = sample(&s, 5.0, 101).unwrap();
            for i in [0, 17, 64, 100] {
                let t = smp.times[i];
                let p = geodesic_point(&s, t).unwrap();
                assert!(smp.points[i].dist(&p) / p.frobenius_norm() < 1e-11, "{k} t={t}");
                let v = left_log_derivative(&s, t).unwrap();
                assert!(smp.left_log_derivatives[i].dist(&v) < 1e-11);
            }
        }
    }

    #[test]
    fn certificate_passes_on_random_specs() {
        for g in ["SO3", "SU3", "Sp1"] {
            for k in Curvature::ALL {
                let s = spec(g, k, -0.5, 4);
                let c = certify(&s, 5.0, 101).unwrap();
                assert!(c.passes(1e-9), "{g} {k} {c:?}");
            }
        }
    }

    #[test]
    fn degeneration_both_directions() {
        let base = spec("SU3", Curvature::Flat, 1.0, 5);
        let times = uniform_grid(5.0, 21);
        let commuting = GeodesicSpec::new(base.sys().clone(), base.x().clone(), base.x().scale(0.7)).unwrap();
        let d = degeneration_check(&commuting, &times).unwrap();
        assert!(d.commuting && d.single_exponential, "{d:?}");
        let d = degeneration_check(&base, &times).unwrap();
        assert!(!d.commuting && !d.single_exponential && d.consistent());
    }

    #[test]
    fn reparametrization() {
        let s = spec("SO3", Curvature::Negative, 2.0, 6);
        let c = 1.7;
        for t in [0.5, 1.5, 2.9] {
            let lhs = geodesic_point(&s.scaled(c), t).unwrap();
            let rhs = geodesic_point(&s, c * t).unwrap();
            assert!(lhs.dist(&rhs) / rhs.frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn criterion_hypotheses() {
        let r = verify_geodesic_criterion(&spec("SO3", Curvature::Flat, 1.0, 7)).unwrap();
        assert!(r.passed, "{r:?}");
        let r = verify_geodesic_criterion(&spec("SU2", Curvature::Positive, 0.5, 7)).unwrap();
        assert!(r.passed && r.gram_deviation < 1e-12);
    }

    #[test]
    fn space_form_matches_kk_model() {
        let times = uniform_grid(5.0, 11);
        for kappa in [-1, 0, 1] {
            for l in [-2.0, 0.5, 2.0] {
                let r = cross_model_residual(kappa, l, [0.3, -0.8, 0.5], [1.1, 0.2, -0.4], &times).unwrap();
                assert!(r <= 1e-8, "kappa {kappa} lambda {l}: {r}");
            }
        }
    }
}
