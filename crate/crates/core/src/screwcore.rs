//! The unified Lie algebra `𝔤_k = 𝔨 ⊕ 𝔨` with bracket
//!
//! ```text
//! [(x, y), (u, v)] = ([x, v] + [y, u], [y, v] + k[x, u])
//! ```
//!
//! which models `𝔨×𝔨` (k = 1), `𝔨^ℂ` (k = −1) and `𝔨⋊𝔨` (k = 0) at once. The
//! x-axis plays the role of the translations `𝔭`, the y-axis the rotations
//! `𝔥`, and `L` moves a matrix from the first axis to the second. The screw
//! distribution of pitch `λ` is `E^λ = {(x, λx)}`.
//!
//! Group-level work happens in the faithful block representation
//! `(x, y) ↦ [[y, kx], [x, y]]`; the isomorphisms onto the concrete models are
//! only used as verification targets.

use crate::algebra::{commutator, inner, Field, Mat, Scalar};
use crate::compactgroups::{random_algebra_element, shared_basis, AlgebraBasis, CompactGroupId};
use crate::error::{dim_err, Result, ScrewError};
use crate::tolerances;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Curvature sign `k` of the symmetric space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curvature {
    /// `k = 1`: `K×K` with the diagonal subgroup.
    Positive,
    /// `k = −1`: the complexification `K^ℂ`.
    Negative,
    /// `k = 0`: the Cartan motion group `𝔨⋊K`.
    Flat,
}

impl Curvature {
    pub const ALL: [Curvature; 3] = [Curvature::Positive, Curvature::Negative, Curvature::Flat];

    pub fn value(self) -> f64 {
        match self {
            Curvature::Positive => 1.0,
            Curvature::Negative => -1.0,
            Curvature::Flat => 0.0,
        }
    }

    pub fn from_sign(k: i64) -> Result<Self> {
        match k {
            1 => Ok(Curvature::Positive),
            -1 => Ok(Curvature::Negative),
            0 => Ok(Curvature::Flat),
            _ => Err(ScrewError::Domain(format!("curvature sign must be 1, -1 or 0, got {k}"))),
        }
    }

    pub fn sign(self) -> i64 {
        self.value() as i64
    }
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign())
    }
}

/// `λ² = k` up to rounding.
pub fn is_degenerate_pitch(k: Curvature, lambda: f64) -> bool {
    (lambda * lambda - k.value()).abs() <= 1e-12
}

/// An element `(x, y)` of `𝔤_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct KkElement {
    pub x: Mat,
    pub y: Mat,
    pub k: Curvature,
}

impl KkElement {
    pub fn new(x: Mat, y: Mat, k: Curvature) -> Result<Self> {
        if x.shape() != y.shape() || !x.is_square() {
            return Err(dim_err("KkElement", format!("{:?} and {:?}", x.shape(), y.shape())));
        }
        Ok(KkElement { x, y, k })
    }

    pub fn zero(n: usize, field: Field, k: Curvature) -> Self {
        KkElement {
            x: Mat::zeros(n, n, field),
            y: Mat::zeros(n, n, field),
            k,
        }
    }

    /// `(x, 0)`, a translation.
    pub fn p_axis(x: Mat, k: Curvature) -> Self {
        let y = Mat::zeros(x.rows(), x.cols(), x.field());
        KkElement { x, y, k }
    }

    /// `(0, y)`, a rotation.
    pub fn h_axis(y: Mat, k: Curvature) -> Self {
        let x = Mat::zeros(y.rows(), y.cols(), y.field());
        KkElement { x, y, k }
    }

    /// `L(x, 0) = (0, x)`, extended to the x-axis component of `self`.
    pub fn l_of_x(&self) -> KkElement {
        KkElement::h_axis(self.x.clone(), self.k)
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn field(&self) -> Field {
        self.x.field().join(self.y.field())
    }

    pub fn scale(&self, s: f64) -> KkElement {
        KkElement {
            x: self.x.scale(s),
            y: self.y.scale(s),
            k: self.k,
        }
    }

    pub fn add(&self, o: &KkElement) -> KkElement {
        KkElement {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
            k: self.k,
        }
    }

    pub fn sub(&self, o: &KkElement) -> KkElement {
        KkElement {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
            k: self.k,
        }
    }

    /// Euclidean norm of the pair, `(‖x‖² + ‖y‖²)^½`.
    pub fn norm(&self) -> f64 {
        (inner(&self.x, &self.x) + inner(&self.y, &self.y)).sqrt()
    }

    pub fn dist(&self, o: &KkElement) -> f64 {
        self.sub(o).norm()
    }

    /// Vertical stack `[x; y]`, the flattening used for rank computations.
    pub fn to_stacked(&self) -> Mat {
        let n = self.n();
        let mut m = Mat::zeros(2 * n, n, self.field());
        m.set_block(0, 0, &self.x);
        m.set_block(n, 0, &self.y);
        m
    }

    /// Block matrix `[[y, kx], [x, y]]`.
    pub fn block_rep(&self) -> Mat {
        let kx = self.x.scale(self.k.value());
        Mat::from_blocks(&self.y, &kx, &self.x, &self.y)
    }

    /// Reads `(x, y)` off a block matrix, trusting its lower row.
    pub fn from_block_rep(m: &Mat, k: Curvature) -> Result<KkElement> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(dim_err("from_block_rep", format!("{:?}", m.shape())));
        }
        let n = m.rows() / 2;
        Ok(KkElement {
            x: m.block(n, 0, n, n),
            y: m.block(n, n, n, n),
            k,
        })
    }
}

/// Distance of a `2n×2n` matrix from the block pattern `[[P, kQ], [Q, P]]`.
pub fn block_structure_residual(m: &Mat, k: Curvature) -> f64 {
    let n = m.rows() / 2;
    let p = m.block(0, 0, n, n);
    let kq = m.block(0, n, n, n);
    let q = m.block(n, 0, n, n);
    let p2 = m.block(n, n, n, n);
    p.dist(&p2).max(kq.dist(&q.scale(k.value())))
}

/// Relative residual of the defining relations of the group model for `k`,
/// evaluated on a block element `[[P, kQ], [Q, P]]`:
/// `P*P + k·Q*Q = I` and `P*Q + Q*P = 0`, plus the block pattern itself.
///
/// For `k = 1` these say `P ± Q` are unitary, for `k = −1` that `P + iQ` is
/// complex-orthogonal in the sense of `K^ℂ`, and for `k = 0` that the element
/// has the motion-group shape `[[B, 0], [wB, B]]` with `B` unitary and `w`
/// anti-Hermitian.
pub fn group_relation_residual(m: &Mat, k: Curvature) -> f64 {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return f64::INFINITY;
    }
    let n = m.rows() / 2;
    let p = m.block(0, 0, n, n);
    let q = m.block(n, 0, n, n);
    let pa = p.adjoint();
    let qa = q.adjoint();
    let ident = Mat::identity(n, p.field());
    let r1 = &(&pa * &p) + &(&qa * &q).scale(k.value());
    let r1 = r1.dist(&ident);
    let r2 = (&(&pa * &q) + &(&qa * &p)).frobenius_norm();
    let size = 1.0 + inner(&p, &p) + inner(&q, &q);
    let structure = block_structure_residual(m, k) / size.sqrt();
    (r1.max(r2) / size).max(structure)
}

/// `[a, b]` in `𝔤_k`.
pub fn kk_bracket(a: &KkElement, b: &KkElement) -> Result<KkElement> {
    if a.k != b.k {
        return Err(ScrewError::Domain(format!("bracket across curvatures {} and {}", a.k, b.k)));
    }
    if a.x.shape() != b.x.shape() {
        return Err(dim_err("kk_bracket", format!("{:?} vs {:?}", a.x.shape(), b.x.shape())));
    }
    Ok(bracket_unchecked(a, b))
}

pub(crate) fn bracket_unchecked(a: &KkElement, b: &KkElement) -> KkElement {
    let x = &commutator(&a.x, &b.y) + &commutator(&a.y, &b.x);
    let y = &commutator(&a.y, &b.y) + &commutator(&a.x, &b.x).scale(a.k.value());
    KkElement { x, y, k: a.k }
}

/// Configuration `(K, k, λ)` of a screw system.
#[derive(Clone, Debug)]
pub struct ScrewSystem {
    group: CompactGroupId,
    k: Curvature,
    lambda: f64,
    basis: Arc<AlgebraBasis>,
}

impl ScrewSystem {
    pub fn new(group: CompactGroupId, k: Curvature, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(ScrewError::Domain(format!("pitch must be finite, got {lambda}")));
        }
        Ok(ScrewSystem {
            group,
            k,
            lambda,
            basis: shared_basis(group),
        })
    }

    pub fn group(&self) -> CompactGroupId {
        self.group
    }

    pub fn k(&self) -> Curvature {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn basis(&self) -> &AlgebraBasis {
        &self.basis
    }

    /// `dim 𝔤_k = 2 dim 𝔨`.
    pub fn dim_g(&self) -> usize {
        2 * self.group.dim()
    }

    /// `λ² = k`, where the bilinear form degenerates.
    pub fn is_degenerate(&self) -> bool {
        is_degenerate_pitch(self.k, self.lambda)
    }

    /// Basis `{(b_i, 0)} ∪ {(0, b_i)}` of `𝔤_k`.
    pub fn full_basis(&self) -> Vec<KkElement> {
        let e = self.basis.elements();
        e.iter()
            .map(|b| KkElement::p_axis(b.clone(), self.k))
            .chain(e.iter().map(|b| KkElement::h_axis(b.clone(), self.k)))
            .collect()
    }

    /// Lifts of the algebra basis into `E^λ`.
    pub fn horizontal_basis(&self) -> Vec<KkElement> {
        self.basis.elements().iter().map(|b| horizontal_lift(b, self)).collect()
    }

    /// Seeded random element of `𝔨`.
    pub fn random_k(&self, seed: u64, scale: f64) -> Mat {
        random_algebra_element(self.group, seed, scale)
    }
}

impl fmt::Display for ScrewSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} k={} lambda={}", self.group, self.k, self.lambda)
    }
}

/// `(x, λx) ∈ E^λ`.
pub fn horizontal_lift(x: &Mat, sys: &ScrewSystem) -> KkElement {
    KkElement {
        x: x.clone(),
        y: x.scale(sys.lambda),
        k: sys.k,
    }
}

/// Orthogonal projection `(u, v) ↦ (x, λx)` onto `E^λ`, returned as `x`.
pub fn horizontal_part(a: &KkElement, lambda: f64) -> Mat {
    (&a.x + &a.y.scale(lambda)).scale(1.0 / (1.0 + lambda * lambda))
}

/// Distance from `a` to `E^λ`.
pub fn horizontal_residual(a: &KkElement, lambda: f64) -> f64 {
    let x = horizontal_part(a, lambda);
    (inner(&(&a.x - &x), &(&a.x - &x)) + inner(&(&a.y - &x.scale(lambda)), &(&a.y - &x.scale(lambda))))
        .sqrt()
}

/// Sub-Riemannian norm `‖(x, λx)‖ = ‖x‖` of the horizontal part of `a`.
pub fn sub_riemannian_norm(a: &KkElement, lambda: f64) -> f64 {
    let x = horizontal_part(a, lambda);
    inner(&x, &x).sqrt()
}

/// The bi-invariant form `λ⟨x,v⟩ + λ⟨y,u⟩ − ⟨y,v⟩ − k⟨x,u⟩`.
pub fn g_lambda_k(a: &KkElement, b: &KkElement, sys: &ScrewSystem) -> f64 {
    let l = sys.lambda;
    l * inner(&a.x, &b.y) + l * inner(&a.y, &b.x) - inner(&a.y, &b.y) - sys.k.value() * inner(&a.x, &b.x)
}

/// `h = g/(λ² − k)`, normalized so that `h((x,λx),(x,λx)) = ‖x‖²`.
pub fn h_lambda_k(a: &KkElement, b: &KkElement, sys: &ScrewSystem) -> Result<f64> {
    if sys.is_degenerate() {
        return Err(ScrewError::Precondition(format!(
            "h is undefined for lambda^2 = k (lambda = {}, k = {})",
            sys.lambda, sys.k
        )));
    }
    let l = sys.lambda;
    Ok(g_lambda_k(a, b, sys) / (l * l - sys.k.value()))
}

/// Gram matrix of `g_{λ,k}` on [`ScrewSystem::full_basis`].
pub fn g_gram(sys: &ScrewSystem) -> DMatrix<f64> {
    let b = sys.full_basis();
    DMatrix::from_fn(b.len(), b.len(), |i, j| g_lambda_k(&b[i], &b[j], sys))
}

/// Smallest and largest absolute eigenvalue of the `g_{λ,k}` Gram matrix.
pub fn g_spectrum_extent(sys: &ScrewSystem) -> (f64, f64) {
    let ev = crate::algebra::symmetric_eigenvalues(&g_gram(sys));
    let min = ev.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let max = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
    (min, max)
}

/// Largest `|g([c,a],b) + g(a,[c,b])|` over basis triples.
pub fn g_invariance_residual(sys: &ScrewSystem) -> f64 {
    let b = sys.full_basis();
    let mut worst = 0.0f64;
    for c in &b {
        let ad: Vec<KkElement> = b.iter().map(|a| bracket_unchecked(c, a)).collect();
        for i in 0..b.len() {
            for j in i..b.len() {
                let r = g_lambda_k(&ad[i], &b[j], sys) + g_lambda_k(&b[i], &ad[j], sys);
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

/// Image of an element of `𝔤_k` in the concrete model for its curvature.
#[derive(Clone, Debug, PartialEq)]
pub enum ConcreteElement {
    /// `𝔨×𝔨` with componentwise bracket.
    Product(Mat, Mat),
    /// `𝔨^ℂ` as complex matrices (quaternionic `𝔨` through its complex
    /// embedding, so the added `i` is central).
    Complexified(Mat),
    /// `𝔨⋊𝔨` as (translation, rotation), bracket
    /// `[(a,A),(b,B)] = ([A,b] − [B,a], [A,B])`.
    Motion(Mat, Mat),
}

impl ConcreteElement {
    pub fn bracket(&self, o: &ConcreteElement) -> Result<ConcreteElement> {
        use ConcreteElement::*;
        match (self, o) {
            (Product(a, b), Product(c, d)) => Ok(Product(commutator(a, c), commutator(b, d))),
            (Complexified(a), Complexified(b)) => Ok(Complexified(commutator(a, b))),
            (Motion(a, am), Motion(b, bm)) => Ok(Motion(
                &commutator(am, b) - &commutator(bm, a),
                commutator(am, bm),
            )),
            _ => Err(ScrewError::Domain("bracket across different models".into())),
        }
    }

    pub fn dist(&self, o: &ConcreteElement) -> f64 {
        use ConcreteElement::*;
        match (self, o) {
            (Product(a, b), Product(c, d)) | (Motion(a, b), Motion(c, d)) => {
                (a.dist(c).powi(2) + b.dist(d).powi(2)).sqrt()
            }
            (Complexified(a), Complexified(b)) => a.dist(b),
            _ => f64::INFINITY,
        }
    }
}

fn complex_model(m: &Mat) -> Mat {
    m.complex_embedding()
}

/// The isomorphism `T_k` from `𝔤_k` onto its concrete model:
///
/// * `k = 1`: `(x, y) ↦ (x + y, y − x)`, sending the x-axis to the
///   antidiagonal `Δ₋ = {(z, −z)}` and the y-axis to the diagonal `Δ₊`;
/// * `k = −1`: `(x, y) ↦ y + ix`;
/// * `k = 0`: the identity onto (translation, rotation) coordinates.
pub fn t_k_isomorphism(a: &KkElement) -> ConcreteElement {
    match a.k {
        Curvature::Positive => ConcreteElement::Product(&a.x + &a.y, &a.y - &a.x),
        Curvature::Negative => {
            let x = complex_model(&a.x);
            let y = complex_model(&a.y);
            ConcreteElement::Complexified(&y + &x.left_mul_scalar(Scalar::I))
        }
        Curvature::Flat => ConcreteElement::Motion(a.x.clone(), a.y.clone()),
    }
}

/// `L` in the concrete model, evaluated on the image of `(x, 0)`.
pub fn concrete_l(x: &Mat, k: Curvature) -> ConcreteElement {
    t_k_isomorphism(&KkElement::h_axis(x.clone(), k))
}

/// Maximum residuals of the `L` identities over seeded trials.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct LIdentityReport {
    pub trials: usize,
    /// `k[L(x), L(y)] − [x, y]` in `𝔤_k`.
    pub commutator_identity: f64,
    /// `[L(x), z] − L[x, z]` in `𝔤_k`.
    pub derivation_identity: f64,
    /// `[L(x), x]`.
    pub self_bracket: f64,
    /// Both identities evaluated in the concrete model through `T_k`.
    pub concrete: f64,
    /// `T_k[a, b] − [T_k a, T_k b]`.
    pub homomorphism: f64,
}

impl LIdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.commutator_identity
            .max(self.derivation_identity)
            .max(self.self_bracket)
            .max(self.concrete)
            .max(self.homomorphism)
    }
}

/// Checks `k[L(x), L(y)] = [x, y]` and `[L(x), z] = L[x, z]` for seeded
/// `x, y` on the translation axis and `z` on the rotation axis, both in
/// `𝔤_k` and in the concrete model.
pub fn verify_l_identities(sys: &ScrewSystem, trials: usize, seed: u64) -> Result<LIdentityReport> {
    if trials == 0 {
        return Err(ScrewError::Precondition("trials must be at least 1".into()));
    }
    let k = sys.k;
    let mut rep = LIdentityReport {
        trials,
        ..Default::default()
    };
    for t in 0..trials as u64 {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(3 * t);
        let x = sys.random_k(s, 1.0);
        let y = sys.random_k(s + 1, 1.0);
        let z = sys.random_k(s + 2, 1.0);
        let (px, py) = (KkElement::p_axis(x.clone(), k), KkElement::p_axis(y.clone(), k));
        let hz = KkElement::h_axis(z.clone(), k);
        let (lx, ly) = (px.l_of_x(), py.l_of_x());

        let lhs = bracket_unchecked(&lx, &ly).scale(k.value());
        let rhs = bracket_unchecked(&px, &py);
        rep.commutator_identity = rep.commutator_identity.max(lhs.dist(&rhs));

        let xz = bracket_unchecked(&px, &hz);
        let d = bracket_unchecked(&lx, &hz).dist(&xz.l_of_x());
        rep.derivation_identity = rep.derivation_identity.max(d);

        rep.self_bracket = rep.self_bracket.max(bracket_unchecked(&lx, &px).norm());

        let (tx, ty, tz) = (t_k_isomorphism(&px), t_k_isomorphism(&py), t_k_isomorphism(&hz));
        let (tlx, tly) = (concrete_l(&x, k), concrete_l(&y, k));
        let c1 = scale_concrete(&tlx.bracket(&tly)?, k.value()).dist(&tx.bracket(&ty)?);
        let c2 = tlx.bracket(&tz)?.dist(&t_k_isomorphism(&xz.l_of_x()));
        rep.concrete = rep.concrete.max(c1).max(c2);

        let a = KkElement { x: x.clone(), y: z.clone(), k };
        let b = KkElement { x: y.clone(), y: x.clone(), k };
        let h = t_k_isomorphism(&bracket_unchecked(&a, &b)).dist(&t_k_isomorphism(&a).bracket(&t_k_isomorphism(&b))?);
        rep.homomorphism = rep.homomorphism.max(h);
    }
    Ok(rep)
}

fn scale_concrete(c: &ConcreteElement, s: f64) -> ConcreteElement {
    use ConcreteElement::*;
    match c {
        Product(a, b) => Product(a.scale(s), b.scale(s)),
        Complexified(a) => Complexified(a.scale(s)),
        Motion(a, b) => Motion(a.scale(s), b.scale(s)),
    }
}

/// Residual of the semidirect product law for `k = 0` block elements:
/// `[[B₁,0],[w₁B₁,B₁]]·[[B₂,0],[w₂B₂,B₂]]` must be the block element of
/// `(w₁ + B₁w₂B₁⁻¹, B₁B₂)`.
pub fn motion_law_residual(w1: &Mat, b1: &Mat, w2: &Mat, b2: &Mat) -> Result<f64> {
    let z = Mat::zeros(b1.rows(), b1.cols(), b1.field());
    let elem = |w: &Mat, b: &Mat| Mat::from_blocks(b, &z, &(w * b), b);
    let prod = &elem(w1, b1) * &elem(w2, b2);
    let w = w1 + &crate::compactgroups::adjoint(b1, w2)?;
    Ok(prod.dist(&elem(&w, &(b1 * b2))))
}

/// Default tolerance for the `L` identities.
pub const L_IDENTITY_TOL: f64 = tolerances::TIGHT;
