//! Non-compact duals `U(n,𝔽)^ℂ/U(n,𝔽)` realised as "small rotations".
//!
//! A unitary `A` is identified with its reflected graph `F(A) = {(Ax, x)}`,
//! a maximal isotropic subspace of `𝔽^{n,n}` under the split form
//! `g((x,y),(u,v)) = x*u − y*v`. The split unitary group acts on graphs by
//! Möbius transformations, the subgroup commuting with `J(x,y) = (−y,x)` is a
//! copy of `U(n,𝔽)^ℂ` via `ψ`, and the orbit of `I` is
//! `U⁺(n,𝔽) = {A unitary : Re μ > 0 for every eigenvalue μ}`.
//!
//! For `𝔽 = ℂ` the true quotient `SL(n,ℂ)/SU(n)` is a hypersurface inside
//! this picture; the module works with `U(n,ℂ)^ℂ/U(n,ℂ)` throughout and does
//! not model that refinement.

use crate::algebra::{eig_real_parts, mat_cos_sin, mat_exp, Field, Mat, Scalar};
use crate::error::{dim_err, Result, ScrewError};
use crate::rng;
use crate::tolerances;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `𝔽^{n,n}` with its split Hermitian form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitSpace {
    pub n: usize,
    pub field: Field,
}

impl SplitSpace {
    pub fn new(n: usize, field: Field) -> Result<Self> {
        if n == 0 {
            return Err(ScrewError::Domain("n must be positive".into()));
        }
        Ok(SplitSpace { n, field })
    }

    /// `R = diag(I, −I)`, the Gram matrix of `g`.
    pub fn r(&self) -> Mat {
        let mut d = vec![Scalar::ONE; self.n];
        d.extend(vec![-Scalar::ONE; self.n]);
        Mat::diagonal(&d, self.field)
    }

    /// `J = [[0, −I], [I, 0]]`.
    pub fn j(&self) -> Mat {
        let z = Mat::zeros(self.n, self.n, self.field);
        let i = Mat::identity(self.n, self.field);
        Mat::from_blocks(&z, &(-&i), &i, &z)
    }

    /// `g(X, Y) = X*RY` for column vectors (or the Gram matrix for frames).
    pub fn form(&self, x: &Mat, y: &Mat) -> Result<Mat> {
        if x.rows() != 2 * self.n || y.rows() != 2 * self.n {
            return Err(dim_err("SplitSpace::form", "vectors must have length 2n"));
        }
        (x.adjoint() * self.r()).try_mul(y)
    }

    /// `‖X*RX − R‖_F`.
    pub fn isometry_residual(&self, x: &Mat) -> f64 {
        if x.shape() != (2 * self.n, 2 * self.n) {
            return f64::INFINITY;
        }
        let r = self.r();
        (&(&x.adjoint() * &r) * x).dist(&r)
    }

    /// `‖XJ − JX‖_F`.
    pub fn j_commutator(&self, x: &Mat) -> f64 {
        if x.shape() != (2 * self.n, 2 * self.n) {
            return f64::INFINITY;
        }
        let j = self.j();
        (x * &j).dist(&(&j * x))
    }

    /// Seeded element `exp([[p, q], [q*, r]])` of `U(n,n,𝔽)` with `p`, `r`
    /// anti-Hermitian and entries of size `O(scale)`.
    pub fn random_isometry(&self, seed: u64, scale: f64) -> Mat {
        let mut g = rng::seeded(seed);
        let p = rng::anti_hermitian(&mut g, self.n, self.field, scale);
        let r = rng::anti_hermitian(&mut g, self.n, self.field, scale);
        let q = rng::uniform_matrix(&mut g, self.n, self.n, self.field).scale(scale);
        let m = Mat::from_blocks(&p, &q, &q.adjoint(), &r);
        mat_exp(&m).expect("square generator")
    }

    /// Seeded member of `U^J(n,n,𝔽)` built from `(u, z)`.
    pub fn random_j_member(&self, seed: u64, scale: f64) -> Mat {
        let mut g = rng::seeded(seed);
        let u = mat_exp(&rng::anti_hermitian(&mut g, self.n, self.field, 2.0)).expect("square");
        let z = rng::anti_hermitian(&mut g, self.n, self.field, scale);
        j_member_from(&u, &z).expect("square factors")
    }
}

/// `[[u cos z, −u sin z], [u sin z, u cos z]]`.
pub fn j_member_from(u: &Mat, z: &Mat) -> Result<Mat> {
    let (c, s) = mat_cos_sin(z)?;
    let a = u.try_mul(&c)?;
    let b = u.try_mul(&s)?;
    Ok(Mat::from_blocks(&a, &(-&b), &b, &a))
}

/// A matrix of `U(n,𝔽)` with its classification flags.
#[derive(Clone, Debug)]
pub struct UnitaryElement {
    a: Mat,
    unitarity_residual: f64,
}

impl UnitaryElement {
    /// Accepts `a` when `‖a*a − I‖_F ≤ 1e−10`.
    pub fn new(a: Mat) -> Result<Self> {
        if !a.is_square() {
            return Err(dim_err("UnitaryElement", "matrix must be square"));
        }
        let r = a.unitarity_residual();
        if r.is_nan() || r > tolerances::TIGHT {
            return Err(ScrewError::Domain(format!("not unitary (residual {r:e})")));
        }
        Ok(UnitaryElement { a, unitarity_residual: r })
    }

    pub fn identity(n: usize, field: Field) -> Self {
        UnitaryElement {
            a: Mat::identity(n, field),
            unitarity_residual: 0.0,
        }
    }

    /// `exp(w)` for a seeded anti-Hermitian `w` of size `O(scale)`.
    pub fn random(n: usize, field: Field, seed: u64, scale: f64) -> Self {
        let mut g = rng::seeded(seed);
        let a = mat_exp(&rng::anti_hermitian(&mut g, n, field, scale)).expect("square");
        UnitaryElement::new(a).expect("exponential of an anti-Hermitian matrix")
    }

    pub fn matrix(&self) -> &Mat {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    /// Smallest singular value of `A² + I`.
    pub fn a2_plus_i_margin(&self) -> f64 {
        let a2 = &self.a * &self.a;
        (&a2 + &Mat::identity(self.n(), self.field())).min_singular_value()
    }

    /// `A² + I` nonsingular, i.e. `±i` is not an eigenvalue.
    pub fn in_u_prime(&self) -> bool {
        self.a2_plus_i_margin() > tolerances::EIG_BOUNDARY
    }

    pub fn in_u_plus(&self) -> Result<bool> {
        Ok(u_plus_membership(self)?.member)
    }
}

/// Spanning frame of a graph subspace.
#[derive(Clone, Debug)]
pub struct GraphSubspace {
    /// `[A; I]/√2`, orthonormal exactly when `A` is unitary.
    pub frame: Mat,
    /// Largest entry of the `g`-Gram matrix `A*A − I` of the columns `(Ae_i, e_i)`.
    pub isotropy_residual: f64,
}

impl GraphSubspace {
    pub fn is_isotropic(&self) -> bool {
        self.isotropy_residual <= tolerances::TIGHT
    }

    /// Orthogonal projector `M(M*M)⁻¹M*` onto the span of the frame.
    pub fn projector(&self) -> Result<Mat> {
        let m = &self.frame;
        let inv = (&m.adjoint() * m).inverse()?;
        Ok(&(m * &inv) * &m.adjoint())
    }

    /// Projector distance to `other`.
    pub fn distance(&self, other: &GraphSubspace) -> Result<f64> {
        Ok(self.projector()?.dist(&other.projector()?))
    }
}

/// `F(A) = {(Ax, x)}`.
pub fn graph_subspace(a: &Mat) -> Result<GraphSubspace> {
    if !a.is_square() {
        return Err(dim_err("graph_subspace", "matrix must be square"));
    }
    let n = a.rows();
    let space = SplitSpace::new(n, a.field())?;
    let m = Mat::from_blocks(
        a,
        &Mat::zeros(n, 0, a.field()),
        &Mat::identity(n, a.field()),
        &Mat::zeros(n, 0, a.field()),
    );
    let gram = space.form(&m, &m)?;
    Ok(GraphSubspace {
        frame: m.scale(std::f64::consts::FRAC_1_SQRT_2),
        isotropy_residual: gram.max_abs(),
    })
}

/// `X·A = (aA + c)(bA + d)⁻¹` for `X = [[a, c], [b, d]] ∈ U(n,n,𝔽)`.
///
/// For an exact isometry `bA + d` is always invertible, since every maximal
/// isotropic subspace is a graph. A numerically singular denominator is
/// still reported as [`ScrewError::Singular`] ("moved to infinity").
pub fn mobius_act(x: &Mat, a: &UnitaryElement) -> Result<UnitaryElement> {
    let n = a.n();
    let space = SplitSpace::new(n, a.field().join(x.field()))?;
    let r = space.isometry_residual(x);
    if r.is_nan() || r > tolerances::TIGHT * (1.0 + x.frobenius_norm().powi(2)) {
        return Err(ScrewError::Precondition(format!(
            "X does not preserve the split form (residual {r:e})"
        )));
    }
    let (ba, bc) = (x.block(0, 0, n, n), x.block(0, n, n, n));
    let (bb, bd) = (x.block(n, 0, n, n), x.block(n, n, n, n));
    let num = &(&ba * a.matrix()) + &bc;
    let den = &(&bb * a.matrix()) + &bd;
    let inv = den.inverse().map_err(|_| ScrewError::Singular("mobius_act: point moved to infinity"))?;
    let w = &num * &inv;
    let res = w.unitarity_residual();
    if res.is_nan() || res > tolerances::EQUALITY {
        return Err(ScrewError::Numeric(format!("Möbius image lost unitarity (residual {res:e})")));
    }
    Ok(UnitaryElement {
        a: w,
        unitarity_residual: res,
    })
}

/// Blocks of a member of `U^J(n,n,𝔽)`.
#[derive(Clone, Debug)]
pub struct JMembership {
    pub member: bool,
    pub isometry_residual: f64,
    pub j_residual: f64,
    /// `(a, b)` for `X = [[a, −b], [b, a]]`, present for members.
    pub factors: Option<(Mat, Mat)>,
}

/// Tests `X*RX = R` and `XJ = JX` within `1e−10`.
pub fn uj_membership(x: &Mat) -> JMembership {
    let n = x.rows() / 2;
    let fail = JMembership {
        member: false,
        isometry_residual: f64::INFINITY,
        j_residual: f64::INFINITY,
        factors: None,
    };
    if n == 0 || x.shape() != (2 * n, 2 * n) {
        return fail;
    }
    let space = SplitSpace { n, field: x.field() };
    let scale = 1.0 + x.frobenius_norm().powi(2);
    let iso = space.isometry_residual(x);
    let jr = space.j_commutator(x);
    let member = iso <= tolerances::TIGHT * scale && jr <= tolerances::TIGHT * scale.sqrt();
    JMembership {
        member,
        isometry_residual: iso,
        j_residual: jr,
        factors: member.then(|| (x.block(0, 0, n, n), x.block(n, 0, n, n))),
    }
}

/// An element `a + ib` of `U(n,𝔽)^ℂ`, with `i` commuting with `𝔽`.
#[derive(Clone, Debug)]
pub struct Complexified {
    pub re: Mat,
    pub im: Mat,
}

impl Complexified {
    pub fn mul(&self, o: &Complexified) -> Complexified {
        Complexified {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn dist(&self, o: &Complexified) -> f64 {
        self.re.dist(&o.re).hypot(self.im.dist(&o.im))
    }

    /// The complex matrix `a + ib`; only meaningful for real `a`, `b`.
    pub fn to_complex(&self) -> Result<Mat> {
        if self.re.field() != Field::Real || self.im.field() != Field::Real {
            return Err(ScrewError::Domain("a + ib is a complex matrix only over the reals".into()));
        }
        Ok(Mat::from_fn(self.re.rows(), self.re.cols(), Field::Complex, |i, j| {
            Scalar::complex(self.re.re(i, j), self.im.re(i, j))
        }))
    }
}

/// `ψ([[a, −b], [b, a]]) = a + ib`.
pub fn psi_map(x: &Mat) -> Result<Complexified> {
    let m = uj_membership(x);
    match m.factors {
        Some((re, im)) => Ok(Complexified { re, im }),
        None => Err(ScrewError::Precondition(format!(
            "not in U^J(n,n): isometry residual {:e}, J-commutator {:e}",
            m.isometry_residual, m.j_residual
        ))),
    }
}

/// Verdict on `U⁺` membership.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlusMembership {
    pub member: bool,
    /// `min Re μ` over the eigenvalues of the (embedded) matrix.
    pub min_real_part: f64,
    /// `|min Re μ| ≤ 1e−9`: the matrix sits at infinity and no verdict is
    /// given (`member` is false).
    pub boundary: bool,
    /// Smallest singular value of `A² + I`.
    pub a2_plus_i_margin: f64,
}

impl PlusMembership {
    /// Members must have `A² + I` nonsingular.
    pub fn consistent(&self) -> bool {
        !self.member || self.a2_plus_i_margin > tolerances::EIG_BOUNDARY
    }
}

pub fn u_plus_membership(a: &UnitaryElement) -> Result<PlusMembership> {
    let min = eig_real_parts(a.matrix())?.first().copied().unwrap_or(f64::INFINITY);
    let boundary = min.abs() <= tolerances::EIG_BOUNDARY;
    Ok(PlusMembership {
        member: min > tolerances::EIG_BOUNDARY,
        min_real_part: min,
        boundary,
        a2_plus_i_margin: a.a2_plus_i_margin(),
    })
}

/// One point of the `SO(2,ℂ)` orbit of `ε ∈ S¹`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitPoint {
    pub s: f64,
    pub t: f64,
    pub epsilon: i8,
    /// `ε e^{−iε arcsin(tanh 2t)}`.
    pub closed_form: Complex64,
    /// Möbius image of `εI₂` under `ψ⁻¹(R_ζ)`, read as a unit complex number.
    pub matrix_route: Complex64,
}

impl OrbitPoint {
    pub fn gap(&self) -> f64 {
        (self.closed_form - self.matrix_route).norm()
    }
}

/// `R_ζ · ε` for `ζ = s + it`, by the closed form and by the matrix route.
pub fn so2_orbit(s: f64, t: f64, epsilon: i8) -> Result<OrbitPoint> {
    if epsilon != 1 && epsilon != -1 {
        return Err(ScrewError::Domain(format!("epsilon must be ±1, got {epsilon}")));
    }
    let e = epsilon as f64;
    let closed_form = e * Complex64::new(0.0, -e * (2.0 * t).tanh().asin()).exp();
    let u = Mat::from_rows(&[&[s.cos(), -s.sin()], &[s.sin(), s.cos()]]);
    let z = Mat::from_rows(&[&[0.0, -t], &[t, 0.0]]);
    let x = j_member_from(&u, &z)?;
    let v = UnitaryElement::new(Mat::identity(2, Field::Real).scale(e))?;
    let w = mobius_act(&x, &v)?;
    let w = w.matrix();
    Ok(OrbitPoint {
        s,
        t,
        epsilon,
        closed_form,
        matrix_route: Complex64::new(w.re(0, 0), w.re(1, 0)),
    })
}

/// `so2_orbit` over a product grid, rows ordered by `s` then `t`.
pub fn so2_orbit_table(s_grid: &[f64], t_grid: &[f64], epsilon: i8) -> Result<Vec<OrbitPoint>> {
    let mut out = Vec::with_capacity(s_grid.len() * t_grid.len());
    for &s in s_grid {
        for &t in t_grid {
            out.push(so2_orbit(s, t, epsilon)?);
        }
    }
    Ok(out)
}

/// `|g(JX, JY) + g(X, Y)|` for seeded random vectors.
pub fn j_antisymmetry_residual(space: &SplitSpace, seed: u64) -> Result<f64> {
    let mut g = rng::seeded(seed);
    let x = rng::uniform_matrix(&mut g, 2 * space.n, 1, space.field);
    let y = rng::uniform_matrix(&mut g, 2 * space.n, 1, space.field);
    let j = space.j();
    let lhs = space.form(&(&j * &x), &(&j * &y))?;
    let rhs = space.form(&x, &y)?;
    Ok((&lhs + &rhs).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIELDS: [Field; 3] = [Field::Real, Field::Complex, Field::Quaternion];

    fn rot(theta: f64) -> Mat {
        Mat::from_rows(&[&[theta.cos(), -theta.sin()], &[theta.sin(), theta.cos()]])
    }

    #[test]
    fn graphs_are_isotropic() {
        let g = graph_subspace(&Mat::identity(3, Field::Real)).unwrap();
        assert_eq!(g.isotropy_residual, 0.0);
        let g = graph_subspace(&Mat::identity(2, Field::Complex).scale(-1.0)).unwrap();
        assert!(g.is_isotropic());
        for f in FIELDS {
            for seed in 0..10 {
                let a = UnitaryElement::random(3, f, seed, 1.5);
                assert!(graph_subspace(a.matrix()).unwrap().isotropy_residual <= 1e-10);
            }
        }
        let bad = graph_subspace(&Mat::identity(2, Field::Real).scale(1.1)).unwrap();
        assert!(!bad.is_isotropic());
    }

    #[test]
    fn mobius_examples() {
        for f in FIELDS {
            let sp = SplitSpace::new(2, f).unwrap();
            let a = UnitaryElement::random(2, f, 7, 1.0);
            let same = mobius_act(&Mat::identity(4, f), &a).unwrap();
            assert!(same.matrix().dist(a.matrix()) < 1e-14);

            let u = UnitaryElement::random(2, f, 8, 1.0);
            let v = UnitaryElement::random(2, f, 9, 1.0);
            let z = Mat::zeros(2, 2, f);
            let x = Mat::from_blocks(u.matrix(), &z, &z, v.matrix());
            let want = &(u.matrix() * a.matrix()) * &v.matrix().adjoint();
            assert!(mobius_act(&x, &a).unwrap().matrix().dist(&want) < 1e-13);

            for seed in 0..10 {
                let x = sp.random_isometry(seed, 0.5);
                let y = sp.random_isometry(seed + 100, 0.5);
                let lhs = mobius_act(&(&x * &y), &a).unwrap();
                let rhs = mobius_act(&x, &mobius_act(&y, &a).unwrap()).unwrap();
                assert!(lhs.matrix().dist(rhs.matrix()) <= 1e-9);
            }
            assert!(mobius_act(&Mat::identity(4, f).scale(2.0), &a).is_err());
        }
    }

    #[test]
    fn j_membership_and_psi() {
        let m = uj_membership(&Mat::identity(4, Field::Real));
        let (a, b) = m.factors.unwrap();
        assert!(a.dist(&Mat::identity(2, Field::Real)) == 0.0 && b.max_abs() == 0.0);

        let t = 0.7;
        let z = Mat::from_rows(&[&[0.0, -t], &[t, 0.0]]);
        let x = j_member_from(&Mat::identity(2, Field::Real), &z).unwrap();
        assert!(uj_membership(&x).member);
        let psi = psi_map(&x).unwrap().to_complex().unwrap();
        let iz = z.clone().with_field(Field::Complex).left_mul_scalar(Scalar::I);
        assert!(psi.dist(&mat_exp(&iz).unwrap()) < 1e-14);

        for f in FIELDS {
            let sp = SplitSpace::new(3, f).unwrap();
            assert!(!uj_membership(&sp.random_isometry(3, 0.5)).member);
            for seed in 0..10 {
                let x = sp.random_j_member(seed, 0.8);
                let y = sp.random_j_member(seed + 50, 0.8);
                let (px, py) = (psi_map(&x).unwrap(), psi_map(&y).unwrap());
                let pxy = psi_map(&(&x * &y)).unwrap();
                assert!(pxy.dist(&px.mul(&py)) <= 1e-9);
                let want = x.dist(&y) * std::f64::consts::FRAC_1_SQRT_2;
                assert!((px.dist(&py) - want).abs() <= 1e-12 * (1.0 + want));
            }
            assert!(psi_map(&sp.random_isometry(1, 0.5)).is_err());
        }
    }

    #[test]
    fn u_plus_examples() {
        let id = u_plus_membership(&UnitaryElement::identity(2, Field::Real)).unwrap();
        assert!(id.member && !id.boundary && id.consistent());
        let pi = u_plus_membership(&UnitaryElement::new(rot(std::f64::consts::PI)).unwrap()).unwrap();
        assert!(!pi.member && !pi.boundary);
        let half = UnitaryElement::new(rot(std::f64::consts::FRAC_PI_2)).unwrap();
        let m = u_plus_membership(&half).unwrap();
        assert!(!m.member && m.boundary);
        assert!(!half.in_u_prime());
        let small = UnitaryElement::new(rot(1.0)).unwrap();
        assert!(small.in_u_plus().unwrap() && small.in_u_prime());
        for f in FIELDS {
            for seed in 0..10 {
                let a = UnitaryElement::random(3, f, seed, 1.0);
                assert!(u_plus_membership(&a).unwrap().consistent());
            }
        }
    }

    #[test]
    fn j_members_preserve_u_prime() {
        for f in FIELDS {
            let sp = SplitSpace::new(2, f).unwrap();
            for seed in 0..10 {
                let x = sp.random_j_member(seed, 0.6);
                let img = mobius_act(&x, &UnitaryElement::identity(2, f)).unwrap();
                assert!(img.in_u_prime());
                assert!(img.in_u_plus().unwrap());
            }
        }
    }

    #[test]
    fn isotropy_at_base_point() {
        for f in FIELDS {
            let sp = SplitSpace::new(2, f).unwrap();
            let id = UnitaryElement::identity(2, f);
            let u = UnitaryElement::random(2, f, 3, 1.0);
            let fixed = j_member_from(u.matrix(), &Mat::zeros(2, 2, f)).unwrap();
            assert!(mobius_act(&fixed, &id).unwrap().matrix().dist(id.matrix()) < 1e-13);
            let moved = sp.random_j_member(4, 0.5);
            assert!(mobius_act(&moved, &id).unwrap().matrix().dist(id.matrix()) > 1e-3);
            assert!(j_antisymmetry_residual(&sp, 5).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn so2_orbit_examples() {
        for eps in [1, -1] {
            let p = so2_orbit(0.3, 0.0, eps).unwrap();
            assert!((p.closed_form - Complex64::new(eps as f64, 0.0)).norm() < 1e-15);
            assert!(p.gap() < 1e-12);
        }
        let p = so2_orbit(1.1, 0.5, 1).unwrap();
        let want = Complex64::new(0.0, -(1.0f64.tanh().asin())).exp();
        assert!((p.closed_form - want).norm() < 1e-15 && p.gap() <= 1e-9);
        let far = so2_orbit(0.0, 8.0, 1).unwrap();
        assert!((far.closed_form - Complex64::new(0.0, -1.0)).norm() < 1e-6);
        assert!(far.closed_form.re > 0.0);
        assert!(so2_orbit(0.0, 0.0, 0).is_err());
    }
}
