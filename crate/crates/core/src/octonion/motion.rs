//! `ℝ⁷⋊SO(7)` and its Lie algebra `ℝ⁷⋊𝔬(7)`.
//!
//! Elements carry a translation and a 7×7 rotation part. Algebra elements
//! use the bracket `[(a,A),(b,B)] = (Ab − Ba, [A,B])`; both algebra and group
//! elements embed faithfully into 8×8 affine matrices `[[A, a], [0, ·]]`.

use super::cross::{apply, Vec7};
use super::g2::{so7_coords, so7_from_coords};
use crate::algebra::{commutator, mat_exp, Field, Mat, Scalar};
use crate::error::{dim_err, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct MotionElement {
    pub translation: Vec7,
    pub rotation: Mat,
}

impl MotionElement {
    pub fn new(translation: Vec7, rotation: Mat) -> Result<Self> {
        if rotation.shape() != (7, 7) {
            return Err(dim_err("MotionElement", format!("rotation part is {:?}", rotation.shape())));
        }
        Ok(MotionElement { translation, rotation })
    }

    pub fn zero() -> Self {
        MotionElement {
            translation: [0.0; 7],
            rotation: Mat::zeros(7, 7, Field::Real),
        }
    }

    pub fn identity() -> Self {
        MotionElement {
            translation: [0.0; 7],
            rotation: Mat::identity(7, Field::Real),
        }
    }

    pub fn pure_rotation(rotation: Mat) -> Self {
        MotionElement {
            translation: [0.0; 7],
            rotation,
        }
    }

    /// `(a, A) + (b, B)`.
    pub fn add(&self, o: &MotionElement) -> MotionElement {
        MotionElement {
            translation: std::array::from_fn(|i| self.translation[i] + o.translation[i]),
            rotation: &self.rotation + &o.rotation,
        }
    }

    pub fn sub(&self, o: &MotionElement) -> MotionElement {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> MotionElement {
        MotionElement {
            translation: self.translation.map(|v| s * v),
            rotation: self.rotation.scale(s),
        }
    }

    /// Algebra bracket `(Ab − Ba, [A, B])`.
    pub fn bracket(&self, o: &MotionElement) -> MotionElement {
        let ab = apply(&self.rotation, &o.translation);
        let ba = apply(&o.rotation, &self.translation);
        MotionElement {
            translation: std::array::from_fn(|i| ab[i] - ba[i]),
            rotation: commutator(&self.rotation, &o.rotation),
        }
    }

    /// Euclidean norm of translation and rotation entries together.
    pub fn norm(&self) -> f64 {
        let t: f64 = self.translation.iter().map(|v| v * v).sum();
        (t + self.rotation.frobenius_norm().powi(2)).sqrt()
    }

    pub fn dist(&self, o: &MotionElement) -> f64 {
        self.sub(o).norm()
    }

    fn affine(&self, corner: f64) -> Mat {
        let mut m = Mat::zeros(8, 8, Field::Real);
        m.set_block(0, 0, &self.rotation);
        for i in 0..7 {
            m.set(i, 7, Scalar::real(self.translation[i]));
        }
        m.set(7, 7, Scalar::real(corner));
        m
    }

    /// Algebra embedding `[[A, a], [0, 0]]`.
    pub fn to_affine_algebra(&self) -> Mat {
        self.affine(0.0)
    }

    /// Group embedding `[[A, a], [0, 1]]`.
    pub fn to_affine_group(&self) -> Mat {
        self.affine(1.0)
    }

    /// Reads the top rows of an 8×8 affine matrix.
    pub fn from_affine(m: &Mat) -> Result<Self> {
        if m.shape() != (8, 8) {
            return Err(dim_err("from_affine", format!("{:?}", m.shape())));
        }
        Ok(MotionElement {
            translation: std::array::from_fn(|i| m.re(i, 7)),
            rotation: m.block(0, 0, 7, 7),
        })
    }

    /// 28 coordinates: translation, then the upper triangle of the rotation.
    pub fn coords(&self) -> [f64; 28] {
        let mut out = [0.0; 28];
        out[..7].copy_from_slice(&self.translation);
        out[7..].copy_from_slice(&so7_coords(&self.rotation));
        out
    }

    pub fn from_coords(c: &[f64]) -> Self {
        MotionElement {
            translation: std::array::from_fn(|i| c[i]),
            rotation: so7_from_coords(&c[7..28]),
        }
    }
}

/// `exp` of an algebra element, as a group element.
pub fn motion_exp(x: &MotionElement) -> Result<MotionElement> {
    let mut e = mat_exp(&x.to_affine_algebra())?;
    // the bottom row of the exponential is exactly e₈ᵗ; pin it anyway
    e.set(7, 7, Scalar::ONE);
    MotionElement::from_affine(&e)
}

/// Group product `(a, A)(b, B) = (a + Ab, AB)`.
pub fn motion_mul(g: &MotionElement, h: &MotionElement) -> MotionElement {
    let ab = apply(&g.rotation, &h.translation);
    MotionElement {
        translation: std::array::from_fn(|i| g.translation[i] + ab[i]),
        rotation: &g.rotation * &h.rotation,
    }
}

/// Standard basis of `ℝ⁷⋊𝔬(7)` matching [`MotionElement::coords`].
pub fn standard_basis() -> Vec<MotionElement> {
    (0..28)
        .map(|i| {
            let mut c = [0.0; 28];
            c[i] = 1.0;
            MotionElement::from_coords(&c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octonion::cross::{basis_vector, l_op};

    fn sample(seed: u64) -> MotionElement {
        let mut r = crate::rng::seeded(seed);
        let c = crate::rng::gaussian_vec(&mut r, 28);
        MotionElement::from_coords(&c)
    }

    #[test]
    fn bracket_matches_affine_commutator() {
        for s in 0..10 {
            let (a, b) = (sample(2 * s), sample(2 * s + 1));
            let lhs = a.bracket(&b).to_affine_algebra();
            let rhs = commutator(&a.to_affine_algebra(), &b.to_affine_algebra());
            assert!(lhs.max_abs_diff(&rhs) < 1e-13);
        }
    }

    #[test]
    fn coords_roundtrip() {
        let a = sample(3);
        assert_eq!(MotionElement::from_coords(&a.coords()), a);
        assert_eq!(standard_basis().len(), 28);
    }

    #[test]
    fn exponential_is_a_rigid_motion() {
        let x = MotionElement::new(basis_vector(0), l_op(&basis_vector(0))).unwrap();
        let g = motion_exp(&x.scale(0.9)).unwrap();
        assert!(g.rotation.unitarity_residual() < 1e-14);
        let h = motion_exp(&x.scale(-0.9)).unwrap();
        assert!(motion_mul(&g, &h).dist(&MotionElement::identity()) < 1e-14);
        // translation along the rotation axis
        assert!((g.translation[0] - 0.9).abs() < 1e-15);
    }
}
