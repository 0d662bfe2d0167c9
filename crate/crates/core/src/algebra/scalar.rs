//! Scalars over ℝ, ℂ and ℍ.
//!
//! Every scalar is stored as a quaternion `re + i·i + j·j + k·k`. Real and
//! complex values simply leave the unused components at zero, so a single
//! (non-commutative) product covers all three fields. The [`Field`] tag on a
//! matrix records which components are meaningful.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// The scalar field a matrix lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    /// Number of real components per entry.
    pub fn components(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
            Field::Quaternion => 4,
        }
    }

    /// Smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        self.max(other)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
            Field::Quaternion => "H",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Scalar {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { re: 0.0, i: 0.0, j: 0.0, k: 0.0 };
    pub const ONE: Scalar = Scalar { re: 1.0, i: 0.0, j: 0.0, k: 0.0 };
    pub const I: Scalar = Scalar { re: 0.0, i: 1.0, j: 0.0, k: 0.0 };
    pub const J: Scalar = Scalar { re: 0.0, i: 0.0, j: 1.0, k: 0.0 };
    pub const K: Scalar = Scalar { re: 0.0, i: 0.0, j: 0.0, k: 1.0 };

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Scalar { re, i, j, k }
    }

    pub const fn real(re: f64) -> Self {
        Scalar { re, i: 0.0, j: 0.0, k: 0.0 }
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Scalar { re, i: im, j: 0.0, k: 0.0 }
    }

    pub fn conj(self) -> Self {
        Scalar::new(self.re, -self.i, -self.j, -self.k)
    }

    /// `|q|² = q·q*`, always real and non-negative.
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Scalar::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    /// Multiplicative inverse `q*/|q|²`. Returns `None` for zero.
    pub fn inv(self) -> Option<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            None
        } else {
            Some(self.conj().scale(1.0 / n))
        }
    }

    /// Real inner product of the component vectors, `Re(q̄·p)`.
    pub fn re_dot(self, other: Scalar) -> f64 {
        self.re * other.re + self.i * other.i + self.j * other.j + self.k * other.k
    }

    /// Smallest field this value actually needs.
    pub fn field(self) -> Field {
        if self.j != 0.0 || self.k != 0.0 {
            Field::Quaternion
        } else if self.i != 0.0 {
            Field::Complex
        } else {
            Field::Real
        }
    }

    /// Splits `q = a + b·j` with `a, b ∈ ℂ`.
    pub fn symplectic_parts(self) -> (Complex64, Complex64) {
        (Complex64::new(self.re, self.i), Complex64::new(self.j, self.k))
    }

    pub fn from_symplectic_parts(a: Complex64, b: Complex64) -> Self {
        Scalar::new(a.re, a.im, b.re, b.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.i)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Scalar::complex(z.re, z.im)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    #[inline]
    fn add(self, o: Scalar) -> Scalar {
        Scalar::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    #[inline]
    fn sub(self, o: Scalar) -> Scalar {
        Scalar::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    #[inline]
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl AddAssign for Scalar {
    #[inline]
    fn add_assign(&mut self, o: Scalar) {
        *self = *self + o;
    }
}

impl SubAssign for Scalar {
    #[inline]
    fn sub_assign(&mut self, o: Scalar) {
        *self = *self - o;
    }
}

/// Hamilton product; `ij = k`, `jk = i`, `ki = j`.
impl Mul for Scalar {
    type Output = Scalar;
    #[inline]
    fn mul(self, o: Scalar) -> Scalar {
        Scalar::new(
            self.re * o.re - self.i * o.i - self.j * o.j - self.k * o.k,
            self.re * o.i + self.i * o.re + self.j * o.k - self.k * o.j,
            self.re * o.j - self.i * o.k + self.j * o.re + self.k * o.i,
            self.re * o.k + self.i * o.j - self.j * o.i + self.k * o.re,
        )
    }
}

impl Mul<f64> for Scalar {
    type Output = Scalar;
    #[inline]
    fn mul(self, s: f64) -> Scalar {
        self.scale(s)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::real(x)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::from_complex(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quat() -> impl Strategy<Value = Scalar> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
            .prop_map(|(a, b, c, d)| Scalar::new(a, b, c, d))
    }

    fn close(a: Scalar, b: Scalar) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn unit_table() {
        assert_eq!(Scalar::I * Scalar::J, Scalar::K);
        assert_eq!(Scalar::J * Scalar::K, Scalar::I);
        assert_eq!(Scalar::K * Scalar::I, Scalar::J);
        assert_eq!(Scalar::J * Scalar::I, -Scalar::K);
        assert_eq!(Scalar::I * Scalar::I, -Scalar::ONE);
    }

    #[test]
    fn complex_subfield_is_commutative() {
        let a = Scalar::complex(1.5, -2.0);
        let b = Scalar::complex(0.25, 3.0);
        assert_eq!(a * b, b * a);
        assert_eq!((a * b).field(), Field::Complex);
    }

    proptest! {
        #[test]
        fn associative(p in quat(), q in quat(), r in quat()) {
            prop_assert!(close((p * q) * r, p * (q * r)));
        }

        #[test]
        fn conjugation_reverses_products(p in quat(), q in quat()) {
            prop_assert!(close((p * q).conj(), q.conj() * p.conj()));
        }

        #[test]
        fn norm_is_real_nonnegative(q in quat()) {
            let n = q * q.conj();
            prop_assert!(n.i.abs() < 1e-12 && n.j.abs() < 1e-12 && n.k.abs() < 1e-12);
            prop_assert!(n.re >= 0.0);
            prop_assert!((n.re - q.norm_sqr()).abs() < 1e-12);
        }

        #[test]
        fn symplectic_split_roundtrip(q in quat()) {
            let (a, b) = q.symplectic_parts();
            prop_assert_eq!(Scalar::from_symplectic_parts(a, b), q);
        }
    }
}
