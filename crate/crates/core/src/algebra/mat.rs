use super::scalar::{Field, Scalar};
use crate::error::{dim_err, Result, ScrewError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Dense row-major matrix over ℝ, ℂ or ℍ.
///
/// Entries are stored as [`Scalar`]s; the field tag is shared by every entry
/// and decides which arithmetic kernel runs. Arithmetic between different
/// fields promotes to the larger one.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Mat {
            rows,
            cols,
            field,
            data: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Mat::zeros(n, n, field);
        for i in 0..n {
            m.data[i * n + i] = Scalar::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, field: Field, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, field, data }
    }

    /// Real matrix from row-major values.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols, "value count does not match shape");
        Mat {
            rows,
            cols,
            field: Field::Real,
            data: values.iter().map(|&x| Scalar::real(x)).collect(),
        }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let flat: Vec<f64> = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Mat::from_real(r, c, &flat)
    }

    pub fn from_scalars(rows: usize, cols: usize, field: Field, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Mat { rows, cols, field, data }
    }

    pub fn diagonal(values: &[Scalar], field: Field) -> Self {
        let n = values.len();
        let mut m = Mat::zeros(n, n, field);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    /// Real part of entry `(i, j)`.
    #[inline]
    pub fn re(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j].re
    }

    /// Same entries, tagged with a (larger) field.
    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, self.field, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, self.field, |i, j| self.get(j, i))
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|x| x.scale(s)).collect(),
        }
    }

    /// `s·M`, scalar acting from the left.
    pub fn left_mul_scalar(&self, s: Scalar) -> Mat {
        let field = self.field.join(s.field());
        Mat {
            rows: self.rows,
            cols: self.cols,
            field,
            data: self.data.iter().map(|&x| s * x).collect(),
        }
    }

    /// `M·s`, scalar acting from the right.
    pub fn right_mul_scalar(&self, s: Scalar) -> Mat {
        let field = self.field.join(s.field());
        Mat {
            rows: self.rows,
            cols: self.cols,
            field,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        let n = self.rows.min(self.cols);
        (0..n).fold(Scalar::ZERO, |acc, i| acc + self.get(i, i))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance; `f64::INFINITY` when shapes differ.
    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius distance; `f64::INFINITY` when shapes differ.
    pub fn dist(&self, other: &Mat) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖M + M*‖_F`, zero exactly for anti-Hermitian matrices.
    pub fn anti_hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self.get(i, j) + self.get(j, i).conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `‖M*M − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).dist(&Mat::identity(self.rows, self.field))
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        Mat::from_fn(nr, nc, self.field, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        self.field = self.field.join(b.field);
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    /// `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn from_blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let field = a.field.join(b.field).join(c.field).join(d.field);
        let mut m = Mat::zeros(a.rows + c.rows, a.cols + b.cols, field);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    /// Complex matrix representing `self`.
    ///
    /// Real and complex matrices keep their shape. A quaternionic `n×m`
    /// matrix `A = A₁ + A₂ j` becomes the `2n×2m` complex matrix
    /// `[[A₁, A₂], [−Ā₂, Ā₁]]`, which is a ring homomorphism.
    pub fn complex_embedding(&self) -> Mat {
        match self.field {
            Field::Real | Field::Complex => self.clone().with_field(Field::Complex),
            Field::Quaternion => {
                let (n, m) = self.shape();
                let mut out = Mat::zeros(2 * n, 2 * m, Field::Complex);
                for i in 0..n {
                    for j in 0..m {
                        let (a, b) = self.get(i, j).symplectic_parts();
                        out.set(i, j, Scalar::from_complex(a));
                        out.set(i, m + j, Scalar::from_complex(b));
                        out.set(n + i, j, Scalar::from_complex(-b.conj()));
                        out.set(n + i, m + j, Scalar::from_complex(a.conj()));
                    }
                }
                out
            }
        }
    }

    /// Inverse of [`Mat::complex_embedding`] for the quaternionic case:
    /// reads `A₁` and `A₂` off the top blocks of a `2n×2m` complex matrix.
    pub fn from_complex_embedding(c: &Mat) -> Mat {
        assert!(c.rows.is_multiple_of(2) && c.cols.is_multiple_of(2), "embedding must have even shape");
        let (n, m) = (c.rows / 2, c.cols / 2);
        Mat::from_fn(n, m, Field::Quaternion, |i, j| {
            Scalar::from_symplectic_parts(c.get(i, j).to_complex(), c.get(i, m + j).to_complex())
        })
    }

    /// Maps a complex computation result back to `field` (dropping what the
    /// target field cannot hold).
    pub(crate) fn restore_field(c: Mat, field: Field) -> Mat {
        match field {
            Field::Quaternion => Mat::from_complex_embedding(&c),
            Field::Complex => c,
            Field::Real => {
                let data = c.data.iter().map(|x| Scalar::real(x.re)).collect();
                Mat::from_scalars(c.rows, c.cols, Field::Real, data)
            }
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        let c = self.complex_embedding();
        DMatrix::from_fn(c.rows, c.cols, |i, j| c.get(i, j).to_complex())
    }

    pub fn from_dmatrix(m: &DMatrix<Complex64>) -> Mat {
        Mat::from_fn(m.nrows(), m.ncols(), Field::Complex, |i, j| Scalar::from_complex(m[(i, j)]))
    }

    /// Matrix inverse, computed on the complex embedding.
    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(dim_err("inverse", format!("{}x{} is not square", self.rows, self.cols)));
        }
        let d = self.to_dmatrix();
        let inv = d.clone().try_inverse().ok_or(ScrewError::Singular("inverse"))?;
        let check = (&d * &inv - DMatrix::<Complex64>::identity(d.nrows(), d.ncols())).norm();
        if !check.is_finite() || check > 1e-6 {
            return Err(ScrewError::Singular("inverse"));
        }
        Ok(Mat::restore_field(Mat::from_dmatrix(&inv), self.field))
    }

    /// Smallest singular value of the (embedded) complex matrix.
    pub fn min_singular_value(&self) -> f64 {
        let d = self.to_dmatrix();
        let svd = d.svd(false, false);
        svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Real components of the entries, row-major, `field.components()` per entry.
    pub fn components(&self) -> Vec<f64> {
        let c = self.field.components();
        let mut out = Vec::with_capacity(self.data.len() * c);
        for x in &self.data {
            let all = [x.re, x.i, x.j, x.k];
            out.extend_from_slice(&all[..c]);
        }
        out
    }

    fn zip_with(&self, other: &Mat, op: &'static str, f: impl Fn(Scalar, Scalar) -> Scalar) -> Mat {
        assert_eq!(
            self.shape(),
            other.shape(),
            "{op}: shape mismatch {:?} vs {:?}",
            self.shape(),
            other.shape()
        );
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field.join(other.field),
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Checked product.
    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(dim_err(
                "matmul",
                format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        Ok(matmul(self, other))
    }
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.cols, b.rows, "matmul: inner dimensions differ");
    let field = a.field.join(b.field);
    let (n, m, p) = (a.rows, a.cols, b.cols);
    let mut out = vec![Scalar::ZERO; n * p];
    match field {
        Field::Real => {
            for i in 0..n {
                let row = &mut out[i * p..(i + 1) * p];
                for l in 0..m {
                    let x = a.data[i * m + l].re;
                    if x == 0.0 {
                        continue;
                    }
                    let brow = &b.data[l * p..(l + 1) * p];
                    for (o, y) in row.iter_mut().zip(brow) {
                        o.re += x * y.re;
                    }
                }
            }
        }
        Field::Complex => {
            for i in 0..n {
                let row = &mut out[i * p..(i + 1) * p];
                for l in 0..m {
                    let x = a.data[i * m + l];
                    if x.re == 0.0 && x.i == 0.0 {
                        continue;
                    }
                    let brow = &b.data[l * p..(l + 1) * p];
                    for (o, y) in row.iter_mut().zip(brow) {
                        o.re += x.re * y.re - x.i * y.i;
                        o.i += x.re * y.i + x.i * y.re;
                    }
                }
            }
        }
        Field::Quaternion => {
            for i in 0..n {
                let row = &mut out[i * p..(i + 1) * p];
                for l in 0..m {
                    let x = a.data[i * m + l];
                    if x == Scalar::ZERO {
                        continue;
                    }
                    let brow = &b.data[l * p..(l + 1) * p];
                    for (o, y) in row.iter_mut().zip(brow) {
                        *o += x * *y;
                    }
                }
            }
        }
    }
    Mat {
        rows: n,
        cols: p,
        field,
        data: out,
    }
}

impl Mul<&Mat> for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        matmul(self, rhs)
    }
}

impl Mul<Mat> for Mat {
    type Output = Mat;
    fn mul(self, rhs: Mat) -> Mat {
        matmul(&self, &rhs)
    }
}

impl Mul<&Mat> for Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        matmul(&self, rhs)
    }
}

impl Mul<f64> for &Mat {
    type Output = Mat;
    fn mul(self, s: f64) -> Mat {
        self.scale(s)
    }
}

impl Mul<f64> for Mat {
    type Output = Mat;
    fn mul(self, s: f64) -> Mat {
        self.scale(s)
    }
}

impl Add<&Mat> for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.zip_with(rhs, "add", |a, b| a + b)
    }
}

impl Add for Mat {
    type Output = Mat;
    fn add(self, rhs: Mat) -> Mat {
        &self + &rhs
    }
}

impl Add<&Mat> for Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        &self + rhs
    }
}

impl Sub<&Mat> for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }
}

impl Sub for Mat {
    type Output = Mat;
    fn sub(self, rhs: Mat) -> Mat {
        &self - &rhs
    }
}

impl Sub<&Mat> for Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        &self - rhs
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scale(-1.0)
    }
}

impl Neg for Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scale(-1.0)
    }
}

impl AddAssign<&Mat> for Mat {
    fn add_assign(&mut self, rhs: &Mat) {
        assert_eq!(self.shape(), rhs.shape(), "add_assign: shape mismatch");
        self.field = self.field.join(rhs.field);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += *b;
        }
    }
}

impl SubAssign<&Mat> for Mat {
    fn sub_assign(&mut self, rhs: &Mat) {
        assert_eq!(self.shape(), rhs.shape(), "sub_assign: shape mismatch");
        self.field = self.field.join(rhs.field);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= *b;
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat<{}> {}x{} [", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let x = self.get(i, j);
                match self.field {
                    Field::Real => write!(f, "{:>10.5} ", x.re)?,
                    Field::Complex => write!(f, "({:.4},{:.4}) ", x.re, x.i)?,
                    Field::Quaternion => write!(f, "({:.3},{:.3},{:.3},{:.3}) ", x.re, x.i, x.j, x.k)?,
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, field: Field, rng: &mut ChaCha8Rng) -> Mat {
        let c = field.components();
        Mat::from_fn(n, n, field, |_, _| {
            let mut v = [0.0; 4];
            for x in v.iter_mut().take(c) {
                *x = rng.gen_range(-1.0..1.0);
            }
            Scalar::new(v[0], v[1], v[2], v[3])
        })
    }

    #[test]
    fn embedding_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random(3, Field::Quaternion, &mut rng);
            let q = random(3, Field::Quaternion, &mut rng);
            let lhs = (&p * &q).complex_embedding();
            let rhs = &p.complex_embedding() * &q.complex_embedding();
            assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn embedding_roundtrip_and_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = random(2, Field::Quaternion, &mut rng);
        assert_eq!(Mat::from_complex_embedding(&p.complex_embedding()), p);
        let lhs = p.adjoint().complex_embedding();
        let rhs = p.complex_embedding().adjoint();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn inverse_per_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for field in [Field::Real, Field::Complex, Field::Quaternion] {
            let a = &random(3, field, &mut rng) + &Mat::identity(3, field).scale(3.0);
            let inv = a.inverse().unwrap();
            assert_eq!(inv.field(), field);
            assert!((&a * &inv).max_abs_diff(&Mat::identity(3, field)) < 1e-12);
        }
    }

    #[test]
    fn singular_inverse_is_an_error() {
        let a = Mat::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(a.inverse(), Err(ScrewError::Singular(_))));
    }

    #[test]
    fn mixed_field_product_promotes() {
        let r = Mat::identity(2, Field::Real);
        let c = Mat::identity(2, Field::Complex).left_mul_scalar(Scalar::I);
        let p = &r * &c;
        assert_eq!(p.field(), Field::Complex);
        assert_eq!(p.get(0, 0), Scalar::I);
    }

    #[test]
    fn components_layout() {
        let m = Mat::from_scalars(1, 2, Field::Complex, vec![Scalar::complex(1.0, 2.0), Scalar::complex(3.0, 4.0)]);
        assert_eq!(m.components(), vec![1.0, 2.0, 3.0, 4.0]);
    }
}
