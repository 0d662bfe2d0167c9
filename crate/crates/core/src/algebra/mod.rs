//! Numerical kernel shared by every other module: scalars and matrices over
//! ℝ/ℂ/ℍ, the commutator, the canonical trace form, numeric rank, the matrix
//! exponential and eigenvalue real parts.

mod expm;
mod mat;
mod scalar;

pub use expm::{mat_cos_sin, mat_exp, MAX_TERMS, SCALED_NORM};
pub use mat::Mat;
pub use scalar::{Field, Scalar};

use crate::error::{dim_err, Result, ScrewError};
use nalgebra::{DMatrix, Schur, SymmetricEigen};

/// Size limit (after complex embedding) for [`eig_real_parts`].
pub const EIG_SIZE_LIMIT: usize = 16;
const EIG_MAX_ITERATIONS: usize = 10_000;

fn check_same(op: &'static str, a: &Mat, b: &Mat) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(dim_err(op, format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    if a.field() != b.field() {
        return Err(ScrewError::FieldMismatch {
            op,
            left: a.field(),
            right: b.field(),
        });
    }
    Ok(())
}

/// Commutator `ab − ba`.
pub fn bracket(a: &Mat, b: &Mat) -> Result<Mat> {
    check_same("bracket", a, b)?;
    if !a.is_square() {
        return Err(dim_err("bracket", "operands must be square"));
    }
    Ok(commutator(a, b))
}

/// Unchecked commutator for internal use on known-compatible operands.
#[inline]
pub(crate) fn commutator(a: &Mat, b: &Mat) -> Mat {
    &(a * b) - &(b * a)
}

/// The canonical invariant inner product `⟨a, b⟩ = Re tr(a*b)`.
///
/// On anti-Hermitian matrices this equals `−Re tr(ab)`, so it is positive
/// definite and ad-invariant there (`⟨L, L⟩ = 2` for the planar rotation
/// generator).
pub fn re_trace_inner(a: &Mat, b: &Mat) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(dim_err("re_trace_inner", format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(inner(a, b))
}

/// Unchecked [`re_trace_inner`]; mixed fields are fine since it is a plain
/// dot product of real components.
#[inline]
pub(crate) fn inner(a: &Mat, b: &Mat) -> f64 {
    a.entries().iter().zip(b.entries()).map(|(x, y)| x.re_dot(*y)).sum()
}

/// Gram matrix `G_ij = ⟨v_i, v_j⟩`.
pub fn gram(vectors: &[Mat]) -> Result<DMatrix<f64>> {
    if let Some(first) = vectors.first() {
        for v in vectors {
            if v.shape() != first.shape() {
                return Err(dim_err("gram", format!("{:?} vs {:?}", v.shape(), first.shape())));
            }
        }
    }
    let n = vectors.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = inner(&vectors[i], &vectors[j]);
            g[(i, j)] = x;
            g[(j, i)] = x;
        }
    }
    Ok(g)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Rank of a family of same-shape matrices, counted as the number of Gram
/// eigenvalues above `tol · λ_max`. Empty or all-zero families have rank 0.
pub fn numeric_rank(vectors: &[Mat], tol: f64) -> usize {
    match gram(vectors) {
        Ok(g) => rank_of_gram(&g, tol),
        Err(_) => 0,
    }
}

pub(crate) fn rank_of_gram(g: &DMatrix<f64>, tol: f64) -> usize {
    let ev = symmetric_eigenvalues(g);
    let max = ev.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return 0;
    }
    ev.iter().filter(|&&x| x > tol * max).count()
}

/// Real parts of the eigenvalues of `a` (of its complex embedding for
/// quaternionic input), ascending.
pub fn eig_real_parts(a: &Mat) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(dim_err("eig_real_parts", "matrix must be square"));
    }
    let d = a.to_dmatrix();
    if d.nrows() > EIG_SIZE_LIMIT {
        return Err(ScrewError::Capacity {
            op: "eig_real_parts",
            size: d.nrows(),
            limit: EIG_SIZE_LIMIT,
        });
    }
    if d.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(d, f64::EPSILON, EIG_MAX_ITERATIONS)
        .ok_or_else(|| ScrewError::Numeric("shifted QR iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut re: Vec<f64> = (0..t.nrows()).map(|i| t[(i, i)].re).collect();
    re.sort_by(f64::total_cmp);
    Ok(re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn l2() -> Mat {
        Mat::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]])
    }

    fn rand_anti_hermitian(n: usize, field: Field, rng: &mut ChaCha8Rng) -> Mat {
        let c = field.components();
        let m = Mat::from_fn(n, n, field, |_, _| {
            let mut v = [0.0; 4];
            for x in v.iter_mut().take(c) {
                *x = rng.gen_range(-1.0..1.0);
            }
            Scalar::new(v[0], v[1], v[2], v[3])
        });
        (&m - &m.adjoint()).scale(0.5)
    }

    #[test]
    fn bracket_examples() {
        let a = l2();
        assert_eq!(bracket(&a, &a).unwrap(), Mat::zeros(2, 2, Field::Real));
        let e12 = Mat::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let e21 = Mat::from_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(bracket(&e12, &e21).unwrap(), Mat::from_rows(&[&[1.0, 0.0], &[0.0, -1.0]]));
    }

    #[test]
    fn bracket_rejects_mismatch() {
        let a = Mat::identity(2, Field::Real);
        let b = Mat::identity(3, Field::Real);
        assert!(matches!(bracket(&a, &b), Err(ScrewError::Dimension { .. })));
        let c = Mat::identity(2, Field::Complex);
        assert!(matches!(bracket(&a, &c), Err(ScrewError::FieldMismatch { .. })));
    }

    #[test]
    fn jacobi_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [Field::Real, Field::Complex, Field::Quaternion] {
            for _ in 0..20 {
                let a = rand_anti_hermitian(4, field, &mut rng);
                let b = rand_anti_hermitian(4, field, &mut rng);
                let c = rand_anti_hermitian(4, field, &mut rng);
                let j = &(&commutator(&a, &commutator(&b, &c)) + &commutator(&b, &commutator(&c, &a)))
                    + &commutator(&c, &commutator(&a, &b));
                assert!(j.frobenius_norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn inner_examples() {
        assert_eq!(re_trace_inner(&l2(), &l2()).unwrap(), 2.0);
        let mut a = Mat::zeros(3, 3, Field::Real);
        a.set(0, 1, Scalar::real(1.0));
        a.set(1, 0, Scalar::real(-1.0));
        let mut b = Mat::zeros(3, 3, Field::Real);
        b.set(1, 2, Scalar::real(1.0));
        b.set(2, 1, Scalar::real(-1.0));
        assert_eq!(re_trace_inner(&a, &b).unwrap(), 0.0);
        assert!(re_trace_inner(&a, &Mat::zeros(2, 2, Field::Real)).is_err());
    }

    #[test]
    fn inner_is_ad_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for field in [Field::Real, Field::Complex, Field::Quaternion] {
            for _ in 0..20 {
                let w = rand_anti_hermitian(3, field, &mut rng);
                let u = rand_anti_hermitian(3, field, &mut rng);
                let v = rand_anti_hermitian(3, field, &mut rng);
                let r = inner(&commutator(&w, &u), &v) + inner(&u, &commutator(&w, &v));
                assert!(r.abs() <= 1e-12);
                assert!(inner(&u, &u) > 0.0);
            }
        }
    }

    #[test]
    fn rank_examples() {
        let v = l2();
        assert_eq!(numeric_rank(&[v.clone(), v.scale(2.0)], 1e-8), 1);
        assert_eq!(numeric_rank(&[], 1e-8), 0);
        assert_eq!(numeric_rank(&[Mat::zeros(2, 2, Field::Real)], 1e-8), 0);
        let mut basis = Vec::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let mut m = Mat::zeros(3, 3, Field::Real);
            m.set(i, j, Scalar::real(1.0));
            m.set(j, i, Scalar::real(-1.0));
            basis.push(m);
        }
        assert_eq!(numeric_rank(&basis, 1e-8), 3);
    }

    #[test]
    fn eig_examples() {
        assert_eq!(eig_real_parts(&Mat::identity(3, Field::Real)).unwrap(), vec![1.0, 1.0, 1.0]);
        let th = 2.0 * std::f64::consts::PI / 3.0;
        let r = Mat::from_rows(&[&[th.cos(), -th.sin()], &[th.sin(), th.cos()]]);
        for x in eig_real_parts(&r).unwrap() {
            assert!((x + 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn eig_of_quaternionic_uses_embedding() {
        let q = Mat::from_scalars(1, 1, Field::Quaternion, vec![Scalar::new(0.6, 0.0, 0.8, 0.0)]);
        let re = eig_real_parts(&q).unwrap();
        assert_eq!(re.len(), 2);
        assert!(re.iter().all(|x| (x - 0.6).abs() < 1e-12));
    }

    #[test]
    fn eig_capacity() {
        let big = Mat::identity(9, Field::Quaternion);
        assert!(matches!(eig_real_parts(&big), Err(ScrewError::Capacity { .. })));
    }

    #[test]
    fn eig_random_special_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = mat_exp(&rand_anti_hermitian(4, Field::Real, &mut rng).scale(3.0)).unwrap();
            for x in eig_real_parts(&g).unwrap() {
                assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&x));
            }
        }
    }
}
