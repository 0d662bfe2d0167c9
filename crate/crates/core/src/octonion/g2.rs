//! `𝔤₂ ⊂ 𝔬(7)`, the derivations of the cross product, and the splitting
//! `𝔬(7) = ℒ ⊕ 𝔤₂` with `ℒ = {L_y}`.

use super::cross::{apply, basis_vector, norm, CrossTable, Vec7};
use crate::algebra::{commutator, inner, Field, Mat, Scalar};
use crate::error::{Result, ScrewError};
use nalgebra::{DMatrix, DVector};
use std::sync::OnceLock;

pub const G2_DIM: usize = 14;

/// Orthonormal basis of `𝔤₂` under `⟨A, B⟩ = tr(AᵗB)`.
#[derive(Clone, Debug)]
pub struct G2Basis {
    elements: Vec<Mat>,
    table: CrossTable,
}

/// Largest `‖Z(u×v) − Z(u)×v − u×Z(v)‖` over basis pairs `u = e_i, v = e_j`.
pub fn derivation_residual(t: &CrossTable, z: &Mat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..7 {
        for j in 0..7 {
            let (u, v) = (basis_vector(i), basis_vector(j));
            let lhs = apply(z, &t.cross(&u, &v));
            let r1 = t.cross(&apply(z, &u), &v);
            let r2 = t.cross(&u, &apply(z, &v));
            let d: Vec7 = std::array::from_fn(|k| lhs[k] - r1[k] - r2[k]);
            worst = worst.max(norm(&d));
        }
    }
    worst
}

impl G2Basis {
    /// Gram–Schmidt over `Z(e_i, e_j)`, `i < j` in lexicographic order.
    ///
    /// Fails unless exactly 14 independent derivations come out, which is
    /// how a corrupted multiplication table shows up.
    pub fn build(table: &CrossTable) -> Result<Self> {
        let mut elements: Vec<Mat> = Vec::with_capacity(G2_DIM);
        for i in 0..7 {
            for j in i + 1..7 {
                let mut z = super::cross::z_op_with(table, &basis_vector(i), &basis_vector(j));
                let start = z.frobenius_norm();
                for b in &elements {
                    z -= &b.scale(inner(b, &z));
                }
                for b in &elements {
                    z -= &b.scale(inner(b, &z));
                }
                let n = z.frobenius_norm();
                if n > 1e-8 * start.max(1.0) {
                    elements.push(z.scale(1.0 / n));
                }
            }
        }
        if elements.len() != G2_DIM {
            return Err(ScrewError::Construction(format!(
                "derivation span has dimension {}, expected {G2_DIM}",
                elements.len()
            )));
        }
        let basis = G2Basis {
            elements,
            table: table.clone(),
        };
        let d = basis.max_derivation_residual();
        if d > 1e-10 {
            return Err(ScrewError::Construction(format!("basis element fails the derivation identity by {d:e}")));
        }
        Ok(basis)
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn table(&self) -> &CrossTable {
        &self.table
    }

    pub fn max_derivation_residual(&self) -> f64 {
        self.elements
            .iter()
            .map(|z| derivation_residual(&self.table, z))
            .fold(0.0, f64::max)
    }

    /// Largest `‖[Z, L_u] − L_{Z(u)}‖` over basis elements and `u = e_s`.
    pub fn max_l_intertwining_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for z in &self.elements {
            for s in 0..7 {
                let u = basis_vector(s);
                let lhs = commutator(z, &self.table.l_op(&u));
                worst = worst.max(lhs.max_abs_diff(&self.table.l_op(&apply(z, &u))));
            }
        }
        worst
    }

    /// Largest distance from a bracket `[b_i, b_j]` to the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.elements.len() {
            for j in i + 1..self.elements.len() {
                let c = commutator(&self.elements[i], &self.elements[j]);
                let mut r = c.clone();
                for b in &self.elements {
                    r -= &b.scale(inner(b, &c));
                }
                worst = worst.max(r.frobenius_norm());
            }
        }
        worst
    }

    /// Largest `|⟨b, L_{e_s}⟩|`.
    pub fn l_orthogonality(&self) -> f64 {
        let mut worst = 0.0f64;
        for b in &self.elements {
            for s in 0..7 {
                worst = worst.max(inner(b, &self.table.l_op(&basis_vector(s))).abs());
            }
        }
        worst
    }
}

/// The shared basis for the standard table.
pub fn build_g2_basis() -> &'static G2Basis {
    static B: OnceLock<G2Basis> = OnceLock::new();
    B.get_or_init(|| G2Basis::build(&CrossTable::standard()).expect("standard table yields a 14-dimensional g2"))
}

/// Upper-triangular entries `(i < j)` of a 7×7 matrix, row-major.
pub fn so7_coords(w: &Mat) -> [f64; 21] {
    let mut out = [0.0; 21];
    let mut n = 0;
    for i in 0..7 {
        for j in i + 1..7 {
            out[n] = w.re(i, j);
            n += 1;
        }
    }
    out
}

pub fn so7_from_coords(c: &[f64]) -> Mat {
    let mut m = Mat::zeros(7, 7, Field::Real);
    let mut n = 0;
    for i in 0..7 {
        for j in i + 1..7 {
            m.set(i, j, Scalar::real(c[n]));
            m.set(j, i, Scalar::real(-c[n]));
            n += 1;
        }
    }
    m
}

/// Components of an element of `𝔬(7)` in `ℒ ⊕ 𝔤₂`.
#[derive(Clone, Debug)]
pub struct O7Split {
    pub y: Vec7,
    pub g2_part: Mat,
    /// Derivation residual of `g2_part`.
    pub derivation_residual: f64,
}

/// Writes `w = L_y + g2_part` by solving the 21×21 linear system against
/// `{L_{e_s}} ∪ 𝔤₂`.
pub fn split_o7(w: &Mat) -> Result<O7Split> {
    if w.shape() != (7, 7) || w.field() != Field::Real {
        return Err(ScrewError::Domain("split_o7 expects a real 7x7 matrix".into()));
    }
    if w.anti_hermitian_residual() > 1e-12 * w.frobenius_norm().max(1.0) {
        return Err(ScrewError::Domain("split_o7 expects an antisymmetric matrix".into()));
    }
    let g2 = build_g2_basis();
    let mut columns: Vec<Mat> = (0..7).map(|s| g2.table().l_op(&basis_vector(s))).collect();
    columns.extend(g2.elements().iter().cloned());
    let a = DMatrix::from_fn(21, 21, |r, c| so7_coords(&columns[c])[r]);
    let rhs = DVector::from_column_slice(&so7_coords(w));
    let sol = a.lu().solve(&rhs).ok_or(ScrewError::Singular("split_o7"))?;
    let y: Vec7 = std::array::from_fn(|s| sol[s]);
    let mut g2_part = Mat::zeros(7, 7, Field::Real);
    for (b, &c) in g2.elements().iter().zip(sol.iter().skip(7)) {
        g2_part += &b.scale(c);
    }
    let derivation_residual = derivation_residual(g2.table(), &g2_part);
    Ok(O7Split {
        y,
        g2_part,
        derivation_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::numeric_rank;
    use crate::octonion::cross::{bracket_ll, l_op, z_op};

    #[test]
    fn dimension_and_identities() {
        let b = build_g2_basis();
        assert_eq!(b.elements().len(), 14);
        assert!(b.max_derivation_residual() <= 1e-12);
        assert!(b.max_l_intertwining_residual() <= 1e-12);
        assert!(b.closure_residual() <= 1e-10);
        assert!(b.l_orthogonality() <= 1e-12);
        let mut all: Vec<Mat> = (0..7).map(|s| l_op(&basis_vector(s))).collect();
        all.extend(b.elements().iter().cloned());
        assert_eq!(numeric_rank(&all, 1e-8), 21);
    }

    #[test]
    fn corrupted_table_is_rejected() {
        assert!(matches!(G2Basis::build(&CrossTable::with_typo()), Err(ScrewError::Construction(_))));
    }

    #[test]
    fn split_examples() {
        let e = basis_vector;
        let s = split_o7(&l_op(&e(2))).unwrap();
        assert!(norm(&std::array::from_fn::<f64, 7, _>(|i| s.y[i] - e(2)[i])) < 1e-12);
        assert!(s.g2_part.max_abs() < 1e-12);

        let g = build_g2_basis().elements()[5].clone();
        let s = split_o7(&g).unwrap();
        assert!(norm(&s.y) < 1e-12 && s.g2_part.max_abs_diff(&g) < 1e-12);

        let w = bracket_ll(&e(0), &e(1));
        let s = split_o7(&(&w.l_component + &w.g2_component)).unwrap();
        assert!(norm(&std::array::from_fn::<f64, 7, _>(|i| s.y[i] + e(3)[i])) < 1e-12);
        assert!(s.g2_part.max_abs_diff(&z_op(&e(0), &e(1))) < 1e-12);
        assert!(s.derivation_residual < 1e-10);

        assert!(split_o7(&Mat::identity(7, Field::Real)).is_err());
    }
}
