//! The octonionic cross product on `ℝ⁷ = Im 𝕆`.
//!
//! With respect to `{e₁, …, e₇}` it is fixed by `e_i × e_{i+1} = e_{i+3}`
//! (indices mod 7), antisymmetry, and the rule that `e_i × e_j = e_k` implies
//! `e_j × e_k = e_i`.

use crate::algebra::{Field, Mat, Scalar};

pub type Vec7 = [f64; 7];

pub fn basis_vector(i: usize) -> Vec7 {
    let mut v = [0.0; 7];
    v[i] = 1.0;
    v
}

pub fn dot(u: &Vec7, v: &Vec7) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(u: &Vec7) -> f64 {
    dot(u, u).sqrt()
}

pub fn axpy(a: f64, x: &Vec7, y: &Vec7) -> Vec7 {
    std::array::from_fn(|i| a * x[i] + y[i])
}

pub fn scale(a: f64, x: &Vec7) -> Vec7 {
    x.map(|v| a * v)
}

/// Column vector of `u`.
pub fn column(u: &Vec7) -> Mat {
    Mat::from_real(7, 1, u)
}

/// `m·u` for a real 7×7 matrix.
pub fn apply(m: &Mat, u: &Vec7) -> Vec7 {
    std::array::from_fn(|i| (0..7).map(|j| m.re(i, j) * u[j]).sum())
}

/// Products of basis vectors, one row of the multiplication table per
/// left factor: `e_i × e_j = sign · e_index` (sign 0 on the diagonal).
#[derive(Clone, Debug, PartialEq)]
pub struct CrossTable {
    entries: [[(f64, usize); 7]; 7],
}

/// The 21 products listed in the classical table, as `(k, i, j)` with
/// `e_k = e_i × e_j` (1-based).
pub const LISTED_PRODUCTS: [(usize, usize, usize); 21] = [
    (1, 5, 6),
    (1, 2, 4),
    (1, 3, 7),
    (2, 6, 7),
    (2, 4, 1),
    (2, 3, 5),
    (3, 7, 1),
    (3, 5, 2),
    (3, 4, 6),
    (4, 1, 2),
    (4, 6, 3),
    (4, 5, 7),
    (5, 2, 3),
    (5, 7, 4),
    (5, 6, 1),
    (6, 3, 4),
    (6, 7, 2),
    (6, 1, 5),
    (7, 4, 5),
    (7, 2, 6),
    (7, 1, 3),
];

impl CrossTable {
    /// The table generated by `e_i × e_{i+1} = e_{i+3}`.
    pub fn standard() -> Self {
        let mut entries = [[(0.0, 0usize); 7]; 7];
        for i in 0..7 {
            let (a, b, c) = (i, (i + 1) % 7, (i + 3) % 7);
            for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
                entries[p][q] = (1.0, r);
                entries[q][p] = (-1.0, r);
            }
        }
        CrossTable { entries }
    }

    /// The standard table with `e₁ × e₂` (and `e₂ × e₁`) pointing at `e₅`
    /// instead of `e₄`; antisymmetric but no longer cyclic.
    pub fn with_typo() -> Self {
        let mut t = Self::standard();
        t.entries[0][1] = (1.0, 4);
        t.entries[1][0] = (-1.0, 4);
        t
    }

    /// `e_i × e_j` as `(sign, index)`, 0-based.
    pub fn entry(&self, i: usize, j: usize) -> (f64, usize) {
        self.entries[i][j]
    }

    pub fn cross(&self, u: &Vec7, v: &Vec7) -> Vec7 {
        let mut w = [0.0; 7];
        for i in 0..7 {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..7 {
                let (s, k) = self.entries[i][j];
                if s != 0.0 {
                    w[k] += s * u[i] * v[j];
                }
            }
        }
        w
    }

    /// Matrix of `L_u : v ↦ u × v`.
    pub fn l_op(&self, u: &Vec7) -> Mat {
        let mut m = Mat::zeros(7, 7, Field::Real);
        for j in 0..7 {
            let col = self.cross(u, &basis_vector(j));
            for (i, &c) in col.iter().enumerate() {
                if c != 0.0 {
                    m.set(i, j, Scalar::real(c));
                }
            }
        }
        m
    }

    /// Largest `‖e_i × e_j + e_j × e_i‖` over all 49 pairs.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..7 {
            for j in 0..7 {
                let (ei, ej) = (basis_vector(i), basis_vector(j));
                let s = axpy(1.0, &self.cross(&ei, &ej), &self.cross(&ej, &ei));
                worst = worst.max(norm(&s));
            }
        }
        worst
    }

    /// Number of pairs with `e_i × e_j = e_k` but `e_j × e_k ≠ e_i`.
    pub fn cyclicity_violations(&self) -> usize {
        let mut bad = 0;
        for i in 0..7 {
            for j in 0..7 {
                let (s, k) = self.entries[i][j];
                if s == 1.0 && self.entries[j][k] != (1.0, i) {
                    bad += 1;
                }
            }
        }
        bad
    }

    /// Number of listed products the table gets wrong.
    pub fn listed_product_mismatches(&self) -> usize {
        LISTED_PRODUCTS
            .iter()
            .filter(|&&(k, i, j)| self.cross(&basis_vector(i - 1), &basis_vector(j - 1)) != basis_vector(k - 1))
            .count()
    }
}

fn standard_table() -> &'static CrossTable {
    use std::sync::OnceLock;
    static T: OnceLock<CrossTable> = OnceLock::new();
    T.get_or_init(CrossTable::standard)
}

/// `u × v` with the standard table.
pub fn cross(u: &Vec7, v: &Vec7) -> Vec7 {
    standard_table().cross(u, v)
}

/// `L_u`.
pub fn l_op(u: &Vec7) -> Mat {
    standard_table().l_op(u)
}

/// `u ∧ v : w ↦ ⟨w, u⟩v − ⟨w, v⟩u`, i.e. `v uᵗ − u vᵗ`.
pub fn wedge(u: &Vec7, v: &Vec7) -> Mat {
    Mat::from_fn(7, 7, Field::Real, |i, j| Scalar::real(v[i] * u[j] - u[i] * v[j]))
}

/// `Z(u, v) = 3 u∧v − L_{u×v}`.
pub fn z_op(u: &Vec7, v: &Vec7) -> Mat {
    z_op_with(standard_table(), u, v)
}

pub fn z_op_with(t: &CrossTable, u: &Vec7, v: &Vec7) -> Mat {
    &wedge(u, v).scale(3.0) - &t.l_op(&t.cross(u, v))
}

/// Identities for `[L_u, L_v]` and its splitting.
#[derive(Clone, Debug)]
pub struct BracketLL {
    /// `[L_u, L_v] − (3u∧v − 2L_{u×v})`.
    pub first_identity: f64,
    /// `[L_u, L_v] + L_{u×v} − Z(u, v)`.
    pub second_identity: f64,
    /// Component in `ℒ`, `−L_{u×v}`.
    pub l_component: Mat,
    /// Component in `𝔤₂`, `Z(u, v)`.
    pub g2_component: Mat,
}

pub fn bracket_ll(u: &Vec7, v: &Vec7) -> BracketLL {
    let (lu, lv) = (l_op(u), l_op(v));
    let br = crate::algebra::commutator(&lu, &lv);
    let luv = l_op(&cross(u, v));
    let w = wedge(u, v).scale(3.0);
    let z = z_op(u, v);
    BracketLL {
        first_identity: br.max_abs_diff(&(&w - &luv.scale(2.0))),
        second_identity: (&br + &luv).max_abs_diff(&z),
        l_component: luv.scale(-1.0),
        g2_component: z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn e(i: usize) -> Vec7 {
        basis_vector(i - 1)
    }

    #[test]
    fn table_examples() {
        assert_eq!(cross(&e(1), &e(2)), e(4));
        assert_eq!(cross(&e(5), &e(6)), e(1));
        assert_eq!(cross(&e(3), &e(3)), [0.0; 7]);
        let t = CrossTable::standard();
        assert_eq!(t.antisymmetry_residual(), 0.0);
        assert_eq!(t.cyclicity_violations(), 0);
        assert_eq!(t.listed_product_mismatches(), 0);
    }

    #[test]
    fn typo_is_detected() {
        let t = CrossTable::with_typo();
        assert_eq!(t.antisymmetry_residual(), 0.0);
        assert!(t.cyclicity_violations() > 0);
        assert!(t.listed_product_mismatches() > 0);
    }

    #[test]
    fn norm_identity_and_orthogonality() {
        let mut r = rng::seeded(1);
        for _ in 0..50 {
            let u: Vec7 = rng::gaussian_vec(&mut r, 7).try_into().unwrap();
            let v: Vec7 = rng::gaussian_vec(&mut r, 7).try_into().unwrap();
            let w = cross(&u, &v);
            assert!(dot(&w, &u).abs() < 1e-12 && dot(&w, &v).abs() < 1e-12);
            let want = dot(&u, &u) * dot(&v, &v) - dot(&u, &v).powi(2);
            assert!((dot(&w, &w) - want).abs() < 1e-11);
            assert!(norm(&apply(&l_op(&u), &u)) < 1e-14);
        }
    }

    #[test]
    fn l_and_wedge_examples() {
        assert_eq!(l_op(&[0.0; 7]), Mat::zeros(7, 7, Field::Real));
        assert_eq!(apply(&l_op(&e(1)), &e(2)), e(4));
        assert!(l_op(&e(3)).anti_hermitian_residual() == 0.0);
        assert_eq!(wedge(&e(1), &e(1)), Mat::zeros(7, 7, Field::Real));
        assert_eq!(apply(&wedge(&e(1), &e(2)), &e(1)), e(2));
        assert_eq!(apply(&wedge(&e(1), &e(2)), &e(3)), [0.0; 7]);
    }

    #[test]
    fn z_examples() {
        assert_eq!(apply(&z_op(&e(1), &e(2)), &e(1)), scale(2.0, &e(2)));
        let mut r = rng::seeded(2);
        let x: Vec7 = rng::gaussian_vec(&mut r, 7).try_into().unwrap();
        let x = scale(1.0 / norm(&x), &x);
        let y0: Vec7 = rng::gaussian_vec(&mut r, 7).try_into().unwrap();
        let y = axpy(-dot(&y0, &x), &x, &y0);
        let y = scale(1.0 / norm(&y), &y);
        let z = z_op(&x, &y);
        assert!(norm(&axpy(-2.0, &y, &apply(&z, &x))) < 1e-14);
        assert!(norm(&apply(&z, &cross(&x, &y))) < 1e-14);
    }

    #[test]
    fn ll_bracket_identities() {
        let b = bracket_ll(&e(1), &e(2));
        assert!(b.first_identity < 1e-15 && b.second_identity < 1e-15);
        let b = bracket_ll(&e(4), &e(4));
        assert_eq!(b.g2_component.max_abs(), 0.0);
        let mut r = rng::seeded(3);
        for _ in 0..100 {
            let u: Vec7 = rng::gaussian_vec(&mut r, 7).try_into().unwrap();
            let v: Vec7 = rng::gaussian_vec(&mut r, 7).try_into().unwrap();
            let b = bracket_ll(&u, &v);
            assert!(b.first_identity <= 1e-12 && b.second_identity <= 1e-12);
        }
    }
}
