//! The compact classical groups `SO(n)`, `SU(n)` and `Sp(n)` as groups of
//! `n×n` unitary matrices over ℝ, ℂ and ℍ, with orthonormal bases of their Lie
//! algebras under `⟨x, y⟩ = Re tr(x*y)`.
//!
//! `Sp(n)` is kept quaternionic at this level; anything spectral goes through
//! the complex embedding inside [`crate::algebra`].

use crate::algebra::{commutator, inner, numeric_rank, Field, Mat, Scalar};
use crate::error::{dim_err, Result, ScrewError};
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SO,
    SU,
    Sp,
}

impl Family {
    pub fn field(self) -> Field {
        match self {
            Family::SO => Field::Real,
            Family::SU => Field::Complex,
            Family::Sp => Field::Quaternion,
        }
    }

    fn min_n(self) -> usize {
        match self {
            Family::SO => 3,
            Family::SU => 2,
            Family::Sp => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::SO => "SO",
            Family::SU => "SU",
            Family::Sp => "Sp",
        })
    }
}

/// A compact classical group; construction enforces semisimplicity
/// (`SO(n)` needs `n ≥ 3`, `SU(n)` needs `n ≥ 2`, `Sp(n)` needs `n ≥ 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompactGroupId {
    family: Family,
    n: usize,
}

impl CompactGroupId {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n < family.min_n() {
            return Err(ScrewError::Domain(format!(
                "{family}({n}) is not semisimple; need n >= {}",
                family.min_n()
            )));
        }
        Ok(CompactGroupId { family, n })
    }

    pub fn so(n: usize) -> Result<Self> {
        Self::new(Family::SO, n)
    }

    pub fn su(n: usize) -> Result<Self> {
        Self::new(Family::SU, n)
    }

    pub fn sp(n: usize) -> Result<Self> {
        Self::new(Family::Sp, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.family.field()
    }

    /// `dim 𝔨`.
    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.family {
            Family::SO => n * (n - 1) / 2,
            Family::SU => n * n - 1,
            Family::Sp => n * (2 * n + 1),
        }
    }
}

impl fmt::Display for CompactGroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.n)
    }
}

/// Parses `SO3`, `SU:2`, `Sp(2)` and similar spellings.
impl FromStr for CompactGroupId {
    type Err = ScrewError;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !matches!(c, ':' | '(' | ')' | ' ')).collect();
        let split = t.find(|c: char| c.is_ascii_digit()).ok_or_else(|| {
            ScrewError::Domain(format!("cannot parse group '{s}': expected e.g. SU:2"))
        })?;
        let (fam, num) = t.split_at(split);
        let family = match fam.to_ascii_lowercase().as_str() {
            "so" => Family::SO,
            "su" => Family::SU,
            "sp" => Family::Sp,
            _ => return Err(ScrewError::Domain(format!("unknown group family '{fam}'"))),
        };
        let n: usize = num
            .parse()
            .map_err(|_| ScrewError::Domain(format!("bad group size '{num}'")))?;
        CompactGroupId::new(family, n)
    }
}

/// Ordered orthonormal basis of `𝔨` with its cached Gram matrix.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    group: CompactGroupId,
    elements: Vec<Mat>,
    gram: Vec<Vec<f64>>,
}

impl AlgebraBasis {
    pub fn group(&self) -> CompactGroupId {
        self.group
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    /// Coordinates of `x` (orthogonal projection onto `𝔨`).
    pub fn coords(&self, x: &Mat) -> Vec<f64> {
        self.elements.iter().map(|b| inner(b, x)).collect()
    }

    pub fn from_coords(&self, c: &[f64]) -> Mat {
        let g = self.group;
        let mut out = Mat::zeros(g.n(), g.n(), g.field());
        for (b, &x) in self.elements.iter().zip(c) {
            if x != 0.0 {
                out += &b.scale(x);
            }
        }
        out
    }

    /// Distance from `x` to `𝔨`.
    pub fn distance_to_span(&self, x: &Mat) -> f64 {
        x.dist(&self.from_coords(&self.coords(x)))
    }

    /// Largest distance from a basis bracket `[b_i, b_j]` to the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let c = commutator(&self.elements[i], &self.elements[j]);
                worst = worst.max(self.distance_to_span(&c));
            }
        }
        worst
    }

    /// `max |⟨[x,y],z⟩ − ⟨x,[y,z]⟩|` over basis triples.
    pub fn invariance_residual(&self) -> f64 {
        let e = &self.elements;
        let brackets: Vec<Vec<Mat>> = e
            .iter()
            .map(|x| e.iter().map(|y| commutator(x, y)).collect())
            .collect();
        let mut worst = 0.0f64;
        for a in 0..e.len() {
            for b in 0..e.len() {
                for c in 0..e.len() {
                    let lhs = inner(&brackets[a][b], &e[c]);
                    let rhs = inner(&e[a], &brackets[b][c]);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }

    /// Rank of all pairwise basis brackets; equals `dim 𝔨` for semisimple `𝔨`.
    pub fn derived_rank(&self, tol: f64) -> usize {
        let mut v = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                v.push(commutator(&self.elements[i], &self.elements[j]));
            }
        }
        numeric_rank(&v, tol)
    }
}

fn unit(n: usize, field: Field, entries: &[(usize, usize, Scalar)]) -> Mat {
    let mut m = Mat::zeros(n, n, field);
    for &(i, j, v) in entries {
        m.set(i, j, v);
    }
    m
}

/// Deterministic orthonormal basis of `𝔨`: off-diagonal generators in
/// lexicographic `(i, j)` order, then the diagonal (Cartan) part.
pub fn algebra_basis(id: CompactGroupId) -> AlgebraBasis {
    let n = id.n();
    let field = id.field();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = Vec::with_capacity(id.dim());
    for i in 0..n {
        for j in i + 1..n {
            elements.push(unit(n, field, &[(i, j, Scalar::real(r)), (j, i, Scalar::real(-r))]));
            let imag_units: &[Scalar] = match id.family() {
                Family::SO => &[],
                Family::SU => &[Scalar::I],
                Family::Sp => &[Scalar::I, Scalar::J, Scalar::K],
            };
            for &q in imag_units {
                elements.push(unit(n, field, &[(i, j, q.scale(r)), (j, i, q.scale(r))]));
            }
        }
    }
    match id.family() {
        Family::SO => {}
        Family::SU => {
            for k in 1..n {
                let norm = ((k + k * k) as f64).sqrt();
                let mut entries: Vec<(usize, usize, Scalar)> =
                    (0..k).map(|l| (l, l, Scalar::complex(0.0, 1.0 / norm))).collect();
                entries.push((k, k, Scalar::complex(0.0, -(k as f64) / norm)));
                elements.push(unit(n, field, &entries));
            }
        }
        Family::Sp => {
            for l in 0..n {
                for q in [Scalar::I, Scalar::J, Scalar::K] {
                    elements.push(unit(n, field, &[(l, l, q)]));
                }
            }
        }
    }
    debug_assert_eq!(elements.len(), id.dim());
    let gram = elements
        .iter()
        .map(|a| elements.iter().map(|b| inner(a, b)).collect())
        .collect();
    AlgebraBasis {
        group: id,
        elements,
        gram,
    }
}

/// Shared, lazily built basis.
pub fn shared_basis(id: CompactGroupId) -> Arc<AlgebraBasis> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<CompactGroupId, Arc<AlgebraBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(id).or_insert_with(|| Arc::new(algebra_basis(id))).clone()
}

/// `Ad(g)x = g x g⁻¹`.
pub fn adjoint(g: &Mat, x: &Mat) -> Result<Mat> {
    if !g.is_square() || g.shape() != x.shape() {
        return Err(dim_err("adjoint", format!("{:?} acting on {:?}", g.shape(), x.shape())));
    }
    let inv = g.inverse()?;
    Ok(&(g * x) * &inv)
}

/// Seeded element of `𝔨` with coordinates uniform in `[-scale, scale)`
/// against the orthonormal basis, so `‖X‖_F ≤ scale·√dim`.
pub fn random_algebra_element(id: CompactGroupId, seed: u64, scale: f64) -> Mat {
    let basis = shared_basis(id);
    let mut rng = rng::seeded(seed);
    let coords: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-scale..scale)).collect();
    basis.from_coords(&coords)
}

/// `L_v ∈ 𝔬(3)`, the matrix of `w ↦ v × w`.
pub fn hat3(v: [f64; 3]) -> Mat {
    Mat::from_rows(&[&[0.0, -v[2], v[1]], &[v[2], 0.0, -v[0]], &[-v[1], v[0], 0.0]])
}

/// Inverse of [`hat3`] on antisymmetric matrices.
pub fn vee3(m: &Mat) -> [f64; 3] {
    [
        0.5 * (m.re(2, 1) - m.re(1, 2)),
        0.5 * (m.re(0, 2) - m.re(2, 0)),
        0.5 * (m.re(1, 0) - m.re(0, 1)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mat_exp;

    fn groups() -> Vec<CompactGroupId> {
        vec![
            CompactGroupId::so(3).unwrap(),
            CompactGroupId::so(4).unwrap(),
            CompactGroupId::su(2).unwrap(),
            CompactGroupId::su(3).unwrap(),
            CompactGroupId::sp(1).unwrap(),
            CompactGroupId::sp(2).unwrap(),
        ]
    }

    #[test]
    fn dimensions() {
        assert_eq!(algebra_basis(CompactGroupId::so(3).unwrap()).len(), 3);
        assert_eq!(algebra_basis(CompactGroupId::su(2).unwrap()).len(), 3);
        assert_eq!(algebra_basis(CompactGroupId::sp(2).unwrap()).len(), 10);
        assert_eq!(algebra_basis(CompactGroupId::su(3).unwrap()).len(), 8);
    }

    #[test]
    fn semisimplicity_guard() {
        assert!(CompactGroupId::so(2).is_err());
        assert!(CompactGroupId::su(1).is_err());
        assert!(CompactGroupId::sp(0).is_err());
        assert!(CompactGroupId::sp(1).is_ok());
    }

    #[test]
    fn parse_spellings() {
        assert_eq!("SU2".parse::<CompactGroupId>().unwrap(), CompactGroupId::su(2).unwrap());
        assert_eq!("SO:4".parse::<CompactGroupId>().unwrap(), CompactGroupId::so(4).unwrap());
        assert_eq!("Sp(1)".parse::<CompactGroupId>().unwrap(), CompactGroupId::sp(1).unwrap());
        assert!("SO2".parse::<CompactGroupId>().is_err());
        assert!("G2".parse::<CompactGroupId>().is_err());
    }

    #[test]
    fn bases_are_orthonormal_anti_hermitian_and_closed() {
        for id in groups() {
            let b = algebra_basis(id);
            for (i, row) in b.gram().iter().enumerate() {
                for (j, &g) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-15, "{id}");
                }
            }
            for e in b.elements() {
                assert_eq!(e.anti_hermitian_residual(), 0.0);
            }
            assert!(b.closure_residual() <= 1e-10, "{id}");
            assert!(b.invariance_residual() <= 1e-10, "{id}");
            assert_eq!(b.derived_rank(1e-8), id.dim(), "{id}");
        }
    }

    #[test]
    fn adjoint_examples() {
        let id = CompactGroupId::su(3).unwrap();
        let x = random_algebra_element(id, 1, 1.0);
        let y = random_algebra_element(id, 2, 1.0);
        let ident = Mat::identity(3, Field::Complex);
        assert!(adjoint(&ident, &x).unwrap().max_abs_diff(&x) < 1e-15);
        let g = mat_exp(&x).unwrap();
        assert!(adjoint(&g, &x).unwrap().max_abs_diff(&x) < 1e-12);
        let h = mat_exp(&random_algebra_element(id, 3, 2.0)).unwrap();
        let lhs = inner(&adjoint(&h, &x).unwrap(), &adjoint(&h, &y).unwrap());
        assert!((lhs - inner(&x, &y)).abs() <= 1e-10);
    }

    #[test]
    fn adjoint_singular() {
        let g = Mat::zeros(3, 3, Field::Real);
        let x = hat3([1.0, 0.0, 0.0]);
        assert!(adjoint(&g, &x).is_err());
    }

    #[test]
    fn random_elements() {
        for id in groups() {
            let a = random_algebra_element(id, 42, 0.7);
            assert_eq!(a, random_algebra_element(id, 42, 0.7));
            assert!(a.anti_hermitian_residual() <= 1e-14);
            assert!(a.frobenius_norm() <= 0.7 * id.dim() as f64);
            let span: Vec<Mat> = (1..=100).map(|s| random_algebra_element(id, s, 1.0)).collect();
            assert_eq!(numeric_rank(&span, 1e-8), id.dim(), "{id}");
        }
    }

    #[test]
    fn hat_vee() {
        let v = [0.3, -1.2, 2.0];
        assert_eq!(vee3(&hat3(v)), v);
        let w = [1.0, 0.5, -0.25];
        let lw = &hat3(v) * &Mat::from_real(3, 1, &w);
        let cross = [v[1] * w[2] - v[2] * w[1], v[2] * w[0] - v[0] * w[2], v[0] * w[1] - v[1] * w[0]];
        for (i, c) in cross.iter().enumerate() {
            assert!((lw.re(i, 0) - c).abs() < 1e-15);
        }
    }
}
