//! Step-2 bracket generating tests.
//!
//! A left-invariant distribution `E` is bracket generating exactly when
//! `E + [E, E] + [E, [E, E]] + …` fills the Lie algebra. For the screw
//! distributions modeled here one layer of brackets always suffices when
//! anything does, so the test is `rank(E^λ + [E^λ, E^λ]) = dim 𝔤`.

use crate::algebra::{gram, symmetric_eigenvalues, Mat};
use crate::compactgroups::CompactGroupId;
use crate::error::Result;
use crate::screwcore::{bracket_unchecked, horizontal_lift, Curvature, ScrewSystem};
use crate::spaceform;
use crate::tolerances;
use serde::{Deserialize, Serialize};

/// Pitch values used by sweeps; they hit `λ² = k` for every `k`.
pub const DEFAULT_LAMBDA_GRID: [f64; 9] = [-2.0, -1.0, -0.75, -0.5, 0.0, 0.5, 0.75, 1.0, 2.0];

/// Groups exercised by the default sweep.
pub fn default_groups() -> Vec<CompactGroupId> {
    ["SO3", "SO4", "SU2", "SU3", "Sp1", "Sp2"]
        .iter()
        .map(|s| s.parse().expect("static group list"))
        .collect()
}

/// Outcome of one rank test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControllabilityReport {
    pub system: String,
    pub model: String,
    pub group: Option<String>,
    pub k: Option<i64>,
    pub kappa: Option<i64>,
    pub lambda: f64,
    pub dim_g: usize,
    /// `rank(E^λ + [E^λ, E^λ])`.
    pub dim_span: usize,
    /// Verdict of the structure theorem for this family.
    pub predicted: bool,
    /// `dim_span == dim_g`; the source of truth.
    pub observed: bool,
    /// Smallest retained Gram eigenvalue over the largest.
    pub kept_eigenvalue_ratio: f64,
    /// Largest discarded Gram eigenvalue over the largest (0 when none).
    pub dropped_eigenvalue_ratio: f64,
    /// Rank recomputed in an independent faithful model.
    pub cross_check_rank: Option<usize>,
    /// A second printed criterion, reported for audit only.
    pub alternate_predicate: Option<bool>,
    /// Set when `alternate_predicate` disagrees with the computed rank.
    pub discrepancy: bool,
}

impl ControllabilityReport {
    /// The computed verdict matches the theorem and every cross-check.
    pub fn consistent(&self) -> bool {
        self.predicted == self.observed && self.cross_check_rank.is_none_or(|r| r == self.dim_span)
    }
}

/// Rank of a spanning family together with the eigenvalue gap around the
/// threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankGap {
    pub rank: usize,
    pub kept_ratio: f64,
    pub dropped_ratio: f64,
}

pub fn rank_with_gap(vectors: &[Mat], tol: f64) -> RankGap {
    let ev = match gram(vectors) {
        Ok(g) => symmetric_eigenvalues(&g),
        Err(_) => Vec::new(),
    };
    let max = ev.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return RankGap {
            rank: 0,
            kept_ratio: 0.0,
            dropped_ratio: 0.0,
        };
    }
    let mut gap = RankGap {
        rank: 0,
        kept_ratio: 1.0,
        dropped_ratio: 0.0,
    };
    for &e in &ev {
        let r = e / max;
        if r > tol {
            gap.rank += 1;
            gap.kept_ratio = gap.kept_ratio.min(r);
        } else {
            gap.dropped_ratio = gap.dropped_ratio.max(r.abs());
        }
    }
    gap
}

/// Predicted verdict: controllable unless `(k, λ) ∈ {(1, ±1), (0, 0)}`.
pub fn theorem_predicate(k: Curvature, lambda: f64) -> bool {
    !crate::screwcore::is_degenerate_pitch(k, lambda)
}

/// Builds the lifts of a basis of `𝔨` and all their pairwise brackets and
/// compares the rank of the family with `dim 𝔤_k`. The same family is also
/// ranked through block representations as an independent check.
pub fn bracket_generating_rank(sys: &ScrewSystem) -> ControllabilityReport {
    bracket_generating_rank_with(sys, tolerances::RANK_RELATIVE)
}

pub fn bracket_generating_rank_with(sys: &ScrewSystem, tol: f64) -> ControllabilityReport {
    let lifts: Vec<_> = sys.basis().elements().iter().map(|b| horizontal_lift(b, sys)).collect();
    let mut family = lifts.clone();
    for i in 0..lifts.len() {
        for j in i + 1..lifts.len() {
            family.push(bracket_unchecked(&lifts[i], &lifts[j]));
        }
    }
    let stacked: Vec<Mat> = family.iter().map(|e| e.to_stacked()).collect();
    let blocks: Vec<Mat> = family.iter().map(|e| e.block_rep()).collect();
    let gap = rank_with_gap(&stacked, tol);
    let cross = rank_with_gap(&blocks, tol).rank;
    let dim_g = sys.dim_g();
    ControllabilityReport {
        system: sys.to_string(),
        model: "kk".into(),
        group: Some(sys.group().to_string()),
        k: Some(sys.k().sign()),
        kappa: None,
        lambda: sys.lambda(),
        dim_g,
        dim_span: gap.rank,
        predicted: theorem_predicate(sys.k(), sys.lambda()),
        observed: gap.rank == dim_g,
        kept_eigenvalue_ratio: gap.kept_ratio,
        dropped_eigenvalue_ratio: gap.dropped_ratio,
        cross_check_rank: Some(cross),
        alternate_predicate: None,
        discrepancy: false,
    }
}

/// Reports for every `(K, k, λ)` in the given lists.
pub fn sweep(groups: &[CompactGroupId], ks: &[Curvature], lambdas: &[f64]) -> Result<Vec<ControllabilityReport>> {
    let mut out = Vec::with_capacity(groups.len() * ks.len() * lambdas.len());
    for &g in groups {
        for &k in ks {
            for &l in lambdas {
                out.push(bracket_generating_rank(&ScrewSystem::new(g, k, l)?));
            }
        }
    }
    Ok(out)
}

/// Controllability of the rigid-body system on the three-dimensional space
/// form of curvature `κ`.
///
/// The rank is computed directly on the 4×4 matrix algebra of the space form
/// and cross-checked against `𝔬(3)` in `𝔤_k` with `k = κ`, which is the
/// curvature matching the model (`𝔬(4) ≅ 𝔬(3)⊕𝔬(3)`, `𝔬(1,3) ≅ 𝔬(3)^ℂ`,
/// `ℝ³⋊𝔬(3)`). The alternate predicate is the criterion `κ² ≠ λ`; it is
/// carried for audit and disagrees with the computed rank at
/// `(κ, λ) = (1, −1)` and `(−1, 1)`.
pub fn space_form_report(kappa: i64, lambda: f64) -> Result<ControllabilityReport> {
    let k = Curvature::from_sign(kappa)?;
    let gens: Vec<Mat> = (0..3)
        .map(|i| {
            let mut x = [0.0; 3];
            x[i] = 1.0;
            spaceform::distribution_element(kappa, lambda, x)
        })
        .collect();
    let mut family = gens.clone();
    for i in 0..3 {
        for j in i + 1..3 {
            family.push(crate::algebra::bracket(&gens[i], &gens[j])?);
        }
    }
    let gap = rank_with_gap(&family, tolerances::RANK_RELATIVE);
    let kk = bracket_generating_rank(&ScrewSystem::new(CompactGroupId::so(3)?, k, lambda)?);
    let observed = gap.rank == 6;
    let alternate = ((kappa * kappa) as f64 - lambda).abs() > 1e-12;
    Ok(ControllabilityReport {
        system: format!("space form kappa={kappa} lambda={lambda}"),
        model: "space_form".into(),
        group: Some("SO(3)".into()),
        k: Some(kappa),
        kappa: Some(kappa),
        lambda,
        dim_g: 6,
        dim_span: gap.rank,
        predicted: theorem_predicate(k, lambda),
        observed,
        kept_eigenvalue_ratio: gap.kept_ratio,
        dropped_eigenvalue_ratio: gap.dropped_ratio,
        cross_check_rank: Some(kk.dim_span),
        alternate_predicate: Some(alternate),
        discrepancy: alternate != observed,
    })
}
