//! Screw-motion control systems on Lie groups.
//!
//! For a compact classical group `K` and a curvature sign `k ∈ {1, −1, 0}`
//! the crate models the symmetric pairs `(K×K, ΔK)`, `(K^ℂ, K)` and
//! `(𝔨⋊K, K)` through one Lie algebra `𝔨 ⊕ 𝔨` with a `k`-dependent bracket,
//! together with the left-invariant screw distribution of pitch `λ`. On top of
//! that it decides controllability by a step-2 bracket rank test and
//! certifies the closed-form sub-Riemannian geodesics numerically.
//! The [`octonion`] module does the same for the seven-dimensional screw
//! system on `ℝ⁷⋊SO(7)` built from the octonionic cross product, and
//! [`dualspace`] models the non-compact duals `U(n,𝔽)^ℂ/U(n,𝔽)` as unitary
//! matrices with spectrum in the right half plane.

pub mod algebra;
pub mod cli;
pub mod compactgroups;
pub mod controllability;
pub mod dualspace;
pub mod error;
pub mod geodesics;
pub mod octonion;
pub mod report;
pub mod rng;
pub mod screwcore;
pub mod spaceform;
pub mod tolerances;
pub mod verify;

pub use error::{Result, ScrewError};
