//! Tolerance constants and the run-time tolerance configuration.
//!
//! Every threshold used by a check lives here; call sites take a
//! [`Tolerances`] value or one of these named constants, never a literal.

use serde::{Deserialize, Serialize};

/// Default equality tolerance.
pub const EQUALITY: f64 = 1e-9;
/// Default relative threshold for Gram-eigenvalue rank counting.
pub const RANK_RELATIVE: f64 = 1e-8;
/// Identities that hold to rounding on small matrices (brackets, tables).
pub const EXACT: f64 = 1e-12;
/// Identities involving a few products or one exponential.
pub const TIGHT: f64 = 1e-10;
/// Block-rep commutator against the k_k bracket formula.
pub const BLOCK_REP: f64 = 1e-14;
/// Bilinear form degeneracy: smallest |eigenvalue| relative to the largest.
pub const DEGENERACY_RELATIVE: f64 = 1e-9;
/// Bilinear form nondegeneracy margin on the sweep grid.
pub const NONDEGENERACY_RELATIVE: f64 = 1e-6;
/// Positive definiteness margin for restricted forms.
pub const POSITIVITY: f64 = 1e-8;
/// Commutator size below which a pair counts as commuting.
pub const COMMUTING: f64 = 1e-12;
/// Boundary band for eigenvalue real parts (U⁺ membership).
pub const EIG_BOUNDARY: f64 = 1e-9;
/// Cross-model agreement between two group-level constructions.
pub const CROSS_MODEL: f64 = 1e-8;

/// Environment variable overriding the default equality tolerance.
pub const TOL_ENV: &str = "SCREWSR_TOL";

/// Run-time tolerance configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Generic equality tolerance for certification residuals.
    pub equality: f64,
    /// Relative eigenvalue threshold for numeric rank.
    pub rank_relative: f64,
    /// When set, replaces every per-check tolerance in verification suites.
    pub override_all: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equality: EQUALITY,
            rank_relative: RANK_RELATIVE,
            override_all: None,
        }
    }
}

impl Tolerances {
    /// Defaults, with `SCREWSR_TOL` applied when it parses as a positive number.
    pub fn from_env() -> Self {
        let mut t = Tolerances::default();
        if let Some(v) = std::env::var(TOL_ENV).ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            if v > 0.0 && v.is_finite() {
                t.equality = v;
            }
        }
        t
    }

    /// Tolerance to use for a check whose natural bound is `default`.
    pub fn for_check(&self, default: f64) -> f64 {
        self.override_all.unwrap_or(default)
    }
}
