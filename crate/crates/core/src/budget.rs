/// Limits for the searches that are not exact decision procedures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Denominator of the grid used when searching for dominating mixed profiles.
    pub grid_resolution: u32,
    /// Denominator of the grid used for mixed coalition deviations.
    pub coalition_resolution: u32,
    /// Upper bound on grid points evaluated by one search.
    pub max_grid_points: u64,
    /// Upper bound on support pairs examined by equilibrium enumeration.
    pub max_support_pairs: u64,
    /// Largest multiset size tried when looking for rational dominating points.
    pub max_rational_order: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            grid_resolution: 64,
            coalition_resolution: 32,
            max_grid_points: 4_000_000,
            max_support_pairs: 100_000,
            max_rational_order: 4,
        }
    }
}

impl Budget {
    /// Scales every work limit by `factor` (grid resolutions are untouched).
    pub fn scaled(factor: u64) -> Self {
        let base = Budget::default();
        Budget {
            max_grid_points: base.max_grid_points.saturating_mul(factor),
            max_support_pairs: base.max_support_pairs.saturating_mul(factor),
            ..base
        }
    }
}
