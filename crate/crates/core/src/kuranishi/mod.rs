//! Canonical Beltrami series, holomorphic families built from them, and the
//! empirical constants that control their growth.

pub mod calibrate;
pub mod family;
pub mod growth;
pub mod seed;
pub mod series;

pub use calibrate::{calibrate_constants, holdout_check, CalibrationRecord, HoldoutReport};
pub use family::{canonical_family, cohomology_expansion, kahler_family, CanonicalFamily, KahlerFamily};
pub use growth::{domination_report, radius_scan, DominationRow, RadiusRow};
pub use seed::{explicit_seed, make_seed, DeformationSeed, SeedKind};
pub use series::{
    integrability_residual, iterate_beltrami, iterate_bracket, side_conditions_check, two_path_agreement, BeltramiSeries,
    Construction, MultiIndex,
};
