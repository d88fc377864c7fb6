//! Generalized degrees of freedom (GDoF) of treating interference as noise
//! (TIN) in multi-cell networks.
//!
//! The crate covers both directions of a cellular network: the downlink,
//! where each base station superposes messages for its users, and the
//! uplink, where users transmit to their base station. It provides
//!
//! * the channel-strength model ([`network`]),
//! * TIN strategies and their per-user GDoF ([`strategy`]),
//! * the mapping between uplink and downlink strategies ([`duality`]),
//! * polyhedral descriptions of the reachable regions, regime tests and a
//!   simplex solver ([`regions`]),
//! * a brute-force grid search for cross-checking ([`oracle`]),
//! * a bit-level deterministic channel model ([`adt`]).
//!
//! All algorithms are generic over [`Scalar`]; use [`Rational`] for exact
//! answers and `f64` for speed.

pub mod adt;
pub mod duality;
pub mod error;
pub mod network;
pub mod oracle;
pub mod regions;
pub mod sampling;
pub mod scalar;
pub mod strategy;

pub use duality::{
    dualize, dualize_ibc_to_imac, dualize_imac_to_ibc, normalize_uplink, received_power_violations,
    satisfies_received_power_order, DualizationReport, NormalizedUplink,
};
pub use error::{Error, Result};
pub use network::{
    canonicalize, parse_network, parse_network_report, validate_network, ChannelStrengths,
    GdofTuple, UserId, UserMap,
};
pub use oracle::{
    grid_achievable_points, oracle_achievable, oracle_max_sum, strategy_count, GridSpec,
};
pub use regions::{
    classify_regime, contains, ia_sum_gdof, max_weighted_sum, outer_bound_region,
    polyhedral_region, tina_region_contains, union_max_weighted_sum, LinearConstraint,
    PolyhedralRegion, Regime, SubnetworkOrder,
};
pub use scalar::{Rational, Scalar};
pub use strategy::{
    achievable_with_strategy, effective_interference, effective_interference_ibc,
    effective_interference_imac, gdof_bounds, gdof_bounds_ibc, gdof_bounds_imac, parse_strategy,
    sinr_rates_ibc, DecodingOrder, Power, PowerAllocation, Side, Strategy,
};
