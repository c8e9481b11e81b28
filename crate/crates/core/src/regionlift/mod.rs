//! Region verification by parameter lifting, and ETR encodings.

mod etr;
mod lift;
mod relax;

pub use etr::emit_etr;
pub use lift::{
    lift, lift_with_cap, region_bounds, verify_region, verify_side, LiftedMdp, RegionReport,
    DEFAULT_ACTION_CAP, DEFAULT_REFINE_BUDGET,
};
pub use relax::{relax, RelaxedPmc};
