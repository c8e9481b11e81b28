//! Data model: pMCs, regions, specifications, verdicts, and file formats.

mod format;
mod pmc;
mod region;
mod spec;

pub(crate) use format::{expect_header, parse_pmc_parts, significant_lines, Line, StateTable};
pub use format::{format_valuation, parse_pmc, parse_region, parse_valuation, write_pmc};
pub use pmc::{backward_reachable, Pmc};
pub use region::{Region, RegionDisplay};
pub use spec::{Comparison, Spec, Verdict};
