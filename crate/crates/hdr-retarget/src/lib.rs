//! Content-aware retargeting of high-dynamic-range scenes.
//!
//! Takes a stack of differently exposed LDR photographs of one static
//! scene and resizes it content-awarely before (or after) exposure
//! fusion, producing a single high-contrast LDR image at the requested
//! size. Three families of strategies are implemented:
//!
//! - **direct** — fuse the stack first, then seam-carve the fused image;
//! - **statistical** — carve the whole stack in lockstep, picking each
//!   step's seam among the per-exposure minimum seams (minimum, median,
//!   or minimum total replica-seam energy);
//! - **aggregate** — carve the stack against a single combined energy map
//!   (average-energy weights or per-pixel Laplacian weighting).
//!
//! Enlargement plans disjoint seams by simulated successive removal, then
//! inserts them in one pass, so repeated-seam stretching artifacts cannot
//! occur.
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability; the `hdrrt` binary wraps the same API for batch use.

pub mod energy;
pub mod error;
pub mod fusion;
pub mod grid;
pub mod report;
pub mod seam;
pub mod stack_io;
pub mod strategies;
pub mod synthetic;

pub use energy::{
    aggregate_energy_laplacian, aggregate_energy_weighted, average_energy_per_pixel,
    gradient_energy, laplacian_map, weights_from_average_energy, EnergyMap, WeightVector,
};
pub use error::{Error, Result};
pub use fusion::{fuse_stack, FusionConfig};
pub use grid::Grid;
pub use report::{energy_curve_csv, render_energy_visualization, StrategyRun};
pub use seam::{
    backtrack_min_seam, cumulative_energy, insert_seam, insert_seams, min_seam, remove_seam,
    seam_energy_in, Seam,
};
pub use stack_io::{load_stack, save_image, to_luminance, ImageStack, LuminanceImage, RgbImage};
pub use strategies::{
    carve_image, plan_insertion_seams, retarget, select_seam_median, select_seam_min,
    select_seam_total_min, Axis, RetargetPlan, RetargetOutput, SeamSource, Strategy,
    StrategyTrace, TraceMode,
};
