//! Concatenated families, parameter bounds, routing and local embeddings.

mod bounds;
mod concat;
mod embed;
mod plan;
mod routing;

pub use bounds::{epsilon_bound, epsilon_sweep, gv_exists, gv_sum, EpsilonBound};
pub use concat::{concatenate, ConcatCode, LevelInventory, CONCAT_QUBIT_LIMIT};
pub use routing::{color_layers, coords, index, route_permutation, SwapNetwork};
pub use embed::{embed_local, generator_extent, snake, EmbedSpec, LocalGadget, Token, SPATIAL_BOUND, TIME_BOUND};
pub use plan::{concat_local_plan, ConcatLocalPlan, LevelPlan};
