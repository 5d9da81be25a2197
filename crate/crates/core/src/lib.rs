//! Exact computations on the two compactifications of configurations of
//! points on a line: the Losev-Manin space `L̄ₙ` and the space `P̄ₙ` of
//! stable marked `𝔾ₐ`-rational trees, together with the one-parameter
//! degeneration of the first into the second.
//!
//! - [`laurent`]: truncated Laurent series with rational coefficients.
//! - [`group`]: the group family `x ⋆ y = x + y + txy`.
//! - [`trees`]: marked trees, stratum types, invariants.
//! - [`enumerate`]: catalogs of strata and Euler characteristic totals.
//! - [`limit`]: stable limits of moving configurations and the degeneration sampler.
//! - [`stab`]: inserting and forgetting marks, fiber by fiber.
//! - [`cli`]: the `linecfg` command line.

pub mod laurent;
pub mod group;
pub mod trees;
pub mod enumerate;
pub mod limit;
pub mod stab;
pub mod cli;
