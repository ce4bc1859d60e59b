//! Fast, self-contained underwater monocular depth toolkit built on the
//! light-attenuation prior.
//!
//! Red light dies off much faster underwater than green or blue, so the gap
//! between a pixel's R value and max(G, B) carries distance information.
//! This crate packages the non-neural pieces of that idea:
//!
//! - [`rmi`] — the {R, M = max(G, B), I} input space adapted from raw RGB.
//! - [`projection`] — a streaming least-squares fit of the affine prior
//!   d̃ = μ0 + μ1·R + μ2·M over an RGB-D corpus, coarse per-pixel depth
//!   prediction from fitted coefficients, and the projection error used as
//!   a training regularizer.
//! - [`ifm`] — the Jaffe–McGlamery image formation model as a synthetic
//!   scene generator and analytic depth oracle.
//! - [`filtering`] — integral-image box filter and guided-filter
//!   refinement of raw depth maps.
//! - [`losses`] / [`metrics`] — pixel-wise training losses (L2, SILog,
//!   combined objective) and the Abs Rel / Sq Rel / RMSE / log10 evaluation
//!   harness, all as pure masked reductions.
//! - [`imagecore`] — image containers, 16-bit depth PNG IO, and dataset
//!   manifests.
//! - [`pipeline`] — the workflows behind the `aquadepth` CLI
//!   (`fit`, `predict`, `eval`, `synth`, `bench`).
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `coarse_depth` for the end-to-end prediction chain.

pub mod colormap;
pub mod error;
pub mod filtering;
pub mod ifm;
pub mod imagecore;
pub mod losses;
pub mod metrics;
pub mod pipeline;
pub mod projection;
pub mod rmi;

pub use error::{Error, Result};
pub use filtering::{box_filter, guided_filter, GuidedFilterConfig};
pub use ifm::{ifm_invert_depth, ifm_make_scene, ifm_synthesize, Channel, DepthProfile, SyntheticScene, WaterParams};
pub use imagecore::{load_depth, load_manifest, load_rgb, save_depth, DatasetManifest, DepthMap, RgbImage};
pub use losses::{combined_objective, l2_loss, silog_loss, LossConfig, ObjectiveBreakdown};
pub use metrics::{evaluate, MetricReport};
pub use projection::{
    predict_coarse, projection_error, FitAccumulator, ProjectionCoefficients, REFERENCE_MU,
};
pub use rmi::{rmi_transform, RmiImage};
