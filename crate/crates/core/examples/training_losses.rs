//! Evaluates the training losses a depth network would be supervised with:
//! L2, SILog, the projection regularizer, and the combined objective.
//!
//! Run: `cargo run --release --example training_losses`

use aquadepth::ifm::{ifm_make_scene, ifm_synthesize, DepthProfile};
use aquadepth::losses::{combined_objective, LossConfig};
use aquadepth::projection::{predict_coarse, ProjectionCoefficients, REFERENCE_MU};
use aquadepth::rmi::rmi_transform;

fn main() -> aquadepth::Result<()> {
    let scene = ifm_make_scene(128, 96, "oceanI", DepthProfile::RandomSmooth, 17)?;
    let rmi = rmi_transform(&ifm_synthesize(&scene)?);

    // stand-in for a network prediction: ground truth with a bias
    let mut pred = scene.depth.clone();
    for v in pred.values_mut() {
        *v = (*v + 0.05).min(1.0);
    }

    let coarse = predict_coarse(&rmi, &ProjectionCoefficients::from_mu(REFERENCE_MU, 1.0));
    let cfg = LossConfig::default();
    let b = combined_objective(&pred, &scene.depth, &coarse, &cfg)?;
    println!("L2 (mean abs)      = {:.5}", b.l2);
    println!("SILog (a=10, l=.85)= {:.5}", b.silog);
    println!("projection term    = {:.5}", b.projection);
    println!(
        "combined           = {:.5}  (weights {}, {}, {})",
        b.total, cfg.w_l2, cfg.w_silog, cfg.w_proj
    );
    Ok(())
}
