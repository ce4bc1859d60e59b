//! Fits projection coefficients over a synthetic corpus, sharded across
//! accumulators the way a parallel corpus scan would run, and compares the
//! result against the single-pass fit.
//!
//! Run: `cargo run --release --example fit_coefficients`

use aquadepth::ifm::{ifm_make_scene, ifm_synthesize, DepthProfile};
use aquadepth::projection::FitAccumulator;
use aquadepth::rmi::rmi_transform;

fn main() -> aquadepth::Result<()> {
    let scenes: Vec<_> = (0..32)
        .map(|seed| ifm_make_scene(64, 64, "oceanI", DepthProfile::RandomSmooth, seed))
        .collect::<aquadepth::Result<_>>()?;

    // single pass
    let mut single = FitAccumulator::new();
    for scene in &scenes {
        let rmi = rmi_transform(&ifm_synthesize(scene)?);
        single.accumulate(&rmi, &scene.depth)?;
    }

    // four shards, merged in order
    let mut merged = FitAccumulator::new();
    for shard in scenes.chunks(8) {
        let mut acc = FitAccumulator::new();
        for scene in shard {
            let rmi = rmi_transform(&ifm_synthesize(scene)?);
            acc.accumulate(&rmi, &scene.depth)?;
        }
        merged = merged.merge(&acc);
    }

    let a = single.solve(1.0)?;
    let b = merged.solve(1.0)?;
    println!(
        "single pass: mu = [{:.6}, {:.6}, {:.6}], residual rmse {:.5}, {} px",
        a.mu[0], a.mu[1], a.mu[2], a.residual_rmse, a.pixel_count
    );
    println!(
        "sharded:     mu = [{:.6}, {:.6}, {:.6}]  (max gap {:.2e})",
        b.mu[0],
        b.mu[1],
        b.mu[2],
        (0..3).map(|i| (a.mu[i] - b.mu[i]).abs()).fold(0.0, f64::max)
    );
    Ok(())
}
