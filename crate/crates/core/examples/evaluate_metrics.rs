//! Scores coarse predictions against ground truth with the four standard
//! depth metrics on a small synthetic corpus.
//!
//! Run: `cargo run --release --example evaluate_metrics`

use aquadepth::ifm::{ifm_make_scene, ifm_synthesize, DepthProfile};
use aquadepth::metrics::{evaluate, MetricReport};
use aquadepth::projection::{predict_coarse, FitAccumulator};
use aquadepth::rmi::rmi_transform;

fn main() -> aquadepth::Result<()> {
    // fit on one half of the corpus, evaluate on the other
    let scenes: Vec<_> = (0..8)
        .map(|seed| ifm_make_scene(96, 72, "oceanII", DepthProfile::RandomSmooth, seed))
        .collect::<aquadepth::Result<_>>()?;
    let mut acc = FitAccumulator::new();
    for scene in &scenes[..4] {
        acc.accumulate(&rmi_transform(&ifm_synthesize(scene)?), &scene.depth)?;
    }
    let coeffs = acc.solve(1.0)?;

    let mut reports = Vec::new();
    println!("{:>8} {:>8} {:>8} {:>8}", "AbsRel", "SqRel", "RMSE", "log10");
    for scene in &scenes[4..] {
        let rmi = rmi_transform(&ifm_synthesize(scene)?);
        let pred = predict_coarse(&rmi, &coeffs);
        let r = evaluate(&pred, &scene.depth)?;
        println!(
            "{:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            r.abs_rel, r.sq_rel, r.rmse, r.log10
        );
        reports.push(r);
    }
    let mean = MetricReport::mean_of(&reports).expect("nonempty corpus");
    println!(
        "{:>8.4} {:>8.4} {:>8.4} {:>8.4}  (corpus mean)",
        mean.abs_rel, mean.sq_rel, mean.rmse, mean.log10
    );
    Ok(())
}
