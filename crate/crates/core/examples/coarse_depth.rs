//! The full coarse prediction chain on one frame: RMI transform, projection
//! with the bundled reference coefficients, guided-filter refinement, and a
//! colormapped visualization.
//!
//! Run: `cargo run --release --example coarse_depth`

use aquadepth::colormap::colorize_depth;
use aquadepth::filtering::{guided_filter, GuidedFilterConfig};
use aquadepth::ifm::{ifm_make_scene, ifm_synthesize, DepthProfile};
use aquadepth::imagecore::{save_depth, save_rgb8};
use aquadepth::projection::{predict_coarse, ProjectionCoefficients, REFERENCE_MU};
use aquadepth::rmi::rmi_transform;

fn main() -> aquadepth::Result<()> {
    let scene = ifm_make_scene(640, 480, "oceanI", DepthProfile::Radial, 3)?;
    let frame = ifm_synthesize(&scene)?;

    let coeffs = ProjectionCoefficients::from_mu(REFERENCE_MU, 1.0);
    let rmi = rmi_transform(&frame);
    let coarse = predict_coarse(&rmi, &coeffs);
    let refined = guided_filter(&coarse, &rmi.intensity_plane(), &GuidedFilterConfig::default())?;

    save_depth(&refined, "coarse_depth.png".as_ref())?;
    save_rgb8(&colorize_depth(&refined), "coarse_depth_vis.png".as_ref())?;
    println!(
        "predicted depth range [{:.3}, {:.3}] over {} pixels",
        refined.values().iter().cloned().fold(f64::INFINITY, f64::min),
        refined.values().iter().cloned().fold(0.0, f64::max),
        refined.valid_count()
    );
    println!("wrote coarse_depth.png (16-bit) and coarse_depth_vis.png");
    Ok(())
}
