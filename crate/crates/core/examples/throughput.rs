//! Times the coarse prediction chain on a 640x480 frame, stage by stage.
//!
//! Run: `cargo run --release --example throughput`

use aquadepth::filtering::GuidedFilterConfig;
use aquadepth::pipeline::{cmd_bench, format_bench_report};

fn main() -> aquadepth::Result<()> {
    let report = cmd_bench(640, 480, 100, Some(GuidedFilterConfig::default()), 0)?;
    print!("{}", format_bench_report(&report));
    let bare = cmd_bench(640, 480, 100, None, 0)?;
    println!("without guided filter: {:.1} FPS", bare.fps);
    Ok(())
}
