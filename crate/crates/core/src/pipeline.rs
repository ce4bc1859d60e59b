//! End-to-end workflows behind the CLI subcommands: corpus fitting, coarse
//! prediction, batch evaluation, synthetic scene generation, and a
//! throughput benchmark.
//!
//! The corpus scans use a worker pool over contiguous shards merged in fixed
//! shard order, so fit and eval results do not depend on the thread count.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::colormap::colorize_depth;
use crate::error::{Error, Result};
use crate::filtering::{guided_filter, GuidedFilterConfig};
use crate::ifm::{ifm_make_scene, ifm_synthesize, DepthProfile, WaterParams};
use crate::imagecore::{
    load_pair, load_rgb, save_depth, save_rgb16, save_rgb8, DatasetManifest, DepthMap,
};
use crate::metrics::{evaluate, MetricReport};
use crate::projection::{predict_coarse, FitAccumulator, ProjectionCoefficients};
use crate::rmi::rmi_transform;

/// Splits `len` items into at most `shards` contiguous ranges.
fn shard_ranges(len: usize, shards: usize) -> Vec<std::ops::Range<usize>> {
    let shards = shards.max(1).min(len.max(1));
    let base = len / shards;
    let extra = len % shards;
    let mut out = Vec::with_capacity(shards);
    let mut start = 0;
    for i in 0..shards {
        let size = base + usize::from(i < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}

/// Accumulates fit statistics over a manifest, one shard per worker.
pub fn fit_manifest(manifest: &DatasetManifest, threads: usize) -> Result<FitAccumulator> {
    let ranges = shard_ranges(manifest.entries.len(), threads);
    let shard_results: Vec<Result<FitAccumulator>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| {
                scope.spawn(move || {
                    let mut acc = FitAccumulator::new();
                    for idx in range {
                        let (rgb, depth) = load_pair(manifest, idx)?;
                        acc.accumulate(&rmi_transform(&rgb), &depth)?;
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut total = FitAccumulator::new();
    for acc in shard_results {
        total = total.merge(&acc?);
    }
    Ok(total)
}

/// `fit`: scan a manifest, solve, and write the coefficients JSON.
pub fn cmd_fit(
    manifest_path: &Path,
    out: &Path,
    threads: usize,
    depth_scale_override: Option<f64>,
) -> Result<ProjectionCoefficients> {
    let mut manifest = crate::imagecore::load_manifest(manifest_path)?;
    if let Some(scale) = depth_scale_override {
        manifest.depth_scale = scale;
    }
    let acc = fit_manifest(&manifest, threads)?;
    let coeffs = acc.solve(manifest.depth_scale)?;
    coeffs.save(out)?;
    println!(
        "mu = [{:.6}, {:.6}, {:.6}]  pixels = {}  residual_rmse = {:.6}",
        coeffs.mu[0], coeffs.mu[1], coeffs.mu[2], coeffs.pixel_count, coeffs.residual_rmse
    );
    Ok(coeffs)
}

/// Options shared by the prediction path of `predict` and `eval`.
#[derive(Debug, Clone, Default)]
pub struct PredictOptions {
    pub filter: GuidedFilterConfig,
    pub no_filter: bool,
    /// Binary guide mask PNG (nonzero = salient); falls back to the RMI
    /// intensity channel when absent.
    pub mask: Option<PathBuf>,
    pub dump_rmi: Option<PathBuf>,
}

fn load_mask_plane(path: &Path, width: usize, height: usize) -> Result<Vec<f64>> {
    let img = image::open(path).map_err(|e| Error::format(path, e.to_string()))?;
    if img.width() as usize != width || img.height() as usize != height {
        return Err(Error::DimensionMismatch(
            width,
            height,
            img.width() as usize,
            img.height() as usize,
        ));
    }
    let gray = img.into_luma8();
    Ok(gray
        .pixels()
        .map(|p| if p.0[0] != 0 { 1.0 } else { 0.0 })
        .collect())
}

/// Runs rgb → rmi → coarse depth → optional guided filter on one image.
pub fn predict_image(
    rgb: &crate::imagecore::RgbImage,
    coeffs: &ProjectionCoefficients,
    opts: &PredictOptions,
) -> Result<DepthMap> {
    let rmi = rmi_transform(rgb);
    if let Some(path) = &opts.dump_rmi {
        save_rgb8(&rmi.to_rgb_visualization(), path)?;
    }
    let coarse = predict_coarse(&rmi, coeffs);
    if opts.no_filter {
        return Ok(coarse);
    }
    let guide = match &opts.mask {
        Some(path) => load_mask_plane(path, rgb.width(), rgb.height())?,
        None => rmi.intensity_plane(),
    };
    guided_filter(&coarse, &guide, &opts.filter)
}

/// `predict`: one image to a 16-bit depth PNG plus an 8-bit colormapped
/// visualization written next to it (`<out>.vis.png`).
pub fn cmd_predict(
    image_path: &Path,
    coeffs_path: &Path,
    out: &Path,
    opts: &PredictOptions,
) -> Result<()> {
    let rgb = load_rgb(image_path)?;
    let coeffs = ProjectionCoefficients::load(coeffs_path)?;
    let depth = predict_image(&rgb, &coeffs, opts)?;
    save_depth(&depth, out)?;
    let vis_path = out.with_extension("vis.png");
    save_rgb8(&colorize_depth(&depth), &vis_path)?;
    Ok(())
}

/// One `eval` row; `metrics` is None when the image's joint mask was empty.
#[derive(Debug, Clone)]
pub struct EvalRow {
    pub rgb_path: PathBuf,
    pub metrics: Option<MetricReport>,
}

#[derive(Debug, Clone)]
pub struct EvalSummary {
    pub rows: Vec<EvalRow>,
    pub mean: Option<MetricReport>,
}

/// Evaluates predictions against ground truth over a manifest. Images with
/// an empty joint mask are reported as skipped, not fatal.
pub fn eval_manifest(
    manifest: &DatasetManifest,
    coeffs: &ProjectionCoefficients,
    opts: &PredictOptions,
    threads: usize,
) -> Result<EvalSummary> {
    let ranges = shard_ranges(manifest.entries.len(), threads);
    let shard_results: Vec<Result<Vec<EvalRow>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| {
                scope.spawn(move || {
                    let mut rows = Vec::new();
                    for idx in range {
                        let (rgb, gt) = load_pair(manifest, idx)?;
                        let pred = predict_image(&rgb, coeffs, opts)?;
                        let metrics = match evaluate(&pred, &gt) {
                            Ok(m) => Some(m),
                            Err(Error::EmptyMask) => None,
                            Err(e) => return Err(e),
                        };
                        rows.push(EvalRow {
                            rgb_path: manifest.entries[idx].0.clone(),
                            metrics,
                        });
                    }
                    Ok(rows)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut rows = Vec::new();
    for shard in shard_results {
        rows.extend(shard?);
    }
    let scored: Vec<MetricReport> = rows.iter().filter_map(|r| r.metrics).collect();
    Ok(EvalSummary {
        mean: MetricReport::mean_of(&scored),
        rows,
    })
}

/// Renders the metric table and writes `metrics.csv` under `output_dir`.
pub fn write_eval_outputs(summary: &EvalSummary, output_dir: &Path) -> Result<()> {
    fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
    let csv_path = output_dir.join("metrics.csv");
    let mut csv = String::from("image,abs_rel,sq_rel,rmse,log10,valid_pixels\n");
    println!(
        "{:<32} {:>9} {:>9} {:>9} {:>9}",
        "image", "AbsRel", "SqRel", "RMSE", "log10"
    );
    for row in &summary.rows {
        let name = row.rgb_path.display();
        match row.metrics {
            Some(m) => {
                println!(
                    "{:<32} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
                    name, m.abs_rel, m.sq_rel, m.rmse, m.log10
                );
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    name, m.abs_rel, m.sq_rel, m.rmse, m.log10, m.valid_pixels
                ));
            }
            None => {
                println!("{name:<32} skipped (no jointly valid pixels)");
                csv.push_str(&format!("{name},skipped,,,,\n"));
            }
        }
    }
    if let Some(m) = summary.mean {
        println!(
            "{:<32} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            "mean", m.abs_rel, m.sq_rel, m.rmse, m.log10
        );
        csv.push_str(&format!(
            "mean,{},{},{},{},{}\n",
            m.abs_rel, m.sq_rel, m.rmse, m.log10, m.valid_pixels
        ));
    }
    let mut f = fs::File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    f.write_all(csv.as_bytes())
        .map_err(|e| Error::io(&csv_path, e))?;
    Ok(())
}

/// `eval`: manifest + coefficients to a per-image metric table.
pub fn cmd_eval(
    manifest_path: &Path,
    coeffs_path: &Path,
    output_dir: &Path,
    opts: &PredictOptions,
    threads: usize,
) -> Result<EvalSummary> {
    let manifest = crate::imagecore::load_manifest(manifest_path)?;
    let coeffs = ProjectionCoefficients::load(coeffs_path)?;
    let summary = eval_manifest(&manifest, &coeffs, opts, threads)?;
    write_eval_outputs(&summary, output_dir)?;
    Ok(summary)
}

/// Sidecar written next to synthetic scenes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthParams {
    pub beta: [f64; 3],
    pub background: [f64; 3],
    pub seed: u64,
    pub profile: String,
    pub preset: String,
}

/// `synth`: writes (rgb.png, depth.png, params.json) for a seeded scene.
pub fn cmd_synth(
    width: usize,
    height: usize,
    preset: &str,
    profile: DepthProfile,
    seed: u64,
    output_dir: &Path,
) -> Result<()> {
    let scene = ifm_make_scene(width, height, preset, profile, seed)?;
    let observed = ifm_synthesize(&scene)?;
    fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
    save_rgb16(&observed, &output_dir.join("rgb.png"))?;
    save_depth(&scene.depth, &output_dir.join("depth.png"))?;
    let params = SynthParams {
        beta: scene.params.beta,
        background: scene.params.background,
        seed,
        profile: format!("{profile:?}"),
        preset: preset.to_string(),
    };
    let json_path = output_dir.join("params.json");
    fs::write(
        &json_path,
        serde_json::to_string_pretty(&params).expect("params serialize"),
    )
    .map_err(|e| Error::io(&json_path, e))?;
    Ok(())
}

/// Reads a params.json back into water parameters.
pub fn load_synth_params(path: &Path) -> Result<(WaterParams, SynthParams)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let params: SynthParams =
        serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
    Ok((WaterParams::new(params.beta, params.background), params))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTiming {
    pub mean_ms: f64,
    pub median_ms: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub width: usize,
    pub height: usize,
    pub iterations: usize,
    pub rmi: StageTiming,
    pub predict: StageTiming,
    pub filter: Option<StageTiming>,
    /// Independently timed full-chain latency.
    pub end_to_end: StageTiming,
    pub fps: f64,
}

impl BenchReport {
    pub fn stage_sum_ms(&self) -> f64 {
        self.rmi.mean_ms + self.predict.mean_ms + self.filter.map_or(0.0, |s| s.mean_ms)
    }
}

fn timing(samples: &mut [f64]) -> StageTiming {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let median = samples[samples.len() / 2];
    StageTiming {
        mean_ms: mean,
        median_ms: median,
    }
}

/// `bench`: times the coarse-depth chain on a fixed-seed synthetic frame so
/// runs are comparable across machines. Warm-up iterations are excluded.
pub fn cmd_bench(
    width: usize,
    height: usize,
    iterations: usize,
    filter: Option<GuidedFilterConfig>,
    seed: u64,
) -> Result<BenchReport> {
    assert!(iterations >= 10, "need at least 10 iterations");
    let scene = ifm_make_scene(width, height, "oceanI", DepthProfile::RandomSmooth, seed)?;
    let frame = ifm_synthesize(&scene)?;
    let coeffs = ProjectionCoefficients::from_mu(crate::projection::REFERENCE_MU, 1.0);

    let warmup = (iterations / 10).max(2);
    let mut rmi_ms = Vec::new();
    let mut predict_ms = Vec::new();
    let mut filter_ms = Vec::new();
    let mut total_ms = Vec::new();
    for iter in 0..warmup + iterations {
        let outer = Instant::now();
        let t = Instant::now();
        let rmi = rmi_transform(&frame);
        let t_rmi = t.elapsed();
        let t = Instant::now();
        let coarse = predict_coarse(&rmi, &coeffs);
        let t_predict = t.elapsed();
        let t_filter = if let Some(cfg) = &filter {
            let t = Instant::now();
            let guide = rmi.intensity_plane();
            let filtered = guided_filter(&coarse, &guide, cfg)?;
            std::hint::black_box(&filtered);
            Some(t.elapsed())
        } else {
            std::hint::black_box(&coarse);
            None
        };
        let total = outer.elapsed();
        if iter >= warmup {
            rmi_ms.push(t_rmi.as_secs_f64() * 1e3);
            predict_ms.push(t_predict.as_secs_f64() * 1e3);
            if let Some(tf) = t_filter {
                filter_ms.push(tf.as_secs_f64() * 1e3);
            }
            total_ms.push(total.as_secs_f64() * 1e3);
        }
    }
    let end_to_end = timing(&mut total_ms);
    Ok(BenchReport {
        width,
        height,
        iterations,
        rmi: timing(&mut rmi_ms),
        predict: timing(&mut predict_ms),
        filter: if filter_ms.is_empty() {
            None
        } else {
            Some(timing(&mut filter_ms))
        },
        end_to_end,
        fps: 1000.0 / end_to_end.mean_ms,
    })
}

/// Human-readable benchmark summary.
pub fn format_bench_report(r: &BenchReport) -> String {
    let mut out = format!(
        "frame {}x{}, {} iterations\n",
        r.width, r.height, r.iterations
    );
    let line = |name: &str, s: &StageTiming| {
        format!(
            "  {:<14} mean {:>8.3} ms   median {:>8.3} ms\n",
            name, s.mean_ms, s.median_ms
        )
    };
    out.push_str(&line("rmi", &r.rmi));
    out.push_str(&line("predict", &r.predict));
    if let Some(f) = &r.filter {
        out.push_str(&line("guided-filter", f));
    }
    out.push_str(&line("end-to-end", &r.end_to_end));
    out.push_str(&format!(
        "  stage sum {:.3} ms   throughput {:.1} FPS\n",
        r.stage_sum_ms(),
        r.fps
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shard_ranges_cover_everything() {
        for (len, shards) in [(10, 3), (1, 8), (0, 4), (16, 16), (17, 4)] {
            let ranges = shard_ranges(len, shards);
            let mut covered = 0;
            let mut expected_start = 0;
            for r in &ranges {
                assert_eq!(r.start, expected_start);
                expected_start = r.end;
                covered += r.len();
            }
            assert_eq!(covered, len);
        }
    }

    #[test]
    fn bench_no_filter_is_faster() {
        let full = cmd_bench(64, 48, 10, Some(GuidedFilterConfig::default()), 1).unwrap();
        let bare = cmd_bench(64, 48, 10, None, 1).unwrap();
        assert!(bare.end_to_end.mean_ms <= full.end_to_end.mean_ms);
        assert!(full.filter.is_some() && bare.filter.is_none());
    }
}
