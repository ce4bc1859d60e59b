//! Acceptance suite: one test per release criterion, each printing a PASS
//! line (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::time::Instant;

use aquadepth::filtering::{box_filter, box_filter_plane, guided_filter, GuidedFilterConfig};
use aquadepth::ifm::{ifm_invert_depth, ifm_make_scene, ifm_synthesize, Channel, DepthProfile};
use aquadepth::imagecore::{load_rgb, save_rgb16, DepthMap, RgbImage};
use aquadepth::losses::{combined_objective, l2_loss, silog_loss, LossConfig};
use aquadepth::metrics::evaluate;
use aquadepth::pipeline::cmd_bench;
use aquadepth::projection::{predict_coarse, projection_error, FitAccumulator};
use aquadepth::rmi::rmi_transform;

fn lcg(state: &mut u64) -> f64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    (*state >> 11) as f64 / (1u64 << 53) as f64
}

fn random_rgb(w: usize, h: usize, seed: &mut u64) -> RgbImage {
    let data = (0..w * h)
        .map(|_| [lcg(seed), lcg(seed), lcg(seed)])
        .collect();
    RgbImage::from_pixels(w, h, data)
}

/// Depth planted exactly as d = 0.5 − 0.4R + 0.45M; pixels whose affine
/// value leaves [0, 1] are marked invalid (excluded from the fit).
fn planted_corpus(images: usize, w: usize, h: usize, seed: u64) -> Vec<(RgbImage, DepthMap)> {
    let mut s = seed;
    (0..images)
        .map(|_| {
            let rgb = random_rgb(w, h, &mut s);
            let rmi = rmi_transform(&rgb);
            let mut data = Vec::with_capacity(w * h);
            let mut valid = Vec::with_capacity(w * h);
            for &[r, m, _] in rmi.pixels() {
                let d = 0.5 - 0.4 * r + 0.45 * m;
                if (0.0..=1.0).contains(&d) {
                    data.push(d);
                    valid.push(true);
                } else {
                    data.push(0.0);
                    valid.push(false);
                }
            }
            (rgb, DepthMap::from_parts(w, h, data, valid, 1.0))
        })
        .collect()
}

#[test]
fn criterion_01_mu_recovery() {
    let start = Instant::now();
    let corpus = planted_corpus(100, 64, 64, 11);
    let mut acc = FitAccumulator::new();
    for (rgb, depth) in &corpus {
        acc.accumulate(&rmi_transform(rgb), depth).unwrap();
    }
    let fit = acc.solve(1.0).unwrap();
    let planted = [0.5, -0.4, 0.45];
    for i in 0..3 {
        assert!(
            (fit.mu[i] - planted[i]).abs() < 1e-6,
            "mu[{i}] = {} vs planted {}",
            fit.mu[i],
            planted[i]
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "fit took {elapsed:?}");
    println!(
        "criterion 1 (mu recovery within 1e-6, {:.2}s single-threaded): PASS",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_02_streaming_equals_batch() {
    // noisy depths keep residual_rmse well away from zero so the relative
    // comparison is meaningful
    let mut s = 23u64;
    let corpus: Vec<(RgbImage, DepthMap)> = (0..24)
        .map(|_| {
            let rgb = random_rgb(64, 64, &mut s);
            let rmi = rmi_transform(&rgb);
            let data: Vec<f64> = rmi
                .pixels()
                .iter()
                .map(|&[r, m, _]| (0.5 - 0.4 * r + 0.45 * m + 0.02 * (lcg(&mut s) - 0.5)).clamp(0.0, 1.0))
                .collect();
            (rgb, DepthMap::from_values(64, 64, data, 1.0))
        })
        .collect();
    let mut single = FitAccumulator::new();
    for (rgb, depth) in &corpus {
        single.accumulate(&rmi_transform(rgb), depth).unwrap();
    }
    let mut merged = FitAccumulator::new();
    for shard in corpus.chunks(corpus.len().div_ceil(8)) {
        let mut acc = FitAccumulator::new();
        for (rgb, depth) in shard {
            acc.accumulate(&rmi_transform(rgb), depth).unwrap();
        }
        merged = merged.merge(&acc);
    }
    let a = single.solve(1.0).unwrap();
    let b = merged.solve(1.0).unwrap();
    for i in 0..3 {
        let rel = (a.mu[i] - b.mu[i]).abs() / a.mu[i].abs().max(1e-300);
        assert!(rel < 1e-9, "mu[{i}] relative gap {rel}");
    }
    let rel =
        (a.residual_rmse - b.residual_rmse).abs() / a.residual_rmse.abs().max(f64::MIN_POSITIVE);
    assert!(rel < 1e-9 || (a.residual_rmse - b.residual_rmse).abs() < 1e-15);
    println!("criterion 2 (8-shard fit = single pass within 1e-9 relative): PASS");
}

#[test]
fn criterion_03_ifm_roundtrip() {
    let scene = ifm_make_scene(64, 64, "oceanI", DepthProfile::RandomSmooth, 7).unwrap();
    assert_eq!(scene.params.beta[0], 1.0);
    let observed = ifm_synthesize(&scene).unwrap();

    let exact = ifm_invert_depth(&observed, &scene.params, &scene.clear, Channel::R).unwrap();
    for (i, (d, ok)) in exact.iter().enumerate() {
        assert!(ok, "pixel {i} lost to contrast guard");
        assert!(
            (d - scene.depth.values()[i]).abs() < 1e-9,
            "pre-quantization error {} at {i}",
            (d - scene.depth.values()[i]).abs()
        );
    }

    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("observed.png");
    save_rgb16(&observed, &png).unwrap();
    let reloaded = load_rgb(&png).unwrap();
    let quantized = ifm_invert_depth(&reloaded, &scene.params, &scene.clear, Channel::R).unwrap();
    for (i, (d, ok)) in quantized.iter().enumerate() {
        assert!(ok);
        assert!(
            (d - scene.depth.values()[i]).abs() < 2e-3,
            "post-quantization error {} at {i}",
            (d - scene.depth.values()[i]).abs()
        );
    }
    println!("criterion 3 (IFM roundtrip 1e-9 exact / 2e-3 after 16-bit PNG): PASS");
}

// Spearman rank correlation with average ranks for ties.
fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap());
        let mut out = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let rank = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                out[idx[k]] = rank;
            }
            i = j + 1;
        }
        out
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for i in 0..a.len() {
        let (da, db) = (ra[i] - mean, rb[i] - mean);
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    cov / (va.sqrt() * vb.sqrt())
}

#[test]
fn criterion_04_coarse_prior_monotonicity() {
    let scene = ifm_make_scene(64, 64, "oceanI", DepthProfile::LinearRamp, 3).unwrap();
    let observed = ifm_synthesize(&scene).unwrap();
    let rmi = rmi_transform(&observed);
    let mut acc = FitAccumulator::new();
    acc.accumulate(&rmi, &scene.depth).unwrap();
    let coeffs = acc.solve(1.0).unwrap();
    let coarse = predict_coarse(&rmi, &coeffs);
    let rho = spearman(coarse.values(), scene.depth.values());
    assert!(rho >= 0.9, "Spearman = {rho}");
    println!("criterion 4 (coarse prior Spearman {rho:.4} >= 0.9 on linear ramp): PASS");
}

// independent per-pixel reference for the metric suite
fn naive_metrics(pred: &DepthMap, gt: &DepthMap) -> (f64, f64, f64, f64) {
    let floor = aquadepth::metrics::RATIO_FLOOR;
    let (mut se, mut n) = (0.0, 0usize);
    let (mut ar, mut sr, mut lg, mut nr) = (0.0, 0.0, 0.0, 0usize);
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            if !(gt.is_valid(x, y) && pred.is_valid(x, y)) {
                continue;
            }
            let (d, p) = (gt.get(x, y), pred.get(x, y));
            se += (d - p) * (d - p);
            n += 1;
            if d > floor {
                ar += (d - p).abs() / d;
                sr += (d - p) * (d - p) / d;
                lg += (d.log10() - p.max(floor).log10()).abs();
                nr += 1;
            }
        }
    }
    (
        ar / nr as f64,
        sr / nr as f64,
        (se / n as f64).sqrt(),
        lg / nr as f64,
    )
}

#[test]
fn criterion_05_metric_oracle_equivalence() {
    let mut s = 31u64;
    for _ in 0..20 {
        let gt_vals: Vec<f64> = (0..64 * 64).map(|_| 0.02 + 0.98 * lcg(&mut s)).collect();
        let pred_vals: Vec<f64> = (0..64 * 64).map(|_| 0.02 + 0.98 * lcg(&mut s)).collect();
        let gt = DepthMap::from_values(64, 64, gt_vals, 1.0);
        let pred = DepthMap::from_values(64, 64, pred_vals, 1.0);
        let r = evaluate(&pred, &gt).unwrap();
        let (ar, sr, rmse, lg) = naive_metrics(&pred, &gt);
        assert!((r.abs_rel - ar).abs() < 1e-12);
        assert!((r.sq_rel - sr).abs() < 1e-12);
        assert!((r.rmse - rmse).abs() < 1e-12);
        assert!((r.log10 - lg).abs() < 1e-12);
    }

    let gt = DepthMap::from_values(2, 1, vec![2.0, 4.0], 1.0);
    let pred = DepthMap::from_values(2, 1, vec![1.0, 5.0], 1.0);
    let r = evaluate(&pred, &gt).unwrap();
    assert!((r.abs_rel - 0.375).abs() < 1e-9);
    assert!((r.sq_rel - 0.375).abs() < 1e-9);
    assert!((r.rmse - 1.0).abs() < 1e-9);
    let log10_expected = (2f64.log10() + (5f64.log10() - 4f64.log10())) / 2.0;
    assert!((r.log10 - log10_expected).abs() < 1e-9);
    assert!((log10_expected - 0.19897).abs() < 1e-5);
    println!("criterion 5 (metrics = naive reference within 1e-12; fixture exact): PASS");
}

#[test]
fn criterion_06_silog_properties() {
    let cfg = LossConfig::default();

    // zero on identical maps
    let m = DepthMap::from_values(3, 1, vec![0.2, 0.5, 0.9], 1.0);
    assert_eq!(silog_loss(&m, &m, &cfg).unwrap(), 0.0);

    // scale invariance at lambda = 1
    let scale_free = LossConfig {
        silog_lambda: 1.0,
        ..cfg
    };
    let mut s = 17u64;
    let gt = DepthMap::from_values(8, 8, (0..64).map(|_| 0.05 + 0.9 * lcg(&mut s)).collect(), 1.0);
    let pred_vals: Vec<f64> = (0..64).map(|_| 0.05 + 0.9 * lcg(&mut s)).collect();
    let base = silog_loss(
        &DepthMap::from_values(8, 8, pred_vals.clone(), 1.0),
        &gt,
        &scale_free,
    )
    .unwrap();
    for c in [0.5, 2.0, 10.0] {
        let scaled = DepthMap::from_values(8, 8, pred_vals.iter().map(|v| v * c).collect(), 1.0);
        let loss = silog_loss(&scaled, &gt, &scale_free).unwrap();
        assert!((loss - base).abs() < 1e-9, "c = {c}: {loss} vs {base}");
    }

    // two-pixel fixture: 10 * |ln 2| * sqrt(0.5 - 0.85/4) = 3.716588...
    let gt2 = DepthMap::from_values(2, 1, vec![0.2, 0.5], 1.0);
    let pred2 = DepthMap::from_values(2, 1, vec![0.4, 0.5], 1.0);
    let loss = silog_loss(&pred2, &gt2, &cfg).unwrap();
    let expected = 10.0 * 2f64.ln() * 0.2875f64.sqrt();
    assert!((loss - expected).abs() < 1e-12);
    assert!((loss - 3.71659).abs() < 1e-4);

    // radicand never negative beyond rounding across 1e5 random pairs
    let mut s = 99u64;
    let mut min_inner = f64::INFINITY;
    for _ in 0..100_000 {
        let t = 2 + (lcg(&mut s) * 6.0) as usize;
        let mut sum_g = 0.0;
        let mut sum_g2 = 0.0;
        for _ in 0..t {
            let gt = (0.01 + 0.99 * lcg(&mut s)).max(cfg.log_floor);
            let pred = (0.01 + 0.99 * lcg(&mut s)).max(cfg.log_floor);
            let g = pred.ln() - gt.ln();
            sum_g += g;
            sum_g2 += g * g;
        }
        let tf = t as f64;
        let inner = sum_g2 / tf - cfg.silog_lambda * sum_g * sum_g / (tf * tf);
        min_inner = min_inner.min(inner);
    }
    assert!(min_inner >= -1e-15, "min radicand {min_inner}");
    println!("criterion 6 (SILog zero/scale-invariance/fixture/radicand): PASS");
}

#[test]
fn criterion_07_guided_filter_properties() {
    let cfg = GuidedFilterConfig {
        radius: 4,
        epsilon: 1e-4,
    };
    let mut s = 13u64;

    // constant-input exactness (dyadic constant stays bit-exact)
    let guide: Vec<f64> = (0..32 * 32).map(|_| lcg(&mut s)).collect();
    let constant = DepthMap::constant(32, 32, 0.25, 1.0);
    let out = guided_filter(&constant, &guide, &cfg).unwrap();
    assert!(out.values().iter().all(|&v| v == 0.25));

    // constant guide = box filter within 1e-10
    let vals: Vec<f64> = (0..32 * 32).map(|_| lcg(&mut s)).collect();
    let input = DepthMap::from_values(32, 32, vals.clone(), 1.0);
    let flat_guide = vec![0.7f64; 32 * 32];
    let filtered = guided_filter(&input, &flat_guide, &cfg).unwrap();
    let boxed = box_filter(&input, cfg.radius);
    for (a, b) in filtered.values().iter().zip(boxed.values()) {
        assert!((a - b).abs() < 1e-10);
    }

    // box filter = naive O(r^2) loop within 1e-10
    for r in [1, 4, 9] {
        let fast = box_filter_plane(&vals, 32, 32, r);
        for y in 0..32usize {
            for x in 0..32usize {
                let (y0, y1) = (y.saturating_sub(r), (y + r + 1).min(32));
                let (x0, x1) = (x.saturating_sub(r), (x + r + 1).min(32));
                let mut sum = 0.0;
                for yy in y0..y1 {
                    for xx in x0..x1 {
                        sum += vals[yy * 32 + xx];
                    }
                }
                let naive = sum / ((y1 - y0) * (x1 - x0)) as f64;
                assert!((fast[y * 32 + x] - naive).abs() < 1e-10);
            }
        }
    }

    // step edge: guided transition no wider than box filter's
    let (w, h) = (64, 16);
    let mut step = vec![0.0f64; w * h];
    for y in 0..h {
        for x in w / 2..w {
            step[y * w + x] = 1.0;
        }
    }
    let step_map = DepthMap::from_values(w, h, step.clone(), 1.0);
    let cfg_step = GuidedFilterConfig {
        radius: 6,
        epsilon: 1e-4,
    };
    let guided = guided_filter(&step_map, &step, &cfg_step).unwrap();
    let boxed = box_filter(&step_map, 6);
    let width_of = |row: &[f64]| row.iter().filter(|&&v| v > 0.1 && v < 0.9).count();
    let row = h / 2;
    let gw = width_of(&guided.values()[row * w..(row + 1) * w]);
    let bw = width_of(&boxed.values()[row * w..(row + 1) * w]);
    assert!(gw <= bw, "guided {gw} > box {bw}");
    println!("criterion 7 (guided filter constant/box/naive/step properties): PASS");
}

#[test]
fn criterion_08_combined_objective() {
    let cfg = LossConfig::default();
    assert_eq!(cfg.w_l2, 0.3);
    assert_eq!(cfg.w_silog, 0.6);
    assert_eq!(cfg.w_proj, 0.1);

    let mut s = 41u64;
    let n = 16 * 16;
    let gt = DepthMap::from_values(16, 16, (0..n).map(|_| 0.05 + 0.9 * lcg(&mut s)).collect(), 1.0);
    let pred =
        DepthMap::from_values(16, 16, (0..n).map(|_| 0.05 + 0.9 * lcg(&mut s)).collect(), 1.0);
    let coarse =
        DepthMap::from_values(16, 16, (0..n).map(|_| 0.05 + 0.9 * lcg(&mut s)).collect(), 1.0);
    let b = combined_objective(&pred, &gt, &coarse, &cfg).unwrap();
    let l2 = l2_loss(&pred, &gt).unwrap();
    let silog = silog_loss(&pred, &gt, &cfg).unwrap();
    let proj = projection_error(&coarse, &pred).unwrap().value;
    assert_eq!(b.l2, l2);
    assert_eq!(b.silog, silog);
    assert_eq!(b.projection, proj);
    assert_eq!(b.total, 0.3 * l2 + 0.6 * silog + 0.1 * proj);

    let zero = combined_objective(&gt, &gt, &gt, &cfg).unwrap();
    assert_eq!(zero.total, 0.0);
    println!("criterion 8 (combined objective = weighted recomputation; zero at identity): PASS");
}

#[test]
fn criterion_09_throughput() {
    let report = cmd_bench(640, 480, 30, Some(GuidedFilterConfig::default()), 5).unwrap();
    assert!(
        report.end_to_end.mean_ms <= 40.0,
        "mean {:.2} ms exceeds 40 ms",
        report.end_to_end.mean_ms
    );
    let gap = (report.stage_sum_ms() - report.end_to_end.mean_ms).abs() / report.end_to_end.mean_ms;
    assert!(gap <= 0.05, "stage accounting gap {:.1}%", gap * 100.0);
    println!(
        "criterion 9 (640x480 chain {:.2} ms mean = {:.1} FPS, accounting gap {:.1}%): PASS",
        report.end_to_end.mean_ms,
        report.fps,
        gap * 100.0
    );
}

#[test]
fn criterion_10_dataset_fit_optional() {
    // Requires a local USOD10K manifest; skipped when absent.
    let Ok(manifest) = std::env::var("USOD10K_MANIFEST") else {
        println!("criterion 10 (USOD10K fit vs reference mu): SKIPPED (set USOD10K_MANIFEST)");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mu.json");
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let coeffs =
        aquadepth::pipeline::cmd_fit(std::path::Path::new(&manifest), &out, threads, None).unwrap();
    for i in 0..3 {
        assert!(
            (coeffs.mu[i] - aquadepth::REFERENCE_MU[i]).abs() <= 0.05,
            "mu[{i}] = {} vs reference {}",
            coeffs.mu[i],
            aquadepth::REFERENCE_MU[i]
        );
    }
    println!("criterion 10 (USOD10K fit within 0.05 of reference mu): PASS");
}
