//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::time::{Duration, Instant};

use ddhqa::evaluation::{cyclic_clip_sample, run_cross_validation, CvConfig};
use ddhqa::geometry::{
    dihedral_angles, extract_geometry_features, fit_aggd, fit_gamma, fit_ggd, vertex_curvatures,
    zscore, AreaMode, FeatureConfig,
};
use ddhqa::mesh::{primitives, TriangleMesh};
use ddhqa::regression::{
    ClipFeatureRecord, FeatureDims, QualityModel, TrainingConfig, VideoSample,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Normal};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gauss_bonnet() -> Outcome {
    let mut meshes: Vec<(String, TriangleMesh)> = (0..=3)
        .map(|k| (format!("icosphere({k})"), primitives::icosphere(k)))
        .collect();
    meshes.push(("cube".into(), primitives::unit_cube()));
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for (name, mesh) in &meshes {
        for mode in [AreaMode::Mixed, AreaMode::Barycentric] {
            let start = Instant::now();
            let total: f64 = vertex_curvatures(mesh, mode)
                .iter()
                .map(|v| v.curvature * v.area)
                .sum();
            slowest = slowest.max(start.elapsed());
            let rel = (total - 4.0 * PI).abs() / (4.0 * PI);
            if rel >= 1e-6 {
                return Err(format!(
                    "{name} {mode:?}: sum {total}, relative error {rel:e}"
                ));
            }
            worst = worst.max(rel);
        }
    }
    check(
        slowest < Duration::from_secs(1),
        format!("worst relative error {worst:.1e}, slowest mesh {slowest:?}"),
    )
}

fn cube_census() -> Outcome {
    let field = dihedral_angles(&primitives::unit_cube()).map_err(|e| e.to_string())?;
    let right = field
        .values
        .iter()
        .filter(|t| (*t - FRAC_PI_2).abs() <= 1e-9)
        .count();
    let flat = field.values.iter().filter(|t| t.abs() <= 1e-9).count();
    check(
        right == 12 && flat == 6 && field.values.len() == 18,
        format!(
            "{right} edges at pi/2, {flat} at 0, {} total",
            field.values.len()
        ),
    )
}

fn transforms() -> Outcome {
    let config = FeatureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_dihedral: f64 = 0.0;
    let mut worst_curvature: f64 = 0.0;
    for trial in 0..10u64 {
        let mesh = common::noisy_icosphere(3, 0.03, trial);
        let base = extract_geometry_features(&mesh, &config)
            .map_err(|e| e.to_string())?
            .vector;
        let r = common::random_rotation(&mut rng);
        let t = [
            rng.random_range(-50.0..50.0),
            rng.random_range(-50.0..50.0),
            rng.random_range(-50.0..50.0),
        ];
        let s: f64 = rng.random_range(0.1..10.0);

        let moved = extract_geometry_features(&common::rigid(&mesh, r, t), &config)
            .map_err(|e| e.to_string())?
            .vector;
        let scaled = extract_geometry_features(
            &mesh.map_vertices(|p| [p[0] * s, p[1] * s, p[2] * s]),
            &config,
        )
        .map_err(|e| e.to_string())?
        .vector;
        for other in [&moved, &scaled] {
            for (a, b) in base.dihedral_slots().iter().zip(other.dihedral_slots()) {
                worst_dihedral = worst_dihedral.max((a - b).abs());
            }
        }

        // rigid: every curvature slot unchanged
        for (a, b) in base.curvature_slots().iter().zip(moved.curvature_slots()) {
            worst_curvature = worst_curvature.max((a - b).abs() / a.abs().max(1.0));
        }
        // scale: G -> G/s^2 moves mean, variance and the Gamma rate; the
        // z-scored and histogram slots are unchanged
        let c = base.curvature_slots();
        let d = scaled.curvature_slots();
        let s2 = s * s;
        let expected = [
            c[0] / s2,
            c[1] / (s2 * s2),
            c[2],
            c[3],
            c[4],
            c[5],
            c[6],
            c[7],
            c[8],
            c[9],
            c[10] * s2,
        ];
        for (i, (e, got)) in expected.iter().zip(d).enumerate() {
            // the Gamma shift adds 1e-6 of an absolute unit, so its slots are
            // covariant only to that order
            let tol = if i >= 9 { 1e-4 } else { 1e-9 };
            let rel = (e - got).abs() / e.abs().max(1e-300);
            if rel > tol {
                return Err(format!(
                    "trial {trial}: curvature slot {i} expected {e}, got {got} (scale {s})"
                ));
            }
        }
    }
    check(
        worst_dihedral <= 1e-9 && worst_curvature <= 1e-9,
        format!("dihedral slots max diff {worst_dihedral:.1e}, rigid curvature slots max rel diff {worst_curvature:.1e}"),
    )
}

fn fit_recovery() -> Outcome {
    let start = Instant::now();
    let n = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gauss: Vec<f64> = Normal::new(0.0, 1.0)
        .unwrap()
        .sample_iter(&mut rng)
        .take(n)
        .collect();
    let laplace: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(-0.5..0.5);
            -u.signum() * (1.0 - 2.0 * u.abs()).ln()
        })
        .collect();
    let exp1: Vec<f64> = Exp::new(1.0)
        .unwrap()
        .sample_iter(&mut rng)
        .take(n)
        .collect();
    let gamma42: Vec<f64> = Gamma::new(4.0, 0.5)
        .unwrap()
        .sample_iter(&mut rng)
        .take(n)
        .collect();

    let err = |e: ddhqa::geometry::FitError| e.to_string();
    let g = fit_ggd(&zscore(&gauss).map_err(err)?).map_err(err)?;
    let l = fit_ggd(&zscore(&laplace).map_err(err)?).map_err(err)?;
    let a = fit_aggd(&zscore(&gauss).map_err(err)?).map_err(err)?;
    let e = fit_gamma(&exp1).map_err(err)?;
    let q = fit_gamma(&gamma42).map_err(err)?;
    let elapsed = start.elapsed();

    let within = |v: f64, target: f64, rel: f64| (v - target).abs() <= rel * target;
    let detail = format!(
        "GGD gauss {:.3}, laplace {:.3}; AGGD eta {:.4}; Gamma(1,1) ({:.3}, {:.3}); Gamma(4,2) ({:.3}, {:.3}); {elapsed:?}",
        g.shape, l.shape, a.eta, e.shape, e.rate, q.shape, q.rate
    );
    check(
        (g.shape - 2.0).abs() <= 0.1
            && (l.shape - 1.0).abs() <= 0.1
            && a.eta.abs() < 0.02
            && within(e.shape, 1.0, 0.05)
            && within(e.rate, 1.0, 0.05)
            && within(q.shape, 4.0, 0.05)
            && within(q.rate, 2.0, 0.05)
            && elapsed < Duration::from_secs(5),
        detail,
    )
}

fn metric_oracle() -> Outcome {
    let worst = common::metric_oracle_worst(100, 20, 7);
    check(
        worst <= 1e-12,
        format!("max |diff| {worst:.1e} over 100 vector pairs of 20"),
    )
}

fn gradient_check() -> Outcome {
    let worst = common::gradient_check_worst(20, 1e-5);
    check(
        worst < 1e-4,
        format!("worst relative error {worst:.1e} over 20 heads"),
    )
}

/// 200 noisy icospheres; quality falls with noise amplitude.
fn synthetic_dataset(dims: FeatureDims) -> Result<Vec<VideoSample>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let config = FeatureConfig::default();
    (0..200)
        .map(|i| {
            let amplitude = 0.08 * i as f64 / 199.0;
            let mesh = common::noisy_icosphere(2, amplitude, 5000 + i as u64);
            let gf = extract_geometry_features(&mesh, &config)
                .map_err(|e| e.to_string())?
                .vector;
            let mos = 5.0 - 50.0 * amplitude + rng.random_range(-0.1..0.1);
            let video_id = format!("video{i:03}");
            let clips = (0..3)
                .map(|c| ClipFeatureRecord {
                    video_id: video_id.clone(),
                    clip_index: c,
                    sf: vec![0.0; dims.d_s],
                    tf: vec![0.0; dims.d_t],
                })
                .collect();
            Ok(VideoSample {
                video_id,
                group_id: format!("motion{}", i % 10),
                gf,
                clips,
                mos,
            })
        })
        .collect()
}

fn desk_training() -> TrainingConfig {
    TrainingConfig {
        learning_rate: 1e-3,
        epochs: 30,
        seed: 5,
        ..TrainingConfig::default()
    }
}

const DESK_DIMS: FeatureDims = FeatureDims { d_s: 8, d_t: 8 };

fn synthetic_end_to_end() -> Outcome {
    let start = Instant::now();
    let data = synthetic_dataset(DESK_DIMS)?;
    let report = run_cross_validation(&data, DESK_DIMS, &desk_training(), 6, &CvConfig::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let median = report.median_srcc();
    let per_fold: Vec<String> = report
        .folds
        .iter()
        .map(|f| format!("{:.3}", f.metrics.srcc))
        .collect();
    check(
        median >= 0.8 && elapsed < Duration::from_secs(120),
        format!(
            "median SRCC {median:.4} (folds {}), {elapsed:?}",
            per_fold.join(" ")
        ),
    )
}

fn clip_sampling() -> Outcome {
    let cases: [(usize, &[usize]); 3] = [
        (8, &[0, 1, 2, 3, 4, 5]),
        (4, &[0, 1, 2, 3, 0, 1]),
        (1, &[0, 0, 0, 0, 0, 0]),
    ];
    for (n, expected) in cases {
        let got = cyclic_clip_sample(n, 6).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("n={n}: got {got:?}, expected {expected:?}"));
        }
    }
    Ok("n=8, n=4, n=1 reproduced".into())
}

fn determinism() -> Outcome {
    let data = synthetic_dataset(DESK_DIMS)?;
    let training = TrainingConfig {
        epochs: 5,
        ..desk_training()
    };
    let run = || -> Result<(Vec<u8>, Vec<u8>), String> {
        let (model, curve) =
            QualityModel::fit(&data, DESK_DIMS, &training, 6).map_err(|e| e.to_string())?;
        let mut model_bytes = Vec::new();
        model
            .write_json(&mut model_bytes)
            .map_err(|e| e.to_string())?;
        model_bytes.extend(curve.iter().flat_map(|l| l.to_bits().to_le_bytes()));
        let report = run_cross_validation(
            &data,
            DESK_DIMS,
            &training,
            6,
            &CvConfig {
                seed: 3,
                ..CvConfig::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let report_bytes = serde_json::to_vec(&report).map_err(|e| e.to_string())?;
        Ok((model_bytes, report_bytes))
    };
    let first = run()?;
    let second = run()?;
    check(
        first == second,
        format!(
            "model {} bytes, report {} bytes, identical across reruns",
            first.0.len(),
            first.1.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("gauss-bonnet", gauss_bonnet),
        ("cube-dihedral-census", cube_census),
        ("rigid-scale-transforms", transforms),
        ("distribution-fit-recovery", fit_recovery),
        ("metric-oracle-equivalence", metric_oracle),
        ("gradient-check", gradient_check),
        ("synthetic-end-to-end", synthetic_end_to_end),
        ("clip-sampling-conformance", clip_sampling),
        ("determinism", determinism),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for (name, run) in criteria {
        let (status, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        writeln!(out, "{status} {name}: {detail}").unwrap();
    }
    writeln!(
        out,
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    )
    .unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
