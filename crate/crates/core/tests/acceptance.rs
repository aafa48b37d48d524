//! Acceptance run: one PASS/FAIL/SKIP line per criterion.
//!
//! The Sintel check reads its data from `DENSEFLOW_SINTEL_ROOT` and is
//! skipped when the variable is unset or the directory is missing.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{aae_oracle, epe_oracle, hs_step_oracle, interior_epe, lk_oracle};
use denseflow::benchmark::{reference_scenes, run_benchmark, DenseMethod};
use denseflow::flow_io::{read_flo, write_flo};
use denseflow::metrics::AAE_EPSILON;
use denseflow::{
    average_angular_error, bilinear_sample, endpoint_error, hs_solve, hs_update_step, lk_solve_point, mrhs_solve,
    synthesize, FlowField, Gradients, GrayImage, HsParams, LkParams, MrParams, SceneKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = fn() -> Outcome;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn within(outcome: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    match outcome {
        Outcome::Pass(d) if elapsed > limit => {
            Outcome::Fail(format!("{d}; took {:.1?}, limit {:.0?}", elapsed, limit))
        }
        other => other,
    }
}

fn bilinear_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (a, b, c, d): (f64, f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen(), rng.gen());
        let f = move |x: f64, y: f64| a + b * x + c * y + d * x * y;
        let (w, h) = (rng.gen_range(2..12), rng.gen_range(2..12));
        let img = GrayImage::from_fn(w, h, |x, y| f(x as f64, y as f64)).unwrap();
        let x = rng.gen_range(0.0..=(w - 1) as f64);
        let y = rng.gen_range(0.0..=(h - 1) as f64);
        worst = worst.max((bilinear_sample(&img, x, y) - f(x, y)).abs());
    }
    ensure(worst < 1e-12, format!("max error {worst:.2e}"))
}

fn lk_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut tested, mut worst) = (0, 0.0f64);
    while tested < 200 {
        let mut draw = || (0..25).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
        let (ix, iy, it) = (draw(), draw(), draw());
        let g = Gradients {
            ix: GrayImage::new(5, 5, ix.clone()).unwrap(),
            iy: GrayImage::new(5, 5, iy.clone()).unwrap(),
            it: GrayImage::new(5, 5, it.clone()).unwrap(),
        };
        let t = denseflow::structure_tensor(&ix, &iy);
        let cond = (t.xx + t.yy - t.min_eigenvalue()) / t.min_eigenvalue();
        if t.min_eigenvalue() < 0.5 || cond > 100.0 {
            continue;
        }
        let p = lk_solve_point(&g, 2, 2, &LkParams::default());
        if !p.accepted {
            return Outcome::Fail("well-conditioned window rejected".into());
        }
        let (ou, ov) = lk_oracle(&ix, &iy, &it);
        worst = worst.max((p.u - ou).abs()).max((p.v - ov).abs());
        tested += 1;
    }
    ensure(worst < 1e-8, format!("{tested} windows, max deviation {worst:.2e}"))
}

fn hs_stopping_rule() -> Outcome {
    let params = HsParams::default();
    let frame = synthesize(SceneKind::Translation { dx: 0.0, dy: 0.0 }, 48, 48, 3).unwrap().frame1;
    let zero = FlowField::zeros(48, 48).unwrap();
    let (flow, trace) = hs_solve(&frame, &frame, &zero, &params).unwrap();
    if trace.iterations_run != 1 || !trace.converged || flow.vectors().any(|p| p != (0.0, 0.0)) {
        return Outcome::Fail(format!("identical frames: {trace:?}"));
    }
    let fixtures = [
        SceneKind::Translation { dx: 1.0, dy: 0.0 },
        SceneKind::Translation { dx: 0.5, dy: -0.5 },
        SceneKind::Rotation { degrees: 2.0 },
        SceneKind::Zoom { factor: 1.02 },
    ];
    for kind in fixtures {
        let s = synthesize(kind, 32, 32, 4).unwrap();
        let (_, t) = hs_solve(&s.frame1, &s.frame2, &FlowField::zeros(32, 32).unwrap(), &params).unwrap();
        if t.iterations_run > 5000 || t.converged != (t.final_delta < 1e-5) {
            return Outcome::Fail(format!("{}: {t:?}", kind.name()));
        }
    }
    Outcome::Pass("identical frames stop after 1 sweep; 4 fixtures obey the cap and threshold".into())
}

fn hs_update_transcription() -> Outcome {
    let u = [0.2, -0.1, 0.0, 0.4, 0.3, -0.2, 0.1, 0.0, 0.5];
    let v = [0.0, 0.3, -0.4, 0.1, 0.2, 0.0, -0.1, 0.6, 0.2];
    let ix = [0.5, -0.2, 0.1, 0.0, 0.3, 0.4, -0.1, 0.2, 0.0];
    let iy = [0.1, 0.0, 0.2, -0.3, 0.5, 0.1, 0.0, -0.2, 0.4];
    let it = [-0.1, 0.2, 0.0, 0.1, -0.3, 0.05, 0.2, 0.0, -0.15];
    let params = HsParams::default();
    let g = Gradients {
        ix: GrayImage::new(3, 3, ix.to_vec()).unwrap(),
        iy: GrayImage::new(3, 3, iy.to_vec()).unwrap(),
        it: GrayImage::new(3, 3, it.to_vec()).unwrap(),
    };
    let flow = FlowField::new(3, 3, u.to_vec(), v.to_vec()).unwrap();
    let out = hs_update_step(&flow, &g, &params).unwrap();
    let (eu, ev) = hs_step_oracle(&u, &v, &ix, &iy, &it, 3, 3, params.alpha, params.epsilon);
    let worst = (0..9)
        .map(|i| (out.u()[i] - eu[i]).abs().max((out.v()[i] - ev[i]).abs()))
        .fold(0.0, f64::max);
    ensure(worst < 1e-12, format!("max deviation {worst:.2e}"))
}

fn small_motion() -> Outcome {
    let s = synthesize(SceneKind::Translation { dx: 1.0, dy: 0.0 }, 64, 64, 7).unwrap();
    let params = HsParams { alpha: 1.0, ..HsParams::default() };
    let (flow, trace) = hs_solve(&s.frame1, &s.frame2, &FlowField::zeros(64, 64).unwrap(), &params).unwrap();
    let epe = interior_epe(&flow, &s.ground_truth, 8, None);
    ensure(epe < 0.5, format!("interior EPE {epe:.4} px after {} iterations", trace.iterations_run))
}

fn large_motion() -> Outcome {
    let s = synthesize(SceneKind::Translation { dx: 10.0, dy: 0.0 }, 128, 128, 7).unwrap();
    let hs = HsParams { alpha: 1.0, ..HsParams::default() };
    let (single, _) = hs_solve(&s.frame1, &s.frame2, &FlowField::zeros(128, 128).unwrap(), &hs).unwrap();
    let (multi, _) = mrhs_solve(&s.frame1, &s.frame2, &MrParams { levels: 4, hs }).unwrap();
    let e_hs = interior_epe(&single, &s.ground_truth, 16, None);
    let e_mr = interior_epe(&multi, &s.ground_truth, 16, None);
    ensure(e_mr < e_hs && e_mr < 2.0, format!("MR-HS {e_mr:.3} px vs HS {e_hs:.3} px"))
}

fn depth_one_equivalence() -> Outcome {
    let s = synthesize(SceneKind::Rotation { degrees: 2.0 }, 48, 40, 8).unwrap();
    let hs = HsParams::default();
    let (a, _) = mrhs_solve(&s.frame1, &s.frame2, &MrParams { levels: 1, hs }).unwrap();
    let (b, _) = hs_solve(&s.frame1, &s.frame2, &FlowField::zeros(48, 40).unwrap(), &hs).unwrap();
    let ha = Sha256::digest(write_flo(&a).unwrap());
    let hb = Sha256::digest(write_flo(&b).unwrap());
    let hex = |d: &[u8]| d.iter().map(|b| format!("{b:02x}")).collect::<String>();
    ensure(ha == hb, format!("sha256 {} / {}", hex(&ha), hex(&hb)))
}

fn metric_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mut field = || {
            let u = (0..256).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let v = (0..256).map(|_| rng.gen_range(-5.0..5.0)).collect();
            FlowField::new(16, 16, u, v).unwrap()
        };
        let (est, gt) = (field(), field());
        let aae = average_angular_error(&est, &gt, None).unwrap();
        let epe = endpoint_error(&est, &gt, None).unwrap();
        worst = worst
            .max((aae - aae_oracle(&est, &gt, AAE_EPSILON)).abs())
            .max((epe - epe_oracle(&est, &gt)).abs());
    }
    let ortho = average_angular_error(
        &FlowField::constant(4, 4, 1.0, 0.0).unwrap(),
        &FlowField::constant(4, 4, 0.0, 1.0).unwrap(),
        None,
    )
    .unwrap();
    let offset = endpoint_error(
        &FlowField::constant(4, 4, 3.0, 4.0).unwrap(),
        &FlowField::zeros(4, 4).unwrap(),
        None,
    )
    .unwrap();
    ensure(
        worst < 1e-9 && (ortho - 90.0).abs() <= 1e-3 && offset == 5.0,
        format!("oracle deviation {worst:.2e}, orthogonal {ortho:.6} deg, offset EPE {offset}"),
    )
}

fn flo_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in 0..500 {
        let (w, h) = (rng.gen_range(1..20), rng.gen_range(1..20));
        let mut comp = || (0..w * h).map(|_| f64::from(rng.gen_range(-500.0f32..500.0))).collect();
        let f = FlowField::new(w, h, comp(), comp()).unwrap();
        let back = read_flo(&write_flo(&f).unwrap()).unwrap();
        if back.flow != f || back.has_unknown() {
            return Outcome::Fail(format!("flow {n} ({w}x{h}) changed"));
        }
    }
    let bytes = write_flo(&FlowField::constant(1, 1, 1.0, -2.0).unwrap()).unwrap();
    let expected: [u8; 20] = [
        b'P', b'I', b'E', b'H', 1, 0, 0, 0, 1, 0, 0, 0, 0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0,
    ];
    ensure(bytes == expected, "500 random flows; 1x1 fixture byte-exact".into())
}

fn sintel_table() -> Outcome {
    let Some(root) = std::env::var_os("DENSEFLOW_SINTEL_ROOT").map(PathBuf::from) else {
        return Outcome::Skip("DENSEFLOW_SINTEL_ROOT not set".into());
    };
    if !root.is_dir() {
        return Outcome::Skip(format!("{} is not a directory", root.display()));
    }
    // MR-HS (aae, epe) targets per scene
    let targets = [
        ("alley_1", 6.61, 1.81),
        ("bamboo_2", 8.81, 1.17),
        ("market_2", 15.31, 0.41),
        ("mountain_1", 15.28, 2.78),
    ];
    let report = match run_benchmark(
        &root,
        "final",
        &reference_scenes(),
        &[DenseMethod::Hs, DenseMethod::MrHs],
        &HsParams::default(),
    ) {
        Ok(r) => r,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    if let Some(f) = report.failures.first() {
        return Outcome::Fail(format!("{}: {}", f.scene, f.message));
    }
    let mut notes = Vec::new();
    let mut ok = true;
    for (scene, aae_t, epe_t) in targets {
        let (Some(hs), Some(mr)) = (report.row(scene, DenseMethod::Hs), report.row(scene, DenseMethod::MrHs)) else {
            return Outcome::Fail(format!("{scene}: missing rows"));
        };
        let ordered = mr.report.aae_degrees < hs.report.aae_degrees && mr.report.epe_pixels < hs.report.epe_pixels;
        let close = (mr.report.aae_degrees / aae_t - 1.0).abs() <= 0.3 && (mr.report.epe_pixels / epe_t - 1.0).abs() <= 0.3;
        ok &= ordered && close;
        notes.push(format!(
            "{scene} hs {:.2}/{:.2} mrhs {:.2}/{:.2}",
            hs.report.aae_degrees, hs.report.epe_pixels, mr.report.aae_degrees, mr.report.epe_pixels
        ));
    }
    ensure(ok, notes.join("; "))
}

fn main() {
    let criteria: [(&str, Check, u64); 10] = [
        ("bilinear exactness", bilinear_exactness, 1),
        ("lucas-kanade oracle", lk_oracle_equivalence, 1),
        ("horn-schunck stopping rule", hs_stopping_rule, 10),
        ("horn-schunck update", hs_update_transcription, 1),
        ("small-motion accuracy", small_motion, 30),
        ("large-motion multiresolution", large_motion, 120),
        ("depth-1 equivalence", depth_one_equivalence, 60),
        ("metric oracles", metric_oracles, 10),
        ("flo round trip", flo_round_trip, 10),
        ("sintel table", sintel_table, 3600),
    ];
    let mut failed = 0;
    for (n, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Outcome::Fail("panicked".into()));
        let outcome = within(outcome, start.elapsed(), Duration::from_secs(*limit));
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("criterion {:>2} {tag} {name}: {detail} [{:.2?}]", n + 1, start.elapsed());
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
