mod common;

use common::{hs_step_oracle, interior_epe};
use denseflow::{hs_solve, hs_update_step, synthesize, FlowField, Gradients, GrayImage, HsParams, SceneKind};

#[test]
fn update_step_matches_scalar_transcription() {
    let (w, h) = (4, 3);
    let u = [0.1, -0.2, 0.3, 0.0, 0.5, 0.4, -0.1, 0.2, 0.0, 0.7, -0.3, 0.1];
    let v = [0.0, 0.1, 0.1, -0.4, 0.2, 0.0, 0.3, -0.2, 0.6, 0.1, 0.0, -0.5];
    let ix = [0.2, 0.1, -0.3, 0.4, 0.0, 0.5, 0.1, -0.2, 0.3, 0.2, 0.1, 0.0];
    let iy = [-0.1, 0.3, 0.2, 0.0, 0.4, -0.2, 0.1, 0.1, 0.0, -0.3, 0.2, 0.5];
    let it = [0.05, -0.1, 0.2, 0.0, 0.1, -0.05, 0.15, 0.0, -0.2, 0.1, 0.05, -0.1];
    let params = HsParams { alpha: 0.3, ..HsParams::default() };
    let flow = FlowField::new(w, h, u.to_vec(), v.to_vec()).unwrap();
    let g = Gradients {
        ix: GrayImage::new(w, h, ix.to_vec()).unwrap(),
        iy: GrayImage::new(w, h, iy.to_vec()).unwrap(),
        it: GrayImage::new(w, h, it.to_vec()).unwrap(),
    };
    let out = hs_update_step(&flow, &g, &params).unwrap();
    let (eu, ev) = hs_step_oracle(&u, &v, &ix, &iy, &it, w, h, params.alpha, params.epsilon);
    for i in 0..w * h {
        assert!((out.u()[i] - eu[i]).abs() < 1e-12);
        assert!((out.v()[i] - ev[i]).abs() < 1e-12);
    }
}

fn one_pixel_scene() -> denseflow::SyntheticScene {
    synthesize(SceneKind::Translation { dx: 1.0, dy: 0.0 }, 64, 64, 7).unwrap()
}

#[test]
fn one_pixel_translation_is_recovered() {
    let s = one_pixel_scene();
    let params = HsParams { alpha: 1.0, ..HsParams::default() };
    let (flow, trace) = hs_solve(&s.frame1, &s.frame2, &FlowField::zeros(64, 64).unwrap(), &params).unwrap();
    let epe = interior_epe(&flow, &s.ground_truth, 8, Some(&s.frame1));
    assert!(epe < 0.5, "interior EPE {epe}");
    assert!(trace.iterations_run <= 5000);
    assert_eq!(trace.converged, trace.final_delta < params.convergence_threshold);
    assert!(trace.energy_final <= trace.energy_initial, "{trace:?}");
}

#[test]
fn runs_are_bit_identical() {
    let s = synthesize(SceneKind::Rotation { degrees: 3.0 }, 40, 32, 2).unwrap();
    let params = HsParams { max_iterations: 200, ..HsParams::default() };
    let zero = FlowField::zeros(40, 32).unwrap();
    let a = hs_solve(&s.frame1, &s.frame2, &zero, &params).unwrap();
    let b = hs_solve(&s.frame1, &s.frame2, &zero, &params).unwrap();
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
}

#[test]
fn tighter_threshold_never_runs_fewer_iterations() {
    let s = synthesize(SceneKind::Translation { dx: 0.5, dy: 0.5 }, 32, 32, 11).unwrap();
    let zero = FlowField::zeros(32, 32).unwrap();
    let mut last = 0;
    for tol in [1e-2, 1e-3, 1e-4, 1e-5] {
        let params = HsParams { convergence_threshold: tol, ..HsParams::default() };
        let (_, trace) = hs_solve(&s.frame1, &s.frame2, &zero, &params).unwrap();
        assert!(trace.iterations_run >= last);
        assert_eq!(trace.converged, trace.final_delta < tol);
        last = trace.iterations_run;
    }
}

#[test]
fn shape_errors() {
    let a = GrayImage::filled(8, 8, 0.0).unwrap();
    let b = GrayImage::filled(8, 9, 0.0).unwrap();
    let zero = FlowField::zeros(8, 8).unwrap();
    assert!(hs_solve(&a, &b, &zero, &HsParams::default()).is_err());
    assert!(hs_solve(&a, &a, &FlowField::zeros(9, 8).unwrap(), &HsParams::default()).is_err());
}
