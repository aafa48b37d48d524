use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use denseflow::benchmark::{run_benchmark, BenchmarkScene, DenseMethod};
use denseflow::flow_io::{flow_to_color, read_flo_file, write_flo_file};
use denseflow::imagery::io::{load_gray, save_gray, save_rgb};
use denseflow::{
    build_pyramid, evaluate_pair, hs_solve, lk_solve_grid, mrhs_solve, synthesize, FlowError, FlowField, LkParams,
    MrParams, SceneKind,
};

use crate::{
    BenchmarkArgs, CliError, EstimateArgs, EvaluateArgs, Kind, Method, PyramidArgs, SynthArgs, VisualizeArgs,
};

type CliResult = Result<(), CliError>;

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(FlowError::Ingestion { path: path.to_path_buf(), reason: "no such file".into() }.into())
    }
}

fn require_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(CliError::Usage(format!(
            "parameter error: output directory {} does not exist",
            dir.display()
        ))),
        _ => Ok(()),
    }
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| FlowError::Io(e).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn estimate(a: EstimateArgs) -> CliResult {
    require_file(&a.frame1)?;
    require_file(&a.frame2)?;
    for out in [&a.output, &a.viz].into_iter().flatten() {
        require_parent(out)?;
    }
    let hs = a.hs.params();
    hs.validate()?;
    let lk = LkParams { window_radius: a.radius, min_eigenvalue: a.min_eig };
    if a.method == Method::Lk {
        lk.validate()?;
        if a.viz.is_some() {
            return Err(CliError::Usage("parameter error: --viz needs a dense method".into()));
        }
    } else if a.output.is_none() {
        return Err(CliError::Usage("parameter error: dense methods need -o/--output".into()));
    }
    let f1 = load_gray(&a.frame1)?;
    let f2 = load_gray(&a.frame2)?;

    let flow = match a.method {
        Method::Lk => {
            let sparse = lk_solve_grid(&f1, &f2, a.stride, &lk)?;
            write_text(a.output.as_deref(), &sparse.to_csv())?;
            if a.output.is_some() {
                println!("lk: points={} accepted={}", sparse.points.len(), sparse.accepted().count());
            }
            return Ok(());
        }
        Method::Hs => {
            let (w, h) = f1.dims();
            let (flow, t) = hs_solve(&f1, &f2, &FlowField::zeros(w, h)?, &hs)?;
            println!(
                "hs: iterations={} converged={} final_delta={:e}",
                t.iterations_run, t.converged, t.final_delta
            );
            flow
        }
        Method::Mrhs => {
            let (flow, t) = mrhs_solve(&f1, &f2, &MrParams { levels: a.levels, hs })?;
            for l in &t.per_level {
                println!(
                    "mrhs level {}: iterations={} converged={} final_delta={:e}",
                    l.level, l.trace.iterations_run, l.trace.converged, l.trace.final_delta
                );
            }
            println!("mrhs: levels={} iterations={}", t.actual_levels, t.total_iterations());
            flow
        }
    };
    if let Some(out) = &a.output {
        write_flo_file(&flow, out)?;
    }
    if let Some(viz) = &a.viz {
        let img = flow_to_color(&flow, None);
        save_rgb(img.width, img.height, img.rgb, viz)?;
    }
    Ok(())
}

pub fn evaluate(a: EvaluateArgs) -> CliResult {
    let est = read_flo_file(&a.estimate)?;
    let gt = read_flo_file(&a.ground_truth)?;
    let mask = if a.mask { Some(est.mask.and(&gt.mask)?) } else { None };
    let report = evaluate_pair(&est.flow, &gt.flow, mask.as_ref())?;
    println!("{report}");
    if let Some(csv) = &a.csv {
        let scene = a.scene.clone().unwrap_or_else(|| {
            a.ground_truth.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
        });
        let fresh = !csv.exists();
        let mut file = OpenOptions::new().create(true).append(true).open(csv).map_err(FlowError::Io)?;
        let mut text = String::new();
        if fresh {
            text.push_str("scene,frame,method,aae_deg,epe_px\n");
        }
        text.push_str(&format!(
            "{scene},{},{},{:.6},{:.6}\n",
            a.frame, a.method, report.aae_degrees, report.epe_pixels
        ));
        file.write_all(text.as_bytes()).map_err(FlowError::Io)?;
    }
    Ok(())
}

pub fn visualize(a: VisualizeArgs) -> CliResult {
    require_parent(&a.output)?;
    let data = read_flo_file(&a.flow)?;
    let img = flow_to_color(&data.flow, a.max_magnitude);
    save_rgb(img.width, img.height, img.rgb, &a.output)?;
    Ok(())
}

fn ensure_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| FlowError::Io(e).into())
}

pub fn pyramid(a: PyramidArgs) -> CliResult {
    require_file(&a.input)?;
    let img = load_gray(&a.input)?;
    let pyr = build_pyramid(&img, a.levels)?;
    ensure_dir(&a.out_dir)?;
    for (i, level) in pyr.levels().iter().enumerate() {
        let path = a.out_dir.join(format!("level_{i}.png"));
        save_gray(level, &path)?;
        println!("{} {}x{}", path.display(), level.width(), level.height());
    }
    Ok(())
}

pub fn synth(a: SynthArgs) -> CliResult {
    let kind = match a.kind {
        Kind::Translation => SceneKind::Translation { dx: a.dx, dy: a.dy },
        Kind::Rotation => SceneKind::Rotation { degrees: a.degrees },
        Kind::Zoom => SceneKind::Zoom { factor: a.factor },
    };
    let scene = synthesize(kind, a.width, a.height, a.seed)?;
    ensure_dir(&a.out_dir)?;
    save_gray(&scene.frame1, a.out_dir.join("frame1.png"))?;
    save_gray(&scene.frame2, a.out_dir.join("frame2.png"))?;
    write_flo_file(&scene.ground_truth, a.out_dir.join("gt.flo"))?;
    Ok(())
}

fn parse_scenes(list: &str) -> Result<Vec<BenchmarkScene>, CliError> {
    let bad = |item: &str| CliError::Usage(format!("parameter error: scene entry '{item}' is not name:frame:levels"));
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(':').collect();
            let [name, frame, levels] = parts[..] else { return Err(bad(item)) };
            let frame = frame.parse().map_err(|_| bad(item))?;
            let levels = levels.parse().map_err(|_| bad(item))?;
            Ok(BenchmarkScene::new(name, frame, levels))
        })
        .collect()
}

fn parse_methods(list: &str) -> Result<Vec<DenseMethod>, CliError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|m| match m {
            "hs" => Ok(DenseMethod::Hs),
            "mrhs" => Ok(DenseMethod::MrHs),
            other => Err(CliError::Usage(format!("parameter error: unknown method '{other}'"))),
        })
        .collect()
}

pub fn benchmark(a: BenchmarkArgs) -> CliResult {
    let scenes = parse_scenes(&a.scenes)?;
    let methods = parse_methods(&a.methods)?;
    if let Some(out) = &a.output {
        require_parent(out)?;
    }
    if !a.root.is_dir() && !scenes.is_empty() {
        return Err(FlowError::Ingestion { path: a.root.clone(), reason: "dataset root is not a directory".into() }.into());
    }
    let report = run_benchmark(&a.root, &a.pass, &scenes, &methods, &a.hs.params())?;
    write_text(a.output.as_deref(), &report.to_csv())?;
    if report.failures.is_empty() {
        return Ok(());
    }
    let listed: Vec<String> = report.failures.iter().map(|f| format!("{} ({})", f.scene, f.message)).collect();
    Err(CliError::Partial(format!(
        "benchmark incomplete: {} of {} scenes failed: {}",
        report.failures.len(),
        scenes.len(),
        listed.join("; ")
    )))
}
