use std::fs;
use std::path::{Path, PathBuf};

use siteplan::optimizer::format_candidates;
use siteplan::render::file_name;
use siteplan::scenario::{format_station_list, parse_station_list};
use siteplan::{
    candidate_minima, evaluate as evaluate_metrics, generate_ppp, render_scenario, run_heuristic, stations_in,
    Comparison, DescentConfig, Heuristic, Layer, PlacementPlan, RadioParams, Rect, RenderSpec, ScenarioConfig,
    StationSet, Triangulation,
};

use crate::cli::{DescentArgs, EvaluateArgs, GenerateArgs, ModelArgs, PlanArgs, RenderArgs, ReproduceArgs};
use crate::error::CliError;
use crate::manifest::RunManifest;

const DEFAULT_ALPHA: f64 = 4.0;
const DEFAULT_BETA: f64 = 1.0;
const DEFAULT_K: usize = 5;
const DEFAULT_RESOLUTION: usize = 500;

pub const STATIONS_FILE: &str = "stations.txt";
pub const REPORT_TEXT: &str = "report.txt";
pub const REPORT_CSV: &str = "report.csv";

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(path, e))
}

fn write(out: &Path, name: &str, text: &str, manifest: &mut RunManifest) -> Result<(), CliError> {
    let path = out.join(name);
    fs::write(&path, text).map_err(|e| CliError::output(&path, e))?;
    manifest.add_output(name);
    Ok(())
}

pub fn ensure_dir(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::output(out, e))
}

fn warn(manifest: &mut RunManifest, token: &str, text: String) {
    eprintln!("warning[{token}]: {text}");
    manifest.warnings.push(text);
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let cfg = ScenarioConfig::parse(&read(path)?)?;
    cfg.validate()?;
    Ok(cfg)
}

fn parse_roi(text: &str) -> Result<Rect, CliError> {
    Ok(text.parse::<Rect>()?)
}

/// Resolved model inputs shared by plan, evaluate and render.
struct Model {
    config: Option<ScenarioConfig>,
    roi: Option<Rect>,
    alpha: f64,
}

impl Model {
    fn resolve(args: &ModelArgs) -> Result<Self, CliError> {
        let config = args.config.as_deref().map(load_config).transpose()?;
        let roi = match &args.roi {
            Some(text) => Some(parse_roi(text)?),
            None => config.as_ref().map(|c| c.roi),
        };
        let alpha = args.alpha.or(config.as_ref().map(|c| c.alpha)).unwrap_or(DEFAULT_ALPHA);
        if !(alpha > 2.0) || !alpha.is_finite() {
            return Err(CliError::param(format!("alpha must exceed 2, got {alpha}")));
        }
        Ok(Model { config, roi, alpha })
    }

    fn beta(&self, flag: Option<f64>) -> f64 {
        flag.or(self.config.as_ref().map(|c| c.beta)).unwrap_or(DEFAULT_BETA)
    }

    fn require_roi(&self) -> Result<Rect, CliError> {
        self.roi.ok_or_else(|| CliError::usage("no roi: pass --roi or --config"))
    }

    /// Config descent settings, or defaults scaled to the station density in
    /// the roi; flags override either.
    fn descent(&self, flags: &DescentArgs, stations: &StationSet, roi: &Rect) -> Result<DescentConfig, CliError> {
        let mut d = match &self.config {
            Some(c) => c.descent.clone(),
            None => DescentConfig::for_intensity(stations_in(stations, roi).len() as f64 / roi.area()),
        };
        if let Some(v) = flags.step_dt {
            d.step_dt = v;
        }
        if let Some(v) = flags.max_iters {
            d.max_iters = v;
        }
        if let Some(v) = flags.grad_tol {
            d.grad_tol = v;
        }
        if let Some(v) = flags.move_tol {
            d.move_tol = v;
        }
        if let Some(v) = flags.shrink_factor {
            d.shrink_factor = v;
        }
        if flags.no_multistart {
            d.multistart = false;
        }
        d.validate().map_err(|e| CliError::param(e.to_string()))?;
        Ok(d)
    }

    fn echo(&self, m: &mut RunManifest, roi: &Rect) {
        m.set("alpha", self.alpha);
        m.set("roi", roi);
    }
}

fn load_stations(path: &Path, alpha: f64) -> Result<StationSet, CliError> {
    let points = parse_station_list(&read(path)?)?;
    Ok(StationSet::new(points, alpha)?)
}

fn load_plan(path: &Path) -> Result<PlacementPlan, CliError> {
    PlacementPlan::parse(&read(path)?).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn echo_descent(m: &mut RunManifest, d: &DescentConfig) {
    m.set("descent.step_dt", d.step_dt);
    m.set("descent.max_iters", d.max_iters);
    m.set("descent.grad_tol", d.grad_tol);
    m.set("descent.move_tol", d.move_tol);
    m.set("descent.shrink_factor", d.shrink_factor);
    m.set("descent.multistart", d.multistart);
}

/// Every plan must carry the roi in use; with no roi given, the plans
/// supply it and must agree.
fn reconcile_roi(roi: Option<Rect>, plans: &[(PathBuf, PlacementPlan)]) -> Result<Option<Rect>, CliError> {
    let mut roi = roi;
    for (path, plan) in plans {
        match roi {
            None => roi = Some(plan.roi),
            Some(r) if r != plan.roi => {
                return Err(CliError::roi_mismatch(format!(
                    "{} was planned for roi {}, not {r}",
                    path.display(),
                    plan.roi
                )));
            }
            Some(_) => {}
        }
    }
    Ok(roi)
}

pub fn generate(args: &GenerateArgs) -> Result<RunManifest, CliError> {
    let mut cfg = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let mut m = RunManifest::new("generate");
    for line in cfg.to_kv_string().lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            m.set(k, v);
        }
    }
    if let Some(w) = cfg.edge_buffer_warning() {
        warn(&mut m, "W_EDGE_BUFFER", w);
    }
    ensure_dir(&args.out)?;
    let stations = m.timed("generate", || generate_ppp(&cfg.extent, cfg.lambda, cfg.seed, cfg.alpha))?;
    let comments = vec![
        format!("poisson field lambda={} extent={} seed={}", cfg.lambda, cfg.extent, cfg.seed),
        format!("rng {}", siteplan::scenario::RNG_ALGORITHM),
        format!("{} stations, {} in roi {}", stations.len(), stations_in(&stations, &cfg.roi).len(), cfg.roi),
    ];
    write(&args.out, STATIONS_FILE, &format_station_list(stations.positions(), &comments), &mut m)?;
    Ok(m)
}

pub fn plan_file_name(h: Heuristic) -> String {
    format!("plan_h{}.txt", h.id())
}

pub fn candidates_file_name(h: Heuristic) -> String {
    format!("candidates_h{}.txt", h.id())
}

pub fn plan(args: &PlanArgs) -> Result<RunManifest, CliError> {
    let model = Model::resolve(&args.model)?;
    let roi = model.require_roi()?;
    let heuristic = Heuristic::from_id(args.heuristic)
        .ok_or_else(|| CliError::usage(format!("unknown heuristic {}", args.heuristic)))?;
    let stations = load_stations(&args.stations, model.alpha)?;
    if stations.len() < 3 {
        return Err(CliError::stations(format!("need at least 3 stations, got {}", stations.len())));
    }
    let descent = model.descent(&args.descent, &stations, &roi)?;
    let k = args.k.or(model.config.as_ref().map(|c| c.k_new)).unwrap_or(DEFAULT_K);

    let mut m = RunManifest::new("plan");
    model.echo(&mut m, &roi);
    m.set("stations", args.stations.display());
    m.set("heuristic", heuristic.id());
    m.set("k", k);
    echo_descent(&mut m, &descent);
    ensure_dir(&args.out)?;

    let tri = m.timed("triangulate", || Triangulation::new(stations.positions().to_vec()))?;
    let candidates = m.timed("candidates", || candidate_minima(&tri, &stations, &roi, &descent));
    let plan = m.timed("place", || run_heuristic(heuristic, &stations, &roi, k, &descent))?;
    if plan.is_short() {
        warn(&mut m, "W_SHORT_PLAN", format!("only {} of {k} sites available in roi {roi}", plan.added.len()));
    }
    let stuck = candidates.iter().filter(|c| !c.converged).count();
    if stuck > 0 {
        warn(&mut m, "W_NOT_CONVERGED", format!("{stuck} of {} candidate descents did not converge", candidates.len()));
    }
    write(&args.out, &candidates_file_name(heuristic), &format_candidates(&candidates), &mut m)?;
    write(&args.out, &plan_file_name(heuristic), &plan.to_file_string(), &mut m)?;
    Ok(m)
}

pub fn evaluate(args: &EvaluateArgs) -> Result<RunManifest, CliError> {
    let model = Model::resolve(&args.model)?;
    let plans: Vec<(PathBuf, PlacementPlan)> =
        args.plan.iter().map(|p| Ok((p.clone(), load_plan(p)?))).collect::<Result<_, CliError>>()?;
    let roi =
        reconcile_roi(model.roi, &plans)?.ok_or_else(|| CliError::usage("no roi: pass --roi, --config or --plan"))?;
    let stations = load_stations(&args.stations, model.alpha)?;
    if stations.is_empty() {
        return Err(CliError::stations("station set is empty"));
    }
    let beta = model.beta(args.beta);
    let params = RadioParams::new(model.alpha, beta)?;
    let resolution = args.resolution.or(model.config.as_ref().map(|c| c.grid_resolution)).unwrap_or(DEFAULT_RESOLUTION);

    let mut m = RunManifest::new("evaluate");
    model.echo(&mut m, &roi);
    m.set("beta", beta);
    m.set("resolution", resolution);
    m.set("stations", args.stations.display());
    for (i, (path, _)) in plans.iter().enumerate() {
        m.set(&format!("plan.{}", i + 1), path.display());
    }
    ensure_dir(&args.out)?;

    let base = m.timed("evaluate.scenario0", || evaluate_metrics(&stations, &roi, &params, resolution))?;
    if plans.is_empty() {
        write(&args.out, REPORT_TEXT, &base.to_text(), &mut m)?;
        write(&args.out, REPORT_CSV, &base.to_csv(), &mut m)?;
        return Ok(m);
    }

    let mut others = Vec::new();
    for (path, plan) in &plans {
        let id = plan.heuristic.id();
        let mut short = format!("h{id}");
        let mut title = format!("Heuristic {id}");
        let dupes = others.iter().filter(|(s, _, _): &&(String, String, _)| s.starts_with(&short)).count();
        if dupes > 0 {
            short = format!("{short}_{}", dupes + 1);
            title = format!("{title} ({})", dupes + 1);
        }
        let augmented =
            stations.with_added(&plan.added).map_err(|e| CliError::stations(format!("{}: {e}", path.display())))?;
        let report =
            m.timed(&format!("evaluate.{short}"), || evaluate_metrics(&augmented, &roi, &params, resolution))?;
        others.push((short, title, report));
    }
    let table = Comparison::new(base, others)?;
    write(&args.out, REPORT_TEXT, &table.to_text_table(), &mut m)?;
    write(&args.out, REPORT_CSV, &table.to_csv(), &mut m)?;
    Ok(m)
}

pub fn parse_layers(text: &str) -> Result<Vec<Layer>, CliError> {
    let mut layers = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let layer = Layer::from_name(name).ok_or_else(|| CliError::usage(format!("unknown layer {name:?}")))?;
        if !layers.contains(&layer) {
            layers.push(layer);
        }
    }
    if layers.is_empty() {
        return Err(CliError::usage("no layers enabled"));
    }
    Ok(layers)
}

pub fn render(args: &RenderArgs) -> Result<RunManifest, CliError> {
    let layers = parse_layers(&args.layers)?;
    let model = Model::resolve(&args.model)?;
    let plans: Vec<(PathBuf, PlacementPlan)> =
        args.plan.iter().map(|p| Ok((p.clone(), load_plan(p)?))).collect::<Result<_, CliError>>()?;
    let roi =
        reconcile_roi(model.roi, &plans)?.ok_or_else(|| CliError::usage("no roi: pass --roi, --config or --plan"))?;
    let stations = load_stations(&args.stations, model.alpha)?;
    if stations.is_empty() {
        return Err(CliError::stations("station set is empty"));
    }
    let beta = model.beta(args.beta);
    let params = RadioParams::new(model.alpha, beta)?;
    let mut spec = RenderSpec::with_layers(&layers);
    if let Some(r) = args.resolution {
        spec.raster_resolution = r;
    }
    spec.validate()?;

    let mut m = RunManifest::new("render");
    model.echo(&mut m, &roi);
    m.set("beta", beta);
    m.set("layers", spec.layerset_name());
    m.set("raster_resolution", spec.raster_resolution);
    m.set("stations", args.stations.display());
    ensure_dir(&args.out)?;

    let needs_candidates = spec.has(Layer::Candidates) || spec.has(Layer::DescentPaths);
    let tri = if needs_candidates || spec.has(Layer::Triangulation) {
        Some(m.timed("triangulate", || Triangulation::new(stations.positions().to_vec()))?)
    } else {
        None
    };
    let candidates = match (&tri, needs_candidates) {
        (Some(t), true) => {
            let d = model.descent(&args.descent, &stations, &roi)?;
            echo_descent(&mut m, &d);
            Some(m.timed("candidates", || candidate_minima(t, &stations, &roi, &d)))
        }
        _ => None,
    };

    let scenes: Vec<(String, Option<&PlacementPlan>)> = if plans.is_empty() {
        vec![("scenario0".to_string(), None)]
    } else {
        plans
            .iter()
            .map(|(path, plan)| {
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "plan".into());
                (stem, Some(plan))
            })
            .collect()
    };
    for (name, plan) in scenes {
        let out = m.timed(&format!("render.{name}"), || {
            render_scenario(&stations, &roi, tri.as_ref(), candidates.as_deref(), plan, &params, &spec)
        })?;
        write(&args.out, &file_name(&name, &spec), &out.svg, &mut m)?;
    }
    Ok(m)
}

fn absorb(total: &mut RunManifest, part: RunManifest) {
    for o in part.outputs {
        total.add_output(&o);
    }
    total.timings.extend(part.timings);
    total.warnings.extend(part.warnings);
}

/// generate -> plan (1, 2) -> evaluate -> render, each stage reading the
/// previous stage's files.
pub fn reproduce(args: &ReproduceArgs) -> Result<RunManifest, CliError> {
    let mut cfg = ScenarioConfig::reference(args.seed);
    if let Some(r) = args.resolution {
        cfg.grid_resolution = r;
    }
    cfg.validate()?;
    let out = args.out.clone();
    ensure_dir(&out)?;

    let mut m = RunManifest::new("reproduce");
    for line in cfg.to_kv_string().lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            m.set(k, v);
        }
    }
    let config_path = out.join("config.txt");
    write(&out, "config.txt", &cfg.to_kv_string(), &mut m)?;

    absorb(&mut m, generate(&GenerateArgs { config: config_path.clone(), seed: None, out: out.clone() })?);
    let stations = out.join(STATIONS_FILE);
    let model = ModelArgs { config: Some(config_path), roi: None, alpha: None };

    let mut plan_paths = Vec::new();
    for h in [Heuristic::RankOnce, Heuristic::Rerank] {
        absorb(
            &mut m,
            plan(&PlanArgs {
                stations: stations.clone(),
                model: model.clone(),
                k: None,
                heuristic: h.id(),
                descent: DescentArgs::default(),
                out: out.clone(),
            })?,
        );
        plan_paths.push(out.join(plan_file_name(h)));
    }

    absorb(
        &mut m,
        evaluate(&EvaluateArgs {
            stations: stations.clone(),
            plan: plan_paths.clone(),
            model: model.clone(),
            beta: None,
            resolution: None,
            out: out.clone(),
        })?,
    );

    // reception areas before placement, the triangulation with its minima,
    // and reception areas after Heuristic 2
    let figures: [(&str, Vec<PathBuf>); 3] = [
        ("reception,roi,stations", vec![]),
        ("triangulation,descent,candidates,roi,stations", vec![]),
        ("reception,roi,stations,added", vec![plan_paths[1].clone()]),
    ];
    for (layers, plan) in figures {
        absorb(
            &mut m,
            render(&RenderArgs {
                stations: stations.clone(),
                plan,
                model: model.clone(),
                beta: None,
                layers: layers.to_string(),
                resolution: None,
                descent: DescentArgs::default(),
                out: out.clone(),
            })?,
        );
    }
    Ok(m)
}
