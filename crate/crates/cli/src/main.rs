use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use bieberbach::classify::{backward_fate, classify_grid_with, forward_fate, ClassifyConfig, Direction};
use bieberbach::grid::{Grid, Resolution, Window};
use bieberbach::henon::{ExactPoint, Point, SaddleId};
use bieberbach::julia::{boundary_compare, k_r_structure_check, overlay_params, Curves, ProbeFates, SetId};
use bieberbach::manifolds::{grow, manifold_invariance_check, Branch, GrowParams, Kind, Termination};
use bieberbach::render::{render, RenderStyle};
use bieberbach::verify::{mutant, run_suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "bieberbach", version, about = "Real dynamics of Bieberbach's cubic Hénon map")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every builtin claim; writes report.json and report.txt.
    Verify(VerifyArgs),
    /// Classify one exact point or every pixel of a grid.
    Classify(ClassifyArgs),
    /// Grow a stable or unstable manifold and export it.
    Manifold(ManifoldArgs),
    /// Render the forward basins as a P6 image.
    Render(RenderArgs),
    /// Raster one of the real Julia-type sets as a P4 image.
    Julia(JuliaArgs),
}

#[derive(Args)]
struct Orbit {
    #[arg(long, default_value_t = ClassifyConfig::default().budget)]
    budget: u32,
    #[arg(long = "escape-radius", default_value_t = ClassifyConfig::default().escape_radius)]
    escape_radius: f64,
}

impl Orbit {
    fn config(&self) -> ClassifyConfig {
        ClassifyConfig {
            budget: self.budget,
            escape_radius: self.escape_radius,
            ..ClassifyConfig::default()
        }
    }
}

#[derive(Args)]
struct Area {
    /// xmin,xmax,ymin,ymax
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window, default_value = "-1.3,1.3,-1.3,1.3")]
    window: Window,
    /// N or NxM
    #[arg(long, value_parser = parse_res, default_value = "512")]
    res: Resolution,
}

impl Area {
    fn grid(&self) -> anyhow::Result<Grid> {
        Ok(Grid::new(self.window, self.res)?)
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Bisection depth cap for interval certification.
    #[arg(long, default_value_t = 24)]
    depth: u32,
    /// Add a fault-injection claim to the run (repeatable).
    #[arg(long)]
    mutate: Vec<String>,
    /// Directory for report.json and report.txt.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Exact point "x,y", e.g. "sqrt5/2,-1/3".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["window", "res"])]
    point: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<Window>,
    #[arg(long, value_parser = parse_res)]
    res: Option<Resolution>,
    #[command(flatten)]
    orbit: Orbit,
    /// Classify backward orbits instead of forward ones.
    #[arg(long)]
    backward: bool,
    /// Grid mode: writes PATH (CSV) and PATH with extension .raw (one verdict code per pixel).
    #[arg(long, default_value = "fates.csv")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SaddleArg {
    Origin,
    Cycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Stable,
    Unstable,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct ManifoldArgs {
    #[arg(long, value_enum)]
    saddle: SaddleArg,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, value_enum, default_value = "plus")]
    branch: BranchArg,
    #[arg(long, default_value_t = GrowParams::default().max_step)]
    max_step: f64,
    #[arg(long, default_value_t = GrowParams::default().tube_tol)]
    tube_tol: f64,
    #[arg(long, default_value_t = GrowParams::default().max_domains)]
    max_domains: u32,
    /// CSV polyline; metadata goes next to it with extension .json.
    #[arg(long, default_value = "manifold.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    area: Area,
    #[command(flatten)]
    orbit: Orbit,
    #[arg(long = "overlay-manifolds")]
    overlay_manifolds: bool,
    #[arg(long, default_value = "basins.ppm")]
    out: PathBuf,
}

#[derive(Args)]
struct JuliaArgs {
    /// One of K_R, K_plus, K_minus, J_plus, J_minus, J_R, BoundaryPlus, BoundaryMinus.
    #[arg(long = "set", value_parser = parse_set, default_value = "K_R")]
    set: SetId,
    #[command(flatten)]
    area: Area,
    #[command(flatten)]
    orbit: Orbit,
    /// Also run the boundary and K_R structure checks and embed them in the metadata.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = 2.0)]
    boundary_tol: f64,
    #[arg(long, default_value_t = 3.0)]
    structure_tol: f64,
    /// P4 bitmap; metadata goes next to it with extension .json.
    #[arg(long, default_value = "set.pbm")]
    out: PathBuf,
}

fn parse_window(s: &str) -> Result<Window, String> {
    Window::parse(s).map_err(|e| e.to_string())
}

fn parse_res(s: &str) -> Result<Resolution, String> {
    Resolution::parse(s).map_err(|e| e.to_string())
}

fn parse_set(s: &str) -> Result<SetId, String> {
    SetId::parse(s).map_err(|e| e.to_string())
}

/// Errors that map to exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn json_string(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    for id in &a.mutate {
        mutant(id).map_err(|e| Usage(e.to_string()))?;
    }
    let cfg = SuiteConfig {
        seed: a.seed,
        samples: a.samples as usize,
        max_depth: a.depth,
        mutants: a.mutate,
    };
    let report = run_suite(&cfg)?;
    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    write(&a.out.join("report.json"), report.to_json())?;
    let text = report.to_text();
    write(&a.out.join("report.txt"), &text)?;
    print!("{text}");
    if report.has_failure() {
        return Ok(ExitCode::from(1));
    }
    if report.inconclusive > 0 {
        eprintln!("warning: {} claim(s) INCONCLUSIVE", report.inconclusive);
    }
    Ok(ExitCode::SUCCESS)
}

fn classify(a: ClassifyArgs) -> anyhow::Result<ExitCode> {
    let cfg = a.orbit.config();
    let dir = if a.backward { Direction::Backward } else { Direction::Forward };
    if let Some(text) = a.point {
        let q = ExactPoint::parse(&text).map_err(|e| Usage(e.to_string()))?;
        let p = Point::Exact(q);
        let fate = match dir {
            Direction::Forward => forward_fate(&p, &cfg),
            Direction::Backward => backward_fate(&p, &cfg),
        };
        println!("{fate}");
        println!("steps: {}", fate.steps_used);
        return Ok(ExitCode::SUCCESS);
    }
    let (Some(window), Some(res)) = (a.window, a.res) else {
        return Err(Usage("classify needs --point or both --window and --res".into()).into());
    };
    let grid = Grid::new(window, res)?;
    let fates = classify_grid_with(&grid, &cfg, dir, None)?;
    write(&a.out, fates.to_csv())?;
    write(&a.out.with_extension("raw"), fates.codes())?;
    Ok(ExitCode::SUCCESS)
}

fn manifold(a: ManifoldArgs) -> anyhow::Result<ExitCode> {
    let saddle = match a.saddle {
        SaddleArg::Origin => SaddleId::Origin,
        SaddleArg::Cycle => SaddleId::Cycle,
    };
    let kind = match a.kind {
        KindArg::Stable => Kind::Stable,
        KindArg::Unstable => Kind::Unstable,
    };
    let branch = match a.branch {
        BranchArg::Plus => Branch::Plus,
        BranchArg::Minus => Branch::Minus,
    };
    let params = GrowParams {
        max_step: a.max_step,
        tube_tol: a.tube_tol,
        max_domains: a.max_domains,
        ..GrowParams::default()
    };
    params.validate().map_err(|e| Usage(e.to_string()))?;
    let line = grow(saddle, kind, branch, &params)?;
    let check = manifold_invariance_check(&line);
    let mut meta = line.metadata();
    meta["invariance"] = serde_json::to_value(&check)?;
    write(&a.out, line.to_csv())?;
    write(&a.out.with_extension("json"), json_string(&meta))?;
    println!(
        "{}: {} vertices, termination {:?}, invariance deviation {:.3e}",
        line.label(),
        line.points.len(),
        line.termination,
        check.max_deviation
    );
    if !check.passed || line.termination == Termination::MaxPoints {
        eprintln!("error: growth did not complete cleanly; output is partial");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn render_cmd(a: RenderArgs) -> anyhow::Result<ExitCode> {
    let grid = a.area.grid()?;
    let overlay = a.overlay_manifolds.then(GrowParams::default);
    let img = render(&grid, &a.orbit.config(), &RenderStyle::default(), overlay.as_ref(), None)?;
    write(&a.out, img.to_ppm())?;
    Ok(ExitCode::SUCCESS)
}

fn julia(a: JuliaArgs) -> anyhow::Result<ExitCode> {
    let grid = a.area.grid()?;
    let probes = ProbeFates::compute(&grid, &a.orbit.config(), None)?;
    let set = probes.set(a.set);
    let mut meta = set.metadata();
    let mut ok = true;
    if a.check {
        let curves = Curves::grow(&overlay_params(&grid, &GrowParams::default()))?;
        let bc = boundary_compare(&probes, &curves, a.boundary_tol)?;
        let kr = k_r_structure_check(&probes, &curves, a.structure_tol);
        ok = bc.passed && kr.passed;
        println!("boundary comparison: {} (hausdorff {:.2} px)", pass(bc.passed), bc.hausdorff_pixels);
        println!("K_R structure: {}", pass(kr.passed));
        meta["boundary_comparison"] = serde_json::to_value(&bc)?;
        meta["k_r_structure"] = serde_json::to_value(&kr)?;
    }
    write(&a.out, set.bitmap.to_pbm())?;
    write(&a.out.with_extension("json"), json_string(&meta))?;
    println!("{}: {} pixels", a.set.name(), set.count);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Classify(a) => classify(a),
        Cmd::Manifold(a) => manifold(a),
        Cmd::Render(a) => render_cmd(a),
        Cmd::Julia(a) => julia(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
