//! Command-line front end.
//!
//! Reports go to the output stream and are byte-identical for identical
//! inputs and seed; timings go to the diagnostic stream.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{self, CertifyOptions, Mode};
use crate::cone;
use crate::curvature::{cone_total_curvature, TcOptions};
use crate::error::{Error, Result};
use crate::export;
use crate::graph::{EmbeddedGraph, GraphDocument};
use crate::spaceform::{gaussian, Point};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable overriding `--seed`.
pub const SEED_ENV: &str = "SOAPCERT_SEED";

#[derive(Debug, Parser)]
#[command(name = "soapcert", version, about = "Cone total curvature and soap-film regularity certificates for embedded graphs")]
struct Cli {
    /// Seed for the randomized parts (multistart directions, random apices).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Resample every edge at this arclength step before computing.
    #[arg(long, global = true)]
    h: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cone total curvature with per-edge and per-vertex breakdown.
    Tc(GraphArg),
    /// Densities and areas of the cone over the graph and of its development.
    Cone {
        #[command(flatten)]
        apex: ApexArg,
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Write the developed cone as CSV and optionally SVG.
    Develop {
        #[command(flatten)]
        apex: ApexArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Density bound at every apex of the hull grid, as CSV.
    DensityMap {
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Regularity certificates.
    Certify {
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        /// The graph is a simple closed curve; enables the 4π threshold.
        #[arg(long)]
        simple_curve: bool,
        /// Hull grid size for heuristic mode.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Gauss–Bonnet residuals at random apices inside the hull ball.
    GbCheck {
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[command(flatten)]
        graph: GraphArg,
    },
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Graph document (JSON).
    graph: PathBuf,
}

#[derive(Debug, Args)]
struct ApexArg {
    /// Apex in embedding coordinates, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    apex: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Heuristic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Heuristic => Mode::Heuristic,
        }
    }
}

fn pi_multiple(x: f64) -> String {
    format!("{x:.12} ({:.4}π)", x / PI)
}

fn fmt_coords(v: &DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c:.9}")).collect();
    format!("({})", parts.join(", "))
}

fn load(path: &Path, h: Option<f64>) -> Result<EmbeddedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidArgument(format!("cannot read {}: {e}", path.display()))
    })?;
    let doc: GraphDocument = serde_json::from_str(&text)?;
    let graph = crate::graph::load_graph(&doc)?;
    match h {
        Some(h) if !(h > 0.0 && h.is_finite()) => {
            Err(Error::InvalidArgument(format!("sampling step must be positive, got {h}")))
        }
        Some(h) => graph.resample_arclength(h),
        None => Ok(graph),
    }
}

fn parse_apex(graph: &EmbeddedGraph, text: &str, tol: f64) -> Result<Point> {
    let coords = text
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidArgument(format!("apex must be comma-separated numbers, got {text:?}")))?;
    graph.space.point_with_tol(&coords, tol)
}

fn tolerance_of(path: &Path) -> f64 {
    std::fs::read_to_string(path)
        .ok()
        .and_then(|t| serde_json::from_str::<GraphDocument>(&t).ok())
        .and_then(|d| d.tolerance)
        .unwrap_or(crate::graph::DEFAULT_TOLERANCE)
}

struct Context<'a> {
    seed: u64,
    h: Option<f64>,
    report: String,
    err: &'a mut dyn Write,
    started: Instant,
}

impl Context<'_> {
    fn header(&mut self, command: &str, path: &Path, graph: &EmbeddedGraph) {
        let s = &graph.space;
        let h = self.h.map_or("native".to_string(), |h| format!("{h}"));
        let _ = writeln!(self.report, "soapcert {command}");
        let _ = writeln!(self.report, "input: {}", path.display());
        let _ = writeln!(
            self.report,
            "space: {:?} dim={} curv={}",
            s.model(),
            s.dim(),
            s.curv()
        );
        let _ = writeln!(self.report, "sampling h: {h}");
        let _ = writeln!(self.report, "seed: {}", self.seed);
        let _ = writeln!(
            self.report,
            "graph: {} vertices, {} edges, {} samples, length {:.12}",
            graph.vertices.len(),
            graph.edges.len(),
            graph.edges.iter().map(|e| e.len()).sum::<usize>(),
            graph.total_length()
        );
        self.report.push('\n');
    }

    fn timing(&mut self, label: &str) {
        let _ = writeln!(self.err, "time {label}: {:.3} s", self.started.elapsed().as_secs_f64());
    }

    fn tc_options(&self) -> TcOptions {
        TcOptions {
            seed: self.seed,
            ..TcOptions::default()
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status. The report is written to `out` only on success.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = if e.use_stderr() { e.render().to_string() } else { e.to_string() };
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let seed = match std::env::var(SEED_ENV) {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(s) => s,
            Err(_) => {
                let _ = writeln!(err, "error: {SEED_ENV} must be an unsigned integer, got {v:?}");
                return EXIT_VALIDATION;
            }
        },
        Err(_) => cli.seed,
    };
    let mut ctx = Context {
        seed,
        h: cli.h,
        report: String::new(),
        err,
        started: Instant::now(),
    };
    match dispatch(&cli.command, &mut ctx) {
        Ok(()) => {
            let _ = out.write_all(ctx.report.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}

fn dispatch(command: &Command, ctx: &mut Context) -> Result<()> {
    match command {
        Command::Tc(g) => cmd_tc(ctx, &g.graph),
        Command::Cone { apex, graph } => cmd_cone(ctx, &graph.graph, &apex.apex),
        Command::Develop {
            apex,
            out,
            svg,
            graph,
        } => cmd_develop(ctx, &graph.graph, &apex.apex, out, svg.as_deref()),
        Command::DensityMap { grid, out, graph } => cmd_density_map(ctx, &graph.graph, *grid, out),
        Command::Certify {
            mode,
            simple_curve,
            grid,
            graph,
        } => cmd_certify(
            ctx,
            &graph.graph,
            CertifyOptions {
                mode: (*mode).into(),
                simple_curve: *simple_curve,
                grid_n: *grid,
            },
        ),
        Command::GbCheck { trials, graph } => cmd_gb_check(ctx, &graph.graph, *trials),
    }
}

fn cmd_tc(ctx: &mut Context, path: &Path) -> Result<()> {
    let graph = load(path, ctx.h)?;
    ctx.header("tc", path, &graph);
    let tc = cone_total_curvature(&graph, &ctx.tc_options())?;
    ctx.timing("tc");
    let r = &mut ctx.report;
    let _ = writeln!(r, "[edges]");
    for e in &tc.per_edge {
        let _ = writeln!(r, "{}: {}", e.edge, pi_multiple(e.integral));
    }
    let _ = writeln!(r, "\n[vertices]");
    for v in &tc.per_vertex {
        let _ = writeln!(r, "{}: {} argmax {}", v.vertex, pi_multiple(v.tc), fmt_coords(&v.argmax_dir.vec));
    }
    let _ = writeln!(r, "\n[total]");
    let _ = writeln!(r, "edge sum: {}", pi_multiple(tc.edge_sum()));
    let _ = writeln!(r, "vertex sum: {}", pi_multiple(tc.vertex_sum()));
    let _ = writeln!(r, "TC: {}", pi_multiple(tc.total));
    Ok(())
}

fn cmd_cone(ctx: &mut Context, path: &Path, apex: &str) -> Result<()> {
    let graph = load(path, ctx.h)?;
    let p = parse_apex(&graph, apex, tolerance_of(path))?;
    ctx.header("cone", path, &graph);
    let dev = cone::develop_cone(&graph, &p)?;
    let theta = cone::ambient_cone_density(&graph, &p)?;
    let area = cone::ambient_cone_area(&graph, &p)?;
    let gb = cone::gauss_bonnet_terms(&graph, &p, &dev)?;
    ctx.timing("cone");
    let r = &mut ctx.report;
    let _ = writeln!(r, "apex: {}", fmt_coords(p.coords()));
    let _ = writeln!(r, "Theta(C,p): {:.12}", theta);
    let _ = writeln!(r, "Theta(C^,p): {:.12}", dev.hat_density);
    let _ = writeln!(r, "Area(C): {:.12}", area);
    let _ = writeln!(r, "Area(C^): {:.12}", dev.hat_area);
    let _ = writeln!(r, "\n[gauss-bonnet]");
    let _ = writeln!(r, "2pi Theta(C^,p): {}", pi_multiple(gb.density_term));
    let _ = writeln!(r, "K Area(C^): {:.12}", gb.area_term);
    let _ = writeln!(r, "boundary curvature: {:.12}", gb.boundary_term);
    let _ = writeln!(r, "vertex angles: {:.12}", gb.vertex_term);
    let _ = writeln!(r, "residual: {:.6e}", gb.residual());
    Ok(())
}

fn cmd_develop(ctx: &mut Context, path: &Path, apex: &str, out: &Path, svg: Option<&Path>) -> Result<()> {
    let graph = load(path, ctx.h)?;
    let p = parse_apex(&graph, apex, tolerance_of(path))?;
    ctx.header("develop", path, &graph);
    let dev = cone::develop_cone(&graph, &p)?;
    let csv = export::development_csv(&dev);
    let drawing = svg.map(|_| export::development_svg(&dev));
    export::write_file(out, &csv)?;
    if let (Some(path), Some(text)) = (svg, drawing) {
        export::write_file(path, &text)?;
    }
    ctx.timing("develop");
    let r = &mut ctx.report;
    let _ = writeln!(r, "apex: {}", fmt_coords(p.coords()));
    let _ = writeln!(r, "Theta(C^,p): {:.12}", dev.hat_density);
    let _ = writeln!(r, "Area(C^): {:.12}", dev.hat_area);
    let _ = writeln!(r, "csv: {}", out.display());
    if let Some(s) = svg {
        let _ = writeln!(r, "svg: {}", s.display());
    }
    Ok(())
}

fn cmd_density_map(ctx: &mut Context, path: &Path, grid: usize, out: &Path) -> Result<()> {
    let graph = load(path, ctx.h)?;
    ctx.header("density-map", path, &graph);
    let tc = cone_total_curvature(&graph, &ctx.tc_options())?;
    let hull = certify::hull_approx(&graph, grid)?;
    let mut csv = String::new();
    let dims = graph.space.ambient_dim();
    let cols: Vec<String> = (0..dims).map(|i| format!("x{i}")).collect();
    let _ = writeln!(csv, "{},bound", cols.join(","));
    let mut skipped = 0;
    let mut best = f64::INFINITY;
    for p in &hull.grid {
        match certify::density_bound(&graph, p, &tc) {
            Ok(b) => {
                best = best.min(b);
                let xs: Vec<String> = p.coords().iter().map(|c| format!("{c:.12e}")).collect();
                let _ = writeln!(csv, "{},{b:.12e}", xs.join(","));
            }
            Err(Error::ApexOnGraph { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    export::write_file(out, &csv)?;
    ctx.timing("density-map");
    let r = &mut ctx.report;
    let _ = writeln!(r, "TC: {}", pi_multiple(tc.total));
    let _ = writeln!(r, "hull center: {}", fmt_coords(hull.center.coords()));
    let _ = writeln!(r, "hull radius: {:.12}", hull.radius);
    for w in &hull.warnings {
        let _ = writeln!(r, "warning: {w}");
    }
    let _ = writeln!(r, "grid points: {} ({} on the graph skipped)", hull.grid.len(), skipped);
    let _ = writeln!(r, "smallest bound: {best:.12}");
    let _ = writeln!(r, "csv: {}", out.display());
    Ok(())
}

fn cmd_certify(ctx: &mut Context, path: &Path, opts: CertifyOptions) -> Result<()> {
    let graph = load(path, ctx.h)?;
    ctx.header("certify", path, &graph);
    let tc = cone_total_curvature(&graph, &ctx.tc_options())?;
    let certs = certify::certify(&graph, &tc, &opts)?;
    ctx.timing("certify");
    let r = &mut ctx.report;
    let _ = writeln!(r, "TC: {}", pi_multiple(tc.total));
    let _ = writeln!(r, "3pi: {}", pi_multiple(3.0 * PI));
    let _ = writeln!(r, "2pi C_T: {}", pi_multiple(2.0 * PI * certify::c_t()));
    let _ = writeln!(r, "4pi: {}", pi_multiple(4.0 * PI));
    for c in &certs {
        let _ = writeln!(r, "\n[certificate]");
        let _ = writeln!(r, "verdict: {}", c.verdict);
        let _ = writeln!(r, "mode: {}", c.mode);
        let _ = writeln!(r, "tc_total: {}", pi_multiple(c.tc_total));
        let _ = writeln!(r, "threshold: {}", pi_multiple(c.threshold));
        let _ = writeln!(r, "cone_area_term: {:.12}", c.cone_area_term);
        let _ = writeln!(r, "margin: {:.12}", c.margin);
        match &c.extremal_apex {
            Some(p) => {
                let _ = writeln!(r, "extremal_apex: {}", fmt_coords(p.coords()));
            }
            None => {
                let _ = writeln!(r, "extremal_apex: none");
            }
        }
        let _ = writeln!(r, "notes: {}", if c.notes.is_empty() { "-" } else { &c.notes });
    }
    Ok(())
}

/// Uniform random point of the geodesic ball, at least `clearance` from
/// every sample.
fn random_ball_apex(graph: &EmbeddedGraph, hull: &certify::HullApprox, rng: &mut ChaCha8Rng, clearance: f64) -> Point {
    let space = &graph.space;
    let basis = space.tangent_basis(&hull.center);
    loop {
        let dir: Vec<f64> = (0..basis.len()).map(|_| gaussian(rng)).collect();
        let norm = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let len = hull.radius * rng.gen::<f64>().powf(1.0 / basis.len() as f64);
        let mut v = DVector::zeros(space.ambient_dim());
        for (b, c) in basis.iter().zip(&dir) {
            v += b * (len * c / norm);
        }
        let p = space.exp_unchecked(&hull.center, &v);
        if graph
            .samples()
            .all(|q| space.dist(&p, q).map(|d| d > clearance).unwrap_or(false))
        {
            return p;
        }
    }
}

fn cmd_gb_check(ctx: &mut Context, path: &Path, trials: usize) -> Result<()> {
    let graph = load(path, ctx.h)?;
    ctx.header("gb-check", path, &graph);
    let hull = certify::hull_approx(&graph, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let clearance = 0.05 * hull.radius;
    let mut rows = Vec::with_capacity(trials);
    for _ in 0..trials {
        let p = random_ball_apex(&graph, &hull, &mut rng, clearance);
        let res = cone::gauss_bonnet_residual(&graph, &p)?;
        rows.push((p, res));
    }
    ctx.timing("gb-check");
    let r = &mut ctx.report;
    let _ = writeln!(r, "trials: {trials}");
    for (i, (p, res)) in rows.iter().enumerate() {
        let _ = writeln!(r, "{i}: apex {} residual {res:.6e}", fmt_coords(p.coords()));
    }
    let max = rows.iter().map(|x| x.1).fold(0.0, f64::max);
    let mean = if rows.is_empty() { 0.0 } else { rows.iter().map(|x| x.1).sum::<f64>() / rows.len() as f64 };
    let _ = writeln!(r, "max residual: {max:.6e}");
    let _ = writeln!(r, "mean residual: {mean:.6e}");
    Ok(())
}
