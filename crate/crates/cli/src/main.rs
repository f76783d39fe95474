//! `sflat`: verification suites and data export for flat spacetimes with
//! singular lines.
//!
//! Exit codes: 0 when every selected check passes, 1 when a check fails or
//! a computation errors, 2 for usage errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use singular_flat::causality::{
    btz_causal_future, causal_relation, cone_sections, validate_causal, MeasureConfig, PiecewiseCurve, VolumeSampler,
    DEFAULT_SECANT_TOL,
};
use singular_flat::developing::{develop, CoverPoint, Holonomy};
use singular_flat::extensions::{adjoin_btz, mixed_extension_chain, remove_btz, TubeChart};
use singular_flat::model::TubeRegion;
use singular_flat::modular::{
    build_complex, polyhedral_cauchy_surface, random_sector_ray, ray_intersection_count, relation_residuals,
    special_rays,
};
use singular_flat::surfaces::{
    assemble_cauchy, extend_boundary_cap, extend_boundary_complete, BoundaryCurve, GraphSurface, SamplingGrid,
    SurfaceHeader, SurfaceKind, CERTIFICATE_MIN_RATIO,
};
use singular_flat::verify::{chain_statistics, run_suites, Suite, VerifyConfig};
use singular_flat::{ConeAngle, Exec, ModelPoint};

#[derive(Parser, Debug)]
#[command(
    name = "sflat",
    version,
    about = "Flat 2+1 spacetimes with massive and extreme BTZ singular lines"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Override the tolerance of residual checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Grid resolution for surface scans and exported samples.
    #[arg(long, global = true, default_value_t = 256)]
    grid: usize,
    /// Leave wall-clock timings out of reports.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

impl GlobalOpts {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and print a JSON report.
    Verify {
        /// lorentz, model, developing, causality, surfaces, extensions, modular or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Monte Carlo sample size for volume time.
        #[arg(long, default_value_t = 1_000_000)]
        volume_samples: usize,
    },
    #[command(subcommand)]
    Causal(CausalCmd),
    #[command(subcommand)]
    Develop(DevelopCmd),
    #[command(subcommand)]
    Surface(SurfaceCmd),
    #[command(subcommand)]
    Extend(ExtendCmd),
    #[command(subcommand)]
    Modular(ModularCmd),
    /// Sample future cones near a singular line and on it.
    Conefield {
        /// Cone angle; 0 is the BTZ model space.
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.1, 0.01, 0.001, 0.0])]
        radii: Vec<f64>,
        /// Null generators per radius.
        #[arg(long, default_value_t = 32)]
        n: usize,
        /// Also write the generators as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CausalCmd {
    /// Validate a sampled curve read from JSON `{alpha, points: [[s, time, r, θ], ...]}`.
    Check {
        #[arg(long)]
        curve: PathBuf,
        /// Secant tolerance.
        #[arg(long, default_value_t = DEFAULT_SECANT_TOL)]
        secant_tol: f64,
    },
    /// Whether `q` lies in the causal future of `p`.
    Jplus {
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// `time,r,θ`
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Monte Carlo volume time in a finite tube.
    Volumetime {
        /// `time,r,θ`; repeat for several points.
        #[arg(long = "point", required = true, allow_hyphen_values = true)]
        points: Vec<String>,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        end: f64,
        #[arg(long, default_value_t = 1.0)]
        weight_volume: f64,
        #[arg(long, default_value_t = 1.0)]
        weight_line: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum DevelopCmd {
    /// CSV rows `tau,r,theta,t,x,y` of developed random cover points.
    Sample {
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        r_max: f64,
        /// Number of turns of the universal cover to sample.
        #[arg(long, default_value_t = 1.0)]
        turns: f64,
    },
}

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    /// Spacelike, completeness and divergence checks of a surface file.
    Check {
        #[arg(long)]
        surface: PathBuf,
    },
    /// Complete extension of a boundary curve, avoiding the BTZ line.
    Extend {
        #[arg(long)]
        boundary: PathBuf,
        #[arg(long = "R", default_value_t = 1.0)]
        radius: f64,
    },
    /// Spacelike cap of a boundary curve crossing the BTZ line.
    Cap {
        #[arg(long)]
        boundary: PathBuf,
        #[arg(long = "R", default_value_t = 1.0)]
        radius: f64,
    },
    /// Glue an inner piece to an outer annulus.
    Assemble {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ExtendCmd {
    /// Adjoin the BTZ line to a regular tube chart.
    Adjoin {
        #[arg(long)]
        chart: PathBuf,
    },
    /// Remove the BTZ line, replacing the Cauchy surface inside the tube.
    Remove {
        #[arg(long)]
        chart: PathBuf,
        #[arg(long)]
        boundary: PathBuf,
    },
    /// The chain M0 ⊂ M1 ⊂ M2 ⊂ M3 with its membership checks.
    ExampleChain {
        #[arg(long, default_value_t = 10_000)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ModularCmd {
    /// The suspension complex as JSON.
    Build,
    /// The polyhedral Cauchy surface at `t = t0`.
    Surface {
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        /// Also write the triangle soup as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Intersection counts of rays with the polyhedral surface.
    Rays {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
    },
}

/// A usage problem discovered after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<Usage>().is_some() { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    if g.grid < 4 {
        return usage("--grid must be at least 4");
    }
    if let Some(t) = g.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return usage("--tol must be a finite non-negative number");
        }
    }
    match &cli.command {
        Command::Verify { suite, volume_samples } => verify(g, suite, *volume_samples),
        Command::Causal(c) => causal(g, c),
        Command::Develop(DevelopCmd::Sample { alpha, n, r_max, turns }) => {
            develop_sample(g, *alpha, *n, *r_max, *turns)
        }
        Command::Surface(c) => surface(g, c),
        Command::Extend(c) => extend(g, c),
        Command::Modular(c) => modular(g, c),
        Command::Conefield { alpha, radii, n, csv } => conefield(g, *alpha, radii, *n, csv.as_deref()),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn emit_json<T: Serialize>(g: &GlobalOpts, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_output(g.out.as_deref(), &text)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cone_angle(alpha: f64) -> Result<ConeAngle> {
    ConeAngle::new(alpha).or_else(|e| usage(e.to_string()))
}

fn parse_point(alpha: ConeAngle, s: &str) -> Result<ModelPoint> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .or_else(|_| usage(format!("point `{s}` must be `time,r,theta`")))?;
    let [time, r, theta] = v[..] else {
        return usage(format!("point `{s}` must have three coordinates"));
    };
    ModelPoint::new(alpha, time, r, theta).or_else(|e| usage(e.to_string()))
}

fn verify(g: &GlobalOpts, suite: &str, volume_samples: usize) -> Result<bool> {
    let Some(suites) = Suite::parse(suite) else {
        return usage(format!("unknown suite `{suite}`"));
    };
    let cfg = VerifyConfig {
        seed: g.seed,
        grid: g.grid,
        tol: g.tol,
        timing: !g.no_timing,
        exec: g.exec(),
        volume_samples,
    };
    let report = run_suites(&suites, &cfg);
    emit_json(g, &report)?;
    Ok(report.passed)
}

#[derive(Deserialize)]
struct CurveFile {
    alpha: ConeAngle,
    points: Vec<[f64; 4]>,
}

fn causal(g: &GlobalOpts, cmd: &CausalCmd) -> Result<bool> {
    match cmd {
        CausalCmd::Check { curve, secant_tol } => {
            let file: CurveFile = read_json(curve)?;
            let coords: Vec<(f64, f64, f64, f64)> = file.points.iter().map(|p| (p[0], p[1], p[2], p[3])).collect();
            let curve = PiecewiseCurve::from_coords(file.alpha, &coords)?;
            let verdict = validate_causal(&curve, g.tol.unwrap_or(*secant_tol));
            emit_json(g, &json!({ "samples": coords.len(), "verdict": verdict }))?;
            Ok(verdict.is_valid())
        }
        CausalCmd::Jplus { alpha, p, q } => {
            let alpha = cone_angle(*alpha)?;
            let (p, q) = (parse_point(alpha, p)?, parse_point(alpha, q)?);
            let relation = causal_relation(&p, &q)?;
            let membership = if alpha.is_btz() {
                Some(btz_causal_future(&p, &q)?)
            } else {
                None
            };
            emit_json(
                g,
                &json!({ "p": p, "q": q, "relation": relation, "membership": membership }),
            )?;
            Ok(true)
        }
        CausalCmd::Volumetime {
            points,
            alpha,
            radius,
            start,
            end,
            weight_volume,
            weight_line,
            samples,
        } => {
            let alpha = cone_angle(*alpha)?;
            let region = TubeRegion::new(alpha, *radius, Some(*start), Some(*end)).or_else(|e| usage(e.to_string()))?;
            let cfg =
                MeasureConfig::new(*weight_volume, *weight_line, *samples, g.seed).or_else(|e| usage(e.to_string()))?;
            let sampler = VolumeSampler::with_exec(&region, &cfg, g.exec())?;
            let mut ok = true;
            let mut rows = Vec::new();
            for s in points {
                let p = parse_point(alpha, s)?;
                let (past, future) = sampler.counts(&p);
                let row = match sampler.evaluate(&p) {
                    Ok(r) => json!({ "point": p, "report": r, "past_count": past, "future_count": future }),
                    Err(e) => {
                        ok = false;
                        json!({ "point": p, "error": e.to_string(), "past_count": past, "future_count": future })
                    }
                };
                rows.push(row);
            }
            emit_json(g, &json!({ "region": region, "config": cfg, "points": rows }))?;
            Ok(ok)
        }
    }
}

fn develop_sample(g: &GlobalOpts, alpha: f64, n: usize, r_max: f64, turns: f64) -> Result<bool> {
    let alpha = cone_angle(alpha)?;
    if !(r_max > 0.0 && r_max.is_finite() && turns > 0.0 && turns.is_finite()) {
        return usage("--r-max and --turns must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["tau", "r", "theta", "t", "x", "y"])?;
    for _ in 0..n {
        let p = CoverPoint::new(
            rng.random_range(-1.0..1.0),
            r_max * (1.0 - rng.random::<f64>()),
            rng.random_range(0.0..std::f64::consts::TAU * turns),
        )?;
        let d = develop(alpha, &p);
        w.serialize((p.time, p.r, p.theta, d.t, d.x, d.y))?;
    }
    let text = String::from_utf8(w.into_inner()?)?;
    write_output(g.out.as_deref(), &text)?;
    Ok(true)
}

/// Companion CSV of a surface file.
fn csv_path(json: &Path) -> PathBuf {
    json.with_extension("csv")
}

fn load_surface(path: &Path) -> Result<GraphSurface> {
    let header: SurfaceHeader = read_json(path)?;
    let triples = if header.kind == SurfaceKind::Grid {
        let csv = csv_path(path);
        let mut rd = csv::Reader::from_path(&csv).with_context(|| format!("reading {}", csv.display()))?;
        Some(
            rd.deserialize()
                .collect::<std::result::Result<Vec<(f64, f64, f64)>, _>>()?,
        )
    } else {
        None
    };
    Ok(GraphSurface::from_parts(&header, triples.as_deref())?)
}

/// Write a surface as JSON header to `--out` and its samples `(r, θ, τ)`
/// next to it; without `--out` only the header is printed.
fn save_surface(g: &GlobalOpts, s: &GraphSurface) -> Result<()> {
    let Some(out) = g.out.as_deref() else {
        return emit_json(g, &s.header());
    };
    emit_json(g, &s.header())?;
    let mut w = csv::Writer::from_path(csv_path(out))?;
    w.write_record(["r", "theta", "tau"])?;
    let n = g.grid;
    let r_lo = if s.inner_radius > 0.0 {
        s.inner_radius
    } else if s.punctured || s.field.min_radius() > 0.0 {
        s.radius / n as f64
    } else {
        0.0
    };
    for i in 0..n {
        let r = r_lo + (s.radius - r_lo) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let th = std::f64::consts::TAU * j as f64 / n as f64;
            w.serialize((r, th, s.height(r, th)?))?;
        }
    }
    Ok(w.flush()?)
}

fn surface_summary(g: &GlobalOpts, s: &GraphSurface) -> Result<(serde_json::Value, bool)> {
    let spacelike = s.spacelike_check(&SamplingGrid::uniform(g.grid, g.grid), g.exec())?;
    let (certificate, diverges) = if s.punctured && s.inner_radius == 0.0 {
        let grid = SamplingGrid::geometric(g.grid, g.grid.min(64), CERTIFICATE_MIN_RATIO);
        (
            s.completeness_certificate(&grid, g.exec())?,
            Some(s.divergence_check(32)?),
        )
    } else {
        (None, None)
    };
    let ok = spacelike.value > 0.0;
    Ok((
        json!({
            "header": s.header(),
            "spacelike": ok,
            "min_delta": spacelike,
            "completeness_certificate": certificate,
            "radial_length_diverges": diverges,
        }),
        ok,
    ))
}

fn surface(g: &GlobalOpts, cmd: &SurfaceCmd) -> Result<bool> {
    match cmd {
        SurfaceCmd::Check { surface } => {
            let s = load_surface(surface)?;
            let (summary, ok) = surface_summary(g, &s)?;
            emit_json(g, &summary)?;
            Ok(ok)
        }
        SurfaceCmd::Extend { boundary, radius } => {
            let b: BoundaryCurve = read_json(boundary)?;
            let s = extend_boundary_complete(&b, *radius).or_else(|e| usage(e.to_string()))?;
            save_surface(g, &s)?;
            let (summary, ok) = surface_summary(g, &s)?;
            if g.out.is_some() {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            }
            Ok(ok)
        }
        SurfaceCmd::Cap { boundary, radius } => {
            let b: BoundaryCurve = read_json(boundary)?;
            let grid = SamplingGrid::uniform(2 * g.grid, 2 * g.grid);
            match extend_boundary_cap(&b, *radius, &grid, g.exec()) {
                Ok((s, min)) => {
                    save_surface(g, &s)?;
                    if g.out.is_some() {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({ "header": s.header(), "min_delta": min }))?
                        );
                    }
                    Ok(true)
                }
                Err(singular_flat::Error::CertificationFailure(msg)) => {
                    eprintln!("certification failed: {msg}");
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        SurfaceCmd::Assemble { outer, inner } => {
            let (outer, inner) = (load_surface(outer)?, load_surface(inner)?);
            let grid = SamplingGrid::uniform(g.grid, g.grid);
            let c = assemble_cauchy(&outer, &inner, &grid, g.exec())?;
            emit_json(g, &c)?;
            Ok(c.inner_spacelike && c.outer_spacelike)
        }
    }
}

/// Chart file; the holonomy defaults to the model holonomy of the angle.
#[derive(Deserialize)]
struct ChartFile {
    angle: ConeAngle,
    radius: f64,
    #[serde(default)]
    start: Option<f64>,
    #[serde(default)]
    end: Option<f64>,
    #[serde(default)]
    has_singular_line: bool,
    #[serde(default)]
    holonomy: Option<Holonomy>,
}

fn read_chart(path: &Path) -> Result<TubeChart> {
    let f: ChartFile = read_json(path)?;
    let holonomy = f.holonomy.unwrap_or_else(|| Holonomy::for_angle(f.angle));
    TubeChart::new(f.angle, f.radius, f.start, f.end, f.has_singular_line, holonomy).or_else(|e| usage(e.to_string()))
}

fn extend(g: &GlobalOpts, cmd: &ExtendCmd) -> Result<bool> {
    match cmd {
        ExtendCmd::Adjoin { chart } => match adjoin_btz(&read_chart(chart)?) {
            Ok(c) => {
                emit_json(g, &c)?;
                Ok(true)
            }
            Err(e @ singular_flat::Error::NotBtzExtendable(_)) => {
                eprintln!("{e}");
                Ok(false)
            }
            Err(e) => Err(e.into()),
        },
        ExtendCmd::Remove { chart, boundary } => {
            let chart = read_chart(chart)?;
            let b: BoundaryCurve = read_json(boundary)?;
            let (regular, s) = remove_btz(&chart, &b)?;
            let grid = SamplingGrid::geometric(g.grid, g.grid.min(64), CERTIFICATE_MIN_RATIO);
            let certificate = s.completeness_certificate(&grid, g.exec())?;
            emit_json(
                g,
                &json!({ "chart": regular, "surface": s.header(), "completeness_certificate": certificate }),
            )?;
            Ok(certificate.is_some_and(|c| c >= 1.0))
        }
        ExtendCmd::ExampleChain { points } => {
            let chain = mixed_extension_chain();
            let regions: Vec<_> = chain
                .iter()
                .map(|m| json!({ "name": m.name(), "description": m.region.description() }))
                .collect();
            let (non_monotone, misclassified) = chain_statistics(*points, g.seed)?;
            emit_json(
                g,
                &json!({
                    "base_point": chain[0].base_point,
                    "regions": regions,
                    "random_points": points,
                    "non_monotone": non_monotone,
                    "misclassified_examples": misclassified,
                }),
            )?;
            Ok(non_monotone == 0 && misclassified == 0)
        }
    }
}

fn modular(g: &GlobalOpts, cmd: &ModularCmd) -> Result<bool> {
    let complex = build_complex()?;
    match cmd {
        ModularCmd::Build => {
            let (s2, st3) = relation_residuals();
            emit_json(
                g,
                &json!({ "relation_residuals": { "s_squared": s2, "st_cubed": st3 }, "complex": complex }),
            )?;
            Ok(true)
        }
        ModularCmd::Surface { t0, csv } => {
            let s = polyhedral_cauchy_surface(&complex, *t0).or_else(|e| usage(e.to_string()))?;
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["triangle", "vertex", "t", "x", "y"])?;
                for (k, (tri, labels)) in s.triangles.iter().zip(&s.labels).enumerate() {
                    for (v, l) in tri.iter().zip(labels) {
                        w.serialize((k, l.label(), v.t, v.x, v.y))?;
                    }
                }
                w.flush()?;
            }
            emit_json(
                g,
                &json!({
                    "t0": s.t0,
                    "vertices": s.vertex_count,
                    "edges": s.edge_count,
                    "faces": s.face_count,
                    "euler_characteristic": s.euler_characteristic(),
                    "cone_points": s.cone_points,
                    "cone_angle_sum": s.cone_angle_sum(),
                    "curvature_sum": s.curvature_sum(),
                    "edge_length_residual": s.edge_length_residual,
                    "triangles": s.triangles,
                }),
            )?;
            Ok(true)
        }
        ModularCmd::Rays { n, t0 } => {
            let s = polyhedral_cauchy_surface(&complex, *t0).or_else(|e| usage(e.to_string()))?;
            let counts = g.exec().map_range(*n, |i| {
                let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
                rng.set_stream(i as u64);
                ray_intersection_count(&s, &random_sector_ray(&mut rng))
            });
            let mut histogram = std::collections::BTreeMap::<usize, usize>::new();
            for c in &counts {
                *histogram.entry(*c).or_default() += 1;
            }
            let special: Vec<_> = special_rays()
                .into_iter()
                .map(|(name, r)| json!({ "ray": name, "count": ray_intersection_count(&s, &r) }))
                .collect();
            let ok = counts.iter().all(|&c| c == 1) && special.iter().all(|v| v["count"] == 1);
            emit_json(
                g,
                &json!({ "seed": g.seed, "t0": t0, "rays": n, "histogram": histogram, "special": special, "all_once": ok }),
            )?;
            Ok(ok)
        }
    }
}

fn conefield(g: &GlobalOpts, alpha: f64, radii: &[f64], n: usize, csv: Option<&Path>) -> Result<bool> {
    let alpha = cone_angle(alpha)?;
    let sections = cone_sections(alpha, radii, n).or_else(|e| usage(e.to_string()))?;
    if let Some(path) = csv {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["r", "generator", "dtime", "dr", "dtheta"])?;
        for s in &sections {
            for (i, v) in s.generators.iter().enumerate() {
                w.serialize((s.r, i, v[0], v[1], v[2]))?;
            }
        }
        w.flush()?;
    }
    let rows: Vec<_> = sections
        .iter()
        .map(|s| {
            json!({
                "r": s.r,
                "on_line": s.on_line,
                "dr_min": s.dr_min,
                "dr_max": s.dr_max,
                "theta_halfwidth": if s.theta_halfwidth.is_finite() { json!(s.theta_halfwidth) } else { json!("unbounded") },
                "line_direction": s.line_direction,
            })
        })
        .collect();
    // radial limit of the off-line sections against the on-line section
    let off: Vec<_> = sections.iter().filter(|s| !s.on_line).collect();
    let on = sections.iter().find(|s| s.on_line);
    let discrepancy = match (off.iter().min_by(|a, b| a.r.total_cmp(&b.r)), on) {
        (Some(near), Some(line)) => Some(json!({
            "nearest_r": near.r,
            "dr_min_jump": line.dr_min - near.dr_min,
            "dr_max_jump": line.dr_max - near.dr_max,
            "line_direction_changes": near.line_direction != line.line_direction,
        })),
        _ => None,
    };
    emit_json(
        g,
        &json!({ "alpha": alpha, "sections": rows, "discrepancy": discrepancy }),
    )?;
    Ok(true)
}
