//! Command-line surface: parse motion definition files, run validations,
//! monodromy decisions, lifts, and extensions, and emit JSON reports plus SVG
//! diagrams.
//!
//! Exit codes: 0 success/trivial, 1 usage or parse error, 2 validation
//! failure, 3 mathematical obstruction (nontrivial monodromy), 4 solver
//! failure.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use holomotion::braid;
use holomotion::cover;
use holomotion::expr;
use holomotion::extend::{self, GridSpec};
use holomotion::motion::{self, MotionFamily};
use holomotion::parse;
use holomotion::report::{
    CoverPointExport, ErrorReport, MonodromyReport, Report, TracksExport, Verdict,
};
use holomotion::sphere::SpherePoint;
use holomotion::{Error, Tolerances};

#[derive(Parser)]
#[command(
    name = "holomotion",
    version,
    about = "Monodromy, lifting, and extension computations for motions of finite sets in the sphere"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the motion axioms and write a validation report.
    Validate(CommonArgs),
    /// Compute per-generator braid words and decide triviality.
    Monodromy(CommonArgs),
    /// Build extensions: a continuous sphere motion, a one-point extension,
    /// or the inductive multi-point driver.
    Extend(ExtendArgs),
    /// Lift the family to the covering model (optionally at one parameter).
    Lift(LiftArgs),
    /// Combined validation + monodromy report with track exports.
    Report(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Motion definition file.
    #[arg(long)]
    input: PathBuf,
    /// Output directory for reports and artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Random seed recorded in every report.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Validation sample budget.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Tolerance override, repeatable (KEY=VAL).
    #[arg(long = "tolerance", value_name = "KEY=VAL")]
    tolerances: Vec<String>,
}

#[derive(Args)]
struct ExtendArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Extension mode: continuous | point | inductive.
    #[arg(long)]
    mode: String,
    /// New punctures, comma separated (constant expressions, e.g. "1/4, -1/2").
    #[arg(long)]
    new_points: Option<String>,
    /// Ansatz degree schedule, comma separated (default "2,4,8").
    #[arg(long)]
    degrees: Option<String>,
}

#[derive(Args)]
struct LiftArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Lift along a route to this parameter (constant expression).
    #[arg(long)]
    to: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let code = match cli.command {
        Command::Validate(a) => run(&a, cmd_validate),
        Command::Monodromy(a) => run(&a, cmd_monodromy),
        Command::Extend(a) => {
            let mode = a.mode.clone();
            match mode.as_str() {
                "continuous" => run(&a.common, cmd_extend_continuous),
                "point" => run(&a.common, |ctx| cmd_extend_point(ctx, &a)),
                "inductive" => run(&a.common, |ctx| cmd_extend_inductive(ctx, &a)),
                other => {
                    eprintln!(
                        "error: unknown extend mode `{other}` (continuous | point | inductive)"
                    );
                    return ExitCode::from(1);
                }
            }
        }
        Command::Lift(a) => run(&a.common, |ctx| cmd_lift(ctx, &a)),
        Command::Report(a) => run(&a, cmd_report),
    };
    ExitCode::from(code)
}

struct Ctx<'a> {
    args: &'a CommonArgs,
    tol: Tolerances,
    family: MotionFamily,
    report: Report,
    /// Set once the command wrote its own report file.
    reported: bool,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::UnknownToleranceKey { .. } => 1,
        Error::ValidationFailure { .. }
        | Error::SeparationViolation { .. }
        | Error::InfinitePuncture { .. }
        | Error::AnchorMismatch { .. }
        | Error::NonFiniteValue { .. }
        | Error::OutsideDomain { .. }
        | Error::InvalidDomain { .. }
        | Error::CollisionAtParameter { .. }
        | Error::InvalidNewPoint { .. }
        | Error::NotBasepointPreserving { .. }
        | Error::RangeEscape { .. }
        | Error::DegenerateTriple => 2,
        Error::NontrivialMonodromy { .. } | Error::NontrivialExtendedMonodromy { .. } => 3,
        Error::StageFailure { cause, .. } => exit_code_for(cause),
        _ => 4,
    }
}

/// Parse tolerances and the input family, dispatch, and always write the
/// report (errors included).
fn run(args: &CommonArgs, body: impl FnOnce(&mut Ctx) -> Result<(), Error>) -> u8 {
    let mut tol = Tolerances::default();
    for kv in &args.tolerances {
        let Some((key, val)) = kv.split_once('=') else {
            eprintln!("error: bad --tolerance `{kv}` (expected KEY=VAL)");
            return 1;
        };
        let Ok(value) = val.trim().parse::<f64>() else {
            eprintln!("error: bad --tolerance value in `{kv}`");
            return 1;
        };
        if let Err(e) = tol.set(key.trim(), value) {
            eprintln!("error: {e}");
            return 1;
        }
    }

    let src = match fs::read_to_string(&args.input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return 1;
        }
    };
    let mut report = Report::new(args.seed, &tol);
    let family = match parse::parse_motion(&src, &tol) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            report.error = Some(ErrorReport::from_error(&e));
            let _ = write_report(&args.out, "parse", &report);
            return exit_code_for(&e);
        }
    };

    let mut ctx = Ctx {
        args,
        tol,
        family,
        report,
        reported: false,
    };
    match body(&mut ctx) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if !ctx.reported {
                ctx.report.error = Some(ErrorReport::from_error(&e));
                let _ = write_report(&args.out, "error", &ctx.report);
            }
            exit_code_for(&e)
        }
    }
}

/// Write and return the artifact name (reports reference artifacts relative
/// to their own directory, keeping report bytes location-independent).
fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> Result<String, Error> {
    fs::create_dir_all(dir).map_err(io_err)?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidDomain {
        reason: format!("serialization failed: {e}"),
    })?;
    text.push('\n');
    fs::write(&path, text).map_err(io_err)?;
    Ok(name.to_string())
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<String, Error> {
    fs::create_dir_all(dir).map_err(io_err)?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(io_err)?;
    Ok(name.to_string())
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidDomain {
        reason: format!("io error: {e}"),
    }
}

fn write_report(dir: &Path, name: &str, report: &Report) -> Result<String, Error> {
    write_json(dir, &format!("{name}_report.json"), report)
}

/// Write the report and return its full path for display.
fn report_path(dir: &Path, name: &str, report: &Report) -> Result<String, Error> {
    let file = write_report(dir, name, report)?;
    Ok(dir.join(file).display().to_string())
}

fn cmd_validate(ctx: &mut Ctx) -> Result<(), Error> {
    match motion::validate_motion(&ctx.family, ctx.args.samples, &ctx.tol) {
        Ok(v) => {
            ctx.report.verdicts.push(Verdict {
                name: "basepoint-identity".into(),
                pass: v.basepoint_residual <= ctx.tol.eps_eq,
                detail: format!("residual {:.3e}", v.basepoint_residual),
            });
            ctx.report.verdicts.push(Verdict {
                name: "injectivity".into(),
                pass: v.injectivity_margin > ctx.tol.eps_sep,
                detail: format!("margin {:.6}", v.injectivity_margin),
            });
            let worst = v.holomorphy_residuals.iter().copied().fold(0.0, f64::max);
            ctx.report.verdicts.push(Verdict {
                name: "holomorphy".into(),
                pass: worst < ctx.tol.holomorphy_tol,
                detail: format!("max residual {worst:.3e}"),
            });
            ctx.report.verdicts.push(Verdict {
                name: "single-valuedness".into(),
                pass: v.single_valued,
                detail: "strands close up around every generator".into(),
            });
            ctx.report.validation = Some(v);
            let path = report_path(&ctx.args.out, "validate", &ctx.report)?;
            println!("validation passed, report at {path}");
            Ok(())
        }
        Err(e) => {
            if let Error::ValidationFailure { axiom, detail, .. } = &e {
                ctx.report.verdicts.push(Verdict {
                    name: format!("{axiom}"),
                    pass: false,
                    detail: detail.clone(),
                });
            }
            Err(e)
        }
    }
}

fn cmd_monodromy(ctx: &mut Ctx) -> Result<(), Error> {
    motion::validate_motion(&ctx.family, ctx.args.samples, &ctx.tol)?;
    let out = braid::monodromy_detailed(&ctx.family, &ctx.tol)?;
    let mono = MonodromyReport::from_classes(&out.classes, out.rotation);
    for (k, (word, trivial)) in mono
        .generator_words
        .iter()
        .zip(mono.trivial.iter())
        .enumerate()
    {
        ctx.report.words.push(word.clone());
        ctx.report.verdicts.push(Verdict {
            name: format!("generator-{k}"),
            pass: *trivial,
            detail: format!("word \"{word}\""),
        });
    }
    ctx.report.verdicts.push(Verdict {
        name: "monodromy-trivial".into(),
        pass: mono.overall_trivial,
        detail: format!("{} generator(s)", out.classes.len()),
    });
    for (k, tracks) in out.tracks.iter().enumerate() {
        let extraction = braid::extract_braid(tracks, &ctx.tol)?;
        let export = TracksExport::from_tracks(tracks, extraction.crossings);
        let svg_text = svg::braid_diagram(&export, &format!("generator {k}"));
        let art = write_text(&ctx.args.out, &format!("braid_gen{k}.svg"), &svg_text)?;
        ctx.report.artifacts.push(art);
    }
    let overall = mono.overall_trivial;
    let obstruction = mono.trivial.iter().position(|t| !t);
    ctx.report.monodromy = Some(mono);
    if let Some(generator) = obstruction {
        ctx.report.error = Some(ErrorReport::from_error(&Error::NontrivialMonodromy {
            generator,
        }));
    }
    let path = report_path(&ctx.args.out, "monodromy", &ctx.report)?;
    ctx.reported = true;
    if overall {
        println!("monodromy trivial, report at {path}");
        Ok(())
    } else {
        println!("monodromy NONTRIVIAL, report at {path}");
        Err(Error::NontrivialMonodromy {
            generator: obstruction.unwrap_or(0),
        })
    }
}

fn cmd_extend_continuous(ctx: &mut Ctx) -> Result<(), Error> {
    motion::validate_motion(&ctx.family, ctx.args.samples, &ctx.tol)?;
    let grid = extend::build_continuous_motion(&ctx.family, &GridSpec::default(), &ctx.tol)?;
    let worst = grid
        .samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.beltrami_sup.partial_cmp(&b.1.beltrami_sup).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    let sample = &grid.samples[worst];
    let heat = svg::beltrami_heatmap(
        &sample.images,
        grid.nx,
        grid.ny,
        grid.step,
        sample.parameter,
    );
    let art1 = write_json(&ctx.args.out, "grid.json", &grid)?;
    let art2 = write_text(&ctx.args.out, "mu.svg", &heat)?;
    ctx.report.artifacts.push(art1);
    ctx.report.artifacts.push(art2);
    let jac_min = grid
        .samples
        .iter()
        .map(|s| s.jacobian_min)
        .fold(f64::INFINITY, f64::min);
    let bel_max = grid
        .samples
        .iter()
        .map(|s| s.beltrami_sup)
        .fold(0.0, f64::max);
    let err_max = grid
        .samples
        .iter()
        .map(|s| s.strand_error)
        .fold(0.0, f64::max);
    ctx.report.verdicts.push(Verdict {
        name: "homeomorphism-certificate".into(),
        pass: jac_min > 0.0,
        detail: format!("min cell Jacobian {jac_min:.4}"),
    });
    ctx.report.verdicts.push(Verdict {
        name: "quasiconformal-diagnostic".into(),
        pass: bel_max < 1.0,
        detail: format!("sup |mu| {bel_max:.4}"),
    });
    ctx.report.verdicts.push(Verdict {
        name: "strand-interpolation".into(),
        pass: err_max < 1e-6,
        detail: format!("max strand error {err_max:.3e}"),
    });
    let path = report_path(&ctx.args.out, "extend", &ctx.report)?;
    println!(
        "continuous motion built over {} parameter samples, report at {path}",
        grid.samples.len()
    );
    Ok(())
}

fn parse_points(src: &str) -> Result<Vec<SpherePoint>, Error> {
    let mut out = Vec::new();
    for piece in src.split(',') {
        let z = expr::parse_constant_at(piece.trim(), 1, 1)?;
        out.push(SpherePoint::Finite(z));
    }
    Ok(out)
}

fn parse_degrees(src: Option<&str>) -> Result<Vec<usize>, Error> {
    match src {
        None => Ok(vec![2, 4, 8]),
        Some(s) => s
            .split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: 1,
                    col: 1,
                    message: format!("bad degree `{p}`"),
                })
            })
            .collect(),
    }
}

fn required_points(args: &ExtendArgs) -> Result<Vec<SpherePoint>, Error> {
    let Some(src) = args.new_points.as_deref() else {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            message: "--new-points is required for this mode".to_string(),
        });
    };
    parse_points(src)
}

fn cmd_extend_point(ctx: &mut Ctx, args: &ExtendArgs) -> Result<(), Error> {
    motion::validate_motion(&ctx.family, ctx.args.samples, &ctx.tol)?;
    let points = required_points(args)?;
    let degrees = parse_degrees(args.degrees.as_deref())?;
    let zeta = points[0];
    let mut solved = None;
    let mut last = None;
    for &d in &degrees {
        match extend::solve_new_strand(&ctx.family, zeta, d, ctx.args.seed, &ctx.tol) {
            Ok(s) => {
                solved = Some(s);
                break;
            }
            Err(e @ Error::NoStrandFound { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    let Some(out) = solved else {
        return Err(last.unwrap_or(Error::NoStrandFound {
            degree: *degrees.last().unwrap_or(&0),
            best_margin: f64::NEG_INFINITY,
        }));
    };
    let text = parse::write_motion(&out.extended)?;
    let art = write_text(&ctx.args.out, "extended.motion", &text)?;
    ctx.report.artifacts.push(art);
    ctx.report.verdicts.push(Verdict {
        name: "new-strand".into(),
        pass: true,
        detail: format!("degree {} margin {:.4}", out.degree, out.margin),
    });
    let path = report_path(&ctx.args.out, "extend", &ctx.report)?;
    println!(
        "one-point extension found (margin {:.4}), report at {path}",
        out.margin
    );
    Ok(())
}

fn cmd_extend_inductive(ctx: &mut Ctx, args: &ExtendArgs) -> Result<(), Error> {
    motion::validate_motion(&ctx.family, ctx.args.samples, &ctx.tol)?;
    let points = required_points(args)?;
    let degrees = parse_degrees(args.degrees.as_deref())?;
    let (extended, stages) =
        extend::extend_motion_inductive(&ctx.family, &points, &degrees, ctx.args.seed, &ctx.tol)?;
    let text = parse::write_motion(&extended)?;
    let art1 = write_text(&ctx.args.out, "extended.motion", &text)?;
    let art2 = write_json(&ctx.args.out, "stages.json", &stages)?;
    ctx.report.artifacts.push(art1);
    ctx.report.artifacts.push(art2);
    for (k, s) in stages.iter().enumerate() {
        ctx.report.verdicts.push(Verdict {
            name: format!("stage-{k}"),
            pass: true,
            detail: format!(
                "point {}+{}i degree {} margin {:.4}",
                s.point.0, s.point.1, s.degree, s.margin
            ),
        });
    }
    let path = report_path(&ctx.args.out, "extend", &ctx.report)?;
    println!(
        "inductive extension of {} point(s) complete, report at {path}",
        stages.len()
    );
    Ok(())
}

fn cmd_lift(ctx: &mut Ctx, args: &LiftArgs) -> Result<(), Error> {
    motion::validate_motion(&ctx.family, ctx.args.samples, &ctx.tol)?;
    if let Some(to) = args.to.as_deref() {
        let lambda = expr::parse_constant_at(to.trim(), 1, 1)?;
        let route = ctx
            .family
            .domain()
            .route(ctx.family.domain().basepoint(), lambda, &ctx.tol)?;
        let pt = cover::lift_path(&ctx.family, &route, &ctx.tol)?;
        let export = CoverPointExport::from_point(&pt);
        ctx.report.words.push(export.word.clone());
        let art = write_json(&ctx.args.out, "cover_point.json", &export)?;
        ctx.report.artifacts.push(art);
        ctx.report.verdicts.push(Verdict {
            name: "lift-at-parameter".into(),
            pass: true,
            detail: format!("word \"{}\"", export.word),
        });
        let path = report_path(&ctx.args.out, "lift", &ctx.report)?;
        println!("lifted to {}+{}i, report at {path}", lambda.re, lambda.im);
        return Ok(());
    }
    let lifted = cover::lift_map(&ctx.family, &ctx.tol)?;
    for (k, d) in lifted.deck().iter().enumerate() {
        ctx.report.words.push(d.word().to_string());
        ctx.report.verdicts.push(Verdict {
            name: format!("deck-{k}"),
            pass: d.is_trivial(),
            detail: format!("word \"{}\"", d.word()),
        });
    }
    ctx.report.verdicts.push(Verdict {
        name: "path-independence".into(),
        pass: lifted.probes().iter().all(|p| p.class_agree),
        detail: format!("{} probe points, 2 routes each", lifted.probes().len()),
    });
    let path = report_path(&ctx.args.out, "lift", &ctx.report)?;
    println!("lift exists, report at {path}");
    Ok(())
}

fn cmd_report(ctx: &mut Ctx) -> Result<(), Error> {
    let v = motion::validate_motion(&ctx.family, ctx.args.samples, &ctx.tol)?;
    ctx.report.verdicts.push(Verdict {
        name: "axioms".into(),
        pass: true,
        detail: format!(
            "basepoint residual {:.3e}, injectivity margin {:.6}",
            v.basepoint_residual, v.injectivity_margin
        ),
    });
    ctx.report.validation = Some(v);
    let out = braid::monodromy_detailed(&ctx.family, &ctx.tol)?;
    let mono = MonodromyReport::from_classes(&out.classes, out.rotation);
    ctx.report.words = mono.generator_words.clone();
    ctx.report.verdicts.push(Verdict {
        name: "monodromy-trivial".into(),
        pass: mono.overall_trivial,
        detail: format!("{} generator(s)", out.classes.len()),
    });
    for (k, tracks) in out.tracks.iter().enumerate() {
        let extraction = braid::extract_braid(tracks, &ctx.tol)?;
        let export = TracksExport::from_tracks(tracks, extraction.crossings);
        let art = write_json(&ctx.args.out, &format!("tracks_gen{k}.json"), &export)?;
        ctx.report.artifacts.push(art);
    }
    ctx.report.monodromy = Some(mono);
    let path = report_path(&ctx.args.out, "report", &ctx.report)?;
    println!("combined report at {path}");
    Ok(())
}
