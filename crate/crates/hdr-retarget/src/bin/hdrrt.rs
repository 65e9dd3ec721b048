//! Batch front end: load an exposure stack, run one or all retargeting
//! strategies, write the fused PNG(s) and the energy-curve CSV.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;

use hdr_retarget::{
    average_energy_per_pixel, energy_curve_csv, gradient_energy, load_stack,
    render_energy_visualization, retarget, save_image, to_luminance, Axis, FusionConfig,
    ImageStack, RetargetPlan, Strategy, StrategyRun,
};

#[derive(Parser, Debug)]
#[command(
    name = "hdrrt",
    about = "Content-aware retargeting of multi-exposure stacks"
)]
struct Cli {
    /// Directory of PNG/JPEG exposures, or a manifest file listing them.
    #[arg(long)]
    input: PathBuf,

    /// Strategy id (direct, stat-min, stat-median, stat-total, agg-avg,
    /// agg-laplacian) or "all" to benchmark every strategy.
    #[arg(long)]
    strategy: String,

    /// Axis to resize: horizontal changes width, vertical changes height.
    #[arg(long, value_parser = parse_axis, default_value = "horizontal")]
    axis: Axis,

    /// Target size as a scale factor in (0, 2). Mutually exclusive with --target.
    #[arg(long)]
    scale: Option<f64>,

    /// Target size in pixels. Mutually exclusive with --scale.
    #[arg(long)]
    target: Option<usize>,

    /// Output PNG path. With --strategy all the strategy id is suffixed
    /// before the extension.
    #[arg(long)]
    output: PathBuf,

    /// Energy-curve CSV path.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Directory to export grayscale energy-map PNGs into.
    #[arg(long)]
    emit_energy_maps: Option<PathBuf>,

    /// Well-exposedness sigma.
    #[arg(long)]
    fusion_sigma: Option<f64>,

    /// Fusion quality exponents as contrast,saturation,wellexposedness.
    #[arg(long)]
    fusion_exponents: Option<String>,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    match s {
        "horizontal" => Ok(Axis::Horizontal),
        "vertical" => Ok(Axis::Vertical),
        _ => Err(format!("invalid axis `{s}`, expected horizontal|vertical")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("HDRRT_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("hdrrt: failed to configure thread pool: {e}");
                    return ExitCode::from(1);
                }
            }
            _ => {
                eprintln!("hdrrt: HDRRT_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }

    let (strategies, fusion) = match validate(&cli) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("hdrrt: usage error: {msg}");
            return ExitCode::from(2);
        }
    };

    match run(&cli, &strategies, &fusion) {
        Ok(()) => ExitCode::SUCCESS,
        Err((stage, err)) => {
            eprintln!("hdrrt: {stage} failed: {err}");
            ExitCode::from(1)
        }
    }
}

fn validate(cli: &Cli) -> Result<(Vec<Strategy>, FusionConfig), String> {
    let strategies = if cli.strategy == "all" {
        Strategy::ALL.to_vec()
    } else {
        vec![cli
            .strategy
            .parse::<Strategy>()
            .map_err(|e| e.to_string())?]
    };

    match (cli.scale, cli.target) {
        (Some(_), Some(_)) => return Err("--scale and --target are mutually exclusive".into()),
        (None, None) => return Err("one of --scale or --target is required".into()),
        (Some(f), None) if f <= 0.0 || f >= 2.0 => {
            return Err(format!("--scale must lie in (0, 2), got {f}"));
        }
        _ => {}
    }

    let mut fusion = FusionConfig::default();
    if let Some(sigma) = cli.fusion_sigma {
        if sigma <= 0.0 {
            return Err("--fusion-sigma must be positive".into());
        }
        fusion.wellexposed_sigma = sigma;
    }
    if let Some(spec) = &cli.fusion_exponents {
        let parts: Vec<f64> = spec
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("--fusion-exponents: {e}"))?;
        if parts.len() != 3 || parts.iter().any(|e| *e < 0.0) {
            return Err("--fusion-exponents expects three nonnegative values c,s,w".into());
        }
        fusion.exponent_contrast = parts[0];
        fusion.exponent_saturation = parts[1];
        fusion.exponent_wellexposed = parts[2];
    }

    Ok((strategies, fusion))
}

type StageError = (&'static str, Box<dyn std::error::Error>);

fn stage<E: std::error::Error + 'static>(name: &'static str) -> impl Fn(E) -> StageError {
    move |e| (name, Box::new(e) as Box<dyn std::error::Error>)
}

fn run(cli: &Cli, strategies: &[Strategy], fusion: &FusionConfig) -> Result<(), StageError> {
    let stack = load_stack(&cli.input).map_err(stage("loading stack"))?;

    let current = match cli.axis {
        Axis::Horizontal => stack.width(),
        Axis::Vertical => stack.height(),
    };
    let target = match (cli.scale, cli.target) {
        (Some(f), None) => (f * current as f64).round() as usize,
        (None, Some(px)) => px,
        _ => unreachable!("validated earlier"),
    };
    eprintln!(
        "hdrrt: {} image(s) {}x{}, target {} = {} px",
        stack.len(),
        stack.width(),
        stack.height(),
        match cli.axis {
            Axis::Horizontal => "width",
            Axis::Vertical => "height",
        },
        target
    );

    if let Some(dir) = &cli.emit_energy_maps {
        std::fs::create_dir_all(dir).map_err(stage("creating energy-map directory"))?;
        emit_input_energy_maps(&stack, dir).map_err(stage("exporting energy maps"))?;
    }

    let runs: Vec<(Strategy, StrategyRun, hdr_retarget::RgbImage)> = strategies
        .par_iter()
        .map(|&strategy| {
            let plan = RetargetPlan::new(strategy, cli.axis, target);
            let out = retarget(&stack, &plan, fusion)?;
            let final_energy =
                average_energy_per_pixel(&gradient_energy(&to_luminance(&out.image))?);
            Ok((
                strategy,
                StrategyRun {
                    strategy,
                    trace: out.trace.clone(),
                    final_energy,
                },
                out.image,
            ))
        })
        .collect::<hdr_retarget::Result<_>>()
        .map_err(stage("retargeting"))?;

    for (strategy, _, image) in &runs {
        let path = if strategies.len() == 1 {
            cli.output.clone()
        } else {
            suffixed(&cli.output, strategy.id())
        };
        save_image(image, &path).map_err(stage("writing output image"))?;
        eprintln!("hdrrt: wrote {}", path.display());
        if let Some(dir) = &cli.emit_energy_maps {
            let e = gradient_energy(&to_luminance(image)).map_err(stage("exporting energy maps"))?;
            render_energy_visualization(&e, &dir.join(format!("output_{}.png", strategy.id())))
                .map_err(stage("exporting energy maps"))?;
        }
    }

    if let Some(report) = &cli.report {
        let report_runs: Vec<StrategyRun> = runs.iter().map(|(_, r, _)| r.clone()).collect();
        let csv = energy_curve_csv(&report_runs).map_err(stage("building report"))?;
        std::fs::write(report, csv).map_err(stage("writing report"))?;
        eprintln!("hdrrt: wrote {}", report.display());
    }

    Ok(())
}

fn emit_input_energy_maps(stack: &ImageStack, dir: &Path) -> hdr_retarget::Result<()> {
    for (img, label) in stack.images().iter().zip(stack.labels()) {
        let e = gradient_energy(&to_luminance(img))?;
        let name = format!(
            "input_{}.png",
            label.replace(|c: char| !c.is_alphanumeric(), "_")
        );
        render_energy_visualization(&e, &dir.join(name))?;
    }
    Ok(())
}

fn suffixed(path: &Path, id: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "png".into());
    path.with_file_name(format!("{stem}.{id}.{ext}"))
}
