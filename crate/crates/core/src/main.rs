use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gemo::config::RawConfig;
use gemo::error::{fmt_float, StageError};
use gemo::expr::{differentiate, parse, simplify};
use gemo::figures::{run_figures, Figure, FigureOptions};
use gemo::operator::Space;
use gemo::pipeline::{run_solve, write_json};
use gemo::verify::{run_verify, VerifyOptions};

#[derive(Parser)]
#[command(name = "gemo", version, about = "Position-dependent-mass Schrödinger solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    X,
    Z,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the lowest states described by a config file.
    Solve {
        config: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long, value_enum)]
        space: Option<SpaceArg>,
        #[arg(long)]
        states: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Any other config key, as KEY=VALUE.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Write the CSV and JSON data behind a figure.
    Figure {
        #[arg(value_enum)]
        which: FigureArg,
        /// α for fig1, γ for fig2.
        #[arg(long)]
        alpha: Option<f64>,
        /// Number of samples along the axis.
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long, value_enum)]
        space: Option<SpaceArg>,
        #[arg(long)]
        states: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the acceptance checks; exits 1 if any fails.
    Verify {
        /// Solve example 1 at this α but compare against the α = 1 levels.
        #[arg(long)]
        perturb_alpha: Option<f64>,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Parse an expression in x and print it with its derivative.
    ParseCheck {
        expr: String,
        /// Parameter names the expression may use.
        #[arg(long = "param", value_name = "NAME")]
        params: Vec<String>,
    },
}

fn solve(
    config: PathBuf,
    overrides: Vec<(&str, Option<String>)>,
    set: Vec<String>,
) -> Result<(), StageError> {
    let text = std::fs::read_to_string(&config)
        .map_err(|e| StageError::input("config", format!("{}: {e}", config.display())))?;
    let mut raw = RawConfig::parse(&text)?;
    for (key, value) in overrides {
        if let Some(v) = value {
            raw.set(key, v);
        }
    }
    for entry in set {
        let (k, v) = entry
            .split_once('=')
            .ok_or_else(|| StageError::input("config", format!("--set expects KEY=VALUE, got '{entry}'")))?;
        raw.set(k.trim(), v.trim());
    }
    let cfg = raw.resolve()?;
    let out = cfg.out.clone();
    let report = run_solve(cfg)?;
    for s in &report.solves {
        for (i, e) in s.eigenvalues.iter().enumerate() {
            println!("{} {} {}", s.space.label(), i, fmt_float(*e));
        }
        if let Some(oracle) = &s.oracle {
            println!("{} oracle {} max relative error {}", s.space.label(), oracle.name, fmt_float(s.max_relative_error().unwrap_or(0.0)));
        }
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn figure(which: FigureArg, opts: FigureOptions) -> Result<(), StageError> {
    let which = match which {
        FigureArg::Fig1 => Figure::Fig1,
        FigureArg::Fig2 => Figure::Fig2,
    };
    run_figures(which, &opts)?;
    println!("wrote {}", opts.out.join(format!("{}.csv", which.name())).display());
    Ok(())
}

fn verify(perturb_alpha: Option<f64>, json: Option<PathBuf>) -> Result<bool, StageError> {
    let report = run_verify(VerifyOptions { perturb_alpha });
    for c in &report.criteria {
        println!("{} criterion {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title);
        for check in &c.checks {
            let bound = match (check.min, check.max) {
                (Some(lo), Some(hi)) => format!("in [{}, {}]", fmt_float(lo), fmt_float(hi)),
                (None, Some(hi)) => format!("<= {}", fmt_float(hi)),
                (Some(lo), None) => format!(">= {}", fmt_float(lo)),
                (None, None) => String::new(),
            };
            println!(
                "    {} {} = {} ({bound})",
                if check.passed { "ok  " } else { "FAIL" },
                check.name,
                fmt_float(check.measured)
            );
        }
        if let Some(e) = &c.error {
            println!("    {e}");
        }
    }
    if let Some(path) = json {
        write_json(&path, &report)?;
    }
    Ok(report.passed)
}

fn parse_check(text: &str, params: &[String]) -> Result<(), StageError> {
    let ast = parse(text, params).map_err(|e| StageError::input("expr", e))?;
    println!("{}", simplify(&ast));
    println!("d/dx: {}", simplify(&differentiate(&ast)));
    Ok(())
}

fn space(arg: Option<SpaceArg>) -> Result<Option<Space>, StageError> {
    match arg {
        None => Ok(None),
        Some(SpaceArg::X) => Ok(Some(Space::X)),
        Some(SpaceArg::Z) => Ok(Some(Space::Z)),
        Some(SpaceArg::Both) => Err(StageError::input("config", "figures take space x or z")),
    }
}

fn run(cli: Cli) -> Result<bool, StageError> {
    match cli.command {
        Command::Solve {
            config,
            alpha,
            grid_n,
            space,
            states,
            out,
            set,
        } => {
            let space = space.map(|s| match s {
                SpaceArg::X => "x",
                SpaceArg::Z => "z",
                SpaceArg::Both => "both",
            });
            let overrides = vec![
                ("alpha", alpha.map(|v| v.to_string())),
                ("grid_n", grid_n.map(|v| v.to_string())),
                ("space", space.map(String::from)),
                ("states", states.map(|v| v.to_string())),
                ("out", out.map(|p| p.display().to_string())),
            ];
            solve(config, overrides, set).map(|_| true)
        }
        Command::Figure {
            which,
            alpha,
            grid_n,
            space: s,
            states,
            out,
        } => figure(
            which,
            FigureOptions {
                alpha,
                grid_n,
                space: space(s)?,
                states,
                out,
            },
        )
        .map(|_| true),
        Command::Verify { perturb_alpha, json } => verify(perturb_alpha, json),
        Command::ParseCheck { expr, params } => parse_check(&expr, &params).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
