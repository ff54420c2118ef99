//! Argument parsing and command dispatch for the `qhatm` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qhatm_core::analysis::{error_grid, h_curve, point_columns, residual_sweep, table_ex45, Grid, GridAxis};
use qhatm_core::{builtin, solve, Coords, ProblemSpec, QhatmParams};

use crate::emit::{self, Table};
use crate::error::{Error, Result};
use crate::schema::{load_custom, SolveReport};

#[derive(Debug, Parser)]
#[command(name = "qhatm", version, about = "Series solutions of linear fractional telegraph equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the iterates and the assembled series.
    Solve {
        #[command(flatten)]
        problem: ProblemSource,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate the assembled series at one point.
    Eval {
        #[command(flatten)]
        problem: ProblemSource,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated `name=value` pairs, e.g. `x=1.5,t=0`.
        #[arg(long, value_parser = parse_point)]
        point: Coords,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample the series at a fixed point over a uniform grid of h.
    Hcurve {
        #[command(flatten)]
        problem: ProblemSource,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, value_parser = parse_point)]
        point: Coords,
        #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
        h_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        h_max: f64,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Absolute error against the exact solution on a grid.
    Errgrid {
        #[command(flatten)]
        problem: ProblemSource,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated `name=start:stop:step` axes.
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Magnitude of the equation residual of the series.
    Residual {
        #[command(flatten)]
        problem: ProblemSource,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        at: PointsArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The ex45 comparison table.
    Table45 {
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ProblemSource {
    /// Built-in problem name (ex41..ex45).
    #[arg(long)]
    pub problem: Option<String>,
    /// Path to a custom-problem JSON document.
    #[arg(long, value_name = "PATH")]
    pub custom: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Fractional order.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Convergence-control parameter.
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Truncation order M.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
}

impl ParamArgs {
    fn params(&self) -> QhatmParams {
        QhatmParams::new(self.gamma, self.h, self.n, self.order)
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PointsArgs {
    #[arg(long, value_parser = parse_point)]
    pub point: Option<Coords>,
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

fn split_pairs(s: &str) -> std::result::Result<Vec<(&str, &str)>, String> {
    s.split(',')
        .map(|pair| {
            let (k, v) = pair.split_once('=').ok_or_else(|| format!("expected name=value, got `{pair}`"))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(format!("empty name in `{pair}`"));
            }
            Ok((k, v.trim()))
        })
        .collect()
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// `x=1.5,t=0`
pub fn parse_point(s: &str) -> std::result::Result<Coords, String> {
    let mut c = Coords::new();
    for (k, v) in split_pairs(s)? {
        if c.get(k).is_some() {
            return Err(format!("`{k}` given twice"));
        }
        c.set(k, parse_f64(v)?);
    }
    Ok(c)
}

/// `x=0:1:0.25,t=0.5`; a bare value is a single-node axis.
pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let mut axes: Vec<GridAxis> = Vec::new();
    for (k, v) in split_pairs(s)? {
        if axes.iter().any(|a| a.name == k) {
            return Err(format!("`{k}` given twice"));
        }
        let parts: Vec<&str> = v.split(':').collect();
        let axis = match parts.as_slice() {
            [x] => GridAxis::points(k, vec![parse_f64(x)?]),
            [a, b, step] => GridAxis::uniform(k, parse_f64(a)?, parse_f64(b)?, parse_f64(step)?)
                .map_err(|e| e.to_string())?,
            _ => return Err(format!("expected {k}=start:stop:step, got `{k}={v}`")),
        };
        axes.push(axis);
    }
    Ok(Grid::new(axes))
}

fn load_problem(src: &ProblemSource) -> Result<ProblemSpec> {
    match (&src.problem, &src.custom) {
        (Some(name), _) => Ok(builtin(name)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
            load_custom(&text)
        }
        (None, None) => Err(Error::Usage("one of --problem or --custom is required".into())),
    }
}

fn render(table: Table, format: Option<Format>) -> String {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn solve_csv(report: &SolveReport) -> String {
    let mut out = String::from("series,coeff,p,q,factor\n");
    let labelled = report
        .iterates
        .iter()
        .enumerate()
        .map(|(m, terms)| (format!("v{m}"), terms))
        .chain(std::iter::once(("assembled".to_string(), &report.assembled)));
    for (label, terms) in labelled {
        for t in terms {
            out.push_str(&format!("{label},{},{},{},{}\n", emit::num(t.coeff), t.p, t.q, t.factor));
        }
    }
    out
}

/// Produces the command's output text.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Solve { problem, params, out } => {
            let spec = load_problem(problem)?;
            let sol = solve(&spec, &params.params())?;
            let report = SolveReport::new(&spec, &sol);
            Ok(match out.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report).expect("reports always serialize");
                    s.push('\n');
                    s
                }
                Format::Csv => solve_csv(&report),
            })
        }
        Command::Eval { problem, params, point, out } => {
            let spec = load_problem(problem)?;
            let p = params.params();
            let sol = solve(&spec, &p)?;
            let v = spec.eval_series(&sol.assembled, p.gamma, point)?;
            Ok(match out.format.unwrap_or(Format::Csv) {
                Format::Csv => format!("{}\n", emit::short(v)),
                Format::Json => format!("{}\n", serde_json::json!({ "value": v })),
            })
        }
        Command::Hcurve { problem, gamma, n, order, point, h_min, h_max, steps, out } => {
            let spec = load_problem(problem)?;
            QhatmParams::new(*gamma, *h_min, *n, *order).validate(&spec)?;
            spec.eval_series(spec.initial_guess(), *gamma, point)?;
            let curve = h_curve(&spec, *gamma, *n, *order, point, *h_min, *h_max, *steps)?;
            Ok(render(emit::hcurve_table(&curve), out.format))
        }
        Command::Errgrid { problem, params, grid, out } => {
            let spec = load_problem(problem)?;
            let records = error_grid(&spec, &params.params(), grid)?;
            Ok(render(emit::error_grid_table(&point_columns(&spec), &records), out.format))
        }
        Command::Residual { problem, params, at, out } => {
            let spec = load_problem(problem)?;
            let cols = point_columns(&spec);
            let points = match (&at.point, &at.grid) {
                (Some(p), _) => vec![p.clone()],
                (None, Some(g)) => g.nodes(&cols)?,
                (None, None) => return Err(Error::Usage("one of --point or --grid is required".into())),
            };
            let sweep = residual_sweep(&spec, &params.params(), &points)?;
            Ok(render(emit::residual_table(&cols, &sweep), out.format))
        }
        Command::Table45 { order, out } => Ok(render(emit::table45_table(&table_ex45(*order)?), out.format)),
    }
}

fn output_of(command: &Command) -> Option<&Path> {
    let out = match command {
        Command::Solve { out, .. }
        | Command::Eval { out, .. }
        | Command::Hcurve { out, .. }
        | Command::Errgrid { out, .. }
        | Command::Residual { out, .. }
        | Command::Table45 { out, .. } => out,
    };
    out.output.as_deref()
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    let result = execute(&cli.command).and_then(|text| match output_of(&cli.command) {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source }),
        None => stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_syntax() {
        let c = parse_point("x=1.5, t=0").unwrap();
        assert_eq!(c.get("x"), Some(1.5));
        assert_eq!(c.get("t"), Some(0.0));
        assert!(parse_point("x").is_err());
        assert!(parse_point("x=a").is_err());
        assert!(parse_point("x=1,x=2").is_err());
        assert!(parse_point("x=inf").is_err());
    }

    #[test]
    fn grid_syntax() {
        let g = parse_grid("x=0:1:0.25,t=0.5").unwrap();
        assert_eq!(g.axes[0].values.len(), 5);
        assert_eq!(g.axes[1].values, vec![0.5]);
        assert!(parse_grid("x=0:1").is_err());
        assert!(parse_grid("x=1:0:0.1").is_err());
    }

    #[test]
    fn parses_solve_example() {
        let cli = Cli::try_parse_from(["qhatm", "solve", "--problem", "ex41", "--gamma", "1", "--h", "-1", "--n", "1", "--order", "3"])
            .unwrap();
        match cli.command {
            Command::Solve { problem, params, .. } => {
                assert_eq!(problem.problem.as_deref(), Some("ex41"));
                assert_eq!((params.gamma, params.h, params.n, params.order), (1.0, -1.0, 1, 3));
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn problem_sources_are_exclusive() {
        let r = Cli::try_parse_from(["qhatm", "solve", "--problem", "ex41", "--custom", "a.json", "--gamma", "1"]);
        assert!(r.is_err());
        assert!(Cli::try_parse_from(["qhatm", "solve", "--gamma", "1"]).is_err());
    }
}
