use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nblow_core::fixture::catalog_names;
use nblow_core::geometry::{
    diagonal_fixture, incidence_set, orbit, parse_ratio, separates, separation_profile, Direction, HomogeneousForm,
    LinearAutomorphism, ProjectivePoint,
};
use nblow_core::pipeline::{analyze_file, exit_code_for, render_table, run_example, Report};
use nblow_core::sparse::{check_bounding, verify_estimates, BoundingFunction, SparseSetWindow};
use nblow_core::Error;

#[derive(Parser)]
#[command(name = "nblow", version, about = "Ideal data of naive blowups, sparse sets and orbit separation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in fixture and compare with its manifest.
    Example {
        /// One of the names printed by `nblow list`.
        name: String,
        #[command(flatten)]
        window: Window,
    },
    /// Run the same pipeline on a fixture file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        window: Window,
    },
    /// List the built-in fixtures.
    List,
    /// Sparse subsets of ℕ.
    Sparse {
        #[command(subcommand)]
        command: SparseCommand,
    },
    /// Orbits of points in projective space.
    Orbit {
        #[command(subcommand)]
        command: OrbitCommand,
    },
}

#[derive(Args)]
struct Window {
    /// Last index of the window; overrides the fixture's own horizon.
    #[arg(long, env = "NBLOW_HORIZON")]
    horizon: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    Squares,
    Powers,
    Arithmetic,
    File,
    List,
}

#[derive(Args)]
struct SetArgs {
    #[arg(long = "set", value_enum)]
    kind: SetKind,
    /// Window size H; membership is known on {0, …, H-1}.
    #[arg(long)]
    horizon: u64,
    /// Base for `powers`.
    #[arg(long, default_value_t = 2)]
    base: u64,
    /// First element for `arithmetic`.
    #[arg(long, default_value_t = 0)]
    start: u64,
    /// Step for `arithmetic`.
    #[arg(long, default_value_t = 2)]
    step: u64,
    /// Input file for `file`: integers or a JSON array.
    #[arg(long)]
    path: Option<PathBuf>,
    /// Comma-separated members for `list`.
    #[arg(long)]
    members: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

impl SetArgs {
    fn build(&self) -> nblow_core::Result<SparseSetWindow> {
        let h = self.horizon;
        match self.kind {
            SetKind::Squares => Ok(SparseSetWindow::squares(h)),
            SetKind::Powers => SparseSetWindow::powers(self.base, h),
            SetKind::Arithmetic => SparseSetWindow::arithmetic(self.start, self.step, h),
            SetKind::File => {
                let p = self.path.as_ref().ok_or_else(|| Error::Input("--set file needs --path".into()))?;
                SparseSetWindow::from_file(p, h)
            }
            SetKind::List => {
                let m = self.members.as_deref().ok_or_else(|| Error::Input("--set list needs --members".into()))?;
                SparseSetWindow::parse_members(m, h)
            }
        }
    }
}

#[derive(Subcommand)]
enum SparseCommand {
    /// Check a bounding function on the window.
    Check {
        #[command(flatten)]
        set: SetArgs,
        /// For example `4*m^2`, `3*m`, or a table `[1,4,9]`.
        #[arg(long)]
        bound: String,
        #[arg(long, default_value_t = 20)]
        mmax: u64,
    },
    /// Check the two counting estimates relating S and S_d.
    Estimates {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        d: u64,
    },
    /// Print S_d.
    Shifted {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        d: u64,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Row-major integer matrix, e.g. 1,0,0,0,2,0,0,0,3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    matrix: Option<Vec<i64>>,
    /// Integer coordinates, e.g. 1,1,1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<i64>>,
    /// Use diag(1,2,3) acting on (1:1:1).
    #[arg(long)]
    auto: bool,
}

impl MapArgs {
    fn build(&self) -> nblow_core::Result<(ProjectivePoint, LinearAutomorphism)> {
        if self.auto {
            if self.matrix.is_some() || self.point.is_some() {
                return Err(Error::Input("--auto cannot be combined with --matrix or --point".into()));
            }
            return Ok(diagonal_fixture());
        }
        match (&self.matrix, &self.point) {
            (Some(m), Some(p)) => Ok((ProjectivePoint::from_i64(p)?, LinearAutomorphism::from_row_major(m)?)),
            _ => Err(Error::Input("give --matrix and --point, or --auto".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Forward,
    Backward,
}

#[derive(Subcommand)]
enum OrbitCommand {
    /// Indices i < H with F(σ^{±i}(x)) = 0.
    Incidence {
        #[command(flatten)]
        map: MapArgs,
        /// A form such as `x1-x0`, or `c:e0,e1,e2;…`.
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        horizon: usize,
        #[arg(long, value_enum, default_value_t = Dir::Forward)]
        direction: Dir,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Minimal separating degree of the backward orbit windows.
    Separate {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value = "1/2")]
        delta: String,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        /// Translates σ^p checked for invariance.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-3,-2,-1,1,2,3")]
        shifts: Vec<i64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Whether forms of one degree separate the given points.
    Points {
        /// Points separated by `;`, coordinates by `,`.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn emit(format: Format, value: &serde_json::Value, table: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("reports serialize")),
        Format::Table => print!("{}", table()),
    }
}

fn report_out(report: &Report, format: Format) -> u8 {
    let value = serde_json::to_value(report).expect("reports serialize");
    emit(format, &value, || render_table(report));
    if !report.ok {
        for c in report.failed_checks() {
            eprintln!("mismatch: {}: expected {}; found {}", c.id, c.expected, c.found);
        }
    }
    report.exit_code() as u8
}

fn run(cli: Cli) -> nblow_core::Result<u8> {
    match cli.command {
        Command::Example { name, window } => Ok(report_out(&run_example(&name, window.horizon)?, window.format)),
        Command::Analyze { file, window } => Ok(report_out(&analyze_file(&file, window.horizon)?, window.format)),
        Command::List => {
            for n in catalog_names() {
                println!("{n}");
            }
            Ok(0)
        }
        Command::Sparse { command } => sparse(command),
        Command::Orbit { command } => orbit_cmd(command),
    }
}

fn sparse(command: SparseCommand) -> nblow_core::Result<u8> {
    match command {
        SparseCommand::Check { set, bound, mmax } => {
            let s = set.build()?;
            let n = BoundingFunction::parse(&bound)?;
            let r = check_bounding(&s, &n, mmax);
            let value = json!({ "bound": n.to_string(), "members": s.len(), "report": r });
            emit(set.format, &value, || {
                let mut out = format!(
                    "bound        N(m) = {n}\nwindow       H = {}, |S| = {}, m <= {mmax}\n",
                    s.horizon(),
                    s.len()
                );
                out += &match r.first_failure {
                    None => "result       ok\n".to_string(),
                    Some((m, k)) => format!("result       fails at m = {m}, n = {k}\n"),
                };
                if let Some(m) = r.non_monotone_at {
                    out += &format!("monotone     no, decreases at m = {m}\n");
                }
                if !r.vacuous.is_empty() {
                    out += &format!("vacuous      N(m) > H for m in {:?}\n", r.vacuous);
                }
                out
            });
            Ok(if r.ok { 0 } else { 1 })
        }
        SparseCommand::Estimates { set, d } => {
            let s = set.build()?;
            let r = verify_estimates(&s, d)?;
            emit(set.format, &json!(r), || {
                format!(
                    "d = {d}, H = {}\nfirst estimate   {}\nsecond estimate  {}\n",
                    s.horizon(),
                    r.ineq1_failure.map_or("holds".into(), |n| format!("fails at n = {n}")),
                    r.ineq2_failure.map_or("holds".into(), |n| format!("fails at n = {n}")),
                )
            });
            Ok(if r.ineq1_ok && r.ineq2_ok { 0 } else { 1 })
        }
        SparseCommand::Shifted { set, d } => {
            let s = set.build()?;
            let sd = s.shifted_self(d)?;
            emit(set.format, &json!({ "d": d, "horizon": s.horizon(), "members": sd.members() }), || {
                format!("{:?}\n", sd.members())
            });
            Ok(0)
        }
    }
}

fn orbit_cmd(command: OrbitCommand) -> nblow_core::Result<u8> {
    match command {
        OrbitCommand::Incidence { map, form, horizon, direction, format } => {
            let (x, sigma) = map.build()?;
            let f = HomogeneousForm::parse(x.len(), &form)?;
            let dir = match direction {
                Dir::Forward => Direction::Forward,
                Dir::Backward => Direction::Backward,
            };
            let o = orbit(&x, &sigma, horizon, dir)?;
            let s = incidence_set(&o.points, &f)?;
            let value = json!({ "form": f.to_string(), "horizon": horizon, "repetition": o.repetition, "set": s });
            emit(format, &value, || {
                let mut out =
                    format!("form         {f}\nwindow       0 <= i < {horizon}\nS            {:?}\n", s.members());
                if let Some((i, j)) = o.repetition {
                    out += &format!("finite orbit point {i} repeats point {j}\n");
                }
                out
            });
            Ok(0)
        }
        OrbitCommand::Separate { map, delta, nmax, shifts, format } => {
            let (x, sigma) = map.build()?;
            let delta = parse_ratio(&delta)?;
            let p = separation_profile(&x, &sigma, delta, nmax, &shifts)?;
            emit(format, &json!(p), || {
                let mut out = format!("point {x}, δ = {}, window-level evidence only\n", p.delta);
                out += "   n  D(n)  floor(δn)  within  translates\n";
                for r in &p.rows {
                    let tr: BTreeMap<_, _> = r.translates.iter().collect();
                    out += &format!(
                        "{:>4}  {:>4}  {:>9}  {:>6}  {:?}\n",
                        r.n,
                        r.degree,
                        r.budget,
                        if r.within_budget { "yes" } else { "no" },
                        tr
                    );
                }
                out += &format!(
                    "observed threshold: {}\ntranslation invariant: {}\n",
                    p.observed_threshold.map_or("none in window".into(), |t| t.to_string()),
                    p.translation_invariant
                );
                out
            });
            Ok(if p.translation_invariant { 0 } else { 1 })
        }
        OrbitCommand::Points { points, degree, format } => {
            let pts = points
                .split(';')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    let c = p
                        .split(',')
                        .map(|c| c.trim().parse::<i64>().map_err(|e| Error::Parse(format!("coordinate {c:?}: {e}"))))
                        .collect::<nblow_core::Result<Vec<_>>>()?;
                    ProjectivePoint::from_i64(&c)
                })
                .collect::<nblow_core::Result<Vec<_>>>()?;
            let r = separates(&pts, degree)?;
            emit(format, &json!(r), || match r.failing_index {
                None if r.ok => format!("separated in degree {degree}\n"),
                _ => format!(
                    "not separated in degree {degree}: point {} lies in the span of the others\n",
                    r.failing_index.map_or("?".into(), |i| i.to_string())
                ),
            });
            Ok(if r.ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
