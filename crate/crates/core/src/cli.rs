//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;

use crate::basis::{gellmann_basis, group_basis, group_from_file, GroupedBasis, GroupingFile, GroupingScheme};
use crate::criteria::{correlation_matrix, full_report, BaselineSelection};
use crate::error::{Error, Result};
use crate::io::{read_json, to_json_string, write_json};
use crate::povm::{build_h, build_povm, t_range, validate_povm, PovmFile, SymmetricPovm, DEFAULT_TOL};
use crate::random::seeded_rng;
use crate::reproduce;
use crate::states::{maximally_mixed, DensityMatrix, DensityMatrixFile};
use crate::sweep::{
    run_sweep, threads_from_env, threshold, write_csv, Curve, Evaluator, Family, Measurement, SweepSpec,
    DEFAULT_BISECTION_TOL, DEFAULT_POINTS, DEFAULT_T,
};

#[derive(Debug, Parser)]
#[command(name = "snest", version, about = "Schmidt number estimation from symmetric measurements")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build, validate or bound (N,M)-POVMs
    Povm {
        #[command(subcommand)]
        action: PovmCommand,
    },
    /// Evaluate the criterion for one state and print the report as JSON
    Eval(EvalArgs),
    /// Evaluate a state family over a parameter grid and write CSV
    Sweep(SweepArgs),
    /// Bisect for the parameter where a curve reaches a level
    Threshold(ThresholdArgs),
    /// Regenerate a figure sweep or the isotropic analysis
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Subcommand)]
enum PovmCommand {
    /// Write the effects as JSON
    Build {
        #[command(flatten)]
        grouping: GroupingArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Print the deviation of every defining relation
    Validate {
        #[command(flatten)]
        grouping: GroupingArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Validate a POVM file instead of building one
        #[arg(long, value_name = "FILE")]
        povm: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Print the admissible interval of t
    Trange {
        #[command(flatten)]
        grouping: GroupingArgs,
    },
}

#[derive(Debug, Args)]
struct GroupingArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "M")]
    m: Option<usize>,
    /// sequential, appendix-A (d=4, (5,4)) or appendix-B (d=3, (8,2))
    #[arg(long, default_value = "sequential")]
    scheme: String,
    /// Explicit grouping as JSON {d, N, M, perm}
    #[arg(long, value_name = "FILE")]
    perm_file: Option<PathBuf>,
}

impl GroupingArgs {
    fn grouped_basis(&self) -> Result<GroupedBasis> {
        if let Some(path) = &self.perm_file {
            let file: GroupingFile = read_json(path)?;
            for (flag, given, wanted) in [("d", self.d, file.d), ("N", self.n, file.n), ("M", self.m, file.m)] {
                if given.is_some_and(|v| v != wanted) {
                    return Err(Error::ParameterOutOfRange(format!("--{flag} disagrees with {}", path.display())));
                }
            }
            return group_from_file(&file);
        }
        let missing = |flag: &str| Error::ParameterOutOfRange(format!("--{flag} is required"));
        let d = self.d.ok_or_else(|| missing("d"))?;
        let n = self.n.ok_or_else(|| missing("N"))?;
        let m = self.m.ok_or_else(|| missing("M"))?;
        let scheme: GroupingScheme = self.scheme.parse()?;
        group_basis(&gellmann_basis(d)?, n, m, &scheme)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasurementKind {
    Grouped,
    Sic,
    Mub,
}

#[derive(Debug, Args)]
struct MeasurementArgs {
    /// Deformation t for both parties unless overridden
    #[arg(long, default_value_t = DEFAULT_T, allow_hyphen_values = true)]
    t: f64,
    #[arg(long = "a-kind", value_enum, default_value = "grouped")]
    a_kind: MeasurementKind,
    #[arg(long = "a-N")]
    a_n: Option<usize>,
    #[arg(long = "a-M")]
    a_m: Option<usize>,
    #[arg(long = "a-scheme")]
    a_scheme: Option<String>,
    #[arg(long = "a-t", allow_hyphen_values = true)]
    a_t: Option<f64>,
    #[arg(long = "b-kind", value_enum, default_value = "grouped")]
    b_kind: MeasurementKind,
    #[arg(long = "b-N")]
    b_n: Option<usize>,
    #[arg(long = "b-M")]
    b_m: Option<usize>,
    #[arg(long = "b-scheme")]
    b_scheme: Option<String>,
    #[arg(long = "b-t", allow_hyphen_values = true)]
    b_t: Option<f64>,
}

fn measurement(
    d: usize,
    kind: MeasurementKind,
    n: Option<usize>,
    m: Option<usize>,
    scheme: &Option<String>,
    t: f64,
) -> Result<Measurement> {
    match kind {
        MeasurementKind::Sic => Ok(Measurement::Sic),
        MeasurementKind::Mub => Ok(Measurement::Mub),
        MeasurementKind::Grouped => {
            let Measurement::Grouped { n: n0, m: m0, scheme: s0, .. } = Measurement::default_for(d, t) else {
                unreachable!("default measurements are grouped")
            };
            let custom = n.is_some() || m.is_some();
            let scheme = match scheme {
                Some(s) => s.parse()?,
                None if custom => GroupingScheme::Sequential,
                None => s0,
            };
            let m = m.unwrap_or(if custom { n.map_or(m0, |n| (d * d - 1) / n.max(1) + 1) } else { m0 });
            let n = n.unwrap_or(if custom { (d * d - 1) / (m.max(2) - 1) } else { n0 });
            Ok(Measurement::Grouped { n, m, scheme, t })
        }
    }
}

impl MeasurementArgs {
    fn resolve(&self, d_a: usize, d_b: usize) -> Result<(Measurement, Measurement)> {
        Ok((
            measurement(d_a, self.a_kind, self.a_n, self.a_m, &self.a_scheme, self.a_t.unwrap_or(self.t))?,
            measurement(d_b, self.b_kind, self.b_n, self.b_m, &self.b_scheme, self.b_t.unwrap_or(self.t))?,
        ))
    }
}

#[derive(Debug, Args)]
struct BaselineArgs {
    /// GSIC purities x_A[,x_B]
    #[arg(long, value_delimiter = ',', num_args = 1..=2)]
    gsic: Option<Vec<f64>>,
    #[arg(long)]
    sic: bool,
    #[arg(long)]
    realignment: bool,
    #[arg(long)]
    fidelity: bool,
}

impl BaselineArgs {
    fn selection(&self) -> BaselineSelection {
        BaselineSelection {
            gsic: self.gsic.as_ref().map(|v| (v[0], *v.last().unwrap())),
            sic: self.sic,
            realignment: self.realignment,
            fidelity: self.fidelity,
        }
    }
}

/// Named family and its fixed parameters.
#[derive(Debug, Args)]
struct FamilyArgs {
    /// example1 (bell-horodecki-2x4), example2 (ququart-mixture),
    /// example3 (isotropic) or example4 (noisy-horodecki-3x3)
    #[arg(value_name = "FAMILY")]
    name: String,
    /// Horodecki parameter held fixed in example1
    #[arg(long = "tau", default_value_t = 0.9)]
    fixed_tau: f64,
    /// Mixing weight held fixed in example4
    #[arg(long = "q", default_value_t = 0.995)]
    fixed_q: f64,
    /// Local dimension for example3
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// example2 with the entangled component on |33> instead of |22>
    #[arg(long)]
    split_levels: bool,
}

fn parse_family(name: &str, tau: f64, q: f64, d: usize, split_levels: bool) -> Result<Family> {
    match name.to_ascii_lowercase().as_str() {
        "example1" | "bell-horodecki-2x4" => Ok(Family::BellHorodecki2x4 { tau }),
        "example2" | "ququart-mixture" => Ok(Family::Ququart { split_levels }),
        "ququart-mixture-split" => Ok(Family::Ququart { split_levels: true }),
        "example3" | "isotropic" => Ok(Family::Isotropic { d }),
        "example4" | "noisy-horodecki-3x3" => Ok(Family::NoisyHorodecki3x3 { q }),
        other => Err(Error::ParameterOutOfRange(format!("unknown state family `{other}`"))),
    }
}

impl FamilyArgs {
    fn family(&self) -> Result<Family> {
        parse_family(&self.name, self.fixed_tau, self.fixed_q, self.d, self.split_levels)
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Gallery state: example1..4 (or long names) or maximally-mixed
    #[arg(value_name = "STATE", required_unless_present = "state_file")]
    name: Option<String>,
    /// Density matrix JSON {dA, dB, matrix}
    #[arg(long = "state", value_name = "FILE", conflicts_with = "name")]
    state_file: Option<PathBuf>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    v: Option<f64>,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long = "dA")]
    d_a: Option<usize>,
    #[arg(long = "dB")]
    d_b: Option<usize>,
    #[arg(long)]
    split_levels: bool,
    #[command(flatten)]
    measurement: MeasurementArgs,
    #[command(flatten)]
    baselines: BaselineArgs,
    /// Also evaluate with a random regrouping of each grouped measurement at
    /// the same t and report the trace-norm difference on stderr
    #[arg(long, value_name = "SEED")]
    grouping_check: Option<u64>,
}

impl EvalArgs {
    fn state(&self) -> Result<DensityMatrix> {
        if let Some(path) = &self.state_file {
            return DensityMatrix::from_file(read_json::<DensityMatrixFile>(path)?);
        }
        let name = self.name.as_deref().unwrap_or_default();
        if name.eq_ignore_ascii_case("maximally-mixed") {
            return Ok(maximally_mixed(self.d_a.unwrap_or(self.d), self.d_b.unwrap_or(self.d)));
        }
        let need = |flag: &str, v: Option<f64>| {
            v.ok_or_else(|| Error::ParameterOutOfRange(format!("`{name}` needs --{flag}")))
        };
        let family = parse_family(name, self.tau.unwrap_or(0.9), self.q.unwrap_or(0.995), self.d, self.split_levels)?;
        let param = match family {
            Family::BellHorodecki2x4 { .. } => need("q", self.q)?,
            Family::Ququart { .. } => need("p", self.p)?,
            Family::Isotropic { .. } => need("v", self.v)?,
            Family::NoisyHorodecki3x3 { .. } => need("tau", self.tau)?,
        };
        family.state(param)
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Output file (stdout if omitted)
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    #[command(flatten)]
    measurement: MeasurementArgs,
    #[command(flatten)]
    baselines: BaselineArgs,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// red, gsic, sic, realignment or fidelity
    #[arg(long, default_value = "red")]
    curve: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    level: f64,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BISECTION_TOL)]
    tol: f64,
    #[command(flatten)]
    measurement: MeasurementArgs,
    #[command(flatten)]
    baselines: BaselineArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Fig1,
    Fig2,
    Fig3,
    Example3,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(value_enum)]
    target: Target,
    /// CSV output path (default: <target>.csv)
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", to_json_string(value)?);
    Ok(())
}

fn cmd_povm(action: &PovmCommand) -> Result<i32> {
    match action {
        PovmCommand::Build { grouping, t, out } => {
            let p = build_povm(&grouping.grouped_basis()?, *t)?;
            match out {
                Some(path) => write_json(path, &p.to_file())?,
                None => print_json(&p.to_file())?,
            }
            Ok(0)
        }
        PovmCommand::Validate { grouping, t, povm, tol } => {
            let p = match povm {
                Some(path) => SymmetricPovm::from_file(read_json::<PovmFile>(path)?)?,
                None => {
                    let t = t.ok_or_else(|| Error::ParameterOutOfRange("--t or --povm is required".into()))?;
                    build_povm(&grouping.grouped_basis()?, t)?
                }
            };
            let v = validate_povm(&p, *tol);
            for c in &v.checks {
                println!(
                    "{:<20} {:.3e} {}",
                    c.relation,
                    c.max_deviation,
                    if c.passed { "ok" } else { "FAIL" }
                );
            }
            println!("{:<20} x = {:.17} {}", "window", p.x(), if v.window_ok { "ok" } else { "FAIL" });
            Ok(if v.passed && v.window_ok { 0 } else { 2 })
        }
        PovmCommand::Trange { grouping } => {
            let gb = grouping.grouped_basis()?;
            let r = t_range(&build_h(&gb), gb.m())?;
            println!("[{:.10}, {:.10}]", r.lo, r.hi);
            Ok(0)
        }
    }
}

fn regrouped(p: &SymmetricPovm, m: &Measurement, seed: u64) -> Result<Option<SymmetricPovm>> {
    let (Measurement::Grouped { n, m, t, .. }, Some(_)) = (m, p.t()) else {
        return Ok(None);
    };
    let d = p.d();
    let mut perm: Vec<usize> = (0..d * d - 1).collect();
    perm.shuffle(&mut seeded_rng(seed));
    let gb = group_basis(&gellmann_basis(d)?, *n, *m, &GroupingScheme::Explicit(perm))?;
    build_povm(&gb, *t).map(Some)
}

fn cmd_eval(args: &EvalArgs) -> Result<i32> {
    let rho = args.state()?;
    let (ma, mb) = args.measurement.resolve(rho.d_a(), rho.d_b())?;
    let (pa, pb) = (ma.build(rho.d_a())?, mb.build(rho.d_b())?);
    let report = full_report(&rho, &pa, &pb, &args.baselines.selection())?;
    print_json(&report)?;
    if let Some(seed) = args.grouping_check {
        let alt_a = regrouped(&pa, &ma, seed)?.unwrap_or_else(|| pa.clone());
        let alt_b = regrouped(&pb, &mb, seed.wrapping_add(1))?.unwrap_or_else(|| pb.clone());
        let alt = correlation_matrix(&rho, &alt_a, &alt_b)?.trace_norm();
        eprintln!(
            "grouping check: trace norm {:.17} vs {:.17} (difference {:.3e})",
            report.trace_norm,
            alt,
            (alt - report.trace_norm).abs()
        );
    }
    Ok(0)
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let family = args.family.family()?;
    let (lo0, hi0) = family.default_range();
    let (a, b) = args.measurement.resolve(family.dims().0, family.dims().1)?;
    let spec = SweepSpec {
        family,
        lo: args.lo.unwrap_or(lo0),
        hi: args.hi.unwrap_or(hi0),
        points: args.points,
        a,
        b,
        baselines: args.baselines.selection(),
    };
    let rows = run_sweep(&spec, threads_from_env())?;
    let mut out = output(args.csv.as_deref())?;
    write_csv(&rows, &spec.baselines, &mut out)?;
    out.flush()?;
    Ok(0)
}

fn cmd_threshold(args: &ThresholdArgs) -> Result<i32> {
    let family = args.family.family()?;
    let (lo0, hi0) = family.default_range();
    let (a, b) = args.measurement.resolve(family.dims().0, family.dims().1)?;
    let eval = Evaluator::new(family, &a, &b, args.baselines.selection())?;
    let curve: Curve = args.curve.parse()?;
    let r = threshold(&eval, curve, args.level, args.lo.unwrap_or(lo0), args.hi.unwrap_or(hi0), args.tol)?;
    print_json(&r)?;
    Ok(0)
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<i32> {
    let threads = threads_from_env();
    let r = match args.target {
        Target::Fig1 => reproduce::fig1(threads)?,
        Target::Fig2 => reproduce::fig2(threads)?,
        Target::Fig3 => reproduce::fig3(threads)?,
        Target::Example3 => reproduce::example3()?,
    };
    let path = args.csv.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", r.name)));
    let mut out = output(Some(&path))?;
    out.write_all(&r.csv)?;
    out.flush()?;
    print!("{}", r.summary());
    println!("  csv: {}", path.display());
    Ok(0)
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Povm { action } => cmd_povm(action),
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    }
}

/// Parses the process arguments, runs, and maps errors to exit codes.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn custom_measurement_fills_missing_count() {
        let m = measurement(3, MeasurementKind::Grouped, None, Some(3), &None, 0.02).unwrap();
        assert_eq!(m, Measurement::Grouped { n: 4, m: 3, scheme: GroupingScheme::Sequential, t: 0.02 });
        let m = measurement(3, MeasurementKind::Grouped, Some(8), None, &None, 0.01).unwrap();
        assert_eq!(m, Measurement::Grouped { n: 8, m: 2, scheme: GroupingScheme::Sequential, t: 0.01 });
        let m = measurement(4, MeasurementKind::Grouped, None, None, &None, 0.01).unwrap();
        assert_eq!(m, Measurement::Grouped { n: 5, m: 4, scheme: GroupingScheme::Ququart54, t: 0.01 });
    }

    #[test]
    fn family_aliases() {
        assert_eq!(parse_family("Example1", 0.9, 0.995, 3, false).unwrap(), Family::BellHorodecki2x4 { tau: 0.9 });
        assert_eq!(parse_family("ququart-mixture-split", 0.9, 0.995, 3, false).unwrap(), Family::Ququart { split_levels: true });
        assert!(parse_family("example5", 0.9, 0.995, 3, false).is_err());
    }
}
