//! Command-line frontend: JSON in, JSON (and aligned text tables) out.
//!
//! Exit codes: 0 success, 2 unreadable input or bad usage, 3 a mathematical
//! precondition fails, 4 an internal guard tripped.

pub mod format;
pub mod run;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use toric_ci::anticanonical::{build_complex, classify_singularities, discrepancy, gorenstein_index};
use toric_ci::classification::terminality_filter;
use toric_ci::fwps::FakeWps;
use toric_ci::laurent::{compute_sigma_x, homogenize, SigmaXMode};
use toric_ci::lattice::{DegreeMap, GroupElement};
use toric_ci::{Error, ErrorKind};

use crate::format::*;

#[derive(Debug, Parser)]
#[command(name = "toric-ci", version, about = "Toric complete intersections: homogenization, minimal ambients, singularities and Fano classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Treat every coefficient as general.
    Generic,
    /// Keep the coefficients given in the input.
    Explicit,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homogenize a Laurent system with respect to a fan.
    Homogenize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "generic")]
        mode: Mode,
    },
    /// Cones of the fan whose orbits meet the complete intersection.
    SigmaX {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "generic")]
        mode: Mode,
        /// Take all cones of dimension at most n - s (simplicial fans with
        /// small exceptional set only).
        #[arg(long)]
        shortcut: bool,
    },
    /// Anticanonical complex: cells, singularity verdict, discrepancies.
    Acc {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Invariants of a complete intersection in a fake weighted projective
    /// space.
    Invariants {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classify terminal Fano complete intersection threefolds.
    Classify {
        /// Numbers of relations to cover (default: 1, 2 and 3).
        #[arg(long = "s", value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=3))]
        s: Vec<u8>,
        /// Directory for families.jsonl, families.txt, manifest.json and
        /// the progress log. Without it the table goes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Continue the run recorded in this manifest.
        #[arg(long, conflicts_with_all = ["output", "s"])]
        resume: Option<PathBuf>,
        /// Worker threads (0: one per core).
        #[arg(long, env = "TORIC_CI_JOBS", default_value_t = 0)]
        jobs: usize,
        /// Same as `--jobs 1`.
        #[arg(long)]
        serial: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Math(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Math(e) => match e.kind() {
                ErrorKind::Precondition => 3,
                ErrorKind::Guard => 4,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "input error: {m}"),
            CliError::Math(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Parse(m) => CliError::Parse(m),
            InputError::Math(e) => CliError::Math(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn check_schema(found: &Option<String>, expected: &str) -> CliResult<()> {
    match found {
        Some(s) if s != expected => Err(CliError::Parse(format!("schema {s:?}, expected {expected:?}"))),
        _ => Ok(()),
    }
}

pub fn homogenize_cmd(input: &SystemInput, mode: Mode) -> CliResult<HomogenizeOutput> {
    check_schema(&input.schema, SYSTEM_SCHEMA)?;
    let fan = input.fan.to_fan()?;
    let system = input.to_system(mode == Mode::Generic)?;
    let g = homogenize(&system, &fan)?;
    let polynomials = g
        .polys
        .iter()
        .zip(&g.degrees)
        .zip(&g.shifts)
        .map(|((p, d), a)| HomogenizedPoly {
            display: p.display_with("T"),
            degree: element(d),
            shift: ints(a),
            terms: p.terms().iter().map(|(e, c)| Term::from_parts(e, c)).collect(),
        })
        .collect();
    Ok(HomogenizeOutput {
        schema: HOMOGENIZED_SCHEMA.into(),
        class_group: GroupOut::new(g.cox.class_group()),
        generator_degrees: g.cox.degrees().iter().map(element).collect(),
        polynomials,
    })
}

pub fn sigma_x_cmd(input: &SystemInput, mode: Mode, shortcut: bool) -> CliResult<SigmaXOutput> {
    check_schema(&input.schema, SYSTEM_SCHEMA)?;
    let fan = input.fan.to_fan()?;
    let system = input.to_system(mode == Mode::Generic)?;
    let m = if shortcut { SigmaXMode::SimplicialShortcut } else { SigmaXMode::Generic };
    let r = compute_sigma_x(&system, &fan, m)?;
    Ok(SigmaXOutput {
        schema: SIGMA_X_SCHEMA.into(),
        mode: if shortcut { "shortcut" } else { "generic" }.into(),
        cones: r.cones,
        maximal: r.maximal,
    })
}

pub fn acc_cmd(input: &AccInput) -> CliResult<AccOutput> {
    check_schema(&input.schema, ACC_INPUT_SCHEMA)?;
    let fan = input.fan.to_fan()?;
    let cones = input.cones.clone().unwrap_or_else(|| fan.max_cones().to_vec());
    let a = build_complex(&fan, &cones)?;
    let verdict = classify_singularities(&a);
    let witnesses = match &verdict {
        toric_ci::anticanonical::SingularityVerdict::Terminal => Vec::new(),
        toric_ci::anticanonical::SingularityVerdict::CanonicalNotTerminal { witnesses }
        | toric_ci::anticanonical::SingularityVerdict::LogTerminalOnly { witnesses } => {
            witnesses.iter().map(|w| ints(w)).collect()
        }
    };
    let cells = a
        .cells()
        .map(|c| CellOut {
            cone: c.cone.clone(),
            form: rats(&c.form),
            vertices: c.polytope.vertices().iter().map(|v| rats(v)).collect(),
        })
        .collect();
    let discrepancies = input
        .query
        .iter()
        .map(|q| {
            let d = discrepancy(&a, &bigs(q))?;
            Ok(DiscrepancyOut {
                ray: ints(&d.ray),
                cone: d.cone,
                boundary_point: rats(&d.boundary_point),
                discrepancy: d.discrepancy.to_string(),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(AccOutput {
        schema: ACC_SCHEMA.into(),
        verdict: verdict.label().into(),
        witnesses,
        gorenstein_index: Int(gorenstein_index(&a)),
        cells,
        discrepancies,
    })
}

pub fn invariants_cmd(input: &FwpsInput) -> CliResult<InvariantsOutput> {
    check_schema(&input.schema, FWPS_SCHEMA)?;
    let orders = bigs(&input.torsion);
    let cols: Vec<_> = input.degrees.iter().chain(&input.relations).map(|c| bigs(c)).collect();
    let all = DegreeMap::from_orders(1, &orders, &cols)?;
    let (deg, rel) = all.images.split_at(input.degrees.len());
    let q = DegreeMap {
        group: all.group.clone(),
        images: deg.to_vec(),
    };
    let z = FakeWps::from_degree_data(&q)?;
    let mu: Vec<GroupElement> = rel.to_vec();
    let inv = z.invariants(&mu)?;
    let verdict = terminality_filter(&z, mu.len());
    Ok(InvariantsOutput {
        schema: INVARIANTS_SCHEMA.into(),
        class_group: GroupOut::new(z.class_group()),
        degrees: z.degrees().iter().map(element).collect(),
        relations: mu.iter().map(element).collect(),
        minus_k: element(&inv.minus_k),
        minus_k_cubed: inv.minus_k_cubed.to_string(),
        h0_minus_k: Int(inv.h0_minus_k),
        fano_index: Int(inv.fano_index),
        gorenstein_index: Int(inv.gorenstein_index),
        verdict: verdict.label().into(),
    })
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Homogenize { input, output, mode } => {
            let out = homogenize_cmd(&read_json(&input)?, mode)?;
            emit(&to_json(&out), output.as_deref())
        }
        Command::SigmaX {
            input,
            output,
            mode,
            shortcut,
        } => {
            let out = sigma_x_cmd(&read_json(&input)?, mode, shortcut)?;
            emit(&to_json(&out), output.as_deref())
        }
        Command::Acc { input, output } => {
            let out = acc_cmd(&read_json(&input)?)?;
            emit(&to_json(&out), output.as_deref())
        }
        Command::Invariants { input, output } => {
            let out = invariants_cmd(&read_json(&input)?)?;
            emit(&to_json(&out), output.as_deref())
        }
        Command::Classify {
            s,
            output,
            resume,
            jobs,
            serial,
        } => {
            let jobs = if serial { 1 } else { jobs };
            let s: Vec<usize> = if s.is_empty() { vec![1, 2, 3] } else { s.iter().map(|&x| x as usize).collect() };
            let (records, dir) = match (resume, output) {
                (Some(manifest), _) => {
                    let dir = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
                    (run::resume(&manifest, jobs)?, Some(dir))
                }
                (None, Some(dir)) => (run::start(&s, &dir, jobs)?, Some(dir)),
                (None, None) => (run::classify_records(&s, jobs)?, None),
            };
            match dir {
                Some(dir) => println!("{} families written to {}", records.len(), dir.display()),
                None => print!("{}", table(&records)),
            }
            Ok(())
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
