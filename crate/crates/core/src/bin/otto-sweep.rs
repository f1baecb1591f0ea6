use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use otto_engine::measurements::named_angle_set;
use otto_engine::sweep::{
    self, config_to_args, metadata_text, ContourMode, EngineParams, NamedAngles, SweepRange, Table,
    XxzModel, XxzProtocol,
};
use otto_engine::{SpinDirection, Su3Angles};

#[derive(Parser, Debug)]
#[command(
    name = "otto-sweep",
    version,
    about = "Quantum Otto engine parameter sweeps as CSV"
)]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Two-bath qutrit engine over a J sweep.
    QutritTwoBath {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        j: JRange,
    },
    /// Measurement-fuelled qutrit engine over a J sweep.
    QutritMeas {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        j: JRange,
        #[command(flatten)]
        angles: AngleArgs,
        /// Named angle set; ignored when all four angles are given explicitly.
        #[arg(long, value_enum, default_value_t = AngleSet::All)]
        angle_set: AngleSet,
    },
    /// Efficiency grid over measurement angle and J.
    QutritContour {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        j: JRange,
        #[arg(long, value_enum, default_value_t = Mode::ThetaEqPhi)]
        mode: Mode,
        #[arg(long, allow_negative_numbers = true, value_parser = parse_angle, default_value = "0")]
        theta_min: f64,
        #[arg(long, allow_negative_numbers = true, value_parser = parse_angle, default_value = "1pi")]
        theta_max: f64,
        #[arg(long, default_value_t = 61)]
        theta_steps: usize,
    },
    /// Qutrit measurement engine at theta = phi = 0.75pi, chi = psi = 0.5pi.
    QutritExtreme {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        j: JRange,
    },
    /// Two-spin XXZ engine, sweeping Jxy (xx) or Jz (ising).
    Xxz {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        j: JRange,
        #[arg(long, value_enum, default_value_t = Model::Xx)]
        model: Model,
        #[arg(long, value_enum, default_value_t = ProtocolArg::TwoBath)]
        protocol: ProtocolArg,
        /// First spin measurement direction, e.g. 1,0,0.
        #[arg(long, value_parser = parse_direction, default_value = "1,0,0")]
        n: SpinDirection,
        /// Second spin measurement direction.
        #[arg(long, value_parser = parse_direction, default_value = "0,0,1")]
        m: SpinDirection,
    },
    /// Energy change of random unital channels on passive states.
    Theorem1 {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    bi: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 4.0)]
    bf: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    beta_c: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    beta_h: f64,
    /// Output CSV; stdout when absent. A `<out>.meta` sidecar is written alongside.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for uniformity; deterministic sweeps do not use it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// key=value file of flag defaults; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct JRange {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    j_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    j_max: f64,
    #[arg(long, default_value_t = 301)]
    j_steps: usize,
}

#[derive(Args, Debug)]
struct AngleArgs {
    /// Angles in radians, or multiples of pi with a `pi` suffix (0.7pi).
    #[arg(long, allow_negative_numbers = true, value_parser = parse_angle)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_angle)]
    phi: Option<f64>,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_angle)]
    chi: Option<f64>,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_angle)]
    psi: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AngleSet {
    Eta1,
    Eta2,
    Eta3,
    Extreme,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    ThetaEqPhi,
    ThetaEqPhiEqChi,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Model {
    Xx,
    Ising,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ProtocolArg {
    TwoBath,
    Measurement,
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, scale) = match t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        Some("") => return Ok(PI),
        Some(rest) => (rest.trim_end_matches('*'), PI),
        None => (t, 1.0),
    };
    num.parse::<f64>()
        .map(|x| x * scale)
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("invalid angle `{s}`"))
}

fn parse_direction(s: &str) -> Result<SpinDirection, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("invalid direction `{s}`: {e}"))?;
    let [x, y, z] = parts[..] else {
        return Err(format!("direction `{s}` needs three components"));
    };
    SpinDirection::new(x, y, z).map_err(|e| e.to_string())
}

enum Failure {
    Validation(String),
    Io(io::Error),
}

impl From<otto_engine::Error> for Failure {
    fn from(e: otto_engine::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Finds `--config <path>` (or `--config=<path>`) in the raw arguments.
fn config_path(args: &[String]) -> Option<String> {
    args.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            args.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

/// Inserts config-file flags after the subcommand so later user flags win.
fn expand_args(raw: Vec<String>) -> Result<Vec<String>, Failure> {
    let Some(path) = config_path(&raw) else {
        return Ok(raw);
    };
    let text = std::fs::read_to_string(&path).map_err(Failure::Io)?;
    let extra = config_to_args(&text)?;
    let split = raw.len().min(2);
    let mut args = raw[..split].to_vec();
    args.extend(extra);
    args.extend_from_slice(&raw[split..]);
    Ok(args)
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn jrange(j: &JRange) -> Result<SweepRange, Failure> {
    Ok(SweepRange::new(j.j_min, j.j_max, j.j_steps)?)
}

fn params(c: &Common) -> EngineParams {
    EngineParams {
        bi: c.bi,
        bf: c.bf,
        beta_c: c.beta_c,
        beta_h: c.beta_h,
    }
}

fn common_meta(c: &Common, j: &JRange) -> Vec<(String, String)> {
    vec![
        ("bi".into(), c.bi.to_string()),
        ("bf".into(), c.bf.to_string()),
        ("beta-c".into(), c.beta_c.to_string()),
        ("beta-h".into(), c.beta_h.to_string()),
        ("j-min".into(), j.j_min.to_string()),
        ("j-max".into(), j.j_max.to_string()),
        ("j-steps".into(), j.j_steps.to_string()),
        ("seed".into(), c.seed.to_string()),
    ]
}

fn angle_sets(angles: &AngleArgs, set: AngleSet) -> Result<Vec<NamedAngles>, Failure> {
    match (angles.theta, angles.phi, angles.chi, angles.psi) {
        (Some(theta), Some(phi), Some(chi), Some(psi)) => {
            let angles = Su3Angles::new(theta, phi, chi, psi)?;
            return Ok(vec![NamedAngles {
                name: "custom".into(),
                angles,
            }]);
        }
        (None, None, None, None) => {}
        _ => {
            return Err(Failure::Validation(
                "--theta, --phi, --chi and --psi must be given together".into(),
            ))
        }
    }
    let names: &[&str] = match set {
        AngleSet::Eta1 => &["eta1"],
        AngleSet::Eta2 => &["eta2"],
        AngleSet::Eta3 => &["eta3"],
        AngleSet::Extreme => &["extreme"],
        AngleSet::All => &["eta1", "eta2", "eta3"],
    };
    Ok(names
        .iter()
        .map(|n| NamedAngles {
            name: n.to_string(),
            angles: named_angle_set(n).expect("known set"),
        })
        .collect())
}

fn emit(table: &Table, out: Option<&Path>, meta: Vec<(String, String)>) -> Result<(), Failure> {
    match out {
        None => {
            let stdout = io::stdout();
            table.write_csv(stdout.lock())?;
        }
        Some(path) => {
            table.write_csv(BufWriter::new(File::create(path)?))?;
            let mut meta_path = path.as_os_str().to_owned();
            meta_path.push(".meta");
            let mut f = File::create(PathBuf::from(meta_path))?;
            f.write_all(metadata_text(&meta).as_bytes())?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::QutritTwoBath { common, j } => {
            let table = sweep::qutrit_two_bath(&params(&common), &jrange(&j)?)?;
            let mut meta = vec![("command".into(), "qutrit-two-bath".into())];
            meta.extend(common_meta(&common, &j));
            emit(&table, common.out.as_deref(), meta)
        }
        Command::QutritMeas {
            common,
            j,
            angles,
            angle_set,
        } => {
            let sets = angle_sets(&angles, angle_set)?;
            let table = sweep::qutrit_measurement(&params(&common), &sets, &jrange(&j)?)?;
            let mut meta = vec![("command".into(), "qutrit-meas".into())];
            meta.extend(common_meta(&common, &j));
            for s in &sets {
                let a = s.angles;
                meta.push((
                    format!("angles.{}", s.name),
                    format!("{:e},{:e},{:e},{:e}", a.theta, a.phi, a.chi, a.psi),
                ));
            }
            emit(&table, common.out.as_deref(), meta)
        }
        Command::QutritContour {
            common,
            j,
            mode,
            theta_min,
            theta_max,
            theta_steps,
        } => {
            let contour_mode = match mode {
                Mode::ThetaEqPhi => ContourMode::ThetaEqPhi,
                Mode::ThetaEqPhiEqChi => ContourMode::ThetaEqPhiEqChi,
            };
            let theta = SweepRange::new(theta_min, theta_max, theta_steps)?;
            let table =
                sweep::qutrit_contour(&params(&common), contour_mode, &theta, &jrange(&j)?)?;
            let mut meta = vec![("command".into(), "qutrit-contour".into())];
            meta.extend(common_meta(&common, &j));
            meta.push(("mode".into(), value_name(mode)));
            meta.push(("theta-min".into(), theta_min.to_string()));
            meta.push(("theta-max".into(), theta_max.to_string()));
            meta.push(("theta-steps".into(), theta_steps.to_string()));
            emit(&table, common.out.as_deref(), meta)
        }
        Command::QutritExtreme { common, j } => {
            let table = sweep::qutrit_extreme(&params(&common), &jrange(&j)?)?;
            let mut meta = vec![("command".into(), "qutrit-extreme".into())];
            meta.extend(common_meta(&common, &j));
            emit(&table, common.out.as_deref(), meta)
        }
        Command::Xxz {
            common,
            j,
            model,
            protocol,
            n,
            m,
        } => {
            let xxz_model = match model {
                Model::Xx => XxzModel::Xx,
                Model::Ising => XxzModel::Ising,
            };
            let xxz_protocol = match protocol {
                ProtocolArg::TwoBath => XxzProtocol::TwoBath,
                ProtocolArg::Measurement => XxzProtocol::Measurement { n, m },
            };
            let table = sweep::xxz(&params(&common), xxz_model, xxz_protocol, &jrange(&j)?)?;
            let dir = |d: SpinDirection| {
                let [x, y, z] = d.components();
                format!("{x},{y},{z}")
            };
            let mut meta = vec![("command".into(), "xxz".into())];
            meta.extend(common_meta(&common, &j));
            meta.push(("model".into(), value_name(model)));
            meta.push(("protocol".into(), value_name(protocol)));
            meta.push(("n".into(), dir(n)));
            meta.push(("m".into(), dir(m)));
            emit(&table, common.out.as_deref(), meta)
        }
        Command::Theorem1 {
            dims,
            samples,
            seed,
            out,
            config: _,
        } => {
            let report = sweep::theorem1_suite(&dims, samples, seed)?;
            let dims_text = dims
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let meta = vec![
                ("command".into(), "theorem1".into()),
                ("dims".into(), dims_text),
                ("samples".into(), samples.to_string()),
                ("seed".into(), seed.to_string()),
            ];
            emit(&report.table(), out.as_deref(), meta)?;
            eprintln!("min unital energy change: {:.6e}", report.min_unital);
            eprintln!(
                "min non-unital control energy change (expected negative): {:.6e}",
                report.min_control
            );
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Validation(format!(
                    "{} unital samples below {:e}",
                    report.violations,
                    sweep::THEOREM1_FLOOR
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let result =
        expand_args(std::env::args().collect()).and_then(|args| match Cli::try_parse_from(args) {
            Ok(cli) => run(cli),
            Err(e) => {
                let _ = e.print();
                if e.use_stderr() {
                    std::process::exit(1);
                }
                Ok(())
            }
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(2)
        }
    }
}
