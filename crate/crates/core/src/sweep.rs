//! Parameter sweeps over cycle configurations, rendered as CSV tables.
//!
//! Rows are evaluated in parallel but always emitted in sweep order, so the
//! same plan produces byte-identical output.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{
    amplitude_damping, energy_change, random_hermitian, random_unital_channel_with, random_unitary,
    KrausChannel,
};
use crate::cycle::{run_cycle, CycleConfig, CycleRecord};
use crate::error::{Error, Result};
use crate::measurements::{local_spin_channel, su3_projective_channel, SpinDirection, Su3Angles};
use crate::quantum::{gibbs_state, hermitian_eigensystem, BathSpec, DensityMatrix};
use crate::substances::{labelled_spectrum, SubstanceSpec};

/// Inclusive, evenly spaced range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        let r = Self { start, stop, steps };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 1 && self.start == self.stop && self.start.is_finite() {
            return Ok(());
        }
        if self.steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidArgument(format!(
                "range needs start < stop, got {}..{}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    /// A degenerate one-point range.
    pub fn point(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            steps: 1,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + h * i as f64
                }
            })
            .collect()
    }
}

/// Field values and bath temperatures shared by all sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineParams {
    pub bi: f64,
    pub bf: f64,
    pub beta_c: f64,
    pub beta_h: f64,
}

impl Default for EngineParams {
    fn default() -> Self {
        Self {
            bi: 3.0,
            bf: 4.0,
            beta_c: 1.0,
            beta_h: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
    Text(String),
    /// Undefined value, written as an empty field.
    Missing,
}

impl Cell {
    fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }

    pub fn render(&self) -> String {
        match self {
            // -0.0 prints as 0
            Cell::Num(x) => format!("{:.16e}", x + 0.0),
            Cell::Flag(b) => if *b { "1" } else { "0" }.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        let Some(i) = self.column(name) else {
            return Vec::new();
        };
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Columns describing one cycle, in a fixed order per substance.
pub fn record_header(spec: &SubstanceSpec) -> Vec<String> {
    let mut h: Vec<String> = [
        "qh",
        "qc",
        "w",
        "eta_raw",
        "eta",
        "eta0",
        "engine_mode",
        "crossing_warning",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let labels = labelled_spectrum(spec, 1.0)
        .map(|s| s.labels())
        .unwrap_or_default();
    for prefix in ["p_cold", "p_hot", "dp", "q_hot", "q_cold"] {
        for l in &labels {
            h.push(format!("{prefix}_{}", l.key()));
        }
    }
    h.push("q_idle_hot".into());
    h
}

pub fn record_cells(rec: &CycleRecord) -> Vec<Cell> {
    let mut c = vec![
        Cell::Num(rec.qh),
        Cell::Num(rec.qc),
        Cell::Num(rec.w),
        Cell::opt(rec.eta_raw),
        Cell::opt(rec.eta),
        Cell::Num(rec.eta0),
        Cell::Flag(rec.engine_mode),
        Cell::Flag(rec.crossing_warning),
    ];
    let fields: [fn(&crate::cycle::LevelRecord) -> f64; 5] = [
        |l| l.p_cold,
        |l| l.p_hot,
        |l| l.delta_p,
        |l| l.q_hot,
        |l| l.q_cold,
    ];
    for f in fields {
        c.extend(rec.levels.iter().map(|l| Cell::Num(f(l))));
    }
    c.push(Cell::Num(rec.idle_heat_hot()));
    c
}

fn build_table<T, F>(
    leading: &[&str],
    spec_for_header: &SubstanceSpec,
    points: Vec<T>,
    eval: F,
) -> Result<Table>
where
    T: Send + Sync,
    F: Fn(&T) -> Result<(Vec<Cell>, CycleRecord)> + Sync + Send,
{
    let mut header: Vec<String> = leading.iter().map(|s| s.to_string()).collect();
    header.extend(record_header(spec_for_header));
    let rows = points
        .par_iter()
        .map(|p| {
            let (mut lead, rec) = eval(p)?;
            lead.extend(record_cells(&rec));
            Ok(lead)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

pub fn qutrit_two_bath(params: &EngineParams, j: &SweepRange) -> Result<Table> {
    j.validate()?;
    let p = *params;
    build_table(
        &["j"],
        &SubstanceSpec::Qutrit { j: 0.0 },
        j.values(),
        |&jv| {
            let cfg = CycleConfig::two_bath(
                SubstanceSpec::Qutrit { j: jv },
                p.bi,
                p.bf,
                p.beta_c,
                p.beta_h,
            )?;
            Ok((vec![Cell::Num(jv)], run_cycle(&cfg)?))
        },
    )
}

/// One named measurement in a qutrit sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedAngles {
    pub name: String,
    pub angles: Su3Angles,
}

pub fn qutrit_measurement(
    params: &EngineParams,
    sets: &[NamedAngles],
    j: &SweepRange,
) -> Result<Table> {
    j.validate()?;
    let p = *params;
    let channels = sets
        .iter()
        .map(|s| Ok((s.clone(), su3_projective_channel(&s.angles)?)))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(usize, f64)> = (0..channels.len())
        .flat_map(|k| j.values().into_iter().map(move |jv| (k, jv)))
        .collect();
    build_table(
        &["set", "theta", "phi", "chi", "psi", "j"],
        &SubstanceSpec::Qutrit { j: 0.0 },
        points,
        |&(k, jv)| {
            let (set, ch) = &channels[k];
            let cfg = CycleConfig::measurement(
                SubstanceSpec::Qutrit { j: jv },
                p.bi,
                p.bf,
                p.beta_c,
                ch.clone(),
            )?;
            let a = set.angles;
            let lead = vec![
                Cell::Text(set.name.clone()),
                Cell::Num(a.theta),
                Cell::Num(a.phi),
                Cell::Num(a.chi),
                Cell::Num(a.psi),
                Cell::Num(jv),
            ];
            Ok((lead, run_cycle(&cfg)?))
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourMode {
    /// θ = φ swept, χ = ψ = π/2.
    ThetaEqPhi,
    /// θ = φ = χ swept, ψ = π/2.
    ThetaEqPhiEqChi,
}

impl ContourMode {
    pub fn angles(&self, theta: f64) -> Su3Angles {
        match self {
            ContourMode::ThetaEqPhi => Su3Angles {
                theta,
                phi: theta,
                chi: FRAC_PI_2,
                psi: FRAC_PI_2,
            },
            ContourMode::ThetaEqPhiEqChi => Su3Angles {
                theta,
                phi: theta,
                chi: theta,
                psi: FRAC_PI_2,
            },
        }
    }
}

pub fn qutrit_contour(
    params: &EngineParams,
    mode: ContourMode,
    theta: &SweepRange,
    j: &SweepRange,
) -> Result<Table> {
    theta.validate()?;
    j.validate()?;
    let p = *params;
    let points: Vec<(f64, f64)> = theta
        .values()
        .into_iter()
        .flat_map(|t| j.values().into_iter().map(move |jv| (t, jv)))
        .collect();
    build_table(
        &["theta", "j"],
        &SubstanceSpec::Qutrit { j: 0.0 },
        points,
        |&(t, jv)| {
            let ch = su3_projective_channel(&mode.angles(t))?;
            let cfg = CycleConfig::measurement(
                SubstanceSpec::Qutrit { j: jv },
                p.bi,
                p.bf,
                p.beta_c,
                ch,
            )?;
            Ok((vec![Cell::Num(t), Cell::Num(jv)], run_cycle(&cfg)?))
        },
    )
}

/// Measurement sweep at θ = φ = 0.75π, χ = ψ = 0.5π.
pub fn qutrit_extreme(params: &EngineParams, j: &SweepRange) -> Result<Table> {
    let angles = Su3Angles::from_pi_units(0.75, 0.75, 0.5, 0.5)?;
    qutrit_measurement(
        params,
        &[NamedAngles {
            name: "extreme".into(),
            angles,
        }],
        j,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XxzModel {
    /// Jz = 0, Jxy swept.
    Xx,
    /// Jxy = 0, Jz swept.
    Ising,
}

impl XxzModel {
    pub fn spec(&self, coupling: f64) -> SubstanceSpec {
        match self {
            XxzModel::Xx => SubstanceSpec::Xxz {
                jxy: coupling,
                jz: 0.0,
            },
            XxzModel::Ising => SubstanceSpec::Xxz {
                jxy: 0.0,
                jz: coupling,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XxzProtocol {
    TwoBath,
    Measurement { n: SpinDirection, m: SpinDirection },
}

pub fn xxz(
    params: &EngineParams,
    model: XxzModel,
    protocol: XxzProtocol,
    coupling: &SweepRange,
) -> Result<Table> {
    coupling.validate()?;
    let p = *params;
    let channel = match protocol {
        XxzProtocol::TwoBath => None,
        XxzProtocol::Measurement { n, m } => Some(local_spin_channel(&n, &m)?),
    };
    build_table(&["jxy", "jz"], &model.spec(0.0), coupling.values(), |&c| {
        let spec = model.spec(c);
        let cfg = match &channel {
            None => CycleConfig::two_bath(spec, p.bi, p.bf, p.beta_c, p.beta_h)?,
            Some(ch) => CycleConfig::measurement(spec, p.bi, p.bf, p.beta_c, ch.clone())?,
        };
        let SubstanceSpec::Xxz { jxy, jz } = spec else {
            unreachable!()
        };
        Ok((vec![Cell::Num(jxy), Cell::Num(jz)], run_cycle(&cfg)?))
    })
}

/// Floor below which a unital-channel energy change counts as a violation.
pub const THEOREM1_FLOOR: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelFamily {
    Identity,
    UnitaryMixture,
    Projective,
    /// Non-unital control group.
    AmplitudeDamping,
}

impl ChannelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelFamily::Identity => "identity",
            ChannelFamily::UnitaryMixture => "unitary_mixture",
            ChannelFamily::Projective => "projective",
            ChannelFamily::AmplitudeDamping => "amplitude_damping",
        }
    }

    pub fn is_unital(&self) -> bool {
        !matches!(self, ChannelFamily::AmplitudeDamping)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Gibbs,
    RandomPassive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyChangeSample {
    pub index: usize,
    pub dim: usize,
    pub family: ChannelFamily,
    pub state: StateKind,
    pub delta_e: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    pub samples: Vec<EnergyChangeSample>,
    pub min_unital: f64,
    pub min_control: f64,
    pub violations: usize,
}

impl Theorem1Report {
    /// No unital sample fell below the floor.
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn table(&self) -> Table {
        let header = ["index", "dim", "family", "unital", "state", "delta_e"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let rows = self
            .samples
            .iter()
            .map(|s| {
                vec![
                    Cell::Text(s.index.to_string()),
                    Cell::Text(s.dim.to_string()),
                    Cell::Text(s.family.name().into()),
                    Cell::Flag(s.family.is_unital()),
                    Cell::Text(match s.state {
                        StateKind::Gibbs => "gibbs".into(),
                        StateKind::RandomPassive => "random_passive".into(),
                    }),
                    Cell::Num(s.delta_e),
                ]
            })
            .collect();
        Table { header, rows }
    }
}

fn random_passive_state(
    h: &crate::quantum::HermitianOperator,
    rng: &mut impl Rng,
) -> Result<DensityMatrix> {
    let mut pops: Vec<f64> = (0..h.dim()).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = pops.iter().sum();
    pops.iter_mut().for_each(|p| *p /= total);
    // eigenvalues ascend, so descending populations make the state passive
    pops.sort_by(|a, b| b.total_cmp(a));
    DensityMatrix::from_populations(&pops, h.eigenvectors())
}

fn energy_change_sample(
    seed: u64,
    index: usize,
    dim: usize,
    family: ChannelFamily,
) -> Result<EnergyChangeSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let h = hermitian_eigensystem(&random_hermitian(dim, &mut rng))?;
    let state = if rng.gen_bool(0.5) {
        StateKind::Gibbs
    } else {
        StateKind::RandomPassive
    };
    let rho = match state {
        StateKind::Gibbs => gibbs_state(&h, BathSpec::new(rng.gen_range(0.05..5.0))?),
        StateKind::RandomPassive => random_passive_state(&h, &mut rng)?,
    };
    let channel = match family {
        ChannelFamily::Identity => KrausChannel::identity(dim),
        ChannelFamily::UnitaryMixture => {
            let mix = rng.gen_range(1..=4);
            random_unital_channel_with(dim, mix, &mut rng)?
        }
        ChannelFamily::Projective => {
            let u = random_unitary(dim, &mut rng)?;
            let basis: Vec<_> = (0..dim).map(|j| u.column(j)).collect();
            KrausChannel::projective(&basis)?
        }
        ChannelFamily::AmplitudeDamping => {
            amplitude_damping(h.eigenvectors(), rng.gen_range(0.2..0.9))?
        }
    };
    let delta_e = energy_change(&channel, &rho, &h)?;
    Ok(EnergyChangeSample {
        index,
        dim,
        family,
        state,
        delta_e,
    })
}

/// Energy change of random unital channels on random passive states.
///
/// Sample 0 is the identity channel; the rest alternate between unitary
/// mixtures and projective measurements in random bases. A non-unital control
/// group of max(samples/10, 10) amplitude-damping channels is appended.
pub fn theorem1_suite(dims: &[usize], samples: usize, seed: u64) -> Result<Theorem1Report> {
    if dims.is_empty() || dims.iter().any(|d| !(2..=4).contains(d)) {
        return Err(Error::InvalidArgument(
            "dims must be a non-empty subset of {2, 3, 4}".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let control = (samples / 10).max(10);
    let plan: Vec<(usize, usize, ChannelFamily)> = (0..samples + control)
        .map(|i| {
            let dim = dims[i % dims.len()];
            let family = if i >= samples {
                ChannelFamily::AmplitudeDamping
            } else if i == 0 {
                ChannelFamily::Identity
            } else if i % 2 == 1 {
                ChannelFamily::UnitaryMixture
            } else {
                ChannelFamily::Projective
            };
            (i, dim, family)
        })
        .collect();
    let samples_out = plan
        .par_iter()
        .map(|&(i, dim, family)| energy_change_sample(seed, i, dim, family))
        .collect::<Result<Vec<_>>>()?;

    let unital = samples_out.iter().filter(|s| s.family.is_unital());
    let min_unital = unital
        .clone()
        .map(|s| s.delta_e)
        .fold(f64::INFINITY, f64::min);
    let violations = unital.filter(|s| s.delta_e < THEOREM1_FLOOR).count();
    let min_control = samples_out
        .iter()
        .filter(|s| !s.family.is_unital())
        .map(|s| s.delta_e)
        .fold(f64::INFINITY, f64::min);
    Ok(Theorem1Report {
        samples: samples_out,
        min_unital,
        min_control,
        violations,
    })
}

/// Parses `key = value` lines (blank lines and `#` comments ignored) into
/// `--key value` arguments.
pub fn config_to_args(text: &str) -> Result<Vec<String>> {
    let mut args = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("config line {}: expected key=value", n + 1))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "config line {}: empty key",
                n + 1
            )));
        }
        args.push(format!("--{key}"));
        args.push(value.trim().to_string());
    }
    Ok(args)
}

/// Renders `key=value` lines, readable back through [`config_to_args`].
pub fn metadata_text(entries: &[(String, String)]) -> String {
    entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}
