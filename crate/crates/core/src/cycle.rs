//! Four-stroke Otto cycle with either a hot thermal bath or a non-selective
//! measurement as the heat source.
//!
//! Strokes: (1) thermalize with the cold bath at field Bi; (2) ramp the field
//! to Bf with populations carried by label; (3) hot bath or measurement at Bf;
//! (4) ramp back to Bi with populations carried by label.
//!
//! Sign conventions: Qh = Σ E_n(Bf) Δp_n, Qc = −Σ E_n(Bi) Δp_n, W = −(Qh + Qc)
//! with Δp_n = p_n(after stroke 3) − p_n(cold). W < 0 is work extracted.

use crate::channels::{apply_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::quantum::{boltzmann_populations, populations_in_basis, BathSpec, DensityMatrix};
use crate::substances::{
    check_uniform_gap_ratio, detect_level_crossing, labelled_spectrum, LevelLabel, SubstanceSpec,
};

#[derive(Debug, Clone)]
pub enum Protocol {
    TwoBath { hot: BathSpec },
    Measurement { channel: KrausChannel },
}

#[derive(Debug, Clone)]
pub struct CycleConfig {
    pub spec: SubstanceSpec,
    pub bi: f64,
    pub bf: f64,
    pub cold: BathSpec,
    pub protocol: Protocol,
}

impl CycleConfig {
    pub fn two_bath(
        spec: SubstanceSpec,
        bi: f64,
        bf: f64,
        beta_c: f64,
        beta_h: f64,
    ) -> Result<Self> {
        let cfg = Self {
            spec,
            bi,
            bf,
            cold: BathSpec::new(beta_c)?,
            protocol: Protocol::TwoBath {
                hot: BathSpec::new(beta_h)?,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn measurement(
        spec: SubstanceSpec,
        bi: f64,
        bf: f64,
        beta_c: f64,
        channel: KrausChannel,
    ) -> Result<Self> {
        let cfg = Self {
            spec,
            bi,
            bf,
            cold: BathSpec::new(beta_c)?,
            protocol: Protocol::Measurement { channel },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        for b in [self.bi, self.bf] {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidField(b));
            }
        }
        if self.bi >= self.bf {
            return Err(Error::InvalidCycle(format!(
                "need 0 < Bi < Bf, got Bi = {} and Bf = {}",
                self.bi, self.bf
            )));
        }
        if let Protocol::Measurement { channel } = &self.protocol {
            if channel.dim() != self.spec.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.spec.dim(),
                    found: channel.dim(),
                });
            }
        }
        Ok(())
    }

    pub fn eta0(&self) -> f64 {
        1.0 - self.bi / self.bf
    }
}

/// Per-level bookkeeping of one cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub label: LevelLabel,
    pub idle: bool,
    /// E_n(Bi)
    pub energy_cold: f64,
    /// E_n(Bf)
    pub energy_hot: f64,
    /// Population after the cold bath.
    pub p_cold: f64,
    /// Population after the hot bath or the measurement.
    pub p_hot: f64,
    pub delta_p: f64,
    /// E_n(Bf)·Δp_n, heat taken in from the source through this level.
    pub q_hot: f64,
    /// −E_n(Bi)·Δp_n, heat taken in from the cold bath through this level.
    pub q_cold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    pub qh: f64,
    pub qc: f64,
    pub w: f64,
    /// −W/Qh, only when the cycle runs as an engine.
    pub eta: Option<f64>,
    /// −W/Qh whenever Qh ≠ 0, engine or not.
    pub eta_raw: Option<f64>,
    pub eta0: f64,
    /// W < 0 and Qh > 0.
    pub engine_mode: bool,
    /// Two labelled levels cross within [Bi, Bf]; the state entering stroke 3
    /// may then be non-passive.
    pub crossing_warning: bool,
    /// Measurement protocol only: the measurement removed energy (Qh < 0).
    pub measurement_cools: bool,
    pub levels: Vec<LevelRecord>,
}

impl CycleRecord {
    pub fn level(&self, label: LevelLabel) -> Option<&LevelRecord> {
        self.levels.iter().find(|l| l.label == label)
    }

    /// Σ q_n^h over idle levels.
    pub fn idle_heat_hot(&self) -> f64 {
        self.levels.iter().filter(|l| l.idle).map(|l| l.q_hot).sum()
    }

    pub fn idle_heat_cold(&self) -> f64 {
        self.levels
            .iter()
            .filter(|l| l.idle)
            .map(|l| l.q_cold)
            .sum()
    }
}

const COOLING_SLACK: f64 = 1e-12;

pub fn run_cycle(cfg: &CycleConfig) -> Result<CycleRecord> {
    cfg.validate()?;
    let cold_spec = labelled_spectrum(&cfg.spec, cfg.bi)?;
    let hot_spec = labelled_spectrum(&cfg.spec, cfg.bf)?;

    // stroke 1, populations keyed by label
    let p_cold = boltzmann_populations(&cold_spec.energies(), cfg.cold);
    // strokes 2 and 3
    let p_hot = match &cfg.protocol {
        Protocol::TwoBath { hot } => boltzmann_populations(&hot_spec.energies(), *hot),
        Protocol::Measurement { channel } => {
            let h_final = hot_spec.operator()?;
            let carried = DensityMatrix::from_populations(&p_cold, &hot_spec.states())?;
            populations_in_basis(&apply_channel(channel, &carried)?, &h_final)?
        }
    };

    let levels: Vec<LevelRecord> = cold_spec
        .levels
        .iter()
        .zip(&hot_spec.levels)
        .zip(p_cold.iter().zip(&p_hot))
        .map(|((lc, lh), (&pc, &ph))| {
            let delta_p = ph - pc;
            LevelRecord {
                label: lc.label,
                idle: lc.idle,
                energy_cold: lc.energy,
                energy_hot: lh.energy,
                p_cold: pc,
                p_hot: ph,
                delta_p,
                q_hot: lh.energy * delta_p,
                q_cold: -lc.energy * delta_p,
            }
        })
        .collect();

    let qh: f64 = levels.iter().map(|l| l.q_hot).sum();
    let qc: f64 = levels.iter().map(|l| l.q_cold).sum();
    let w = -(qh + qc);
    let engine_mode = w < 0.0 && qh > 0.0;
    let eta_raw = (qh != 0.0).then(|| -w / qh);
    let eta = if engine_mode { eta_raw } else { None };
    let measurement_cools =
        matches!(cfg.protocol, Protocol::Measurement { .. }) && qh < -COOLING_SLACK;

    Ok(CycleRecord {
        qh,
        qc,
        w,
        eta,
        eta_raw,
        eta0: cfg.eta0(),
        engine_mode,
        crossing_warning: !detect_level_crossing(&cfg.spec, cfg.bi, cfg.bf).is_empty(),
        measurement_cools,
        levels,
    })
}

/// Analytic two-bath heats, work and efficiency for the three-level model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub qh: f64,
    pub qc: f64,
    pub w: f64,
    /// (Bf − Bi)/(Bf + ΩJ); `None` when a denominator vanishes.
    pub eta: Option<f64>,
    pub omega: Option<f64>,
}

pub fn closed_form_two_bath_qutrit(
    j: f64,
    bi: f64,
    bf: f64,
    beta_c: f64,
    beta_h: f64,
) -> Result<ClosedForm> {
    let cold = BathSpec::new(beta_c)?;
    let hot = BathSpec::new(beta_h)?;
    CycleConfig::two_bath(SubstanceSpec::Qutrit { j }, bi, bf, beta_c, beta_h)?;
    let (bc, bh) = (cold.beta(), hot.beta());
    let e = f64::exp;

    let z_h = 2.0 * (bh * bf).cosh() + e(bh * j);
    let z_c = 2.0 * (bc * bi).cosh() + e(bc * j);
    // (2e^{-βB} + e^{βJ})/Z = 1 + p_{+B} − p_{−B}
    let ph = (2.0 * e(-bh * bf) + e(bh * j)) / z_h;
    let pc = (2.0 * e(-bc * bi) + e(bc * j)) / z_c;
    let idle_h = j * e(bh * j) / z_h;
    let idle_c = j * e(bc * j) / z_c;

    let qh = (ph * bf - idle_h) - (pc * bf - idle_c);
    let qc = -(ph * bi - idle_h) + (pc * bi - idle_c);
    let w = (bf - bi) * (pc - ph);

    let num = e(bc * (bi + j)) + e(bc * (bi + j) + 2.0 * bh * bf)
        - e(bh * (bf + j) + 2.0 * bc * bi)
        - e(bh * (bf + j));
    let den = 2.0 * (e(2.0 * bc * bi) - e(2.0 * bh * bf)) + e(bc * (bi + j))
        - e(bh * (bf + j))
        - e(bc * (bi + j) + 2.0 * bh * bf)
        + e(bh * (bf + j) + 2.0 * bc * bi);
    let omega = (den != 0.0 && den.is_finite()).then(|| num / den);
    let eta = omega.and_then(|om| {
        let d = bf + om * j;
        (d != 0.0 && d.is_finite()).then(|| (bf - bi) / d)
    });
    Ok(ClosedForm {
        qh,
        qc,
        w,
        eta,
        omega,
    })
}

/// 1 − (Σ_idle q_n^h)/Qh, which equals η/η₀.
pub fn efficiency_ratio_identity(rec: &CycleRecord) -> Result<f64> {
    if !rec.engine_mode {
        return Err(Error::NotAnEngine);
    }
    Ok(1.0 - rec.idle_heat_hot() / rec.qh)
}

/// η₀ = 1 − 1/r when all gaps scale by the same ratio r, else `None`.
pub fn uniform_ratio_efficiency_check(cfg: &CycleConfig) -> Option<f64> {
    check_uniform_gap_ratio(&cfg.spec, cfg.bi, cfg.bf).map(|r| 1.0 - 1.0 / r)
}
