//! Turning a [`ScenarioConfig`] into solver inputs and running it.

use std::fs::File;
use std::io::BufReader;

use num_complex::Complex64;
use qfc_core::analysis::{convert_time_bin_qubit, quantum_efficiency, ConversionResult, QubitTransferResult};
use qfc_core::physics::{
    check_regime, dk_mismatch, phase_matched, wave_number, CouplingConvention, RegimeReport,
};
use qfc_core::propagation::{
    compare_tiers, propagate, pulse_time_grid, FieldHistory, FullOptions, Medium,
    PropagationGrid, TierComparison,
};
use qfc_core::signals::{gaussian_pulse, Carrier, PulseEnvelope, TimeBinQubit};
use qfc_core::Error as CoreError;
use thiserror::Error;

use crate::config::{ConfigError, PulseShape, ScenarioConfig};

/// Samples per pulse width when `grid.dt_s` is absent.
pub const DEFAULT_SAMPLES_PER_WIDTH: f64 = 40.0;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
    #[error("{path}: {source}")]
    Output {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Numerical(_) | RunError::Output { .. } => 3,
        }
    }
}

/// Errors raised while setting up a run point at bad input; everything
/// else is numerical.
fn classify(e: CoreError) -> RunError {
    match e {
        CoreError::InvalidParameter { .. }
        | CoreError::GridTooShort { .. }
        | CoreError::StepSize(_)
        | CoreError::PropagationGrid(_)
        | CoreError::OverlappingBins { .. }
        | CoreError::Unsupported(_)
        | CoreError::EnvelopeFile(_) => RunError::Config(ConfigError::Invariant(e)),
        other => RunError::Numerical(other),
    }
}

/// Phase mismatch Δk·L for the collinear geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatch {
    pub dk_l: f64,
    pub ok: bool,
}

pub struct Scenario {
    pub config: ScenarioConfig,
    pub medium: Medium<f64>,
    pub grid: PropagationGrid<f64>,
    pub input: PulseEnvelope<f64>,
    pub qubit: Option<TimeBinQubit<f64>>,
    pub regime: RegimeReport<f64>,
    pub phase_match: Option<PhaseMatch>,
    pub options: FullOptions,
}

impl Scenario {
    pub fn build(config: &ScenarioConfig) -> Result<Self, RunError> {
        config.validate()?;
        let convention = CouplingConvention {
            prefactor: config.convention_prefactor,
        };
        let mut medium = Medium::new(config.atoms, config.drive, convention).map_err(classify)?;
        if let Some(bl) = config.beta_l {
            medium = medium.with_beta_l(bl);
        }
        let params = medium.params;
        let grid = match config.grid.n_z {
            Some(n) => PropagationGrid::with_slices(&params, n),
            None => PropagationGrid::default_for(&params),
        }
        .map_err(classify)?;

        let width = config.pulse.width;
        let dt = config.grid.dt.unwrap_or(width / DEFAULT_SAMPLES_PER_WIDTH);
        let extra = config.qubit.map_or(0.0, |q| q.tau);
        let (input, qubit) = match &config.pulse.shape {
            PulseShape::Gaussian => {
                let tg = pulse_time_grid(config.pulse.center, width, extra, &params, dt)
                    .map_err(classify)?;
                match config.qubit {
                    Some(q) => {
                        let qb = TimeBinQubit::gaussian(q.a, q.b, config.pulse.center, width, q.tau, tg)
                            .map_err(classify)?;
                        (qb.envelope(), Some(qb))
                    }
                    None => (
                        gaussian_pulse(config.pulse.center, width, tg, Carrier::One)
                            .map_err(classify)?,
                        None,
                    ),
                }
            }
            PulseShape::File(path) => {
                let file = File::open(path).map_err(|source| ConfigError::Io {
                    path: path.clone(),
                    source,
                })?;
                let raw = PulseEnvelope::read_csv(BufReader::new(file), Carrier::One)
                    .map_err(classify)?;
                let n = raw.photon_number();
                if !(n > 0.0) {
                    return Err(classify(CoreError::EmptyEnvelope(n)));
                }
                let profile = raw.scaled(Complex64::new(1.0 / n.sqrt(), 0.0));
                match config.qubit {
                    Some(q) => {
                        let qb = TimeBinQubit::from_profile(q.a, q.b, profile, width, q.tau)
                            .map_err(classify)?;
                        (qb.envelope(), Some(qb))
                    }
                    None => (profile, None),
                }
            }
        };

        let regime = check_regime(&params, width, &config.atoms, &config.thresholds);
        let phase_match = config.drive_wavelengths.map(|w| {
            let dk = dk_mismatch(
                wave_number(config.atoms.lambda1),
                wave_number(w.coupling),
                wave_number(config.atoms.lambda2),
                wave_number(w.dressing),
            );
            PhaseMatch {
                dk_l: dk * config.atoms.length,
                ok: phase_matched(dk, config.atoms.length, &config.thresholds),
            }
        });
        let options = FullOptions {
            substeps: config.grid.substeps,
        };
        if config.tier == qfc_core::Tier::Full {
            options
                .substeps_for(input.grid.dt(), &medium.coherence)
                .map_err(classify)?;
        }
        Ok(Self {
            config: config.clone(),
            medium,
            grid,
            input,
            qubit,
            regime,
            phase_match,
            options,
        })
    }

    pub fn vacuum(&self) -> PulseEnvelope<f64> {
        PulseEnvelope::vacuum(self.input.grid, Carrier::Two)
    }

    pub fn propagate(&self) -> Result<FieldHistory<f64>, RunError> {
        propagate(
            self.config.tier,
            &self.input,
            &self.vacuum(),
            &self.medium,
            &self.grid,
            &self.options,
        )
        .map_err(classify)
    }

    pub fn simulate(&self) -> Result<(FieldHistory<f64>, ConversionResult<f64>), RunError> {
        let history = self.propagate()?;
        let result = quantum_efficiency(&history).map_err(RunError::Numerical)?;
        Ok((history, result))
    }

    pub fn qubit_transfer(&self) -> Result<QubitTransferResult<f64>, RunError> {
        let qubit = self.qubit.as_ref().ok_or_else(|| {
            ConfigError::Missing("qubit.a_re".into())
        })?;
        convert_time_bin_qubit(qubit, self.config.tier, &self.medium, &self.grid, &self.options)
            .map_err(classify)
    }

    pub fn compare_tiers(&self) -> Result<TierComparison<f64>, RunError> {
        self.options
            .substeps_for(self.input.grid.dt(), &self.medium.coherence)
            .map_err(classify)?;
        compare_tiers(&self.input, &self.medium, &self.grid, &self.options).map_err(classify)
    }
}
