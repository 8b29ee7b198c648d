//! Envelope propagation through the medium at three levels of approximation.
//!
//! All tiers work in the retarded frame τ = t − z/v_ref. Slice 0 holds the
//! inputs, slice `n_z` the outputs at z = L.

mod analytic;
mod full;
mod reduced;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

pub use analytic::{analytic_history, analytic_solution, mixing_matrix};
pub use full::{propagate_full, FullOptions};
pub use reduced::propagate_reduced;

use crate::analysis::{quantum_efficiency, ConversionResult};
use crate::coherence::CoherenceParams;
use crate::error::{Error, Result};
use crate::physics::{derive_params, AtomicSystem, CouplingConvention, DerivedParams, DriveConfig};
use crate::scalar::{Real, Shortest, C};
use crate::signals::{Carrier, PulseEnvelope, TimeGrid};

/// Largest phase advance per slice from β or κ.
pub const MAX_PHASE_PER_SLICE: f64 = 0.05;
/// Per-slice phase targeted by [`PropagationGrid::default_for`].
pub const DEFAULT_PHASE_PER_SLICE: f64 = 0.005;
pub const MIN_SLICES: usize = 8;
pub const DEFAULT_MIN_SLICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    Analytic,
    Reduced,
    Full,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Analytic, Tier::Reduced, Tier::Full];

    pub fn name(self) -> &'static str {
        match self {
            Tier::Analytic => "analytic",
            Tier::Reduced => "reduced",
            Tier::Full => "full",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Tier::Analytic),
            "reduced" => Ok(Tier::Reduced),
            "full" => Ok(Tier::Full),
            other => Err(Error::invalid(
                "tier",
                format!("unknown tier `{other}` (analytic | reduced | full)"),
            )),
        }
    }
}

/// Atoms, drive and everything derived from them, as seen by the solvers.
///
/// `params.beta` is read by the reduced and analytic tiers; the full tier
/// only uses `coherence`. Both may be edited independently, for instance to
/// switch off one coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium<T> {
    pub atoms: AtomicSystem<T>,
    pub drive: DriveConfig<T>,
    pub params: DerivedParams<T>,
    pub coherence: CoherenceParams<T>,
}

impl<T: Real> Medium<T> {
    pub fn new(
        atoms: AtomicSystem<T>,
        drive: DriveConfig<T>,
        convention: CouplingConvention<T>,
    ) -> Result<Self> {
        let params = derive_params(&atoms, &drive, convention)?;
        Ok(Self {
            atoms,
            drive,
            params,
            coherence: CoherenceParams::collective(&drive, &params),
        })
    }

    /// Overrides βL for the reduced and analytic tiers.
    pub fn with_beta_l(mut self, beta_l: T) -> Self {
        self.params = self.params.with_beta(beta_l / self.params.length);
        self
    }
}

/// z discretization and co-moving frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationGrid<T> {
    n_z: usize,
    length: T,
    v_ref: T,
}

impl<T: Real> PropagationGrid<T> {
    pub fn new(n_z: usize, length: T, v_ref: T) -> Result<Self> {
        if n_z < MIN_SLICES {
            return Err(Error::PropagationGrid(format!(
                "n_z = {n_z} below the minimum of {MIN_SLICES}"
            )));
        }
        if !(length > T::zero() && length.is_finite()) {
            return Err(Error::PropagationGrid("length must be finite and > 0".into()));
        }
        if !(v_ref > T::zero() && v_ref.is_finite()) {
            return Err(Error::PropagationGrid(
                "reference velocity must be finite and > 0".into(),
            ));
        }
        Ok(Self { n_z, length, v_ref })
    }

    /// Enough slices for 0.005 rad of β or κ per slice, at least 64, in the
    /// harmonic-mean frame.
    pub fn default_for(params: &DerivedParams<T>) -> Result<Self> {
        let n = Self::default_slices(params);
        Self::with_slices(params, n)
    }

    pub fn default_slices(params: &DerivedParams<T>) -> usize {
        let phase = Self::max_rate(params) * params.length;
        let n = (phase / T::lit(DEFAULT_PHASE_PER_SLICE))
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX);
        n.max(DEFAULT_MIN_SLICES)
    }

    pub fn with_slices(params: &DerivedParams<T>, n_z: usize) -> Result<Self> {
        let grid = Self::new(n_z, params.length, params.reference_velocity())?;
        grid.validate_for(params)?;
        Ok(grid)
    }

    fn max_rate(params: &DerivedParams<T>) -> T {
        params
            .beta
            .abs()
            .max(params.kappa1.abs())
            .max(params.kappa2.abs())
    }

    /// Checks dz·β ≤ 0.05 and dz·κᵢ ≤ 0.05.
    pub fn validate_for(&self, params: &DerivedParams<T>) -> Result<()> {
        if (self.length - params.length).abs() > T::lit(1e-12) * params.length {
            return Err(Error::PropagationGrid(format!(
                "grid length {} differs from medium length {}",
                self.length, params.length
            )));
        }
        let limit = T::lit(MAX_PHASE_PER_SLICE);
        for (name, rate) in [
            ("beta", params.beta),
            ("kappa1", params.kappa1),
            ("kappa2", params.kappa2),
        ] {
            let per_slice = self.dz() * rate.abs();
            if per_slice > limit {
                return Err(Error::PropagationGrid(format!(
                    "dz·{name} = {per_slice:.4} exceeds {MAX_PHASE_PER_SLICE}; use at least {} slices",
                    (rate.abs() * self.length / limit).ceil()
                )));
            }
        }
        Ok(())
    }

    pub fn n_z(&self) -> usize {
        self.n_z
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn v_ref(&self) -> T {
        self.v_ref
    }

    pub fn with_v_ref(self, v_ref: T) -> Result<Self> {
        Self::new(self.n_z, self.length, v_ref)
    }

    pub fn dz(&self) -> T {
        self.length / T::from_usize_lossy(self.n_z)
    }

    pub fn z(&self, slice: usize) -> T {
        if slice == self.n_z {
            self.length
        } else {
            self.dz() * T::from_usize_lossy(slice)
        }
    }

    /// Slice index at `z`, if `z` lies on the grid.
    pub fn slice_of(&self, z: T) -> Option<usize> {
        let x = z / self.dz();
        let k = x.round();
        if (x - k).abs() > T::lit(1e-6) || k < T::zero() {
            return None;
        }
        k.to_usize().filter(|&k| k <= self.n_z)
    }
}

/// Retarded-time window for a pulse centered at `center` with FWHM
/// `width`, extended by `extra` after the pulse (the second time bin) and by
/// the largest group-delay walk-off relative to the frame.
pub fn pulse_time_grid<T: Real>(
    center: T,
    width: T,
    extra: T,
    params: &DerivedParams<T>,
    max_dt: T,
) -> Result<TimeGrid<T>> {
    let v_ref = params.reference_velocity();
    let walk = [params.v1, params.v2]
        .iter()
        .map(|&v| (params.length / v - params.length / v_ref).abs())
        .fold(T::zero(), |a, b| a.max(b));
    let span = T::lit(6.0) * width;
    TimeGrid::with_max_spacing(center - span - walk, center + extra + span + walk, max_dt)
}

/// e₁(z, τ), e₂(z, τ) on slices 0..=n_z.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldHistory<T> {
    grid: PropagationGrid<T>,
    time: TimeGrid<T>,
    e1: Vec<C<T>>,
    e2: Vec<C<T>>,
}

impl<T: Real> FieldHistory<T> {
    pub(crate) fn with_inputs(
        grid: PropagationGrid<T>,
        in1: &PulseEnvelope<T>,
        in2: &PulseEnvelope<T>,
    ) -> Result<Self> {
        if in1.grid != in2.grid {
            return Err(Error::GridMismatch);
        }
        let slices = grid.n_z + 1;
        let mut e1 = Vec::with_capacity(slices * in1.samples.len());
        let mut e2 = Vec::with_capacity(slices * in1.samples.len());
        e1.extend_from_slice(&in1.samples);
        e2.extend_from_slice(&in2.samples);
        Ok(Self {
            grid,
            time: in1.grid,
            e1,
            e2,
        })
    }

    /// Appends the next slice, rejecting non-finite values.
    pub(crate) fn push(&mut self, e1: &[C<T>], e2: &[C<T>]) -> Result<()> {
        let slice = self.stored_slices();
        if slice > self.grid.n_z {
            return Err(Error::PropagationGrid("history already complete".into()));
        }
        let finite = |v: &[C<T>]| v.iter().all(|x| x.re.is_finite() && x.im.is_finite());
        if !(finite(e1) && finite(e2)) {
            return Err(Error::NonFinite { slice });
        }
        self.e1.extend_from_slice(e1);
        self.e2.extend_from_slice(e2);
        Ok(())
    }

    fn stored_slices(&self) -> usize {
        self.e1.len() / self.time.len()
    }

    pub fn grid(&self) -> &PropagationGrid<T> {
        &self.grid
    }

    pub fn time_grid(&self) -> &TimeGrid<T> {
        &self.time
    }

    pub fn n_slices(&self) -> usize {
        self.grid.n_z + 1
    }

    pub fn slice(&self, carrier: Carrier, k: usize) -> &[C<T>] {
        let n = self.time.len();
        let data = match carrier {
            Carrier::One => &self.e1,
            Carrier::Two => &self.e2,
        };
        &data[k * n..(k + 1) * n]
    }

    pub fn envelope(&self, carrier: Carrier, k: usize) -> PulseEnvelope<T> {
        PulseEnvelope {
            grid: self.time,
            samples: self.slice(carrier, k).to_vec(),
            carrier,
        }
    }

    pub fn input(&self, carrier: Carrier) -> PulseEnvelope<T> {
        self.envelope(carrier, 0)
    }

    pub fn output(&self, carrier: Carrier) -> PulseEnvelope<T> {
        self.envelope(carrier, self.grid.n_z)
    }

    /// (n₁, n₂) at slice `k`.
    pub fn photon_numbers(&self, k: usize) -> (T, T) {
        let n = |c| {
            self.slice(c, k).iter().map(|x| x.norm_sqr()).sum::<T>() * self.time.dt()
        };
        (n(Carrier::One), n(Carrier::Two))
    }

    /// max over slices of |n₁ + n₂ − n₁(0) − n₂(0)|.
    pub fn max_conservation_residual(&self) -> T {
        let (a, b) = self.photon_numbers(0);
        let total = a + b;
        (0..self.n_slices())
            .map(|k| {
                let (x, y) = self.photon_numbers(k);
                (x + y - total).abs()
            })
            .fold(T::zero(), |m, r| m.max(r))
    }

    /// Writes `z_m,tau_s,re_e1,im_e1,re_e2,im_e2`, z-major. With
    /// `decimate = K > 1` only every K-th slice (plus z = L) and every K-th
    /// τ sample are written.
    pub fn write_csv<W: Write>(&self, mut out: W, decimate: usize) -> std::io::Result<()> {
        let k = decimate.max(1);
        writeln!(out, "z_m,tau_s,re_e1,im_e1,re_e2,im_e2")?;
        let last = self.grid.n_z;
        for slice in (0..=last).filter(|s| s % k == 0 || *s == last) {
            let z = Shortest(self.grid.z(slice));
            let (e1, e2) = (self.slice(Carrier::One, slice), self.slice(Carrier::Two, slice));
            for j in (0..self.time.len()).step_by(k) {
                writeln!(
                    out,
                    "{z},{},{},{},{},{}",
                    Shortest(self.time.time(j)),
                    Shortest(e1[j].re),
                    Shortest(e1[j].im),
                    Shortest(e2[j].re),
                    Shortest(e2[j].im)
                )?;
            }
        }
        Ok(())
    }
}

/// Runs one tier. `options` only affects the full tier.
pub fn propagate<T: Real>(
    tier: Tier,
    in1: &PulseEnvelope<T>,
    in2: &PulseEnvelope<T>,
    medium: &Medium<T>,
    grid: &PropagationGrid<T>,
    options: &FullOptions,
) -> Result<FieldHistory<T>> {
    match tier {
        Tier::Analytic => analytic_history(in1, in2, medium.params.beta, grid),
        Tier::Reduced => propagate_reduced(in1, in2, &medium.params, grid),
        Tier::Full => propagate_full(in1, in2, medium, grid, options),
    }
}

/// Largest tolerated η difference between tiers before a comparison is
/// flagged.
pub const TIER_AGREEMENT: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct TierComparison<T> {
    pub results: Vec<(Tier, ConversionResult<T>)>,
    /// |η_a − η_b| for each pair, in `Tier::ALL` order.
    pub eta_differences: Vec<(Tier, Tier, T)>,
    /// Overlap fidelity between the carrier-2 outputs of each pair, when
    /// both are non-empty.
    pub output_overlaps: Vec<(Tier, Tier, Option<T>)>,
    /// Some pair differs in η by more than [`TIER_AGREEMENT`].
    pub flagged: bool,
}

impl<T: Real> TierComparison<T> {
    pub fn result(&self, tier: Tier) -> Option<&ConversionResult<T>> {
        self.results.iter().find(|(t, _)| *t == tier).map(|(_, r)| r)
    }
}

/// Propagates the same carrier-1 photon through all three tiers.
pub fn compare_tiers<T: Real>(
    in1: &PulseEnvelope<T>,
    medium: &Medium<T>,
    grid: &PropagationGrid<T>,
    options: &FullOptions,
) -> Result<TierComparison<T>> {
    let vacuum = PulseEnvelope::vacuum(in1.grid, Carrier::Two);
    let mut histories = Vec::new();
    for tier in Tier::ALL {
        histories.push((tier, propagate(tier, in1, &vacuum, medium, grid, options)?));
    }
    let mut results = Vec::new();
    for (tier, h) in &histories {
        results.push((*tier, quantum_efficiency(h)?));
    }
    let mut eta_differences = Vec::new();
    let mut output_overlaps = Vec::new();
    for i in 0..histories.len() {
        for j in i + 1..histories.len() {
            let (ta, ha) = &histories[i];
            let (tb, hb) = &histories[j];
            let d = (results[i].1.eta - results[j].1.eta).abs();
            eta_differences.push((*ta, *tb, d));
            let overlap = crate::signals::overlap_fidelity(
                &ha.output(Carrier::Two),
                &hb.output(Carrier::Two),
            )
            .ok();
            output_overlaps.push((*ta, *tb, overlap));
        }
    }
    let flagged = eta_differences
        .iter()
        .any(|(_, _, d)| *d > T::lit(TIER_AGREEMENT));
    Ok(TierComparison {
        results,
        eta_differences,
        output_overlaps,
        flagged,
    })
}

/// Splits a retarded-frame advection ∂_z E = a ∂_τ E over `dz` into a shift
/// in samples.
pub(crate) fn advection_samples<T: Real>(a: T, dz: T, dt: T) -> T {
    a * dz / dt
}
