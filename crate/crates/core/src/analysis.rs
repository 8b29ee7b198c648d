//! Photon numbers, efficiency and qubit transfer extracted from a
//! [`FieldHistory`].

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::propagation::{propagate, FieldHistory, FullOptions, Medium, PropagationGrid, Tier};
use crate::scalar::{Real, C};
use crate::signals::{overlap_fidelity, Carrier, PulseEnvelope, TimeBinQubit};

/// Smallest input photon number accepted for normalized ratios.
pub const MIN_INPUT_PHOTONS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionResult<T> {
    /// n₂(L)/n₁(0).
    pub eta: T,
    /// n₁(L)/n₁(0).
    pub residual_n1: T,
    /// |n₁(L) + n₂(L) − n₁(0) − n₂(0)|.
    pub conservation_residual: T,
    /// Overlap fidelity of the dominant output with the input translated by
    /// the measured centroid shift. Zero when both outputs are empty.
    pub shape_fidelity: T,
    /// Lab-frame group delay L/v_ref plus the centroid shift (s).
    pub delay: T,
}

/// |e(z, τ)|² at a grid point.
pub fn intensity<T: Real>(history: &FieldHistory<T>, carrier: Carrier, z: T, tau: T) -> Result<T> {
    let slice = history
        .grid()
        .slice_of(z)
        .ok_or_else(|| Error::OffGrid(format!("z = {z} m is not a slice position")))?;
    let k = history
        .time_grid()
        .index_of(tau)
        .ok_or_else(|| Error::OffGrid(format!("τ = {tau} s is not a sample time")))?;
    Ok(history.slice(carrier, slice)[k].norm_sqr())
}

fn input_photons<T: Real>(history: &FieldHistory<T>) -> Result<T> {
    let (n1, _) = history.photon_numbers(0);
    if !(n1 >= T::lit(MIN_INPUT_PHOTONS)) {
        return Err(Error::EmptyEnvelope(n1.to_f64_lossy()));
    }
    Ok(n1)
}

fn centroid_shift<T: Real>(output: &PulseEnvelope<T>, input: &PulseEnvelope<T>) -> Option<T> {
    Some(output.centroid()? - input.centroid()?)
}

/// Efficiency and shape bookkeeping for a carrier-1 input.
pub fn quantum_efficiency<T: Real>(history: &FieldHistory<T>) -> Result<ConversionResult<T>> {
    let n1_in = input_photons(history)?;
    let (_, n2_in) = history.photon_numbers(0);
    let (n1, n2) = history.photon_numbers(history.grid().n_z());
    let dominant = if n2 >= n1 { Carrier::Two } else { Carrier::One };
    let input = history.input(Carrier::One);
    let output = history.output(dominant);
    let frame = history.grid().length() / history.grid().v_ref();
    let (shape_fidelity, delay) = match centroid_shift(&output, &input) {
        Some(shift) => {
            let template = input.delayed(shift);
            let f = overlap_fidelity(&output, &template).unwrap_or(T::zero());
            (f, frame + shift)
        }
        None => (T::zero(), frame),
    };
    Ok(ConversionResult {
        eta: n2 / n1_in,
        residual_n1: n1 / n1_in,
        conservation_residual: (n1 + n2 - n1_in - n2_in).abs(),
        shape_fidelity,
        delay,
    })
}

/// Residual carrier-1 amplitude √(n₁(L)/n₁(0)); |cos βL| for the closed
/// form.
pub fn complete_conversion_residual<T: Real>(history: &FieldHistory<T>) -> Result<T> {
    let n1_in = input_photons(history)?;
    let (n1, _) = history.photon_numbers(history.grid().n_z());
    Ok((n1 / n1_in).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitTransferResult<T> {
    /// Output amplitudes with the common phase removed.
    pub a_out: C<T>,
    pub b_out: C<T>,
    /// arg(a*·a_out + b*·b_out) before removal (rad).
    pub global_phase: T,
    /// |a*·a_out + b*·b_out|²/(|a_out|² + |b_out|²).
    pub qubit_fidelity: T,
    /// Carrier-2 photon number not carried by the two output bins.
    pub leakage: T,
    /// Carrier-2 photon number at z = L.
    pub eta: T,
}

/// Projects the carrier-2 output of `history` onto the two bins of
/// `qubit`, translated by the measured centroid shift.
pub fn qubit_transfer<T: Real>(
    qubit: &TimeBinQubit<T>,
    history: &FieldHistory<T>,
) -> Result<QubitTransferResult<T>> {
    let input = history.input(Carrier::One);
    let output = history.output(Carrier::Two);
    let n2 = output.photon_number();
    let shift = centroid_shift(&output, &input)
        .ok_or_else(|| Error::EmptyEnvelope(n2.to_f64_lossy()))?;
    let early = qubit.early.delayed(shift);
    let late = qubit.late.delayed(shift);
    let raw_a = early.inner(&output)?;
    let raw_b = late.inner(&output)?;
    let captured = raw_a.norm_sqr() + raw_b.norm_sqr();
    if !(captured >= T::lit(MIN_INPUT_PHOTONS)) {
        return Err(Error::EmptyEnvelope(captured.to_f64_lossy()));
    }
    let overlap = qubit.a.conj() * raw_a + qubit.b.conj() * raw_b;
    let global_phase = overlap.arg();
    let unphase = Complex::from_polar(T::one(), -global_phase);
    Ok(QubitTransferResult {
        a_out: raw_a * unphase,
        b_out: raw_b * unphase,
        global_phase,
        qubit_fidelity: (overlap.norm_sqr() / captured).min(T::one()),
        leakage: n2 - captured,
        eta: n2,
    })
}

/// Sends a time-bin qubit through one tier and recovers its amplitudes at
/// carrier 2.
pub fn convert_time_bin_qubit<T: Real>(
    qubit: &TimeBinQubit<T>,
    tier: Tier,
    medium: &Medium<T>,
    grid: &PropagationGrid<T>,
    options: &FullOptions,
) -> Result<QubitTransferResult<T>> {
    let overlap = qubit.early.inner(&qubit.late)?.norm();
    if overlap >= T::lit(1e-6) {
        return Err(Error::OverlappingBins {
            overlap: overlap.to_f64_lossy(),
        });
    }
    let input = qubit.envelope();
    let vacuum = PulseEnvelope::vacuum(input.grid, Carrier::Two);
    let history = propagate(tier, &input, &vacuum, medium, grid, options)?;
    qubit_transfer(qubit, &history)
}
