use num_complex::Complex;

use super::{FieldHistory, PropagationGrid};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::signals::PulseEnvelope;

/// [[cos βz, i sin βz], [i sin βz, cos βz]].
pub fn mixing_matrix<T: Real>(beta_z: T) -> [[C<T>; 2]; 2] {
    let (s, c) = beta_z.sin_cos();
    let cc = Complex::new(c, T::zero());
    let is = Complex::new(T::zero(), s);
    [[cc, is], [is, cc]]
}

/// Closed-form mode mixing for equal group velocities, in the co-moving
/// frame: outᵢ(τ) = inᵢ(τ)·cos βz + i·inⱼ(τ)·sin βz.
pub fn analytic_solution<T: Real>(
    in1: &PulseEnvelope<T>,
    in2: &PulseEnvelope<T>,
    beta: T,
    z: T,
) -> Result<(PulseEnvelope<T>, PulseEnvelope<T>)> {
    if in1.grid != in2.grid {
        return Err(Error::GridMismatch);
    }
    let m = mixing_matrix(beta * z);
    let mix = |row: [C<T>; 2]| -> Vec<C<T>> {
        in1.samples
            .iter()
            .zip(&in2.samples)
            .map(|(a, b)| row[0] * a + row[1] * b)
            .collect()
    };
    Ok((
        PulseEnvelope {
            samples: mix(m[0]),
            ..in1.clone()
        },
        PulseEnvelope {
            samples: mix(m[1]),
            ..in2.clone()
        },
    ))
}

/// [`analytic_solution`] evaluated on every slice of `grid`. Slice 0 is a
/// copy of the inputs.
pub fn analytic_history<T: Real>(
    in1: &PulseEnvelope<T>,
    in2: &PulseEnvelope<T>,
    beta: T,
    grid: &PropagationGrid<T>,
) -> Result<FieldHistory<T>> {
    let mut history = FieldHistory::with_inputs(*grid, in1, in2)?;
    for k in 1..=grid.n_z() {
        let (o1, o2) = analytic_solution(in1, in2, beta, grid.z(k))?;
        history.push(&o1.samples, &o2.samples)?;
    }
    Ok(history)
}
