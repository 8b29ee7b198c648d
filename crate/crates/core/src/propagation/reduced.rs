use super::{advection_samples, FieldHistory, PropagationGrid};
use crate::error::{Error, Result};
use crate::physics::DerivedParams;
use crate::scalar::{imag_unit, Real, C};
use crate::signals::PulseEnvelope;
use crate::spectral::Shifter;

/// Lossless coupled-wave model ∂_z Eⱼ + (1/vⱼ)∂_t Eⱼ = iβEₖ, marched in z by
/// Strang splitting: exact spectral half-step transport in the co-moving
/// frame around a midpoint step of the mixing.
pub fn propagate_reduced<T: Real>(
    in1: &PulseEnvelope<T>,
    in2: &PulseEnvelope<T>,
    params: &DerivedParams<T>,
    grid: &PropagationGrid<T>,
) -> Result<FieldHistory<T>> {
    for (name, x) in [
        ("beta", params.beta),
        ("v1", params.v1),
        ("v2", params.v2),
    ] {
        if !x.is_finite() {
            return Err(Error::invalid(name, "must be finite"));
        }
    }
    grid.validate_for(params)?;
    let mut history = FieldHistory::with_inputs(*grid, in1, in2)?;
    let dz = grid.dz();
    let dt = in1.grid.dt();
    let inv_ref = T::one() / grid.v_ref();
    let half = T::lit(0.5);
    let shift1 = advection_samples(inv_ref - T::one() / params.v1, dz * half, dt);
    let shift2 = advection_samples(inv_ref - T::one() / params.v2, dz * half, dt);

    let mut shifter = Shifter::new(in1.samples.len());
    let mut e1 = in1.samples.clone();
    let mut e2 = in2.samples.clone();
    let ib = imag_unit::<T>().scale(params.beta);
    let mut mid1: Vec<C<T>> = vec![C::default(); e1.len()];
    let mut mid2: Vec<C<T>> = vec![C::default(); e1.len()];

    for _ in 0..grid.n_z() {
        shifter.advance(&mut e1, shift1);
        shifter.advance(&mut e2, shift2);
        let h = dz * half;
        for k in 0..e1.len() {
            mid1[k] = e1[k] + ib * e2[k] * h;
            mid2[k] = e2[k] + ib * e1[k] * h;
        }
        for k in 0..e1.len() {
            e1[k] = e1[k] + ib * mid2[k] * dz;
            e2[k] = e2[k] + ib * mid1[k] * dz;
        }
        shifter.advance(&mut e1, shift1);
        shifter.advance(&mut e2, shift2);
        history.push(&e1, &e2)?;
    }
    Ok(history)
}

#[cfg(test)]
mod tests {
    use super::super::tests::desk_medium;
    use super::super::{analytic_solution, pulse_time_grid};
    use super::*;
    use crate::signals::{gaussian_pulse, overlap_fidelity, Carrier};
    use num_complex::Complex;
    use std::f64::consts::FRAC_PI_2;

    fn equal_velocity(beta_l: f64) -> DerivedParams<f64> {
        let mut p = desk_medium().with_beta_l(beta_l).params;
        p.v2 = p.v1;
        p
    }

    fn input(p: &DerivedParams<f64>) -> (PulseEnvelope<f64>, PulseEnvelope<f64>) {
        let tg = pulse_time_grid(0.0, 10e-9, 0.0, p, 10e-9 / 40.0).unwrap();
        let a = gaussian_pulse(0.0, 10e-9, tg, Carrier::One).unwrap();
        (a, PulseEnvelope::vacuum(tg, Carrier::Two))
    }

    #[test]
    fn equal_velocities_full_conversion() {
        let p = equal_velocity(FRAC_PI_2);
        let (a, v) = input(&p);
        let grid = PropagationGrid::default_for(&p).unwrap();
        let h = propagate_reduced(&a, &v, &p, &grid).unwrap();
        let (n1, n2) = h.photon_numbers(grid.n_z());
        assert!(n1 < 1e-6);
        assert!((n2 - 1.0).abs() < 1e-6);
        let expect = a.scaled(Complex::new(0.0, 1.0));
        assert!(overlap_fidelity(&h.output(Carrier::Two), &expect).unwrap() > 0.999999);
        assert!(h.max_conservation_residual() < 1e-6);
    }

    #[test]
    fn matches_closed_form_pointwise() {
        for beta_l in [0.3, FRAC_PI_2, 2.5] {
            let p = equal_velocity(beta_l);
            let (a, v) = input(&p);
            let grid = PropagationGrid::default_for(&p).unwrap();
            let h = propagate_reduced(&a, &v, &p, &grid).unwrap();
            let (o1, o2) = analytic_solution(&a, &v, p.beta, p.length).unwrap();
            let peak = a.samples.iter().map(|x| x.norm()).fold(0.0, f64::max);
            let err = h
                .output(Carrier::One)
                .samples
                .iter()
                .zip(&o1.samples)
                .chain(h.output(Carrier::Two).samples.iter().zip(&o2.samples))
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(err / peak < 1e-4, "βL = {beta_l}: {}", err / peak);
        }
    }

    #[test]
    fn decoupled_transport_is_pure_delay() {
        let p = desk_medium().with_beta_l(0.0).params;
        let (a, _) = input(&p);
        let b = gaussian_pulse(5e-9, 10e-9, a.grid, Carrier::Two).unwrap();
        let grid = PropagationGrid::default_for(&p).unwrap();
        let h = propagate_reduced(&a, &b, &p, &grid).unwrap();
        let frame = p.length / grid.v_ref();
        for (input, out, v) in [
            (&a, h.output(Carrier::One), p.v1),
            (&b, h.output(Carrier::Two), p.v2),
        ] {
            let expect = input.delayed(p.length / v - frame);
            let err = out
                .samples
                .iter()
                .zip(&expect.samples)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            let peak = input.samples.iter().map(|x| x.norm()).fold(0.0, f64::max);
            assert!(err < 1e-9 * peak);
        }
    }

    #[test]
    fn walk_off_converges_at_second_order() {
        let mut p = equal_velocity(FRAC_PI_2);
        // make the walk-off comparable to the pulse width
        p.v1 = p.length / 8e-9;
        p.v2 = 2.0 * p.v1;
        let tg = pulse_time_grid(0.0, 10e-9, 0.0, &p, 10e-9 / 40.0).unwrap();
        let a = gaussian_pulse(0.0, 10e-9, tg, Carrier::One).unwrap();
        let v = PulseEnvelope::vacuum(tg, Carrier::Two);
        let run = |n: usize| {
            let g = PropagationGrid::with_slices(&p, n).unwrap();
            propagate_reduced(&a, &v, &p, &g).unwrap().output(Carrier::Two)
        };
        let (c, m, f, r) = (run(64), run(128), run(256), run(1024));
        let diff = |x: &PulseEnvelope<f64>| {
            x.samples
                .iter()
                .zip(&r.samples)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        };
        let (ec, em, ef) = (diff(&c), diff(&m), diff(&f));
        assert!(ec / em > 3.5 && em / ef > 3.5, "{ec} {em} {ef}");
        let eta = r.photon_number();
        assert!(eta < 0.99 && eta > 0.3, "{eta}");
    }

    #[test]
    fn non_finite_parameters_rejected() {
        let mut p = equal_velocity(1.0);
        p.beta = f64::NAN;
        let (a, v) = input(&equal_velocity(1.0));
        let g = PropagationGrid::new(64, p.length, p.v1).unwrap();
        assert!(propagate_reduced(&a, &v, &p, &g).is_err());
    }
}
