use super::{advection_samples, FieldHistory, Medium, PropagationGrid};
use crate::coherence::{
    bare_from_dressed, integrate_along_into, CoherenceParams, CoherenceState,
    MAX_STEP_RATE_PRODUCT,
};
use crate::constants::SPEED_OF_LIGHT;
use crate::error::Result;
use crate::scalar::{imag_unit, Real, C};
use crate::signals::PulseEnvelope;
use crate::spectral::Shifter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FullOptions {
    /// RK4 steps per τ sample. `None` picks the smallest count meeting the
    /// step-size bound; an explicit value violating it is an error.
    pub substeps: Option<usize>,
}

impl FullOptions {
    pub fn substeps_for<T: Real>(&self, dt: T, params: &CoherenceParams<T>) -> Result<usize> {
        let n = match self.substeps {
            Some(n) => n.max(1),
            None => (dt * params.max_rate() / T::lit(MAX_STEP_RATE_PRODUCT))
                .ceil()
                .to_usize()
                .unwrap_or(1)
                .max(1),
        };
        params.check_step(dt / T::from_usize_lossy(n))?;
        Ok(n)
    }
}

/// Field equations driven by the dressed coherences, marched in z.
///
/// At every slice the coherences are integrated along τ from zero for the
/// current fields, mapped to the bare coherences, and the fields advanced
/// by dz. The free-space transport (1/v_ref − 1/c)∂_τ is split off and
/// applied exactly as half-step spectral shifts around a second-order
/// midpoint step of the medium response.
pub fn propagate_full<T: Real>(
    in1: &PulseEnvelope<T>,
    in2: &PulseEnvelope<T>,
    medium: &Medium<T>,
    grid: &PropagationGrid<T>,
    options: &FullOptions,
) -> Result<FieldHistory<T>> {
    grid.validate_for(&medium.params)?;
    let mut history = FieldHistory::with_inputs(*grid, in1, in2)?;
    let cp = medium.coherence;
    let dt = in1.grid.dt();
    let substeps = options.substeps_for(dt, &cp)?;
    let dz = grid.dz();
    let half = T::lit(0.5);
    let a = T::one() / grid.v_ref() - T::one() / T::lit(SPEED_OF_LIGHT);
    let shift = advection_samples(a, dz * half, dt);

    let n = in1.samples.len();
    let mut source = Source::new(n, dt, substeps, cp);
    let mut shifter = Shifter::new(n);
    let mut e1 = in1.samples.clone();
    let mut e2 = in2.samples.clone();
    let mut mid1 = vec![C::<T>::default(); n];
    let mut mid2 = vec![C::<T>::default(); n];

    for _ in 0..grid.n_z() {
        shifter.advance(&mut e1, shift);
        shifter.advance(&mut e2, shift);

        source.evaluate(&e1, &e2)?;
        for k in 0..n {
            mid1[k] = e1[k] + source.s1[k].scale(dz * half);
            mid2[k] = e2[k] + source.s2[k].scale(dz * half);
        }
        source.evaluate(&mid1, &mid2)?;
        for k in 0..n {
            e1[k] = e1[k] + source.s1[k].scale(dz);
            e2[k] = e2[k] + source.s2[k].scale(dz);
        }

        shifter.advance(&mut e1, shift);
        shifter.advance(&mut e2, shift);
        history.push(&e1, &e2)?;
    }
    Ok(history)
}

/// i√Gᵢ·σ along τ for given fields, with reusable buffers.
struct Source<T> {
    dt: T,
    substeps: usize,
    params: CoherenceParams<T>,
    states: Vec<CoherenceState<T>>,
    s1: Vec<C<T>>,
    s2: Vec<C<T>>,
}

impl<T: Real> Source<T> {
    fn new(n: usize, dt: T, substeps: usize, params: CoherenceParams<T>) -> Self {
        Self {
            dt,
            substeps,
            params,
            states: Vec::with_capacity(n),
            s1: vec![C::default(); n],
            s2: vec![C::default(); n],
        }
    }

    fn evaluate(&mut self, e1: &[C<T>], e2: &[C<T>]) -> Result<()> {
        integrate_along_into(e1, e2, self.dt, self.substeps, &self.params, &mut self.states)?;
        let i = imag_unit::<T>();
        let (g1, g2) = (i.scale(self.params.g1), i.scale(self.params.g2));
        for (k, state) in self.states.iter().enumerate() {
            let (sigma01, sigma32) = bare_from_dressed(state);
            self.s1[k] = g1 * sigma01;
            self.s2[k] = g2 * sigma32;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::desk_medium;
    use super::super::{pulse_time_grid, Tier};
    use super::*;
    use crate::error::Error;
    use crate::physics::DriveConfig;
    use crate::signals::{gaussian_pulse, overlap_fidelity, Carrier, TimeGrid};

    fn run(medium: &Medium<f64>, width: f64, n_z: usize) -> FieldHistory<f64> {
        let tg = pulse_time_grid(0.0, width, 0.0, &medium.params, width / 40.0).unwrap();
        let a = gaussian_pulse(0.0, width, tg, Carrier::One).unwrap();
        let v = PulseEnvelope::vacuum(tg, Carrier::Two);
        let grid = PropagationGrid::with_slices(&medium.params, n_z).unwrap();
        propagate_full(&a, &v, medium, &grid, &FullOptions::default()).unwrap()
    }

    #[test]
    fn zero_input_stays_zero() {
        let m = desk_medium();
        let tg = TimeGrid::new(-50e-9, 50e-9, 201).unwrap();
        let v1 = PulseEnvelope::vacuum(tg, Carrier::One);
        let v2 = PulseEnvelope::vacuum(tg, Carrier::Two);
        let grid = PropagationGrid::with_slices(&m.params, 64).unwrap();
        let h = propagate_full(&v1, &v2, &m, &grid, &FullOptions::default()).unwrap();
        assert!(h.output(Carrier::One).samples.iter().all(|x| *x == C::default()));
        assert!(h.output(Carrier::Two).samples.iter().all(|x| *x == C::default()));
    }

    #[test]
    fn single_channel_eit_delay_and_loss() {
        // Far-detuned |−⟩ branch so only the |+⟩ EIT structure responds.
        let desk = desk_medium();
        let omega = desk.drive.omega_c;
        let drive = DriveConfig::resonant(omega, 20.0 * omega).unwrap();
        let mut m = Medium::new(desk.atoms, drive, Default::default()).unwrap();
        m.coherence.g2 = 0.0;
        let width = 20e-9;
        let tg = pulse_time_grid(0.0, width, 0.0, &m.params, width / 40.0).unwrap();
        let a = gaussian_pulse(0.0, width, tg, Carrier::One).unwrap();
        let v = PulseEnvelope::vacuum(tg, Carrier::Two);
        let grid = PropagationGrid::with_slices(&m.params, 128)
            .unwrap()
            .with_v_ref(m.params.v1)
            .unwrap();
        let h = propagate_full(&a, &v, &m, &grid, &FullOptions::default()).unwrap();
        let out = h.output(Carrier::One);
        assert!(h.output(Carrier::Two).photon_number() == 0.0);
        let delay = grid.length() / grid.v_ref() + out.centroid().unwrap() - a.centroid().unwrap();
        let expected_delay = m.params.length / m.params.v1;
        assert!(
            (delay / expected_delay - 1.0).abs() < 0.02,
            "delay {delay} vs {expected_delay}"
        );
        let loss = -0.5 * out.photon_number().ln();
        let expected_loss = m.params.kappa1 * m.params.length;
        assert!(
            (loss / expected_loss - 1.0).abs() < 0.02,
            "κL {loss} vs {expected_loss}"
        );
    }

    #[test]
    fn desk_conversion_close_to_ideal() {
        let m = desk_medium();
        let h = run(&m, 10e-9, 315);
        let (n1, n2) = h.photon_numbers(h.grid().n_z());
        let eta = n2;
        assert!((eta - 1.0).abs() < 0.05, "η = {eta}, residual {n1}");
        let expect = h.input(Carrier::One);
        let out = h.output(Carrier::Two);
        let shift = out.centroid().unwrap() - expect.centroid().unwrap();
        assert!(overlap_fidelity(&out, &expect.delayed(shift)).unwrap() > 0.99);
        assert_eq!(Tier::Full.name(), "full");
    }

    #[test]
    fn explicit_substeps_checked() {
        let m = desk_medium();
        let tg = TimeGrid::new(-50e-9, 50e-9, 201).unwrap();
        let a = gaussian_pulse(0.0, 8e-9, tg, Carrier::One).unwrap();
        let v = PulseEnvelope::vacuum(tg, Carrier::Two);
        let grid = PropagationGrid::with_slices(&m.params, 64).unwrap();
        let options = FullOptions { substeps: Some(1) };
        assert!(matches!(
            propagate_full(&a, &v, &m, &grid, &options),
            Err(Error::StepSize(_))
        ));
        let auto = FullOptions::default().substeps_for(tg.dt(), &m.coherence).unwrap();
        assert!(tg.dt() / auto as f64 * m.coherence.max_rate() <= 0.1);
        assert!(tg.dt() / (auto - 1) as f64 * m.coherence.max_rate() > 0.1);
    }
}
