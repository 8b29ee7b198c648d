//! Sampled single-photon amplitudes.
//!
//! Envelopes are normalized so that the photon number is ∫|f|²dt (units of
//! the samples are s^-1/2); the quantization-volume factor c/L is absorbed
//! into the samples.

use std::io::{BufRead, Write};

use num_complex::Complex;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::scalar::{Real, Shortest, C};
use crate::spectral::Shifter;

/// Which quantum field an envelope belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    One,
    Two,
}

impl Carrier {
    pub fn index(self) -> usize {
        match self {
            Carrier::One => 1,
            Carrier::Two => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Carrier::One => Carrier::Two,
            Carrier::Two => Carrier::One,
        }
    }
}

/// Uniform sampling of [t_start, t_end] with `n_samples` points, both ends
/// included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t_start: T,
    t_end: T,
    n_samples: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_start: T, t_end: T, n_samples: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
            return Err(Error::invalid("grid", "requires finite t_end > t_start"));
        }
        if n_samples < 2 {
            return Err(Error::invalid("grid.n_samples", "must be >= 2"));
        }
        Ok(Self {
            t_start,
            t_end,
            n_samples,
        })
    }

    /// Smallest grid on [t_start, t_end] with spacing at most `max_dt`.
    pub fn with_max_spacing(t_start: T, t_end: T, max_dt: T) -> Result<Self> {
        if !(max_dt > T::zero()) {
            return Err(Error::invalid("grid", "spacing must be > 0"));
        }
        let intervals = ((t_end - t_start) / max_dt).ceil();
        let n = intervals.to_usize().unwrap_or(0).max(1) + 1;
        Self::new(t_start, t_end, n)
    }

    pub fn t_start(&self) -> T {
        self.t_start
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn len(&self) -> usize {
        self.n_samples
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> T {
        (self.t_end - self.t_start) / T::from_usize_lossy(self.n_samples - 1)
    }

    pub fn time(&self, k: usize) -> T {
        self.t_start + self.dt() * T::from_usize_lossy(k)
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_samples).map(move |k| self.time(k))
    }

    /// Index of the sample at `t`, if `t` lies on the grid (to 10⁻⁶ of a
    /// spacing).
    pub fn index_of(&self, t: T) -> Option<usize> {
        let x = (t - self.t_start) / self.dt();
        let k = x.round();
        if (x - k).abs() > T::lit(1e-6) || k < T::zero() {
            return None;
        }
        k.to_usize().filter(|&k| k < self.n_samples)
    }

    fn same_as(&self, other: &Self) -> bool {
        self.n_samples == other.n_samples
            && self.t_start == other.t_start
            && self.t_end == other.t_end
    }
}

/// Complex single-photon amplitude on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PulseEnvelope<T> {
    pub grid: TimeGrid<T>,
    pub samples: Vec<C<T>>,
    pub carrier: Carrier,
}

impl<T: Real> PulseEnvelope<T> {
    pub fn new(grid: TimeGrid<T>, samples: Vec<C<T>>, carrier: Carrier) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::invalid(
                "samples",
                format!("{} samples for a grid of {}", samples.len(), grid.len()),
            ));
        }
        Ok(Self {
            grid,
            samples,
            carrier,
        })
    }

    /// The vacuum envelope.
    pub fn vacuum(grid: TimeGrid<T>, carrier: Carrier) -> Self {
        Self {
            grid,
            samples: vec![Complex::default(); grid.len()],
            carrier,
        }
    }

    pub fn photon_number(&self) -> T {
        photon_number(self)
    }

    pub fn scaled(&self, factor: C<T>) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * factor).collect(),
            ..self.clone()
        }
    }

    pub fn with_carrier(mut self, carrier: Carrier) -> Self {
        self.carrier = carrier;
        self
    }

    /// Returns `self + factor·other`, keeping this envelope's carrier.
    pub fn add_scaled(&self, factor: C<T>, other: &Self) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b * factor)
                .collect(),
            ..self.clone()
        })
    }

    /// Σ conj(pₖ)·qₖ·dt.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let sum: C<T> = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(p, q)| p.conj() * q)
            .fold(Complex::default(), |acc, x| acc + x);
        Ok(sum.scale(self.grid.dt()))
    }

    /// First moment of |f|² (s). `None` for the vacuum.
    pub fn centroid(&self) -> Option<T> {
        let mut weight = T::zero();
        let mut moment = T::zero();
        for (t, s) in self.grid.times().zip(&self.samples) {
            let w = s.norm_sqr();
            weight = weight + w;
            moment = moment + w * t;
        }
        (weight > T::zero()).then(|| moment / weight)
    }

    /// Band-limited translation: returns g(t) = f(t − delay).
    pub fn delayed(&self, delay: T) -> Self {
        let mut samples = self.samples.clone();
        Shifter::new(samples.len()).advance(&mut samples, -delay / self.grid.dt());
        Self {
            samples,
            ..self.clone()
        }
    }

    /// Writes `t_s,re,im` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t_s,re,im")?;
        for (t, s) in self.grid.times().zip(&self.samples) {
            writeln!(out, "{},{},{}", Shortest(t), Shortest(s.re), Shortest(s.im))?;
        }
        Ok(())
    }

    /// Reads a tabulated envelope (`t_s,re,im`, optional header line, `#`
    /// comments). Times must be uniformly spaced.
    pub fn read_csv<R: BufRead>(input: R, carrier: Carrier) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(input);
        let mut rows: Vec<[f64; 3]> = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::EnvelopeFile(e.to_string()))?;
            if record.len() != 3 {
                return Err(Error::EnvelopeFile(format!(
                    "record {}: expected 3 columns (t_s, re, im), found {}",
                    line + 1,
                    record.len()
                )));
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(v) => rows.push([v[0], v[1], v[2]]),
                Err(_) if rows.is_empty() && line == 0 => continue,
                Err(e) => {
                    return Err(Error::EnvelopeFile(format!("record {}: {e}", line + 1)));
                }
            }
        }
        if rows.len() < 2 {
            return Err(Error::EnvelopeFile("need at least two samples".into()));
        }
        let n = rows.len();
        let (t0, t1) = (rows[0][0], rows[n - 1][0]);
        let dt = (t1 - t0) / (n - 1) as f64;
        for (k, row) in rows.iter().enumerate() {
            let expect = t0 + dt * k as f64;
            if (row[0] - expect).abs() > 1e-6 * dt.abs() {
                return Err(Error::EnvelopeFile(format!(
                    "non-uniform time column at record {}",
                    k + 1
                )));
            }
        }
        let grid = TimeGrid::new(T::lit(t0), T::lit(t1), n)?;
        let samples = rows
            .iter()
            .map(|r| Complex::new(T::lit(r[1]), T::lit(r[2])))
            .collect();
        Self::new(grid, samples, carrier)
    }
}

/// Σ|fₖ|²·dt.
pub fn photon_number<T: Real>(p: &PulseEnvelope<T>) -> T {
    let sum: T = p.samples.iter().map(|s| s.norm_sqr()).sum();
    sum * p.grid.dt()
}

/// |⟨p|q⟩|²/(n_p n_q); 1 iff q is a complex multiple of p.
pub fn overlap_fidelity<T: Real>(p: &PulseEnvelope<T>, q: &PulseEnvelope<T>) -> Result<T> {
    let floor = T::lit(1e-12);
    let (np, nq) = (photon_number(p), photon_number(q));
    for n in [np, nq] {
        if !(n >= floor) {
            return Err(Error::EmptyEnvelope(n.to_f64_lossy()));
        }
    }
    Ok(p.inner(q)?.norm_sqr() / (np * nq))
}

/// Amplitude 1/e half-width w of a Gaussian whose intensity FWHM is `width`.
pub fn gaussian_amplitude_width<T: Real>(width: T) -> T {
    width / (T::lit(2.0) * T::LN_2().sqrt())
}

/// Normalized Gaussian photon: |f(t)|² ∝ exp(−4 ln2 (t − center)²/T²), so
/// `width_t` is the intensity full width at half maximum.
pub fn gaussian_pulse<T: Real>(
    center: T,
    width_t: T,
    grid: TimeGrid<T>,
    carrier: Carrier,
) -> Result<PulseEnvelope<T>> {
    if !(width_t.is_finite() && width_t > T::zero()) {
        return Err(Error::invalid("pulse.width", "must be > 0"));
    }
    let five = T::lit(5.0);
    if grid.t_start() > center - five * width_t || grid.t_end() < center + five * width_t {
        let w = gaussian_amplitude_width(width_t).to_f64_lossy();
        let c = center.to_f64_lossy();
        let left = (c - grid.t_start().to_f64_lossy()) / w;
        let right = (grid.t_end().to_f64_lossy() - c) / w;
        let loss = 0.5 * erfc(left) + 0.5 * erfc(right);
        return Err(Error::GridTooShort { loss });
    }
    let w = gaussian_amplitude_width(width_t);
    let half = T::lit(0.5);
    let mut samples: Vec<C<T>> = grid
        .times()
        .map(|t| {
            let x = (t - center) / w;
            Complex::new((-half * x * x).exp(), T::zero())
        })
        .collect();
    let norm_sq: T = samples.iter().map(|s| s.norm_sqr()).sum::<T>() * grid.dt();
    let scale = T::one() / norm_sq.sqrt();
    for s in &mut samples {
        *s = s.scale(scale);
    }
    PulseEnvelope::new(grid, samples, carrier)
}

/// Single photon shared between two time bins: a·early + b·late.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeBinQubit<T> {
    pub a: C<T>,
    pub b: C<T>,
    /// Normalized profile of the early bin.
    pub early: PulseEnvelope<T>,
    /// The same profile delayed by `tau`.
    pub late: PulseEnvelope<T>,
    pub width: T,
    pub tau: T,
}

impl<T: Real> TimeBinQubit<T> {
    /// Both bins are Gaussians of FWHM `width`, the first centered at
    /// `center`.
    pub fn gaussian(
        a: C<T>,
        b: C<T>,
        center: T,
        width: T,
        tau: T,
        grid: TimeGrid<T>,
    ) -> Result<Self> {
        let early = gaussian_pulse(center, width, grid, Carrier::One)?;
        let late = gaussian_pulse(center + tau, width, grid, Carrier::One)?;
        Self::from_bins(a, b, early, late, width, tau)
    }

    /// Bins taken from an arbitrary normalized profile; the late bin is its
    /// band-limited translate.
    pub fn from_profile(
        a: C<T>,
        b: C<T>,
        profile: PulseEnvelope<T>,
        width: T,
        tau: T,
    ) -> Result<Self> {
        let late = profile.delayed(tau);
        Self::from_bins(a, b, profile, late, width, tau)
    }

    fn from_bins(
        a: C<T>,
        b: C<T>,
        early: PulseEnvelope<T>,
        late: PulseEnvelope<T>,
        width: T,
        tau: T,
    ) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - T::one()).abs() > T::lit(1e-9) {
            return Err(Error::invalid(
                "qubit",
                format!("|a|² + |b|² must be 1, got {norm}"),
            ));
        }
        if !(tau >= T::lit(5.0) * width) {
            return Err(Error::invalid("qubit.tau", "bin separation must be >= 5·T"));
        }
        let overlap = early.inner(&late)?.norm();
        if overlap >= T::lit(1e-6) {
            return Err(Error::OverlappingBins {
                overlap: overlap.to_f64_lossy(),
            });
        }
        Ok(Self {
            a,
            b,
            early,
            late,
            width,
            tau,
        })
    }

    /// The two-bin input envelope on carrier 1.
    pub fn envelope(&self) -> PulseEnvelope<T> {
        self.early
            .scaled(self.a)
            .add_scaled(self.b, &self.late)
            .expect("bins share one grid")
    }

    /// Projections ⟨early|f⟩, ⟨late|f⟩.
    pub fn decompose(&self, envelope: &PulseEnvelope<T>) -> Result<(C<T>, C<T>)> {
        Ok((self.early.inner(envelope)?, self.late.inner(envelope)?))
    }
}
