//! Static physics of the four-level medium: atomic and drive parameters,
//! quantities derived from them, and the regime conditions under which the
//! reduced coupled-wave description is valid.
//!
//! Conventions: every rate is an angular frequency (rad/s). The natural decay
//! rates γᵢ of the atomic states are inputs; the transverse (coherence) rates
//! are Γᵢ = γᵢ/2 and Γᵢ₊ = Γᵢ + Γ₃/2.
//!
//! The collective coupling Gᵢ = gᵢ²N/c is never fixed by the model itself, so
//! it is set by [`CouplingConvention`]:
//!
//! ```text
//! G₁ = prefactor · Γ₁ 𝒩 σ₁ / 2,    G₂ = (g₂/g₁)² · G₁
//! ```
//!
//! which reproduces the resonant two-level amplitude absorption coefficient
//! 𝒩σ/2 on transition 1. All derived quantities (κ, v, β) are expressed
//! through G₁, G₂.

use crate::constants::{BOLTZMANN, RB87_MASS, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn require_positive<T: Real>(field: &str, x: T) -> Result<()> {
    if x.is_finite() && x > T::zero() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and > 0, got {x}")))
    }
}

/// Level structure and sample geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicSystem<T> {
    /// Natural decay rate γ₁ of |1⟩ (rad/s).
    pub gamma1: T,
    /// Natural decay rate γ₂ of |2⟩ (rad/s).
    pub gamma2: T,
    /// Natural decay rate γ₃ of |3⟩ (rad/s).
    pub gamma3: T,
    /// Carrier wavelength of field 1 (m).
    pub lambda1: T,
    /// Carrier wavelength of field 2 (m).
    pub lambda2: T,
    /// g₂/g₁.
    pub coupling_ratio: T,
    /// Atomic number density 𝒩 (m⁻³).
    pub density: T,
    /// Medium length L (m).
    pub length: T,
    /// Atomic mass (kg), used for the Doppler bound.
    pub mass: T,
}

impl<T: Real> AtomicSystem<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma1: T,
        gamma2: T,
        gamma3: T,
        lambda1: T,
        lambda2: T,
        coupling_ratio: T,
        density: T,
        length: T,
    ) -> Result<Self> {
        let atoms = Self {
            gamma1,
            gamma2,
            gamma3,
            lambda1,
            lambda2,
            coupling_ratio,
            density,
            length,
            mass: T::lit(RB87_MASS),
        };
        atoms.validate()?;
        Ok(atoms)
    }

    pub fn with_mass(mut self, mass: T) -> Result<Self> {
        self.mass = mass;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("atoms.gamma1", self.gamma1)?;
        require_positive("atoms.gamma2", self.gamma2)?;
        require_positive("atoms.gamma3", self.gamma3)?;
        require_positive("atoms.lambda1", self.lambda1)?;
        require_positive("atoms.lambda2", self.lambda2)?;
        require_positive("atoms.coupling_ratio", self.coupling_ratio)?;
        require_positive("atoms.density", self.density)?;
        require_positive("atoms.length", self.length)?;
        require_positive("atoms.mass", self.mass)?;
        Ok(())
    }

    /// Transverse relaxation rates (Γ₁, Γ₂, Γ₃) = (γ₁, γ₂, γ₃)/2.
    pub fn transverse_rates(&self) -> (T, T, T) {
        let half = T::lit(0.5);
        (self.gamma1 * half, self.gamma2 * half, self.gamma3 * half)
    }
}

/// Classical drive fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig<T> {
    /// Rabi frequency Ω of the 1↔2 coupling field (rad/s).
    pub omega_c: T,
    /// Rabi frequency Ω₀ of the 0↔3 dressing field (rad/s).
    pub omega_0: T,
    /// One-photon detuning Δ of both quantum fields (rad/s).
    pub delta: T,
    /// Detuning Δ₀ of the dressing field (rad/s).
    pub delta_0: T,
}

impl<T: Real> DriveConfig<T> {
    pub fn new(omega_c: T, omega_0: T, delta: T, delta_0: T) -> Result<Self> {
        let drive = Self {
            omega_c,
            omega_0,
            delta,
            delta_0,
        };
        drive.validate()?;
        Ok(drive)
    }

    /// The resonant-conversion configuration Δ = Ω₀, Δ₀ = 0.
    pub fn resonant(omega_c: T, omega_0: T) -> Result<Self> {
        Self::new(omega_c, omega_0, omega_0, T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c.is_finite() && self.omega_c > T::zero()) {
            return Err(Error::invalid(
                "drive.omega_c",
                format!("must be > 0 (κ, v and β divide by Ω), got {}", self.omega_c),
            ));
        }
        if !(self.omega_0.is_finite() && self.omega_0 >= T::zero()) {
            return Err(Error::invalid(
                "drive.omega_0",
                format!("must be finite and >= 0, got {}", self.omega_0),
            ));
        }
        if !self.delta.is_finite() {
            return Err(Error::invalid("drive.delta", "must be finite"));
        }
        if !self.delta_0.is_finite() {
            return Err(Error::invalid("drive.delta_0", "must be finite"));
        }
        Ok(())
    }

    pub fn is_resonant(&self) -> bool {
        self.delta == self.omega_0 && self.delta_0 == T::zero()
    }
}

/// Dimensionless prefactor on the coupling-constant convention (default 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConvention<T> {
    pub prefactor: T,
}

impl<T: Real> Default for CouplingConvention<T> {
    fn default() -> Self {
        Self {
            prefactor: T::one(),
        }
    }
}

/// Everything computed from an [`AtomicSystem`] and [`DriveConfig`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams<T> {
    /// Resonant cross-sections 3λᵢ²/4π (m²).
    pub sigma1: T,
    pub sigma2: T,
    /// Optical depth 𝒩σ₁L on transition 1.
    pub alpha: T,
    /// Optical depth 𝒩σ₂L on transition 2.
    pub alpha2: T,
    /// Collective couplings Gᵢ = gᵢ²N/c (1/(m·s)).
    pub coupling1: T,
    pub coupling2: T,
    /// Field absorption coefficients κᵢ = GᵢΓᵢ₊/4Ω² (1/m).
    pub kappa1: T,
    pub kappa2: T,
    /// Group velocities vᵢ = 4Ω²/Gᵢ (m/s).
    pub v1: T,
    pub v2: T,
    /// Parametric coupling β = √(G₁G₂)/4Ω (rad/m).
    pub beta: T,
    /// EIT window Ω²/(Γ√α) (rad/s).
    pub eit_window: T,
    /// Dressing mixing angle, tan 2θ = 2Ω₀/Δ₀.
    pub theta: T,
    pub gamma1p: T,
    pub gamma2p: T,
    /// Γ₃ = γ₃/2.
    pub gamma3: T,
    /// Single effective rate √(Γ₁₊Γ₂₊).
    pub gamma_eff: T,
    /// D² = Ω² + Γ₁₊Γ₂₊.
    pub d_squared: T,
    pub omega_c: T,
    pub length: T,
}

impl<T: Real> DerivedParams<T> {
    pub fn beta_l(&self) -> T {
        self.beta * self.length
    }

    /// Replaces β, leaving every other quantity untouched. Only the reduced
    /// and analytic tiers read β directly.
    pub fn with_beta(mut self, beta: T) -> Self {
        self.beta = beta;
        self
    }

    /// Harmonic mean 2v₁v₂/(v₁+v₂), the co-moving frame velocity.
    pub fn reference_velocity(&self) -> T {
        T::lit(2.0) * self.v1 * self.v2 / (self.v1 + self.v2)
    }
}

/// θ from tan 2θ = 2Ω₀/Δ₀, on the branch θ ∈ [0, π/2].
pub fn mixing_angle<T: Real>(omega_0: T, delta_0: T) -> T {
    T::lit(0.5) * (T::lit(2.0) * omega_0).atan2(delta_0)
}

pub fn cross_section<T: Real>(wavelength: T) -> T {
    T::lit(3.0) * wavelength * wavelength / (T::lit(4.0) * T::PI())
}

pub fn derive_params<T: Real>(
    atoms: &AtomicSystem<T>,
    drive: &DriveConfig<T>,
    convention: CouplingConvention<T>,
) -> Result<DerivedParams<T>> {
    atoms.validate()?;
    drive.validate()?;
    if drive.omega_0 == T::zero() && drive.delta_0 == T::zero() {
        return Err(Error::invalid(
            "drive.omega_0",
            "dressing undefined for Ω₀ = 0 with Δ₀ = 0",
        ));
    }
    require_positive("convention_prefactor", convention.prefactor)?;

    let four = T::lit(4.0);
    let omega = drive.omega_c;
    let (g1, g2, g3) = atoms.transverse_rates();
    let half = T::lit(0.5);
    let gamma1p = g1 + g3 * half;
    let gamma2p = g2 + g3 * half;
    let gamma_eff = (gamma1p * gamma2p).sqrt();

    let sigma1 = cross_section(atoms.lambda1);
    let sigma2 = cross_section(atoms.lambda2);
    let alpha = atoms.density * sigma1 * atoms.length;
    let alpha2 = atoms.density * sigma2 * atoms.length;

    let coupling1 = convention.prefactor * g1 * atoms.density * sigma1 * half;
    let coupling2 = atoms.coupling_ratio * atoms.coupling_ratio * coupling1;

    let omega_sq = omega * omega;
    let kappa1 = coupling1 * gamma1p / (four * omega_sq);
    let kappa2 = coupling2 * gamma2p / (four * omega_sq);
    let v1 = four * omega_sq / coupling1;
    let v2 = four * omega_sq / coupling2;
    let c = T::lit(SPEED_OF_LIGHT);
    for (field, v) in [("v1", v1), ("v2", v2)] {
        if !(v > T::zero() && v < c) {
            return Err(Error::invalid(
                field,
                format!("group velocity {v} m/s outside (0, c): medium too dilute for slow light"),
            ));
        }
    }
    let beta = (coupling1 * coupling2).sqrt() / (four * omega);
    let eit_window = omega_sq / (gamma_eff * alpha.sqrt());

    Ok(DerivedParams {
        sigma1,
        sigma2,
        alpha,
        alpha2,
        coupling1,
        coupling2,
        kappa1,
        kappa2,
        v1,
        v2,
        beta,
        eit_window,
        theta: mixing_angle(drive.omega_0, drive.delta_0),
        gamma1p,
        gamma2p,
        gamma3: g3,
        gamma_eff,
        d_squared: omega_sq + gamma1p * gamma2p,
        omega_c: omega,
        length: atoms.length,
    })
}

/// Thresholds for the validity conditions. "≪ 1" is quantified as
/// `absorption_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<T> {
    pub absorption_max: T,
    pub eit_min: T,
    pub broadening_max: T,
    pub phase_mismatch_max: T,
}

impl<T: Real> Default for Thresholds<T> {
    fn default() -> Self {
        Self {
            absorption_max: T::lit(0.1),
            eit_min: T::one(),
            broadening_max: T::one(),
            phase_mismatch_max: T::lit(0.1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    LessThan,
    AtLeast,
    AtMost,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::LessThan => "<",
            Relation::AtLeast => ">=",
            Relation::AtMost => "<=",
        }
    }

    fn holds<T: Real>(self, value: T, threshold: T) -> bool {
        match self {
            Relation::LessThan => value < threshold,
            Relation::AtLeast => value >= threshold,
            Relation::AtMost => value <= threshold,
        }
    }
}

/// One evaluated inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition<T> {
    pub name: &'static str,
    pub value: T,
    pub relation: Relation,
    pub threshold: T,
    pub ok: bool,
}

impl<T: Real> Condition<T> {
    fn evaluate(name: &'static str, value: T, relation: Relation, threshold: T) -> Self {
        Self {
            name,
            value,
            relation,
            threshold,
            ok: value.is_finite() && relation.holds(value, threshold),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport<T> {
    /// κ₁L and κ₂L.
    pub absorption: [Condition<T>; 2],
    pub absorption_ok: bool,
    /// Δω_EIT·T.
    pub eit: Condition<T>,
    pub eit_ok: bool,
    /// 16L/(vᵢT²Ω) for both fields.
    pub broadening: [Condition<T>; 2],
    pub broadening_ok: bool,
    /// Highest vapor temperature with k₁u = Γ₁ (K).
    pub doppler_temperature: T,
    pub all_ok: bool,
}

impl<T: Real> RegimeReport<T> {
    pub fn conditions(&self) -> [Condition<T>; 5] {
        [
            self.absorption[0],
            self.absorption[1],
            self.eit,
            self.broadening[0],
            self.broadening[1],
        ]
    }
}

/// Evaluates the three efficiency conditions for a pulse of width `pulse_width`
/// (intensity FWHM) and the Doppler temperature bound. Failures are flags.
pub fn check_regime<T: Real>(
    params: &DerivedParams<T>,
    pulse_width: T,
    atoms: &AtomicSystem<T>,
    thresholds: &Thresholds<T>,
) -> RegimeReport<T> {
    let length = atoms.length;
    let absorption = [
        Condition::evaluate(
            "kappa1_L",
            params.kappa1 * length,
            Relation::LessThan,
            thresholds.absorption_max,
        ),
        Condition::evaluate(
            "kappa2_L",
            params.kappa2 * length,
            Relation::LessThan,
            thresholds.absorption_max,
        ),
    ];
    let eit = Condition::evaluate(
        "eit_window_T",
        params.eit_window * pulse_width,
        Relation::AtLeast,
        thresholds.eit_min,
    );
    let spread = |v: T| T::lit(16.0) * length / (v * pulse_width * pulse_width * params.omega_c);
    let broadening = [
        Condition::evaluate(
            "broadening1",
            spread(params.v1),
            Relation::AtMost,
            thresholds.broadening_max,
        ),
        Condition::evaluate(
            "broadening2",
            spread(params.v2),
            Relation::AtMost,
            thresholds.broadening_max,
        ),
    ];
    let (g1, _, _) = atoms.transverse_rates();
    let absorption_ok = absorption.iter().all(|c| c.ok);
    let broadening_ok = broadening.iter().all(|c| c.ok);
    RegimeReport {
        absorption,
        absorption_ok,
        eit,
        eit_ok: eit.ok,
        broadening,
        broadening_ok,
        doppler_temperature: doppler_temperature(g1, atoms.lambda1, atoms.mass),
        all_ok: absorption_ok && eit.ok && broadening_ok,
    }
}

/// Temperature at which the most-probable thermal speed u = √(2k_BT/m)
/// satisfies k·u = Γ.
pub fn doppler_temperature<T: Real>(gamma: T, wavelength: T, mass: T) -> T {
    let k = T::lit(2.0) * T::PI() / wavelength;
    let u = gamma / k;
    mass * u * u / (T::lit(2.0) * T::lit(BOLTZMANN))
}

pub fn wave_number<T: Real>(wavelength: T) -> T {
    T::lit(2.0) * T::PI() / wavelength
}

/// Δk = k₁ + k − k₂ − k₀.
pub fn dk_mismatch<T: Real>(k1: T, k: T, k2: T, k0: T) -> T {
    k1 + k - k2 - k0
}

/// Whether |Δk·L| stays under the tolerated phase slip.
pub fn phase_matched<T: Real>(dk: T, length: T, thresholds: &Thresholds<T>) -> bool {
    (dk * length).abs() <= thresholds.phase_mismatch_max
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    fn paper_atoms() -> AtomicSystem<f64> {
        let gamma = TWO_PI * 3e6;
        AtomicSystem::new(
            2.0 * gamma,
            2.0 * gamma,
            TWO_PI * 5.75e6,
            780e-9,
            1.47e-6,
            0.96,
            1e19,
            1.6e-3,
        )
        .unwrap()
    }

    fn paper_drive() -> DriveConfig<f64> {
        let gamma = TWO_PI * 3e6;
        DriveConfig::resonant(8.0 * gamma, 50.0 * gamma).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn cross_section_at_780nm() {
        let s = cross_section(780e-9_f64);
        assert!(rel(s, 1.452448010656637e-13) < 1e-12);
        let p = derive_params(&paper_atoms(), &paper_drive(), Default::default()).unwrap();
        assert_eq!(p.sigma1, 3.0 * 780e-9 * 780e-9 / (4.0 * std::f64::consts::PI));
    }

    #[test]
    fn dressing_angle_on_resonance() {
        let p = derive_params(&paper_atoms(), &paper_drive(), Default::default()).unwrap();
        assert_eq!(p.theta, std::f64::consts::FRAC_PI_4);
        // weak dressing relative to detuning
        assert!((mixing_angle(1e-9_f64, 1.0) - 1e-9).abs() < 1e-20);
        assert!(mixing_angle(1e-3_f64, 1.0) < mixing_angle(1e-2, 1.0));
    }

    #[test]
    fn doubling_rabi_frequency_rescales() {
        let atoms = paper_atoms();
        let d1 = paper_drive();
        let d2 = DriveConfig::resonant(2.0 * d1.omega_c, d1.omega_0).unwrap();
        let p1 = derive_params(&atoms, &d1, Default::default()).unwrap();
        let p2 = derive_params(&atoms, &d2, Default::default()).unwrap();
        assert!(rel(p1.kappa1 / p2.kappa1, 4.0) < 1e-12);
        assert!(rel(p2.v1 / p1.v1, 4.0) < 1e-12);
        assert!(rel(p1.beta / p2.beta, 2.0) < 1e-12);
    }

    #[test]
    fn paper_set_beta_length_hand_value() {
        // G₁ = Γ₁𝒩σ₁/2, β = 0.96·G₁/(4Ω) evaluated by hand for the printed set;
        // equivalently β = Ω√(κ₁κ₂)/Γ.
        let p = derive_params(&paper_atoms(), &paper_drive(), Default::default()).unwrap();
        assert!(rel(p.beta_l(), 34.85875225575929) < 1e-10, "{}", p.beta_l());
        assert!(rel(p.coupling1, 13689000000000.002) < 1e-12);
    }

    #[test]
    fn beta_kappa_identity() {
        let p = derive_params(&paper_atoms(), &paper_drive(), Default::default()).unwrap();
        let via_kappa = p.omega_c * (p.kappa1 * p.kappa2).sqrt() / p.gamma_eff;
        assert!(rel(via_kappa, p.beta) < 1e-12);
        assert!(rel(p.v1 * p.kappa1, p.gamma1p) < 1e-12);
        assert!(rel(p.v2 * p.kappa2, p.gamma2p) < 1e-12);
        assert_eq!(p.d_squared, p.omega_c * p.omega_c + p.gamma1p * p.gamma2p);
    }

    #[test]
    fn prefactor_scales_couplings() {
        let atoms = paper_atoms();
        let base = derive_params(&atoms, &paper_drive(), Default::default()).unwrap();
        let half = derive_params(
            &atoms,
            &paper_drive(),
            CouplingConvention { prefactor: 0.5 },
        )
        .unwrap();
        assert!(rel(base.beta / half.beta, 2.0) < 1e-12);
        assert!(rel(half.v1 / base.v1, 2.0) < 1e-12);
    }

    #[test]
    fn rejects_bad_drives() {
        let atoms = paper_atoms();
        let zero_omega = DriveConfig {
            omega_c: 0.0,
            omega_0: 1.0,
            delta: 1.0,
            delta_0: 0.0,
        };
        let err = derive_params(&atoms, &zero_omega, Default::default()).unwrap_err();
        assert!(err.to_string().contains("drive.omega_c"), "{err}");
        let undressed = DriveConfig::new(1e8, 0.0, 0.0, 0.0).unwrap();
        assert!(derive_params(&atoms, &undressed, Default::default()).is_err());
        assert!(DriveConfig::new(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_atoms() {
        let err = AtomicSystem::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.96, 1.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("atoms.length"));
        assert!(AtomicSystem::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(AtomicSystem::new(f64::NAN, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn doppler_bound_near_thirty_millikelvin() {
        let t = doppler_temperature(TWO_PI * 3e6, 780e-9, RB87_MASS);
        assert!(rel(t, 0.02861759867018845) < 1e-10);
        assert!((t - 0.03).abs() <= 0.2 * 0.03);
    }

    #[test]
    fn paper_set_regime_values() {
        // Direct evaluation of the three inequalities (hand calculation);
        // all three fail for the printed parameters under this convention.
        let atoms = paper_atoms();
        let p = derive_params(&atoms, &paper_drive(), Default::default()).unwrap();
        let r = check_regime(&p, 20e-9, &atoms, &Thresholds::default());
        assert!(rel(r.absorption[0].value, 6.71378963259253) < 1e-10);
        assert!(rel(r.absorption[1].value, 6.187428525397275) < 1e-10);
        assert!(rel(r.eit.value, 0.33836364289134735) < 1e-10);
        assert!(rel(r.broadening[0].value, 63.87315608450057) < 1e-10);
        assert!(rel(r.broadening[1].value, 58.86550064747573) < 1e-10);
        assert!(!r.absorption_ok && !r.eit_ok && !r.broadening_ok && !r.all_ok);
    }

    #[test]
    fn long_pulses_satisfy_window_and_broadening() {
        let atoms = paper_atoms();
        let p = derive_params(&atoms, &paper_drive(), Default::default()).unwrap();
        let r = check_regime(&p, 1e-3, &atoms, &Thresholds::default());
        assert!(r.eit_ok && r.broadening_ok);
        assert_eq!(r.all_ok, r.absorption_ok && r.eit_ok && r.broadening_ok);
    }

    #[test]
    fn regime_report_is_reproducible() {
        let atoms = paper_atoms();
        let p = derive_params(&atoms, &paper_drive(), Default::default()).unwrap();
        let a = check_regime(&p, 20e-9, &atoms, &Thresholds::default());
        let b = check_regime(&p, 20e-9, &atoms, &Thresholds::default());
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn phase_mismatch() {
        assert_eq!(dk_mismatch(3.0, 2.0, 4.0, 1.0), 0.0);
        assert_eq!(dk_mismatch(0.0_f64, 0.0, 0.0, 0.0), 0.0);
        // Collinear Rb drives at the rounded wavelengths: 780 nm, 1529 nm
        // (1→2), 1.47 µm, 795 nm (0→3).
        let (l1, l, l2, l0) = (780e-9_f64, 1529e-9, 1.47e-6, 795e-9);
        let expect = TWO_PI * (1.0 / l1 + 1.0 / l - 1.0 / l2 - 1.0 / l0);
        let dk = dk_mismatch(wave_number(l1), wave_number(l), wave_number(l2), wave_number(l0));
        assert!(rel(dk, expect) < 1e-9);
        assert!(dk.abs() * 1.6e-3 > 0.1);
        assert!(!phase_matched(dk, 1.6e-3, &Thresholds::default()));
        assert!(phase_matched(1.0, 1.6e-3, &Thresholds::default()));
    }

    #[test]
    fn single_precision_matches() {
        let a64 = paper_atoms();
        let d64 = paper_drive();
        let a32 = AtomicSystem::<f32>::new(
            a64.gamma1 as f32,
            a64.gamma2 as f32,
            a64.gamma3 as f32,
            780e-9,
            1.47e-6,
            0.96,
            1e19,
            1.6e-3,
        )
        .unwrap();
        let d32 = DriveConfig::<f32>::resonant(d64.omega_c as f32, d64.omega_0 as f32).unwrap();
        let p32 = derive_params(&a32, &d32, Default::default()).unwrap();
        let p64 = derive_params(&a64, &d64, Default::default()).unwrap();
        assert!(rel(p32.beta as f64, p64.beta) < 1e-5);
    }
}
