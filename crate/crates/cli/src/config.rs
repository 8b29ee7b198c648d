//! Flat `key = value` scenario files.
//!
//! ```text
//! # rates either in rad/s or in units of Γ₂ = γ₂/2
//! atoms.gamma2_rads = 3.7699111843077517e7
//! drive.omega_c_in_gamma = 8
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qfc_core::physics::{AtomicSystem, CouplingConvention, DerivedParams, DriveConfig, Thresholds};
use qfc_core::propagation::{PropagationGrid, Tier};
use qfc_core::{Real, Shortest};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("missing required key `{0}`")]
    Missing(String),
    #[error("`{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error(transparent)]
    Invariant(#[from] qfc_core::Error),
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_owned(),
        message: message.into(),
    }
}

/// Rates that may be given in rad/s or in multiples of Γ₂.
const RATE_KEYS: &[&str] = &[
    "atoms.gamma1",
    "atoms.gamma3",
    "drive.omega_c",
    "drive.omega_0",
    "drive.delta",
    "drive.delta_0",
];

const REAL_KEYS: &[&str] = &[
    "atoms.gamma2_rads",
    "atoms.lambda1_m",
    "atoms.lambda2_m",
    "atoms.coupling_ratio",
    "atoms.density_m3",
    "atoms.length_m",
    "atoms.mass_kg",
    "drive.lambda_c_m",
    "drive.lambda_0_m",
    "pulse.width_s",
    "pulse.center_s",
    "qubit.a_re",
    "qubit.a_im",
    "qubit.b_re",
    "qubit.b_im",
    "qubit.tau_s",
    "grid.dt_s",
    "thresholds.absorption_max",
    "thresholds.eit_min",
    "thresholds.broadening_max",
    "thresholds.phase_mismatch_max",
    "convention_prefactor",
    "derived.beta_l",
    "sweep.start",
    "sweep.stop",
];

const INTEGER_KEYS: &[&str] = &["grid.n_z", "grid.substeps", "sweep.count"];

const TEXT_KEYS: &[&str] = &[
    "tier",
    "pulse.shape",
    "pulse.file",
    "sweep.key",
    "sweep.values",
    "sweep.scale",
    "sweep.output",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Real,
    Integer,
    Text,
}

fn kind_of(key: &str) -> Option<Kind> {
    if REAL_KEYS.contains(&key) {
        return Some(Kind::Real);
    }
    if INTEGER_KEYS.contains(&key) {
        return Some(Kind::Integer);
    }
    if TEXT_KEYS.contains(&key) {
        return Some(Kind::Text);
    }
    let base = key
        .strip_suffix("_rads")
        .or_else(|| key.strip_suffix("_in_gamma"))?;
    RATE_KEYS.contains(&base).then_some(Kind::Real)
}

/// Keys accepted by `sweep.key`.
pub fn is_sweepable(key: &str) -> bool {
    matches!(kind_of(key), Some(Kind::Real)) && !key.starts_with("sweep.")
        || key == "grid.n_z"
}

/// One `key = value` line.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    /// 1-based column where the value starts.
    pub column: usize,
}

/// Splits text into entries, rejecting malformed lines, unknown keys and
/// duplicates.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let Some(eq) = content.find('=') else {
            return Err(ConfigError::Parse {
                line,
                column: indent + 1,
                message: "expected `key = value`".into(),
            });
        };
        let key = content[..eq].trim();
        if key.is_empty()
            || !key
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '.')
        {
            return Err(ConfigError::Parse {
                line,
                column: indent + 1,
                message: format!("malformed key `{key}`"),
            });
        }
        let after = &content[eq + 1..];
        let value = after.trim();
        let column = eq + 2 + (after.len() - after.trim_start().len());
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                column,
                message: format!("missing value for `{key}`"),
            });
        }
        let Some(kind) = kind_of(key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_owned(),
            });
        };
        let bad_value = |what: &str| ConfigError::Parse {
            line,
            column,
            message: format!("`{key}` expects {what}, got `{value}`"),
        };
        match kind {
            Kind::Real => {
                if value.parse::<f64>().is_err() {
                    return Err(bad_value("a number"));
                }
            }
            Kind::Integer => {
                if value.parse::<usize>().is_err() {
                    return Err(bad_value("a non-negative integer"));
                }
            }
            Kind::Text => {}
        }
        if entries.iter().any(|e| e.key == key) {
            return Err(ConfigError::Duplicate {
                line,
                key: key.to_owned(),
            });
        }
        entries.push(Entry {
            key: key.to_owned(),
            value: value.to_owned(),
            line,
            column,
        });
    }
    Ok(entries)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PulseShape {
    Gaussian,
    /// Tabulated `t_s,re,im` envelope, normalized on load.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    /// Intensity FWHM T (s).
    pub width: f64,
    pub center: f64,
    pub shape: PulseShape,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSpec {
    pub a: Complex64,
    pub b: Complex64,
    /// Bin separation τ (s).
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridSpec {
    pub n_z: Option<usize>,
    pub dt: Option<f64>,
    pub substeps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepValues {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        log: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub key: String,
    pub values: SweepValues,
    pub output: PathBuf,
}

impl SweepSpec {
    pub fn points(&self) -> Vec<f64> {
        match &self.values {
            SweepValues::List(v) => v.clone(),
            SweepValues::Range {
                start,
                stop,
                count,
                log,
            } => {
                let n = *count;
                if n == 1 {
                    return vec![*start];
                }
                (0..n)
                    .map(|k| {
                        if k == n - 1 {
                            return *stop;
                        }
                        let f = k as f64 / (n - 1) as f64;
                        if *log {
                            (start.ln() + (stop.ln() - start.ln()) * f).exp()
                        } else {
                            start + (stop - start) * f
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Dressing and coupling wavelengths for the phase-matching report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveWavelengths {
    pub coupling: f64,
    pub dressing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub atoms: AtomicSystem<f64>,
    pub drive: DriveConfig<f64>,
    pub drive_wavelengths: Option<DriveWavelengths>,
    pub pulse: PulseSpec,
    pub qubit: Option<QubitSpec>,
    pub grid: GridSpec,
    pub tier: Tier,
    pub thresholds: Thresholds<f64>,
    pub convention_prefactor: f64,
    /// Replaces βL in the analytic and reduced tiers.
    pub beta_l: Option<f64>,
    pub sweep: Option<SweepSpec>,
}

struct Lookup<'a> {
    map: BTreeMap<&'a str, &'a Entry>,
    gamma: Option<f64>,
}

impl<'a> Lookup<'a> {
    fn new(entries: &'a [Entry]) -> Self {
        let map = entries.iter().map(|e| (e.key.as_str(), e)).collect();
        Self { map, gamma: None }
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn text(&self, key: &str) -> Option<&'a str> {
        self.map.get(key).map(|e| e.value.as_str())
    }

    fn real(&self, key: &str) -> Option<f64> {
        // already checked by parse_entries
        self.text(key).and_then(|v| v.parse().ok())
    }

    fn integer(&self, key: &str) -> Option<usize> {
        self.text(key).and_then(|v| v.parse().ok())
    }

    fn required(&self, key: &str) -> Result<f64, ConfigError> {
        self.real(key)
            .ok_or_else(|| ConfigError::Missing(key.to_owned()))
    }

    fn rate(&self, base: &str) -> Result<Option<f64>, ConfigError> {
        let rads = format!("{base}_rads");
        let in_gamma = format!("{base}_in_gamma");
        match (self.real(&rads), self.real(&in_gamma)) {
            (Some(_), Some(_)) => Err(invalid(
                base,
                format!("both `{rads}` and `{in_gamma}` given; use exactly one"),
            )),
            (Some(x), None) => Ok(Some(x)),
            (None, Some(x)) => {
                let gamma = self
                    .gamma
                    .ok_or_else(|| ConfigError::Missing("atoms.gamma2_rads".into()))?;
                Ok(Some(x * gamma))
            }
            (None, None) => Ok(None),
        }
    }

    fn required_rate(&self, base: &str) -> Result<f64, ConfigError> {
        self.rate(base)?
            .ok_or_else(|| ConfigError::Missing(format!("{base}_rads")))
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        let mut config = Self::parse(&text)?;
        if let PulseShape::File(file) = &mut config.pulse.shape {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_entries(&parse_entries(text)?)
    }

    pub fn from_entries(entries: &[Entry]) -> Result<Self, ConfigError> {
        let mut q = Lookup::new(entries);
        let gamma2 = q.required("atoms.gamma2_rads")?;
        q.gamma = Some(0.5 * gamma2);

        let mut atoms = AtomicSystem::new(
            q.required_rate("atoms.gamma1")?,
            gamma2,
            q.required_rate("atoms.gamma3")?,
            q.required("atoms.lambda1_m")?,
            q.required("atoms.lambda2_m")?,
            q.required("atoms.coupling_ratio")?,
            q.required("atoms.density_m3")?,
            q.required("atoms.length_m")?,
        )?;
        if let Some(mass) = q.real("atoms.mass_kg") {
            atoms = atoms.with_mass(mass)?;
        }

        let omega_c = q.required_rate("drive.omega_c")?;
        let omega_0 = q.required_rate("drive.omega_0")?;
        let delta = q.rate("drive.delta")?.unwrap_or(omega_0);
        let delta_0 = q.rate("drive.delta_0")?.unwrap_or(0.0);
        let drive = DriveConfig::new(omega_c, omega_0, delta, delta_0)?;

        let drive_wavelengths = match (q.real("drive.lambda_c_m"), q.real("drive.lambda_0_m")) {
            (Some(coupling), Some(dressing)) => {
                for (k, v) in [("drive.lambda_c_m", coupling), ("drive.lambda_0_m", dressing)] {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(invalid(k, "must be finite and > 0"));
                    }
                }
                Some(DriveWavelengths { coupling, dressing })
            }
            (None, None) => None,
            (Some(_), None) => return Err(ConfigError::Missing("drive.lambda_0_m".into())),
            (None, Some(_)) => return Err(ConfigError::Missing("drive.lambda_c_m".into())),
        };

        let shape = match q.text("pulse.shape").unwrap_or("gaussian") {
            "gaussian" => {
                if q.has("pulse.file") {
                    return Err(invalid("pulse.file", "only allowed with pulse.shape = file"));
                }
                PulseShape::Gaussian
            }
            "file" => PulseShape::File(PathBuf::from(
                q.text("pulse.file")
                    .ok_or_else(|| ConfigError::Missing("pulse.file".into()))?,
            )),
            other => {
                return Err(invalid(
                    "pulse.shape",
                    format!("unknown shape `{other}` (gaussian | file)"),
                ))
            }
        };
        let pulse = PulseSpec {
            width: q.required("pulse.width_s")?,
            center: q.real("pulse.center_s").unwrap_or(0.0),
            shape,
        };

        let qubit_keys = ["qubit.a_re", "qubit.a_im", "qubit.b_re", "qubit.b_im", "qubit.tau_s"];
        let qubit = if qubit_keys.iter().any(|k| q.has(k)) {
            let v: Vec<f64> = qubit_keys
                .iter()
                .map(|k| q.required(k))
                .collect::<Result<_, _>>()?;
            Some(QubitSpec {
                a: Complex64::new(v[0], v[1]),
                b: Complex64::new(v[2], v[3]),
                tau: v[4],
            })
        } else {
            None
        };

        let grid = GridSpec {
            n_z: q.integer("grid.n_z"),
            dt: q.real("grid.dt_s"),
            substeps: q.integer("grid.substeps"),
        };

        let tier = match q.text("tier") {
            Some(t) => t.parse::<Tier>()?,
            None => Tier::Analytic,
        };

        let defaults = Thresholds::<f64>::default();
        let thresholds = Thresholds {
            absorption_max: q
                .real("thresholds.absorption_max")
                .unwrap_or(defaults.absorption_max),
            eit_min: q.real("thresholds.eit_min").unwrap_or(defaults.eit_min),
            broadening_max: q
                .real("thresholds.broadening_max")
                .unwrap_or(defaults.broadening_max),
            phase_mismatch_max: q
                .real("thresholds.phase_mismatch_max")
                .unwrap_or(defaults.phase_mismatch_max),
        };

        let sweep = Self::sweep_from(&q)?;

        let config = Self {
            atoms,
            drive,
            drive_wavelengths,
            pulse,
            qubit,
            grid,
            tier,
            thresholds,
            convention_prefactor: q.real("convention_prefactor").unwrap_or(1.0),
            beta_l: q.real("derived.beta_l"),
            sweep,
        };
        config.validate()?;
        Ok(config)
    }

    fn sweep_from(q: &Lookup<'_>) -> Result<Option<SweepSpec>, ConfigError> {
        let any = q.map.keys().any(|k| k.starts_with("sweep."));
        if !any {
            return Ok(None);
        }
        let key = q
            .text("sweep.key")
            .ok_or_else(|| ConfigError::Missing("sweep.key".into()))?;
        if !is_sweepable(key) {
            return Err(invalid(
                "sweep.key",
                format!("`{key}` is not a numeric scenario key"),
            ));
        }
        let range = ["sweep.start", "sweep.stop", "sweep.count"];
        let has_range = range.iter().any(|k| q.has(k)) || q.has("sweep.scale");
        let values = match (q.text("sweep.values"), has_range) {
            (Some(_), true) => {
                return Err(invalid(
                    "sweep.values",
                    "give either sweep.values or sweep.start/stop/count, not both",
                ))
            }
            (Some(list), false) => {
                let parsed: Result<Vec<f64>, _> =
                    list.split(',').map(|s| s.trim().parse::<f64>()).collect();
                let values =
                    parsed.map_err(|_| invalid("sweep.values", "expects comma-separated numbers"))?;
                SweepValues::List(values)
            }
            (None, _) => {
                let log = match q.text("sweep.scale").unwrap_or("linear") {
                    "linear" => false,
                    "log" => true,
                    other => {
                        return Err(invalid(
                            "sweep.scale",
                            format!("unknown scale `{other}` (linear | log)"),
                        ))
                    }
                };
                SweepValues::Range {
                    start: q.required("sweep.start")?,
                    stop: q.required("sweep.stop")?,
                    count: q
                        .integer("sweep.count")
                        .ok_or_else(|| ConfigError::Missing("sweep.count".into()))?,
                    log,
                }
            }
        };
        Ok(Some(SweepSpec {
            key: key.to_owned(),
            values,
            output: PathBuf::from(q.text("sweep.output").unwrap_or("sweep.csv")),
        }))
    }

    /// Checks every cross-field constraint. Called on load and after CLI
    /// overrides.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.atoms.validate()?;
        self.drive.validate()?;
        let params = self.derived()?;
        let w = self.pulse.width;
        if !(w > 0.0 && w.is_finite()) {
            return Err(invalid("pulse.width_s", "must be finite and > 0"));
        }
        if !self.pulse.center.is_finite() {
            return Err(invalid("pulse.center_s", "must be finite"));
        }
        if let Some(q) = &self.qubit {
            let norm = q.a.norm_sqr() + q.b.norm_sqr();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(invalid("qubit", format!("|a|² + |b|² must be 1, got {norm}")));
            }
            if !(q.tau >= 5.0 * w) {
                return Err(invalid(
                    "qubit.tau_s",
                    format!("bin separation {} s below 5·T = {} s", q.tau, 5.0 * w),
                ));
            }
        }
        if let Some(dt) = self.grid.dt {
            if !(dt > 0.0 && dt <= w / 10.0) {
                return Err(invalid(
                    "grid.dt_s",
                    format!("must be > 0 and resolve the pulse (<= T/10 = {} s)", w / 10.0),
                ));
            }
        }
        if let Some(n) = self.grid.n_z {
            PropagationGrid::with_slices(&params, n).map_err(|e| invalid("grid.n_z", e.to_string()))?;
        }
        if self.grid.substeps == Some(0) {
            return Err(invalid("grid.substeps", "must be >= 1"));
        }
        let t = self.thresholds;
        for (k, v) in [
            ("thresholds.absorption_max", t.absorption_max),
            ("thresholds.eit_min", t.eit_min),
            ("thresholds.broadening_max", t.broadening_max),
            ("thresholds.phase_mismatch_max", t.phase_mismatch_max),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(k, "must be finite and > 0"));
            }
        }
        if let Some(bl) = self.beta_l {
            if !(bl.is_finite() && bl >= 0.0) {
                return Err(invalid("derived.beta_l", "must be finite and >= 0"));
            }
            if self.tier == Tier::Full {
                return Err(invalid(
                    "derived.beta_l",
                    "only applies to the analytic and reduced tiers",
                ));
            }
        }
        if let Some(s) = &self.sweep {
            match &s.values {
                SweepValues::List(v) if v.is_empty() => {
                    return Err(invalid("sweep.values", "needs at least one value"))
                }
                SweepValues::Range { count: 0, .. } => {
                    return Err(invalid("sweep.count", "must be >= 1"))
                }
                SweepValues::Range {
                    start,
                    stop,
                    log: true,
                    ..
                } if !(*start > 0.0 && *stop > 0.0) => {
                    return Err(invalid("sweep.scale", "log range needs start, stop > 0"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Derived parameters with the βL override applied.
    pub fn derived(&self) -> Result<DerivedParams<f64>, ConfigError> {
        let convention = CouplingConvention {
            prefactor: self.convention_prefactor,
        };
        let params = qfc_core::physics::derive_params(&self.atoms, &self.drive, convention)?;
        Ok(match self.beta_l {
            Some(bl) => params.with_beta(bl / params.length),
            None => params,
        })
    }

    /// Serializes with every rate in rad/s; [`ScenarioConfig::parse`] of the
    /// result reproduces `self`.
    pub fn to_text(&self) -> String {
        self.to_entries()
            .iter()
            .fold(String::new(), |mut s, (k, v)| {
                let _ = writeln!(s, "{k} = {v}");
                s
            })
    }

    pub fn to_entries(&self) -> Vec<(String, String)> {
        let f = |x: f64| Shortest(x).to_string();
        let mut out: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| out.push((k.to_owned(), v));
        let a = &self.atoms;
        put("atoms.gamma1_rads", f(a.gamma1));
        put("atoms.gamma2_rads", f(a.gamma2));
        put("atoms.gamma3_rads", f(a.gamma3));
        put("atoms.lambda1_m", f(a.lambda1));
        put("atoms.lambda2_m", f(a.lambda2));
        put("atoms.coupling_ratio", f(a.coupling_ratio));
        put("atoms.density_m3", f(a.density));
        put("atoms.length_m", f(a.length));
        put("atoms.mass_kg", f(a.mass));
        let d = &self.drive;
        put("drive.omega_c_rads", f(d.omega_c));
        put("drive.omega_0_rads", f(d.omega_0));
        // Δ defaults to Ω₀ and Δ₀ to 0; writing only deviations keeps a
        // resonant configuration resonant when Ω₀ is swept.
        if d.delta != d.omega_0 {
            put("drive.delta_rads", f(d.delta));
        }
        if d.delta_0 != 0.0 {
            put("drive.delta_0_rads", f(d.delta_0));
        }
        if let Some(w) = self.drive_wavelengths {
            put("drive.lambda_c_m", f(w.coupling));
            put("drive.lambda_0_m", f(w.dressing));
        }
        put("pulse.width_s", f(self.pulse.width));
        put("pulse.center_s", f(self.pulse.center));
        match &self.pulse.shape {
            PulseShape::Gaussian => put("pulse.shape", "gaussian".into()),
            PulseShape::File(p) => {
                put("pulse.shape", "file".into());
                put("pulse.file", p.display().to_string());
            }
        }
        if let Some(q) = &self.qubit {
            put("qubit.a_re", f(q.a.re));
            put("qubit.a_im", f(q.a.im));
            put("qubit.b_re", f(q.b.re));
            put("qubit.b_im", f(q.b.im));
            put("qubit.tau_s", f(q.tau));
        }
        if let Some(n) = self.grid.n_z {
            put("grid.n_z", n.to_string());
        }
        if let Some(dt) = self.grid.dt {
            put("grid.dt_s", f(dt));
        }
        if let Some(s) = self.grid.substeps {
            put("grid.substeps", s.to_string());
        }
        put("tier", self.tier.name().into());
        let t = &self.thresholds;
        put("thresholds.absorption_max", f(t.absorption_max));
        put("thresholds.eit_min", f(t.eit_min));
        put("thresholds.broadening_max", f(t.broadening_max));
        put("thresholds.phase_mismatch_max", f(t.phase_mismatch_max));
        put("convention_prefactor", f(self.convention_prefactor));
        if let Some(bl) = self.beta_l {
            put("derived.beta_l", f(bl));
        }
        if let Some(s) = &self.sweep {
            put("sweep.key", s.key.clone());
            match &s.values {
                SweepValues::List(v) => put(
                    "sweep.values",
                    v.iter().map(|x| f(*x)).collect::<Vec<_>>().join(", "),
                ),
                SweepValues::Range {
                    start,
                    stop,
                    count,
                    log,
                } => {
                    put("sweep.start", f(*start));
                    put("sweep.stop", f(*stop));
                    put("sweep.count", count.to_string());
                    put("sweep.scale", if *log { "log" } else { "linear" }.into());
                }
            }
            put("sweep.output", s.output.display().to_string());
        }
        out
    }

    /// A copy with `key` set to `value` (and sweep keys dropped). The sibling
    /// unit variant of a rate key is removed.
    pub fn with_value(&self, key: &str, value: f64) -> Result<Self, ConfigError> {
        if !is_sweepable(key) {
            return Err(invalid(key, "not a numeric scenario key"));
        }
        let sibling = key
            .strip_suffix("_rads")
            .map(|b| format!("{b}_in_gamma"))
            .or_else(|| key.strip_suffix("_in_gamma").map(|b| format!("{b}_rads")));
        let text = if key == "grid.n_z" {
            if value.fract() != 0.0 || value < 0.0 {
                return Err(invalid(key, format!("expects an integer, got {value}")));
            }
            format!("{}", value as usize)
        } else {
            Shortest(value).to_string()
        };
        let mut entries: Vec<Entry> = self
            .to_entries()
            .into_iter()
            .filter(|(k, _)| !k.starts_with("sweep.") && k != key && Some(k) != sibling.as_ref())
            .map(|(k, v)| Entry {
                key: k,
                value: v,
                line: 0,
                column: 0,
            })
            .collect();
        entries.push(Entry {
            key: key.to_owned(),
            value: text,
            line: 0,
            column: 0,
        });
        let mut config = Self::from_entries(&entries)?;
        if let PulseShape::File(p) = &self.pulse.shape {
            config.pulse.shape = PulseShape::File(p.clone());
        }
        Ok(config)
    }
}

/// Γ₂ = γ₂/2, the unit of `_in_gamma` keys.
pub fn gamma_unit<T: Real>(atoms: &AtomicSystem<T>) -> T {
    atoms.gamma2 * T::lit(0.5)
}
