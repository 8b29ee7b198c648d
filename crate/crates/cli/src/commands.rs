use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use qfc_core::signals::{Carrier, PulseEnvelope, TimeGrid};
use qfc_core::{Shortest, Tier};
use rayon::prelude::*;

use crate::config::{ConfigError, ScenarioConfig};
use crate::report::{self, Report};
use crate::scenario::{RunError, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Simulate,
    Sweep,
    Qubit,
    CompareTiers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub config: PathBuf,
    pub out: PathBuf,
    pub tier: Option<Tier>,
    pub jobs: Option<usize>,
    pub lenient: bool,
    pub decimate: usize,
}

impl Options {
    pub fn new(config: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            config: config.into(),
            out: out.into(),
            tier: None,
            jobs: None,
            lenient: false,
            decimate: 1,
        }
    }
}

pub const SWEEP_HEADER: &str =
    "value,status,eta,shape_fidelity,conservation_residual,beta_l,kappa1_l,kappa2_l,eit_window_t";

pub fn load(options: &Options) -> Result<ScenarioConfig, RunError> {
    let mut config = ScenarioConfig::load(&options.config)?;
    if let Some(tier) = options.tier {
        config.tier = tier;
        config.validate()?;
    }
    Ok(config)
}

/// Runs a subcommand, writing human-readable output to `stdout`. Returns the
/// process exit code for outcomes that are not errors.
pub fn run(command: Command, options: &Options, stdout: &mut dyn Write) -> Result<i32, RunError> {
    let config = load(options)?;
    match command {
        Command::Validate => validate(&config, options, stdout),
        Command::Simulate => simulate(&config, options, stdout),
        Command::Sweep => sweep(&config, options, stdout),
        Command::Qubit => qubit(&config, options, stdout),
        Command::CompareTiers => compare(&config, options, stdout),
    }
}

fn out_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Output {
        path: path.to_owned(),
        source,
    }
}

fn create(dir: &Path, name: &Path) -> Result<(PathBuf, BufWriter<File>), RunError> {
    fs::create_dir_all(dir).map_err(out_err(dir))?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(out_err(&path))?;
    Ok((path, BufWriter::new(file)))
}

fn write_with(
    dir: &Path,
    name: &str,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), RunError> {
    let (path, mut w) = create(dir, Path::new(name))?;
    body(&mut w).and_then(|_| w.flush()).map_err(out_err(&path))
}

fn echo(stdout: &mut dyn Write, text: &str) -> Result<(), RunError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(out_err(Path::new("<stdout>")))
}

fn warn_regime(scenario: &Scenario) {
    for c in scenario.regime.conditions().iter().filter(|c| !c.ok) {
        eprintln!("warning: regime condition {}", report::condition_line(c));
    }
}

fn validate(config: &ScenarioConfig, options: &Options, stdout: &mut dyn Write) -> Result<i32, RunError> {
    let scenario = Scenario::build(config)?;
    let lines = report::regime_lines(&scenario.regime, scenario.phase_match);
    echo(stdout, &(lines.join("\n") + "\n"))?;
    Ok(if scenario.regime.all_ok || options.lenient {
        0
    } else {
        2
    })
}

/// The envelope on the lab time axis t = τ + offset.
fn on_lab_axis(envelope: PulseEnvelope<f64>, offset: f64) -> PulseEnvelope<f64> {
    let g = envelope.grid;
    let grid = TimeGrid::new(g.t_start() + offset, g.t_end() + offset, g.len())
        .expect("shifted grid stays valid");
    PulseEnvelope { grid, ..envelope }
}

fn simulate(config: &ScenarioConfig, options: &Options, stdout: &mut dyn Write) -> Result<i32, RunError> {
    let scenario = Scenario::build(config)?;
    warn_regime(&scenario);
    let (history, result) = scenario.simulate()?;
    let dir = &options.out;
    write_with(dir, "field_history.csv", |w| history.write_csv(w, options.decimate))?;
    let frame = history.grid().length() / history.grid().v_ref();
    for (carrier, tag) in [(Carrier::One, "e1"), (Carrier::Two, "e2")] {
        let input = history.input(carrier);
        write_with(dir, &format!("input_{tag}.csv"), |w| input.write_csv(w))?;
        let output = on_lab_axis(history.output(carrier), frame);
        write_with(dir, &format!("output_{tag}.csv"), |w| output.write_csv(w))?;
    }
    let summary = report::simulation_summary(&scenario, &history, &result).render();
    write_with(dir, "summary.txt", |w| w.write_all(summary.as_bytes()))?;
    echo(stdout, &summary)?;
    Ok(0)
}

fn qubit(config: &ScenarioConfig, options: &Options, stdout: &mut dyn Write) -> Result<i32, RunError> {
    if config.qubit.is_none() {
        return Err(ConfigError::Missing("qubit.a_re".into()).into());
    }
    let scenario = Scenario::build(config)?;
    warn_regime(&scenario);
    let result = scenario.qubit_transfer()?;
    let summary = report::qubit_summary(&scenario, &result).render();
    write_with(&options.out, "qubit.txt", |w| w.write_all(summary.as_bytes()))?;
    echo(stdout, &summary)?;
    Ok(0)
}

fn compare(config: &ScenarioConfig, options: &Options, stdout: &mut dyn Write) -> Result<i32, RunError> {
    // The full tier never sees the βL override, so comparisons use the
    // physical β throughout.
    let mut config = config.clone();
    config.beta_l = None;
    config.tier = Tier::Full;
    let scenario = Scenario::build(&config)?;
    warn_regime(&scenario);
    let cmp = scenario.compare_tiers()?;
    let summary = report::comparison_summary(&scenario, &cmp).render();
    write_with(&options.out, "compare.txt", |w| w.write_all(summary.as_bytes()))?;
    echo(stdout, &summary)?;
    if cmp.flagged {
        eprintln!(
            "warning: tiers disagree in eta by more than {}",
            qfc_core::propagation::TIER_AGREEMENT
        );
    }
    Ok(0)
}

/// Outcome of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<Report, (i32, String)>,
}

impl SweepRow {
    pub fn status(&self) -> &'static str {
        match &self.outcome {
            Ok(_) => "ok",
            Err((1, _)) => "config_error",
            Err(_) => "numerical_error",
        }
    }

    pub fn csv_line(&self) -> String {
        let mut fields = vec![Shortest(self.value).to_string(), self.status().to_owned()];
        let keys = [
            "eta",
            "shape_fidelity",
            "conservation_residual",
            "beta_l",
            "kappa1_l",
            "kappa2_l",
            "eit_window_t",
        ];
        for k in keys {
            let v = match &self.outcome {
                Ok(r) => r.get(k).unwrap_or("").to_owned(),
                Err(_) => String::new(),
            };
            fields.push(v);
        }
        fields.join(",")
    }
}

/// Evaluates one sweep point; the report is the same as `simulate` prints.
pub fn sweep_point(config: &ScenarioConfig, key: &str, value: f64) -> SweepRow {
    let outcome = (|| {
        let point = config.with_value(key, value)?;
        let scenario = Scenario::build(&point)?;
        let (history, result) = scenario.simulate()?;
        Ok::<_, RunError>(report::simulation_summary(&scenario, &history, &result))
    })()
    .map_err(|e| (e.exit_code(), e.to_string()));
    SweepRow { value, outcome }
}

pub fn sweep_rows(config: &ScenarioConfig, key: &str, points: &[f64], jobs: Option<usize>) -> Vec<SweepRow> {
    let eval = || -> Vec<SweepRow> {
        points
            .par_iter()
            .map(|&v| sweep_point(config, key, v))
            .collect()
    };
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(eval),
            Err(_) => eval(),
        },
        None => eval(),
    }
}

fn sweep(config: &ScenarioConfig, options: &Options, stdout: &mut dyn Write) -> Result<i32, RunError> {
    let spec = config
        .sweep
        .clone()
        .ok_or_else(|| ConfigError::Missing("sweep.key".into()))?;
    let points = spec.points();
    let rows = sweep_rows(config, &spec.key, &points, options.jobs);
    let (path, mut w) = create(&options.out, &spec.output)?;
    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.csv_line());
        text.push('\n');
        if let Err((_, msg)) = &row.outcome {
            eprintln!("sweep point {} = {}: {msg}", spec.key, Shortest(row.value));
        }
    }
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(out_err(&path))?;
    let failed: Vec<i32> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().err().map(|(c, _)| *c))
        .collect();
    echo(
        stdout,
        &format!(
            "sweep {}: {} points, {} failed, written to {}\n",
            spec.key,
            rows.len(),
            failed.len(),
            path.display()
        ),
    )?;
    Ok(if failed.contains(&3) {
        3
    } else if failed.is_empty() {
        0
    } else {
        1
    })
}
