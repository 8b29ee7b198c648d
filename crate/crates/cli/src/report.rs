//! Flat `key = value` text reports.

use std::fmt::Write as _;

use qfc_core::analysis::{ConversionResult, QubitTransferResult};
use qfc_core::physics::{Condition, RegimeReport};
use qfc_core::propagation::{FieldHistory, TierComparison};
use qfc_core::Shortest;

use crate::scenario::{PhaseMatch, Scenario};

fn num(x: f64) -> String {
    Shortest(x).to_string()
}

/// Ordered key/value pairs rendered one per line as `key = value`.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_owned(), value.to_string()));
    }

    pub fn real(&mut self, key: &str, value: f64) {
        self.push(key, num(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().fold(String::new(), |mut s, (k, v)| {
            let _ = writeln!(s, "{k} = {v}");
            s
        })
    }
}

pub fn condition_line(c: &Condition<f64>) -> String {
    format!(
        "{} {} {} {} {}",
        c.name,
        num(c.value),
        c.relation.symbol(),
        num(c.threshold),
        if c.ok { "PASS" } else { "FAIL" }
    )
}

/// One line per condition, then the informational lines.
pub fn regime_lines(report: &RegimeReport<f64>, phase: Option<PhaseMatch>) -> Vec<String> {
    let mut lines: Vec<String> = report.conditions().iter().map(condition_line).collect();
    lines.push(format!("doppler_temperature_K {}", num(report.doppler_temperature)));
    if let Some(p) = phase {
        lines.push(format!(
            "phase_mismatch_dkL {} {}",
            num(p.dk_l),
            if p.ok { "PASS" } else { "WARN" }
        ));
    }
    lines.push(format!("all_ok {}", report.all_ok));
    lines
}

fn derived_entries(report: &mut Report, scenario: &Scenario) {
    let p = &scenario.medium.params;
    let r = &scenario.regime;
    report.real("beta_l", p.beta_l());
    report.real("kappa1_l", p.kappa1 * p.length);
    report.real("kappa2_l", p.kappa2 * p.length);
    report.real("v1_mps", p.v1);
    report.real("v2_mps", p.v2);
    report.real("eit_window_t", r.eit.value);
    report.real("broadening1", r.broadening[0].value);
    report.real("broadening2", r.broadening[1].value);
    report.real("doppler_temperature_k", r.doppler_temperature);
    report.push("regime_ok", r.all_ok);
}

fn grid_entries(report: &mut Report, scenario: &Scenario) {
    report.push("n_z", scenario.grid.n_z());
    report.push("n_tau", scenario.input.grid.len());
    report.real("dt_s", scenario.input.grid.dt());
}

pub fn simulation_summary(
    scenario: &Scenario,
    history: &FieldHistory<f64>,
    result: &ConversionResult<f64>,
) -> Report {
    let mut r = Report::default();
    r.push("tier", scenario.config.tier);
    r.real("eta", result.eta);
    r.real("residual_n1", result.residual_n1);
    r.real("complete_conversion_residual", result.residual_n1.sqrt());
    r.real("conservation_residual", result.conservation_residual);
    r.real("max_conservation_residual", history.max_conservation_residual());
    r.real("shape_fidelity", result.shape_fidelity);
    r.real("delay_s", result.delay);
    derived_entries(&mut r, scenario);
    grid_entries(&mut r, scenario);
    r
}

pub fn qubit_summary(scenario: &Scenario, q: &QubitTransferResult<f64>) -> Report {
    let mut r = Report::default();
    r.push("tier", scenario.config.tier);
    r.real("a_out_re", q.a_out.re);
    r.real("a_out_im", q.a_out.im);
    r.real("b_out_re", q.b_out.re);
    r.real("b_out_im", q.b_out.im);
    r.real("global_phase_rad", q.global_phase);
    r.real("fidelity", q.qubit_fidelity);
    r.real("leakage", q.leakage);
    r.real("eta", q.eta);
    derived_entries(&mut r, scenario);
    grid_entries(&mut r, scenario);
    r
}

pub fn comparison_summary(scenario: &Scenario, cmp: &TierComparison<f64>) -> Report {
    let mut r = Report::default();
    for (tier, res) in &cmp.results {
        r.real(&format!("{tier}.eta"), res.eta);
        r.real(&format!("{tier}.shape_fidelity"), res.shape_fidelity);
        r.real(&format!("{tier}.residual_n1"), res.residual_n1);
        r.real(&format!("{tier}.delay_s"), res.delay);
    }
    for (a, b, d) in &cmp.eta_differences {
        r.real(&format!("eta_diff.{a}_{b}"), *d);
    }
    for (a, b, o) in &cmp.output_overlaps {
        let v = o.map_or_else(|| "nan".to_owned(), num);
        r.push(&format!("output_overlap.{a}_{b}"), v);
    }
    r.push("flagged", cmp.flagged);
    derived_entries(&mut r, scenario);
    grid_entries(&mut r, scenario);
    r
}
