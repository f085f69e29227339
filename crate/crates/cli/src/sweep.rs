//! Damping-strength sweeps: a grid of scenario points serialized to CSV.

use rayon::prelude::*;
use std::path::PathBuf;

use telefid_core::wmrwm::{scenario_point, Scenario, Variant};
use telefid_core::ScenarioPoint;

use crate::fmt::{csv_row, CSV_HEADER};

/// Environment variable selecting the worker count. Any value produces
/// identical output; rows are computed independently and written in grid
/// order.
pub const WORKERS_ENV: &str = "TELEFID_WORKERS";

/// Reverse-protected points cannot sit exactly at full damping; the grid
/// value 1 is evaluated just inside the domain.
pub const D_CLAMP: f64 = 1.0 - 1e-9;

pub const MAX_STEPS: usize = 10_001;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// 1: second qubit damped; 2: both qubits damped.
    pub scenario: u8,
    pub wmrwm: bool,
    pub d_start: f64,
    pub d_end: f64,
    pub d_steps: usize,
    pub p: f64,
    pub variants: Vec<Variant>,
    /// Reserved for future stochastic columns; sweeps are deterministic.
    pub seed: u64,
    pub output_path: PathBuf,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.scenario == 1 || self.scenario == 2) {
            return Err(format!("scenario must be 1 or 2, got {}", self.scenario));
        }
        if !(0.0..=1.0).contains(&self.d_start)
            || !(0.0..=1.0).contains(&self.d_end)
            || self.d_start >= self.d_end
        {
            return Err(format!(
                "need 0 <= d-start < d-end <= 1, got [{}, {}]",
                self.d_start, self.d_end
            ));
        }
        if self.d_steps < 2 || self.d_steps > MAX_STEPS {
            return Err(format!(
                "steps must be in [2, {MAX_STEPS}], got {}",
                self.d_steps
            ));
        }
        if self.wmrwm && !(0.0..1.0).contains(&self.p) {
            return Err(format!("p must be in [0, 1), got {}", self.p));
        }
        if self.variants.is_empty() {
            return Err("no variants selected".into());
        }
        Ok(())
    }

    fn scenario_kind(&self) -> Scenario {
        match (self.scenario, self.wmrwm) {
            (1, false) => Scenario::SingleBare,
            (1, true) => Scenario::SingleProtected,
            (2, false) => Scenario::BothBare,
            (_, true) => Scenario::BothProtected,
            _ => Scenario::BothBare,
        }
    }

    /// The (scenario, d, p, variant) tuples of every row, in output order.
    fn row_specs(&self) -> Vec<(Scenario, f64, f64, Variant)> {
        let kind = self.scenario_kind();
        let mut specs = Vec::new();
        for i in 0..self.d_steps {
            let d = self.d_start
                + (self.d_end - self.d_start) * i as f64 / (self.d_steps - 1) as f64;
            let d = if self.wmrwm { d.min(D_CLAMP) } else { d };
            for &variant in &self.variants {
                let p = if self.wmrwm { self.p } else { 0.0 };
                specs.push((kind, d, p, variant));
            }
        }
        specs
    }
}

/// Install a rayon pool sized from the worker environment variable and run
/// `f` inside it. Unset, empty, or zero means the library default.
pub fn with_worker_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let workers = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(f)
}

pub fn compute_rows(
    specs: &[(Scenario, f64, f64, Variant)],
) -> Result<Vec<ScenarioPoint>, telefid_core::CoreError> {
    with_worker_pool(|| {
        specs
            .par_iter()
            .map(|&(sc, d, p, v)| scenario_point(sc, d, p, v))
            .collect()
    })
}

/// Full CSV content for the sweep, header included, rows in ascending d.
pub fn sweep_csv(cfg: &SweepConfig) -> Result<String, telefid_core::CoreError> {
    let rows = compute_rows(&cfg.row_specs())?;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&csv_row(row));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> SweepConfig {
        SweepConfig {
            scenario: 1,
            wmrwm: false,
            d_start: 0.0,
            d_end: 1.0,
            d_steps: 5,
            p: 0.0,
            variants: vec![Variant::None],
            seed: 0,
            output_path: PathBuf::from("out.csv"),
        }
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = base_config();
        cfg.scenario = 3;
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.d_steps = 1;
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.d_start = 0.7;
        cfg.d_end = 0.4;
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.wmrwm = true;
        cfg.p = 1.0;
        assert!(cfg.validate().is_err());

        assert!(base_config().validate().is_ok());
    }

    #[test]
    fn bare_sweep_rows_are_ascending_in_d() {
        let csv = sweep_csv(&base_config()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 6);
        let ds: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        for w in ds.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn wmrwm_sweep_emits_one_row_per_variant_and_clamps_d() {
        let mut cfg = base_config();
        cfg.wmrwm = true;
        cfg.p = 0.1;
        cfg.d_steps = 3;
        cfg.variants = vec![Variant::TfMax, Variant::CMax];
        let csv = sweep_csv(&cfg).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 3 * 2);
        assert!(lines[1].starts_with("I_WMRWM,TF_MAX,"));
        assert!(lines[2].starts_with("I_WMRWM,C_MAX,"));
        // The d = 1 grid point is evaluated at the clamped value.
        let last_d: f64 = lines[6].split(',').nth(2).unwrap().parse().unwrap();
        assert!(last_d < 1.0 && last_d > 1.0 - 1e-8);
    }
}
