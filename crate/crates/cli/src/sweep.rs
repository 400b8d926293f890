//! Parameter sweeps and their CSV form.

use std::fmt::Write as _;

use isac_core::{run_monte_carlo_with_threads, AggregateResult, Mode, Scenario, ScenarioConfig, METRIC_NAMES};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepParam {
    UserCount,
    #[value(name = "lambda_B", alias = "lambda_b")]
    LambdaB,
    FaP,
    TotalPower,
    Rho1,
    RoomScale,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::UserCount => "user_count",
            SweepParam::LambdaB => "lambda_B",
            SweepParam::FaP => "fa_p",
            SweepParam::TotalPower => "total_power",
            SweepParam::Rho1 => "rho1",
            SweepParam::RoomScale => "room_scale",
        }
    }

    /// Applies `value` to a copy of `config`.
    pub fn apply(&self, config: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut c = config.clone();
        match self {
            SweepParam::UserCount => c.users.count = value.round().max(0.0) as usize,
            SweepParam::LambdaB => {
                c.blockage.lambda_b = Some(value);
                c.blockage.lambda_p = None;
            }
            SweepParam::FaP => c.thresholds.fa_p = value,
            SweepParam::TotalPower => c.thz.p_w = value,
            SweepParam::Rho1 => c.thz.rho1_override = Some(value),
            SweepParam::RoomScale => {
                c.room.length *= value;
                c.room.width *= value;
                for p in [&mut c.aps.thz_sensing, &mut c.aps.thz_comm]
                    .into_iter()
                    .chain(c.aps.vlc.iter_mut())
                {
                    p.x *= value;
                    p.y *= value;
                }
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BlockageChoice {
    On,
    Off,
    Both,
}

impl BlockageChoice {
    pub fn states(&self) -> &'static [bool] {
        match self {
            BlockageChoice::On => &[true],
            BlockageChoice::Off => &[false],
            BlockageChoice::Both => &[false, true],
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub modes: Vec<Mode>,
    pub blockage: BlockageChoice,
}

/// One CSV row: the sweep coordinates and the aggregate at that point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub series: String,
    pub value: f64,
    pub mode: Mode,
    pub blockage: bool,
    pub result: AggregateResult,
}

/// Runs every (value, mode, blockage) point of `spec` on top of `base`.
/// Rows come out value-major, then mode, then blockage off before on.
pub fn run_sweep(
    base: &ScenarioConfig,
    spec: &SweepSpec,
    series: &str,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>, Failure> {
    if spec.values.is_empty() {
        return Err(Failure::Usage("sweep needs at least one value".into()));
    }
    if spec.trials == 0 {
        return Err(Failure::Usage("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &value in &spec.values {
        for &mode in &spec.modes {
            for &blockage in spec.blockage.states() {
                let mut config = spec.param.apply(base, value);
                config.mode = mode;
                config.blockage.enabled = blockage;
                let scenario = Scenario::from_config(&config).map_err(Failure::Config)?;
                let result = run_monte_carlo_with_threads(&scenario, spec.trials, spec.base_seed, threads)
                    .map_err(Failure::Model)?;
                rows.push(SweepRow {
                    series: series.to_string(),
                    value,
                    mode,
                    blockage,
                    result,
                });
            }
        }
    }
    Ok(rows)
}

/// Float format shared by every CSV: 9 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

/// Column names after the leading `value,mode,blockage`.
pub fn metric_columns() -> Vec<String> {
    METRIC_NAMES
        .iter()
        .flat_map(|m| [format!("{m}_mean"), format!("{m}_std")])
        .collect()
}

/// Renders rows as CSV. `header` lines are emitted first, each prefixed `# `.
/// Figure files carry a leading `series` column.
pub fn to_csv(header: &[String], rows: &[SweepRow], with_series: bool) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let mut columns: Vec<String> = Vec::new();
    if with_series {
        columns.push("series".into());
    }
    columns.extend(["value".into(), "mode".into(), "blockage".into()]);
    columns.extend(metric_columns());
    let _ = writeln!(out, "{}", columns.join(","));
    for row in rows {
        let mut cells = Vec::new();
        if with_series {
            cells.push(row.series.clone());
        }
        cells.extend([
            fmt_float(row.value),
            row.mode.as_str().to_string(),
            if row.blockage { "on" } else { "off" }.to_string(),
        ]);
        for m in &row.result.metrics {
            cells.push(fmt_float(m.mean));
            cells.push(fmt_float(m.std));
        }
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}
