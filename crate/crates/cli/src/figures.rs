//! Predeclared figure recipes, one CSV each.

use std::path::Path;

use isac_core::{Mode, Scenario, ScenarioConfig};

use crate::sweep::{run_sweep, to_csv, BlockageChoice, SweepParam, SweepSpec};
use crate::Failure;

pub const FA_VALUES: [f64; 6] = [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 0.999];
pub const LAMBDA_VALUES: [f64; 4] = [2.0, 4.0, 6.0, 8.0];

pub struct Recipe {
    pub file: &'static str,
    pub title: &'static str,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub modes: Vec<Mode>,
    pub blockage: BlockageChoice,
    /// Series label and an extra setting applied before the sweep.
    pub series: Vec<(String, Option<(SweepParam, f64)>)>,
}

fn users(from: usize) -> Vec<f64> {
    (from..=10).map(|n| n as f64).collect()
}

fn single() -> Vec<(String, Option<(SweepParam, f64)>)> {
    vec![("base".to_string(), None)]
}

pub fn recipes() -> Vec<Recipe> {
    use BlockageChoice::*;
    use Mode::*;
    use SweepParam::*;
    let r = |file, title, param, values: Vec<f64>, modes: Vec<Mode>, blockage| Recipe {
        file,
        title,
        param,
        values,
        modes,
        blockage,
        series: single(),
    };
    vec![
        Recipe {
            series: [2.0, 4.0, 6.0]
                .iter()
                .map(|&p| (format!("p_w={p}"), Some((TotalPower, p))))
                .collect(),
            ..r("fig5_rho1.csv", "sensing fraction rho1 vs users for several THz budgets", UserCount, users(1), vec![Proposed], Off)
        },
        r("fig6_pd_vs_fap.csv", "detection probability vs false-alarm probability", FaP, FA_VALUES.to_vec(), vec![Proposed], Both),
        r("fig7_assoc_vs_fap.csv", "THz/VLC association vs false-alarm probability", FaP, FA_VALUES.to_vec(), vec![Proposed], Both),
        r("fig8_pd_scp_vs_n.csv", "detection probability and sensing coverage vs users", UserCount, users(1), vec![Proposed], Both),
        r("fig9_power_vs_n.csv", "total network power vs users", UserCount, users(1), vec![Proposed, NonOptimized], Both),
        r("fig10_pd_scp_vs_lambda.csv", "detection probability and sensing coverage vs blocker density", LambdaB, LAMBDA_VALUES.to_vec(), vec![Proposed], On),
        r("fig11_assoc_vs_lambda.csv", "THz/VLC association vs blocker density", LambdaB, LAMBDA_VALUES.to_vec(), vec![Proposed], On),
        r("fig12_se_vs_n.csv", "average spectral efficiency vs users", UserCount, users(2), vec![Proposed, StandaloneThz], Both),
        r("fig14_ee_vs_n.csv", "energy efficiency vs users", UserCount, users(1), vec![Proposed, NonOptimized], Both),
        r("fig15_ee_vs_lambda.csv", "energy efficiency vs blocker density", LambdaB, LAMBDA_VALUES.to_vec(), vec![Proposed, NonOptimized], On),
        r("fig16_rates_vs_n.csv", "sensing and communication rates vs users", UserCount, users(1), vec![Proposed], Both),
        r("fig17_rates_vs_lambda.csv", "sensing and communication rates vs blocker density", LambdaB, LAMBDA_VALUES.to_vec(), vec![Proposed], On),
    ]
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs every recipe and writes its CSV into `out_dir`.
pub fn write_figures(
    base: &ScenarioConfig,
    fingerprint: &str,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
    out_dir: &Path,
) -> Result<Vec<String>, Failure> {
    std::fs::create_dir_all(out_dir).map_err(|e| Failure::Io(format!("{}: {e}", out_dir.display())))?;
    let mut written = Vec::new();
    for recipe in recipes() {
        let spec = SweepSpec {
            param: recipe.param,
            values: recipe.values.clone(),
            trials,
            base_seed: seed,
            modes: recipe.modes.clone(),
            blockage: recipe.blockage,
        };
        let mut rows = Vec::new();
        for (label, extra) in &recipe.series {
            let config = match extra {
                Some((param, value)) => param.apply(base, *value),
                None => base.clone(),
            };
            Scenario::from_config(&config).map_err(Failure::Config)?;
            rows.extend(run_sweep(&config, &spec, label, threads)?);
        }
        let header = vec![
            format!("figure: {}", recipe.file.trim_end_matches(".csv")),
            format!("title: {}", recipe.title),
            format!("fingerprint: {fingerprint}"),
            format!(
                "recipe: param={} values=[{}] modes=[{}] blockage={:?} series=[{}]",
                recipe.param.as_str(),
                join(&recipe.values),
                join(recipe.modes.iter().map(|m| m.as_str())),
                recipe.blockage,
                join(recipe.series.iter().map(|(l, _)| l)),
            ),
            format!("trials: {trials} seed: {seed}"),
        ];
        let path = out_dir.join(recipe.file);
        std::fs::write(&path, to_csv(&header, &rows, true))
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        written.push(recipe.file.to_string());
    }
    Ok(written)
}
