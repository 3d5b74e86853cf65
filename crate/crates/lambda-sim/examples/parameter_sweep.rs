// Sweeps the delayed-pulse strength R and tabulates how the readout markers
// move. Uses the batch runner, so each value lands in its own subdirectory
// with a manifest and metrics.json, the same layout the command-line tool
// produces.

use lambda_sim::config::{RunConfig, RunMode};
use lambda_sim::runner::run_into;
use lambda_sim::{GridQuantity, GridSpec, PhysParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("lambda-sim-sweep-example");
    let _ = std::fs::remove_dir_all(&out);

    let cfg = RunConfig {
        mode: RunMode::Sweep,
        sweep_param: Some("recur_ratio".into()),
        sweep_values: vec![1.0, 2.0, 4.0, 8.0],
        grid: GridSpec {
            n_t: 1024,
            n_z: 61,
            ..GridSpec::default()
        },
        params: PhysParams::default(),
        quantities: vec![GridQuantity::Probe],
        ..RunConfig::default()
    };
    run_into(&cfg, &out)?;

    println!("results under {}", out.display());
    println!("     R      t_r1      t_rm      t_r2");
    for v in &cfg.sweep_values {
        let dir = out.join(format!("recur_ratio={v:?}"));
        let metrics: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("metrics.json"))?)?;
        let t = |k: &str| {
            metrics["markers"][k]["time"]
                .as_f64()
                .map_or("  absent".into(), |x| format!("{x:8.4}"))
        };
        println!("{v:6.2}  {}  {}  {}", t("t_r1"), t("t_rm"), t("t_r2"));
    }
    Ok(())
}
