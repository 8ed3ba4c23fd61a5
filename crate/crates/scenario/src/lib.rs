//! Configuration-driven runs of the `eulerflight` models.

pub mod bench;
pub mod config;
pub mod output;
pub mod report;
pub mod runner;

pub use config::{ConfigError, Param, ScenarioConfig};
pub use runner::{run_all, run_param, RunError, RunResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "EULERFLIGHT_OUT_DIR";

/// Directory holding the bundled scenario files.
pub fn bundled_scenarios_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}
