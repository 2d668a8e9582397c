// A config-driven run and a refinement sweep, written to a temporary directory.

use anisym::harness::{run_config, sweep_config, ExperimentConfig, Expr};

const CONFIG: &str = r#"
[domain]
kind = "disk"
dim = 2
radius = 1.0
h = 0.0625

[phi]
kind = "power_sum"
p = [2, 2]
lambda = [1, 1]

[data]
f = "1 + 0.5*ind(-1, 0, -1, 1)"

[[checks]]
kind = "comparison"
threshold = 1.05

[[checks]]
kind = "gradient_estimate"
slack = 0.05

[[norms]]
name = "f_L2"
of = "f"
norm = { kind = "lorentz", p = 2, q = 2 }
"#;

pub fn run_example() {
    let e = Expr::parse("(1 - |x|^2)/4", 2).unwrap();
    println!("expression at (0.5, 0): {}", e.eval(&[0.5, 0.0]));

    let cfg = ExperimentConfig::from_toml_str(CONFIG, ".").unwrap();
    println!("config hash {}", cfg.hash());
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(&cfg, dir.path()).unwrap();
    println!("exit {}, empirical C {:?}, norms {:?}", out.exit, out.report.empirical_c, out.report.norms);
    for c in &out.report.checks {
        println!("  {} -> {:?}", c.kind, c.status);
    }
    let sweep = sweep_config(&cfg, "domain.h", &[1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0], &dir.path().join("sweep"), 2).unwrap();
    print!("{}", std::fs::read_to_string(&sweep.summary_path).unwrap());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
