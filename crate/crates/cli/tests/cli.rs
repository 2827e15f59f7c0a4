use std::fs;
use std::path::Path;
use std::process::Command;

use spinpump::config::RunConfig;
use spinpump::{output, sweep};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinpump"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path
}

const SMALL_SWEEP: &str = r#"
name = "small"
model = "coherent"
mode = "cycle"
x_p = 0.5
axis = "energy"
start = 20.0
stop = 40.0
points = 9
output = "out"
"#;

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_SWEEP);
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let status = bin().args(["sweep", "--config"]).arg(&config).args(["--threads", threads]).output().unwrap().status;
        assert!(status.success());
        let read = |ext: &str| fs::read(dir.path().join("out").join(format!("small.{ext}"))).unwrap();
        outputs.push((read("csv"), read("json"), read("gp")));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(csv.starts_with("# spinpump "));
    assert!(csv.contains("x,i_up,i_down,i_spin,i_charge,status"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 10);
}

#[test]
fn invalid_configs_fail_before_running() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        "axis = \"energy\"\nvalues = [20.0, 20.0]\n",
        "axis = \"energy\"\nvalues = []\n",
        "axis = \"energy\"\nvalues = [20.0]\nunknown_key = 3\n",
        "axis = \"x_p\"\nvalues = [5.0]\nd0 = 5.0\n",
    ] {
        let config = write_config(dir.path(), body);
        let out = bin().args(["sweep", "--config"]).arg(&config).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{body}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn flagged_rows_give_nonzero_exit() {
    // the dephased composite needs a propagating segment; B = 7 at E = 20 is not
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "name = \"flag\"\nmodel = \"dephased\"\nmode = \"weak\"\nepsilon = 0.5\naxis = \"b_x\"\nvalues = [4.0, 7.0]\nenergy = 20.0\n",
    );
    let out = bin().args(["sweep", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let csv = fs::read_to_string(dir.path().join("flag.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert!(rows[0].ends_with(",ok"));
    assert!(rows[1].contains("nan") && rows[1].contains("error"));
}

#[test]
fn unknown_preset_is_an_error() {
    let out = bin().args(["figure", "fig7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
    let list = bin().args(["figure", "list"]).output().unwrap();
    assert!(String::from_utf8_lossy(&list.stdout).contains("fig9b"));
}

#[test]
fn convert_si_prints_scales() {
    let out = bin()
        .args(["convert-si", "--b0", "0.1", "--meff", "0.067", "--freq", "1e8", "--value", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(key)).unwrap();
        line.split('=').nth(1).unwrap().trim().parse().unwrap()
    };
    assert!((value("length_unit_angstrom") - 811.3).abs() < 0.5);
    assert!((value("energy_unit_mev") - 0.1728).abs() < 1e-3);
    assert!((value("current_a") - 1.602e-11).abs() < 1e-14);
    let bad = bin().args(["convert-si", "--b0=-1", "--meff", "0.067", "--freq", "1", "--value", "1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("reference field must be positive"));
}

#[test]
fn heat_rows_satisfy_the_split() {
    let config = RunConfig::from_toml_str(
        "observable = \"heat\"\nx_p = 0.5\naxis = \"energy\"\nvalues = [20.0, 30.0, 45.0]\n",
        Path::new("."),
    )
    .unwrap();
    let result = sweep::run(&config, Some(1)).unwrap();
    assert_eq!(result.flagged(), 0);
    for row in &result.rows {
        let (h, j, n) = (row.values[6], row.values[7], row.values[8]);
        assert!((h - j - n).abs() <= 1e-12 * h.max(1.0));
        assert!((row.values[9] - n / h).abs() < 1e-15);
    }
    let csv = output::render_csv(&config, &result);
    assert!(csv.contains("n_over_h"));
}

#[test]
fn doubling_nodes_leaves_preset_points_unchanged() {
    // doubling the starting node count moves the cycle average by less than
    // the quadrature tolerance at a few preset points
    for (name, index) in [("fig2b", 50), ("fig4b", 40), ("fig8b", 30), ("fig6b", 120)] {
        let config = spinpump::presets::find(name).unwrap().config();
        let x = config.grid[index];
        let coarse = sweep::evaluate_row(&config, x);
        let mut fine_config = config.clone();
        fine_config.params.nodes *= 2;
        let fine = sweep::evaluate_row(&fine_config, x);
        let scale = coarse.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for (a, b) in coarse.values.iter().zip(&fine.values) {
            assert!((a - b).abs() <= 1e-6 * scale, "{name}: {a} vs {b}");
        }
    }
}
