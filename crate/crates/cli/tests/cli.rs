//! End-to-end checks of the command-line surface: schema validation,
//! experiment output shape, and rerun determinism.

use std::path::Path;
use std::process::Command;

fn relperc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relperc"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn validate_reports_missing_group() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.conf", "experiment = tail\np = 0.2\n");
    let out = relperc().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("group"), "{stdout}");
}

#[test]
fn validate_reports_grid_range() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "b.conf",
        "experiment = sweep\ngroup = free:2\np_grid = 0.5,1.2\n",
    );
    let out = relperc().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("outside [0,1]"));
}

#[test]
fn validate_reports_incompatible_subgroup() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.conf",
        "experiment = tail\ngroup = wreath:z2:free:2\nsubgroup = axis:0\np = 0.2\n",
    );
    let out = relperc().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("incompatible"));
}

#[test]
fn validate_accepts_good_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "d.conf",
        "experiment = tail\ngroup = free:2\np = 0.2\nsamples = 100\n",
    );
    let out = relperc().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tail_run_emits_monotone_q_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "tail.conf",
        "experiment = tail\ngroup = free:2\np = 0.2\nsamples = 400\nradius = 24\n\
         n_max = 8\nsources = 4\nsource_margin = 4\nseed = 3\n",
    );
    let out = relperc()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv_path = dir.path().join("tail_free-2_all_R24_seed3.csv");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("p,n,q_max"));
    let q: Vec<f64> = lines
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(!q.is_empty());
    for w in q.windows(2) {
        assert!(w[0] >= w[1], "q_max must be non-increasing: {q:?}");
    }
    // manifest exists and carries the config hash
    let manifest = std::fs::read_to_string(dir.path().join("tail_free-2_all_R24_seed3.manifest.txt"))
        .unwrap();
    assert!(manifest.contains("config_hash"));
}

#[test]
fn oracle_russo_gap_below_tolerance() {
    let out = relperc()
        .arg("oracle")
        .arg("russo")
        .arg("--builtin")
        .arg("series-2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ok"), "{stdout}");
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "rerun.conf",
        "experiment = tail\ngroup = free:2\np = 0.25\nsamples = 300\nradius = 20\n\
         n_max = 6\nsources = 2\nsource_margin = 3\nseed = 11\n",
    );
    let run = |sub: &str| {
        let out_dir = dir.path().join(sub);
        std::fs::create_dir_all(&out_dir).unwrap();
        let out = relperc()
            .arg("run")
            .arg(&cfg)
            .arg("--out")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(out_dir.join("tail_free-2_all_R20_seed11.csv")).unwrap()
    };
    assert_eq!(run("first"), run("second"));
}

#[test]
fn unknown_key_fails_run_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.conf", "experiment = tail\ngroup = free:2\np = 0.2\nwat = 1\n");
    let out = relperc().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn freq_experiment_emits_per_seed_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "freq.conf",
        "experiment = freq\ngroup = lattice:2\np = 0.7\nradius = 8\nsteps = 500\nwalks = 3\nseed = 5\n",
    );
    let out = relperc()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv =
        std::fs::read_to_string(dir.path().join("freq_lattice-2_all_R8_seed5.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4); // header + 3 walks
    assert!(csv.starts_with("seed,steps,cluster_id,frequency"));
}
