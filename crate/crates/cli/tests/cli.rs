use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn evlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evlab")).args(args).output().expect("run evlab")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("evlab-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn verify_passes_on_shipped_even_form() {
    let even = data("maass_even_r13.78.txt");
    let out = evlab(&["verify", "--form", &even]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    let checks = text.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).count();
    assert!(checks >= 30, "{checks} checks");
    assert!(!text.contains("FAIL "));
    let again = evlab(&["verify", "--form", &even]);
    assert_eq!(text.as_bytes(), &again.stdout[..]);
}

#[test]
fn scan_mu_csv_is_deterministic() {
    let even = data("maass_even_r13.78.txt");
    let dir = scratch_dir("scan");
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    let base = ["scan-mu", "--form", &even, "--n", "3", "--tmin", "50", "--tmax", "60"];
    let run = |path: &PathBuf, threads: &str| {
        let mut args = base.to_vec();
        args.extend(["--out", path.to_str().unwrap(), "--threads", threads]);
        assert_eq!(evlab(&args).status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    let first = run(&a, "1");
    let second = run(&b, "2");
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("# evlab = "));
    assert!(text.contains("# tmin = 50\n"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t,re_mu,im_mu,abs2_mu,gamma_factor_sq,stirling_sq");
    let row: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 6);
    assert_eq!(row[0], "5.0000000000000000e1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_errors_exit_with_usage() {
    let even = data("maass_even_r13.78.txt");
    let out = evlab(&["cross", "--form", &even]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("takes 2 --form") && err.contains("Usage"), "{err}");
    assert_eq!(evlab(&["scan-mu", "--form", "/nonexistent/form.txt"]).status.code(), Some(2));
    assert_eq!(evlab(&["scan-mu", "--form", &even, "--an", "1"]).status.code(), Some(2));
    assert_eq!(evlab(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn budget_failures_exit_3() {
    let even = data("maass_even_r13.78.txt");
    let dir = scratch_dir("budget");
    let cfg = dir.join("tight.ini");
    std::fs::write(&cfg, "n = 3\ntmin = 20\ntmax = 40\nmax_samples = 10\ngrid_rel_tol = 1e-15\n").unwrap();
    let out = evlab(&["mean-value", "--config", cfg.to_str().unwrap(), "--form", &even]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("mean-value") && err.contains("budget"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn moment_rows_follow_the_fixed_columns() {
    let even = data("maass_even_r13.78.txt");
    let out = evlab(&["second-moment", "--form", &even, "--tmin", "50", "--tmax", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        lines.next().unwrap(),
        "T,integral_re,integral_im,predicted_re,predicted_im,ratio_re,ratio_im,err"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].split(',').count(), 8);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("ratio="), "{summary}");
}
