use std::path::Path;
use std::process::{Command, Output};

fn udtfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udtfs"))
        .args(args)
        .output()
        .expect("spawn udtfs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_compress_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("iv.txt");
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&udtfs(&["gen", "intervals(5)", "-o", p(&sys)])), 0);

    let out = udtfs(&["compress", p(&sys), "--type", "3", "-o", p(&cert)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = udtfs(&["verify", p(&sys), p(&cert), "--type", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("status pass"));
}

#[test]
fn verify_against_wrong_type_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("th.txt");
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&udtfs(&["gen", "thresholds(4)", "-o", p(&sys)])), 0);
    assert_eq!(code(&udtfs(&["compress", p(&sys), "--type", "1100", "-o", p(&cert)])), 0);
    let out = udtfs(&["verify", p(&sys), p(&cert), "--type", "1000"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("status fail"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("s.txt");
    assert_eq!(code(&udtfs(&["gen", "no-such-family(3)"])), 2);
    assert_eq!(code(&udtfs(&["vcdim", p(&dir.path().join("missing.txt"))])), 2);
    assert_eq!(code(&udtfs(&["gen", "powerset(3)", "-o", p(&sys)])), 0);
    assert_eq!(code(&udtfs(&["compress", p(&sys), "--type", "99"])), 2);
    assert_eq!(code(&udtfs(&["compress", p(&sys), "--type", "ab"])), 2);
    assert_eq!(code(&udtfs(&["--tolerance", "1/2", "--approx-lp", "compress", p(&sys), "--type", "0"])), 2);
    assert_eq!(code(&udtfs(&["--exact-lp", "--approx-lp", "vcdim", p(&sys)])), 2);
}

#[test]
fn vcdim_and_dual() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("s.txt");
    assert_eq!(code(&udtfs(&["gen", "powerset(3)", "-o", p(&sys)])), 0);
    let out = udtfs(&["vcdim", p(&sys)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("vc 3"), "{text}");
    assert!(text.contains("dual_vc 1"), "{text}");

    let dual = dir.path().join("d.txt");
    assert_eq!(code(&udtfs(&["dual", p(&sys), "-o", p(&dual)])), 0);
    let text = stdout(&udtfs(&["vcdim", p(&dual)]));
    assert!(text.starts_with("vc 1\n"), "{text}");
}

#[test]
fn isolate_reports_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("s.txt");
    assert_eq!(code(&udtfs(&["gen", "intervals(6)", "-o", p(&sys)])), 0);
    let out = udtfs(&["isolate", p(&sys), "--oracle"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("budget t(2) = 6"), "{text}");
    assert!(text.contains("oracle"), "{text}");
}

#[test]
fn template_and_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("s.json");
    assert_eq!(code(&udtfs(&["gen", "halfplane-grid(2,2)", "--json", "-o", p(&sys)])), 0);
    assert_eq!(code(&udtfs(&["template", p(&sys)])), 2);
    let out = udtfs(&["template", p(&sys), "--all-types"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("\"K\""), "{text}");
    assert!(text.contains(": true"), "{text}");
}

#[test]
fn experiment_writes_csv_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let specs = dir.path().join("specs.txt");
    std::fs::write(&specs, "# small\nthresholds(5)\nrandom(8,5)@3\n").unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(code(&udtfs(&["experiment", p(&specs), "-o", p(&a)])), 0);
    assert_eq!(code(&udtfs(&["--approx-lp", "experiment", p(&specs), "-o", p(&b)])), 0);
    let csv = std::fs::read_to_string(&a).unwrap();
    assert!(csv.starts_with("family,A,rows,vc,dual_vc,N_used,pool_size,game_value,m,k_max,K,runtime_ms,status,reason"));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().skip(1).all(|l| l.contains(",pass,")));
    let again = dir.path().join("c.csv");
    assert_eq!(code(&udtfs(&["experiment", p(&specs), "-o", p(&again)])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&again).unwrap());
}
