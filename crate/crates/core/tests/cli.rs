use std::path::Path;
use std::process::{Command, Output};

fn coflow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coflow"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn seed_is_required() {
    let d = tempfile::tempdir().unwrap();
    assert!(!coflow(d.path(), &["gen", "-o", "x.txt"]).status.success());
    std::fs::write(
        d.path().join("s.toml"),
        "name = \"x\"\ncores = [1]\ncoflows = [1]\nschedulers = [\"fls\"]\n",
    )
    .unwrap();
    assert!(!coflow(d.path(), &["run", "s.toml", "-o", "x.csv"]).status.success());
}

#[test]
fn gen_then_oracle_on_a_known_instance() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("i.txt"), "1 2\n1 1 1 3\n2 1 1 9\n3 1 1 6\n").unwrap();
    let o = coflow(d.path(), &["oracle", "i.txt"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("flow_opt 9/1"), "{text}");
    assert!(text.contains("coflow_opt 9/1"), "{text}");
    assert!(text.contains("combined_lb 9/1"), "{text}");
}

#[test]
fn oracle_refuses_large_instances() {
    let d = tempfile::tempdir().unwrap();
    let o = coflow(
        d.path(),
        &["gen", "--seed", "1", "-k", "25", "-m", "5", "-o", "big.txt"],
    );
    assert!(o.status.success());
    let o = coflow(d.path(), &["oracle", "big.txt", "--level", "flow"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("limit"), "{}", stderr(&o));
}

#[test]
fn realize_dump_covers_every_flow() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("i.txt"), "2 2\n1 1 1 4\n1 1 2 4\n2 2 1 4\n").unwrap();
    let o = coflow(d.path(), &["realize", "i.txt", "--scheduler", "fls"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("# fls makespan 4/1\n"), "{text}");
    let served: usize = text.lines().skip(1).map(|l| l.split(',').count() - 3).sum();
    assert!(served >= 3);
}

#[test]
fn parse_errors_name_the_line() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("bad.txt"), "2 1\n1 1 1 4\n1 1 9 4\n").unwrap();
    let o = coflow(d.path(), &["realize", "bad.txt"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains(":3"), "{}", stderr(&o));
}

#[test]
fn heterogeneous_runs_report_row_errors_and_continue() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(
        d.path().join("s.toml"),
        "name = \"h\"\ncores = [4]\ncoflows = [5]\nheterogeneity = [2]\ntrials = 3\nschedulers = [\"fls\", \"flpt-h\"]\n",
    )
    .unwrap();
    let o = coflow(d.path(), &["run", "s.toml", "--seed", "2", "-o", "out.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(d.path().join("out.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3);
    assert!(csv.lines().skip(1).all(|l| l.contains(",flpt-h,")));
    assert_eq!(stderr(&o).lines().count(), 3);
}

#[test]
fn trace_reports_stats_and_thresholds() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("t.txt"), "8 2\n1 0 2 0 3 2 4:10 5:3.5\n2 5 1 7 1 1:1\n").unwrap();
    let o = coflow(d.path(), &["trace", "t.txt", "--threshold", "1,4,5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "racks 8\ncoflows 2\nflows_per_coflow 1 4\nflow_size_mb 1 5\nthreshold 1 2\nthreshold 4 1\nthreshold 5 0\n"
    );
}
