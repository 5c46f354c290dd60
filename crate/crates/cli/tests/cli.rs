use std::process::{Command, Output};

fn lmmroot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmmroot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rates_lists_cells_and_reports_mismatches() {
    let o = lmmroot(&["rates"]);
    let text = stdout(&o);
    assert!(text.starts_with("family,s,d,rate,rounded,published,match\n"));
    assert!(text.contains("full,2,1,2.732051,2.73,2.73,true"));
    assert!(text.contains("derivative-free,1,0,n/a,n/a,,"));
    assert!(text.contains("adams-bashforth,5,1,2.608330,2.61,2.61,true"));
    // three published cells do not round to the computed roots
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        String::from_utf8_lossy(&o.stderr)
            .matches("mismatch:")
            .count(),
        3
    );
}

#[test]
fn pathology_flags_false_convergence() {
    let o = lmmroot(&["pathology"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("tanh,newton,1,-1.719,diverged,false"));
    // 6.05958 rounds up
    assert!(text.contains("tanh,newton,2,6.060,diverged,false"));
    assert!(text.contains("tanh,newton,4,Inf,diverged,false"));
    assert!(text.contains("tanh,s=2,2,0.8045,converged,false"));
    assert!(text.contains("cbrt_gauss,s=2,1,-0.2589,converged,false"));
    assert!(text.contains("cbrt_gauss,newton,745,27.31,converged,true"));
}

#[test]
fn robust_writes_markdown_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("robust.md");
    let o = lmmroot(&[
        "robust",
        "--format",
        "markdown",
        "--out",
        path.to_str().unwrap(),
        "--random",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("| function"));
    let total = text.lines().find(|l| l.starts_with("| total")).unwrap();
    let cells: Vec<&str> = total.split('|').map(str::trim).collect();
    let its: usize = cells[5].parse().unwrap();
    let evals: usize = cells[8].parse().unwrap();
    assert_eq!(cells[6], "49");
    assert_eq!(cells[7], "164");
    assert!(its <= 60);
    assert_eq!(evals, 2 * its);
}

#[test]
fn output_is_deterministic() {
    let a = lmmroot(&["robust", "--random", "20", "--seed", "3"]);
    let b = lmmroot(&["robust", "--random", "20", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_at_reduced_precision() {
    let o = lmmroot(&["bench", "--digits", "120", "--eta", "100"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 13);
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("x + e^x,-0.567143,1.50,"));
}

#[test]
fn bad_arguments_exit_with_three() {
    assert_eq!(lmmroot(&["bench", "--digits", "20"]).status.code(), Some(3));
    assert_eq!(lmmroot(&["robust", "--delta", "-1"]).status.code(), Some(3));
    assert_eq!(lmmroot(&["nonsense"]).status.code(), Some(3));
    assert_eq!(
        lmmroot(&["--format", "xml", "rates"]).status.code(),
        Some(3)
    );
    assert_eq!(lmmroot(&["--help"]).status.code(), Some(0));
}
