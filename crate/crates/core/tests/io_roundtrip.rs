mod common;

use common::random_lps;
use mirrorgate::io::{parse_problem_file, read_trace_csv, write_problem_file, write_trace, write_trace_csv};
use mirrorgate::{certify, solve, BudgetMode, DualNorm, Error, OracleMode, ProxSetup, SolverConfig};

#[test]
fn problem_file_round_trip_200_by_500() {
    let p = &random_lps(1, 500, 200, 7, 31)[0];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    write_problem_file(p, &path).unwrap();
    let q = parse_problem_file(&path).unwrap();
    assert_eq!(p.matrix(), q.matrix());
    assert_eq!(p.offsets(), q.offsets());
    assert_eq!(p.objective().c, q.objective().c);
    assert_eq!(p.set(), q.set());
    let again = dir.path().join("q.txt");
    write_problem_file(&q, &again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn trace_round_trip_reproduces_counts() {
    let p = &random_lps(1, 10, 20, 3, 32)[0];
    let setup = ProxSetup::euclidean(p.set().clone()).unwrap();
    let (mf, mg) = p.gradient_bounds(DualNorm::L2).unwrap();
    let mut cfg = SolverConfig::new(0.05, mf, mg);
    cfg.verbose_trace = true;
    cfg.log_objective = true;
    let r = solve(p, &setup, &cfg).unwrap();
    let c = certify(p, &r.trace, &r.steps).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    write_trace_csv(&r, Some(&c), &path).unwrap();
    let s = read_trace_csv(&path).unwrap();
    assert_eq!(s.iterations, r.trace.iterations);
    assert_eq!(s.n_productive, r.trace.n_productive);
    assert_eq!(s.n_nonproductive, r.trace.n_nonproductive);
    let hits: Vec<(usize, u64)> = r.trace.hit_counts.iter().copied().enumerate().filter(|(_, h)| *h > 0).collect();
    assert_eq!(s.hit_counts.into_iter().collect::<Vec<_>>(), hits);
    assert_eq!(s.records, r.trace.log);
}

#[test]
fn trace_row_counts() {
    let p = &random_lps(1, 10, 20, 3, 33)[0];
    let setup = ProxSetup::euclidean(p.set().clone()).unwrap();
    let mut cfg = SolverConfig::new(0.05, 1.0, 1.0);
    cfg.budget = BudgetMode::Manual(3);
    cfg.oracle = OracleMode::Exact;
    let lines = |cfg: &SolverConfig| {
        let mut buf = Vec::new();
        write_trace(&solve(p, &setup, cfg).unwrap(), None, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data = text.lines().skip(1).filter(|l| !l.starts_with('#')).count();
        assert!(text.lines().all(|l| l.split(',').count() == 6));
        (text.lines().next().unwrap().to_string(), data)
    };
    assert_eq!(lines(&cfg), ("k,branch,row,g,f,n_productive".to_string(), 0));
    cfg.verbose_trace = true;
    assert_eq!(lines(&cfg).1, 3);
}

#[test]
fn failed_write_leaves_no_file() {
    let p = &random_lps(1, 4, 3, 2, 34)[0];
    let setup = ProxSetup::euclidean(p.set().clone()).unwrap();
    let mut cfg = SolverConfig::new(0.1, 1.0, 1.0);
    cfg.budget = BudgetMode::Manual(5);
    let r = solve(p, &setup, &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("t.csv");
    assert!(write_trace_csv(&r, None, &path).is_err());
    assert!(!path.exists());
}

#[test]
fn parse_errors_name_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "mirrorgate-problem v1\nn 2\nm 1\nset box\nlo 0 zero\nhi 1 1\nc 1 1\nb 0\nmatrix\n%%MatrixMarket matrix coordinate real general\n1 2 1\n1 1 1\n").unwrap();
    match parse_problem_file(&path) {
        Err(e @ Error::Parse { line: 5, .. }) => assert!(e.to_string().contains("bad.txt")),
        other => panic!("{other:?}"),
    }
}
