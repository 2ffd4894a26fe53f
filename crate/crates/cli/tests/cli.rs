use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capregion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn butterfly_routing_region_is_the_triangle() {
    let o = run(&["region", "routing", "--method", "exact", &fixture("butterfly.net")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "vertex 0 0\nvertex 1 0\nvertex 0 1\nfacet 0 -1 <= 0\nfacet 1 1 <= 1\nfacet -1 0 <= 0\n"
    );
    for m in ["vertices", "rays"] {
        let other = run(&["region", "routing", "--method", m, &fixture("butterfly.net")]);
        assert_eq!(stdout(&other), stdout(&o), "method {m}");
    }
}

#[test]
fn semilinear_ray_reaches_one() {
    let o = run(&["ray", "semilinear", "--q", "1,1", "--field", "2", &fixture("butterfly.net")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("lambda = 1\n"));
}

#[test]
fn gk_ray_reports_a_bracket_around_the_exact_value() {
    let o = run(&["ray", "routing", "--q", "1,1", "--method", "gk", &fixture("butterfly.net")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("bracket = [")).expect("bracket line");
    let inner = line.trim_start_matches("bracket = [").trim_end_matches(']');
    let parse = |s: &str| -> f64 {
        match s.trim().split_once('/') {
            Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
            None => s.trim().parse().unwrap(),
        }
    };
    let (lo, hi) = inner.split_once(',').unwrap();
    assert!(parse(lo) <= 0.5 && 0.5 <= parse(hi));
}

#[test]
fn gk_region_is_labelled_as_a_sketch() {
    let o = run(&["region", "semilinear", "--method", "gk", "--rays", "4", &fixture("butterfly.net")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("sample ").count(), 4);
    assert!(out.contains("no guarantee"));
}

#[test]
fn membership_answers() {
    let f = fixture("butterfly.net");
    assert_eq!(stdout(&run(&["member", "routing", "--rate", "1/2,1/2", &f])), "yes\n");
    assert_eq!(stdout(&run(&["member", "routing", "--rate", "1/2,2/3", &f])), "no\n");
    assert_eq!(stdout(&run(&["member", "semilinear", "--rate", "1,1", &f])), "yes\n");
}

#[test]
fn trees_and_weights_listings() {
    let f = fixture("butterfly.net");
    let t = stdout(&run(&["trees", &f]));
    assert!(t.contains("m1: 2 trees") && t.contains("m2: 2 trees"));
    let w = stdout(&run(&["weights", "--field", "2", &f]));
    assert!(w.starts_with("4 weight vectors over GF(2)"));
    assert_eq!(stdout(&run(&["validate", &f])), "ok\n");
}

#[test]
fn plots_write_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("b.svg");
    let o = run(&["plot", "both", "--out", svg.to_str().unwrap(), &fixture("butterfly.net")]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.matches("class=").count() == 2);

    let csv = dir.path().join("b.csv");
    let o = run(&["plot", "routing", "--rays", "3", "--out", csv.to_str().unwrap(), &fixture("butterfly.net")]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("qx,qy,lambda,rx,ry"));
    assert!(text.contains(",1/2,1/2\n"));
}

#[test]
fn corpus_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["corpus", "--seed", "9", "--count", "3", "--out", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for i in 0..3 {
        let name = format!("net_{i:03}.net");
        let x = std::fs::read_to_string(a.path().join(&name)).unwrap();
        let y = std::fs::read_to_string(b.path().join(&name)).unwrap();
        assert_eq!(x, y);
        let o = run(&["validate", a.path().join(&name).to_str().unwrap()]);
        assert_eq!(stdout(&o), "ok\n");
    }
}

#[test]
fn exit_codes() {
    let o = run(&["region", "routing", "/nonexistent/x.net"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("error: cannot read"));
    assert_eq!(err.lines().count(), 1);

    let f = fixture("butterfly.net");
    assert_eq!(run(&["ray", "routing", "--q", "1,1", "--omega", "0", &f]).status.code(), Some(2));
    assert_eq!(run(&["weights", "--field", "4", &f]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["ray", "routing", "--q", "0,0", &f]).status.code(), Some(1));
    assert_eq!(run(&["ray", "routing", "--q", "1,1,1", &f]).status.code(), Some(1));
}

#[test]
fn invalid_network_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cyc.net");
    std::fs::write(&p, "node a\nnode b\nedge a b 1\nedge b a 1\nmessage m a b\n").unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}
