use std::io::Write;
use std::process::{Command, Output, Stdio};

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tatg"))
        .args(args)
        .env("TATG_COLOR", "never")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn last_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).lines().last().unwrap_or("").to_string()
}

#[test]
fn check_k23() {
    let o = run(&["check", &corpus("k23.tatg")], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_line(&o), "TAT HOLDS");
}

#[test]
fn check_failing_circle() {
    let o = run(&["check", &corpus("circle_5_2.tatg")], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(last_line(&o).starts_with("TAT FAILS witness=e"));
}

#[test]
fn fit_counterexample() {
    let o = run(&["fit", &corpus("counterexample.tatg"), "--rot", "F1=1/2", "--rot", "F2=1/2"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(last_line(&o), "FIT INFEASIBLE forced_zero=e3");
}

#[test]
fn generator_pipelines() {
    let k33 = run(&["gen", "kpq", "3", "3", "--len", "1/12"], None);
    assert_eq!(k33.status.code(), Some(0));
    let o = run(&["check", "--mixed"], Some(&String::from_utf8_lossy(&k33.stdout)));
    assert_eq!((o.status.code(), last_line(&o).as_str()), (Some(0), "TAT HOLDS"));

    let nr = run(&["gen", "non-regular2"], None);
    let text = String::from_utf8_lossy(&nr.stdout).to_string();
    assert_eq!(text, std::fs::read_to_string(corpus("non_regular2.tatg")).unwrap());
    let o = run(&["check", "--mixed", "-"], Some(&text));
    assert_eq!(last_line(&o), "TAT HOLDS");
    let o = run(&["screws"], Some(&text));
    assert_eq!(last_line(&o), "SCREW level=1 orbit=1 value=-1");
    let o = run(&["dual"], Some(&text));
    assert_eq!(last_line(&o), "DUAL vertices=2 edges=3 tree=no");
}

#[test]
fn realize_and_attach() {
    let r = run(&["realize", &corpus("order3_over_torus.tatg")], None);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8_lossy(&r.stdout).to_string();
    assert_eq!(last_line(&run(&["check"], Some(&text))), "TAT HOLDS");
    assert_eq!(last_line(&run(&["fdtc"], Some(&text))), "FDTC F1=1/3");
    assert_eq!(last_line(&run(&["sigma"], Some(&text))), "SIGMA order=3");

    let a = run(&["attach", &corpus("example_thm.tatg")], None);
    assert_eq!(a.status.code(), Some(0));
    let text = String::from_utf8_lossy(&a.stdout).to_string();
    assert_eq!(last_line(&run(&["check", "--mixed"], Some(&text))), "TAT HOLDS");
    assert_eq!(last_line(&run(&["screws"], Some(&text))), "SCREW level=1 orbit=1 value=-1");
    assert_eq!(last_line(&run(&["dual"], Some(&text))), "DUAL vertices=3 edges=2 tree=yes");
}

#[test]
fn blowup_and_walk() {
    let b = run(&["blowup", &corpus("k23.tatg"), "--vertex", "v1", "--eps", "1/8"], None);
    assert_eq!(b.status.code(), Some(0));
    let text = String::from_utf8_lossy(&b.stdout).to_string();
    assert!(text.contains("relative A1:"));
    assert_eq!(last_line(&run(&["check"], Some(&text))), "TAT HOLDS");

    let w = run(&["walk", &corpus("k23.tatg"), "--from", "e1:1/4", "--len", "1"], None);
    assert_eq!(w.status.code(), Some(0));
    assert!(last_line(&w).starts_with("END point="));
    let w = run(&["walk", &corpus("k23.tatg"), "--from", "v1"], None);
    assert_eq!(w.status.code(), Some(2));
}

#[test]
fn input_errors() {
    let o = run(&["check"], Some("tatg 1\nedge e1: len 1/0\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = run(&["check", "/nonexistent.tatg"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_validates_and_is_deterministic() {
    let dir = format!("{}/../../corpus", env!("CARGO_MANIFEST_DIR"));
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        let p = p.to_str().unwrap();
        let o = run(&["validate", p], None);
        assert_eq!(o.status.code(), Some(0), "{p}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(last_line(&o).starts_with("VALID"));
        let again = run(&["validate", p], None);
        assert_eq!(o.stdout, again.stdout);
    }
}
