use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ssom(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ssom"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn ssom");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.unwrap_or("").as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn text(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus(name: &str) -> String {
    let o = ssom(&["corpus", name], None);
    assert!(o.status.success());
    text(&o)
}

#[test]
fn corpus_round_trips_through_check_axioms() {
    for name in [
        "rank1",
        "boolean3",
        "uniform-2-3",
        "braid3",
        "sec3-arrangement",
    ] {
        let o = ssom(&["check-axioms"], Some(&corpus(name)));
        assert!(o.status.success(), "{name}: {}", text(&o));
        assert!(text(&o).ends_with("verdict: PASS\n"));
    }
}

#[test]
fn mutated_input_fails_with_exit_one() {
    let om = corpus("sec3-arrangement");
    let drop = om.lines().find(|l| l.trim() == "+++++").expect("tope line");
    let mutated: String = om
        .lines()
        .filter(|l| *l != drop)
        .map(|l| format!("{l}\n"))
        .collect();
    let o = ssom(&["check-axioms"], Some(&mutated));
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("FAIL axiom (3)"));
}

#[test]
fn lattice_and_supersolvable() {
    let om = corpus("sec3-arrangement");
    let o = ssom(&["lattice"], Some(&om));
    assert!(text(&o).contains("whitney: (1,5,8,4)"));
    let o = ssom(&["supersolvable"], Some(&om));
    assert!(text(&o).contains("chain: {} < {H1} < {H1,H2,H3} < {H1,H2,H3,H4,H5}"));
    let o = ssom(&["modular", "H2,H4"], Some(&om));
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("Y = {H3,H5}"));
}

#[test]
fn stratify_reports_the_tope_string() {
    let o = ssom(
        &["stratify", "--flat", "H1,H2,H3", "--tope", "+++"],
        Some(&corpus("sec3-arrangement")),
    );
    let out = text(&o);
    assert!(o.status.success(), "{out}");
    assert!(out.contains("tope string: +++++ < +++-+ < +++--"));
    assert!(out.contains("S(T1,T2): {H5}"));
    assert!(out.contains("S(T0,T2): {H4,H5}"));
}

#[test]
fn certify_qf_exhaustive_passes() {
    let o = ssom(
        &["certify-qf", "--flat", "H1,H2,H3", "--exhaustive"],
        Some(&corpus("sec3-arrangement")),
    );
    let out = text(&o);
    assert!(o.status.success(), "{out}");
    assert!(out.contains("pairs: 120 of 120"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn homology_of_complex_file() {
    let dir = std::env::temp_dir().join(format!("ssom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("circle.txt");
    std::fs::write(&path, "a b\nb c\nc a\n").unwrap();
    let o = ssom(
        &[
            "homology",
            "--target",
            "complex-file",
            "--file",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert!(text(&o).contains("homology: b=(1,1)"), "{}", text(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn extend_levi_writes_output() {
    let dir = std::env::temp_dir().join(format!("ssom-levi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ext.om");
    let om = corpus("sec3-arrangement");
    let o = ssom(
        &[
            "extend-levi",
            "--flats",
            "H2,H4",
            "H3,H5",
            "--generic",
            "--output",
            path.to_str().unwrap(),
        ],
        Some(&om),
    );
    assert!(o.status.success(), "{}", text(&o));
    let ext = std::fs::read_to_string(&path).unwrap();
    let o = ssom(&["supersolvable"], Some(&ext));
    assert!(o.status.success(), "{}", text(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_flat_is_an_error() {
    let o = ssom(&["modular", "H9"], Some(&corpus("sec3-arrangement")));
    assert_eq!(o.status.code(), Some(2));
}
