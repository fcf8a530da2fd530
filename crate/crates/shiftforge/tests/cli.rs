use std::path::{Path, PathBuf};
use std::process::Command;

use shiftforge::format::{self, Report};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_shiftforge"));
    cmd.args(args).env_remove("SHIFTFORGE_TERM_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn report(r: &Run) -> Report {
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    Report::parse(&r.stdout).unwrap()
}

#[test]
fn sparsity_of_the_f2_encoding_is_five() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.poly");
    let r = run(&["reduce-max3lin", p(&corpus("f2_single.3lin")), "-o", p(&q)]);
    assert_eq!(report(&r).get("w"), Some("6"));
    let r = run(&["sparsity", p(&q)]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "5\n"));
}

#[test]
fn zero_shift_reproduces_the_file() {
    for name in ["square.poly", "sample.poly", "z6_linear.poly", "shifted_cube.poly"] {
        let path = corpus(name);
        let text = std::fs::read_to_string(&path).unwrap();
        let n = format::parse_poly(&text).unwrap().nvars();
        let zeros = vec!["0"; n].join(",");
        let r = run(&["shift", p(&path), "--by", &zeros]);
        assert_eq!(r.code, 0);
        assert_eq!(r.stdout, text, "{name}");
    }
}

#[test]
fn shift_accepts_negative_entries() {
    let r = run(&["shift", p(&corpus("square.poly")), "--by", "-1"]);
    assert_eq!(r.stdout, "ring Z\nvars 1\nterm 1 2\n");
    let r = run(&["shift", p(&corpus("shifted_cube.poly")), "--by", "1,0"]);
    assert_eq!(r.stdout, "ring Q\nvars 2 u v\nterm 1 3 0\nterm 1/2 0 1\n");
}

#[test]
fn gap_params_prints_alpha() {
    let r = report(&run(&["gap-params", "--epsilon", "0", "--delta", "0", "-m", "10"]));
    assert_eq!(r.get("alpha"), Some("40/31"));
    assert_eq!(r.get("gap"), Some("true"));
    let r = report(&run(&[
        "gap-params", "--epsilon", "1/10", "--delta", "1/10", "-m", "10", "--target-gap", "2", "--sigma", "6",
    ]));
    assert_eq!(r.get("d"), Some("4"));
    assert_eq!(r.get("hn_t_yes"), Some("625"));
    assert_eq!(r.get("hn_t_no"), Some("1296"));
    let r = report(&run(&["gap-params", "--epsilon", "1/2", "--delta", "1/2", "-m", "2"]));
    assert_eq!((r.get("alpha"), r.get("gap")), (Some("7/8"), Some("false")));
}

#[test]
fn search_shift_reports() {
    let r = report(&run(&["search-shift", p(&corpus("square.poly")), "--box", "2"]));
    let keys: Vec<&str> = r.entries.iter().map(|(k, _)| k.as_str()).collect();
    assert_eq!(keys, ["min_sparsity", "witness", "points", "complete", "violations"]);
    assert_eq!(r.get("min_sparsity"), Some("1"));
    assert_eq!(r.get("witness"), Some("-1"));
    assert_eq!(r.get("complete"), Some("false"));

    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.poly");
    run(&["reduce-max3lin", p(&corpus("f2_single.3lin")), "-o", p(&q)]);
    let r = report(&run(&["search-shift", p(&q), "--exhaustive", "--nonconstant"]));
    assert_eq!((r.get("min_sparsity"), r.get("points")), (Some("3"), Some("64")));
    let r = report(&run(&["search-shift", p(&q), "--exhaustive", "--nonconstant", "--support-last", "3"]));
    assert_eq!((r.get("min_sparsity"), r.get("points")), (Some("3"), Some("8")));
}

#[test]
fn solve_and_maxsat() {
    let r = report(&run(&["solve", p(&corpus("unit.sys")), "--box", "2"]));
    assert_eq!(r.get("solution"), Some("1"));
    let r = report(&run(&["solve", p(&corpus("noroot.sys")), "--box", "3"]));
    assert_eq!(r.get("solution"), Some("NONE"));
    let r = report(&run(&["solve", p(&corpus("cube.sys")), "--box", "1"]));
    assert_eq!(r.get("solution"), Some("-1,-1,1"));
    let r = report(&run(&["solve", p(&corpus("circuit.sys")), "--box", "2"]));
    assert_eq!(r.get("solution"), Some("-2,-1"));
    let r = report(&run(&["solve", p(&corpus("f5_cubic.sys")), "--exhaustive"]));
    assert_eq!(r.get("complete"), Some("true"));

    let r = report(&run(&["maxsat", p(&corpus("f2_contradictory.3lin")), "--exhaustive"]));
    assert_eq!(r.get("maxsat"), Some("1"));
    let r = report(&run(&["maxsat", p(&corpus("f2_planted.3lin")), "--exhaustive"]));
    assert!(r.get("maxsat").unwrap().parse::<usize>().unwrap() >= 2);
}

#[test]
fn verify_commands() {
    let r = report(&run(&["verify-hn", p(&corpus("unit.sys")), "--box", "2"]));
    assert_eq!(r.get("status"), Some("consistent"));
    assert_eq!((r.get("solutions"), r.get("sparsifying_shifts")), (Some("1"), Some("1")));
    let r = report(&run(&["verify-hn", p(&corpus("noroot.sys")), "--box", "2"]));
    assert_eq!((r.get("solutions"), r.get("sparsifying_shifts")), (Some("0"), Some("0")));
    let r = report(&run(&["verify-hn", p(&corpus("homogeneous.sys")), "--box", "2"]));
    assert_eq!(r.get("status"), Some("trivially-solvable"));

    let r = report(&run(&["verify-max3lin", p(&corpus("f2_single.3lin"))]));
    assert_eq!((r.get("min_sparsity"), r.get("expected"), r.get("holds")), (Some("3"), Some("3"), Some("true")));
    let r = report(&run(&["verify-max3lin", p(&corpus("f2_contradictory.3lin"))]));
    assert_eq!(r.get("min_sparsity"), Some("7"));
}

#[test]
fn hn_pipeline_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (q, n, poly, wit) = (
        dir.path().join("q.sys"),
        dir.path().join("n.sys"),
        dir.path().join("p.poly"),
        dir.path().join("p.wit"),
    );
    report(&run(&["quadratize", p(&corpus("circuit.sys")), "-o", p(&q)]));
    let r = report(&run(&["normalize", p(&q), "-o", p(&n)]));
    assert_eq!(r.get("status"), Some("normalized"));
    let r = report(&run(&["reduce-hn", p(&n), "-o", p(&poly), "--witness", p(&wit)]));
    let sigma: usize = r.get("sigma").unwrap().parse().unwrap();
    assert!(sigma <= r.get("sparsity_bound").unwrap().parse().unwrap());

    // the same instance straight from the circuit file
    let (poly2, wit2) = (dir.path().join("p2.poly"), dir.path().join("p2.wit"));
    report(&run(&["reduce-hn", p(&corpus("circuit.sys")), "-o", p(&poly2), "--witness", p(&wit2)]));
    assert_eq!(std::fs::read(&poly).unwrap(), std::fs::read(&poly2).unwrap());
    assert_eq!(std::fs::read(&wit).unwrap(), std::fs::read(&wit2).unwrap());

    // a single-equation system through the zero-sum search
    let (poly3, wit3) = (dir.path().join("u.poly"), dir.path().join("u.wit"));
    report(&run(&["reduce-hn", p(&corpus("unit.sys")), "-o", p(&poly3), "--witness", p(&wit3)]));
    let r = report(&run(&["search-shift", p(&poly3), "--box", "2", "--zero-sum", "--witness", p(&wit3)]));
    assert_eq!(r.get("min_sparsity"), Some("4"));
    assert_eq!(r.get("witness"), Some("-2,1,1,0,0"));
    assert_eq!(r.get("violations"), Some("0"));
}

#[test]
fn merge_instance_is_strictly_below_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let (poly, wit) = (dir.path().join("m.poly"), dir.path().join("m.wit"));
    let r = report(&run(&["reduce-hn", p(&corpus("merge.sys")), "-o", p(&poly), "--witness", p(&wit)]));
    assert_eq!((r.get("sigma"), r.get("sparsity_bound")), (Some("6"), Some("7")));
    let w = format::parse_witness(&std::fs::read_to_string(&wit).unwrap()).unwrap();
    assert_eq!((w.x0, w.xprime.clone(), w.wvars.clone(), w.g1), (0, vec![1, 2], vec![3, 4], 0));
}

#[test]
fn amplify_writes_copies_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.poly");
    let r = report(&run(&["amplify", p(&corpus("sample.poly")), "--copies", "2", "-o", p(&out)]));
    assert_eq!((r.get("sparsity"), r.get("expected_sparsity")), (Some("4"), Some("4")));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# copies d=2 base_nvars=2\n"));
    let r = run_env(&["amplify", p(&corpus("sample.poly")), "--copies", "3", "-o", p(&out)], &[("SHIFTFORGE_TERM_CAP", "7")]);
    assert_eq!(r.code, 4);
    let r = report(&run(&["amplify", p(&corpus("z6_linear.poly")), "--copies", "2", "-o", p(&out)]));
    assert_eq!((r.get("sparsity"), r.get("expected_sparsity")), (Some("2"), Some("4")));
}

#[test]
fn generator_is_deterministic_and_planted() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.3lin"), dir.path().join("b.3lin"));
    let args = |o: &Path| {
        vec!["gen-max3lin", "--n", "5", "--m", "4", "--ring", "Fp 3", "--planted", "--noise", "1", "--seed", "9", "-o"]
            .into_iter()
            .map(String::from)
            .chain([o.to_str().unwrap().to_string()])
            .collect::<Vec<_>>()
    };
    let ra = run(&args(&a).iter().map(String::as_str).collect::<Vec<_>>());
    let rb = run(&args(&b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(report(&ra).get("planted_satisfied"), Some("3"));
    assert_eq!(ra.stdout, rb.stdout);
    let (ta, tb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(ta.starts_with("# seed 9 planted "));
    assert_eq!(format::write_max3lin(&format::parse_max3lin(&ta).unwrap()), ta);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.poly");
    std::fs::write(&bad, "ring Z\nvars 1\nterm 1 1\nterm 2 1\n").unwrap();
    assert_eq!(run(&["sparsity", p(&bad)]).code, 2);
    assert_eq!(run(&["sparsity", "/nonexistent/file.poly"]).code, 2);
    assert_eq!(run(&["shift", p(&corpus("square.poly")), "--by", "1,2"]).code, 2);
    assert_eq!(run(&["search-shift", p(&corpus("square.poly"))]).code, 2);
    assert_eq!(run(&["search-shift", p(&corpus("square.poly")), "--exhaustive"]).code, 3);
    let out = dir.path().join("x");
    let r = run(&["reduce-hn", p(&corpus("f5_cubic.sys")), "-o", p(&out), "--witness", p(&out)]);
    assert_eq!(r.code, 3);
    assert_eq!(run(&["verify-hn", p(&corpus("unit.sys")), "--box", "2", "--gamma", "1"]).code, 3);
    assert_eq!(run(&["search-shift", p(&corpus("sample.poly")), "--box", "5000"]).code, 4);
    assert_eq!(run(&["shift", p(&corpus("square.poly")), "--by", "1"]).code, 0);
    assert_eq!(
        run_env(&["shift", p(&corpus("square.poly")), "--by", "1"], &[("SHIFTFORGE_TERM_CAP", "2")]).code,
        4
    );
    assert_eq!(run(&["gap-params", "--epsilon", "1", "--delta", "0", "-m", "3"]).code, 3);
    assert_eq!(run(&["gen-max3lin", "--n", "2", "--m", "1", "--ring", "Fp 2", "--seed", "1", "-o", p(&out)]).code, 3);
}

#[test]
fn emitted_files_reparse_to_equal_values() {
    let dir = tempfile::tempdir().unwrap();
    for sys in ["unit.sys", "cube.sys", "circuit.sys", "f5_cubic.sys", "noroot.sys"] {
        let q = dir.path().join(format!("{sys}.q"));
        report(&run(&["quadratize", p(&corpus(sys)), "-o", p(&q)]));
        let text = std::fs::read_to_string(&q).unwrap();
        let parsed = format::parse_system(&text).unwrap();
        assert_eq!(format::write_system(&parsed), text, "{sys}");
        assert!(parsed.recipe.is_some());
    }
}
