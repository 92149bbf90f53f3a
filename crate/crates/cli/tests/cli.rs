use std::path::PathBuf;
use std::process::{Command, Output};

fn latcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latcert")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn e8_full_run_passes() {
    let o = latcert(&["--target", "e8", "--stages", "full"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    for id in ["kissing.lp_bound", "counting.lower_bound", "scheme.projection", "localopt.final_bound", "magicfn.newton_5"] {
        assert!(out.contains(id), "{id} missing");
    }
    assert!(!out.contains(" FAIL "));
}

#[test]
fn leech_kissing_reports_the_kissing_number() {
    let o = latcert(&["--target", "leech", "--stages", "kissing"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("kissing.lp_bound: certified = 196560 (published: 196560)"), "{out}");
}

#[test]
fn leech_counting_exceeds_196559() {
    let o = latcert(&["--target", "leech", "--stages", "counting", "--format", "json-lines"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    let line = out.lines().find(|l| l.contains("counting.lower_bound")).unwrap();
    assert!(line.contains("\"verdict\":\"PASS\"") && line.contains("\"ours\":\"1.96559"), "{line}");
}

#[test]
fn json_lines_carry_every_field_and_are_deterministic() {
    let a = latcert(&["--target", "e8", "--stages", "kissing,sigma", "--format", "json-lines"]);
    let b = latcert(&["--target", "e8", "--stages", "sigma,kissing", "--format", "json-lines", "--threads", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().count(), 8);
    for l in out.lines() {
        for key in ["\"id\":", "\"anchor\":", "\"ours\":", "\"published\":", "\"verdict\":"] {
            assert!(l.contains(key), "{key} missing in {l}");
        }
    }
}

#[test]
fn localopt_certificate_round_trip_and_tampering() {
    let cert = tmp("e8_localopt.cert");
    let report = tmp("e8_localopt.report");
    let o = latcert(&[
        "--target",
        "e8",
        "--stages",
        "localopt",
        "--certificate",
        cert.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&report).unwrap();
    // the scheme dependency ran first
    assert!(text.find("[scheme]").unwrap() < text.find("[localopt]").unwrap());

    let v = latcert(&["verify", cert.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    assert!(stdout(&v).contains("verified"));

    let good = std::fs::read_to_string(&cert).unwrap();
    let bad = good.replacen("field alpha_weights 1,15", "field alpha_weights 1,16", 1);
    assert_ne!(good, bad);
    let bad_path = tmp("e8_localopt_bad.cert");
    std::fs::write(&bad_path, bad).unwrap();
    assert_eq!(latcert(&["verify", bad_path.to_str().unwrap()]).status.code(), Some(1));

    let empty = tmp("empty.cert");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(latcert(&["verify", empty.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(latcert(&["--target", "d4"]).status.code(), Some(2));
    assert_eq!(latcert(&["--stages", "kissing"]).status.code(), Some(2));
    assert_eq!(latcert(&["--target", "e8", "--stages", "kissing,nope"]).status.code(), Some(2));
    assert_eq!(latcert(&["--target", "e8", "--threads", "0"]).status.code(), Some(2));
    let o = latcert(&["--target", "e8", "--stages", "magicfn", "--fcoeffs", "/nonexistent/f.txt"]);
    assert_eq!(o.status.code(), Some(2));
    let junk = tmp("junk_coeffs.txt");
    std::fs::write(&junk, "dim 8\nscale 3\nnot-a-number\n").unwrap();
    let o = latcert(&["--target", "e8", "--stages", "magicfn", "--fcoeffs", junk.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(latcert(&["verify", "/nonexistent/cert"]).status.code(), Some(2));
}

#[test]
fn node_cap_exits_3() {
    let o = latcert(&["--target", "e8", "--stages", "kissing", "--node-cap", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("resource limit"));
}

#[test]
fn supplied_coefficients_are_certified() {
    // a function whose sign conditions fail is a certification failure
    let f = tmp("gaussian_coeffs.txt");
    std::fs::write(&f, "dim 8\nscale 0\n1\n").unwrap();
    let o = latcert(&["--target", "e8", "--stages", "magicfn", "--fcoeffs", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = latcert(&["--target", "leech", "--stages", "magicfn", "--fcoeffs", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "dimension mismatch is an input error");
}

#[test]
fn constructed_function_round_trips_through_files() {
    use latcert::radial::io::write_coeffs;
    use latcert::radial::newton::{default_spec, newton_construct};
    let res = newton_construct(&default_spec(2, 2, 2), 8, 5, 256).unwrap();
    let f = tmp("e8_small_coeffs.txt");
    std::fs::write(&f, write_coeffs(&res.f).unwrap()).unwrap();
    let o = latcert(&["--target", "e8", "--stages", "magicfn", "--fcoeffs", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("magicfn.external"));
    // a radius inside the positive region of f cannot be certified
    let roots = tmp("e8_small_roots.txt");
    std::fs::write(&roots, "1\n").unwrap();
    let o = latcert(&[
        "--target",
        "e8",
        "--stages",
        "magicfn",
        "--fcoeffs",
        f.to_str().unwrap(),
        "--roots",
        roots.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}
