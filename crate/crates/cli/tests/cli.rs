use std::process::{Command, Output};

use hesslab::calculus::{hessian, poly_determinant, PolyMap};
use hesslab::quadform::{check_certificate, Certificate, QuadraticForm};
use hesslab::{parse_poly, Field, Poly, Ring, Scalar, ScalarMatrix};
use serde_json::Value;

fn hesslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hesslab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--out", "json"]);
    let o = hesslab(&full);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

fn poly(s: &str, n: usize) -> Poly {
    parse_poly(s, &Ring::standard(n, Field::Rational)).unwrap()
}

fn matrix(v: &Value) -> ScalarMatrix {
    serde_json::from_value(v.clone()).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn det_example() {
    let o = hesslab(&["det", "--n", "2", "x1*x2 + x1^3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-1\n");
}

#[test]
fn verify_example() {
    let o = hesslab(&["verify", "gn-counterexample", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS gn-counterexample"));
    assert!(stdout(&o).contains("192*x1^9*x2*t"));
}

#[test]
fn verify_all_fixtures() {
    let (code, v) = json(&["verify", "--all"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["fixture"].as_str().unwrap()).collect();
    assert_eq!(names, ["gn-counterexample", "dillen4", "qi-form"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn antitri_record_reverifies() {
    for (text, n) in [
        ("x1*x2 + x2^3", 2),
        ("x1*x3 + x2^2 + x3^4 + x2*x3^2", 3),
        ("x1*x2 + x2^2", 2),
        ("x1*x3 + x2^2 + x1^4 + x2*x1^2", 3),
    ] {
        let (code, v) = json(&["antitri", "--n", &n.to_string(), text]);
        assert_eq!(code, 0, "{text}");
        let t = matrix(&v["T"]);
        let f = poly(text, n);
        let h = hessian(&f.substitute_linear(&t).unwrap());
        assert!(h.is_anti_triangular(), "{text}");
        assert_eq!(serde_json::to_value(&h).unwrap(), v["hessian"]);
        assert!(t.mul(&matrix(&v["T_inverse"])).unwrap() == ScalarMatrix::identity(n));
    }
}

#[test]
fn obstruction_exits_one() {
    let (code, v) = json(&["antitri", "x1^2 + x2^2"]);
    assert_eq!(code, 1);
    assert_eq!(v["outcome"], "isotropy_obstruction");
    let cert: Certificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    let q = QuadraticForm::from_poly(&poly("x1^2 + x2^2", 2)).unwrap();
    assert!(check_certificate(&q, &cert).unwrap());
}

#[test]
fn isotropy_outcomes() {
    let form = "x1^2 + 3*x2^2 + 5*x3^2 + 10*x4^2";
    let (code, v) = json(&["isotropy", "--field", "Qi", form]);
    assert_eq!(code, 1);
    assert_eq!(v["outcome"], "anisotropic");
    let q = QuadraticForm::from_poly(&parse_poly(form, &Ring::standard(4, Field::Gaussian)).unwrap()).unwrap();
    let cert: Certificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert!(check_certificate(&q, &cert).unwrap());

    let (code, v) = json(&["isotropy", "x1^2 - 2*x2^2 - x3^2"]);
    assert_eq!(code, 0);
    let vector: Vec<Scalar> = serde_json::from_value(v["vector"].clone()).unwrap();
    assert!(poly("x1^2 - 2*x2^2 - x3^2", 3).eval(&vector).unwrap().is_zero());
    assert!(vector.iter().any(|c| !c.is_zero()));
}

#[test]
fn classify_record_reconstructs() {
    for text in ["(x1 + 2*x2)^3 - (x1 + 2*x2)^2", "(x1 + x2)^3 + x3*(x1 + x2)^2", "x1^2*x2 + x1*x3"] {
        let (code, v) = json(&["classify", "--n", "3", text]);
        assert_eq!(code, 0, "{text}");
        let h = poly(text, 3);
        let reduced = poly(v["reduced"].as_str().unwrap(), 3);
        let back = reduced.substitute_linear(&matrix(&v["transform"]["T_inverse"])).unwrap();
        if v["tag"] == "rank1_family" {
            let l1 = poly(&strings(&v["forms"])[0], 3);
            let sum = strings(&v["family"]).iter().enumerate().fold(Poly::zero(h.ring()), |acc, (k, g)| {
                let mut images: Vec<Poly> = (0..3).map(|j| Poly::var(h.ring(), j)).collect();
                images[0] = l1.clone();
                &acc + &(&poly(g, 3).compose(&images).unwrap() * &Poly::var(h.ring(), k))
            });
            assert_eq!(sum, h, "{text}");
        } else {
            assert_eq!(back, h, "{text}");
        }
        assert!(poly_determinant(&hessian(&h)).unwrap().is_zero());
    }
}

#[test]
fn invert_record_composes() {
    for (text, n) in [("x2 + 3*x1^2; x1", 2), ("x3 + x1*x2^2; x2 + x1^2; x1", 3)] {
        let (code, v) = json(&["invert", "--n", &n.to_string(), text]);
        assert_eq!(code, 0, "{text}");
        let f = PolyMap::new(text.split(';').map(|s| poly(s.trim(), n)).collect());
        let g = PolyMap::new(strings(&v["G"]).iter().map(|s| poly(s, n)).collect());
        assert!(f.compose(&g).unwrap().is_identity() && g.compose(&f).unwrap().is_identity());
        assert_eq!(v["keller"]["is_keller"], true);
    }
    let (code, _) = json(&["invert", "--gradient", "x1*x2 + x1^3"]);
    assert_eq!(code, 0);
}

#[test]
fn hessian_det_and_leadpart_records() {
    let text = "x1*x2^2 + x1^3 + 7*x2";
    let (_, v) = json(&["hessian", text]);
    let expected = serde_json::to_value(hessian(&poly(text, 2))).unwrap();
    assert_eq!(v["hessian"], expected);
    let (_, v) = json(&["det", text]);
    assert_eq!(poly(v["det"].as_str().unwrap(), 2), poly_determinant(&hessian(&poly(text, 2))).unwrap());
    let (_, v) = json(&["leadpart", "--weights", "1,2", text]);
    assert_eq!(v["weight"], "5");
    assert_eq!(poly(v["leading"].as_str().unwrap(), 2), poly("x1*x2^2", 2));
}

#[test]
fn file_input_and_params() {
    let path = std::env::temp_dir().join(format!("hesslab-cli-{}.txt", std::process::id()));
    std::fs::write(&path, "x1*x2 + x1^3\n").unwrap();
    let o = hesslab(&["det", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(stdout(&o), "-1\n");
    let o = hesslab(&["det", "--params", "t", "t*x1*x2"]);
    assert_eq!(stdout(&o), "-t^2\n");
}

#[test]
fn errors_exit_two_with_codes() {
    let cases: [(&[&str], &str); 5] = [
        (&["det", "x1*x2 +"], "poly.syntax"),
        (&["det", "--n", "1", "x1*x2"], "poly.unknown_variable"),
        (&["verify", "nope"], "cli.unknown_fixture"),
        (&["antitri", "x1*x2*x3*x4"], "triangulate.unsupported_dimension"),
        (&["det"], "cli.usage"),
    ];
    for (args, code) in cases {
        let o = hesslab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains(code), "{args:?}: {err}");
    }
    assert_eq!(hesslab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hesslab(&["det", "--field", "R", "x1"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let runs: [&[&str]; 7] = [
        &["antitri", "--n", "3", "x1*x3 + x2^2 + x3^4 + x2*x3^2"],
        &["antitri", "x1^2 + x2^2", "--out", "json"],
        &["classify", "--n", "3", "(x1 + x2)^3 + x3*(x1 + x2)^2", "--out", "json"],
        &["invert", "x3 + x1*x2^2; x2 + x1^2; x1", "--out", "json"],
        &["isotropy", "--field", "Qi", "x1^2 + 3*x2^2 + 5*x3^2 + 10*x4^2", "--out", "json"],
        &["hessian", "--field", "Qi", "i*x1^3 + x1*x2"],
        &["verify", "--all", "--out", "json"],
    ];
    for args in runs {
        let a = hesslab(args);
        let b = hesslab(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
