use std::path::PathBuf;

use flarl::rational::rat;
use flarl::{ExactLabel, Resolution};
use flarl_cli::expr::{eval_str, parse_expression, Value};
use flarl_cli::{run_with_env, Outcome};
use proptest::prelude::*;

fn run(args: &[&str]) -> Outcome {
    run_with_env(args.iter().copied(), None)
}

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }
}

#[test]
fn eval_examples() {
    let out = run(&["eval", "--m", "4", "inv(L2)"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "L25/2 real=5/2\n"));

    let out = run(&["eval", "--m", "4", "L1 / L0"]);
    assert_eq!(out.code, 2);
    assert_eq!(out.stderr, "error: DivisionByZeroLabel\n");

    let out = run(&["ord", "lattice-check", "--m", "5"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "true\n"));
}

#[test]
fn exit_code_per_error_class() {
    assert_eq!(run(&["eval", "--m", "4"]).code, 1);
    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["mat", "rank", "/nonexistent/flarl/a.mat"]).code, 1);
    assert_eq!(run(&["--tol", "-1", "eval", "--m", "4", "L1"]).code, 1);

    for (expr, name) in [
        ("L1 / L0", "DivisionByZeroLabel"),
        ("L1 / 0", "DivisionByZeroScalar"),
        ("root(L-1, 2)", "NegativeEvenRoot"),
        ("root(L2, 2) + L1", "DomainError"),
    ] {
        let out = run(&["eval", "--m", "4", expr]);
        assert_eq!((out.code, out.stderr.clone()), (2, format!("error: {name}\n")), "{expr}");
    }
    assert_eq!(run(&["eval", "--m", "0", "L1"]).stderr, "error: InvalidResolution\n");

    let out = run(&["eval", "--m", "4", "L2 * (L3"]);
    assert_eq!((out.code, out.stderr.as_str()), (3, "error: ParseError\n"));
    let out = run(&["eval", "--m", "4", "cos(L3)"]);
    assert_eq!((out.code, out.stderr.as_str()), (3, "error: UnknownFunction\n"));
}

#[test]
fn json_reports_parse_position() {
    let out = run(&["--json", "eval", "--m", "4", "L2 * (L3"]);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["error"], "ParseError");
    assert_eq!(doc["position"], 10);
}

#[test]
fn json_and_text_agree() {
    for expr in ["L2 * L3", "L2 + 1", "inv(L2)", "-L7/3 ^ 3", "L1 - 1/3"] {
        let text = run(&["eval", "--m", "4", expr]);
        let json = run(&["eval", "--m", "4", "--json", expr]);
        let doc: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
        let expect = format!("{} real={}\n", doc["label"].as_str().unwrap(), doc["real"].as_str().unwrap());
        assert_eq!(text.stdout, expect, "{expr}");
        assert_eq!(doc["exact"], true);
    }
}

#[test]
fn tolerance_flag_overrides_environment() {
    let env = run_with_env(["eval", "--m", "4", "root(L5, 2)"], Some("1e-3"));
    assert!(env.stdout.contains("tol=1e-3"), "{}", env.stdout);
    let flag = run_with_env(["--tol", "1e-6", "eval", "--m", "4", "root(L5, 2)"], Some("1e-3"));
    assert!(flag.stdout.contains("tol=1e-6"), "{}", flag.stdout);
    assert!(flag.stdout.contains("near=L5"));
    assert_eq!(run_with_env(["eval", "--m", "4", "L1"], Some("lots")).code, 1);
}

#[test]
fn matrix_commands() {
    let d = Dir::new();
    let a = d.file("a.mat", "m=4\nrows=2 cols=2\nL1 L2\nL3 L4\n");
    let b = d.file("b.mat", "m=4\nrows=2 cols=1\nL5\nL0\n");
    let out = run(&["mat", "mul", &a, &b]);
    assert_eq!(out.stdout, "m=4\nrows=2 cols=1\nL1\nL3\nreal=[[1/5], [3/5]]\n");

    let out = run(&["mat", "det", &a]);
    // (1·4 − 2·3)/25 = −2/25
    assert_eq!(out.stdout, "L-2/5 real=-2/25\n");

    let out = run(&["mat", "rank", &a]);
    assert_eq!(out.stdout, "rank=2 nullity=0\n");

    let sing = d.file("s.mat", "m=4\nrows=2 cols=2\nL1 L2\nL2 L4\n");
    let out = run(&["mat", "null", &sing]);
    assert_eq!(out.stdout, "dim=1\nm=4\nrows=2 cols=1\nL5\nL-5/2\nreal=[[1], [-1/2]]\n");

    let out = run(&["mat", "charpoly", &a]);
    assert!(out.stdout.starts_with("char_poly: "), "{}", out.stdout);
    assert!(out.stdout.contains("real=-2/25 - x + x^2"), "{}", out.stdout);

    let range = d.file("r.mat", "m=4\nrows=2 cols=1\nL5\nL0\n");
    let null = d.file("n.mat", "m=4\nrows=2 cols=1\nL5\nL5\n");
    let out = run(&["mat", "project", &range, &null]);
    assert_eq!(out.stdout, "m=4\nrows=2 cols=2\nL5 L-5\nL0 L0\nreal=[[1, -1], [0, 0]]\n");
    let out = run(&["mat", "project", &range, &range]);
    assert_eq!((out.code, out.stderr.as_str()), (2, "error: NotDirectSum\n"));

    let diag = d.file("t.mat", "m=4\nrows=2 cols=2\nL2 L0\nL0 L3\n");
    assert_eq!(run(&["mat", "invariant", &diag, &range]).stdout, "true\n");
    assert_eq!(run(&["mat", "invariant", &a, &range]).stdout, "false\n");

    let other = d.file("m9.mat", "m=9\nrows=1 cols=1\nL1\n");
    assert_eq!(run(&["mat", "mul", &a, &other]).stderr, "error: ResolutionMismatch\n");
    let broken = d.file("bad.mat", "m=4\nrows=2 cols=2\nL1 L2\n");
    assert_eq!(run(&["mat", "rank", &broken]).code, 3);
}

#[test]
fn polynomial_commands() {
    let d = Dir::new();
    // f = (x − L5)²(x + L5), image (x − 1)²(x + 1) = x³ − x² − x + 1
    let f = d.file("f.poly", "m=4\nL5 + L-5 x + L-5 x^2 + L5 x^3\n");
    let g = d.file("g.poly", "m=4\nL-5 + L5 x\n");
    let out = run(&["poly", "divmod", &f, &g]);
    assert_eq!(out.stdout, "q: L-5 + L5 x^2 real=-1 + x^2\nr: L0 real=0\n");
    assert_eq!(run(&["poly", "gcd", &f, &g]).stdout, "L-5 + L5 x real=-1 + x\n");
    assert_eq!(run(&["poly", "deriv", &f]).stdout, "L-5 + L-10 x + L15 x^2 real=-1 - 2 x + 3 x^2\n");
    assert_eq!(run(&["poly", "multiplicity", &f, "--at", "L5"]).stdout, "multiplicity=2\n");
    assert_eq!(run(&["poly", "eval", &f, "--at", "L0"]).stdout, "L5 real=1\n");
    let out = run(&["poly", "taylor", &f, "--at", "L5"]);
    assert_eq!(out.stdout, "t0: L0 real=0\nt1: L0 real=0\nt2: L10 real=2\nt3: L5 real=1\n");
    let zero = d.file("z.poly", "m=4\nL0\n");
    assert_eq!(run(&["poly", "divmod", &f, &zero]).stderr, "error: ZeroPolynomialDivisor\n");
}

#[test]
fn ordinal_commands() {
    let d = Dir::new();
    let a = d.file("a.ord", "m=5 kind=ord\nrows=1 cols=3\nL0 L3 L6\n");
    let b = d.file("b.ord", "m=5 kind=ord\nrows=1 cols=3\nL2 L1 L6\n");
    assert_eq!(run(&["ord", "join", &a, &b]).stdout, "m=5 kind=ord\nrows=1 cols=3\nL2 L3 L6\nreal=[[1/3, 1/2, 1]]\n");
    assert_eq!(run(&["ord", "meet", &a, &b]).stdout, "m=5 kind=ord\nrows=1 cols=3\nL0 L1 L6\nreal=[[0, 1/6, 1]]\n");
    let p = d.file("p.ord", "m=5 kind=ord\nL1 + L4 x\n");
    let q = d.file("q.ord", "m=5 kind=ord\nL3 + L2 x^2\n");
    assert_eq!(run(&["ord", "polyadd", &p, &q]).stdout, "L3 + L4 x + L2 x^2 real=[1/2, 2/3, 1/3]\n");
    assert_eq!(run(&["ord", "basis-count", "--n", "2", "--m", "3"]).stdout, "minimal=8 paper=10\n");
    let out = run(&["ord", "join", &a, &d.file("c.ord", "m=5 kind=ord\nrows=1 cols=1\nL7\n")]);
    assert_eq!(out.code, 3);
}

#[test]
fn structure_commands() {
    let d = Dir::new();
    let fam = d.file("v.fam", "m=4\nmat 1x2: L1 L2\nmat 1x2: L2 L4\n");
    let out = run(&["check", "independent", &fam, "--domain", "Z+0"]);
    // x = s·y needs s = 1/2, outside Z+0; y = 2x succeeds
    assert_eq!(out.stdout, "dependent members=0,1 s=2\n");
    let out = run(&["check", "independent", &fam, "--domain", "3Z+0"]);
    assert_eq!(out.stdout, "independent\n");
    let out = run(&["check", "closure", &fam, "--domain", "{3}"]);
    assert!(out.stdout.starts_with("violation s=3 "), "{}", out.stdout);

    let pat = d.file("p.fam", "m=4\npattern mat 1x3: 1 0 1\n");
    let out = run(&["check", "closure", &pat, "--domain", "R"]);
    assert!(out.stdout.starts_with("note: R is modelled by Q\nclosed "), "{}", out.stdout);

    let split = d.file(
        "s.fam",
        "m=4\nambient\npattern mat 2x2: *\npattern poly 9: *\npattern mat 1x8: *\n\
         part\npattern mat 2x2: *\npart\npattern poly 9: *\npart\npattern mat 1x8: *\n",
    );
    let out = run(&["check", "family", &split]);
    assert!(out.stdout.ends_with("covers: true\nclass: direct-sum\n"), "{}", out.stdout);
    let overlap = d.file(
        "o.fam",
        "m=4\nambient\npattern mat 2x2: *\npart\npattern mat 2x2: 1 1 / 0 0\npart\npattern mat 2x2: 0 1 / 1 1\n",
    );
    assert!(run(&["check", "family", &overlap]).stdout.ends_with("class: sum\n"));
    assert_eq!(run(&["check", "closure", &fam, "--domain", "3W"]).code, 3);
}

#[derive(Clone, Debug)]
enum Gen {
    Label(i64, i64),
    Scalar(u32, u32),
    Neg(Box<Gen>),
    Bin(char, Box<Gen>, Box<Gen>),
    Pow(Box<Gen>, i8),
    Inv(Box<Gen>),
}

impl Gen {
    fn text(&self) -> String {
        match self {
            Gen::Label(n, 1) => format!("L{n}"),
            Gen::Label(n, d) => format!("L{n}/{d}"),
            Gen::Scalar(w, 0) => format!("{w}"),
            Gen::Scalar(w, f) => format!("{w}.{f}"),
            Gen::Neg(a) => format!("-({})", a.text()),
            Gen::Bin(op, a, b) => format!("({}) {op} ({})", a.text(), b.text()),
            Gen::Pow(a, e) => format!("({})^{e}", a.text()),
            Gen::Inv(a) => format!("inv({})", a.text()),
        }
    }
}

fn gen_expr() -> impl Strategy<Value = Gen> {
    let leaf = prop_oneof![
        (-12i64..12, 1i64..4).prop_map(|(n, d)| Gen::Label(n, d)),
        (0u32..20, 0u32..30).prop_map(|(w, f)| Gen::Scalar(w, f)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Gen::Neg(Box::new(a))),
            (prop_oneof![Just('+'), Just('-'), Just('*'), Just('/')], inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Gen::Bin(op, Box::new(a), Box::new(b))),
            (inner.clone(), -3i8..4).prop_map(|(a, e)| Gen::Pow(Box::new(a), e)),
            inner.prop_map(|a| Gen::Inv(Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn render_round_trip(g in gen_expr()) {
        let res = Resolution::new(4).unwrap();
        let e = parse_expression(&g.text(), res).unwrap();
        prop_assert_eq!(parse_expression(&e.to_string(), res).unwrap(), e);
    }

    #[test]
    fn evaluation_matches_core(a in -30i64..30, b in 1i64..30, q in -9i64..9, p in -3i64..4) {
        prop_assume!(a != 0 || p >= 0);
        let res = Resolution::new(9).unwrap();
        let (la, lb) = (ExactLabel::int(a, res), ExactLabel::int(b, res));
        let alpha = rat(q, 4);
        let ev = |text: &str| match eval_str(text, res).unwrap() {
            Value::Label(l) => l,
            v => panic!("{v:?}"),
        };
        let s = format!("{}", alpha);
        let s = s.replace('/', " / ");
        prop_assert_eq!(ev(&format!("L{a} * L{b} - L{b}")), la.mul(&lb).unwrap().sub(&lb).unwrap());
        prop_assert_eq!(ev(&format!("L{a} / L{b} + ({s})")), la.div(&lb).unwrap().mixed_add(&alpha));
        prop_assert_eq!(ev(&format!("({s}) * L{a} ^ {p}")), la.pow(p).unwrap().scale(&alpha));
        prop_assert_eq!(ev(&format!("mixdiv({s}, L{b})")), ExactLabel::mixed_div_rev(&alpha, &lb).unwrap());
    }
}
