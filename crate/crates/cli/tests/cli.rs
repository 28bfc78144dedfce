use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use fastsort::harness::CSV_HEADER;
use fastsort::rank::Profile;
use fastsort::{backward_count, Ordering, Tournament};

fn fastsort(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fastsort"))
        .args(args)
        .env_remove("FASTSORT_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }
    fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        fs::write(&p, text).unwrap();
        p
    }
    fn path(&self, name: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        p.to_string_lossy().into_owned()
    }
}

#[test]
fn gen_then_exact_solve() {
    let d = Dir::new();
    let f = d.path("t.txt");
    assert!(
        fastsort(&["gen", "--n", "3", "--model", "transitive", "--out", &f])
            .status
            .success()
    );
    let o = fastsort(&["solve", "--algo", "exact", "--in", &f]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "cost"), "0");
}

#[test]
fn gen_output_parses_back() {
    let o = fastsort(&["gen", "--n", "12", "--model", "noisy:0.2", "--seed", "3"]);
    assert!(o.status.success());
    let t = Tournament::parse(&stdout(&o)).unwrap();
    assert_eq!(t.n(), 12);
}

#[test]
fn solve_output_parses_back() {
    let d = Dir::new();
    let f = d.path("t.txt");
    fastsort(&["gen", "--n", "15", "--seed", "8", "--out", &f]);
    let t = Tournament::parse(&fs::read_to_string(&f).unwrap()).unwrap();
    for algo in [
        "insertion",
        "merge",
        "selection",
        "bubble",
        "quick",
        "exact",
    ] {
        let o = fastsort(&[
            "solve",
            "--algo",
            algo,
            "--in",
            &f,
            "--seed",
            "2",
            "--pivot",
            "min-imbalance",
        ]);
        assert!(o.status.success(), "{algo}");
        let text = stdout(&o);
        let order = Ordering::parse(field(&text, "order")).unwrap();
        let cost: u64 = field(&text, "cost").parse().unwrap();
        assert_eq!(backward_count(&t, &order).unwrap(), cost, "{algo}");
    }
}

#[test]
fn cost_lists_backward_edges() {
    let d = Dir::new();
    let f = d.write("c.txt", "tournament 3\n0 1\n1 2\n2 0\n");
    let o = fastsort(&["cost", "--in", &f, "--order", "0,1,2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "cost"), "1");
    let edges: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(edges, vec!["2 0"]);
}

#[test]
fn verify_all_theorems() {
    let o = fastsort(&["verify", "--theorem", "1", "--nmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=3 formula=1/4 (0.25) oracle=1/4 (0.25) ok"));
    for th in ["2", "3"] {
        let o = fastsort(&["verify", "--theorem", th]);
        assert_eq!(o.status.code(), Some(0), "theorem {th}");
        assert!(!stdout(&o).contains("MISMATCH"));
    }
    // n = 7 is beyond the enumeration guard
    assert_eq!(
        fastsort(&["verify", "--theorem", "1", "--nmax", "7"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn formulas_tables() {
    let o = fastsort(&["formulas", "--table", "bk", "--max", "4"]);
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().take(2).eq(["4", "5/8"])));
    let o = fastsort(&["formulas", "--table", "total", "--max", "5"]);
    assert!(stdout(&o)
        .lines()
        .any(|l| l.split_whitespace().take(2).eq(["5", "31/16"])));
    let o = fastsort(&["formulas", "--table", "h", "--max", "3"]);
    assert!(stdout(&o)
        .lines()
        .any(|l| l.split_whitespace().take(2).eq(["2,3", "3/8"])));
    let o = fastsort(&["formulas", "--table", "p", "--max", "3"]);
    assert!(stdout(&o)
        .lines()
        .any(|l| l.split_whitespace().take(2).eq(["2,3", "5/16"])));
}

#[test]
fn experiment_inline_and_config_agree() {
    let d = Dir::new();
    let cfg = d.write(
        "exp.toml",
        "algorithms = [\"insertion\", \"quick\", \"exact\"]\nn = 8\nmodel = \"noisy:0.3\"\ntrials = 50\nseed = 11\ncompare_exact = true\n",
    );
    let from_file = fastsort(&["experiment", "--config", &cfg]);
    assert!(
        from_file.status.success(),
        "{}",
        String::from_utf8_lossy(&from_file.stderr)
    );
    let inline = fastsort(&[
        "experiment",
        "--algo",
        "insertion,quick,exact",
        "--n",
        "8",
        "--model",
        "noisy:0.3",
        "--trials",
        "50",
        "--seed",
        "11",
        "--exact",
    ]);
    assert_eq!(stdout(&from_file), stdout(&inline));
    let text = stdout(&inline);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2][0], "exact");
    assert_eq!(rows[2][10], "1");
    assert_eq!(rows[0][2], "noisy");
    assert_eq!(rows[0][3], "0.3");
}

#[test]
fn experiment_writes_file() {
    let d = Dir::new();
    let out = d.path("out.csv");
    let o = fastsort(&["experiment", "--n", "6", "--trials", "10", "--out", &out]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(fs::read_to_string(&out).unwrap().starts_with(CSV_HEADER));
}

#[test]
fn aggregate_ballots() {
    let d = Dir::new();
    let f = d.write("b.txt", "# three voters\na b c\nb c a\nc a b\n");
    let o = fastsort(&["aggregate", "--ballots", &f, "--algo", "exact"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let profile = Profile::parse(&fs::read_to_string(&f).unwrap()).unwrap();
    assert!(profile.ordering_from_names(field(&text, "ranking")).is_ok());
    assert_eq!(field(&text, "total_kendall_tau"), "4");

    let tie = d.write("tie.txt", "a b\nb a\n");
    assert_eq!(
        fastsort(&["aggregate", "--ballots", &tie]).status.code(),
        Some(1)
    );
    let o = fastsort(&["aggregate", "--ballots", &tie, "--ties", "lex"]);
    assert_eq!(field(&stdout(&o), "ranking"), "a b");
    assert!(fastsort(&[
        "aggregate",
        "--ballots",
        &tie,
        "--ties",
        "random",
        "--seed",
        "1"
    ])
    .status
    .success());
}

#[test]
fn exit_codes() {
    assert_eq!(fastsort(&[]).status.code(), Some(2));
    assert_eq!(
        fastsort(&["solve", "--algo", "heap", "--in", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fastsort(&["verify", "--theorem", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fastsort(&["gen", "--n", "3", "--model", "noisy:2"])
            .status
            .code(),
        Some(2)
    );
    let d = Dir::new();
    let bad = d.write("bad.txt", "tournament 3\n0 1\n1 0\n");
    assert_eq!(
        fastsort(&["solve", "--algo", "quick", "--in", &bad])
            .status
            .code(),
        Some(1)
    );
    let ok = d.write("ok.txt", "tournament 2\n0 1\n");
    assert_eq!(
        fastsort(&["cost", "--in", &ok, "--order", "0,0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fastsort(&["cost", "--in", &ok, "--order", "0,1,2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(fastsort(&["gen", "--n", "0"]).status.code(), Some(1));
    assert_eq!(
        fastsort(&["experiment", "--n", "30", "--exact", "--trials", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_fastsort"));
        c.args(args).env_remove("FASTSORT_SEED");
        if let Some(s) = env {
            c.env("FASTSORT_SEED", s);
        }
        c.output().unwrap().stdout
    };
    let base = ["gen", "--n", "10"];
    let explicit = run(None, &["gen", "--n", "10", "--seed", "42"]);
    assert_eq!(run(Some("42"), &base), explicit);
    assert_ne!(run(None, &base), explicit);
    assert_eq!(
        run(Some("5"), &["gen", "--n", "10", "--seed", "42"]),
        explicit
    );
}
