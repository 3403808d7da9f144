use iwagraph_cli::files::{BetaFile, GraphFile};
use iwagraph_cli::{run, Command, Format, RunConfig, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn config(command: Command, graph: &str) -> RunConfig {
    RunConfig::new(command, fixture(graph))
}

fn json(c: &RunConfig) -> Value {
    let out = run(c);
    assert_eq!(out.exit_code, EXIT_OK, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn binary(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_iwagraph"))
        .args(args)
        .output()
        .unwrap()
}

fn snapshot(c: &RunConfig, name: &str) {
    let out = run(c);
    assert_eq!(out.exit_code, EXIT_OK, "stderr: {}", out.stderr);
    let expected = std::fs::read_to_string(fixture("expected").join(name)).unwrap();
    assert_eq!(out.stdout, expected, "snapshot {name} differs");
}

#[test]
fn snapshots() {
    let mut c = config(Command::Charelem, "bouquet.json");
    snapshot(&c, "charelem-bouquet.json");

    c = config(Command::Tower, "bouquet.json");
    c.nmax = 3;
    snapshot(&c, "tower-bouquet.json");
    c.format = Format::Csv;
    snapshot(&c, "tower-bouquet.csv");
    c.format = Format::Text;
    snapshot(&c, "tower-bouquet.txt");

    snapshot(&config(Command::Tower, "bouquet-zero.json"), "tower-bouquet-zero.json");
    snapshot(&config(Command::Tower, "bouquet-d2.json"), "tower-bouquet-d2.json");

    c = config(Command::Kida, "bouquet4-d2.json");
    c.beta = Some(fixture("q8.json"));
    snapshot(&c, "kida-bouquet4-q8.json");

    c = config(Command::Qwalk, "triangle.json");
    c.a = Some("3".into());
    c.nmax = 3;
    snapshot(&c, "qwalk-triangle-a3.json");

    c = config(Command::ProductCheck, "bouquet-1-2.json");
    c.beta = Some(fixture("z2.json"));
    snapshot(&c, "product-check-bouquet-1-2-z2.json");
}

#[test]
fn tower_bouquet_invariants() {
    let mut c = config(Command::Tower, "bouquet.json");
    c.nmax = 4;
    let v = json(&c);
    assert_eq!(v["kind"], "iwasawa");
    assert_eq!(v["mu"], "1");
    assert_eq!(v["lambda"], 1);
    assert_eq!(v["secondary"]["nu"], "-1");
    assert_eq!(v["provable_stable_from"], 2);
    assert_eq!(v["table"][3]["kappa_direct"], "1024");
}

#[test]
fn tower_torus_secondary_invariants() {
    let v = json(&config(Command::Tower, "bouquet-d2.json"));
    assert_eq!(v["mu"], "0");
    assert_eq!(v["lambda"], 2);
    assert_eq!(v["secondary"]["mu_i"][0], "4");
    assert_eq!(v["secondary"]["lambda_i"][0], "-6");
    assert_eq!(v["secondary"]["nu"], "-1");
    assert_eq!(v["stable_from"], 1);
}

#[test]
fn zero_case_is_reported() {
    let v = json(&config(Command::Tower, "bouquet-zero.json"));
    assert_eq!(v["kind"], "zero_case");
    assert_eq!(v["char_element_is_zero"], true);
    assert_eq!(v["first_zero_layer"], 1);
}

#[test]
fn rational_weights_give_signed_kappa() {
    let mut c = config(Command::Tower, "triangle-rational.json");
    c.nmax = 1;
    let v = json(&c);
    assert_eq!(v["table"][0]["kappa_direct"], "-5/6");
    assert_eq!(v["table"][0]["valuation"], "-1");
}

#[test]
fn kida_quaternion_and_dihedral() {
    for beta in ["q8.json", "d4.json"] {
        let mut c = config(Command::Kida, "bouquet4-d2.json");
        c.beta = Some(fixture(beta));
        let v = json(&c);
        assert_eq!(v["degree"], 8);
        assert_eq!(v["lambda_x"], 2);
        assert_eq!(v["lambda_y"], 16);
        assert_eq!(v["relation_holds"], true);
    }
    let mut c = config(Command::Kida, "bouquet-1-2.json");
    c.beta = Some(fixture("z2.json"));
    let v = json(&c);
    assert_eq!((v["lambda_x"].clone(), v["lambda_y"].clone()), (1.into(), 3.into()));
}

#[test]
fn qwalk_triangle() {
    let mut c = config(Command::Qwalk, "triangle.json");
    c.a = Some("3".into());
    c.nmax = 4;
    let v = json(&c);
    assert_eq!(v["char_element_a"], "-27*u + 730 - 27*u^-1");
    let vals: Vec<String> = v["table"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["valuation"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(vals, ["2", "6", "8", "10", "12"]);
    assert_eq!(v["stable_from"], 1);

    c.a = Some("2".into());
    let v = json(&c);
    assert!(v["table"].as_array().unwrap().iter().all(|r| r["valuation"] == "0"));

    c.a = Some("1".into());
    assert_eq!(run(&c).exit_code, EXIT_INPUT);
}

#[test]
fn deterministic_across_jobs() {
    let mut outputs = Vec::new();
    for jobs in [1, 2, 4] {
        let mut c = config(Command::Tower, "bouquet-d2.json");
        c.jobs = Some(jobs);
        outputs.push(run(&c).stdout);
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn graph_file_round_trip() {
    for name in ["bouquet.json", "triangle-rational.json", "bouquet-d2.json", "bouquet4-d2.json"] {
        let file = GraphFile::read(&fixture(name)).unwrap();
        let g = file.load(None).unwrap();
        let printed = GraphFile::from_graph(&g.graph, g.alpha.as_ref(), g.prime);
        let text = serde_json::to_string(&printed).unwrap();
        let reparsed: GraphFile = serde_json::from_str(&text).unwrap();
        let g2 = reparsed.load(None).unwrap();
        assert_eq!(g2.graph, g.graph, "{name}");
        assert_eq!(g2.alpha, g.alpha, "{name}");
        assert_eq!(reparsed, printed, "{name}");
    }
}

#[test]
fn beta_file_rejects_unknown_edges() {
    let g = GraphFile::read(&fixture("bouquet.json")).unwrap().load(None).unwrap();
    let beta: BetaFile =
        serde_json::from_str(r#"{"group": {"abelian": [2]}, "voltage": {"zz": "1"}}"#).unwrap();
    assert!(beta.load(&g.graph).is_err());
    let beta: BetaFile =
        serde_json::from_str(r#"{"group": "quaternion", "voltage": {"s1": "q"}}"#).unwrap();
    assert!(beta.load(&g.graph).is_err());
}

#[test]
fn cover_output_is_a_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cover.json");
    let mut c = config(Command::Cover, "bouquet-1-2.json");
    c.beta = Some(fixture("z2.json"));
    c.out = Some(out.clone());
    let r = run(&c);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.stdout.is_empty());
    let g = GraphFile::read(&out).unwrap().load(None).unwrap();
    assert_eq!(g.graph.num_vertices(), 2);
    assert_eq!(g.graph.num_edges(), 4);

    let mut k = RunConfig::new(Command::Kappa, &out);
    k.format = Format::Json;
    let v = json(&k);
    assert_eq!(v["kappa"], "4");
    assert_eq!(v["kappa_arborescences"], "4");
}

#[test]
fn exit_codes() {
    let ok = binary(&["validate", "--graph", fixture("bouquet.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));

    let invalid = binary(&["validate", "--graph", fixture("disconnected.json").to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(EXIT_INPUT));

    let missing = binary(&["tower", "--graph", fixture("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(EXIT_INPUT));

    let not_prime = binary(&[
        "tower",
        "--graph",
        fixture("bouquet.json").to_str().unwrap(),
        "--prime",
        "4",
    ]);
    assert_eq!(not_prime.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&not_prime.stderr).contains("not a prime"));

    let no_beta = binary(&["kida", "--graph", fixture("bouquet4-d2.json").to_str().unwrap()]);
    assert_eq!(no_beta.status.code(), Some(EXIT_INPUT));

    let tower = binary(&["tower", "--graph", fixture("bouquet.json").to_str().unwrap()]);
    assert_eq!(tower.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&tower.stdout).contains("mu = 1  lambda = 1"));
}

#[test]
fn size_guard_rejects_large_layers() {
    let mut c = config(Command::Tower, "bouquet-d2.json");
    c.nmax = 6;
    assert_eq!(run(&c).exit_code, EXIT_INPUT);
}

#[test]
fn verification_failures_map_to_mismatch_status() {
    let e = iwagraph_cli::CliError::Core(iwagraph::Error::Mismatch {
        identity: "x".into(),
        left: "1".into(),
        right: "2".into(),
    });
    assert_eq!(e.exit_code(), EXIT_MISMATCH);
    let e = iwagraph_cli::CliError::Usage("u".into());
    assert_eq!(e.exit_code(), EXIT_INPUT);
}
