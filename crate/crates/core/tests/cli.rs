use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dengdim(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dengdim"))
        .args(args)
        .env("DENGDIM_OUT", out)
        .output()
        .expect("binary runs")
}

fn karate() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/karate.txt")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn missing_input_fails_at_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dengdim(&["analyze", "--input", "/no/such/graph.txt"], dir.path());
    assert!(!out.status.success());
    assert!(text(&out.stderr).contains("error [ingest]"), "{}", text(&out.stderr));
}

#[test]
fn karate_row_and_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dengdim(&["analyze", "--input", karate().to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("name,nodes,edges,d_D,d_dD,nu"));
    assert!(lines.next().unwrap().starts_with("karate,34,78,"));
    for suffix in ["profile.csv", "fits.json", "plot.svg", "row.csv"] {
        assert!(dir.path().join(format!("karate.{suffix}")).exists(), "{suffix}");
    }
    let profile = fs::read_to_string(dir.path().join("karate.profile.csv")).unwrap();
    let mut rows = profile.lines();
    assert_eq!(rows.next(), Some("# network=karate seed=0 repetitions=20 mode=exact-log-domain"));
    assert_eq!(rows.next(), Some("epsilon,n_boxes,entropy_bits,nonspecificity,discord,mode"));
    assert_eq!(rows.count(), 4);
    let fits: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("karate.fits.json")).unwrap()).unwrap();
    assert_eq!(fits["nodes"], 34);
    assert_eq!(fits["fits"].as_array().unwrap().len(), 2);
    assert_eq!(fits["fits"][1]["model"], "dsummable");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["analyze", "--gen", "ba:n=300,m=2", "--seed", "5", "--mode", "pow2", "--log-base", "2"];
    for dir in [&a, &b] {
        assert!(dengdim(&args, dir.path()).status.success());
    }
    for suffix in ["profile.csv", "fits.json", "plot.svg", "row.csv"] {
        let name = format!("BA-300.{suffix}");
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn exported_graph_reloads_as_the_same_graph() {
    let dir = tempfile::tempdir().unwrap();
    let first = dengdim(&["analyze", "--gen", "ws:n=120,k=4,p=0.05", "--seed", "2", "--export-graph"], dir.path());
    assert!(first.status.success(), "{}", text(&first.stderr));
    let exported = fs::read_to_string(dir.path().join("SW-120.edges.txt")).unwrap();
    assert!(exported.starts_with("# network: SW-120\n# genspec: ws:n=120,k=4,p=0.05,seed=2\n"));
    let loaded = dengdim::graph::load_edge_list(exported.as_bytes(), "SW-120").unwrap();
    assert_eq!(loaded.report.dropped(), 0);
    let regenerated = dengdim::synth::generate(&"ws:n=120,k=4,p=0.05,seed=2".parse().unwrap()).unwrap();
    let edge_set = |g: &dengdim::Network| {
        let mut e: Vec<(String, String)> = g
            .edges()
            .map(|(u, v)| {
                let (a, b) = (g.label(u).to_string(), g.label(v).to_string());
                if a <= b { (a, b) } else { (b, a) }
            })
            .collect();
        e.sort();
        e
    };
    assert_eq!(edge_set(&loaded.network), edge_set(&regenerated));
}

#[test]
fn batch_records_failures_per_row() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("networks.txt");
    fs::copy(karate(), dir.path().join("karate.txt")).unwrap();
    fs::write(
        &manifest,
        "# three networks\n--input karate.txt\n--input missing.txt\n--gen ba:n=200,m=2 --seed 1\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = Command::new(env!("CARGO_BIN_EXE_dengdim"))
        .args(["batch", "--manifest", manifest.to_str().unwrap(), "--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("warning"));
    let table = fs::read_to_string(out_dir.join("batch.csv")).unwrap();
    assert_eq!(table, text(&out.stdout));
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("karate,34,78,") && rows[1].contains(",ok,"));
    assert!(rows[2].starts_with("missing,") && rows[2].contains(",error,") && rows[2].contains("ingest"));
    assert!(rows[3].starts_with("BA-200,200,") && rows[3].contains(",ok,"));
}

#[test]
fn empty_manifest_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("empty.txt");
    fs::write(&manifest, "# nothing\n").unwrap();
    let out = dengdim(&["batch", "--manifest", manifest.to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    assert!(text(&out.stderr).contains("error [config]"));
}
