mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use minkowski_embed::gen::{simplex_skeleton, GenSpec};
use minkowski_embed::io::{EmbeddingFile, PolyhedronFile};
use minkowski_embed::scalar::{Rational, Scalar};
use tempfile::TempDir;

use common::{exact_sq_len, float_sq_len, relative};

fn minkembed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minkembed"))
        .args(args)
        .env_remove("MINKEMBED_BACKEND")
        .output()
        .expect("binary runs")
}

fn with_env(args: &[&str], backend: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minkembed"))
        .args(args)
        .env("MINKEMBED_BACKEND", backend)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn gen_file(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", p(&path)]);
    let out = minkembed(&full);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    path
}

fn polyhedron(path: &Path) -> PolyhedronFile {
    PolyhedronFile::parse(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Bounded-degree instance with a float embedding truncated to every other vertex.
fn truncated_instance(dir: &TempDir, d: usize, seed: u64) -> (PolyhedronFile, EmbeddingFile, PathBuf) {
    let poly = gen_file(
        dir,
        "poly.json",
        &["--kind", "bounded-degree", "--vertices", "16", "--bound", &d.to_string(), "--seed", &seed.to_string(), "--dim", "2"],
    );
    let out = minkembed(&["embed", p(&poly), "--backend", "float", "--d", &d.to_string()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let full = EmbeddingFile::parse(&stdout(&out)).unwrap();
    let mut file = polyhedron(&poly);
    let partial: BTreeMap<String, Vec<String>> = file
        .vertices
        .iter()
        .step_by(2)
        .map(|id| (id.clone(), full.assignment[id].clone()))
        .collect();
    file.partial_embedding = Some(partial);
    file.d = Some(d);
    let input = write(dir, "partial.json", &file.to_json());
    (file, full, input)
}

#[test]
fn gen_complete_writes_the_simplex_skeleton() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "k5.json", &["--kind", "complete", "--d", "4"]);
    let file = polyhedron(&path);
    assert_eq!(file.vertices.len(), 5);
    assert_eq!(file.squared_lengths.len(), 10);
    assert!(file.squared_lengths.iter().all(|e| e.value == "1"));
    assert_eq!(file.maximal_simplices.len(), 10);
    assert!(file.maximal_simplices.iter().all(|s| s.len() == 2));
    assert_eq!(file, PolyhedronFile::from_polyhedron(&simplex_skeleton::<Rational>(4)));
}

#[test]
fn rational_embed_has_exact_zero_residuals() {
    let dir = TempDir::new().unwrap();
    let poly = gen_file(&dir, "k4.json", &["--kind", "complete", "--d", "3"]);
    let out = minkembed(&["embed", p(&poly), "--backend", "rational"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let emb = EmbeddingFile::parse(&stdout(&out)).unwrap();
    let report = emb.report.as_ref().unwrap();
    assert!(report.pass);
    assert!(report.isometry.edges.iter().all(|e| e.residual == "0"));
    assert_eq!(report.isometry.checked_edges, 6);

    let p = polyhedron(&poly).polyhedron::<Rational>().unwrap();
    for (a, b, g) in p.edges() {
        let ua: Vec<Rational> = emb.assignment[p.vertex_id(a)].iter().map(|c| Rational::parse_str(c).unwrap()).collect();
        let ub: Vec<Rational> = emb.assignment[p.vertex_id(b)].iter().map(|c| Rational::parse_str(c).unwrap()).collect();
        assert_eq!(&exact_sq_len(&ua, &ub), g);
    }
}

#[test]
fn literal_detection_and_environment_pick_the_backend() {
    let dir = TempDir::new().unwrap();
    let poly = gen_file(&dir, "k3.json", &["--kind", "complete", "--d", "2"]);
    let detected = EmbeddingFile::parse(&stdout(&minkembed(&["embed", p(&poly)]))).unwrap();
    assert_eq!(detected.backend.to_string(), "rational");
    let env = EmbeddingFile::parse(&stdout(&with_env(&["embed", p(&poly)], "float"))).unwrap();
    assert_eq!(env.backend.to_string(), "float");
    let flag = EmbeddingFile::parse(&stdout(&with_env(&["embed", p(&poly), "--backend", "rational"], "float"))).unwrap();
    assert_eq!(flag.backend.to_string(), "rational");

    let mut file = polyhedron(&poly);
    file.squared_lengths[0].value = "0.5".into();
    let decimal = write(&dir, "decimal.json", &file.to_json());
    let out = EmbeddingFile::parse(&stdout(&minkembed(&["embed", p(&decimal)]))).unwrap();
    assert_eq!(out.backend.to_string(), "float");
    assert_eq!(with_env(&["embed", p(&poly)], "quad").status.code(), Some(2));
}

#[test]
fn d_below_degeneracy_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let poly = gen_file(&dir, "k5.json", &["--kind", "complete", "--d", "4"]);
    let out = minkembed(&["embed", p(&poly), "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains('2') && err.contains('4'), "{err}");
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let args = ["--kind", "degenerate", "--vertices", "40", "--bound", "3", "--seed", "9"];
    let a = fs::read(gen_file(&dir, "a.json", &args)).unwrap();
    let b = fs::read(gen_file(&dir, "b.json", &args)).unwrap();
    assert_eq!(a, b);
    let poly = dir.path().join("a.json");
    for backend in ["float", "rational"] {
        let x = minkembed(&["embed", p(&poly), "--backend", backend, "--seed", "3"]);
        let y = minkembed(&["embed", p(&poly), "--backend", backend, "--seed", "3"]);
        assert_eq!(x.status.code(), Some(0), "{}", stderr(&x));
        assert_eq!(x.stdout, y.stdout);
    }
}

#[test]
fn extend_keeps_the_partial_map_and_is_isometric() {
    let dir = TempDir::new().unwrap();
    let (file, _, input) = truncated_instance(&dir, 4, 2);
    let out = minkembed(&["extend", p(&input), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let ext = EmbeddingFile::parse(&stdout(&out)).unwrap();
    for (id, coords) in file.partial_embedding.as_ref().unwrap() {
        assert_eq!(&ext.assignment[id], coords);
    }
    assert_eq!(ext.assignment.len(), file.vertices.len());
    let poly = file.polyhedron::<f64>().unwrap();
    for (a, b, g) in poly.edges() {
        let ua: Vec<f64> = ext.assignment[poly.vertex_id(a)].iter().map(|c| c.parse().unwrap()).collect();
        let ub: Vec<f64> = ext.assignment[poly.vertex_id(b)].iter().map(|c| c.parse().unwrap()).collect();
        assert!(relative(float_sq_len(&ua, &ub) - g, *g) <= 1e-9);
    }
    assert!(ext.meta.partial.len() * 2 >= file.vertices.len());
}

#[test]
fn extend_with_the_full_map_returns_it() {
    let dir = TempDir::new().unwrap();
    let (mut file, full, _) = truncated_instance(&dir, 3, 5);
    file.partial_embedding = Some(full.assignment.clone());
    let input = write(&dir, "full.json", &file.to_json());
    let out = minkembed(&["extend", p(&input)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(EmbeddingFile::parse(&stdout(&out)).unwrap().assignment, full.assignment);
}

#[test]
fn extend_rejects_a_non_isometric_partial_map() {
    let dir = TempDir::new().unwrap();
    let (mut file, _, _) = truncated_instance(&dir, 4, 3);
    let partial = file.partial_embedding.as_ref().unwrap().clone();
    let poly = file.polyhedron::<f64>().unwrap();
    let (a, b, _) = poly
        .edges()
        .find(|(a, b, _)| partial.contains_key(poly.vertex_id(*a)) && partial.contains_key(poly.vertex_id(*b)))
        .expect("an edge inside the partial map");
    let id = poly.vertex_id(a).to_string();
    let mut bad = partial;
    let x: f64 = bad[&id][0].parse().unwrap();
    bad.get_mut(&id).unwrap()[0] = format!("{:?}", x + 0.5);
    file.partial_embedding = Some(bad);
    let input = write(&dir, "bad.json", &file.to_json());
    let out = minkembed(&["extend", p(&input)]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains(&id) || err.contains(poly.vertex_id(b)), "{err}");
}

#[test]
fn extend_refuses_the_rational_backend() {
    let dir = TempDir::new().unwrap();
    let (_, _, input) = truncated_instance(&dir, 3, 1);
    assert_eq!(minkembed(&["extend", p(&input), "--backend", "rational"]).status.code(), Some(2));
    assert_eq!(with_env(&["extend", p(&input)], "rational").status.code(), Some(2));
    assert_eq!(with_env(&["extend", p(&input), "--backend", "float"], "rational").status.code(), Some(0));
}

#[test]
fn verify_accepts_pipeline_output_and_rejects_corruption() {
    let dir = TempDir::new().unwrap();
    let poly = gen_file(&dir, "g.json", &["--kind", "degenerate", "--vertices", "20", "--bound", "3", "--seed", "4"]);
    let emb = dir.path().join("e.json");
    let out = minkembed(&["embed", p(&poly), "--backend", "rational", "-o", p(&emb)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let ok = minkembed(&["verify", p(&poly), p(&emb), "--tol", "0"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let report: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["isometry"]["max_residual"], "0");

    let mut file = EmbeddingFile::parse(&fs::read_to_string(&emb).unwrap()).unwrap();
    let file_poly = polyhedron(&poly).polyhedron::<Rational>().unwrap();
    let (a, _, _) = file_poly.edges().next().unwrap();
    let id = file_poly.vertex_id(a).to_string();
    let x = Rational::parse_str(&file.assignment[&id][0]).unwrap() + Rational::from_ratio(1, 3);
    file.assignment.get_mut(&id).unwrap()[0] = x.to_canonical();
    let bad = write(&dir, "bad.json", &file.to_json());
    let out = minkembed(&["verify", p(&poly), p(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["isometry"]["pass"], false);
}

#[test]
fn bench_writes_one_row_per_cell() {
    let out = minkembed(&["bench", "--n", "100,1000", "--d", "4,8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,d,backend,phase_order_ms,phase_place_ms,phase_verify_ms,max_residual");
    assert_eq!(lines.len(), 5);
    let cells: Vec<(&str, &str)> = lines[1..].iter().map(|l| {
        let f: Vec<&str> = l.split(',').collect();
        assert!(f[6].parse::<f64>().unwrap() <= 1e-9);
        (f[0], f[1])
    }).collect();
    assert_eq!(cells, vec![("100", "4"), ("100", "8"), ("1000", "4"), ("1000", "8")]);
}

#[test]
fn info_reports_the_bounds() {
    let dir = TempDir::new().unwrap();
    let poly = gen_file(&dir, "mesh.json", &["--kind", "mesh", "--rows", "4", "--cols", "5"]);
    let out = minkembed(&["info", p(&poly)]);
    assert_eq!(out.status.code(), Some(0));
    let info: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(info["vertices"], 20);
    assert_eq!(info["dimension"], 2);
    assert_eq!(info["degeneracy"], 3);
    assert_eq!(info["min_d_embed"], 3);
    assert_eq!(info["injectivity_d"], 5);
    assert_eq!(info["literal_backend"], "rational");
    assert_eq!(info["has_partial_embedding"], false);
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let junk = write(&dir, "junk.json", "{\"format\": \"nope\"}");
    assert_eq!(minkembed(&["embed", p(&junk)]).status.code(), Some(2));
    assert_eq!(minkembed(&["info", p(&dir.path().join("missing.json"))]).status.code(), Some(2));
    assert_eq!(minkembed(&["gen", "--kind", "mesh", "--rows", "3"]).status.code(), Some(2));
    assert_eq!(minkembed(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn gen_spec_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "g.json", &["--kind", "degenerate", "--vertices", "30", "--bound", "4", "--seed", "11"]);
    let lib = minkowski_embed::gen::random_polyhedron::<Rational>(&GenSpec::degenerate(30, 4, 11)).unwrap();
    assert_eq!(polyhedron(&path), PolyhedronFile::from_polyhedron(&lib));
}
