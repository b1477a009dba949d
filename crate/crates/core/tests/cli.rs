mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chainmap::complexes::{circle_points, noisy_circle, trefoil, SimplicialComplex};
use serde_json::{json, Value};
use tempfile::TempDir;

use common::OCTAGON_TO_SQUARE;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainmap")).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Value {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("summary is JSON")
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    run(dir, args).status.code().expect("exit code")
}

fn read_json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn model(dir: &Path, name: &str) -> PathBuf {
    let file = format!("{}.json", name.replace(':', "_"));
    ok(dir, &["build", "model", "--name", name, "--out", &file]);
    dir.join(file)
}

fn write_points(dir: &Path, name: &str, pts: &[Vec<f64>]) -> PathBuf {
    let text: String = pts
        .iter()
        .map(|p| p.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    fs::write(dir.join(name), text).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_model_square() {
    let d = TempDir::new().unwrap();
    let out = ok(d.path(), &["build", "model", "--name", "square", "--out", "sq.json"]);
    assert_eq!(out["complex"]["counts"], json!([4, 4]));
    let k = SimplicialComplex::from_json(&read_json(d.path().join("sq.json"))).unwrap();
    assert_eq!((k.count(0), k.count(1)), (4, 4));
    let manifest = read_json(d.path().join("sq.json.manifest.json"));
    assert_eq!(manifest["seed"], json!(0));
    assert_eq!(manifest["outputs"][0]["path"], json!("sq.json"));
}

#[test]
fn build_rips_is_face_closed() {
    let d = TempDir::new().unwrap();
    let pts = noisy_circle(25, 0.05, 3).unwrap();
    let input = write_points(d.path(), "pts.csv", pts.points());
    ok(d.path(), &["build", "rips", "--input", s(&input), "--rmax", "0.7", "--maxdim", "2", "--out", "r.json"]);
    let k = SimplicialComplex::from_json(&read_json(d.path().join("r.json"))).unwrap();
    for i in 0..k.len() {
        for (f, _) in k.faces_of(i) {
            assert!(k.index_of(k.simplex(*f)).is_some());
        }
    }
    assert!(k.count(2) > 0);
}

#[test]
fn build_witness_lists_landmarks() {
    let d = TempDir::new().unwrap();
    let pts = trefoil(500, 1).unwrap();
    let input = write_points(d.path(), "trefoil.csv", pts.points());
    ok(d.path(), &["build", "witness", "--input", s(&input), "--landmarks", "40", "--seed", "7", "--maxdim", "1", "--out", "w.json"]);
    let lm = read_json(d.path().join("w.json.landmarks.json"));
    assert_eq!(lm["indices"].as_array().unwrap().len(), 40);
    assert_eq!(lm["seed"], json!(7));
    let k = SimplicialComplex::from_json(&read_json(d.path().join("w.json"))).unwrap();
    assert_eq!(k.count(0), 40);
}

#[test]
fn hom_counts() {
    let d = TempDir::new().unwrap();
    let tri = model(d.path(), "triangle");
    let sq = model(d.path(), "square");
    let pt = model(d.path(), "point");
    let r = ok(d.path(), &["hom", "--domain", s(&tri), "--codomain", s(&tri), "--out", "tt.json"]);
    assert_eq!((r["generators"].clone(), r["homotopies"].clone()), (json!(2), json!(9)));
    let r = ok(d.path(), &["hom", "--domain", s(&sq), "--codomain", s(&sq), "--field", "z2", "--out", "ss.json"]);
    assert_eq!(r["homotopies"], json!(16));
    let r = ok(d.path(), &["hom", "--domain", s(&pt), "--codomain", s(&pt), "--out", "pp.json"]);
    assert_eq!((r["generators"].clone(), r["homotopies"].clone()), (json!(1), json!(0)));
    assert_eq!(r["kunneth_rank"], json!(1));
}

#[test]
fn map_enumerate_square() {
    let d = TempDir::new().unwrap();
    let sq = model(d.path(), "square");
    ok(d.path(), &["hom", "--domain", s(&sq), "--codomain", s(&sq), "--field", "z2", "--out", "p.json"]);
    let r = ok(d.path(), &["map", "--param", "p.json", "--method", "enumerate", "--out", "e"]);
    assert_eq!(r["total"], json!(65_536));
    assert_eq!(r["minimizers"], json!(16));
    assert_eq!(r["min_value"], json!(2));
    let h = read_json(d.path().join("e.histogram.json"));
    assert!(h.is_object());
    assert!(d.path().join("e.map.csv").exists());
}

#[test]
fn map_lp_attains_optimum() {
    let d = TempDir::new().unwrap();
    let oct = model(d.path(), "octagon");
    let sq = model(d.path(), "square");
    ok(d.path(), &["hom", "--domain", s(&oct), "--codomain", s(&sq), "--out", "p.json"]);
    let r = ok(d.path(), &["map", "--param", "p.json", "--method", "lp-random-vertex", "--seed", "4", "--out", "m"]);
    let optimum = r["optimum"].as_f64().unwrap();
    assert!((optimum - 3.0).abs() < 1e-7);
    assert!((r["map"]["norm_objective"].as_f64().unwrap() - optimum).abs() < 1e-7);
    assert_eq!(r["map"]["chain_map"], json!(true));
}

#[test]
fn map_aw_decreases_loss() {
    let d = TempDir::new().unwrap();
    let ico = model(d.path(), "icosahedron");
    let octa = model(d.path(), "octahedron");
    ok(d.path(), &["hom", "--domain", s(&ico), "--codomain", s(&octa), "--out", "p.json"]);
    let r = ok(d.path(), &["map", "--param", "p.json", "--method", "aw", "--max-iterations", "300", "--out", "a"]);
    assert!(r["loss"].as_f64().unwrap() <= r["initial_loss"].as_f64().unwrap());
    assert_eq!(r["map"]["chain_map"], json!(true));
}

#[test]
fn circle_coords_writes_angles_and_plot_data() {
    let d = TempDir::new().unwrap();
    let pts = circle_points(60, 1.0).unwrap();
    let input = write_points(d.path(), "c.csv", pts.points());
    ok(d.path(), &["build", "rips", "--input", s(&input), "--rmax", "0.11", "--maxdim", "2", "--out", "x.json"]);
    let r = ok(d.path(), &["app", "circle-coords", "--domain", "x.json", "--n", "16", "--out", "cc"]);
    let w = r["winding_number"].as_f64().unwrap();
    assert!((w - w.round()).abs() < 1e-9);
    assert!(r["distortion"].as_f64().unwrap() <= r["initial_distortion"].as_f64().unwrap());
    let angles = fs::read_to_string(d.path().join("cc.angles.csv")).unwrap();
    assert_eq!(angles.lines().count(), 61);
    let plot = fs::read_to_string(d.path().join("cc.plot.csv")).unwrap();
    assert!(plot.starts_with("domain_angle,computed_angle\n"));
}

#[test]
fn density_reports_improvement() {
    let d = TempDir::new().unwrap();
    let x = model(d.path(), "ngon:10");
    let sample = noisy_circle(40, 0.05, 1).unwrap();
    let input = write_points(d.path(), "s.csv", sample.points());
    ok(d.path(), &["build", "rips", "--input", s(&input), "--rmax", "0.4", "--maxdim", "2", "--out", "y.json"]);
    let r = ok(
        d.path(),
        &["app", "density", "--domain", s(&x), "--codomain", "y.json", "--samples", s(&input), "--restarts", "0", "--out", "dens"],
    );
    assert_eq!(r["improved"], json!(true));
    assert!(r["objective"].as_f64().unwrap() > r["initial_objective"].as_f64().unwrap());
    assert_eq!(fs::read_to_string(d.path().join("dens.image.csv")).unwrap().lines().count(), 11);
}

/// A Y: a vertical stem that splits into two arms, height as the last coordinate.
fn y_tree(n: usize, spread: f64) -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    for i in 0..n {
        let t = i as f64 / n as f64;
        pts.push(vec![0.0, t]);
        pts.push(vec![-spread * t, 1.0 + t]);
        pts.push(vec![spread * t, 1.0 + t]);
    }
    pts
}

#[test]
fn mapper_match_on_two_trees() {
    let d = TempDir::new().unwrap();
    let a = write_points(d.path(), "a.csv", &y_tree(30, 1.0));
    let b = write_points(d.path(), "b.csv", &y_tree(40, 1.5));
    let r = ok(
        d.path(),
        &["app", "mapper-match", "--x", s(&a), "--y", s(&b), "--intervals", "6", "--overlap", "0.3", "--link", "0.15", "--out", "mm"],
    );
    // two arm tips are maxima; identifying them closes one cycle
    assert_eq!(r["x_betti"], json!([1, 1]));
    assert_eq!(r["y_betti"], json!([1, 1]));
    assert_eq!(r["map"]["chain_map"], json!(true));
    let g = read_json(d.path().join("mm.x.graph.json"));
    let degrees = {
        let mut deg = vec![0; g["nodes"].as_array().unwrap().len()];
        for e in g["edges"].as_array().unwrap() {
            deg[e[0].as_u64().unwrap() as usize] += 1;
            deg[e[1].as_u64().unwrap() as usize] += 1;
        }
        deg
    };
    assert_eq!(degrees.iter().filter(|&&k| k == 3).count(), 1);
}

fn write_map(dir: &Path, name: &str, domain: &str, codomain: &str, rows: &[Vec<f64>]) -> PathBuf {
    let x = SimplicialComplex::from_json(&read_json(model(dir, domain))).unwrap();
    let y = SimplicialComplex::from_json(&read_json(model(dir, codomain))).unwrap();
    let m = chainmap::algebra::Matrix::from_dense(rows).unwrap();
    let g = chainmap::homcomplex::ChainMapMatrix::new(m, x.into(), y.into()).unwrap();
    let path = dir.join(name);
    fs::write(&path, chainmap::optimize::map_to_json(&g).to_string()).unwrap();
    path
}

fn palette(dir: &Path, n: usize) -> PathBuf {
    let text: String =
        std::iter::once("vertex_id,r,g,b\n".to_string()).chain((0..n).map(|i| format!("{i},{},0.5,0.25\n", i as f64 / n as f64))).collect();
    fs::write(dir.join("pal.csv"), text).unwrap();
    dir.join("pal.csv")
}

#[test]
fn color_identity_zero_and_intense() {
    let d = TempDir::new().unwrap();
    let id: Vec<Vec<f64>> = (0..8).map(|i| (0..8).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let idp = write_map(d.path(), "id.json", "square", "square", &id);
    let pal = palette(d.path(), 4);
    ok(d.path(), &["color", "--map", s(&idp), "--palette", s(&pal), "--out", "c.json"]);
    let c = read_json(d.path().join("c.json"));
    assert_eq!(c["raw"], c["domain"]);
    assert_eq!(c["raw"]["[0]"], json!([0.0, 0.5, 0.25]));

    let zero = vec![vec![0.0; 8]; 8];
    let zp = write_map(d.path(), "zero.json", "square", "square", &zero);
    ok(d.path(), &["color", "--map", s(&zp), "--palette", s(&pal), "--out", "z.json"]);
    let z = read_json(d.path().join("z.json"));
    assert!(z["raw"].as_object().unwrap().values().all(|v| v == &json!([0.0, 0.0, 0.0])));

    let rows: Vec<Vec<f64>> = OCTAGON_TO_SQUARE.iter().map(|r| r.to_vec()).collect();
    let ep = write_map(d.path(), "example.json", "octagon", "square", &rows);
    let pal8 = palette(d.path(), 8);
    let r = ok(d.path(), &["color", "--map", s(&ep), "--palette", s(&pal8), "--out", "e.json"]);
    assert!(r["intense_simplices"].as_u64().unwrap() > 0);
    let e = read_json(d.path().join("e.json"));
    assert!(!e["intensity"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    assert_eq!(code(p, &["build", "model", "--out", "x.json"]), 2);
    assert_eq!(code(p, &["build", "model", "--name", "dodecagonal-prism", "--out", "x.json"]), 2);
    assert_eq!(code(p, &["build", "rips", "--input", "missing.csv", "--rmax", "1", "--out", "x.json"]), 3);
    fs::write(p.join("garbage.json"), "{nope").unwrap();
    assert_eq!(code(p, &["hom", "--domain", "garbage.json", "--codomain", "garbage.json", "--out", "h.json"]), 3);

    let sq = model(p, "square");
    ok(p, &["hom", "--domain", s(&sq), "--codomain", s(&sq), "--out", "q.json"]);
    ok(p, &["hom", "--domain", s(&sq), "--codomain", s(&sq), "--field", "z2", "--out", "z.json"]);
    assert_eq!(code(p, &["map", "--param", "q.json", "--method", "anneal", "--out", "m"]), 2);
    assert_eq!(code(p, &["map", "--param", "z.json", "--method", "lp-random-vertex", "--out", "m"]), 2);

    let id: Vec<Vec<f64>> = (0..8).map(|i| (0..8).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let idp = write_map(p, "id.json", "square", "square", &id);
    fs::write(p.join("short.csv"), "0,1,0,0\n1,0,1,0\n").unwrap();
    assert_eq!(code(p, &["color", "--map", s(&idp), "--palette", "short.csv", "--out", "c.json"]), 3);

    fs::write(p.join("bare.json"), r#"{"simplices": [[0], [1], [2], [0, 1], [1, 2], [0, 2]]}"#).unwrap();
    assert_eq!(code(p, &["app", "circle-coords", "--domain", "bare.json", "--out", "cc"]), 3);
}

#[test]
fn outputs_are_deterministic() {
    let d = TempDir::new().unwrap();
    let tri = model(d.path(), "triangle");
    let sq = model(d.path(), "square");
    ok(d.path(), &["hom", "--domain", s(&tri), "--codomain", s(&sq), "--field", "z2", "--out", "p.json"]);
    for prefix in ["a", "b"] {
        ok(d.path(), &["map", "--param", "p.json", "--method", "anneal", "--iterations", "3000", "--seed", "11", "--out", prefix]);
    }
    for ext in ["map.json", "map.csv", "report.json"] {
        let a = fs::read(d.path().join(format!("a.{ext}"))).unwrap();
        let b = fs::read(d.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a, b, "{ext} differs between identical runs");
    }
    let one = Command::new(env!("CARGO_BIN_EXE_chainmap"))
        .current_dir(d.path())
        .env("CHAINMAP_THREADS", "1")
        .args(["map", "--param", "p.json", "--method", "enumerate", "--out", "t1"])
        .output()
        .unwrap();
    assert!(one.status.success());
    ok(d.path(), &["map", "--param", "p.json", "--method", "enumerate", "--out", "tn"]);
    assert_eq!(fs::read(d.path().join("t1.histogram.json")).unwrap(), fs::read(d.path().join("tn.histogram.json")).unwrap());
}
