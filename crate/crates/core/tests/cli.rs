use std::fs;
use std::path::Path;

use sphereforge::cli::run;
use sphereforge::grid::{boundary_members, diagonal_band, join_of_paths, shelling_order_band, GridBox};
use sphereforge::io::{holes_to_json, simplicial_to_json};
use sphereforge::topology::ShellingOrder;
use tempfile::TempDir;

fn sf(args: &[&str]) -> i32 {
    let argv: Vec<&str> = std::iter::once("sphereforge").chain(args.iter().copied()).collect();
    run(argv)
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn generate_then_verify() {
    let dir = TempDir::new().unwrap();
    let s = p(&dir, "s.json");
    assert_eq!(sf(&["generate", "holes4", "--n", "9", "--m", "9", "-o", &s]), 0);
    for f in ["s.json", "s.report.json", "s.manifest.json", "s.realized.json"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    assert_eq!(sf(&["verify", "sphere", &p(&dir, "s.realized.json"), "--dim", "3", "--report", &p(&dir, "cert.json")]), 0);
    let cert = fs::read_to_string(dir.path().join("cert.json")).unwrap();
    assert!(cert.contains("\"betti\""));
    assert_eq!(sf(&["verify", "ball", &p(&dir, "s.realized.json")]), 2);
    assert_eq!(sf(&["verify", "sphere", &p(&dir, "s.realized.json"), "--dim", "4"]), 2);
    let report = fs::read_to_string(dir.path().join("s.report.json")).unwrap();
    assert!(report.contains("claimed_bounds"));
}

#[test]
fn realize_is_deterministic() {
    let dir = TempDir::new().unwrap();
    assert_eq!(sf(&["generate", "aztec", "--k", "3", "--l", "2", "-o", &p(&dir, "a.json")]), 0);
    let m = p(&dir, "a.manifest.json");
    for out in ["r1.json", "r2.json"] {
        assert_eq!(sf(&["realize", "--manifest", &m, "--choices", "0x0", "-o", &p(&dir, out)]), 0);
    }
    assert_eq!(fs::read(dir.path().join("r1.json")).unwrap(), fs::read(dir.path().join("r2.json")).unwrap());
    for out in ["q1.json", "q2.json"] {
        assert_eq!(sf(&["realize", "--manifest", &m, "--random", "--seed", "11", "-o", &p(&dir, out)]), 0);
    }
    assert_eq!(fs::read(dir.path().join("q1.json")).unwrap(), fs::read(dir.path().join("q2.json")).unwrap());
    assert_eq!(sf(&["realize", "--manifest", &m]), 1);
    assert_eq!(sf(&["realize", "--manifest", &m, "--choices", "0xfffffffffff"]), 1);
    assert_eq!(sf(&["count", "--manifest", &m]), 0);
}

#[test]
fn exhaustive_count() {
    let dir = TempDir::new().unwrap();
    assert_eq!(sf(&["generate", "aztec", "--k", "3", "--l", "1", "-o", &p(&dir, "a.json")]), 0);
    assert_eq!(sf(&["count", "--manifest", &p(&dir, "a.manifest.json"), "--exhaustive"]), 0);
}

#[test]
fn lift_hull_degree3_export() {
    let dir = TempDir::new().unwrap();
    let lift = p(&dir, "lift.json");
    assert_eq!(sf(&["lift", "aztec", "--k", "3", "--l", "3", "-o", &lift]), 0);
    assert_eq!(sf(&["verify", "regular", &lift]), 0);
    let hull = p(&dir, "hull.json");
    assert_eq!(sf(&["hull", "--input", &lift, "--apex", "auto", "-o", &hull]), 0);
    let facets: serde_json::Value = serde_json::from_str(&fs::read_to_string(&hull).unwrap()).unwrap();
    let bip = facets.as_array().unwrap().iter().filter(|f| f["kind"] == "bipyramid").count();
    assert_eq!(bip, 36);
    assert_eq!(sf(&["hull", "--input", &lift, "--apex", "sideways"]), 1);
    let off = p(&dir, "lift.off");
    assert_eq!(sf(&["export", "off", "--input", &lift, "-o", &off]), 0);
    assert!(fs::read_to_string(&off).unwrap().starts_with("OFF\n"));
    assert!(Path::new(&format!("{off}.json")).exists());

    let lift5 = p(&dir, "lift5.json");
    assert_eq!(sf(&["--jobs", "1", "lift", "aztec", "--k", "5", "--l", "1", "-o", &lift5]), 0);
    let raised = p(&dir, "raised.json");
    assert_eq!(sf(&["degree3", "--input", &lift5, "-o", &raised]), 0);
    assert_eq!(sf(&["verify", "regular", &raised]), 0);
}

#[test]
fn fill_from_files() {
    let dir = TempDir::new().unwrap();
    let (host, _) = join_of_paths(&[5, 5]).unwrap();
    let host = std::sync::Arc::new(host);
    let band = diagonal_band(&GridBox::from_path_lengths(&[5, 5]).unwrap(), 4, 6).unwrap();
    let ball = sphereforge::carvefill::BallInComplex::new(host.clone(), band.region.simplices()).unwrap();
    let (members, _) = sphereforge::carvefill::greedy_compatible_subfamily(&ball, &boundary_members(&band.region));
    let fam = sphereforge::carvefill::CompatibleFamily::new(ball, members).unwrap();
    fs::write(dir.path().join("host.json"), simplicial_to_json(&host)).unwrap();
    fs::write(dir.path().join("holes.json"), holes_to_json(&[(0, fam)])).unwrap();
    let m = p(&dir, "m.manifest.json");
    assert_eq!(sf(&["fill", "--input", &p(&dir, "host.json"), "--holes", &p(&dir, "holes.json"), "-o", &m]), 0);
    assert_eq!(sf(&["realize", "--manifest", &m, "--random"]), 0);
    assert_eq!(sf(&["verify", "ball", &p(&dir, "m.realized.json"), "--dim", "3"]), 0);

    let order = shelling_order_band(&band).unwrap();
    let bx = sphereforge::complex::SimplicialComplex::new(band.region.simplices()).unwrap();
    fs::write(dir.path().join("band.json"), simplicial_to_json(&bx)).unwrap();
    fs::write(dir.path().join("order.json"), serde_json::to_string(&order).unwrap()).unwrap();
    assert_eq!(sf(&["verify", "shelling", &p(&dir, "band.json"), &p(&dir, "order.json")]), 0);
    let reversed = ShellingOrder { order: order.order.iter().rev().cloned().collect() };
    fs::write(dir.path().join("rev.json"), serde_json::to_string(&reversed).unwrap()).unwrap();
    let code = sf(&["verify", "shelling", &p(&dir, "band.json"), &p(&dir, "rev.json")]);
    assert!(code == 0 || code == 2);
}

#[test]
fn malformed_input() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.json"), "{\"dim\": 3, \"cells\": [").unwrap();
    assert_eq!(sf(&["verify", "sphere", &p(&dir, "bad.json")]), 1);
    fs::write(dir.path().join("label.json"), "{\"dim\":0,\"cells\":[{\"t\":\"s\",\"v\":[\"q:1\"]}]}").unwrap();
    assert_eq!(sf(&["verify", "sphere", &p(&dir, "label.json")]), 1);
    assert_eq!(sf(&["generate", "cyclic", "--n", "1", "-o", &p(&dir, "c.json")]), 1);
}
