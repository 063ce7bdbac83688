//! Command-line entry point. Exit codes: 0 success, 1 usage or input
//! error, 2 verification failure.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde::Serialize;

use crate::carvefill::{carve_and_fill, realize, FillManifest};
use crate::complex::{boundary_complex, SimplicialComplex};
use crate::constructions::{build_aztec, build_aztec_highd, build_cyclic, build_highd, build_holes3, build_holes4, ConstructionReport};
use crate::error::{Error, Result};
use crate::geometry::{
    aztec_configuration, convex_hull_brute, count_degree3_edges, detect_bipyramid_facets, find_raise_delta, hull_with_apex, to_off,
    verify_regular, AztecConfiguration, FacetKind, HullFacet, Subdivision,
};
use crate::io::{
    format_choices, holes_from_json, lift_from_json, lift_to_json, manifest_from_json, manifest_to_json, parse_choices, poly_to_json,
    simplicial_from_json, simplicial_to_json, LiftFile,
};
use crate::rng::random_choices;
use crate::simplex::Simplex;
use crate::topology::{certify, verify_shelling, ShellingOrder, TopologyKind};
use crate::vertex::VertexId;
use crate::Rational;

#[derive(Parser, Debug)]
#[command(name = "sphereforge", version, about = "Carve-and-fill constructions of polyhedral spheres")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "SPHEREFORGE_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build a construction and write complex, report, manifest and one realization.
    Generate(GenerateArgs),
    /// Carve and fill holes of a simplicial complex.
    Fill {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        holes: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Triangulate every free cell of a manifest.
    Realize {
        #[arg(long)]
        manifest: PathBuf,
        /// Hex bitstring; bit i (least significant first) is the choice for free cell i.
        #[arg(long, conflicts_with = "random")]
        choices: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw the choices from the seeded generator.
        #[arg(long)]
        random: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Convex hull of a lifted configuration, with bipyramid facets counted.
    Hull {
        #[arg(long)]
        input: PathBuf,
        /// `auto` adds a closing apex above the configuration, `none` does not.
        #[arg(long, default_value = "auto")]
        apex: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Raise the hole centers of a lift and count edges of degree three.
    Degree3 {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count the realizations of a manifest.
    Count {
        #[arg(long)]
        manifest: PathBuf,
        /// Enumerate every realization and check that they are distinct (at most 16 free cells).
        #[arg(long)]
        exhaustive: bool,
    },
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Holes4,
    Holes3,
    Aztec,
    Cyclic,
    Highd,
    AztecHd,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    d: Option<usize>,
    /// Complex path; siblings `.report.json`, `.manifest.json` and `.realized.json` share its stem.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Seed for the realization written next to the complex.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip certifying the realization.
    #[arg(long)]
    no_check: bool,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    Sphere {
        file: PathBuf,
        #[arg(long)]
        dim: Option<isize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    Ball {
        file: PathBuf,
        #[arg(long)]
        dim: Option<isize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    Shelling {
        file: PathBuf,
        order: PathBuf,
    },
    /// Check that the heights of a lift file induce its cells.
    Regular {
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum LiftCmd {
    /// Certified lift of the Aztec-hole configuration.
    Aztec {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(short, long, default_value = "lift.json")]
        output: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ExportCmd {
    /// Lower cells of a lift as OFF, with the lift file copied alongside.
    Off {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

enum Outcome {
    Pass,
    Fail,
}

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(cli.cmd)) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InternalInvariantViolation(_) | Error::LiftConstructionFailed(_) | Error::EpsSearchExhausted(_) | Error::DeltaTooLarge(_) => 2,
        _ => 1,
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn write(p: &Path, s: &str) -> Result<()> {
    fs::write(p, s).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn pretty<S: Serialize>(x: &S) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

/// `dir/name.json` ↦ `dir/name.<suffix>`.
fn sibling(p: &Path, suffix: &str) -> PathBuf {
    let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".json").unwrap_or(&name);
    let stem = stem.strip_suffix(".manifest").unwrap_or(stem);
    p.with_file_name(format!("{stem}.{suffix}"))
}

fn dispatch(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Generate(a) => generate(a),
        Cmd::Fill { input, holes, output } => {
            let host = Arc::new(simplicial_from_json(&read(&input)?)?);
            let holes = holes_from_json(&host, &read(&holes)?)?;
            let m = carve_and_fill(&host, &holes)?;
            write(&output, &manifest_to_json(&m))?;
            println!("fill: {} holes, {} free cells, {} simplices", holes.len(), m.num_free_cells(), m.result.simplex_cells().len());
            Ok(Outcome::Pass)
        }
        Cmd::Realize { manifest, choices, seed, random, output } => {
            let m = manifest_from_json(&read(&manifest)?)?;
            let bits = match (choices, random) {
                (Some(c), _) => parse_choices(&c, m.num_free_cells())?,
                (None, true) => random_choices(seed, m.num_free_cells()),
                (None, false) => return Err(Error::InputParseError("give --choices or --random".into())),
            };
            let x = realize(&m, &bits)?;
            let out = output.unwrap_or_else(|| sibling(&manifest, "realized.json"));
            write(&out, &simplicial_to_json(&x))?;
            println!("realize: {} facets, choices {}", x.num_facets(), format_choices(&bits));
            Ok(Outcome::Pass)
        }
        Cmd::Verify(v) => verify(v),
        Cmd::Lift(LiftCmd::Aztec { k, l, output }) => {
            let f = lift_aztec(k, l)?;
            write(&output, &lift_to_json(&f))?;
            println!("lift aztec k={k} l={l}: eps 2^-{}, {} points, {} cells, regular", f.t, f.lifted.points.len(), f.cells.cells.len());
            Ok(Outcome::Pass)
        }
        Cmd::Hull { input, apex, output } => hull(&input, &apex, output.as_deref()),
        Cmd::Degree3 { input, output } => degree3(&input, output.as_deref()),
        Cmd::Count { manifest, exhaustive } => count(&manifest, exhaustive),
        Cmd::Export(ExportCmd::Off { input, output }) => {
            let f = lift_from_json(&read(&input)?)?;
            let index: std::collections::BTreeMap<VertexId, usize> = f.lifted.points.iter().enumerate().map(|(i, (v, _))| (*v, i)).collect();
            let pts: Vec<_> = f.lifted.points.iter().map(|(_, p)| p.clone()).collect();
            let cells: Vec<Vec<usize>> = f.cells.cells.iter().map(|c| c.iter().map(|v| index[v]).collect()).collect();
            write(&output, &to_off(&pts, &cells))?;
            let mut sidecar = output.clone().into_os_string();
            sidecar.push(".json");
            write(Path::new(&sidecar), &lift_to_json(&f))?;
            println!("export off: {} points, {} cells", pts.len(), cells.len());
            Ok(Outcome::Pass)
        }
    }
}

fn build(a: &GenerateArgs) -> Result<ConstructionReport> {
    match a.kind {
        Kind::Holes4 => build_holes4(a.n.unwrap_or(9), a.m.or(a.n).unwrap_or(9)),
        Kind::Holes3 => build_holes3(a.n.unwrap_or(9), a.m.or(a.n).unwrap_or(9)),
        Kind::Aztec => build_aztec(a.k.unwrap_or(3), a.l.unwrap_or(1)),
        Kind::Cyclic => build_cyclic(a.n.unwrap_or(3)),
        Kind::Highd => build_highd(a.d.unwrap_or(3), a.n.unwrap_or(8)),
        Kind::AztecHd => build_aztec_highd(a.d.unwrap_or(3), a.k.unwrap_or(3), a.l.unwrap_or(1)),
    }
}

fn generate(a: GenerateArgs) -> Result<Outcome> {
    let r = build(&a)?;
    let out = a.output.clone().unwrap_or_else(|| {
        let name = format!("{:?}", a.kind).to_lowercase();
        PathBuf::from(format!("{name}.json"))
    });
    let bits = random_choices(a.seed, r.manifest.num_free_cells());
    let realized = realize(&r.manifest, &bits)?;
    write(&out, &poly_to_json(&r.manifest.result))?;
    write(&sibling(&out, "report.json"), &pretty(&r))?;
    write(&sibling(&out, "manifest.json"), &manifest_to_json(&r.manifest))?;
    write(&sibling(&out, "realized.json"), &simplicial_to_json(&realized))?;
    let head = format!(
        "{}: {} free cells, {} simplices, {} vertices",
        r.construction, r.free_cell_count, r.simplex_cell_count, r.vertex_count
    );
    if a.no_check {
        println!("{head}, unchecked");
        return Ok(Outcome::Pass);
    }
    let cert = certify(&realized);
    if cert.kind == r.expected {
        println!("{head}, realization certified {:?}", cert.kind);
        Ok(Outcome::Pass)
    } else {
        println!("{head}, realization is {:?}, expected {:?}", cert.kind, r.expected);
        Ok(Outcome::Fail)
    }
}

fn verify(v: VerifyCmd) -> Result<Outcome> {
    match v {
        VerifyCmd::Sphere { file, dim, report } => verify_kind(&file, dim, report.as_deref(), true),
        VerifyCmd::Ball { file, dim, report } => verify_kind(&file, dim, report.as_deref(), false),
        VerifyCmd::Shelling { file, order } => {
            let x = simplicial_from_json(&read(&file)?)?;
            let o: ShellingOrder = serde_json::from_str(&read(&order)?)?;
            let ok = verify_shelling(&x, &o)?;
            println!("shelling: {} of {} facets {}", o.order.len(), x.num_facets(), if ok { "ok" } else { "FAILED" });
            Ok(if ok { Outcome::Pass } else { Outcome::Fail })
        }
        VerifyCmd::Regular { file } => {
            let f = lift_from_json(&read(&file)?)?;
            let ok = verify_regular(&f.lifted.points, &f.lifted.heights, &f.cells)?;
            println!("regular: {} cells {}", f.cells.cells.len(), if ok { "ok" } else { "FAILED" });
            Ok(if ok { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn verify_kind(file: &Path, dim: Option<isize>, report: Option<&Path>, sphere: bool) -> Result<Outcome> {
    let x = simplicial_from_json(&read(file)?)?;
    let cert = certify(&x);
    let ok = match cert.kind {
        TopologyKind::Sphere(d) => sphere && dim.is_none_or(|e| e == d),
        TopologyKind::Ball(d) => !sphere && dim.is_none_or(|e| e == d),
        TopologyKind::Neither => false,
    };
    if let Some(p) = report {
        write(p, &pretty(&cert))?;
    }
    let what = if sphere { "sphere" } else { "ball" };
    let status = if ok { "ok" } else { "FAILED" };
    println!("{what}: {status}, {:?}, {} facets, betti {:?}", cert.kind, x.num_facets(), cert.evidence.betti);
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

/// Cells of the Aztec manifest with the certified perturbation that induces them.
pub fn lift_aztec(k: u32, l: u32) -> Result<LiftFile> {
    let r = build_aztec(k, l)?;
    let cfg = aztec_configuration::<Rational>(k, l)?;
    let (_, t, lifted) = cfg.certify(&r.manifest)?;
    Ok(LiftFile { k, l, t, lifted, centers: cfg.centers.clone(), cells: AztecConfiguration::<Rational>::target(&r.manifest) })
}

#[derive(Serialize)]
struct FacetRecord {
    vertices: BTreeSet<VertexId>,
    kind: FacetKind,
    lower: bool,
}

fn hull(input: &Path, apex: &str, output: Option<&Path>) -> Result<Outcome> {
    let f = lift_from_json(&read(input)?)?;
    let pts = f.lifted.lifted_points();
    let facets: Vec<HullFacet<VertexId, Rational>> = match apex {
        "auto" => hull_with_apex(&pts, VertexId::ConeApex)?.1,
        "none" => convex_hull_brute(&pts)?,
        other => return Err(Error::InputParseError(format!("--apex must be auto or none, got {other:?}"))),
    };
    let kinds = detect_bipyramid_facets(&facets);
    let last = pts.first().map_or(0, |(_, p)| p.dim()) - 1;
    let records: Vec<FacetRecord> = facets
        .iter()
        .zip(&kinds)
        .map(|(h, k)| FacetRecord { vertices: h.vertices.clone(), kind: *k, lower: h.normal[last].is_negative() })
        .collect();
    let lower: BTreeSet<&BTreeSet<VertexId>> = records.iter().filter(|r| r.lower).map(|r| &r.vertices).collect();
    let cells: BTreeSet<&BTreeSet<VertexId>> = f.cells.cells.iter().collect();
    let n = |k: FacetKind| kinds.iter().filter(|x| **x == k).count();
    if let Some(p) = output {
        write(p, &pretty(&records))?;
    }
    let ok = lower == cells;
    println!(
        "hull: {} facets, bipyramids: {}, simplices: {}, other: {}, lower facets {} cells",
        facets.len(),
        n(FacetKind::Bipyramid),
        n(FacetKind::Simplex),
        n(FacetKind::Other),
        if ok { "match" } else { "DO NOT match" }
    );
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

/// The ball with its boundary coned off.
pub fn close_ball(ball: &SimplicialComplex) -> Result<SimplicialComplex> {
    let bd = boundary_complex(ball)?;
    let cone = bd.facets().iter().map(|r| r.with(VertexId::ConeApex));
    SimplicialComplex::new(ball.facets().iter().cloned().chain(cone))
}

fn degree3(input: &Path, output: Option<&Path>) -> Result<Outcome> {
    let f = lift_from_json(&read(input)?)?;
    let m: FillManifest = build_aztec(f.k, f.l)?.manifest;
    let (raised, ball, t) = find_raise_delta(&f.lifted, &f.centers, &m)?;
    let edges = count_degree3_edges(&ball)?;
    let cert = certify(&close_ball(&ball)?);
    let guaranteed = (2 * f.k as usize).saturating_sub(6) * (f.l as usize).pow(2);
    if let Some(p) = output {
        let cells = Subdivision { cells: ball.facets().iter().map(|s: &Simplex| s.verts().iter().copied().collect()).collect() };
        write(p, &lift_to_json(&LiftFile { lifted: raised, cells, ..f.clone() }))?;
    }
    let ok = cert.is_sphere(3) && edges >= guaranteed;
    println!(
        "degree3: delta 2^-{t}, {} simplices, degree-3 edges: {edges} (at least {guaranteed}), closed {:?}",
        ball.num_facets(),
        cert.kind
    );
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn count(manifest: &Path, exhaustive: bool) -> Result<Outcome> {
    let m = manifest_from_json(&read(manifest)?)?;
    let b = m.num_free_cells();
    if !exhaustive {
        println!("count: {b} free cells, 2^{b} realizations");
        return Ok(Outcome::Pass);
    }
    if b > 16 {
        return Err(Error::DegenerateInput(format!("{b} free cells is too many to enumerate")));
    }
    let mut seen = BTreeSet::new();
    for mask in 0u32..1 << b {
        let bits: Vec<bool> = (0..b).map(|i| mask >> i & 1 == 1).collect();
        seen.insert(realize(&m, &bits)?.into_facets());
    }
    let ok = seen.len() == 1 << b;
    println!("count: {b} free cells, {} distinct realizations of {}", seen.len(), 1u64 << b);
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling(Path::new("out/s.json"), "report.json"), PathBuf::from("out/s.report.json"));
        assert_eq!(sibling(Path::new("m.manifest.json"), "realized.json"), PathBuf::from("m.realized.json"));
        assert_eq!(sibling(Path::new("plain"), "realized.json"), PathBuf::from("plain.realized.json"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["sphereforge", "frobnicate"]), 1);
        assert_eq!(run(["sphereforge", "generate", "holes4", "--n", "x"]), 1);
        assert_eq!(run(["sphereforge", "--help"]), 0);
        assert_eq!(run(["sphereforge", "verify", "sphere", "/nonexistent/x.json"]), 1);
    }
}
