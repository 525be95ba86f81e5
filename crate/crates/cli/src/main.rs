use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latvor::catalog::{self, NamedLattice};
use latvor::cvp::relevant_vectors;
use latvor::delone::{enumerate_orbits, packing_radius_sq, total_voronoi_vertices, DeloneOptions, OrbitSet};
use latvor::graphlat::{build_lattice, count_acyclic_orientations, covering_radius_cube, Graph, CUBE_EDGE_LIMIT};
use latvor::quantizer::quantizer_constant;
use latvor::symmetry::{automorphism_group, group_from_generators, parse_group_file, MatrixGroup, DEFAULT_ORBIT_CAP};
use latvor::{Error, GramForm};
use serde_json::json;

#[derive(Parser)]
#[command(name = "latvor", version, about = "Delone cells, covering radii and quantizer constants of lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate Delone cell orbits.
    Delone(LatticeArgs),
    /// Covering radius and density only.
    Cover(LatticeArgs),
    /// Exact second moment and normalized quantizer constant.
    Quantize(LatticeArgs),
    /// Check the lattice of a graph against its acyclic orientations.
    Graphlat(GraphArgs),
    /// List the Voronoi-relevant vectors.
    Relvec(LatticeArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
    orbit_cap: usize,
}

#[derive(Args)]
struct LatticeArgs {
    /// Gram matrix file: rows of rationals.
    #[arg(long, conflicts_with = "lattice", required_unless_present = "lattice")]
    gram: Option<PathBuf>,
    /// Catalog name such as Zn, An, Anr, Dn, Dnplus, CUTn, E8, Lambda9, dual-....
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    param: Option<usize>,
    /// Symmetry generators, one integer matrix per blank-line separated block.
    #[arg(long)]
    group: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file: "n m" then one "v w" line per edge, 1-based.
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(args: &LatticeArgs) -> std::result::Result<(NamedLattice, MatrixGroup), Failure> {
    let lat = match (&args.gram, &args.lattice) {
        (Some(path), _) => {
            let gram = GramForm::parse(&read(path)?)?;
            NamedLattice { name: path.display().to_string(), gram, known_group: None }
        }
        (None, Some(name)) => catalog::make(name, args.dim, args.param)?,
        (None, None) => return Err(Failure::Input("one of --gram or --lattice is required".into())),
    };
    let group = match &args.group {
        Some(path) => group_from_generators(&lat.gram, &parse_group_file(&read(path)?, lat.gram.dim())?)?,
        None => lat.group()?,
    };
    Ok((lat, group))
}

fn options(c: &Common) -> DeloneOptions {
    DeloneOptions { seed: c.seed, orbit_cap: c.orbit_cap }
}

/// Floats in tables are cut, not rounded, after six decimals.
fn trunc6(x: f64) -> String {
    format!("{:.6}", (x * 1e6).floor() / 1e6)
}

fn emit(value: &impl serde::Serialize) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Input(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn enumerate(args: &LatticeArgs) -> std::result::Result<(NamedLattice, OrbitSet), Failure> {
    let (lat, group) = load(args)?;
    let orbits = enumerate_orbits(&lat.gram, &group, &options(&args.common))?;
    Ok((lat, orbits))
}

fn cmd_delone(args: &LatticeArgs) -> Outcome {
    let (lat, orbits) = enumerate(args)?;
    if args.common.json {
        return emit(&orbits.report());
    }
    println!("lattice {}  rank {}  det {}  group order {}", lat.name, orbits.dim(), lat.gram.determinant(), orbits.group.order());
    println!("orbits {}", orbits.len());
    println!("{:>5} {:>9} {:>12} {:>14}  radius^2", "orbit", "vertices", "stabilizer", "orbit size");
    for (i, r) in orbits.representatives.iter().enumerate() {
        println!(
            "{:>5} {:>9} {:>12} {:>14}  {}",
            i + 1,
            r.cell.vertices.len(),
            r.stabilizer_order(),
            r.orbit_size,
            r.cell.sq_radius
        );
    }
    println!("covering radius^2 {}", orbits.covering_radius_sq());
    println!("covering density {}", trunc6(orbits.covering_density()));
    Ok(())
}

fn cmd_cover(args: &LatticeArgs) -> Outcome {
    let (lat, orbits) = enumerate(args)?;
    let packing = packing_radius_sq(&lat.gram);
    if args.common.json {
        return emit(&json!({
            "n": orbits.dim(),
            "gram_det": lat.gram.determinant(),
            "orbit_count": orbits.len(),
            "covering_radius_sq": orbits.covering_radius_sq(),
            "covering_density_float": orbits.report().covering_density_float,
            "packing_radius_sq": packing,
        }));
    }
    println!("lattice {}  rank {}  orbits {}", lat.name, orbits.dim(), orbits.len());
    println!("covering radius^2 {}", orbits.covering_radius_sq());
    println!("covering density {}", trunc6(orbits.covering_density()));
    println!("packing radius^2 {}", packing);
    Ok(())
}

fn cmd_quantize(args: &LatticeArgs) -> Outcome {
    let (lat, orbits) = enumerate(args)?;
    let result = quantizer_constant(&orbits, args.common.orbit_cap)?;
    if args.common.json {
        return emit(&result);
    }
    println!("lattice {}  rank {}  Voronoi vertices {}", lat.name, result.dimension, result.cell_vertex_count);
    println!("second moment {}", result.second_moment);
    println!("gram det {}", result.gram_det);
    match result.exact_constant() {
        Some(g) => println!("G = {} ~ {}", g, trunc6(result.g_float)),
        None => println!("G ~ {}", trunc6(result.g_float)),
    }
    Ok(())
}

fn cmd_graphlat(args: &GraphArgs) -> Outcome {
    let graph = Graph::parse(&read(&args.graph)?)?;
    let lat = build_lattice(&graph)?;
    let group = automorphism_group(&lat.gram)?;
    let orbits = enumerate_orbits(&lat.gram, &group, &options(&args.common))?;
    let vertices = total_voronoi_vertices(&orbits.voronoi_vertex_orbits());
    let orientations = count_acyclic_orientations(&graph);
    let mu_delone = orbits.covering_radius_sq();
    let mu_cube = covering_radius_cube(&graph, CUBE_EDGE_LIMIT)?;
    let pass = vertices == orientations && mu_delone == mu_cube;
    if args.common.json {
        return emit(&json!({
            "rank": lat.rank(),
            "voronoi_vertices": vertices.to_string(),
            "acyclic_orientations": orientations.to_string(),
            "covering_radius_sq_delone": mu_delone,
            "covering_radius_sq_cube": mu_cube,
            "pass": pass,
        }));
    }
    println!("rank {}", lat.rank());
    println!("Voronoi vertices {}", vertices);
    println!("acyclic orientations {}", orientations);
    println!("covering radius^2 {} (Delone) {} (cube)", mu_delone, mu_cube);
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(())
}

fn cmd_relvec(args: &LatticeArgs) -> Outcome {
    let (lat, _) = load(args)?;
    let vecs = relevant_vectors(&lat.gram)?;
    if args.common.json {
        return emit(&json!({ "n": lat.gram.dim(), "count": vecs.len(), "vectors": vecs }));
    }
    println!("relevant vectors {}", vecs.len());
    for v in &vecs {
        println!("{}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let threads = match &cli.command {
        Command::Delone(a) | Command::Cover(a) | Command::Quantize(a) | Command::Relvec(a) => a.common.threads,
        Command::Graphlat(a) => a.common.threads,
    };
    if let Some(k) = threads {
        if k == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    let outcome = match &cli.command {
        Command::Delone(a) => cmd_delone(a),
        Command::Cover(a) => cmd_cover(a),
        Command::Quantize(a) => cmd_quantize(a),
        Command::Graphlat(a) => cmd_graphlat(a),
        Command::Relvec(a) => cmd_relvec(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
