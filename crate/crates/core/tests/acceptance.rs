//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use latvor::catalog::{self, NamedLattice};
use latvor::cvp::relevant_vectors;
use latvor::delone::{enumerate_orbits, total_voronoi_vertices, DeloneOptions, OrbitSet};
use latvor::graphlat::{
    build_lattice, connected_graphs, count_acyclic_orientations, covering_radius_cube, elementary_vectors, Graph,
    CUBE_EDGE_LIMIT, ELEMENTARY_EDGE_LIMIT,
};
use latvor::linalg::{qvec, vscale};
use latvor::polyhedra::{dd_full, VPolytope};
use latvor::quantizer::{moments_by_triangulation, moments_symmetric, quantizer_constant};
use latvor::symmetry::automorphism_group;
use latvor::{q, GramForm, QVector, Result};

const DENSITY_TOL: f64 = 1e-5;
const CUT5_DENSITY_TOL: f64 = 1e-4;
const GRAPH_SUITE_BUDGET: Duration = Duration::from_secs(600);
const CAP: usize = 1 << 22;

fn orbits_of(l: &NamedLattice) -> Result<OrbitSet> {
    enumerate_orbits(&l.gram, &l.group()?, &DeloneOptions::default())
}

fn density_check(l: &NamedLattice, orbits: usize, density: f64, tol: f64) -> Result<(bool, String)> {
    let o = orbits_of(l)?;
    let d = o.covering_density();
    let ok = o.len() == orbits && (d - density).abs() <= tol;
    Ok((ok, format!("{} orbits {} (want {orbits}), density {d:.7} (want {density} ± {tol:e})", l.name, o.len())))
}

fn criterion_1() -> Result<(bool, String)> {
    let (a, ma) = density_check(&catalog::cut(3)?, 2, 2.09439, DENSITY_TOL)?;
    let (b, mb) = density_check(&catalog::cut(4)?, 4, 5.16771, DENSITY_TOL)?;
    Ok((a && b, format!("{ma}; {mb}")))
}

fn criterion_2() -> Result<(bool, String)> {
    density_check(&catalog::cut(5)?, 12, 40.80262, CUT5_DENSITY_TOL)
}

fn criterion_3() -> Result<(bool, String)> {
    let (a, ma) = density_check(&catalog::anr(9, 5)?, 5, 4.340184, DENSITY_TOL)?;
    let (b, mb) = density_check(&catalog::anr(9, 2)?, 6, 18.543333, DENSITY_TOL)?;
    Ok((a && b, format!("{ma}; {mb}")))
}

fn criterion_4() -> Result<(bool, String)> {
    let mut ok = true;
    for n in 1..=6 {
        let r = quantizer_constant(&orbits_of(&catalog::zn(n)?)?, CAP)?;
        ok &= r.second_moment == q(n as i64, 12) && r.gram_det == q(1, 1) && r.exact_constant() == Some(q(1, 12));
    }
    let r = quantizer_constant(&orbits_of(&catalog::lambda9()?)?, CAP)?;
    let g = r.exact_constant();
    ok &= g == Some(q(151301, 2099520));
    Ok((ok, format!("Z1..Z6 give 1/12; Lambda9 gives {}", g.map_or("irrational".into(), |g| g.to_string()))))
}

struct GraphStats {
    graphs: usize,
    count_mismatch: Vec<String>,
    relevant_mismatch: Vec<String>,
    elapsed: Duration,
}

fn graph_suite() -> Result<GraphStats> {
    let start = Instant::now();
    let graphs = connected_graphs(8);
    let mut stats = GraphStats { graphs: graphs.len(), count_mismatch: vec![], relevant_mismatch: vec![], elapsed: Duration::ZERO };
    for g in &graphs {
        let l = build_lattice(g)?;
        let o = enumerate_orbits(&l.gram, &automorphism_group(&l.gram)?, &DeloneOptions::default())?;
        if total_voronoi_vertices(&o.voronoi_vertex_orbits()) != count_acyclic_orientations(g) {
            stats.count_mismatch.push(g.to_text());
        }
        let mut elem: Vec<_> =
            elementary_vectors(g, ELEMENTARY_EDGE_LIMIT)?.iter().filter_map(|x| l.coordinates(x)).collect();
        elem.sort();
        if elem != relevant_vectors(&l.gram)? {
            stats.relevant_mismatch.push(g.to_text());
        }
    }
    stats.elapsed = start.elapsed();
    Ok(stats)
}

/// Catalog lattices of rank at most `max` and their duals.
fn small_catalog(max: usize) -> Result<Vec<NamedLattice>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.push(catalog::zn(n)?);
        out.push(catalog::an(n)?);
        for r in 2..=n + 1 {
            if (n + 1) % r == 0 {
                out.push(catalog::anr(n, r)?);
            }
        }
        if n >= 2 {
            out.push(catalog::dn(n)?);
        }
        if n >= 2 && n % 2 == 0 {
            out.push(catalog::dn_plus(n)?);
        }
    }
    if max >= 3 {
        out.push(catalog::cut(3)?);
    }
    let duals: Vec<NamedLattice> = out.iter().map(NamedLattice::dual).collect();
    out.extend(duals);
    Ok(out)
}

fn criterion_7() -> Result<(bool, String)> {
    let lats = small_catalog(5)?;
    let mut bad = Vec::new();
    for l in &lats {
        if orbits_of(l)?.tiling_sum_sq() != l.gram.determinant() {
            bad.push(l.name.clone());
        }
    }
    Ok((bad.is_empty(), format!("{} lattices, mismatches {:?}", lats.len(), bad)))
}

fn test_graphs_up_to_12_edges() -> Result<Vec<Graph>> {
    let mut out = connected_graphs(8);
    out.push(Graph::complete(5));
    out.push(Graph::cycle(12));
    let prism = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)];
    out.push(Graph::new(6, &prism)?);
    let cube = [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7), (4, 7), (0, 4), (1, 5), (2, 6), (3, 7)];
    out.push(Graph::new(8, &cube)?);
    let k34: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..7).map(move |b| (a, b))).collect();
    out.push(Graph::new(7, &k34)?);
    let mut wheel: Vec<(usize, usize)> = (1..=5).map(|i| (0, i)).collect();
    wheel.extend((1..=5).map(|i| (i, i % 5 + 1)));
    out.push(Graph::new(6, &wheel)?);
    Ok(out)
}

fn criterion_8() -> Result<(bool, String)> {
    let lats = small_catalog(4)?;
    let mut bad = Vec::new();
    for l in &lats {
        let o = orbits_of(l)?;
        let cell = VPolytope::new(o.voronoi_vertices(CAP)?)?;
        if moments_symmetric(&cell, &o.group)? != moments_by_triangulation(&cell)? {
            bad.push(l.name.clone());
        }
    }
    let graphs = test_graphs_up_to_12_edges()?;
    for g in &graphs {
        let l = build_lattice(g)?;
        let o = enumerate_orbits(&l.gram, &automorphism_group(&l.gram)?, &DeloneOptions::default())?;
        if o.covering_radius_sq() != covering_radius_cube(g, CUBE_EDGE_LIMIT)? {
            bad.push(g.to_text());
        }
    }
    Ok((bad.is_empty(), format!("{} lattices, {} graphs, mismatches {:?}", lats.len(), graphs.len(), bad)))
}

/// Vertices of `{x : 2xᵀgv ≤ vᵀgv}` over the relevant vectors `v`, as the
/// facets of the polar body.
fn halfspace_vertices(g: &GramForm) -> Result<Vec<QVector>> {
    let polar: Vec<QVector> = relevant_vectors(g)?
        .iter()
        .map(|v| {
            let v = qvec(v);
            let a = vscale(&g.matrix().mul_vec(&v), &q(2, 1));
            vscale(&a, &g.norm(&v).recip())
        })
        .collect();
    let mut out: Vec<QVector> = dd_full(&polar).into_iter().map(|h| vscale(&h.normal, &h.offset.recip())).collect();
    out.sort();
    Ok(out)
}

fn criterion_9() -> Result<(bool, String)> {
    let lats = small_catalog(4)?;
    let mut bad = Vec::new();
    for l in &lats {
        if orbits_of(l)?.voronoi_vertices(CAP)? != halfspace_vertices(&l.gram)? {
            bad.push(l.name.clone());
        }
    }
    Ok((bad.is_empty(), format!("{} lattices, mismatches {:?}", lats.len(), bad)))
}

fn json_with_threads(threads: usize) -> Result<String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(|| {
        let mut text = String::new();
        for l in [catalog::cut(4)?, catalog::anr(5, 2)?, catalog::dn(4)?.dual()] {
            let o = enumerate_orbits(&l.gram, &l.group()?, &DeloneOptions { seed: 11, ..DeloneOptions::default() })?;
            text += &serde_json::to_string(&o.report()).expect("serializable");
            text += &serde_json::to_string(&quantizer_constant(&o, CAP)?).expect("serializable");
        }
        Ok(text)
    })
}

fn criterion_10() -> Result<(bool, String)> {
    let one = json_with_threads(1)?;
    let four = json_with_threads(4)?;
    let eight = json_with_threads(8)?;
    Ok((one == four && one == eight, format!("{} bytes compared across 1, 4 and 8 threads", one.len())))
}

fn report(id: &str, start: Instant, r: Result<(bool, String)>) -> bool {
    let (ok, msg) = r.unwrap_or_else(|e| (false, format!("error: {e}")));
    println!("{} criterion {id}: {msg} [{:.1?}]", if ok { "PASS" } else { "FAIL" }, start.elapsed());
    ok
}

fn main() {
    let mut all = true;
    let criteria: [(&str, fn() -> Result<(bool, String)>); 4] =
        [("1", criterion_1), ("2", criterion_2), ("3", criterion_3), ("4", criterion_4)];
    for (id, f) in criteria {
        let t = Instant::now();
        all &= report(id, t, f());
    }

    let t = Instant::now();
    let suite = graph_suite();
    let (r5, r6) = match &suite {
        Ok(s) => (
            Ok((
                s.count_mismatch.is_empty() && s.elapsed < GRAPH_SUITE_BUDGET,
                format!("{} graphs, count mismatches {:?}, {:.1?} of {:?}", s.graphs, s.count_mismatch, s.elapsed, GRAPH_SUITE_BUDGET),
            )),
            Ok((s.relevant_mismatch.is_empty(), format!("{} graphs, mismatches {:?}", s.graphs, s.relevant_mismatch))),
        ),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    all &= report("5", t, r5);
    all &= report("6", t, r6);

    let rest: [(&str, fn() -> Result<(bool, String)>); 4] =
        [("7", criterion_7), ("8", criterion_8), ("9", criterion_9), ("10", criterion_10)];
    for (id, f) in rest {
        let t = Instant::now();
        all &= report(id, t, f());
    }
    if !all {
        std::process::exit(1);
    }
}
