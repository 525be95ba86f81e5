use latvor::cvp::relevant_vectors;
use latvor::delone::{enumerate_orbits, total_voronoi_vertices, DeloneOptions};
use latvor::graphlat::*;
use latvor::symmetry::automorphism_group;
use num_bigint::BigUint;

fn check(g: &Graph) {
    let l = build_lattice(g).unwrap();
    let group = automorphism_group(&l.gram).unwrap();
    let orbits = enumerate_orbits(&l.gram, &group, &DeloneOptions::default()).unwrap();
    let count = total_voronoi_vertices(&orbits.voronoi_vertex_orbits());
    assert_eq!(count, count_acyclic_orientations(g), "{}", g.to_text());
    assert_eq!(orbits.covering_radius_sq(), covering_radius_cube(g, CUBE_EDGE_LIMIT).unwrap(), "{}", g.to_text());
    assert_eq!(orbits.tiling_sum_sq(), l.gram.determinant());
    let vertices = orbits.voronoi_vertices(1 << 20).unwrap();
    assert_eq!(BigUint::from(vertices.len()), count);
    assert!(vertices_are_projected_cube_vertices(&l, &vertices).unwrap(), "{}", g.to_text());
    let mut elem: Vec<_> = elementary_vectors(g, ELEMENTARY_EDGE_LIMIT)
        .unwrap()
        .iter()
        .map(|x| l.coordinates(x).unwrap())
        .collect();
    elem.sort();
    assert_eq!(elem, relevant_vectors(&l.gram).unwrap(), "{}", g.to_text());
}

#[test]
fn census_up_to_six_edges() {
    let graphs = connected_graphs(6);
    assert_eq!(graphs.len(), 52);
    for g in &graphs {
        check(g);
    }
}

#[test]
fn named_graphs() {
    for g in [Graph::complete(4), Graph::complete(5), Graph::cycle(7)] {
        check(&g);
    }
    let prism = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap();
    check(&prism);
    let k33 = Graph::new(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
    check(&k33);
}

#[test]
fn projection_routes_agree_on_census() {
    for g in connected_graphs(7) {
        let p = projection(&g).unwrap();
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.trace(), latvor::q(g.vertex_count() as i64 - 1, 1));
    }
}

/// Nonzero {−1,0,1} lattice vectors whose support contains no other's.
fn minimal_support_brute_force(g: &Graph) -> Vec<Vec<i64>> {
    let l = build_lattice(g).unwrap();
    let m = g.edge_count();
    let mut members = Vec::new();
    for code in 0..3usize.pow(m as u32) {
        let mut c = code;
        let x: Vec<i64> = (0..m)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        if x.iter().any(|&d| d != 0) && l.coordinates(&x).is_some() {
            members.push(x);
        }
    }
    let support = |x: &[i64]| -> Vec<usize> { (0..m).filter(|&i| x[i] != 0).collect() };
    let mut out: Vec<Vec<i64>> = members
        .iter()
        .filter(|x| {
            let s = support(x);
            !members.iter().any(|y| {
                let t = support(y);
                t.len() < s.len() && t.iter().all(|i| s.contains(i))
            })
        })
        .cloned()
        .collect();
    out.sort();
    out
}

#[test]
fn elementary_vectors_match_minimal_supports() {
    for g in connected_graphs(6) {
        let mut elem = elementary_vectors(&g, ELEMENTARY_EDGE_LIMIT).unwrap();
        elem.sort();
        assert_eq!(elem, minimal_support_brute_force(&g), "{}", g.to_text());
    }
}
