//! Lattices of graphs: the lattice spanned by the signed fundamental cuts of
//! a spanning tree, its Voronoi cell as a projected cube, and the counting
//! oracles that describe it.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{qvec, GramForm, IVector, QMatrix, QVector};
use crate::rational::Rational;

/// Largest edge count for the elementary-vector enumeration by default.
pub const ELEMENTARY_EDGE_LIMIT: usize = 16;
/// Largest edge count for the cube maximization.
pub const CUBE_EDGE_LIMIT: usize = 20;

/// A simple graph on vertices `0..n`; edges are stored as `(e⁻, e⁺)` with
/// `e⁻ < e⁺`, so the head of an edge is its larger end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::Invalid(format!("self-loop at vertex {}", a + 1)));
            }
            if a >= n || b >= n {
                return Err(Error::Invalid(format!("edge {{{}, {}}} outside 1..{n}", a + 1, b + 1)));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::Invalid(format!("repeated edge {{{}, {}}}", e.0 + 1, e.1 + 1)));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    /// First line `n m`, then `m` lines `v w` with 1-based vertices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let nums = |l: &str| -> Result<Vec<usize>> {
            l.split_whitespace().map(|t| t.parse().map_err(|_| Error::Parse(format!("bad integer {t:?}")))).collect()
        };
        let head = nums(lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?)?;
        let [n, m] = head[..] else {
            return Err(Error::Parse("first line must be `n m`".into()));
        };
        let mut edges = Vec::with_capacity(m);
        for l in lines {
            let e = nums(l)?;
            let [v, w] = e[..] else {
                return Err(Error::Parse(format!("edge line {l:?} must be `v w`")));
            };
            if v == 0 || w == 0 {
                return Err(Error::Parse("vertices are numbered from 1".into()));
            }
            edges.push((v - 1, w - 1));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!("expected {m} edges, found {}", edges.len())));
        }
        Graph::new(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(a, b) in &self.edges {
            s.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        s
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need three vertices");
        Graph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Graph { n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        adj
    }

    /// Component label of every vertex, using only edges allowed by `keep`.
    fn components_with(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.n];
        let mut c = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = c;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, k) in &adj[v] {
                    if keep(k) && comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components_with(|_| true).iter().all(|&c| c == 0)
    }

    /// Edge indices of the breadth-first spanning tree from vertex 0.
    pub fn bfs_tree(&self) -> Result<Vec<usize>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut tree = Vec::new();
        while let Some(v) = queue.pop_front() {
            for &(w, k) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    tree.push(k);
                    queue.push_back(w);
                }
            }
        }
        tree.sort_unstable();
        Ok(tree)
    }

    /// The signed incidence matrix, `V × E`, with `+1` at heads.
    pub fn incidence(&self) -> QMatrix {
        let mut d = QMatrix::zeros(self.n, self.edges.len());
        for (k, &(lo, hi)) in self.edges.iter().enumerate() {
            d[(hi, k)] = Rational::one();
            d[(lo, k)] = -Rational::one();
        }
        d
    }

    fn laplacian(&self) -> QMatrix {
        let mut l = QMatrix::zeros(self.n, self.n);
        for &(a, b) in &self.edges {
            l[(a, a)] = &l[(a, a)] + &Rational::one();
            l[(b, b)] = &l[(b, b)] + &Rational::one();
            l[(a, b)] = &l[(a, b)] - &Rational::one();
            l[(b, a)] = &l[(b, a)] - &Rational::one();
        }
        l
    }

    /// `x(f) = ±1` on edges leaving the vertex set `side`, positive when the
    /// head is inside.
    pub fn signed_cut(&self, side: &[bool]) -> IVector {
        self.edges
            .iter()
            .map(|&(lo, hi)| match (side[hi], side[lo]) {
                (true, false) => 1,
                (false, true) => -1,
                _ => 0,
            })
            .collect()
    }
}

/// A lattice basis `b_{T,e}` for the edges `e` of a spanning tree `T`.
#[derive(Clone, Debug)]
pub struct GraphLattice {
    pub graph: Graph,
    pub tree: Vec<usize>,
    pub basis: Vec<IVector>,
    pub gram: GramForm,
}

pub fn build_lattice(g: &Graph) -> Result<GraphLattice> {
    let tree = g.bfs_tree()?;
    build_lattice_with_tree(g, &tree)
}

/// The basis for a given spanning tree; every tree gives the same lattice.
pub fn build_lattice_with_tree(g: &Graph, tree: &[usize]) -> Result<GraphLattice> {
    if tree.len() + 1 != g.n {
        return Err(Error::Invalid("not a spanning tree".into()));
    }
    let in_tree: HashSet<usize> = tree.iter().copied().collect();
    if g.components_with(|k| in_tree.contains(&k)).iter().any(|&c| c != 0) {
        return Err(Error::Invalid("not a spanning tree".into()));
    }
    let mut basis = Vec::with_capacity(tree.len());
    for &e in tree {
        let comp = g.components_with(|k| k != e && in_tree.contains(&k));
        let head = comp[g.edges[e].1];
        let side: Vec<bool> = comp.iter().map(|&c| c == head).collect();
        basis.push(g.signed_cut(&side));
    }
    let gram = gram_of_ints(&basis)?;
    Ok(GraphLattice { graph: g.clone(), tree: tree.to_vec(), basis, gram })
}

fn gram_of_ints(basis: &[IVector]) -> Result<GramForm> {
    let rows: Vec<Vec<i64>> =
        basis.iter().map(|u| basis.iter().map(|v| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect()).collect();
    GramForm::from_i64_rows(&rows)
}

impl GraphLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `E × rank` matrix with the basis vectors as columns.
    pub fn basis_matrix(&self) -> QMatrix {
        QMatrix::from_columns(&self.basis.iter().map(|b| qvec(b)).collect::<Vec<_>>())
    }

    /// Lattice coordinates of an edge vector, if it lies in the lattice.
    pub fn coordinates(&self, x: &[i64]) -> Option<IVector> {
        let b = self.basis_matrix();
        let bt = b.transpose();
        let c = bt.mul(&b).solve(&bt.mul_vec(&qvec(x))).ok()?;
        if b.mul_vec(&c) != qvec(x) {
            return None;
        }
        c.iter().map(Rational::to_i64).collect()
    }

    /// The edge vector of a point given in lattice coordinates.
    pub fn embed(&self, y: &[Rational]) -> QVector {
        self.basis_matrix().mul_vec(y)
    }
}

/// Orthogonal projection of `Q^E` onto the span of the lattice, computed from
/// the basis and from spanning-tree counts; the two must agree.
pub fn projection(g: &Graph) -> Result<QMatrix> {
    let a = projection_from_basis(&build_lattice(g)?);
    let b = projection_from_trees(g)?;
    assert_eq!(a, b, "projection routes disagree");
    Ok(a)
}

/// `B (BᵀB)⁻¹ Bᵀ`.
pub fn projection_from_basis(l: &GraphLattice) -> QMatrix {
    let b = l.basis_matrix();
    let bt = b.transpose();
    b.mul(&bt.mul(&b).inverse().expect("basis is independent")).mul(&bt)
}

/// Determinant of the Laplacian with the given vertices deleted.
fn reduced_laplacian_det(l: &QMatrix, drop: &[usize]) -> Rational {
    let keep: Vec<usize> = (0..l.rows()).filter(|i| !drop.contains(i)).collect();
    if keep.is_empty() {
        return Rational::one();
    }
    let rows: Vec<QVector> = keep.iter().map(|&i| keep.iter().map(|&j| l[(i, j)].clone()).collect()).collect();
    QMatrix::from_rows(rows).determinant()
}

pub fn spanning_tree_count(g: &Graph) -> BigUint {
    if g.n == 0 {
        return BigUint::zero();
    }
    reduced_laplacian_det(&g.laplacian(), &[0]).numer().to_biguint().unwrap_or_default()
}

/// `X·D` where `X(e, v)` is the fraction of spanning trees containing `e`
/// with `v` on the head side of `e`.
pub fn projection_from_trees(g: &Graph) -> Result<QMatrix> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let lap = g.laplacian();
    let trees = reduced_laplacian_det(&lap, &[0]);
    // Two-component spanning forests separating a from c.
    let mut sep = vec![vec![Rational::zero(); g.n]; g.n];
    for a in 0..g.n {
        for c in a + 1..g.n {
            let f = reduced_laplacian_det(&lap, &[a, c]);
            sep[a][c] = f.clone();
            sep[c][a] = f;
        }
    }
    let two = Rational::from_integer(2);
    let mut x = QMatrix::zeros(g.edges.len(), g.n);
    for (k, &(lo, hi)) in g.edges.iter().enumerate() {
        for v in 0..g.n {
            // Forests with hi and v in one tree and lo in the other.
            let count = &(&(&sep[hi][lo] + &sep[v][lo]) - &sep[hi][v]) / &two;
            x[(k, v)] = &count / &trees;
        }
    }
    Ok(x.mul(&g.incidence()))
}

/// Orientations without directed cycles, by deletion and contraction.
pub fn count_acyclic_orientations(g: &Graph) -> BigUint {
    let mut memo = HashMap::new();
    let edges: BTreeSet<(usize, usize)> = g.edges.iter().copied().collect();
    acyclic(edges, &mut memo)
}

fn acyclic(edges: BTreeSet<(usize, usize)>, memo: &mut HashMap<BTreeSet<(usize, usize)>, BigUint>) -> BigUint {
    let Some(&(a, b)) = edges.iter().next() else {
        return BigUint::one();
    };
    if let Some(v) = memo.get(&edges) {
        return v.clone();
    }
    let mut deleted = edges.clone();
    deleted.remove(&(a, b));
    // Contract b into a; parallel edges collapse, which leaves the count unchanged.
    let contracted: BTreeSet<(usize, usize)> = deleted
        .iter()
        .map(|&(x, y)| {
            let (x, y) = (if x == b { a } else { x }, if y == b { a } else { y });
            (x.min(y), x.max(y))
        })
        .collect();
    let total = acyclic(deleted, memo) + acyclic(contracted, memo);
    memo.insert(edges, total.clone());
    total
}

/// All elementary vectors of the lattice: the signed bonds `±δ(S)` with both
/// sides of the cut connected, as edge vectors, sorted.
pub fn elementary_vectors(g: &Graph, max_edges: usize) -> Result<Vec<IVector>> {
    if g.edges.len() > max_edges {
        return Err(Error::SizeLimit(format!("{} edges exceed the limit {max_edges}", g.edges.len())));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.n > 24 {
        return Err(Error::SizeLimit(format!("{} vertices are too many for cut enumeration", g.n)));
    }
    let mut out = Vec::new();
    for mask in 1u32..1 << (g.n - 1) {
        // Vertex 0 stays outside S.
        let side: Vec<bool> = (0..g.n).map(|v| v > 0 && mask >> (v - 1) & 1 == 1).collect();
        let inside = g.components_with(|k| side[g.edges[k].0] == side[g.edges[k].1]);
        let comps: HashSet<usize> = inside.iter().copied().collect();
        if comps.len() != 2 {
            continue;
        }
        let x = g.signed_cut(&side);
        out.push(x.iter().map(|c| -c).collect());
        out.push(x);
    }
    out.sort();
    Ok(out)
}

/// `μ² = max ‖P x‖²` over the vertices `x ∈ {±1/2}^E` of the cube.
pub fn covering_radius_cube(g: &Graph, max_edges: usize) -> Result<Rational> {
    let m = g.edges.len();
    if m > max_edges.min(CUBE_EDGE_LIMIT) {
        return Err(Error::SizeLimit(format!("{m} edges exceed the cube limit {}", max_edges.min(CUBE_EDGE_LIMIT))));
    }
    let p = projection_from_basis(&build_lattice(g)?);
    let (den, tp) = integer_matrix(&p);
    // Gray-code walk over s ∈ {±1}^E with s₀ fixed, tracking w = (dP)s.
    let mut s = vec![1i128; m];
    let mut w: Vec<i128> = (0..m).map(|i| tp[i].iter().sum()).collect();
    let value = |s: &[i128], w: &[i128]| -> i128 { s.iter().zip(w).map(|(a, b)| a * b).sum() };
    let mut best = value(&s, &w);
    for step in 1u64..1 << m.saturating_sub(1) {
        let j = step.trailing_zeros() as usize + 1;
        s[j] = -s[j];
        for i in 0..m {
            w[i] += 2 * s[j] * tp[i][j];
        }
        best = best.max(value(&s, &w));
    }
    Ok(Rational::from_i128(best, 4 * den))
}

/// `(d, d·P)` with `d` the common denominator, as machine integers.
fn integer_matrix(p: &QMatrix) -> (i128, Vec<Vec<i128>>) {
    let d = crate::linalg::common_denominator(p.entries());
    let dq = Rational::from_bigint(d.clone());
    let den: i128 = d.try_into().expect("denominator fits in i128");
    let rows = (0..p.rows())
        .map(|i| (0..p.cols()).map(|j| (&p[(i, j)] * &dq).to_i64().expect("scaled entries are small") as i128).collect())
        .collect();
    (den, rows)
}

/// Whether every given Voronoi vertex (in lattice coordinates) is the image
/// of a cube vertex under the projection.
pub fn vertices_are_projected_cube_vertices(l: &GraphLattice, vertices: &[QVector]) -> Result<bool> {
    let m = l.graph.edges.len();
    if m > CUBE_EDGE_LIMIT {
        return Err(Error::SizeLimit(format!("{m} edges exceed the cube limit {CUBE_EDGE_LIMIT}")));
    }
    let p = projection_from_basis(l);
    let (den, tp) = integer_matrix(&p);
    let mut images: HashSet<Vec<i128>> = HashSet::new();
    for mask in 0u64..1 << m {
        let s: Vec<i128> = (0..m).map(|j| if mask >> j & 1 == 1 { 1 } else { -1 }).collect();
        images.insert((0..m).map(|i| tp[i].iter().zip(&s).map(|(a, b)| a * b).sum()).collect());
    }
    // P·s/2 = x  ⇔  (dP)s = 2d·x.
    let scale = Rational::from_i128(2 * den, 1);
    for y in vertices {
        let x = l.embed(y);
        let key: Option<Vec<i128>> = x.iter().map(|c| (&scale * c).to_i64().map(i128::from)).collect();
        match key {
            Some(k) if images.contains(&k) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Canonical form of a graph without isolated vertices: the smallest sorted
/// edge list over all relabelings consistent with an equitable refinement.
pub fn canonical_form(g: &Graph) -> Vec<(u8, u8)> {
    let adj: Vec<Vec<bool>> = {
        let mut a = vec![vec![false; g.n]; g.n];
        for &(x, y) in &g.edges {
            a[x][y] = true;
            a[y][x] = true;
        }
        a
    };
    let cells = refine(&adj, vec![(0..g.n).collect()]);
    let mut best: Option<Vec<(u8, u8)>> = None;
    search_labelings(&adj, g, cells, &mut best);
    best.unwrap_or_default()
}

fn refine(adj: &[Vec<bool>], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let mut cell_of = vec![0; adj.len()];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = c;
            }
        }
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut k = vec![0; cells.len()];
                    for (w, &e) in adj[v].iter().enumerate() {
                        if e {
                            k[cell_of[w]] += 1;
                        }
                    }
                    (k, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn search_labelings(adj: &[Vec<bool>], g: &Graph, cells: Vec<Vec<usize>>, best: &mut Option<Vec<(u8, u8)>>) {
    let Some(k) = cells.iter().position(|c| c.len() > 1) else {
        let mut label = vec![0u8; adj.len()];
        for (i, c) in cells.iter().enumerate() {
            label[c[0]] = i as u8;
        }
        let mut key: Vec<(u8, u8)> = g
            .edges
            .iter()
            .map(|&(x, y)| {
                let (a, b) = (label[x], label[y]);
                (a.min(b), a.max(b))
            })
            .collect();
        key.sort_unstable();
        if best.as_ref().map_or(true, |b| key < *b) {
            *best = Some(key);
        }
        return;
    };
    for &v in &cells[k] {
        let mut split = cells.clone();
        let rest: Vec<usize> = cells[k].iter().copied().filter(|&w| w != v).collect();
        split.splice(k..=k, [vec![v], rest]);
        search_labelings(adj, g, refine(adj, split), best);
    }
}

/// All connected graphs with between 1 and `max_edges` edges and no
/// isolated vertices, one per isomorphism class, ordered by edge count and
/// canonical form.
pub fn connected_graphs(max_edges: usize) -> Vec<Graph> {
    let mut level: Vec<Graph> = vec![Graph::path(2)];
    let mut out = level.clone();
    for _ in 1..max_edges {
        let mut found: HashMap<Vec<(u8, u8)>, Graph> = HashMap::new();
        for g in &level {
            let present: HashSet<(usize, usize)> = g.edges.iter().copied().collect();
            let mut candidates: Vec<Graph> = Vec::new();
            for a in 0..g.n {
                for b in a + 1..g.n {
                    if !present.contains(&(a, b)) {
                        let mut e = g.edges.clone();
                        e.push((a, b));
                        candidates.push(Graph { n: g.n, edges: e });
                    }
                }
                let mut e = g.edges.clone();
                e.push((a, g.n));
                candidates.push(Graph { n: g.n + 1, edges: e });
            }
            for c in candidates {
                found.entry(canonical_form(&c)).or_insert(c);
            }
        }
        let mut next: Vec<(Vec<(u8, u8)>, Graph)> = found.into_iter().collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next
            .into_iter()
            .map(|(key, _)| {
                let n = key.iter().map(|&(_, b)| b as usize + 1).max().unwrap_or(0);
                Graph::new(n, &key.iter().map(|&(a, b)| (a as usize, b as usize)).collect::<Vec<_>>()).unwrap()
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvp::relevant_vectors;
    use crate::rational::q;
    use crate::symmetry::find_isometry;

    fn c4() -> Graph {
        Graph::cycle(4)
    }

    #[test]
    fn parsing() {
        let g = Graph::parse("3 3\n1 2\n1 3\n3 2\n").unwrap();
        assert_eq!(g, Graph::complete(3));
        assert!(Graph::parse("2 2\n1 2\n2 1\n").is_err());
        assert!(Graph::parse("2 1\n1 1\n").is_err());
        assert!(Graph::parse("2 2\n1 2\n").is_err());
        assert!(Graph::parse("x\n").is_err());
        assert_eq!(Graph::parse(&c4().to_text()).unwrap(), c4());
        let disconnected = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(build_lattice(&disconnected), Err(Error::Disconnected)));
    }

    #[test]
    fn small_lattices() {
        let k3 = build_lattice(&Graph::complete(3)).unwrap();
        let a2 = GramForm::from_i64_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert!(find_isometry(&k3.gram, &a2).is_some());
        assert_eq!(build_lattice(&Graph::path(2)).unwrap().gram, GramForm::identity(1));
        // The complete graph on four vertices gives the body-centred cubic lattice A₃*.
        let k4 = build_lattice(&Graph::complete(4)).unwrap();
        assert_eq!(k4.gram.determinant(), q(16, 1));
        let a3_dual = crate::catalog::anr(3, 4).unwrap().gram.scaled_by(&q(4, 1)).unwrap();
        assert!(find_isometry(&k4.gram, &a3_dual).is_some());
    }

    #[test]
    fn tree_independence() {
        let g = Graph::complete(4);
        let a = build_lattice(&g).unwrap();
        let b = build_lattice_with_tree(&g, &[2, 4, 5]).unwrap();
        for v in &a.basis {
            assert!(b.coordinates(v).is_some());
        }
        for v in &b.basis {
            assert!(a.coordinates(v).is_some());
        }
        assert!(build_lattice_with_tree(&g, &[0, 1, 3]).is_err());
    }

    #[test]
    fn projections() {
        assert_eq!(projection(&Graph::path(2)).unwrap(), QMatrix::identity(1));
        assert_eq!(projection(&Graph::path(5)).unwrap(), QMatrix::identity(4));
        let p = projection(&Graph::complete(3)).unwrap();
        for i in 0..3 {
            assert_eq!(p[(i, i)], q(2, 3));
            for j in 0..3 {
                if i != j {
                    assert_eq!(p[(i, j)].abs(), q(1, 3));
                }
            }
        }
        for g in [c4(), Graph::complete(4), Graph::complete(5)] {
            let p = projection(&g).unwrap();
            assert_eq!(p.mul(&p), p);
            assert_eq!(p.transpose(), p);
        }
        assert_eq!(spanning_tree_count(&Graph::complete(4)), BigUint::from(16u32));
    }

    #[test]
    fn acyclic_orientations() {
        assert_eq!(count_acyclic_orientations(&Graph::complete(3)), BigUint::from(6u32));
        assert_eq!(count_acyclic_orientations(&c4()), BigUint::from(14u32));
        assert_eq!(count_acyclic_orientations(&Graph::complete(4)), BigUint::from(24u32));
        assert_eq!(count_acyclic_orientations(&Graph::complete(6)), BigUint::from(720u32));
        assert_eq!(count_acyclic_orientations(&Graph::path(6)), BigUint::from(32u32));
        let two = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(count_acyclic_orientations(&two), BigUint::from(4u32));
    }

    #[test]
    fn elementary_equals_relevant() {
        assert_eq!(elementary_vectors(&Graph::complete(3), 16).unwrap().len(), 6);
        assert_eq!(elementary_vectors(&c4(), 16).unwrap().len(), 12);
        assert_eq!(elementary_vectors(&Graph::path(4), 16).unwrap().len(), 6);
        for g in [Graph::complete(3), c4(), Graph::complete(4), Graph::path(3)] {
            let l = build_lattice(&g).unwrap();
            let mut elem: Vec<IVector> =
                elementary_vectors(&g, 16).unwrap().iter().map(|x| l.coordinates(x).unwrap()).collect();
            elem.sort();
            assert_eq!(elem, relevant_vectors(&l.gram).unwrap());
        }
        assert!(elementary_vectors(&Graph::complete(7), 16).is_err());
    }

    #[test]
    fn cube_covering_radius() {
        assert_eq!(covering_radius_cube(&Graph::path(2), 20).unwrap(), q(1, 4));
        assert_eq!(covering_radius_cube(&Graph::complete(3), 20).unwrap(), q(2, 3));
        assert_eq!(covering_radius_cube(&Graph::path(4), 20).unwrap(), q(3, 4));
    }

    #[test]
    fn graph_census() {
        let counts: Vec<usize> =
            (1..=6).map(|m| connected_graphs(6).iter().filter(|g| g.edge_count() == m).count()).collect();
        assert_eq!(counts, vec![1, 1, 3, 5, 12, 30]);
        assert!(connected_graphs(6).iter().all(Graph::is_connected));
        let mut relabeled = Graph::new(4, &[(3, 2), (2, 0), (0, 1), (1, 3)]).unwrap();
        assert_eq!(canonical_form(&relabeled), canonical_form(&c4()));
        relabeled.edges.pop();
        assert_ne!(canonical_form(&relabeled), canonical_form(&c4()));
    }
}
