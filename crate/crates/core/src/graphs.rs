//! Multigraphs with loops, their oriented-edge view, and hypergraphs.
//!
//! Vertices are `0..n`. Edges are identified by their position in the edge
//! list, so parallel edges and loops are distinct objects. An edge stored as
//! `(u, v)` has head `u` and tail `v` in its positive orientation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::poly::IntMatrix;
use crate::{Error, Result};

/// Finite undirected multigraph with loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Orientation of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

/// An edge together with a direction of traversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub id: usize,
    pub sign: Sign,
}

impl OrientedEdge {
    pub fn pos(id: usize) -> Self {
        OrientedEdge {
            id,
            sign: Sign::Pos,
        }
    }

    pub fn negate(self) -> Self {
        let sign = match self.sign {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        };
        OrientedEdge { id: self.id, sign }
    }

    pub fn head(self, g: &Multigraph) -> usize {
        let (u, v) = g.edges[self.id];
        if self.sign == Sign::Pos {
            u
        } else {
            v
        }
    }

    pub fn tail(self, g: &Multigraph) -> usize {
        self.negate().head(g)
    }
}

impl Multigraph {
    /// Validates every endpoint against `n`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some((k, &(u, v))) = edges
            .iter()
            .enumerate()
            .find(|(_, &(u, v))| u >= n || v >= n)
        {
            return Err(Error::invalid(format!(
                "edge {k} = ({u}, {v}) has an endpoint outside 0..{n}"
            )));
        }
        Ok(Multigraph { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        Multigraph {
            n,
            edges: Vec::new(),
        }
    }

    /// Path on `n` vertices `0 - 1 - … - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Multigraph { n, edges }
    }

    /// Cycle on `n ≥ 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let mut g = Self::path(n);
        g.edges.push((n - 1, 0));
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Multigraph { n, edges }
    }

    /// Star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Self {
        Multigraph {
            n: k + 1,
            edges: (1..=k).map(|i| (0, i)).collect(),
        }
    }

    /// Bouquet `B_r`: one vertex carrying `r` loops.
    pub fn bouquet(r: usize) -> Self {
        Multigraph {
            n: 1,
            edges: vec![(0, 0); r],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Neighbour lists with multiplicity; a loop at `v` lists `v` twice.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Symmetric adjacency matrix; a loop adds 2 to its diagonal entry.
    pub fn adjacency(&self) -> IntMatrix {
        let mut a = vec![vec![0i64; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] += 1;
            a[v][u] += 1;
        }
        a
    }

    /// Connected-component label per vertex, labels in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut label = vec![usize::MAX; self.n];
        let mut root_label = vec![usize::MAX; self.n];
        let mut next = 0;
        for v in 0..self.n {
            let r = uf.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            label[v] = root_label[r];
        }
        label
    }

    pub fn num_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Connected with at least one vertex.
    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// Edge ids of a spanning forest, chosen greedily in edge-id order.
    pub fn spanning_forest(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        (0..self.edges.len())
            .filter(|&e| {
                let (u, v) = self.edges[e];
                uf.union(u, v)
            })
            .collect()
    }

    /// Subgraph induced on `set` (sorted, distinct), relabeled to
    /// `0..set.len()` in the given order.
    pub fn induced(&self, set: &[usize]) -> Multigraph {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in set.iter().enumerate() {
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        Multigraph {
            n: set.len(),
            edges,
        }
    }

    /// Edge multiset with each edge written `(min, max)`, sorted.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn to_json(&self) -> String {
        let edges: Vec<[usize; 2]> = self.edges.iter().map(|&(u, v)| [u, v]).collect();
        serde_json::json!({"type": "multigraph", "n": self.n, "edges": edges}).to_string()
    }

    /// Parses graph JSON or the plain-text edge list (first line `n`, then
    /// one `u v` pair per line).
    pub fn parse(text: &str) -> Result<Self> {
        let (n, edges) = parse_edge_lists(text, "multigraph")?;
        let mut pairs = Vec::with_capacity(edges.len());
        for (k, e) in edges.into_iter().enumerate() {
            if e.len() != 2 {
                return Err(Error::Parse(format!(
                    "edge {k} has {} endpoints, expected 2",
                    e.len()
                )));
            }
            pairs.push((e[0], e[1]));
        }
        Multigraph::new(n, pairs).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Hypergraph: a family of nonempty vertex subsets, repetitions allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

/// `map[old] = Some(new)` for surviving vertices.
pub type VertexMap = Vec<Option<usize>>;

impl Hypergraph {
    /// Each edge is sorted; empty edges, repeated vertices inside an edge
    /// and out-of-range vertices are rejected.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for (k, mut e) in edges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(Error::invalid(format!("hyperedge {k} is empty")));
            }
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::invalid(format!(
                    "hyperedge {k} contains vertex {v} outside 0..{n}"
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("hyperedge {k} repeats a vertex")));
            }
            out.push(e);
        }
        Ok(Hypergraph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Hypergraph {
            n,
            edges: Vec::new(),
        }
    }

    /// The graph as a 2-uniform hypergraph; a loop becomes a singleton.
    pub fn from_graph(g: &Multigraph) -> Self {
        let edges = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                if u == v {
                    vec![u]
                } else {
                    vec![u.min(v), u.max(v)]
                }
            })
            .collect();
        Hypergraph { n: g.n(), edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges containing `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&i)).count()
    }

    /// Ids of the edges containing `i`.
    pub fn incidence(&self, i: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&k| self.edges[k].contains(&i))
            .collect()
    }

    /// Any two distinct edges share at most one vertex.
    pub fn is_linear(&self) -> bool {
        for (a, ea) in self.edges.iter().enumerate() {
            for eb in &self.edges[a + 1..] {
                if ea.iter().filter(|v| eb.contains(v)).count() > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Removes `i` from the vertex set and from every edge, drops edges that
    /// become empty, and relabels the remaining vertices compactly.
    pub fn delete_vertex_weak(&self, i: usize) -> (Hypergraph, VertexMap) {
        assert!(i < self.n, "vertex {i} out of range");
        self.delete_vertices_weak(&[i])
    }

    /// Weak deletion of every vertex in `set`.
    pub fn delete_vertices_weak(&self, set: &[usize]) -> (Hypergraph, VertexMap) {
        let mut map: VertexMap = vec![None; self.n];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if !set.contains(&v) {
                *slot = Some(next);
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().filter_map(|&v| map[v]).collect::<Vec<_>>())
            .filter(|e| !e.is_empty())
            .collect();
        (Hypergraph { n: next, edges }, map)
    }

    /// Removes edge `e`; vertices are unchanged.
    pub fn delete_edge(&self, e: usize) -> Hypergraph {
        assert!(e < self.edges.len(), "edge {e} out of range");
        let mut edges = self.edges.clone();
        edges.remove(e);
        Hypergraph { n: self.n, edges }
    }

    /// `self` on `0..n₁`, `other` shifted to `n₁..n₁+n₂`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|e| e.iter().map(|v| v + self.n).collect()),
        );
        Hypergraph {
            n: self.n + other.n,
            edges,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({"type": "hypergraph", "n": self.n, "edges": self.edges}).to_string()
    }

    /// Parses hypergraph JSON or plain text (first line `n`, then one
    /// whitespace-separated edge per line).
    pub fn parse(text: &str) -> Result<Self> {
        let (n, edges) = parse_edge_lists(text, "hypergraph")?;
        Hypergraph::new(n, edges).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Deserialize)]
struct EdgeListJson {
    #[serde(rename = "type")]
    kind: Option<String>,
    n: i64,
    edges: Vec<Vec<i64>>,
}

fn parse_edge_lists(text: &str, kind: &str) -> Result<(usize, Vec<Vec<usize>>)> {
    let trimmed = text.trim_start();
    let (n, raw): (i64, Vec<Vec<i64>>) = if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse(format!("malformed JSON: {e}")))?;
        let j: EdgeListJson =
            serde_json::from_value(v).map_err(|e| Error::Parse(format!("bad {kind} JSON: {e}")))?;
        if let Some(k) = j.kind.as_deref() {
            if k != kind {
                return Err(Error::Parse(format!("expected type {kind:?}, found {k:?}")));
            }
        }
        (j.n, j.edges)
    } else {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let n = first
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad vertex count {first:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let e = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad vertex {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            edges.push(e);
        }
        (n, edges)
    };
    if n < 0 {
        return Err(Error::Parse(format!("negative vertex count {n}")));
    }
    let mut edges = Vec::with_capacity(raw.len());
    for (k, e) in raw.into_iter().enumerate() {
        if e.is_empty() {
            return Err(Error::Parse(format!("edge {k} is empty")));
        }
        let mut out = Vec::with_capacity(e.len());
        for v in e {
            if v < 0 {
                return Err(Error::Parse(format!("edge {k} has negative vertex {v}")));
            }
            if v >= n {
                return Err(Error::Parse(format!("edge {k} has vertex {v} but n = {n}")));
            }
            out.push(v as usize);
        }
        edges.push(out);
    }
    Ok((n as usize, edges))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the two were in different sets.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_examples() {
        assert_eq!(
            Multigraph::path(2).adjacency(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(Multigraph::bouquet(1).adjacency(), vec![vec![2]]);
        assert_eq!(
            Multigraph::complete(3).adjacency(),
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
    }

    #[test]
    fn orientation() {
        let g = Multigraph::new(3, vec![(0, 2), (1, 1)]).unwrap();
        let e = OrientedEdge::pos(0);
        assert_eq!((e.head(&g), e.tail(&g)), (0, 2));
        assert_eq!((e.negate().head(&g), e.negate().tail(&g)), (2, 0));
        assert_eq!(e.negate().negate(), e);
        let l = OrientedEdge::pos(1);
        assert_eq!(l.head(&g), l.tail(&g));
    }

    #[test]
    fn structure_queries() {
        assert!(Multigraph::cycle(4).is_simple());
        assert!(!Multigraph::bouquet(1).is_simple());
        assert!(!Multigraph::new(2, vec![(0, 1), (1, 0)])
            .unwrap()
            .is_simple());
        assert!(Multigraph::star(3).is_connected());
        assert!(!Multigraph::empty(2).is_connected());
        assert!(!Multigraph::empty(0).is_connected());
        assert_eq!(Multigraph::cycle(5).spanning_forest(), vec![0, 1, 2, 3]);
        let g = Multigraph::new(4, vec![(0, 1), (2, 3), (3, 3)]).unwrap();
        assert_eq!(g.components(), vec![0, 0, 1, 1]);
        assert_eq!(g.degree(3), 3);
        assert_eq!(g.induced(&[1, 2, 3]).edges(), &[(1, 2), (2, 2)]);
    }

    #[test]
    fn weak_vertex_deletion() {
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(h.delete_vertex_weak(2).0.edges(), &[vec![0, 1]]);

        let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let (d, map) = h.delete_vertex_weak(0);
        assert_eq!(d.edges(), &[vec![0]]);
        assert_eq!(map, vec![None, Some(0)]);

        let h = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let (d, _) = h.delete_vertex_weak(1);
        assert_eq!(d.n(), 2);
        assert_eq!(d.edges(), &[vec![0], vec![1]]);

        let h = Hypergraph::new(2, vec![vec![1]]).unwrap();
        assert!(h.delete_vertex_weak(1).0.edges().is_empty());
    }

    #[test]
    fn edge_deletion_and_union() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(h.delete_edge(1).edges(), &[vec![0, 1], vec![0, 2]]);
        assert_eq!(h.delete_edge(0).n(), 3);
        assert_eq!(h.delete_edge(2).num_edges(), 2);

        let e = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let u = e.disjoint_union(&e);
        assert_eq!(u.n(), 4);
        assert_eq!(u.edges(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(e.disjoint_union(&Hypergraph::empty(0)), e);
    }

    #[test]
    fn degrees_and_linearity() {
        let h = Hypergraph::new(4, vec![vec![0, 1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        assert_eq!(h.degree(2), 2);
        assert_eq!(h.incidence(0), vec![0, 2]);
        assert!(h.is_linear());
        let h = Hypergraph::new(3, vec![vec![0, 1, 2], vec![1, 2]]).unwrap();
        assert!(!h.is_linear());
    }

    #[test]
    fn parsing() {
        let g = Multigraph::parse(
            r#"{"type":"multigraph","n":4,"edges":[[0,1],[0,2],[1,2],[2,3],[3,3]]}"#,
        )
        .unwrap();
        assert_eq!(g.num_edges(), 5);
        assert!(g.has_loops());
        assert_eq!(Multigraph::parse(&g.to_json()).unwrap(), g);

        let t = Multigraph::parse("3\n0 1\n1 2\n").unwrap();
        assert_eq!(t, Multigraph::path(3));

        assert!(Multigraph::parse(r#"{"n":2,"edges":[[0,-1]]}"#).is_err());
        assert!(Multigraph::parse(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
        assert!(Multigraph::parse(r#"{"n":2,"edges":[[0,1,1]]}"#).is_err());
        assert!(Multigraph::parse(r#"{"type":"hypergraph","n":2,"edges":[]}"#).is_err());
        assert!(Multigraph::parse("{not json").is_err());

        let h = Hypergraph::parse(r#"{"type":"hypergraph","n":3,"edges":[[2,0,1],[1]]}"#).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2], vec![1]]);
        assert_eq!(Hypergraph::parse(&h.to_json()).unwrap(), h);
        assert!(Hypergraph::parse(r#"{"type":"hypergraph","n":3,"edges":[[]]}"#).is_err());
        assert!(Hypergraph::parse("3\n0 1 5\n").is_err());
        assert!(Hypergraph::parse("3\n0 1 -1\n").is_err());
    }
}
