//! Weighted undirected graphs, the two linear 2-tree families, and Laplacians.
//!
//! Vertices are labeled `1..=n` on every public surface.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// An undirected graph on vertices `1..=n` with strictly positive rational
/// edge weights (conductances). No self-loops, no duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), Rational>,
}

impl WeightedGraph {
    /// An edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: BTreeMap::new(),
        }
    }

    /// Builds a graph from `(i, j, weight)` triples.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut g = Self::new(n);
        for (i, j, w) in edges {
            g.add_edge(i, j, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize, weight: Rational) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
        }
        if !weight.is_positive() {
            return Err(Error::InvalidGraph(format!(
                "edge {{{i},{j}}} has non-positive weight {weight}"
            )));
        }
        let key = (i.min(j), i.max(j));
        if self.edges.contains_key(&key) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {{{},{}}}",
                key.0, key.1
            )));
        }
        self.edges.insert(key, weight);
        Ok(())
    }

    /// Copy of the graph with edge `{i, j}` removed.
    pub fn without_edge(&self, i: usize, j: usize) -> Result<Self> {
        let mut g = self.clone();
        if g.edges.remove(&(i.min(j), i.max(j))).is_none() {
            return Err(Error::InvalidGraph(format!("no edge {{{i},{j}}}")));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j, weight)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.edges.iter().map(|(&(i, j), w)| (i, j, w))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains_key(&(i.min(j), i.max(j)))
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<&Rational> {
        self.edges.get(&(i.min(j), i.max(j)))
    }

    /// Number of incident edges.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.keys().filter(|&&(i, j)| i == v || j == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, j) in self.edges.keys() {
            deg[i - 1] += 1;
            deg[j - 1] += 1;
        }
        deg
    }

    /// Sum of incident edge weights.
    pub fn weighted_degree(&self, v: usize) -> Rational {
        self.edges
            .iter()
            .filter(|(&(i, j), _)| i == v || j == v)
            .map(|(_, w)| w)
            .sum()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in self.edges.keys() {
            adj[i - 1].push(j - 1);
            adj[j - 1].push(i - 1);
        }
        adj
    }

    /// Connectivity after deleting the 0-based vertices marked in `removed`.
    fn connected_without(&self, adj: &[Vec<usize>], removed: Option<usize>) -> bool {
        let Some(start) = (0..self.n).find(|&v| Some(v) != removed) else {
            return true;
        };
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] && Some(u) != removed {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n - usize::from(removed.is_some())
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(&self.adjacency(), None)
    }

    /// At least three vertices and no cut vertex.
    pub fn is_biconnected(&self) -> bool {
        if self.n < 3 {
            return false;
        }
        let adj = self.adjacency();
        self.connected_without(&adj, None)
            && (0..self.n).all(|v| self.connected_without(&adj, Some(v)))
    }

    pub fn laplacian(&self) -> LaplacianView {
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for (&(i, j), w) in &self.edges {
            let (a, b) = (i - 1, j - 1);
            entries[a * n + b] = -w.clone();
            entries[b * n + a] = -w.clone();
            entries[a * n + a] = &entries[a * n + a] + w;
            entries[b * n + b] = &entries[b * n + b] + w;
        }
        LaplacianView { n, entries }
    }

    /// Edge-list text: a `n <count>` header then one `i j num/den` line per
    /// edge, in lexicographic edge order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (&(i, j), w) in &self.edges {
            writeln!(out, "{i} {j} {w}").unwrap();
        }
        out
    }

    /// SHA-256 of the canonical edge list, first 16 hex digits.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_edge_list().as_bytes());
        digest[..8].iter().fold(String::new(), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
    }
}

impl FromStr for WeightedGraph {
    type Err = Error;

    /// Parses the edge-list format. Blank lines and `#` comments are ignored;
    /// a weight may be omitted, meaning 1.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (no, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", count] => count
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {no}: bad vertex count {count:?}")))?,
            _ => {
                return Err(Error::Parse(format!(
                    "line {no}: expected header \"n <count>\", found {header:?}"
                )))
            }
        };

        let mut g = Self::new(n);
        for (no, line) in lines {
            let fields: Vec<_> = line.split_whitespace().collect();
            let (i, j, w) = match fields[..] {
                [i, j] => (i, j, "1"),
                [i, j, w] => (i, j, w),
                _ => return Err(Error::Parse(format!("line {no}: expected \"i j num/den\""))),
            };
            let vertex = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {no}: bad vertex {t:?}")))
            };
            let weight: Rational = w
                .parse()
                .map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
            g.add_edge(vertex(i)?, vertex(j)?, weight)?;
        }
        Ok(g)
    }
}

/// Dense Laplacian `L = D - A` of a weighted graph, 1-based accessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplacianView {
    n: usize,
    entries: Vec<Rational>,
}

impl LaplacianView {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[(i - 1) * self.n..i * self.n]
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        self.row(i).iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.n).all(|i| (i + 1..=self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

fn unit_edges(n: usize, keep: impl Fn(usize, usize) -> bool) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    for i in 1..=n {
        for j in i + 1..=(i + 2).min(n) {
            if keep(i, j) {
                g.edges.insert((i, j), Rational::one());
            }
        }
    }
    g
}

/// Straight linear 2-tree: unit edges `{i, j}` for `0 < |i - j| <= 2`.
pub fn straight_2tree(n: usize) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(Error::InvalidParams(format!(
            "straight 2-tree needs n >= 3 (got n = {n})"
        )));
    }
    Ok(unit_edges(n, |_, _| true))
}

/// Checks `n >= 6` and `3 <= k <= n - 3`.
pub fn validate_bent(n: usize, k: usize) -> Result<()> {
    if n < 6 {
        return Err(Error::InvalidParams(format!(
            "bent 2-tree needs n >= 6 (got n = {n})"
        )));
    }
    if k < 3 || k > n - 3 {
        return Err(Error::InvalidParams(format!(
            "k must satisfy 3 <= k <= n-3 (got n = {n}, k = {k})"
        )));
    }
    Ok(())
}

/// Bent linear 2-tree with the bend at vertex `k`: the straight 2-tree with
/// edge `{k+1, k+3}` replaced by `{k, k+3}`.
pub fn bent_2tree(n: usize, k: usize) -> Result<WeightedGraph> {
    validate_bent(n, k)?;
    let mut g = unit_edges(n, |i, j| (i, j) != (k + 1, k + 3));
    g.edges.insert((k, k + 3), Rational::one());
    Ok(g)
}

/// Which 2-tree family a graph belongs to, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Straight { n: usize },
    Bent { n: usize, k: usize },
}

/// Recognizes unit-weight straight and bent 2-trees.
pub fn recognize_family(g: &WeightedGraph) -> Option<Family> {
    let n = g.n();
    if straight_2tree(n).ok().as_ref() == Some(g) {
        return Some(Family::Straight { n });
    }
    if n < 6 {
        return None;
    }
    (3..=n - 3)
        .find(|&k| bent_2tree(n, k).ok().as_ref() == Some(g))
        .map(|k| Family::Bent { n, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(g: &WeightedGraph) -> Vec<(usize, usize)> {
        g.edges().map(|(i, j, _)| (i, j)).collect()
    }

    #[test]
    fn straight_small_cases() {
        let g3 = straight_2tree(3).unwrap();
        assert_eq!(edge_set(&g3), vec![(1, 2), (1, 3), (2, 3)]);

        let g4 = straight_2tree(4).unwrap();
        assert_eq!(edge_set(&g4), vec![(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]);

        let g6 = straight_2tree(6).unwrap();
        assert_eq!(g6.edge_count(), 9);
        assert_eq!(g6.degrees(), vec![2, 3, 4, 4, 3, 2]);

        assert!(straight_2tree(2).is_err());
    }

    #[test]
    fn bent_small_cases() {
        let b = bent_2tree(6, 3).unwrap();
        let mut expected = edge_set(&straight_2tree(6).unwrap());
        expected.retain(|&e| e != (4, 6));
        expected.push((3, 6));
        expected.sort();
        assert_eq!(edge_set(&b), expected);

        assert_eq!(bent_2tree(7, 3).unwrap().degrees(), vec![2, 3, 5, 3, 4, 3, 2]);

        assert!(bent_2tree(6, 4).is_err());
        assert!(bent_2tree(6, 2).is_err());
        assert!(bent_2tree(5, 3).is_err());
        let msg = bent_2tree(6, 5).unwrap_err().to_string();
        assert!(msg.contains("3 <= k <= n-3"), "{msg}");
    }

    #[test]
    fn family_structure() {
        for n in 3..=30 {
            let s = straight_2tree(n).unwrap();
            assert_eq!(s.edge_count(), 2 * n - 3);
            assert!(s.is_biconnected());
            let deg = s.degrees();
            for v in 1..=n {
                // neighbours are the vertices at most two steps away
                let want = (v - 1).min(2) + (n - v).min(2);
                assert_eq!(deg[v - 1], want, "straight n={n} v={v}");
            }
            if n < 6 {
                continue;
            }
            for k in 3..=n - 3 {
                let b = bent_2tree(n, k).unwrap();
                assert_eq!(b.edge_count(), 2 * n - 3);
                assert!(b.is_biconnected());
                let bdeg = b.degrees();
                assert_eq!(bdeg[k - 1], 5);
                assert_eq!(bdeg[k], 3);
                for v in (1..=n).filter(|&v| v != k && v != k + 1) {
                    assert_eq!(bdeg[v - 1], deg[v - 1], "n={n} k={k} v={v}");
                }
                // exactly one edge swapped
                let removed: Vec<_> = s.edges().filter(|(i, j, _)| !b.has_edge(*i, *j)).collect();
                let added: Vec<_> = b.edges().filter(|(i, j, _)| !s.has_edge(*i, *j)).collect();
                assert_eq!(removed.len(), 1);
                assert_eq!(added.len(), 1);
                assert_eq!((removed[0].0, removed[0].1), (k + 1, k + 3));
                assert_eq!((added[0].0, added[0].1), (k, k + 3));
                assert_eq!(recognize_family(&b), Some(Family::Bent { n, k }));
            }
            assert_eq!(recognize_family(&s), Some(Family::Straight { n }));
        }
    }

    #[test]
    fn laplacian_examples() {
        let tri = straight_2tree(3).unwrap().laplacian();
        for i in 1..=3 {
            for j in 1..=3 {
                let want = if i == j { 2 } else { -1 };
                assert_eq!(*tri.get(i, j), Rational::from(want));
            }
        }

        let mut single = WeightedGraph::new(2);
        single.add_edge(1, 2, Rational::from(3)).unwrap();
        let l = single.laplacian();
        assert_eq!(l.row(1), &[Rational::from(3), Rational::from(-3)]);
        assert_eq!(l.row(2), &[Rational::from(-3), Rational::from(3)]);

        let l4 = straight_2tree(4).unwrap().laplacian();
        let diag: Vec<_> = (1..=4).map(|i| l4.get(i, i).clone()).collect();
        assert_eq!(diag, [2, 3, 3, 2].map(Rational::from));
    }

    #[test]
    fn laplacian_invariants() {
        let mut g = bent_2tree(9, 4).unwrap();
        g = g.without_edge(1, 2).unwrap();
        g.add_edge(1, 9, Rational::ratio(7, 3)).unwrap();
        let l = g.laplacian();
        assert!(l.is_symmetric());
        for i in 1..=g.n() {
            assert!(l.row_sum(i).is_zero());
            assert_eq!(*l.get(i, i), g.weighted_degree(i));
            for j in (1..=g.n()).filter(|&j| j != i) {
                let want = g.weight(i, j).map(|w| -w.clone()).unwrap_or_else(Rational::zero);
                assert_eq!(*l.get(i, j), want);
            }
        }
    }

    #[test]
    fn invalid_edges_rejected() {
        let mut g = WeightedGraph::new(3);
        assert!(g.add_edge(1, 1, Rational::one()).is_err());
        assert!(g.add_edge(1, 4, Rational::one()).is_err());
        assert!(g.add_edge(0, 2, Rational::one()).is_err());
        assert!(g.add_edge(1, 2, Rational::zero()).is_err());
        assert!(g.add_edge(1, 2, Rational::from(-1)).is_err());
        g.add_edge(2, 1, Rational::one()).unwrap();
        assert!(g.add_edge(1, 2, Rational::one()).is_err());
    }

    #[test]
    fn connectivity() {
        let mut g = WeightedGraph::new(4);
        g.add_edge(1, 2, Rational::one()).unwrap();
        g.add_edge(3, 4, Rational::one()).unwrap();
        assert!(!g.is_connected());
        g.add_edge(2, 3, Rational::one()).unwrap();
        assert!(g.is_connected());
        assert!(!g.is_biconnected());
    }

    #[test]
    fn edge_list_round_trip() {
        let mut g = bent_2tree(7, 3).unwrap();
        g = g.without_edge(2, 4).unwrap();
        g.add_edge(2, 4, Rational::ratio(5, 3)).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("n 7\n1 2 1/1\n"));
        assert!(text.contains("2 4 5/3\n"));
        let back: WeightedGraph = text.parse().unwrap();
        assert_eq!(back, g);
        assert_eq!(back.fingerprint(), g.fingerprint());
        assert_ne!(g.fingerprint(), bent_2tree(7, 3).unwrap().fingerprint());
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!("".parse::<WeightedGraph>().is_err());
        assert!("m 3\n".parse::<WeightedGraph>().is_err());
        assert!("n 3\n1 2 3 4\n".parse::<WeightedGraph>().is_err());
        assert!("n 3\n1 5 1\n".parse::<WeightedGraph>().is_err());
        assert!("n 3\n1 2 0/1\n".parse::<WeightedGraph>().is_err());
        let g: WeightedGraph = "# triangle\nn 3\n1 2\n2 3 1/1\n\n1 3 2 # heavy\n".parse().unwrap();
        assert_eq!(g.weight(1, 3), Some(&Rational::from(2)));
    }
}
