//! Simple undirected graphs on at most 64 vertices, stored as adjacency
//! bit rows, plus exact walk-count tables.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest order accepted by the graph6 reader and writer (single size byte).
pub const GRAPH6_MAX_ORDER: usize = 62;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!((1..=64).contains(&n), "graph order must be in 1..=64");
        Graph { n, adj: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        Graph::empty(n).complement()
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Star with centre 0.
    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (0, i))).unwrap()
    }

    /// Complete bipartite graph, parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_edges(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).unwrap()
    }

    /// Disjoint union, `self` first.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + other.n);
        for (i, j) in self.edges() {
            g.add_edge(i, j);
        }
        for (i, j) in other.edges() {
            g.add_edge(i + self.n, j + self.n);
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if !(1..=64).contains(&n) {
            return Err(Error::OutOfRange(n));
        }
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad edge {u}-{v} for order {n}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows; rows must be symmetric with a zero diagonal.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        if !(1..=64).contains(&n) {
            return Err(Error::OutOfRange(n));
        }
        for (i, &r) in rows.iter().enumerate() {
            if n < 64 && r >> n != 0 {
                return Err(Error::InvalidInput(format!("row {i} has bits beyond order {n}")));
            }
            if r >> i & 1 == 1 {
                return Err(Error::InvalidInput(format!("loop at vertex {i}")));
            }
            for j in 0..n {
                if (r >> j & 1) != (rows[j] >> i & 1) {
                    return Err(Error::InvalidInput(format!("asymmetric pair {i},{j}")));
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    pub fn complement(&self) -> Graph {
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let adj = self.adj.iter().enumerate().map(|(i, r)| !r & full & !(1 << i)).collect();
        Graph { n: self.n, adj }
    }

    /// Removes vertex `i`; the remaining vertices keep their relative order.
    pub fn delete_vertex(&self, i: usize) -> Result<Graph> {
        if self.n < 2 {
            return Err(Error::InvalidInput("cannot delete a vertex of a one-vertex graph".into()));
        }
        if i >= self.n {
            return Err(Error::InvalidInput(format!("vertex {i} out of range for order {}", self.n)));
        }
        let low = (1u64 << i) - 1;
        let adj = self
            .adj
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &r)| (r & low) | ((r >> 1) & !low))
            .collect();
        Ok(Graph { n: self.n - 1, adj })
    }

    /// Relabels so that new vertex `k` is old vertex `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_edge(perm[a], perm[b]) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Number of 4-cycles, counted directly from common neighbourhoods.
    pub fn count_4_cycles(&self) -> u64 {
        let mut twice = 0u64;
        for a in 0..self.n {
            for b in a + 1..self.n {
                let c = (self.adj[a] & self.adj[b]).count_ones() as u64;
                twice += c * c.saturating_sub(1) / 2;
            }
        }
        twice / 2
    }

    fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.adj
            .iter()
            .map(|&r| {
                let mut acc = BigInt::zero();
                let mut bits = r;
                while bits != 0 {
                    acc += &v[bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
                acc
            })
            .collect()
    }

    /// `table[k][i]` is `e_i^T A^k 1`, the number of walks of length `k` from `i`.
    pub fn walk_counts(&self, kmax: usize) -> Vec<Vec<BigInt>> {
        let mut table = Vec::with_capacity(kmax + 1);
        table.push(vec![BigInt::one(); self.n]);
        for k in 1..=kmax {
            let next = self.apply(&table[k - 1]);
            table.push(next);
        }
        table
    }

    /// Closed-walk counts: `diag[k][i] = e_i^T A^k e_i` and `trace[k] = tr A^k`.
    pub fn closed_walk_counts(&self, kmax: usize) -> ClosedWalks {
        let n = self.n;
        // power[c] is column c of A^k
        let mut power: Vec<Vec<BigInt>> = (0..n)
            .map(|c| (0..n).map(|r| if r == c { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut diag = Vec::with_capacity(kmax + 1);
        let mut trace = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            if k > 0 {
                power = power.iter().map(|col| self.apply(col)).collect();
            }
            let d: Vec<BigInt> = (0..n).map(|i| power[i][i].clone()).collect();
            trace.push(d.iter().sum());
            diag.push(d);
        }
        ClosedWalks { diag, trace }
    }

    /// `1^T A^k 1` for `0 <= k <= kmax`.
    pub fn total_walks(&self, kmax: usize) -> Vec<BigInt> {
        self.walk_counts(kmax).into_iter().map(|col| col.into_iter().sum()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedWalks {
    pub diag: Vec<Vec<BigInt>>,
    pub trace: Vec<BigInt>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}", self.n)?;
        for (i, j) in self.edges() {
            write!(f, " {i}-{j}")?;
        }
        write!(f, ")")
    }
}

/// Decodes a graph6 string (orders up to 62).
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    for (offset, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::Parse { offset, message: format!("byte {b:#04x} is not a graph6 character") });
        }
    }
    let Some(&head) = bytes.first() else {
        return Err(Error::Parse { offset: 0, message: "empty input".into() });
    };
    if head == 126 {
        return Err(Error::Parse { offset: 0, message: "multi-byte order prefix not supported (n > 62)".into() });
    }
    let n = (head - 63) as usize;
    if n == 0 {
        return Err(Error::Parse { offset: 0, message: "order 0 is not supported".into() });
    }
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    let body = &bytes[1..];
    if body.len() < nbytes {
        return Err(Error::Parse { offset: bytes.len(), message: format!("truncated: expected {nbytes} data bytes") });
    }
    if body.len() > nbytes {
        return Err(Error::Parse { offset: 1 + nbytes, message: "trailing bytes after bit field".into() });
    }
    let mut g = Graph::empty(n);
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[idx / 6] - 63;
            if byte >> (5 - idx % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            idx += 1;
        }
    }
    if !nbits.is_multiple_of(6) {
        let last = body[nbytes - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Error::Parse { offset: nbytes, message: "nonzero padding bits".into() });
        }
    }
    Ok(g)
}

pub fn emit_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(Error::OutOfRange(n));
    }
    let mut out = vec![n as u8 + 63];
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Reads the edge-list format: a `n m` header line, then `m` lines `u v` (0-based).
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut offset = 0;
    let mut lines = Vec::new();
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("").trim();
        if !content.is_empty() {
            lines.push((offset, content));
        }
        offset += line.len();
    }
    let mut it = lines.into_iter();
    let (hoff, header) = it.next().ok_or(Error::Parse { offset: 0, message: "missing header".into() })?;
    let nums = |off: usize, s: &str| -> Result<Vec<usize>> {
        s.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { offset: off, message: format!("bad integer {t:?}") }))
            .collect()
    };
    let h = nums(hoff, header)?;
    let [n, m] = h[..] else {
        return Err(Error::Parse { offset: hoff, message: "header must be `n m`".into() });
    };
    let mut edges = Vec::with_capacity(m);
    for (off, line) in it {
        let e = nums(off, line)?;
        let [u, v] = e[..] else {
            return Err(Error::Parse { offset: off, message: "edge line must be `u v`".into() });
        };
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse { offset: text.len(), message: format!("expected {m} edges, found {}", edges.len()) });
    }
    Graph::from_edges(n, edges)
}

/// Accepts either graph6 or the edge-list format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let t = text.trim();
    if t.contains(char::is_whitespace) || t.chars().all(|c| c.is_ascii_digit()) {
        parse_edge_list(text)
    } else {
        parse_graph6(t)
    }
}
