//! Simple undirected graphs stored as dense adjacency bitsets.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `{u, v}`; loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones(..)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].ones()
    }

    pub fn neighbor_set(&self, u: usize) -> &FixedBitSet {
        &self.adj[u]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.adj.len() {
            out.extend(self.adj[u].ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones(..)).sum::<usize>() / 2
    }

    /// The subgraph induced by `vertices`; vertex `i` of the result is
    /// `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut g = Self::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut g = Self::new(self.adj.len());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Undirected DOT text with one node line per vertex, labelled by
    /// `labels[v]` (or `v + 1` when absent).
    pub fn to_dot(&self, name: &str, labels: Option<&[String]>) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in 0..self.adj.len() {
            let label = labels.map_or_else(|| (v + 1).to_string(), |l| l[v].clone());
            writeln!(out, "  {v} [label=\"{label}\"];").unwrap();
        }
        for (u, v) in self.edges() {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// Reads the subset of DOT written by [`Graph::to_dot`].
    pub fn from_dot(text: &str) -> Result<Self> {
        let mut nodes = 0usize;
        let mut edges = Vec::new();
        for line in text.lines().map(str::trim) {
            let stmt = line.trim_end_matches(';');
            if let Some((a, b)) = stmt.split_once("--") {
                let parse = |s: &str| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad DOT edge: {line}")))
                };
                edges.push((parse(a)?, parse(b)?));
            } else if let Some((id, _)) = stmt.split_once('[') {
                let id: usize = id
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad DOT node: {line}")))?;
                nodes = nodes.max(id + 1);
            }
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= nodes || v >= nodes) {
            return Err(Error::InvalidInput(format!("edge {u} -- {v} names an undeclared node")));
        }
        Ok(Self::from_edges(nodes, &edges))
    }
}
