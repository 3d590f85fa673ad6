//! Singularity removal graphs, vital subgraphs, the closed-form PSK vital
//! adjacency and the square-QAM clique certificate.

use crate::constraint::{build_constraints, psk_constraints_closed_form, Cell, ConstraintPartition};
use crate::error::{Error, Result};
use crate::exact::{self, ExactComplex};
use crate::fade_state::{check_psk_order, FadeState};
use crate::graph::Graph;
use crate::signal_set::SignalSet;

/// A graph whose vertex `v` stands for block `vertex_block[v]` of the
/// partition it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalGraph {
    pub graph: Graph,
    pub vertex_block: Vec<usize>,
}

impl RemovalGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn vertex_of_block(&self, block: usize) -> Option<usize> {
        self.vertex_block.iter().position(|&b| b == block)
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self.vertex_block.iter().map(|b| (b + 1).to_string()).collect();
        self.graph.to_dot("srg", Some(&labels))
    }
}

/// One vertex per block; two blocks are adjacent when some cells of theirs
/// share a row label or a column label.
pub fn build_srg(partition: &ConstraintPartition) -> RemovalGraph {
    let m = partition.order();
    let mut g = Graph::new(partition.len());
    let mut line = Vec::with_capacity(m);
    for by_row in [true, false] {
        for a in 0..m {
            line.clear();
            for b in 0..m {
                let cell = if by_row { Cell::new(a, b) } else { Cell::new(b, a) };
                line.push(partition.block_of(cell));
            }
            for (i, &u) in line.iter().enumerate() {
                for &v in &line[i + 1..] {
                    g.add_edge(u, v);
                }
            }
        }
    }
    RemovalGraph {
        graph: g,
        vertex_block: (0..partition.len()).collect(),
    }
}

/// The subgraph induced by the blocks with at least two cells.
pub fn vital_subgraph(g: &RemovalGraph, partition: &ConstraintPartition) -> RemovalGraph {
    let vertices: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| partition.blocks()[g.vertex_block[v]].len() >= 2)
        .collect();
    RemovalGraph {
        graph: g.graph.induced(&vertices),
        vertex_block: vertices.iter().map(|&v| g.vertex_block[v]).collect(),
    }
}

/// Closed-form adjacency of the vital subgraph of `M`-PSK at the `(k, l)`
/// representative. Vertex `v` is constraint `c_{v+1}` of
/// [`psk_constraints_closed_form`].
pub fn psk_vital_adjacency(m: usize, k: usize, l: usize) -> Result<RemovalGraph> {
    check_psk_order(m, 8)?;
    FadeState::psk_representative(m, k, l)?;
    let (mi, h) = (m as i64, (m / 2) as i64);
    let md = |x: i64| x.rem_euclid(mi) as usize;
    let graph = if k != m / 2 && l != m / 2 {
        let (k, l) = (k as i64, l as i64);
        let mut g = Graph::new(2 * m);
        for i in 0..mi {
            let u = i as usize;
            for t in [md(i + k), md(i - k), md(i + l), md(i - l)] {
                g.add_edge(u, t);
            }
            for t in [md(i), md(i + k), md(i - k), md(h + i + l), md(h + i - l), md(i + h)] {
                g.add_edge(u, m + t);
            }
            let v = m + u;
            for t in [md(i), md(i + k), md(i - k), md(h + i + l), md(h + i - l), md(i + h)] {
                g.add_edge(v, t);
            }
            for t in [md(i + k), md(i - k), md(i + l), md(i - l)] {
                g.add_edge(v, m + t);
            }
        }
        g
    } else {
        let q = if l == m / 2 { k } else { l } as i64;
        let mut g = Graph::new(m);
        for i in 0..mi {
            for t in [md(i + q), md(i - q), md(i + h)] {
                g.add_edge(i as usize, t);
            }
        }
        g
    };
    let n = graph.vertex_count();
    Ok(RemovalGraph {
        graph,
        vertex_block: (0..n).collect(),
    })
}

/// Where the closed-form adjacency of one vertex disagrees with the
/// brute-force vital subgraph (1-based vertex numbers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyDiff {
    pub vertex: usize,
    /// In the brute-force graph only.
    pub missing: Vec<usize>,
    /// In the closed form only.
    pub extra: Vec<usize>,
}

/// The vital subgraph built from the numerically grouped constraints of
/// `M`-PSK at the `(k, l)` representative, with vertices renumbered so that
/// vertex `v` is closed-form constraint `c_{v+1}`. `vertex_block` holds the
/// block indices in the grouped partition.
pub fn psk_brute_vital_subgraph(m: usize, k: usize, l: usize) -> Result<RemovalGraph> {
    let formula = psk_constraints_closed_form(m, k, l)?;
    let set = SignalSet::psk(m.trailing_zeros())?;
    let brute = build_constraints(&set, formula.fade_state())?;
    let n = formula.multi_cell_blocks().len();
    if brute.multi_cell_blocks().len() != n {
        return Err(Error::PatternMismatch(format!(
            "{} grouped multi-cell blocks but {n} closed-form constraints",
            brute.multi_cell_blocks().len()
        )));
    }
    let mut to_brute = Vec::with_capacity(n);
    for v in 0..n {
        let mut cells = formula.blocks()[v].clone();
        cells.sort();
        let b = brute.block_of(cells[0]);
        let mut other = brute.blocks()[b].clone();
        other.sort();
        if other != cells {
            return Err(Error::PatternMismatch(format!(
                "closed-form constraint c_{} does not match a grouped block",
                v + 1
            )));
        }
        to_brute.push(b);
    }
    let graph = build_srg(&brute).graph.induced(&to_brute);
    Ok(RemovalGraph {
        graph,
        vertex_block: to_brute,
    })
}

/// Compares [`psk_vital_adjacency`] against [`psk_brute_vital_subgraph`].
/// An empty list means agreement.
pub fn psk_adjacency_diff(m: usize, k: usize, l: usize) -> Result<Vec<AdjacencyDiff>> {
    let closed = psk_vital_adjacency(m, k, l)?;
    let brute = psk_brute_vital_subgraph(m, k, l)?;
    let n = closed.vertex_count();
    let mut diffs = Vec::new();
    for u in 0..n {
        let mut missing = Vec::new();
        let mut extra = Vec::new();
        for v in 0..n {
            if u == v {
                continue;
            }
            match (brute.graph.has_edge(u, v), closed.graph.has_edge(u, v)) {
                (true, false) => missing.push(v + 1),
                (false, true) => extra.push(v + 1),
                _ => {}
            }
        }
        if !missing.is_empty() || !extra.is_empty() {
            diffs.push(AdjacencyDiff {
                vertex: u + 1,
                missing,
                extra,
            });
        }
    }
    Ok(diffs)
}

/// A clique of `M + 1` blocks in the singularity removal graph of square
/// `M`-QAM, one witness cell per block.
#[derive(Debug, Clone)]
pub struct CliqueCertificate {
    pub fade_state: FadeState,
    pub cells: Vec<Cell>,
    /// Block index of each witness cell in the partition at `fade_state`.
    pub blocks: Vec<usize>,
}

/// The `(M + 1)`-clique of the removal graph at `s = -1 - j`.
pub fn qam_clique_certificate(m: usize) -> Result<CliqueCertificate> {
    let set = SignalSet::square_qam(m)?;
    let side = (m as f64).sqrt().round() as usize;
    let mut cells = Vec::with_capacity(m + 1);
    for i in 1..=m - side {
        cells.push(Cell::from_labels(1, i));
    }
    for i in m - side + 1..=m {
        cells.push(Cell::from_labels(side + 2, i + side - m));
    }
    cells.push(Cell::from_labels(2, (m - side + 2) / 2));
    certify(&set, FadeState::from_exact(exact::exact(-1, -1)), cells)
}

/// Certificates at all eight states `+-1 +- j` and `+-0.5 +- 0.5j`, obtained
/// from the one at `-1 - j` by rotating column labels (`x_B -> j x_B` turns
/// `s` into `s / j`) and by transposing (`s` into `1 / s`).
pub fn qam_clique_certificates(m: usize) -> Result<Vec<CliqueCertificate>> {
    let base = qam_clique_certificate(m)?;
    let set = SignalSet::square_qam(m)?;
    let points = set.exact_points().expect("QAM points are exact");
    let rotate: Vec<usize> = points
        .iter()
        .map(|p| {
            let q = ExactComplex::new(-p.im, p.re);
            points.iter().position(|x| *x == q).expect("square QAM is closed under rotation by j")
        })
        .collect();
    let minus_j = exact::exact(0, -1);
    let mut out = Vec::with_capacity(8);
    let mut cells = base.cells.clone();
    let mut s = base.fade_state.exact.unwrap();
    for _ in 0..4 {
        out.push(certify(&set, FadeState::from_exact(s), cells.clone())?);
        let transposed = cells.iter().map(|c| Cell::new(c.col, c.row)).collect();
        out.push(certify(&set, FadeState::from_exact(s.inv()), transposed)?);
        cells = cells.iter().map(|c| Cell::new(c.row, rotate[c.col])).collect();
        s *= minus_j;
    }
    Ok(out)
}

fn certify(set: &SignalSet, s: FadeState, cells: Vec<Cell>) -> Result<CliqueCertificate> {
    let partition = build_constraints(set, &s)?;
    let graph = build_srg(&partition);
    let blocks: Vec<usize> = cells.iter().map(|&c| partition.block_of(c)).collect();
    for (i, &u) in blocks.iter().enumerate() {
        for &v in &blocks[i + 1..] {
            if u == v || !graph.graph.has_edge(u, v) {
                return Err(Error::CertificateMismatch { u: u + 1, v: v + 1 });
            }
        }
    }
    Ok(CliqueCertificate {
        fade_state: s,
        cells,
        blocks,
    })
}

/// A maximal clique grown greedily from each of the highest-degree seeds;
/// the largest one found.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    seeds.truncate(32);
    let mut best: Vec<usize> = Vec::new();
    for seed in seeds {
        let mut clique = vec![seed];
        let mut candidates = g.neighbor_set(seed).clone();
        while let Some(v) = candidates
            .ones()
            .max_by_key(|&v| (g.neighbor_set(v).intersection(&candidates).count(), std::cmp::Reverse(v)))
        {
            clique.push(v);
            candidates.intersect_with(g.neighbor_set(v));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort();
    best
}

pub fn greedy_clique_lower_bound(g: &Graph) -> usize {
    greedy_clique(g).len()
}
