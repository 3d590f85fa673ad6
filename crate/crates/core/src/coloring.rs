//! Proper vertex colorings: verification, greedy heuristics, exact chromatic
//! number by DSATUR branch and bound, and extension of partial colorings.
//!
//! Colors are 0-based here; a color `c` becomes Latin Square symbol `c + 1`.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Self { colors }
    }

    /// From 1-based color labels.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::InvalidInput("color labels start at 1".into()));
        }
        Ok(Self::new(labels.iter().map(|c| c - 1).collect()))
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    /// `max color + 1`.
    pub fn num_colors(&self) -> usize {
        self.colors.iter().max().map_or(0, |c| c + 1)
    }

    /// Vertices of each color class, by color.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_colors()];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// First monochromatic edge, if any.
pub fn conflict(g: &Graph, c: &Coloring) -> Result<Option<(usize, usize)>> {
    if c.len() != g.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "coloring covers {} vertices, graph has {}",
            c.len(),
            g.vertex_count()
        )));
    }
    Ok(g.edges().into_iter().find(|&(u, v)| c.color(u) == c.color(v)))
}

/// True iff no edge is monochromatic. A coloring of the wrong length is an
/// input error.
pub fn verify_proper(g: &Graph, c: &Coloring) -> Result<bool> {
    Ok(conflict(g, c)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOrder {
    /// Vertices in the given order.
    Sequence(Vec<usize>),
    Natural,
    /// Smallest-last order.
    Degeneracy,
    Dsatur,
}

/// First-fit coloring in the chosen order.
pub fn greedy_color(g: &Graph, order: &GreedyOrder) -> Coloring {
    let n = g.vertex_count();
    let sequence: Vec<usize> = match order {
        GreedyOrder::Sequence(s) => s.clone(),
        GreedyOrder::Natural => (0..n).collect(),
        GreedyOrder::Degeneracy => smallest_last(g),
        GreedyOrder::Dsatur => return dsatur_greedy(g),
    };
    let mut colors: Vec<Option<usize>> = vec![None; n];
    for &v in &sequence {
        colors[v] = Some(first_free(g, v, &colors));
    }
    Coloring::new(colors.into_iter().map(|c| c.expect("order covers every vertex")).collect())
}

fn first_free(g: &Graph, v: usize, colors: &[Option<usize>]) -> usize {
    let mut taken = vec![false; g.degree(v) + 1];
    for u in g.neighbors(v) {
        if let Some(c) = colors[u] {
            if c < taken.len() {
                taken[c] = true;
            }
        }
    }
    taken.iter().position(|&t| !t).unwrap()
}

fn smallest_last(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .unwrap();
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    order.reverse();
    order
}

fn dsatur_greedy(g: &Graph) -> Coloring {
    let n = g.vertex_count();
    let palette = max_degree(g) + 1;
    let mut state = State::new(g, palette);
    for _ in 0..n {
        let v = state.select();
        let c = (0..palette).find(|&c| state.sat[v][c] == 0).unwrap();
        state.assign(v, c);
    }
    state.coloring()
}

fn max_degree(g: &Graph) -> usize {
    (0..g.vertex_count()).map(|v| g.degree(v)).max().unwrap_or(0)
}

/// Search state shared by the DSATUR heuristics.
struct State<'a> {
    g: &'a Graph,
    degree: Vec<usize>,
    colors: Vec<Option<usize>>,
    /// `sat[v][c]`: number of neighbours of `v` colored `c`.
    sat: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    class_size: Vec<usize>,
    uncolored: usize,
}

impl<'a> State<'a> {
    fn new(g: &'a Graph, palette: usize) -> Self {
        let n = g.vertex_count();
        Self {
            g,
            degree: (0..n).map(|v| g.degree(v)).collect(),
            colors: vec![None; n],
            sat: vec![vec![0; palette]; n],
            saturation: vec![0; n],
            class_size: vec![0; palette],
            uncolored: n,
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = Some(c);
        self.class_size[c] += 1;
        self.uncolored -= 1;
        for u in self.g.neighbors(v) {
            if self.sat[u][c] == 0 {
                self.saturation[u] += 1;
            }
            self.sat[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v].take().unwrap();
        self.class_size[c] -= 1;
        self.uncolored += 1;
        for u in self.g.neighbors(v) {
            self.sat[u][c] -= 1;
            if self.sat[u][c] == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    /// Highest saturation, then highest degree, then lowest index.
    fn select(&self) -> usize {
        let mut best = usize::MAX;
        for v in 0..self.colors.len() {
            if self.colors[v].is_some() {
                continue;
            }
            if best == usize::MAX
                || (self.saturation[v], self.degree[v]) > (self.saturation[best], self.degree[best])
            {
                best = v;
            }
        }
        best
    }

    fn colors_in_use(&self) -> usize {
        self.class_size.iter().filter(|&&s| s > 0).count()
    }

    fn coloring(&self) -> Coloring {
        Coloring::new(self.colors.iter().map(|c| c.unwrap()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChromaticOutcome {
    Optimal { chi: usize, coloring: Coloring },
    /// The budget ran out; `best` is the best proper coloring found and the
    /// chromatic number lies in `lower..=best.num_colors()`.
    BudgetExhausted { lower: usize, best: Coloring },
}

/// Exact chromatic number by DSATUR branch and bound.
///
/// `lower` must be a valid lower bound (for instance a clique size); the
/// search stops as soon as it meets it. Colorings with more than `upper`
/// colors are never explored, so `upper` must be at least the chromatic
/// number. The greedy DSATUR coloring seeds the incumbent.
pub fn exact_chromatic(g: &Graph, lower: usize, upper: usize, node_budget: u64) -> Result<ChromaticOutcome> {
    if lower > upper {
        return Err(Error::InvalidParameter(format!(
            "lower bound {lower} exceeds upper bound {upper}"
        )));
    }
    let n = g.vertex_count();
    let greedy = dsatur_greedy(g);
    if n == 0 {
        return Ok(ChromaticOutcome::Optimal {
            chi: 0,
            coloring: greedy,
        });
    }
    let greedy_fits = greedy.num_colors() <= upper;
    let mut search = Search {
        state: State::new(g, max_degree(g) + 1),
        limit: if greedy_fits { greedy.num_colors() - 1 } else { upper },
        goal: lower,
        nodes: 0,
        budget: node_budget,
        best: None,
        minimise: true,
    };
    let flow = if greedy_fits && greedy.num_colors() <= lower {
        Flow::Found
    } else {
        search.run()
    };
    let best = search.best.take().or(if greedy_fits { Some(greedy.clone()) } else { None });
    match (flow, best) {
        (Flow::Budget, best) => Ok(ChromaticOutcome::BudgetExhausted {
            lower,
            best: best.unwrap_or(greedy),
        }),
        (_, Some(coloring)) => Ok(ChromaticOutcome::Optimal {
            chi: coloring.num_colors(),
            coloring,
        }),
        (_, None) => Err(Error::InvalidParameter(format!(
            "no proper coloring uses at most {upper} colors"
        ))),
    }
}

/// Clique lower bound, DSATUR upper bound, then [`exact_chromatic`].
pub fn chromatic_number(g: &Graph, node_budget: u64) -> Result<ChromaticOutcome> {
    let lower = crate::srg::greedy_clique_lower_bound(g);
    let upper = dsatur_greedy(g).num_colors();
    exact_chromatic(g, lower, upper, node_budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    Colored(Coloring),
    /// No proper `k`-coloring agrees with the partial coloring.
    Infeasible,
    BudgetExhausted,
}

/// Extends `partial` to a proper coloring with colors `0..k`.
pub fn extend_coloring(g: &Graph, partial: &[Option<usize>], k: usize, node_budget: u64) -> Result<Extension> {
    let n = g.vertex_count();
    if partial.len() != n {
        return Err(Error::InvalidInput(format!(
            "partial coloring covers {} vertices, graph has {n}",
            partial.len()
        )));
    }
    if let Some(v) = (0..n).find(|&v| partial[v].is_some_and(|c| c >= k)) {
        return Err(Error::InvalidInput(format!(
            "vertex {} has color {} outside 0..{k}",
            v + 1,
            partial[v].unwrap()
        )));
    }
    if let Some((u, v)) = g
        .edges()
        .into_iter()
        .find(|&(u, v)| partial[u].is_some() && partial[u] == partial[v])
    {
        return Err(Error::InvalidInput(format!(
            "partial coloring is improper on edge {}-{}",
            u + 1,
            v + 1
        )));
    }
    let mut search = Search {
        state: State::new(g, k.max(1)),
        limit: k,
        goal: 0,
        nodes: 0,
        budget: node_budget,
        best: None,
        minimise: false,
    };
    for (v, c) in partial.iter().enumerate() {
        if let Some(c) = *c {
            search.state.assign(v, c);
        }
    }
    Ok(match search.run() {
        Flow::Found => Extension::Colored(search.best.unwrap()),
        Flow::Exhausted => Extension::Infeasible,
        Flow::Budget => Extension::BudgetExhausted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Found,
    Exhausted,
    Budget,
}

struct Search<'a> {
    state: State<'a>,
    /// Only colors `0..limit` may be used.
    limit: usize,
    /// Stop once a coloring with at most this many colors is found.
    goal: usize,
    nodes: u64,
    budget: u64,
    best: Option<Coloring>,
    minimise: bool,
}

impl Search<'_> {
    fn run(&mut self) -> Flow {
        if self.state.uncolored == 0 {
            let coloring = self.state.coloring();
            if !self.minimise {
                self.best = Some(coloring);
                return Flow::Found;
            }
            let used = self.state.colors_in_use();
            self.best = Some(coloring);
            self.limit = used - 1;
            return if used <= self.goal { Flow::Found } else { Flow::Exhausted };
        }
        let v = self.state.select();
        if self.state.saturation[v] >= self.limit {
            return Flow::Exhausted;
        }
        // one representative of the unused colors
        let fresh = (0..self.limit).find(|&c| self.state.class_size[c] == 0);
        let mut c = 0;
        while c < self.limit {
            let allowed = self.state.sat[v][c] == 0
                && (self.state.class_size[c] > 0 || Some(c) == fresh);
            if allowed {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Flow::Budget;
                }
                self.state.assign(v, c);
                let flow = self.run();
                self.state.unassign(v);
                if flow != Flow::Exhausted {
                    return flow;
                }
            }
            c += 1;
        }
        Flow::Exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    #[test]
    fn verification() {
        let k4 = Graph::complete(4);
        assert!(!verify_proper(&k4, &Coloring::new(vec![0, 1, 2, 0])).unwrap());
        assert!(verify_proper(&Graph::new(3), &Coloring::new(vec![0; 3])).unwrap());
        assert!(verify_proper(&k4, &Coloring::new(vec![0; 3])).is_err());
    }

    #[test]
    fn greedy_orders_are_proper() {
        let g = cycle(7);
        for order in [GreedyOrder::Natural, GreedyOrder::Degeneracy, GreedyOrder::Dsatur] {
            let c = greedy_color(&g, &order);
            assert!(verify_proper(&g, &c).unwrap());
            assert!(c.num_colors() <= 3);
        }
        assert_eq!(greedy_color(&Graph::complete(6), &GreedyOrder::Natural).num_colors(), 6);
        assert_eq!(greedy_color(&Graph::new(5), &GreedyOrder::Dsatur).num_colors(), 1);
    }

    #[test]
    fn exact_small_graphs() {
        let outcome = exact_chromatic(&Graph::complete(7), 1, 7, 1000).unwrap();
        assert!(matches!(outcome, ChromaticOutcome::Optimal { chi: 7, .. }));
        let outcome = exact_chromatic(&cycle(9), 2, 3, 1000).unwrap();
        assert!(matches!(outcome, ChromaticOutcome::Optimal { chi: 3, .. }));
        let outcome = exact_chromatic(&cycle(10), 1, 3, 1000).unwrap();
        assert!(matches!(outcome, ChromaticOutcome::Optimal { chi: 2, .. }));
        assert!(exact_chromatic(&Graph::complete(4), 1, 3, 1000).is_err());
    }

    #[test]
    fn extension() {
        let g = cycle(5);
        let partial = vec![Some(0), None, Some(1), None, None];
        let Extension::Colored(c) = extend_coloring(&g, &partial, 3, 1000).unwrap() else {
            panic!()
        };
        assert!(verify_proper(&g, &c).unwrap());
        assert_eq!(c.color(0), 0);
        assert_eq!(c.color(2), 1);
        let g = cycle(4);
        let partial = vec![Some(0), None, Some(1), None];
        assert_eq!(extend_coloring(&g, &partial, 2, 1000).unwrap(), Extension::Infeasible);
        let bad = vec![Some(0), Some(0), None, None];
        assert!(extend_coloring(&g, &bad, 2, 1000).is_err());
    }
}
