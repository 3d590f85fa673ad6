use std::collections::BTreeMap;

/// Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
///
/// `adjacency[u]` lists the right vertices `0..right` reachable from left
/// vertex `u`, tried in the given order.
#[derive(Debug, Clone)]
pub struct Matching {
    /// Right partner of each left vertex.
    pub left: Vec<Option<usize>>,
    /// Left partner of each right vertex.
    pub right: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_left_perfect(&self) -> bool {
        self.left.iter().all(Option::is_some)
    }
}

pub fn max_bipartite_matching(adjacency: &[Vec<usize>], right: usize) -> Matching {
    let mut m = Matching {
        left: vec![None; adjacency.len()],
        right: vec![None; right],
    };
    let mut seen = vec![false; right];
    for u in 0..adjacency.len() {
        seen.iter_mut().for_each(|s| *s = false);
        augment(adjacency, u, &mut seen, &mut m);
    }
    m
}

fn augment(adjacency: &[Vec<usize>], u: usize, seen: &mut [bool], m: &mut Matching) -> bool {
    for &v in &adjacency[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if m.right[v].is_none_or(|w| augment(adjacency, w, seen, m)) {
            m.left[u] = Some(v);
            m.right[v] = Some(u);
            return true;
        }
    }
    false
}

/// Result of searching a set family for distinct representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sdr<T> {
    /// `reps[i]` is the representative of set `i`.
    Representatives(Vec<T>),
    /// 0-based indices of sets whose union is smaller than their number.
    HallViolation(Vec<usize>),
}

/// A system of distinct representatives, or a subfamily violating Hall's
/// condition when none exists.
pub fn find_sdr<T: Ord + Clone>(family: &[Vec<T>]) -> Sdr<T> {
    let mut index: BTreeMap<&T, usize> = BTreeMap::new();
    let mut elements: Vec<&T> = Vec::new();
    let adjacency: Vec<Vec<usize>> = family
        .iter()
        .map(|set| {
            set.iter()
                .map(|x| {
                    *index.entry(x).or_insert_with(|| {
                        elements.push(x);
                        elements.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    let matching = max_bipartite_matching(&adjacency, elements.len());
    match matching.left.iter().position(Option::is_none) {
        None => Sdr::Representatives(
            matching
                .left
                .iter()
                .map(|v| elements[v.unwrap()].clone())
                .collect(),
        ),
        Some(free) => Sdr::HallViolation(alternating_reach(&adjacency, &matching, free)),
    }
}

/// Sets reachable from an unmatched set by alternating paths. In a maximum
/// matching every element they touch is matched into the same subfamily, so
/// the union has exactly one element fewer than the subfamily.
fn alternating_reach(adjacency: &[Vec<usize>], m: &Matching, start: usize) -> Vec<usize> {
    let mut in_family = vec![false; adjacency.len()];
    let mut seen = vec![false; m.right.len()];
    let mut stack = vec![start];
    in_family[start] = true;
    while let Some(u) = stack.pop() {
        for &v in &adjacency[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if let Some(w) = m.right[v] {
                if !in_family[w] {
                    in_family[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    (0..adjacency.len()).filter(|&i| in_family[i]).collect()
}
