//! Closed-form `M`-symbol removing Latin Squares for `2^lambda`-PSK.
//!
//! Each representative `(k, l)` is classified by the parities and 2-adic
//! valuations of `k` and `l`. The vital subgraph gets a closed-form 4- or
//! 8-coloring, the colored constraints give a partial grid, and the grid is
//! completed either along wrapped diagonals or by an interchange / SDR /
//! row-matching pipeline.

mod complete;

pub use complete::{
    single_fill_complete, double_fill_complete, construct, diagonal_complete, partial_grid, remove_all_psk,
    FillTrace, Method, PskConstruction,
};

use crate::coloring::{conflict, Coloring};
use crate::error::{Error, Result};
use crate::fade_state::{check_psk_order, FadeState};
use crate::srg::psk_brute_vital_subgraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `k` and `l` both odd.
    BothOdd,
    /// Both even with equal 2-adic valuation.
    SamePower,
    /// Both even with different 2-adic valuations.
    DiffPower,
    /// One odd, one even.
    Mixed,
    /// One of `k, l` is `M/2` and the other is odd.
    SinOdd,
    /// One of `k, l` is `M/2` and the other is even.
    SinEven,
}

impl CaseTag {
    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::BothOdd => "BothOdd",
            CaseTag::SamePower => "SamePower",
            CaseTag::DiffPower => "DiffPower",
            CaseTag::Mixed => "Mixed",
            CaseTag::SinOdd => "SinOdd",
            CaseTag::SinEven => "SinEven",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PskCase {
    pub order: usize,
    pub k: usize,
    pub l: usize,
    /// 2-adic valuations of `k` and `l`.
    pub m1: u32,
    pub m2: u32,
    pub tag: CaseTag,
    /// The construction runs on `(l, k)` and the result is transposed.
    pub swapped: bool,
}

impl PskCase {
    /// Parameters the construction actually runs on.
    pub fn build_params(&self) -> (usize, usize) {
        if self.swapped {
            (self.l, self.k)
        } else {
            (self.k, self.l)
        }
    }

    /// After transposing, the columns are rotated by one to restore the
    /// `e^{j pi/M}` phase of opposite-parity representatives.
    pub fn needs_rotation(&self) -> bool {
        self.swapped && self.k % 2 != self.l % 2
    }

    /// The case of the parameters the construction runs on.
    pub fn build_case(&self) -> PskCase {
        let (k, l) = self.build_params();
        PskCase {
            k,
            l,
            m1: k.trailing_zeros(),
            m2: l.trailing_zeros(),
            swapped: false,
            ..*self
        }
    }
}

pub fn classify(m: usize, k: usize, l: usize) -> Result<PskCase> {
    check_psk_order(m, 8)?;
    FadeState::psk_representative(m, k, l)?;
    let (m1, m2) = (k.trailing_zeros(), l.trailing_zeros());
    let h = m / 2;
    let (tag, swapped) = if k == h || l == h {
        let q = if l == h { k } else { l };
        let tag = if q % 2 == 1 { CaseTag::SinOdd } else { CaseTag::SinEven };
        (tag, k == h)
    } else {
        match (k % 2, l % 2) {
            (1, 1) => (CaseTag::BothOdd, false),
            (0, 0) if m1 == m2 => (CaseTag::SamePower, false),
            (0, 0) => (CaseTag::DiffPower, m1 > m2),
            (0, _) => (CaseTag::Mixed, true),
            _ => (CaseTag::Mixed, false),
        }
    };
    Ok(PskCase {
        order: m,
        k,
        l,
        m1,
        m2,
        tag,
        swapped,
    })
}

/// Closed-form coloring of the vital subgraph for the build parameters of
/// `case`, vertex `v` being constraint `c_{v+1}`. The coloring is checked
/// against the vital subgraph of the numerically grouped constraints.
pub fn vital_coloring(case: &PskCase) -> Result<Coloring> {
    let b = case.build_case();
    let (m, k, l) = (b.order, b.k, b.l);
    let lambda = m.trailing_zeros();
    let parity = |x: usize| if x % 2 == 1 { 1 } else { 2 };
    let labels: Vec<usize> = match b.tag {
        CaseTag::SinOdd => (1..=m)
            .map(|v| parity(v) + if v <= m / 2 { 0 } else { 2 })
            .collect(),
        CaseTag::SinEven => {
            let mq = k.trailing_zeros();
            (1..=m)
                .map(|v| {
                    let i = (v - 1) / (1 << mq) + 1;
                    parity(i) + if i <= 1 << (lambda - mq - 1) { 0 } else { 2 }
                })
                .collect()
        }
        CaseTag::BothOdd => halves(m, 2, parity),
        CaseTag::SamePower => halves(m, 2, |u| parity((u - 1) / (1 << b.m1) + 1)),
        CaseTag::DiffPower => {
            let (m1, m2) = (b.m1, b.m2);
            halves(m, 4, |u| {
                let i = (u - 1) % (1 << (m2 + 1)) / (1 << m1) + 1;
                parity(i) + if i <= 1 << (m2 - m1) { 0 } else { 2 }
            })
        }
        CaseTag::Mixed => {
            let even = if k % 2 == 0 { k } else { l };
            let size = 1 << even.trailing_zeros();
            halves(m, 4, |u| {
                let i = (u - 1) / size + 1;
                parity(u) + if i % 2 == 1 { 0 } else { 2 }
            })
        }
    };
    let coloring = Coloring::from_labels(&labels)?;
    let brute = psk_brute_vital_subgraph(m, k, l)?;
    if let Some((u, v)) = conflict(&brute.graph, &coloring)? {
        return Err(Error::ImproperColoring(format!(
            "{} coloring for M={m}, k={k}, l={l} gives c_{} and c_{} the same color",
            b.tag.name(),
            u + 1,
            v + 1
        )));
    }
    Ok(coloring)
}

/// Labels for `2M` vertices: `f(u)` on the first half, `f(u) + offset` on the
/// second, with `u` the position inside the half.
fn halves(m: usize, offset: usize, f: impl Fn(usize) -> usize) -> Vec<usize> {
    (1..=2 * m)
        .map(|v| if v <= m { f(v) } else { f(v - m) + offset })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(classify(8, 1, 3).unwrap().tag, CaseTag::BothOdd);
        let c = classify(16, 2, 6).unwrap();
        assert_eq!((c.tag, c.m1, c.m2), (CaseTag::SamePower, 1, 1));
        assert_eq!(classify(8, 2, 4).unwrap().tag, CaseTag::SinEven);
        assert_eq!(classify(8, 3, 4).unwrap().tag, CaseTag::SinOdd);
        let c = classify(16, 4, 2).unwrap();
        assert!(c.tag == CaseTag::DiffPower && c.swapped && !c.needs_rotation());
        let c = classify(8, 2, 1).unwrap();
        assert!(c.tag == CaseTag::Mixed && c.swapped && c.needs_rotation());
        assert!(classify(8, 2, 2).is_err());
        assert!(classify(8, 5, 1).is_err());
    }

    #[test]
    fn closed_form_classes() {
        let c = vital_coloring(&classify(8, 1, 3).unwrap()).unwrap();
        let classes: Vec<Vec<usize>> = c
            .classes()
            .iter()
            .map(|cl| cl.iter().map(|v| v + 1).collect())
            .collect();
        assert_eq!(
            classes,
            vec![vec![1, 3, 5, 7], vec![2, 4, 6, 8], vec![9, 11, 13, 15], vec![10, 12, 14, 16]]
        );
        let c = vital_coloring(&classify(8, 2, 4).unwrap()).unwrap();
        assert_eq!(c.classes(), vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]);
    }
}
