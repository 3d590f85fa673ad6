//! Exact Gaussian-rational arithmetic and tolerance-guarded clustering of
//! floating complex values.

use num_complex::{Complex, Complex64};
use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;
pub type ExactComplex = Complex<Rational>;

/// Values closer than this are the same point.
pub const MERGE_TOLERANCE: f64 = 1e-9;
/// Distinct points closer than this make the grouping ambiguous.
pub const AMBIGUITY_TOLERANCE: f64 = 1e-6;

const DYADIC_SCALE: i64 = 1 << 20;

pub fn exact(re: i64, im: i64) -> ExactComplex {
    Complex::new(Ratio::from_integer(re), Ratio::from_integer(im))
}

pub fn to_f64(z: &ExactComplex) -> Complex64 {
    Complex64::new(ratio_to_f64(&z.re), ratio_to_f64(&z.im))
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact rational form of `x` when it is a small dyadic number (integers,
/// halves, quarters and so on), which covers every lattice constellation.
pub fn dyadic(x: f64) -> Option<Rational> {
    if !x.is_finite() || x.abs() > 1e9 {
        return None;
    }
    let scaled = x * DYADIC_SCALE as f64;
    if scaled.fract() != 0.0 {
        return None;
    }
    Some(Ratio::new(scaled as i64, DYADIC_SCALE))
}

pub fn dyadic_complex(z: Complex64) -> Option<ExactComplex> {
    Some(Complex::new(dyadic(z.re)?, dyadic(z.im)?))
}

/// Parses a finite decimal literal (`-0.25`, `3`, `1.5e-1`) into an exact
/// rational. Returns `None` for anything that is not a plain decimal.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: i64 = if all.is_empty() { 0 } else { all.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    let value = if scale >= 0 {
        Ratio::from_integer(numer.checked_mul(10i64.checked_pow(scale as u32)?)?)
    } else {
        Ratio::new(numer, 10i64.checked_pow((-scale) as u32)?)
    };
    Some(if negative { -value } else { value })
}

/// Grouping of a list of floating values into tolerance clusters.
#[derive(Debug, Clone)]
pub struct Clusters {
    /// One representative per cluster, in order of first appearance.
    pub representatives: Vec<Complex64>,
    /// Cluster index of every input value.
    pub assignment: Vec<usize>,
}

impl Clusters {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Merges values within [`MERGE_TOLERANCE`] of each other and rejects any pair
/// that falls strictly between the merge and ambiguity tolerances.
pub fn cluster(values: &[Complex64]) -> Result<Clusters> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re));

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if values[j].re - values[i].re > AMBIGUITY_TOLERANCE {
                break;
            }
            let distance = (values[i] - values[j]).norm();
            if distance <= MERGE_TOLERANCE {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            } else if distance < AMBIGUITY_TOLERANCE {
                return Err(Error::AmbiguousGrouping {
                    a: values[i],
                    b: values[j],
                    distance,
                });
            }
        }
    }

    let mut cluster_of_root = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut assignment = Vec::with_capacity(n);
    for i in 0..n {
        let root = find(&mut parent, i);
        if cluster_of_root[root] == usize::MAX {
            cluster_of_root[root] = representatives.len();
            representatives.push(values[i]);
        }
        assignment.push(cluster_of_root[root]);
    }
    Ok(Clusters {
        representatives,
        assignment,
    })
}

/// True when `a` and `b` contain the same points, matched one-to-one within
/// `tolerance`.
pub fn same_point_set(a: &[Complex64], b: &[Complex64], tolerance: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut sorted_b: Vec<Complex64> = b.to_vec();
    sorted_b.sort_by(|x, y| x.re.total_cmp(&y.re));
    let mut used = vec![false; sorted_b.len()];
    'outer: for p in a {
        let start = sorted_b.partition_point(|q| q.re < p.re - tolerance);
        for (idx, q) in sorted_b.iter().enumerate().skip(start) {
            if q.re > p.re + tolerance {
                break;
            }
            if !used[idx] && (p - q).norm() <= tolerance {
                used[idx] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}
