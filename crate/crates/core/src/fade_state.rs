//! Fade states, singular fade state enumeration and effective constellations.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{self, ExactComplex, Rational};
use crate::signal_set::{SignalKind, SignalSet};

/// Circle parameters of a PSK singular fade state: radius
/// `sin(k pi/M) / sin(l pi/M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PskParams {
    pub order: usize,
    pub k: usize,
    pub l: usize,
}

impl PskParams {
    pub fn radius(&self) -> f64 {
        let m = self.order as f64;
        (PI * self.k as f64 / m).sin() / (PI * self.l as f64 / m).sin()
    }

    pub fn same_parity(&self) -> bool {
        self.k % 2 == self.l % 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FadeState {
    pub value: Complex64,
    pub exact: Option<ExactComplex>,
    pub psk: Option<PskParams>,
}

impl FadeState {
    pub fn new(value: Complex64) -> Self {
        Self {
            value,
            exact: None,
            psk: None,
        }
    }

    pub fn from_exact(value: ExactComplex) -> Self {
        Self {
            value: exact::to_f64(&value),
            exact: Some(value),
            psk: None,
        }
    }

    /// The representative of the `(k, l)` circle for `M`-PSK.
    pub fn psk_representative(m: usize, k: usize, l: usize) -> Result<Self> {
        check_psk_order(m, 8)?;
        if k == 0 || l == 0 || k > m / 2 || l > m / 2 || k == l {
            return Err(Error::InvalidParameter(format!(
                "representative needs 1 <= k, l <= {} with k != l, got k={k}, l={l}",
                m / 2
            )));
        }
        let params = PskParams { order: m, k, l };
        let phase = if params.same_parity() { 0.0 } else { PI / m as f64 };
        Ok(Self {
            value: Complex64::from_polar(params.radius(), phase),
            exact: None,
            psk: Some(params),
        })
    }

    pub fn radius(&self) -> f64 {
        self.value.norm()
    }

    /// Phase in `[0, 2 pi)`.
    pub fn phase(&self) -> f64 {
        normalized_phase(self.value)
    }

    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(e) => e.is_zero(),
            None => self.value.norm() == 0.0,
        }
    }

    pub fn recip(&self) -> Self {
        Self {
            value: self.value.inv(),
            exact: self.exact.as_ref().filter(|e| !e.is_zero()).map(|e| e.inv()),
            psk: self.psk.map(|p| PskParams { k: p.l, l: p.k, ..p }),
        }
    }

    pub fn scale(&self, factor: Complex64, exact_factor: Option<ExactComplex>) -> Self {
        Self {
            value: self.value * factor,
            exact: self.exact.as_ref().zip(exact_factor).map(|(e, f)| e * f),
            psk: None,
        }
    }
}

fn normalized_phase(z: Complex64) -> f64 {
    let mut p = z.arg();
    if p < 0.0 {
        p += 2.0 * PI;
    }
    if p >= 2.0 * PI - 1e-12 {
        p = 0.0;
    }
    p
}

pub(crate) fn check_psk_order(m: usize, min: usize) -> Result<()> {
    if m < min || !m.is_power_of_two() || m > 1 << 16 {
        return Err(Error::InvalidParameter(format!(
            "PSK order must be a power of two >= {min}, got {m}"
        )));
    }
    Ok(())
}

/// The nonzero singular fade states of a signal set, plus the number of
/// quadruples with `x_A = x'_A` that only produce the zero ratio.
#[derive(Debug, Clone)]
pub struct SingularFadeStates {
    pub states: Vec<FadeState>,
    pub zero_count: usize,
}

/// Every distinct `-(x_A - x'_A) / (x_B - x'_B)` with `x_B != x'_B`, sorted by
/// radius then phase.
pub fn enumerate_singular_fade_states(set: &SignalSet) -> Result<SingularFadeStates> {
    let m = set.order();
    let zero_count = m * m * (m - 1);
    let mut states = match set.exact_points() {
        Some(points) => {
            let diffs = exact_differences(points);
            let mut seen = BTreeSet::new();
            for a in &diffs {
                if a.is_zero() {
                    continue;
                }
                for b in &diffs {
                    if !b.is_zero() {
                        let r = -(a / b);
                        seen.insert((r.re, r.im));
                    }
                }
            }
            seen.into_iter()
                .map(|(re, im)| FadeState::from_exact(ExactComplex::new(re, im)))
                .collect::<Vec<_>>()
        }
        None => {
            let mut diffs = Vec::with_capacity(m * m);
            for a in set.points() {
                for b in set.points() {
                    diffs.push(a - b);
                }
            }
            let diffs = exact::cluster(&diffs)?.representatives;
            let nonzero: Vec<Complex64> = diffs
                .into_iter()
                .filter(|d| d.norm() > exact::MERGE_TOLERANCE)
                .collect();
            let mut ratios = Vec::with_capacity(nonzero.len() * nonzero.len());
            for a in &nonzero {
                for b in &nonzero {
                    ratios.push(-(a / b));
                }
            }
            exact::cluster(&ratios)?
                .representatives
                .into_iter()
                .map(FadeState::new)
                .collect()
        }
    };
    if let SignalKind::Psk { .. } = set.kind() {
        for s in &mut states {
            s.psk = identify_psk_circle(m, s.radius());
        }
    }
    sort_states(&mut states);
    Ok(SingularFadeStates { states, zero_count })
}

fn exact_differences(points: &[ExactComplex]) -> Vec<ExactComplex> {
    let mut seen: BTreeSet<(Rational, Rational)> = BTreeSet::new();
    for a in points {
        for b in points {
            let d = a - b;
            seen.insert((d.re, d.im));
        }
    }
    seen.into_iter()
        .map(|(re, im)| ExactComplex::new(re, im))
        .collect()
}

/// The `(k, l)` circle whose radius matches; the unit circle maps to `(1, 1)`.
fn identify_psk_circle(m: usize, radius: f64) -> Option<PskParams> {
    if (radius - 1.0).abs() < 1e-9 {
        return Some(PskParams { order: m, k: 1, l: 1 });
    }
    for k in 1..=m / 2 {
        for l in 1..=m / 2 {
            let p = PskParams { order: m, k, l };
            if k != l && (p.radius() - radius).abs() < 1e-9 {
                return Some(p);
            }
        }
    }
    None
}

fn sort_states(states: &mut [FadeState]) {
    states.sort_by(|a, b| {
        let key = |s: &FadeState| ((s.radius() * 1e7).round() as i64, s.phase());
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
}

/// Closed-form singular fade states of `M`-PSK: `M` points on each circle of
/// radius `sin(k pi/M)/sin(l pi/M)`, at phases `2m pi/M` when `k` and `l`
/// share parity and `(2m+1) pi/M` otherwise.
pub fn psk_singular_fade_states(m: usize) -> Result<Vec<FadeState>> {
    check_psk_order(m, 8)?;
    let mut circles = vec![PskParams { order: m, k: 1, l: 1 }];
    for k in 1..=m / 2 {
        for l in 1..=m / 2 {
            if k != l {
                circles.push(PskParams { order: m, k, l });
            }
        }
    }
    let mut states = Vec::with_capacity(circles.len() * m);
    for p in circles {
        let offset = if p.same_parity() { 0 } else { 1 };
        for t in 0..m {
            let phase = (2 * t + offset) as f64 * PI / m as f64;
            states.push(FadeState {
                value: Complex64::from_polar(p.radius(), phase),
                exact: None,
                psk: Some(p),
            });
        }
    }
    sort_states(&mut states);
    Ok(states)
}

/// One representative per circle with `k != l`, in `(k, l)` order.
pub fn psk_representatives(m: usize) -> Result<Vec<FadeState>> {
    check_psk_order(m, 8)?;
    let mut out = Vec::new();
    for k in 1..=m / 2 {
        for l in 1..=m / 2 {
            if k != l {
                out.push(FadeState::psk_representative(m, k, l)?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct EffectiveConstellation {
    /// Distinct values of `x_A + s x_B`.
    pub points: Vec<Complex64>,
    /// Minimum distance between the `M^2` raw sums; 0 when two coincide.
    pub min_distance: f64,
}

pub fn effective_constellation(set: &SignalSet, s: &FadeState) -> Result<EffectiveConstellation> {
    let raw = raw_sums(set, s);
    let n = raw.len();
    if let (Some(points), Some(e)) = (set.exact_points(), &s.exact) {
        let distinct: BTreeSet<(Rational, Rational)> = points
            .iter()
            .flat_map(|a| points.iter().map(move |b| a + e * b))
            .map(|z| (z.re, z.im))
            .collect();
        let min_distance = if distinct.len() < n { 0.0 } else { min_pairwise(&raw) };
        let points = distinct
            .into_iter()
            .map(|(re, im)| exact::to_f64(&ExactComplex::new(re, im)))
            .collect();
        return Ok(EffectiveConstellation {
            points,
            min_distance,
        });
    }
    Ok(EffectiveConstellation {
        points: exact::cluster(&raw)?.representatives,
        min_distance: min_pairwise(&raw),
    })
}

fn raw_sums(set: &SignalSet, s: &FadeState) -> Vec<Complex64> {
    let pts = set.points();
    pts.iter()
        .flat_map(|a| pts.iter().map(move |b| a + s.value * b))
        .collect()
}

fn min_pairwise(values: &[Complex64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut best = f64::INFINITY;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[j].re - sorted[i].re >= best {
                break;
            }
            best = best.min((sorted[i] - sorted[j]).norm());
        }
    }
    if best <= exact::MERGE_TOLERANCE {
        0.0
    } else {
        best
    }
}

/// True iff the effective constellation has fewer than `M^2` points.
pub fn is_singular(set: &SignalSet, s: &FadeState) -> Result<bool> {
    let m = set.order();
    Ok(effective_constellation(set, s)?.points.len() < m * m)
}

/// Parses `a+bj` (decimal parts are kept exact), `polar:r,theta` (theta in
/// radians) or `psk:k,l` (the representative for an order-`order` PSK set).
pub fn parse_fade_state(text: &str, order: usize) -> Result<FadeState> {
    let text = text.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse fade state {text:?}"));
    if let Some(rest) = text.strip_prefix("psk:") {
        let (k, l) = rest.split_once(',').ok_or_else(bad)?;
        let k = k.trim().parse().map_err(|_| bad())?;
        let l = l.trim().parse().map_err(|_| bad())?;
        return FadeState::psk_representative(order, k, l);
    }
    if let Some(rest) = text.strip_prefix("polar:") {
        let (r, t) = rest.split_once(',').ok_or_else(bad)?;
        let r: f64 = r.trim().parse().map_err(|_| bad())?;
        let t: f64 = t.trim().parse().map_err(|_| bad())?;
        return Ok(FadeState::new(Complex64::from_polar(r, t)));
    }
    let (re, im) = split_complex(text).ok_or_else(bad)?;
    match (exact::parse_decimal(re), exact::parse_decimal(im)) {
        (Some(a), Some(b)) => Ok(FadeState::from_exact(ExactComplex::new(a, b))),
        _ => {
            let a: f64 = re.parse().map_err(|_| bad())?;
            let b: f64 = im.parse().map_err(|_| bad())?;
            Ok(FadeState::new(Complex64::new(a, b)))
        }
    }
}

/// Splits `a+bj`, `a`, `bj` or `j` into real and imaginary literals.
fn split_complex(text: &str) -> Option<(&str, &str)> {
    let Some(body) = text.strip_suffix(['j', 'i']) else {
        return Some((text, "0"));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Some((re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn half_plus_half_j() -> FadeState {
        FadeState::from_exact(ExactComplex::new(Ratio::new(1, 2), Ratio::new(1, 2)))
    }

    #[test]
    fn psk8_counts() {
        let set = SignalSet::psk(3).unwrap();
        let found = enumerate_singular_fade_states(&set).unwrap();
        assert_eq!(found.states.len(), 104);
        assert!(found.states.iter().all(|s| s.psk.is_some()));
        let closed = psk_singular_fade_states(8).unwrap();
        assert_eq!(closed.len(), 104);
        for (a, b) in found.states.iter().zip(&closed) {
            assert!((a.value - b.value).norm() < 1e-9);
        }
        assert_eq!(psk_representatives(8).unwrap().len(), 12);
        assert_eq!(psk_representatives(16).unwrap().len(), 56);
    }

    #[test]
    fn qam4_contains_known_states() {
        let set = SignalSet::square_qam(4).unwrap();
        let found = enumerate_singular_fade_states(&set).unwrap();
        let has = |re: i64, im: i64, den: i64| {
            found.states.iter().any(|s| {
                s.exact == Some(ExactComplex::new(Ratio::new(re, den), Ratio::new(im, den)))
            })
        };
        assert!(has(1, 1, 2));
        for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            assert!(has(a, b, 1));
            assert!(has(a, b, 2));
        }
    }

    #[test]
    fn effective_constellation_of_example() {
        let set = SignalSet::square_qam(4).unwrap();
        let e = effective_constellation(&set, &half_plus_half_j()).unwrap();
        assert_eq!(e.points.len(), 12);
        assert_eq!(e.min_distance, 0.0);
        let zero = effective_constellation(&set, &FadeState::new(Complex64::new(0.0, 0.0))).unwrap();
        assert_eq!(zero.points.len(), 4);
        let huge = effective_constellation(&set, &FadeState::new(Complex64::new(1e6, 0.0))).unwrap();
        assert_eq!(huge.points.len(), 16);
        assert!(!is_singular(&set, &FadeState::new(Complex64::new(0.3, 0.1))).unwrap());
        let pam = SignalSet::pam(4).unwrap();
        assert!(is_singular(&pam, &FadeState::from_exact(exact::exact(-2, 0))).unwrap());
    }

    #[test]
    fn fade_state_syntax() {
        let s = parse_fade_state("0.5+0.5j", 4).unwrap();
        assert_eq!(s.exact, Some(ExactComplex::new(Ratio::new(1, 2), Ratio::new(1, 2))));
        let s = parse_fade_state("-0.5-0.5j", 4).unwrap();
        assert_eq!(s.exact, Some(ExactComplex::new(Ratio::new(-1, 2), Ratio::new(-1, 2))));
        assert_eq!(parse_fade_state("-2", 4).unwrap().exact, Some(exact::exact(-2, 0)));
        assert_eq!(parse_fade_state("-j", 4).unwrap().exact, Some(exact::exact(0, -1)));
        assert_eq!(parse_fade_state("1e-1+2j", 4).unwrap().exact, Some(ExactComplex::new(Ratio::new(1, 10), Ratio::from_integer(2))));
        let p = parse_fade_state("polar:2,0", 4).unwrap();
        assert!((p.value - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        let q = parse_fade_state("psk:1,3", 8).unwrap();
        assert_eq!(q.psk.map(|p| (p.k, p.l)), Some((1, 3)));
        assert!(parse_fade_state("abc", 4).is_err());
        assert!(parse_fade_state("psk:1", 8).is_err());
    }

    #[test]
    fn representative_values() {
        let s = FadeState::psk_representative(8, 1, 3).unwrap();
        let want = (PI / 8.0).sin() / (3.0 * PI / 8.0).sin();
        assert!((s.value - Complex64::new(want, 0.0)).norm() < 1e-12);
        let t = FadeState::psk_representative(16, 1, 2).unwrap();
        let want = Complex64::from_polar((PI / 16.0).sin() / (PI / 8.0).sin(), PI / 16.0);
        assert!((t.value - want).norm() < 1e-12);
        assert!(FadeState::psk_representative(8, 2, 2).is_err());
        assert!(psk_singular_fade_states(12).is_err());
    }
}
