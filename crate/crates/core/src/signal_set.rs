//! Labeled complex constellations. Point `i` (0-based) carries label `i + 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{self, ExactComplex, AMBIGUITY_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    Psk { lambda: u32 },
    SquareQam,
    Pam,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSet {
    kind: SignalKind,
    points: Vec<Complex64>,
    exact: Option<Vec<ExactComplex>>,
}

impl SignalSet {
    /// `M = 2^lambda` points, point `m` at `e^{j(2m-1)pi/M}`.
    pub fn psk(lambda: u32) -> Result<Self> {
        if !(2..=16).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "PSK exponent must be in 2..=16, got {lambda}"
            )));
        }
        let m = 1usize << lambda;
        let points = (1..=m)
            .map(|i| Complex64::from_polar(1.0, (2 * i - 1) as f64 * PI / m as f64))
            .collect();
        Ok(Self {
            kind: SignalKind::Psk { lambda },
            points,
            exact: None,
        })
    }

    /// Square QAM: the point with offsets `(k, l)` is
    /// `(-sqrt(M)+1+2l) + (-sqrt(M)+1+2k)j` and sits at index `k + l*sqrt(M)`.
    pub fn square_qam(m: usize) -> Result<Self> {
        let side = (m as f64).sqrt().round() as usize;
        if m < 4 || side * side != m || !side.is_power_of_two() || m > 1 << 20 {
            return Err(Error::InvalidParameter(format!(
                "square QAM order must be 4^n with n >= 1, got {m}"
            )));
        }
        let off = 1 - side as i64;
        let mut exact_points = vec![exact::exact(0, 0); m];
        for l in 0..side {
            for k in 0..side {
                exact_points[k + l * side] =
                    exact::exact(off + 2 * l as i64, off + 2 * k as i64);
            }
        }
        Ok(Self::from_exact(SignalKind::SquareQam, exact_points))
    }

    /// `M`-PAM on the odd integers `-M+1, ..., M-1`.
    pub fn pam(m: usize) -> Result<Self> {
        if !(2..=1 << 20).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "PAM order must be at least 2, got {m}"
            )));
        }
        let points = (0..m)
            .map(|i| exact::exact(2 * i as i64 + 1 - m as i64, 0))
            .collect();
        Ok(Self::from_exact(SignalKind::Pam, points))
    }

    /// A set given by an explicit point list. Points with small dyadic
    /// coordinates are kept exact.
    pub fn custom(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a signal set needs at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return Err(Error::InvalidParameter(format!("non-finite point {p}")));
        }
        for (i, p) in points.iter().enumerate() {
            for (j, q) in points.iter().enumerate().skip(i + 1) {
                if (p - q).norm() <= AMBIGUITY_TOLERANCE {
                    return Err(Error::InvalidParameter(format!(
                        "points {} and {} coincide ({p} and {q})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let exact = points
            .iter()
            .map(|&p| exact::dyadic_complex(p))
            .collect::<Option<Vec<_>>>();
        Ok(Self {
            kind: SignalKind::Custom,
            points,
            exact,
        })
    }

    fn from_exact(kind: SignalKind, exact_points: Vec<ExactComplex>) -> Self {
        Self {
            kind,
            points: exact_points.iter().map(exact::to_f64).collect(),
            exact: Some(exact_points),
        }
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Exact coordinates, present for QAM, PAM and dyadic custom sets.
    pub fn exact_points(&self) -> Option<&[ExactComplex]> {
        self.exact.as_deref()
    }

    /// Point with 1-based label `label`.
    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label - 1]
    }
}

/// Parses `psk:M`, `qam:M` or `pam:M`.
pub fn parse_signal_set(text: &str) -> Result<SignalSet> {
    let bad = || Error::InvalidParameter(format!("cannot parse signal set {text:?}"));
    let (kind, order) = text.trim().split_once(':').ok_or_else(bad)?;
    let m: usize = order.trim().parse().map_err(|_| bad())?;
    match kind {
        "psk" if m.is_power_of_two() => SignalSet::psk(m.trailing_zeros()),
        "psk" => Err(Error::InvalidParameter(format!("PSK order {m} is not a power of two"))),
        "qam" => SignalSet::square_qam(m),
        "pam" => SignalSet::pam(m),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn psk_points() {
        let s = SignalSet::psk(3).unwrap();
        assert_eq!(s.order(), 8);
        assert!((s.point(1) - Complex64::new(0.92388, 0.38268)).norm() < 1e-5);
        assert!(s.points().iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
        let s4 = SignalSet::psk(2).unwrap();
        assert!(close(s4.point(3), Complex64::from_polar(1.0, 5.0 * PI / 4.0)));
        assert!(SignalSet::psk(1).is_err());
    }

    #[test]
    fn qam_labels() {
        let q = SignalSet::square_qam(4).unwrap();
        let want = [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)];
        for (p, (re, im)) in q.points().iter().zip(want) {
            assert_eq!(*p, Complex64::new(re, im));
        }
        let q16 = SignalSet::square_qam(16).unwrap();
        assert_eq!(q16.point(1), Complex64::new(-3.0, -3.0));
        assert!(q16
            .points()
            .iter()
            .all(|p| p.re.abs() <= 3.0 && p.im.abs() <= 3.0 && p.re as i64 % 2 != 0));
        assert!(SignalSet::square_qam(8).is_err());
        assert!(SignalSet::square_qam(9).is_err());
    }

    #[test]
    fn spec_syntax() {
        assert_eq!(parse_signal_set("psk:8").unwrap().order(), 8);
        assert_eq!(parse_signal_set("qam:16").unwrap().kind(), SignalKind::SquareQam);
        assert_eq!(parse_signal_set("pam:4").unwrap().order(), 4);
        assert!(parse_signal_set("psk:6").is_err());
        assert!(parse_signal_set("foo:4").is_err());
    }

    #[test]
    fn pam_and_custom() {
        let p = SignalSet::pam(4).unwrap();
        let re: Vec<f64> = p.points().iter().map(|z| z.re).collect();
        assert_eq!(re, vec![-3.0, -1.0, 1.0, 3.0]);
        assert!(SignalSet::custom(vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(SignalSet::custom(vec![Complex64::new(1.0, 0.0); 2]).is_err());
        let c = SignalSet::custom(vec![Complex64::new(-3.0, -1.0), Complex64::new(0.1, 0.0)]).unwrap();
        assert!(c.exact_points().is_none());
        assert_eq!(c.point(1), Complex64::new(-3.0, -1.0));
    }
}
