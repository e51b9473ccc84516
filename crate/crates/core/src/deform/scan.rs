use std::f64::consts::TAU;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::elements::{fiber_eval, LaurentElement};
use crate::error::{Error, Result};
use crate::norms::{qpoly_norm, Family, NormSpec};
use crate::qcombinat::QParam;
use crate::C64;

/// Sampling path in the q-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScanPath {
    /// q = c·e^{2πi j/N}, starting at q = c.
    Circle { radius: f64 },
    /// arg q = θ with |q| spaced geometrically from `min` to `max`.
    Ray { theta: f64, min: f64, max: f64 },
}

impl ScanPath {
    pub fn samples(&self, count: usize) -> Vec<C64> {
        match *self {
            ScanPath::Circle { radius } => (0..count)
                .map(|j| C64::from_polar(radius, TAU * j as f64 / count as f64))
                .collect(),
            ScanPath::Ray { theta, min, max } => {
                let (a, b) = (min.ln(), max.ln());
                let steps = count.saturating_sub(1).max(1) as f64;
                (0..count)
                    .map(|j| C64::from_polar((a + (b - a) * j as f64 / steps).exp(), theta))
                    .collect()
            }
        }
    }
}

/// `circle:R` or `ray:THETA[:MIN:MAX]` (defaults 0.1 and 10).
impl FromStr for ScanPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("cannot parse path `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        match parts.as_slice() {
            ["circle", r] => {
                let radius = num(r)?;
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::param("circle radius must be positive"));
                }
                Ok(ScanPath::Circle { radius })
            }
            ["ray", t] => Ok(ScanPath::Ray {
                theta: num(t)?,
                min: 0.1,
                max: 10.0,
            }),
            ["ray", t, lo, hi] => {
                let (min, max) = (num(lo)?, num(hi)?);
                if !(min > 0.0 && max > min) {
                    return Err(Error::param("ray needs 0 < min < max"));
                }
                Ok(ScanPath::Ray {
                    theta: num(t)?,
                    min,
                    max,
                })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub q: C64,
    pub norm: f64,
}

/// ‖fiber_eval(a, q)‖ under the polydisk or ball norm at each sample.
pub fn bundle_scan(
    a: &LaurentElement,
    family: Family,
    rho: f64,
    samples: &[C64],
) -> Result<Vec<ScanRow>> {
    if !matches!(family, Family::PolydiskL1 | Family::Ball) {
        return Err(Error::param(format!(
            "scan supports polydisk and ball, not {family}"
        )));
    }
    let spec = NormSpec::simple(family, rho)?;
    samples
        .par_iter()
        .map(|&q| {
            let qp = QParam::new(q)?;
            Ok(ScanRow {
                q,
                norm: qpoly_norm(&fiber_eval(a, qp), &spec)?,
            })
        })
        .collect()
}

/// Largest |Δ norm| / |Δ q| between consecutive samples.
pub fn max_jump_ratio(rows: &[ScanRow]) -> f64 {
    rows.windows(2)
        .map(|w| {
            let dq = (w[1].q - w[0].q).norm();
            if dq == 0.0 {
                0.0
            } else {
                (w[1].norm - w[0].norm).abs() / dq
            }
        })
        .fold(0.0, f64::max)
}

/// Header `q_re,q_im,norm`, 17 significant digits per value.
pub fn write_csv<W: Write>(rows: &[ScanRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "q_re,q_im,norm")?;
    for r in rows {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", r.q.re, r.q.im, r.norm)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcombinat::MultiIndex;

    #[test]
    fn path_parsing() {
        assert_eq!(
            "circle:0.5".parse::<ScanPath>().unwrap(),
            ScanPath::Circle { radius: 0.5 }
        );
        assert!(matches!(
            "ray:0.3".parse::<ScanPath>().unwrap(),
            ScanPath::Ray { .. }
        ));
        assert!("ray:0.3:2:1".parse::<ScanPath>().is_err());
        assert!("square:1".parse::<ScanPath>().is_err());
    }

    #[test]
    fn circle_field_is_constant() {
        let a = LaurentElement::monomial(MultiIndex::new(vec![1, 1]), 0, C64::new(1.0, 0.0));
        let samples = ScanPath::Circle { radius: 0.5 }.samples(64);
        let rows = bundle_scan(&a, Family::PolydiskL1, 1.0, &samples).unwrap();
        assert!(rows.iter().all(|r| (r.norm - 0.5).abs() < 1e-14));
        assert!(bundle_scan(&a, Family::PolydiskL1, 1.0, &[C64::default()]).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = [ScanRow {
            q: C64::new(0.5, 0.0),
            norm: 1.0,
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "q_re,q_im,norm\n5.0000000000000000e-1,0.0000000000000000e0,1.0000000000000000e0\n"
        );
    }
}
