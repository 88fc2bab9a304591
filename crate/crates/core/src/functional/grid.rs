//! Functionals sampled on a uniform grid of the real line.
//!
//! A [`GridFunctional`] stands for `f + ι_X` where `X` is the finite set of
//! grid points: the value is `+∞` off the grid and wherever the stored value is
//! `+∞`. All conjugates, means and entropies are taken of this functional.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::extended::{ExtendedReal, Finite, Infinity};
use crate::error::{Error, Result};

/// `n` equally spaced points `x_i = x_min + i·h`, `h = (x_max − x_min)/(n − 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

#[derive(Deserialize)]
struct RawSpec {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl TryFrom<RawSpec> for GridSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        GridSpec::new(r.x_min, r.x_max, r.n)
    }
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n}")));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidGrid(format!("bad interval [{x_min}, {x_max}]")));
        }
        Ok(GridSpec { x_min, x_max, n })
    }

    /// Symmetric grid `[−r, r]`.
    pub fn symmetric(r: f64, n: usize) -> Result<Self> {
        GridSpec::new(-r, r, n)
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Index of the grid point nearest to `x`, if `x` lies in the grid interval.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        if !(x >= self.x_min && x <= self.x_max) {
            return None;
        }
        Some((((x - self.x_min) / self.step()).round() as usize).min(self.n - 1))
    }
}

/// A proper functional sampled on a [`GridSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunctional")]
pub struct GridFunctional {
    #[serde(flatten)]
    spec: GridSpec,
    values: Vec<ExtendedReal>,
}

#[derive(Deserialize)]
struct RawFunctional {
    #[serde(flatten)]
    spec: RawSpec,
    values: Vec<ExtendedReal>,
}

impl TryFrom<RawFunctional> for GridFunctional {
    type Error = Error;
    fn try_from(r: RawFunctional) -> Result<Self> {
        GridFunctional::new(GridSpec::try_from(r.spec)?, r.values)
    }
}

impl GridFunctional {
    /// Rejects length mismatches and functionals that are `+∞` everywhere.
    pub fn new(spec: GridSpec, values: Vec<ExtendedReal>) -> Result<Self> {
        if values.len() != spec.n {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                spec.n
            )));
        }
        if !values.iter().any(|v| v.is_finite()) {
            return Err(Error::InvalidGrid("functional is +inf everywhere (not proper)".into()));
        }
        if values.iter().any(|v| matches!(v, Finite(x) if !x.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(GridFunctional { spec, values })
    }

    /// Samples `f`; `f64::INFINITY` becomes `+∞`, `NaN` and `−∞` are errors.
    pub fn from_fn(spec: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = spec
            .points()
            .into_iter()
            .map(|x| ExtendedReal::from_f64(f(x)).ok_or(Error::NonFinite))
            .collect::<Result<Vec<_>>>()?;
        GridFunctional::new(spec, values)
    }

    /// Same as `from_fn`, but `+∞` outside `[lo, hi]`.
    pub fn from_fn_on(spec: GridSpec, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        GridFunctional::from_fn(spec, |x| if x >= lo && x <= hi { f(x) } else { f64::INFINITY })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.spec.step()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.spec.point(i)
    }

    pub fn values(&self) -> &[ExtendedReal] {
        &self.values
    }

    pub fn value(&self, i: usize) -> ExtendedReal {
        self.values[i]
    }

    /// The effective domain: indices with a finite value.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i].is_finite()).collect()
    }

    pub fn is_everywhere_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// True when `i − 1`, `i`, `i + 1` all carry finite values.
    pub fn is_interior(&self, i: usize) -> bool {
        i >= 1 && i + 1 < self.len() && (i - 1..=i + 1).all(|j| self.values[j].is_finite())
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (1..self.len().saturating_sub(1)).filter(|&i| self.is_interior(i)).collect()
    }

    /// `(x_i, f(x_i))` over the effective domain.
    pub fn finite_points(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.finite().map(|y| (i, self.x(i), y)))
    }

    /// Largest finite `|f(x_i)|`.
    pub fn sup_abs(&self) -> f64 {
        self.finite_points().map(|(_, _, y)| y.abs()).fold(0.0, f64::max)
    }

    pub fn same_grid(&self, other: &GridFunctional) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "grids differ: {:?} vs {:?}",
                self.spec, other.spec
            )))
        }
    }

    /// Pointwise map; the closure receives `x_i` and the stored value.
    pub fn map(&self, f: impl Fn(f64, ExtendedReal) -> ExtendedReal) -> Result<GridFunctional> {
        let values = (0..self.len()).map(|i| f(self.x(i), self.values[i])).collect();
        GridFunctional::new(self.spec, values)
    }

    /// Pointwise combination of two functionals on the same grid.
    pub fn zip_with(
        &self,
        other: &GridFunctional,
        f: impl Fn(ExtendedReal, ExtendedReal) -> ExtendedReal,
    ) -> Result<GridFunctional> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        GridFunctional::new(self.spec, values)
    }

    /// CSV with header `x,value`; `+∞` is written as `inf`. Finite values use
    /// the shortest representation that parses back to the same bits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "{:?},{}", self.x(i), fmt_value(self.values[i]));
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<GridFunctional> {
        let mut rows: Vec<(f64, ExtendedReal)> = Vec::new();
        let mut header_seen = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            if !header_seen {
                header_seen = true;
                if line.replace(' ', "") == "x,value" {
                    continue;
                }
            }
            let mut fields = line.split(',').map(str::trim);
            let (Some(xs), Some(vs), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_err(format!("expected two fields, got {line:?}")));
            };
            let x: f64 = xs.parse().map_err(|e| parse_err(format!("{xs:?}: {e}")))?;
            let v = match vs {
                "inf" | "+inf" | "Infinity" => Infinity,
                _ => {
                    let v: f64 = vs.parse().map_err(|e| parse_err(format!("{vs:?}: {e}")))?;
                    ExtendedReal::from_f64(v).ok_or_else(|| parse_err(format!("{vs:?} is not allowed")))?
                }
            };
            rows.push((x, v));
        }
        if rows.len() < 2 {
            return Err(Error::InvalidGrid("a grid functional needs at least 2 rows".into()));
        }
        let spec = GridSpec::new(rows[0].0, rows[rows.len() - 1].0, rows.len())?;
        let h = spec.step();
        for (i, &(x, _)) in rows.iter().enumerate() {
            if (x - spec.point(i)).abs() > 1e-6 * h {
                return Err(Error::InvalidGrid(format!(
                    "row {} has x = {x}, expected uniform spacing (x = {})",
                    i + 1,
                    spec.point(i)
                )));
            }
        }
        GridFunctional::new(spec, rows.into_iter().map(|(_, v)| v).collect())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<GridFunctional> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        GridFunctional::parse_csv(&text)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

fn fmt_value(v: ExtendedReal) -> String {
    match v {
        Finite(y) => format!("{y:?}"),
        Infinity => "inf".to_string(),
    }
}

/// Largest `|a_i − b_i|` over indices where both are finite, and the number of
/// indices where exactly one of them is finite.
pub fn sup_deviation(a: &[ExtendedReal], b: &[ExtendedReal]) -> (f64, usize) {
    let mut dev: f64 = 0.0;
    let mut mismatched = 0;
    for (&x, &y) in a.iter().zip(b) {
        match (x, y) {
            (Finite(x), Finite(y)) => dev = dev.max((x - y).abs()),
            (Infinity, Infinity) => {}
            _ => mismatched += 1,
        }
    }
    (dev, mismatched)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_points() {
        let s = GridSpec::new(-1.0, 1.0, 3).unwrap();
        assert_eq!(s.points(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(s.nearest_index(0.4), Some(1));
        assert_eq!(s.nearest_index(1.5), None);
        assert!(GridSpec::new(0.0, 1.0, 1).is_err());
        assert!(GridSpec::new(1.0, 0.0, 5).is_err());
    }

    #[test]
    fn properness_enforced() {
        let s = GridSpec::new(0.0, 1.0, 3).unwrap();
        assert!(GridFunctional::new(s, vec![Infinity; 3]).is_err());
        assert!(GridFunctional::new(s, vec![Finite(0.0); 2]).is_err());
        let f = GridFunctional::new(s, vec![Infinity, Finite(1.0), Infinity]).unwrap();
        assert_eq!(f.domain(), vec![1]);
        assert!(!f.is_interior(1));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let s = GridSpec::new(-2.0, 3.0, 7).unwrap();
        let f = GridFunctional::from_fn_on(s, -1.0, 2.5, |x| (x * 1.1).exp() / 3.0).unwrap();
        let text = f.to_csv();
        assert!(text.starts_with("x,value\n"));
        assert!(text.contains(",inf"));
        let back = GridFunctional::parse_csv(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        match GridFunctional::parse_csv("x,value\n0,1\n1,oops\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(GridFunctional::parse_csv("x,value\n0,1\n1,2\n5,3\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = GridSpec::new(-1.0, 1.0, 4).unwrap();
        let f = GridFunctional::from_fn_on(s, -0.5, 1.0, |x| x / 3.0).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: GridFunctional = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
