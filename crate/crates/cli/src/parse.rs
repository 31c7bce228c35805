//! Value syntaxes used by flags and config files.

use std::fmt;
use std::str::FromStr;

use cohgeom::{c64, Complex64};

fn num(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a number"))
}

fn count(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("'{s}' is not a positive count")),
    }
}

/// Complex number written `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point(pub Complex64);

impl FromStr for Point {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = s.split_once(',').ok_or_else(|| format!("'{s}' is not re,im"))?;
        Ok(Point(c64(num(re)?, num(im)?)))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

/// Points separated by `;`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointList(pub Vec<Complex64>);

impl FromStr for PointList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v = s
            .split(';')
            .map(|p| p.parse::<Point>().map(|p| p.0))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PointList(v))
    }
}

impl fmt::Display for PointList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|z| Point(*z).to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Comma-separated numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(FloatList(s.split(',').map(num).collect::<Result<_, _>>()?))
    }
}

impl fmt::Display for FloatList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(f64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `NxM` sample counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSize {
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for GridSize {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (x, y) = s.split_once('x').ok_or_else(|| format!("'{s}' is not NxM"))?;
        Ok(GridSize {
            nx: count(x)?,
            ny: count(y)?,
        })
    }
}

impl fmt::Display for GridSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.nx, self.ny)
    }
}

/// `name:lo..hi:n`, inclusive endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn range(&self) -> (f64, f64, usize) {
        (self.lo, self.hi, self.n)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                if self.n == 1 {
                    self.lo
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("'{s}' is not name:lo..hi:n");
        let (name, rest) = s.split_once(':').ok_or_else(bad)?;
        let (range, n) = rest.rsplit_once(':').ok_or_else(bad)?;
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        Ok(Axis {
            name: name.trim().to_string(),
            lo: num(lo)?,
            hi: num(hi)?,
            n: count(n)?,
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}..{}:{}", self.name, self.lo, self.hi, self.n)
    }
}

/// Whitespace-separated axes, looked up by name.
#[derive(Debug, Clone, PartialEq)]
pub struct Axes(pub Vec<Axis>);

impl Axes {
    pub fn get(&self, name: &str) -> Result<&Axis, String> {
        self.0
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| format!("grid has no axis '{name}'"))
    }
}

impl FromStr for Axes {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let axes = s.split_whitespace().map(str::parse).collect::<Result<Vec<Axis>, _>>()?;
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].iter().any(|b| b.name == a.name) {
                return Err(format!("axis '{}' given twice", a.name));
            }
        }
        Ok(Axes(axes))
    }
}

impl fmt::Display for Axes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Axis::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Basis cutoff: a fixed count or chosen from the kernel tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Auto,
    Fixed(usize),
}

impl FromStr for Cutoff {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "auto" {
            return Ok(Cutoff::Auto);
        }
        count(s).map(Cutoff::Fixed)
    }
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Auto => write!(f, "auto"),
            Cutoff::Fixed(n) => write!(f, "{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntaxes_round_trip() {
        let axes: Axes = "t:0.5..4:8 s:-2..2:8".parse().unwrap();
        assert_eq!(axes.get("s").unwrap().range(), (-2.0, 2.0, 8));
        assert_eq!(axes.to_string(), "t:0.5..4:8 s:-2..2:8");
        assert_eq!(axes.get("t").unwrap().values()[7], 4.0);
        assert!(axes.get("a").is_err());
        assert_eq!("5x3".parse::<GridSize>().unwrap(), GridSize { nx: 5, ny: 3 });
        assert!("0x3".parse::<GridSize>().is_err());
        assert_eq!(
            "0,1;1,1".parse::<PointList>().unwrap().0,
            vec![c64(0.0, 1.0), c64(1.0, 1.0)]
        );
        assert_eq!("0.2,0.1".parse::<FloatList>().unwrap().0, vec![0.2, 0.1]);
        assert_eq!("auto".parse::<Cutoff>().unwrap(), Cutoff::Auto);
        assert!("t:1..2".parse::<Axis>().is_err());
        assert!("t:1..2:3 t:1..2:3".parse::<Axes>().is_err());
    }
}
