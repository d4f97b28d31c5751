use crate::error::CliError;
use clap::ValueEnum;
use jackson_core::Complex64;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `rmin:rmax:points`, log-spaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub rmin: f64,
    pub rmax: f64,
    pub points: usize,
}

pub const MIN_GRID_POINTS: usize = 4;

/// Everything a command needs besides its positional arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q: Option<Complex64>,
    pub n: Option<usize>,
    pub grid: Option<GridSpec>,
    pub nodes: usize,
    pub tol: Option<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
            }
        }
        if self.nodes < jackson_core::nevanlinna::MIN_NODES {
            return Err(CliError::Usage(format!(
                "--nodes must be at least {}, got {}",
                jackson_core::nevanlinna::MIN_NODES,
                self.nodes
            )));
        }
        Ok(())
    }
}

/// Parses `re+imi`, `re-imi`, `re`, `imi`, with `i` alone meaning one.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse '{text}' as a complex number (expected re+imi)");
    let num = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    match split {
        Some(j) => {
            let re = body[..j].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, num(&body[j..])?))
        }
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

/// Formats a complex number so that [`parse_complex`] reads it back exactly.
pub fn format_complex(z: Complex64) -> String {
    format!("{:e}{:+e}i", z.re, z.im)
}

pub fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid '{text}' must look like rmin:rmax:points"));
    }
    let rmin: f64 = parts[0].parse().map_err(|_| format!("bad rmin '{}'", parts[0]))?;
    let rmax: f64 = parts[1].parse().map_err(|_| format!("bad rmax '{}'", parts[1]))?;
    let points: usize = parts[2]
        .parse()
        .map_err(|_| format!("bad point count '{}'", parts[2]))?;
    if !(rmin > 0.0 && rmax > rmin && rmax.is_finite()) {
        return Err(format!("grid needs 0 < rmin < rmax, got {rmin}:{rmax}"));
    }
    if points < MIN_GRID_POINTS {
        return Err(format!("grid needs at least {MIN_GRID_POINTS} points, got {points}"));
    }
    Ok(GridSpec { rmin, rmax, points })
}
