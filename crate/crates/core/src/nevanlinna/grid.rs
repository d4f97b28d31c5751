use crate::error::{Error, Result};
use crate::exec::Exec;

/// Radii within this relative distance of a zero or pole modulus are moved.
pub const NUDGE_TRIGGER: f64 = 1e-6;
/// Relative outward offset applied to a moved radius.
pub const NUDGE_STEP: f64 = 1e-5;
pub const MIN_NODES: usize = 64;

/// Strictly increasing radii and the angular node count used on each circle.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    radii: Vec<f64>,
    nodes: usize,
    exec: Exec,
}

impl RadialGrid {
    pub fn new(radii: Vec<f64>, nodes: usize) -> Result<Self> {
        if nodes < MIN_NODES {
            return Err(Error::InsufficientGrid(format!(
                "{nodes} angular nodes, need at least {MIN_NODES}"
            )));
        }
        if radii.is_empty() {
            return Err(Error::InsufficientGrid("no radii".into()));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InsufficientGrid(
                "radii must be positive, finite and strictly increasing".into(),
            ));
        }
        Ok(RadialGrid {
            radii,
            nodes,
            exec: Exec::default(),
        })
    }

    /// `points` radii evenly spaced in `log r` from `rmin` to `rmax`.
    pub fn log_spaced(rmin: f64, rmax: f64, points: usize, nodes: usize) -> Result<Self> {
        if points < 2 || !(rmin > 0.0 && rmax > rmin) {
            return Err(Error::InsufficientGrid(format!(
                "log grid needs 0 < rmin < rmax and 2+ points, got {rmin}:{rmax}:{points}"
            )));
        }
        let (a, b) = (rmin.ln(), rmax.ln());
        let radii = (0..points)
            .map(|i| {
                if i + 1 == points {
                    rmax
                } else {
                    (a + (b - a) * i as f64 / (points - 1) as f64).exp()
                }
            })
            .collect();
        Self::new(radii, nodes)
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Result<Self> {
        Self::new(std::mem::take(&mut self.radii), nodes).map(|g| g.with_exec(self.exec))
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Moves radii off the given moduli; `moduli` need not be sorted.
    pub fn nudged(&self, moduli: &[f64]) -> Self {
        let mut radii: Vec<f64> = self.radii.iter().map(|&r| nudge(r, moduli)).collect();
        radii.dedup_by(|a, b| *a <= *b);
        RadialGrid {
            radii,
            nodes: self.nodes,
            exec: self.exec,
        }
    }
}

/// `r`, or a point just outside the modulus it sits on.
pub fn nudge(mut r: f64, moduli: &[f64]) -> f64 {
    for _ in 0..16 {
        match moduli.iter().find(|&&m| m > 0.0 && (r - m).abs() <= NUDGE_TRIGGER * m) {
            Some(&m) => r = m * (1.0 + NUDGE_STEP),
            None => break,
        }
    }
    r
}
