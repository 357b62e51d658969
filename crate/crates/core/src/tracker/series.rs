use crate::error::{Error, Result};

/// Which estimator produced a radius value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// Largest `sigma` keeping `E_sigma(tau) <= 2 E_sigma(0)` on `[0, t]`.
    Energy,
    /// Exponential decay rate of the spectrum.
    Slope,
}

impl Estimator {
    pub fn tag(&self) -> &'static str {
        match self {
            Estimator::Energy => "energy",
            Estimator::Slope => "slope",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusEntry {
    pub time: f64,
    pub sigma_star: f64,
    pub estimator: Estimator,
    /// The estimate hit the top of the search interval.
    pub saturated: bool,
}

/// Time-ordered radius estimates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RadiusSeries {
    entries: Vec<RadiusEntry>,
}

impl RadiusSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<RadiusEntry>) -> Result<Self> {
        let mut s = Self::new();
        for e in entries {
            s.push(e)?;
        }
        Ok(s)
    }

    /// Synthetic unsaturated series from `(t, sigma)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)], estimator: Estimator) -> Result<Self> {
        Self::from_entries(
            pairs
                .iter()
                .map(|&(time, sigma_star)| RadiusEntry {
                    time,
                    sigma_star,
                    estimator,
                    saturated: false,
                })
                .collect(),
        )
    }

    pub fn push(&mut self, entry: RadiusEntry) -> Result<()> {
        if !(entry.sigma_star.is_finite() && entry.sigma_star >= 0.0) {
            return Err(Error::invalid(format!("radius must be finite and >= 0, got {}", entry.sigma_star)));
        }
        if !entry.time.is_finite() {
            return Err(Error::invalid("radius time must be finite"));
        }
        if let Some(last) = self.entries.last() {
            if entry.time <= last.time {
                return Err(Error::invalid(format!(
                    "radius times must increase: {} after {}",
                    entry.time, last.time
                )));
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[RadiusEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].sigma_star <= w[0].sigma_star)
    }

    /// Time of the first entry after the last saturated one.
    pub fn first_unsaturated_time(&self) -> Option<f64> {
        let last_sat = self.entries.iter().rposition(|e| e.saturated);
        let start = last_sat.map_or(0, |i| i + 1);
        self.entries.get(start).map(|e| e.time)
    }
}
