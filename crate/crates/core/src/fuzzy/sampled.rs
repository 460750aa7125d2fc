use crate::error::{Error, Result};

/// Fuzzy set represented by its degrees on an evenly sampled universe.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFuzzySet {
    lo: f64,
    hi: f64,
    step: f64,
    degrees: Vec<f64>,
}

/// Number of sample points on `[lo, hi]` at `step`, tolerant to the
/// representation error of decimal steps such as 0.1.
pub fn sample_count(lo: f64, hi: f64, step: f64) -> usize {
    ((hi - lo) / step + 1e-9).floor() as usize + 1
}

impl SampledFuzzySet {
    pub fn empty(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) || !(step > 0.0 && step.is_finite()) {
            return Err(Error::invalid(format!(
                "bad sampling grid [{lo}, {hi}] step {step}"
            )));
        }
        Ok(Self {
            lo,
            hi,
            step,
            degrees: vec![0.0; sample_count(lo, hi, step)],
        })
    }

    pub fn from_degrees(lo: f64, hi: f64, step: f64, degrees: Vec<f64>) -> Result<Self> {
        let mut set = Self::empty(lo, hi, step)?;
        if degrees.len() != set.degrees.len() {
            return Err(Error::invalid(format!(
                "expected {} degrees, got {}",
                set.degrees.len(),
                degrees.len()
            )));
        }
        if let Some(d) = degrees.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::invalid(format!("degree {d} outside [0, 1]")));
        }
        set.degrees = degrees;
        Ok(set)
    }

    pub fn from_fn(lo: f64, hi: f64, step: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut set = Self::empty(lo, hi, step)?;
        for i in 0..set.degrees.len() {
            set.degrees[i] = f(set.point(i)).clamp(0.0, 1.0);
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.iter().all(|&d| d == 0.0)
    }

    pub fn universe(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Indices of the sample points whose degree is at least `alpha`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Vec<usize>> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid(format!("alpha {alpha} outside (0, 1]")));
        }
        Ok(self
            .degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d >= alpha)
            .map(|(i, _)| i)
            .collect())
    }

    pub fn alpha_cut_points(&self, alpha: f64) -> Result<Vec<f64>> {
        Ok(self
            .alpha_cut(alpha)?
            .into_iter()
            .map(|i| self.point(i))
            .collect())
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.lo != other.lo || self.hi != other.hi || self.step != other.step {
            return Err(Error::invalid("fuzzy sets sampled on different grids"));
        }
        Ok(())
    }

    /// Pointwise max.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let mut out = self.clone();
        out.max_assign(other);
        Ok(out)
    }

    /// Pointwise min.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let mut out = self.clone();
        for (d, o) in out.degrees.iter_mut().zip(&other.degrees) {
            *d = d.min(*o);
        }
        Ok(out)
    }

    pub(crate) fn max_assign(&mut self, other: &Self) {
        for (d, o) in self.degrees.iter_mut().zip(&other.degrees) {
            *d = d.max(*o);
        }
    }

    /// Caps every degree at `level` (min-implication).
    pub(crate) fn clip(&mut self, level: f64) {
        for d in &mut self.degrees {
            *d = d.min(level);
        }
    }

    /// Center of mass `sum(x * mu) / sum(mu)`; `None` when every degree is 0.
    pub fn centroid(&self) -> Option<f64> {
        let (num, den) = self
            .degrees
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(num, den), (i, &d)| {
                (num + self.point(i) * d, den + d)
            });
        (den > 0.0).then(|| num / den)
    }

    /// Smallest and largest sample points with positive degree.
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        let first = self.degrees.iter().position(|&d| d > 0.0)?;
        let last = self.degrees.iter().rposition(|&d| d > 0.0)?;
        Some((self.point(first), self.point(last)))
    }
}
