/// Output level of the error monitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdmLevel {
    Normal,
    Warning,
    Drift,
}

/// Running-error drift monitor in the DDM family.
///
/// Tracks the error probability `p` and its binomial deviation
/// `s = sqrt(p (1 - p) / n)`, records the minimum of `p + s`, and signals
/// warning when `p + s` exceeds the recorded minimum by two deviations and
/// drift at three. Comparisons are strict so a flawless stream (p = s = 0)
/// stays at `Normal`. Statistics reset when drift fires.
#[derive(Debug, Clone, PartialEq)]
pub struct Ddm {
    n: u64,
    p: f64,
    p_min: f64,
    s_min: f64,
    min_samples: u64,
}

impl Default for Ddm {
    fn default() -> Self {
        Self::new(30)
    }
}

impl Ddm {
    pub fn new(min_samples: u64) -> Self {
        Self {
            n: 0,
            p: 0.0,
            p_min: f64::INFINITY,
            s_min: f64::INFINITY,
            min_samples,
        }
    }

    pub fn error_rate(&self) -> f64 {
        self.p
    }

    pub fn minima(&self) -> (f64, f64) {
        (self.p_min, self.s_min)
    }

    pub fn samples(&self) -> u64 {
        self.n
    }

    /// Feed one 0/1 error indicator and classify the current level.
    pub fn update(&mut self, error: bool) -> DdmLevel {
        self.n += 1;
        let n = self.n as f64;
        self.p += (f64::from(u8::from(error)) - self.p) / n;
        let s = (self.p * (1.0 - self.p) / n).sqrt();

        if self.n < self.min_samples {
            return DdmLevel::Normal;
        }
        // Minima describe the best observed error regime; before the first
        // error they would be 0/0, turning the thresholds into hair triggers.
        if self.p > 0.0 && self.p + s <= self.p_min + self.s_min {
            self.p_min = self.p;
            self.s_min = s;
        }
        if self.p_min.is_infinite() {
            return DdmLevel::Normal;
        }
        if self.p + s > self.p_min + 3.0 * self.s_min {
            self.reset();
            DdmLevel::Drift
        } else if self.p + s > self.p_min + 2.0 * self.s_min {
            DdmLevel::Warning
        } else {
            DdmLevel::Normal
        }
    }

    fn reset(&mut self) {
        self.n = 0;
        self.p = 0.0;
        self.p_min = f64::INFINITY;
        self.s_min = f64::INFINITY;
    }
}
