//! The coefficient a(t) of the Hill operator u'' + (a(t) + lambda) u.
//!
//! Three shapes are supported: a constant, a sine family c0 + amp sin(2 pi
//! freq t), and a table of (t, a) samples joined by linear or natural cubic
//! spline interpolation. Only evaluability on all of [0,1] is required, so
//! sampled potentials may be as rough as the data they come from.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Potential {
    /// a(t) = value for every t.
    Constant { value: f64 },
    /// a(t) = c0 + amp * sin(2 pi freq t).
    Sine { c0: f64, amp: f64, freq: f64 },
    /// Interpolation through (t, a) pairs; abscissae strictly increasing,
    /// first 0, last 1.
    Sampled {
        interp: Interp,
        samples: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Linear,
    Cubic,
}

impl Potential {
    pub fn constant(value: f64) -> Self {
        Potential::Constant { value }
    }

    /// Parse the JSON form, e.g. {"kind":"constant","value":-1.0}.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let p: Potential = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if let Potential::Sampled { samples, .. } = self {
            if samples.len() < 2 {
                return Err(Error::PotentialDomain(format!(
                    "need at least 2 samples, got {}",
                    samples.len()
                )));
            }
            for w in samples.windows(2) {
                if !(w[1][0] > w[0][0]) {
                    return Err(Error::PotentialDomain(format!(
                        "sample abscissae must be strictly increasing, got {} then {}",
                        w[0][0], w[1][0]
                    )));
                }
            }
            let first = samples[0][0];
            let last = samples[samples.len() - 1][0];
            if first.abs() > 1e-12 || (last - 1.0).abs() > 1e-12 {
                return Err(Error::PotentialDomain(format!(
                    "samples must cover [0,1], got [{first}, {last}]"
                )));
            }
        }
        Ok(())
    }

    /// Precompute whatever the shape needs and return a cheap per-point
    /// evaluator. Validation happens here so integrators can rely on it.
    pub fn evaluator(&self) -> Result<Evaluator<'_>> {
        self.validate()?;
        Ok(match self {
            Potential::Constant { value } => Evaluator::Constant(*value),
            Potential::Sine { c0, amp, freq } => Evaluator::Sine {
                c0: *c0,
                amp: *amp,
                freq: *freq,
            },
            Potential::Sampled { interp, samples } => match interp {
                Interp::Linear => Evaluator::Linear { samples },
                Interp::Cubic => Evaluator::Cubic {
                    samples,
                    second_derivs: natural_spline_second_derivs(samples),
                },
            },
        })
    }
}

/// Prepared form of a potential; eval is infallible and clamps to [0,1].
pub enum Evaluator<'a> {
    Constant(f64),
    Sine { c0: f64, amp: f64, freq: f64 },
    Linear { samples: &'a [[f64; 2]] },
    Cubic {
        samples: &'a [[f64; 2]],
        second_derivs: Vec<f64>,
    },
}

impl Evaluator<'_> {
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match self {
            Evaluator::Constant(v) => *v,
            Evaluator::Sine { c0, amp, freq } => {
                c0 + amp * (2.0 * std::f64::consts::PI * freq * t).sin()
            }
            Evaluator::Linear { samples } => {
                let i = bracket(samples, t);
                let [t0, a0] = samples[i];
                let [t1, a1] = samples[i + 1];
                a0 + (a1 - a0) * (t - t0) / (t1 - t0)
            }
            Evaluator::Cubic {
                samples,
                second_derivs,
            } => {
                let i = bracket(samples, t);
                let [t0, a0] = samples[i];
                let [t1, a1] = samples[i + 1];
                let h = t1 - t0;
                let x = (t1 - t) / h;
                let y = (t - t0) / h;
                x * a0
                    + y * a1
                    + ((x * x * x - x) * second_derivs[i] + (y * y * y - y) * second_derivs[i + 1])
                        * h
                        * h
                        / 6.0
            }
        }
    }
}

/// Index of the sample interval containing t.
fn bracket(samples: &[[f64; 2]], t: f64) -> usize {
    let mut lo = 0;
    let mut hi = samples.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if samples[mid][0] <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Natural cubic spline: second derivatives at the sample nodes, zero at both
/// ends, via the standard tridiagonal solve.
fn natural_spline_second_derivs(samples: &[[f64; 2]]) -> Vec<f64> {
    let n = samples.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = samples[i][0] - samples[i - 1][0];
        let h1 = samples[i + 1][0] - samples[i][0];
        diag[i] = 2.0 * (h0 + h1);
        rhs[i] = 6.0
            * ((samples[i + 1][1] - samples[i][1]) / h1 - (samples[i][1] - samples[i - 1][1]) / h0);
    }
    // Thomas sweep over the interior unknowns; the natural end conditions
    // leave m[0] = m[n-1] = 0.
    let mut c_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = samples[i][0] - samples[i - 1][0];
        let denom = diag[i] - h0 * c_prime[i - 1];
        let h1 = samples[i + 1][0] - samples[i][0];
        c_prime[i] = h1 / denom;
        rhs[i] = (rhs[i] - h0 * rhs[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = rhs[i] - c_prime[i] * m[i + 1];
    }
    m
}
