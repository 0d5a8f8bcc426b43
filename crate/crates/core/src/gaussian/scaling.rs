//! Dilation `τ̈ = 2λ/τ − μτ̇`, `τ(0) = 1`, `τ̇(0) = 0`, and the slow time
//! `s(t) = (λ/μ) ∫_0^t τ^{-2}`, for which `s ~ log(t) / 4`.

use super::rk4::{step_count, Rk4};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSolution {
    pub times: Vec<f64>,
    pub tau: Vec<f64>,
    pub taudot: Vec<f64>,
    pub s: Vec<f64>,
}

impl ScalingSolution {
    /// Linear interpolation of τ; `None` outside the recorded range.
    pub fn tau_at(&self, t: f64) -> Option<f64> {
        let (first, last) = (*self.times.first()?, *self.times.last()?);
        if t < first || t > last {
            return None;
        }
        let k = self.times.partition_point(|&s| s < t);
        if k == 0 {
            return Some(self.tau[0]);
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        Some((1.0 - w) * self.tau[k - 1] + w * self.tau[k])
    }
}

pub fn tau_solve(lambda: f64, mu: f64, t_end: f64, dt: f64, record_every: u64) -> Result<ScalingSolution> {
    if !(lambda > 0.0 && mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling needs lambda > 0 and mu > 0, got lambda = {lambda}, mu = {mu}"
        )));
    }
    let n = step_count(t_end, dt)?;
    let record_every = record_every.max(1);
    let rate = lambda / mu;
    let cap = (n / record_every + 2) as usize;
    let mut sol = ScalingSolution {
        times: Vec::with_capacity(cap),
        tau: Vec::with_capacity(cap),
        taudot: Vec::with_capacity(cap),
        s: Vec::with_capacity(cap),
    };
    let mut y = [1.0, 0.0];
    let mut s = 0.0;
    sol.times.push(0.0);
    sol.tau.push(y[0]);
    sol.taudot.push(y[1]);
    sol.s.push(s);
    let mut rk = Rk4::new(2);
    let mut prev = rate / (y[0] * y[0]);
    for step in 1..=n {
        rk.step(&mut y, dt, |y, dy| {
            dy[0] = y[1];
            dy[1] = 2.0 * lambda / y[0] - mu * y[1];
        });
        let t = step as f64 * dt;
        if !(y[0] > 0.0) {
            return Err(Error::Collapse { time: t, r: y[0] });
        }
        let cur = rate / (y[0] * y[0]);
        s += 0.5 * dt * (prev + cur);
        prev = cur;
        if step % record_every == 0 || step == n {
            sol.times.push(t);
            sol.tau.push(y[0]);
            sol.taudot.push(y[1]);
            sol.s.push(s);
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn initial_values_and_interpolation() {
        let sol = tau_solve(0.1, 1.0, 2.0, 1e-3, 100).unwrap();
        assert_eq!(sol.tau[0], 1.0);
        assert_eq!(sol.taudot[0], 0.0);
        assert!(sol.tau.iter().all(|&t| t > 0.0));
        assert_abs_diff_eq!(sol.tau_at(0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.tau_at(1.0).unwrap(), sol.tau[10], epsilon = 1e-12);
        let mid = sol.tau_at(1.05).unwrap();
        assert!(mid > sol.tau[10] && mid < sol.tau[11]);
        assert!(sol.tau_at(2.5).is_none());
    }

    #[test]
    fn short_time_expansion() {
        // τ ≈ 1 + λt² for small t.
        let sol = tau_solve(0.1, 1.0, 0.01, 1e-4, 1).unwrap();
        let t = 0.01;
        assert_abs_diff_eq!(*sol.tau.last().unwrap(), 1.0 + 0.1 * t * t, epsilon = 1e-7);
        assert_abs_diff_eq!(*sol.s.last().unwrap(), 0.1 * t, epsilon = 1e-8);
        assert!(tau_solve(-0.1, 1.0, 1.0, 1e-3, 1).is_err());
    }
}
