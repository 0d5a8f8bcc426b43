/// Work buffers for classical fixed-step RK4 on an autonomous system.
///
/// Every state component goes through the same arithmetic sequence, so
/// decoupled blocks of a larger system evolve bitwise identically to the
/// same blocks integrated alone.
#[derive(Debug, Clone)]
pub(crate) struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub(crate) fn new(dim: usize) -> Self {
        let z = vec![0.0; dim];
        Self { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    #[allow(clippy::needless_range_loop)]
    pub(crate) fn step<F>(&mut self, y: &mut [f64], dt: f64, mut f: F)
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let half = 0.5 * dt;
        f(y, &mut self.k1);
        for i in 0..y.len() {
            self.tmp[i] = y[i] + half * self.k1[i];
        }
        f(&self.tmp, &mut self.k2);
        for i in 0..y.len() {
            self.tmp[i] = y[i] + half * self.k2[i];
        }
        f(&self.tmp, &mut self.k3);
        for i in 0..y.len() {
            self.tmp[i] = y[i] + dt * self.k3[i];
        }
        f(&self.tmp, &mut self.k4);
        let sixth = dt / 6.0;
        for i in 0..y.len() {
            y[i] += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// Number of RK4 steps for `[0, t_end]`; `t_end / dt` is rounded.
pub(crate) fn step_count(t_end: f64, dt: f64) -> crate::error::Result<u64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(crate::error::Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(crate::error::Error::InvalidParameter(format!(
            "t_end must be finite and >= 0, got {t_end}"
        )));
    }
    Ok((t_end / dt).round() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_order_on_exponential() {
        let err = |dt: f64| {
            let mut y = [1.0];
            let mut rk = Rk4::new(1);
            let n = (1.0 / dt).round() as usize;
            for _ in 0..n {
                rk.step(&mut y, dt, |y, dy| dy[0] = -y[0]);
            }
            (y[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn harmonic_oscillator_period() {
        let mut y = [1.0, 0.0];
        let mut rk = Rk4::new(2);
        let dt = std::f64::consts::TAU / 10_000.0;
        for _ in 0..10_000 {
            rk.step(&mut y, dt, |y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            });
        }
        assert!((y[0] - 1.0).abs() < 1e-12 && y[1].abs() < 1e-12);
    }
}
