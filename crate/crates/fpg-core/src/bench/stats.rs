//! Statistics used by the benchmark harness: Welch's unequal-variance t-test
//! (two-sided p via the regularized incomplete beta function), least-squares
//! power-law fits on log-log axes, and small summary helpers.

use crate::error::{Error, Result};
use crate::frac_math::{kahan_sum, ln_gamma};

/// Result of Welch's two-sample t-test.
#[derive(Debug, Clone, Copy)]
pub struct WelchTest {
    pub t: f64,
    /// Welch–Satterthwaite effective degrees of freedom.
    pub dof: f64,
    pub p_two_sided: f64,
}

impl WelchTest {
    /// One-sided p for the alternative "mean(a) < mean(b)".
    pub fn p_less(&self) -> f64 {
        if self.t <= 0.0 {
            self.p_two_sided / 2.0
        } else {
            1.0 - self.p_two_sided / 2.0
        }
    }
}

/// Sample mean and unbiased (n−1) variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = kahan_sum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss = kahan_sum(xs.iter().map(|&x| (x - mean) * (x - mean)));
    (mean, ss / (n - 1.0))
}

/// Population (n-divisor) variance; zero for fewer than two points.
pub fn population_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = kahan_sum(xs.iter().copied()) / n;
    kahan_sum(xs.iter().map(|&x| (x - mean) * (x - mean))) / n
}

/// Welch's t statistic, Satterthwaite dof, and two-sided p.
///
/// Degenerate input (both samples have zero variance) resolves to p = 1 when
/// the means agree and p = 0 with t = ±∞ when they differ.
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<WelchTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData(
            "welch_t needs at least two observations per sample".into(),
        ));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    if va == 0.0 && vb == 0.0 {
        let dof = na + nb - 2.0;
        return Ok(if ma == mb {
            WelchTest { t: 0.0, dof, p_two_sided: 1.0 }
        } else {
            WelchTest {
                t: if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY },
                dof,
                p_two_sided: 0.0,
            }
        });
    }
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    let t = (ma - mb) / se2.sqrt();
    let dof = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    Ok(WelchTest { t, dof, p_two_sided: student_t_two_sided_p(t, dof) })
}

/// Two-sided tail probability of Student's t with `dof` degrees of freedom.
pub fn student_t_two_sided_p(t: f64, dof: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let x = dof / (dof + t * t);
    reg_inc_beta(dof / 2.0, 0.5, x).unwrap_or(f64::NAN)
}

/// Regularized incomplete beta function I_x(a, b) by Lentz's continued
/// fraction, absolute error well below 1e−8 over the tested domain.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "reg_inc_beta requires a, b > 0 and x in [0, 1], got a={a} b={b} x={x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_bt =
        ln_gamma(a + b)? - ln_gamma(a)? - ln_gamma(b)? + a * x.ln() + b * (-x).ln_1p();
    let bt = ln_bt.exp();
    // Continued fraction converges fastest below the symmetry point.
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(bt * beta_cont_frac(a, b, x) / a)
    } else {
        Ok(1.0 - bt * beta_cont_frac(b, a, 1.0 - x) / b)
    }
}

fn beta_cont_frac(a: f64, b: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    const EPS: f64 = 1e-14;
    const MAX_IT: usize = 300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_IT {
        let mf = m as f64;
        let m2 = 2.0 * mf;
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Ordinary least squares on (x, y): returns (slope, intercept, r²).
/// r² is defined as 1 when the ys are constant (a zero-slope line fits
/// perfectly).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() {
        return Err(Error::Dimension(format!(
            "linear_fit: {} xs vs {} ys",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData("linear_fit needs >= 2 points".into()));
    }
    let n = xs.len() as f64;
    let mx = kahan_sum(xs.iter().copied()) / n;
    let my = kahan_sum(ys.iter().copied()) / n;
    let sxx = kahan_sum(xs.iter().map(|&x| (x - mx) * (x - mx)));
    let sxy = kahan_sum(xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)));
    if sxx == 0.0 {
        return Err(Error::InsufficientData("linear_fit: degenerate x values".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot = kahan_sum(ys.iter().map(|&y| (y - my) * (y - my)));
    let ss_res = kahan_sum(
        xs.iter()
            .zip(ys)
            .map(|(&x, &y)| {
                let e = y - (slope * x + intercept);
                e * e
            }),
    );
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok((slope, intercept, r2))
}

/// Least-squares slope of log(var) against log(t) over the second half of the
/// series (the fit window skips the transient). Points with non-positive t or
/// var are dropped first; at least 20 positive points are required.
pub fn variance_decay_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let clean: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(t, v)| t > 0.0 && v > 0.0 && t.is_finite() && v.is_finite())
        .collect();
    if clean.len() < 20 {
        return Err(Error::InsufficientData(format!(
            "variance_decay_fit needs >= 20 positive points, got {}",
            clean.len()
        )));
    }
    let half = &clean[clean.len() / 2..];
    let xs: Vec<f64> = half.iter().map(|&(t, _)| t.ln()).collect();
    let ys: Vec<f64> = half.iter().map(|&(_, v)| v.ln()).collect();
    let (slope, _, r2) = linear_fit(&xs, &ys)?;
    Ok((slope, r2))
}

/// Median (average of the two central order statistics for even n).
pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Lower median of episode counts where `None` means "never reached" and
/// ranks above every finite count. Returns `None` when the median seed never
/// reached the threshold.
pub fn median_episodes(xs: &[Option<usize>]) -> Option<usize> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by_key(|x| (x.is_none(), x.unwrap_or(usize::MAX)));
    v[(v.len() - 1) / 2]
}

/// Half-width of a 95% normal confidence interval for a mean.
pub fn ci95_half(sd: f64, n: usize) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    1.96 * sd / (n as f64).sqrt()
}
