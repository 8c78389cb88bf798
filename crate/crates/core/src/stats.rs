//! Run aggregation and Welch's two-sample t-test.

use crate::error::{Error, Result};
use crate::evolution::RunTrace;

/// Table-style summary of a multi-run experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub method: String,
    pub run_bests: Vec<f64>,
    pub average_best: f64,
    pub global_best: f64,
    /// `(evaluations, mean over runs of the population average fitness)`.
    pub averaged_trace: Vec<(usize, f64)>,
}

impl ExperimentSummary {
    /// Summary of per-run best fitnesses without trace data.
    pub fn from_bests(method: impl Into<String>, run_bests: Vec<f64>) -> Result<Self> {
        if run_bests.is_empty() {
            return Err(Error::InsufficientData("no runs to summarize".into()));
        }
        let average_best = mean(&run_bests);
        let global_best = run_bests.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(ExperimentSummary {
            method: method.into(),
            run_bests,
            average_best,
            global_best,
            averaged_trace: Vec::new(),
        })
    }
}

pub fn summarize(method: &str, traces: &[RunTrace]) -> Result<ExperimentSummary> {
    let mut summary =
        ExperimentSummary::from_bests(method, traces.iter().map(|t| t.best_fitness).collect())?;
    let schedule: Vec<usize> = traces[0]
        .checkpoints
        .iter()
        .map(|c| c.evaluations)
        .collect();
    for t in traces {
        if !t
            .checkpoints
            .iter()
            .map(|c| c.evaluations)
            .eq(schedule.iter().copied())
        {
            return Err(Error::InsufficientData(
                "traces do not share a checkpoint schedule".into(),
            ));
        }
    }
    summary.averaged_trace = schedule
        .iter()
        .enumerate()
        .map(|(k, &evals)| {
            let avg = traces
                .iter()
                .map(|t| t.checkpoints[k].average_fitness)
                .sum::<f64>()
                / traces.len() as f64;
            (evals, avg)
        })
        .collect();
    Ok(summary)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    /// Two-tailed.
    pub p_value: f64,
}

/// Welch's unequal-variance t-test, two-tailed.
pub fn t_test_two_tailed(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData(
            "each sample needs at least two values".into(),
        ));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let va = variance(a) / na;
    let vb = variance(b) / nb;
    let se2 = va + vb;
    if se2 == 0.0 {
        return Err(Error::UndefinedVariance);
    }
    let t = (mean(a) - mean(b)) / se2.sqrt();
    let df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    let p = regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5);
    Ok(TTestResult {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: p.clamp(0.0, 1.0),
    })
}

/// CDF of Student's t distribution with `df` degrees of freedom.
pub fn student_t_cdf(t: f64, df: f64) -> f64 {
    let tail = 0.5 * regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5);
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    // the continued fraction converges quickly only on this side
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_fraction(x, a, b) / a
    } else {
        1.0 - ln_front.exp() * beta_fraction(1.0 - x, b, a) / b
    }
}

/// Continued fraction for the incomplete beta, modified Lentz method.
fn beta_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..1000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
