use std::fmt;

use super::{threshold_problems, DualCertificate, SLACK};

/// A failed condition in a dual certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum CertViolation {
    Structure(String),
    ThresholdRange { k: usize, value: f64 },
    ThresholdOrder { k: usize },
    ThresholdLast { value: f64 },
    ThresholdPairSum { k: usize, value: f64 },
    BetaRange { value: f64 },
    NegativeDual { k: usize, value: f64 },
    /// Total dual mass below 2.
    DualMass { value: f64 },
    /// Prefix `v_1 + ... + v_{K+1-J}` below 1.
    DualPrefix { j: usize, value: f64 },
    /// Suffix `v_I + ... + v_K` below 1.
    DualSuffix { i: usize, value: f64 },
    /// Coefficient of the no-purchase block is negative.
    NoPurchaseCoefficient { value: f64 },
    /// Coefficient of block `(1, J)` is negative.
    FirstRowCoefficient { j: usize, value: f64 },
    /// Coefficient of block `(I, 1)` is negative.
    FirstColumnCoefficient { i: usize, value: f64 },
    /// Coefficient of block `(I, J)` with `I, J >= 2` is negative.
    InteriorCoefficient { i: usize, j: usize, value: f64 },
}

impl fmt::Display for CertViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CertViolation::*;
        match self {
            Structure(msg) => write!(f, "malformed certificate: {msg}"),
            ThresholdRange { k, value } => write!(f, "b_{k} = {value} outside [0,1]"),
            ThresholdOrder { k } => write!(f, "b_{k} exceeds b_{}", k - 1),
            ThresholdLast { value } => write!(f, "last threshold is {value}, expected 0"),
            ThresholdPairSum { k, value } => write!(f, "b_{k} + b_(K-{k}) = {value} exceeds 1"),
            BetaRange { value } => write!(f, "beta' = {value} outside (0,1)"),
            NegativeDual { k, value } => write!(f, "v_{k} = {value} is negative"),
            DualMass { value } => write!(f, "sum of v is {value}, below 2"),
            DualPrefix { j, value } => write!(f, "prefix sum for J={j} is {value}, below 1"),
            DualSuffix { i, value } => write!(f, "suffix sum for I={i} is {value}, below 1"),
            NoPurchaseCoefficient { value } => {
                write!(f, "no-purchase coefficient 2 - beta'*sum(v) = {value} is negative")
            }
            FirstRowCoefficient { j, value } => {
                write!(f, "coefficient of block (1,{j}) = {value} is negative")
            }
            FirstColumnCoefficient { i, value } => {
                write!(f, "coefficient of block ({i},1) = {value} is negative")
            }
            InteriorCoefficient { i, j, value } => {
                write!(f, "coefficient of block ({i},{j}) = {value} is negative")
            }
        }
    }
}

/// Outcome of [`check_certificate`]; `ratio` is set only when every condition holds.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub violations: Vec<CertViolation>,
    pub ratio: Option<f64>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `v_lo + ... + v_hi` over 1-based indices; empty when `lo > hi`.
fn range_sum(v: &[f64], lo: usize, hi: usize) -> f64 {
    if lo > hi {
        0.0
    } else {
        v[lo - 1..hi].iter().sum()
    }
}

/// Left side of the interior-block inequality for `(I, J)`.
fn interior_lhs(b: &[f64], v: &[f64], beta: f64, i: usize, j: usize) -> f64 {
    let k = b.len();
    let bb = |t: usize| if t == 0 { 1.0 } else { b[t - 1] };
    let s = range_sum(v, i, k + 1 - j);
    let hi = bb(i - 1) + bb(j - 1);
    let lo = bb(i) + bb(j);
    1.0 - beta * s + hi * (s - 1.0) - (hi - lo) * (s - 1.0).max(0.0)
}

/// Verifies every structural, dual-feasibility and threshold condition.
pub fn check_certificate(c: &DualCertificate) -> CertificateReport {
    let mut out = Vec::new();
    let k = c.k;
    if k == 0 || c.b.len() != k || c.v.len() != k {
        out.push(CertViolation::Structure(format!(
            "K={k} with {} thresholds and {} weights",
            c.b.len(),
            c.v.len()
        )));
        return CertificateReport { violations: out, ratio: None };
    }
    out.extend(threshold_problems(&c.b));
    let beta = c.beta_prime;
    if !(beta > 0.0 && beta < 1.0) {
        out.push(CertViolation::BetaRange { value: beta });
    }
    for (idx, &x) in c.v.iter().enumerate() {
        if x < -SLACK || !x.is_finite() {
            out.push(CertViolation::NegativeDual { k: idx + 1, value: x });
        }
    }
    let (b, v) = (&c.b, &c.v);
    let total = range_sum(v, 1, k);
    if total < 2.0 - SLACK {
        out.push(CertViolation::DualMass { value: total });
    }
    for j in 1..=k {
        let s = range_sum(v, 1, k + 1 - j);
        if s < 1.0 - SLACK {
            out.push(CertViolation::DualPrefix { j, value: s });
        }
    }
    for i in 1..=k {
        let s = range_sum(v, i, k);
        if s < 1.0 - SLACK {
            out.push(CertViolation::DualSuffix { i, value: s });
        }
    }
    let a = 2.0 - beta * total;
    if a < -SLACK {
        out.push(CertViolation::NoPurchaseCoefficient { value: a });
    }
    for j in 1..=k {
        let s = range_sum(v, 1, k + 1 - j);
        let val = 1.0 - b[j - 1] + (b[j - 1] - beta) * s;
        if val < -SLACK {
            out.push(CertViolation::FirstRowCoefficient { j, value: val });
        }
    }
    for i in 1..=k {
        let s = range_sum(v, i, k);
        let val = 1.0 - b[i - 1] + (b[i - 1] - beta) * s;
        if val < -SLACK {
            out.push(CertViolation::FirstColumnCoefficient { i, value: val });
        }
    }
    for i in 2..=k {
        for j in 2..=k {
            let val = interior_lhs(b, v, beta, i, j);
            if val < -SLACK {
                out.push(CertViolation::InteriorCoefficient { i, j, value: val });
            }
        }
    }
    let ratio = if out.is_empty() {
        let band = (1..=k).map(|t| b[t - 1] + b[k - t]).fold(f64::INFINITY, f64::min);
        Some(beta.min(band))
    } else {
        None
    };
    CertificateReport { violations: out, ratio }
}

#[cfg(test)]
mod tests {
    use super::super::preset_thresholds;
    use super::*;

    #[test]
    fn presets_pass() {
        let (_, c4) = preset_thresholds(4).unwrap();
        let r = check_certificate(&c4);
        assert!(r.passed(), "{:?}", r.violations);
        assert!((r.ratio.unwrap() - (5.0 + 5f64.sqrt()) / 10.0).abs() < 1e-12);
        let (_, c6) = preset_thresholds(6).unwrap();
        let r = check_certificate(&c6);
        assert!(r.passed(), "{:?}", r.violations);
        assert!((r.ratio.unwrap() - 0.74).abs() < 1e-12);
    }

    #[test]
    fn raised_beta_breaks_no_purchase_row() {
        let (_, mut c) = preset_thresholds(4).unwrap();
        c.beta_prime += 0.01;
        let r = check_certificate(&c);
        assert!(r.ratio.is_none());
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, CertViolation::NoPurchaseCoefficient { .. })));
    }

    #[test]
    fn malformed_lengths() {
        let c = DualCertificate { k: 3, beta_prime: 0.5, b: vec![0.5, 0.0], v: vec![1.0; 3] };
        assert!(matches!(check_certificate(&c).violations[0], CertViolation::Structure(_)));
    }
}
