//! Partition-and-optimize rounding of half-integral LP solutions.

mod certificate;
mod gap_eps;
mod partition;
mod sampler;
mod search;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use certificate::{check_certificate, CertViolation, CertificateReport};
pub use gap_eps::{gap_eps_solve, GapEpsResult, DEFAULT_CAP};
pub use partition::{
    candidate_assortments, partition_blocks, round_best, BlockPartition, RoundResult,
};
pub use sampler::{beta_upper_sample, sample_ratio, BlockSample};
pub use search::{beta_prime_max, certificate_for, grid_search_thresholds, SearchResult};

const SLACK: f64 = 1e-9;

/// Cutoffs `b_1 >= ... >= b_K = 0` as fractions of the LP optimum.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdSet {
    b: Vec<f64>,
}

impl ThresholdSet {
    pub fn new(b: Vec<f64>) -> Result<Self> {
        let problems = threshold_problems(&b);
        if let Some(first) = problems.first() {
            return Err(Error::InvalidThresholds(first.to_string()));
        }
        Ok(Self { b })
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    /// `b_k` for `k` in `1..=K`; `b_0` reads as 1.
    pub fn b(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.b[k - 1]
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.b
    }

    /// Worst price-band guarantee among the candidates: `min_k b_k + b_{K+1-k}`.
    pub fn band_ratio(&self) -> f64 {
        let k = self.k();
        (1..=k).map(|i| self.b(i) + self.b(k + 1 - i)).fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn threshold_problems(b: &[f64]) -> Vec<CertViolation> {
    let mut out = Vec::new();
    let k = b.len();
    if k == 0 {
        out.push(CertViolation::Structure("no thresholds".into()));
        return out;
    }
    for (idx, &v) in b.iter().enumerate() {
        if !(-SLACK..=1.0 + SLACK).contains(&v) || !v.is_finite() {
            out.push(CertViolation::ThresholdRange { k: idx + 1, value: v });
        }
        if idx > 0 && v > b[idx - 1] + SLACK {
            out.push(CertViolation::ThresholdOrder { k: idx + 1 });
        }
    }
    if b[k - 1].abs() > SLACK {
        out.push(CertViolation::ThresholdLast { value: b[k - 1] });
    }
    for i in 1..k {
        let s = b[i - 1] + b[k - i - 1];
        if s > 1.0 + SLACK {
            out.push(CertViolation::ThresholdPairSum { k: i, value: s });
        }
    }
    out
}

/// Threshold set plus dual weights and the lower bound they prove.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    #[serde(rename = "K")]
    pub k: usize,
    pub beta_prime: f64,
    pub b: Vec<f64>,
    pub v: Vec<f64>,
}

impl DualCertificate {
    pub fn thresholds(&self) -> Result<ThresholdSet> {
        ThresholdSet::new(self.b.clone())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::parse(path, msg),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

/// The shipped threshold sets and certificates for `K = 4` and `K = 6`.
pub fn preset_thresholds(k: usize) -> Result<(ThresholdSet, DualCertificate)> {
    let cert = match k {
        4 => {
            let s5 = 5f64.sqrt();
            let b1 = (5.0 + s5) / 10.0;
            let v2 = (3.0 - s5) / 2.0;
            DualCertificate {
                k: 4,
                beta_prime: b1,
                b: vec![b1, s5 / 5.0, (5.0 - s5) / 10.0, 0.0],
                v: vec![1.0, v2, v2, 1.0],
            }
        }
        6 => DualCertificate {
            k: 6,
            beta_prime: 0.74,
            b: vec![0.74, 0.484, 0.399, 0.341, 0.256, 0.0],
            v: vec![1.0, 0.23772, 0.11264, 0.11264, 0.23772, 1.0],
        },
        other => return Err(Error::UnsupportedK(other)),
    };
    Ok((cert.thresholds()?, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_values() {
        let (t, c) = preset_thresholds(4).unwrap();
        assert!((t.b(1) - 0.723_606_8).abs() < 1e-7);
        assert!((c.v[1] - 0.381_966_0).abs() < 1e-7);
        let (t6, c6) = preset_thresholds(6).unwrap();
        assert_eq!(c6.beta_prime, 0.74);
        assert!((t6.band_ratio() - 0.74).abs() < 1e-12);
        assert!(matches!(preset_thresholds(5), Err(Error::UnsupportedK(5))));
    }

    #[test]
    fn threshold_validation() {
        assert!(ThresholdSet::new(vec![0.6, 0.5, 0.0]).is_err());
        assert!(ThresholdSet::new(vec![0.5, 0.6, 0.0]).is_err());
        assert!(ThresholdSet::new(vec![0.5, 0.3, 0.1]).is_err());
        assert!(ThresholdSet::new(vec![0.7, 0.3, 0.0]).is_ok());
    }

    #[test]
    fn shipped_files_match_constants() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
        for k in [4, 6] {
            let file = DualCertificate::read(dir.join(format!("k{k}.json"))).unwrap();
            let (_, cert) = preset_thresholds(k).unwrap();
            assert_eq!(file.k, cert.k);
            for (a, b) in file.b.iter().zip(&cert.b).chain(file.v.iter().zip(&cert.v)) {
                assert!((a - b).abs() < 1e-15);
            }
            assert!((file.beta_prime - cert.beta_prime).abs() < 1e-15);
        }
    }
}
