use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::error::{ensure, Error, Result};
use crate::exact::{parse_ratio, ratio_string, ratio_to_f64};

/// A finite probability vector, optionally carrying exact rational weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Distribution {
    labels: Vec<String>,
    weights: Vec<f64>,
    #[serde(skip)]
    exact: Option<Vec<BigRational>>,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl Distribution {
    pub fn from_f64(weights: Vec<f64>) -> Result<Self> {
        let labels = default_labels(weights.len());
        Self::labelled(labels, weights)
    }

    pub fn labelled(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        ensure!(!weights.is_empty(), Validation, "empty distribution");
        ensure!(labels.len() == weights.len(), Usage, "label/weight count mismatch");
        ensure!(weights.iter().all(|w| w.is_finite() && *w >= 0.0), Validation, "weights must be finite and non-negative");
        let s: f64 = weights.iter().sum();
        ensure!((s - 1.0).abs() <= 1e-12, Validation, "weights sum to {s}");
        Ok(Distribution { labels, weights, exact: None })
    }

    pub fn from_exact(weights: Vec<BigRational>) -> Result<Self> {
        let labels = default_labels(weights.len());
        Self::labelled_exact(labels, weights)
    }

    pub fn labelled_exact(labels: Vec<String>, weights: Vec<BigRational>) -> Result<Self> {
        ensure!(!weights.is_empty(), Validation, "empty distribution");
        ensure!(labels.len() == weights.len(), Usage, "label/weight count mismatch");
        ensure!(weights.iter().all(|w| !w.is_negative()), Validation, "negative weight");
        let s = weights.iter().fold(BigRational::zero(), |a, b| a + b);
        ensure!(s.is_one(), Validation, "exact weights sum to {}", ratio_string(&s));
        let floats = weights.iter().map(ratio_to_f64).collect();
        Ok(Distribution { labels, weights: floats, exact: Some(weights) })
    }

    /// Normalizes arbitrary non-negative masses.
    pub fn normalized(masses: &[f64]) -> Result<Self> {
        let s: f64 = masses.iter().sum();
        ensure!(s > 0.0, Validation, "total mass is zero");
        let mut w: Vec<f64> = masses.iter().map(|m| m / s).collect();
        // push rounding residue into the largest entry
        let resid = 1.0 - w.iter().sum::<f64>();
        let imax = (0..w.len()).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap();
        w[imax] += resid;
        Self::from_f64(w)
    }

    pub fn uniform(n: usize) -> Self {
        let w = vec![BigRational::new(1.into(), n.into()); n];
        Self::from_exact(w).expect("uniform law")
    }

    /// Accepts `[w, ...]` or `{"labels": [...], "weights": [...]}`; `"p/q"` strings are exact.
    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let (labels, ws) = match v {
            Value::Array(ws) => (None, ws),
            Value::Object(m) => {
                let ws = m
                    .get("weights")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("missing weights array".into()))?;
                let labels = match m.get("labels") {
                    Some(Value::Array(ls)) => Some(
                        ls.iter()
                            .map(|l| match l {
                                Value::String(s) => s.clone(),
                                other => other.to_string(),
                            })
                            .collect::<Vec<_>>(),
                    ),
                    Some(_) => return Err(Error::Parse("labels must be an array".into())),
                    None => None,
                };
                (labels, ws)
            }
            _ => return Err(Error::Parse("distribution must be an array or object".into())),
        };
        let labels = labels.unwrap_or_else(|| default_labels(ws.len()));
        if ws.iter().all(Value::is_string) {
            let exact = ws
                .iter()
                .map(|w| parse_ratio(w.as_str().unwrap()).ok_or_else(|| Error::Parse(format!("bad rational {w}"))))
                .collect::<Result<Vec<_>>>()?;
            Self::labelled_exact(labels, exact)
        } else {
            let fl = ws
                .iter()
                .map(|w| w.as_f64().ok_or_else(|| Error::Parse(format!("bad weight {w}"))))
                .collect::<Result<Vec<_>>>()?;
            Self::labelled(labels, fl)
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }
}
