use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Multi-channel signal sampled at shared time stamps, linear in between.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Signal {
    times: Vec<f64>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Signal {
    /// Empty signal over the given time stamps; add channels with
    /// [`Signal::with_channel`]. Times must be finite and strictly increasing.
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if let Some(i) = times.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidSignal(format!("time {i} is not finite")));
        }
        if let Some(i) = times.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSignal(format!("times not strictly increasing at sample {}", i + 1)));
        }
        Ok(Self { times, names: Vec::new(), columns: Vec::new() })
    }

    pub fn with_channel(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        self.push_channel(name, values)?;
        Ok(self)
    }

    /// Adds or replaces a channel.
    pub fn push_channel(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.times.len() {
            return Err(Error::InvalidSignal(format!(
                "channel `{name}` has {} samples, expected {}",
                values.len(),
                self.times.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("channel `{name}` sample {i} is not finite")));
        }
        match self.names.iter().position(|n| *n == name) {
            Some(k) => self.columns[k] = values,
            None => {
                self.names.push(name);
                self.columns.push(values);
            }
        }
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start(&self) -> Option<f64> {
        self.times.first().copied()
    }

    pub fn end(&self) -> Option<f64> {
        self.times.last().copied()
    }

    /// Channel names in insertion order.
    pub fn channel_names(&self) -> &[String] {
        &self.names
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|k| self.columns[k].as_slice())
    }

    pub fn has_channel(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Linear interpolation of a channel at `t`; `None` for unknown channels
    /// or `t` outside the sampled span.
    pub fn value_at(&self, name: &str, t: f64) -> Option<f64> {
        let v = self.channel(name)?;
        let ts = &self.times;
        if ts.is_empty() || t < ts[0] || t > ts[ts.len() - 1] {
            return None;
        }
        let p = ts.partition_point(|&x| x < t);
        if ts[p] == t {
            return Some(v[p]);
        }
        let w = (t - ts[p - 1]) / (ts[p] - ts[p - 1]);
        Some(v[p - 1] + w * (v[p] - v[p - 1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn build_and_query() {
        let s = Signal::new(vec![0.0, 1.0, 3.0])
            .unwrap()
            .with_channel("x", vec![0.0, 2.0, 0.0])
            .unwrap();
        assert_eq!(s.value_at("x", 0.5), Some(1.0));
        assert_eq!(s.value_at("x", 2.0), Some(1.0));
        assert_eq!(s.value_at("x", 3.0), Some(0.0));
        assert_eq!(s.value_at("x", 3.5), None);
        assert_eq!(s.value_at("y", 1.0), None);
    }

    #[test]
    fn validation() {
        assert!(Signal::new(vec![0.0, 0.0]).is_err());
        assert!(Signal::new(vec![0.0, f64::NAN]).is_err());
        let s = Signal::new(vec![0.0, 1.0]).unwrap();
        assert!(s.clone().with_channel("x", vec![1.0]).is_err());
        assert!(s.with_channel("x", vec![1.0, f64::INFINITY]).is_err());
    }
}
