use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Link model applied to every simulated message: delay = latency + bits / bandwidth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkProfile {
    pub name: String,
    /// bits per second; `f64::INFINITY` disables the serialization delay
    pub bandwidth: f64,
    /// one-way seconds
    pub latency: f64,
}

impl NetworkProfile {
    pub fn new(name: impl Into<String>, bandwidth: f64, latency: f64) -> Result<Self> {
        let p = NetworkProfile {
            name: name.into(),
            bandwidth,
            latency,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn localhost() -> Self {
        NetworkProfile {
            name: "localhost".into(),
            bandwidth: 26e9,
            latency: 0.05e-3,
        }
    }

    pub fn lan() -> Self {
        NetworkProfile {
            name: "lan".into(),
            bandwidth: 1.5e9,
            latency: 1.5e-3,
        }
    }

    pub fn wan() -> Self {
        NetworkProfile {
            name: "wan".into(),
            bandwidth: 400e6,
            latency: 10e-3,
        }
    }

    /// Zero latency, infinite bandwidth.
    pub fn ideal() -> Self {
        NetworkProfile {
            name: "ideal".into(),
            bandwidth: f64::INFINITY,
            latency: 0.0,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "localhost" => Ok(Self::localhost()),
            "lan" => Ok(Self::lan()),
            "wan" => Ok(Self::wan()),
            "ideal" => Ok(Self::ideal()),
            other => Err(Error::Config(format!("unknown network profile {other:?}"))),
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > 0.0) {
            return Err(Error::Config(format!("bandwidth must be > 0, got {}", self.bandwidth)));
        }
        if !(self.latency >= 0.0) || !self.latency.is_finite() {
            return Err(Error::Config(format!("latency must be >= 0, got {}", self.latency)));
        }
        Ok(())
    }

    pub fn latency_ns(&self) -> u64 {
        (self.latency * 1e9).round() as u64
    }

    pub fn transmit_ns(&self, payload_bytes: usize) -> u64 {
        if self.bandwidth.is_infinite() {
            0
        } else {
            (payload_bytes as f64 * 8.0 / self.bandwidth * 1e9).round() as u64
        }
    }

    pub fn delay_ns(&self, payload_bytes: usize) -> u64 {
        self.latency_ns() + self.transmit_ns(payload_bytes)
    }
}
