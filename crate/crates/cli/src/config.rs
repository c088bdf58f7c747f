//! Run configuration: defaults, then a `key = value` file, then flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::Usage(format!("unknown format {other:?}; expected csv or json"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Usage(format!("grid count {} must be at least 2", self.count)));
        }
        if !(self.min < self.max) {
            return Err(CliError::Usage(format!("grid min {} must be below max {}", self.min, self.max)));
        }
        if self.log && !(self.min > 0.0) {
            return Err(CliError::Usage(format!("log grid needs min > 0, got {}", self.min)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    self.max
                } else if self.log {
                    self.min * (self.max / self.min).powf(t)
                } else {
                    self.min + (self.max - self.min) * t
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub tolerance: f64,
    pub k_max: u64,
    /// `None` means "start just above the domain of each q".
    pub grid_min: Option<f64>,
    pub grid_max: f64,
    pub grid_count: usize,
    pub grid_log: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub d_values: Vec<f64>,
    pub q_values: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            k_max: 200,
            grid_min: None,
            grid_max: 1e3,
            grid_count: 200,
            grid_log: true,
            format: Format::Csv,
            out: None,
            d_values: vec![1.0, 2.0, 2.5, 3.0, 4.0],
            q_values: vec![0.0, 0.25, 0.5, 2.0 / 3.0, 1.0],
        }
    }
}

/// Flag values that override the file; `None` leaves the setting alone.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub k_max: Option<u64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_count: Option<usize>,
    pub grid_scale: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub d_values: Option<String>,
    pub q_values: Option<String>,
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    parse_number(v).ok_or_else(|| CliError::Usage(format!("{key}: cannot parse {v:?} as a number")))
}

/// Accepts decimals and simple fractions such as `2/3`.
pub fn parse_number(v: &str) -> Option<f64> {
    let v = v.trim();
    if let Some((a, b)) = v.split_once('/') {
        let (a, b) = (a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?);
        return (b != 0.0).then(|| a / b);
    }
    v.parse::<f64>().ok().filter(|x| !x.is_nan())
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',').map(|s| parse_f64(key, s)).collect()
}

fn parse_scale(v: &str) -> Result<bool, CliError> {
    match v.trim().to_ascii_lowercase().as_str() {
        "log" => Ok(true),
        "linear" | "lin" => Ok(false),
        other => Err(CliError::Usage(format!("grid_scale: expected log or linear, got {other:?}"))),
    }
}

impl RunConfig {
    pub fn load(file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = file {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("reading config {}: {e}", path.display())))?;
            cfg.apply_file(&text)?;
        }
        cfg.apply(flags)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", n + 1)))?;
            entries.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        let mut o = Overrides::default();
        for (k, v) in entries {
            match k.as_str() {
                "tolerance" | "tol" => o.tolerance = Some(parse_f64(&k, &v)?),
                "k_max" => {
                    o.k_max = Some(v.parse().map_err(|_| CliError::Usage(format!("k_max: cannot parse {v:?}")))?)
                }
                "grid_min" => o.grid_min = Some(parse_f64(&k, &v)?),
                "grid_max" => o.grid_max = Some(parse_f64(&k, &v)?),
                "grid_count" => {
                    o.grid_count =
                        Some(v.parse().map_err(|_| CliError::Usage(format!("grid_count: cannot parse {v:?}")))?)
                }
                "grid_scale" => o.grid_scale = Some(v),
                "format" => o.format = Some(v),
                "out" | "output" => o.out = Some(PathBuf::from(v)),
                "d_values" => o.d_values = Some(v),
                "q_values" => o.q_values = Some(v),
                other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
            }
        }
        self.apply(&o)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(t) = o.tolerance {
            self.tolerance = t;
        }
        if let Some(k) = o.k_max {
            self.k_max = k;
        }
        if let Some(m) = o.grid_min {
            self.grid_min = Some(m);
        }
        if let Some(m) = o.grid_max {
            self.grid_max = m;
        }
        if let Some(c) = o.grid_count {
            self.grid_count = c;
        }
        if let Some(s) = &o.grid_scale {
            self.grid_log = parse_scale(s)?;
        }
        if let Some(f) = &o.format {
            self.format = Format::parse(f)?;
        }
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        if let Some(v) = &o.d_values {
            self.d_values = parse_list("d_values", v)?;
        }
        if let Some(v) = &o.q_values {
            self.q_values = parse_list("q_values", v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Usage(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.grid_count < 2 {
            return Err(CliError::Usage(format!("grid count {} must be at least 2", self.grid_count)));
        }
        if let Some(m) = self.grid_min {
            if !(m < self.grid_max) {
                return Err(CliError::Usage(format!("grid min {m} must be below max {}", self.grid_max)));
            }
        }
        Ok(())
    }

    /// The r grid for one value of q.
    pub fn grid_for(&self, q: f64) -> GridSpec {
        GridSpec {
            min: self.grid_min.unwrap_or(q.max(0.0) + 0.01),
            max: self.grid_max,
            count: self.grid_count,
            log: self.grid_log,
        }
    }
}
