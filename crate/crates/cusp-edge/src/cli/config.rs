use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::charforms::FiberSpin;
use crate::error::{invalid, Error, Result};

/// The scenarios the driver can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "clifford check")]
    CliffordCheck,
    #[serde(rename = "indexsets compose")]
    IndexsetsCompose,
    #[serde(rename = "blowup verify")]
    BlowupVerify,
    #[serde(rename = "kernels check")]
    KernelsCheck,
    #[serde(rename = "spectrum")]
    Spectrum,
    #[serde(rename = "index")]
    Index,
    #[serde(rename = "eta")]
    Eta,
    #[serde(rename = "signature")]
    Signature,
    #[serde(rename = "pushforward demo")]
    PushforwardDemo,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::CliffordCheck,
        Scenario::IndexsetsCompose,
        Scenario::BlowupVerify,
        Scenario::KernelsCheck,
        Scenario::Spectrum,
        Scenario::Index,
        Scenario::Eta,
        Scenario::Signature,
        Scenario::PushforwardDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::CliffordCheck => "clifford check",
            Scenario::IndexsetsCompose => "indexsets compose",
            Scenario::BlowupVerify => "blowup verify",
            Scenario::KernelsCheck => "kernels check",
            Scenario::Spectrum => "spectrum",
            Scenario::Index => "index",
            Scenario::Eta => "eta",
            Scenario::Signature => "signature",
            Scenario::PushforwardDemo => "pushforward demo",
        }
    }

    /// The one place scenario tolerances are defined.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Scenario::CliffordCheck | Scenario::IndexsetsCompose => 0.0,
            Scenario::BlowupVerify => 1e-8,
            Scenario::KernelsCheck => crate::kernels::CERTIFY_TOL,
            Scenario::Spectrum => 5e-3,
            Scenario::Index => 0.05,
            Scenario::Eta | Scenario::Signature => 1e-3,
            Scenario::PushforwardDemo => 1e-5,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.split_whitespace().collect::<Vec<_>>().join(" ");
        Scenario::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Periodic,
    Antiperiodic,
}

impl From<Spin> for FiberSpin {
    fn from(s: Spin) -> Self {
        match s {
            Spin::Periodic => FiberSpin::Periodic,
            Spin::Antiperiodic => FiberSpin::Antiperiodic,
        }
    }
}

/// Everything a scenario reads. Each field is a config key of the same
/// name, except `degree`, which is `N`.
///
/// Ranges: `k ∈ [2, 6]`, `f ∈ [1, 4]`, `b ∈ [0, 3]`, `grid ∈ [16, 200000]`,
/// `xmax ∈ (0, 100]`, `modes ∈ (0, 100000]`, `0 < tmin < tmax ≤ 100`,
/// `tpoints ∈ [1, 1000]`, `count ∈ [1, 1000]`, `samples ∈ [1, 100000]`,
/// tolerances in `[0, 1)`, `|twist| ≤ 1000`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub command: Scenario,
    pub k: u32,
    pub f: usize,
    pub b: usize,
    pub spin: Spin,
    pub twist: f64,
    /// Fiber mode cutoff `|μ|` for the Dirac spectrum; `n_max` of the circle
    /// spectrum for `eta` and `signature`.
    pub modes: f64,
    pub grid: usize,
    pub xmax: f64,
    pub tmin: f64,
    pub tmax: f64,
    pub tpoints: usize,
    pub count: usize,
    pub tolerance: f64,
    /// Semigroup defect allowed by `kernels check`.
    pub semigroup_tolerance: f64,
    pub samples: usize,
    /// Fiber form degree `N` of the signature model operators.
    pub degree: u32,
    pub preset: String,
    pub file: Option<String>,
    /// Interior characteristic integral, when the geometry needs one.
    pub interior: Option<f64>,
    pub output: OutputFormat,
    pub seed: u64,
}

/// Keys accepted in config files and as flags.
pub const KEYS: [&str; 22] = [
    "k",
    "f",
    "b",
    "spin",
    "twist",
    "modes",
    "grid",
    "xmax",
    "tmin",
    "tmax",
    "tpoints",
    "count",
    "tolerance",
    "semigroup_tolerance",
    "samples",
    "N",
    "preset",
    "file",
    "interior",
    "output",
    "seed",
    "config",
];

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::InvalidInput(format!("`{key}`: cannot parse `{v}`")))
}

fn in_range<T: PartialOrd + fmt::Display + Copy>(key: &str, v: T, lo: T, hi: T) -> Result<()> {
    if v < lo || v > hi {
        return invalid(format!("`{key}` = {v} outside [{lo}, {hi}]"));
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn defaults(command: Scenario) -> Self {
        let circle = matches!(command, Scenario::Eta | Scenario::Signature);
        Self {
            command,
            k: 3,
            f: 1,
            b: 0,
            spin: Spin::Antiperiodic,
            twist: if circle { 0.25 } else { 0.0 },
            modes: if circle { 2000.0 } else { 5.5 },
            grid: 4000,
            xmax: 1.0,
            tmin: 0.05,
            tmax: 0.5,
            tpoints: 10,
            count: 6,
            tolerance: command.default_tolerance(),
            semigroup_tolerance: 1e-5,
            samples: 100,
            degree: 0,
            preset: "mixed".into(),
            file: None,
            interior: None,
            output: OutputFormat::Json,
            seed: 1,
        }
    }

    /// Sets one key from its text value. `config` is handled by the caller.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "k" => {
                self.k = num(key, v)?;
                in_range(key, self.k, 2, 6)?;
            }
            "f" => {
                self.f = num(key, v)?;
                in_range(key, self.f, 1, 4)?;
            }
            "b" => {
                self.b = num(key, v)?;
                in_range(key, self.b, 0, 3)?;
            }
            "spin" => {
                self.spin = match v {
                    "periodic" => Spin::Periodic,
                    "antiperiodic" => Spin::Antiperiodic,
                    _ => return invalid(format!("`spin` must be periodic or antiperiodic, got `{v}`")),
                }
            }
            "twist" => {
                self.twist = num(key, v)?;
                in_range(key, self.twist, -1000.0, 1000.0)?;
            }
            "modes" => {
                self.modes = num(key, v)?;
                if !(self.modes > 0.0 && self.modes <= 1e5) {
                    return invalid(format!("`modes` = {v} outside (0, 100000]"));
                }
            }
            "grid" => {
                self.grid = num(key, v)?;
                in_range(key, self.grid, 16, 200_000)?;
            }
            "xmax" => {
                self.xmax = num(key, v)?;
                if !(self.xmax > 0.0 && self.xmax <= 100.0) {
                    return invalid(format!("`xmax` = {v} outside (0, 100]"));
                }
            }
            "tmin" => {
                self.tmin = num(key, v)?;
                if !(self.tmin > 0.0 && self.tmin <= 100.0) {
                    return invalid(format!("`tmin` = {v} outside (0, 100]"));
                }
            }
            "tmax" => {
                self.tmax = num(key, v)?;
                if !(self.tmax > 0.0 && self.tmax <= 100.0) {
                    return invalid(format!("`tmax` = {v} outside (0, 100]"));
                }
            }
            "tpoints" => {
                self.tpoints = num(key, v)?;
                in_range(key, self.tpoints, 1, 1000)?;
            }
            "count" => {
                self.count = num(key, v)?;
                in_range(key, self.count, 1, 1000)?;
            }
            "tolerance" | "semigroup_tolerance" => {
                let t: f64 = num(key, v)?;
                if !(0.0..1.0).contains(&t) {
                    return invalid(format!("`{key}` = {v} outside [0, 1)"));
                }
                if key == "tolerance" {
                    self.tolerance = t;
                } else {
                    self.semigroup_tolerance = t;
                }
            }
            "samples" => {
                self.samples = num(key, v)?;
                in_range(key, self.samples, 1, 100_000)?;
            }
            "N" => self.degree = num(key, v)?,
            "preset" => {
                if !crate::pushforward::PRESETS.contains(&v) {
                    return invalid(format!("unknown preset `{v}`"));
                }
                self.preset = v.into();
            }
            "file" => self.file = Some(v.into()),
            "interior" => self.interior = Some(num(key, v)?),
            "output" => {
                self.output = match v {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    "text" => OutputFormat::Text,
                    _ => return invalid(format!("`output` must be json, csv or text, got `{v}`")),
                }
            }
            "seed" => self.seed = num(key, v)?,
            _ => return invalid(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Applies a config file. Keys before the first section apply to every
    /// command; `[name]` sections apply to the command of that name only.
    /// Every key is validated whichever section it sits in.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        let mut active = true;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let at = |e: Error| Error::Parse { line: i + 1, msg: e.to_string() };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Parse { line: i + 1, msg: "unterminated section header".into() })?;
                active = name.parse::<Scenario>().map_err(at)? == self.command;
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected `key = value`, got `{line}`") })?;
            let key = key.trim();
            if key == "config" {
                return Err(Error::Parse { line: i + 1, msg: "config files cannot include other files".into() });
            }
            let mut probe = self.clone();
            probe.set(key, value).map_err(at)?;
            if active {
                *self = probe;
            }
        }
        Ok(())
    }

    /// Cross-field checks run once every source has been applied.
    pub fn validate(&self) -> Result<()> {
        if self.tmin >= self.tmax && self.tpoints > 1 {
            return invalid(format!("need tmin < tmax, got {} and {}", self.tmin, self.tmax));
        }
        if self.degree as usize > self.f {
            return invalid(format!("`N` = {} exceeds the fiber dimension {}", self.degree, self.f));
        }
        Ok(())
    }

    /// `tpoints` equally spaced times from `tmin` to `tmax`.
    pub fn t_grid(&self) -> Vec<f64> {
        if self.tpoints == 1 {
            return vec![self.tmin];
        }
        let h = (self.tmax - self.tmin) / (self.tpoints - 1) as f64;
        (0..self.tpoints).map(|i| self.tmin + h * i as f64).collect()
    }
}
