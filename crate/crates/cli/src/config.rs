//! Flat key-value run configuration.
//!
//! One `key = value` per line, `#` starts a comment, complex and
//! magnitude/phase values are comma pairs. The format round-trips
//! bit-exactly: parsing the serialized form reproduces the config,
//! including every float bit, because floats are printed with the shortest
//! representation that parses back to the same value.

use num_complex::Complex64;
use raman_qit::{AtomQubit, OutcomeRule, PhysicalParams, TruncationConfig};

/// Photon-number cutoff selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NMaxSetting {
    /// Size the cutoff from the coherent label (`ceil(|α|² + 10|α| + 20)`).
    Auto,
    Fixed(usize),
}

/// Measurement-branch selection, before a seed is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeSetting {
    FixedG,
    FixedE,
    Sampled,
}

impl OutcomeSetting {
    fn keyword(self) -> &'static str {
        match self {
            OutcomeSetting::FixedG => "fixed-g",
            OutcomeSetting::FixedE => "fixed-e",
            OutcomeSetting::Sampled => "sampled",
        }
    }
}

/// Everything a single protocol run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Ground amplitude as (magnitude, phase).
    pub c_g: (f64, f64),
    /// Excited amplitude as (magnitude, phase).
    pub c_e: (f64, f64),
    pub alpha: Complex64,
    pub lambda: f64,
    pub delta: f64,
    pub omega: f64,
    pub n_max: NMaxSetting,
    pub margin: f64,
    pub outcome: OutcomeSetting,
    pub seed: u64,
    /// Optional output path; `run` mirrors its stdout CSV here when set.
    pub out: Option<String>,
}

impl RunConfig {
    /// Parse the flat key-value format. Every key may appear once; unknown
    /// keys are rejected so typos cannot silently fall back to defaults.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut c_g = None;
        let mut c_e = None;
        let mut alpha = None;
        let mut lambda = None;
        let mut delta = None;
        let mut omega = None;
        let mut n_max = None;
        let mut margin = None;
        let mut outcome = None;
        let mut seed = None;
        let mut out = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let dup = |k: &str| format!("line {}: duplicate key `{k}`", lineno + 1);
            match key {
                "c_g" => set_once(&mut c_g, parse_pair(key, value)?, || dup(key))?,
                "c_e" => set_once(&mut c_e, parse_pair(key, value)?, || dup(key))?,
                "alpha" => {
                    let (re, im) = parse_pair(key, value)?;
                    set_once(&mut alpha, Complex64::new(re, im), || dup(key))?;
                }
                "lambda" => set_once(&mut lambda, parse_real(key, value)?, || dup(key))?,
                "delta" => set_once(&mut delta, parse_real(key, value)?, || dup(key))?,
                "omega" => set_once(&mut omega, parse_real(key, value)?, || dup(key))?,
                "n_max" => {
                    let setting = if value == "auto" {
                        NMaxSetting::Auto
                    } else {
                        NMaxSetting::Fixed(value.parse().map_err(|_| {
                            format!("n_max must be `auto` or an integer, got `{value}`")
                        })?)
                    };
                    set_once(&mut n_max, setting, || dup(key))?;
                }
                "margin" => set_once(&mut margin, parse_real(key, value)?, || dup(key))?,
                "outcome" => {
                    let setting = match value {
                        "fixed-g" => OutcomeSetting::FixedG,
                        "fixed-e" => OutcomeSetting::FixedE,
                        "sampled" => OutcomeSetting::Sampled,
                        other => {
                            return Err(format!(
                                "outcome must be fixed-g, fixed-e or sampled, got `{other}`"
                            ))
                        }
                    };
                    set_once(&mut outcome, setting, || dup(key))?;
                }
                "seed" => {
                    let parsed = value
                        .parse()
                        .map_err(|_| format!("seed must be an unsigned integer, got `{value}`"))?;
                    set_once(&mut seed, parsed, || dup(key))?;
                }
                "out" => set_once(&mut out, value.to_string(), || dup(key))?,
                other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
            }
        }

        Ok(Self {
            c_g: c_g.ok_or("missing key `c_g`")?,
            c_e: c_e.ok_or("missing key `c_e`")?,
            alpha: alpha.ok_or("missing key `alpha`")?,
            lambda: lambda.ok_or("missing key `lambda`")?,
            delta: delta.ok_or("missing key `delta`")?,
            omega: omega.unwrap_or(1.0),
            n_max: n_max.unwrap_or(NMaxSetting::Auto),
            margin: margin.unwrap_or(10.0),
            outcome: outcome.unwrap_or(OutcomeSetting::FixedE),
            seed: seed.unwrap_or(0),
            out: out.map(Some).unwrap_or(None),
        })
    }

    /// Canonical serialization; `parse` of the result reproduces `self`
    /// bit-exactly.
    pub fn serialize(&self) -> String {
        let mut text = String::new();
        text.push_str(&format!("c_g = {},{}\n", self.c_g.0, self.c_g.1));
        text.push_str(&format!("c_e = {},{}\n", self.c_e.0, self.c_e.1));
        text.push_str(&format!("alpha = {},{}\n", self.alpha.re, self.alpha.im));
        text.push_str(&format!("lambda = {}\n", self.lambda));
        text.push_str(&format!("delta = {}\n", self.delta));
        text.push_str(&format!("omega = {}\n", self.omega));
        match self.n_max {
            NMaxSetting::Auto => text.push_str("n_max = auto\n"),
            NMaxSetting::Fixed(n) => text.push_str(&format!("n_max = {n}\n")),
        }
        text.push_str(&format!("margin = {}\n", self.margin));
        text.push_str(&format!("outcome = {}\n", self.outcome.keyword()));
        text.push_str(&format!("seed = {}\n", self.seed));
        if let Some(out) = &self.out {
            text.push_str(&format!("out = {out}\n"));
        }
        text
    }

    /// Atom amplitudes as a validated qubit (normalization within 1e-12).
    pub fn atom(&self) -> Result<AtomQubit, String> {
        let c_g = Complex64::from_polar(self.c_g.0, self.c_g.1);
        let c_e = Complex64::from_polar(self.c_e.0, self.c_e.1);
        AtomQubit::new(c_g, c_e).map_err(|e| e.to_string())
    }

    /// Physical parameters with the lower-level frequency pinned to zero.
    pub fn params(&self) -> Result<PhysicalParams, String> {
        PhysicalParams::new(self.omega, 0.0, self.delta, self.lambda).map_err(|e| e.to_string())
    }

    /// Resolve the cutoff for a concrete label (sweeps re-resolve per point).
    pub fn truncation(&self, alpha: Complex64) -> Result<TruncationConfig, String> {
        match self.n_max {
            NMaxSetting::Auto => Ok(TruncationConfig::auto(alpha)),
            NMaxSetting::Fixed(n) => TruncationConfig::new(n, 1e-12).map_err(|e| e.to_string()),
        }
    }

    /// Outcome rule with a concrete seed attached.
    pub fn outcome_rule(&self, seed: u64) -> OutcomeRule {
        match self.outcome {
            OutcomeSetting::FixedG => OutcomeRule::FixedG,
            OutcomeSetting::FixedE => OutcomeRule::FixedE,
            OutcomeSetting::Sampled => OutcomeRule::Sampled { seed },
        }
    }

    /// Cross-field checks that do not depend on a concrete sweep point.
    pub fn validate(&self) -> Result<(), String> {
        self.atom()?;
        self.params()?;
        if self.margin < 1.0 {
            return Err(format!("margin must be at least 1, got {}", self.margin));
        }
        Ok(())
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, dup: impl Fn() -> String) -> Result<(), String> {
    if slot.is_some() {
        return Err(dup());
    }
    *slot = Some(value);
    Ok(())
}

fn parse_real(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse()
        .map_err(|_| format!("{key} must be a real number, got `{value}`"))
}

fn parse_pair(key: &str, value: &str) -> Result<(f64, f64), String> {
    let (a, b) = value
        .split_once(',')
        .ok_or_else(|| format!("{key} must be a comma pair, got `{value}`"))?;
    Ok((parse_real(key, a.trim())?, parse_real(key, b.trim())?))
}

/// Which knob a sweep turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    AlphaAbs,
    Delta,
    Time,
}

impl SweepParam {
    pub fn from_name(name: &str) -> Result<Self, String> {
        match name {
            "alpha_abs" => Ok(SweepParam::AlphaAbs),
            "delta" => Ok(SweepParam::Delta),
            "time" => Ok(SweepParam::Time),
            other => Err(format!(
                "unknown sweep parameter `{other}` (expected alpha_abs, delta or time)"
            )),
        }
    }
}

/// A validated sweep: grid bounds plus the fixed base configuration.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub base: RunConfig,
}

impl SweepSpec {
    pub fn new(
        param: SweepParam,
        start: f64,
        stop: f64,
        steps: usize,
        base: RunConfig,
    ) -> Result<Self, String> {
        if steps < 2 {
            return Err(format!("sweep needs at least 2 steps, got {steps}"));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("sweep bounds must be finite".into());
        }
        if start >= stop {
            return Err(format!("sweep needs start < stop, got {start} .. {stop}"));
        }
        if param == SweepParam::AlphaAbs && start <= 0.0 {
            return Err(format!(
                "alpha_abs sweeps need a positive start, got {start}"
            ));
        }
        base.validate()?;
        Ok(Self {
            param,
            start,
            stop,
            steps,
            base,
        })
    }

    /// Uniform grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}
