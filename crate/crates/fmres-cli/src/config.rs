//! Effective run configuration: a flat key=value file merged with
//! command-line flags (flags win), plus the canonical hash that stamps
//! every output file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fmres_core::{Error, Result, ShockScale};
use sha2::{Digest, Sha256};

use crate::cli::{GlobalArgs, ShockScaleArg};

/// Every key the config file may contain. Anything else is rejected so a
/// typo cannot silently fall back to a default.
pub const CONFIG_KEYS: &[&str] = &[
    "input",
    "out",
    "markets",
    "shock",
    "cpu",
    "mediators",
    "logdiff",
    "columns",
    "lags",
    "draws",
    "burn_in",
    "thin",
    "seed",
    "irf_horizon",
    "gfevd_horizon",
    "magnitude",
    "shock_scale",
    "dynamic",
    "threads",
];

/// The resolved settings a command runs with.
///
/// `input`, `out` and `threads` steer where data comes from and goes and
/// how hard the machine works; everything else determines *what* is
/// computed and therefore enters [`RunConfig::config_hash`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub threads: usize,
    pub markets: Vec<String>,
    pub shock: Option<String>,
    pub cpu: Option<String>,
    pub mediators: Vec<String>,
    pub logdiff: Vec<String>,
    pub columns: Vec<String>,
    pub lags: usize,
    pub draws: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub irf_horizon: usize,
    pub gfevd_horizon: usize,
    pub magnitude: f64,
    pub shock_scale: ShockScale,
    pub dynamic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            out: PathBuf::from("fmres-out"),
            threads: 0,
            markets: Vec::new(),
            shock: None,
            cpu: None,
            mediators: Vec::new(),
            logdiff: Vec::new(),
            columns: Vec::new(),
            lags: 1,
            draws: 11_000,
            burn_in: 1_000,
            thin: 1,
            seed: 42,
            irf_horizon: 12,
            gfevd_horizon: 12,
            magnitude: 1.0,
            shock_scale: ShockScale::Averaged,
            dynamic: false,
        }
    }
}

fn parse_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn join_list(list: &[String]) -> String {
    list.join(",")
}

fn parse_as<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("config key `{key}`: cannot parse value '{value}'")))
}

impl From<ShockScaleArg> for ShockScale {
    fn from(arg: ShockScaleArg) -> ShockScale {
        match arg {
            ShockScaleArg::Averaged => ShockScale::Averaged,
            ShockScaleArg::TimeVarying => ShockScale::TimeVarying,
        }
    }
}

pub fn parse_shock_scale(value: &str) -> Result<ShockScale> {
    match value.trim() {
        "averaged" => Ok(ShockScale::Averaged),
        "time-varying" => Ok(ShockScale::TimeVarying),
        other => Err(Error::invalid(format!(
            "shock_scale must be 'averaged' or 'time-varying', got '{other}'"
        ))),
    }
}

fn shock_scale_name(scale: ShockScale) -> &'static str {
    match scale {
        ShockScale::Averaged => "averaged",
        ShockScale::TimeVarying => "time-varying",
    }
}

/// Parse the flat key=value text. Blank lines and `#` comments are
/// skipped; keys may not repeat.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::parse(
                lineno + 1,
                format!("expected key = value, got '{line}'"),
            ));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::parse(lineno + 1, format!("unknown config key `{key}`")));
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::parse(lineno + 1, format!("duplicate config key `{key}`")));
        }
    }
    Ok(map)
}

impl RunConfig {
    /// Build the effective configuration: defaults, then the file named by
    /// `--config` (if any), then the global flags on top.
    pub fn load(global: &GlobalArgs) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &global.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let map = parse_config_text(&text)?;
            cfg.apply_file(&map)?;
        }
        if let Some(input) = &global.input {
            cfg.input = Some(input.clone());
        }
        if let Some(out) = &global.out {
            cfg.out = out.clone();
        }
        if let Some(seed) = global.seed {
            cfg.seed = seed;
        }
        if let Some(threads) = global.threads {
            cfg.threads = threads;
        }
        Ok(cfg)
    }

    fn apply_file(&mut self, map: &BTreeMap<String, String>) -> Result<()> {
        for (key, value) in map {
            match key.as_str() {
                "input" => self.input = Some(PathBuf::from(value)),
                "out" => self.out = PathBuf::from(value),
                "threads" => self.threads = parse_as(key, value)?,
                "markets" => self.markets = parse_list(value),
                "shock" => self.shock = Some(value.clone()),
                "cpu" => self.cpu = Some(value.clone()),
                "mediators" => self.mediators = parse_list(value),
                "logdiff" => self.logdiff = parse_list(value),
                "columns" => self.columns = parse_list(value),
                "lags" => self.lags = parse_as(key, value)?,
                "draws" => self.draws = parse_as(key, value)?,
                "burn_in" => self.burn_in = parse_as(key, value)?,
                "thin" => self.thin = parse_as(key, value)?,
                "seed" => self.seed = parse_as(key, value)?,
                "irf_horizon" => self.irf_horizon = parse_as(key, value)?,
                "gfevd_horizon" => self.gfevd_horizon = parse_as(key, value)?,
                "magnitude" => self.magnitude = parse_as(key, value)?,
                "shock_scale" => self.shock_scale = parse_shock_scale(value)?,
                "dynamic" => self.dynamic = parse_as(key, value)?,
                other => {
                    return Err(Error::invalid(format!("unknown config key `{other}`")));
                }
            }
        }
        Ok(())
    }

    /// Cheap structural checks that need no data: numeric ranges only.
    /// Column existence is checked against the loaded panel separately.
    pub fn validate_ranges(&self) -> Result<()> {
        if self.lags == 0 {
            return Err(Error::invalid("lags must be at least 1"));
        }
        if self.thin == 0 {
            return Err(Error::invalid("thin must be at least 1"));
        }
        if self.draws == 0 || self.burn_in >= self.draws {
            return Err(Error::invalid(format!(
                "draws ({}) must exceed burn_in ({})",
                self.draws, self.burn_in
            )));
        }
        if self.irf_horizon == 0 {
            return Err(Error::invalid("irf_horizon must be at least 1"));
        }
        if self.gfevd_horizon == 0 {
            return Err(Error::invalid("gfevd_horizon must be at least 1"));
        }
        if !self.magnitude.is_finite() || self.magnitude == 0.0 {
            return Err(Error::invalid("magnitude must be finite and nonzero"));
        }
        Ok(())
    }

    pub fn mcmc_overridden(
        &self,
        draws: Option<usize>,
        burn_in: Option<usize>,
        thin: Option<usize>,
        lags: Option<usize>,
    ) -> RunConfig {
        let mut cfg = self.clone();
        if let Some(d) = draws {
            cfg.draws = d;
        }
        if let Some(b) = burn_in {
            cfg.burn_in = b;
        }
        if let Some(t) = thin {
            cfg.thin = t;
        }
        if let Some(l) = lags {
            cfg.lags = l;
        }
        cfg
    }

    /// The canonical text the config hash is computed over: one
    /// `key=value` line per computation-relevant key, sorted, with the
    /// primary input identified by the digest of its *content* so the
    /// hash is stable across machines and path spellings.
    pub fn canonical_text(&self, input_digest: &str) -> String {
        let mut lines: Vec<String> = vec![
            format!("burn_in={}", self.burn_in),
            format!("columns={}", join_list(&self.columns)),
            format!("cpu={}", self.cpu.as_deref().unwrap_or("")),
            format!("draws={}", self.draws),
            format!("dynamic={}", self.dynamic),
            format!("gfevd_horizon={}", self.gfevd_horizon),
            format!("input_sha256={input_digest}"),
            format!("irf_horizon={}", self.irf_horizon),
            format!("lags={}", self.lags),
            format!("logdiff={}", join_list(&self.logdiff)),
            format!("magnitude={}", self.magnitude),
            format!("markets={}", join_list(&self.markets)),
            format!("mediators={}", join_list(&self.mediators)),
            format!("seed={}", self.seed),
            format!("shock={}", self.shock.as_deref().unwrap_or("")),
            format!("shock_scale={}", shock_scale_name(self.shock_scale)),
            format!("thin={}", self.thin),
        ];
        lines.sort();
        let mut text = String::new();
        for l in lines {
            text.push_str(&l);
            text.push('\n');
        }
        text
    }

    /// Hex SHA-256 of [`Self::canonical_text`].
    pub fn config_hash(&self, input_digest: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_text(input_digest).as_bytes());
        hex_string(&hasher.finalize())
    }

    /// Set up the global rayon pool when `threads` asks for one. Quietly
    /// keeps the existing pool if one was already built.
    pub fn install_thread_pool(&self) {
        if self.threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build_global();
        }
    }

    /// The panel path, which must have been provided by flag or config.
    pub fn require_input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| Error::invalid("no input file: pass --input or set `input` in the config"))
    }
}

pub fn hex_string(bytes: &[u8]) -> String {
    use std::fmt::Write;
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Hex SHA-256 of a file's content.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(hex_string(&hasher.finalize()))
}
