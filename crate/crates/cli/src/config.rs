//! Run configuration: a flat `key = value` file overridden by flags.
//!
//! ```text
//! # amplitude noise on a Bell-diagonal state
//! state = 0, 0, 0.1, 0.4, 0.5
//! channel = amplitude
//! tau = 1
//! grid = 0:3:1001
//! oracle = false
//! out = fig1d.csv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use xdiscord::dynamics::{uniform_grid, DEFAULT_GRID};
use xdiscord::{NoiseKind, OracleConfig, XStateParams};

use crate::CliError;

pub const KEYS: [&str; 10] = [
    "state",
    "channel",
    "tau",
    "grid",
    "time",
    "oracle",
    "oracle_theta_points",
    "oracle_phi_points",
    "oracle_refine_rounds",
    "out",
];

/// Raw string settings, before validation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {}: expected key = value", n + 1))
            })?;
            let key = key.trim().to_ascii_lowercase();
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::usage(format!(
                    "config line {}: unknown key '{key}'",
                    n + 1
                )));
            }
            map.insert(key, value.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(KEYS.contains(&key));
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

/// Validated settings for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub state: XStateParams,
    pub channel: Option<NoiseKind>,
    pub tau: f64,
    /// (min, max, points) in τt.
    pub grid: (f64, f64, usize),
    pub time: f64,
    pub oracle: Option<OracleConfig>,
    pub out: Option<PathBuf>,
}

fn number(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::usage(format!("{key}: '{value}' is not a finite number")))
}

fn count(key: &str, value: &str) -> Result<usize, CliError> {
    value
        .trim()
        .parse::<usize>()
        .map_err(|_| CliError::usage(format!("{key}: '{value}' is not a non-negative integer")))
}

fn flag(key: &str, value: &str) -> Result<bool, CliError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(CliError::usage(format!(
            "{key}: '{value}' is not a boolean"
        ))),
    }
}

/// `r,s,c1,c2,c3`, or `c1,c2,c3` for a Bell-diagonal state.
pub fn parse_state(value: &str) -> Result<XStateParams, CliError> {
    let parts = value
        .split(',')
        .map(|p| number("state", p))
        .collect::<Result<Vec<_>, _>>()?;
    let params = match parts[..] {
        [c1, c2, c3] => XStateParams::new(0.0, 0.0, c1, c2, c3),
        [r, s, c1, c2, c3] => XStateParams::new(r, s, c1, c2, c3),
        _ => {
            return Err(CliError::usage(format!(
                "state: expected r,s,c1,c2,c3 or c1,c2,c3, got {} values",
                parts.len()
            )))
        }
    };
    Ok(params?)
}

/// `MIN:MAX:N` in τt units.
pub fn parse_grid(value: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = value.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(CliError::usage(format!(
            "grid: expected MIN:MAX:N, got '{value}'"
        )));
    };
    let grid = (number("grid", lo)?, number("grid", hi)?, count("grid", n)?);
    uniform_grid(grid.0, grid.1, grid.2).map_err(|e| CliError::usage(format!("grid: {e}")))?;
    Ok(grid)
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let state = s
            .get("state")
            .ok_or_else(|| CliError::usage("no state given (use --state or a config file)"))
            .and_then(parse_state)?;
        let channel = s
            .get("channel")
            .map(|v| {
                v.parse::<NoiseKind>()
                    .map_err(|e| CliError::usage(format!("channel: {e}")))
            })
            .transpose()?;
        let tau = s
            .get("tau")
            .map(|v| number("tau", v))
            .transpose()?
            .unwrap_or(1.0);
        if tau <= 0.0 {
            return Err(CliError::usage(format!("tau must be positive, got {tau}")));
        }
        let grid = s
            .get("grid")
            .map(parse_grid)
            .transpose()?
            .unwrap_or(DEFAULT_GRID);
        let time = s
            .get("time")
            .map(|v| number("time", v))
            .transpose()?
            .unwrap_or(0.0);
        if time < 0.0 {
            return Err(CliError::usage(format!(
                "time must be non-negative, got {time}"
            )));
        }
        let oracle = if s
            .get("oracle")
            .map(|v| flag("oracle", v))
            .transpose()?
            .unwrap_or(false)
        {
            Some(oracle_config(s)?)
        } else {
            None
        };
        Ok(Self {
            state,
            channel,
            tau,
            grid,
            time,
            oracle,
            out: s.get("out").map(PathBuf::from),
        })
    }

    pub fn grid_points(&self) -> Vec<f64> {
        uniform_grid(self.grid.0, self.grid.1, self.grid.2).expect("grid validated at load time")
    }
}

pub fn oracle_config(s: &Settings) -> Result<OracleConfig, CliError> {
    let mut config = OracleConfig::default();
    if let Some(v) = s.get("oracle_theta_points") {
        config.theta_points = count("oracle_theta_points", v)?;
    }
    if let Some(v) = s.get("oracle_phi_points") {
        config.phi_points = count("oracle_phi_points", v)?;
    }
    if let Some(v) = s.get("oracle_refine_rounds") {
        config.refine_rounds = count("oracle_refine_rounds", v)?;
    }
    if config.theta_points < 2 || config.phi_points < 1 {
        return Err(CliError::usage(
            "oracle grid needs at least 2 polar and 1 azimuthal points",
        ));
    }
    config.max_rounds = config.max_rounds.max(config.refine_rounds);
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExitKind;

    #[test]
    fn parses_comments_and_blank_lines() {
        let s =
            Settings::parse("# header\n\nstate = 0.1,0.4,0.5   # Bell-diagonal\nchannel=phase\n")
                .unwrap();
        let c = RunConfig::from_settings(&s).unwrap();
        assert_eq!(c.state.c(), [0.1, 0.4, 0.5]);
        assert_eq!(c.channel, Some(NoiseKind::Phase));
        assert_eq!(c.grid, DEFAULT_GRID);
        assert_eq!(c.tau, 1.0);
        assert!(c.oracle.is_none());
    }

    #[test]
    fn unknown_key_is_usage_error() {
        assert_eq!(
            Settings::parse("colour = red").unwrap_err().kind,
            ExitKind::Usage
        );
        assert_eq!(
            Settings::parse("state 0.1").unwrap_err().kind,
            ExitKind::Usage
        );
    }

    #[test]
    fn five_component_state() {
        let p = parse_state("0.1, -0.01, 0.1, 0.3, 0.4").unwrap();
        assert_eq!(p.to_array(), [0.1, -0.01, 0.1, 0.3, 0.4]);
    }

    #[test]
    fn unphysical_state_is_validation_error() {
        assert_eq!(
            parse_state("0.5,0.5,0.5").unwrap_err().kind,
            ExitKind::Validation
        );
        assert_eq!(parse_state("0.5,0.5").unwrap_err().kind, ExitKind::Usage);
        assert_eq!(parse_state("a,b,c").unwrap_err().kind, ExitKind::Usage);
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:2:401").unwrap(), (0.0, 2.0, 401));
        for bad in ["0:2:1", "0:2:0", "2:1:10", "-1:1:10", "0:2", "0:x:3"] {
            assert_eq!(parse_grid(bad).unwrap_err().kind, ExitKind::Usage, "{bad}");
        }
    }

    #[test]
    fn oracle_knobs() {
        let mut s =
            Settings::parse("state = 1,-1,1\noracle = yes\noracle_theta_points = 19").unwrap();
        s.set("oracle_refine_rounds", "5");
        let c = RunConfig::from_settings(&s).unwrap();
        let o = c.oracle.unwrap();
        assert_eq!(
            (o.theta_points, o.phi_points, o.refine_rounds),
            (19, 360, 5)
        );
    }
}
