//! `laocoon-config v1` files: one `key value...` pair per line, `#` comments.
//!
//! ```text
//! laocoon-config v1
//! voters 100
//! candidates C1 C2 C3
//! audit on
//! mix-window 4
//! ```
//!
//! Keys left out keep their defaults.

use std::path::Path;

use laocoon_core::protocol::{ConfigError, ElectionConfig};
use thiserror::Error;

pub const CONFIG_HEADER: &str = "laocoon-config v1";

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("missing header, expected {0:?}")]
    Header(&'static str),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

pub(crate) fn line_err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        reason: reason.into(),
    }
}

/// Significant lines with 1-based line numbers, comments and blanks removed.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

pub(crate) fn expect_header(text: &str, header: &'static str) -> Result<(), ParseError> {
    match lines(text).next() {
        Some((_, words)) if words.join(" ") == header => Ok(()),
        _ => Err(ParseError::Header(header)),
    }
}

pub(crate) fn parse_num<T: std::str::FromStr>(line: usize, what: &str, s: &str) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| line_err(line, format!("{what}: cannot parse {s:?}")))
}

fn single<'a>(line: usize, key: &str, args: &[&'a str]) -> Result<&'a str, ParseError> {
    match args {
        [v] => Ok(v),
        _ => Err(line_err(line, format!("{key} takes exactly one value"))),
    }
}

/// Applies one configuration line. Returns `Ok(false)` if `key` is not a
/// configuration key.
pub(crate) fn apply_key(cfg: &mut ElectionConfig, line: usize, key: &str, args: &[&str]) -> Result<bool, ParseError> {
    match key {
        "voters" => cfg.num_voters = parse_num(line, key, single(line, key, args)?)?,
        "candidates" => cfg.candidates = args.iter().map(|s| s.to_string()).collect(),
        "audit" => {
            cfg.audit_enabled = match single(line, key, args)? {
                "on" => true,
                "off" => false,
                other => return Err(line_err(line, format!("audit must be on or off, got {other:?}"))),
            }
        }
        "mix-window" => cfg.mix_window = parse_num(line, key, single(line, key, args)?)?,
        "tally-date" => cfg.tally_date = single(line, key, args)?.to_string(),
        "credentials-per-voter" => cfg.credentials_per_voter = parse_num(line, key, single(line, key, args)?)?,
        "ring-cap" => {
            cfg.ring_cap = match single(line, key, args)? {
                "none" => None,
                v => Some(parse_num(line, key, v)?),
            }
        }
        "clock-start" => cfg.clock_start = parse_num(line, key, single(line, key, args)?)?,
        "security-tag" => cfg.security_tag = single(line, key, args)?.to_string(),
        _ => return Ok(false),
    }
    Ok(true)
}

pub fn parse_config(text: &str) -> Result<ElectionConfig, ParseError> {
    expect_header(text, CONFIG_HEADER)?;
    let mut cfg = ElectionConfig::default();
    for (line, words) in lines(text).skip(1) {
        if !apply_key(&mut cfg, line, words[0], &words[1..])? {
            return Err(line_err(line, format!("unknown key {:?}", words[0])));
        }
    }
    cfg.validate_structure()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ElectionConfig, ParseError> {
    parse_config(&std::fs::read_to_string(path)?)
}

pub(crate) fn config_lines(cfg: &ElectionConfig) -> String {
    let mut out = String::new();
    out += &format!("voters {}\n", cfg.num_voters);
    out += &format!("candidates {}\n", cfg.candidates.join(" "));
    out += &format!("audit {}\n", if cfg.audit_enabled { "on" } else { "off" });
    out += &format!("mix-window {}\n", cfg.mix_window);
    out += &format!("tally-date {}\n", cfg.tally_date);
    out += &format!("credentials-per-voter {}\n", cfg.credentials_per_voter);
    out += &format!(
        "ring-cap {}\n",
        cfg.ring_cap.map_or("none".to_string(), |c| c.to_string())
    );
    out += &format!("clock-start {}\n", cfg.clock_start);
    out += &format!("security-tag {}\n", cfg.security_tag);
    out
}

pub fn write_config(cfg: &ElectionConfig) -> String {
    format!("{CONFIG_HEADER}\n{}", config_lines(cfg))
}
