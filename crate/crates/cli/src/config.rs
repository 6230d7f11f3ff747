use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::Args;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qline::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(qline::Error::CapExceeded { .. }) => 3,
            CliError::Core(qline::Error::Precondition(_)) => 4,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Failed(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Flags shared by every subcommand; each one ignores what it does not use.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Input file (protocol, two-party protocol or query algorithm).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output file for the command's CSV or IR.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Alice's input bits, e.g. 0101.
    #[arg(long)]
    pub x: Option<String>,
    /// Bob's input bits.
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Rounds of a generated line protocol.
    #[arg(long)]
    pub r: Option<usize>,
    /// Subset size of the walk (default: chosen from n and d).
    #[arg(long)]
    pub t: Option<usize>,
    /// Seed for generated protocols (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid `n=<list> d=<list> b=<list>`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Input distribution: a file, or one of `uniform`, `planted`, `mixture`.
    #[arg(long)]
    pub mu: Option<String>,
    /// Sweep kind: `bounds`, `disjointness` or `pipeline`.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long = "c-eps")]
    pub c_eps: Option<f64>,
    #[arg(long = "c-delta")]
    pub c_delta: Option<f64>,
    /// Checking error constant.
    #[arg(long)]
    pub c: Option<f64>,
    /// `key=value` configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn read(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write(path: &PathBuf, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| qline::Error::Parse {
            line: i + 1,
            message: format!("expected `key=value`, got `{line}`"),
        })?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

fn fill<T: std::str::FromStr>(
    slot: &mut Option<T>,
    cfg: &mut BTreeMap<String, String>,
    key: &str,
) -> CliResult<()> {
    if let Some(v) = cfg.remove(key) {
        if slot.is_none() {
            *slot =
                Some(v.parse().map_err(|_| {
                    CliError::Usage(format!("config: bad value `{v}` for `{key}`"))
                })?);
        }
    }
    Ok(())
}

impl Opts {
    /// Merge the configuration file under the command-line flags and check ranges.
    pub fn resolve(mut self) -> CliResult<Opts> {
        if let Some(path) = self.config.clone() {
            let mut cfg = parse_config(&read(&path)?)?;
            fill(&mut self.input, &mut cfg, "in")?;
            fill(&mut self.out, &mut cfg, "out")?;
            fill(&mut self.x, &mut cfg, "x")?;
            fill(&mut self.y, &mut cfg, "y")?;
            fill(&mut self.n, &mut cfg, "n")?;
            fill(&mut self.d, &mut cfg, "d")?;
            fill(&mut self.b, &mut cfg, "b")?;
            fill(&mut self.s, &mut cfg, "s")?;
            fill(&mut self.r, &mut cfg, "r")?;
            fill(&mut self.t, &mut cfg, "t")?;
            fill(&mut self.seed, &mut cfg, "seed")?;
            fill(&mut self.grid, &mut cfg, "grid")?;
            fill(&mut self.mu, &mut cfg, "mu")?;
            fill(&mut self.kind, &mut cfg, "kind")?;
            fill(&mut self.c_eps, &mut cfg, "c_eps")?;
            fill(&mut self.c_delta, &mut cfg, "c_delta")?;
            fill(&mut self.c, &mut cfg, "c")?;
            if let Some(k) = cfg.keys().next() {
                return Err(CliError::Usage(format!("config: unknown key `{k}`")));
            }
        }
        for (name, v) in [
            ("n", self.n),
            ("d", self.d),
            ("b", self.b),
            ("t", self.t),
            ("r", self.r),
        ] {
            if v == Some(0) {
                return Err(CliError::Usage(format!("--{name} must be positive")));
            }
        }
        for (name, v) in [
            ("c-eps", self.c_eps),
            ("c-delta", self.c_delta),
            ("c", self.c),
        ] {
            if v.is_some_and(|v| !(v > 0.0 && v.is_finite())) {
                return Err(CliError::Usage(format!("--{name} must be positive")));
            }
        }
        Ok(self)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn require<T: Clone>(v: &Option<T>, flag: &str) -> CliResult<T> {
        v.clone()
            .ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_fills_only_missing_flags() {
        let cfg = parse_config("# comment\nn = 6\nd=2\nc-eps=4\n").unwrap();
        assert_eq!(cfg.get("c_eps").map(String::as_str), Some("4"));
        let mut o = Opts {
            d: Some(3),
            ..Default::default()
        };
        let mut cfg = cfg;
        fill(&mut o.n, &mut cfg, "n").unwrap();
        fill(&mut o.d, &mut cfg, "d").unwrap();
        assert_eq!((o.n, o.d), (Some(6), Some(3)));
    }
}
