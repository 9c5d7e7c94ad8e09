//! Run configuration: command-line flags layered over an optional INI-style file.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, ValueEnum};
use evlab_core::{Complex64, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Verify,
    ScanMu,
    MeanValue,
    SecondMoment,
    Variance,
    Cross,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::ScanMu => "scan-mu",
            Command::MeanValue => "mean-value",
            Command::SecondMoment => "second-moment",
            Command::Variance => "variance",
            Command::Cross => "cross",
        }
    }

    fn form_arity(self) -> (usize, usize) {
        match self {
            Command::Verify => (1, 2),
            Command::Cross => (2, 2),
            _ => (1, 1),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "evlab", version, about = "Eisenstein-series inner products and their moments")]
struct Cli {
    command: Command,
    /// INI-style file of `key = value` lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Maass form data file (repeat for commands taking two forms).
    #[arg(long = "form")]
    forms: Vec<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Step of the t-grid; defaults to the phase-resolving rule.
    #[arg(long)]
    grid_step: Option<f64>,
    /// Complex coefficient a_n as `RE,IM`.
    #[arg(long, allow_hyphen_values = true)]
    an: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub form_paths: Vec<PathBuf>,
    pub n: u32,
    pub t_min: f64,
    pub t_max: f64,
    pub grid_step: Option<f64>,
    pub a_n: Complex64,
    pub spec: QuadratureSpec,
    pub out_path: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

#[derive(Debug)]
pub enum ArgsError {
    Help(String),
    Usage(String),
    Config(ConfigError),
}

pub fn usage() -> String {
    Cli::command().render_usage().to_string()
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    v.trim().parse().map_err(|_| bad(format!("{key}: `{v}` is not a number")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.trim().parse().map_err(|_| bad(format!("{key}: `{v}` is not a non-negative integer")))
}

pub fn parse_complex(v: &str) -> Result<Complex64, ConfigError> {
    let parts: Vec<&str> = v.split(',').collect();
    if parts.len() != 2 {
        return Err(bad(format!("an: expected RE,IM, got `{v}`")));
    }
    Ok(Complex64::new(parse_f64("an", parts[0])?, parse_f64("an", parts[1])?))
}

/// Key/value pairs from an INI-style text; `#` and `;` start comments and
/// `[section]` lines are ignored.
pub fn parse_ini(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(bad(format!("line {}: expected `key = value`, got `{raw}`", i + 1)));
        };
        out.push((k.trim().replace('-', "_"), v.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    fn defaults(command: Command) -> Self {
        Self {
            command,
            form_paths: Vec::new(),
            n: 3,
            t_min: 100.0,
            t_max: 200.0,
            grid_step: None,
            a_n: Complex64::new(1.0, 0.0),
            spec: QuadratureSpec::default(),
            out_path: None,
            threads: None,
        }
    }

    fn apply(&mut self, key: &str, value: &str, base: &Path) -> Result<(), ConfigError> {
        let s = &mut self.spec;
        match key {
            "form" => {
                for p in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    self.form_paths.push(base.join(p));
                }
            }
            "n" => self.n = parse_usize(key, value)? as u32,
            "tmin" | "t_min" => self.t_min = parse_f64(key, value)?,
            "tmax" | "t_max" => self.t_max = parse_f64(key, value)?,
            "grid_step" => {
                self.grid_step = if value == "auto" { None } else { Some(parse_f64(key, value)?) }
            }
            "an" | "a_n" => self.a_n = parse_complex(value)?,
            "out" => self.out_path = Some(base.join(value)),
            "threads" => {
                self.threads = if value == "auto" { None } else { Some(parse_usize(key, value)?) }
            }
            "rel_tol" => s.rel_tol = parse_f64(key, value)?,
            "abs_tol" => s.abs_tol = parse_f64(key, value)?,
            "max_levels" => s.max_levels = parse_usize(key, value)? as u32,
            "series_cap" => s.series_cap = parse_usize(key, value)?,
            "c_grid" => s.c_grid = parse_f64(key, value)?,
            "grid_rel_tol" => s.grid_rel_tol = parse_f64(key, value)?,
            "afe_eps" => s.afe_eps = parse_f64(key, value)?,
            "max_samples" => s.max_samples = parse_usize(key, value)?,
            _ => return Err(bad(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    pub fn from_args<I, T>(args: I) -> Result<Self, ArgsError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                ArgsError::Help(e.to_string())
            }
            _ => ArgsError::Usage(e.render().to_string()),
        })?;
        Self::from_cli(cli).map_err(ArgsError::Config)
    }

    fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let mut cfg = Self::defaults(cli.command);
        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
            let base = path.parent().unwrap_or(Path::new("."));
            for (k, v) in parse_ini(&text)? {
                cfg.apply(&k, &v, base)?;
            }
        }
        if !cli.forms.is_empty() {
            cfg.form_paths = cli.forms;
        }
        if let Some(n) = cli.n {
            cfg.n = n;
        }
        if let Some(v) = cli.tmin {
            cfg.t_min = v;
        }
        if let Some(v) = cli.tmax {
            cfg.t_max = v;
        }
        if let Some(v) = cli.grid_step {
            cfg.grid_step = Some(v);
        }
        if let Some(v) = &cli.an {
            cfg.a_n = parse_complex(v)?;
        }
        if let Some(v) = cli.out {
            cfg.out_path = Some(v);
        }
        if let Some(v) = cli.threads {
            cfg.threads = Some(v);
        }
        cfg.spec.grid_step = cfg.grid_step;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let (lo, hi) = self.command.form_arity();
        let k = self.form_paths.len();
        if k < lo || k > hi {
            let want = if lo == hi { format!("{lo}") } else { format!("{lo} or {hi}") };
            return Err(bad(format!("`{}` takes {want} --form argument(s), got {k}", self.command.name())));
        }
        if self.n < 3 {
            return Err(bad(format!("n must be at least 3, got {}", self.n)));
        }
        if !(self.t_min < self.t_max) || !(self.t_min > 0.0) {
            return Err(bad(format!("need 0 < tmin < tmax, got {} and {}", self.t_min, self.t_max)));
        }
        if let Some(h) = self.grid_step {
            if !(h > 0.0) {
                return Err(bad(format!("grid step must be positive, got {h}")));
            }
        }
        if self.threads == Some(0) {
            return Err(bad("threads must be positive"));
        }
        Ok(())
    }

    /// The resolved settings, for the CSV header.
    pub fn echo(&self) -> Vec<(String, String)> {
        let s = &self.spec;
        let forms: Vec<String> = self
            .form_paths
            .iter()
            .map(|p| p.file_name().map_or_else(|| p.display().to_string(), |f| f.to_string_lossy().into_owned()))
            .collect();
        vec![
            ("command".into(), self.command.name().into()),
            ("form".into(), forms.join(",")),
            ("n".into(), self.n.to_string()),
            ("tmin".into(), self.t_min.to_string()),
            ("tmax".into(), self.t_max.to_string()),
            ("grid_step".into(), self.grid_step.map_or("auto".into(), |h| h.to_string())),
            ("an".into(), format!("{},{}", self.a_n.re, self.a_n.im)),
            ("rel_tol".into(), s.rel_tol.to_string()),
            ("abs_tol".into(), s.abs_tol.to_string()),
            ("c_grid".into(), s.c_grid.to_string()),
            ("grid_rel_tol".into(), s.grid_rel_tol.to_string()),
            ("afe_eps".into(), s.afe_eps.to_string()),
            ("max_samples".into(), s.max_samples.to_string()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Result<RunConfig, ArgsError> {
        RunConfig::from_args(std::iter::once("evlab").chain(list.iter().copied()))
    }

    #[test]
    fn ini_parsing() {
        let kv = parse_ini("# comment\n[run]\nn = 4\ngrid-step = 0.01 ; trailing\n\n").unwrap();
        assert_eq!(kv, vec![("n".into(), "4".into()), ("grid_step".into(), "0.01".into())]);
        assert!(parse_ini("n 4").is_err());
    }

    #[test]
    fn complex_flag() {
        assert_eq!(parse_complex("0.5,-2").unwrap(), Complex64::new(0.5, -2.0));
        assert!(parse_complex("1").is_err());
        let cfg = args(&["scan-mu", "--form", "a.txt", "--an", "-1,0.5"]).unwrap();
        assert_eq!(cfg.a_n, Complex64::new(-1.0, 0.5));
    }

    #[test]
    fn arity_is_enforced() {
        assert!(matches!(args(&["cross", "--form", "a.txt"]), Err(ArgsError::Config(_))));
        assert!(args(&["cross", "--form", "a.txt", "--form", "b.txt"]).is_ok());
        assert!(matches!(args(&["variance"]), Err(ArgsError::Config(_))));
        assert!(args(&["verify", "--form", "a.txt", "--form", "b.txt"]).is_ok());
    }

    #[test]
    fn flags_override_config_file() {
        let dir = std::env::temp_dir().join(format!("evlab-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.ini");
        std::fs::write(&path, "form = even.txt\nn = 5\ntmin = 10\ntmax = 40\nc_grid = 0.2\n").unwrap();
        let p = path.to_str().unwrap();
        let cfg = args(&["mean-value", "--config", p, "--n", "4"]).unwrap();
        assert_eq!(cfg.n, 4);
        assert_eq!((cfg.t_min, cfg.t_max), (10.0, 40.0));
        assert_eq!(cfg.spec.c_grid, 0.2);
        assert_eq!(cfg.form_paths, vec![dir.join("even.txt")]);
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(matches!(args(&["verify", "--config", p, "--form", "x"]), Err(ArgsError::Config(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn invalid_ranges() {
        assert!(args(&["scan-mu", "--form", "a", "--tmin", "60", "--tmax", "50"]).is_err());
        assert!(args(&["scan-mu", "--form", "a", "--n", "2"]).is_err());
        assert!(matches!(args(&["frobnicate"]), Err(ArgsError::Usage(_))));
    }
}
