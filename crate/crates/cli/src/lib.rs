//! Batch driver: configuration, suite execution, and report output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use liedefine::catalog::{make_algebra_with, AlgebraKind, Limits};
use liedefine::verifier::{run_suite, Record, Report, Status, Suite};
use liedefine::Error;
use rayon::prelude::*;

pub const DEFAULT_MAXDEG: i32 = 4;
pub const DEFAULT_MAXLEN: usize = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    InvalidAlgebra(String),
    #[error("{0}")]
    Rank(String),
    #[error("{0} (pass --override-cutoffs to lift)")]
    Cutoff(String),
    #[error("cannot write report to {path}: {reason}")]
    Unwritable { path: String, reason: String },
    #[error("configuration: {0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidAlgebra(_) => 3,
            CliError::Rank(_) => 4,
            CliError::Cutoff(_) => 5,
            CliError::Unwritable { .. } => 6,
            CliError::Config(_) => 7,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAlgebra(_) => CliError::InvalidAlgebra(e.to_string()),
            Error::UnsupportedRank { .. } => CliError::Rank(e.to_string()),
            Error::CutoffExceeded { .. } => CliError::Cutoff(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(CliError::Config(format!(
                "output must be json or text, got `{s}`"
            ))),
        }
    }
}

impl Format {
    fn name(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "text",
        }
    }
}

/// Settings of one run; unset fields fall back to the config file, then
/// to the defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub algebra: Option<String>,
    pub suites: Option<String>,
    pub maxdeg: Option<i32>,
    pub maxlen: Option<usize>,
    pub output: Option<Format>,
    pub out: Option<PathBuf>,
    pub strict: Option<bool>,
    pub override_cutoffs: Option<bool>,
    pub jobs: Option<usize>,
}

impl Settings {
    /// `self` wins over `base`.
    pub fn or(self, base: Settings) -> Settings {
        Settings {
            algebra: self.algebra.or(base.algebra),
            suites: self.suites.or(base.suites),
            maxdeg: self.maxdeg.or(base.maxdeg),
            maxlen: self.maxlen.or(base.maxlen),
            output: self.output.or(base.output),
            out: self.out.or(base.out),
            strict: self.strict.or(base.strict),
            override_cutoffs: self.override_cutoffs.or(base.override_cutoffs),
            jobs: self.jobs.or(base.jobs),
        }
    }

    /// Parses a flat `key = value` file (`#` starts a comment). Keys mirror
    /// the long flags.
    pub fn parse_config(text: &str) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: String| CliError::Config(format!("line {}: {m}", no + 1));
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            let num = |v: &str| {
                v.parse::<i64>()
                    .map_err(|_| bad(format!("`{k}` needs an integer, got `{v}`")))
            };
            let flag = |v: &str| match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(bad(format!("`{k}` needs true or false, got `{v}`"))),
            };
            match k {
                "algebra" => s.algebra = Some(v.to_string()),
                "suites" => s.suites = Some(v.to_string()),
                "maxdeg" => s.maxdeg = Some(num(v)? as i32),
                "maxlen" => s.maxlen = Some(num(v)?.max(0) as usize),
                "output" => s.output = Some(v.parse().map_err(|e: CliError| bad(e.to_string()))?),
                "out" => s.out = Some(PathBuf::from(v)),
                "strict" => s.strict = Some(flag(v)?),
                "override-cutoffs" => s.override_cutoffs = Some(flag(v)?),
                "jobs" => s.jobs = Some(num(v)?.max(1) as usize),
                _ => return Err(bad(format!("unknown key `{k}`"))),
            }
        }
        Ok(s)
    }

    pub fn load_config(path: &Path) -> Result<Settings, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Settings::parse_config(&text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algebra: AlgebraKind,
    pub suites: Vec<Suite>,
    pub maxdeg: i32,
    pub maxlen: usize,
    pub output: Format,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub override_cutoffs: bool,
    pub jobs: Option<usize>,
}

/// Parses `all` or a comma list; the result is in the fixed suite order.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>, CliError> {
    let mut v = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            v.extend(Suite::ALL);
        } else {
            v.push(
                part.parse::<Suite>()
                    .map_err(|e| CliError::Config(e.to_string()))?,
            );
        }
    }
    if v.is_empty() {
        return Err(CliError::Config("no suites requested".into()));
    }
    v.sort();
    v.dedup();
    Ok(v)
}

impl RunConfig {
    pub fn from_settings(s: Settings) -> Result<RunConfig, CliError> {
        let algebra = s.algebra.ok_or_else(|| {
            CliError::Config("no algebra given (use --algebra or a config file)".into())
        })?;
        let cfg = RunConfig {
            algebra: algebra.parse::<AlgebraKind>()?,
            suites: parse_suites(s.suites.as_deref().unwrap_or("all"))?,
            maxdeg: s.maxdeg.unwrap_or(DEFAULT_MAXDEG),
            maxlen: s.maxlen.unwrap_or(DEFAULT_MAXLEN),
            output: s.output.unwrap_or_default(),
            out: s.out,
            strict: s.strict.unwrap_or(false),
            override_cutoffs: s.override_cutoffs.unwrap_or(false),
            jobs: s.jobs,
        };
        cfg.algebra.check_rank(&cfg.limits()?)?;
        Ok(cfg)
    }

    /// Engine limits; checks the default cutoffs unless overridden.
    pub fn limits(&self) -> Result<Limits, CliError> {
        if self.maxdeg < 1 || self.maxlen < 1 {
            return Err(CliError::Config(
                "maxdeg and maxlen must be positive".into(),
            ));
        }
        if self.override_cutoffs {
            return Ok(Limits::unbounded());
        }
        let l = Limits::default();
        if self.maxdeg > l.max_degree {
            return Err(CliError::Cutoff(format!(
                "maxdeg = {} exceeds the cutoff {}",
                self.maxdeg, l.max_degree
            )));
        }
        if self.maxlen > l.max_length {
            return Err(CliError::Cutoff(format!(
                "maxlen = {} exceeds the cutoff {}",
                self.maxlen, l.max_length
            )));
        }
        Ok(l)
    }

    /// The config echo carried by the report (everything that affects its
    /// content; not the job count or the output path).
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("algebra".into(), self.algebra.to_string());
        m.insert(
            "suites".into(),
            self.suites
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(","),
        );
        m.insert("maxdeg".into(), self.maxdeg.to_string());
        m.insert("maxlen".into(), self.maxlen.to_string());
        m.insert("output".into(), self.output.name().into());
        m.insert("strict".into(), self.strict.to_string());
        m.insert("override-cutoffs".into(), self.override_cutoffs.to_string());
        if matches!(self.algebra, AlgebraKind::K(_)) {
            m.insert(
                "contact-bracket".into(),
                "field-homomorphic: Delta(f)g_t - f_t Delta(g) + {f,g}_P (the printed bracket has - before the Poisson term)"
                    .into(),
            );
        }
        m
    }
}

/// A finished run: the report, its rendering, and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub rendered: String,
    pub exit_code: i32,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = make_algebra_with(cfg.algebra, cfg.limits()?)?;
    if let Some(p) = &cfg.out {
        check_writable(p)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let results = pool.install(|| {
        cfg.suites
            .par_iter()
            .map(|s| run_suite(*s, &spec, cfg.maxdeg, cfg.maxlen))
            .collect::<Vec<_>>()
    });
    let mut report = Report::new(&cfg.algebra.to_string(), cfg.echo());
    for (suite, r) in cfg.suites.iter().zip(results) {
        match r {
            Ok((recs, rows)) => {
                report.records.extend(recs);
                report.homology.extend(rows);
            }
            Err(e @ Error::CutoffExceeded { .. }) => return Err(e.into()),
            Err(e) => report.records.push(Record {
                suite: suite.name().into(),
                family: suite.name().into(),
                relation: "suite run".into(),
                degree: None,
                weight: None,
                status: Status::Failed,
                witness: Some(e.to_string()),
                repair: None,
                note: None,
            }),
        }
    }
    let rendered = match cfg.output {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    if let Some(p) = &cfg.out {
        write_atomically(p, &rendered)?;
    }
    let exit_code = if report.count(Status::Failed) > 0 {
        1
    } else if cfg.strict && report.count(Status::VerifiedAfterSignRepair) > 0 {
        2
    } else {
        0
    };
    Ok(Outcome {
        report,
        rendered,
        exit_code,
    })
}

fn parent_dir(p: &Path) -> &Path {
    match p.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    }
}

fn unwritable(p: &Path, reason: impl ToString) -> CliError {
    CliError::Unwritable {
        path: p.display().to_string(),
        reason: reason.to_string(),
    }
}

fn check_writable(p: &Path) -> Result<(), CliError> {
    let dir = parent_dir(p);
    if !dir.is_dir() {
        return Err(unwritable(p, "no such directory"));
    }
    if p.is_dir() {
        return Err(unwritable(p, "is a directory"));
    }
    tempfile::NamedTempFile::new_in(dir)
        .map(drop)
        .map_err(|e| unwritable(p, e))
}

/// Writes through a temporary file in the target directory and renames it.
pub fn write_atomically(p: &Path, content: &str) -> Result<(), CliError> {
    let mut tmp = tempfile::NamedTempFile::new_in(parent_dir(p)).map_err(|e| unwritable(p, e))?;
    tmp.write_all(content.as_bytes())
        .map_err(|e| unwritable(p, e))?;
    tmp.persist(p).map_err(|e| unwritable(p, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_parses() {
        let s = Settings::parse_config(
            "# run\nalgebra = vect:3\nsuites = relations, tables\nmaxdeg = 4\noutput = text\nstrict = true\n",
        )
        .unwrap();
        assert_eq!(s.algebra.as_deref(), Some("vect:3"));
        assert_eq!(s.output, Some(Format::Text));
        assert_eq!(s.strict, Some(true));
        let e = Settings::parse_config("colour = blue").unwrap_err();
        assert_eq!(e.exit_code(), 7);
        assert!(Settings::parse_config("maxdeg = many").is_err());
    }

    #[test]
    fn flags_override_config() {
        let flags = Settings {
            maxdeg: Some(3),
            ..Settings::default()
        };
        let file = Settings {
            algebra: Some("witt".into()),
            maxdeg: Some(5),
            ..Settings::default()
        };
        let s = flags.or(file);
        assert_eq!((s.algebra.as_deref(), s.maxdeg), (Some("witt"), Some(3)));
    }

    #[test]
    fn suites_in_fixed_order() {
        assert_eq!(
            parse_suites("tables,relations,tables").unwrap(),
            vec![Suite::Relations, Suite::Tables]
        );
        assert_eq!(parse_suites("all").unwrap(), Suite::ALL.to_vec());
        assert!(parse_suites("relations,nope").is_err());
    }

    #[test]
    fn exit_codes_are_distinct() {
        let cfg = |a: &str, d: i32| {
            RunConfig::from_settings(Settings {
                algebra: Some(a.into()),
                maxdeg: Some(d),
                ..Settings::default()
            })
        };
        assert_eq!(cfg("vect:99", 4).unwrap_err().exit_code(), 4);
        assert_eq!(cfg("blah:3", 4).unwrap_err().exit_code(), 3);
        assert_eq!(cfg("vect:3", 9).unwrap_err().exit_code(), 5);
        assert!(cfg("vect:3", 6).is_ok());
    }
}
