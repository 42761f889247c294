//! The `euclid` command line. Everything except process exit lives here so
//! that the commands can be driven from tests.
//!
//! Exit codes: 0 success, 1 computational failure, 2 usage error.

mod commands;
mod plot;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

pub use commands::{cmd_companion, cmd_eigs, cmd_fields, cmd_poly, cmd_report, cmd_verify};
pub use plot::{log_curves_svg, roots_svg};

use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_SEED: u64 = 0x5EED;
/// Largest `k` for `eigs` without `--force`.
pub const EIGS_MAX_K: u32 = 12;
/// Largest `k` for `companion` without `--force`.
pub const COMPANION_MAX_K: u32 = 14;
/// Largest `k` for `poly` without `--force`.
pub const POLY_MAX_K: u32 = 16;
/// Largest `k` for a matrix field without `--force`.
pub const FIELD_MATRIX_MAX_K: u32 = 10;

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "euclid", version, about = "Euclid polynomials, their companion matrices and conditioning experiments")]
pub struct RunConfig {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Output format; the accepted values depend on the command.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Mantissa bits for software floating point.
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Lift the desk-scale caps on `k`.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisArg {
    Monomial,
    Shifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    Euclid,
    EuclidTilde,
    Mandelbrot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum KindArg {
    Pseudospectrum,
    PseudozeroMonomial,
    PseudozeroShifted,
    /// Shifted-basis majorants on `0 <= u <= 1.118` for `k = 2..=K`.
    ShiftedMajorant,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VariantArgs {
    /// Seed block: 0..3 or its name.
    #[arg(long)]
    pub e2: Option<String>,
    /// Top-level block order, e.g. `0,2,1,3`.
    #[arg(long)]
    pub block_order: Option<String>,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Coefficients of E_k and a property report.
    Poly {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "monomial")]
        basis: BasisArg,
    },
    /// Export a companion matrix with a structural report.
    Companion {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "euclid")]
        family: FamilyArg,
        /// Exact characteristic polynomial check; automatic for k <= 9.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        variant: VariantArgs,
    },
    /// Eigenvalues with condition numbers and residuals.
    Eigs {
        #[arg(long)]
        k: u32,
        /// Also write an SVG scatter of the roots.
        #[arg(long)]
        plot: bool,
        #[command(flatten)]
        variant: VariantArgs,
    },
    /// Pseudospectrum or pseudozero field with contours.
    Fields {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Contour levels `lo:hi:count`, log-spaced.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 400)]
        nx: usize,
        #[arg(long)]
        ny: Option<usize>,
        /// Real range `lo:hi`.
        #[arg(long, allow_hyphen_values = true)]
        re: Option<String>,
        /// Imaginary range `lo:hi`.
        #[arg(long, allow_hyphen_values = true)]
        im: Option<String>,
    },
    /// Run the identity and consistency checks.
    Verify {
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        /// Only checks whose name starts with this.
        #[arg(long)]
        check: Option<String>,
        /// Largest n for the Egyptian fraction identity.
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Condition-number slope fit and merge-band table.
    Report {
        #[arg(long)]
        slope: bool,
        #[arg(long, default_value_t = 2)]
        kmin: u32,
        #[arg(long, default_value_t = 12)]
        kmax: u32,
        #[arg(long)]
        table1: bool,
        /// Rows of the band table.
        #[arg(long, value_delimiter = ',', default_values_t = [6, 7, 8])]
        k: Vec<u32>,
        /// Grid nodes per side for the band table.
        #[arg(long, default_value_t = 400)]
        grid: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Poly { .. } => "poly",
            Command::Companion { .. } => "companion",
            Command::Eigs { .. } => "eigs",
            Command::Fields { .. } => "fields",
            Command::Verify { .. } => "verify",
            Command::Report { .. } => "report",
        }
    }
}

/// Files written by a command, relative to the output directory.
#[derive(Debug)]
pub struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(path)
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(name, s)
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

/// Result of a command that ran to the end. `failed` marks checks that did
/// not hold.
#[derive(Debug, Default)]
pub struct Outcome {
    pub failed: bool,
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::Precondition(_)
        | Error::UnknownFormat(_)
        | Error::Parse(_)
        | Error::GridBudget { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn parse_range(s: &str, what: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidArgument(format!("--{what} expects lo:hi, got `{s}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// `lo:hi:count` with `0 < lo <= hi`.
pub fn parse_eps(s: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidArgument(format!("--eps expects lo:hi:count, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 || count > 200 {
        return Err(bad());
    }
    Ok((lo, hi, count))
}

impl RunConfig {
    fn check_format(&self, allowed: &[&str]) -> Result<()> {
        match &self.global.format {
            Some(f) if !allowed.contains(&f.as_str()) => Err(Error::UnknownFormat(format!(
                "{f} (`{}` accepts {})",
                self.command.name(),
                allowed.join(", ")
            ))),
            _ => Ok(()),
        }
    }

    fn cap(&self, k: u32, max: u32, what: &str) -> Result<()> {
        if k > max && !self.global.force {
            return Err(Error::Precondition(format!(
                "{what} is capped at k = {max} at desk scale; pass --force to go to k = {k}"
            )));
        }
        Ok(())
    }

    /// All flag checks; nothing expensive runs before this passes.
    pub fn validate(&self) -> Result<()> {
        let g = &self.global;
        if g.threads == Some(0) {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        if let Some(b) = g.precision_bits {
            if !(53..=1 << 20).contains(&b) {
                return Err(Error::InvalidArgument(format!("--precision-bits {b} outside 53..=1048576")));
            }
        }
        match &self.command {
            Command::Poly { k, .. } => {
                self.check_format(&["json"])?;
                positive(*k)?;
                self.cap(*k, POLY_MAX_K, "poly")?;
            }
            Command::Companion { k, family, verify, variant } => {
                self.check_format(&["mtx", "matrix-market", "csv", "csv-triplets", "json", "dense-json"])?;
                positive(*k)?;
                if *family == FamilyArg::Mandelbrot && *k < 2 {
                    return Err(Error::Precondition("Mandelbrot companions start at k = 2".into()));
                }
                self.cap(*k, COMPANION_MAX_K, "companion")?;
                if *verify {
                    self.cap(*k, crate::analysis::VERIFY_MAX_K, "exact verification")?;
                    if *k > 10 {
                        return Err(Error::Precondition("exact verification stops at k = 10".into()));
                    }
                }
                if *family == FamilyArg::Mandelbrot && (variant.e2.is_some() || variant.block_order.is_some()) {
                    return Err(Error::InvalidArgument("variants apply to the Euclid families only".into()));
                }
                let blocks = if *family == FamilyArg::EuclidTilde { *k } else { k.saturating_sub(1) };
                commands::variant_config(variant, blocks)?;
            }
            Command::Eigs { k, variant, .. } => {
                self.check_format(&["csv"])?;
                positive(*k)?;
                self.cap(*k, EIGS_MAX_K, "eigs")?;
                commands::variant_config(variant, k.saturating_sub(1))?;
            }
            Command::Fields { k, kind, eps, nx, ny, re, im } => {
                self.check_format(&["csv", "svg"])?;
                positive(*k)?;
                if let Some(e) = eps {
                    parse_eps(e)?;
                }
                let (re, im) = commands::window(re.as_deref(), im.as_deref())?;
                let ny = ny.unwrap_or(*nx);
                match kind {
                    KindArg::ShiftedMajorant => {
                        if *k < 2 || *k > 30 {
                            return Err(Error::Precondition("shifted majorant curves need 2 <= k <= 30".into()));
                        }
                        if *nx < 2 || *nx > 100_000 {
                            return Err(Error::InvalidArgument("--nx must be in 2..=100000".into()));
                        }
                    }
                    KindArg::Pseudospectrum => {
                        self.cap(*k, FIELD_MATRIX_MAX_K, "a matrix field")?;
                        crate::fields::GridSpec::new(re, im, *nx, ny)?.check_budget(crate::fields::DEFAULT_NODE_BUDGET)?;
                    }
                    _ => {
                        self.cap(*k, POLY_MAX_K, "a polynomial field")?;
                        crate::fields::GridSpec::new(re, im, *nx, ny)?.check_budget(crate::fields::DEFAULT_NODE_BUDGET)?;
                    }
                }
            }
            Command::Verify { kmax, n, .. } => {
                self.check_format(&["json"])?;
                positive(*kmax)?;
                self.cap(*kmax, EIGS_MAX_K, "verify")?;
                if *n == 0 || *n > 30 {
                    return Err(Error::InvalidArgument("--n must be in 1..=30".into()));
                }
            }
            Command::Report { slope, kmin, kmax, table1, k, grid } => {
                self.check_format(&["csv", "json"])?;
                if !slope && !table1 {
                    return Err(Error::InvalidArgument("report needs --slope and/or --table1".into()));
                }
                if *slope && (*kmin < 2 || *kmax > crate::spectra::MAX_EIGS_K || *kmax < kmin + 2) {
                    return Err(Error::Precondition(format!(
                        "the slope fit needs 2 <= kmin and kmin + 2 <= kmax <= {} (at least 3 points); got {kmin}..={kmax}",
                        crate::spectra::MAX_EIGS_K
                    )));
                }
                if *table1 {
                    if let Some(bad) = k.iter().find(|k| !(2..=9).contains(*k)) {
                        return Err(Error::Precondition(format!("band rows need 2 <= k <= 9, got {bad}")));
                    }
                    if !(20..=1000).contains(grid) {
                        return Err(Error::InvalidArgument("--grid must be in 20..=1000".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Common prefix of the files a command writes.
    pub fn stem(&self) -> String {
        match &self.command {
            Command::Poly { k, basis } => format!("poly_k{k}_{}", if *basis == BasisArg::Monomial { "monomial" } else { "shifted" }),
            Command::Companion { k, family, .. } => format!("companion_{}_k{k}", family_name(*family)),
            Command::Eigs { k, .. } => format!("eigs_k{k}"),
            Command::Fields { k, kind, .. } => format!("fields_k{k}_{}", kind_name(*kind)),
            Command::Verify { .. } => "verify".into(),
            Command::Report { .. } => "report".into(),
        }
    }
}

fn positive(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("--k must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn family_name(f: FamilyArg) -> &'static str {
    match f {
        FamilyArg::Euclid => "euclid",
        FamilyArg::EuclidTilde => "euclid_tilde",
        FamilyArg::Mandelbrot => "mandelbrot",
    }
}

pub(crate) fn kind_name(k: KindArg) -> &'static str {
    match k {
        KindArg::Pseudospectrum => "pseudospectrum",
        KindArg::PseudozeroMonomial => "pseudozero_monomial",
        KindArg::PseudozeroShifted => "pseudozero_shifted",
        KindArg::ShiftedMajorant => "shifted_majorant",
    }
}

fn dispatch(cfg: &RunConfig, out: &mut Output) -> Result<Outcome> {
    match &cfg.command {
        Command::Poly { .. } => cmd_poly(cfg, out),
        Command::Companion { .. } => cmd_companion(cfg, out),
        Command::Eigs { .. } => cmd_eigs(cfg, out),
        Command::Fields { .. } => cmd_fields(cfg, out),
        Command::Verify { .. } => cmd_verify(cfg, out),
        Command::Report { .. } => cmd_report(cfg, out),
    }
}

/// Run a validated configuration, write its manifest and return the exit
/// code. Messages go to stdout and errors to stderr.
pub fn execute(cfg: &RunConfig) -> i32 {
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    let start = Instant::now();
    let mut out = match Output::new(&cfg.global.out) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", cfg.global.out.display());
            return EXIT_FAILURE;
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.global.threads.unwrap_or(0))
        .build();
    let result = match pool {
        Ok(pool) => pool.install(|| dispatch(cfg, &mut out)),
        Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
    };
    let threads = cfg.global.threads.unwrap_or_else(rayon::current_num_threads);
    let (code, status, error) = match &result {
        Ok(o) if o.failed => (EXIT_FAILURE, "failed", None),
        Ok(_) => (EXIT_OK, "ok", None),
        Err(e) => (exit_code(e), "error", Some(e.to_string())),
    };
    let manifest = json!({
        "command": cfg.command.name(),
        "cfg": cfg,
        "versions": {
            "euclid_companion": env!("CARGO_PKG_VERSION"),
            "manifest": 1,
        },
        "threads": threads,
        "elapsed_ms": start.elapsed().as_millis(),
        "status": status,
        "error": error,
        "outputs": out.files(),
    });
    let manifest_name = format!("{}_manifest.json", cfg.stem());
    if let Err(e) = out.write_json(&manifest_name, &manifest) {
        eprintln!("error: writing the manifest: {e}");
        return EXIT_FAILURE;
    }
    match result {
        Ok(o) => {
            for l in o.lines {
                println!("{l}");
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    code
}

/// Parse arguments (including the program name) and run.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("euclid").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_eps("1e-2:1e-1:10").unwrap(), (1e-2, 1e-1, 10));
        assert!(parse_eps("1e-1:1e-2:10").is_err());
        assert!(parse_eps("0:1:3").is_err());
        assert_eq!(parse_range("-1.8:0.8", "re").unwrap(), (-1.8, 0.8));
        assert!(parse_range("1:1", "re").is_err());
    }

    #[test]
    fn validation() {
        assert!(parse(&["poly", "--k", "4"]).validate().is_ok());
        assert!(parse(&["poly", "--k", "0"]).validate().is_err());
        assert!(parse(&["eigs", "--k", "13"]).validate().is_err());
        assert!(parse(&["eigs", "--k", "13", "--force"]).validate().is_ok());
        let slope = parse(&["report", "--slope", "--kmax", "3"]).validate().unwrap_err();
        assert_eq!(exit_code(&slope), EXIT_USAGE);
        assert!(parse(&["report"]).validate().is_err());
        assert!(parse(&["companion", "--k", "3", "--format", "png"]).validate().is_err());
        assert!(parse(&["fields", "--k", "4", "--kind", "pseudospectrum", "--nx", "2000"]).validate().is_err());
        assert!(parse(&["--threads", "0", "verify"]).validate().is_err());
    }

    #[test]
    fn stems() {
        assert_eq!(parse(&["poly", "--k", "3", "--basis", "shifted"]).stem(), "poly_k3_shifted");
        assert_eq!(
            parse(&["fields", "--k", "6", "--kind", "pseudozero_monomial"]).stem(),
            "fields_k6_pseudozero_monomial"
        );
    }
}
