use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::{family_document, recheck_file, render_report, run_suite, CertificateFile, CertifyError, ReportFormat, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "primfilt", version, about = "Primitive filtrations of Coxeter arrangements, computed and certified exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the datum, D and the families Θ^(k), Ξ^(k) as JSON.
    Generate(GenerateArgs),
    /// Run the certificate suite; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Render a certificate file as markdown or TSV tables.
    Report(ReportArgs),
    /// Re-run every certificate from its recorded inputs and compare.
    Recheck(RecheckArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long = "type")]
    pub arrangement: String,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub k_min: i64,
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    pub k_max: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Arrangement type string, e.g. B2 or A1xB2; repeatable.
    #[arg(long = "type")]
    pub types: Vec<String>,
    /// Family document from `generate`, used instead of generating; repeatable.
    #[arg(long)]
    pub families: Vec<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub k_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k_max: Option<i64>,
    /// `const:K` or `orbit:NAME=K,...`; repeatable. Default const:-3..3.
    #[arg(long = "multiplicity")]
    pub multiplicities: Vec<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with the same fields; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Record per-certificate wall time.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub certs: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Markdown)]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecheckArgs {
    #[arg(long)]
    pub certs: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl VerifyArgs {
    pub fn into_config(self) -> Result<SuiteConfig, CertifyError> {
        let mut c = match &self.config {
            Some(path) => {
                let text = read(path)?;
                toml::from_str(&text).map_err(|e| CertifyError::Usage(format!("{}: {e}", path.display())))?
            }
            None => SuiteConfig::default(),
        };
        if !self.types.is_empty() {
            c.types = self.types;
        }
        if !self.families.is_empty() {
            c.families = self.families;
        }
        if !self.multiplicities.is_empty() {
            c.multiplicities = self.multiplicities;
        }
        c.k_min = self.k_min.unwrap_or(c.k_min);
        c.k_max = self.k_max.unwrap_or(c.k_max);
        c.samples = self.samples.unwrap_or(c.samples);
        c.seed = self.seed.unwrap_or(c.seed);
        c.jobs = self.jobs.unwrap_or(c.jobs);
        c.out = self.out.or(c.out);
        c.timing |= self.timing;
        Ok(c)
    }
}

fn read(path: &Path) -> Result<String, CertifyError> {
    std::fs::read_to_string(path).map_err(|e| CertifyError::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CertifyError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CertifyError::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn generate(args: GenerateArgs) -> Result<i32, CertifyError> {
    let doc = family_document(&args.arrangement, args.k_min, args.k_max)?;
    emit(args.out.as_deref(), &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"))?;
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<i32, CertifyError> {
    let config = args.into_config()?;
    let file = run_suite(&config)?;
    emit(config.out.as_deref(), &(file.to_json() + "\n"))?;
    let failed: Vec<_> = file.failures().collect();
    for c in &failed {
        eprintln!("FAIL {}: {}", c.id, c.detail);
    }
    eprintln!("{} certificates, {} failed", file.certificates.len(), failed.len());
    Ok(if failed.is_empty() { 0 } else { 1 })
}

fn report(args: ReportArgs) -> Result<i32, CertifyError> {
    let file = CertificateFile::from_json(&read(&args.certs)?)?;
    emit(args.out.as_deref(), &render_report(&file, args.format))?;
    Ok(0)
}

fn recheck(args: RecheckArgs) -> Result<i32, CertifyError> {
    let file = CertificateFile::from_json(&read(&args.certs)?)?;
    let differing = recheck_file(&file, args.jobs.max(1))?;
    for id in &differing {
        eprintln!("DIFFERS {id}");
    }
    eprintln!("{} certificates rechecked, {} differ", file.certificates.len(), differing.len());
    Ok(if differing.is_empty() { 0 } else { 1 })
}

/// Parses `args` (program name first) and runs the command. The result is
/// the process exit code: 0, 1 or 2.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Report(a) => report(a),
        Command::Recheck(a) => recheck(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
