use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use quasigap::diophantine::{
    bad_approx_constant, check_hypotheses, check_transference, dirichlet_witness, LinearFormSystem, Psi, Thm13Params,
};
use quasigap::error::{Error, Result};
use quasigap::exactnum::{ScalarMode, Surd};
use quasigap::patches::{empirical_spectrum, PatchType};
use quasigap::pointset::{generate, write_csv as write_points};
use quasigap::scheme::{Omega, OmegaConfig, Scheme, SchemeConfig};
use quasigap::steinhaus::{ergodic_freq, suite, write_csv as write_steinhaus};
use quasigap::verify;
use quasigap::windowpartition::{analytic_spectrum, write_table, SpectrumSummary, TypeTwoScan};

const DIGITS: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "quasigap", version, about = "Cut-and-project sets, patch spectra and gap statistics")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Scheme (or, for `dioph`, experiment) configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, global = true, env = "QUASIGAP_THREADS")]
    threads: Option<usize>,
    /// Overrides the precision of surrogate arithmetic.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Region preset name or a JSON file describing it.
    #[arg(long, global = true, default_value = "closed-hypercube")]
    omega: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Point set with `|y| <= radius` as CSV.
    Gen {
        #[arg(long, default_value = "10")]
        radius: String,
    },
    /// Empirical patch spectrum as JSON.
    Patches {
        #[arg(long)]
        r: String,
        #[arg(long, default_value = "100")]
        ball_radius: String,
        #[arg(long = "type", default_value_t = 2)]
        patch_type: u8,
    },
    /// Analytic spectrum at one radius as CSV.
    Spectrum {
        #[arg(long)]
        r: String,
        #[arg(long = "type", default_value_t = 2)]
        patch_type: u8,
    },
    /// Analytic spectra over a grid of radii as CSV, optionally with an SVG step plot.
    Scan {
        #[arg(long, default_value = "1")]
        r_min: String,
        #[arg(long, default_value = "10")]
        r_max: String,
        #[arg(long, default_value = "1")]
        r_step: String,
        #[arg(long = "type", default_value_t = 2)]
        patch_type: u8,
        #[arg(long)]
        svg: bool,
    },
    /// Rotation partitions and their graphs for `N = 1..=n_max` as CSV.
    Steinhaus {
        #[arg(long, default_value = "(-1+1*sqrt(5))/2")]
        alpha: String,
        #[arg(long, default_value_t = 50)]
        n_max: u64,
        /// Also estimate interval frequencies along the orbit of this point.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Diophantine reports as JSON.
    Dioph,
    /// Runs the acceptance suite.
    Verify {
        /// Criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

fn parse_surd(s: &str, what: &str) -> Result<Surd> {
    Surd::parse(s).map_err(|e| Error::config(format!("{what}: {e}")))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}

fn load_scheme(common: &Common) -> Result<Scheme> {
    let path = common.config.as_ref().ok_or_else(|| Error::config("--config is required"))?;
    let mut cfg = SchemeConfig::from_json(&read(path)?)?;
    if let (Some(bits), ScalarMode::RationalSurrogate { precision_bits, .. }) = (common.precision_bits, &mut cfg.scalar_mode) {
        *precision_bits = bits;
    }
    Scheme::build(&cfg)
}

fn load_omega(common: &Common, d: usize) -> Result<Omega> {
    let cfg: OmegaConfig = if Path::new(&common.omega).is_file() {
        serde_json::from_str(&read(Path::new(&common.omega))?).map_err(|e| Error::config(e.to_string()))?
    } else {
        serde_json::from_value(json!({ "preset": common.omega })).map_err(|e| Error::config(e.to_string()))?
    };
    Omega::from_config(&cfg, d)
}

fn create(common: &Common, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(&common.out_dir)?;
    Ok(BufWriter::new(File::create(common.out_dir.join(name))?))
}

fn radii(min: &Surd, max: &Surd, step: &Surd) -> Result<Vec<Surd>> {
    if !step.signum().is_gt() || min.signum().is_lt() || min > max {
        return Err(Error::config("need 0 <= r-min <= r-max and r-step > 0"));
    }
    let mut out = Vec::new();
    let mut r = min.clone();
    while &r <= max {
        out.push(r.clone());
        r = &r + step;
    }
    Ok(out)
}

fn scan_rows(scheme: &Scheme, omega: &Omega, grid: &[Surd], t: PatchType) -> Result<Vec<SpectrumSummary>> {
    if t == PatchType::Type2 && grid.iter().all(|r| r.signum().is_gt()) {
        if let Ok(mut scan) = TypeTwoScan::new(scheme, omega, grid.last().expect("nonempty grid")) {
            let mut rows = Vec::with_capacity(grid.len());
            for r in grid {
                scan.advance(r)?;
                rows.push(scan.summary()?);
            }
            return Ok(rows);
        }
    }
    grid.iter().map(|r| Ok(analytic_spectrum(scheme, r, t, omega)?.summary())).collect()
}

/// Step plot of the number of distinct frequencies against the radius.
fn write_svg<W: Write>(rows: &[SpectrumSummary], mut out: W) -> Result<()> {
    let (w, h, pad) = (640.0, 360.0, 40.0);
    let r_max = rows.iter().map(|r| r.radius.to_f64()).fold(1e-9, f64::max);
    let y_max = rows.iter().map(|r| r.distinct_frequency_count()).max().unwrap_or(1).max(1) as f64;
    let x = |r: f64| pad + (w - 2.0 * pad) * r / r_max;
    let y = |c: f64| h - pad - (h - 2.0 * pad) * c / y_max;
    let mut path = String::new();
    for (i, row) in rows.iter().enumerate() {
        let (rx, cy) = (x(row.radius.to_f64()), y(row.distinct_frequency_count() as f64));
        if i == 0 {
            path.push_str(&format!("M{rx:.2},{cy:.2}"));
        } else {
            path.push_str(&format!(" H{rx:.2} V{cy:.2}"));
        }
    }
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#)?;
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#)?;
    writeln!(out, r#"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#, h - pad, w - pad, h - pad)?;
    writeln!(out, r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="black"/>"#, h - pad)?;
    writeln!(out, r#"<text x="{}" y="{}" font-size="12">r (max {r_max})</text>"#, w / 2.0, h - 10.0)?;
    writeln!(out, r#"<text x="5" y="{}" font-size="12">{y_max}</text>"#, pad)?;
    writeln!(out, r#"<path d="{path}" fill="none" stroke="steelblue" stroke-width="2"/>"#)?;
    writeln!(out, "</svg>")?;
    out.flush()?;
    Ok(())
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct TransferenceConfig {
    c: String,
    x: String,
    gamma: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct DiophConfig {
    /// Rows of the form matrix, exact literals.
    #[serde(default)]
    forms: Vec<Vec<String>>,
    #[serde(default)]
    dirichlet: Vec<u64>,
    height: Option<u64>,
    psi: Option<Psi>,
    transference: Option<TransferenceConfig>,
    thm13: Option<Thm13Params>,
    thm13_omega: Option<OmegaConfig>,
}

fn rational(s: &str, what: &str) -> Result<num_rational::BigRational> {
    parse_surd(s, what)?.to_rational().ok_or_else(|| Error::config(format!("{what} must be rational")))
}

fn dioph(common: &Common) -> Result<serde_json::Value> {
    let path = common.config.as_ref().ok_or_else(|| Error::config("--config is required"))?;
    let cfg: DiophConfig = serde_json::from_str(&read(path)?).map_err(|e| Error::config(e.to_string()))?;
    let mut report = serde_json::Map::new();
    if !cfg.forms.is_empty() {
        let rows: Vec<Vec<&str>> = cfg.forms.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
        let system = LinearFormSystem::from_strings(&rows)?;
        let witnesses: Vec<_> = cfg
            .dirichlet
            .iter()
            .map(|&n| dirichlet_witness(&system, n).map(|w| json!({ "N": n, "witness": w })))
            .collect::<Result<_>>()?;
        report.insert("dirichlet".into(), json!(witnesses));
        if let Some(h) = cfg.height {
            report.insert("bad_approx".into(), json!(bad_approx_constant(&system, h)?));
            if let Some(psi) = &cfg.psi {
                report.insert("hypotheses".into(), json!(check_hypotheses(&system, psi, h)?));
            }
        }
        if let Some(t) = &cfg.transference {
            let gamma = t.gamma.iter().map(|g| parse_surd(g, "gamma")).collect::<Result<Vec<_>>>()?;
            let check = check_transference(&system, &gamma, &rational(&t.c, "c")?, &rational(&t.x, "x")?)?;
            report.insert("transference".into(), json!(check));
        }
    }
    if let Some(mut params) = cfg.thm13 {
        if let Some(bits) = common.precision_bits {
            params.precision_bits = bits;
        }
        let region = cfg.thm13_omega.unwrap_or(OmegaConfig::Thm13Region { translate: None });
        let run = params.run(&Omega::from_config(&region, params.d)?)?;
        report.insert("thm13".into(), json!({ "run": run, "pass": run.pass() }));
    }
    Ok(serde_json::Value::Object(report))
}

fn write_json(common: &Common, name: &str, value: &serde_json::Value) -> Result<()> {
    let mut f = create(common, name)?;
    serde_json::to_writer_pretty(&mut f, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<ExitCode> {
    let common = &cli.common;
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::config(e.to_string()))?;
    }
    match &cli.command {
        Command::Gen { radius } => {
            let scheme = load_scheme(common)?;
            let points = generate(&scheme, &parse_surd(radius, "radius")?)?;
            write_points(&scheme, &points, DIGITS, create(common, "points.csv")?)?;
        }
        Command::Patches { r, ball_radius, patch_type } => {
            let scheme = load_scheme(common)?;
            let omega = load_omega(common, scheme.d())?;
            let t = PatchType::from_number(*patch_type)?;
            let r = parse_surd(r, "r")?;
            let spec = empirical_spectrum(&scheme, &r, &parse_surd(ball_radius, "ball radius")?, t, &omega)?;
            let classes: Vec<_> = spec
                .report()
                .into_iter()
                .map(|row| json!({ "row": row, "displacements": spec.counts[row.class_id].0.displacements }))
                .collect();
            let value = json!({
                "r": r.to_string(),
                "type": t.number(),
                "total": spec.total,
                "classes": classes,
            });
            write_json(common, "patches.json", &value)?;
        }
        Command::Spectrum { r, patch_type } => {
            let scheme = load_scheme(common)?;
            let omega = load_omega(common, scheme.d())?;
            let t = PatchType::from_number(*patch_type)?;
            let spec = analytic_spectrum(&scheme, &parse_surd(r, "r")?, t, &omega)?;
            write_table(&[spec.summary()], DIGITS, create(common, "spectrum.csv")?)?;
        }
        Command::Scan { r_min, r_max, r_step, patch_type, svg } => {
            let scheme = load_scheme(common)?;
            let omega = load_omega(common, scheme.d())?;
            let t = PatchType::from_number(*patch_type)?;
            let grid = radii(&parse_surd(r_min, "r-min")?, &parse_surd(r_max, "r-max")?, &parse_surd(r_step, "r-step")?)?;
            let rows = scan_rows(&scheme, &omega, &grid, t)?;
            write_table(&rows, DIGITS, create(common, "scan.csv")?)?;
            if *svg {
                write_svg(&rows, create(common, "scan.svg")?)?;
            }
        }
        Command::Steinhaus { alpha, n_max, beta, samples } => {
            let alpha = parse_surd(alpha, "alpha")?;
            let rows = suite(&alpha, *n_max)?;
            write_steinhaus(&rows, DIGITS, create(common, "steinhaus.csv")?)?;
            if let Some(beta) = beta {
                let est = ergodic_freq(&parse_surd(beta, "beta")?, &alpha, *n_max, *samples)?;
                let freqs: Vec<String> = est.frequencies().iter().map(|q| q.to_string()).collect();
                write_json(common, "ergodic.json", &json!({ "N": n_max, "R": samples, "counts": est.counts, "frequencies": freqs }))?;
            }
        }
        Command::Dioph => {
            let value = dioph(common)?;
            write_json(common, "dioph.json", &value)?;
        }
        Command::Verify { criteria } => {
            let reports = verify::run(criteria);
            let mut out = std::io::stdout().lock();
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            write_json(common, "verify.json", &json!(reports))?;
            if reports.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
