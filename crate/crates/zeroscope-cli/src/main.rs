//! zeroscope CLI: classify coefficient streams, count and localize zeros,
//! corroborate verdicts, verify the derivative identity, and check the
//! growth bound.
//!
//! Exit codes: 0 success, 1 parse/IO failure, 2 indecisive classification,
//! 3 unresolvable contour, 4 exact-identity failure, 5 report inconsistent
//! with its verdict (or growth-bound violation).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use zeroscope::family::FamilySpec;
use zeroscope::harness::{
    bessel_zero_transfer, classify, corroborate, recommended_delta, Classification,
    CorroborateOptions, CorroborationReport, Verdict, ZeroEntry,
};
use zeroscope::mp::Prec;
use zeroscope::series::{growth_bound_check, make_tail_certificate, precision_from_env};
use zeroscope::zeros::{localize_zeros, Disk, LocalizeError, SeriesFunction, ZeroCountError};

mod output;

use output::{write_named_rows, Format, Sink};

#[derive(Parser)]
#[command(
    name = "zeroscope",
    version,
    about = "Growth classification and argument-principle zero counting for coefficient streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Working precision in bits (minimum 64). Overrides ZEROSCOPE_PREC_BITS.
    #[arg(long, global = true)]
    prec_bits: Option<u32>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the primary report to this path instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a stream by the growth of its factorial-weighted transform.
    Classify {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 128)]
        n_max: usize,
    },
    /// Count and localize zeros in a disk.
    Zeros {
        #[arg(long)]
        family: String,
        #[arg(long)]
        radius: f64,
        /// Disk center as "a+bi" (default 0).
        #[arg(long, default_value = "0")]
        center: String,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        #[arg(long, default_value_t = 128)]
        n_max: usize,
        /// Also write zero locations as CSV plot data (re,im,err,mult).
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Classify, then corroborate with zero counts over growing disks.
    Corroborate {
        #[arg(long)]
        family: String,
        /// Comma-separated disk radii; defaults to the family registry.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 128)]
        n_max: usize,
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Exactly verify f⁽ⁿ⁾(0) = kⁿQ(n) for exp-poly models.
    VerifyLemma {
        /// exppoly family specifier; omit when using --random-trials.
        #[arg(long)]
        family: Option<String>,
        /// Verification range "lo..hi" (inclusive), must sit above deg P.
        #[arg(long)]
        n: Option<String>,
        /// Number of seeded random models to verify.
        #[arg(long)]
        random_trials: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Check |f(z)| ≤ M·e^{2|z|/δ} at seeded random points.
    GrowthCheck {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Sample disk radius.
        #[arg(long, default_value_t = 10.0)]
        max_z: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 128)]
        n_probe: usize,
    },
}

fn resolve_precision(flag: Option<u32>) -> Result<Prec, String> {
    if let Some(bits) = flag {
        if bits < 64 {
            return Err(format!("--prec-bits {bits} is below the 64-bit minimum"));
        }
        return Ok(Prec(bits));
    }
    match precision_from_env() {
        Some(Ok(p)) => Ok(p),
        Some(Err(msg)) => Err(msg),
        None => Ok(Prec::DEFAULT),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version output is not an error
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let prec = match resolve_precision(cli.prec_bits) {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let mut sink = match Sink::open(cli.output.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let code = match run(cli.command, prec, cli.format, &mut sink) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    };
    if let Err(e) = sink.finish() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}

fn parse_family(s: &str) -> Result<FamilySpec, String> {
    FamilySpec::parse(s).map_err(|e| e.to_string())
}

fn run(cmd: Command, prec: Prec, format: Format, sink: &mut Sink) -> Result<u8, String> {
    match cmd {
        Command::Classify { family, n_max } => {
            if n_max < 16 {
                return Err("--n-max must be at least 16".into());
            }
            let spec = parse_family(&family)?;
            let stream = spec.stream(prec).map_err(|e| e.to_string())?;
            let verdict = classify(&stream, n_max);
            emit_verdict(sink, format, &family, &verdict)?;
            Ok(if verdict.classification == Classification::Indecisive { 2 } else { 0 })
        }
        Command::Zeros { family, radius, center, eps, n_max, plot_data } => {
            if !(radius > 0.0) {
                return Err("--radius must be positive".into());
            }
            if !(eps > 0.0) {
                return Err("--eps must be positive".into());
            }
            if n_max < 16 {
                return Err("--n-max must be at least 16".into());
            }
            let spec = parse_family(&family)?;
            let stream = spec.stream(prec).map_err(|e| e.to_string())?;
            let center = parse_center(&center)?;
            let verdict = classify(&stream, n_max);
            let delta = recommended_delta(&verdict);
            let cert = make_tail_certificate(&stream, delta, n_max.max(64))
                .map_err(|e| e.to_string())?;
            let f = SeriesFunction::new(stream, cert);
            match localize_zeros(&f, Disk::new(center, radius), eps) {
                Ok(report) => {
                    let entries: Vec<ZeroEntry> =
                        report.zeros.iter().map(ZeroEntry::from_zero).collect();
                    if let Some(path) = plot_data {
                        write_plot_data(&path, &entries).map_err(|e| e.to_string())?;
                    }
                    emit_zero_report(sink, format, &family, &report, &entries)?;
                    Ok(0)
                }
                Err(LocalizeError::Count(ZeroCountError::Eval(e))) => Err(e.to_string()),
                Err(e) => {
                    eprintln!("contour resolution failed: {e}");
                    Ok(3)
                }
            }
        }
        Command::Corroborate { family, radii, n_max, plot_data } => {
            if n_max < 16 {
                return Err("--n-max must be at least 16".into());
            }
            let spec = parse_family(&family)?;
            let stream = spec.stream(prec).map_err(|e| e.to_string())?;
            let radii = if radii.is_empty() { spec.default_radii() } else { radii };
            if !radii.windows(2).all(|w| w[0] < w[1]) || radii.is_empty() {
                return Err("--radii must be a strictly increasing nonempty list".into());
            }
            let verdict = classify(&stream, n_max);
            let report = corroborate(&stream, &verdict, &radii, &CorroborateOptions::default());
            if let Some(path) = plot_data {
                write_plot_data(&path, &report.zeros).map_err(|e| e.to_string())?;
            }
            emit_corroboration(sink, format, &report)?;
            // Bessel families additionally transfer the localized zeros.
            // Only in the human formats: the JSON output stays a single
            // schema-conformant document.
            if let Some(params) = spec.bessel_params() {
                if format != Format::Json && !report.zeros.is_empty() {
                    let zr = zeroscope::zeros::ZeroReport {
                        count: report.zeros.iter().map(|z| z.mult).sum(),
                        zeros: report
                            .zeros
                            .iter()
                            .filter_map(|z| entry_to_zero(z, prec))
                            .collect(),
                        contour_min_modulus: f64::MIN_POSITIVE,
                        samples_used: 0,
                        radius_used: *radii.last().unwrap(),
                        diagnostics: Vec::new(),
                    };
                    match bessel_zero_transfer(&params, &zr, prec) {
                        Ok(transfers) => emit_transfers(sink, format, &transfers)?,
                        Err(e) => eprintln!("zero transfer failed: {e}"),
                    }
                }
            }
            Ok(if report.consistent { 0 } else { 5 })
        }
        Command::VerifyLemma { family, n, random_trials, max_degree, seed } => {
            run_verify_lemma(sink, format, family, n, random_trials, max_degree, seed)
        }
        Command::GrowthCheck { family, delta, points, max_z, seed, n_probe } => {
            if !(delta > 0.0) {
                return Err("--delta must be positive".into());
            }
            let spec = parse_family(&family)?;
            let stream = spec.stream(prec).map_err(|e| e.to_string())?;
            let cert = make_tail_certificate(&stream, delta, n_probe.max(64))
                .map_err(|e| format!("certificate refused: {e}"))?;
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let zs: Vec<zeroscope::Complex> = (0..points)
                .map(|_| {
                    let u: f64 = rng.random();
                    let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    let r = max_z * u.sqrt();
                    zeroscope::Complex::from_f64(r * th.cos(), r * th.sin(), prec)
                })
                .collect();
            let check = growth_bound_check(&stream, &cert, &zs).map_err(|e| e.to_string())?;
            write_named_rows(
                sink,
                format,
                "growth-check",
                &[
                    ("family", family.clone()),
                    ("delta", format!("{delta}")),
                    ("points", format!("{}", check.checked)),
                    ("violations", format!("{}", check.violations)),
                    ("worst_ratio", format!("{}", check.worst_ratio)),
                    ("ok", format!("{}", check.ok)),
                ],
            )?;
            Ok(if check.ok { 0 } else { 5 })
        }
    }
}

fn parse_center(s: &str) -> Result<Complex64, String> {
    let c = zeroscope::exact::parse_rational_complex(s)
        .ok_or_else(|| format!("cannot parse center {s:?}"))?;
    let v = c.to_complex(Prec(64)).to_c64();
    Ok(Complex64::new(v.re, v.im))
}

fn entry_to_zero(e: &ZeroEntry, prec: Prec) -> Option<zeroscope::zeros::LocatedZero> {
    let re = zeroscope::mp::format::parse_decimal(&e.re, prec)?;
    let im = zeroscope::mp::format::parse_decimal(&e.im, prec)?;
    Some(zeroscope::zeros::LocatedZero {
        location: zeroscope::Complex::new(re, im),
        error_radius: e.err,
        multiplicity: e.mult,
    })
}

fn run_verify_lemma(
    sink: &mut Sink,
    format: Format,
    family: Option<String>,
    n: Option<String>,
    random_trials: Option<usize>,
    max_degree: usize,
    seed: u64,
) -> Result<u8, String> {
    use zeroscope::hadamard::{leibniz_derivatives, random_model, verify_lemma};
    struct Trial {
        label: String,
        degree: usize,
        range: (usize, usize),
        pass: bool,
    }
    let mut trials: Vec<Trial> = Vec::new();
    match (family, random_trials) {
        (Some(f), None) => {
            let spec = parse_family(&f)?;
            let model = spec
                .exp_poly_model()
                .ok_or_else(|| "verify-lemma needs an exppoly family".to_string())?
                .map_err(|e| e.to_string())?;
            let deg = model.degree();
            let (lo, hi) = match n {
                Some(r) => parse_range(&r)?,
                None => (deg + 1, deg + 40),
            };
            let pass = verify_lemma(&model, lo, hi).map_err(|e| e.to_string())?;
            trials.push(Trial { label: f, degree: deg, range: (lo, hi), pass });
        }
        (None, Some(count)) => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let models: Vec<_> = (0..count).map(|_| random_model(&mut rng, max_degree)).collect();
            use rayon::prelude::*;
            let results: Vec<(usize, (usize, usize), bool, String)> = models
                .par_iter()
                .enumerate()
                .map(|(i, m)| {
                    let deg = m.degree();
                    let lo = deg + 1;
                    let hi = deg + 40;
                    let pass = verify_lemma(m, lo, hi).expect("range above degree");
                    // cross-check: the fit recovers the model from its own
                    // derivative data
                    let horizon = (2 * max_degree + 6).max(deg + 24);
                    let d = leibniz_derivatives(m, horizon);
                    let refit = zeroscope::hadamard::fit_exponential_polynomial(&d, max_degree)
                        .expect("enough data")
                        .map(|(k, q)| {
                            k == *m.k() && q == zeroscope::hadamard::q_polynomial(m)
                        })
                        .unwrap_or(false);
                    (i, (lo, hi), pass && refit, format!("trial-{i}:deg{deg}"))
                })
                .collect();
            for (i, range, pass, label) in results {
                trials.push(Trial { label, degree: models[i].degree(), range, pass });
            }
        }
        _ => {
            return Err(
                "use exactly one of --family exppoly:... or --random-trials N".to_string()
            );
        }
    }
    let mut rows = Vec::new();
    let mut all_pass = true;
    for t in &trials {
        all_pass &= t.pass;
        rows.push((
            "trial",
            format!(
                "{} degree={} n={}..{} {}",
                t.label,
                t.degree,
                t.range.0,
                t.range.1,
                if t.pass { "pass" } else { "FAIL" }
            ),
        ));
    }
    rows.push(("total", format!("{}", trials.len())));
    rows.push(("all_pass", format!("{all_pass}")));
    let named: Vec<(&str, String)> = rows;
    write_named_rows(sink, format, "verify-lemma", &named)?;
    Ok(if all_pass { 0 } else { 4 })
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("range must look like 2..30, got {s:?}"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad range start {lo:?}"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad range end {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn write_plot_data(path: &std::path::Path, zeros: &[ZeroEntry]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "re,im,err,mult")?;
    for z in zeros {
        writeln!(f, "{},{},{},{}", z.re, z.im, z.err, z.mult)?;
    }
    Ok(())
}

fn emit_verdict(
    sink: &mut Sink,
    format: Format,
    family: &str,
    verdict: &Verdict,
) -> Result<(), String> {
    match format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct Out<'a> {
                family: &'a str,
                #[serde(flatten)]
                verdict: &'a Verdict,
            }
            sink.write_json(&Out { family, verdict })
        }
        _ => {
            let class = match &verdict.classification {
                Classification::GuaranteedInfiniteZeros => "GuaranteedInfiniteZeros".to_string(),
                Classification::CounterexampleRegime { radius_estimate } => {
                    format!("CounterexampleRegime(radius≈{radius_estimate})")
                }
                Classification::RadiusZero => "RadiusZero".to_string(),
                Classification::AppearsTerminating { last_nonzero } => {
                    format!("AppearsTerminating(last_nonzero={last_nonzero:?})")
                }
                Classification::Indecisive => "Indecisive".to_string(),
            };
            let mut rows = vec![
                ("family", family.to_string()),
                ("classification", class),
                ("horizon", format!("{}", verdict.horizon)),
            ];
            if let Some(g) = &verdict.weighted_growth {
                rows.push(("weighted_radius", format!("{:?}", g.radius)));
                rows.push(("weighted_order", format!("{}", g.order)));
            }
            for d in &verdict.diagnostics {
                rows.push(("diagnostic", d.clone()));
            }
            write_named_rows(sink, format, "classify", &rows)
        }
    }
}

fn emit_zero_report(
    sink: &mut Sink,
    format: Format,
    family: &str,
    report: &zeroscope::zeros::ZeroReport,
    entries: &[ZeroEntry],
) -> Result<(), String> {
    match format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct Out<'a> {
                family: &'a str,
                count: usize,
                radius_used: f64,
                contour_min_modulus: f64,
                samples_used: usize,
                zeros: &'a [ZeroEntry],
                diagnostics: &'a [String],
            }
            sink.write_json(&Out {
                family,
                count: report.count,
                radius_used: report.radius_used,
                contour_min_modulus: report.contour_min_modulus,
                samples_used: report.samples_used,
                zeros: entries,
                diagnostics: &report.diagnostics,
            })
        }
        Format::Csv => {
            let mut s = String::from("re,im,err,mult\n");
            for z in entries {
                s.push_str(&format!("{},{},{},{}\n", z.re, z.im, z.err, z.mult));
            }
            sink.write_str(&s)
        }
        Format::Table => {
            let mut s = format!(
                "family: {family}\ncount: {}\nradius_used: {}\nmin_modulus: {:.3e}\nsamples: {}\n",
                report.count, report.radius_used, report.contour_min_modulus, report.samples_used
            );
            for z in entries {
                s.push_str(&format!(
                    "zero: ({}, {}) err={:.2e} mult={}\n",
                    z.re, z.im, z.err, z.mult
                ));
            }
            for d in &report.diagnostics {
                s.push_str(&format!("diagnostic: {d}\n"));
            }
            sink.write_str(&s)
        }
    }
}

fn emit_corroboration(
    sink: &mut Sink,
    format: Format,
    report: &CorroborationReport,
) -> Result<(), String> {
    match format {
        Format::Json => sink.write_json(report),
        Format::Csv => {
            let mut s = String::from("radius,count\n");
            for (r, c) in report.radii.iter().zip(report.counts.iter()) {
                match c {
                    Some(c) => s.push_str(&format!("{r},{c}\n")),
                    None => s.push_str(&format!("{r},\n")),
                }
            }
            sink.write_str(&s)
        }
        Format::Table => {
            let mut s = format!(
                "family: {}\nclassification: {:?}\nconsistent: {}\n",
                report.family, report.verdict.classification, report.consistent
            );
            if let Some(re) = report.radius_estimate {
                s.push_str(&format!("radius_estimate: {re}\n"));
            }
            for (r, c) in report.radii.iter().zip(report.counts.iter()) {
                match c {
                    Some(c) => s.push_str(&format!("radius {r}: {c} zeros\n")),
                    None => s.push_str(&format!("radius {r}: (failed)\n")),
                }
            }
            for z in &report.zeros {
                s.push_str(&format!(
                    "zero: ({}, {}) err={:.2e} mult={}\n",
                    z.re, z.im, z.err, z.mult
                ));
            }
            for d in &report.diagnostics {
                s.push_str(&format!("diagnostic: {d}\n"));
            }
            sink.write_str(&s)
        }
    }
}

fn emit_transfers(
    sink: &mut Sink,
    format: Format,
    transfers: &[zeroscope::harness::TransferredZero],
) -> Result<(), String> {
    match format {
        Format::Json => sink.write_json(&serde_json::json!({ "transferred_zeros": transfers })),
        _ => {
            let mut rows = Vec::new();
            for t in transfers {
                rows.push((
                    "transferred",
                    format!(
                        "({}, {}) residual={:.3e} bound={:.3e} verified={} branch_cut={}",
                        t.re, t.im, t.residual, t.bound, t.verified, t.on_branch_cut
                    ),
                ));
            }
            write_named_rows(sink, format, "bessel-transfer", &rows)
        }
    }
}
