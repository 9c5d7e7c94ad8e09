//! `evlab`: verification suite, μ scans and dyadic-window moments.

mod config;

use std::io::Write;
use std::process::ExitCode;

use evlab_core::maass::{load_maass_form, MaassForm};
use evlab_core::moments::{
    cross_variance, fit_jutila, loglog_slope, mean_value, second_moment, weighted_variance, MomentReport,
};
use evlab_core::report::{moment_row, mu_scan, CsvTable, MOMENT_COLUMNS};
use evlab_core::verify::{render, run_suite};
use evlab_core::wimu::MuContext;
use evlab_core::{Error, VERSION};

use config::{Command, ConfigError, RunConfig};

const EXIT_VERIFY: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BUDGET: u8 = 3;

enum Failure {
    Config(String),
    Verification(String),
    Numerical(Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::Parse { .. } => Failure::Config(e.to_string()),
            e => Failure::Numerical(e),
        }
    }
}

fn main() -> ExitCode {
    let config = match RunConfig::from_args(std::env::args_os()) {
        Ok(c) => c,
        Err(config::ArgsError::Help(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(config::ArgsError::Usage(text)) => {
            eprint!("{text}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(config::ArgsError::Config(e)) => {
            eprintln!("config error: {}\n\n{}", e.0, config::usage());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}\n\n{}", config::usage());
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure in {} (n = {}, t in [{}, {}]): {e}", config.command.name(), config.n, config.t_min, config.t_max);
            ExitCode::from(EXIT_BUDGET)
        }
    }
}

fn run(config: &RunConfig) -> Result<(), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    let forms = config
        .form_paths
        .iter()
        .map(load_maass_form)
        .collect::<Result<Vec<MaassForm>, Error>>()?;
    pool.install(|| match config.command {
        Command::Verify => verify(config, &forms),
        Command::ScanMu => scan(config, &forms[0]),
        Command::MeanValue | Command::SecondMoment | Command::Variance | Command::Cross => moments(config, &forms),
    })
}

fn verify(config: &RunConfig, forms: &[MaassForm]) -> Result<(), Failure> {
    let refs: Vec<&MaassForm> = forms.iter().collect();
    let results = run_suite(&refs, &config.spec);
    let text = render(&results);
    emit(config, &text)?;
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
        Err(Failure::Verification(format!("verification failed: {}", failed.join(", "))))
    }
}

fn scan(config: &RunConfig, form: &MaassForm) -> Result<(), Failure> {
    let ctx = MuContext::new(form, config.n, config.a_n, &config.spec)?;
    let step = config.grid_step.unwrap_or(config.spec.c_grid / (config.n as f64 * (2.0 * config.t_max).ln()));
    let mut table = mu_scan(&ctx, config.t_min, config.t_max, step)?;
    header(&mut table, config);
    emit(config, &table.render())?;
    eprintln!("scan-mu: {} rows, step {step}", table.rows.len());
    Ok(())
}

/// Left ends T, 2T, 4T, ... of the dyadic windows inside [t_min, t_max].
fn windows(config: &RunConfig) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = config.t_min;
    while 2.0 * t <= config.t_max * (1.0 + 1e-12) {
        out.push(t);
        t *= 2.0;
    }
    out
}

fn moments(config: &RunConfig, forms: &[MaassForm]) -> Result<(), Failure> {
    let windows = windows(config);
    if windows.is_empty() {
        return Err(Failure::Config(format!(
            "no dyadic window [T, 2T] fits in [{}, {}]",
            config.t_min, config.t_max
        )));
    }
    let spec = &config.spec;
    let (n, a_n) = (config.n, config.a_n);
    let mut reports: Vec<MomentReport> = Vec::new();
    for &t in &windows {
        let r = match config.command {
            Command::MeanValue => mean_value(&forms[0], n, t, a_n, spec)?,
            Command::SecondMoment => second_moment(&forms[0], t, spec)?,
            Command::Variance => weighted_variance(&forms[0], n, t, a_n, spec)?,
            Command::Cross => cross_variance(&forms[0], &forms[1], n, t, a_n, spec)?,
            _ => unreachable!("not a moment command"),
        };
        reports.push(r);
    }
    let mut table = CsvTable::new(MOMENT_COLUMNS.to_vec());
    header(&mut table, config);
    let mut summary = format!("{}:", config.command.name());
    for r in &reports {
        table.rows.push(moment_row(r));
        match r.ratio {
            Some(q) => summary.push_str(&format!(" T={} ratio={:.6}", r.t_window, q.re)),
            None => summary.push_str(&format!(" T={} integral={:.6e}", r.t_window, r.integral.norm())),
        }
        for (k, v) in &r.diagnostics {
            table.comment(format!("T={} {k}", r.t_window), evlab_core::report::format_float(*v));
        }
    }
    if reports.len() >= 2 {
        match config.command {
            Command::SecondMoment => {
                let fit = fit_jutila(&forms[0], &reports)?;
                summary.push_str(&format!(
                    "; fitted coefficient {:.6} ± {:.2e}, predicted {:.6}, B = {:.4}",
                    fit.coefficient, fit.coefficient_se, fit.predicted_coefficient, fit.b
                ));
            }
            Command::MeanValue => {
                let fit = loglog_slope(&reports)?;
                summary.push_str(&format!("; log-log slope {:.4} ± {:.2e}", fit.slope, fit.slope_se));
            }
            _ => {}
        }
    }
    emit(config, &table.render())?;
    eprintln!("{summary}");
    Ok(())
}

fn header(table: &mut CsvTable, config: &RunConfig) {
    table.comment("evlab", VERSION);
    for (k, v) in config.echo() {
        table.comment(k, v);
    }
}

fn emit(config: &RunConfig, text: &str) -> Result<(), Failure> {
    match &config.out_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(Failure::Config(format!("cannot write to stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}
