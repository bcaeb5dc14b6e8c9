//! `rectenna`: coefficients, output traces, cut-off sweeps, ripple-budget
//! designs and the oracle validation suite, printed as CSV or JSON.

mod range;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rectenna_core::oracle::{envelope_average_a0, DEFAULT_SAMPLES};
use rectenna_core::{
    fig3_trace, fourier_coefficient, multisine_a0, optimize_capacitance, quad_b_coefficient,
    quad_coefficient, quad_multisine_a0, sweep_cutoff, validate, ModelError, RcFilter,
    RectifierKind, RippleMetric, Scenario, TimeGrid, DEFAULT_TRUNCATION,
};

use crate::range::{parse_range, RangeSpec};
use crate::table::{Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "rectenna", version, about = "Fourier-series rectenna and RC filter model")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Full,
    Half,
}

impl From<KindArg> for RectifierKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Full => RectifierKind::FullWave,
            KindArg::Half => RectifierKind::HalfWave,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Sampled,
    Analytic,
}

#[derive(Debug, Args)]
struct Common {
    /// Rectifier nonlinearity.
    #[arg(long, value_enum, default_value_t = KindArg::Full, global = true)]
    kind: KindArg,

    /// Signal amplitude A in volts.
    #[arg(long = "amplitude", short = 'A', default_value_t = 1.0, global = true)]
    amplitude: f64,

    /// Carrier frequency in hertz.
    #[arg(long, default_value_t = 915e6, global = true)]
    fc: f64,

    /// Load resistance R_L in ohms.
    #[arg(long = "rl", default_value_t = 2.0, global = true)]
    load_r: f64,

    /// Number of harmonics K kept in the series.
    #[arg(long = "k", default_value_t = DEFAULT_TRUNCATION, global = true)]
    truncation: usize,

    /// Samples per carrier period for extrema scans.
    #[arg(long, default_value_t = DEFAULT_SAMPLES, global = true)]
    samples: usize,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write to a file instead of stdout.
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form a_k next to their quadrature values.
    Coeffs {
        #[arg(long, default_value_t = 16)]
        k_max: usize,
    },
    /// Filter output v_o(t) over a time grid.
    Trace {
        /// Filter capacitance C_L in farads.
        #[arg(long = "cl", conflicts_with = "fcut", required_unless_present = "fcut")]
        cap_c: Option<f64>,
        /// Cut-off frequency in hertz; 0 or inf selects the unfiltered case.
        #[arg(long)]
        fcut: Option<f64>,
        /// Time grid `start:stop:points` in seconds (default: three carrier periods).
        #[arg(long = "t")]
        t_range: Option<String>,
    },
    /// DC voltage and ripple against cut-off frequency.
    Sweep {
        /// Cut-off range `min:max:points[:log]` in hertz.
        #[arg(long)]
        fcut: String,
    },
    /// Largest DC voltage whose ripple fits a budget.
    Design {
        /// Ripple budget in volts.
        #[arg(long)]
        budget: f64,
        #[arg(long, value_enum, default_value_t = MetricArg::Sampled)]
        metric: MetricArg,
    },
    /// Two-tone multisine DC coefficient: closed form against quadrature.
    #[command(name = "multisine-a0")]
    MultisineA0 {
        /// Tone spacing in hertz; repeat for several rows.
        #[arg(long, required = true, num_args = 1..)]
        df: Vec<f64>,
    },
    /// Run the oracle-agreement checks; exits 1 on any failure.
    Validate,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Io(io::Error),
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn scenario(c: &Common) -> Result<Scenario, CliError> {
    let s = Scenario {
        kind: c.kind.into(),
        amplitude: c.amplitude,
        carrier_fc: c.fc,
        load_r: c.load_r,
        truncation: c.truncation,
        samples: c.samples,
    };
    s.validate()?;
    Ok(s)
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let c = &cli.common;
    let (table, code) = match &cli.command {
        Command::Coeffs { k_max } => (coeffs(c, *k_max)?, ExitCode::SUCCESS),
        Command::Trace {
            cap_c,
            fcut,
            t_range,
        } => (trace(c, *cap_c, *fcut, t_range.as_deref())?, ExitCode::SUCCESS),
        Command::Sweep { fcut } => (sweep(c, fcut)?, ExitCode::SUCCESS),
        Command::Design { budget, metric } => (design(c, *budget, *metric)?, ExitCode::SUCCESS),
        Command::MultisineA0 { df } => (multisine(c, df)?, ExitCode::SUCCESS),
        Command::Validate => validate_suite(),
    };
    emit(&table, c)?;
    Ok(code)
}

fn emit(table: &Table, c: &Common) -> Result<(), CliError> {
    match &c.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Config(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write(c.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            table.write(c.format, stdout.lock())?;
        }
    }
    Ok(())
}

fn coeffs(c: &Common, k_max: usize) -> Result<Table, CliError> {
    scenario(c)?;
    let kind: RectifierKind = c.kind.into();
    let mut t = Table::new(&["k", "a_k_closed", "a_k_quad", "abs_diff", "b_k_quad"]);
    for k in 0..=k_max {
        let closed = fourier_coefficient(kind, k);
        let quad = quad_coefficient(kind, k, c.fc);
        t.push(vec![
            k.into(),
            closed.into(),
            quad.into(),
            (closed - quad).abs().into(),
            quad_b_coefficient(kind, k, c.fc).into(),
        ]);
    }
    Ok(t)
}

fn filter_from_args(c: &Common, cap_c: Option<f64>, fcut: Option<f64>) -> Result<RcFilter, CliError> {
    match (cap_c, fcut) {
        (Some(cap), None) => Ok(RcFilter::new(c.load_r, cap)?),
        (None, Some(f)) if f == 0.0 || f == f64::INFINITY => Ok(RcFilter::new(c.load_r, 0.0)?),
        (None, Some(f)) => Ok(RcFilter::from_cutoff(c.load_r, f)?),
        _ => Err(CliError::Config("exactly one of --cl / --fcut is required".into())),
    }
}

fn trace(c: &Common, cap_c: Option<f64>, fcut: Option<f64>, t_range: Option<&str>) -> Result<Table, CliError> {
    let s = scenario(c)?;
    let filter = filter_from_args(c, cap_c, fcut)?;
    let grid = match t_range {
        Some(spec) => {
            let r: RangeSpec = parse_range(spec).map_err(CliError::Config)?;
            if r.log {
                return Err(CliError::Config("time grids are linear; drop `:log`".into()));
            }
            TimeGrid::new(r.min, r.max, r.points)?
        }
        None => TimeGrid::new(0.0, 3.0 / c.fc, 601)?,
    };
    let mut t = Table::new(&["t_s", "v_in_v", "v_out_v", "v_o_v"]);
    for p in fig3_trace(&s, filter.f_cut(), &grid)? {
        t.push(vec![p.t.into(), p.v_in.into(), p.v_out.into(), p.v_o.into()]);
    }
    Ok(t)
}

fn sweep(c: &Common, spec: &str) -> Result<Table, CliError> {
    let s = scenario(c)?;
    let grid = parse_range(spec).map_err(CliError::Config)?.to_grid()?;
    let mut t = Table::new(&["f_cut_hz", "tau_s", "c_l_f", "v_dc_v", "ripple_analytic_v", "ripple_v"]);
    for r in sweep_cutoff(&s, &grid)? {
        t.push(vec![
            r.f_cut.into(),
            r.tau.into(),
            r.cap_c.into(),
            r.v_dc.into(),
            r.ripple_analytic.into(),
            r.ripple_sampled.into(),
        ]);
    }
    Ok(t)
}

fn design(c: &Common, budget: f64, metric: MetricArg) -> Result<Table, CliError> {
    let s = scenario(c)?;
    let metric = match metric {
        MetricArg::Sampled => RippleMetric::SampledPtp,
        MetricArg::Analytic => RippleMetric::Analytic,
    };
    let d = optimize_capacitance(&s, budget, metric)?;
    let f_cut = s.filter_for_tau(d.chosen_tau)?.f_cut();
    let mut t = Table::new(&[
        "c_l_f",
        "tau_s",
        "f_cut_hz",
        "v_dc_v",
        "v_dc_max_v",
        "ripple_v",
        "budget_v",
        "metric",
        "feasible",
    ]);
    t.push(vec![
        d.chosen_c.into(),
        d.chosen_tau.into(),
        f_cut.into(),
        d.achieved_v_dc.into(),
        s.dc_limits().high.into(),
        d.achieved_ripple.into(),
        d.budget.into(),
        match d.metric {
            RippleMetric::SampledPtp => "sampled",
            RippleMetric::Analytic => "analytic",
        }
        .into(),
        d.feasible.into(),
    ]);
    Ok(t)
}

fn multisine(c: &Common, spacings: &[f64]) -> Result<Table, CliError> {
    let kind: RectifierKind = c.kind.into();
    let mut t = Table::new(&[
        "kind",
        "fc_hz",
        "df_hz",
        "a0_closed",
        "a0_quad",
        "abs_diff",
        "a0_envelope_avg",
    ]);
    for &df in spacings {
        let closed = multisine_a0(kind, c.fc, df)?;
        let quad = quad_multisine_a0(kind, c.fc, df)?;
        let avg = if df > 0.0 {
            Cell::Num(envelope_average_a0(kind, c.fc, df)?)
        } else {
            Cell::Missing
        };
        t.push(vec![
            kind.name().into(),
            c.fc.into(),
            df.into(),
            closed.into(),
            quad.into(),
            (closed - quad).abs().into(),
            avg,
        ]);
    }
    Ok(t)
}

fn validate_suite() -> (Table, ExitCode) {
    let checks = validate::run_all();
    let mut t = Table::new(&["check", "max_error", "tolerance", "passed"]);
    let mut ok = true;
    for chk in checks {
        ok &= chk.passed;
        t.push(vec![
            chk.name.into(),
            chk.max_error.into(),
            chk.tolerance.into(),
            chk.passed.into(),
        ]);
    }
    (t, if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn cap_and_cutoff_are_exclusive() {
        let r = Cli::try_parse_from(["rectenna", "trace", "--cl", "1e-12", "--fcut", "1e9"]);
        assert!(r.is_err());
        let r = Cli::try_parse_from(["rectenna", "trace"]);
        assert!(r.is_err());
        assert!(Cli::try_parse_from(["rectenna", "trace", "--fcut", "0"]).is_ok());
    }

    #[test]
    fn zero_and_infinite_cutoff_mean_no_capacitor() {
        let cli = Cli::try_parse_from(["rectenna", "trace", "--fcut", "0"]).unwrap();
        for f in [0.0, f64::INFINITY] {
            assert_eq!(filter_from_args(&cli.common, None, Some(f)).unwrap().cap_c(), 0.0);
        }
        assert!(filter_from_args(&cli.common, None, Some(-1.0)).is_err());
    }
}
