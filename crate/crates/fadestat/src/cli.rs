//! Command-line front end: scenario files, subcommands, CSV and JSON output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{self, Axis, Formula, GammaAvgSource, SweepResult, SweepSpec};
use crate::error::{Error, Result};
use crate::fsmc_arq::ArqScenario;
use crate::lcr;
use crate::model::{InterfererSpec, LinkConfig};
use crate::oracles::{self, quadrature, Combining, SimulationPlan};
use crate::outage;
use crate::scenarios::{self, db_to_linear};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_ALL_MASKED: i32 = 3;

/// On-disk scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub p_d: f64,
    pub f_d_hz: f64,
    pub noise_power: f64,
    pub l_branches: usize,
    pub interferers: Vec<InterfererSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_avg_override: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("scenario file: {e}")))
    }

    pub fn link(&self) -> Result<LinkConfig> {
        LinkConfig::new(self.p_d, self.f_d_hz, self.noise_power, self.l_branches, self.interferers.clone())
    }

    pub fn from_link(link: &LinkConfig) -> Self {
        ScenarioFile {
            p_d: link.p_d,
            f_d_hz: link.f_d_hz,
            noise_power: link.noise_power,
            l_branches: link.l_branches,
            interferers: link.interferers.clone(),
            gamma_avg_override: None,
            seed: None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fadestat", version, about = "SINR level crossing, outage and ARQ statistics for MRC links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in scenario name instead of a file.
    #[arg(long, conflicts_with = "config")]
    pub scenario: Option<String>,
    /// Normalized threshold grid `start_db:stop_db:points`.
    #[arg(long, default_value = "-30:10:121", allow_hyphen_values = true)]
    pub grid: String,
    /// Comma-separated subset of exact, approx, equal, int_limited, mc.
    #[arg(long, default_value = "exact,approx")]
    pub formulas: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: OutFormat,
    /// Master seed for every random draw.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Mean SINR used to normalize thresholds (linear).
    #[arg(long)]
    pub gamma_avg: Option<f64>,
    /// Substitute the approximate LCR below the validity bound.
    #[arg(long)]
    pub allow_approx_fallback: bool,
    #[arg(long, default_value_t = 100)]
    pub realizations: usize,
    #[arg(long, default_value_t = 2.0)]
    pub duration: f64,
    /// Simulated combiner; `validate` defaults to independent-envelope.
    #[arg(long, value_enum)]
    pub combining: Option<CombiningArg>,
    /// Sinusoids per simulated fading process; `validate` defaults to 64.
    #[arg(long)]
    pub sinusoids: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CombiningArg {
    Mrc,
    IndependentEnvelope,
}

impl From<CombiningArg> for Combining {
    fn from(c: CombiningArg) -> Self {
        match c {
            CombiningArg::Mrc => Combining::Mrc,
            CombiningArg::IndependentEnvelope => Combining::IndependentEnvelope,
        }
    }
}

#[derive(Debug, Args)]
pub struct ArqArgs {
    /// Threshold relative to the mean SINR, dB.
    #[arg(long, default_value_t = scenarios::ARQ_THRESHOLD_DB, allow_hyphen_values = true)]
    pub threshold_db: f64,
    /// Symbol rate, symbols per second; repeat for several.
    #[arg(long = "symbol-rate", default_values_t = [1e5])]
    pub symbol_rates: Vec<f64>,
    /// Protocol overhead in equivalent symbols.
    #[arg(long, default_value_t = scenarios::ARQ_OVERHEAD_SYMBOLS)]
    pub overhead: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level crossing rate over a threshold grid.
    Lcr(Common),
    /// CDF, crossing rate and average outage duration over a threshold grid.
    Aod(Common),
    /// Packet error rate against packet duration times the desired Doppler.
    Per {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = scenarios::ARQ_THRESHOLD_DB, allow_hyphen_values = true)]
        threshold_db: f64,
        /// Comma-separated normalized packet lengths.
        #[arg(long, default_value = "0.001,0.002,0.005,0.01,0.02,0.05,0.1,0.2,0.5,1,2,5")]
        lengths: String,
    },
    /// SW-ARQ throughput against packet length in symbols.
    Throughput {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arq: ArqArgs,
        /// Packet-length grid `start:stop:points`, log spaced.
        #[arg(long, default_value = "10:100000:81")]
        lengths: String,
    },
    /// Throughput-optimal packet length.
    Mopt {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arq: ArqArgs,
    },
    /// Maximum relative gap between exact and approximate LCR.
    Mrg(Common),
    /// Cross-checks the closed forms against quadrature and simulation.
    Validate(Common),
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_) | Error::Io(_) | Error::InvalidArity { .. } => EXIT_SCHEMA,
            _ => EXIT_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "fadestat: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<i32> {
    let text = match cmd {
        Command::Lcr(c) => return sweep_command(&c, out, lcr_csv),
        Command::Aod(c) => return sweep_command(&c, out, aod_csv),
        Command::Per { common, threshold_db, lengths } => per_command(&common, threshold_db, &lengths)?,
        Command::Throughput { common, arq, lengths } => throughput_command(&common, &arq, &lengths)?,
        Command::Mopt { common, arq } => mopt_command(&common, &arq)?,
        Command::Mrg(c) => mrg_command(&c)?,
        Command::Validate(c) => {
            let (text, ok) = validate_command(&c)?;
            emit(out, &text)?;
            return Ok(if ok { EXIT_OK } else { EXIT_FAILURE });
        }
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::from(Error::from(e)))
}

struct Loaded {
    link: LinkConfig,
    file: ScenarioFile,
    seed: u64,
    gamma_avg: Option<f64>,
}

fn load(c: &Common) -> CliResult<Loaded> {
    let file = match (&c.config, &c.scenario) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
            ScenarioFile::parse(&text)?
        }
        (None, Some(name)) => ScenarioFile::from_link(&scenarios::named(name)?),
        (None, None) => return Err(Error::InvalidConfig("one of --config or --scenario is required".into()).into()),
    };
    let link = file.link()?;
    let seed = c.seed.or(file.seed).unwrap_or(0);
    let gamma_avg = c.gamma_avg.or(file.gamma_avg_override);
    Ok(Loaded { link, file, seed, gamma_avg })
}

fn load_or_default(c: &Common) -> CliResult<Option<Loaded>> {
    if c.config.is_none() && c.scenario.is_none() {
        return Ok(None);
    }
    load(c).map(Some)
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize)> {
    let bad = || Error::InvalidConfig(format!("grid {s:?} is not start:stop:points"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Ok((start, stop, points))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::InvalidConfig(format!("not a number: {x:?}"))))
        .collect()
}

fn parse_formulas(s: &str) -> Result<Vec<Formula>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(str::parse).collect()
}

fn gamma_avg_of(loaded: &Loaded) -> Result<f64> {
    match loaded.gamma_avg {
        Some(g) => Ok(g),
        None => outage::analytic_mean_sinr(&loaded.link),
    }
}

fn sweep_spec(c: &Common, loaded: &Loaded) -> Result<SweepSpec> {
    let (start, stop, points) = parse_grid(&c.grid)?;
    let mut spec = SweepSpec::new(loaded.link.clone());
    spec.axis = Axis::NormalizedDb { start, stop, points };
    spec.which_formulas = parse_formulas(&c.formulas)?;
    spec.master_seed = loaded.seed;
    spec.mc.realizations = c.realizations;
    spec.mc.duration_sec = c.duration;
    spec.mc.combining = c.combining.map(Into::into).unwrap_or_default();
    spec.mc.sinusoid_count = c.sinusoids.unwrap_or(spec.mc.sinusoid_count);
    if let Some(g) = loaded.gamma_avg {
        spec.gamma_avg_source = GammaAvgSource::User(g);
    }
    spec.validate()?;
    Ok(spec)
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn lcr_csv(r: &SweepResult) -> String {
    let mut s = String::from("gamma_norm_db,gamma_linear,lcr_exact_hz,lcr_approx_hz,lcr_mc_hz,lcr_mc_stderr,valid\n");
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            row.gamma_norm_db,
            row.gamma_linear,
            num(row.lcr_exact_hz),
            num(row.lcr_approx_hz),
            num(row.lcr_mc.map(|e| e.value)),
            num(row.lcr_mc.map(|e| e.stderr)),
            row.valid
        );
    }
    s
}

fn aod_csv(r: &SweepResult) -> String {
    let mut s = String::from("gamma_norm_db,gamma_linear,cdf,lcr_exact_hz,aod_sec,valid\n");
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            row.gamma_norm_db,
            row.gamma_linear,
            num(row.cdf),
            num(row.lcr_exact_hz),
            num(row.aod_sec),
            row.valid
        );
    }
    s
}

#[derive(Serialize)]
struct SweepJson<'a> {
    scenario: ScenarioFile,
    formula_id: &'static str,
    gamma_avg: f64,
    seed: u64,
    validity_bound: Option<f64>,
    perturbed: bool,
    plan: &'a Option<SimulationPlan>,
    rows: &'a [analysis::SweepRow],
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Io(format!("JSON encoding failed: {e}")))
}

fn sweep_command(c: &Common, out: &mut dyn Write, csv: fn(&SweepResult) -> String) -> CliResult<i32> {
    let loaded = load(c)?;
    let spec = sweep_spec(c, &loaded)?;
    let r = analysis::run_sweep(&spec)?;
    let text = match c.out {
        OutFormat::Csv => csv(&r),
        OutFormat::Json => {
            let mut scenario = loaded.file.clone();
            scenario.seed = Some(loaded.seed);
            to_json(&SweepJson {
                scenario,
                formula_id: r.meta.formula_id.as_str(),
                gamma_avg: r.meta.gamma_avg,
                seed: r.meta.seed,
                validity_bound: r.meta.validity_bound,
                perturbed: r.meta.perturbed,
                plan: &r.meta.plan,
                rows: &r.rows,
            })?
        }
    };
    emit(out, &text)?;
    if r.all_masked() {
        return Err(Failure {
            code: EXIT_ALL_MASKED,
            message: "every grid point lies below the validity bound".into(),
        });
    }
    Ok(EXIT_OK)
}

fn per_command(c: &Common, threshold_db: f64, lengths: &str) -> CliResult<String> {
    let loaded = load(c)?;
    let lengths = parse_list(lengths)?;
    let g = gamma_avg_of(&loaded)? * db_to_linear(threshold_db);
    let curve = analysis::per_curve(&loaded.link, g, &lengths, c.allow_approx_fallback)?;
    let formulas = parse_formulas(&c.formulas)?;
    let mc = if formulas.contains(&Formula::Mc) {
        let mut plan = SimulationPlan::default_for(loaded.link.clone(), loaded.seed)?;
        plan.realizations = c.realizations;
        plan.duration_sec = c.duration;
        plan.combining = c.combining.map(Into::into).unwrap_or_default();
        plan.sinusoid_count = c.sinusoids.unwrap_or(plan.sinusoid_count);
        plan.validate()?;
        let tr = oracles::simulate_sinr(&plan)?;
        Some(
            curve
                .rows
                .iter()
                .map(|r| oracles::estimate_per(&tr, plan.sample_rate_hz, g, r.t_pkt_sec))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(match c.out {
        OutFormat::Csv => {
            let mut s = String::from("normalized_length,t_pkt_sec,per,per_mc,per_mc_stderr\n");
            for (i, r) in curve.rows.iter().enumerate() {
                let e = mc.as_ref().map(|m| m[i]);
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.normalized_length,
                    r.t_pkt_sec,
                    r.per,
                    num(e.map(|e| e.value)),
                    num(e.map(|e| e.stderr))
                );
            }
            s
        }
        OutFormat::Json => to_json(&serde_json::json!({
            "scenario": loaded.file,
            "curve": curve,
            "mc": mc,
        }))?,
    })
}

fn log_grid(spec: &str) -> Result<Vec<f64>> {
    let (start, stop, points) = parse_grid(spec)?;
    if !(start >= 1.0) || !(stop > start) || points < 2 {
        return Err(Error::InvalidConfig(format!("length grid {spec:?} needs 1 <= start < stop and 2+ points")));
    }
    let (a, b) = (start.ln(), stop.ln());
    Ok((0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp().round()).collect())
}

fn arq_scenarios(c: &Common, arq: &ArqArgs) -> CliResult<(Vec<(String, ArqScenario)>, Option<ScenarioFile>)> {
    match load_or_default(c)? {
        Some(loaded) => {
            let g = gamma_avg_of(&loaded)? * db_to_linear(arq.threshold_db);
            let v = arq
                .symbol_rates
                .iter()
                .map(|&rs| Ok((format!("rs={rs}"), ArqScenario::new(1.0 / rs, arq.overhead, g, loaded.link.clone())?)))
                .collect::<Result<Vec<_>>>()?;
            Ok((v, Some(loaded.file)))
        }
        None => {
            let mut v = Vec::new();
            for (l, n) in [(2, 2), (4, 4)] {
                for &rs in &arq.symbol_rates {
                    let mut s = scenarios::arq_system(l, n, rs)?;
                    s.m_o = arq.overhead;
                    s.gamma_th *= db_to_linear(arq.threshold_db - scenarios::ARQ_THRESHOLD_DB);
                    v.push((format!("L={l},N={n},rs={rs}"), s));
                }
            }
            Ok((v, None))
        }
    }
}

fn throughput_command(c: &Common, arq: &ArqArgs, lengths: &str) -> CliResult<String> {
    let grid = log_grid(lengths)?;
    let (set, file) = arq_scenarios(c, arq)?;
    let curves = set
        .iter()
        .map(|(name, s)| Ok((name.clone(), analysis::throughput_curve(s, &grid, c.allow_approx_fallback)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(match c.out {
        OutFormat::Csv => {
            let mut s = String::from("scenario,m_t,throughput,normalized_throughput\n");
            for (name, curve) in &curves {
                for r in &curve.rows {
                    let _ = writeln!(s, "{name},{},{},{}", r.m_t, r.throughput, r.normalized);
                }
            }
            s
        }
        OutFormat::Json => to_json(&serde_json::json!({ "scenario": file, "curves": curves }))?,
    })
}

fn mopt_command(c: &Common, arq: &ArqArgs) -> CliResult<String> {
    let (set, file) = arq_scenarios(c, arq)?;
    let rows = analysis::mopt_report(&set, c.allow_approx_fallback)?;
    Ok(match c.out {
        OutFormat::Csv => {
            let mut s = String::from("scenario,symbol_rate,m_o,gamma_th,n_c,p_cf,m_opt_real,m_opt,throughput,boundary\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.name,
                    r.symbol_rate,
                    r.m_o,
                    r.gamma_th,
                    r.n_c,
                    r.p_cf,
                    num(r.m_opt_real),
                    r.m_opt,
                    r.throughput,
                    r.boundary
                );
            }
            s
        }
        OutFormat::Json => to_json(&serde_json::json!({ "scenario": file, "rows": rows }))?,
    })
}

fn mrg_command(c: &Common) -> CliResult<String> {
    let (start, stop, points) = parse_grid(&c.grid)?;
    let named: Vec<(String, LinkConfig)> = match load_or_default(c)? {
        Some(l) => vec![("scenario".into(), l.link)],
        None => scenarios::FIG1_UPSILON_DB.iter().map(|&u| (format!("upsilon_db={u}"), scenarios::fig1(u))).collect(),
    };
    let values = named
        .iter()
        .map(|(n, link)| Ok((n.clone(), analysis::mrg_normalized(link, start, stop, points)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(match c.out {
        OutFormat::Csv => {
            let mut s = String::from("scenario,mrg\n");
            for (n, v) in &values {
                let _ = writeln!(s, "{n},{v}");
            }
            s
        }
        OutFormat::Json => to_json(&values)?,
    })
}

struct Verdicts {
    text: String,
    ok: bool,
}

impl Verdicts {
    fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.ok &= pass;
        let _ = writeln!(self.text, "{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

/// Cross-oracle suite on one scenario. Returns the report and whether
/// every check passed.
fn validate_command(c: &Common) -> CliResult<(String, bool)> {
    let loaded = match load_or_default(c)? {
        Some(l) => l,
        None => {
            let link = scenarios::fig1(0.0);
            Loaded { file: ScenarioFile::from_link(&link), link, seed: c.seed.unwrap_or(0), gamma_avg: c.gamma_avg }
        }
    };
    let link = &loaded.link;
    let ga = gamma_avg_of(&loaded)?;
    let mut v = Verdicts { text: String::new(), ok: true };
    let routed = lcr::route(link)?;
    let _ = writeln!(v.text, "scenario formula {} gamma_avg {ga}", routed.route.formula_id());

    let probes: Vec<f64> = [-10.0, -5.0, 0.0, 3.0, 6.0].iter().map(|&d| ga * db_to_linear(d)).collect();
    let closed: Vec<Option<f64>> = probes.iter().map(|&g| lcr::lcr(link, g).ok().map(|x| x.crossings_per_sec)).collect();

    if (1..=quadrature::MAX_INTERFERERS).contains(&link.n()) && link.noise_power > 0.0 && link.f_d_hz > 0.0 {
        let mut worst: f64 = 0.0;
        for (&g, e) in probes.iter().zip(&closed) {
            if let Some(e) = e {
                let q = quadrature::quadrature_lcr(link, g)?;
                worst = worst.max(((q - e) / e).abs());
            }
        }
        v.check("quadrature", worst <= 1e-6, format!("worst relative gap {worst:.2e} (tol 1e-6)"));
    }
    if link.l_branches == 1 && link.n() >= 2 {
        let mut worst: f64 = 0.0;
        for &g in &probes {
            if let lcr::Route::SingleAntenna(canon) = &routed.route {
                let (Ok(s), Ok(e)) = (lcr::lcr_single_antenna(canon, g), lcr::lcr_exact(canon, g)) else { continue };
                worst = worst.max(((s.crossings_per_sec - e.crossings_per_sec) / e.crossings_per_sec).abs());
            }
        }
        v.check("single_antenna_identity", worst <= 1e-12, format!("worst relative gap {worst:.2e} (tol 1e-12)"));
    }
    let mut last = 0.0;
    let mut monotone = true;
    for &g in &probes {
        let f = outage::cdf(link, g)?;
        monotone &= (0.0..=1.0).contains(&f) && f >= last;
        last = f;
    }
    v.check("cdf_range_monotone", monotone, "CDF within [0, 1] and non-decreasing on the probes".into());
    let mut worst: f64 = 0.0;
    for (&g, e) in probes.iter().zip(&closed) {
        if let Some(e) = e {
            let f = outage::cdf(link, g)?;
            let a = outage::aod_from(f, *e, g)?;
            worst = worst.max(((a * e - f) / f).abs());
        }
    }
    v.check("aod_identity", worst <= 1e-12, format!("worst |aod*lcr/cdf - 1| {worst:.2e}"));

    let mut plan = SimulationPlan::default_for(link.clone(), loaded.seed)?;
    plan.realizations = c.realizations;
    plan.duration_sec = c.duration;
    plan.combining = c.combining.map(Into::into).unwrap_or(Combining::IndependentEnvelope);
    plan.sinusoid_count = c.sinusoids.unwrap_or(64);
    plan.validate()?;
    let _ = writeln!(v.text, "simulation {:?}, {} sinusoids, {} x {} s", plan.combining, plan.sinusoid_count, plan.realizations, plan.duration_sec);
    let tr = oracles::simulate_sinr(&plan)?;
    let mean = oracles::sample_mean(&tr);
    let _ = writeln!(v.text, "INFO mean_sinr: simulated {mean:.6} vs analytic {ga:.6}");
    for (&g, e) in probes.iter().zip(&closed) {
        let db = scenarios::linear_to_db(g / ga);
        let est = oracles::estimate_cdf(&tr, g)?;
        let f = outage::cdf(link, g)?;
        let z = (est.value - f) / est.stderr.max(f64::MIN_POSITIVE);
        v.check(
            &format!("cdf_mc@{db:+.0}dB"),
            z.abs() <= 3.0,
            format!("simulated {:.5} +- {:.5} vs {f:.5} (z {z:+.2}, tol 3)", est.value, est.stderr),
        );
        let Some(e) = e else { continue };
        let est = oracles::estimate_lcr(&tr, plan.sample_rate_hz, g)?;
        if est.insufficient() {
            let _ = writeln!(v.text, "SKIP lcr_mc@{db:+.0}dB: only {} crossings", est.events);
            continue;
        }
        let z = (est.value - e) / est.stderr;
        v.check(
            &format!("lcr_mc@{db:+.0}dB"),
            z.abs() <= 3.0,
            format!("simulated {:.4} +- {:.4} vs {e:.4} Hz (z {z:+.2}, tol 3)", est.value, est.stderr),
        );
    }
    Ok((v.text, v.ok))
}
