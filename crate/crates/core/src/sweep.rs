//! β-grid sweeps of the apparatus model, their CSV form, plotting scripts,
//! and the bound-versus-exact validity report.
//!
//! Rows are quantized to 12 significant digits when they are created, so a
//! written CSV parses back to the identical [`SweepResult`].

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use crate::discrimination::{bayes_optimal_commuting, helstrom};
use crate::infotheory::{check_probabilities, success_probability_bound, PRIOR_TOL};
use crate::parallel::{self, Execution};
use crate::statespace::ThermalSpec;
use crate::thermal_model::{
    bayes_optimal_closed_form, bound_closed_form_with, build_ensemble, low_temperature_approximation,
    two_level_pc_closed_form, ModelConfig,
};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["log10_beta", "beta", "levels", "method", "p_c"];
pub const VALIDITY_HEADER: [&str; 6] = ["log10_beta", "beta", "levels", "holevo_bound", "bayes_exact", "delta"];

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;

/// Quantity evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Two-level Helstrom optimum from its closed form.
    HelstromClosed,
    /// Two-level Helstrom optimum from truncated Fock states.
    HelstromNumeric,
    /// Bayes-optimal success for the commuting apparatus ensemble.
    BayesExact,
    /// The `exp(H - h)` bound.
    HolevoBound,
    /// `exp(-S(ρ_a^0))`.
    LowTempApprox,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::HelstromClosed,
        Method::HelstromNumeric,
        Method::BayesExact,
        Method::HolevoBound,
        Method::LowTempApprox,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::HelstromClosed => "helstrom-closed",
            Method::HelstromNumeric => "helstrom-numeric",
            Method::BayesExact => "bayes-exact",
            Method::HolevoBound => "holevo-bound",
            Method::LowTempApprox => "low-temp-approx",
        }
    }

    fn is_two_level_only(self) -> bool {
        matches!(self, Method::HelstromClosed | Method::HelstromNumeric)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

/// Fixed-width scientific notation with 12 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

/// Rounds `v` to the value its 12-digit representation parses back to.
pub fn quantize(v: f64) -> f64 {
    format_value(v).parse().expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub log10_beta: f64,
    pub beta: f64,
    pub levels: usize,
    pub method: Method,
    pub p_c: f64,
}

/// Sweep rows sorted by `(levels, method, beta)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            (a.levels, a.method)
                .cmp(&(b.levels, b.method))
                .then(a.beta.total_cmp(&b.beta))
        });
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows of one `(levels, method)` series, in ascending β.
    pub fn curve(&self, levels: usize, method: Method) -> Vec<SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.levels == levels && r.method == method)
            .copied()
            .collect()
    }

    /// Distinct `(levels, method)` series present, in sort order.
    pub fn series(&self) -> Vec<(usize, Method)> {
        let mut out: Vec<(usize, Method)> = self.rows.iter().map(|r| (r.levels, r.method)).collect();
        out.dedup();
        out
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                format_value(r.log10_beta),
                format_value(r.beta),
                r.levels.to_string(),
                r.method.as_str().to_string(),
                format_value(r.p_c),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read_csv<R: io::Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers().map_err(csv_err)?;
        if header.iter().ne(CSV_HEADER) {
            return Err(Error::Csv(format!("unexpected header {header:?}")));
        }
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record.map_err(csv_err)?;
            let field = |i: usize| record.get(i).ok_or_else(|| Error::Csv(format!("missing field {i}")));
            let num = |i: usize| -> Result<f64> {
                field(i)?.parse().map_err(|e| Error::Csv(format!("field {i}: {e}")))
            };
            rows.push(SweepRow {
                log10_beta: num(0)?,
                beta: num(1)?,
                levels: field(2)?.parse().map_err(|e| Error::Csv(format!("levels: {e}")))?,
                method: field(3)?.parse()?,
                p_c: num(4)?,
            });
        }
        Ok(Self { rows })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

/// Grid and model parameters for [`run_sweep`] and [`validity_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub beta_min: f64,
    pub beta_max: f64,
    pub points: usize,
    pub levels: Vec<usize>,
    pub methods: Vec<Method>,
    /// Non-uniform priors; only allowed with a single `levels` value.
    pub priors: Option<Vec<f64>>,
    pub tail_epsilon: f64,
    pub execution: Execution,
}

impl SweepConfig {
    pub fn new(beta_min: f64, beta_max: f64, points: usize) -> Self {
        Self {
            beta_min,
            beta_max,
            points,
            levels: vec![2],
            methods: vec![Method::HelstromClosed],
            priors: None,
            tail_epsilon: ThermalSpec::DEFAULT_TAIL_EPSILON,
            execution: Execution::default(),
        }
    }

    /// Two-level Helstrom curve over `log10 β ∈ [-3, 2]`, 101 points.
    pub fn fig1() -> Self {
        Self {
            methods: vec![Method::HelstromClosed, Method::HelstromNumeric],
            ..Self::new(1e-3, 1e2, 101)
        }
    }

    /// The bound for `N + 1 ∈ {2, 4, 8}` over the fig1 grid.
    pub fn fig2() -> Self {
        Self {
            levels: vec![2, 4, 8],
            methods: vec![Method::HolevoBound],
            ..Self::new(1e-3, 1e2, 101)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.beta_min > 0.0 && self.beta_min.is_finite() && self.beta_max.is_finite()) {
            return bad(format!("beta range [{}, {}] must be positive and finite", self.beta_min, self.beta_max));
        }
        if self.beta_min >= self.beta_max {
            return bad(format!("beta_min {} must be below beta_max {}", self.beta_min, self.beta_max));
        }
        if self.points < 2 {
            return bad(format!("need at least 2 grid points, got {}", self.points));
        }
        if self.levels.is_empty() || self.levels.iter().any(|l| *l < 2) {
            return bad("every levels value must be at least 2".into());
        }
        if self.methods.is_empty() {
            return bad("no methods requested".into());
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return Err(Error::InvalidTailEpsilon(self.tail_epsilon));
        }
        if self.methods.iter().any(|m| m.is_two_level_only()) && self.levels.iter().any(|l| *l != 2) {
            return bad("helstrom methods require levels = 2".into());
        }
        if let Some(p) = &self.priors {
            if self.levels.len() != 1 || p.len() != self.levels[0] {
                return bad(format!("{} priors given for levels {:?}", p.len(), self.levels));
            }
            check_probabilities(p, PRIOR_TOL)?;
            if self.methods.contains(&Method::HelstromClosed) && !self.uniform_priors() {
                return bad("helstrom-closed assumes uniform priors".into());
            }
        }
        Ok(())
    }

    fn uniform_priors(&self) -> bool {
        match &self.priors {
            None => true,
            Some(p) => {
                let u = 1.0 / p.len() as f64;
                p.iter().all(|q| (q - u).abs() <= PRIOR_TOL)
            }
        }
    }

    fn model(&self, beta: f64, levels: usize) -> Result<ModelConfig> {
        let config = ModelConfig::new(beta, levels)?.with_tail_epsilon(self.tail_epsilon)?;
        match &self.priors {
            Some(p) => config.with_priors(p.clone()),
            None => Ok(config),
        }
    }
}

/// `(log10 β, β)` pairs, evenly spaced in `log10 β` with both endpoints
/// included exactly.
pub fn log_grid(beta_min: f64, beta_max: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    SweepConfig::new(beta_min, beta_max, points).validate()?;
    let (lo, hi) = (beta_min.log10(), beta_max.log10());
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| match k {
            0 => (lo, beta_min),
            k if k == points - 1 => (hi, beta_max),
            k => {
                let l = lo + step * k as f64;
                (l, 10f64.powf(l))
            }
        })
        .collect())
}

#[derive(Debug)]
enum Outcome {
    Value(f64),
    /// Numeric path unavailable, closed form used instead.
    ClosedForm(f64),
    Missing(Error),
}

fn evaluate(config: &SweepConfig, beta: f64, levels: usize, method: Method) -> Outcome {
    let numeric = || -> Result<f64> {
        let ensemble = build_ensemble(&config.model(beta, levels)?)?;
        match method {
            Method::HelstromNumeric => {
                let s = ensemble.states();
                helstrom(&s[0], &s[1], ensemble.priors()[0])
            }
            Method::BayesExact => bayes_optimal_commuting(&ensemble),
            Method::HolevoBound => success_probability_bound(&ensemble),
            _ => unreachable!("closed-form method routed to numeric path"),
        }
    };
    let closed = || -> Result<f64> {
        let spec = ThermalSpec::new(beta)?.with_tail_epsilon(config.tail_epsilon)?;
        match method {
            Method::BayesExact => bayes_optimal_closed_form(beta, levels),
            Method::HolevoBound => bound_closed_form_with(&spec, levels),
            _ => Err(Error::NotImplemented("closed form for this method")),
        }
    };
    let result = match method {
        Method::HelstromClosed => two_level_pc_closed_form(beta),
        Method::LowTempApprox => low_temperature_approximation(beta),
        _ => match numeric() {
            Err(e @ (Error::BelowNumericRange { .. } | Error::TruncationTooLarge { .. })) => {
                if method == Method::HelstromNumeric || !config.uniform_priors() {
                    return Outcome::Missing(e);
                }
                return match closed() {
                    Ok(v) => Outcome::ClosedForm(v),
                    Err(e) => Outcome::Missing(e),
                };
            }
            other => other,
        },
    };
    match result {
        Ok(v) if (0.0..=1.0).contains(&v) => Outcome::Value(v),
        Ok(v) => Outcome::Missing(Error::InvalidArgument(format!("value {v} outside [0, 1]"))),
        Err(e) => Outcome::Missing(e),
    }
}

/// Sweep output with aggregated warnings about fallbacks and missing rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub result: SweepResult,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum WarningKey {
    ClosedForm(usize, Method),
    Missing(usize, Method, String),
}

/// Evaluates every requested method at every grid point and level count.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let grid = log_grid(config.beta_min, config.beta_max, config.points)?;
    let mut levels = config.levels.clone();
    levels.sort_unstable();
    levels.dedup();
    let mut methods = config.methods.clone();
    methods.sort_unstable();
    methods.dedup();

    let mut tasks: Vec<(usize, Method, f64, f64)> = Vec::with_capacity(levels.len() * methods.len() * grid.len());
    for &l in &levels {
        for &m in &methods {
            tasks.extend(grid.iter().map(|&(lg, b)| (l, m, lg, b)));
        }
    }

    let outcomes = parallel::map(&tasks, config.execution, |&(levels, method, _, beta)| {
        evaluate(config, beta, levels, method)
    });

    let mut rows = Vec::with_capacity(tasks.len());
    let mut tally: BTreeMap<WarningKey, (usize, f64, f64)> = BTreeMap::new();
    for (&(levels, method, log10_beta, beta), outcome) in tasks.iter().zip(outcomes) {
        let value = match outcome {
            Outcome::Value(v) => Some(v),
            Outcome::ClosedForm(v) => {
                note(&mut tally, WarningKey::ClosedForm(levels, method), beta);
                Some(v)
            }
            Outcome::Missing(e) => {
                note(&mut tally, WarningKey::Missing(levels, method, missing_reason(&e)), beta);
                None
            }
        };
        if let Some(p_c) = value {
            rows.push(SweepRow {
                log10_beta: quantize(log10_beta),
                beta: quantize(beta),
                levels,
                method,
                p_c: quantize(p_c),
            });
        }
    }
    let mut result = SweepResult { rows };
    result.sort();

    let warnings = tally
        .into_iter()
        .map(|(key, (count, lo, hi))| match key {
            WarningKey::ClosedForm(levels, method) => format!(
                "{method} (levels = {levels}): {} with beta in [{lo:e}, {hi:e}] \
                 evaluated with closed forms",
                points(count)
            ),
            WarningKey::Missing(levels, method, reason) => format!(
                "{method} (levels = {levels}): {} with beta in [{lo:e}, {hi:e}] skipped: {reason}",
                points(count)
            ),
        })
        .collect();
    Ok(SweepOutput { result, warnings })
}

fn points(count: usize) -> String {
    if count == 1 {
        "1 point".into()
    } else {
        format!("{count} points")
    }
}

fn missing_reason(e: &Error) -> String {
    match e {
        Error::BelowNumericRange { min, .. } => format!("numeric path needs beta >= {min}"),
        Error::TruncationTooLarge { cap, .. } => format!("Fock truncation would exceed {cap} levels"),
        other => other.to_string(),
    }
}

fn note(tally: &mut BTreeMap<WarningKey, (usize, f64, f64)>, key: WarningKey, beta: f64) {
    let entry = tally.entry(key).or_insert((0, f64::INFINITY, f64::NEG_INFINITY));
    entry.0 += 1;
    entry.1 = entry.1.min(beta);
    entry.2 = entry.2.max(beta);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityRow {
    pub log10_beta: f64,
    pub beta: f64,
    pub bound: f64,
    pub exact: f64,
    /// `bound - exact`; no sign is implied.
    pub delta: f64,
}

/// Gap between the `exp(H - h)` bound and the exact Bayes optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    pub levels: usize,
    pub rows: Vec<ValidityRow>,
    pub min_delta: f64,
    pub min_delta_beta: f64,
    pub warnings: Vec<String>,
}

impl ValidityReport {
    pub fn min_row(&self) -> &ValidityRow {
        self.rows
            .iter()
            .find(|r| r.beta == self.min_delta_beta)
            .expect("minimum comes from the rows")
    }

    pub fn summary(&self) -> String {
        let row = self.min_row();
        format!(
            "levels = {}: min(bound - exact) = {} at beta = {} (log10 beta = {}); bound = {}, exact = {}",
            self.levels,
            format_value(self.min_delta),
            format_value(row.beta),
            format_value(row.log10_beta),
            format_value(row.bound),
            format_value(row.exact),
        )
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        w.write_record(VALIDITY_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                format_value(r.log10_beta),
                format_value(r.beta),
                self.levels.to_string(),
                format_value(r.bound),
                format_value(r.exact),
                format_value(r.delta),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))
    }
}

/// Compares the bound with the exact optimum over the grid of `config`,
/// which must name a single `levels` value. `config.methods` is ignored.
pub fn validity_report(config: &SweepConfig) -> Result<ValidityReport> {
    if config.levels.len() != 1 {
        return Err(Error::InvalidArgument("validity report takes a single levels value".into()));
    }
    let levels = config.levels[0];
    let sweep = SweepConfig {
        methods: vec![Method::BayesExact, Method::HolevoBound],
        ..config.clone()
    };
    let SweepOutput { result, warnings } = run_sweep(&sweep)?;
    let exact = result.curve(levels, Method::BayesExact);
    let bound = result.curve(levels, Method::HolevoBound);

    let rows: Vec<ValidityRow> = bound
        .iter()
        .filter_map(|b| {
            exact.iter().find(|e| e.beta == b.beta).map(|e| ValidityRow {
                log10_beta: b.log10_beta,
                beta: b.beta,
                bound: b.p_c,
                exact: e.p_c,
                delta: quantize(b.p_c - e.p_c),
            })
        })
        .collect();
    let min = rows
        .iter()
        .min_by(|a, b| a.delta.total_cmp(&b.delta))
        .ok_or_else(|| Error::InvalidArgument("no grid point had both the bound and the exact value".into()))?;
    Ok(ValidityReport {
        levels,
        min_delta: min.delta,
        min_delta_beta: min.beta,
        rows,
        warnings,
    })
}

/// `β = ħω / (k_B T)` for angular frequency `omega` (rad/s) and temperature
/// `temperature` (K).
pub fn convert_units(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidArgument(format!("temperature must be positive, got {temperature}")));
    }
    Ok(HBAR * omega / (K_B * temperature))
}

/// Gnuplot script drawing every series of `result` from `csv_path`.
pub fn gnuplot_script(csv_path: &str, png_path: &str, title: &str, result: &SweepResult) -> String {
    let mut s = String::new();
    s.push_str(&format!("# gnuplot script for {csv_path}\n"));
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set terminal pngcairo size 800,560\n");
    s.push_str(&format!("set output \"{png_path}\"\n"));
    s.push_str(&format!("set title \"{title}\"\n"));
    s.push_str("set xlabel \"log10(beta)\"\n");
    s.push_str("set ylabel \"P_c\"\n");
    s.push_str("set yrange [0:1.05]\n");
    s.push_str("set key bottom right\n");
    let series = result.series();
    let lines: Vec<String> = series
        .iter()
        .map(|(levels, method)| {
            format!(
                "\"{csv_path}\" every ::1 using 1:((strcol(4) eq \"{method}\" && $3 == {levels}) ? $5 : 1/0) \
                 with lines title \"{method}, N+1 = {levels}\""
            )
        })
        .collect();
    s.push_str("plot ");
    s.push_str(&lines.join(", \\\n     "));
    s.push('\n');
    s
}
