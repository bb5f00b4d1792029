//! Command-line front end.
//!
//! Every command builds a [`Table`] and renders it as CSV or JSON. Floats are
//! written with a fixed number of decimals so outputs diff cleanly.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::bounds::{
    certify, exception_region1, exception_region2, Certification, Grid, MutualReading, RegionMode, Theorem,
};
use crate::entropy::{von_neumann, EntropyReport};
use crate::error::Error;
use crate::fef::{fef_analytic, fef_max_bell_overlap, fef_tensor, sampled_local_unitary_overlap};
use crate::kdeform::{fhat, ghat, Alpha};
use crate::states::{build, spectrum_analytic, StateFamily};
use crate::steering::{conditional_curve, critical_f, limit_estimate, LIMIT_D_MAX};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "KANIADAKIS_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "kaniadakis", version, about = "Quantum Kaniadakis entropy, FEF bounds and steering thresholds")]
pub struct Cli {
    /// Output format [default: json for entropy/fef/check/region/limit, csv for table/sweep]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file; relative paths resolve against $KANIADAKIS_OUT_DIR when set.
    /// Without it, output goes to $KANIADAKIS_OUT_DIR/<command>.<ext> or stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Decimal places for floating-point output.
    #[arg(long, global = true, default_value_t = 6)]
    pub precision: usize,

    /// Seed for the randomized FEF sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint, marginal, conditional and mutual κ-entropies of a state.
    Entropy(EntropyArgs),
    /// Fully entangled fraction of a state.
    Fef(FefArgs),
    /// Certify a theorem's implication over a parameter grid.
    Check(CheckArgs),
    /// Exception regions 1 and 2.
    Region(RegionArgs),
    /// Critical fidelities of the isotropic state (Tables 1-3).
    Table(TableArgs),
    /// Conditional κ-entropy curves of the isotropic state against F.
    Sweep(SweepArgs),
    /// Large-d behaviour of the critical fidelity at α = 1e-5.
    Limit(LimitArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Entropy(_) => "entropy",
            Command::Fef(_) => "fef",
            Command::Check(_) => "check",
            Command::Region(_) => "region",
            Command::Table(_) => "table",
            Command::Sweep(_) => "sweep",
            Command::Limit(_) => "limit",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Table(_) | Command::Sweep(_) => Format::Csv,
            _ => Format::Json,
        }
    }
}

fn parse_state(s: &str) -> Result<StateFamily, Error> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// State, e.g. werner2:p=0.5, weyl2:t=0.1,0.2,0.3, iso:d=6,F=0.7, wernerd:d=4,x=-1
    #[arg(long, value_parser = parse_state)]
    pub state: StateFamily,
    /// Comma-separated α values; 0 selects the von Neumann limit.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct FefArgs {
    #[arg(long, value_parser = parse_state)]
    pub state: StateFamily,
    /// Random local-unitary samples for the two-qubit lower-bound oracle (0 disables it).
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridChoice {
    Default,
    Coarse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingChoice {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionModeChoice {
    PerAxis,
    Contracted,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// 1, 1.1, 2, 3, 4, 5, 6, proposition-7, proposition-8, or all.
    #[arg(long, default_value = "all")]
    pub theorem: String,
    #[arg(long, value_enum, default_value = "default")]
    pub grid: GridChoice,
    /// Reading of the mutual-information hypothesis in Corollary 1.1.
    #[arg(long, value_enum, default_value = "upper")]
    pub reading: ReadingChoice,
    /// Gate used by Theorem 4.
    #[arg(long, value_enum, default_value = "per-axis")]
    pub region_mode: RegionModeChoice,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    /// Weyl correlations t1,t2,t3; adds the region-2 rows.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub t: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub tables: Vec<u8>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.00001,0.1,0.3,0.5,0.75")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub d: Vec<usize>,
    /// Spacing of the F samples on [0, 1].
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = LIMIT_D_MAX)]
    pub d_max: usize,
}

/// α values of the Table 1 and 2 rows; `1e-5` stands for `0⁺`.
pub const TABLE_ALPHAS: [f64; 5] = [1e-5, 0.1, 0.3, 0.5, 0.75];

/// `(α, d)` cells of the requested tables, in table order.
pub fn table_cells(tables: &[u8]) -> Result<Vec<(f64, usize)>, Error> {
    let mut cells = Vec::new();
    for &t in tables {
        match t {
            1 => cells.extend(TABLE_ALPHAS.iter().map(|&a| (a, 2))),
            2 => cells.extend(TABLE_ALPHAS.iter().map(|&a| (a, 6))),
            3 => {
                for a in [0.1, 0.5] {
                    cells.extend([6, 7, 8].iter().map(|&d| (a, d)));
                }
            }
            _ => return Err(Error::parameter("tables", t as f64, "only tables 1, 2 and 3 exist")),
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Column-named rows shared by both output formats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| csv_cell(c, precision)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self, precision: usize) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, c)| (k.to_string(), json_cell(c, precision)))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Fixed-decimal rendering; `-0.000000` is written as `0.000000`.
pub fn format_float(v: f64, precision: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn csv_cell(c: &Cell, precision: usize) -> String {
    match c {
        Cell::Num(v) => format_float(*v, precision),
        Cell::Int(i) => i.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Null => String::new(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

fn json_cell(c: &Cell, precision: usize) -> Value {
    match c {
        Cell::Num(v) if v.is_finite() => format_float(*v, precision)
            .parse::<serde_json::Number>()
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Cell::Num(_) | Cell::Null => Value::Null,
        Cell::Int(i) => Value::from(*i),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(s) => Value::String(s.clone()),
    }
}

/// Output of one command.
pub struct Report {
    pub table: Table,
    /// Extra top-level JSON fields; the rows go under `rows` when present.
    pub summary: Vec<(&'static str, Cell)>,
    /// Lines for standard error.
    pub messages: Vec<String>,
    pub exit: i32,
}

impl Report {
    fn rows(table: Table) -> Self {
        Report {
            table,
            summary: Vec::new(),
            messages: Vec::new(),
            exit: EXIT_OK,
        }
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Csv => self.table.to_csv(precision),
            Format::Json => {
                let rows = self.table.to_json_value(precision);
                let value = if self.summary.is_empty() {
                    rows
                } else {
                    let mut obj: Map<String, Value> = self
                        .summary
                        .iter()
                        .map(|(k, c)| (k.to_string(), json_cell(c, precision)))
                        .collect();
                    obj.insert("rows".into(), rows);
                    Value::Object(obj)
                };
                let mut s = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn alpha_list(values: &[f64]) -> Result<Vec<Alpha>, Error> {
    values.iter().map(|&a| Alpha::new(a)).collect()
}

fn entropy_report(args: &EntropyArgs) -> Result<Report, Error> {
    let mut t = Table::new(&["state", "alpha", "joint", "marginal_b", "conditional", "mutual", "von_neumann_bits"]);
    let vn = von_neumann(&spectrum_analytic(&args.state)?);
    for al in alpha_list(&args.alpha)? {
        let r = EntropyReport::new(al, &args.state)?;
        t.push(vec![
            args.state.to_string().into(),
            al.value().into(),
            r.joint.into(),
            r.marginal_b.into(),
            r.conditional.into(),
            r.mutual.into(),
            vn.into(),
        ]);
    }
    Ok(Report::rows(t))
}

fn fef_report(args: &FefArgs, seed: u64) -> Result<Report, Error> {
    let analytic = fef_analytic(&args.state)?;
    let mut messages: Vec<String> = analytic.warnings.iter().map(|w| format!("warning: {w}")).collect();
    let (mut tensor, mut overlap, mut sampled) = (None, None, None);
    if args.state.is_two_qubit() {
        let rho = build(&args.state)?;
        let tr = fef_tensor(&rho)?;
        messages.extend(tr.warnings.iter().map(|w| format!("warning: {w}")));
        tensor = Some(tr.value);
        overlap = Some(fef_max_bell_overlap(&rho)?);
        if args.samples > 0 {
            sampled = Some(sampled_local_unitary_overlap(&rho, args.samples, seed)?);
        }
    } else if args.samples > 0 {
        messages.push("warning: the local-unitary sampler only covers two-qubit states".into());
    }
    let mut t = Table::new(&["state", "fef", "useful_for_teleportation", "tensor_formula", "max_bell_overlap", "sampled_lower_bound"]);
    t.push(vec![
        args.state.to_string().into(),
        analytic.value.into(),
        analytic.useful_for_teleportation.into(),
        tensor.into(),
        overlap.into(),
        sampled.into(),
    ]);
    let mut r = Report::rows(t);
    r.messages = messages;
    Ok(r)
}

fn theorems_for(key: &str) -> Result<Vec<Theorem>, Error> {
    if key.eq_ignore_ascii_case("all") {
        let mut all = Theorem::ALL.to_vec();
        all.extend([Theorem::P7, Theorem::P8]);
        Ok(all)
    } else {
        Ok(vec![key.parse()?])
    }
}

fn check_report(args: &CheckArgs) -> Result<Report, Error> {
    let mut grid = match args.grid {
        GridChoice::Default => Grid::default(),
        GridChoice::Coarse => Grid::coarse(),
    };
    grid.reading = match args.reading {
        ReadingChoice::Upper => MutualReading::UpperBounded,
        ReadingChoice::Lower => MutualReading::LowerBounded,
    };
    grid.region_mode = match args.region_mode {
        RegionModeChoice::PerAxis => RegionMode::PerAxis,
        RegionModeChoice::Contracted => RegionMode::Contracted,
    };
    let certs: Vec<Certification> = theorems_for(&args.theorem)?
        .into_iter()
        .map(|th| certify(th, &grid))
        .collect::<Result<_, _>>()?;

    let mut t = Table::new(&[
        "theorem",
        "points",
        "antecedent_true",
        "inapplicable",
        "inconsistencies",
        "claim_contradictions",
        "notes",
    ]);
    let mut messages = Vec::new();
    let mut total = 0;
    for c in &certs {
        t.push(vec![
            c.theorem.label().into(),
            c.points.into(),
            c.antecedent_true.into(),
            c.inapplicable.into(),
            c.inconsistencies.len().into(),
            c.claim_contradictions.len().into(),
            c.notes.join("; ").into(),
        ]);
        messages.push(format!(
            "{}: {} points, {} inconsistencies",
            c.theorem,
            c.points,
            c.inconsistencies.len()
        ));
        if !c.claim_contradictions.is_empty() {
            messages.push(format!(
                "{}: the \"not useful\" conclusion fires at {} points whose FEF exceeds 1/2",
                c.theorem,
                c.claim_contradictions.len()
            ));
        }
        if let Some(w) = c.inconsistencies.first() {
            messages.push(format!(
                "witness: {}",
                serde_json::to_string(w).expect("verdicts always serialize")
            ));
        }
        total += c.inconsistencies.len();
    }
    messages.push(format!("{total} inconsistencies"));
    let mut r = Report::rows(t);
    r.messages = messages;
    r.exit = if total == 0 { EXIT_OK } else { EXIT_INCONSISTENT };
    Ok(r)
}

fn region_report(args: &RegionArgs) -> Result<Report, Error> {
    let t_vec = match &args.t {
        Some(v) if v.len() == 3 => Some([v[0], v[1], v[2]]),
        Some(v) => return Err(Error::parameter("t", v.len() as f64, "expected exactly three correlations")),
        None => None,
    };
    let mut t = Table::new(&["alpha", "region", "axis", "set", "fhat", "ghat"]);
    for a in &args.alpha {
        let al = Alpha::deformed(*a)?;
        let (f, g) = (fhat(al), ghat(al)?);
        t.push(vec![
            (*a).into(),
            "1".into(),
            Cell::Null,
            exception_region1(al)?.to_string().into(),
            f.into(),
            g.into(),
        ]);
        if let Some(tv) = t_vec {
            StateFamily::weyl2(tv)?;
            for (i, set) in exception_region2(al, tv)?.iter().enumerate() {
                t.push(vec![
                    (*a).into(),
                    "2".into(),
                    (i + 1).into(),
                    set.to_string().into(),
                    f.into(),
                    g.into(),
                ]);
            }
        }
    }
    Ok(Report::rows(t))
}

fn table_report(args: &TableArgs) -> Result<Report, Error> {
    let cells = table_cells(&args.tables)?;
    let mut t = Table::new(&["alpha", "d", "critical_F"]);
    for (a, d) in cells {
        let c = critical_f(Alpha::new(a)?, d)?;
        t.push(vec![a.into(), d.into(), c.f_star.into()]);
    }
    Ok(Report::rows(t))
}

fn sweep_report(args: &SweepArgs) -> Result<Report, Error> {
    let mut t = Table::new(&["alpha", "d", "F", "conditional"]);
    for al in alpha_list(&args.alpha)? {
        for &d in &args.d {
            for (f, c) in conditional_curve(al, d, args.step)? {
                t.push(vec![al.value().into(), d.into(), f.into(), c.into()]);
            }
        }
    }
    Ok(Report::rows(t))
}

fn limit_report(args: &LimitArgs) -> Result<Report, Error> {
    let est = limit_estimate(args.d_max)?;
    let mut t = Table::new(&["d", "critical_F"]);
    for &(d, f) in &est.points {
        t.push(vec![d.into(), f.into()]);
    }
    let mut r = Report::rows(t);
    r.summary = vec![
        ("d_max", est.d_max.into()),
        ("value_at_d_max", est.value_at_d_max.into()),
        ("strictly_decreasing", est.strictly_decreasing.into()),
        ("trend_coefficient", est.trend_coefficient.into()),
        ("analytic_limit", est.analytic_limit.into()),
        ("quoted_value", est.quoted_value.into()),
        ("d_at_quoted_value", est.d_at_quoted_value.into()),
    ];
    r.messages = vec![
        format!("critical F at d={}: {:.6}", est.d_max, est.value_at_d_max),
        format!("strictly decreasing: {}", est.strictly_decreasing),
        format!("trend: F* ≈ 0.5 + {:.6}/ln d", est.trend_coefficient),
        format!("analytic limit: {}", est.analytic_limit),
        match est.d_at_quoted_value {
            Some(d) => format!("quoted value {} reached near d ≈ {d:.3e}", est.quoted_value),
            None => format!("quoted value {} not reached below d = e^300", est.quoted_value),
        },
    ];
    Ok(r)
}

fn report(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Entropy(a) => entropy_report(a),
        Command::Fef(a) => fef_report(a, cli.seed),
        Command::Check(a) => check_report(a),
        Command::Region(a) => region_report(a),
        Command::Table(a) => table_report(a),
        Command::Sweep(a) => sweep_report(a),
        Command::Limit(a) => limit_report(a),
    }
}

fn destination(cli: &Cli, format: Format) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match (&cli.out, dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{}.{}", cli.command.name(), format.extension()))),
        (None, None) => None,
    }
}

fn write_output(path: Option<PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, text)
        }
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let r = match report(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARAMETER;
        }
    };
    if let Err(e) = write_output(destination(cli, format), &r.render(format, cli.precision)) {
        eprintln!("error: {e}");
        return EXIT_IO;
    }
    for m in &r.messages {
        eprintln!("{m}");
    }
    r.exit
}
