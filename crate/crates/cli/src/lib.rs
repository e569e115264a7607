//! Sweeps, trajectory dumps, tables and figure data on top of `qcomplexity`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;

use qcomplexity::format::format_sig;
use qcomplexity::metrics::{curvature_coefficient_closed, speed_efficiency_closed};
use qcomplexity::trajectory::DEFAULT_SAMPLES;
use qcomplexity::{
    analyze, geodesic_efficiency, sample_trajectory, Analysis, AnalysisConfig, AveragingMode,
    EvolutionProblem, SubOptimalParams,
};

pub const SWEEP_HEADER: [&str; 11] = [
    "alpha",
    "t_ab",
    "s",
    "eta_ge",
    "eta_se",
    "kappa2",
    "v_bar",
    "v_max",
    "complexity",
    "l_c",
    "degenerate",
];

/// Significant digits of every CSV float.
pub const CSV_DIGITS: usize = 12;

/// Parses an angle given as decimal radians or a multiple of pi:
/// `0.3`, `pi`, `pi/2`, `3/16pi`, `3/16 pi`, `3pi/16`, `0.25*pi`.
pub fn parse_angle(text: &str) -> anyhow::Result<f64> {
    let s: String = text
        .trim()
        .to_ascii_lowercase()
        .replace('π', "pi")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if s.is_empty() {
        bail!("empty angle");
    }
    let Some((pre, post)) = s.split_once("pi") else {
        return s
            .parse::<f64>()
            .map_err(|_| anyhow!("cannot parse angle `{text}`"));
    };
    let pre = pre.strip_suffix('*').unwrap_or(pre);
    let factor = match pre {
        "" | "+" => 1.0,
        "-" => -1.0,
        p => parse_fraction(p).with_context(|| format!("cannot parse angle `{text}`"))?,
    };
    let divisor = match post {
        "" => 1.0,
        p => match p.strip_prefix('/') {
            Some(d) => d
                .parse::<f64>()
                .map_err(|_| anyhow!("cannot parse angle `{text}`"))?,
            None => bail!("cannot parse angle `{text}`"),
        },
    };
    let value = factor * PI / divisor;
    if !value.is_finite() {
        bail!("angle `{text}` is not finite");
    }
    Ok(value)
}

fn parse_fraction(s: &str) -> anyhow::Result<f64> {
    match s.split_once('/') {
        Some((n, d)) => Ok(n.parse::<f64>()? / d.parse::<f64>()?),
        None => Ok(s.parse::<f64>()?),
    }
}

/// Label of `k pi / n` in lowest terms (`0`, `pi`, `3/16pi`).
pub fn pi_fraction_label(k: u32, n: u32) -> String {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    if k == 0 {
        return "0".to_string();
    }
    let g = gcd(k, n);
    let (k, n) = (k / g, n / g);
    match (k, n) {
        (1, 1) => "pi".to_string(),
        (k, 1) => format!("{k}pi"),
        (k, n) => format!("{k}/{n}pi"),
    }
}

/// Problem with `a = x`, `b` in the equatorial plane at angle `theta_ab`,
/// `hbar = 1` and `E = omega`.
pub fn problem_for(theta_ab: f64, omega: f64) -> qcomplexity::Result<EvolutionProblem> {
    if theta_ab == FRAC_PI_2 {
        EvolutionProblem::canonical(omega)
    } else {
        EvolutionProblem::in_equatorial_plane(theta_ab, omega, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub alpha_start: f64,
    pub alpha_end: f64,
    pub steps: usize,
    pub theta_ab: f64,
    pub omega: f64,
    pub samples: usize,
    pub averaging_mode: AveragingMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alpha_start: 0.0,
            alpha_end: PI,
            steps: 16,
            theta_ab: FRAC_PI_2,
            omega: 1.0,
            samples: DEFAULT_SAMPLES,
            averaging_mode: AveragingMode::default(),
        }
    }
}

impl SweepConfig {
    pub fn analysis(&self) -> AnalysisConfig {
        AnalysisConfig {
            samples: self.samples,
            mode: self.averaging_mode,
        }
    }

    pub fn problem(&self) -> qcomplexity::Result<EvolutionProblem> {
        problem_for(self.theta_ab, self.omega)
    }

    /// `steps + 1` equally spaced angles; a single-point sweep when start and
    /// end coincide.
    pub fn alphas(&self) -> Vec<f64> {
        if self.alpha_start == self.alpha_end {
            return vec![self.alpha_start];
        }
        grid(self.alpha_start, self.alpha_end, self.steps + 1)
    }
}

/// `points` equally spaced values from `a` to `b`, both included.
pub fn grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    let n = (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i + 1 == points {
                b
            } else {
                a + (b - a) * i as f64 / n
            }
        })
        .collect()
}

/// Result of one sweep row.
#[derive(Debug)]
pub struct SweepRow {
    pub alpha: f64,
    pub result: qcomplexity::Result<Analysis>,
}

/// Analyses every angle in parallel; rows come back in input order.
pub fn run_analyses(
    p: &EvolutionProblem,
    alphas: &[f64],
    config: &AnalysisConfig,
) -> Vec<SweepRow> {
    alphas
        .par_iter()
        .map(|&alpha| SweepRow {
            alpha,
            result: SubOptimalParams::new(alpha).and_then(|q| analyze(p, &q, config)),
        })
        .collect()
}

pub fn run_sweep(cfg: &SweepConfig) -> anyhow::Result<Vec<SweepRow>> {
    if cfg.steps < 1 {
        bail!("steps must be at least 1");
    }
    let p = cfg.problem()?;
    Ok(run_analyses(&p, &cfg.alphas(), &cfg.analysis()))
}

/// Parsed sweep line.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub values: [f64; 10],
    pub degenerate: String,
}

impl SweepRecord {
    pub fn from_analysis(a: &Analysis) -> Self {
        Self {
            values: [
                a.alpha,
                a.t_ab,
                a.report.s,
                a.report.eta_ge,
                a.report.eta_se,
                a.report.kappa2,
                a.volume.v_bar,
                a.volume.v_max,
                a.report.complexity,
                a.report.l_c,
            ],
            degenerate: a.volume.degeneracy().to_string(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.values[0]
    }

    pub fn get(&self, column: &str) -> Option<f64> {
        SWEEP_HEADER[..10]
            .iter()
            .position(|c| *c == column)
            .map(|i| self.values[i])
    }

    fn fields(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .values
            .iter()
            .map(|v| format_sig(*v, CSV_DIGITS))
            .collect();
        out.push(self.degenerate.clone());
        out
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> anyhow::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> anyhow::Result<Vec<SweepRecord>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(SWEEP_HEADER.iter().copied()) {
        bail!(
            "unexpected sweep header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        );
    }
    let mut out = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        let mut values = [0.0; 10];
        for (i, v) in values.iter_mut().enumerate() {
            *v = rec[i]
                .parse()
                .with_context(|| format!("row {}: bad `{}` value", line + 1, SWEEP_HEADER[i]))?;
        }
        out.push(SweepRecord {
            values,
            degenerate: rec[10].to_string(),
        });
    }
    Ok(out)
}

/// Splits sweep rows into records and `(alpha, message)` failures.
pub fn partition_rows(rows: &[SweepRow]) -> (Vec<SweepRecord>, Vec<(f64, String)>) {
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for row in rows {
        match &row.result {
            Ok(a) => ok.push(SweepRecord::from_analysis(a)),
            Err(e) => failed.push((row.alpha, e.to_string())),
        }
    }
    (ok, failed)
}

/// Writes the trajectory dump for one angle.
pub fn write_evolution<W: Write>(
    theta_ab: f64,
    omega: f64,
    alpha: f64,
    samples: usize,
    out: W,
) -> anyhow::Result<()> {
    let p = problem_for(theta_ab, omega)?;
    let q = SubOptimalParams::new(alpha)?;
    let traj = sample_trajectory(&p, &q, samples)?;
    traj.write_csv(out)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    I,
    II,
    III,
}

impl std::str::FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(TableKind::I),
            "II" | "2" => Ok(TableKind::II),
            "III" | "3" => Ok(TableKind::III),
            _ => Err(format!("unknown table `{s}` (expected I, II or III)")),
        }
    }
}

/// One row of a rendered table: angle label, values, supplementary label.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub alpha: String,
    pub values: Vec<f64>,
    pub supplementary: String,
}

pub fn table_header(kind: TableKind) -> &'static [&'static str] {
    match kind {
        TableKind::I => &[
            "alpha",
            "v_bar",
            "v_max",
            "complexity",
            "l_c",
            "pi_minus_alpha",
        ],
        TableKind::II => &[
            "alpha",
            "eta_ge",
            "eta_se",
            "kappa2",
            "complexity",
            "l_c",
            "pi_minus_alpha",
        ],
        TableKind::III => &["alpha", "t", "s", "pi_minus_alpha"],
    }
}

/// Rows for `alpha = k pi / 16`, `k = 0..=8`, on the canonical problem.
pub fn table_rows(kind: TableKind, config: &AnalysisConfig) -> anyhow::Result<Vec<TableRow>> {
    let p = EvolutionProblem::canonical(1.0)?;
    let alphas: Vec<f64> = (0..=8).map(|k| k as f64 * PI / 16.0).collect();
    let rows = run_analyses(&p, &alphas, config);
    rows.into_iter()
        .enumerate()
        .map(|(k, row)| {
            let a = row
                .result
                .with_context(|| format!("alpha = {}", pi_fraction_label(k as u32, 16)))?;
            let values = match kind {
                TableKind::I => vec![
                    a.volume.v_bar,
                    a.volume.v_max,
                    a.report.complexity,
                    a.report.l_c,
                ],
                TableKind::II => vec![
                    a.report.eta_ge,
                    a.report.eta_se,
                    a.report.kappa2,
                    a.report.complexity,
                    a.report.l_c,
                ],
                TableKind::III => vec![a.t_ab, a.report.s],
            };
            Ok(TableRow {
                alpha: pi_fraction_label(k as u32, 16),
                values,
                supplementary: pi_fraction_label(16 - k as u32, 16),
            })
        })
        .collect()
}

pub fn write_table<W: Write>(kind: TableKind, rows: &[TableRow], out: W) -> anyhow::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(table_header(kind))?;
    for r in rows {
        let mut fields = vec![r.alpha.clone()];
        fields.extend(r.values.iter().map(|v| format!("{v:.4}")));
        fields.push(r.supplementary.clone());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig4,
    Fig5,
}

impl std::str::FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig2" | "2" => Ok(Figure::Fig2),
            "fig4" | "4" => Ok(Figure::Fig4),
            "fig5" | "5" => Ok(Figure::Fig5),
            _ => Err(format!(
                "unknown figure `{s}` (expected fig2, fig4 or fig5)"
            )),
        }
    }
}

pub fn figure_header(fig: Figure) -> &'static [&'static str] {
    match fig {
        Figure::Fig2 => &["alpha", "eta_ge", "eta_se", "kappa2"],
        Figure::Fig4 => &["alpha", "complexity"],
        Figure::Fig5 => &["alpha", "l_c"],
    }
}

/// Figure series over `points` equally spaced angles in `[0, pi]`.
/// Efficiencies and curvature come from closed forms; the volume quantities
/// need full analyses.
pub fn figure_rows(
    fig: Figure,
    points: usize,
    theta_ab: f64,
    omega: f64,
    config: &AnalysisConfig,
) -> anyhow::Result<Vec<(f64, Vec<f64>)>> {
    if points < 2 {
        bail!("figure data needs at least 2 points");
    }
    let p = problem_for(theta_ab, omega)?;
    let alphas = grid(0.0, PI, points);
    match fig {
        Figure::Fig2 => alphas
            .iter()
            .map(|&alpha| {
                let q = SubOptimalParams::new(alpha)?;
                Ok((
                    alpha,
                    vec![
                        geodesic_efficiency(&p, &q),
                        speed_efficiency_closed(p.theta_ab(), alpha),
                        curvature_coefficient_closed(p.theta_ab(), alpha),
                    ],
                ))
            })
            .collect(),
        Figure::Fig4 | Figure::Fig5 => run_analyses(&p, &alphas, config)
            .into_iter()
            .map(|row| {
                let a = row
                    .result
                    .with_context(|| format!("alpha = {}", row.alpha))?;
                let v = if fig == Figure::Fig4 {
                    a.report.complexity
                } else {
                    a.report.l_c
                };
                Ok((row.alpha, vec![v]))
            })
            .collect(),
    }
}

pub fn write_figure<W: Write>(fig: Figure, rows: &[(f64, Vec<f64>)], out: W) -> anyhow::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(figure_header(fig))?;
    for (alpha, vals) in rows {
        let mut fields = vec![format_sig(*alpha, CSV_DIGITS)];
        fields.extend(vals.iter().map(|v| format_sig(*v, CSV_DIGITS)));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        let close = |s: &str, v: f64| assert!((parse_angle(s).unwrap() - v).abs() < 1e-15, "{s}");
        close("0.5", 0.5);
        close("pi", PI);
        close("pi/2", PI / 2.0);
        close("3/16pi", 3.0 * PI / 16.0);
        close("3/16 pi", 3.0 * PI / 16.0);
        close("3pi/16", 3.0 * PI / 16.0);
        close("0.25*pi", PI / 4.0);
        close("15/16π", 15.0 * PI / 16.0);
        assert!(parse_angle("").is_err());
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("1/0pi").is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(pi_fraction_label(0, 16), "0");
        assert_eq!(pi_fraction_label(2, 16), "1/8pi");
        assert_eq!(pi_fraction_label(16, 16), "pi");
        assert_eq!(pi_fraction_label(15, 16), "15/16pi");
    }

    #[test]
    fn default_grid_hits_endpoints() {
        let a = SweepConfig::default().alphas();
        assert_eq!(a.len(), 17);
        assert_eq!(a[0], 0.0);
        assert_eq!(a[16], PI);
        assert_eq!(a[8], PI / 2.0);
    }
}
