//! Report rendering: CSV, an aligned plain-text table, and two-column plot
//! series. All numbers carry six decimals.

use std::fmt::Write as _;

use super::{CellSummary, OptResult, Stat, Verdict};
use crate::agents::RegimeKind;
use crate::error::{Error, Result};

pub const REPORT_CSV_COLUMNS: [&str; 20] = [
    "label",
    "regime",
    "delta",
    "sensitivity",
    "cai_star_mean",
    "cai_star_std",
    "d_mean",
    "d_std",
    "hri_mean",
    "hri_std",
    "hcdr_mean",
    "hcdr_std",
    "q_h_mean",
    "q_h_std",
    "q_ha_mean",
    "q_ha_std",
    "skill_mean_mean",
    "skill_mean_std",
    "ai_use_rate_mean",
    "ai_use_rate_std",
];

#[derive(Debug, Clone, Copy)]
pub enum ReportInput<'a> {
    Cells(&'a [CellSummary]),
    Optimization(&'a OptResult),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportDocument {
    pub csv: String,
    pub table: String,
    /// `(file stem, two-column CSV)` pairs; empty for plain sweeps.
    pub plots: Vec<(String, String)>,
}

pub fn render_report(input: ReportInput<'_>) -> Result<ReportDocument> {
    let cells = match input {
        ReportInput::Cells(c) => c,
        ReportInput::Optimization(r) => &r.candidates,
    };
    if cells.is_empty() {
        return Err(Error::EmptyInput("report cells"));
    }
    let csv = render_csv(cells);
    let mut table = render_table(cells);
    let mut plots = Vec::new();
    if let ReportInput::Optimization(r) = input {
        table.push('\n');
        table.push_str(&render_verdict(r));
        plots.push(("plot_delta_cai_star".to_string(), plot_series(cells, "cai_star", |c| c.cai_star)));
        plots.push(("plot_delta_d".to_string(), plot_series(cells, "d", |c| c.d)));
    }
    Ok(ReportDocument { csv, table, plots })
}

fn render_csv(cells: &[CellSummary]) -> String {
    let mut out = REPORT_CSV_COLUMNS.join(",");
    out.push('\n');
    for c in cells {
        let mut row = vec![
            csv_field(&c.label),
            c.regime.to_string(),
            format!("{:.6}", c.delta),
            format!("{:.6}", c.sensitivity),
        ];
        for (_, s) in c.stats() {
            row.push(format!("{:.6}", s.mean));
            row.push(format!("{:.6}", s.std));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

const TABLE_HEADERS: [&str; 8] = ["CAI*", "D", "HRI", "HCDR", "Q_H", "Q_HA", "Skill", "AI use"];

fn render_table(cells: &[CellSummary]) -> String {
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(cells.len() + 2);
    let mut head = vec!["Config".to_string(), "Regime".to_string(), "delta".to_string(), "sigma".to_string()];
    let mut sub = vec![String::new(); 4];
    for h in TABLE_HEADERS {
        head.push(h.to_string());
        head.push(String::new());
        sub.push("Mean".to_string());
        sub.push("Std".to_string());
    }
    rows.push(head);
    rows.push(sub);
    for c in cells {
        let mut row = vec![
            c.label.clone(),
            c.regime.to_string(),
            format!("{:.6}", c.delta),
            format!("{:.6}", c.sensitivity),
        ];
        for (_, s) in c.stats() {
            row.push(format!("{:.6}", s.mean));
            row.push(format!("{:.6}", s.std));
        }
        rows.push(row);
    }

    let ncol = rows[0].len();
    let widths: Vec<usize> = (0..ncol)
        .map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::from("Values are mean and population standard deviation (denominator = seed count).\n");
    for (i, r) in rows.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(j, (v, w))| if j < 2 { format!("{v:<w$}") } else { format!("{v:>w$}") })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 1 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (ncol - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

fn render_verdict(r: &OptResult) -> String {
    let mut out = String::new();
    match r.best() {
        Some(b) => {
            let _ = writeln!(
                out,
                "Best feasible delta: {:.6} (CAI* {:.6}, D {:.6}, HCDR {:.6})",
                b.delta, b.cai_star.mean, b.d.mean, b.hcdr.mean
            );
        }
        None => out.push_str("Best feasible delta: none (no candidate has HCDR >= 0)\n"),
    }
    let verdict = match r.verdict {
        Verdict::Amplification => "amplification achieved (CAI* > 0 and HCDR >= 0)",
        Verdict::BestAttainableCompromise => "no amplification; best attainable compromise under HCDR >= 0",
        Verdict::NoFeasibleCandidate => "no amplification; no candidate preserves human capability",
    };
    let _ = writeln!(out, "Verdict: {verdict}");
    out
}

fn plot_series(cells: &[CellSummary], name: &str, f: fn(&CellSummary) -> Stat) -> String {
    let mut out = format!("delta,{name}\n");
    for c in cells {
        let _ = writeln!(out, "{:.6},{:.6}", c.delta, f(c).mean);
    }
    out
}

/// Parses the report CSV back into cell summaries (six-decimal precision).
pub fn parse_report_csv(text: &str) -> Result<Vec<CellSummary>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::ReportParse(e.to_string()))?;
    if headers.iter().ne(REPORT_CSV_COLUMNS.iter().copied()) {
        return Err(Error::ReportParse(format!("unexpected header {headers:?}")));
    }
    let mut out = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::ReportParse(e.to_string()))?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| Error::ReportParse(format!("row {}: column {}: {e}", line + 1, REPORT_CSV_COLUMNS[i])))
        };
        let stat = |i: usize| -> Result<Stat> {
            Ok(Stat {
                mean: num(i)?,
                std: num(i + 1)?,
            })
        };
        let regime: RegimeKind = rec[1]
            .parse()
            .map_err(|e: Error| Error::ReportParse(format!("row {}: {e}", line + 1)))?;
        out.push(CellSummary {
            label: rec[0].to_string(),
            regime,
            delta: num(2)?,
            sensitivity: num(3)?,
            cai_star: stat(4)?,
            d: stat(6)?,
            hri: stat(8)?,
            hcdr: stat(10)?,
            q_h: stat(12)?,
            q_ha: stat(14)?,
            skill_mean: stat(16)?,
            ai_use_rate: stat(18)?,
        });
    }
    Ok(out)
}
