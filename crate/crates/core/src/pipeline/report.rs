use std::fmt::Write;
use std::str::FromStr;

use itertools::Itertools;

use super::ClassRecord;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "id,dim,vertices,facets,omega,rc,rrc,xcs,op,pred_id,pred_class,further_reps";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "text" | "table" | "text-table" => Ok(ReportFormat::Text),
            other => Err(Error::Usage(format!("unknown report format {other:?} (expected csv, json or text)"))),
        }
    }
}

fn opt(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders records; the output depends only on the records.
pub fn emit_report(records: &[ClassRecord], format: ReportFormat) -> Result<String> {
    if records.is_empty() {
        return Err(Error::invalid("no records to report"));
    }
    match format {
        ReportFormat::Csv => Ok(csv(records)),
        ReportFormat::Json => Ok(serde_json::to_string_pretty(records)? + "\n"),
        ReportFormat::Text => Ok(text(records)),
    }
}

fn csv(records: &[ClassRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let c = &r.certificate;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.rep_id,
            r.dim,
            r.n_vertices,
            r.n_facets,
            r.omega,
            r.rc,
            r.rrc,
            r.xcs,
            c.op.symbol(),
            opt(c.pred_id),
            opt(c.pred_class),
            r.further_representatives.iter().join(" ")
        )
        .expect("writing to a String");
    }
    out
}

fn text(records: &[ClassRecord]) -> String {
    let header = ["ID", "d", "n", "m", "ω", "rc", "rrc", "xcs", "ext", "predecessor", "further representatives"];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let c = &r.certificate;
            let pred = match (c.pred_id, c.pred_class) {
                (Some(p), Some(k)) if p != k => format!("{p} (≅ {k})"),
                (Some(p), _) => p.to_string(),
                _ => String::new(),
            };
            vec![
                r.rep_id.to_string(),
                r.dim.to_string(),
                r.n_vertices.to_string(),
                r.n_facets.to_string(),
                r.omega.to_string(),
                r.rc.to_string(),
                r.rrc.to_string(),
                r.xcs.to_string(),
                c.op.symbol().to_string(),
                pred,
                r.further_representatives.iter().join(", "),
            ]
        })
        .collect();
    let width = |k: usize| {
        rows.iter().map(|row| row[k].chars().count()).chain([header[k].chars().count()]).max().unwrap_or(0)
    };
    let widths: Vec<usize> = (0..header.len()).map(width).collect();
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let last = cells.len() - 1;
        let parts: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(k, cell)| {
                let pad = widths[k] - cell.chars().count();
                if k == last {
                    cell.to_string()
                } else if k >= 8 {
                    format!("{cell}{}", " ".repeat(pad))
                } else {
                    format!("{}{cell}", " ".repeat(pad))
                }
            })
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in &rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{Certificate, Operation};

    fn cube4() -> ClassRecord {
        ClassRecord {
            rep_id: 65535,
            dim: 4,
            n_vertices: 16,
            n_facets: 8,
            omega: 8,
            rc: 8,
            rrc: 8,
            xcs: 8,
            certificate: Certificate { op: Operation::None, pred_id: None, pred_class: None, bound: 8, target_id: None },
            further_representatives: Vec::new(),
        }
    }

    #[test]
    fn csv_rows() {
        let out = emit_report(&[cube4()], ReportFormat::Csv).unwrap();
        assert_eq!(out, format!("{CSV_HEADER}\n65535,4,16,8,8,8,8,8,-,,,\n"));
        let mut r = cube4();
        r.rep_id = 383;
        r.certificate = Certificate {
            op: Operation::UnionPoint,
            pred_id: Some(375),
            pred_class: Some(319),
            bound: 8,
            target_id: None,
        };
        r.further_representatives = vec![1, 2];
        let out = emit_report(&[r], ReportFormat::Csv).unwrap();
        assert!(out.ends_with(",∪,375,319,1 2\n"));
    }

    #[test]
    fn formats() {
        assert_eq!("json".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        assert!(matches!("xml".parse::<ReportFormat>(), Err(Error::Usage(_))));
        assert!(emit_report(&[], ReportFormat::Csv).is_err());
        let text = emit_report(&[cube4()], ReportFormat::Text).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("65535"));
        let json: serde_json::Value = serde_json::from_str(&emit_report(&[cube4()], ReportFormat::Json).unwrap()).unwrap();
        assert_eq!(json[0]["rep_id"], 65535);
    }
}
