//! Plain, JSON and CSV rendering. Every function returns the full text of
//! one invocation's output.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use psing_core::verify::VerifyReport;
use psing_core::{format_rational, CenterBounds, Rational, Representation, ShiftProfile, SingularityReport, TableRow};

pub const SCHEMA: &str = "psing/1";

/// Header of every row-table CSV (`search`, `table`).
pub const ROW_HEADER: [&str; 10] = ["p", "rep", "d", "l", "codim", "D", "delta", "class", "cm", "maximizers"];

pub const CLASSIFY_HEADER: [&str; 12] =
    ["p", "rep", "d", "l", "codim", "D", "cm", "delta", "class", "maximizers", "upper_bound", "lower_bound"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

fn document(kind: &str, body: impl Serialize) -> String {
    let value = serde_json::to_value(body).expect("output types serialise");
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("kind".into(), json!(kind));
    if let Value::Object(fields) = value {
        doc.extend(fields);
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json value serialises");
    text.push('\n');
    text
}

fn csv_text(header: &[&str], records: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in records {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

fn join(values: &[u64], sep: &str) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(sep)
}

fn opt_rational(r: Option<Rational>) -> String {
    r.map_or_else(String::new, |r| format_rational(&r))
}

fn opt_int(v: Option<i128>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

/// Left-aligned text table.
fn plain_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn classify(format: Format, report: &SingularityReport, center: Option<&CenterBounds>) -> String {
    let inv = &report.invariants;
    match format {
        Format::Json => {
            let mut value = serde_json::to_value(report).expect("report serialises");
            if let Some(cb) = center {
                value["center_bounds"] = serde_json::to_value(cb).expect("bounds serialise");
            }
            document("classify", value)
        }
        Format::Csv => {
            let mut header = CLASSIFY_HEADER.to_vec();
            let mut record = vec![
                report.p.to_string(),
                report.rep.to_string(),
                inv.dim.to_string(),
                inv.fixed_dim.to_string(),
                inv.codim.to_string(),
                inv.d_v.to_string(),
                inv.cohen_macaulay.to_string(),
                report.delta.to_string(),
                report.class.to_string(),
                join(&report.maximizers, ";"),
                opt_int(report.upper_bound),
                opt_rational(report.lower_bound),
            ];
            if let Some(cb) = center {
                header.extend(["center_dim", "center_lower", "center_upper", "center_lower_hypothesis_gap"]);
                record.extend([
                    cb.dim_c.to_string(),
                    opt_rational(cb.lower),
                    cb.upper.to_string(),
                    cb.lower_hypothesis_gap.to_string(),
                ]);
            }
            csv_text(&header, [record])
        }
        Format::Plain => {
            let mut out = format!(
                "rep: {}\np: {}\nd: {}\nl: {}\ncodim: {}\nD: {}\ncm: {}\ndelta: {}\nclass: {}\nmaximizers: {}\n",
                report.rep,
                report.p,
                inv.dim,
                inv.fixed_dim,
                inv.codim,
                inv.d_v,
                inv.cohen_macaulay,
                report.delta,
                report.class,
                if report.maximizers.is_empty() { "none".to_string() } else { join(&report.maximizers, ",") },
            );
            if let Some(upper) = report.upper_bound {
                out.push_str(&format!("upper_bound: {upper}\n"));
                out.push_str(&format!(
                    "lower_bound: {}\n",
                    report.lower_bound.map_or_else(|| "none".to_string(), |r| format_rational(&r))
                ));
            }
            if let Some(cb) = center {
                out.push_str(&format!("center_dim: {}\n", cb.dim_c));
                out.push_str(&format!(
                    "center_lower: {}\n",
                    cb.lower.map_or_else(|| "none".to_string(), |r| format_rational(&r))
                ));
                out.push_str(&format!("center_upper: {}\n", cb.upper));
                if cb.lower_hypothesis_gap {
                    out.push_str("note: D_V = p - 1; the rational lower bound is only established for D_V >= p\n");
                }
            }
            out
        }
    }
}

pub fn single(format: Format, rep: &Representation, j: u64, name: &str, value: i128) -> String {
    match format {
        Format::Plain => format!("{value}\n"),
        Format::Csv => csv_text(
            &["p", "rep", "j", name],
            [vec![rep.p().to_string(), rep.to_string(), j.to_string(), value.to_string()]],
        ),
        Format::Json => {
            let mut body = json!({ "p": rep.p(), "rep": rep.to_string(), "j": j });
            body[name] = serde_json::to_value(value).expect("integer serialises");
            document(name, body)
        }
    }
}

pub fn profile(format: Format, prof: &ShiftProfile, nus: &[i128]) -> String {
    let header = ["s", "sht", "jump", "nu"];
    let rows: Vec<[i128; 4]> =
        prof.residues().zip(nus).map(|(s, &nu)| [s as i128, prof.sht_at(s), prof.jump_at(s), nu]).collect();
    let as_strings = || rows.iter().map(|r| r.iter().map(i128::to_string).collect::<Vec<_>>());
    match format {
        Format::Plain => plain_table(&header, &as_strings().collect::<Vec<_>>()),
        Format::Csv => csv_text(&header, as_strings()),
        Format::Json => {
            let entries: Vec<Value> =
                rows.iter().map(|r| json!({ "s": r[0], "sht": r[1], "jump": r[2], "nu": r[3] })).collect();
            let rep = prof.rep();
            document("profile", json!({ "p": rep.p(), "rep": rep.to_string(), "rows": entries }))
        }
    }
}

fn row_record(row: &TableRow, sep: &str) -> Vec<String> {
    vec![
        row.p.to_string(),
        row.rep.to_string(),
        row.d.to_string(),
        row.l.to_string(),
        row.codim.to_string(),
        row.d_v.to_string(),
        row.delta.to_string(),
        row.class.to_string(),
        row.cm.to_string(),
        join(&row.maximizers, sep),
    ]
}

pub fn rows(format: Format, rows: &[TableRow]) -> String {
    match format {
        Format::Json => document("rows", json!({ "count": rows.len(), "rows": rows })),
        Format::Csv => csv_text(&ROW_HEADER, rows.iter().map(|r| row_record(r, ";"))),
        Format::Plain => {
            if rows.is_empty() {
                return "no matching representations\n".to_string();
            }
            let records: Vec<Vec<String>> = rows.iter().map(|r| row_record(r, ",")).collect();
            plain_table(&ROW_HEADER, &records)
        }
    }
}

pub fn verify(format: Format, report: &VerifyReport) -> String {
    match format {
        Format::Json => document("verify", json!({ "passed": report.passed(), "report": report })),
        Format::Csv => {
            let mut text = csv_text(
                &["property", "instances"],
                report.properties.iter().map(|t| vec![t.property.to_string(), t.instances.to_string()]),
            );
            if let Some(cx) = &report.counterexample {
                text.push_str(&csv_text(
                    &["failed_property", "p", "rep", "detail"],
                    [vec![cx.property.to_string(), cx.p.to_string(), cx.rep.clone(), cx.detail.clone()]],
                ));
            }
            text
        }
        Format::Plain => {
            let mut out = format!("representations checked: {}\n", report.reps_checked);
            let width = report.properties.iter().map(|t| t.property.len()).max().unwrap_or(0);
            for t in &report.properties {
                out.push_str(&format!("{:<width$}  {} instances\n", t.property, t.instances));
            }
            match &report.counterexample {
                None => out.push_str("result: pass\n"),
                Some(cx) => out.push_str(&format!(
                    "result: FAIL\ncounterexample: property {} at p = {}, rep {}: {}\n",
                    cx.property, cx.p, cx.rep, cx.detail
                )),
            }
            out
        }
    }
}
