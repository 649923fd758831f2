use std::fmt::Write as _;

use acsmote::ClassReport;
use serde_json::{json, Map, Value};

use crate::Format;

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".into())
}

fn opt_full(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn class_report(report: &ClassReport, class_names: &[String], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Table => {
            let w = class_names.iter().map(|n| n.len()).max().unwrap_or(0).max(5) + 2;
            let _ = writeln!(
                out,
                "{:<w$}{:>10}{:>10}{:>10}{:>9}{:>10}{:>10}",
                "class", "precision", "recall", "f1", "support", "auc", "ap"
            );
            for (name, m) in class_names.iter().zip(&report.classes) {
                let _ = writeln!(
                    out,
                    "{name:<w$}{:>10.4}{:>10.4}{:>10.4}{:>9}{:>10}{:>10}",
                    m.precision,
                    m.recall,
                    m.f1,
                    m.support,
                    opt(m.auc),
                    opt(m.average_precision)
                );
            }
            let _ = writeln!(
                out,
                "{:<w$}{:>10.4}{:>10.4}{:>10.4}{:>9}{:>10}{:>10}",
                "macro",
                report.macro_precision,
                report.macro_recall,
                report.macro_f1,
                report.confusion.total(),
                opt(report.macro_auc),
                opt(report.macro_average_precision)
            );
            let _ = writeln!(out, "accuracy {:.4}", report.accuracy);
        }
        Format::Csv => {
            out.push_str("class,precision,recall,f1,support,auc,average_precision\n");
            for (name, m) in class_names.iter().zip(&report.classes) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    csv_field(name),
                    m.precision,
                    m.recall,
                    m.f1,
                    m.support,
                    opt_full(m.auc),
                    opt_full(m.average_precision)
                );
            }
            let _ = writeln!(
                out,
                "macro,{},{},{},{},{},{}",
                report.macro_precision,
                report.macro_recall,
                report.macro_f1,
                report.confusion.total(),
                opt_full(report.macro_auc),
                opt_full(report.macro_average_precision)
            );
        }
        Format::Json => {
            let v = json!({ "class_names": class_names, "report": report });
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
    out
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Ordered key/value summary.
pub fn pairs(items: &[(&str, Value)], format: Format) -> String {
    let show = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let mut out = String::new();
    match format {
        Format::Table => {
            let w = items.iter().map(|(k, _)| k.len()).max().unwrap_or(0) + 2;
            for (k, v) in items {
                let _ = writeln!(out, "{:<w$}{}", format!("{k}:"), show(v));
            }
        }
        Format::Csv => {
            out.push_str("key,value\n");
            for (k, v) in items {
                let _ = writeln!(out, "{},{}", k, csv_field(&show(v)));
            }
        }
        Format::Json => {
            let mut m = Map::new();
            for (k, v) in items {
                m.insert((*k).to_string(), v.clone());
            }
            out.push_str(&Value::Object(m).to_string());
            out.push('\n');
        }
    }
    out
}
