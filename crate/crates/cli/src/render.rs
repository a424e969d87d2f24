//! Output assembly. Every command builds one `Rendered` value and the chosen
//! format is picked at the end, so all formats see the same data.

use std::fmt::Write as _;
use std::io::Write as _;

use clap::ValueEnum;
use osp_core::character::{ExpansionReport, WeightPolynomial};
use osp_core::crystal::{to_dot, Connectivity, CrystalGraph, Report, Weight};
use osp_core::kn::{KnReport, KnTableau};
use osp_core::osp::OspTableau;
use osp_core::Alphabet;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

pub struct Rendered {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    pub dot: Option<String>,
}

impl Rendered {
    pub fn new(json: Value, text: String) -> Rendered {
        Rendered { json, text, csv: None, dot: None }
    }

    pub fn message(msg: String) -> Rendered {
        Rendered::new(json!({ "error": msg }), format!("{msg}\n"))
    }

    fn with_csv(mut self, csv: String) -> Rendered {
        self.csv = Some(csv);
        self
    }
}

pub fn emit(out: &Rendered, format: Format) -> Result<(), String> {
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Text => out.text.clone(),
        Format::Csv => out.csv.clone().ok_or("this command has no CSV output")?,
        Format::Dot => out.dot.clone().ok_or("only graph has DOT output")?,
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = stdout.write_all(body.as_bytes());
    Ok(())
}

fn weight_cells(w: &Weight, alphabet: &Alphabet) -> String {
    alphabet.letters().iter().map(|&a| w.get(a).to_string()).collect::<Vec<_>>().join(",")
}

fn letter_header(alphabet: &Alphabet) -> String {
    alphabet.letters().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

pub fn tableaux(ts: &[OspTableau], alphabet: &Alphabet) -> Rendered {
    let mut text = String::new();
    let mut csv = format!("index,degree,level,{},tableau\n", letter_header(alphabet));
    for (k, t) in ts.iter().enumerate() {
        let w = osp_core::crystal::weight_of(t);
        let _ = writeln!(text, "{t}");
        let _ = writeln!(csv, "{k},{},{},{},\"{t}\"", t.degree(), w.level, weight_cells(&w, alphabet));
    }
    let _ = writeln!(text, "{} tableaux", ts.len());
    Rendered::new(serde_json::to_value(ts).expect("tableaux serialize"), text).with_csv(csv)
}

pub fn character(ch: &WeightPolynomial, alphabet: &Alphabet) -> Rendered {
    let terms: Vec<Value> = ch
        .terms
        .iter()
        .map(|(w, c)| json!({ "level": w.level, "weight": alphabet.letters().iter().map(|&a| w.get(a)).collect::<Vec<_>>(), "coefficient": c }))
        .collect();
    let mut text = String::new();
    for (w, c) in &ch.terms {
        let _ = writeln!(text, "{c:>6}  {w}");
    }
    let _ = writeln!(text, "{} weights, {} tableaux", ch.len(), ch.total());
    let letters: Vec<String> = alphabet.letters().iter().map(|a| a.to_string()).collect();
    Rendered::new(json!({ "letters": letters, "terms": terms }), text).with_csv(ch.to_csv(alphabet))
}

pub fn kostka(table: &[(Vec<usize>, usize)]) -> Rendered {
    let mut text = String::new();
    let mut csv = String::from("mu,count\n");
    for (mu, k) in table {
        let mu = mu.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        let _ = writeln!(text, "({mu}) {k}");
        let _ = writeln!(csv, "\"{mu}\",{k}");
    }
    let rows: Vec<Value> = table.iter().map(|(mu, k)| json!({ "mu": mu, "count": k })).collect();
    Rendered::new(Value::Array(rows), text).with_csv(csv)
}

pub fn expansion(report: &ExpansionReport) -> Rendered {
    let mut r = kostka(&report.kostka);
    let verdict = if report.ok() { "agree" } else { "DIFFER" };
    let _ = writeln!(
        r.text,
        "character ({} weights) and Schur expansion ({} weights) {verdict}",
        report.lhs_terms, report.rhs_terms
    );
    for (w, a, b) in report.mismatches.iter().take(10) {
        let _ = writeln!(r.text, "  {w}: {a} vs {b}");
    }
    r.json = serde_json::to_value(report).expect("report serializes");
    r
}

pub fn graph(g: &CrystalGraph, conn: &Connectivity) -> Rendered {
    let mut csv = String::from("from,to,index\n");
    for e in &g.edges {
        let _ = writeln!(csv, "{},{},{}", e.from, e.to, e.index);
    }
    let mut text = format!(
        "{} nodes, {} edges, {} truncated edges, {} component(s), sources {:?}\n",
        g.nodes.len(),
        g.edges.len(),
        g.truncated_edges.len(),
        conn.components,
        conn.sources
    );
    if g.truncated {
        text.push_str("node budget reached; the graph is partial\n");
    }
    let mut json = serde_json::to_value(g).expect("graph serializes");
    json["connectivity"] = serde_json::to_value(conn).expect("serializes");
    Rendered { json, text, csv: Some(csv), dot: Some(to_dot(g)) }
}

pub fn kn(pairs: &[(OspTableau, KnTableau)], report: &KnReport) -> Rendered {
    let mut text = String::new();
    let mut csv = String::from("tableau,kn\n");
    for (t, k) in pairs {
        let _ = writeln!(text, "{t} -> {k}");
        let _ = writeln!(csv, "\"{t}\",\"{k}\"");
    }
    let _ = writeln!(
        text,
        "{} tableaux, KN shape {:?}, highest weight {:?}, oracle dimension {}",
        report.count, report.shape, report.highest_weight, report.oracle_dimension
    );
    for f in &report.failures {
        let _ = writeln!(text, "FAIL {f}");
    }
    let rows: Vec<Value> = pairs.iter().map(|(t, k)| json!({ "tableau": t, "kn": k })).collect();
    Rendered::new(json!({ "pairs": rows, "report": report }), text).with_csv(csv)
}

pub fn report(rep: &Report) -> Rendered {
    let mut text = format!("{} checks, {} failures\n", rep.checks, rep.failures.len());
    for f in &rep.failures {
        let _ = writeln!(text, "FAIL {f}");
    }
    Rendered::new(serde_json::to_value(rep).expect("report serializes"), text)
}
