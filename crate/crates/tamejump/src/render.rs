//! Text, JSON, CSV and TeX renderings of command results.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};
use tamejump_core::jumps::{DJumpMultiset, JumpMultiset};
use tamejump_core::zeta::{LPolynomial, RationalSeries};
use tamejump_core::Rational;

use crate::dto::format_rational;
use crate::oracle::{summarize, OracleCell};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
    Tex,
}

/// One result in every output format.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub csv: String,
    pub tex: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        let mut out = match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize"),
            Format::Csv => self.csv.clone(),
            Format::Tex => self.tex.clone(),
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        out
    }
}

/// Text form of a rational, with a decimal approximation when it is not an
/// integer.
pub fn text_rational(r: &Rational) -> String {
    if r.is_integer() {
        format_rational(r)
    } else {
        let approx = *r.numer() as f64 / *r.denom() as f64;
        format!("{} (≈ {approx:.6})", format_rational(r))
    }
}

pub fn tex_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let sign = if *r.numer() < 0 { "-" } else { "" };
    format!("{sign}\\tfrac{{{}}}{{{}}}", r.numer().abs(), r.denom())
}

fn tex_power(base: &str, k: u64) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{{{k}}}"),
    }
}

pub fn tex_lpoly(p: &LPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    if let Some((c, a, b)) = p.factor_class() {
        let body = format!("{}{}", tex_power("(\\mathbf{L}-1)", a), tex_power("\\mathbf{L}", b));
        return match (c, body.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => body,
            (-1, false) => format!("-{body}"),
            _ => format!("{c}{body}"),
        };
    }
    let mut out = String::new();
    for k in (0..p.coeffs().len()).rev() {
        let c = p.coeff(k);
        if c == 0 {
            continue;
        }
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let mon = tex_power("\\mathbf{L}", k as u64);
        match (c.unsigned_abs(), mon.is_empty()) {
            (a, true) => write!(out, "{a}").unwrap(),
            (1, false) => out.push_str(&mon),
            (a, false) => write!(out, "{a}{mon}").unwrap(),
        }
    }
    out
}

fn tex_coeff_times(c: &LPolynomial, mon: &str) -> String {
    if mon.is_empty() {
        return tex_lpoly(c);
    }
    if c == &LPolynomial::one() {
        return mon.to_string();
    }
    if c.factor_class().is_some() {
        format!("{}{mon}", tex_lpoly(c))
    } else {
        format!("({}){mon}", tex_lpoly(c))
    }
}

pub fn tex_series(s: &RationalSeries, truncated: bool) -> String {
    let mut parts: Vec<String> = s
        .prefix
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| tex_coeff_times(c, &tex_power("x", *k)))
        .collect();
    for t in &s.tails {
        let num = tex_coeff_times(&t.coeff, &tex_power("x", t.alpha));
        let num = if num.is_empty() { "1".to_string() } else { num };
        let y = format!("{}{}", tex_power("\\mathbf{L}", t.a), tex_power("x", t.b));
        let den = match t.power {
            1 => format!("1-{y}"),
            k => format!("(1-{y})^{{{k}}}"),
        };
        parts.push(format!("\\frac{{{num}}}{{{den}}}"));
    }
    if parts.is_empty() {
        parts.push("0".into());
    }
    if truncated {
        parts.push("\\cdots".into());
    }
    format!("$Z(x) = {}$", parts.join(" + "))
}

fn coeff_json(p: &LPolynomial) -> Value {
    json!(p.coeffs().iter().map(|&c| c as i64).collect::<Vec<_>>())
}

pub fn series_json(s: &RationalSeries) -> Value {
    json!({
        "prefix": s.prefix.iter().map(|(k, c)| json!({"exponent": k, "coefficient": coeff_json(c)})).collect::<Vec<_>>(),
        "tails": s.tails.iter().map(|t| json!({
            "coefficient": coeff_json(&t.coeff),
            "alpha": t.alpha,
            "a": t.a,
            "b": t.b,
            "power": t.power,
        })).collect::<Vec<_>>(),
    })
}

fn coeff_csv(p: &LPolynomial) -> String {
    p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
}

pub fn series_csv(s: &RationalSeries) -> String {
    let mut out = String::from("kind,exponent,coefficient,a,b,power\n");
    for (k, c) in &s.prefix {
        writeln!(out, "prefix,{k},{},,,", coeff_csv(c)).unwrap();
    }
    for t in &s.tails {
        writeln!(out, "tail,{},{},{},{},{}", t.alpha, coeff_csv(&t.coeff), t.a, t.b, t.power).unwrap();
    }
    out
}

/// Truncated series text: the terms followed by an ellipsis.
pub fn series_text(s: &RationalSeries, truncated: bool) -> String {
    let body = s.to_string();
    if truncated {
        format!("{body} + …")
    } else {
        body
    }
}

pub fn jumps_json(j: &JumpMultiset) -> Value {
    json!(j
        .entries()
        .iter()
        .map(|(v, m)| json!({"jump": format_rational(v), "multiplicity": m}))
        .collect::<Vec<_>>())
}

pub fn jumps_csv(j: &JumpMultiset) -> String {
    let mut out = String::from("jump,multiplicity\n");
    for (v, m) in j.entries() {
        writeln!(out, "{},{m}", format_rational(v)).unwrap();
    }
    out
}

pub fn jumps_tex(j: &JumpMultiset) -> String {
    let items: Vec<String> = j
        .entries()
        .iter()
        .map(|(v, m)| format!("{}^{{({m})}}", tex_rational(v)))
        .collect();
    format!("$\\{{{}\\}}$", items.join(", "))
}

pub fn d_jumps_json(j: &DJumpMultiset) -> Value {
    json!(j
        .entries()
        .iter()
        .map(|(v, m)| json!({"value": v, "multiplicity": m}))
        .collect::<Vec<_>>())
}

pub fn d_jumps_csv(j: &DJumpMultiset) -> String {
    let mut out = String::from("value,multiplicity\n");
    for (v, m) in j.entries() {
        writeln!(out, "{v},{m}").unwrap();
    }
    out
}

pub fn d_jumps_tex(j: &DJumpMultiset) -> String {
    let items: Vec<String> = j.entries().iter().map(|(v, m)| format!("{v}^{{({m})}}")).collect();
    format!("$\\{{{}\\}}$", items.join(", "))
}

fn list(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn oracle_report(cells: &[OracleCell]) -> Report {
    let s = summarize(cells);
    let mut text = String::new();
    let mut csv = String::from("e,f,d,q,status,expected,observed,detail\n");
    let mut tex = String::from("\\begin{tabular}{rrrrl}\n$e$ & $f$ & $d$ & $q$ & status \\\\\n\\hline\n");
    for c in cells {
        let q = c.q.map(|q| q.to_string()).unwrap_or_else(|| "-".into());
        let status = serde_json::to_value(c.status).expect("status serializes");
        let status = status.as_str().unwrap_or_default();
        write!(text, "e={} f={} d={} q={q} {status}", c.e, c.f, c.d).unwrap();
        if status == "FAIL" {
            write!(text, " expected [{}] observed [{}]", list(&c.expected), list(&c.observed)).unwrap();
        }
        if let Some(detail) = &c.detail {
            write!(text, " ({detail})").unwrap();
        }
        text.push('\n');
        writeln!(
            csv,
            "{},{},{},{},{status},{},{},{}",
            c.e,
            c.f,
            c.d,
            c.q.map(|q| q.to_string()).unwrap_or_default(),
            list(&c.expected),
            list(&c.observed),
            c.detail.clone().unwrap_or_default().replace(',', ";")
        )
        .unwrap();
        writeln!(tex, "{} & {} & {} & {q} & {status} \\\\", c.e, c.f, c.d).unwrap();
    }
    writeln!(text, "summary: {} PASS, {} FAIL, {} SKIPPED", s.pass, s.fail, s.skipped).unwrap();
    tex.push_str("\\end{tabular}\n");
    Report { text, json: json!({"cells": cells, "summary": s}), csv, tex }
}
