//! Canonical renderings of exact polynomials and numeric results.

use clap::ValueEnum;
use serde_json::{json, Value};
use wpvol::ring::rational::to_string as rational;
use wpvol::ring::{MPoly, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Table,
    Json,
    Latex,
    Csv,
}

/// A polynomial with its labels and an optional `M_0^{-e}` prefactor.
pub struct Labelled<'a> {
    pub kind: &'a str,
    pub g: u32,
    pub n: u32,
    pub p: Option<u32>,
    pub basis: &'a str,
    pub prefactor: Option<u32>,
    pub poly: &'a MPoly,
}

fn monomial(mono: &[(Symbol, u32)]) -> String {
    if mono.is_empty() {
        return "1".into();
    }
    mono.iter()
        .map(|&(s, e)| if e == 1 { s.name() } else { format!("{}^{e}", s.name()) })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn render(item: &Labelled, format: Format) -> String {
    let pre = item.prefactor.filter(|&e| e > 0);
    match format {
        Format::Text => match pre {
            Some(e) => format!("M0^-{e} * ({})", item.poly),
            None => item.poly.to_string(),
        },
        Format::Latex => match pre {
            Some(e) => format!("M_0^{{-{e}}} \\left({}\\right)", item.poly.to_latex()),
            None => item.poly.to_latex(),
        },
        Format::Json => {
            let mut v = json!({
                "kind": item.kind,
                "g": item.g,
                "n": item.n,
                "basis": item.basis,
                "prefactor_exponent": item.prefactor,
                "text": item.poly.to_string(),
                "latex": item.poly.to_latex(),
                "terms": item.poly,
            });
            if let Some(p) = item.p {
                v["p"] = json!(p);
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut out = String::from("coefficient,monomial\n");
            for (m, c) in item.poly.terms() {
                out.push_str(&format!("{},{}\n", rational(c), monomial(m)));
            }
            out.pop();
            out
        }
        Format::Table => {
            let rows: Vec<(String, String)> = item.poly.terms().map(|(m, c)| (rational(c), monomial(m))).collect();
            let width = rows.iter().map(|r| r.0.len()).chain(["coefficient".len()]).max().unwrap_or(0);
            let mut out = format!("{:<width$}  monomial", "coefficient");
            for (c, m) in rows {
                out.push_str(&format!("\n{c:<width$}  {m}"));
            }
            if let Some(e) = pre {
                out.push_str(&format!("\nprefactor: M0^-{e}"));
            }
            out
        }
    }
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}
