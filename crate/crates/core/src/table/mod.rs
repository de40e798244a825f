//! The five threshold tables: build, compare against the published entries,
//! render.

pub mod reference;

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde_json::{json, Value};

use crate::beta::{alpha_revised, epsilon_kn, RevisedAlpha};
use crate::error::{Error, Result};
use crate::exact::{decimal_exponent, Enc, Rat, SciDec};
use crate::recurrences::{c_top, Variant};
use crate::thresholds::{default_rel_width, delta_kn};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Retries with a narrower enclosure when the display digits are ambiguous.
const RENDER_RETRIES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    Constants,
    Deltas,
    Epsilons,
    Alphas,
    AlphasRevised,
}

impl TableId {
    pub const ALL: [TableId; 5] = [
        TableId::Constants,
        TableId::Deltas,
        TableId::Epsilons,
        TableId::Alphas,
        TableId::AlphasRevised,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Constants => "constants",
            TableId::Deltas => "deltas",
            TableId::Epsilons => "epsilons",
            TableId::Alphas => "alphas",
            TableId::AlphasRevised => "alphas-revised",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::Constants => "C_{k,n}",
            TableId::Deltas => "delta_{k,n}",
            TableId::Epsilons => "epsilon_{k,n}",
            TableId::Alphas => "alpha(k,n)",
            TableId::AlphasRevised => "revised alpha(k,n)",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown table '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Ok,
    /// Recomputed value disagrees with the published entry beyond display rounding.
    ErratumSuspect,
    /// Exact value taken from outside results rather than computed.
    Overlay,
}

impl Flag {
    pub fn name(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::ErratumSuspect => "erratum-suspect",
            Flag::Overlay => "overlay",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellValue {
    pub text: String,
    pub flag: Flag,
    /// Published entry, present whenever the grid position has one.
    pub reference: Option<String>,
    /// Enclosure the text was rendered from; a point for exact values.
    pub enclosure: Enc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Dash,
    Value(CellValue),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDoc {
    pub id: TableId,
    pub kmax: u32,
    pub nmax: u32,
    pub variant: Variant,
    pub digits: usize,
    /// Relative width requested for every computed enclosure.
    pub precision: Rat,
    pub version: &'static str,
    pub cells: BTreeMap<(u32, u32), Cell>,
}

impl TableDoc {
    pub fn cell(&self, k: u32, n: u32) -> Option<&Cell> {
        self.cells.get(&(k, n))
    }

    /// Populated cells in `(k, n)` order.
    pub fn values(&self) -> impl Iterator<Item = ((u32, u32), &CellValue)> {
        self.cells.iter().filter_map(|(&kn, c)| match c {
            Cell::Value(v) => Some((kn, v)),
            Cell::Dash => None,
        })
    }

    pub fn flagged(&self) -> impl Iterator<Item = ((u32, u32), &CellValue)> {
        self.values().filter(|(_, v)| v.flag == Flag::ErratumSuspect)
    }
}

/// Working relative width for a display precision: the default, or tighter
/// when many digits are requested.
pub fn working_width(digits: usize) -> Rat {
    let need = Rat::pow10(-(digits as i64) - 3);
    Rat::min(&default_rel_width(), &need)
}

fn render_with_retry(
    digits: usize,
    one_minus: bool,
    rel_width: &Rat,
    f: impl Fn(&Rat) -> Result<Enc>,
) -> Result<(SciDec, Enc)> {
    let mut rw = rel_width.clone();
    let mut last = Error::Precision { digit: 1 };
    for _ in 0..RENDER_RETRIES {
        let e = f(&rw)?;
        match SciDec::from_enc(&e, digits, one_minus) {
            Ok(d) => return Ok((d, e)),
            Err(err @ Error::Precision { .. }) => last = err,
            Err(err) => return Err(err),
        }
        rw = rw * Rat::pow10(-6);
    }
    Err(last)
}

/// Three-digit rendering used for comparison, independent of the display digits.
fn three_digit(e: &Enc) -> SciDec {
    SciDec::from_enc(e, 3, false)
        .or_else(|_| SciDec::from_rat(&e.midpoint(), 3, false))
        .expect("three digits of a positive value")
}

/// Two significant digits and the same decimal exponent as the published entry.
fn within_two_digits(e: &Enc, published: &SciDec) -> bool {
    let p = published.magnitude_part();
    let tol = Rat::new(5, 100).unwrap() * Rat::pow10(published.exp10);
    e.lo() >= &(&p - &tol)
        && e.hi() <= &(&p + &tol)
        && e.lo().is_positive()
        && decimal_exponent(e.lo()) == published.exp10
        && decimal_exponent(e.hi()) == published.exp10
}

fn parse_ref(s: &str) -> SciDec {
    s.parse().expect("reference entries are well formed")
}

/// Published tables follow the Section3 recurrence; other variants have nothing to compare with.
fn published_for(variant: Variant, table: &[reference::Column; 3], k: u32, n: u32) -> Option<&'static str> {
    (variant == Variant::Section3).then(|| reference::lookup(table, k, n)).flatten()
}

fn computed_cell(
    id: TableId,
    k: u32,
    n: u32,
    variant: Variant,
    digits: usize,
    rw: &Rat,
) -> Result<Cell> {
    let one_minus = matches!(id, TableId::Alphas | TableId::AlphasRevised);
    let (text, enclosure, flag, reference) = match id {
        TableId::Constants | TableId::Deltas => {
            let (d, e) = if id == TableId::Constants {
                let e = Enc::point(Rat::from_int(c_top(k, n, variant)));
                (SciDec::from_enc(&e, digits, false)?, e)
            } else {
                render_with_retry(digits, false, rw, |w| delta_kn(k, n, variant, w))?
            };
            let table = if id == TableId::Constants { &reference::CONSTANTS } else { &reference::DELTAS };
            let reference = published_for(variant, table, k, n);
            let flag = match reference {
                Some(r) if three_digit(&e) != parse_ref(r) => Flag::ErratumSuspect,
                _ => Flag::Ok,
            };
            (d.to_string(), e, flag, reference.map(str::to_string))
        }
        TableId::Epsilons | TableId::Alphas | TableId::AlphasRevised => {
            let (d, eps) = render_with_retry(digits, false, rw, |w| epsilon_kn(k, n, variant, w))?;
            let published = published_for(variant, &reference::EPSILONS, k, n);
            let flag = match published {
                Some(r) if !within_two_digits(&eps, &parse_ref(r)) => Flag::ErratumSuspect,
                _ => Flag::Ok,
            };
            if one_minus {
                let alpha = eps.one_minus();
                let d = SciDec::from_enc(&alpha, digits, true)?;
                let reference = published.map(|r| format!("1 - {r}"));
                (d.to_string(), alpha, flag, reference)
            } else {
                (d.to_string(), eps, flag, published.map(str::to_string))
            }
        }
    };
    Ok(Cell::Value(CellValue { text, flag, reference, enclosure }))
}

fn overlay(text: &str, value: Rat) -> Cell {
    Cell::Value(CellValue {
        text: text.to_string(),
        flag: Flag::Overlay,
        reference: Some(text.to_string()),
        enclosure: Enc::point(value),
    })
}

fn build_cell(id: TableId, k: u32, n: u32, variant: Variant, digits: usize, rw: &Rat) -> Result<Cell> {
    if k > n {
        return Ok(Cell::Dash);
    }
    if id != TableId::AlphasRevised {
        return computed_cell(id, k, n, variant, digits, rw);
    }
    Ok(match alpha_revised(k, n, variant, rw)? {
        RevisedAlpha::Undefined | RevisedAlpha::NotApplicable => Cell::Dash,
        RevisedAlpha::Zero => overlay("0", Rat::zero()),
        RevisedAlpha::Half => overlay("1/2", Rat::new(1, 2).unwrap()),
        RevisedAlpha::Computed(_) => computed_cell(id, k, n, variant, digits, rw)?,
    })
}

/// Build one table at the working width implied by `digits`.
pub fn make_table(id: TableId, kmax: u32, nmax: u32, variant: Variant, digits: usize) -> Result<TableDoc> {
    make_table_with(id, kmax, nmax, variant, digits, &working_width(digits))
}

pub fn make_table_with(
    id: TableId,
    kmax: u32,
    nmax: u32,
    variant: Variant,
    digits: usize,
    rel_width: &Rat,
) -> Result<TableDoc> {
    if kmax == 0 || nmax == 0 {
        return Err(Error::usage("table bounds must be positive"));
    }
    if digits == 0 {
        return Err(Error::usage("at least one significant digit is required"));
    }
    let positions: Vec<(u32, u32)> =
        (1..=kmax).flat_map(|k| (1..=nmax).map(move |n| (k, n))).collect();
    let slots: Vec<Mutex<Option<Result<Cell>>>> = positions.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = thread::available_parallelism().map_or(1, |w| w.get()).min(positions.len());
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(k, n)) = positions.get(i) else { break };
                let cell = build_cell(id, k, n, variant, digits, rel_width);
                *slots[i].lock().expect("cell slot") = Some(cell);
            });
        }
    });
    let mut cells = BTreeMap::new();
    for (kn, slot) in positions.into_iter().zip(slots) {
        let cell = slot.into_inner().expect("cell slot").expect("every cell visited")?;
        cells.insert(kn, cell);
    }
    Ok(TableDoc {
        id,
        kmax,
        nmax,
        variant,
        digits,
        precision: rel_width.clone(),
        version: VERSION,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            other => Err(Error::usage(format!("unknown table format '{other}'"))),
        }
    }
}

fn precision_label(doc: &TableDoc) -> String {
    SciDec::from_rat(&doc.precision, 1, false)
        .map(|d| d.to_string())
        .unwrap_or_else(|_| doc.precision.to_string())
}

pub fn render(doc: &TableDoc, format: Format) -> String {
    match format {
        Format::Csv => render_csv(doc),
        Format::Markdown => render_markdown(doc),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(doc)).expect("json");
            s.push('\n');
            s
        }
    }
}

fn render_csv(doc: &TableDoc) -> String {
    let mut out = String::from("k,n,value,flag\n");
    for ((k, n), v) in doc.values() {
        let _ = writeln!(out, "{k},{n},{},{}", v.text, v.flag.name());
    }
    out
}

fn render_markdown(doc: &TableDoc) -> String {
    let mut out = format!(
        "{} ({}; variant {}, relative width {}, {} digits, ricci-alpha {})\n\n",
        doc.id.title(),
        doc.id.name(),
        doc.variant,
        precision_label(doc),
        doc.digits,
        doc.version
    );
    out.push_str("| |");
    for k in 1..=doc.kmax {
        let _ = write!(out, " k={k} |");
    }
    out.push_str("\n|---|");
    for _ in 1..=doc.kmax {
        out.push_str("---|");
    }
    out.push('\n');
    for n in 1..=doc.nmax {
        let _ = write!(out, "| n={n} |");
        for k in 1..=doc.kmax {
            let text = match doc.cell(k, n) {
                Some(Cell::Value(v)) if v.flag == Flag::ErratumSuspect => format!(
                    "{} [published {}]",
                    v.text,
                    v.reference.as_deref().unwrap_or("?")
                ),
                Some(Cell::Value(v)) => v.text.clone(),
                _ => "-".to_string(),
            };
            let _ = write!(out, " {text} |");
        }
        out.push('\n');
    }
    out
}

pub fn to_json(doc: &TableDoc) -> Value {
    let cells: Vec<Value> = doc
        .cells
        .iter()
        .map(|(&(k, n), c)| match c {
            Cell::Dash => json!({ "k": k, "n": n, "value": null }),
            Cell::Value(v) => json!({
                "k": k,
                "n": n,
                "value": v.text,
                "flag": v.flag.name(),
                "published": v.reference,
                "lo": v.enclosure.lo().to_string(),
                "hi": v.enclosure.hi().to_string(),
            }),
        })
        .collect();
    json!({
        "table": doc.id.name(),
        "variant": doc.variant.name(),
        "kmax": doc.kmax,
        "nmax": doc.nmax,
        "digits": doc.digits,
        "precision": precision_label(doc),
        "version": doc.version,
        "cells": cells,
    })
}

/// Parse a CSV value string back to a rational: scientific decimals,
/// one-minus forms and plain fractions are all accepted.
pub fn parse_value(text: &str) -> Result<Rat> {
    if let Ok(d) = text.parse::<SciDec>() {
        return Ok(d.to_rat());
    }
    text.parse::<Rat>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_rows_and_dashes() {
        let doc = make_table(TableId::Constants, 3, 10, Variant::Section3, 3).unwrap();
        let csv = render(&doc, Format::Csv);
        assert!(csv.starts_with("k,n,value,flag\n1,1,2.40e1,ok\n1,2,3.84e2,ok\n"));
        assert_eq!(csv.lines().count(), 1 + 27);
        let md = render(&doc, Format::Markdown);
        assert!(md.contains("| n=1 | 2.40e1 | - | - |"));
        let flagged: Vec<_> = doc.flagged().map(|(kn, _)| kn).collect();
        assert_eq!(flagged, vec![(1, 6)]);
        assert!(md.contains("2.52e7 [published 2.51e7]"));
    }

    #[test]
    fn revised_overlay_cells() {
        let doc = make_table(TableId::AlphasRevised, 3, 5, Variant::Section3, 3).unwrap();
        let text = |k, n| match doc.cell(k, n).unwrap() {
            Cell::Value(v) => v.text.clone(),
            Cell::Dash => "-".into(),
        };
        assert_eq!(text(1, 1), "-");
        assert_eq!(text(1, 4), "1/2");
        assert_eq!(text(3, 3), "0");
        assert_eq!(text(3, 2), "-");
        assert_eq!(text(2, 4), "1 - 1.69e-167");
        assert!(render(&doc, Format::Csv).contains("\n1,4,1/2,overlay\n"));
    }

    #[test]
    fn epsilon_mismatch_flagged() {
        let doc = make_table(TableId::Epsilons, 2, 3, Variant::Section3, 3).unwrap();
        let Some(Cell::Value(v)) = doc.cell(2, 2) else { panic!() };
        assert_eq!(v.flag, Flag::ErratumSuspect);
        assert_eq!(v.text, "1.19e-37");
        assert_eq!(v.reference.as_deref(), Some("1.89e-37"));
        assert_eq!(doc.flagged().count(), 1);
    }

    #[test]
    fn csv_values_reparse_into_enclosure() {
        let doc = make_table(TableId::Alphas, 2, 4, Variant::Section3, 3).unwrap();
        for (_, v) in doc.values() {
            let back = parse_value(&v.text).unwrap();
            let d: SciDec = v.text.parse().unwrap();
            assert!((&back - v.enclosure.midpoint()).abs() <= d.ulp());
        }
        assert_eq!(parse_value("1/2").unwrap(), Rat::new(1, 2).unwrap());
    }

    #[test]
    fn json_and_ids() {
        let doc = make_table(TableId::Deltas, 1, 2, Variant::Section3, 3).unwrap();
        let v = to_json(&doc);
        assert_eq!(v["cells"][0]["value"], "4.17e-5");
        assert_eq!("alphas-revised".parse::<TableId>().unwrap(), TableId::AlphasRevised);
        assert!("nope".parse::<TableId>().is_err());
    }

    #[test]
    fn rendering_is_repeatable() {
        let a = make_table(TableId::Deltas, 2, 3, Variant::Section3, 4).unwrap();
        let b = make_table(TableId::Deltas, 2, 3, Variant::Section3, 4).unwrap();
        assert_eq!(render(&a, Format::Markdown), render(&b, Format::Markdown));
    }
}
