use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ricci_alpha::beta::{alpha_kn, alpha_revised, beta_eval, epsilon_kn, RevisedAlpha};
use ricci_alpha::recurrences::{audit, c_kn, default_d0_samples};
use ricci_alpha::search::{gap_report_with, render_beta, scan, GridSpec, Spacing};
use ricci_alpha::table::{self, make_table, TableId};
use ricci_alpha::thresholds::{delta_kn, gamma, h_inv};
use ricci_alpha::{Enc, Error, Rat, SciDec, Variant};

#[derive(Parser)]
#[command(name = "ricci-alpha", version, about = "Certified volume-growth thresholds alpha(k,n)")]
struct Cli {
    /// Significant digits in printed values.
    #[arg(long, global = true, default_value_t = 3)]
    digits: usize,
    /// Recurrence variant (default: section3; appendix for `audit`).
    #[arg(long, global = true)]
    variant: Option<Variant>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Markdown,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// The recurrence constant C_{k,n}(i), by default i = k.
    Constants {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: Option<u32>,
    },
    /// Asymptote delta_{k,n} of h_{k,n}.
    Delta {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    /// Inverse h_{k,n}^-1(c) for c > 1.
    HInv {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: Rat,
    },
    /// gamma(c, eps, n) = 1 / (1 + (c/eps)^n).
    Gamma {
        #[arg(long)]
        c: Rat,
        #[arg(long)]
        eps: Rat,
        #[arg(long)]
        n: u32,
    },
    /// beta(k, c, n) and the maximizing term chains.
    Beta {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: Rat,
    },
    /// The limit quantity epsilon_{k,n}.
    Epsilon {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    /// Threshold alpha(k,n) = 1 - epsilon_{k,n}.
    Alpha {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        /// Use the revised table with exact overlays.
        #[arg(long)]
        revised: bool,
    },
    /// Minimize beta(k, ., n) over a grid of c values.
    Scan {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c_min: Option<Rat>,
        #[arg(long)]
        c_max: Option<Rat>,
        #[arg(long)]
        steps: Option<usize>,
        /// log, linear or inverse.
        #[arg(long)]
        spacing: Option<Spacing>,
        #[arg(long)]
        refine_decades: Option<u32>,
        /// Also compare the minimum with 1 - epsilon (k >= 2).
        #[arg(long)]
        gap: bool,
    },
    /// Check the inequality system exactly at one or more d0 values.
    Audit {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        /// Defaults to delta/10, delta/2 and 9 delta/10.
        #[arg(long)]
        d0: Vec<Rat>,
    },
    /// Build the published tables.
    Tables {
        /// One table id, or `all`.
        #[arg(long, default_value = "all")]
        table: String,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long, default_value_t = 10)]
        nmax: u32,
        /// Write one file per table here instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Usage(_) => 2,
        Error::Domain(_) => 3,
        Error::Precision { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("ricci-alpha: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// A single computed quantity in every output format.
struct Record {
    text: String,
    fields: Vec<(&'static str, Value)>,
}

impl Record {
    fn render(self, format: Format) -> String {
        match format {
            Format::Text | Format::Markdown => format!("{}\n", self.text),
            Format::Csv => {
                let head: Vec<&str> = self.fields.iter().map(|(k, _)| *k).collect();
                let row: Vec<String> = self
                    .fields
                    .iter()
                    .map(|(_, v)| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                format!("{}\n{}\n", head.join(","), row.join(","))
            }
            Format::Json => {
                let obj: serde_json::Map<String, Value> =
                    self.fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
                format!("{}\n", Value::Object(obj))
            }
        }
    }
}

fn enc_record(
    name: &'static str,
    enc: &Enc,
    digits: usize,
    one_minus: bool,
    mut fields: Vec<(&'static str, Value)>,
) -> Result<Record, Error> {
    let d = SciDec::from_enc(enc, digits, one_minus)?;
    fields.push((name, json!(d.to_string())));
    fields.push(("lo", json!(enc.lo().to_string())));
    fields.push(("hi", json!(enc.hi().to_string())));
    Ok(Record { text: d.to_string(), fields })
}

fn run(cli: &Cli) -> Result<String, Error> {
    let digits = cli.digits;
    if digits == 0 {
        return Err(Error::Usage("--digits must be at least 1".into()));
    }
    let rw = table::working_width(digits);
    let variant = cli.variant.unwrap_or(Variant::Section3);
    let kn = |k: u32, n: u32| vec![("k", json!(k)), ("n", json!(n)), ("variant", json!(variant.name()))];

    let record = match &cli.cmd {
        Cmd::Constants { k, n, i } => {
            if *k == 0 || *n == 0 {
                return Err(Error::Domain("k and n must be positive".into()));
            }
            let i = i.unwrap_or(*k);
            let c = c_kn(*k, *n, i, variant);
            let d = SciDec::from_rat(&Rat::from_int(c.clone()), digits, false)?;
            let mut fields = kn(*k, *n);
            fields.extend([("i", json!(i)), ("value", json!(d.to_string())), ("exact", json!(c.to_string()))]);
            Record { text: d.to_string(), fields }
        }
        Cmd::Delta { k, n } => enc_record("value", &delta_kn(*k, *n, variant, &rw)?, digits, false, kn(*k, *n))?,
        Cmd::HInv { k, n, c } => {
            let mut fields = kn(*k, *n);
            fields.push(("c", json!(c.to_string())));
            enc_record("value", &h_inv(*k, *n, variant, c, &rw)?, digits, false, fields)?
        }
        Cmd::Gamma { c, eps, n } => {
            let g = gamma(c, eps, *n)?;
            let d = SciDec::from_rat(&g, digits, false)?;
            Record {
                text: d.to_string(),
                fields: vec![
                    ("c", json!(c.to_string())),
                    ("eps", json!(eps.to_string())),
                    ("n", json!(n)),
                    ("value", json!(d.to_string())),
                    ("exact", json!(g.to_string())),
                ],
            }
        }
        Cmd::Beta { k, n, c } => {
            let res = beta_eval(*k, *n, c, variant, &rw)?;
            let argmax: Vec<String> = res.argmax.iter().map(|ch| ch.to_string()).collect();
            let mut fields = kn(*k, *n);
            fields.push(("c", json!(c.to_string())));
            let one_minus = SciDec::from_enc(&res.value, digits, true).is_ok();
            let mut rec = enc_record("value", &res.value, digits, one_minus, fields)?;
            rec.fields.push(("argmax", json!(argmax.join(" "))));
            rec.text = format!("{}\nargmax {}", rec.text, argmax.join(" "));
            rec
        }
        Cmd::Epsilon { k, n } => enc_record("value", &epsilon_kn(*k, *n, variant, &rw)?, digits, false, kn(*k, *n))?,
        Cmd::Alpha { k, n, revised: false } => {
            enc_record("value", &alpha_kn(*k, *n, variant, &rw)?, digits, true, kn(*k, *n))?
        }
        Cmd::Alpha { k, n, revised: true } => {
            let mut fields = kn(*k, *n);
            match alpha_revised(*k, *n, variant, &rw)? {
                RevisedAlpha::Computed(e) => enc_record("value", &e, digits, true, fields)?,
                other => {
                    let text = match other {
                        RevisedAlpha::Zero => "0",
                        RevisedAlpha::Half => "1/2",
                        _ => "-",
                    };
                    fields.push(("value", json!(text)));
                    Record { text: text.into(), fields }
                }
            }
        }
        Cmd::Scan { k, n, c_min, c_max, steps, spacing, refine_decades, gap } => {
            let base = GridSpec::default();
            let grid = GridSpec {
                c_min: c_min.clone().unwrap_or(base.c_min),
                c_max: c_max.clone().unwrap_or(base.c_max),
                steps: steps.unwrap_or(base.steps),
                spacing: spacing.unwrap_or(base.spacing),
                refine_decades: refine_decades.unwrap_or(base.refine_decades),
                rel_width: base.rel_width,
            };
            return if *gap { run_gap(cli, *k, *n, variant, &grid) } else { run_scan(cli, *k, *n, variant, &grid) };
        }
        Cmd::Audit { k, n, d0 } => {
            let variant = cli.variant.unwrap_or(Variant::Appendix);
            let samples = if d0.is_empty() {
                default_d0_samples(&delta_kn(*k, *n, variant, &rw)?).to_vec()
            } else {
                d0.clone()
            };
            let mut out = String::new();
            let mut json_reports = Vec::new();
            for d in &samples {
                let report = audit(*k, *n, variant, d)?;
                match cli.format {
                    Format::Csv => out.push_str(&report.to_csv()),
                    Format::Json => json_reports.push(json!({
                        "k": k, "n": n, "variant": variant.name(), "d0": d.to_string(),
                        "all_pass": report.all_pass(),
                        "records": report.records.iter().map(|r| json!({
                            "check": r.check.name(), "i": r.index, "relation": r.relation.symbol(),
                            "left": r.left.to_string(), "right": r.right.to_string(), "holds": r.holds,
                        })).collect::<Vec<_>>(),
                    })),
                    _ => out.push_str(&report.to_text()),
                }
            }
            if cli.format == Format::Json {
                out = format!("{}\n", Value::Array(json_reports));
            }
            return Ok(out);
        }
        Cmd::Tables { table: which, kmax, nmax, out_dir } => {
            return run_tables(cli, which, *kmax, *nmax, variant, out_dir.as_ref());
        }
    };
    Ok(record.render(cli.format))
}

fn run_scan(cli: &Cli, k: u32, n: u32, variant: Variant, grid: &GridSpec) -> Result<String, Error> {
    let res = scan(k, n, variant, grid)?;
    if let Some(w) = &res.warning {
        eprintln!("warning: {w}");
    }
    let best = render_beta(&res.best_beta.midpoint(), cli.digits)?;
    Ok(match cli.format {
        Format::Csv => res.profile_csv(cli.digits)?,
        Format::Json => {
            let profile: Vec<Value> = res
                .profile
                .iter()
                .map(|p| json!({ "c": p.c.to_string(), "beta_lo": p.beta.lo().to_string(), "beta_hi": p.beta.hi().to_string() }))
                .collect();
            format!(
                "{}\n",
                json!({
                    "k": k, "n": n, "variant": variant.name(),
                    "best_c": res.best_c.to_string(), "best_beta": best.to_string(),
                    "warning": res.warning, "profile": profile,
                })
            )
        }
        _ => format!(
            "best c {}\nbest beta {}\n",
            SciDec::from_rat(&res.best_c, cli.digits, false)?,
            best
        ),
    })
}

fn run_gap(cli: &Cli, k: u32, n: u32, variant: Variant, grid: &GridSpec) -> Result<String, Error> {
    let g = gap_report_with(k, n, variant, grid)?;
    let digits = cli.digits;
    let inf = render_beta(&g.inf_estimate.midpoint(), digits)?;
    let ome = SciDec::from_rat(&g.one_minus_epsilon.midpoint(), digits, true)?;
    let rel = SciDec::from_rat(&g.relative_gap.midpoint(), digits, false)?;
    let best_c = SciDec::from_rat(&g.best_c, digits, false)?;
    let rec = Record {
        text: format!(
            "best c {best_c}\ninf estimate {inf}\n1 - epsilon {ome}\nrelative gap {rel}\ncertified inf >= 1 - epsilon: {}",
            g.certified
        ),
        fields: vec![
            ("k", json!(k)),
            ("n", json!(n)),
            ("variant", json!(variant.name())),
            ("best_c", json!(best_c.to_string())),
            ("inf_estimate", json!(inf.to_string())),
            ("one_minus_epsilon", json!(ome.to_string())),
            ("relative_gap", json!(rel.to_string())),
            ("certified", json!(g.certified)),
        ],
    };
    Ok(rec.render(cli.format))
}

fn run_tables(
    cli: &Cli,
    which: &str,
    kmax: u32,
    nmax: u32,
    variant: Variant,
    out_dir: Option<&PathBuf>,
) -> Result<String, Error> {
    let ids: Vec<TableId> = if which == "all" { TableId::ALL.to_vec() } else { vec![which.parse()?] };
    let (format, ext) = match cli.format {
        Format::Csv => (table::Format::Csv, "csv"),
        Format::Json => (table::Format::Json, "json"),
        Format::Text | Format::Markdown => (table::Format::Markdown, "md"),
    };
    let mut out = String::new();
    for (idx, id) in ids.iter().enumerate() {
        let doc = make_table(*id, kmax, nmax, variant, cli.digits)?;
        let text = table::render(&doc, format);
        match out_dir {
            Some(dir) => {
                let path = dir.join(format!("{}.{ext}", id.name()));
                fs::create_dir_all(dir)
                    .and_then(|_| fs::write(&path, &text))
                    .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
                out.push_str(&format!("{}\n", path.display()));
            }
            None => {
                if idx > 0 {
                    out.push('\n');
                }
                if ids.len() > 1 && format == table::Format::Csv {
                    out.push_str(&format!("# {}\n", id.name()));
                }
                out.push_str(&text);
            }
        }
    }
    Ok(out)
}
