use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ssp_core::class_numbers::{unit_image_double_cosets, UnitImage, UnitTarget};
use ssp_core::counting::{
    is_computed, o_value, ssp2_total, CountResult, FixtureTable, Provenance, TotalReport, COLUMNS, PRIMES,
};
use ssp_core::cyclotomic::NBar;
use ssp_core::linalg::Q;
use ssp_core::local_orders::DEFAULT_PRECISION;
use ssp_core::quaternion::{hilbert_symbol, maximal_order, unit_group, Place};
use ssp_core::Error;

const SCHEMA_VERSION: &str = "1";

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ssp", about = "Conjugacy classes of finite-order elements in GL2 of maximal quaternion orders")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Markdown, global = true)]
    format: Format,
    /// p-adic working precision for local computations.
    #[arg(long, default_value_t = DEFAULT_PRECISION, global = true)]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Markdown,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// o values for p = 2, 3, 5 and the totals.
    Table,
    /// One o value, computed where possible and quoted otherwise.
    Count {
        #[arg(long)]
        case: String,
        #[arg(long)]
        p: u32,
    },
    /// Recompute one case and compare with the expected value.
    Verify {
        #[arg(long)]
        case: String,
        #[arg(long)]
        p: u32,
        /// Override the expected value.
        #[arg(long)]
        expect: Option<u64>,
    },
    /// Unit group of the maximal order and its finite images.
    Units {
        #[arg(long)]
        p: u32,
    },
    /// Hilbert symbol (a, b)_v.
    Hilbert {
        #[arg(allow_negative_numbers = true)]
        a: String,
        #[arg(allow_negative_numbers = true)]
        b: String,
        place: String,
    },
}

#[derive(Serialize)]
struct Tagged<T: Serialize> {
    value: T,
    provenance: Provenance,
}

fn computed<T: Serialize>(value: T) -> Tagged<T> {
    Tagged { value, provenance: Provenance::Computed }
}

struct Output {
    json: Value,
    markdown: String,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let echo: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => {
                    let mut doc = serde_json::Map::new();
                    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
                    doc.insert("command".into(), json!(echo));
                    doc.insert("precision".into(), json!(cli.precision));
                    doc.insert("result".into(), out.json);
                    serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable") + "\n"
                }
                Format::Markdown => out.markdown,
            };
            // a closed pipe is not worth a panic
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("ssp: {e}");
            ExitCode::from(match e {
                Error::Usage(_) => EXIT_USAGE,
                _ => EXIT_INTERNAL,
            })
        }
    }
}

fn run(cli: &Cli) -> ssp_core::Result<Output> {
    let k = cli.precision;
    if k < 2 {
        return Err(Error::Usage("--precision must be at least 2".into()));
    }
    match &cli.command {
        Command::Table => table(k),
        Command::Count { case, p } => count(case.parse()?, *p, k),
        Command::Verify { case, p, expect } => verify(case.parse()?, *p, *expect, k),
        Command::Units { p } => units(*p),
        Command::Hilbert { a, b, place } => hilbert(a, b, place),
    }
}

fn to_value<T: Serialize>(x: &T) -> ssp_core::Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Internal(format!("serialization: {e}")))
}

fn table(k: u32) -> ssp_core::Result<Output> {
    let reports: Vec<TotalReport> = std::thread::scope(|s| {
        let handles: Vec<_> = PRIMES.iter().map(|&p| s.spawn(move || ssp2_total(p, k))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Internal("worker panicked".into()))))
            .collect::<ssp_core::Result<Vec<_>>>()
    })?;

    let mut md = String::from("| p |");
    for c in COLUMNS {
        write!(md, " o{} |", paren(c)).unwrap();
    }
    md.push_str(" total |\n|---|");
    md.push_str(&"---|".repeat(COLUMNS.len() + 1));
    md.push('\n');
    for r in &reports {
        write!(md, "| {} |", r.p).unwrap();
        for c in &r.columns {
            let mark = if c.provenance == Provenance::Computed { "" } else { "*" };
            write!(md, " {}{} |", c.o, mark).unwrap();
        }
        writeln!(md, " {} |", r.total).unwrap();
    }
    md.push_str("\n`*` fixture:concluding-table; all other entries computed.\n");

    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "p": r.p,
                "constant_term": { "value": r.constant_term, "provenance": "computed" },
                "columns": r.columns.iter().map(|c| json!({
                    "case": c.case,
                    "weight": { "value": c.weight, "provenance": "computed" },
                    "o": { "value": c.o, "provenance": c.provenance },
                    "table_value": { "value": c.table_value, "provenance": Provenance::FixtureConcludingTable },
                })).collect::<Vec<_>>(),
                "total": { "value": r.total, "provenance": "computed" },
            })
        })
        .collect();
    let totals: serde_json::Map<String, Value> =
        reports.iter().map(|r| (r.p.to_string(), to_value(&computed(r.total)).unwrap())).collect();
    Ok(Output { json: json!({ "command": "table", "rows": rows, "totals": totals }), markdown: md, exit: 0 })
}

fn paren(c: NBar) -> String {
    match c {
        NBar::Single(n) => format!("({n})"),
        pair => pair.to_string(),
    }
}

fn count_markdown(r: &CountResult) -> String {
    let mut md = format!("o{} at p = {}: **{}** ({})\n", paren(r.case), r.p, r.o, r.provenance.tag());
    if !r.local_classes.is_empty() {
        md.push_str("\n| prime | classes |\n|---|---|\n");
        for l in &r.local_classes {
            let names: Vec<&str> = l.classes.iter().map(|c| c.name.as_str()).collect();
            writeln!(md, "| {} | {} |", l.key.ell, names.join(", ")).unwrap();
        }
    }
    if !r.genera.is_empty() {
        md.push_str("\n| genus | h | justification |\n|---|---|---|\n");
        for g in &r.genera {
            let names: Vec<&str> = g.classes.iter().map(|c| c.name.as_str()).collect();
            writeln!(md, "| {} | {} | {:?} |", names.join(" ; "), g.h, g.justification).unwrap();
        }
    }
    md.push('\n');
    for t in &r.trace {
        writeln!(md, "- {t}").unwrap();
    }
    md
}

fn count_json(r: &CountResult) -> ssp_core::Result<Value> {
    Ok(json!({
        "case": r.case,
        "p": r.p,
        "o": { "value": r.o, "provenance": r.provenance },
        "local_classes": to_value(&r.local_classes)?,
        "genera": to_value(&r.genera)?,
        "trace": r.trace,
    }))
}

fn count(case: NBar, p: u32, k: u32) -> ssp_core::Result<Output> {
    let r = o_value(case, p, k)?;
    let mut json = count_json(&r)?;
    json["command"] = json!("count");
    Ok(Output { json, markdown: count_markdown(&r), exit: 0 })
}

fn verify(case: NBar, p: u32, expect: Option<u64>, k: u32) -> ssp_core::Result<Output> {
    if !is_computed(case, p) {
        return Err(Error::Usage(format!("o{} at p = {p} is not a computed case", paren(case))));
    }
    let r = o_value(case, p, k)?;
    let (expected, source) = match expect {
        Some(v) => (v, "command-line"),
        None => (FixtureTable::concluding().get(case, p)?.o, Provenance::FixtureConcludingTable.tag()),
    };
    let ok = r.o == expected;
    let mut md = count_markdown(&r);
    if ok {
        writeln!(md, "\nmatch: expected {expected} ({source})").unwrap();
    } else {
        writeln!(md, "\nMISMATCH: computed {} but expected {expected} ({source})", r.o).unwrap();
    }
    let mut json = count_json(&r)?;
    json["command"] = json!("verify");
    json["expected"] = json!({ "value": expected, "provenance": source });
    json["match"] = json!(ok);
    Ok(Output { json, markdown: md, exit: if ok { 0 } else { EXIT_MISMATCH } })
}

fn units(p: u32) -> ssp_core::Result<Output> {
    if !PRIMES.contains(&p) {
        return Err(Error::Usage(format!("units: p = {p} is outside 2, 3, 5")));
    }
    let o = maximal_order(p)?;
    let list: Vec<String> = unit_group(&o)?.iter().map(|u| o.algebra.format(u)).collect();
    let mut images = vec![];
    if p == 2 {
        images.push(unit_image_double_cosets(p, UnitTarget::ModTwo)?);
    }
    images.push(unit_image_double_cosets(p, UnitTarget::ResidueField)?);

    let mut md = format!("|O^x| = {} for the maximal order ramified at {{{p}, inf}}\n\n", list.len());
    writeln!(md, "units: {}\n", list.join(", ")).unwrap();
    md.push_str("| target | |target| | |image| | index | surjective | kernel |\n|---|---|---|---|---|---|\n");
    for im in &images {
        writeln!(
            md,
            "| {} | {} | {} | {} | {} | {} |",
            target_name(im),
            im.target_order,
            im.image_order,
            im.cosets,
            im.is_surjective(),
            im.kernel.join(", ")
        )
        .unwrap();
    }
    let images_json: Vec<Value> = images
        .iter()
        .map(|im| {
            json!({
                "target": target_name(im),
                "target_order": computed(im.target_order),
                "image_order": computed(im.image_order),
                "index": computed(im.cosets),
                "double_cosets": computed(im.double_cosets),
                "surjective": im.is_surjective(),
                "kernel": im.kernel,
            })
        })
        .collect();
    let json = json!({
        "command": "units",
        "p": p,
        "order": computed(list.len()),
        "units": list,
        "images": images_json,
    });
    Ok(Output { json, markdown: md, exit: 0 })
}

fn target_name(im: &UnitImage) -> String {
    match im.target {
        UnitTarget::ModTwo => "(O/2O)^x".into(),
        UnitTarget::ResidueField => format!("F_{}^x", im.p * im.p),
        UnitTarget::ModInteger(m) => format!("(O/{m}O)^x"),
    }
}

fn hilbert(a: &str, b: &str, place: &str) -> ssp_core::Result<Output> {
    let parse = |s: &str| s.parse::<Q>().map_err(|_| Error::Usage(format!("cannot parse rational {s:?}")));
    let (qa, qb) = (parse(a)?, parse(b)?);
    let v: Place = place.parse()?;
    let s = hilbert_symbol(&qa, &qb, v)?;
    let md = format!("({qa}, {qb})_{v} = {s}\n");
    let json = json!({
        "command": "hilbert",
        "a": qa.to_string(),
        "b": qb.to_string(),
        "place": v,
        "symbol": computed(s),
    });
    Ok(Output { json, markdown: md, exit: 0 })
}
