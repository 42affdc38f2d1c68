use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use reinhardt::construct::{
    construct_sporadic, decompose, factorization_grids, has_trivial_decomposition, SubsetPolicy,
};
use reinhardt::enumerate::{enumerate_cached, EnumerationResult, DEFAULT_BUDGET};
use reinhardt::geometry::{closure_residual, realize, render_svg, Layers, SvgStyle};
use reinhardt::{classify, periodic_count, Composition, IntPolynomial, PolygonRealization, SearchConfig};
use serde::Serialize;

mod tables;

#[derive(Parser, Debug)]
#[command(name = "reinhardt", version, about = "Enumerate, construct and draw Reinhardt polygons")]
struct Cli {
    /// Directory holding enumeration caches.
    #[arg(long, global = true, env = "REINHARDT_CACHE_DIR", default_value = "./.reinhardt-cache")]
    cache_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Search node budget for enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every Reinhardt n-gon with its classification.
    Enumerate {
        n: usize,
        /// Neither read nor write the cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Count Reinhardt n-gons, cross-checked against the periodic formula.
    Count {
        n: usize,
        #[arg(long)]
        no_cache: bool,
        /// Also break the counts down by largest part.
        #[arg(long)]
        by_largest_part: bool,
    },
    /// Test a composition for the Reinhardt property and classify it.
    Classify {
        #[arg(value_parser = parse_composition)]
        composition: Composition,
    },
    /// Build sporadic polygons from (p, q, r) grids.
    Construct {
        n: u64,
        #[arg(long, requires_all = ["q", "r"])]
        p: Option<u64>,
        #[arg(long, requires_all = ["p", "r"])]
        q: Option<u64>,
        #[arg(long, requires_all = ["p", "q"])]
        r: Option<u64>,
        /// Use every factorization of n (the default without --p/--q/--r).
        #[arg(long, conflicts_with = "p")]
        all_factorizations: bool,
        /// Restrict to subsets S containing 0.
        #[arg(long)]
        require_zero_in_s: bool,
        /// Print counts only.
        #[arg(long)]
        count_only: bool,
    },
    /// Split a Reinhardt polynomial of degree below pq into tri-valued parts.
    Decompose {
        #[arg(value_parser = parse_composition)]
        composition: Composition,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Draw a Reinhardt polygon as SVG.
    Render {
        #[arg(value_parser = parse_composition)]
        composition: Composition,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "polygon")]
        layers: Vec<Layer>,
        #[arg(long, default_value_t = 512.0)]
        size: f64,
        #[arg(long, default_value_t = 1.5)]
        stroke_width: f64,
    },
    /// Recompute the feasible entries of the published count tables.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        /// Skip construction when a row needs more raw polynomials than this.
        #[arg(long, default_value_t = 1 << 25)]
        max_raw: u64,
        /// Table 2 only: run the construction for these largest parts.
        #[arg(long, value_delimiter = ',')]
        compute_parts: Vec<usize>,
    },
    /// Expand run-length notation to a plain composition.
    Expand {
        #[arg(value_parser = parse_composition)]
        text: Composition,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Layer {
    Polygon,
    Chords,
    Arcs,
}

fn parse_composition(s: &str) -> Result<Composition, String> {
    s.parse().map_err(|e: reinhardt::CompositionError| e.to_string())
}

struct Ctx {
    format: Format,
    config: SearchConfig,
    cache_dir: PathBuf,
}

impl Ctx {
    fn threads(&self) -> Option<usize> {
        self.config.threads
    }

    fn enumerate(&self, n: usize, no_cache: bool) -> Result<EnumerationResult> {
        let cache = (!no_cache).then_some(self.cache_dir.as_path());
        Ok(enumerate_cached(n, &self.config, cache)?)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let ctx = Ctx {
        format: cli.format,
        config: SearchConfig {
            budget: cli.budget,
            threads: cli.threads.map(usize::from),
        },
        cache_dir: cli.cache_dir,
    };
    let mut out = io::stdout().lock();
    match run(&ctx, cli.command, &mut out).and_then(|()| Ok(out.flush()?)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(ctx: &Ctx, command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Enumerate { n, no_cache } => cmd_enumerate(ctx, n, no_cache, out),
        Command::Count {
            n,
            no_cache,
            by_largest_part,
        } => cmd_count(ctx, n, no_cache, by_largest_part, out),
        Command::Classify { composition } => cmd_classify(ctx, &composition, out),
        Command::Construct {
            n,
            p,
            q,
            r,
            all_factorizations: _,
            require_zero_in_s,
            count_only,
        } => {
            let grid = p.zip(q).zip(r).map(|((p, q), r)| (p, q, r));
            cmd_construct(ctx, n, grid, require_zero_in_s, count_only, out)
        }
        Command::Decompose { composition, p, q } => cmd_decompose(ctx, &composition, p, q, out),
        Command::Render {
            composition,
            output,
            layers,
            size,
            stroke_width,
        } => cmd_render(&composition, &output, &layers, size, stroke_width, out),
        Command::Tables {
            table: 1,
            max_raw,
            ..
        } => tables::table1(ctx, max_raw, out),
        Command::Tables { compute_parts, .. } => tables::table2(ctx, &compute_parts, out),
        Command::Expand { text } => {
            writeln!(out, "{}", json_or_text(ctx.format, &text)?)?;
            Ok(())
        }
    }
}

fn json_or_text(format: Format, c: &Composition) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string(c)?,
        _ => c.to_string(),
    })
}

fn periods_text(periods: &[usize]) -> String {
    periods.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

#[derive(Serialize)]
struct EnumerateJson<'a> {
    n: usize,
    #[serde(rename = "E")]
    total: u64,
    #[serde(rename = "E0")]
    periodic: u64,
    #[serde(rename = "E1")]
    sporadic: u64,
    polygons: &'a [reinhardt::enumerate::Polygon],
}

fn cmd_enumerate(ctx: &Ctx, n: usize, no_cache: bool, out: &mut impl Write) -> Result<()> {
    let result = ctx.enumerate(n, no_cache)?;
    let counts = result.counts();
    match ctx.format {
        Format::Json => {
            let doc = EnumerateJson {
                n,
                total: counts.total,
                periodic: counts.periodic,
                sporadic: counts.sporadic,
                polygons: &result.polygons,
            };
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["composition", "classification", "periods"])?;
            for p in &result.polygons {
                w.write_record([
                    p.composition.to_string(),
                    p.classification.kind().to_string(),
                    periods_text(p.classification.periods()),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for p in &result.polygons {
                match p.classification.periods() {
                    [] => writeln!(out, "{}  {}", p.composition, p.classification.kind())?,
                    d => writeln!(out, "{}  periodic ({})", p.composition, periods_text(d))?,
                }
            }
            writeln!(out, "n = {n}: E = {}, E0 = {}, E1 = {}", counts.total, counts.periodic, counts.sporadic)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CountJson {
    n: usize,
    #[serde(rename = "E")]
    total: u64,
    #[serde(rename = "E0")]
    periodic: u64,
    #[serde(rename = "E1")]
    sporadic: u64,
    #[serde(rename = "E0_formula")]
    periodic_formula: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    by_largest_part: Option<Vec<reinhardt::enumerate::LargestPartRow>>,
}

fn cmd_count(ctx: &Ctx, n: usize, no_cache: bool, by_part: bool, out: &mut impl Write) -> Result<()> {
    let result = ctx.enumerate(n, no_cache)?;
    let counts = result.counts();
    let formula: u64 = periodic_count(n as u64)?.try_into().context("periodic count overflows u64")?;
    if formula != counts.periodic {
        bail!(
            "enumerated E0 = {} disagrees with the periodic formula {formula} for n = {n}",
            counts.periodic
        );
    }
    let rows = by_part.then(|| result.by_largest_part());
    match ctx.format {
        Format::Json => {
            let doc = CountJson {
                n,
                total: counts.total,
                periodic: counts.periodic,
                sporadic: counts.sporadic,
                periodic_formula: formula,
                by_largest_part: rows,
            };
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            match rows {
                None => {
                    w.write_record(["n", "E", "E0", "E1", "E0_formula"])?;
                    w.serialize((n, counts.total, counts.periodic, counts.sporadic, formula))?;
                }
                Some(rows) => {
                    w.write_record(["n", "largest_part", "E", "E1"])?;
                    for row in rows {
                        w.serialize((n, row.largest_part, row.total, row.sporadic))?;
                    }
                }
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "n = {n}: E = {}, E0 = {} (formula {formula}), E1 = {}",
                counts.total, counts.periodic, counts.sporadic
            )?;
            for row in rows.unwrap_or_default() {
                writeln!(out, "  largest part {:>3}: E = {}, E1 = {}", row.largest_part, row.total, row.sporadic)?;
            }
        }
    }
    Ok(())
}

fn residual_3sig(c: &Composition) -> (String, f64) {
    let text = format!("{:.2e}", closure_residual::<f64>(c));
    let value = text.parse().expect("formatted float parses");
    (text, value)
}

#[derive(Serialize)]
struct ClassifyJson {
    composition: Composition,
    n: usize,
    reinhardt: bool,
    classification: Option<&'static str>,
    periods: Vec<usize>,
    closure_residual: f64,
}

fn cmd_classify(ctx: &Ctx, c: &Composition, out: &mut impl Write) -> Result<()> {
    let class = classify(c).ok();
    let (residual_text, residual) = residual_3sig(c);
    let doc = ClassifyJson {
        composition: c.clone(),
        n: c.n(),
        reinhardt: class.is_some(),
        classification: class.as_ref().map(|k| k.kind()),
        periods: class.as_ref().map(|k| k.periods().to_vec()).unwrap_or_default(),
        closure_residual: residual,
    };
    match ctx.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&doc)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["composition", "n", "reinhardt", "classification", "periods", "closure_residual"])?;
            w.write_record([
                c.to_string(),
                c.n().to_string(),
                doc.reinhardt.to_string(),
                doc.classification.unwrap_or("").to_string(),
                periods_text(&doc.periods),
                residual_text,
            ])?;
            w.flush()?;
        }
        Format::Text => {
            write!(out, "{c} (n = {}): ", c.n())?;
            match &class {
                None => writeln!(out, "not Reinhardt")?,
                Some(k) if k.is_sporadic() => writeln!(out, "Reinhardt, sporadic")?,
                Some(k) => writeln!(out, "Reinhardt, periodic with periods {}", periods_text(k.periods()))?,
            }
            writeln!(out, "closure residual {residual_text}")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstructJson {
    n: u64,
    #[serde(rename = "C")]
    sporadic_count: u64,
    grids: Vec<reinhardt::construct::GridReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sporadic: Option<Vec<Composition>>,
}

fn cmd_construct(
    ctx: &Ctx,
    n: u64,
    grid: Option<(u64, u64, u64)>,
    zero: bool,
    count_only: bool,
    out: &mut impl Write,
) -> Result<()> {
    if let Some((p, q, r)) = grid {
        if p * q * r != n {
            bail!("p q r = {} does not equal n = {n}", p * q * r);
        }
    }
    let grids: Vec<_> = grid.map_or_else(|| factorization_grids(n), |g| vec![g]);
    let policy = if zero {
        SubsetPolicy::ContainsZero
    } else {
        SubsetPolicy::AllNontrivial
    };
    let result = construct_sporadic(n, Some(&grids), &policy, ctx.threads())?;
    let count = result.sporadic.len() as u64;
    match ctx.format {
        Format::Json => {
            let doc = ConstructJson {
                n,
                sporadic_count: count,
                grids: result.grids,
                sporadic: (!count_only).then(|| result.sporadic.iter().collect()),
            };
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if count_only {
                w.write_record(["n", "C"])?;
                w.serialize((n, count))?;
            } else {
                w.write_record(["composition", "largest_part"])?;
                for c in result.sporadic.iter() {
                    w.write_record([c.to_string(), c.largest_part().to_string()])?;
                }
            }
            w.flush()?;
        }
        Format::Text => {
            for g in &result.grids {
                writeln!(
                    out,
                    "grid ({}, {}, {}): raw {}, periodic {}, sporadic {}",
                    g.p,
                    g.q,
                    g.r,
                    g.raw,
                    g.periodic,
                    g.sporadic.map_or("-".into(), |s| s.to_string())
                )?;
            }
            if !count_only {
                for c in result.sporadic.iter() {
                    writeln!(out, "{c}")?;
                }
            }
            writeln!(out, "C({n}) = {count}")?;
        }
    }
    Ok(())
}

fn coeffs(f: &IntPolynomial, len: usize) -> Vec<i64> {
    (0..len)
        .map(|i| i64::try_from(f.coeff(i)).expect("tri-valued coefficient"))
        .collect()
}

#[derive(Serialize)]
struct DecomposeJson {
    composition: Composition,
    p: u64,
    q: u64,
    f1: Vec<i64>,
    f2: Vec<i64>,
    trivial: bool,
    p_side: bool,
    q_side: bool,
}

fn cmd_decompose(ctx: &Ctx, c: &Composition, p: u64, q: u64, out: &mut impl Write) -> Result<()> {
    let v = c.to_sign_vector();
    let d = decompose(&v, p, q)?;
    let sides = has_trivial_decomposition(&v, p, q)?;
    let doc = DecomposeJson {
        composition: c.clone(),
        p,
        q,
        f1: coeffs(&d.f1, q as usize),
        f2: coeffs(&d.f2, p as usize),
        trivial: d.trivial,
        p_side: sides.p_side,
        q_side: sides.q_side,
    };
    let signs = |v: &[i64]| {
        v.iter()
            .map(|&c| match c {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect::<String>()
    };
    match ctx.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&doc)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["composition", "p", "q", "f1", "f2", "trivial", "p_side", "q_side"])?;
            w.write_record([
                c.to_string(),
                p.to_string(),
                q.to_string(),
                signs(&doc.f1),
                signs(&doc.f2),
                doc.trivial.to_string(),
                doc.p_side.to_string(),
                doc.q_side.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "f1 = {}", signs(&doc.f1))?;
            writeln!(out, "f2 = {}", signs(&doc.f2))?;
            writeln!(
                out,
                "trivial: {} (Phi_p(-z^q) divides F: {}, Phi_q(-z^p) divides F: {})",
                doc.trivial, doc.p_side, doc.q_side
            )?;
        }
    }
    Ok(())
}

fn cmd_render(
    c: &Composition,
    path: &Path,
    layers: &[Layer],
    size: f64,
    stroke_width: f64,
    out: &mut impl Write,
) -> Result<()> {
    if !c.is_reinhardt() {
        bail!("{c} is not a Reinhardt composition");
    }
    if !(size > 0.0 && size.is_finite() && stroke_width >= 0.0 && stroke_width.is_finite()) {
        bail!("size must be positive and stroke width non-negative");
    }
    let style = SvgStyle {
        size,
        stroke_width,
        layers: Layers {
            polygon: layers.contains(&Layer::Polygon),
            chords: layers.contains(&Layer::Chords),
            arcs: layers.contains(&Layer::Arcs),
        },
        ..SvgStyle::default()
    };
    let rz: PolygonRealization = realize(c);
    let svg = render_svg(&rz, &style)?;
    std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}
