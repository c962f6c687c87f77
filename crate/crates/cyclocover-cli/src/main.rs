//! Command-line front end: compute a single Newton polygon, print the full
//! table for one `m`, search ranges of `m`, or verify the Shimura–Taniyama
//! result against the point-counting oracle.
//!
//! Exit codes: 0 success / agreement, 1 oracle mismatch, 2 invalid
//! monodromy datum, 3 bad characteristic (p | m or a non-unit class),
//! 4 budget exceeded. Diagnostics go to stderr, data to stdout.

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cyclocover::arith;
use cyclocover::monodromy::MonodromyDatum;
use cyclocover::polygon::{parse_label, NewtonPolygon};
use cyclocover::shimura;
use cyclocover::survey::{self, PolygonQuery, SearchOptions};
use cyclocover::zeta::{self, ZetaError, DEFAULT_BUDGET};

mod render;

const EXIT_MISMATCH: u8 = 1;
const EXIT_BAD_DATUM: u8 = 2;
const EXIT_BAD_CHAR: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cyclocover",
    about = "Newton polygons of cyclic covers of the projective line branched at three points",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon of one curve at one prime, class, or subgroup
    Compute(ComputeArgs),
    /// Full table for one m: rows are inertia types, columns congruence classes
    Table(TableArgs),
    /// Search a range of m for supersingular or prescribed polygons
    Search(SearchArgs),
    /// Check the Shimura-Taniyama polygon against the point-counting oracle
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DatumArgs {
    /// Degree m of the cover
    #[arg(long)]
    m: u64,
    /// Inertia type as three comma-separated integers, e.g. 1,1,9
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Vec<i64>,
}

impl DatumArgs {
    fn datum(&self) -> Result<MonodromyDatum, ExitCode> {
        if self.a.len() != 3 {
            eprintln!("error: --a takes exactly three integers, got {}", self.a.len());
            return Err(ExitCode::from(EXIT_BAD_DATUM));
        }
        let a = [self.a[0], self.a[1], self.a[2]];
        match MonodromyDatum::new(self.m, a) {
            Ok(d) => {
                let typed: Vec<i64> = d.a().iter().map(|&x| x as i64).collect();
                if typed != self.a {
                    eprintln!(
                        "note: inertia type {:?} normalized to {:?} mod {}",
                        self.a,
                        d.a(),
                        self.m
                    );
                }
                Ok(d)
            }
            Err(e) => {
                eprintln!("error: invalid monodromy datum: {e}");
                Err(ExitCode::from(EXIT_BAD_DATUM))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComputeFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    datum: DatumArgs,
    /// Prime of reduction
    #[arg(long, conflicts_with_all = ["class", "subgroup"])]
    p: Option<u64>,
    /// Congruence class: any prime ≡ r mod m
    #[arg(long, conflicts_with = "subgroup")]
    class: Option<u64>,
    /// Subgroup of units mod m, comma-separated members
    #[arg(long, value_delimiter = ',')]
    subgroup: Option<Vec<u64>>,
    /// Also print the per-orbit slope reports
    #[arg(long)]
    orbits: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: ComputeFormat,
    /// Join polygon factors with "+" instead of "⊕"
    #[arg(long)]
    ascii: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
    Json,
}

#[derive(Args)]
struct TableArgs {
    /// Degree m of the cover
    #[arg(long)]
    m: u64,
    #[arg(long, value_enum, default_value = "md")]
    format: TableFormat,
    /// Join polygon factors with "+" instead of "⊕"
    #[arg(long)]
    ascii: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    m_min: u64,
    #[arg(long)]
    m_max: u64,
    /// Find classes where the polygon is ss^g
    #[arg(long, conflicts_with_all = ["polygon", "prank0"])]
    supersingular: bool,
    /// Find classes realizing this exact polygon label
    #[arg(long, conflicts_with = "prank0")]
    polygon: Option<String>,
    /// Find classes where the polygon has p-rank 0
    #[arg(long)]
    prank0: bool,
    /// Report congruences modulo the smallest divisor of m that works
    #[arg(long)]
    compress_congruences: bool,
    /// Drop the residue class of 2 (statements restricted to odd p)
    #[arg(long)]
    odd_p: bool,
    /// Join polygon factors with "+" instead of "⊕"
    #[arg(long)]
    ascii: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    datum: DatumArgs,
    /// Prime of reduction
    #[arg(long)]
    p: u64,
    /// Cap on point-counting work (sum of p^k over k = 1..g)
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Join polygon factors with "+" instead of "⊕"
    #[arg(long)]
    ascii: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Table(args) => cmd_table(args),
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
    }
    .unwrap_or_else(|code| code)
}

fn label_of(poly: &NewtonPolygon, ascii: bool) -> String {
    if ascii {
        poly.label_ascii()
    } else {
        poly.label()
    }
}

fn slope_json(poly: &NewtonPolygon) -> serde_json::Value {
    json!(poly
        .entries()
        .iter()
        .map(|&(s, mult)| json!({ "num": *s.numer(), "den": *s.denom(), "mult": mult }))
        .collect::<Vec<_>>())
}

fn record_json(
    datum: &MonodromyDatum,
    classes: &[u64],
    poly: &NewtonPolygon,
    ascii: bool,
) -> serde_json::Value {
    json!({
        "m": datum.m(),
        "a": datum.a(),
        "classes": classes,
        "slopes": slope_json(poly),
        "p_rank": poly.p_rank(),
        "supersingular": poly.is_supersingular(),
        "label": label_of(poly, ascii),
    })
}

fn cmd_compute(args: ComputeArgs) -> Result<ExitCode, ExitCode> {
    let datum = args.datum.datum()?;
    let m = datum.m();
    let bad_char = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_BAD_CHAR)
    };

    let (classes, reports): (Vec<u64>, Vec<shimura::OrbitSlopeReport>) =
        if let Some(p) = args.p {
            let reports = shimura::orbit_slopes(&datum, p)
                .map_err(|e| bad_char(format!("{e}")))?;
            (vec![p % m], reports)
        } else if let Some(r) = args.class {
            let reports = shimura::orbit_slopes_for_generator(&datum, r)
                .map_err(|e| bad_char(format!("{e}")))?;
            (vec![r % m], reports)
        } else if let Some(members) = &args.subgroup {
            let subgroup: BTreeSet<u64> = members.iter().map(|&r| r % m).collect();
            // reuse the subgroup entry point for its cyclicity check
            shimura::newton_polygon_for_subgroup(&datum, &subgroup)
                .map_err(|e| bad_char(format!("{e}")))?;
            let generator = subgroup
                .iter()
                .copied()
                .find(|&h| {
                    arith::subgroup_generated(m, h).map_or(false, |g| g == subgroup)
                })
                .expect("checked cyclic above");
            let reports = shimura::orbit_slopes_for_generator(&datum, generator)
                .map_err(|e| bad_char(format!("{e}")))?;
            (subgroup.iter().copied().collect(), reports)
        } else {
            eprintln!("error: one of --p, --class, --subgroup is required");
            return Err(ExitCode::from(EXIT_BAD_CHAR));
        };

    let poly = NewtonPolygon::amalgamate(
        reports
            .iter()
            .filter(|r| !r.excluded)
            .map(|r| r.polygon())
            .collect::<Vec<_>>()
            .iter(),
    );

    match args.format {
        ComputeFormat::Json => {
            let mut record = record_json(&datum, &classes, &poly, args.ascii);
            if args.orbits {
                record["orbits"] = json!(reports
                    .iter()
                    .map(|r| json!({
                        "members": r.orbit.members().iter().collect::<Vec<_>>(),
                        "order": r.orbit.order(),
                        "self_dual": r.orbit.self_dual(),
                        "alpha": r.alpha,
                        "beta": r.beta,
                        "slope": { "num": *r.slope.numer(), "den": *r.slope.denom() },
                        "excluded": r.excluded,
                    }))
                    .collect::<Vec<_>>());
            }
            println!("{}", serde_json::to_string_pretty(&record).expect("valid json"));
        }
        ComputeFormat::Text => {
            println!(
                "m={} a=({},{},{}) classes={:?} genus={}",
                m,
                datum.a()[0],
                datum.a()[1],
                datum.a()[2],
                classes,
                datum.genus()
            );
            println!(
                "polygon: {}  (p-rank {}, supersingular: {})",
                label_of(&poly, args.ascii),
                poly.p_rank(),
                poly.is_supersingular()
            );
            if args.orbits {
                for r in &reports {
                    let members: Vec<String> =
                        r.orbit.members().iter().map(|n| n.to_string()).collect();
                    if r.excluded {
                        println!(
                            "orbit ({}) d={}: excluded",
                            members.join(","),
                            r.orbit.order()
                        );
                    } else {
                        println!(
                            "orbit ({}) d={}: alpha={} beta={} slope={} self-dual={}",
                            members.join(","),
                            r.orbit.order(),
                            r.alpha,
                            r.beta,
                            r.slope,
                            r.orbit.self_dual()
                        );
                    }
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(args: TableArgs) -> Result<ExitCode, ExitCode> {
    if args.m < 3 {
        eprintln!("error: table requires m >= 3");
        return Err(ExitCode::from(EXIT_BAD_DATUM));
    }
    let rows = survey::table_for_m(args.m);
    let out = match args.format {
        TableFormat::Md => render::table_markdown(args.m, &rows, args.ascii),
        TableFormat::Csv => render::table_csv(args.m, &rows, args.ascii),
        TableFormat::Json => render::table_json(args.m, &rows, args.ascii),
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(args: SearchArgs) -> Result<ExitCode, ExitCode> {
    if args.m_max < args.m_min {
        eprintln!("error: empty range: m-max < m-min");
        return Err(ExitCode::from(EXIT_BAD_DATUM));
    }
    let query = if args.supersingular {
        PolygonQuery::Supersingular
    } else if let Some(label) = &args.polygon {
        match parse_label(label) {
            Ok(p) => PolygonQuery::Exact(p),
            Err(e) => {
                eprintln!("error: bad polygon label: {e}");
                return Err(ExitCode::from(EXIT_BAD_DATUM));
            }
        }
    } else if args.prank0 {
        PolygonQuery::PRankZero
    } else {
        eprintln!("error: one of --supersingular, --polygon, --prank0 is required");
        return Err(ExitCode::from(EXIT_BAD_DATUM));
    };
    let options = SearchOptions {
        exclude_two: args.odd_p,
    };
    let hits = survey::find_polygon(args.m_min, args.m_max, &query, options);
    for hit in &hits {
        println!("{}", render::search_hit(hit, args.compress_congruences, args.ascii));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, ExitCode> {
    let datum = args.datum.datum()?;
    match zeta::cross_check(&datum, args.p, args.budget) {
        Ok(check) => {
            println!(
                "shimura-taniyama: {}",
                label_of(&check.shimura_taniyama, args.ascii)
            );
            println!("point counting:   {}", label_of(&check.counted, args.ascii));
            println!("l-polynomial:     {}", check.l_polynomial.display());
            if check.agree() {
                println!("verdict: agree");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verdict: MISMATCH");
                Err(ExitCode::from(EXIT_MISMATCH))
            }
        }
        Err(e @ ZetaError::BudgetExceeded { .. }) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(EXIT_BUDGET))
        }
        Err(e @ (ZetaError::NotPrime { .. } | ZetaError::DividesModulus { .. })) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(EXIT_BAD_CHAR))
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(EXIT_MISMATCH))
        }
    }
}
