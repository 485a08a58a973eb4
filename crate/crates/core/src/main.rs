use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use atdcensus::altinv::AttachmentType;
use atdcensus::canon::{are_isomorphic, is_self_opposite};
use atdcensus::census::{
    catalog_census, derive_families, entries_from_documents, run_census, verify_two_atd,
    CensusConfig, CensusOutcome,
};
use atdcensus::constructions::{generalised_wreath, partial_line, wreath, CosetSpec};
use atdcensus::digraph::Digraph;
use atdcensus::error::Error;
use atdcensus::io::{
    atd_csv, ghat_csv, hat_csv, read_digraph, read_group_catalog, validate_csv, write_digraph,
};
use atdcensus::perm::Permutation;

#[derive(Parser)]
#[command(
    name = "atdcensus",
    version,
    about = "Constructs, classifies and censuses 2-valent arc-transitive digraphs \
             and their 4-valent underlying graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a digraph and print its document.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Print the full invariant record of a digraph document.
    Analyze { file: PathBuf },
    /// Run the census and write digraph documents, CSV tables and a report.
    Census(CensusArgs),
    /// Decide isomorphism of two digraph documents.
    Iso { first: PathBuf, second: PathBuf },
    /// Decide whether a digraph is isomorphic to its opposite.
    Selfopp { file: PathBuf },
    /// Recompute every record from the digraph documents and diff a CSV.
    Validate { digraph_dir: PathBuf, csv: PathBuf },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// The wreath digraph on n layers of two vertices.
    Wreath { n: u32 },
    /// The generalised wreath digraph with parameters n and r.
    Gwd { n: u32, r: u32 },
    /// The r-th partial line digraph of a digraph document.
    Pl { file: PathBuf, r: usize },
    /// A coset digraph from a group catalog: cosets of `subgroup` in
    /// `group`, arcs through the double coset of the shunt.
    Coset {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        /// Shunt element as space-separated images.
        #[arg(long)]
        shunt: String,
    },
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    max_order: u64,
    /// Largest s-arc-transitivity level searched (default from the order bound).
    #[arg(long)]
    s_max: Option<usize>,
    #[arg(long, default_value_t = 512)]
    index_cap: u64,
    /// Seed and enumerate the wreath family only.
    #[arg(long)]
    gw_only: bool,
    /// Search epimorphisms onto the groups of this catalog instead of the
    /// low-index quotient search.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, default_value = "census-out")]
    out: PathBuf,
    #[arg(long, default_value_t = 512)]
    detail_limit: u64,
    #[arg(long, default_value_t = 1_000_000_000)]
    node_budget: u64,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } | Error::CapExceeded { .. } => 3,
                _ => 1,
            }
        }
    });
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Construct(cmd) => {
            let (d, name) = match cmd {
                ConstructCommand::Wreath { n } => (wreath(n)?, format!("W({n},1)")),
                ConstructCommand::Gwd { n, r } => {
                    (generalised_wreath(n, r)?, format!("W({n},{r})"))
                }
                ConstructCommand::Pl { file, r } => {
                    let (d, name) = load_digraph(&file)?;
                    let base = name.unwrap_or_else(|| "input".into());
                    (partial_line(&d, r)?, format!("Pl^{r}({base})"))
                }
                ConstructCommand::Coset {
                    catalog,
                    group,
                    subgroup,
                    shunt,
                } => {
                    let groups = read_group_catalog(&fs::read_to_string(&catalog)?)?;
                    let find = |name: &str| {
                        groups
                            .iter()
                            .find(|(n, _)| n == name)
                            .map(|(_, g)| g.clone())
                            .ok_or_else(|| Error::Census(format!("no group `{name}` in catalog")))
                    };
                    let g = find(&group)?;
                    let h = find(&subgroup)?;
                    let images: Vec<u32> = shunt
                        .split_whitespace()
                        .map(|t| {
                            t.parse().map_err(|_| Error::Parse {
                                position: 0,
                                message: format!("bad shunt image `{t}`"),
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    let spec = CosetSpec {
                        group: g,
                        subgroup_gens: h.generators().to_vec(),
                        shunt: Permutation::from_images(images)?,
                    };
                    let (d, _) = atdcensus::constructions::coset_digraph(&spec, 100_000)?;
                    (d, format!("Cos({group},{subgroup})"))
                }
            };
            print!("{}", write_digraph(&d, Some(&name)));
            Ok(0)
        }
        Command::Analyze { file } => {
            let (d, name) = load_digraph(&file)?;
            analyze(&d, name.as_deref())?;
            Ok(0)
        }
        Command::Census(args) => census(args),
        Command::Iso { first, second } => {
            let (a, _) = load_digraph(&first)?;
            let (b, _) = load_digraph(&second)?;
            if are_isomorphic(&a, &b)? {
                println!("isomorphic");
                Ok(0)
            } else {
                println!("not isomorphic");
                Ok(1)
            }
        }
        Command::Selfopp { file } => {
            let (d, _) = load_digraph(&file)?;
            if is_self_opposite(&d)? {
                println!("yes");
                Ok(0)
            } else {
                println!("no");
                Ok(1)
            }
        }
        Command::Validate { digraph_dir, csv } => {
            let mut documents: HashMap<String, Digraph> = HashMap::new();
            for entry in fs::read_dir(&digraph_dir)? {
                let path = entry?.path();
                if path.extension().and_then(|e| e.to_str()) != Some("dg") {
                    continue;
                }
                let (d, name) = read_digraph(&fs::read_to_string(&path)?)?;
                let key = name.unwrap_or_else(|| path.display().to_string());
                documents.insert(key, d);
            }
            let diffs = validate_csv(&documents, &fs::read_to_string(&csv)?)?;
            if diffs.is_empty() {
                println!("validate: clean ({} documents)", documents.len());
                Ok(0)
            } else {
                for d in &diffs {
                    println!("{d}");
                }
                println!("validate: {} differences", diffs.len());
                Ok(1)
            }
        }
    }
}

fn load_digraph(path: &Path) -> Result<(Digraph, Option<String>), Error> {
    read_digraph(&fs::read_to_string(path)?)
}

fn analyze(d: &Digraph, name: Option<&str>) -> Result<(), Error> {
    let check = verify_two_atd(d)?;
    if !check.is_two_atd() {
        println!("not a 2-valent arc-transitive asymmetric digraph: {check:?}");
        return Ok(());
    }
    let mut documents = HashMap::new();
    documents.insert(name.unwrap_or("input").to_string(), d.clone());
    let entries = entries_from_documents(&documents)?;
    let e = &entries[0];
    let r = e.record.as_ref().unwrap();
    let fmt_idx = |v: Option<u128>| v.map_or("?".to_string(), |x| x.to_string());
    println!("Name: {}", name.unwrap_or("-"));
    println!("|V|: {}", r.order);
    println!("SelfOpp: {}", if r.self_opposite { "yes" } else { "no" });
    println!(
        "Opp: {}",
        if r.self_opposite { name.unwrap_or("-") } else { "?" }
    );
    println!(
        "IsUndAT: {}",
        if r.underlying_arc_transitive { "yes" } else { "no" }
    );
    println!(
        "UndGrph: {}",
        if e.underlying_name.is_empty() {
            "?"
        } else {
            &e.underlying_name
        }
    );
    println!("s: {}", r.s_level);
    println!("GvAb: {}", if r.stab_abelian { "Ab" } else { "n-Ab" });
    println!("|Tv:Gv|: {}", fmt_idx(r.index_to_at_overgroup));
    println!("|Av:Gv|: {}", fmt_idx(r.index_in_graph_aut));
    println!("Solv: {}", if r.solvable { "solve" } else { "n-solv" });
    println!("Rad: {}", r.radius);
    println!("AtNo: {}", r.attachment);
    println!(
        "AtTy: {}",
        match r.attachment_type {
            AttachmentType::Loose => "loose",
            AttachmentType::Antipodal => "antipodal",
            AttachmentType::Tight => "tight",
            AttachmentType::Other => "---",
        }
    );
    println!("|AltCyc|: {}", r.alt_cycle_count);
    println!("AltExp: {}", r.alter_exponent);
    println!("AltPer: {}", r.alter_perimeter);
    let seq: Vec<String> = r.alter_sequence.iter().map(|x| x.to_string()).collect();
    println!("AltSeq: [{}]", seq.join(";"));
    println!("IsGWD: {}", if r.is_gw { "yes" } else { "no" });
    Ok(())
}

fn census(args: CensusArgs) -> Result<i32, Error> {
    let mut cfg = CensusConfig::new(args.max_order);
    if let Some(s_max) = args.s_max {
        cfg.s_range = Some((1..=s_max).collect());
    }
    cfg.index_cap = args.index_cap;
    cfg.gw_only = args.gw_only;
    cfg.jobs = args.jobs;
    cfg.detail_limit = args.detail_limit;
    cfg.node_budget = args.node_budget;

    let CensusOutcome { mut entries, report } = match &args.catalog {
        Some(path) => {
            let groups = read_group_catalog(&fs::read_to_string(path)?)?;
            catalog_census(&groups, &cfg)?
        }
        None => run_census(&cfg)?,
    };
    let (ghat, hat) = derive_families(&mut entries)?;

    let out = &args.out;
    fs::create_dir_all(out.join("digraphs"))?;
    fs::create_dir_all(out.join("graphs"))?;
    for e in &entries {
        if let Some(d) = &e.digraph {
            let path = out.join("digraphs").join(format!("{}.dg", slug(&e.name)));
            fs::write(path, write_digraph(d, Some(&e.name)))?;
        }
    }
    for g in &ghat {
        let path = out.join("graphs").join(format!("{}.dg", slug(&g.name)));
        fs::write(path, write_digraph(&g.graph, Some(&g.name)))?;
    }
    for h in &hat {
        let path = out.join("graphs").join(format!("{}.dg", slug(&h.name)));
        fs::write(path, write_digraph(&h.graph, Some(&h.name)))?;
    }
    fs::write(out.join("atd.csv"), atd_csv(&entries)?)?;
    fs::write(out.join("ghat.csv"), ghat_csv(&ghat)?)?;
    fs::write(out.join("hat.csv"), hat_csv(&hat)?)?;

    let mut report_text = String::new();
    report_text.push_str(&format!(
        "census up to order {}: {} digraphs, {} arc-transitive graph families, \
         {} half-arc-transitive graphs\n",
        args.max_order,
        entries.len(),
        ghat.len(),
        hat.len()
    ));
    report_text.push_str(&format!(
        "complete: {}\n",
        if report.complete { "yes" } else { "no (see warnings)" }
    ));
    for w in &report.warnings {
        report_text.push_str(&format!("warning: {w}\n"));
    }
    for c in &report.cells {
        report_text.push_str(&format!("cell: {c}\n"));
    }
    fs::write(out.join("report.txt"), &report_text)?;
    println!(
        "{} digraphs, {} AT families, {} HAT graphs -> {}",
        entries.len(),
        ghat.len(),
        hat.len(),
        out.display()
    );
    Ok(0)
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}
