mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use theta_core::abelian::{FinAbGroup, GroupElement, Subgroup};
use theta_core::adelic::{adelic_pairing, AdelePoint, NsJson};
use theta_core::reps::dense::{class_inner_product, DenseRepJson};
use theta_core::reps::monomial::coset_rep;
use theta_core::reps::{classify_irreps, count_irreps, induce, HeisenbergGroup, KernelCharacter};
use theta_core::skew::{symplectic_decompose, FormJson};
use theta_core::theta::{descend, lift_level_subgroup, Cocycle, CocycleJson, ThetaGroup};
use theta_core::verify::{run_suite, VerifyConfig, SUITES};

use report::{Report, Table};

#[derive(Parser)]
#[command(name = "theta", version, about = "Finite theta groups, their representations and adelic pairings")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Markdown, global = true)]
    format: Format,
    /// Seed for every randomized suite.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Largest group order a command may enumerate.
    #[arg(long, env = "THETA_SIZE_CAP", default_value_t = 4096, global = true)]
    size_cap: u64,
    /// Largest representation dimension a command may build.
    #[arg(long, default_value_t = 64, global = true)]
    dim_cap: u64,
    /// Levels are searched up to this bound.
    #[arg(long, default_value_t = 48, global = true)]
    level_bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Symplectic decomposition of a skew form given as JSON.
    Decompose { form: PathBuf },
    /// Classes of irreducible weight-n modules of the Heisenberg group of a type.
    Irreps {
        /// Divisor chain, e.g. `2,4`.
        #[arg(long = "type")]
        ty: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: i64,
    },
    /// Run a verification suite, or `all`.
    Verify {
        #[arg(long)]
        suite: String,
        /// Random cases per randomized property.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// The commutator pairing of two adelic points.
    Pairing {
        #[arg(long)]
        ns: PathBuf,
        /// Comma-separated rationals, e.g. `1/2,0`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Induce W_{y,χ} from G(ker π_n) and verify the intertwiner.
    Induce {
        /// Divisor chain, e.g. `2,4`.
        #[arg(long = "type")]
        ty: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: i64,
        /// Coordinates of y, e.g. `1,0`.
        #[arg(long, default_value = "")]
        y: String,
        /// Index of χ among the characters of ker π_n.
        #[arg(long, default_value_t = 0)]
        chi: usize,
        /// Also emit the induced module as JSON.
        #[arg(long)]
        emit_module: bool,
    },
    /// Descend a theta group along an isotropic subgroup.
    Descend {
        /// The standard theta group of this type, on (x₁, y₁, x₂, y₂, …).
        #[arg(long = "type", conflicts_with = "cocycle")]
        ty: Option<String>,
        /// A cocycle given as JSON.
        #[arg(long)]
        cocycle: Option<PathBuf>,
        /// Generators of K′ separated by `;`, e.g. `2,0;0,2`.
        #[arg(long)]
        subgroup: String,
    },
}

fn parse_type(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().with_context(|| format!("bad divisor {t:?}")))
        .collect()
}

fn parse_element(group: &FinAbGroup, s: &str) -> Result<GroupElement> {
    let coords: Vec<u64> = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().with_context(|| format!("bad coordinate {t:?}")))
            .collect::<Result<_>>()?
    };
    let g = GroupElement::new(coords);
    group.check(&g)?;
    Ok(g)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn check_cap(what: &str, size: u64, cap: u64) -> Result<()> {
    if size > cap {
        bail!("size cap exceeded: {what} = {size} > {cap}");
    }
    Ok(())
}

fn type_group(ty: &[u64]) -> Result<FinAbGroup> {
    Ok(FinAbGroup::new(ty.to_vec())?)
}

fn show_type(ty: &[u64]) -> String {
    let parts: Vec<String> = ty.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn show_elements(v: &[GroupElement]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn show_chi(chi: &KernelCharacter) -> String {
    let parts: Vec<String> = chi.values().iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn cmd_decompose(cli: &Cli, path: &Path) -> Result<Report> {
    let form = read_json::<FormJson>(path)?.to_form()?;
    let k = form.base();
    check_cap("|K|", k.order(), cli.size_cap)?;
    let mut r = Report::new("decompose");
    r.field("group", k.to_string());
    r.field("order", k.order());
    let radical = form.radical();
    if !radical.is_trivial() {
        let which = if radical.order() == k.order() {
            "whole group".to_string()
        } else {
            format!("order {}, generated by {}", radical.order(), show_elements(&radical.gens))
        };
        r.field("status", format!("degenerate; radical = {which}"));
        r.field("radical_order", radical.order());
        return Ok(r);
    }
    let dec = symplectic_decompose(&form)?;
    let verified = dec.verify().is_ok();
    r.field("type", show_type(&dec.ty));
    r.field("status", if verified { "OK" } else { "FAILED" });
    let mut t = Table::new(&["i", "d_i", "k1", "k2"]);
    for (i, d) in dec.ty.iter().enumerate() {
        t.row(vec![
            i.to_string(),
            d.to_string(),
            dec.k1_gens[i].to_string(),
            dec.k2_gens[i].to_string(),
        ]);
    }
    r.table(t);
    r.ok = verified;
    Ok(r)
}

fn cmd_irreps(cli: &Cli, ty: &[u64], n: i64) -> Result<Report> {
    let tyg = type_group(ty)?;
    check_cap("|K|", tyg.order() * tyg.order(), cli.size_cap)?;
    let (count, dim) = count_irreps(&tyg, n);
    check_cap("D_n", dim, cli.dim_cap)?;
    let c = classify_irreps(&HeisenbergGroup::of_type(ty)?, n)?;
    let mut r = Report::new("irreps");
    r.field("type", show_type(ty));
    r.field("weight", n);
    r.field("classes", c.count());
    r.field("formula_count", format!("∏ gcd(n,d_i)² = {count}"));
    r.field("formula_dim", format!("D_n = ∏ d_i/gcd(n,d_i) = {dim}"));
    let mut t = Table::new(&["y", "chi", "labels", "dim"]);
    for ((y, chi, labels), d) in c.classes.iter().zip(&c.dims) {
        t.row(vec![y.to_string(), show_chi(chi), labels.to_string(), d.to_string()]);
    }
    r.table(t);
    r.ok = c.matches_formula();
    r.field("matches_formula", r.ok);
    Ok(r)
}

fn cmd_verify(cli: &Cli, suite: &str, cases: usize) -> Result<Report> {
    let cfg = VerifyConfig {
        seed: cli.seed,
        cases,
        size_cap: cli.size_cap,
        level_bound: cli.level_bound,
    };
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        bail!("unknown suite {suite:?}; expected `all` or one of {}", SUITES.join(", "));
    };
    let mut r = Report::new("verify");
    r.field("seed", cli.seed);
    let mut t = Table::new(&["suite", "check", "status", "detail"]);
    let mut total = 0;
    let mut failed = 0;
    for name in names {
        let rep = run_suite(name, &cfg)?;
        for c in &rep.checks {
            total += 1;
            failed += usize::from(!c.passed);
            t.row(vec![
                rep.suite.clone(),
                c.name.clone(),
                if c.passed { "PASS" } else { "FAIL" }.into(),
                c.detail.clone(),
            ]);
        }
    }
    r.field("checks", total);
    r.field("failed", failed);
    r.table(t);
    r.ok = failed == 0 && total > 0;
    Ok(r)
}

fn parse_point(s: &str) -> Result<AdelePoint> {
    let parts: Vec<&str> = s.split(',').collect();
    Ok(AdelePoint::parse(&parts)?)
}

fn cmd_pairing(ns: &Path, x: &str, y: &str) -> Result<Report> {
    let e = read_json::<NsJson>(ns)?.to_form()?;
    let (x, y) = (parse_point(x)?, parse_point(y)?);
    let p = adelic_pairing(&e, &x, &y)?;
    let mut r = Report::new("pairing");
    r.field("x", x.to_string());
    r.field("y", y.to_string());
    r.field("value", p.value.to_string());
    r.field("levels", format!("{},{}", p.levels.0, p.levels.1));
    r.summary = Some(p.to_string());
    Ok(r)
}

fn cmd_induce(cli: &Cli, ty: &[u64], n: i64, y: &str, chi: usize, emit: bool) -> Result<Report> {
    let tyg = type_group(ty)?;
    check_cap("|K|", tyg.order() * tyg.order(), cli.size_cap)?;
    check_cap("D_n", count_irreps(&tyg, n).1, cli.dim_cap)?;
    let h = HeisenbergGroup::of_type(ty)?;
    let y = if y.is_empty() { tyg.zero() } else { parse_element(&tyg, y)? };
    let pi = tyg.mul_by_n(n);
    let chis = KernelCharacter::all(&pi);
    let Some(chi) = chis.get(chi) else {
        bail!("χ index {chi} out of range; ker π_n has {} characters", chis.len());
    };
    let ind = induce(&h, n, &y, chi)?;
    let gp = h.gprime();
    let a = ind.rep.character(&gp)?;
    let norm = class_inner_product(&a, &a)?;
    let mut r = Report::new("induce");
    r.field("type", show_type(ty));
    r.field("weight", n);
    r.field("y", y.to_string());
    r.field("class_representative", coset_rep(&pi, &y).to_string());
    r.field("chi", show_chi(chi));
    r.field("dim", ind.rep.dim());
    r.field("intertwiner", format!("verified on all {} elements of G′", gp.elements.len()));
    r.field("character_norm", norm.to_string());
    if emit {
        r.field("module", serde_json::to_string(&DenseRepJson::from_rep(&ind.rep))?);
    }
    r.ok = norm.numer() == norm.denom();
    Ok(r)
}

fn cmd_descend(cli: &Cli, ty: Option<&[u64]>, cocycle: Option<&Path>, subgroup: &str) -> Result<Report> {
    let f = match (ty, cocycle) {
        (Some(ty), None) => Cocycle::standard(&type_group(ty)?),
        (None, Some(path)) => read_json::<CocycleJson>(path)?.to_cocycle()?,
        _ => bail!("give exactly one of --type and --cocycle"),
    };
    check_cap("|K|", f.base().order(), cli.size_cap)?;
    let g = ThetaGroup::new(f);
    let gens = subgroup
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_element(g.base(), s))
        .collect::<Result<Vec<_>>>()?;
    let kp = Subgroup::generated_by(g.base(), gens)?;
    let d = descend(&g, &lift_level_subgroup(&g, &kp)?)?;
    let base = g.base().order();
    let q = d.group.base().order();
    let law = q * kp.order() * kp.order() == base;
    let form = d.group.commutator_form()?;
    let nondegenerate = form.is_nondegenerate();
    let mut r = Report::new("descend");
    r.field("base", g.base().to_string());
    r.field("level_subgroup_order", kp.order());
    r.field("descended_base", d.group.base().to_string());
    r.field("order_law", format!("{q}·{}² = {} (|K| = {base})", kp.order(), q * kp.order() * kp.order()));
    r.field("nondegenerate", nondegenerate);
    if nondegenerate {
        r.field("descended_type", show_type(&symplectic_decompose(&form)?.ty));
    }
    r.ok = law && nondegenerate;
    Ok(r)
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Decompose { form } => cmd_decompose(cli, form),
        Command::Irreps { ty, weight } => cmd_irreps(cli, &parse_type(ty)?, *weight),
        Command::Verify { suite, cases } => cmd_verify(cli, suite, *cases),
        Command::Pairing { ns, x, y } => cmd_pairing(ns, x, y),
        Command::Induce {
            ty,
            weight,
            y,
            chi,
            emit_module,
        } => cmd_induce(cli, &parse_type(ty)?, *weight, y, *chi, *emit_module),
        Command::Descend {
            ty,
            cocycle,
            subgroup,
        } => {
            let ty = ty.as_deref().map(parse_type).transpose()?;
            cmd_descend(cli, ty.as_deref(), cocycle.as_deref(), subgroup)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => report.to_json(),
                Format::Markdown => Ok(report.to_markdown()),
                Format::Csv => report.to_csv(),
            };
            match out {
                Ok(s) => print!("{s}"),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
