use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use hecke_ehrhart::ehrhart::{count_points, ehrhart_native};
use hecke_ehrhart::exactmath::UniPoly;
use hecke_ehrhart::grassmann::{
    nu_bruteforce, nu_bundle_oracle, nu_closed, phi_hat_polynomial, phi_polynomial, EigenvalueTable,
};
use hecke_ehrhart::hecke::{
    average_regularized, coindex_p_squared_family, hecke_ehrhart, hecke_p_squared, level_one_family,
    eigenvalue_check,
};
use hecke_ehrhart::polytope::{LatticePolytope, PolytopeInput};
use hecke_ehrhart::toddop::{distribution_check, kp_check, kp_coefficient, edge_strata_report, todd_terms};
use hecke_ehrhart::Error;

/// Hecke operators on Ehrhart polynomials of lattice polytopes.
#[derive(Parser, Debug)]
#[command(name = "hecke-ehrhart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,

    /// Also print decimal approximations of rational results.
    #[arg(long, global = true)]
    decimal: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args, Debug)]
struct PolytopeArgs {
    /// JSON file with `vertices` and an optional `lattice` basis.
    #[arg(long, conflicts_with = "builtin")]
    polytope: Option<PathBuf>,

    /// Built-in polytope: cube:N, simplex:N, product:A,B,..., prism, singular-triangle.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of lattice points in tP.
    Count {
        #[command(flatten)]
        polytope: PolytopeArgs,
        #[arg(long)]
        t: i64,
    },
    /// The Ehrhart polynomial.
    Ehrhart {
        #[command(flatten)]
        polytope: PolytopeArgs,
    },
    /// T(p,k) applied to the Ehrhart polynomial.
    Hecke {
        #[command(flatten)]
        polytope: PolytopeArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Check the coefficient ratios against the eigenvalues.
        #[arg(long)]
        check_eigenvalues: bool,
        /// Also compare T(p²) with T(p,1)² − p·T(p,2).
        #[arg(long)]
        p_squared: bool,
        /// List E(P_M) for every superlattice.
        #[arg(long)]
        per_lattice: bool,
    },
    /// Table of eigenvalues ν_{n,k,l} as polynomials in p.
    Nu {
        #[arg(long)]
        n: usize,
        /// Evaluate at this prime and cross-check by enumerating subspaces.
        #[arg(long)]
        p: Option<u64>,
    },
    /// The polynomial Φ_{n,k,l}, checked against the Schubert cell count.
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    /// Todd operator terms and the Ehrhart coefficients they produce.
    Todd {
        #[command(flatten)]
        polytope: PolytopeArgs,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Check every coefficient against lattice point counts.
        #[arg(long)]
        check_kp: bool,
        /// Stratified report of T(p,1) on c_1 for an edge (3-dim nonsingular).
        #[arg(long, requires = "p")]
        strata: bool,
        #[arg(long)]
        p: Option<u64>,
        /// Face index of the edge for --strata (default: first edge).
        #[arg(long)]
        edge: Option<usize>,
    },
    /// Distribution relations Σ_j c(ω^j,k) = (n^k−1)B_k/k!.
    Dist {
        #[arg(long, default_value_t = 6)]
        max_n: u64,
        #[arg(long, default_value_t = 5)]
        max_k: usize,
    },
    /// Averaged regularized Ehrhart polynomial over a superlattice family.
    Avg {
        #[command(flatten)]
        polytope: PolytopeArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Family::LevelOne)]
        family: Family,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Superlattices M with [M:L] = p inside p^{-1}L.
    LevelOne,
    /// All superlattices M with [M:L] = p².
    PSquared,
}

fn load_polytope(args: &PolytopeArgs) -> anyhow::Result<LatticePolytope> {
    match (&args.polytope, &args.builtin) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            let input: PolytopeInput = serde_path_to_error::deserialize(de).map_err(|err| {
                let path_str = err.path().to_string();
                anyhow!("{}: invalid polytope at `{}`: {}", path.display(), path_str, err.inner())
            })?;
            Ok(LatticePolytope::from_input(&input)?)
        }
        (None, Some(name)) => Ok(LatticePolytope::builtin(name)?),
        (None, None) => bail!("give a polytope with --polytope FILE or --builtin NAME"),
    }
}

fn decimal_poly(p: &UniPoly, var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let v = c.to_f64();
        terms.push(match i {
            0 => format!("{v:.6}"),
            1 => format!("{v:.6}{var}"),
            _ => format!("{v:.6}{var}^{i}"),
        });
    }
    if terms.is_empty() { "0".into() } else { terms.join(" + ") }
}

struct Output {
    format: Format,
    decimal: bool,
}

impl Output {
    fn json(&self, value: &impl Serialize) -> anyhow::Result<()> {
        println!("{}", serde_json::to_string_pretty(value)?);
        Ok(())
    }

    fn poly(&self, label: &str, p: &UniPoly) {
        println!("{label}{p}");
        if self.decimal {
            println!("{}≈ {}", " ".repeat(label.chars().count().saturating_sub(2)), decimal_poly(p, "t"));
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let out = Output { format: cli.format, decimal: cli.decimal };
    match cli.command {
        Command::Count { polytope, t } => {
            let p = load_polytope(&polytope)?;
            let c = count_points(&p, p.lattice(), t)?;
            if out.format == Format::Json {
                out.json(&json!({ "t": t, "count": c.to_string() }))?;
            } else {
                println!("{c}");
            }
        }
        Command::Ehrhart { polytope } => {
            let p = load_polytope(&polytope)?;
            let e = ehrhart_native(&p)?;
            if out.format == Format::Json {
                out.json(&e)?;
            } else {
                out.poly("", &e.poly);
            }
        }
        Command::Hecke { polytope, p: prime, k, check_eigenvalues, p_squared, per_lattice } => {
            let p = load_polytope(&polytope)?;
            let result = hecke_ehrhart(&p, prime, k)?;
            let report = if check_eigenvalues { Some(eigenvalue_check(&p, prime, k)?) } else { None };
            let square = if p_squared { Some(hecke_p_squared(&p, prime)?) } else { None };
            if out.format == Format::Json {
                let per = per_lattice.then(|| {
                    result
                        .per_lattice
                        .iter()
                        .map(|(m, e)| json!({ "lattice": m, "ehrhart": e }))
                        .collect::<Vec<_>>()
                });
                out.json(&json!({
                    "p": prime,
                    "k": k,
                    "count": result.per_lattice.len(),
                    "aggregate": result.aggregate,
                    "per_lattice": per,
                    "eigenvalues": report,
                    "p_squared": square,
                }))?;
            } else {
                println!("{} superlattices", result.per_lattice.len());
                if per_lattice {
                    for (m, e) in &result.per_lattice {
                        println!("  {}  {e}", serde_json::to_string(m)?);
                    }
                }
                out.poly("T(p,k)E = ", &result.aggregate);
                if let Some(r) = report {
                    println!("E        = {}", r.ehrhart);
                    for (l, ratio) in &r.ratios {
                        println!("c_{l}: ratio {ratio} = nu_{{{},{k},{l}}}({prime})", p.dim());
                    }
                    println!("dilation identity holds");
                }
                if let Some(s) = square {
                    println!("T(p^2)E = {} ({} superlattices), equal to T(p,1)^2 E - p T(p,2) E", s.direct, s.count);
                }
            }
        }
        Command::Nu { n, p } => {
            let table = EigenvalueTable::new(n);
            match p {
                None => {
                    if out.format == Format::Json {
                        out.json(&table.to_json())?;
                    } else {
                        print!("{table}");
                    }
                }
                Some(prime) => {
                    let mut rows = Vec::new();
                    for k in 1..n {
                        for l in 0..=n {
                            let closed = nu_closed(n, k, l, prime);
                            let brute = nu_bruteforce(n, k, l, prime)?;
                            let bundle = nu_bundle_oracle(n, k, l, prime)?;
                            if closed != brute || closed != bundle {
                                return Err(Error::Verification(format!(
                                    "nu_{{{n},{k},{l}}}({prime}): closed {closed}, enumerated {brute}, pairs {bundle}"
                                ))
                                .into());
                            }
                            rows.push((k, l, closed));
                        }
                    }
                    if out.format == Format::Json {
                        let v: Vec<_> = rows
                            .iter()
                            .map(|(k, l, v)| json!({ "k": k, "l": l, "nu": v.to_string() }))
                            .collect();
                        out.json(&v)?;
                    } else {
                        for (k, l, v) in rows {
                            println!("nu_{{{n},{k},{l}}}({prime}) = {v}");
                        }
                    }
                }
            }
        }
        Command::Phi { n, k, l } => {
            let phi = phi_polynomial(n, k, l);
            let schubert = phi_hat_polynomial(n, k, l)?;
            if phi != schubert {
                return Err(Error::Verification(format!("Φ = {phi} but the Schubert count gives {schubert}")).into());
            }
            if out.format == Format::Json {
                out.json(&json!({ "n": n, "k": k, "l": l, "phi": phi }))?;
            } else {
                println!("{}", phi.to_string_in("p"));
            }
        }
        Command::Todd { polytope, degree, check_kp, strata, p: prime, edge } => {
            let p = load_polytope(&polytope)?;
            let terms = todd_terms(&p, degree)?;
            let coeff = kp_coefficient(&p, degree)?;
            let checked = if check_kp { Some(kp_check(&p)?) } else { None };
            let report = match (strata, prime) {
                (true, Some(prime)) => {
                    let face = match edge {
                        Some(f) => f,
                        None => p.faces_of_dim(1).next().map(|(i, _)| i).ok_or_else(|| anyhow!("no edges"))?,
                    };
                    Some(edge_strata_report(&p, face, prime)?)
                }
                _ => None,
            };
            if out.format == Format::Json {
                out.json(&json!({
                    "degree": degree,
                    "terms": terms,
                    "coefficient": coeff,
                    "checked_coefficients": checked,
                    "strata": report,
                }))?;
            } else {
                for t in &terms {
                    let parts: Vec<String> = t.partition.iter().map(|(f, k)| format!("F{f}^{k}")).collect();
                    println!("face {:>3}  {:<24} {}", t.face, parts.join(" "), t.coefficient);
                }
                println!("c_{} = {coeff}", p.dim().saturating_sub(degree));
                if let Some(c) = checked {
                    let listed: Vec<String> = c.iter().map(ToString::to_string).collect();
                    println!("all coefficients agree with lattice point counts: [{}]", listed.join(", "));
                }
                if let Some(r) = report {
                    println!("{r}");
                }
            }
        }
        Command::Dist { max_n, max_k } => {
            let mut rows = Vec::new();
            for n in 2..=max_n {
                for k in 1..=max_k {
                    rows.push((n, k, distribution_check(n, k)?));
                }
            }
            if out.format == Format::Json {
                let v: Vec<_> = rows.iter().map(|(n, k, v)| json!({ "n": n, "k": k, "sum": v })).collect();
                out.json(&v)?;
            } else {
                for (n, k, v) in rows {
                    println!("n={n} k={k}: {v}");
                }
            }
        }
        Command::Avg { polytope, p: prime, family } => {
            let p = load_polytope(&polytope)?;
            let lattices = match family {
                Family::LevelOne => level_one_family(&p, prime)?,
                Family::PSquared => coindex_p_squared_family(&p, prime)?,
            };
            let avg = average_regularized(&p, &lattices)?;
            let e = ehrhart_native(&p)?;
            let n = p.dim();
            let ratio = (n >= 1 && !e.coeff(n - 1).is_zero()).then(|| avg.coeff(n - 1) / e.coeff(n - 1));
            if out.format == Format::Json {
                out.json(&json!({ "family_size": lattices.len(), "average": avg, "leading_ratio": ratio }))?;
            } else {
                println!("{} lattices", lattices.len());
                out.poly("average = ", &avg);
                if let Some(r) = ratio {
                    println!("c_{} ratio = {r}{}", n - 1, if out.decimal { format!(" ≈ {:.6}", r.to_f64()) } else { String::new() });
                }
            }
        }
    }
    Ok(())
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("HECKE_EHRHART_THREADS") {
        let n: usize = v.parse().with_context(|| format!("HECKE_EHRHART_THREADS={v} is not a number"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::Verification(_)) | Some(Error::NotRational(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
