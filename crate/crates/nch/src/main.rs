//! Command-line surface: algebra ingestion, suite execution, report
//! emission.  Thin wrapper over the library; all mathematics lives there.

use clap::{Args, Parser, Subcommand};
use nch::algebra::{load_algebra, validate, FinDimAlgebra};
use nch::error::NchError;
use nch::homology::{
    cyclic_homology, hochschild_homology, periodic_approx, CyclicModel, HomologyResult,
};
use nch::kindex::{chern_character_even, chern_character_odd};
use nch::linalg::SparseVec;
use nch::matrix::RingMatrix;
use nch::report::{Format, Report};
use nch::scalar::Scalar;
use nch::suites::{run_suite, Assertion, SUITE_NAMES};
use nch::toeplitz::{index_report, LaurentSymbol};

#[derive(Parser)]
#[command(
    name = "nch",
    about = "Exact Hochschild/cyclic homology, operator identities and index pairings for finite-dimensional algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format: table or json.
    #[arg(long, global = true, default_value = "table")]
    format: String,
}

#[derive(Args)]
struct AlgebraArg {
    /// Built-in name (C, C2, dual, M2, upper2, strict_upper2) or a JSON
    /// algebra file.
    #[arg(long, default_value = "dual")]
    algebra: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print an algebra's structure and validation report.
    Describe {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Export an operator's per-degree matrices as sparse triplet
        /// text (degree row col value): b | bprime | d | lambda | norm |
        /// kappa | kappainv | connesb | p | g
        #[arg(long = "export-op")]
        export_op: Option<String>,
        /// Truncation for the export.
        #[arg(long = "N", default_value_t = 4)]
        n_max: usize,
    },
    /// Compute homology dimensions (hh, hc or the hp estimate).
    Homology {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Theory: hh | hc | hp
        #[arg(long, default_value = "hc")]
        theory: String,
        #[arg(long = "max-degree", default_value_t = 4)]
        max_degree: usize,
        /// Cyclic model: mixed | connes
        #[arg(long, default_value = "mixed")]
        model: String,
        /// Truncation; defaults to max-degree + 2 (trusted-degree rule).
        #[arg(long = "N")]
        n_max: Option<usize>,
    },
    /// Run a named verification suite; exit 0 iff every assertion holds.
    Verify {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// One of: operators, harmonic, sbi, excision, goodwillie,
        /// derivation, cuntz, lie, cochains, index, toeplitz, models;
        /// or "all".
        #[arg(long)]
        suite: String,
        #[arg(long = "N", default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        window: usize,
        /// Seed for randomized property samples (printed back).
        #[arg(long, default_value_t = 2026)]
        seed: u64,
        /// Run on all standard algebras instead of --algebra.
        #[arg(long, default_value_t = false)]
        all_algebras: bool,
    },
    /// Chern character of a built-in K-class over the algebra.
    Chern {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// even (idempotent diag(1,0)) or odd (invertible 1 + nilpotent).
        #[arg(long, default_value = "even")]
        kind: String,
        /// Level n: even output in degree 2n, odd in degree 2n-1.
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Run the higher-trace index theorem instances.
    Index,
    /// Toeplitz index report for a Laurent symbol.
    Toeplitz {
        /// Symbol, e.g. "z", "2 + z", "z^-1 + 1/3", or JSON
        /// {"-1": "1", "0": "2"}.
        #[arg(long)]
        symbol: String,
        /// Truncation range "lo..hi".
        #[arg(long = "N", default_value = "1..12")]
        n_range: String,
    },
}

fn exit_code_for(err: &NchError) -> i32 {
    match err {
        NchError::ResourceCap { .. } => 3,
        _ => 2,
    }
}

fn homology_results_json(label: &str, results: &[HomologyResult]) -> serde_json::Value {
    serde_json::json!({
        "label": label,
        "dims": results
            .iter()
            .map(|r| serde_json::json!({
                "degree": r.degree,
                "dim": r.dim,
                "trusted": r.trusted,
            }))
            .collect::<Vec<_>>(),
    })
}

fn run() -> Result<Report, NchError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Describe { algebra, export_op, n_max } => {
            let loaded = load_algebra(&algebra.algebra)?;
            let a = &loaded.algebra;
            let report_data = validate(a);
            let mut report = Report::new(
                "describe",
                serde_json::json!({"algebra": algebra.algebra, "export_op": export_op, "N": n_max}),
            );
            report.push_result(serde_json::json!({
                "name": a.name,
                "dim": a.dim,
                "unital": a.unital,
                "basis": a.basis_labels,
                "has_ideal_block": loaded.ideal.is_some(),
            }));
            if let Some(op_name) = export_op {
                use nch::forms::{export_triplets, Convention, FormsCtx, OpKind};
                let (kind, convention) = match op_name.as_str() {
                    "b" => (OpKind::B, Convention::Reduced),
                    "bprime" => (OpKind::BPrime, Convention::Unreduced),
                    "d" => (OpKind::D, Convention::Reduced),
                    "lambda" => (OpKind::Lambda, Convention::Unreduced),
                    "norm" => (OpKind::Norm, Convention::Unreduced),
                    "kappa" => (OpKind::Kappa, Convention::Reduced),
                    "kappainv" => (OpKind::KappaInv, Convention::Reduced),
                    "connesb" => (OpKind::ConnesB, Convention::Reduced),
                    "p" => (OpKind::HarmonicP, Convention::Reduced),
                    "g" => (OpKind::GreenG, Convention::Reduced),
                    other => {
                        return Err(NchError::Parse(format!("unknown operator {other:?}")))
                    }
                };
                let ctx = FormsCtx::new(a, convention, *n_max)?;
                let top = match kind {
                    OpKind::D | OpKind::ConnesB => n_max.saturating_sub(1),
                    _ => *n_max,
                };
                let degrees: Vec<usize> = (0..=top).collect();
                let triplets = export_triplets(&ctx, kind, &degrees)?;
                report.push_result(serde_json::json!({
                    "operator": op_name,
                    "format": "degree row col value",
                    "triplets": triplets.lines().collect::<Vec<_>>(),
                }));
            }
            report.assertions.push(Assertion::new(
                "algebra is valid (associative, unit laws)",
                report_data.is_valid(),
                format!(
                    "{} associativity defects, {} unit defects",
                    report_data.assoc_defects.len(),
                    report_data.unit_defects.len()
                ),
            ));
            Ok(report)
        }
        Command::Homology { algebra, theory, max_degree, model, n_max } => {
            let loaded = load_algebra(&algebra.algebra)?;
            let a: FinDimAlgebra = loaded.algebra;
            let n = n_max.unwrap_or(max_degree + 2).max(max_degree + 2);
            let mut report = Report::new(
                "homology",
                serde_json::json!({
                    "algebra": algebra.algebra, "theory": theory,
                    "max_degree": max_degree, "model": model, "N": n,
                }),
            );
            match theory.as_str() {
                "hh" => {
                    let res = hochschild_homology(&a, *max_degree, n)?;
                    report.push_result(homology_results_json("HH", &res));
                }
                "hc" => {
                    let m = match model.as_str() {
                        "mixed" => CyclicModel::Mixed,
                        "connes" => CyclicModel::Connes,
                        other => {
                            return Err(NchError::Parse(format!("unknown model {other:?}")))
                        }
                    };
                    let res = cyclic_homology(&a, *max_degree, n, m)?;
                    report.push_result(homology_results_json("HC", &res));
                }
                "hp" => {
                    for parity in 0..2usize {
                        let rep = periodic_approx(&a, parity, n)?;
                        report.push_result(serde_json::json!({
                            "label": format!("HP parity {parity}"),
                            "tower": rep.tower_dims,
                            "stabilized": rep.stabilized_dim,
                            "note": rep.label,
                        }));
                    }
                }
                other => return Err(NchError::Parse(format!("unknown theory {other:?}"))),
            }
            Ok(report)
        }
        Command::Verify { algebra, suite, n_max, window, seed, all_algebras } => {
            if *n_max < window + 2 {
                return Err(NchError::Parse(format!(
                    "truncation N = {n_max} must be at least window + 2 = {}",
                    window + 2
                )));
            }
            let mut report = Report::new(
                "verify",
                serde_json::json!({
                    "algebra": algebra.algebra, "suite": suite, "N": n_max,
                    "window": window, "seed": seed, "all_algebras": all_algebras,
                }),
            );
            let alg = if *all_algebras {
                None
            } else {
                Some(load_algebra(&algebra.algebra)?.algebra)
            };
            let names: Vec<&str> = if suite == "all" {
                SUITE_NAMES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            for name in names {
                report
                    .assertions
                    .extend(run_suite(name, alg.as_ref(), *n_max, *window, *seed)?);
            }
            Ok(report)
        }
        Command::Chern { algebra, kind, level } => {
            let a = load_algebra(&algebra.algebra)?.algebra;
            if !a.unital {
                return Err(NchError::InvalidAlgebra("chern classes need a unit".into()));
            }
            let mut report = Report::new(
                "chern",
                serde_json::json!({"algebra": algebra.algebra, "kind": kind, "level": level}),
            );
            match kind.as_str() {
                "even" => {
                    let e = RingMatrix::diag(vec![a.one_element(), a.zero_element()]);
                    let ch = chern_character_even(&e, *level)?;
                    report.push_result(serde_json::json!({
                        "class": "diag(1, 0)",
                        "degree": ch.degree,
                        "coordinates": ch.class.entries.iter()
                            .map(|(i, c)| serde_json::json!([i, c.to_string()]))
                            .collect::<Vec<_>>(),
                    }));
                    report.assertions.push(Assertion::plain(
                        "Chern character is a cyclic cycle (b image = 0)",
                        ch.boundary_is_zero,
                    ));
                }
                "odd" => {
                    if *level == 0 {
                        return Err(NchError::LevelBelowPower { n: 0, m: 1 });
                    }
                    // u = 1 + x for the first nilpotent-ish basis vector
                    let x = if a.dim > 1 {
                        a.basis_element(1)
                    } else {
                        a.zero_element()
                    };
                    let u = RingMatrix::from_rows(vec![vec![nch::ring::Ring::add(
                        &a.one_element(),
                        &x,
                    )]]);
                    let u_inv = u.inverse()?;
                    let ch = chern_character_odd(&u, &u_inv, *level)?;
                    report.push_result(serde_json::json!({
                        "class": "1 + b1 (invertible)",
                        "degree": ch.degree,
                        "coordinates": ch.class.entries.iter()
                            .map(|(i, c)| serde_json::json!([i, c.to_string()]))
                            .collect::<Vec<_>>(),
                    }));
                    report.assertions.push(Assertion::plain(
                        "odd Chern character is a cyclic cycle",
                        ch.boundary_is_zero,
                    ));
                }
                other => return Err(NchError::Parse(format!("unknown kind {other:?}"))),
            }
            Ok(report)
        }
        Command::Index => {
            let mut report = Report::new("index", serde_json::json!({}));
            // headline values with the two routes per instance
            {
                let r = nch::algebra::builtin("dual").unwrap();
                let ext = nch::algebra::Extension::new(&r, &[SparseVec::unit(1)])?;
                let tau = SparseVec::collect(vec![
                    (0, Scalar::one()),
                    (1, Scalar::from_int(3)),
                ]);
                let ht = nch::kindex::EvenHigherTrace::new(ext, 1, tau)?;
                let e = RingMatrix::from_rows(vec![vec![ht.ext.quotient.one_element()]]);
                let direct = nch::kindex::even_index_direct(&ht, &e, 1, 0)?;
                let paired = nch::kindex::even_index_paired(&ht, &e, 1, 0)?;
                report.push_result(serde_json::json!({
                    "case": "even, R = dual numbers, I = (eps), m = 1, e = 1",
                    "direct": direct.to_string(),
                    "paired": paired.to_string(),
                    "equal": direct == paired,
                }));
            }
            {
                let theorem =
                    nch::toeplitz::odd_toeplitz_theorem(&LaurentSymbol::z(1), 8)?;
                report.push_result(serde_json::json!({
                    "case": "odd, Toeplitz model, u = z",
                    "direct": theorem.direct.to_string(),
                    "paired": theorem.paired.to_string(),
                    "equal": theorem.equal,
                }));
            }
            report.assertions.extend(nch::suites::index_suite()?);
            Ok(report)
        }
        Command::Toeplitz { symbol, n_range } => {
            let f = LaurentSymbol::parse(symbol)?;
            let (lo, hi) = parse_range(n_range)?;
            let rep = index_report(&f, lo..=hi)?;
            let mut report = Report::new(
                "toeplitz",
                serde_json::json!({"symbol": symbol, "N": n_range}),
            );
            report.push_result(serde_json::json!({
                "winding": rep.winding,
                "winding_method": format!("{:?}", rep.winding_method),
                "phi(f^-1, f)": rep.phi_inverse_pairing.to_string(),
                "partial_traces": rep.partial_traces.iter()
                    .map(|(n, v)| serde_json::json!([n, v.to_string()]))
                    .collect::<Vec<_>>(),
                "stabilized_index": rep.stabilized_index.as_ref().map(|v| v.to_string()),
                "dim_ker": rep.kernel_dim,
                "dim_coker": rep.cokernel_dim,
                "sign_convention": rep.sign_convention,
            }));
            let stabilized_matches = match &rep.stabilized_index {
                Some(v) => *v == -Scalar::from_int(rep.winding),
                None => false,
            };
            report.assertions.push(Assertion::new(
                "|stabilized index| = |winding| (index = -winding)",
                stabilized_matches,
                format!("winding {}", rep.winding),
            ));
            let _ = SparseVec::zero(); // keep linkage of linalg symbols explicit
            Ok(report)
        }
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), NchError> {
    let parts: Vec<&str> = text.split("..").collect();
    if parts.len() != 2 {
        return Err(NchError::Parse(format!("range must be lo..hi, got {text:?}")));
    }
    let lo = parts[0]
        .parse()
        .map_err(|_| NchError::Parse(format!("bad range start {:?}", parts[0])))?;
    let hi = parts[1]
        .parse()
        .map_err(|_| NchError::Parse(format!("bad range end {:?}", parts[1])))?;
    if hi < lo {
        return Err(NchError::Parse("empty range".into()));
    }
    Ok((lo, hi))
}

fn main() {
    let format: Format = {
        // clap parses --format globally; re-parse cheaply
        let args: Vec<String> = std::env::args().collect();
        args.iter()
            .position(|a| a == "--format")
            .and_then(|i| args.get(i + 1))
            .map(|s| s.parse().unwrap_or(Format::Table))
            .unwrap_or(Format::Table)
    };
    match run() {
        Ok(report) => {
            print!("{}", report.emit(format));
            if report.all_pass() {
                std::process::exit(0);
            } else {
                std::process::exit(1);
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code_for(&err));
        }
    }
}
