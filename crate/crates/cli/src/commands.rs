//! One function per subcommand.

use lks_cluster::{synthesize_lks, validate_lks, DensityPlan, SkewLksGraph};
use lks_config::{find_configuration, Config, ConfigError, ConfigWitness, TreeStats};
use lks_core::{fmt_q, q, validate_embedding, RootedTree, Q};
use lks_embed::fixtures::{fixture, tree_choice};
use lks_embed::{engine_stats, master_embed, EmbedError};
use lks_oracle::{
    bistar_check, conjecture_scan, floor_rk1, gen_extremal, gen_tight_tree, ramsey_check, OracleError, RamseyVerdict, ScanMode,
    DEFAULT_BUDGET,
};
use lks_regularity::Method;
use lks_tree_decomp::{fine_partition, oriented_forests, verify_fine_partition, DecompError, FinePartition};
use serde_json::{json, Value};

use crate::input::{self, rational};
use crate::{Cli, Cmd, Failure, Outcome};

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.cmd {
        Cmd::FinePartition(a) => cmd_fine_partition(&input::tree(&a.tree)?, a.ell),
        Cmd::FindConfig(a) => cmd_find_config(a),
        Cmd::Embed(a) => cmd_embed(a),
        Cmd::Scan(a) => cmd_scan(cli, a),
        Cmd::Extremal(a) => cmd_extremal(a),
        Cmd::Bistar(a) => cmd_bistar(a.k),
        Cmd::Ramsey(a) => cmd_ramsey(a),
        Cmd::Synthesize(a) => cmd_synthesize(cli, a),
        Cmd::ValidateLks(a) => cmd_validate(cli, a),
    }
}

fn oracle_err(e: OracleError) -> Failure {
    Failure::Usage(e.to_string())
}

fn partition(t: &RootedTree, ell: usize) -> Result<FinePartition, Failure> {
    fine_partition(t, ell).map_err(|e| match e {
        DecompError::BadEll { .. } => Failure::Usage(e.to_string()),
        e => Failure::Usage(format!("fine partition: {e}")),
    })
}

fn stats_of(t: &RootedTree, fp: &FinePartition, k: usize) -> Result<TreeStats, Failure> {
    let forests = oriented_forests(fp, t, 1).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(engine_stats(&forests, k))
}

fn cmd_fine_partition(t: &RootedTree, ell: usize) -> Result<Outcome, Failure> {
    let fp = partition(t, ell)?;
    let violations: Vec<String> = verify_fine_partition(t, &fp).iter().map(ToString::to_string).collect();
    let w = fp.wa.len() + fp.wb.len();
    Ok(Outcome {
        summary: format!("violations: [{}]; |W| = {w}", violations.join("; ")),
        ok: violations.is_empty(),
        result: json!({ "partition": fp, "violations": violations, "w_size": w, "k": t.k(), "ell": ell }),
    })
}

fn cmd_find_config(a: &crate::FindConfigArgs) -> Result<Outcome, Failure> {
    let g = input::bundle(&input::load_json(&a.bundle)?)?;
    let eta = match &a.eta {
        Some(s) => rational(s)?,
        None => g.params.eta,
    };
    let s = &a.stats;
    let stats = match (&s.tree, s.a1, s.a2, s.b1, s.b2, &s.r_tilde) {
        (Some(spec), ..) => {
            let t = input::tree(spec)?;
            let ell = s.ell.ok_or_else(|| Failure::Usage("--tree needs --ell".into()))?;
            stats_of(&t, &partition(&t, ell)?, g.params.k)?
        }
        (None, Some(a1), Some(a2), Some(b1), Some(b2), Some(rt)) => TreeStats { a1, a2, b1, b2, r_tilde: rational(rt)? },
        _ => return Err(Failure::Usage("give --tree/--ell or all of --a1 --a2 --b1 --b2 --r-tilde".into())),
    };
    configuration(&g, &stats, &eta)
}

fn configuration(g: &SkewLksGraph, stats: &TreeStats, eta: &Q) -> Result<Outcome, Failure> {
    match find_configuration(&g.cluster_graph(), stats, eta) {
        Ok(w) => Ok(Outcome {
            summary: format!("config \"{:?}\"", w.config),
            ok: true,
            result: json!({ "stats": stats, "witness": w }),
        }),
        Err(ConfigError::InvalidStats(m)) => Err(Failure::Usage(format!("invalid tree statistics: {m}"))),
        Err(e @ ConfigError::NotLks(_)) => Ok(Outcome {
            summary: e.to_string(),
            ok: false,
            result: json!({ "stats": stats, "error": e.to_string() }),
        }),
        Err(ConfigError::CounterexampleCandidate(ps)) => Ok(Outcome {
            summary: "no configuration found; counterexample candidate".into(),
            ok: false,
            result: json!({ "stats": stats, "proof_sets": ps }),
        }),
    }
}

fn cmd_embed(a: &crate::EmbedArgs) -> Result<Outcome, Failure> {
    let v = input::load_json(&a.bundle)?;
    let g = input::bundle(&v)?;
    let t = match &a.tree {
        Some(spec) => input::tree(spec)?,
        None => input::tree_from_value(&v).ok_or_else(|| Failure::Usage("no tree: pass --tree".into()))??,
    };
    let ell = a
        .ell
        .or_else(|| v.get("ell").and_then(Value::as_u64).map(|x| x as usize))
        .ok_or_else(|| Failure::Usage("no ell: pass --ell".into()))?;
    let delta = match (a.delta.as_deref(), v.get("delta").and_then(Value::as_str)) {
        (Some(s), _) | (None, Some(s)) => rational(s)?,
        _ => q(1, 20),
    };
    let fp = partition(&t, ell)?;
    let stats = stats_of(&t, &fp, g.params.k)?;
    let given = match &a.witness {
        Some(path) => Some(input::witness(&input::load_json(path)?).ok_or_else(|| Failure::Usage(format!("{path}: no witness")))??),
        None => input::witness(&v).transpose()?,
    };
    let w: ConfigWitness = match given {
        Some(w) => w,
        None => match find_configuration(&g.cluster_graph(), &stats, &g.params.eta) {
            Ok(w) => w,
            Err(ConfigError::InvalidStats(m)) => return Err(Failure::Usage(m)),
            Err(_) => return configuration(&g, &stats, &g.params.eta),
        },
    };
    match master_embed(&g, &t, &fp, &w, &delta) {
        Ok(out) => {
            let valid = validate_embedding(&out.certificate, &t, &g.host);
            let mut result = json!({
                "case": out.case,
                "certificate": out.certificate,
                "valid": valid,
                "stats": out.stats,
                "reports": out.reports,
                "delta": fmt_q(&delta),
            });
            if a.trace {
                result["trace"] = json!(out.trace);
            }
            Ok(Outcome {
                summary: format!("case {:?}: embedded {} vertices, certificate {}", out.case, t.n(), if valid { "valid" } else { "INVALID" }),
                ok: valid,
                result,
            })
        }
        Err(e) => {
            let failed = match e.root() {
                EmbedError::Precondition { failed, .. } => json!(failed),
                _ => json!([]),
            };
            Ok(Outcome {
                summary: format!("embedding failed: {e}"),
                ok: false,
                result: json!({ "case": w.config, "error": e.to_string(), "root": e.root().to_string(), "failed": failed }),
            })
        }
    }
}

fn cmd_scan(cli: &Cli, a: &crate::ScanArgs) -> Result<Outcome, Failure> {
    let r = rational(&a.r)?;
    let mode = match (a.exhaustive, a.trials) {
        (true, _) => ScanMode::Exhaustive,
        (false, Some(trials)) => ScanMode::Random { seed: cli.seed, trials },
        (false, None) => return Err(Failure::Usage("give --exhaustive or --trials".into())),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.jobs.unwrap_or(0)).build()?;
    let rep = pool.install(|| conjecture_scan(a.k, &r, a.n, &mode)).map_err(oracle_err)?;
    Ok(Outcome {
        summary: format!(
            "{} counterexamples ({} hosts checked, {} skipped, {} pairs)",
            rep.counterexamples.len(),
            rep.hosts_checked,
            rep.hosts_skipped,
            rep.pairs_checked
        ),
        ok: rep.counterexamples.is_empty() && rep.disagreements == 0 && rep.inconclusive == 0,
        result: json!(rep),
    })
}

fn cmd_extremal(a: &crate::ExtremalArgs) -> Result<Outcome, Failure> {
    let r = rational(&a.r)?;
    let ex = gen_extremal(a.k, &r, a.copies).map_err(oracle_err)?;
    let f = floor_rk1(a.k, &r);
    let mut lines = vec![format!(
        "blocks of order {}: clique {}, independent {}; {} vertices of degree {}",
        ex.profile.block_order, ex.profile.clique, ex.profile.independent, ex.profile.degree_k_total, a.k
    )];
    let mut checks = serde_json::Map::new();
    let mut ok = true;
    if a.check_path {
        let found = lks_oracle::brute_force_embed(&RootedTree::path(2 * f), &ex.graph, DEFAULT_BUDGET)?.is_some();
        lines.push(format!("no P{}: {}", 2 * f, if found { "REFUTED" } else { "confirmed" }));
        checks.insert("no_path".into(), json!(!found));
        ok &= !found;
    }
    if a.check_tree {
        let t = gen_tight_tree(a.k, &r).map_err(oracle_err)?;
        let found = lks_oracle::brute_force_embed(&t, &ex.graph, DEFAULT_BUDGET)?.is_some();
        lines.push(format!("no tight tree: {}", if found { "REFUTED" } else { "confirmed" }));
        checks.insert("no_tight_tree".into(), json!(!found));
        checks.insert("tight_tree".into(), json!(t.to_file()));
        ok &= !found;
    }
    let mut result = json!({ "profile": ex.profile, "checks": checks });
    if a.emit_graph {
        result["graph"] = json!(ex.graph.to_edge_list());
    }
    Ok(Outcome { summary: lines.join("\n"), ok, result })
}

fn cmd_bistar(k: usize) -> Result<Outcome, Failure> {
    let absent = bistar_check(k).map_err(oracle_err)?;
    let a = (k - 1) / 2;
    Ok(Outcome {
        summary: format!("B{a},{a} not in K{a},{k}: {}", if absent { "confirmed" } else { "REFUTED" }),
        ok: absent,
        result: json!({ "k": k, "no_embedding": absent }),
    })
}

fn cmd_ramsey(a: &crate::RamseyArgs) -> Result<Outcome, Failure> {
    let trees = a.trees.iter().map(|s| input::tree(s)).collect::<Result<Vec<_>, _>>()?;
    let v = ramsey_check(&trees, a.n, a.budget).map_err(oracle_err)?;
    let (summary, ok) = match &v {
        RamseyVerdict::Forced { .. } => ("forced".to_string(), true),
        RamseyVerdict::NotForced { .. } => ("not forced: avoiding colouring found".to_string(), false),
        RamseyVerdict::Inconclusive { nodes } => (format!("inconclusive after {nodes} nodes"), false),
    };
    Ok(Outcome {
        summary,
        ok,
        result: json!({ "trees": a.trees, "n": a.n, "verdict": v }),
    })
}

fn cmd_synthesize(cli: &Cli, a: &crate::SynthesizeArgs) -> Result<Outcome, Failure> {
    if let Some(name) = &a.fixture {
        let case: Config = serde_json::from_value(json!(name)).map_err(|_| Failure::Usage(format!("unknown fixture {name:?}; use A, B, C or D")))?;
        let f = fixture(case, cli.seed);
        let bundle: Value = serde_json::from_str(&f.g.to_json())?;
        return Ok(Outcome {
            summary: format!("fixture {case:?}: n = {}, k = {}", f.g.host.n(), f.g.params.k),
            ok: true,
            result: json!({
                "bundle": bundle,
                "tree": f.tree.to_file(),
                "ell": tree_choice(case).1,
                "witness": f.witness,
                "delta": fmt_q(&f.delta),
            }),
        });
    }
    let path = a.plan.as_deref().expect("clap requires plan or fixture");
    let plan: DensityPlan = serde_json::from_value(input::load_json(path)?)?;
    let g = synthesize_lks(&plan, cli.seed)?;
    Ok(Outcome {
        summary: format!("bundle: n = {}, {} L- and {} S-clusters", g.host.n(), g.l_clusters.len(), g.s_clusters.len()),
        ok: true,
        result: serde_json::from_str(&g.to_json())?,
    })
}

fn cmd_validate(cli: &Cli, a: &crate::ValidateArgs) -> Result<Outcome, Failure> {
    let g = input::bundle(&input::load_json(&a.bundle)?)?;
    let method = if a.exhaustive {
        Method::Exhaustive
    } else {
        Method::Sampled {
            seed: cli.seed,
            trials: cli.regularity_budget,
        }
    };
    let v = validate_lks(&g, method);
    Ok(Outcome {
        summary: format!("{} skew-LKS violations", v.len()),
        ok: v.is_empty(),
        result: json!({ "violations": v }),
    })
}
