use std::path::Path;

use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;
use spackle::analysis::{analyze, sparsity, verify_fault_tolerance, CodeReport, FtMode, FtReport};
use spackle::circuit::{parse_circuit, verify_good_ed, GoodEdReport, SpacetimeCircuit};
use spackle::codemap::{build_code_with, parse_stabilizer_file, Orientation, stabilizer_text, CodeFile};
use spackle::gadgets::{
    compose_ed_circuit, edge_expansion, gadget_accounting, make_graph, sparsify, synth_gadget, Graph, GraphPolicy,
};
use spackle::pauli::PauliGroup;
use spackle::scaling::{concat_local_plan, concatenate, embed_local, epsilon_sweep, gv_exists, gv_sum};

use crate::report::{digest, emit, read, write, CliError, CliResult, InputDigest};
use crate::{Command, Mode, Search};

fn load_stabilizers(path: &Path) -> CliResult<(PauliGroup, InputDigest)> {
    let g = parse_stabilizer_file(&read(path)?)?;
    let d = digest(path, &stabilizer_text(&g));
    Ok((g, d))
}

fn load_circuit(path: &Path) -> CliResult<(SpacetimeCircuit, InputDigest)> {
    let c = parse_circuit(&read(path)?)?;
    let d = digest(path, &c.to_text());
    Ok((c, d))
}

fn write_opt(path: Option<&Path>, text: impl FnOnce() -> String) -> CliResult<()> {
    match path {
        Some(p) => write(p, &text()),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    k: usize,
    distance: String,
    s_g: usize,
    s_q: usize,
}

impl From<&CodeReport> for Summary {
    fn from(r: &CodeReport) -> Self {
        Summary { n: r.n, k: r.k, distance: r.distance_display(), s_g: r.s_g, s_q: r.s_q }
    }
}

pub fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Sparsify { stabilizers, policy, seed, search, out_code, out_circuit, report } => {
            let (base, input) = load_stabilizers(&stabilizers)?;
            let Search { max_distance, threads } = search;
            let (code, rep) = sparsify(&base, policy.into(), seed, max_distance, threads)?;
            write_opt(out_code.as_deref(), || CodeFile::from_code(&code).to_text())?;
            write_opt(out_circuit.as_deref(), || code.circuit().to_text())?;
            let ok = rep.k_preserved && rep.d_preserved != Some(false) && rep.isomorphism.pass;
            let summary = Summary::from(&rep.code);
            emit(report.as_deref(), "sparsify", Some(seed), vec![input], json!({ "summary": summary, "details": rep }))?;
            if !ok {
                return Err(CliError::Failed("sparsified code does not inherit the base parameters".into()));
            }
            Ok(())
        }
        Command::Analyze { code, search, report } => {
            let file = CodeFile::parse(&read(&code)?)?;
            let input = digest(&code, &file.to_text());
            let g = file.group()?;
            let rep = analyze(&g, search.max_distance, search.threads)?;
            let summary = Summary::from(&rep);
            emit(report.as_deref(), "analyze", None, vec![input], json!({ "summary": summary, "details": rep }))
        }
        Command::Verify { circuit, base, max_weight, mode, strict, all_verdicts, report } => {
            let (mut c, cin) = load_circuit(&circuit)?;
            let mut inputs = vec![cin];
            let canonicalized = !c.is_canonical();
            if canonicalized {
                c = c.pad_and_canonicalize();
            }
            let good_ed: Option<GoodEdReport> = match &base {
                Some(p) => {
                    let (g, d) = load_stabilizers(p)?;
                    inputs.push(d);
                    Some(verify_good_ed(&c, &g)?)
                }
                None => None,
            };
            let mode = match mode {
                Mode::Symbolic => FtMode::Symbolic,
                Mode::Exact => FtMode::Exact,
            };
            let ft: Option<FtReport> =
                if max_weight > 0 { Some(verify_fault_tolerance(&c, max_weight, mode, all_verdicts)?) } else { None };
            let mut failures = Vec::new();
            if let Some(g) = &good_ed {
                if !g.good {
                    failures.push(format!("not a good error-detecting circuit: {}", g.failures.join("; ")));
                }
            }
            if let Some(f) = &ft {
                for v in &f.undetectable_violations {
                    eprintln!("undetectable violation: {} ({})", v.pattern, v.verdict);
                }
                if !f.undetectable_fault_tolerant {
                    failures.push(format!("{} undetectable violations", f.undetectable_violations.len()));
                }
                if strict && !f.fault_tolerant {
                    for v in &f.violations {
                        eprintln!("violation: {} ({})", v.pattern, v.verdict);
                    }
                    failures.push(format!("{} violations of the literal definition", f.violations.len()));
                }
            }
            emit(
                report.as_deref(),
                "verify",
                None,
                inputs,
                json!({ "canonicalized": canonicalized, "good_ed": good_ed, "fault_tolerance": ft }),
            )?;
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Failed(failures.join("; ")))
            }
        }
        Command::Gadget { pauli, graph, seed, out, report } => {
            let target = PauliGroup::parse_hermitian(&[pauli.as_str()])?.generators()[0].clone();
            let w = target.weight();
            let g = match graph.as_str() {
                "complete" => Graph::complete(w),
                "path" => Graph::path(w),
                "cycle" => Graph::new(w, (0..w).map(|i| (i, (i + 1) % w)).collect())?,
                "random6" | "auto" => make_graph(w, graph.parse::<GraphPolicy>()?, seed)?.graph,
                list => parse_edges(list)?,
            };
            let spec = synth_gadget(&target, &g)?;
            write_opt(out.as_deref(), || spec.circuit.to_text())?;
            let code = build_code_with(&spec.circuit, Orientation::Balanced)?;
            let (s_g, s_q) = sparsity(code.gauge());
            let expansion = if g.num_vertices() >= 2 { Some(edge_expansion(&g)?.to_string()) } else { None };
            emit(
                report.as_deref(),
                "gadget",
                Some(seed),
                Vec::new(),
                json!({
                    "target": spec.target.to_string(),
                    "vertices": g.num_vertices(),
                    "edges": g.to_edge_list(),
                    "expansion": expansion,
                    "vertex_steps": spec.vertex_steps,
                    "accounting": gadget_accounting(&spec),
                    "s_g": s_g,
                    "s_q": s_q,
                }),
            )
        }
        Command::EdCircuit { stabilizers, policy, seed, out, report } => {
            let (base, input) = load_stabilizers(&stabilizers)?;
            let ed = compose_ed_circuit(&base, policy.into(), seed)?;
            write_opt(out.as_deref(), || ed.circuit.to_text())?;
            emit(
                report.as_deref(),
                "ed-circuit",
                Some(seed),
                vec![input],
                json!({
                    "wires": ed.circuit.num_wires(),
                    "depth": ed.circuit.depth(),
                    "total_qubits": ed.total_qubits(),
                    "qubit_bound": ed.qubit_bound(base.num_qubits()),
                    "gadgets": ed.gadgets,
                }),
            )
        }
        Command::Concat { stabilizers, levels, dimension, out_code, table, report } => {
            let (base, input) = load_stabilizers(&stabilizers)?;
            let c = concatenate(&base, levels)?;
            write_opt(out_code.as_deref(), || stabilizer_text(&c.group()))?;
            let plan = match dimension {
                Some(d) => Some(concat_local_plan(&base, levels, d)?),
                None => None,
            };
            if let (Some(p), Some(path)) = (&plan, &table) {
                write(path, &p.levels_csv()?)?;
            }
            let valid = c.structurally_valid();
            emit(
                report.as_deref(),
                "concat",
                None,
                vec![input],
                json!({
                    "n": c.n,
                    "levels": c.m,
                    "generators": c.generators.len(),
                    "rank": c.rank,
                    "inventory": c.inventory,
                    "structurally_valid": valid,
                    "logical_x": c.logical_x.to_string(),
                    "logical_z": c.logical_z.to_string(),
                    "plan": plan,
                }),
            )?;
            if !valid {
                return Err(CliError::Failed("concatenated code failed the structural check".into()));
            }
            Ok(())
        }
        Command::Localize {
            stabilizers,
            dimension,
            policy,
            seed,
            search,
            out_circuit,
            out_code,
            out_spec,
            placement,
            report,
        } => {
            let (base, input) = load_stabilizers(&stabilizers)?;
            let (c, code, spec) = embed_local(&base, dimension, policy.into(), seed)?;
            write_opt(out_circuit.as_deref(), || c.to_text())?;
            write_opt(out_code.as_deref(), || CodeFile::from_code(&code).to_text())?;
            if let Some(p) = &out_spec {
                write(p, &(serde_json::to_string_pretty(&spec).map_err(|e| CliError::Input(e.to_string()))? + "\n"))?;
            }
            write_opt(placement.as_deref(), || spec.placement_csv())?;
            let good_ed = verify_good_ed(&c, &base)?;
            let base_rep = analyze(&base, search.max_distance, search.threads)?;
            let rep = analyze(code.gauge(), search.max_distance, search.threads)?;
            let k_preserved = rep.k == base_rep.k;
            let d_preserved = (base_rep.d_is_exact && rep.d_is_exact).then_some(base_rep.d == rep.d);
            emit(
                report.as_deref(),
                "localize",
                Some(seed),
                vec![input],
                json!({
                    "summary": Summary::from(&rep),
                    "base": Summary::from(&base_rep),
                    "sides": spec.sides,
                    "depth": spec.depth,
                    "layers": spec.layers,
                    "routing_depths": spec.routing_depths,
                    "spatial_diameter": spec.spatial_diameter,
                    "time_diameter": spec.time_diameter,
                    "spatial_bound": spec.spatial_bound,
                    "time_bound": spec.time_bound,
                    "local": spec.local,
                    "good_ed": good_ed.good,
                    "k_preserved": k_preserved,
                    "d_preserved": d_preserved,
                }),
            )?;
            let mut failures = Vec::new();
            if !spec.local {
                failures.push(format!(
                    "generator box {}x{} exceeds {}x{}",
                    spec.spatial_diameter, spec.time_diameter, spec.spatial_bound, spec.time_bound
                ));
            }
            if !good_ed.good {
                failures.push("embedded circuit is not a good error-detecting circuit".into());
            }
            if !k_preserved || d_preserved == Some(false) {
                failures.push("code parameters changed".into());
            }
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Failed(failures.join("; ")))
            }
        }
        Command::Gv { n, k, d, n0, delta, b, levels, report } => {
            let gv = match (n, k, d) {
                (Some(n), Some(k), Some(d)) => {
                    let exists = gv_exists(n, k, d)?;
                    Some(json!({
                        "n": n, "k": k, "d": d,
                        "sum": gv_sum(n, d).to_string(),
                        "bound": format!("2^{}", n - k),
                        "exists": exists,
                    }))
                }
                _ => None,
            };
            let sweep = match (n0, delta) {
                (Some(n0), Some(delta)) => {
                    let delta: Ratio<u64> =
                        delta.parse().map_err(|_| CliError::Input(format!("bad delta `{delta}`")))?;
                    let rows: Vec<_> = epsilon_sweep(n0, delta, b, levels)?
                        .into_iter()
                        .map(|e| {
                            json!({
                                "m": e.m,
                                "n": e.n.to_string(),
                                "d": e.d.to_string(),
                                "eps_actual": e.eps_actual,
                                "eps_formula": e.eps_formula,
                                "holds": e.holds,
                            })
                        })
                        .collect();
                    Some(json!({ "n0": n0, "delta": delta.to_string(), "b": b, "rows": rows }))
                }
                _ => None,
            };
            if gv.is_none() && sweep.is_none() {
                return Err(CliError::Input("give --n --k --d and/or --n0 --delta".into()));
            }
            emit(report.as_deref(), "gv", None, Vec::new(), json!({ "gv": gv, "epsilon": sweep }))
        }
    }
}

fn parse_edges(list: &str) -> CliResult<Graph> {
    let bad = || CliError::Input(format!("graph must be complete, path, cycle, random6 or an edge list, got `{list}`"));
    let mut edges = Vec::new();
    for part in list.split(',') {
        let (a, b) = part.split_once('-').ok_or_else(bad)?;
        edges.push((a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?));
    }
    let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    Ok(Graph::new(n, edges)?)
}
