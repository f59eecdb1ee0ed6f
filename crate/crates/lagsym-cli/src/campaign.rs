use crate::report::{Entry, Report, Status};
use crate::{parse_case, parse_table, CaseArgs, Cli, Command, NoetherArgs, UsageError, Verify};
use lagsym::corpus::{
    build_system, builtin_conservation_laws, builtin_equivalence_generators, builtin_generators, corpus_context,
    extension_subalgebras, lagr_flat_ops8, parse_override, published_commutators, table, table_ids, CaseId, TableId,
};
use lagsym::expr::{Bindings, Expr};
use lagsym::noether::{direct_correspondence, noether_builtin_with, noether_table, verify_conservation_law, NoetherReport, SymmetryKind};
use lagsym::symmetry::{
    check_generator, equivalence_action_report, is_ideal, is_subalgebra, structure_table, verify_equivalence_list, verify_table,
};
use lagsym_sim::{LawId, SimConfig, SimError};
use rayon::prelude::*;
use std::time::Instant;

pub(crate) fn execute(cli: &Cli) -> Result<Report, UsageError> {
    match &cli.command {
        Command::Verify(Verify::Symmetries(a)) => symmetries(a),
        Command::Verify(Verify::Claws { case, law }) => claws(case, law.as_deref()),
        Command::Verify(Verify::Tables { tables }) => tables_campaign(tables),
        Command::Verify(Verify::Algebra) => Ok(algebra()),
        Command::Verify(Verify::Equivalence { case }) => equivalence(case),
        Command::Noether(a) => noether(a),
        Command::Simulate { config } => simulate(config),
        Command::List => Ok(list()),
    }
}

fn timed(f: impl FnOnce() -> Entry) -> Entry {
    let start = Instant::now();
    let mut e = f();
    e.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    e
}

fn strings(es: &[Expr]) -> Vec<String> {
    es.iter().map(|e| e.to_string()).collect()
}

fn element_override(name: &str, text: Option<&str>) -> Result<Bindings, UsageError> {
    match text {
        None => Ok(Bindings::new()),
        Some(t) => parse_override(&corpus_context(), &format!("{name}={t}")).map_err(|e| UsageError(format!("--{name}: {e}"))),
    }
}

fn sigma_override(case: CaseId, sigma: Option<&str>) -> Result<Bindings, UsageError> {
    if sigma.is_some() && !case.has_sigma() {
        return Err(UsageError(format!("case `{case}` has no conductivity element")));
    }
    element_override("sigma", sigma)
}

fn symmetries(a: &CaseArgs) -> Result<Report, UsageError> {
    let case = parse_case(&a.case)?;
    let overrides = sigma_override(case, a.sigma.as_deref())?;
    let base = build_system(case, &overrides).map_err(|e| UsageError(e.to_string()))?;
    let results = builtin_generators(case)
        .par_iter()
        .map(|g| {
            timed(|| {
                let sys = if g.requires.is_empty() { Ok(base.clone()) } else { base.with_overrides(&g.requires) };
                let sys = match sys {
                    Ok(s) => s,
                    Err(e) => return Entry::new(&g.id, false).detail(e.to_string()),
                };
                let mut entry = match check_generator(&g.generator, &sys) {
                    Ok(r) => Entry::from_residuals(&g.id, strings(&r.residuals)),
                    Err(e) => Entry::new(&g.id, false).detail(e.to_string()),
                };
                if let Some(p) = &g.printed {
                    let printed_ok = check_generator(p, &sys).map(|r| r.admitted).unwrap_or(false);
                    entry = entry.detail(if printed_ok { "printed form also admitted" } else { "printed form not admitted" });
                }
                if let Some(n) = &g.note {
                    entry = entry.detail(n);
                }
                entry
            })
        })
        .collect();
    Ok(Report::new(format!("verify symmetries {}", case), results))
}

fn claws(a: &CaseArgs, law: Option<&str>) -> Result<Report, UsageError> {
    let case = parse_case(&a.case)?;
    let overrides = sigma_override(case, a.sigma.as_deref())?;
    let mut laws = builtin_conservation_laws(case);
    if let Some(l) = law {
        laws.retain(|c| c.short_id() == l || c.id == l);
        if laws.is_empty() {
            return Err(UsageError(format!("case `{case}` has no law `{l}`")));
        }
    }
    let sys = build_system(case, &overrides).map_err(|e| UsageError(e.to_string()))?;
    let results = laws
        .par_iter()
        .map(|cl| {
            timed(|| {
                let entry = match verify_conservation_law(cl, &sys) {
                    Ok(r) => Entry::from_residuals(&cl.id, vec![r.to_string()]),
                    Err(e) => Entry::new(&cl.id, false).detail(e.to_string()),
                };
                match &cl.note {
                    Some(n) => entry.detail(n),
                    None => entry,
                }
            })
        })
        .collect();
    Ok(Report::new(format!("verify claws {}", case), results))
}

fn noether_entry(r: &NoetherReport) -> Entry {
    let Some(law) = &r.law else {
        return Entry::info(&r.generator).detail("not a variational or divergence symmetry");
    };
    let residual = r.residual.as_ref().map(|e| e.to_string()).unwrap_or_default();
    let kind = if r.kind == SymmetryKind::Variational { "variational" } else { "divergence" };
    Entry::from_residuals(&law.id, vec![residual]).detail(format!("{kind}; Tt = {}; Ts = {}", law.tt, law.ts))
}

fn tables_campaign(names: &[String]) -> Result<Report, UsageError> {
    let ids: Vec<TableId> = if names.is_empty() {
        table_ids().to_vec()
    } else {
        names.iter().map(|n| parse_table(n)).collect::<Result<_, _>>()?
    };
    let mut results = Vec::new();
    for id in &ids {
        let start = Instant::now();
        let rows = match verify_table(*id) {
            Ok(rows) => rows,
            Err(e) => {
                results.push(Entry::new(format!("table.{id}"), false).detail(e.to_string()));
                continue;
            }
        };
        let per_row = start.elapsed().as_secs_f64() * 1e3 / rows.len().max(1) as f64;
        for row in rows {
            let used = row.corrected.as_ref().unwrap_or(&row.printed);
            let residuals: Vec<String> = used.reports.iter().flat_map(|r| strings(&r.residuals)).collect();
            let mut e = Entry::from_residuals(&row.id, residuals).detail(format!("element: {}", used.element));
            e.status = if row.pass { Status::Pass } else { Status::Fail };
            if row.corrected.is_some() {
                let printed = if row.printed.admitted { "admitted" } else { "not admitted" };
                e = e.detail(format!("printed form {printed}; corrected form checked"));
            }
            if !row.perturbed_rejected {
                e = e.detail("perturbed element not rejected");
            }
            if let Some(n) = &row.note {
                e = e.detail(n);
            }
            e.timing_ms = Some(per_row);
            results.push(e);
        }
        if id.check() == lagsym::corpus::RowCheck::Variational {
            match noether_table(*id) {
                Ok(reps) => results.extend(reps.iter().map(noether_entry)),
                Err(e) => results.push(Entry::new(format!("noether.{id}"), false).detail(e.to_string())),
            }
        }
    }
    let label: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
    Ok(Report::new(format!("verify tables {}", label.join(" ")), results))
}

fn algebra() -> Report {
    let ops = lagr_flat_ops8();
    let mut results = Vec::new();
    match structure_table(&ops) {
        Ok(t) => {
            let bad = t.mismatches(&published_commutators());
            let mut e = Entry::new("algebra.commutators", bad.is_empty())
                .detail(format!("{} entries compared", t.dim() * t.dim()));
            if !bad.is_empty() {
                let pairs: Vec<String> = bad.iter().map(|(i, j)| format!("[Y{i}, Y{j}]")).collect();
                e = e.detail(format!("mismatch at {}", pairs.join(", ")));
            }
            results.push(e);
            results.push(Entry::new("algebra.antisymmetry", t.is_antisymmetric()));
            results.push(Entry::new("algebra.jacobi", t.jacobi_holds()));
        }
        Err(e) => results.push(Entry::new("algebra.commutators", false).detail(e.to_string())),
    }
    results.push(Entry::new("algebra.kernel-ideal", is_ideal(&ops[..5], &ops)));
    let subs: Vec<Entry> = extension_subalgebras()
        .par_iter()
        .map(|(name, gens)| Entry::new(format!("algebra.subalgebra.{name}"), is_subalgebra(gens)))
        .collect();
    results.extend(subs);
    match equivalence_action_report() {
        Ok(ms) => {
            for m in ms {
                let mut e = Entry::new(format!("algebra.adjoint.Y{}", m.index), m.inner_ok && m.equivalence_ok && m.generator_route_ok);
                let failed: Vec<&str> = [
                    (m.inner_ok, "inner automorphism"),
                    (m.equivalence_ok, "equivalence map"),
                    (m.generator_route_ok, "equivalence generator route"),
                ]
                .iter()
                .filter(|(ok, _)| !ok)
                .map(|(_, n)| *n)
                .collect();
                if !failed.is_empty() {
                    e = e.detail(format!("differs from {}", failed.join(", ")));
                }
                results.push(e);
            }
        }
        Err(e) => results.push(Entry::new("algebra.adjoint", false).detail(e.to_string())),
    }
    Report::new("verify algebra", results)
}

fn equivalence(case: &str) -> Result<Report, UsageError> {
    let case = parse_case(case)?;
    let results = match verify_equivalence_list(case) {
        Ok(reps) => reps
            .iter()
            .map(|r| {
                let mut res = strings(&r.residuals);
                res.extend(r.side_conditions.iter().map(|(n, e)| format!("{n}: {e}")));
                let mut e = Entry::from_residuals(&r.id, res);
                e.status = if r.admitted { Status::Pass } else { Status::Fail };
                e
            })
            .collect(),
        Err(e) => vec![Entry::new(format!("equivalence.{case}"), false).detail(e.to_string())],
    };
    Ok(Report::new(format!("verify equivalence {case}"), results))
}

fn noether(a: &NoetherArgs) -> Result<Report, UsageError> {
    let case = parse_case(&a.case)?;
    if !case.is_variational() {
        return Err(UsageError(format!("case `{case}` has no Lagrangian")));
    }
    if a.entropy.is_some() && case == CaseId::VariationalGamma2 {
        return Err(UsageError(format!("case `{case}` has no separate entropy element")));
    }
    let overrides = element_override("S", a.entropy.as_deref())?;
    let mut results: Vec<Entry> = match noether_builtin_with(case, &overrides) {
        Ok(reps) => reps.iter().map(noether_entry).collect(),
        Err(e) => vec![Entry::new(format!("noether.{case}"), false).detail(e.to_string())],
    };
    if case == CaseId::VariationalH0nz && a.entropy.is_none() {
        match direct_correspondence() {
            Ok(cs) => results.extend(cs.iter().map(|c| {
                Entry::new(format!("correspondence.{}.{}", c.generator, c.law), c.equivalent).detail(format!("factor {}", c.factor))
            })),
            Err(e) => results.push(Entry::new("correspondence", false).detail(e.to_string())),
        }
    }
    Ok(Report::new(format!("noether {case}"), results))
}

fn simulate(path: &std::path::Path) -> Result<Report, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let cfg = SimConfig::from_json(&text).map_err(|e| UsageError(e.to_string()))?;
    let report = match lagsym_sim::run(&cfg) {
        Ok(r) => r,
        Err(e @ SimError::BlowUp { .. }) => {
            return Ok(Report::new(format!("simulate {}", cfg.case), vec![Entry::new(format!("sim.{}", cfg.case), false).detail(e.to_string())]))
        }
        Err(e) => return Err(UsageError(e.to_string())),
    };
    let steps = report.final_state.steps as f64;
    let tol = 1e-12 * (steps / 1e3).max(1.0);
    let results = report
        .monitors
        .iter()
        .map(|m| {
            let exact = m.law.parse::<LawId>().map(|l| l.is_flux_form()).unwrap_or(false);
            let mut e = if exact { Entry::new(format!("monitor.{}", m.law), m.drift <= tol) } else { Entry::info(format!("monitor.{}", m.law)) };
            e.drift = Some(m.drift);
            e
        })
        .collect();
    let mut out = Report::new(format!("simulate {}", cfg.case), results);
    out.simulation = Some(serde_json::to_value(&report).expect("report serializes"));
    Ok(out)
}

fn list() -> Report {
    let mut results = Vec::new();
    for c in CaseId::ALL {
        results.push(Entry::info(format!("case:{}", c.id())));
    }
    for t in table_ids() {
        results.push(Entry::info(format!("table:{t}")).detail(format!("{} rows, case {}", table(*t).len(), t.case())));
    }
    for c in CaseId::ALL {
        for g in builtin_generators(c) {
            results.push(Entry::info(format!("generator:{}", g.id)));
        }
        for l in builtin_conservation_laws(c) {
            results.push(Entry::info(format!("law:{}", l.id)).detail(l.label.clone()));
        }
        for g in builtin_equivalence_generators(c).generators {
            results.push(Entry::info(format!("equivalence:{}", g.id)));
        }
    }
    for l in LawId::ALL {
        results.push(Entry::info(format!("monitor:{}", l.id())));
    }
    Report::new("list", results)
}
