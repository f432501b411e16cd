use std::fmt::Write as _;
use std::sync::Arc;

use morseward::chain::{ChainVector, Reduction};
use morseward::image::ComplexKind;
use morseward::intlinalg::AbelianGroup;
use morseward::morse::{reduce_filtered_complex, ReductionStats};
use morseward::persist::{persistent_generators, Persistence};
use morseward::{IntChain, IntComplex, IntReduction};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::args::{Command, Common, FormatArg};
use crate::error::CliError;
use crate::input::{load, Loaded};

/// Largest complex accepted by `--skip-reduction`.
pub const SKIP_REDUCTION_LIMIT: usize = 5000;

/// `(i, j, k, n)`; `k` only for triple groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Query {
    pub i: usize,
    pub j: usize,
    pub k: Option<usize>,
    pub n: usize,
}

/// Parses `--query` values; `all` expands to every `i <= j` and degree, and
/// no queries at all means `all`.
pub fn parse_queries(raw: &[String], steps: usize, degrees: usize) -> Result<Vec<Query>, CliError> {
    let all = || (0..degrees).flat_map(move |n| (1..=steps).flat_map(move |i| (i..=steps).map(move |j| Query { i, j, k: None, n })));
    if raw.is_empty() {
        return Ok(all().collect());
    }
    let mut out = Vec::new();
    for q in raw {
        if q == "all" {
            out.extend(all());
        } else {
            out.push(parse_query(q, steps, degrees)?);
        }
    }
    Ok(out)
}

fn parse_query(q: &str, steps: usize, degrees: usize) -> Result<Query, CliError> {
    let malformed = || CliError::Usage(format!("query {q:?}: expected i,j,n or i,j,k,n"));
    let parts: Vec<usize> = q.split(',').map(|p| p.trim().parse::<usize>()).collect::<Result<_, _>>().map_err(|_| malformed())?;
    let query = match parts[..] {
        [i, j, n] => Query { i, j, k: None, n },
        [i, j, k, n] => Query { i, j, k: Some(k), n },
        _ => return Err(malformed()),
    };
    let last = query.k.unwrap_or(query.j);
    if query.i > query.j || query.j > last || last > steps {
        return Err(CliError::Usage(format!("query {q:?}: need i <= j <= k <= {steps}")));
    }
    if query.n >= degrees {
        return Err(CliError::Usage(format!("query {q:?}: degree {} outside 0..{degrees}", query.n)));
    }
    Ok(query)
}

/// The original complex and the one persistence is computed on.
struct Pipeline {
    loaded: Loaded,
    rho: IntReduction,
    stats: Option<ReductionStats>,
}

impl Pipeline {
    fn build(args: &Common) -> Result<Self, CliError> {
        let loaded = load(args)?;
        let c = loaded.complex.clone();
        if args.skip_reduction {
            if c.num_cells() > SKIP_REDUCTION_LIMIT {
                return Err(CliError::Usage(format!(
                    "--skip-reduction is limited to {SKIP_REDUCTION_LIMIT} cells, input has {}",
                    c.num_cells()
                )));
            }
            return Ok(Self { loaded, rho: Reduction::identity(c), stats: None });
        }
        let out = reduce_filtered_complex(c)?;
        // persistence on the reduced complex is only valid at order 0
        let order = out.reduction.measured_homotopy_order();
        if order != 0 {
            return Err(CliError::Internal(format!("filtered reduction has homotopy order {order}")));
        }
        Ok(Self { loaded, rho: out.reduction, stats: Some(out.stats) })
    }

    fn persistence(&self) -> Persistence<BigInt> {
        Persistence::new(self.rho.dst.clone())
    }

    fn original(&self) -> &Arc<IntComplex> {
        &self.loaded.complex
    }

    /// Chain of the reduced complex carried to the original one by `g`.
    fn lift(&self, x: &IntChain) -> Result<IntChain, CliError> {
        if Arc::ptr_eq(&self.rho.src, &self.rho.dst) {
            return Ok(x.clone());
        }
        let coords = x.to_coords(&self.rho.dst).map_err(|e| CliError::Internal(e.to_string()))?;
        let n = x.degree;
        Ok(ChainVector::from_coords(&self.rho.src, n, &self.rho.g[n].mul_vec(&coords)))
    }
}

fn degree_name(kind: Option<ComplexKind>, n: usize) -> String {
    match (kind, n) {
        (Some(_), 0) => "vertices".into(),
        (Some(_), 1) => "edges".into(),
        (Some(k), 2) => k.top_cell_name().into(),
        _ => format!("cells of degree {n}"),
    }
}

fn count_line(kind: Option<ComplexKind>, counts: &[usize]) -> String {
    counts.iter().enumerate().map(|(n, c)| format!("{c} {}", degree_name(kind, n))).collect::<Vec<_>>().join(", ")
}

fn group_json(g: &AbelianGroup<BigInt>) -> Value {
    json!({
        "rank": g.rank,
        "torsion": g.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "components": g.labels(),
    })
}

fn chain_json(x: &IntChain) -> Value {
    Value::Array(x.coeffs.iter().map(|(id, c)| json!([id, c.to_string()])).collect())
}

fn query_name(q: &Query) -> String {
    match q.k {
        Some(k) => format!("H^{{{},{},{}}}_{}", q.i, q.j, k, q.n),
        None => format!("H^{{{},{}}}_{}", q.i, q.j, q.n),
    }
}

fn text_or_json(format: Option<FormatArg>) -> Result<bool, CliError> {
    match format {
        None | Some(FormatArg::Text) => Ok(false),
        Some(FormatArg::Json) => Ok(true),
        Some(FormatArg::Svg) => Err(CliError::Usage("svg output is only available for `barcode`".into())),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn info(args: &Common) -> Result<String, CliError> {
    let json = text_or_json(args.format)?;
    let Loaded { complex: c, kind } = load(args)?;
    let per_step: Vec<Vec<usize>> = (1..=c.steps()).map(|i| c.counts_at_step(i)).collect();
    if json {
        return Ok(pretty(&json!({
            "counts": c.counts(),
            "steps": per_step,
            "euler_characteristic": c.euler_characteristic(),
        })));
    }
    let mut out = format!("{}\n", count_line(kind, &c.counts()));
    for (i, counts) in per_step.iter().enumerate() {
        writeln!(out, "step {} adds: {}", i + 1, count_line(kind, counts)).unwrap();
    }
    writeln!(out, "Euler characteristic {}", c.euler_characteristic()).unwrap();
    Ok(out)
}

fn reduce(args: &Common) -> Result<String, CliError> {
    let json = text_or_json(args.format)?;
    if args.skip_reduction {
        return Err(CliError::Usage("`reduce` cannot skip the reduction".into()));
    }
    let p = Pipeline::build(args)?;
    let stats = p.stats.as_ref().expect("reduction ran");
    let kind = p.loaded.kind;
    if json {
        let mut v = json!({
            "vectors": stats.vectors,
            "original": stats.original,
            "critical": stats.critical,
        });
        if args.dump_dvf {
            v["fields"] = json!(stats.fields);
        }
        return Ok(pretty(&v));
    }
    let mut out = String::new();
    for (k, v) in stats.vectors.iter().enumerate().skip(1) {
        writeln!(out, "d{k}: {v} vectors").unwrap();
    }
    writeln!(out, "original: {}", count_line(kind, &stats.original)).unwrap();
    writeln!(out, "critical: {}", count_line(kind, &stats.critical)).unwrap();
    if args.dump_dvf {
        for (k, field) in stats.fields.iter().enumerate().skip(1) {
            let pairs: Vec<String> = field.iter().map(|(a, b)| format!("({a};{b})")).collect();
            writeln!(out, "field d{k}: {}", pairs.join(" ")).unwrap();
        }
    }
    Ok(out)
}

fn homology(args: &Common) -> Result<String, CliError> {
    let json = text_or_json(args.format)?;
    let p = Pipeline::build(args)?;
    let pers = p.persistence();
    let degrees = p.original().num_degrees();
    let mut rows = Vec::new();
    for i in 1..=pers.steps() {
        let groups = (0..degrees).map(|n| pers.homology_at(i, n)).collect::<Result<Vec<_>, _>>()?;
        rows.push(groups);
    }
    if json {
        let v: Vec<Value> = rows.iter().map(|gs| Value::Array(gs.iter().map(|g| group_json(g)).collect())).collect();
        return Ok(pretty(&json!({ "steps": v })));
    }
    let mut out = String::new();
    for (i, gs) in rows.iter().enumerate() {
        let parts: Vec<String> = gs.iter().enumerate().map(|(n, g)| format!("H{n} = {g}")).collect();
        writeln!(out, "step {}: {}", i + 1, parts.join(", ")).unwrap();
    }
    Ok(out)
}

fn persist(args: &Common) -> Result<String, CliError> {
    let json = text_or_json(args.format)?;
    let p = Pipeline::build(args)?;
    let pers = p.persistence();
    let queries = parse_queries(&args.queries, pers.steps(), p.original().num_degrees())?;
    let mut out = String::new();
    let mut entries = Vec::new();
    for q in &queries {
        let group = match q.k {
            Some(k) => pers.triple_group(q.i, q.j, k, q.n)?,
            None => pers.persistent_group(q.i, q.j, q.n)?,
        };
        let generators = if args.emit_generators && q.k.is_none() {
            Some(generators_for(&p, q)?)
        } else {
            None
        };
        if json {
            let mut v = json!({ "i": q.i, "j": q.j, "k": q.k, "n": q.n, "group": group_json(&group) });
            if let Some(gens) = &generators {
                v["generators"] = Value::Array(gens.iter().map(chain_json).collect());
            }
            entries.push(v);
            continue;
        }
        writeln!(out, "Persistent Homology {}", query_name(q)).unwrap();
        for (k, label) in group.labels().iter().enumerate() {
            match generators.as_ref().and_then(|g| g.get(k)) {
                Some(x) => writeln!(out, "Component {label}: {x}").unwrap(),
                None => writeln!(out, "Component {label}").unwrap(),
            }
        }
    }
    Ok(if json { pretty(&Value::Array(entries)) } else { out })
}

fn generators_for(p: &Pipeline, q: &Query) -> Result<Vec<IntChain>, CliError> {
    if q.i == 0 {
        return Ok(Vec::new());
    }
    Ok(persistent_generators(&p.rho, q.i, q.j, q.n)?)
}

fn generators(args: &Common) -> Result<String, CliError> {
    let json = text_or_json(args.format)?;
    let p = Pipeline::build(args)?;
    let pers = p.persistence();
    let queries = parse_queries(&args.queries, pers.steps(), p.original().num_degrees())?;
    if queries.iter().any(|q| q.k.is_some()) {
        return Err(CliError::Usage("generators are available for i,j,n queries only".into()));
    }
    let mut out = String::new();
    let mut entries = Vec::new();
    for q in &queries {
        let group = pers.persistent_group(q.i, q.j, q.n)?;
        let gens = generators_for(&p, q)?;
        if json {
            entries.push(json!({
                "i": q.i, "j": q.j, "n": q.n,
                "components": group.labels(),
                "generators": gens.iter().map(chain_json).collect::<Vec<_>>(),
            }));
            continue;
        }
        writeln!(out, "Persistent Homology {}", query_name(q)).unwrap();
        for (label, x) in group.labels().iter().zip(&gens) {
            writeln!(out, "Component {label}: {x}").unwrap();
        }
    }
    Ok(if json { pretty(&Value::Array(entries)) } else { out })
}

fn barcode(args: &Common) -> Result<String, CliError> {
    let p = Pipeline::build(args)?;
    let mut bc = p.persistence().barcode(args.emit_generators)?;
    for bar in &mut bc.bars {
        if let Some(x) = bar.generator.take() {
            bar.generator = Some(p.lift(&x)?);
        }
    }
    Ok(match args.format.unwrap_or(FormatArg::Json) {
        FormatArg::Json => {
            let mut s = bc.to_json_string();
            s.push('\n');
            s
        }
        FormatArg::Svg => bc.to_svg(),
        FormatArg::Text => bc.to_text(),
    })
}

pub fn run(command: &Command) -> Result<(String, Option<&std::path::Path>), CliError> {
    let args = match command {
        Command::Info(a) | Command::Reduce(a) | Command::Homology(a) | Command::Persist(a) | Command::Barcode(a) | Command::Generators(a) => a,
    };
    if args.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(args.threads).build_global();
    let text = match command {
        Command::Info(a) => info(a)?,
        Command::Reduce(a) => reduce(a)?,
        Command::Homology(a) => homology(a)?,
        Command::Persist(a) => persist(a)?,
        Command::Barcode(a) => barcode(a)?,
        Command::Generators(a) => generators(a)?,
    };
    Ok((text, args.out.as_deref()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queries() {
        let q = parse_queries(&["1,2,0".into(), "1,2,3,1".into()], 3, 3).unwrap();
        assert_eq!(q, vec![Query { i: 1, j: 2, k: None, n: 0 }, Query { i: 1, j: 2, k: Some(3), n: 1 }]);
        assert_eq!(parse_queries(&[], 2, 2).unwrap().len(), 6);
        assert_eq!(parse_queries(&["all".into(), "0,1,0".into()], 2, 2).unwrap().len(), 7);
        for bad in ["1,2", "a,b,c", "2,1,0", "1,4,0", "1,2,3", "1,1,1,1,1"] {
            assert!(matches!(parse_queries(&[bad.into()], 3, 3), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn names() {
        assert_eq!(query_name(&Query { i: 1, j: 4, k: None, n: 0 }), "H^{1,4}_0");
        assert_eq!(query_name(&Query { i: 1, j: 2, k: Some(3), n: 1 }), "H^{1,2,3}_1");
        assert_eq!(degree_name(None, 2), "cells of degree 2");
        assert_eq!(count_line(Some(ComplexKind::Cubical), &[16, 24, 8]), "16 vertices, 24 edges, 8 squares");
    }
}
