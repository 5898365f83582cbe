use crate::input::{load_input, InputError, ProjectInput, TreeEntry};
use crate::{selftest, table, Command, Convention, Format};
use serde::Serialize;
use serde_json::{json, Value};
use sft_core::blowup::{blowup_simplex, box_coverage, build_refinement, face_vector, is_smooth_refinement, refinement_face_poset};
use sft_core::cobordism::{cobordism_degrees, enumerate_maximal_levels_cob, infer_star_labels, validate_cobordism_tree, CobordismTree};
use sft_core::flowcat::{all_boundary_strata, boundary_strata, FlowSystem, Partition, Precedence};
use sft_core::grading::{approx_actions, choose_primes, framing_degrees, index_report, next_prime, DegreeConvention, IndexData};
use sft_core::homology::{build_differential, build_generators, Cutoff};
use sft_core::levels::{enumerate_maximal_levels, pre_level};
use sft_core::rational::parse_q;
use sft_core::trees::validate_tree;
use sft_core::{Dir, Error};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

pub struct Context {
    pub input: Option<PathBuf>,
    pub format: Format,
    pub dot: bool,
}

#[derive(Debug)]
pub enum CliError {
    Input(InputError),
    Core(Error),
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => e.fmt(f),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Core(e) if e.is_input_error() => 1,
            CliError::Core(_) => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input(e) => json!({ "error": "input", "pointer": e.pointer, "message": e.message }),
            CliError::Core(e) => {
                let kind = if e.is_input_error() { "input" } else { "refused" };
                json!({ "error": kind, "message": e.to_string() })
            }
        }
    }
}

type CmdResult = Result<String, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Input(InputError::new("", msg))
}

impl Context {
    fn project(&self) -> Result<ProjectInput, CliError> {
        let path = self.input.as_ref().ok_or_else(|| usage("this command needs --input"))?;
        Ok(load_input(path)?)
    }

    fn emit<T: Serialize>(&self, report: &T) -> CmdResult {
        let v = serde_json::to_value(report).map_err(|e| Error::Refused(format!("serialization failed: {e}")))?;
        Ok(match self.format {
            Format::Json => serde_json::to_string_pretty(&v).expect("values always serialize"),
            Format::Table => table::render(&v),
        })
    }
}

fn tree<'a>(p: &'a ProjectInput, name: &str) -> Result<&'a TreeEntry, CliError> {
    p.trees.get(name).ok_or_else(|| usage(format!("no tree named `{name}`")))
}

fn parse_seq(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn flow_system(p: &ProjectInput) -> Result<FlowSystem, CliError> {
    if let Some(bs) = &p.breakings {
        Ok(FlowSystem::new(p.universe.clone(), bs.iter().map(|b| (b.positive.clone(), b.negative.clone())))?)
    } else if let Some(c) = &p.counts {
        Ok(FlowSystem::from_counts(p.universe.clone(), c)?)
    } else {
        Err(CliError::Input(InputError::new("/breakings", "neither breakings nor counts are given")))
    }
}

pub fn run(ctx: &Context, cmd: &Command) -> CmdResult {
    match cmd {
        Command::Validate { emit } => validate(ctx, *emit),
        Command::Levels { tree } => levels(ctx, tree),
        Command::Refine { tree, box_side } => refine(ctx, tree, *box_side),
        Command::Poset { tree } => poset(ctx, tree),
        Command::Degrees { tree, p, convention } => degrees(ctx, tree, *p, *convention),
        Command::Index { n, chi, c1, cz_plus, cz_minus, cobordism } => {
            let d = IndexData { n: *n, euler_char: *chi, c1: *c1, cz_plus: cz_plus.clone(), cz_minus: cz_minus.clone() };
            let r = index_report(&d, *cobordism);
            ctx.emit(&json!({ "input": d, "index": r.index, "vdim": r.vdim, "cobordism": cobordism }))
        }
        Command::Ch { cutoff_action, cutoff_length } => ch(ctx, cutoff_action.as_deref(), *cutoff_length),
        Command::Strata { minus, plus, lambda, depth } => strata(ctx, minus, plus, lambda.as_deref(), *depth),
        Command::Norm { from, to, max_len } => norm(ctx, from, to, *max_len),
        Command::Simplex { n } => {
            let p = blowup_simplex(*n)?;
            if ctx.dot {
                return Ok(p.to_dot(&format!("simplex{n}")));
            }
            ctx.emit(&json!({ "n": n, "face_vector": face_vector(&p), "faces": p.len(), "eulerian": p.is_eulerian() }))
        }
        Command::Selftest { seed, cases } => {
            let r = selftest::run(*seed, *cases);
            let failed = r.checks.iter().any(|c| !c.passed);
            let out = ctx.emit(&r)?;
            if failed {
                print_out(&out);
                return Err(CliError::Core(Error::Refused("selftest failed".into())));
            }
            Ok(out)
        }
    }
}

/// Writes a report to stdout. A closed pipe (`sftk … | head`) is not an error.
pub fn print_out(s: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn validate(ctx: &Context, emit: bool) -> CmdResult {
    let p = ctx.project()?;
    if emit {
        return Ok(serde_json::to_string_pretty(&p).expect("input always serializes"));
    }
    let trees: BTreeMap<&String, Value> = p
        .trees
        .iter()
        .map(|(name, e)| {
            let r = validate_tree(&e.tree, Some(&p.universe));
            let mut v = json!({ "stable": r.stable, "trivial_vertices": r.trivial_vertices, "cobordism": e.is_cobordism() });
            if let Some(c) = e.cobordism() {
                v["cobordism_stable"] = json!(validate_cobordism_tree(&c).stable);
            }
            (name, v)
        })
        .collect();
    ctx.emit(&json!({
        "valid": true,
        "schema": p.schema,
        "orbits": p.universe.orbits.len(),
        "trees": trees,
        "count_entries": p.counts.as_ref().map_or(0, |c| c.counts.len()),
    }))
}

fn levels(ctx: &Context, name: &str) -> CmdResult {
    let p = ctx.project()?;
    let e = tree(&p, name)?;
    if let Some(c) = e.cobordism() {
        let r = enumerate_maximal_levels_cob(&c)?;
        return ctx.emit(&json!({ "tree": name, "cobordism": true, "n_t": r.count(), "leveled": r.leveled, "note": r.note }));
    }
    let ls = enumerate_maximal_levels(&e.tree)?;
    ctx.emit(&json!({ "tree": name, "cobordism": false, "pre_level": pre_level(&e.tree)?, "n_t": ls.len(), "levels": ls }))
}

fn refine(ctx: &Context, name: &str, box_side: Option<i64>) -> CmdResult {
    let p = ctx.project()?;
    let t = &tree(&p, name)?.tree;
    let r = build_refinement(t)?;
    let cert = is_smooth_refinement(&r);
    let mut out = json!({ "tree": name, "cones": r.maximal_cones.len(), "refinement": r, "certificate": cert });
    if let Some(side) = box_side {
        if side < 0 {
            return Err(usage("--box-side must be nonnegative"));
        }
        let cov = box_coverage(&r, side);
        out["coverage"] = json!({ "ok": cov.ok(), "report": cov });
    }
    ctx.emit(&out)
}

fn poset(ctx: &Context, name: &str) -> CmdResult {
    let p = ctx.project()?;
    let t = &tree(&p, name)?.tree;
    let rp = refinement_face_poset(t)?;
    if ctx.dot {
        return Ok(rp.poset.to_dot(name));
    }
    ctx.emit(&json!({
        "tree": name,
        "grade_counts": rp.poset.grade_counts(),
        "eulerian": rp.poset.is_eulerian(),
        "poset": rp.poset,
        "labels": rp.labels,
    }))
}

fn exterior_actions(t: &sft_core::DecoratedTree, approx: &BTreeMap<String, i64>, dir: Dir) -> Result<Vec<i64>, CliError> {
    t.exterior_edges
        .iter()
        .filter(|x| x.dir == dir)
        .map(|x| approx.get(&x.orbit).copied().ok_or_else(|| CliError::Core(Error::UnknownOrbit(x.orbit.clone()))))
        .collect()
}

fn degrees(ctx: &Context, name: &str, p_flag: Option<u64>, convention: Convention) -> CmdResult {
    let p = ctx.project()?;
    let e = tree(&p, name)?;
    let (scale, approx) = approx_actions(&p.universe)?;
    let plus = exterior_actions(&e.tree, &approx, Dir::In)?;
    if let Some(c) = e.cobordism() {
        let minus = exterior_actions(&e.tree, &approx, Dir::Out)?;
        let chosen = choose_primes(&plus, &minus)?;
        let p_plus = p.options.p_plus.unwrap_or(chosen.p_plus) as i64;
        let p_minus = p.options.p_minus.unwrap_or(chosen.p_minus) as i64;
        let (framing, omega) = cobordism_degrees(&c, &approx, p_plus, p_minus)?;
        let inferred = infer_star_labels(&e.tree, &framing, &omega, &BTreeMap::new(), p_plus, p_minus)?;
        let declared: BTreeMap<String, (u8, u8)> =
            e.tree.vertices.iter().filter_map(|v| c.stars(&v.id).map(|s| (v.id.clone(), s))).collect();
        let valid = validate_cobordism_tree(&CobordismTree::from_stars(e.tree.clone(), &inferred)).valid;
        return ctx.emit(&json!({
            "tree": name,
            "cobordism": true,
            "scale": scale.to_string(),
            "approx_actions": approx,
            "p_plus": p_plus,
            "p_minus": p_minus,
            "framing_degrees": framing,
            "omega_degrees": omega,
            "inferred_stars": inferred,
            "matches_declared": inferred == declared,
            "valid": valid,
        }));
    }
    let prime = match p_flag.or(p.options.p) {
        Some(x) => x,
        None => next_prime(plus.iter().map(|&a| a as u64).sum()),
    };
    let conv = match convention {
        Convention::SpecialPoints => DegreeConvention::SpecialPoints,
        Convention::Auxiliary => DegreeConvention::Auxiliary,
    };
    let framing = framing_degrees(&e.tree, prime as i64, &approx, conv)?;
    ctx.emit(&json!({
        "tree": name,
        "cobordism": false,
        "scale": scale.to_string(),
        "approx_actions": approx,
        "p": prime,
        "convention": conv,
        "framing_degrees": framing,
    }))
}

fn ch(ctx: &Context, cutoff_action: Option<&str>, cutoff_length: Option<usize>) -> CmdResult {
    let p = ctx.project()?;
    let counts = p.counts.as_ref().ok_or_else(|| CliError::Input(InputError::new("/counts", "no count table given")))?;
    let max_action = match cutoff_action {
        Some(s) => Some(parse_q(s)?),
        None => p.options.cutoff_action.clone(),
    };
    let cutoff = Cutoff { max_action, max_word_length: cutoff_length.or(p.options.cutoff_length) };
    if cutoff.max_action.is_none() && cutoff.max_word_length.is_none() {
        return Err(usage("give --cutoff-action or --cutoff-length (or set them under options)"));
    }
    let basis = build_generators(&p.universe, &cutoff)?;
    let c = build_differential(&p.universe, basis, counts)?;
    let square = c.check_boundary_squared();
    let report = c.homology_ranks()?;
    let generators: Vec<String> = c.basis.generators.iter().map(|g| g.id.clone()).collect();
    ctx.emit(&json!({
        "generators": generators,
        "homology": report,
        "boundary_squared": square,
        "truncated": c.truncated,
    }))
}

fn strata(ctx: &Context, minus: &str, plus: &str, lambda: Option<&str>, depth: usize) -> CmdResult {
    let p = ctx.project()?;
    let sys = flow_system(&p)?;
    let (gm, gp) = (parse_seq(minus), parse_seq(plus));
    let strata = match lambda {
        Some(l) => {
            let lambda = parse_seq(l)
                .iter()
                .map(|x| x.parse::<usize>().map_err(|_| usage(format!("bad partition entry `{x}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            boundary_strata(&sys, &gm, &gp, &Partition { lambda }, depth)?
        }
        None => all_boundary_strata(&sys, &gm, &gp, depth)?,
    };
    ctx.emit(&json!({ "minus": gm, "plus": gp, "depth": depth, "count": strata.len(), "strata": strata }))
}

fn norm(ctx: &Context, from: &str, to: &str, max_len: Option<usize>) -> CmdResult {
    let p = ctx.project()?;
    let sys = flow_system(&p)?;
    let (a, b) = (parse_seq(from), parse_seq(to));
    let len = max_len.unwrap_or(a.len().max(b.len()));
    let dag = Precedence::from_system(&sys, len)?;
    if ctx.dot {
        return Ok(dag.to_dot());
    }
    ctx.emit(&json!({
        "from": a,
        "to": b,
        "max_len": len,
        "precedes": dag.precedes(&a, &b),
        "norm": dag.norm(&a, &b),
        "nodes": dag.nodes.len(),
        "edges": dag.edges.len(),
    }))
}
