//! One function per command.

use std::collections::BTreeMap;
use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use intdiff_core::algebra_base::{LocalIdeal, MaxIdeal, MultiPoly};
use intdiff_core::classify::{
    band_module_from_word, ind_a_members, is_indecomposable, jordan_fiber_decompose,
    kronecker_block, kronecker_decompose, kronecker_isomorphism, rep_type, rep_type_orbit,
    string_module, tame_local_ideal, AMember, BandOrbit, GammaModule, KroneckerLabel,
    KroneckerRep, Letter, RepTypeWitness, TameReason,
};
use intdiff_core::faithful_action::{to_matrix, word_matrix, TruncatedSpace};
use intdiff_core::operator::{
    principal_left_ideal_membership, Generator, LeftGenerator, Membership,
};
use intdiff_core::weight_modules::{
    annihilator_dset, block_decompose, build_ms, build_simple, build_v, decompose_weight, fiber,
    induce, is_absolutely_prime_window, DSet, Fiber, ModuleWindow, Orbit,
};
use intdiff_core::{Field, Matrix, Operator, Scalar};

use crate::args::{
    BandArgs, Command, FiberArgs, IdealTestArgs, InduceArgs, KroneckerArgs, ModuleArgs,
    ModuleKind, RepTypeArgs, StringArgs,
};
use crate::expr::{parse_expression, parse_operator};
use crate::format as fmt;
use crate::{check_field, Config, Failure, Report, EXIT_DOMAIN};

const DEFAULT_WINDOW: (i64, i64) = (-3, 3);

pub struct Ctx<'a> {
    pub cfg: &'a Config,
    pub input: Option<&'a str>,
    pub stdin: &'a mut dyn Read,
}

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Normalize { .. } => "normalize",
        Command::Mul { .. } => "mul",
        Command::Commutator { .. } => "commutator",
        Command::Act { .. } => "act",
        Command::Grade { .. } => "grade",
        Command::IdealTest(_) => "ideal-test",
        Command::Involve { .. } => "involve",
        Command::ModuleBuild(_) => "module-build",
        Command::Support(_) => "support",
        Command::Dims(_) => "dims",
        Command::Decompose(_) => "decompose",
        Command::BlockSplit(_) => "block-split",
        Command::RepType(_) => "rep-type",
        Command::Kronecker(_) => "kronecker",
        Command::String(_) => "string",
        Command::Band(_) => "band",
        Command::Fiber(_) => "fiber",
        Command::Induce(_) => "induce",
        Command::Report { .. } => "report",
    }
}

pub fn dispatch(c: &Command, ctx: &mut Ctx) -> Result<Report, Failure> {
    match c {
        Command::Normalize { exprs } => normalize(ctx, exprs),
        Command::Mul { a, b } => binary(ctx, a, b, "product", |x, y| x.checked_mul(y)),
        Command::Commutator { a, b } => binary(ctx, a, b, "commutator", |x, y| x.commutator(y)),
        Command::Act { expr } => act(ctx, expr),
        Command::Grade { expr } => grade(ctx, expr),
        Command::IdealTest(a) => ideal_test(ctx, a),
        Command::Involve { expr } => {
            let a = operator(ctx.cfg, expr)?;
            let mut r = Report::new();
            let inv = a.involution();
            r.set("involution", fmt::operator(&inv)).line(inv.to_string());
            r.arity = Some(a.arity());
            Ok(r)
        }
        Command::ModuleBuild(a) => module_build(ctx, a),
        Command::Support(a) => support(ctx, a),
        Command::Dims(a) => dims(ctx, a),
        Command::Decompose(a) => decompose(ctx, a),
        Command::BlockSplit(a) => block_split(ctx, a),
        Command::RepType(a) => rep_type_cmd(ctx, a),
        Command::Kronecker(a) => kronecker(ctx, a),
        Command::String(a) => string_cmd(ctx, a),
        Command::Band(a) => band(ctx, a),
        Command::Fiber(a) => fiber_cmd(ctx, a),
        Command::Induce(a) => induce_cmd(ctx, a),
        Command::Report { samples } => self_check(ctx, *samples),
    }
}

fn check_operator_field(a: &Operator, field: Field) -> Result<(), Failure> {
    for (_, c) in a.terms() {
        check_field(c, field)?;
    }
    Ok(())
}

fn operator(cfg: &Config, text: &str) -> Result<Operator, Failure> {
    let a = parse_operator(text, cfg.n()).map_err(Failure::expr)?;
    check_operator_field(&a, cfg.field)?;
    Ok(a)
}

fn scalar_arg(text: &str, field: Field) -> Result<Scalar, Failure> {
    let c: Scalar = text
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("invalid number `{}`", text)))?;
    check_field(&c, field)?;
    Ok(c)
}

fn normalize(ctx: &mut Ctx, exprs: &[String]) -> Result<Report, Failure> {
    let mut lines: Vec<(usize, String)> = exprs.iter().map(|e| (0, e.clone())).collect();
    if exprs.is_empty() {
        let text = match ctx.input {
            Some(t) => t.to_string(),
            None => {
                let mut s = String::new();
                ctx.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| Failure::usage(format!("cannot read stdin: {}", e)))?;
                s
            }
        };
        lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(k, l)| (k, l.to_string()))
            .collect();
    }
    let n = ctx.cfg.n();
    let mut out = Vec::new();
    let mut r = Report::new();
    for (offset, text) in &lines {
        let node = parse_expression(text, n).map_err(|e| Failure::parse(&e, *offset))?;
        let a = Operator::from_expression(&node.to_expr(), n).map_err(Failure::operator)?;
        check_operator_field(&a, ctx.cfg.field)?;
        r.line(a.to_string());
        out.push(fmt::operator(&a));
    }
    r.set("operators", Value::Array(out));
    r.arity = Some(n);
    Ok(r)
}

fn binary(
    ctx: &mut Ctx,
    a: &str,
    b: &str,
    key: &str,
    f: impl Fn(&Operator, &Operator) -> Result<Operator, intdiff_core::OperatorError>,
) -> Result<Report, Failure> {
    let x = operator(ctx.cfg, a)?;
    let y = operator(ctx.cfg, b)?;
    let z = f(&x, &y).map_err(Failure::operator)?;
    let mut r = Report::new();
    r.set(key, fmt::operator(&z)).line(z.to_string());
    r.arity = Some(ctx.cfg.n());
    Ok(r)
}

fn monomial_text(alpha: &[u32]) -> String {
    let parts: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
    format!("x^[{}]", parts.join(","))
}

fn act(ctx: &mut Ctx, expr: &str) -> Result<Report, Failure> {
    let a = operator(ctx.cfg, expr)?;
    let n = a.arity();
    let m = to_matrix(&a, ctx.cfg.deg);
    let dom = TruncatedSpace::new(n, m.n_in);
    let cod = TruncatedSpace::new(n, m.n_out);
    let mut r = Report::new();
    r.set("operator", fmt::operator(&a))
        .set("n_in", json!(m.n_in))
        .set("n_out", json!(m.n_out))
        .set("domain", json!(dom.basis().collect::<Vec<_>>()))
        .set("codomain", json!(cod.basis().collect::<Vec<_>>()))
        .set("matrix", fmt::matrix(&m.matrix));
    let entries = m.entries();
    for alpha in dom.basis() {
        let image: Vec<String> = entries
            .iter()
            .filter(|((_, inp), _)| *inp == alpha)
            .map(|((out, _), c)| {
                if c.is_one() {
                    monomial_text(out)
                } else {
                    format!("{}*{}", intdiff_core::operator::scalar_expr(c), monomial_text(out))
                }
            })
            .collect();
        let rhs = if image.is_empty() {
            "0".to_string()
        } else {
            image.join(" + ")
        };
        r.line(format!("{} -> {}", monomial_text(&alpha), rhs));
    }
    r.arity = Some(n);
    Ok(r)
}

fn grade(ctx: &mut Ctx, expr: &str) -> Result<Report, Failure> {
    let a = operator(ctx.cfg, expr)?;
    let mut r = Report::new();
    let mut comps = Vec::new();
    for (deg, c) in a.graded_components() {
        let d: Vec<String> = deg.iter().map(|x| x.to_string()).collect();
        r.line(format!("({}): {}", d.join(","), c));
        comps.push(json!({"degree": deg, "operator": fmt::operator(&c)}));
    }
    r.set("components", Value::Array(comps));
    r.set("homogeneous", json!(a.homogeneous_degree().is_some()));
    r.arity = Some(a.arity());
    Ok(r)
}

fn parse_slots(text: &str, n: usize) -> Result<Vec<usize>, Failure> {
    let t = text.trim();
    if t.is_empty() || t == "none" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in t.split(',') {
        let k: usize = part
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("invalid slot `{}`", part)))?;
        if k == 0 || k > n {
            return Err(Failure::usage(format!("slot {} out of range 1..{}", k, n)));
        }
        if !out.contains(&(k - 1)) {
            out.push(k - 1);
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn ideal_test(ctx: &mut Ctx, args: &IdealTestArgs) -> Result<Report, Failure> {
    let a = operator(ctx.cfg, &args.expr)?;
    let mut r = Report::new();
    r.arity = Some(a.arity());
    r.set("operator", fmt::operator(&a));
    match (&args.prime, &args.left) {
        (Some(p), None) => {
            let slots = parse_slots(p, a.arity())?;
            let member = a.in_prime_sum(&slots);
            let name: Vec<String> = slots.iter().map(|j| format!("p_{}", j + 1)).collect();
            let name = if name.is_empty() { "0".into() } else { name.join(" + ") };
            r.set("ideal", json!(name)).set("member", json!(member));
            r.line(format!("ideal: {}", name));
            r.line(format!("member: {}", member));
            if !member {
                let rest = a.quotient_mod_an();
                if slots.len() == a.arity() {
                    r.set("residue", fmt::operator(&rest));
                    r.line(format!("residue: {}", rest));
                }
            }
        }
        (None, Some(g)) => {
            let g = parse_operator(g, 1).map_err(Failure::expr)?;
            let gen = LeftGenerator::from_operator(&g).map_err(Failure::operator)?;
            let m = principal_left_ideal_membership(&a, &gen).map_err(Failure::operator)?;
            let gtext = gen.to_operator().to_string();
            r.set("ideal", json!(format!("I_1*({})", gtext)));
            r.line(format!("ideal: I_1*({})", gtext));
            match m {
                Membership::Member { witness } => {
                    r.set("member", json!(true)).set("witness", fmt::operator(&witness));
                    r.line("member: true");
                    r.line(format!("witness: {}", witness));
                }
                Membership::NotMember => {
                    r.set("member", json!(false)).set("witness", Value::Null);
                    r.line("member: false");
                }
            }
        }
        _ => return Err(Failure::usage("give exactly one of --prime or --left")),
    }
    Ok(r)
}

fn orbit_arg(cfg: &Config, text: Option<&str>) -> Result<Orbit, Failure> {
    let o = match text {
        Some(t) => fmt::parse_orbit_strs(t.split(','), cfg.field)?,
        None => Orbit::integer(cfg.n()),
    };
    if let Some(n) = cfg.arity {
        if n != o.arity() {
            return Err(Failure::usage(format!(
                "--arity {} does not match an orbit with {} slots",
                n,
                o.arity()
            )));
        }
    }
    Ok(o)
}

fn dset_arg(orbit: &Orbit, text: Option<&str>) -> Result<DSet, Failure> {
    let slots = parse_slots(text.unwrap_or(""), orbit.arity())?;
    DSet::new(orbit.clone(), slots).map_err(Failure::module)
}

fn ideal_arg(text: &str, order: Option<i64>, center: Vec<Scalar>, field: Field) -> Result<LocalIdeal, Failure> {
    let k = center.len();
    let order = order.ok_or_else(|| Failure::usage("a local ideal needs --order"))?;
    let mut gens: Vec<MultiPoly> = Vec::new();
    for part in text.split(';').filter(|p| !p.trim().is_empty()) {
        if k == 0 {
            return Err(Failure::usage("the local ideal has no variables"));
        }
        let a = parse_operator(part, k).map_err(Failure::expr)?;
        check_operator_field(&a, field)?;
        let p = fmt::operator_to_poly(&a).ok_or_else(|| {
            Failure::usage(format!("ideal generator `{}` is not a polynomial in H", part.trim()))
        })?;
        gens.push(p);
    }
    LocalIdeal::from_h_coordinates(MaxIdeal::new(center), order, &gens).map_err(Failure::ideal)
}

fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let mut l = Matrix::identity(d);
    let mut u = Matrix::identity(d);
    for r in 0..d {
        for c in 0..d {
            if r > c {
                l.set(r, c, Scalar::from_int(rng.random_range(-2..=2)));
            } else if r < c {
                u.set(r, c, Scalar::from_int(rng.random_range(-2..=2)));
            }
        }
    }
    l.mul(&u)
}

fn scramble(m: &ModuleWindow, seed: u64) -> Result<ModuleWindow, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: BTreeMap<Vec<i64>, Matrix> = m
        .support()
        .into_iter()
        .map(|p| {
            let d = m.dim(&p);
            (p, random_invertible(&mut rng, d))
        })
        .collect();
    m.change_basis(&bases).map_err(Failure::module)
}

struct Built {
    module: ModuleWindow,
    dsets: Vec<DSet>,
    description: String,
}

fn build_module(ctx: &Ctx, a: &ModuleArgs) -> Result<Built, Failure> {
    let cfg = ctx.cfg;
    let mut built = if let Some(text) = ctx.input {
        let v = fmt::parse_json(text)?;
        Built {
            module: fmt::parse_module(&v, cfg.field)?,
            dsets: Vec::new(),
            description: "module read from input".into(),
        }
    } else {
        let kind = a
            .module
            .ok_or_else(|| Failure::usage("give --module or --in"))?;
        match kind {
            ModuleKind::P => {
                let n = cfg.n();
                let d = DSet::new(Orbit::integer(n), 0..n).map_err(Failure::module)?;
                let m = build_simple(&d, cfg.window_for(n, (-1, 4))?).map_err(Failure::module)?;
                Built {
                    module: m,
                    dsets: vec![d],
                    description: format!("P_{}", n),
                }
            }
            ModuleKind::Ms => {
                if cfg.n() != 1 {
                    return Err(Failure::usage("M(s, lambda) has arity 1"));
                }
                let s = a.s.ok_or_else(|| Failure::usage("M(s, lambda) needs --s"))?;
                let lambda = scalar_arg(a.lambda.as_deref().unwrap_or("0"), cfg.field)?;
                let w = cfg.window_for(1, DEFAULT_WINDOW)?;
                let m = build_ms(s, &lambda, w[0]).map_err(Failure::module)?;
                let d = DSet::new(m.orbit().clone(), []).map_err(Failure::module)?;
                Built {
                    module: m,
                    dsets: vec![d],
                    description: format!("M({}, {})", s, lambda),
                }
            }
            ModuleKind::Simple => {
                let orbit = orbit_arg(cfg, a.orbit.as_deref())?;
                let w = cfg.window_for(orbit.arity(), DEFAULT_WINDOW)?;
                let texts: Vec<Option<&str>> = if a.dset.is_empty() {
                    vec![None]
                } else {
                    a.dset.iter().map(|s| Some(s.as_str())).collect()
                };
                let mut dsets = Vec::new();
                let mut module: Option<ModuleWindow> = None;
                for t in texts {
                    let d = dset_arg(&orbit, t)?;
                    let m = build_simple(&d, w.clone()).map_err(Failure::module)?;
                    module = Some(match module {
                        None => m,
                        Some(prev) => prev.direct_sum(&m).map_err(Failure::module)?,
                    });
                    dsets.push(d);
                }
                let names: Vec<String> = dsets.iter().map(fmt::dset_text).collect();
                Built {
                    module: module.expect("at least one summand"),
                    description: names.join(" + "),
                    dsets,
                }
            }
            ModuleKind::V => {
                let orbit = orbit_arg(cfg, a.orbit.as_deref())?;
                if a.dset.len() > 1 {
                    return Err(Failure::usage("V takes a single --dset"));
                }
                let d = dset_arg(&orbit, a.dset.first().map(|s| s.as_str()))?;
                let center: Vec<Scalar> = d
                    .non_degenerate()
                    .iter()
                    .map(|&j| orbit.rep(j).clone())
                    .collect();
                let ideal = ideal_arg(a.ideal.as_deref().unwrap_or(""), a.order, center, cfg.field)?;
                let w = cfg.window_for(orbit.arity(), DEFAULT_WINDOW)?;
                let m = build_v(&ideal, &d, w).map_err(Failure::module)?;
                Built {
                    module: m,
                    description: format!("V(I) on {}", fmt::dset_text(&d)),
                    dsets: vec![d],
                }
            }
        }
    };
    if a.scramble {
        built.module = scramble(&built.module, cfg.seed)?;
    }
    Ok(built)
}

fn finish_module_report(r: &mut Report, m: &ModuleWindow) {
    r.arity = Some(m.arity());
    r.window = Some(m.window().to_vec());
}

fn module_build(ctx: &mut Ctx, a: &ModuleArgs) -> Result<Report, Failure> {
    let b = build_module(ctx, a)?;
    let m = &b.module;
    let mut r = Report::new();
    r.set("description", json!(b.description))
        .set("module", fmt::module(m))
        .set("total_dim", json!(m.total_dim()))
        .set("equidimensional", json!(m.is_equidimensional()))
        .set("weight", json!(m.is_weight()));
    r.line(format!("module: {}", b.description));
    r.line(format!("orbit: {}", fmt::orbit_text(m.orbit())));
    r.line(format!("support points: {}", m.support().len()));
    r.line(format!("total dimension: {}", m.total_dim()));
    r.line(format!("equidimensional: {}", m.is_equidimensional()));
    r.line(format!("weight module: {}", m.is_weight()));
    finish_module_report(&mut r, m);
    Ok(r)
}

fn support(ctx: &mut Ctx, a: &ModuleArgs) -> Result<Report, Failure> {
    let b = build_module(ctx, a)?;
    let m = &b.module;
    let mut r = Report::new();
    let pts = m.support();
    r.set("description", json!(b.description))
        .set("support", json!(pts));
    for p in &pts {
        r.line(fmt::point_text(p));
    }
    finish_module_report(&mut r, m);
    Ok(r)
}

fn dims(ctx: &mut Ctx, a: &ModuleArgs) -> Result<Report, Failure> {
    let b = build_module(ctx, a)?;
    let m = &b.module;
    let mut r = Report::new();
    let pts = m.points();
    let entries: Vec<Value> = pts
        .iter()
        .map(|p| json!({"point": p, "dim": m.dim(p)}))
        .collect();
    let first = pts.first().map(|p| m.dim(p));
    let constant = first.filter(|&d| pts.iter().all(|p| m.dim(p) == d));
    r.set("description", json!(b.description))
        .set("dims", Value::Array(entries))
        .set("constant", json!(constant));
    for p in &pts {
        r.line(format!("{} {}", fmt::point_text(p), m.dim(p)));
    }
    match constant {
        Some(d) => r.line(format!("constant: {}", d)),
        None => r.line("constant: no"),
    };
    finish_module_report(&mut r, m);
    Ok(r)
}

fn decompose(ctx: &mut Ctx, a: &ModuleArgs) -> Result<Report, Failure> {
    let b = build_module(ctx, a)?;
    let m = &b.module;
    let parts = decompose_weight(m).map_err(Failure::module)?;
    let mut r = Report::new();
    let mut out = Vec::new();
    for (d, k) in &parts {
        out.push(json!({"orbit": fmt::orbit(d.orbit()), "dset": fmt::dset_slots(d), "multiplicity": k}));
        r.line(format!("{} x{}", fmt::dset_text(d), k));
    }
    r.set("summands", Value::Array(out));
    finish_module_report(&mut r, m);
    Ok(r)
}

fn block_split(ctx: &mut Ctx, a: &ModuleArgs) -> Result<Report, Failure> {
    let b = build_module(ctx, a)?;
    let m = &b.module;
    let blocks = block_decompose(m).map_err(Failure::module)?;
    let mut r = Report::new();
    let mut out = Vec::new();
    for blk in &blocks {
        let prime = is_absolutely_prime_window(&blk.module);
        out.push(json!({
            "orbit": fmt::orbit(blk.dset.orbit()),
            "dset": fmt::dset_slots(&blk.dset),
            "total_dim": blk.module.total_dim(),
            "absolutely_prime": prime,
        }));
        r.line(format!(
            "{}: total dimension {}, absolutely prime {}",
            fmt::dset_text(&blk.dset),
            blk.module.total_dim(),
            prime
        ));
    }
    let whole = is_absolutely_prime_window(m);
    r.set("blocks", Value::Array(out))
        .set("input_absolutely_prime", json!(whole));
    r.line(format!("input absolutely prime: {}", whole));
    finish_module_report(&mut r, m);
    Ok(r)
}

fn witness_name(w: RepTypeWitness) -> (&'static str, Option<usize>) {
    match w {
        RepTypeWitness::AllDegenerate => ("all-degenerate", None),
        RepTypeWitness::OneNonDegenerate => ("one-non-degenerate", None),
        RepTypeWitness::ManyNonDegenerate { free } => ("many-non-degenerate", Some(free)),
        RepTypeWitness::OrbitArityOne => ("orbit-arity-one", None),
        RepTypeWitness::OrbitArityAtLeastTwo => ("orbit-arity-at-least-two", None),
    }
}

fn reason_name(r: TameReason) -> &'static str {
    match r {
        TameReason::OrderAtMostTwo => "order-at-most-two",
        TameReason::LinearElement => "linear-element",
        TameReason::SplitQuadratic => "split-quadratic",
        TameReason::NonSplitQuadratic => "non-split-quadratic",
        TameReason::SquareQuadratic => "square-quadratic",
        TameReason::NoQuadratic => "no-quadratic",
    }
}

fn rep_type_cmd(ctx: &mut Ctx, a: &RepTypeArgs) -> Result<Report, Failure> {
    let cfg = ctx.cfg;
    let mut r = Report::new();
    if let Some(text) = &a.ideal {
        let center = match &a.center {
            Some(c) => c
                .split(',')
                .map(|x| scalar_arg(x, cfg.field))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Scalar::zero(); 2],
        };
        if center.len() != 2 {
            return Err(Failure::usage("the tame/wild test takes a center with 2 entries"));
        }
        let ideal = ideal_arg(text, a.order, center, cfg.field)?;
        let v = tame_local_ideal(&ideal, cfg.field).map_err(Failure::classify)?;
        let kind = if v.tame { "tame" } else { "wild" };
        r.set("type", json!(kind))
            .set("tame_over_closure", json!(v.over_closure))
            .set("reason", json!(reason_name(v.reason)));
        r.line(kind);
        r.line(format!("reason: {}", reason_name(v.reason)));
        r.line(format!("tame over the closure: {}", v.over_closure));
        match &v.witness {
            Some(w) => {
                let (f, l, rt) = (
                    fmt::shifted_poly_text(&w.form),
                    fmt::shifted_poly_text(&w.left),
                    fmt::shifted_poly_text(&w.right),
                );
                r.line(format!("witness: {} = ({})*({})", f, l, rt));
                r.set("witness", json!({"form": f, "left": l, "right": rt}));
            }
            None => {
                r.set("witness", Value::Null);
            }
        }
        r.arity = Some(2);
        return Ok(r);
    }
    let orbit = orbit_arg(cfg, a.orbit.as_deref())?;
    let verdict = match &a.dset {
        Some(d) => {
            let d = dset_arg(&orbit, Some(d))?;
            r.set("dset", json!(fmt::dset_slots(&d)));
            rep_type(&d)
        }
        None => {
            r.set("dset", Value::Null);
            rep_type_orbit(&orbit)
        }
    };
    let (w, free) = witness_name(verdict.witness);
    r.set("orbit", fmt::orbit(&orbit))
        .set("type", json!(verdict.kind.name()))
        .set("witness", json!(w))
        .set("free_slots", json!(free));
    r.line(verdict.kind.name());
    r.line(format!("witness: {}", w));
    r.arity = Some(orbit.arity());
    Ok(r)
}

fn parse_label(text: &str, field: Field) -> Result<KroneckerLabel, Failure> {
    let t = text.trim();
    let bad = || Failure::usage(format!("invalid block label `{}`", text));
    match t {
        "S1" => return Ok(KroneckerLabel::S1),
        "Sink" => return Ok(KroneckerLabel::Sink),
        _ => {}
    }
    let (head, rest) = t.split_once('(').ok_or_else(bad)?;
    let inner = rest.strip_suffix(')').ok_or_else(bad)?;
    let size = |s: &str| -> Result<usize, Failure> {
        let n: usize = s.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(Failure::classify(intdiff_core::classify::ClassifyError::NonPositiveSize));
        }
        Ok(n)
    };
    match head {
        "S2" => Ok(KroneckerLabel::S2(size(inner)?)),
        "S3" => Ok(KroneckerLabel::S3(size(inner)?)),
        "S5" => Ok(KroneckerLabel::S5(size(inner)?)),
        "S4" => {
            let (n, l) = inner.split_once(',').ok_or_else(bad)?;
            Ok(KroneckerLabel::S4(size(n)?, scalar_arg(l, field)?))
        }
        _ => Err(bad()),
    }
}

fn kronecker(ctx: &mut Ctx, a: &KroneckerArgs) -> Result<Report, Failure> {
    let field = ctx.cfg.field;
    let rep = if !a.label.is_empty() {
        let mut rep = KroneckerRep::zero();
        for l in &a.label {
            rep = rep.direct_sum(&kronecker_block(&parse_label(l, field)?));
        }
        rep
    } else {
        let (av, bv, d1) = match (ctx.input, &a.a, &a.b) {
            (_, Some(x), Some(y)) => (fmt::parse_json(x)?, fmt::parse_json(y)?, None),
            (Some(text), None, None) => {
                let v = fmt::parse_json(text)?;
                let get = |k: &str| {
                    v.get(k)
                        .cloned()
                        .ok_or_else(|| Failure::usage(format!("input lacks `{}`", k)))
                };
                let d1 = v.get("d1").and_then(|d| d.as_u64()).map(|d| d as usize);
                (get("a")?, get("b")?, d1)
            }
            _ => return Err(Failure::usage("give --a and --b, --label, or --in")),
        };
        let am = fmt::parse_matrix_value(&av, field, d1)?;
        let bm = fmt::parse_matrix_value(&bv, field, d1)?;
        KroneckerRep::new(am.cols(), am.rows(), am, bm).map_err(Failure::classify)?
    };
    let rep = if a.scramble {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
        let p1 = random_invertible(&mut rng, rep.d1);
        let p2 = random_invertible(&mut rng, rep.d2);
        rep.conjugate(&p1, &p2)
    } else {
        rep
    };
    let labels = kronecker_decompose(&rep, field).map_err(Failure::classify)?;
    let mut target = KroneckerRep::zero();
    for l in &labels {
        target = target.direct_sum(&kronecker_block(l));
    }
    let verified = match kronecker_isomorphism(&rep, &target, ctx.cfg.seed) {
        Some((x1, x2)) => {
            x2.mul(&rep.a) == target.a.mul(&x1)
                && x2.mul(&rep.b) == target.b.mul(&x1)
                && x1.is_invertible()
                && x2.is_invertible()
        }
        None => false,
    };
    let mut multiset: BTreeMap<String, usize> = BTreeMap::new();
    for l in &labels {
        *multiset.entry(l.to_string()).or_default() += 1;
    }
    let mut r = Report::new();
    r.set("dims", json!([rep.d1, rep.d2]))
        .set("summands", json!(labels.iter().map(|l| l.to_string()).collect::<Vec<_>>()))
        .set("labels", json!(multiset))
        .set("isomorphism_verified", json!(verified))
        .set("a", fmt::matrix(&rep.a))
        .set("b", fmt::matrix(&rep.b));
    r.line(format!("dims: ({}, {})", rep.d1, rep.d2));
    for (l, k) in &multiset {
        r.line(format!("{} x{}", l, k));
    }
    r.line(format!("isomorphism verified: {}", verified));
    if !verified {
        r.code = EXIT_DOMAIN;
    }
    Ok(r)
}

fn parse_word(text: &str) -> Result<Vec<Letter>, Failure> {
    let t = text.trim();
    if t == "e" || t.is_empty() {
        return Ok(Vec::new());
    }
    t.chars()
        .map(|c| {
            Letter::parse(c).ok_or_else(|| {
                Failure::usage(format!("invalid letter `{}` (words use 1 and 2)", c))
            })
        })
        .collect()
}

fn word_text(w: &[Letter]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(|l| l.digit()).collect()
    }
}

fn gamma_report(r: &mut Report, g: &GammaModule) {
    let ind = is_indecomposable(&g.to_module());
    r.set("dim", json!(g.dim()))
        .set("h1", fmt::matrix(&g.h1))
        .set("h2", fmt::matrix(&g.h2))
        .set("relation_holds", json!(g.satisfies_relation()))
        .set("indecomposable", json!(ind));
    r.line(format!("dim: {}", g.dim()));
    r.line(format!("h1: {}", fmt::matrix_text(&g.h1)));
    r.line(format!("h2: {}", fmt::matrix_text(&g.h2)));
    r.line(format!("h1*h2 = h2*h1 = 0: {}", g.satisfies_relation()));
    r.line(format!("indecomposable: {}", ind));
}

fn member_name(m: &AMember) -> String {
    match m {
        AMember::Simple => "K".into(),
        AMember::String(w) => format!("string {}", word_text(w)),
        AMember::BandFamily { n } => format!("band 12 n={}", n),
        AMember::Regular => "A".into(),
    }
}

fn string_cmd(ctx: &mut Ctx, a: &StringArgs) -> Result<Report, Failure> {
    let mut r = Report::new();
    if let Some(bound) = a.a_members {
        let ms = ind_a_members(bound, ctx.cfg.field).map_err(Failure::classify)?;
        let mut out = Vec::new();
        for m in &ms {
            let parameter = matches!(m, AMember::BandFamily { .. });
            out.push(json!({"member": member_name(m), "dim": m.dim(), "parameter": parameter}));
            let suffix = if parameter { ", parameter lambda != 0" } else { "" };
            r.line(format!("{} (dim {}{})", member_name(m), m.dim(), suffix));
        }
        r.set("bound", json!(bound)).set("members", Value::Array(out));
        r.arity = Some(2);
        return Ok(r);
    }
    let w = parse_word(a.word.as_deref().unwrap_or("e"))?;
    let g = string_module(&w);
    r.set("word", json!(word_text(&w)));
    r.line(format!("word: {}", word_text(&w)));
    gamma_report(&mut r, &g);
    r.arity = Some(2);
    Ok(r)
}

fn band(ctx: &mut Ctx, a: &BandArgs) -> Result<Report, Failure> {
    let w = parse_word(&a.word)?;
    let lambda = scalar_arg(&a.lambda, ctx.cfg.field)?;
    let orbit = BandOrbit::new(&w).map_err(Failure::classify)?;
    let g = band_module_from_word(&w, a.n, &lambda).map_err(Failure::classify)?;
    let mut r = Report::new();
    r.set("word", json!(word_text(&w)))
        .set("orbit", json!(word_text(orbit.word())))
        .set("n", json!(a.n))
        .set("lambda", fmt::scalar(&lambda));
    r.line(format!("word: {} (orbit {})", word_text(&w), word_text(orbit.word())));
    r.line(format!("n: {}, lambda: {}", a.n, lambda));
    gamma_report(&mut r, &g);
    r.arity = Some(2);
    Ok(r)
}

fn fiber_report(r: &mut Report, f: &Fiber) -> Result<(), Failure> {
    let center: Vec<Value> = f.center().iter().map(fmt::scalar).collect();
    let mats: Vec<Value> = f.matrices().iter().map(fmt::matrix).collect();
    r.set("dim", json!(f.dim()))
        .set("center", Value::Array(center))
        .set("matrices", Value::Array(mats))
        .set("socle_series", json!(f.socle_series()))
        .set("composition_length", json!(f.composition_length()));
    let c: Vec<String> = f.center().iter().map(|x| x.to_string()).collect();
    r.line(format!("dim: {}", f.dim()));
    r.line(format!("center: ({})", c.join(",")));
    for (k, m) in f.matrices().iter().enumerate() {
        r.line(format!("H_{}: {}", k + 1, fmt::matrix_text(m)));
    }
    r.line(format!("socle series: {:?}", f.socle_series()));
    r.line(format!("composition length: {}", f.composition_length()));
    if f.arity() == 1 {
        let blocks = jordan_fiber_decompose(f).map_err(Failure::classify)?;
        let names: Vec<String> = blocks
            .iter()
            .map(|(s, l)| format!("M({},{})", s, l))
            .collect();
        r.set("jordan", json!(names));
        r.line(format!("induced module: {}", names.join(" + ")));
    } else {
        r.set("jordan", Value::Null);
    }
    Ok(())
}

fn fiber_cmd(ctx: &mut Ctx, a: &FiberArgs) -> Result<Report, Failure> {
    let mut r = Report::new();
    if a.module.module.is_none() && ctx.input.is_none() {
        let text = a
            .module
            .ideal
            .as_deref()
            .ok_or_else(|| Failure::usage("give --module, --in, or --ideal with --order"))?;
        let center = match &a.center {
            Some(c) => c
                .split(',')
                .map(|x| scalar_arg(x, ctx.cfg.field))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Scalar::zero(); ctx.cfg.n()],
        };
        let ideal = ideal_arg(text, a.module.order, center, ctx.cfg.field)?;
        let f = Fiber::from_ideal(&ideal);
        r.arity = Some(f.arity());
        fiber_report(&mut r, &f)?;
        return Ok(r);
    }
    let b = build_module(ctx, &a.module)?;
    let d = if b.dsets.len() == 1 {
        b.dsets[0].clone()
    } else {
        annihilator_dset(&b.module).map_err(Failure::module)?
    };
    let f = fiber(&b.module, &d).map_err(Failure::module)?;
    r.set("dset", fmt::dset(&d));
    r.line(format!("block: {}", fmt::dset_text(&d)));
    fiber_report(&mut r, &f)?;
    finish_module_report(&mut r, &b.module);
    Ok(r)
}

fn induce_cmd(ctx: &mut Ctx, a: &InduceArgs) -> Result<Report, Failure> {
    let cfg = ctx.cfg;
    let orbit = orbit_arg(cfg, a.orbit.as_deref())?;
    let d = dset_arg(&orbit, a.dset.as_deref())?;
    let center: Vec<Scalar> = d
        .non_degenerate()
        .iter()
        .map(|&j| orbit.rep(j).clone())
        .collect();
    let f = match (&a.fiber, &a.ideal) {
        (Some(text), None) => {
            let v = fmt::parse_json(text)?;
            let list = v
                .as_array()
                .ok_or_else(|| Failure::usage("--fiber takes a JSON list of matrices"))?;
            let mats = list
                .iter()
                .map(|m| fmt::parse_matrix_value(m, cfg.field, None))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = mats.first().map_or(1, |m| m.rows());
            Fiber::new(center, mats, dim).map_err(Failure::module)?
        }
        (None, Some(text)) => Fiber::from_ideal(&ideal_arg(text, a.order, center, cfg.field)?),
        (None, None) => Fiber::trivial(center),
        (Some(_), Some(_)) => return Err(Failure::usage("give at most one of --fiber and --ideal")),
    };
    let w = cfg.window_for(orbit.arity(), DEFAULT_WINDOW)?;
    let m = induce(&f, &d, w).map_err(Failure::module)?;
    let mut r = Report::new();
    r.set("dset", fmt::dset(&d))
        .set("fiber_dim", json!(f.dim()))
        .set("module", fmt::module(&m))
        .set("total_dim", json!(m.total_dim()));
    r.line(format!("block: {}", fmt::dset_text(&d)));
    r.line(format!("fiber dimension: {}", f.dim()));
    for p in m.support() {
        r.line(format!("{} {}", fmt::point_text(&p), m.dim(&p)));
    }
    finish_module_report(&mut r, &m);
    Ok(r)
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Vec<(Generator, usize)> {
    (0..len)
        .map(|_| {
            let g = match rng.random_range(0..5) {
                0 => Generator::X,
                1 => Generator::D,
                2 => Generator::Int,
                3 => Generator::H,
                _ => Generator::E {
                    s: rng.random_range(0..3),
                    t: rng.random_range(0..3),
                },
            };
            (g, rng.random_range(0..n))
        })
        .collect()
}

fn word_operator(w: &[(Generator, usize)], n: usize) -> Operator {
    let mut a = Operator::one(n);
    for &(g, j) in w {
        let e = intdiff_core::operator::Expr::gen(g, j);
        a = &a * &Operator::from_expression(&e, n).expect("generator");
    }
    a
}

fn self_check(ctx: &mut Ctx, samples: usize) -> Result<Report, Failure> {
    let seed = ctx.cfg.seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<(&str, bool, usize)> = Vec::new();

    let mut ok = true;
    for n in 1..=3 {
        for j in 0..n {
            let (d, int, h, x) = (
                Operator::d(n, j),
                Operator::int(n, j),
                Operator::h(n, j),
                Operator::x(n, j),
            );
            ok &= &d * &int == Operator::one(n);
            ok &= &d * &x == h;
            ok &= &int * &d == &Operator::one(n) - &Operator::e(n, j, 0, 0);
            ok &= &(&h * &d) - &(&d * &h) == -&d;
        }
    }
    checks.push(("relations", ok, 3));

    let mut ok = true;
    for k in 0..samples {
        let n = 1 + k % 2;
        let len = rng.random_range(1..=4);
        let w = random_word(&mut rng, n, len);
        let a = word_operator(&w, n);
        ok &= to_matrix(&a, 6).same_action(&word_matrix(&w, n, 6));
    }
    checks.push(("oracle", ok, samples));

    let mut ok = true;
    for _ in 0..samples {
        let a = word_operator(&random_word(&mut rng, 2, 3), 2);
        let b = word_operator(&random_word(&mut rng, 2, 3), 2);
        ok &= (&a * &b).involution() == &b.involution() * &a.involution();
        ok &= a.involution().involution() == a;
    }
    checks.push(("involution", ok, samples));

    let mut ok = true;
    for s in 1..=3 {
        for lambda in [Scalar::zero(), Scalar::from_ratio(1, 2)] {
            let m = build_ms(s, &lambda, (-4, 4)).map_err(Failure::module)?;
            ok &= m.points().iter().all(|p| m.dim(p) == s as usize);
        }
    }
    checks.push(("ms-dims", ok, 6));

    let mut ok = true;
    let pool = [
        KroneckerLabel::S1,
        KroneckerLabel::S2(1),
        KroneckerLabel::S3(2),
        KroneckerLabel::S4(1, Scalar::from_int(2)),
        KroneckerLabel::S4(2, Scalar::zero()),
        KroneckerLabel::S5(1),
    ];
    let rounds = samples.min(10);
    for _ in 0..rounds {
        let k = rng.random_range(1..=3);
        let mut labels: Vec<KroneckerLabel> = (0..k)
            .map(|_| pool[rng.random_range(0..pool.len())].clone())
            .collect();
        let mut rep = KroneckerRep::zero();
        for l in &labels {
            rep = rep.direct_sum(&kronecker_block(l));
        }
        let p1 = random_invertible(&mut rng, rep.d1);
        let p2 = random_invertible(&mut rng, rep.d2);
        let scrambled = rep.conjugate(&p1, &p2);
        labels.sort();
        ok &= kronecker_decompose(&scrambled, Field::Rational).ok() == Some(labels);
    }
    checks.push(("kronecker", ok, rounds));

    let mut ok = true;
    let orbit = Orbit::integer(2);
    let all = DSet::all_for(&orbit);
    let rounds = samples.min(5);
    for _ in 0..rounds {
        let k = rng.random_range(1..=3);
        let mut m: Option<ModuleWindow> = None;
        let mut expected: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for _ in 0..k {
            let d = &all[rng.random_range(0..all.len())];
            *expected.entry(d.degenerate()).or_default() += 1;
            let s = build_simple(d, vec![(-2, 3); 2]).map_err(Failure::module)?;
            m = Some(match m {
                None => s,
                Some(prev) => prev.direct_sum(&s).map_err(Failure::module)?,
            });
        }
        let m = scramble(&m.expect("nonempty"), rng.random())?;
        let got: BTreeMap<Vec<usize>, usize> = decompose_weight(&m)
            .map_err(Failure::module)?
            .into_iter()
            .map(|(d, k)| (d.degenerate(), k))
            .collect();
        ok &= got == expected;
    }
    checks.push(("semisimple", ok, rounds));

    let mut r = Report::new();
    let mut out = Vec::new();
    for (name, passed, n) in &checks {
        out.push(json!({"name": name, "passed": passed, "samples": n}));
        r.line(format!("{} {} ({} samples)", if *passed { "PASS" } else { "FAIL" }, name, n));
    }
    let all_ok = checks.iter().all(|c| c.1);
    r.set("checks", Value::Array(out)).set("passed", json!(all_ok));
    if !all_ok {
        r.code = EXIT_DOMAIN;
    }
    Ok(r)
}
