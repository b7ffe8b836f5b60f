//! Subcommand implementations.

use std::sync::Arc;

use anyhow::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mackey_sk::burnside::{BurnsideElement, BurnsideRing};
use mackey_sk::euler::{
    euler_characteristic, fixed_euler, restrict_complex, GCWComplex, GcwData, DEFAULT_MAX_DIM,
};
use mackey_sk::mackey::{burnside_mackey, MackeyData};
use mackey_sk::sk::{
    beck_chevalley_check, build_truncated, k0_mackey, orbit_pullback_squares, phi_psi_check,
};
use mackey_sk::span::{random_triple, span_iso, Span};
use mackey_sk::squares::{check_axioms, from_waldhausen, k0, SquaresPresentation, WaldhausenData};
use mackey_sk::{
    Check, FgAbelianGroup, FiniteGroup, GSet, MackeyFunctor, MackeyMorphism, Report, Subgroup,
};

use crate::input::{self, bad, BadInput, Caps};
use crate::output::{table, vector, Output};
use crate::{BurnsideCmd, Cli, Command, EulerCmd, GroupCmd, MackeyCmd, PresentationArgs, SpanCmd, Sk0Cmd, SquaresCmd, SubgroupArgs};

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Group(GroupCmd::Info) => "group info",
        Command::Group(GroupCmd::Subgroups) => "group subgroups",
        Command::Marks => "marks",
        Command::Burnside(BurnsideCmd::Mul { .. }) => "burnside mul",
        Command::Span(SpanCmd::Compose) => "span compose",
        Command::Span(SpanCmd::AssocTest { .. }) => "span assoc-test",
        Command::Mackey(MackeyCmd::Validate) => "mackey validate",
        Command::Mackey(MackeyCmd::Burnside) => "mackey burnside",
        Command::Mackey(MackeyCmd::Compare { .. }) => "mackey compare",
        Command::Squares(SquaresCmd::Check(_)) => "squares check",
        Command::Squares(SquaresCmd::K0 { .. }) => "squares k0",
        Command::Sk0(Sk0Cmd::Build { .. }) => "sk0 build",
        Command::Sk0(Sk0Cmd::Mackey) => "sk0 mackey",
        Command::Sk0(Sk0Cmd::PhiPsi { .. }) => "sk0 phi-psi",
        Command::Sk0(Sk0Cmd::Beck) => "sk0 beck",
        Command::Euler(EulerCmd::Chi) => "euler chi",
        Command::Euler(EulerCmd::Restrict { .. }) => "euler restrict",
        Command::Euler(EulerCmd::Fixed { .. }) => "euler fixed",
    }
}

pub fn run(cli: &Cli, caps: &Caps) -> Result<Output> {
    let mut out = Output::new(name(&cli.command));
    match &cli.command {
        Command::Group(GroupCmd::Info) => group_info(&mut out, group(cli, caps)?.as_ref()),
        Command::Group(GroupCmd::Subgroups) => group_subgroups(&mut out, group(cli, caps)?.as_ref()),
        Command::Marks => marks(&mut out, &group(cli, caps)?),
        Command::Burnside(BurnsideCmd::Mul { a, b }) => burnside_mul(&mut out, &group(cli, caps)?, a, b)?,
        Command::Span(SpanCmd::Compose) => span_compose(&mut out, cli, caps)?,
        Command::Span(SpanCmd::AssocTest { count, max_apex, max_object }) => {
            let g = match &cli.group {
                Some(s) => input::group_ref(s, caps)?,
                None => mackey_sk::groups::symmetric3(),
            };
            assoc_test(&mut out, &g, cli.seed, *count, *max_apex, *max_object)?
        }
        Command::Mackey(MackeyCmd::Validate) => {
            let m = mackey_input(cli, caps, &doc(cli)?)?;
            out.report("report", &m.validate()?);
        }
        Command::Mackey(MackeyCmd::Burnside) => mackey_burnside(&mut out, &group(cli, caps)?)?,
        Command::Mackey(MackeyCmd::Compare { other }) => {
            let a = mackey_input(cli, caps, &doc(cli)?)?;
            let b = mackey_input(cli, caps, &input::read_json(other)?)?;
            mackey_compare(&mut out, &a, &b)?
        }
        Command::Squares(SquaresCmd::Check(p)) => {
            let pres = presentation(cli, p)?;
            out.report("report", &check_axioms(&pres)?);
        }
        Command::Squares(SquaresCmd::K0 { p, force }) => squares_k0(&mut out, &presentation(cli, p)?, *force)?,
        Command::Sk0(Sk0Cmd::Build { sub, base, presentation }) => {
            let g = group(cli, caps)?;
            let base = match base {
                Some(path) => input::gset(&g, &input::read_json(path)?)?,
                None if sub.class.is_some() || sub.subgroup.is_some() => {
                    GSet::coset_space(&g, &subgroup(&g, sub)?)
                }
                None => GSet::trivial(&g, 1),
            };
            sk0_build(&mut out, &base, bound(cli, &g), caps, *presentation)?
        }
        Command::Sk0(Sk0Cmd::Mackey) => {
            let g = group(cli, caps)?;
            sk0_mackey(&mut out, &g, bound(cli, &g), caps)?
        }
        Command::Sk0(Sk0Cmd::PhiPsi { sub }) => {
            let g = group(cli, caps)?;
            let hs: Vec<Subgroup> = if sub.class.is_some() || sub.subgroup.is_some() {
                vec![subgroup(&g, sub)?]
            } else {
                g.subgroup_classes().iter().map(|c| c.representative.clone()).collect()
            };
            sk0_phi_psi(&mut out, &g, &hs, bound(cli, &g), caps)?
        }
        Command::Sk0(Sk0Cmd::Beck) => {
            let g = group(cli, caps)?;
            let n = cli.trunc.unwrap_or(2 * g.order());
            sk0_beck(&mut out, &g, n, caps)?
        }
        Command::Euler(cmd) => {
            let (g, m) = complex(cli, caps)?;
            match cmd {
                EulerCmd::Chi => euler_chi(&mut out, &g, &m)?,
                EulerCmd::Restrict { sub } => euler_restrict(&mut out, &g, &m, &subgroup(&g, sub)?),
                EulerCmd::Fixed { sub } => {
                    let h = if sub.class.is_some() || sub.subgroup.is_some() {
                        Some(subgroup(&g, sub)?)
                    } else {
                        None
                    };
                    euler_fixed(&mut out, &g, &m, h.as_ref())?
                }
            }
        }
    }
    Ok(out)
}

fn doc(cli: &Cli) -> Result<Value> {
    match &cli.input {
        Some(path) => input::read_json(path),
        None => bad("this command needs an input document (-i)"),
    }
}

/// The group from `-g`, or else the input document read as a group.
fn group(cli: &Cli, caps: &Caps) -> Result<Arc<FiniteGroup>> {
    match (&cli.group, &cli.input) {
        (Some(s), _) => input::group_ref(s, caps),
        (None, Some(path)) => input::group_from_value(&input::read_json(path)?, caps),
        (None, None) => bad("no group given: pass -g <name|file> or -i <group.json>"),
    }
}

fn explicit_group(cli: &Cli, caps: &Caps) -> Result<Option<Arc<FiniteGroup>>> {
    cli.group.as_deref().map(|s| input::group_ref(s, caps)).transpose()
}

fn subgroup(g: &Arc<FiniteGroup>, sub: &SubgroupArgs) -> Result<Subgroup> {
    input::subgroup(g, sub.class, sub.subgroup.as_deref())
}

fn bound(cli: &Cli, g: &FiniteGroup) -> usize {
    cli.trunc.unwrap_or(3 * g.order())
}

fn elements(g: &FiniteGroup, h: &Subgroup) -> String {
    let labels: Vec<&str> = h.elements().iter().map(|&x| g.label(x)).collect();
    format!("{{{}}}", labels.join(", "))
}

fn abelian_json(a: &FgAbelianGroup) -> Value {
    json!({"free_rank": a.free_rank, "torsion": a.torsion})
}

fn group_info(out: &mut Output, g: &FiniteGroup) {
    out.field("group", g.name())
        .field("order", g.order())
        .field("abelian", g.is_abelian())
        .field("subgroups", g.all_subgroups().len())
        .field("subgroup_classes", g.subgroup_classes().len())
        .field("labels", g.labels().to_vec());
    out.pairs(&[
        ("group", g.name().to_string()),
        ("order", g.order().to_string()),
        ("abelian", g.is_abelian().to_string()),
        ("subgroups", g.all_subgroups().len().to_string()),
        ("subgroup classes", g.subgroup_classes().len().to_string()),
        ("elements", g.labels().join(" ")),
    ]);
}

fn group_subgroups(out: &mut Output, g: &FiniteGroup) {
    let mut rows = Vec::new();
    let mut list = Vec::new();
    for (i, c) in g.subgroup_classes().iter().enumerate() {
        let h = &c.representative;
        let norm = g.normalizer(h).order();
        list.push(json!({
            "class": i,
            "order": h.order(),
            "conjugates": c.members.len(),
            "normalizer_order": norm,
            "representative": h.elements(),
        }));
        rows.push(vec![
            i.to_string(),
            h.order().to_string(),
            c.members.len().to_string(),
            norm.to_string(),
            elements(g, h),
        ]);
    }
    out.field("group", g.name()).field("classes", list);
    out.text = table(&["class", "order", "conjugates", "|N(H)|", "representative"], &rows);
}

fn marks(out: &mut Output, g: &Arc<FiniteGroup>) {
    let ring = BurnsideRing::new(g);
    let m = ring.table_of_marks();
    let orders: Vec<usize> = g.subgroup_classes().iter().map(|c| c.representative.order()).collect();
    out.field("group", g.name())
        .field("class_orders", orders)
        .field("marks", m.to_rows());
    out.line(format!("table of marks of {} (rows H, columns G/K)", g.name()));
    out.matrix("marks", m);
}

fn burnside_mul(out: &mut Output, g: &Arc<FiniteGroup>, a: &[i64], b: &[i64]) -> Result<()> {
    let ring = BurnsideRing::new(g);
    if a.len() != ring.rank() || b.len() != ring.rank() {
        return bad(format!("elements of A({}) have {} coefficients", g.name(), ring.rank()));
    }
    let (a, b) = (
        BurnsideElement { coefficients: a.to_vec() },
        BurnsideElement { coefficients: b.to_vec() },
    );
    let p = ring.mul(&a, &b)?;
    let marks = [ring.marks(&a)?, ring.marks(&b)?, ring.marks(&p)?];
    out.field("group", g.name())
        .field("product", p.coefficients.clone())
        .field("marks", json!({"a": marks[0], "b": marks[1], "product": marks[2]}));
    out.pairs(&[
        ("a", vector(&a.coefficients)),
        ("b", vector(&b.coefficients)),
        ("a*b", vector(&p.coefficients)),
        ("marks(a*b)", vector(&marks[2])),
    ]);
    Ok(())
}

fn span_compose(out: &mut Output, cli: &Cli, caps: &Caps) -> Result<()> {
    let d = doc(cli)?;
    let g = input::document_group(&d, explicit_group(cli, caps)?.as_ref(), caps)?;
    let (Some(first), Some(second)) = (d.get("first"), d.get("second")) else {
        return bad("span compose needs \"first\" and \"second\" spans");
    };
    let (s, t) = (input::span(&g, first)?, input::span(&g, second)?);
    let c = s.compose(&t).map_err(|e| BadInput(e.to_string()))?;
    out.field("group", g.name())
        .field("composite", input::span_json(&c))
        .field("apex_size", c.apex().size())
        .field("orbit_signature", json!(c.orbit_signature()));
    out.pairs(&[
        ("apex size", c.apex().size().to_string()),
        ("left", format!("{:?}", c.left.values())),
        ("right", format!("{:?}", c.right.values())),
    ]);
    Ok(())
}

fn assoc_test(out: &mut Output, g: &Arc<FiniteGroup>, seed: u64, count: usize, apex: usize, object: usize) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assoc = Check::new("strict_associativity");
    let mut unit = Check::new("unit_up_to_2cell");
    for t in 0..count {
        let [a, b, c] = random_triple(g, object, apex, &mut rng);
        let left = a.compose(&b)?.compose(&c)?;
        let right = a.compose(&b.compose(&c)?)?;
        assoc.record(left == right, || {
            json!({"triple": t, "seed": seed, "spans": [input::span_json(&a), input::span_json(&b), input::span_json(&c)]})
        });
        let id = Span::identity(a.source());
        let composite = id.compose(&a)?;
        unit.record(span_iso(&composite, &a).is_some(), || json!({"triple": t, "seed": seed}));
    }
    let mut report = Report::default();
    report.push(assoc);
    report.push(unit);
    out.field("group", g.name()).field("seed", seed).field("count", count);
    out.report("report", &report);
    Ok(())
}

fn mackey_input(cli: &Cli, caps: &Caps, d: &Value) -> Result<MackeyFunctor> {
    let data: MackeyData = input::parse(d.clone(), "Mackey functor")?;
    let g = match explicit_group(cli, caps)? {
        Some(g) => g,
        None => input::group_ref(&data.group, caps)?,
    };
    MackeyFunctor::from_data(&g, &data).map_err(|e| BadInput(e.to_string()).into())
}

fn mackey_text(out: &mut Output, m: &MackeyFunctor) {
    let f = m.frame();
    let g = f.group();
    for i in 0..f.classes() {
        let h = f.subgroup(f.rep(i));
        out.line(format!("level {i}: H = {}  M(H) = {}", elements(g, h), m.level(i)));
    }
    for i in 0..f.classes() {
        for &k in f.below(i) {
            if k == f.rep(i) {
                continue;
            }
            out.matrix(&format!("res {i} -> subgroup {k}"), m.res(i, k));
            out.matrix(&format!("tr subgroup {k} -> {i}"), m.tr(i, k));
        }
    }
}

fn mackey_burnside(out: &mut Output, g: &Arc<FiniteGroup>) -> Result<()> {
    let m = burnside_mackey(g)?;
    out.field("mackey", serde_json::to_value(m.to_data())?);
    mackey_text(out, &m);
    Ok(())
}

fn mackey_compare(out: &mut Output, a: &MackeyFunctor, b: &MackeyFunctor) -> Result<()> {
    let mut report = Report::default();
    let mut levels = Check::new("levels");
    for i in 0..a.frame().classes() {
        levels.record(a.level(i) == b.level(i), || {
            json!({"class": i, "first": abelian_json(a.level(i)), "second": abelian_json(b.level(i))})
        });
    }
    let same = levels.passed();
    report.push(levels);
    if same {
        report.checks.extend(MackeyMorphism::identity(a).check(a, b)?.checks);
    }
    out.report("report", &report);
    Ok(())
}

fn presentation(cli: &Cli, p: &PresentationArgs) -> Result<SquaresPresentation> {
    let d = doc(cli)?;
    if p.waldhausen {
        let w: WaldhausenData = input::parse(d, "Waldhausen category")?;
        Ok(from_waldhausen(&w)?)
    } else {
        input::parse(d, "squares presentation")
    }
}

fn squares_k0(out: &mut Output, p: &SquaresPresentation, force: bool) -> Result<()> {
    let r = k0(p, force)?;
    let classes = r.classes(p);
    out.field("free_rank", r.group.free_rank)
        .field("torsion", r.group.torsion.clone())
        .field("classes", json!(classes));
    out.line(format!("K0 = {}", r.group));
    let rows: Vec<Vec<String>> = classes.iter().map(|(k, v)| vec![k.clone(), vector(v)]).collect();
    out.text.extend(table(&["object", "class"], &rows));
    Ok(())
}

fn sk0_build(out: &mut Output, base: &GSet, n: usize, caps: &Caps, with_presentation: bool) -> Result<()> {
    let g = base.group().clone();
    let t = build_truncated(base, n, caps.object)?;
    let k = t.k0_group()?.clone();
    let cells: Vec<Value> = t
        .cells()
        .iter()
        .map(|c| json!({"orbit": c.orbit, "base_point": c.base_point, "subgroup": c.subgroup.elements(), "size": c.size}))
        .collect();
    if with_presentation {
        if let Value::Object(fields) = serde_json::to_value(t.presentation(caps.hom)?)? {
            out.fields.extend(fields);
        }
    }
    out.field("group", g.name())
        .field("base", input::gset_json(base))
        .field("bound", n)
        .field("cells", cells)
        .field("object_count", t.objects().len())
        .field("k0", abelian_json(&k));
    out.pairs(&[
        ("group", g.name().to_string()),
        ("base size", base.size().to_string()),
        ("bound", n.to_string()),
        ("cells", t.cells().len().to_string()),
        ("objects", t.objects().len().to_string()),
        ("K0", k.to_string()),
    ]);
    Ok(())
}

fn sk0_mackey(out: &mut Output, g: &Arc<FiniteGroup>, n: usize, caps: &Caps) -> Result<()> {
    let sk = k0_mackey(g, n, caps.object)?;
    let report = sk.comparison.check(&sk.functor, &sk.burnside)?;
    let mut iso = Check::new("isomorphism");
    iso.record(sk.isomorphism, || json!({"comparison": sk.comparison}));
    let mut full = Report::default();
    full.push(iso);
    full.checks.extend(report.checks);
    let levels: Vec<Value> = sk.functor.levels().iter().map(abelian_json).collect();
    out.field("group", g.name())
        .field("bound", n)
        .field("isomorphism", sk.isomorphism)
        .field("levels", levels)
        .field("comparison", serde_json::to_value(&sk.comparison)?)
        .field("mackey", serde_json::to_value(sk.functor.to_data())?);
    out.line(format!("K0 Mackey functor of {} at bound {n}", g.name()));
    for (i, m) in sk.comparison.maps.iter().enumerate() {
        out.line(format!("level {i}: K0 = {}  A(H) = {}", sk.functor.level(i), sk.burnside.level(i)));
        out.matrix(&format!("comparison at level {i}"), m);
    }
    out.report("report", &full);
    Ok(())
}

fn sk0_phi_psi(out: &mut Output, g: &Arc<FiniteGroup>, hs: &[Subgroup], n: usize, caps: &Caps) -> Result<()> {
    let mut per = Vec::new();
    for h in hs {
        let r = phi_psi_check(g, h, n, caps.object)?;
        out.passed &= r.passed();
        out.line(format!("H = {}", elements(g, h)));
        out.text.extend(r.render().lines().map(|l| format!("  {l}")));
        per.push(json!({"subgroup": h.elements(), "report": r}));
    }
    out.field("group", g.name()).field("bound", n).field("reports", per);
    Ok(())
}

fn sk0_beck(out: &mut Output, g: &Arc<FiniteGroup>, n: usize, caps: &Caps) -> Result<()> {
    let squares = orbit_pullback_squares(g, caps.hom)?;
    let mut check = Check::new("beck_chevalley");
    for (i, sq) in squares.iter().enumerate() {
        let r = beck_chevalley_check(sq, n, caps.object)?;
        for c in &r.checks {
            check.record(c.passed(), || json!({"square": i, "witness": c.witness}));
        }
    }
    let mut report = Report::default();
    report.push(check);
    out.field("group", g.name()).field("bound", n).field("squares", squares.len());
    out.line(format!("{} pullback squares of orbits of {}", squares.len(), g.name()));
    out.report("report", &report);
    Ok(())
}

fn complex(cli: &Cli, caps: &Caps) -> Result<(Arc<FiniteGroup>, GCWComplex)> {
    let d = doc(cli)?;
    let g = input::document_group(&d, explicit_group(cli, caps)?.as_ref(), caps)?;
    let mut d = d;
    if let Some(obj) = d.as_object_mut() {
        obj.insert("group".into(), json!(g.name()));
    }
    let data: GcwData = input::parse(d, "G-CW complex")?;
    let m = GCWComplex::from_data(&g, &data, DEFAULT_MAX_DIM).map_err(|e| BadInput(e.to_string()))?;
    Ok((g, m))
}

fn euler_chi(out: &mut Output, g: &Arc<FiniteGroup>, m: &GCWComplex) -> Result<()> {
    let ring = BurnsideRing::new(g);
    let chi = euler_characteristic(m);
    let marks = ring.marks(&chi)?;
    out.field("group", g.name())
        .field("chi", chi.coefficients.clone())
        .field("marks", marks.clone());
    out.pairs(&[("chi", vector(&chi.coefficients)), ("marks", vector(&marks))]);
    Ok(())
}

fn euler_restrict(out: &mut Output, g: &Arc<FiniteGroup>, m: &GCWComplex, h: &Subgroup) {
    let emb = g.subgroup_group(h);
    let r = restrict_complex(m, &emb);
    let chi = euler_characteristic(&r);
    out.field("group", g.name())
        .field("subgroup", h.elements())
        .field("complex", json!(r.to_data()))
        .field("chi", chi.coefficients.clone());
    out.pairs(&[
        ("subgroup", elements(g, h)),
        ("cells", r.cells().len().to_string()),
        ("chi", vector(&chi.coefficients)),
    ]);
}

fn euler_fixed(out: &mut Output, g: &Arc<FiniteGroup>, m: &GCWComplex, h: Option<&Subgroup>) -> Result<()> {
    out.field("group", g.name());
    if let Some(h) = h {
        let v = fixed_euler(m, h);
        out.field("subgroup", h.elements()).field("fixed_euler", v);
        out.pairs(&[("subgroup", elements(g, h)), ("fixed euler", v.to_string())]);
        return Ok(());
    }
    let ring = BurnsideRing::new(g);
    let marks = ring.marks(&euler_characteristic(m))?;
    let mut check = Check::new("marks_identity");
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (i, c) in g.subgroup_classes().iter().enumerate() {
        let v = fixed_euler(m, &c.representative);
        check.record(v == marks[i], || json!({"class": i, "fixed_euler": v, "mark": marks[i]}));
        values.push(v);
        rows.push(vec![i.to_string(), elements(g, &c.representative), v.to_string(), marks[i].to_string()]);
    }
    out.field("fixed_euler", values);
    out.text = table(&["class", "subgroup", "fixed euler", "mark of chi"], &rows);
    let mut report = Report::default();
    report.push(check);
    out.report("report", &report);
    Ok(())
}
