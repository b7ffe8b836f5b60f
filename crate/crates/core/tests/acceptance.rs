//! Acceptance suite: ten criteria, one line each, exact arithmetic only.
//!
//! Runs without the libtest harness so the result lines are always shown.
//! Any failing criterion makes the process exit non-zero.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use common::{conjugacy_class_count, marks_by_fixed_points, res_tr_by_pullback, subsets_closed};
use mackey_sk::burnside::{burnside_class, BurnsideRing};
use mackey_sk::euler::{euler_characteristic, fixed_euler, fixtures as gcw, restrict_complex};
use mackey_sk::gset::{product, GMap};
use mackey_sk::mackey::{burnside_mackey, Frame};
use mackey_sk::sk::{
    beck_chevalley_check, build_truncated, k0_mackey, orbit_pullback_squares, phi_psi_check,
    DEFAULT_OBJECT_CAP,
};
use mackey_sk::span::{random_triple, span_iso, Span};
use mackey_sk::squares::{check_axioms, SquareSpec, SquaresPresentation};
use mackey_sk::{groups, FgAbelianGroup, FiniteGroup, GSet, Matrix};

const CAP: usize = DEFAULT_OBJECT_CAP;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {:.2?}, limit {:.0?}", t, limit));
    }
    Ok(())
}

fn small_groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        groups::trivial(),
        groups::cyclic(2),
        groups::cyclic(3),
        groups::klein_four(),
        groups::symmetric3(),
    ]
}

fn lattices() -> Outcome {
    let expected = [("S3", 6, 4), ("D4", 10, 8), ("A4", 10, 5)];
    let mut seen = 0;
    for g in groups::fixtures() {
        let start = Instant::now();
        let (subs, classes) = (g.all_subgroups().len(), g.subgroup_classes().len());
        within(Duration::from_secs(1), start, g.name())?;
        let oracle = subsets_closed(&g);
        ensure!(subs == oracle.len(), "{}: {subs} subgroups, oracle {}", g.name(), oracle.len());
        let oc = conjugacy_class_count(&g, &oracle);
        ensure!(classes == oc, "{}: {classes} classes, oracle {oc}", g.name());
        if let Some(&(_, s, c)) = expected.iter().find(|e| e.0 == g.name()) {
            ensure!((subs, classes) == (s, c), "{}: expected {s}/{c}", g.name());
            seen += 1;
        }
    }
    ensure!(seen == expected.len(), "missing named fixtures");
    Ok(format!("{} groups", groups::fixtures().len()))
}

fn marks() -> Outcome {
    let start = Instant::now();
    for g in groups::fixtures() {
        let ring = BurnsideRing::new(&g);
        let m = ring.table_of_marks();
        ensure!(*m == marks_by_fixed_points(&g), "{}: marks differ from fixed points", g.name());
        let n = ring.rank();
        for i in 0..n {
            for j in 0..i {
                ensure!(m.get(i, j) == 0, "{}: entry ({i},{j}) below the diagonal", g.name());
            }
            let h = &g.subgroup_classes()[i].representative;
            let weyl = (g.normalizer(h).order() / h.order()) as i64;
            ensure!(m.get(i, i) == weyl, "{}: diagonal {i} is not |N(H)|/|H|", g.name());
        }
        for i in 0..n {
            for j in 0..n {
                let prod = ring.basis_product(i, j);
                let direct = burnside_class(&product(&ring.orbit(i), &ring.orbit(j)).unwrap());
                ensure!(*prod == direct, "{}: basis product ({i},{j})", g.name());
                let lhs = ring.marks(prod).unwrap();
                let (a, b) = (ring.marks(&ring.basis(i)).unwrap(), ring.marks(&ring.basis(j)).unwrap());
                for k in 0..n {
                    ensure!(lhs[k] == a[k] * b[k], "{}: marks not multiplicative at ({i},{j})", g.name());
                }
            }
        }
    }
    within(Duration::from_secs(5), start, "marks")?;
    Ok(format!("{:.2?}", start.elapsed()))
}

fn spans() -> Outcome {
    let start = Instant::now();
    let g = groups::symmetric3();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in 0..500 {
        let [a, b, c] = random_triple(&g, 6, 6, &mut rng);
        ensure!(a.apex().size() <= 6 && b.apex().size() <= 6 && c.apex().size() <= 6, "triple {t}: apex too large");
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        ensure!(left == right, "triple {t}: association orders differ");
        let id = Span::identity(a.source());
        ensure!(span_iso(&id.compose(&a).unwrap(), &a).is_some(), "triple {t}: no left unit 2-cell");
        let id = Span::identity(a.target());
        ensure!(span_iso(&a.compose(&id).unwrap(), &a).is_some(), "triple {t}: no right unit 2-cell");
    }
    within(Duration::from_secs(10), start, "span triples")?;
    let c2 = groups::cyclic(2);
    let r = GSet::regular(&c2);
    let swap = GMap::new(r.clone(), r.clone(), vec![1, 0]).unwrap();
    let s = Span::new(swap, GMap::identity(&r)).unwrap();
    let unit_composite = Span::identity(&r).compose(&s).unwrap();
    ensure!(unit_composite != s, "strict left unit unexpectedly holds");
    ensure!(span_iso(&unit_composite, &s).is_some(), "left unit has no 2-cell");
    Ok(format!("500 triples in {:.2?}, strict unit fails on C2", start.elapsed()))
}

fn burnside_mackey_fixtures() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for g in groups::fixtures().into_iter().filter(|g| g.order() <= 12) {
        let m = burnside_mackey(&g).unwrap();
        let report = m.validate().unwrap();
        ensure!(report.passed(), "{}: {}", g.name(), report.render());
        let f = m.frame().clone();
        let top = f.classes() - 1;
        let whole = g.whole();
        for k in 0..g.all_subgroups().len() {
            for l in 0..g.all_subgroups().len() {
                let oracle = res_tr_by_pullback(&g, &f, k, l);
                let formula = m.double_coset_sum(&whole, k, l).unwrap();
                ensure!(formula == oracle, "{}: double coset sum at ({k},{l})", g.name());
                if f.rep(f.class_of(k)) == k && f.rep(f.class_of(l)) == l {
                    let direct = m.res(top, k).mul(m.tr(top, l)).unwrap();
                    ensure!(direct == oracle, "{}: res∘tr at ({k},{l})", g.name());
                }
                pairs += 1;
            }
        }
    }
    within(Duration::from_secs(30), start, "burnside mackey")?;
    Ok(format!("{pairs} subgroup pairs in {:.2?}", start.elapsed()))
}

fn sk_k0() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for g in small_groups() {
        let n = g.order();
        for c in g.subgroup_classes() {
            let base = GSet::coset_space(&g, &c.representative);
            let rank = g.subgroup_group(&c.representative).group.subgroup_classes().len();
            let at3 = build_truncated(&base, 3 * n, CAP).unwrap();
            let at4 = build_truncated(&base, 4 * n, CAP).unwrap();
            let (k3, k4) = (at3.k0_group().unwrap(), at4.k0_group().unwrap());
            ensure!(*k3 == FgAbelianGroup::free(rank), "{} H={:?}: K0 is {k3}", g.name(), c.representative);
            ensure!(k3 == k4, "{} H={:?}: K0 changes from {k3} to {k4}", g.name(), c.representative);
            cases += 1;
        }
    }
    within(Duration::from_secs(60), start, "dimension-0 K0")?;
    Ok(format!("{cases} orbits in {:.2?}", start.elapsed()))
}

fn sk_mackey() -> Outcome {
    let start = Instant::now();
    for g in small_groups() {
        let sk = k0_mackey(&g, 3 * g.order(), CAP).unwrap();
        ensure!(sk.isomorphism, "{}: comparison is not an isomorphism", g.name());
        let report = sk.comparison.check(&sk.functor, &sk.burnside).unwrap();
        ensure!(report.passed(), "{}: {}", g.name(), report.render());
        let valid = sk.functor.validate().unwrap();
        ensure!(valid.passed(), "{}: {}", g.name(), valid.render());
        for (i, m) in sk.comparison.maps.iter().enumerate() {
            ensure!(m.rows() == m.cols(), "{}: level {i} is not square", g.name());
            let det = m.determinant().unwrap();
            ensure!(det.abs() == 1, "{}: level {i} has determinant {det}", g.name());
        }
    }
    Ok(format!("{:.2?}", start.elapsed()))
}

fn beck_chevalley() -> Outcome {
    let start = Instant::now();
    let g = groups::symmetric3();
    let squares = orbit_pullback_squares(&g, CAP).unwrap();
    ensure!(!squares.is_empty(), "no squares");
    let mut components = 0;
    for (i, sq) in squares.iter().enumerate() {
        ensure!(sq.is_pullback().unwrap(), "square {i} is not a pullback");
        let report = beck_chevalley_check(sq, 12, CAP).unwrap();
        ensure!(report.passed(), "square {i}: {}", report.render());
        components += report.checks.iter().map(|c| c.checked).sum::<usize>();
    }
    within(Duration::from_secs(60), start, "beck-chevalley")?;
    Ok(format!("{} squares, {components} components in {:.2?}", squares.len(), start.elapsed()))
}

fn phi_psi() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for g in small_groups() {
        for c in g.subgroup_classes() {
            let report = phi_psi_check(&g, &c.representative, 3 * g.order(), CAP).unwrap();
            ensure!(report.passed(), "{} H={:?}: {}", g.name(), c.representative, report.render());
            for axiom in ["phi_preserves_squares", "psi_preserves_squares", "phi_preserves_coproducts"] {
                ensure!(report.get(axiom).is_some(), "{axiom} was not checked");
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs in {:.2?}", start.elapsed()))
}

fn euler() -> Outcome {
    // Fixed-point Euler characteristics from the topology of each action:
    // spheres have χ = 2, rotation axes fix two poles, a reflection fixes a
    // circle, and a reflection of the triangle fixes two points.
    let expected: [(&str, &[i64]); 4] = [
        ("c2-rotation-sphere", &[2, 2]),
        ("c2-reflection-sphere", &[2, 0]),
        ("c3-rotation-sphere", &[2, 2]),
        ("s3-triangle", &[0, 2, 0, 0]),
    ];
    for (name, m) in gcw::all() {
        let g = m.group().clone();
        let ring = BurnsideRing::new(&g);
        let chi = euler_characteristic(&m);
        let marks = ring.marks(&chi).unwrap();
        let direct: Vec<i64> = g.subgroup_classes().iter().map(|c| fixed_euler(&m, &c.representative)).collect();
        ensure!(marks == direct, "{name}: marks {marks:?}, fixed {direct:?}");
        let want = expected.iter().find(|e| e.0 == name).map(|e| e.1);
        ensure!(want == Some(&direct[..]), "{name}: fixed-point χ {direct:?}");
        let bm = burnside_mackey(&g).unwrap();
        let f = Frame::new(&g);
        let top_class = f.classes() - 1;
        for i in 0..f.classes() {
            let k = f.rep(i);
            let emb = g.subgroup_group(f.subgroup(k));
            let restricted = euler_characteristic(&restrict_complex(&m, &emb));
            let pushed = bm.res(top_class, k).apply(&chi.coefficients).unwrap();
            ensure!(pushed == restricted.coefficients, "{name}: restriction to class {i}");
        }
    }
    Ok(format!("{} complexes", gcw::all().len()))
}

fn pointed_presentation() -> SquaresPresentation {
    let t = build_truncated(&GSet::trivial(&groups::trivial(), 1), 3, CAP).unwrap();
    t.presentation(1_000_000).unwrap()
}

fn without(p: &SquaresPresentation, legs: &[(usize, usize, usize, usize)]) -> SquaresPresentation {
    let mut q = p.clone();
    q.squares.retain(|s| !legs.contains(&s.legs()));
    q
}

fn missing_legs(w: &serde_json::Value) -> Option<(usize, usize, usize, usize)> {
    let s: SquareSpec = serde_json::from_value(w.get("missing")?.clone()).ok()?;
    Some(s.legs())
}

fn corruptions() -> Outcome {
    let p = pointed_presentation();
    let base = check_axioms(&p).unwrap();
    ensure!(base.passed(), "uncorrupted presentation fails: {}", base.render());
    let s = p.structure().unwrap();
    let fails = |q: &SquaresPresentation, axiom: &str| -> Result<serde_json::Value, String> {
        let r = check_axioms(q).map_err(|e| e.to_string())?;
        let c = r.get(axiom).ok_or(format!("{axiom} missing"))?;
        ensure!(!c.passed(), "{axiom} still passes");
        Ok(c.witness.clone().unwrap_or_default())
    };

    // (i) coproduct closure
    let mut target = None;
    'outer: for q1 in &p.squares {
        for q2 in &p.squares {
            let legs = [
                s.coproduct_map(q1.top, q2.top),
                s.coproduct_map(q1.left, q2.left),
                s.coproduct_map(q1.right, q2.right),
                s.coproduct_map(q1.bottom, q2.bottom),
            ];
            if let [Some(Some(t)), Some(Some(l)), Some(Some(r)), Some(Some(b))] = legs {
                let sum = (t, l, r, b);
                if sum != q1.legs() && sum != q2.legs() {
                    target = Some(sum);
                    break 'outer;
                }
            }
        }
    }
    let removed = target.ok_or("no coproduct of two squares found")?;
    let w = fails(&without(&p, &[removed]), "coproduct_closure")?;
    let (t, l, r, b) = removed;
    ensure!(w["coproduct_legs"] == json!([t, l, r, b]), "closure witness {w}");

    // (ii) composition
    let mut target = None;
    'outer: for q1 in &p.squares {
        for q2 in p.squares.iter().filter(|q| q.left == q1.right) {
            let legs = (s.then(q1.top, q2.top), q1.left, q2.right, s.then(q1.bottom, q2.bottom));
            if legs != q1.legs() && legs != q2.legs() {
                target = Some(legs);
                break 'outer;
            }
        }
    }
    let removed = target.ok_or("no pasted composite found")?;
    let w = fails(&without(&p, &[removed]), "square_composition")?;
    ensure!(missing_legs(&w) == Some(removed), "composition witness {w}");

    // (iii) isomorphisms are horizontal and vertical
    let two = p.object_index("[2]").ok_or("no object [2]")?;
    let swap = s
        .hom(two, two)
        .iter()
        .copied()
        .find(|&f| f != s.identity(two))
        .ok_or("no swap on [2]")?;
    let mut q = p.clone();
    q.morphisms.iter_mut().find(|m| m.id == swap).unwrap().horizontal = false;
    q.squares.retain(|sq| sq.top != swap && sq.bottom != swap);
    let w = fails(&q, "isomorphisms")?;
    ensure!(w["morphism"] == json!(swap) && w["horizontal"] == json!(false), "isomorphism witness {w}");

    // (iv) squares with isomorphisms on two opposite sides
    let removed = p
        .squares
        .iter()
        .find(|sq| sq.left == swap && s.is_iso(sq.right) && sq.a == sq.c)
        .map(SquareSpec::legs)
        .ok_or("no iso square with swap on the left")?;
    let w = fails(&without(&p, &[removed]), "iso_squares")?;
    ensure!(missing_legs(&w) == Some(removed), "iso square witness {w}");

    // (v) distinguished object is initial
    let mut q = p.clone();
    q.distinguished = p.object_index("[1]").ok_or("no object [1]")?;
    let w = fails(&q, "initial_object")?;
    ensure!(w["object"] == json!("[0]") && w["horizontal_maps"] == json!(0), "initial witness {w}");

    // cocartesian: the square O → [1], O → [1] into [1] ⊔ [1]
    let one = p.object_index("[1]").unwrap();
    let c = p
        .coproducts
        .iter()
        .find(|c| c.a == one && c.b == one)
        .ok_or("no coproduct [1] ⊔ [1]")?;
    let from_o = s.hom(p.distinguished, one)[0];
    let removed = (from_o, from_o, c.inr, c.inl);
    let w = fails(&without(&p, &[removed]), "cocartesian")?;
    ensure!(missing_legs(&w) == Some(removed), "cocartesian witness {w}");

    // Mackey: doubled transfer from the trivial subgroup of C2
    let c2 = groups::cyclic(2);
    let m = burnside_mackey(&c2).unwrap();
    let f = m.frame().clone();
    let top = f.classes() - 1;
    let e = f.index(&c2.trivial_subgroup());
    let doubled: Matrix = m.tr(top, e).scale(2).unwrap();
    let bad = m.with_transfer(top, e, doubled).unwrap();
    let report = bad.validate().unwrap();
    ensure!(report.failed() == vec!["double_coset"], "failed checks {:?}", report.failed());
    let w = report.get("double_coset").unwrap().witness.clone().unwrap();
    ensure!(w["subgroups"] == json!([e, e]), "double coset witness {w}");
    Ok("6 squares corruptions and 1 Mackey corruption rejected".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("subgroup lattices match the subset-closure oracle", lattices),
        ("tables of marks", marks),
        ("span composition is strictly associative", spans),
        ("Burnside Mackey functors and the double coset formula", burnside_mackey_fixtures),
        ("dimension-0 K0 over orbits is free on subgroup classes", sk_k0),
        ("K0 Mackey functor is isomorphic to the Burnside one", sk_mackey),
        ("Beck-Chevalley maps on S3 orbit pullbacks", beck_chevalley),
        ("fibers and induction are inverse equivalences", phi_psi),
        ("equivariant Euler characteristics", euler),
        ("corrupted fixtures are rejected", corruptions),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
