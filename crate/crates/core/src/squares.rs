//! Finite categories with squares: structural validation, the axiom
//! checker, and K₀ by Smith normal form.
//!
//! A square `(A, B, C, D; top, left, right, bottom)` has `top: A → B` and
//! `bottom: C → D` horizontal, `left: A → C` and `right: B → D` vertical,
//! and contributes the relation `[A] + [D] = [B] + [C]`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::abelian::{Cokernel, FgAbelianGroup, Relation};
use crate::error::{Error, Result};
use crate::report::{Check, Report};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub id: usize,
    pub src: usize,
    pub dst: usize,
    #[serde(default)]
    pub horizontal: bool,
    #[serde(default)]
    pub vertical: bool,
    #[serde(default)]
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoproductSpec {
    pub a: usize,
    pub b: usize,
    pub object: usize,
    pub inl: usize,
    pub inr: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareSpec {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub top: usize,
    pub left: usize,
    pub right: usize,
    pub bottom: usize,
}

impl SquareSpec {
    pub fn legs(&self) -> (usize, usize, usize, usize) {
        (self.top, self.left, self.right, self.bottom)
    }
}

/// A finite category with squares given by complete data. Morphisms are
/// referenced by `id`; `comp` lists triples `[f, g, h]` with `h = g ∘ f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquaresPresentation {
    pub objects: Vec<String>,
    pub distinguished: usize,
    pub morphisms: Vec<MorphismSpec>,
    pub comp: Vec<[usize; 3]>,
    #[serde(default)]
    pub coproducts: Vec<CoproductSpec>,
    #[serde(default)]
    pub squares: Vec<SquareSpec>,
}

/// Validated view of a presentation with composition and hom lookups by
/// morphism id.
#[derive(Debug)]
pub struct Structure<'a> {
    p: &'a SquaresPresentation,
    by_id: HashMap<usize, &'a MorphismSpec>,
    comp: HashMap<(usize, usize), usize>,
    hom: HashMap<(usize, usize), Vec<usize>>,
    out_of: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
    identity: Vec<usize>,
    inverse: HashMap<usize, usize>,
    squares: HashSet<(usize, usize, usize, usize)>,
    coproduct: HashMap<(usize, usize), &'a CoproductSpec>,
}

fn structural<T>(msg: String) -> Result<T> {
    Err(Error::Structural(msg))
}

impl<'a> Structure<'a> {
    /// Checks endpoints, totality and associativity of composition,
    /// identities, coproduct entries, and that every listed square is well
    /// formed and commutes.
    pub fn new(p: &'a SquaresPresentation) -> Result<Self> {
        let n = p.objects.len();
        if p.distinguished >= n {
            return structural(format!("distinguished object {} does not exist", p.distinguished));
        }
        let mut by_id = HashMap::new();
        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut out_of = vec![Vec::new(); n];
        let mut into = vec![Vec::new(); n];
        for m in &p.morphisms {
            if m.src >= n || m.dst >= n {
                return structural(format!("morphism {} has an endpoint out of range", m.id));
            }
            if by_id.insert(m.id, m).is_some() {
                return structural(format!("duplicate morphism id {}", m.id));
            }
            hom.entry((m.src, m.dst)).or_default().push(m.id);
            out_of[m.src].push(m.id);
            into[m.dst].push(m.id);
        }
        let mut comp = HashMap::new();
        for &[f, g, h] in &p.comp {
            let (Some(mf), Some(mg), Some(mh)) = (by_id.get(&f), by_id.get(&g), by_id.get(&h)) else {
                return structural(format!("composition [{f}, {g}, {h}] names an unknown morphism"));
            };
            if mf.dst != mg.src || mh.src != mf.src || mh.dst != mg.dst {
                return structural(format!("composition [{f}, {g}, {h}] has mismatched endpoints"));
            }
            if comp.insert((f, g), h).is_some_and(|prev| prev != h) {
                return structural(format!("composition of {f} then {g} is listed twice"));
            }
        }
        let mut s = Structure {
            p,
            by_id,
            comp,
            hom,
            out_of,
            into,
            identity: Vec::with_capacity(n),
            inverse: HashMap::new(),
            squares: HashSet::new(),
            coproduct: HashMap::new(),
        };
        for m in &p.morphisms {
            if let Some(&g) = s.out_of[m.dst].iter().find(|&&g| !s.comp.contains_key(&(m.id, g))) {
                return structural(format!("composition of {} then {g} is missing", m.id));
            }
        }
        for x in 0..n {
            let id = s.hom(x, x).iter().copied().find(|&e| {
                s.out_of[x].iter().all(|&g| s.comp[&(e, g)] == g)
                    && s.into[x].iter().all(|&f| s.comp[&(f, e)] == f)
            });
            match id {
                Some(e) => s.identity.push(e),
                None => return structural(format!("object {} has no identity", p.objects[x])),
            }
        }
        for m in &p.morphisms {
            for &g in &s.out_of[m.dst] {
                let fg = s.comp[&(m.id, g)];
                for &h in &s.out_of[s.by_id[&g].dst] {
                    if s.comp[&(fg, h)] != s.comp[&(m.id, s.comp[&(g, h)])] {
                        return structural(format!(
                            "composition is not associative at ({}, {g}, {h})",
                            m.id
                        ));
                    }
                }
            }
        }
        for m in &p.morphisms {
            let inv = s.hom(m.dst, m.src).iter().copied().find(|&g| {
                s.comp[&(m.id, g)] == s.identity[m.src] && s.comp[&(g, m.id)] == s.identity[m.dst]
            });
            if let Some(g) = inv {
                s.inverse.insert(m.id, g);
            }
        }
        for c in &p.coproducts {
            let ok = c.a < n
                && c.b < n
                && c.object < n
                && s.by_id.get(&c.inl).is_some_and(|m| m.src == c.a && m.dst == c.object)
                && s.by_id.get(&c.inr).is_some_and(|m| m.src == c.b && m.dst == c.object);
            if !ok {
                return structural(format!("coproduct entry for ({}, {}) is malformed", c.a, c.b));
            }
            s.coproduct.insert((c.a, c.b), c);
        }
        for (i, q) in p.squares.iter().enumerate() {
            let get = |id: usize| s.by_id.get(&id).copied();
            let (Some(t), Some(l), Some(r), Some(b)) =
                (get(q.top), get(q.left), get(q.right), get(q.bottom))
            else {
                return structural(format!("square {i} names an unknown morphism"));
            };
            if (t.src, t.dst, l.src, l.dst, r.src, r.dst, b.src, b.dst)
                != (q.a, q.b, q.a, q.c, q.b, q.d, q.c, q.d)
            {
                return structural(format!("square {i} has mismatched corners"));
            }
            if !(t.horizontal && b.horizontal && l.vertical && r.vertical) {
                return structural(format!("square {i} has legs of the wrong kind"));
            }
            if s.comp[&(q.top, q.right)] != s.comp[&(q.left, q.bottom)] {
                return structural(format!("square {i} does not commute"));
            }
            s.squares.insert(q.legs());
        }
        Ok(s)
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        self.hom.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn morphism(&self, id: usize) -> &MorphismSpec {
        self.by_id[&id]
    }

    /// `g ∘ f`
    pub fn then(&self, f: usize, g: usize) -> usize {
        self.comp[&(f, g)]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        self.inverse.get(&f).copied()
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse.contains_key(&f)
    }

    pub fn has_square(&self, top: usize, left: usize, right: usize, bottom: usize) -> bool {
        self.squares.contains(&(top, left, right, bottom))
    }

    fn square(&self, top: usize, left: usize, right: usize, bottom: usize) -> SquareSpec {
        let (t, b) = (self.morphism(top), self.morphism(bottom));
        SquareSpec {
            a: t.src,
            b: t.dst,
            c: b.src,
            d: b.dst,
            top,
            left,
            right,
            bottom,
        }
    }

    /// The morphism `f ⊔ g` induced between listed coproducts, if both
    /// coproducts are listed. `Some(None)` means the coproducts exist but no
    /// induced morphism does.
    pub fn coproduct_map(&self, f: usize, g: usize) -> Option<Option<usize>> {
        let (mf, mg) = (self.morphism(f), self.morphism(g));
        let src = self.coproduct.get(&(mf.src, mg.src))?;
        let dst = self.coproduct.get(&(mf.dst, mg.dst))?;
        let want_l = self.then(f, dst.inl);
        let want_r = self.then(g, dst.inr);
        Some(
            self.hom(src.object, dst.object)
                .iter()
                .copied()
                .find(|&u| self.then(src.inl, u) == want_l && self.then(src.inr, u) == want_r),
        )
    }
}

impl SquaresPresentation {
    pub fn structure(&self) -> Result<Structure<'_>> {
        Structure::new(self)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }
}

/// Checks the axioms of a category with squares and the cocartesian
/// monoidal condition. Coproduct-dependent checks skip pairs whose
/// coproduct is not listed.
pub fn check_axioms(p: &SquaresPresentation) -> Result<Report> {
    let s = p.structure()?;
    let mut report = Report::default();
    let o = p.distinguished;
    let name = |x: usize| p.objects[x].clone();

    let mut sub = Check::new("subcategories");
    for x in 0..p.objects.len() {
        let e = s.morphism(s.identity(x));
        sub.record(e.horizontal && e.vertical, || {
            json!({"object": name(x), "identity": e.id, "reason": "identity is not both horizontal and vertical"})
        });
    }
    for &[f, g, h] in &p.comp {
        let (mf, mg, mh) = (s.morphism(f), s.morphism(g), s.morphism(h));
        if mf.horizontal && mg.horizontal {
            sub.record(mh.horizontal, || json!({"composite": [f, g, h], "reason": "horizontal morphisms not closed"}));
        }
        if mf.vertical && mg.vertical {
            sub.record(mh.vertical, || json!({"composite": [f, g, h], "reason": "vertical morphisms not closed"}));
        }
    }
    report.push(sub);

    let mut closure = Check::new("coproduct_closure");
    for q1 in &p.squares {
        for q2 in &p.squares {
            let maps = [
                s.coproduct_map(q1.top, q2.top),
                s.coproduct_map(q1.left, q2.left),
                s.coproduct_map(q1.right, q2.right),
                s.coproduct_map(q1.bottom, q2.bottom),
            ];
            if maps.iter().any(Option::is_none) {
                continue;
            }
            let ids: Vec<Option<usize>> = maps.into_iter().map(Option::unwrap).collect();
            let ok = match ids[..] {
                [Some(t), Some(l), Some(r), Some(b)] => s.has_square(t, l, r, b),
                _ => false,
            };
            closure.record(ok, || {
                json!({"squares": [q1, q2], "coproduct_legs": ids,
                       "reason": "coproduct of distinguished squares is not distinguished"})
            });
        }
    }
    report.push(closure);

    let mut paste = Check::new("square_composition");
    let mut by_left: HashMap<usize, Vec<&SquareSpec>> = HashMap::new();
    let mut by_top: HashMap<usize, Vec<&SquareSpec>> = HashMap::new();
    for q in &p.squares {
        by_left.entry(q.left).or_default().push(q);
        by_top.entry(q.top).or_default().push(q);
    }
    for q1 in &p.squares {
        for q2 in by_left.get(&q1.right).into_iter().flatten() {
            let (t, b) = (s.then(q1.top, q2.top), s.then(q1.bottom, q2.bottom));
            paste.record(s.has_square(t, q1.left, q2.right, b), || {
                json!({"direction": "horizontal", "squares": [q1, q2],
                       "missing": s.square(t, q1.left, q2.right, b)})
            });
        }
        for q2 in by_top.get(&q1.bottom).into_iter().flatten() {
            let (l, r) = (s.then(q1.left, q2.left), s.then(q1.right, q2.right));
            paste.record(s.has_square(q1.top, l, r, q2.bottom), || {
                json!({"direction": "vertical", "squares": [q1, q2],
                       "missing": s.square(q1.top, l, r, q2.bottom)})
            });
        }
    }
    report.push(paste);

    let mut isos = Check::new("isomorphisms");
    for m in &p.morphisms {
        let iso = s.is_iso(m.id);
        isos.record(m.iso == iso, || {
            json!({"morphism": m.id, "declared_iso": m.iso, "invertible": iso})
        });
        if iso {
            isos.record(m.horizontal && m.vertical, || {
                json!({"morphism": m.id, "horizontal": m.horizontal, "vertical": m.vertical,
                       "reason": "isomorphism is not both horizontal and vertical"})
            });
        }
    }
    report.push(isos);

    let mut iso_sq = Check::new("iso_squares");
    let iso_out: Vec<Vec<usize>> = (0..p.objects.len())
        .map(|x| {
            p.morphisms
                .iter()
                .filter(|m| m.src == x && s.is_iso(m.id) && m.horizontal && m.vertical)
                .map(|m| m.id)
                .collect()
        })
        .collect();
    for f in p.morphisms.iter().filter(|m| m.horizontal) {
        for &l in &iso_out[f.src] {
            for &r in &iso_out[f.dst] {
                // bottom = r ∘ f ∘ l⁻¹
                let bottom = s.then(s.then(s.inverse(l).unwrap(), f.id), r);
                iso_sq.record(s.has_square(f.id, l, r, bottom), || {
                    json!({"form": "vertical isomorphisms", "missing": s.square(f.id, l, r, bottom)})
                });
            }
        }
    }
    for f in p.morphisms.iter().filter(|m| m.vertical) {
        for &t in &iso_out[f.src] {
            for &b in &iso_out[f.dst] {
                // right = b ∘ f ∘ t⁻¹
                let right = s.then(s.then(s.inverse(t).unwrap(), f.id), b);
                iso_sq.record(s.has_square(t, f.id, right, b), || {
                    json!({"form": "horizontal isomorphisms", "missing": s.square(t, f.id, right, b)})
                });
            }
        }
    }
    report.push(iso_sq);

    let mut initial = Check::new("initial_object");
    for x in 0..p.objects.len() {
        let hom = s.hom(o, x);
        let h = hom.iter().filter(|&&f| s.morphism(f).horizontal).count();
        let v = hom.iter().filter(|&&f| s.morphism(f).vertical).count();
        initial.record(h == 1 && v == 1, || {
            json!({"object": name(x), "horizontal_maps": h, "vertical_maps": v})
        });
    }
    report.push(initial);

    let mut cocart = Check::new("cocartesian");
    for c in &p.coproducts {
        if c.a == o {
            cocart.record(s.is_iso(c.inr), || {
                json!({"coproduct": [name(c.a), name(c.b)], "reason": "right injection out of the unit sum is not an isomorphism"})
            });
        }
        if c.b == o {
            cocart.record(s.is_iso(c.inl), || {
                json!({"coproduct": [name(c.a), name(c.b)], "reason": "left injection into the unit sum is not an isomorphism"})
            });
        }
        let to_a = s.hom(o, c.a).iter().copied().find(|&f| s.morphism(f).horizontal);
        let to_b = s.hom(o, c.b).iter().copied().find(|&f| s.morphism(f).horizontal);
        let (Some(oa), Some(ob)) = (to_a, to_b) else {
            cocart.record(false, || json!({"coproduct": [name(c.a), name(c.b)], "reason": "no map from the distinguished object"}));
            continue;
        };
        let first = (ob, oa, c.inr, c.inl);
        let second = (oa, ob, c.inl, c.inr);
        for (t, l, r, b) in [first, second] {
            let ok = s.morphism(l).vertical
                && s.morphism(r).vertical
                && s.morphism(b).horizontal
                && s.morphism(t).horizontal
                && s.has_square(t, l, r, b);
            cocart.record(ok, || {
                json!({"coproduct": [name(c.a), name(c.b)], "missing": s.square(t, l, r, b)})
            });
        }
    }
    report.push(cocart);
    Ok(report)
}

/// K₀ of a category with squares with explicit class coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K0Result {
    pub group: FgAbelianGroup,
    pub class_map: Vec<Vec<i64>>,
}

impl K0Result {
    /// Classes keyed by object name.
    pub fn classes(&self, p: &SquaresPresentation) -> BTreeMap<String, Vec<i64>> {
        p.objects.iter().cloned().zip(self.class_map.iter().cloned()).collect()
    }
}

/// `ℤ[objects] / ([O] = 0, [A] + [D] = [B] + [C])`, after identifying
/// isomorphic objects. Unless `force` is set the axioms must hold.
pub fn k0(p: &SquaresPresentation, force: bool) -> Result<K0Result> {
    let s = p.structure()?;
    if !force {
        let report = check_axioms(p)?;
        if let Some(c) = report.checks.iter().find(|c| !c.passed()) {
            return Err(Error::Validation(serde_json::to_string(c).expect("report serializes")));
        }
    }
    let n = p.objects.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for m in &p.morphisms {
        if s.is_iso(m.id) {
            let (a, b) = (find(&mut parent, m.src), find(&mut parent, m.dst));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let mut slot = vec![usize::MAX; n];
    let mut k = 0;
    for &r in &roots {
        if slot[r] == usize::MAX {
            slot[r] = k;
            k += 1;
        }
    }
    let gen = |x: usize| slot[roots[x]];
    let mut rels: Vec<Relation> = vec![vec![(gen(p.distinguished), 1)]];
    for q in &p.squares {
        let mut coeff: BTreeMap<usize, i64> = BTreeMap::new();
        for (x, c) in [(q.a, 1), (q.d, 1), (q.b, -1), (q.c, -1)] {
            *coeff.entry(gen(x)).or_default() += c;
        }
        let rel: Relation = coeff.into_iter().filter(|&(_, c)| c != 0).collect();
        if !rel.is_empty() {
            rels.push(rel);
        }
    }
    rels.sort();
    rels.dedup();
    let coker = Cokernel::compute(k, &rels)?;
    Ok(K0Result {
        group: coker.group().clone(),
        class_map: (0..n).map(|x| coker.class_of(gen(x)).to_vec()).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaldhausenMorphism {
    pub id: usize,
    pub src: usize,
    pub dst: usize,
    #[serde(default)]
    pub cofibration: bool,
    #[serde(default)]
    pub weak: bool,
}

/// A finite category with cofibrations and weak equivalences.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaldhausenData {
    pub objects: Vec<String>,
    pub distinguished: usize,
    pub morphisms: Vec<WaldhausenMorphism>,
    pub comp: Vec<[usize; 3]>,
    #[serde(default)]
    pub coproducts: Vec<CoproductSpec>,
}

/// Squares from a Waldhausen category: horizontal maps are cofibrations,
/// vertical maps are all maps, and a commuting square with cofibration top
/// and bottom is distinguished when its comparison map out of the pushout
/// is a weak equivalence.
///
/// A missing pushout is an [`Error::Incomplete`] unless the weak
/// equivalences are exactly the isomorphisms, in which case no square on
/// that corner can be distinguished and the corner is skipped.
pub fn from_waldhausen(w: &WaldhausenData) -> Result<SquaresPresentation> {
    let mut p = SquaresPresentation {
        objects: w.objects.clone(),
        distinguished: w.distinguished,
        morphisms: w
            .morphisms
            .iter()
            .map(|m| MorphismSpec {
                id: m.id,
                src: m.src,
                dst: m.dst,
                horizontal: m.cofibration,
                vertical: true,
                iso: false,
            })
            .collect(),
        comp: w.comp.clone(),
        coproducts: w.coproducts.clone(),
        squares: Vec::new(),
    };
    let (squares, isos) = {
        let s = p.structure()?;
        let weak: HashMap<usize, bool> = w.morphisms.iter().map(|m| (m.id, m.weak)).collect();
        let weak_are_isos = w.morphisms.iter().all(|m| m.weak == s.is_iso(m.id));
        let mut squares = Vec::new();
        for f in w.morphisms.iter().filter(|m| m.cofibration) {
            for g in w.morphisms.iter().filter(|m| m.src == f.src) {
                let po = pushout(&s, f.id, g.id);
                for r in w.morphisms.iter().filter(|m| m.src == f.dst) {
                    for c in w
                        .morphisms
                        .iter()
                        .filter(|m| m.cofibration && m.src == g.dst && m.dst == r.dst)
                    {
                        if s.then(f.id, r.id) != s.then(g.id, c.id) {
                            continue;
                        }
                        let Some((pobj, j, i)) = po else {
                            if weak_are_isos {
                                continue;
                            }
                            return Err(Error::Incomplete(
                                json!({"cocone": {"top": f.id, "left": g.id}, "reason": "no pushout in the data"})
                                    .to_string(),
                            ));
                        };
                        let t = s
                            .hom(pobj, r.dst)
                            .iter()
                            .copied()
                            .find(|&t| s.then(j, t) == r.id && s.then(i, t) == c.id)
                            .expect("pushout is universal");
                        if weak[&t] {
                            squares.push(s.square(f.id, g.id, r.id, c.id));
                        }
                    }
                }
            }
        }
        let isos: Vec<bool> = p.morphisms.iter().map(|m| s.is_iso(m.id)).collect();
        (squares, isos)
    };
    for (m, iso) in p.morphisms.iter_mut().zip(isos) {
        m.iso = iso;
    }
    p.squares = squares;
    Ok(p)
}

/// A pushout `(P, j: B → P, i: C → P)` of `f: A → B` and `g: A → C`, found
/// by exhaustive search over cocones.
fn pushout(s: &Structure, f: usize, g: usize) -> Option<(usize, usize, usize)> {
    let (mf, mg) = (s.morphism(f), s.morphism(g));
    let cocones = |q: usize| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &u in s.hom(mf.dst, q) {
            for &v in s.hom(mg.dst, q) {
                if s.then(f, u) == s.then(g, v) {
                    out.push((u, v));
                }
            }
        }
        out
    };
    let n = s.p.objects.len();
    for pobj in 0..n {
        for (j, i) in cocones(pobj) {
            let universal = (0..n).all(|q| {
                cocones(q).into_iter().all(|(u, v)| {
                    s.hom(pobj, q)
                        .iter()
                        .filter(|&&t| s.then(j, t) == u && s.then(i, t) == v)
                        .count()
                        == 1
                })
            });
            if universal {
                return Some((pobj, j, i));
            }
        }
    }
    None
}

/// Small presentations used as fixtures and examples.
pub mod fixtures {
    use super::*;

    /// The category with one object and its identity.
    pub fn point() -> SquaresPresentation {
        SquaresPresentation {
            objects: vec!["O".into()],
            distinguished: 0,
            morphisms: vec![MorphismSpec {
                id: 0,
                src: 0,
                dst: 0,
                horizontal: true,
                vertical: true,
                iso: true,
            }],
            comp: vec![[0, 0, 0]],
            coproducts: vec![CoproductSpec {
                a: 0,
                b: 0,
                object: 0,
                inl: 0,
                inr: 0,
            }],
            squares: vec![SquareSpec {
                a: 0,
                b: 0,
                c: 0,
                d: 0,
                top: 0,
                left: 0,
                right: 0,
                bottom: 0,
            }],
        }
    }

    /// Composition table of a list of set maps `(src, dst, values)`.
    fn from_maps(
        maps: Vec<(usize, usize, Vec<usize>)>,
    ) -> (Vec<(usize, usize, Vec<usize>)>, Vec<[usize; 3]>) {
        let index: HashMap<(usize, usize, Vec<usize>), usize> = maps
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let mut comp = Vec::new();
        for (i, (a, b, f)) in maps.iter().enumerate() {
            for (j, (b2, c, g)) in maps.iter().enumerate() {
                if b != b2 {
                    continue;
                }
                let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                comp.push([i, j, index[&(*a, *c, gf)]]);
            }
        }
        (maps, comp)
    }

    fn all_maps(n: usize, m: usize, keep: impl Fn(&[usize]) -> bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let total = m.checked_pow(n as u32).unwrap_or(0);
        for mut code in 0..total {
            let mut f = Vec::with_capacity(n);
            for _ in 0..n {
                f.push(code % m);
                code /= m;
            }
            if keep(&f) {
                out.push(f);
            }
        }
        out
    }

    /// Pointed finite sets `{*, 1, …, k}` with `k + 1 ≤ max_size`: base
    /// point 0, cofibrations the injections, weak equivalences the
    /// bijections, coproducts the wedge sums that fit.
    pub fn pointed_sets(max_size: usize) -> WaldhausenData {
        let sizes: Vec<usize> = (1..=max_size).collect();
        let names: Vec<String> = sizes.iter().map(|s| format!("P{s}")).collect();
        let mut maps = Vec::new();
        for (a, &n) in sizes.iter().enumerate() {
            for (b, &m) in sizes.iter().enumerate() {
                for f in all_maps(n, m, |f| f[0] == 0) {
                    maps.push((a, b, f));
                }
            }
        }
        let (maps, comp) = from_maps(maps);
        let injective = |f: &[usize]| f.iter().collect::<HashSet<_>>().len() == f.len();
        let morphisms = maps
            .iter()
            .enumerate()
            .map(|(id, (a, b, f))| WaldhausenMorphism {
                id,
                src: *a,
                dst: *b,
                cofibration: injective(f),
                weak: injective(f) && sizes[*a] == sizes[*b],
            })
            .collect();
        let find = |a: usize, b: usize, f: Vec<usize>| {
            maps.iter().position(|m| *m == (a, b, f.clone())).expect("map is listed")
        };
        let mut coproducts = Vec::new();
        for (a, &n) in sizes.iter().enumerate() {
            for (b, &m) in sizes.iter().enumerate() {
                let sum = n + m - 1;
                if sum > max_size {
                    continue;
                }
                let c = sum - 1;
                let inl: Vec<usize> = (0..n).collect();
                let inr: Vec<usize> = (0..m).map(|x| if x == 0 { 0 } else { x + n - 1 }).collect();
                coproducts.push(CoproductSpec {
                    a,
                    b,
                    object: c,
                    inl: find(a, c, inl),
                    inr: find(b, c, inr),
                });
            }
        }
        WaldhausenData {
            objects: names,
            distinguished: 0,
            morphisms,
            comp,
            coproducts,
        }
    }

    /// The chain `O < A < B` as a poset category; every map is a
    /// cofibration and only identities are weak equivalences.
    pub fn chain() -> WaldhausenData {
        let names: Vec<String> = ["O", "A", "B"].iter().map(|s| s.to_string()).collect();
        let mut maps = Vec::new();
        for a in 0..3 {
            for b in a..3 {
                maps.push((a, b, Vec::new()));
            }
        }
        let (maps, comp) = from_maps(maps);
        let morphisms = maps
            .iter()
            .enumerate()
            .map(|(id, (a, b, _))| WaldhausenMorphism {
                id,
                src: *a,
                dst: *b,
                cofibration: true,
                weak: a == b,
            })
            .collect();
        WaldhausenData {
            objects: names,
            distinguished: 0,
            morphisms,
            comp,
            coproducts: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn point_passes_and_has_trivial_k0() {
        let p = point();
        let r = check_axioms(&p).unwrap();
        assert!(r.passed(), "{}", r.render());
        let k = k0(&p, false).unwrap();
        assert!(k.group.is_trivial());
        assert_eq!(k.class_map, vec![Vec::<i64>::new()]);
    }

    #[test]
    fn single_square_gives_rank_three() {
        // O, A, B, C, D with identities, A→B, A→C, B→D, C→D, A→D
        let objects: Vec<String> = ["O", "A", "B", "C", "D"].iter().map(|s| s.to_string()).collect();
        let mut morphisms = Vec::new();
        let arrows = [(0, 0), (1, 1), (2, 2), (3, 3), (4, 4), (1, 2), (1, 3), (2, 4), (3, 4), (1, 4)];
        for (id, &(src, dst)) in arrows.iter().enumerate() {
            morphisms.push(MorphismSpec {
                id,
                src,
                dst,
                horizontal: true,
                vertical: true,
                iso: src == dst,
            });
        }
        let mut comp = Vec::new();
        for f in &morphisms {
            for g in morphisms.iter().filter(|g| g.src == f.dst) {
                let h = morphisms.iter().find(|h| h.src == f.src && h.dst == g.dst).unwrap();
                comp.push([f.id, g.id, h.id]);
            }
        }
        let p = SquaresPresentation {
            objects,
            distinguished: 0,
            morphisms,
            comp,
            coproducts: Vec::new(),
            squares: vec![SquareSpec {
                a: 1,
                b: 2,
                c: 3,
                d: 4,
                top: 5,
                left: 6,
                right: 7,
                bottom: 8,
            }],
        };
        let k = k0(&p, true).unwrap();
        assert_eq!(k.group, FgAbelianGroup::free(3));
        let c = |x: usize| k.class_map[x].clone();
        let sum: Vec<i64> = (0..3).map(|i| c(1)[i] + c(4)[i] - c(2)[i] - c(3)[i]).collect();
        assert_eq!(sum, vec![0, 0, 0]);
        assert!(c(0).iter().all(|&x| x == 0));
    }

    #[test]
    fn pointed_sets_have_k0_z() {
        let w = pointed_sets(3);
        assert_eq!(w.morphisms.len(), 23);
        let p = from_waldhausen(&w).unwrap();
        let r = check_axioms(&p).unwrap();
        assert!(r.passed(), "{}", r.render());
        let k = k0(&p, false).unwrap();
        assert_eq!(k.group, FgAbelianGroup::free(1));
        // [P3] = 2 [P2]
        let c = k.classes(&p);
        assert_eq!(c["P3"][0], 2 * c["P2"][0]);
        assert_eq!(c["P2"][0].abs(), 1);
    }

    #[test]
    fn chain_passes_checks() {
        let p = from_waldhausen(&chain()).unwrap();
        let r = check_axioms(&p).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn missing_pushout_is_incomplete() {
        let mut small = pointed_sets(2);
        for m in &mut small.morphisms {
            m.weak = true;
        }
        assert!(matches!(from_waldhausen(&small), Err(Error::Incomplete(_))));
    }

    #[test]
    fn broken_composition_is_structural() {
        let mut p = point();
        p.comp.clear();
        assert!(matches!(check_axioms(&p), Err(Error::Structural(_))));
        let mut p = point();
        p.squares[0].top = 7;
        assert!(matches!(check_axioms(&p), Err(Error::Structural(_))));
    }

    #[test]
    fn removed_cocartesian_square_is_reported() {
        let mut p = from_waldhausen(&pointed_sets(3)).unwrap();
        let s = p.structure().unwrap();
        let c = p.coproducts.iter().find(|c| c.a == 1 && c.b == 1).unwrap().clone();
        let o_to = |x: usize| s.hom(0, x)[0];
        let target = (o_to(1), o_to(1), c.inr, c.inl);
        drop(s);
        p.squares.retain(|q| q.legs() != target);
        let r = check_axioms(&p).unwrap();
        let check = r.get("cocartesian").unwrap();
        assert!(!check.passed());
        assert_eq!(check.witness.as_ref().unwrap()["coproduct"], json!(["P2", "P2"]));
    }
}
