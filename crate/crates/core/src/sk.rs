//! Scissors-congruence K-theory in dimension 0.
//!
//! At manifold dimension 0 an object over a finite G-set `X` is a finite
//! G-set `M` with an equivariant map `M → X`, embeddings are equivariant
//! injections over `X`, and distinguished squares are pushouts of pairs of
//! injections. Up to isomorphism an object is a count vector over *cells*:
//! an orbit `Xⱼ` of `X` with base point `xⱼ` together with a
//! `Stab(xⱼ)`-conjugacy class of subgroups `L`, standing for `G/L → X`,
//! `gL ↦ g·xⱼ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use serde_json::json;

use crate::abelian::{Cokernel, FgAbelianGroup, Relation};
use crate::burnside::burnside_class;
use crate::error::{Error, Result};
use crate::group::{CosetTable, FiniteGroup, Subgroup, SubgroupEmbedding};
use crate::gset::{
    canonical_pullback, hom_set, induce, injections, is_pushout_square, GMap, GSet, Pullback,
};
use crate::mackey::{burnside_mackey, is_isomorphism, Frame, MackeyFunctor, MackeyMorphism};
use crate::matrix::Matrix;
use crate::report::{Check, Report};
use crate::squares::{CoproductSpec, MorphismSpec, SquareSpec, SquaresPresentation};

pub const DEFAULT_OBJECT_CAP: usize = 200_000;
const DENSE_INDEX_LIMIT: usize = 4_000_000;

/// A finite G-set with an equivariant map to the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectOverX {
    pub total: GSet,
    pub structure: GMap,
}

impl ObjectOverX {
    pub fn new(structure: GMap) -> Self {
        ObjectOverX {
            total: structure.source().clone(),
            structure,
        }
    }

    pub fn empty(base: &GSet) -> Self {
        let e = GSet::empty(base.group());
        Self::new(GMap::new_unchecked(e, base.clone(), Vec::new()))
    }

    pub fn size(&self) -> usize {
        self.total.size()
    }

    pub fn base(&self) -> &GSet {
        self.structure.target()
    }

    /// Whether `f: self → other` commutes with the structure maps.
    pub fn is_over(&self, other: &ObjectOverX, f: &GMap) -> bool {
        (0..self.size()).all(|m| other.structure.apply(f.apply(m)) == self.structure.apply(m))
    }
}

/// A transitive object `G/L → X`, `gL ↦ g·x` for the base point `x` of an
/// orbit of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub orbit: usize,
    pub base_point: usize,
    pub subgroup: Subgroup,
    pub size: usize,
}

#[derive(Debug)]
enum ObjectIndex {
    Dense { radix: Vec<usize>, slots: Vec<usize> },
    Sparse(HashMap<Vec<usize>, usize>),
}

/// Objects over `X` of size at most `bound`, up to isomorphism.
#[derive(Debug)]
pub struct TruncatedSK {
    base: GSet,
    bound: usize,
    cells: Vec<Cell>,
    cell_cosets: Vec<CosetTable>,
    cell_index: HashMap<(usize, Subgroup), usize>,
    orbit_of: Vec<usize>,
    to_base: Vec<usize>,
    objects: Vec<Vec<usize>>,
    sizes: Vec<usize>,
    index: ObjectIndex,
    k0: OnceLock<Cokernel>,
}

/// Enumerates the iso classes of objects over `base` with at most `bound`
/// points, ordered by `(size, counts)`; the empty object comes first.
pub fn build_truncated(base: &GSet, bound: usize, cap: usize) -> Result<TruncatedSK> {
    let g = base.group().clone();
    let orbits = base.orbits();
    let mut orbit_of = vec![0; base.size()];
    let mut to_base = vec![0; base.size()];
    let mut cells = Vec::new();
    let mut cell_cosets = Vec::new();
    let mut cell_index = HashMap::new();
    for (j, o) in orbits.iter().enumerate() {
        let x = o[0];
        for &y in o {
            orbit_of[y] = j;
            to_base[y] = (0..g.order()).find(|&h| base.act(h, y) == x).expect("same orbit");
        }
        let stab = base.stabilizer(x);
        for class in g.classes_within(&stab) {
            let id = cells.len();
            for m in &class.members {
                cell_index.insert((j, m.clone()), id);
            }
            cell_cosets.push(g.coset_table(&class.representative));
            cells.push(Cell {
                orbit: j,
                base_point: x,
                size: g.order() / class.representative.order(),
                subgroup: class.representative,
            });
        }
    }
    let cell_sizes: Vec<usize> = cells.iter().map(|c| c.size).collect();
    let mut objects = Vec::new();
    let mut counts = vec![0usize; cells.len()];
    enumerate_counts(&cell_sizes, bound, 0, 0, &mut counts, &mut objects, cap)?;
    let size_of = |c: &Vec<usize>| c.iter().zip(&cell_sizes).map(|(a, b)| a * b).sum::<usize>();
    objects.sort_by(|a, b| size_of(a).cmp(&size_of(b)).then_with(|| a.cmp(b)));
    let sizes: Vec<usize> = objects.iter().map(size_of).collect();
    let radix: Vec<usize> = cell_sizes.iter().map(|&s| bound / s + 1).collect();
    let dense = radix
        .iter()
        .try_fold(1usize, |acc, &r| acc.checked_mul(r))
        .filter(|&n| n <= DENSE_INDEX_LIMIT);
    let index = match dense {
        Some(n) => {
            let mut slots = vec![usize::MAX; n];
            for (i, c) in objects.iter().enumerate() {
                slots[code(&radix, c)] = i;
            }
            ObjectIndex::Dense { radix, slots }
        }
        None => ObjectIndex::Sparse(objects.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect()),
    };
    Ok(TruncatedSK {
        base: base.clone(),
        bound,
        cells,
        cell_cosets,
        cell_index,
        orbit_of,
        to_base,
        objects,
        sizes,
        index,
        k0: OnceLock::new(),
    })
}

fn code(radix: &[usize], counts: &[usize]) -> usize {
    let mut c = 0;
    for (r, x) in radix.iter().zip(counts).rev() {
        c = c * r + x;
    }
    c
}

fn enumerate_counts(
    sizes: &[usize],
    budget: usize,
    i: usize,
    _used: usize,
    counts: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if i == sizes.len() {
        if out.len() >= cap {
            return Err(Error::cap("objects in the truncated category", cap, out.len() + 1));
        }
        out.push(counts.clone());
        return Ok(());
    }
    let mut k = 0;
    while k * sizes[i] <= budget {
        counts[i] = k;
        enumerate_counts(sizes, budget - k * sizes[i], i + 1, 0, counts, out, cap)?;
        k += 1;
    }
    counts[i] = 0;
    Ok(())
}

impl TruncatedSK {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }

    pub fn base(&self) -> &GSet {
        &self.base
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Count vectors of all objects; index 0 is the empty object.
    pub fn objects(&self) -> &[Vec<usize>] {
        &self.objects
    }

    pub fn object_size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    pub fn size_of(&self, counts: &[usize]) -> usize {
        counts.iter().zip(&self.cells).map(|(k, c)| k * c.size).sum()
    }

    pub fn index_of(&self, counts: &[usize]) -> Option<usize> {
        if counts.len() != self.cells.len() {
            return None;
        }
        match &self.index {
            ObjectIndex::Dense { radix, slots } => {
                if counts.iter().zip(radix).any(|(c, r)| c >= r) {
                    return None;
                }
                let i = slots[code(radix, counts)];
                (i != usize::MAX).then_some(i)
            }
            ObjectIndex::Sparse(map) => map.get(counts).copied(),
        }
    }

    /// Unit count vector of cell `i`.
    pub fn cell_counts(&self, i: usize) -> Vec<usize> {
        let mut c = vec![0; self.cells.len()];
        c[i] = 1;
        c
    }

    /// Cell of the orbit of `m` in an object over the base.
    fn cell_of(&self, obj: &ObjectOverX, m: usize) -> usize {
        let g = self.group();
        let y = obj.structure.apply(m);
        let t = self.to_base[y];
        let l = g.conjugate_subgroup(t, &obj.total.stabilizer(m));
        self.cell_index[&(self.orbit_of[y], l)]
    }

    /// Count vector of an arbitrary object over the base.
    pub fn classify(&self, obj: &ObjectOverX) -> Result<Vec<usize>> {
        if obj.base() != &self.base {
            return Err(Error::Precondition("object lies over a different base".into()));
        }
        let mut counts = vec![0; self.cells.len()];
        for o in obj.total.orbits() {
            counts[self.cell_of(obj, o[0])] += 1;
        }
        Ok(counts)
    }

    /// Start of each cell's block in the canonical layout: per cell, its
    /// copies in order, each copy listed by coset.
    fn offsets(&self, counts: &[usize]) -> Vec<usize> {
        let mut off = Vec::with_capacity(counts.len());
        let mut acc = 0;
        for (k, c) in counts.iter().zip(&self.cells) {
            off.push(acc);
            acc += k * c.size;
        }
        off
    }

    /// The canonical object with the given counts.
    pub fn canonical(&self, counts: &[usize]) -> ObjectOverX {
        let g = self.group().clone();
        let mut owner = Vec::new();
        for (i, &k) in counts.iter().enumerate() {
            for t in 0..k {
                for p in 0..self.cells[i].size {
                    owner.push((i, t, p));
                }
            }
        }
        let off = self.offsets(counts);
        let cells = &self.cells;
        let cosets = &self.cell_cosets;
        let total = GSet::from_fn(&g, owner.len(), |h, x| {
            let (i, t, p) = owner[x];
            let table = &cosets[i];
            let q = table.coset_of[g.mul(h, table.representatives[p])];
            off[i] + t * cells[i].size + q
        });
        let values = owner
            .iter()
            .map(|&(i, _, p)| self.base.act(cosets[i].representatives[p], cells[i].base_point))
            .collect();
        ObjectOverX::new(GMap::new_unchecked(total, self.base.clone(), values))
    }

    pub fn object(&self, i: usize) -> ObjectOverX {
        self.canonical(&self.objects[i])
    }

    /// Inclusion of the canonical object `part` into `whole`, sending copy
    /// `t` of cell `i` to copy `shift[i] + t`.
    pub fn inclusion(&self, part: &[usize], shift: &[usize], whole: &[usize]) -> GMap {
        let (src, dst) = (self.canonical(part), self.canonical(whole));
        let (po, wo) = (self.offsets(part), self.offsets(whole));
        let mut values = Vec::with_capacity(src.size());
        for (i, &k) in part.iter().enumerate() {
            let s = self.cells[i].size;
            for t in 0..k {
                for p in 0..s {
                    debug_assert_eq!(values.len(), po[i] + t * s + p);
                    values.push(wo[i] + (shift[i] + t) * s + p);
                }
            }
        }
        GMap::new_unchecked(src.total, dst.total, values)
    }

    /// One relation per pushout square `(a, a+b, a+c, a+b+c)` of canonical
    /// objects, with `b ≤ c` to skip the transposed square.
    pub fn square_relations(&self) -> Vec<Relation> {
        let n = self.cells.len();
        let mut rels: Vec<Relation> = vec![vec![(0, 1)]];
        for (di, d) in self.objects.iter().enumerate() {
            let mut b = vec![0usize; n];
            loop {
                if b.iter().any(|&x| x > 0) {
                    let rest: Vec<usize> = d.iter().zip(&b).map(|(x, y)| x - y).collect();
                    let mut c = vec![0usize; n];
                    loop {
                        if c.iter().any(|&x| x > 0) && b <= c {
                            let a: Vec<usize> = rest.iter().zip(&c).map(|(x, y)| x - y).collect();
                            let ab: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                            let ac: Vec<usize> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
                            let mut coeff: BTreeMap<usize, i64> = BTreeMap::new();
                            let idx = |v: &[usize]| self.index_of(v).expect("sub-object within bound");
                            for (v, s) in [(idx(&a), 1), (di, 1), (idx(&ab), -1), (idx(&ac), -1)] {
                                *coeff.entry(v).or_default() += s;
                            }
                            let rel: Relation = coeff.into_iter().filter(|&(_, s)| s != 0).collect();
                            if !rel.is_empty() {
                                rels.push(rel);
                            }
                        }
                        if !odometer(&mut c, &rest) {
                            break;
                        }
                    }
                }
                if !odometer(&mut b, d) {
                    break;
                }
            }
        }
        rels
    }

    /// `[d] = [cell] + [d - cell]` for the first cell occurring in each
    /// nonempty `d`. These generate the same subgroup as the square
    /// relations: the coproduct squares (`a = 0`) give every splitting, any
    /// splitting follows from peeling cells one at a time, and a general
    /// square is the difference of three splittings.
    pub fn peel_relations(&self) -> Vec<Relation> {
        let mut rels: Vec<Relation> = vec![vec![(0, 1)]];
        for (di, d) in self.objects.iter().enumerate().skip(1) {
            let i = d.iter().position(|&k| k > 0).expect("nonempty object");
            let mut rest = d.clone();
            rest[i] -= 1;
            let cell = self.index_of(&self.cell_counts(i)).expect("cell within bound");
            let rest = self.index_of(&rest).expect("sub-object within bound");
            let mut coeff: BTreeMap<usize, i64> = BTreeMap::new();
            for (v, s) in [(di, 1), (cell, -1), (rest, -1)] {
                *coeff.entry(v).or_default() += s;
            }
            rels.push(coeff.into_iter().filter(|&(_, s)| s != 0).collect());
        }
        rels
    }

    /// K₀ of the truncated category: `[∅] = 0` and `[A] + [D] = [B] + [C]`
    /// for every pushout `B ← A → C` of injections with `|D| ≤ bound`.
    pub fn k0(&self) -> Result<&Cokernel> {
        if let Some(c) = self.k0.get() {
            return Ok(c);
        }
        let c = Cokernel::compute(self.objects.len(), &self.peel_relations())?;
        Ok(self.k0.get_or_init(|| c))
    }

    /// K₀ from every square relation; agrees with [`Self::k0`].
    pub fn k0_from_squares(&self) -> Result<Cokernel> {
        Cokernel::compute(self.objects.len(), &self.square_relations())
    }

    pub fn k0_group(&self) -> Result<&FgAbelianGroup> {
        Ok(self.k0()?.group())
    }

    /// K₀ class of a count vector; vectors beyond the bound are split into
    /// cells.
    pub fn class_of_counts(&self, counts: &[usize]) -> Result<Vec<i64>> {
        let k0 = self.k0()?;
        if let Some(i) = self.index_of(counts) {
            return Ok(k0.class_of(i).to_vec());
        }
        let mut combo = Vec::new();
        for (i, &k) in counts.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let cell = self.index_of(&self.cell_counts(i)).ok_or(Error::TruncationOverflow {
                bound: self.bound,
                required: self.cells[i].size,
            })?;
            combo.push((cell, k as i64));
        }
        k0.class_of_combination(&combo)
    }

    pub fn class_of(&self, obj: &ObjectOverX) -> Result<Vec<i64>> {
        self.class_of_counts(&self.classify(obj)?)
    }

    /// The full finite category with squares: all injections over the base
    /// between canonical objects, every pushout square among them, and the
    /// coproducts that fit.
    pub fn presentation(&self, hom_cap: usize) -> Result<SquaresPresentation> {
        let objs: Vec<ObjectOverX> = (0..self.objects.len()).map(|i| self.object(i)).collect();
        let mut morphisms = Vec::new();
        let mut maps: Vec<GMap> = Vec::new();
        let mut lookup: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (a, oa) in objs.iter().enumerate() {
            for (b, ob) in objs.iter().enumerate() {
                if ob.size() < oa.size() {
                    continue;
                }
                let over = |x: usize, y: usize| ob.structure.apply(y) == oa.structure.apply(x);
                for f in injections(&oa.total, &ob.total, hom_cap, over)? {
                    let id = maps.len();
                    morphisms.push(MorphismSpec {
                        id,
                        src: a,
                        dst: b,
                        horizontal: true,
                        vertical: true,
                        iso: oa.size() == ob.size(),
                    });
                    lookup.insert((a, b, f.values().to_vec()), id);
                    hom.entry((a, b)).or_default().push(id);
                    maps.push(f);
                }
                if maps.len() > hom_cap {
                    return Err(Error::cap("morphisms in the presentation", hom_cap, maps.len()));
                }
            }
        }
        let mut comp = Vec::new();
        for f in &morphisms {
            for g in morphisms.iter().filter(|g| g.src == f.dst) {
                let h = maps[f.id].then(&maps[g.id])?;
                comp.push([f.id, g.id, lookup[&(f.src, g.dst, h.values().to_vec())]]);
            }
        }
        let empty: &[usize] = &[];
        let hom_of = |a: usize, b: usize| hom.get(&(a, b)).map(Vec::as_slice).unwrap_or(empty);
        let mut coproducts = Vec::new();
        for (a, ca) in self.objects.iter().enumerate() {
            for (b, cb) in self.objects.iter().enumerate() {
                let sum: Vec<usize> = ca.iter().zip(cb).map(|(x, y)| x + y).collect();
                let Some(s) = self.index_of(&sum) else { continue };
                let zero = vec![0; ca.len()];
                let inl = self.inclusion(ca, &zero, &sum);
                let inr = self.inclusion(cb, ca, &sum);
                coproducts.push(CoproductSpec {
                    a,
                    b,
                    object: s,
                    inl: lookup[&(a, s, inl.values().to_vec())],
                    inr: lookup[&(b, s, inr.values().to_vec())],
                });
            }
        }
        let mut squares = Vec::new();
        for f in &morphisms {
            for g in morphisms.iter().filter(|g| g.src == f.src) {
                let dsize = objs[f.dst].size() + objs[g.dst].size() - objs[f.src].size();
                for d in (0..objs.len()).filter(|&d| objs[d].size() == dsize) {
                    for &r in hom_of(f.dst, d) {
                        for &c in hom_of(g.dst, d) {
                            if is_pushout_square(&maps[f.id], &maps[g.id], &maps[r], &maps[c]) {
                                squares.push(SquareSpec {
                                    a: f.src,
                                    b: f.dst,
                                    c: g.dst,
                                    d,
                                    top: f.id,
                                    left: g.id,
                                    right: r,
                                    bottom: c,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(SquaresPresentation {
            objects: self.objects.iter().map(|c| format_counts(c)).collect(),
            distinguished: 0,
            morphisms,
            comp,
            coproducts,
            squares,
        })
    }
}

fn odometer(v: &mut [usize], max: &[usize]) -> bool {
    for (x, &m) in v.iter_mut().zip(max) {
        if *x < m {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

/// `"[1,0,2]"`
pub fn format_counts(c: &[usize]) -> String {
    let parts: Vec<String> = c.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// A functor on objects over a base, with its action on maps over the base.
pub trait ObjectFunctor {
    fn apply(&self, m: &ObjectOverX) -> Result<ObjectOverX>;
    /// Image of `f: src → dst`, a map over the source base.
    fn apply_map(&self, src: &ObjectOverX, dst: &ObjectOverX, f: &GMap) -> Result<GMap>;
}

/// `r*`: pullback along `r: X → Y`.
pub struct Restriction {
    pub r: GMap,
}

/// `r_!`: post-composition with `r: X → Y`.
pub struct Transfer {
    pub r: GMap,
}

/// Pullback of an object over `Y` along `r: X → Y`; points are the pairs
/// `(x, m)` with `r(x) = f(m)`.
pub fn pullback_object(r: &GMap, m: &ObjectOverX) -> Result<(ObjectOverX, Pullback)> {
    let p = canonical_pullback(r, &m.structure)?;
    Ok((ObjectOverX::new(p.left.clone()), p))
}

fn pair_index(p: &Pullback) -> HashMap<(usize, usize), usize> {
    (0..p.apex.size()).map(|i| (p.pair(i), i)).collect()
}

impl ObjectFunctor for Restriction {
    fn apply(&self, m: &ObjectOverX) -> Result<ObjectOverX> {
        Ok(pullback_object(&self.r, m)?.0)
    }

    fn apply_map(&self, src: &ObjectOverX, dst: &ObjectOverX, f: &GMap) -> Result<GMap> {
        let (a, pa) = pullback_object(&self.r, src)?;
        let (b, pb) = pullback_object(&self.r, dst)?;
        let idx = pair_index(&pb);
        let values = (0..a.size())
            .map(|i| {
                let (x, m) = pa.pair(i);
                idx[&(x, f.apply(m))]
            })
            .collect();
        GMap::new(a.total, b.total, values)
    }
}

impl ObjectFunctor for Transfer {
    fn apply(&self, m: &ObjectOverX) -> Result<ObjectOverX> {
        Ok(ObjectOverX::new(m.structure.then(&self.r)?))
    }

    fn apply_map(&self, _src: &ObjectOverX, _dst: &ObjectOverX, f: &GMap) -> Result<GMap> {
        Ok(f.clone())
    }
}

/// The map `ρ: G/R → G/H`, `xR ↦ x c⁻¹ H`, for `c R c⁻¹ ≤ H`.
pub fn orbit_map(group: &Arc<FiniteGroup>, r: &Subgroup, c: usize, h: &Subgroup) -> Result<GMap> {
    let src = GSet::coset_space(group, r);
    let dst = GSet::coset_space(group, h);
    let (tr, th) = (group.coset_table(r), group.coset_table(h));
    let ci = group.inv(c);
    let values = tr
        .representatives
        .iter()
        .map(|&x| th.coset_of[group.mul(x, ci)])
        .collect();
    GMap::new(src, dst, values)
}

/// Checks that a functor preserves the empty object, injections out of
/// orbits, coproducts and pushout squares on all objects of `source` whose
/// size is at most `limit`.
pub fn check_square_functor(
    fun: &dyn ObjectFunctor,
    source: &TruncatedSK,
    limit: usize,
    hom_cap: usize,
) -> Result<Report> {
    let mut report = Report::default();
    let n = source.cells().len();
    let zero = vec![0; n];
    let within: Vec<usize> = (0..source.objects().len())
        .filter(|&i| source.object_size(i) <= limit)
        .collect();

    let mut initial = Check::new("preserves_initial");
    let img = fun.apply(&source.object(0))?;
    initial.record(img.size() == 0, || json!({"image_size": img.size()}));
    report.push(initial);

    let mut inj = Check::new("preserves_injections");
    for cell in 0..n {
        let Some(ci) = source.index_of(&source.cell_counts(cell)) else { continue };
        let a = source.object(ci);
        let fa = fun.apply(&a)?;
        for &bi in &within {
            let b = source.object(bi);
            let over = |x: usize, y: usize| b.structure.apply(y) == a.structure.apply(x);
            let fb = fun.apply(&b)?;
            for f in injections(&a.total, &b.total, hom_cap, over)? {
                let ff = fun.apply_map(&a, &b, &f)?;
                inj.record(ff.is_injective() && fa.is_over(&fb, &ff), || {
                    json!({"source": source.objects()[ci], "target": source.objects()[bi], "map": f.values()})
                });
            }
        }
    }
    report.push(inj);

    let mut coprod = Check::new("preserves_coproducts");
    let mut squares = Check::new("preserves_squares");
    let mut canon: HashMap<Vec<usize>, ObjectOverX> = HashMap::new();
    for &di in &within {
        let d = &source.objects()[di];
        // splits d = a + b + c with b, c the two complements
        let mut b = zero.clone();
        loop {
            let rest: Vec<usize> = d.iter().zip(&b).map(|(x, y)| x - y).collect();
            let mut c = zero.clone();
            loop {
                let a: Vec<usize> = rest.iter().zip(&c).map(|(x, y)| x - y).collect();
                if b <= c {
                    let ab: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                    let ac: Vec<usize> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
                    let top = source.inclusion(&a, &zero, &ab);
                    let left = source.inclusion(&a, &zero, &ac);
                    // A ⊔ B ⊔ C with copies ordered a, b, c inside each cell
                    let right = source.inclusion(&ab, &zero, d);
                    let bottom = {
                        let m = source.inclusion(&ac, &zero, &ac);
                        let (ao, co) = (source.offsets(&ac), source.offsets(d));
                        let mut values = Vec::with_capacity(m.values().len());
                        for (i, &k) in ac.iter().enumerate() {
                            let s = source.cells()[i].size;
                            for t in 0..k {
                                let tt = if t < a[i] { t } else { t + b[i] };
                                for p in 0..s {
                                    debug_assert_eq!(values.len(), ao[i] + t * s + p);
                                    values.push(co[i] + tt * s + p);
                                }
                            }
                        }
                        GMap::new_unchecked(m.source().clone(), canon.entry(d.clone()).or_insert_with(|| source.canonical(d)).total.clone(), values)
                    };
                    let objs = [&a, &ab, &ac, d].map(|v| {
                        canon.entry(v.clone()).or_insert_with(|| source.canonical(v)).clone()
                    });
                    let f = |x: usize, y: usize, m: &GMap| fun.apply_map(&objs[x], &objs[y], m);
                    let (ft, fl, fr, fb) = (f(0, 1, &top)?, f(0, 2, &left)?, f(1, 3, &right)?, f(2, 3, &bottom)?);
                    squares.record(is_pushout_square(&ft, &fl, &fr, &fb), || {
                        json!({"a": a, "b": b, "c": c})
                    });
                    if a == zero {
                        // B ⊔ C with its injections
                        coprod.record(is_pushout_square(&ft, &fl, &fr, &fb), || {
                            json!({"summands": [b, c]})
                        });
                    }
                }
                if !odometer(&mut c, &rest) {
                    break;
                }
            }
            if !odometer(&mut b, d) {
                break;
            }
        }
    }
    report.push(coprod);
    report.push(squares);
    Ok(report)
}

/// The unit `η: M → r* r_! M`, `m ↦ (f(m), m)`.
pub fn unit(r: &GMap, m: &ObjectOverX) -> Result<(ObjectOverX, GMap)> {
    let up = Transfer { r: r.clone() }.apply(m)?;
    let (back, p) = pullback_object(r, &up)?;
    let idx = pair_index(&p);
    let values = (0..m.size()).map(|x| idx[&(m.structure.apply(x), x)]).collect();
    let eta = GMap::new(m.total.clone(), back.total.clone(), values)?;
    Ok((back, eta))
}

/// The counit `ε: r_! r* N → N`, `(x, n) ↦ n`.
pub fn counit(r: &GMap, n: &ObjectOverX) -> Result<(ObjectOverX, GMap)> {
    let (back, p) = pullback_object(r, n)?;
    let pushed = Transfer { r: r.clone() }.apply(&back)?;
    Ok((pushed, p.right.clone()))
}

/// Triangle identities of `r_! ⊣ r*` on every object of the two
/// truncations.
pub fn check_adjunction(r: &GMap, over_x: &TruncatedSK, over_y: &TruncatedSK) -> Result<Report> {
    let mut report = Report::default();
    let mut left = Check::new("triangle_transfer");
    for i in 0..over_x.objects().len() {
        let m = over_x.object(i);
        let (_, eta) = unit(r, &m)?;
        let (_, eps) = counit(r, &Transfer { r: r.clone() }.apply(&m)?)?;
        let id = eta.then(&eps)?;
        left.record(id == GMap::identity(&m.total), || json!({"object": over_x.objects()[i]}));
    }
    report.push(left);
    let mut right = Check::new("triangle_restriction");
    let res = Restriction { r: r.clone() };
    for i in 0..over_y.objects().len() {
        let n = over_y.object(i);
        let rn = res.apply(&n)?;
        let (_, eta) = unit(r, &rn)?;
        let (rrn, eps) = counit(r, &n)?;
        let r_eps = res.apply_map(&rrn, &n, &eps)?;
        let id = eta.then(&r_eps)?;
        right.record(id == GMap::identity(&rn.total), || json!({"object": over_y.objects()[i]}));
    }
    report.push(right);
    Ok(report)
}

/// A commuting square `h ∘ p = k ∘ q` of G-sets with `p: A → B`,
/// `q: A → C`, `h: B → D`, `k: C → D`.
#[derive(Clone, Debug)]
pub struct PullbackSquare {
    pub p: GMap,
    pub q: GMap,
    pub h: GMap,
    pub k: GMap,
}

impl PullbackSquare {
    /// The canonical pullback of a cospan.
    pub fn of_cospan(h: &GMap, k: &GMap) -> Result<Self> {
        let pb = canonical_pullback(h, k)?;
        Ok(PullbackSquare {
            p: pb.left,
            q: pb.right,
            h: h.clone(),
            k: k.clone(),
        })
    }

    /// Whether `a ↦ (p(a), q(a))` is a bijection onto the canonical
    /// pullback.
    pub fn is_pullback(&self) -> Result<bool> {
        let a = self.p.source();
        if self.q.source() != a {
            return Ok(false);
        }
        if (0..a.size()).any(|x| self.h.apply(self.p.apply(x)) != self.k.apply(self.q.apply(x))) {
            return Ok(false);
        }
        let pb = canonical_pullback(&self.h, &self.k)?;
        let mut hit = vec![false; pb.apex.size()];
        let idx = pair_index(&pb);
        for x in 0..a.size() {
            hit[idx[&(self.p.apply(x), self.q.apply(x))]] = true;
        }
        Ok(pb.apex.size() == a.size() && hit.into_iter().all(|b| b))
    }
}

/// For every object `(M, α)` over `B` with `|M| ≤ bound`, builds the
/// Beck–Chevalley map `q_! p* M → k* h_! M` from the unit of `h_! ⊣ h*` and
/// the counit of `q_! ⊣ q*`, and checks that it is an equivariant bijection
/// over `C` equal to `(a, m) ↦ (q(a), m)`.
pub fn beck_chevalley_check(sq: &PullbackSquare, bound: usize, cap: usize) -> Result<Report> {
    if !sq.is_pullback()? {
        return Err(Error::Precondition("the square is not a pullback".into()));
    }
    let over_b = build_truncated(sq.p.target(), bound, cap)?;
    let mut check = Check::new("beck_chevalley");
    for i in 0..over_b.objects().len() {
        let m = over_b.object(i);
        // q_! p* M
        let (pm, p_pb) = pullback_object(&sq.p, &m)?;
        // η: M → h* h_! M, then p*(η)
        let (hhm, eta) = unit(&sq.h, &m)?;
        let p_eta = Restriction { r: sq.p.clone() }.apply_map(&m, &hhm, &eta)?;
        let (_, phh_pb) = pullback_object(&sq.p, &hhm)?;
        // p* h* h_! M ≅ q* k* h_! M: (a, (b, m)) ↦ (a, (q(a), m))
        let hm = Transfer { r: sq.h.clone() }.apply(&m)?;
        let (khm, k_pb) = pullback_object(&sq.k, &hm)?;
        let (_, qk_pb) = pullback_object(&sq.q, &khm)?;
        let (hh_pb_pairs, k_idx, qk_idx) = {
            let (_, hh_pb) = pullback_object(&sq.h, &hm)?;
            (hh_pb, pair_index(&k_pb), pair_index(&qk_pb))
        };
        let ident: Vec<usize> = (0..phh_pb.apex.size())
            .map(|z| {
                let (a, y) = phh_pb.pair(z);
                let (_, mm) = hh_pb_pairs.pair(y);
                qk_idx[&(a, k_idx[&(sq.q.apply(a), mm)])]
            })
            .collect();
        let ident = GMap::new(phh_pb.apex.clone(), qk_pb.apex.clone(), ident)?;
        // counit of q_! ⊣ q*
        let beta = p_eta.then(&ident)?.then(&qk_pb.right)?;
        let direct: Vec<usize> = (0..pm.size())
            .map(|z| {
                let (a, mm) = p_pb.pair(z);
                k_idx[&(sq.q.apply(a), mm)]
            })
            .collect();
        let over_c = (0..pm.size()).all(|z| khm.structure.apply(beta.apply(z)) == sq.q.apply(pm.structure.apply(z)));
        check.record(beta.is_bijective() && over_c && beta.values() == direct.as_slice(), || {
            json!({"object": over_b.objects()[i], "beta": beta.values(), "expected": direct})
        });
    }
    let mut report = Report::default();
    report.push(check);
    Ok(report)
}

/// All cospans `G/K₁ → G/H ← G/K₂` between orbits of class
/// representatives, with their canonical pullback squares.
pub fn orbit_pullback_squares(group: &Arc<FiniteGroup>, hom_cap: usize) -> Result<Vec<PullbackSquare>> {
    let orbits: Vec<GSet> = group
        .subgroup_classes()
        .iter()
        .map(|c| GSet::coset_space(group, &c.representative))
        .collect();
    let mut out = Vec::new();
    for d in &orbits {
        let maps: Vec<GMap> = orbits
            .iter()
            .map(|x| hom_set(x, d, hom_cap))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for h in &maps {
            for k in &maps {
                out.push(PullbackSquare::of_cospan(h, k)?);
            }
        }
    }
    Ok(out)
}

/// Fiber over `eH` of an object over `G/H`, as an `H`-set.
pub struct Phi {
    pub emb: SubgroupEmbedding,
}

/// Induction `G ×_H Y → G/H` of an `H`-set over a point.
pub struct Psi {
    pub emb: SubgroupEmbedding,
}

impl Phi {
    fn fiber(m: &ObjectOverX) -> Vec<usize> {
        (0..m.size()).filter(|&x| m.structure.apply(x) == 0).collect()
    }
}

impl ObjectFunctor for Phi {
    fn apply(&self, m: &ObjectOverX) -> Result<ObjectOverX> {
        let fiber = Self::fiber(m);
        let pos: HashMap<usize, usize> = fiber.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let h = &self.emb.group;
        let total = GSet::from_fn(h, fiber.len(), |k, i| pos[&m.total.act(self.emb.lift(k), fiber[i])]);
        let pt = GSet::trivial(h, 1);
        Ok(ObjectOverX::new(GMap::new_unchecked(total, pt, vec![0; fiber.len()])))
    }

    fn apply_map(&self, src: &ObjectOverX, dst: &ObjectOverX, f: &GMap) -> Result<GMap> {
        let (a, b) = (self.apply(src)?, self.apply(dst)?);
        let fb = Self::fiber(dst);
        let pos: HashMap<usize, usize> = fb.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let values = Self::fiber(src).iter().map(|&x| pos[&f.apply(x)]).collect();
        GMap::new(a.total, b.total, values)
    }
}

impl ObjectFunctor for Psi {
    fn apply(&self, y: &ObjectOverX) -> Result<ObjectOverX> {
        let (total, proj) = induce(&y.total, &self.emb);
        Ok(ObjectOverX {
            total,
            structure: proj,
        })
    }

    fn apply_map(&self, src: &ObjectOverX, dst: &ObjectOverX, f: &GMap) -> Result<GMap> {
        let (a, b) = (self.apply(src)?, self.apply(dst)?);
        let (n, n2) = (src.size(), dst.size());
        let values = (0..a.size()).map(|p| (p / n) * n2 + f.apply(p % n)).collect();
        GMap::new(a.total, b.total, values)
    }
}

/// Checks that fibers over `eH` and induction are inverse equivalences on
/// objects of size at most `bound`, and that both preserve the squares
/// structure.
pub fn phi_psi_check(group: &Arc<FiniteGroup>, h: &Subgroup, bound: usize, cap: usize) -> Result<Report> {
    let emb = group.subgroup_group(h);
    let over_gh = build_truncated(&GSet::coset_space(group, h), bound, cap)?;
    let h_sets = build_truncated(&GSet::trivial(&emb.group, 1), bound, cap)?;
    let phi = Phi { emb: emb.clone() };
    let psi = Psi { emb: emb.clone() };
    let reps = group.coset_table(h).representatives;
    let mut report = Report::default();

    let mut a = Check::new("phi_psi_identity");
    for i in 0..h_sets.objects().len() {
        let y = h_sets.object(i);
        let back = phi.apply(&psi.apply(&y)?)?;
        // (g₁ = e, m) ↦ m
        let ok = GMap::new(y.total.clone(), back.total.clone(), (0..y.size()).collect())
            .is_ok_and(|m| m.is_bijective());
        a.record(ok, || json!({"h_set": h_sets.objects()[i]}));
    }
    report.push(a);

    let mut b = Check::new("psi_phi_identity");
    for i in 0..over_gh.objects().len() {
        let m = over_gh.object(i);
        let fiber = Phi::fiber(&m);
        let ind = psi.apply(&phi.apply(&m)?)?;
        let n = fiber.len();
        // (gᵢ, m) ↦ gᵢ·m
        let values: Vec<usize> = (0..ind.size()).map(|p| m.total.act(reps[p / n.max(1)], fiber[p % n])).collect();
        let ok = GMap::new(ind.total.clone(), m.total.clone(), values)
            .is_ok_and(|f| f.is_bijective() && ind.is_over(&m, &f));
        b.record(ok, || json!({"object": over_gh.objects()[i]}));
    }
    report.push(b);

    for (prefix, fun, source) in [("phi", &phi as &dyn ObjectFunctor, &over_gh), ("psi", &psi, &h_sets)] {
        for mut c in check_square_functor(fun, source, bound, cap)?.checks {
            c.axiom = format!("{prefix}_{}", c.axiom);
            report.push(c);
        }
    }
    Ok(report)
}

/// The Mackey functor `H ↦ K₀` of objects over `G/H`, its comparison to
/// the Burnside Mackey functor, and whether the comparison is an
/// isomorphism.
#[derive(Debug)]
pub struct SkMackey {
    pub functor: MackeyFunctor,
    pub burnside: MackeyFunctor,
    pub comparison: MackeyMorphism,
    pub isomorphism: bool,
    pub bound: usize,
}

/// K₀ of objects over `base` at `bound`, checked to agree with the value
/// at `bound + |G|`.
pub fn stable_k0(base: &GSet, bound: usize, cap: usize) -> Result<TruncatedSK> {
    let t = build_truncated(base, bound, cap)?;
    let larger = bound + base.group().order();
    let t2 = build_truncated(base, larger, cap)?;
    let (a, b) = (t.k0_group()?, t2.k0_group()?);
    if a != b {
        return Err(Error::Stabilization {
            bound,
            group_at_bound: a.to_string(),
            larger_bound: larger,
            group_at_larger: b.to_string(),
        });
    }
    Ok(t)
}

/// Image of each K₀ coordinate of `source` under a functor, as a matrix in
/// the coordinates of `target`.
fn induced_matrix(source: &TruncatedSK, target: &TruncatedSK, fun: &dyn ObjectFunctor) -> Result<Matrix> {
    let k0 = source.k0()?;
    let dim = target.k0_group()?.dim();
    let mut cache: HashMap<usize, Vec<i64>> = HashMap::new();
    let mut cols = Vec::new();
    for k in 0..k0.group().dim() {
        let mut col = vec![0i64; dim];
        for &(obj, coeff) in k0.preimage(k) {
            if !cache.contains_key(&obj) {
                let image = fun.apply(&source.object(obj))?;
                cache.insert(obj, target.class_of(&image)?);
            }
            for (c, v) in col.iter_mut().zip(&cache[&obj]) {
                *c = coeff
                    .checked_mul(*v)
                    .and_then(|t| c.checked_add(t))
                    .ok_or(Error::Overflow)?;
            }
        }
        target.k0_group()?.reduce(&mut col);
        cols.push(col);
    }
    Matrix::from_columns(&cols, dim)
}

/// Assembles the K₀ Mackey functor at truncation `bound` (at least
/// `2|G|`), with restriction by pullback along orbit maps, transfer by
/// post-composition and conjugation by pullback along `xH ↦ xnH`.
pub fn k0_mackey(group: &Arc<FiniteGroup>, bound: usize, cap: usize) -> Result<SkMackey> {
    if bound < 2 * group.order() {
        return Err(Error::Precondition(format!(
            "truncation bound {bound} is below 2|G| = {}",
            2 * group.order()
        )));
    }
    let frame = Arc::new(Frame::new(group));
    let n = frame.classes();
    let reps: Vec<Subgroup> = (0..n).map(|i| frame.subgroup(frame.rep(i)).clone()).collect();
    let levels_sk: Vec<TruncatedSK> = reps
        .iter()
        .map(|h| stable_k0(&GSet::coset_space(group, h), bound, cap))
        .collect::<Result<_>>()?;
    let levels: Vec<FgAbelianGroup> = levels_sk
        .iter()
        .map(|t| t.k0_group().cloned())
        .collect::<Result<_>>()?;
    let mut res = vec![BTreeMap::new(); n];
    let mut tr = vec![BTreeMap::new(); n];
    let mut con = vec![Vec::new(); n];
    for i in 0..n {
        for &k in frame.below(i) {
            let j = frame.class_of(k);
            let r = orbit_map(group, &reps[j], frame.conjugator(k), &reps[i])?;
            res[i].insert(k, induced_matrix(&levels_sk[i], &levels_sk[j], &Restriction { r: r.clone() })?);
            tr[i].insert(k, induced_matrix(&levels_sk[j], &levels_sk[i], &Transfer { r })?);
        }
        for &x in frame.weyl_transversal(i) {
            let rho = orbit_map(group, &reps[i], group.inv(x), &reps[i])?;
            con[i].push(induced_matrix(&levels_sk[i], &levels_sk[i], &Restriction { r: rho })?);
        }
    }
    let functor = MackeyFunctor::new(frame.clone(), levels, res, tr, con)?;
    let burnside = burnside_mackey(group)?;
    let mut maps = Vec::with_capacity(n);
    for (i, t) in levels_sk.iter().enumerate() {
        let phi = Phi {
            emb: group.subgroup_group(&reps[i]),
        };
        let k0 = t.k0()?;
        let rank = burnside.level(i).dim();
        let mut cols = Vec::new();
        for k in 0..k0.group().dim() {
            let mut col = vec![0i64; rank];
            for &(obj, coeff) in k0.preimage(k) {
                let fiber = phi.apply(&t.object(obj))?;
                for (c, v) in col.iter_mut().zip(burnside_class(&fiber.total).coefficients) {
                    *c += coeff * v;
                }
            }
            cols.push(col);
        }
        maps.push(Matrix::from_columns(&cols, rank)?);
    }
    let comparison = MackeyMorphism { maps };
    let isomorphism = is_isomorphism(&comparison, &functor, &burnside)?;
    Ok(SkMackey {
        functor,
        burnside,
        comparison,
        isomorphism,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;
    use crate::squares::{check_axioms, k0 as squares_k0};

    const CAP: usize = DEFAULT_OBJECT_CAP;

    fn pt(g: &Arc<FiniteGroup>) -> GSet {
        GSet::trivial(g, 1)
    }

    #[test]
    fn zero_bound_has_only_the_empty_object() {
        let g = groups::cyclic(2);
        let t = build_truncated(&pt(&g), 0, CAP).unwrap();
        assert_eq!(t.objects().len(), 1);
        assert!(t.k0_group().unwrap().is_trivial());
    }

    #[test]
    fn c2_over_point_has_nine_objects_at_four() {
        let g = groups::cyclic(2);
        let t = build_truncated(&pt(&g), 4, CAP).unwrap();
        assert_eq!(t.objects().len(), 9);
        assert_eq!(t.objects()[0], vec![0, 0]);
    }

    #[test]
    fn trivial_group_gives_z() {
        let g = groups::trivial();
        let t = build_truncated(&pt(&g), 3, CAP).unwrap();
        assert_eq!(t.objects().len(), 4);
        assert_eq!(*t.k0_group().unwrap(), FgAbelianGroup::free(1));
    }

    #[test]
    fn peel_and_square_relations_agree() {
        for (g, n) in [(groups::cyclic(2), 6), (groups::symmetric3(), 7), (groups::klein_four(), 6)] {
            let t = build_truncated(&pt(&g), n, CAP).unwrap();
            let full = t.k0_from_squares().unwrap();
            let peel = t.k0().unwrap();
            assert_eq!(full.group(), peel.group());
            for i in 0..t.objects().len() {
                let a: Vec<i64> = full.class_of(i).to_vec();
                let b = peel.class_of(i);
                assert_eq!(a.iter().all(|&x| x == 0), b.iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn classify_inverts_canonical() {
        let g = groups::symmetric3();
        let base = GSet::coset_space(&g, &g.subgroup_classes()[1].representative);
        let t = build_truncated(&base, 9, CAP).unwrap();
        for (i, c) in t.objects().iter().enumerate() {
            assert_eq!(&t.classify(&t.object(i)).unwrap(), c);
        }
    }

    #[test]
    fn small_presentation_passes_and_matches() {
        for (g, n) in [(groups::trivial(), 3), (groups::cyclic(2), 3)] {
            let t = build_truncated(&pt(&g), n, CAP).unwrap();
            let p = t.presentation(100_000).unwrap();
            let r = check_axioms(&p).unwrap();
            assert!(r.passed(), "{}", r.render());
            let k = squares_k0(&p, false).unwrap();
            assert_eq!(&k.group, t.k0_group().unwrap());
        }
    }

    #[test]
    fn restriction_along_free_orbit() {
        let g = groups::cyclic(2);
        let free = GSet::regular(&g);
        let r = GMap::to_point(&free);
        let over_pt = build_truncated(&pt(&g), 2, CAP).unwrap();
        let one = over_pt.canonical(&[0, 1]);
        let pulled = Restriction { r }.apply(&one).unwrap();
        assert_eq!(pulled.size(), 2);
        assert_eq!(pulled.total.orbit_type(), vec![0]);
    }

    #[test]
    fn functors_preserve_structure_and_are_adjoint() {
        let g = groups::cyclic(2);
        let free = GSet::regular(&g);
        let r = GMap::to_point(&free);
        let over_x = build_truncated(&free, 6, CAP).unwrap();
        let over_y = build_truncated(&pt(&g), 4, CAP).unwrap();
        let rep = check_square_functor(&Restriction { r: r.clone() }, &over_y, 4, CAP).unwrap();
        assert!(rep.passed(), "{}", rep.render());
        let rep = check_square_functor(&Transfer { r: r.clone() }, &over_x, 6, CAP).unwrap();
        assert!(rep.passed(), "{}", rep.render());
        let rep = check_adjunction(&r, &over_x, &over_y).unwrap();
        assert!(rep.passed(), "{}", rep.render());
    }

    #[test]
    fn phi_psi_on_c2() {
        let g = groups::cyclic(2);
        for h in [g.trivial_subgroup(), g.whole()] {
            let r = phi_psi_check(&g, &h, 6, CAP).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn beck_chevalley_on_c2_orbits() {
        let g = groups::cyclic(2);
        for sq in orbit_pullback_squares(&g, CAP).unwrap() {
            let r = beck_chevalley_check(&sq, 6, CAP).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn non_pullback_is_rejected() {
        let g = groups::cyclic(2);
        let free = GSet::regular(&g);
        let to_pt = GMap::to_point(&free);
        let id = GMap::identity(&free);
        let sq = PullbackSquare {
            p: id.clone(),
            q: id,
            h: to_pt.clone(),
            k: to_pt,
        };
        assert!(matches!(beck_chevalley_check(&sq, 4, CAP), Err(Error::Precondition(_))));
    }

    #[test]
    fn mackey_for_c2_matches_burnside() {
        let g = groups::cyclic(2);
        let m = k0_mackey(&g, 6, CAP).unwrap();
        assert!(m.isomorphism);
        assert!(m.functor.validate().unwrap().passed());
        assert_eq!(m.functor.level(1).free_rank, 2);
    }

    #[test]
    fn small_bound_is_rejected() {
        let g = groups::cyclic(2);
        assert!(matches!(k0_mackey(&g, 3, CAP), Err(Error::Precondition(_))));
    }
}
