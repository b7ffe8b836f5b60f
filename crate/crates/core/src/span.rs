//! Spans of G-sets, their composition by canonical pullback, and 2-cells.

use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::gset::{canonical_pullback, disjoint_union, GMap, GSet};

/// `X ← A → Y`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    pub left: GMap,
    pub right: GMap,
}

/// An apex bijection commuting with both legs.
#[derive(Clone, Debug)]
pub struct Span2Cell {
    pub iso: GMap,
    pub source: Span,
    pub target: Span,
}

impl Span {
    pub fn new(left: GMap, right: GMap) -> Result<Self> {
        if left.source() != right.source() {
            return Err(Error::Precondition("span legs have different sources".into()));
        }
        Ok(Span { left, right })
    }

    /// `Y ← Y → Y`
    pub fn identity(y: &GSet) -> Self {
        Span {
            left: GMap::identity(y),
            right: GMap::identity(y),
        }
    }

    pub fn apex(&self) -> &GSet {
        self.left.source()
    }

    pub fn source(&self) -> &GSet {
        self.left.target()
    }

    pub fn target(&self) -> &GSet {
        self.right.target()
    }

    /// `next ∘ self`: for `self: X ↛ Y` and `next: Y ↛ Z`, the apex is the
    /// canonical pullback of `self.right` and `next.left`.
    pub fn compose(&self, next: &Span) -> Result<Span> {
        if self.target() != next.source() {
            return Err(Error::Precondition("spans do not share the middle object".into()));
        }
        let p = canonical_pullback(&self.right, &next.left)?;
        Ok(Span {
            left: p.left.then(&self.left)?,
            right: p.right.then(&next.right)?,
        })
    }

    /// Per-orbit `(stabilizer class, left image orbit, right image orbit)`,
    /// sorted; equal for spans related by a 2-cell.
    pub fn orbit_signature(&self) -> Vec<(usize, usize, usize)> {
        let a = self.apex();
        let g = a.group();
        let xo = self.source().orbit_index();
        let yo = self.target().orbit_index();
        let mut sig: Vec<_> = a
            .orbits()
            .iter()
            .map(|o| {
                let p = o[0];
                (
                    g.class_index(&a.stabilizer(p)),
                    xo[self.left.apply(p)],
                    yo[self.right.apply(p)],
                )
            })
            .collect();
        sig.sort_unstable();
        sig
    }
}

/// A 2-cell `s ⇒ t`, found by backtracking over images of orbit base points.
pub fn span_iso(s: &Span, t: &Span) -> Option<Span2Cell> {
    if s.source() != t.source()
        || s.target() != t.target()
        || s.apex().size() != t.apex().size()
        || s.orbit_signature() != t.orbit_signature()
    {
        return None;
    }
    let (a, b) = (s.apex(), t.apex());
    let orbits = a.orbits();
    let b_orbit = b.orbit_index();
    let stabs: Vec<_> = (0..b.size()).map(|p| b.stabilizer(p)).collect();
    let candidates: Vec<Vec<usize>> = orbits
        .iter()
        .map(|o| {
            let base = o[0];
            let stab = a.stabilizer(base);
            (0..b.size())
                .filter(|&p| {
                    stabs[p] == stab
                        && t.left.apply(p) == s.left.apply(base)
                        && t.right.apply(p) == s.right.apply(base)
                })
                .collect()
        })
        .collect();
    let mut used = vec![false; b.orbits().len()];
    let mut choice = vec![0usize; orbits.len()];
    if !assign(0, &candidates, &b_orbit, &mut used, &mut choice) {
        return None;
    }
    let g = a.group();
    let mut values = vec![0; a.size()];
    for (o, &img) in orbits.iter().zip(&choice) {
        for h in 0..g.order() {
            values[a.act(h, o[0])] = b.act(h, img);
        }
    }
    let iso = GMap::new_unchecked(a.clone(), b.clone(), values);
    Some(Span2Cell {
        iso,
        source: s.clone(),
        target: t.clone(),
    })
}

fn assign(
    i: usize,
    candidates: &[Vec<usize>],
    b_orbit: &[usize],
    used: &mut [bool],
    choice: &mut [usize],
) -> bool {
    if i == candidates.len() {
        return true;
    }
    for &p in &candidates[i] {
        let o = b_orbit[p];
        if used[o] {
            continue;
        }
        used[o] = true;
        choice[i] = p;
        if assign(i + 1, candidates, b_orbit, used, choice) {
            return true;
        }
        used[o] = false;
    }
    false
}

/// Whether a 2-cell is genuinely one: an equivariant bijection of apexes
/// commuting with both legs.
pub fn is_2cell(c: &Span2Cell) -> bool {
    let iso = &c.iso;
    iso.source() == c.source.apex()
        && iso.target() == c.target.apex()
        && iso.is_bijective()
        && (0..iso.source().size()).all(|p| {
            c.target.left.apply(iso.apply(p)) == c.source.left.apply(p)
                && c.target.right.apply(iso.apply(p)) == c.source.right.apply(p)
        })
}

/// A random G-set of size at most `max_size`, built from coset spaces of
/// randomly chosen subgroups.
pub fn random_gset<R: Rng>(group: &Arc<FiniteGroup>, max_size: usize, rng: &mut R) -> GSet {
    let target = rng.gen_range(0..=max_size);
    let subgroups = group.all_subgroups();
    let mut x = GSet::empty(group);
    loop {
        let room = target - x.size();
        let fitting: Vec<_> = subgroups
            .iter()
            .filter(|h| group.order() / h.order() <= room)
            .collect();
        let Some(h) = fitting.choose(rng) else {
            return x;
        };
        let orbit = GSet::coset_space(group, h);
        x = disjoint_union(&x, &orbit).expect("same group").0;
        if rng.gen_bool(0.3) {
            return x;
        }
    }
}

/// A random equivariant map `x → y`, if one exists.
pub fn random_map<R: Rng>(x: &GSet, y: &GSet, rng: &mut R) -> Option<GMap> {
    let g = x.group();
    let mut values = vec![0; x.size()];
    for o in x.orbits() {
        let fixed = y.fixed_points(&x.stabilizer(o[0]));
        let &img = fixed.choose(rng)?;
        for h in 0..g.order() {
            values[x.act(h, o[0])] = y.act(h, img);
        }
    }
    Some(GMap::new_unchecked(x.clone(), y.clone(), values))
}

/// A random span `x ← A → y` with `|A| ≤ max_apex`.
pub fn random_span<R: Rng>(x: &GSet, y: &GSet, max_apex: usize, rng: &mut R) -> Span {
    loop {
        let a = random_gset(x.group(), max_apex, rng);
        if let (Some(l), Some(r)) = (random_map(&a, x, rng), random_map(&a, y, rng)) {
            return Span { left: l, right: r };
        }
    }
}

/// Three composable random spans over random endpoints.
pub fn random_triple<R: Rng>(
    group: &Arc<FiniteGroup>,
    max_object: usize,
    max_apex: usize,
    rng: &mut R,
) -> [Span; 3] {
    let objects: Vec<GSet> = (0..4)
        .map(|_| {
            let mut o = random_gset(group, max_object, rng);
            while o.is_empty() {
                o = random_gset(group, max_object, rng);
            }
            o
        })
        .collect();
    [
        random_span(&objects[0], &objects[1], max_apex, rng),
        random_span(&objects[1], &objects[2], max_apex, rng),
        random_span(&objects[2], &objects[3], max_apex, rng),
    ]
}
