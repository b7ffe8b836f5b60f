//! Finite G-sets in the ordered model: a size `n` and, for every group
//! element, a permutation of `0..n`.
//!
//! All constructions (products, pullbacks, pushouts, unions) use fixed
//! orderings of their underlying sets, so their outputs are strict
//! functions of the inputs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, SubgroupEmbedding};

pub const DEFAULT_HOM_CAP: usize = 1_000_000;

#[derive(Clone)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    size: usize,
    // action[g * size + x] = g·x
    action: Arc<Vec<u32>>,
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
            && self.size == other.size
            && self.action == other.action
    }
}

impl Eq for GSet {}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GSet({} points over {})", self.size, self.group.name())
    }
}

impl GSet {
    /// Validated constructor; `action[g][x]` is `g·x`.
    pub fn new(group: Arc<FiniteGroup>, size: usize, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidGSet(format!(
                "{} permutations for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, row) in action.iter().enumerate() {
            let mut seen = vec![false; size];
            if row.len() != size
                || row
                    .iter()
                    .any(|&y| y >= size || std::mem::replace(&mut seen[y], true))
            {
                return Err(Error::InvalidGSet(format!("element {g} does not act by a permutation")));
            }
        }
        let flat = action.iter().flatten().map(|&y| y as u32).collect();
        let x = GSet {
            group,
            size,
            action: Arc::new(flat),
        };
        x.check_action()?;
        Ok(x)
    }

    pub(crate) fn from_fn(
        group: &Arc<FiniteGroup>,
        size: usize,
        mut act: impl FnMut(usize, usize) -> usize,
    ) -> Self {
        let mut flat = Vec::with_capacity(group.order() * size);
        for g in 0..group.order() {
            for x in 0..size {
                flat.push(act(g, x) as u32);
            }
        }
        let out = GSet {
            group: group.clone(),
            size,
            action: Arc::new(flat),
        };
        debug_assert!(out.check_action().is_ok());
        out
    }

    fn check_action(&self) -> Result<()> {
        let n = self.group.order();
        for x in 0..self.size {
            if self.act(0, x) != x {
                return Err(Error::InvalidGSet("identity does not act trivially".into()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for x in 0..self.size {
                    if self.act(gh, x) != self.act(g, self.act(h, x)) {
                        return Err(Error::InvalidGSet(format!(
                            "action is not a homomorphism at ({g}, {h}, {x})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty(group: &Arc<FiniteGroup>) -> Self {
        Self::from_fn(group, 0, |_, x| x)
    }

    /// `n` fixed points.
    pub fn trivial(group: &Arc<FiniteGroup>, n: usize) -> Self {
        Self::from_fn(group, n, |_, x| x)
    }

    /// `G/H`, points ordered as in [`FiniteGroup::cosets`].
    pub fn coset_space(group: &Arc<FiniteGroup>, h: &Subgroup) -> Self {
        let table = group.coset_table(h);
        let reps = &table.representatives;
        Self::from_fn(group, reps.len(), |g, x| {
            table.coset_of[group.mul(g, reps[x])]
        })
    }

    /// Left regular action, `G/e`.
    pub fn regular(group: &Arc<FiniteGroup>) -> Self {
        Self::coset_space(group, &group.trivial_subgroup())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x] as usize
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        (0..self.group.order())
            .map(|g| (0..self.size).map(|x| self.act(g, x)).collect())
            .collect()
    }

    /// Orbits, each sorted, listed by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit = vec![x];
            seen[x] = true;
            let mut i = 0;
            while i < orbit.len() {
                let y = orbit[i];
                for g in 0..self.group.order() {
                    let z = self.act(g, y);
                    if !seen[z] {
                        seen[z] = true;
                        orbit.push(z);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// `orbit_index[x]` for every point, numbering orbits as in [`GSet::orbits`].
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.size];
        for (i, orbit) in self.orbits().iter().enumerate() {
            for &x in orbit {
                idx[x] = i;
            }
        }
        idx
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup::from_sorted(
            (0..self.group.order())
                .filter(|&g| self.act(g, x) == x)
                .collect(),
        )
    }

    /// Stabilizer class of each orbit, as a sorted multiset of class indices.
    pub fn orbit_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self
            .orbits()
            .iter()
            .map(|o| self.group.class_index(&self.stabilizer(o[0])))
            .collect();
        t.sort_unstable();
        t
    }

    pub fn fixed_points(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| h.elements().iter().all(|&g| self.act(g, x) == x))
            .collect()
    }

    /// The same points with `k·x = φ(k)·x` for a homomorphism `φ` from
    /// `group` into this set's group, given elementwise.
    pub fn along_homomorphism(&self, group: &Arc<FiniteGroup>, phi: &[usize]) -> GSet {
        debug_assert_eq!(phi.len(), group.order());
        Self::from_fn(group, self.size, |k, x| self.act(phi[k], x))
    }

    /// Restriction to a subgroup presented as a group in its own right.
    pub fn restrict(&self, emb: &SubgroupEmbedding) -> GSet {
        self.along_homomorphism(&emb.group, &emb.lift_table())
    }
}

/// An equivariant map between G-sets over the same group.
#[derive(Clone, PartialEq, Eq)]
pub struct GMap {
    source: GSet,
    target: GSet,
    values: Vec<usize>,
}

impl fmt::Debug for GMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GMap({} -> {}: {:?})",
            self.source.size(),
            self.target.size(),
            self.values
        )
    }
}

impl GMap {
    pub fn new(source: GSet, target: GSet, values: Vec<usize>) -> Result<Self> {
        if source.group() != target.group() {
            return Err(Error::InvalidMap("source and target have different groups".into()));
        }
        if values.len() != source.size() || values.iter().any(|&y| y >= target.size()) {
            return Err(Error::InvalidMap("values do not fit source and target".into()));
        }
        let m = GMap {
            source,
            target,
            values,
        };
        if let Some((g, x)) = m.equivariance_failure() {
            return Err(Error::InvalidMap(format!("not equivariant at g={g}, x={x}")));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: GSet, target: GSet, values: Vec<usize>) -> Self {
        let m = GMap {
            source,
            target,
            values,
        };
        debug_assert!(m.equivariance_failure().is_none());
        m
    }

    fn equivariance_failure(&self) -> Option<(usize, usize)> {
        for g in 0..self.source.group().order() {
            for x in 0..self.source.size() {
                if self.values[self.source.act(g, x)] != self.target.act(g, self.values[x]) {
                    return Some((g, x));
                }
            }
        }
        None
    }

    pub fn identity(x: &GSet) -> Self {
        GMap {
            source: x.clone(),
            target: x.clone(),
            values: (0..x.size()).collect(),
        }
    }

    /// The unique map to the one-point set.
    pub fn to_point(x: &GSet) -> Self {
        GMap {
            source: x.clone(),
            target: GSet::trivial(x.group(), 1),
            values: vec![0; x.size()],
        }
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `next ∘ self`
    pub fn then(&self, next: &GMap) -> Result<GMap> {
        if self.target != next.source {
            return Err(Error::Precondition("maps are not composable".into()));
        }
        Ok(GMap {
            source: self.source.clone(),
            target: next.target.clone(),
            values: self.values.iter().map(|&y| next.values[y]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.values
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &y in &self.values {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<GMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            inv[y] = x;
        }
        Some(GMap {
            source: self.target.clone(),
            target: self.source.clone(),
            values: inv,
        })
    }
}

/// Equivariant bijection built by matching orbits with conjugate
/// stabilizers; `None` iff the orbit types differ.
pub fn iso(x: &GSet, y: &GSet) -> Option<GMap> {
    if x.group() != y.group() || x.size() != y.size() || x.orbit_type() != y.orbit_type() {
        return None;
    }
    let g = x.group();
    let lattice = g.lattice();
    let mut y_orbits: Vec<(usize, usize, bool)> = y
        .orbits()
        .iter()
        .map(|o| (g.class_index(&y.stabilizer(o[0])), o[0], false))
        .collect();
    let mut values = vec![usize::MAX; x.size()];
    for orbit in x.orbits() {
        let base = orbit[0];
        let stab = x.stabilizer(base);
        let class = g.class_index(&stab);
        let slot = y_orbits
            .iter_mut()
            .find(|(c, _, used)| *c == class && !*used)
            .expect("orbit types agree");
        slot.2 = true;
        let target_stab = y.stabilizer(slot.1);
        // find c with c·stab·c⁻¹ = target_stab, then send base to c⁻¹·y0
        let c = conjugating_element(g, &stab, &target_stab, lattice.subgroups().len())
            .expect("stabilizers are conjugate");
        let image = y.act(g.inv(c), slot.1);
        for h in 0..g.order() {
            values[x.act(h, base)] = y.act(h, image);
        }
    }
    Some(GMap::new_unchecked(x.clone(), y.clone(), values))
}

fn conjugating_element(
    g: &FiniteGroup,
    from: &Subgroup,
    to: &Subgroup,
    _hint: usize,
) -> Option<usize> {
    (0..g.order()).find(|&c| g.conjugate_subgroup(c, from) == *to)
}

/// `X ⊔ Y` with `X` on `0..|X|` followed by `Y`, plus both injections.
pub fn disjoint_union(x: &GSet, y: &GSet) -> Result<(GSet, GMap, GMap)> {
    if x.group() != y.group() {
        return Err(Error::Precondition("disjoint union over different groups".into()));
    }
    let nx = x.size();
    let u = GSet::from_fn(x.group(), nx + y.size(), |g, p| {
        if p < nx {
            x.act(g, p)
        } else {
            nx + y.act(g, p - nx)
        }
    });
    let inl = GMap::new_unchecked(x.clone(), u.clone(), (0..nx).collect());
    let inr = GMap::new_unchecked(y.clone(), u.clone(), (nx..nx + y.size()).collect());
    Ok((u, inl, inr))
}

/// `X × Y` with lexicographic point order `(x, y) ↦ x·|Y| + y` and the
/// diagonal action.
pub fn product(x: &GSet, y: &GSet) -> Result<GSet> {
    if x.group() != y.group() {
        return Err(Error::Precondition("product over different groups".into()));
    }
    let ny = y.size();
    Ok(GSet::from_fn(x.group(), x.size() * ny, |g, p| {
        x.act(g, p / ny) * ny + y.act(g, p % ny)
    }))
}

/// A chosen pullback `A ×_X B` with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub apex: GSet,
    pub left: GMap,
    pub right: GMap,
}

impl Pullback {
    /// The pair `(a, b)` at apex position `p`.
    pub fn pair(&self, p: usize) -> (usize, usize) {
        (self.left.apply(p), self.right.apply(p))
    }
}

/// Pullback of `f: A → X` and `g: B → X` on the pairs `(a, b)` with
/// `f(a) = g(b)`, listed lexicographically, with the diagonal action.
pub fn canonical_pullback(f: &GMap, g: &GMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::Precondition("pullback legs have different targets".into()));
    }
    let (na, nb) = (f.source().size(), g.source().size());
    // bucket B by image so the pair scan is linear in the output
    let mut by_image: Vec<Vec<usize>> = vec![Vec::new(); f.target().size()];
    for b in 0..nb {
        by_image[g.apply(b)].push(b);
    }
    let mut pairs = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for a in 0..na {
        for &b in &by_image[f.apply(a)] {
            index.insert((a, b), pairs.len());
            pairs.push((a, b));
        }
    }
    let group = f.source().group();
    let (sa, sb) = (f.source(), g.source());
    let apex = GSet::from_fn(group, pairs.len(), |h, p| {
        let (a, b) = pairs[p];
        index[&(sa.act(h, a), sb.act(h, b))]
    });
    let left = GMap::new_unchecked(apex.clone(), sa.clone(), pairs.iter().map(|p| p.0).collect());
    let right = GMap::new_unchecked(apex.clone(), sb.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(Pullback { apex, left, right })
}

/// A chosen pushout `B ⊔_A C` of two injections.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub apex: GSet,
    pub from_b: GMap,
    pub from_c: GMap,
}

/// Pushout of injections `f: A ↪ B`, `g: A ↪ C` on `C ⊔ (B ∖ f(A))`, with
/// `C` first and the complement of `f(A)` following in `B`'s order.
pub fn pushout_along_injections(f: &GMap, g: &GMap) -> Result<Pushout> {
    if f.source() != g.source() {
        return Err(Error::Precondition("pushout legs have different sources".into()));
    }
    if !f.is_injective() || !g.is_injective() {
        return Err(Error::Precondition("pushout legs must be injective".into()));
    }
    let (b, c) = (f.target(), g.target());
    let nc = c.size();
    let mut preimage = vec![None; b.size()];
    for a in 0..f.source().size() {
        preimage[f.apply(a)] = Some(a);
    }
    let mut slot = vec![usize::MAX; b.size()];
    let mut next = nc;
    for (p, pre) in preimage.iter().enumerate() {
        if pre.is_none() {
            slot[p] = next;
            next += 1;
        }
    }
    let mut back = vec![0; next - nc];
    for (p, &s) in slot.iter().enumerate() {
        if s != usize::MAX {
            back[s - nc] = p;
        }
    }
    let apex = GSet::from_fn(b.group(), next, |h, d| {
        if d < nc {
            c.act(h, d)
        } else {
            slot[b.act(h, back[d - nc])]
        }
    });
    let from_c = GMap::new_unchecked(c.clone(), apex.clone(), (0..nc).collect());
    let from_b_values = (0..b.size())
        .map(|p| match preimage[p] {
            Some(a) => g.apply(a),
            None => slot[p],
        })
        .collect();
    let from_b = GMap::new_unchecked(b.clone(), apex.clone(), from_b_values);
    Ok(Pushout {
        apex,
        from_b,
        from_c,
    })
}

/// Whether a commuting square of injections
///
/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C --bot--> D
/// ```
///
/// is a pushout: `D` is covered by the two images and they overlap exactly
/// in the image of `A`.
pub fn is_pushout_square(top: &GMap, left: &GMap, right: &GMap, bottom: &GMap) -> bool {
    if top.source() != left.source()
        || top.target() != right.source()
        || left.target() != bottom.source()
        || right.target() != bottom.target()
    {
        return false;
    }
    let n_a = top.source().size();
    if (0..n_a).any(|a| right.apply(top.apply(a)) != bottom.apply(left.apply(a))) {
        return false;
    }
    if ![top, left, right, bottom].iter().all(|m| m.is_injective()) {
        return false;
    }
    let d = right.target().size();
    if d + n_a != top.target().size() + left.target().size() {
        return false;
    }
    let mut covered = vec![false; d];
    for b in 0..top.target().size() {
        covered[right.apply(b)] = true;
    }
    for c in 0..left.target().size() {
        covered[bottom.apply(c)] = true;
    }
    covered.into_iter().all(|x| x)
}

/// All equivariant maps `X → Y`.
///
/// Each orbit's base point may go to any point of `Y` fixed by its
/// stabilizer; the map is then forced on the rest of the orbit.
pub fn hom_set(x: &GSet, y: &GSet, cap: usize) -> Result<Vec<GMap>> {
    equivariant_maps(x, y, cap, false, |_, _| true)
}

/// Equivariant injections `X ↪ Y` whose base-point images pass `allow`.
pub fn injections(
    x: &GSet,
    y: &GSet,
    cap: usize,
    allow: impl Fn(usize, usize) -> bool,
) -> Result<Vec<GMap>> {
    equivariant_maps(x, y, cap, true, allow)
}

fn equivariant_maps(
    x: &GSet,
    y: &GSet,
    cap: usize,
    injective: bool,
    allow: impl Fn(usize, usize) -> bool,
) -> Result<Vec<GMap>> {
    if x.group() != y.group() {
        return Err(Error::Precondition("maps between different groups".into()));
    }
    let g = x.group();
    let orbits = x.orbits();
    let y_orbit = y.orbit_index();
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(orbits.len());
    let mut total: usize = 1;
    for orbit in &orbits {
        let base = orbit[0];
        let stab = x.stabilizer(base);
        let c: Vec<usize> = if injective {
            (0..y.size())
                .filter(|&p| y.stabilizer(p) == stab && allow(base, p))
                .collect()
        } else {
            y.fixed_points(&stab)
                .into_iter()
                .filter(|&p| allow(base, p))
                .collect()
        };
        total = total.saturating_mul(c.len().max(1));
        if c.is_empty() {
            return Ok(Vec::new());
        }
        candidates.push(c);
    }
    if total > cap {
        return Err(Error::cap("candidate equivariant maps", cap, total));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; orbits.len()];
    loop {
        let images: Vec<usize> = choice
            .iter()
            .zip(&candidates)
            .map(|(&i, c)| c[i])
            .collect();
        let distinct_orbits = !injective || {
            let mut used: Vec<usize> = images.iter().map(|&p| y_orbit[p]).collect();
            used.sort_unstable();
            used.windows(2).all(|w| w[0] != w[1])
        };
        if distinct_orbits {
            let mut values = vec![0; x.size()];
            for (orbit, &img) in orbits.iter().zip(&images) {
                let base = orbit[0];
                for h in 0..g.order() {
                    values[x.act(h, base)] = y.act(h, img);
                }
            }
            out.push(GMap::new_unchecked(x.clone(), y.clone(), values));
        }
        // odometer
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Induction from a subgroup: points `(i, m)` at `i·|M| + m`, with
/// `g·(gᵢ, m) = (gⱼ, h·m)` where `g·gᵢ = gⱼ·h` for the coset representatives
/// `g₁ = e, g₂, …` of `G/H`. Also returns the projection `(gᵢ, m) ↦ gᵢH`.
pub fn induce(m: &GSet, emb: &SubgroupEmbedding) -> (GSet, GMap) {
    let g = &emb.parent;
    let table = g.coset_table(&emb.subgroup);
    let reps = &table.representatives;
    let n = m.size();
    let total = reps.len() * n;
    let act = |x: usize, p: usize| -> usize {
        let (i, pt) = (p / n, p % n);
        let gi = g.mul(x, reps[i]);
        let j = table.coset_of[gi];
        let h = g.mul(g.inv(reps[j]), gi);
        j * n + m.act(emb.lower(h).expect("coset decomposition lands in H"), pt)
    };
    let induced = GSet::from_fn(g, total, act);
    let base = GSet::coset_space(g, &emb.subgroup);
    let proj = GMap::new_unchecked(induced.clone(), base, (0..total).map(|p| p / n.max(1)).collect());
    (induced, proj)
}
