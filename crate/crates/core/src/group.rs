//! Finite groups stored as full Cayley tables.
//!
//! Elements are indices `0..order` with the identity fixed at `0`. Every
//! enumeration in this module breaks ties by the smallest element index, so
//! results are reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// A subgroup, stored as its sorted element set.
///
/// Subgroups are ordered by `(order, element set)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub(crate) fn from_sorted(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements = self
            .elements
            .iter()
            .copied()
            .filter(|&g| other.contains(g))
            .collect();
        Subgroup { elements }
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

/// A conjugacy class of subgroups; `representative` is the least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub members: Vec<Subgroup>,
}

/// Left cosets `gH`, each represented by its least element.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub representatives: Vec<usize>,
    /// `coset_of[g]` is the position of `gH` in `representatives`.
    pub coset_of: Vec<usize>,
}

/// Cached subgroup data of a group.
#[derive(Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    index: HashMap<Vec<usize>, usize>,
    classes: Vec<SubgroupClass>,
    class_of: Vec<usize>,
    class_rep: Vec<usize>,
    conjugator: Vec<usize>,
}

impl SubgroupLattice {
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h.elements()).copied()
    }

    /// Class index of the subgroup at position `k`.
    pub fn class_of(&self, k: usize) -> usize {
        self.class_of[k]
    }

    /// Subgroup index of the representative of class `i`.
    pub fn class_rep(&self, i: usize) -> usize {
        self.class_rep[i]
    }

    /// Least `g` with `g · rep · g⁻¹` equal to the subgroup at position `k`.
    pub fn conjugator(&self, k: usize) -> usize {
        self.conjugator[k]
    }
}

pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<usize>,
    labels: Vec<String>,
    lattice: OnceLock<SubgroupLattice>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Builds a group from a multiplication table, `table[g][h] = g·h`.
    ///
    /// The identity must be element 0. Associativity is checked exhaustively.
    pub fn from_table(
        name: impl Into<String>,
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if order > DEFAULT_ORDER_CAP {
            return Err(Error::cap("group order", DEFAULT_ORDER_CAP, order));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!("row {g} has length {}", row.len())));
            }
            let mut seen = vec![false; order];
            for &x in row {
                if x >= order || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidGroup(format!("row {g} is not a permutation")));
                }
            }
        }
        for h in 0..order {
            let mut seen = vec![false; order];
            for row in &table {
                if std::mem::replace(&mut seen[row[h]], true) {
                    return Err(Error::InvalidGroup(format!("column {h} is not a permutation")));
                }
            }
        }
        for g in 0..order {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == order => l,
            Some(l) => {
                return Err(Error::InvalidGroup(format!(
                    "{} labels for {order} elements",
                    l.len()
                )))
            }
            None => (0..order)
                .map(|g| if g == 0 { "e".to_string() } else { format!("g{g}") })
                .collect(),
        };
        let flat = table.iter().flatten().map(|&x| x as u32).collect();
        Ok(Self::from_flat(name.into(), order, flat, labels))
    }

    /// Closure of a set of permutations of `0..degree`.
    ///
    /// Elements are ordered breadth-first by word length; each new layer is
    /// sorted lexicographically as permutations. Permutations compose right
    /// to left: `(p·q)(i) = p(q(i))`.
    pub fn from_generators(
        name: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidGroup("degree must be positive".into()));
        }
        for (i, p) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if p.len() != degree
                || p
                    .iter()
                    .any(|&x| x >= degree || std::mem::replace(&mut seen[x], true))
            {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} is not a permutation of 0..{degree}"
                )));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut fresh: Vec<Vec<usize>> = Vec::new();
            let mut fresh_set: HashSet<Vec<usize>> = HashSet::new();
            for &x in &layer {
                for s in generators {
                    let p = compose_perm(s, &elements[x]);
                    if !index.contains_key(&p) && fresh_set.insert(p.clone()) {
                        fresh.push(p);
                    }
                }
            }
            fresh.sort();
            layer.clear();
            for p in fresh {
                let id = elements.len();
                if id >= cap {
                    return Err(Error::cap("group order", cap, id + 1));
                }
                index.insert(p.clone(), id);
                elements.push(p);
                layer.push(id);
            }
        }
        let order = elements.len();
        let mut table = Vec::with_capacity(order * order);
        for a in &elements {
            for b in &elements {
                table.push(index[&compose_perm(a, b)] as u32);
            }
        }
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Ok(Self::from_flat(name.into(), order, table, labels))
    }

    fn from_flat(name: String, order: usize, table: Vec<u32>, labels: Vec<String>) -> Self {
        let mut inverses = vec![0; order];
        for g in 0..order {
            for h in 0..order {
                if table[g * order + h] == 0 {
                    inverses[g] = h;
                    break;
                }
            }
        }
        FiniteGroup {
            name,
            order,
            table,
            inverses,
            labels,
            lattice: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h] as usize
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// `g h g⁻¹`
    #[inline]
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverses[g])
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|g| (0..self.order).map(|h| self.mul(g, h)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(vec![0])
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted((0..self.order).collect())
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut elements = vec![0];
        let mut i = 0;
        while i < elements.len() {
            let x = elements[i];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    elements.push(y);
                }
            }
            i += 1;
        }
        elements.sort_unstable();
        Subgroup::from_sorted(elements)
    }

    /// Validates an element list as a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut v = elements.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.iter().any(|&g| g >= self.order) {
            return Err(Error::InvalidSubgroup("element out of range".into()));
        }
        let h = Subgroup::from_sorted(v);
        if !h.contains(0) {
            return Err(Error::InvalidSubgroup("missing the identity".into()));
        }
        for &a in h.elements() {
            if !h.contains(self.inv(a)) {
                return Err(Error::InvalidSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in h.elements() {
                if !h.contains(self.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed under multiplication at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(h)
    }

    /// `g H g⁻¹`
    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut v: Vec<usize> = h.elements().iter().map(|&x| self.conjugate(g, x)).collect();
        v.sort_unstable();
        Subgroup::from_sorted(v)
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice.get_or_init(|| self.build_lattice())
    }

    /// Every subgroup, sorted by `(order, element set)`.
    pub fn all_subgroups(&self) -> &[Subgroup] {
        self.lattice().subgroups()
    }

    pub fn subgroup_classes(&self) -> &[SubgroupClass] {
        self.lattice().classes()
    }

    /// Class index of an arbitrary subgroup.
    pub fn class_index(&self, h: &Subgroup) -> usize {
        let lat = self.lattice();
        lat.class_of(lat.index_of(h).expect("not a subgroup of this group"))
    }

    fn build_lattice(&self) -> SubgroupLattice {
        let subgroups = self.cyclic_extension();
        let index: HashMap<Vec<usize>, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, h)| (h.elements().to_vec(), i))
            .collect();
        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut conjugator = vec![0; subgroups.len()];
        let mut classes = Vec::new();
        let mut class_rep = Vec::new();
        for (k, h) in subgroups.iter().enumerate() {
            if class_of[k] != usize::MAX {
                continue;
            }
            let ci = classes.len();
            let mut members = Vec::new();
            for g in 0..self.order {
                let c = self.conjugate_subgroup(g, h);
                let j = index[c.elements()];
                if class_of[j] == usize::MAX {
                    class_of[j] = ci;
                    conjugator[j] = g;
                    members.push(c);
                }
            }
            members.sort();
            class_rep.push(k);
            classes.push(SubgroupClass {
                representative: h.clone(),
                members,
            });
        }
        SubgroupLattice {
            subgroups,
            index,
            classes,
            class_of,
            class_rep,
            conjugator,
        }
    }

    // Cyclic subgroups first, then repeatedly join a known subgroup with a
    // cyclic one until nothing new appears.
    fn cyclic_extension(&self) -> Vec<Subgroup> {
        let mut cyclic: Vec<(usize, Subgroup)> = Vec::new();
        let mut seen: HashSet<Subgroup> = HashSet::new();
        for g in 0..self.order {
            let c = self.generate(&[g]);
            if seen.insert(c.clone()) {
                cyclic.push((g, c));
            }
        }
        let mut all: Vec<Subgroup> = cyclic.iter().map(|(_, c)| c.clone()).collect();
        let mut frontier = all.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for (g, c) in &cyclic {
                    if c.is_subgroup_of(s) {
                        continue;
                    }
                    let mut gens = s.elements().to_vec();
                    gens.push(*g);
                    let j = self.generate(&gens);
                    if seen.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all.sort();
        all
    }

    /// Subgroups of `h` up to conjugation by elements of `h`, in the same
    /// order convention as [`FiniteGroup::subgroup_classes`].
    pub fn classes_within(&self, h: &Subgroup) -> Vec<SubgroupClass> {
        let inside: Vec<&Subgroup> = self
            .all_subgroups()
            .iter()
            .filter(|s| s.is_subgroup_of(h))
            .collect();
        let mut done: HashSet<&[usize]> = HashSet::new();
        let mut classes = Vec::new();
        for s in inside {
            if done.contains(s.elements()) {
                continue;
            }
            let mut members: Vec<Subgroup> = h
                .elements()
                .iter()
                .map(|&x| self.conjugate_subgroup(x, s))
                .collect();
            members.sort();
            members.dedup();
            for m in &members {
                // members are subgroups of h already present in `inside`
                let key = self.lattice().index_of(m).unwrap();
                done.insert(self.lattice().subgroups()[key].elements());
            }
            classes.push(SubgroupClass {
                representative: s.clone(),
                members,
            });
        }
        classes
    }

    /// Left coset representatives of `h`, least element per coset, ascending.
    /// The first representative is always the identity.
    pub fn cosets(&self, h: &Subgroup) -> Vec<usize> {
        self.coset_table(h).representatives
    }

    pub fn coset_table(&self, h: &Subgroup) -> CosetTable {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut representatives = Vec::with_capacity(self.order / h.order());
        for g in 0..self.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(g);
            for &x in h.elements() {
                coset_of[self.mul(g, x)] = c;
            }
        }
        CosetTable {
            representatives,
            coset_of,
        }
    }

    /// One least-index representative per double coset `K g H`, ascending.
    pub fn double_cosets(&self, k: &Subgroup, h: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &a in k.elements() {
                let ag = self.mul(a, g);
                for &b in h.elements() {
                    seen[self.mul(ag, b)] = true;
                }
            }
        }
        reps
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let elements = (0..self.order)
            .filter(|&g| h.elements().iter().all(|&x| h.contains(self.conjugate(g, x))))
            .collect();
        Subgroup::from_sorted(elements)
    }

    /// `h` relabeled as a group in its own right.
    pub fn subgroup_group(self: &Arc<Self>, h: &Subgroup) -> SubgroupEmbedding {
        SubgroupEmbedding::new(self, h)
    }
}

/// A subgroup `H ≤ G` viewed as a group, with element `i` of the new group
/// sent to the `i`-th smallest element of `H`. The relabeling is monotone,
/// so subgroup orderings agree on both sides.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding {
    pub parent: Arc<FiniteGroup>,
    pub subgroup: Subgroup,
    pub group: Arc<FiniteGroup>,
    from_parent: HashMap<usize, usize>,
}

impl SubgroupEmbedding {
    pub fn new(parent: &Arc<FiniteGroup>, h: &Subgroup) -> Self {
        let elements = h.elements();
        let from_parent: HashMap<usize, usize> =
            elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in elements {
            for &b in elements {
                table.push(from_parent[&parent.mul(a, b)] as u32);
            }
        }
        let labels = elements.iter().map(|&g| parent.label(g).to_string()).collect();
        let name = format!("{}<{}>", parent.name(), n);
        let group = Arc::new(FiniteGroup::from_flat(name, n, table, labels));
        SubgroupEmbedding {
            parent: parent.clone(),
            subgroup: h.clone(),
            group,
            from_parent,
        }
    }

    /// Parent element of a subgroup element.
    pub fn lift(&self, i: usize) -> usize {
        self.subgroup.elements()[i]
    }

    /// Subgroup element of a parent element lying in `H`.
    pub fn lower(&self, g: usize) -> Option<usize> {
        self.from_parent.get(&g).copied()
    }

    pub fn lift_subgroup(&self, k: &Subgroup) -> Subgroup {
        Subgroup::from_sorted(k.elements().iter().map(|&i| self.lift(i)).collect())
    }

    pub fn lower_subgroup(&self, k: &Subgroup) -> Option<Subgroup> {
        let v: Option<Vec<usize>> = k.elements().iter().map(|&g| self.lower(g)).collect();
        v.map(Subgroup::from_sorted)
    }

    /// The lift map as a slice-friendly vector.
    pub fn lift_table(&self) -> Vec<usize> {
        self.subgroup.elements().to_vec()
    }
}

fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    #[test]
    fn generator_closure_orders() {
        let c2 = FiniteGroup::from_generators("C2", 2, &[vec![1, 0]], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(c2.order(), 2);
        let s3 = FiniteGroup::from_generators(
            "S3",
            3,
            &[vec![1, 2, 0], vec![1, 0, 2]],
            DEFAULT_ORDER_CAP,
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        let e = FiniteGroup::from_generators("e", 1, &[], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(e.order(), 1);
    }

    #[test]
    fn generator_closure_respects_cap() {
        let err = FiniteGroup::from_generators("S4", 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], 10);
        assert!(matches!(err, Err(Error::SizeCap { .. })));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table("x", vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table("x", vec![vec![1, 0], vec![0, 1]], None).is_err());
        // Latin square with identity 0 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table("x", t, None).is_err());
    }

    #[test]
    fn table_round_trip() {
        let s3 = groups::symmetric3();
        let t = FiniteGroup::from_table("S3", s3.table(), None).unwrap();
        assert_eq!(t, *s3);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(groups::cyclic(2).all_subgroups().len(), 2);
        let s3 = groups::symmetric3();
        assert_eq!(s3.all_subgroups().len(), 6);
        assert_eq!(s3.subgroup_classes().len(), 4);
        let d4 = groups::dihedral(4);
        assert_eq!(d4.all_subgroups().len(), 10);
        assert_eq!(d4.subgroup_classes().len(), 8);
        assert_eq!(groups::quaternion().subgroup_classes().len(), 6);
    }

    #[test]
    fn class_ordering_is_by_representative() {
        let s3 = groups::symmetric3();
        let orders: Vec<usize> = s3
            .subgroup_classes()
            .iter()
            .map(|c| c.representative.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        for c in s3.subgroup_classes() {
            assert_eq!(c.representative, c.members[0]);
        }
    }

    #[test]
    fn cosets_start_at_identity() {
        let s3 = groups::symmetric3();
        let c2 = s3.subgroup_classes()[1].representative.clone();
        let reps = s3.cosets(&c2);
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[0], 0);
        assert_eq!(s3.cosets(&s3.whole()), vec![0]);
        let c2g = groups::cyclic(2);
        assert_eq!(c2g.cosets(&c2g.trivial_subgroup()), vec![0, 1]);
    }

    #[test]
    fn double_coset_counts() {
        let s3 = groups::symmetric3();
        let c2 = s3.subgroup_classes()[1].representative.clone();
        assert_eq!(s3.double_cosets(&c2, &c2).len(), 2);
        assert_eq!(s3.double_cosets(&s3.whole(), &s3.whole()).len(), 1);
        let e = s3.trivial_subgroup();
        assert_eq!(s3.double_cosets(&e, &e).len(), 6);
    }

    #[test]
    fn normalizers() {
        let s3 = groups::symmetric3();
        let c2 = s3.subgroup_classes()[1].representative.clone();
        let c3 = s3.subgroup_classes()[2].representative.clone();
        assert_eq!(s3.normalizer(&c2).order(), 2);
        assert_eq!(s3.normalizer(&c3).order(), 6);
        assert_eq!(s3.normalizer(&s3.trivial_subgroup()).order(), 6);
    }

    #[test]
    fn embedding_preserves_class_order() {
        let d4 = groups::dihedral(4);
        for h in d4.all_subgroups() {
            let emb = d4.subgroup_group(h);
            let inner: Vec<Subgroup> = emb
                .group
                .subgroup_classes()
                .iter()
                .map(|c| emb.lift_subgroup(&c.representative))
                .collect();
            let within: Vec<Subgroup> = d4
                .classes_within(h)
                .into_iter()
                .map(|c| c.representative)
                .collect();
            assert_eq!(inner, within);
        }
    }

    #[test]
    fn cycle_labels() {
        assert_eq!(cycle_notation(&[1, 2, 0]), "(0 1 2)");
        assert_eq!(cycle_notation(&[0, 1]), "()");
    }
}
