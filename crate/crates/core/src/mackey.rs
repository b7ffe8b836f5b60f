//! Mackey functors as finite data.
//!
//! A functor stores one abelian group per conjugacy class of subgroups, at
//! the class representative `Hᵢ`. The group at any other subgroup `L` is
//! identified with the one at its representative `R` through conjugation by
//! the lattice conjugator `c_L` (`c_L R c_L⁻¹ = L`). Stored data:
//!
//! * `res[i][k]`, `tr[i][k]` for every subgroup `S_k ≤ Hᵢ`, in the
//!   coordinates of the representative of `S_k`;
//! * `con[i][t]` for a transversal of `N(Hᵢ)/Hᵢ`.
//!
//! All remaining restrictions, transfers and conjugations are derived.
//! Matrices act on column vectors; rows index the target coordinates.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::abelian::{self, FgAbelianGroup};
use crate::burnside::burnside_class;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, SubgroupEmbedding};
use crate::gset::{induce, GSet};
use crate::matrix::Matrix;
use crate::report::{Check, Report};

/// Subgroup bookkeeping shared by every Mackey functor on a group.
#[derive(Debug)]
pub struct Frame {
    group: Arc<FiniteGroup>,
    reps: Vec<usize>,
    below: Vec<Vec<usize>>,
    weyl: Vec<Vec<usize>>,
    weyl_of: Vec<HashMap<usize, usize>>,
}

impl Frame {
    pub fn new(group: &Arc<FiniteGroup>) -> Self {
        let lat = group.lattice();
        let subs = lat.subgroups();
        let n = lat.classes().len();
        let mut reps = Vec::with_capacity(n);
        let mut below = Vec::with_capacity(n);
        let mut weyl = Vec::with_capacity(n);
        let mut weyl_of = Vec::with_capacity(n);
        for i in 0..n {
            let r = lat.class_rep(i);
            let h = &subs[r];
            reps.push(r);
            below.push(
                (0..subs.len())
                    .filter(|&k| subs[k].is_subgroup_of(h))
                    .collect(),
            );
            let norm = group.normalizer(h);
            let table = group.coset_table(h);
            let mut trans = Vec::new();
            let mut by_coset: HashMap<usize, usize> = HashMap::new();
            let mut of = HashMap::new();
            for &x in norm.elements() {
                let c = table.coset_of[x];
                let t = *by_coset.entry(c).or_insert_with(|| {
                    trans.push(x);
                    trans.len() - 1
                });
                of.insert(x, t);
            }
            weyl.push(trans);
            weyl_of.push(of);
        }
        Frame {
            group: group.clone(),
            reps,
            below,
            weyl,
            weyl_of,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> usize {
        self.reps.len()
    }

    /// Subgroup index of the representative of class `i`.
    pub fn rep(&self, i: usize) -> usize {
        self.reps[i]
    }

    /// Indices of the subgroups of `Hᵢ`.
    pub fn below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }

    /// Least element of each coset of `Hᵢ` in its normalizer, ascending.
    pub fn weyl_transversal(&self, i: usize) -> &[usize] {
        &self.weyl[i]
    }

    /// Transversal position of the coset of `n ∈ N(Hᵢ)`.
    pub fn weyl_index(&self, i: usize, n: usize) -> Option<usize> {
        self.weyl_of[i].get(&n).copied()
    }

    pub fn subgroup(&self, k: usize) -> &Subgroup {
        &self.group.lattice().subgroups()[k]
    }

    pub fn index(&self, h: &Subgroup) -> usize {
        self.group
            .lattice()
            .index_of(h)
            .expect("subgroup of the frame's group")
    }

    pub fn class_of(&self, k: usize) -> usize {
        self.group.lattice().class_of(k)
    }

    pub fn conjugator(&self, k: usize) -> usize {
        self.group.lattice().conjugator(k)
    }

    /// Index of `g S_k g⁻¹`.
    pub fn conjugate(&self, g: usize, k: usize) -> usize {
        self.index(&self.group.conjugate_subgroup(g, self.subgroup(k)))
    }

    /// Element `n ∈ N(R)` realizing `c_g: M(S_k) → M(g S_k g⁻¹)` in
    /// representative coordinates, and the class of `S_k`.
    pub fn reduce_conjugation(&self, g: usize, k: usize) -> (usize, usize) {
        let grp = &self.group;
        let k2 = self.conjugate(g, k);
        let n = grp.mul(grp.mul(grp.inv(self.conjugator(k2)), g), self.conjugator(k));
        let i = self.class_of(k);
        (i, self.weyl_index(i, n).expect("reduced conjugator normalizes the representative"))
    }
}

/// Representatives of `K\H/L` with `x ∈ H`, least element first.
pub fn double_cosets_within(g: &FiniteGroup, h: &Subgroup, k: &Subgroup, l: &Subgroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for &x in h.elements() {
        if seen[x] {
            continue;
        }
        reps.push(x);
        for &a in k.elements() {
            let ax = g.mul(a, x);
            for &b in l.elements() {
                seen[g.mul(ax, b)] = true;
            }
        }
    }
    reps
}

#[derive(Clone, Debug)]
pub struct MackeyFunctor {
    frame: Arc<Frame>,
    levels: Vec<FgAbelianGroup>,
    res: Vec<BTreeMap<usize, Matrix>>,
    tr: Vec<BTreeMap<usize, Matrix>>,
    con: Vec<Vec<Matrix>>,
}

impl MackeyFunctor {
    /// Checks shapes and well-definedness on torsion; axioms are checked by
    /// [`MackeyFunctor::validate`].
    pub fn new(
        frame: Arc<Frame>,
        levels: Vec<FgAbelianGroup>,
        res: Vec<BTreeMap<usize, Matrix>>,
        tr: Vec<BTreeMap<usize, Matrix>>,
        con: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        let n = frame.classes();
        if levels.len() != n || res.len() != n || tr.len() != n || con.len() != n {
            return Err(Error::Structural(format!("expected data for {n} subgroup classes")));
        }
        for l in &levels {
            l.validate()?;
        }
        let m = MackeyFunctor {
            frame,
            levels,
            res,
            tr,
            con,
        };
        m.check_shapes()?;
        Ok(m)
    }

    fn check_shapes(&self) -> Result<()> {
        let f = &self.frame;
        for i in 0..f.classes() {
            let below = f.below(i);
            for (name, maps) in [("res", &self.res[i]), ("tr", &self.tr[i])] {
                if maps.keys().copied().collect::<Vec<_>>() != below {
                    return Err(Error::Structural(format!(
                        "{name} at class {i} must cover exactly the subgroups of the representative"
                    )));
                }
            }
            for &k in below {
                let j = f.class_of(k);
                let (src, dst) = (&self.levels[i], &self.levels[j]);
                self.expect_map(&self.res[i][&k], src, dst, || format!("res[{i}][{k}]"))?;
                self.expect_map(&self.tr[i][&k], dst, src, || format!("tr[{i}][{k}]"))?;
            }
            if self.con[i].len() != f.weyl_transversal(i).len() {
                return Err(Error::Structural(format!(
                    "con at class {i} needs {} matrices",
                    f.weyl_transversal(i).len()
                )));
            }
            for (t, m) in self.con[i].iter().enumerate() {
                let l = &self.levels[i];
                self.expect_map(m, l, l, || format!("con[{i}][{t}]"))?;
            }
        }
        Ok(())
    }

    fn expect_map(
        &self,
        m: &Matrix,
        src: &FgAbelianGroup,
        dst: &FgAbelianGroup,
        name: impl Fn() -> String,
    ) -> Result<()> {
        if m.shape() != (dst.dim(), src.dim()) {
            return Err(Error::Structural(format!(
                "{} has shape {:?}, expected {:?}",
                name(),
                m.shape(),
                (dst.dim(), src.dim())
            )));
        }
        if !abelian::is_well_defined(m, src, dst) {
            return Err(Error::Structural(format!("{} does not respect torsion", name())));
        }
        Ok(())
    }

    /// The functor with every level zero.
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        let frame = Arc::new(Frame::new(group));
        let n = frame.classes();
        let empty = Matrix::zeros(0, 0);
        let res: Vec<BTreeMap<usize, Matrix>> = (0..n)
            .map(|i| frame.below(i).iter().map(|&k| (k, empty.clone())).collect())
            .collect();
        let con = (0..n)
            .map(|i| vec![empty.clone(); frame.weyl_transversal(i).len()])
            .collect();
        MackeyFunctor {
            levels: vec![FgAbelianGroup::default(); n],
            tr: res.clone(),
            res,
            con,
            frame,
        }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.frame.group()
    }

    pub fn levels(&self) -> &[FgAbelianGroup] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &FgAbelianGroup {
        &self.levels[i]
    }

    /// Stored `res^{Hᵢ}_{S_k}`.
    pub fn res(&self, i: usize, k: usize) -> &Matrix {
        &self.res[i][&k]
    }

    /// Stored `tr^{Hᵢ}_{S_k}`.
    pub fn tr(&self, i: usize, k: usize) -> &Matrix {
        &self.tr[i][&k]
    }

    pub fn con(&self, i: usize, t: usize) -> &Matrix {
        &self.con[i][t]
    }

    /// `c_g: M(S_k) → M(g S_k g⁻¹)` in representative coordinates.
    pub fn con_map(&self, g: usize, k: usize) -> &Matrix {
        let (i, t) = self.frame.reduce_conjugation(g, k);
        &self.con[i][t]
    }

    /// `res^{S_j}_{S_k}` for any `S_k ≤ S_j`.
    pub fn restriction(&self, j: usize, k: usize) -> Result<Matrix> {
        let f = &self.frame;
        let i = f.class_of(j);
        let c = f.conjugator(j);
        let k2 = f.conjugate(f.group().inv(c), k);
        self.con_map(c, k2).mul(self.stored(&self.res, i, k2, "res")?)
    }

    /// `tr^{S_j}_{S_k}` for any `S_k ≤ S_j`.
    pub fn transfer(&self, j: usize, k: usize) -> Result<Matrix> {
        let f = &self.frame;
        let i = f.class_of(j);
        let c = f.conjugator(j);
        let ci = f.group().inv(c);
        let k2 = f.conjugate(ci, k);
        self.stored(&self.tr, i, k2, "tr")?.mul(self.con_map(ci, k))
    }

    fn stored<'a>(
        &self,
        maps: &'a [BTreeMap<usize, Matrix>],
        i: usize,
        k: usize,
        name: &str,
    ) -> Result<&'a Matrix> {
        maps[i].get(&k).ok_or_else(|| {
            Error::Precondition(format!("{name}: subgroup {k} is not below class {i}"))
        })
    }

    fn same(&self, target_class: usize, a: &Matrix, b: &Matrix) -> bool {
        let l = &self.levels[target_class];
        a.shape() == b.shape() && l.reduce_matrix(a) == l.reduce_matrix(b)
    }

    /// Checks every Mackey axiom and reports the first counterexample for
    /// each.
    pub fn validate(&self) -> Result<Report> {
        self.check_shapes()?;
        let f = self.frame.clone();
        let g = f.group().clone();
        let mut report = Report::default();

        let mut identity = Check::new("identity");
        for i in 0..f.classes() {
            let r = f.rep(i);
            let id = Matrix::identity(self.levels[i].dim());
            for (name, m) in [("res", self.res(i, r)), ("tr", self.tr(i, r)), ("con", self.con(i, 0))] {
                identity.record(self.same(i, m, &id), || {
                    json!({"class": i, "map": name, "matrix": m})
                });
            }
        }
        report.push(identity);

        let mut weyl = Check::new("conjugation");
        for i in 0..f.classes() {
            let trans = f.weyl_transversal(i);
            for (a, &x) in trans.iter().enumerate() {
                for (b, &y) in trans.iter().enumerate() {
                    let ab = f.weyl_index(i, g.mul(x, y)).expect("normalizer is a group");
                    let lhs = self.con(i, a).mul(self.con(i, b))?;
                    weyl.record(self.same(i, &lhs, self.con(i, ab)), || {
                        json!({"class": i, "elements": [x, y], "product": lhs, "expected": self.con(i, ab)})
                    });
                }
            }
        }
        report.push(weyl);

        let mut equi = Check::new("conjugation_equivariance");
        for i in 0..f.classes() {
            let r = f.rep(i);
            let norm = g.normalizer(f.subgroup(r));
            for &n in norm.elements() {
                let cn = self.con_map(n, r);
                for &k in f.below(i) {
                    let k2 = f.conjugate(n, k);
                    let j = f.class_of(k);
                    let lhs = self.con_map(n, k).mul(self.res(i, k))?;
                    let rhs = self.res(i, k2).mul(cn)?;
                    equi.record(self.same(j, &lhs, &rhs), || {
                        json!({"class": i, "element": n, "subgroup": k, "map": "res", "lhs": lhs, "rhs": rhs})
                    });
                    let lhs = cn.mul(self.tr(i, k))?;
                    let rhs = self.tr(i, k2).mul(self.con_map(n, k))?;
                    equi.record(self.same(i, &lhs, &rhs), || {
                        json!({"class": i, "element": n, "subgroup": k, "map": "tr", "lhs": lhs, "rhs": rhs})
                    });
                }
            }
        }
        report.push(equi);

        let mut tres = Check::new("transitivity_res");
        let mut ttr = Check::new("transitivity_tr");
        for i in 0..f.classes() {
            for &l in f.below(i) {
                for &k in f.below(i) {
                    if !f.subgroup(k).is_subgroup_of(f.subgroup(l)) {
                        continue;
                    }
                    let j = f.class_of(k);
                    let lhs = self.restriction(l, k)?.mul(self.res(i, l))?;
                    tres.record(self.same(j, &lhs, self.res(i, k)), || {
                        json!({"class": i, "chain": [k, l], "composite": lhs, "direct": self.res(i, k)})
                    });
                    let lhs = self.tr(i, l).mul(&self.transfer(l, k)?)?;
                    ttr.record(self.same(i, &lhs, self.tr(i, k)), || {
                        json!({"class": i, "chain": [k, l], "composite": lhs, "direct": self.tr(i, k)})
                    });
                }
            }
        }
        report.push(tres);
        report.push(ttr);

        let mut dc = Check::new("double_coset");
        for i in 0..f.classes() {
            let h = f.subgroup(f.rep(i));
            for &k in f.below(i) {
                for &l in f.below(i) {
                    let lhs = self.res(i, k).mul(self.tr(i, l))?;
                    let rhs = self.double_coset_sum(h, k, l)?;
                    dc.record(self.same(f.class_of(k), &lhs, &rhs), || {
                        json!({"class": i, "subgroups": [k, l], "res_tr": lhs, "double_coset_sum": rhs})
                    });
                }
            }
        }
        report.push(dc);
        Ok(report)
    }

    /// `Σ_{x ∈ K\H/L} tr^K_{K∩xLx⁻¹} c_x res^L_{x⁻¹Kx∩L}` for `K = S_k`,
    /// `L = S_l` inside `H`.
    pub fn double_coset_sum(&self, h: &Subgroup, k: usize, l: usize) -> Result<Matrix> {
        let f = &self.frame;
        let g = f.group();
        let (sk, sl) = (f.subgroup(k), f.subgroup(l));
        let mut sum = Matrix::zeros(
            self.levels[f.class_of(k)].dim(),
            self.levels[f.class_of(l)].dim(),
        );
        for (x, a, b) in double_coset_terms(g, h, sk, sl) {
            let (a, b) = (f.index(&a), f.index(&b));
            let term = self
                .transfer(k, a)?
                .mul(self.con_map(x, b))?
                .mul(&self.restriction(l, b)?)?;
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }

    pub fn to_data(&self) -> MackeyData {
        let f = &self.frame;
        let mut data = MackeyData {
            group: f.group().name().to_string(),
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(i, l)| LevelData {
                    class: i,
                    free_rank: l.free_rank,
                    torsion: l.torsion.clone(),
                })
                .collect(),
            res: Vec::new(),
            tr: Vec::new(),
            con: Vec::new(),
        };
        for i in 0..f.classes() {
            for (&k, m) in &self.res[i] {
                data.res.push(MapData {
                    class: i,
                    subgroup: k,
                    matrix: m.clone(),
                });
            }
            for (&k, m) in &self.tr[i] {
                data.tr.push(MapData {
                    class: i,
                    subgroup: k,
                    matrix: m.clone(),
                });
            }
            for (t, m) in self.con[i].iter().enumerate() {
                data.con.push(ConData {
                    class: i,
                    element: f.weyl_transversal(i)[t],
                    matrix: m.clone(),
                });
            }
        }
        data
    }

    pub fn from_data(group: &Arc<FiniteGroup>, data: &MackeyData) -> Result<Self> {
        let frame = Arc::new(Frame::new(group));
        let n = frame.classes();
        let mut levels = vec![None; n];
        for l in &data.levels {
            let slot = levels
                .get_mut(l.class)
                .ok_or_else(|| Error::Structural(format!("level for unknown class {}", l.class)))?;
            *slot = Some(FgAbelianGroup::new(l.free_rank, l.torsion.clone())?);
        }
        let levels = levels
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.ok_or_else(|| Error::Structural(format!("missing level {i}"))))
            .collect::<Result<Vec<_>>>()?;
        let collect = |maps: &[MapData]| -> Result<Vec<BTreeMap<usize, Matrix>>> {
            let mut out = vec![BTreeMap::new(); n];
            for m in maps {
                if m.class >= n {
                    return Err(Error::Structural(format!("map for unknown class {}", m.class)));
                }
                out[m.class].insert(m.subgroup, m.matrix.clone());
            }
            Ok(out)
        };
        let res = collect(&data.res)?;
        let tr = collect(&data.tr)?;
        let mut con: Vec<Vec<Option<Matrix>>> = (0..n)
            .map(|i| vec![None; frame.weyl_transversal(i).len()])
            .collect();
        for c in &data.con {
            let t = (c.class < n)
                .then(|| frame.weyl_index(c.class, c.element))
                .flatten()
                .ok_or_else(|| {
                    Error::Structural(format!(
                        "element {} does not normalize class {}",
                        c.element, c.class
                    ))
                })?;
            con[c.class][t] = Some(c.matrix.clone());
        }
        let con = con
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Structural(format!("missing conjugation at class {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, levels, res, tr, con)
    }

    /// Replaces one stored transfer; used to build corrupted fixtures.
    pub fn with_transfer(&self, i: usize, k: usize, m: Matrix) -> Result<Self> {
        let mut out = self.clone();
        *out.tr[i]
            .get_mut(&k)
            .ok_or_else(|| Error::Precondition("no such transfer".into()))? = m;
        out.check_shapes()?;
        Ok(out)
    }

    /// Replaces one stored restriction.
    pub fn with_restriction(&self, i: usize, k: usize, m: Matrix) -> Result<Self> {
        let mut out = self.clone();
        *out.res[i]
            .get_mut(&k)
            .ok_or_else(|| Error::Precondition("no such restriction".into()))? = m;
        out.check_shapes()?;
        Ok(out)
    }
}

/// Terms of the double coset formula for `K, L ≤ H`: each
/// `(x, K ∩ xLx⁻¹, x⁻¹Kx ∩ L)` for `x` running over `K\H/L`.
pub fn double_coset_terms(
    g: &FiniteGroup,
    h: &Subgroup,
    k: &Subgroup,
    l: &Subgroup,
) -> Vec<(usize, Subgroup, Subgroup)> {
    double_cosets_within(g, h, k, l)
        .into_iter()
        .map(|x| {
            let a = k.intersection(&g.conjugate_subgroup(x, l));
            let b = g.conjugate_subgroup(g.inv(x), k).intersection(l);
            (x, a, b)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelData {
    pub class: usize,
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapData {
    pub class: usize,
    pub subgroup: usize,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConData {
    pub class: usize,
    pub element: usize,
    pub matrix: Matrix,
}

/// Serialized form of a Mackey functor; subgroups are referenced by their
/// index in the group's sorted subgroup list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MackeyData {
    pub group: String,
    pub levels: Vec<LevelData>,
    pub res: Vec<MapData>,
    pub tr: Vec<MapData>,
    pub con: Vec<ConData>,
}

/// Relabels a subgroup of `Hᵢ` as a subgroup of the group `emb.group`.
fn inner_subgroup(emb: &SubgroupEmbedding, s: &Subgroup) -> Subgroup {
    emb.lower_subgroup(s).expect("subgroup lies inside the embedding")
}

/// The Burnside Mackey functor: `A(H)` at each level, with restriction of
/// H-sets, induction, and conjugation transport, all computed on actual
/// G-sets.
pub fn burnside_mackey(group: &Arc<FiniteGroup>) -> Result<MackeyFunctor> {
    let frame = Arc::new(Frame::new(group));
    let g = group.as_ref();
    let n = frame.classes();
    let embs: Vec<SubgroupEmbedding> = (0..n)
        .map(|i| group.subgroup_group(frame.subgroup(frame.rep(i))))
        .collect();
    let levels: Vec<FgAbelianGroup> = embs
        .iter()
        .map(|e| FgAbelianGroup::free(e.group.subgroup_classes().len()))
        .collect();
    let orbits = |e: &SubgroupEmbedding| -> Vec<GSet> {
        e.group
            .subgroup_classes()
            .iter()
            .map(|c| GSet::coset_space(&e.group, &c.representative))
            .collect()
    };
    let mut res = vec![BTreeMap::new(); n];
    let mut tr = vec![BTreeMap::new(); n];
    let mut con = vec![Vec::new(); n];
    for i in 0..n {
        let hi = &embs[i];
        let basis_i = orbits(hi);
        for &k in frame.below(i) {
            let j = frame.class_of(k);
            let er = &embs[j];
            let c = frame.conjugator(k);
            let ci = g.inv(c);
            // R → Hᵢ, r ↦ c r c⁻¹
            let into_h: Vec<usize> = (0..er.group.order())
                .map(|r| hi.lower(g.conjugate(c, er.lift(r))).expect("c R c⁻¹ ≤ Hᵢ"))
                .collect();
            let cols: Vec<Vec<i64>> = basis_i
                .iter()
                .map(|x| burnside_class(&x.along_homomorphism(&er.group, &into_h)).coefficients)
                .collect();
            res[i].insert(k, Matrix::from_columns(&cols, levels[j].dim())?);

            // R-set → S_k-set via s ↦ c⁻¹ s c, then induce to Hᵢ
            let t = inner_subgroup(hi, frame.subgroup(k));
            let et = hi.group.subgroup_group(&t);
            let into_r: Vec<usize> = (0..et.group.order())
                .map(|s| {
                    let in_g = hi.lift(et.lift(s));
                    er.lower(g.conjugate(ci, in_g)).expect("c⁻¹ S_k c = R")
                })
                .collect();
            let cols: Vec<Vec<i64>> = orbits(er)
                .iter()
                .map(|y| {
                    let ys = y.along_homomorphism(&et.group, &into_r);
                    burnside_class(&induce(&ys, &et).0).coefficients
                })
                .collect();
            tr[i].insert(k, Matrix::from_columns(&cols, levels[i].dim())?);
        }
        for &x in frame.weyl_transversal(i) {
            let xi = g.inv(x);
            // h ↦ x⁻¹ h x
            let twist: Vec<usize> = (0..hi.group.order())
                .map(|h| hi.lower(g.conjugate(xi, hi.lift(h))).expect("x normalizes Hᵢ"))
                .collect();
            let cols: Vec<Vec<i64>> = basis_i
                .iter()
                .map(|y| burnside_class(&y.along_homomorphism(&hi.group, &twist)).coefficients)
                .collect();
            con[i].push(Matrix::from_columns(&cols, levels[i].dim())?);
        }
    }
    MackeyFunctor::new(frame, levels, res, tr, con)
}

/// Partial data from which a Mackey functor is completed: restrictions and
/// transfers along some subgroups of each representative, and conjugation
/// matrices for some elements of each normalizer.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct OrbitData {
    pub levels: Vec<FgAbelianGroup>,
    pub res: Vec<Vec<(usize, Matrix)>>,
    pub tr: Vec<Vec<(usize, Matrix)>>,
    pub con: Vec<Vec<(usize, Matrix)>>,
}

impl OrbitData {
    /// The generating part of an existing functor: restrictions and
    /// transfers to maximal subgroups only (one per conjugacy class inside
    /// the representative), conjugations for the whole Weyl transversal.
    pub fn maximal_part(m: &MackeyFunctor) -> Self {
        let f = m.frame();
        let g = f.group();
        let n = f.classes();
        let mut data = OrbitData {
            levels: m.levels().to_vec(),
            res: vec![Vec::new(); n],
            tr: vec![Vec::new(); n],
            con: vec![Vec::new(); n],
        };
        for i in 0..n {
            let h = f.subgroup(f.rep(i));
            for c in g.classes_within(h) {
                let s = &c.representative;
                let maximal = s != h
                    && f.below(i).iter().all(|&k| {
                        let t = f.subgroup(k);
                        t == h || t == s || !s.is_subgroup_of(t)
                    });
                if maximal {
                    let k = f.index(s);
                    data.res[i].push((k, m.res(i, k).clone()));
                    data.tr[i].push((k, m.tr(i, k).clone()));
                }
            }
            for (t, &x) in f.weyl_transversal(i).iter().enumerate() {
                data.con[i].push((x, m.con(i, t).clone()));
            }
        }
        data
    }
}

/// Completes orbit data to a full Mackey functor and validates it.
///
/// Conjugations are closed under products, restrictions and transfers are
/// spread over conjugates inside each representative and then composed down
/// subgroup chains. Inconsistent or insufficient data is a validation error
/// carrying a JSON witness.
pub fn mackey_from_orbit_data(group: &Arc<FiniteGroup>, data: &OrbitData) -> Result<MackeyFunctor> {
    let frame = Arc::new(Frame::new(group));
    let g = group.as_ref();
    let n = frame.classes();
    if data.levels.len() != n || data.res.len() != n || data.tr.len() != n || data.con.len() != n {
        return Err(Error::Structural(format!("expected data for {n} subgroup classes")));
    }
    // conjugations: breadth-first closure inside each Weyl group
    let mut con: Vec<Vec<Matrix>> = Vec::with_capacity(n);
    for i in 0..n {
        let trans = frame.weyl_transversal(i);
        let dim = data.levels[i].dim();
        let mut known: Vec<Option<Matrix>> = vec![None; trans.len()];
        known[0] = Some(Matrix::identity(dim));
        let mut gens = Vec::new();
        for (x, m) in &data.con[i] {
            let t = frame.weyl_index(i, *x).ok_or_else(|| {
                Error::Structural(format!("element {x} does not normalize class {i}"))
            })?;
            gens.push((t, m.clone()));
        }
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (b, mb) in &gens {
                let ab = frame
                    .weyl_index(i, g.mul(trans[a], trans[*b]))
                    .expect("normalizer is a group");
                let m = known[a].as_ref().unwrap().mul(mb)?;
                match &known[ab] {
                    Some(prev) => {
                        let l = &data.levels[i];
                        if l.reduce_matrix(prev) != l.reduce_matrix(&m) {
                            return Err(Error::Validation(
                                json!({"axiom": "conjugation", "class": i, "element": trans[ab],
                                       "first": prev, "second": m})
                                .to_string(),
                            ));
                        }
                    }
                    None => {
                        known[ab] = Some(m);
                        queue.push_back(ab);
                    }
                }
            }
        }
        let row = known
            .into_iter()
            .enumerate()
            .map(|(t, m)| {
                m.ok_or_else(|| {
                    Error::Validation(
                        json!({"axiom": "conjugation", "class": i, "unreached": trans[t]}).to_string(),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        con.push(row);
    }
    let mut res: Vec<BTreeMap<usize, Matrix>> = vec![BTreeMap::new(); n];
    let mut tr: Vec<BTreeMap<usize, Matrix>> = vec![BTreeMap::new(); n];
    let mut partial = MackeyFunctor {
        frame: frame.clone(),
        levels: data.levels.clone(),
        res: Vec::new(),
        tr: Vec::new(),
        con,
    };
    for i in 0..n {
        let r = frame.rep(i);
        let h = frame.subgroup(r).clone();
        let dim = data.levels[i].dim();
        res[i].insert(r, Matrix::identity(dim));
        tr[i].insert(r, Matrix::identity(dim));
        for (k, m) in &data.res[i] {
            res[i].insert(*k, m.clone());
        }
        for (k, m) in &data.tr[i] {
            tr[i].insert(*k, m.clone());
        }
        partial.res = res.clone();
        partial.tr = tr.clone();
        loop {
            let mut changed = false;
            for &k in frame.below(i) {
                if res[i].contains_key(&k) && tr[i].contains_key(&k) {
                    continue;
                }
                // conjugate inside Hᵢ of a known subgroup
                let via_conj = h.elements().iter().find_map(|&x| {
                    let k0 = frame.conjugate(g.inv(x), k);
                    (res[i].contains_key(&k0) && tr[i].contains_key(&k0)).then_some((x, k0))
                });
                if let Some((x, k0)) = via_conj {
                    let rm = partial.con_map(x, k0).mul(&res[i][&k0])?;
                    let tm = tr[i][&k0].mul(partial.con_map(g.inv(x), k))?;
                    res[i].insert(k, rm);
                    tr[i].insert(k, tm);
                    changed = true;
                } else {
                    // through a known intermediate subgroup
                    let sk = frame.subgroup(k).clone();
                    let via = res[i].keys().copied().find(|&l| {
                        l != k
                            && l != r
                            && tr[i].contains_key(&l)
                            && sk.is_subgroup_of(frame.subgroup(l))
                    });
                    if let Some(l) = via {
                        let rm = partial.restriction(l, k)?.mul(&res[i][&l])?;
                        let tm = tr[i][&l].mul(&partial.transfer(l, k)?)?;
                        res[i].insert(k, rm);
                        tr[i].insert(k, tm);
                        changed = true;
                    }
                }
                partial.res = res.clone();
                partial.tr = tr.clone();
            }
            if !changed {
                break;
            }
        }
        if let Some(&k) = frame.below(i).iter().find(|k| !res[i].contains_key(k)) {
            return Err(Error::Validation(
                json!({"axiom": "completeness", "class": i, "missing_subgroup": k}).to_string(),
            ));
        }
    }
    let m = MackeyFunctor::new(frame, partial.levels, res, tr, partial.con)?;
    let report = m.validate()?;
    if !report.passed() {
        let first = report.checks.iter().find(|c| !c.passed()).unwrap();
        return Err(Error::Validation(serde_json::to_string(first).unwrap()));
    }
    Ok(m)
}

/// Levelwise maps `φᵢ: M(Hᵢ) → N(Hᵢ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MackeyMorphism {
    pub maps: Vec<Matrix>,
}

impl MackeyMorphism {
    pub fn identity(m: &MackeyFunctor) -> Self {
        MackeyMorphism {
            maps: m.levels().iter().map(|l| Matrix::identity(l.dim())).collect(),
        }
    }

    /// Checks that every level map commutes with restriction, transfer and
    /// conjugation.
    pub fn check(&self, source: &MackeyFunctor, target: &MackeyFunctor) -> Result<Report> {
        let f = source.frame();
        if target.frame().group() != f.group() {
            return Err(Error::Precondition("functors over different groups".into()));
        }
        if self.maps.len() != f.classes() {
            return Err(Error::Structural("one map per level is required".into()));
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.shape() != (target.level(i).dim(), source.level(i).dim()) {
                return Err(Error::Structural(format!("level map {i} has the wrong shape")));
            }
        }
        let mut report = Report::default();
        let mut res = Check::new("commutes_res");
        let mut tr = Check::new("commutes_tr");
        let mut con = Check::new("commutes_con");
        for i in 0..f.classes() {
            for &k in f.below(i) {
                let j = f.class_of(k);
                let lhs = self.maps[j].mul(source.res(i, k))?;
                let rhs = target.res(i, k).mul(&self.maps[i])?;
                res.record(target.same(j, &lhs, &rhs), || {
                    json!({"class": i, "subgroup": k, "lhs": lhs, "rhs": rhs})
                });
                let lhs = self.maps[i].mul(source.tr(i, k))?;
                let rhs = target.tr(i, k).mul(&self.maps[j])?;
                tr.record(target.same(i, &lhs, &rhs), || {
                    json!({"class": i, "subgroup": k, "lhs": lhs, "rhs": rhs})
                });
            }
            for t in 0..f.weyl_transversal(i).len() {
                let lhs = self.maps[i].mul(source.con(i, t))?;
                let rhs = target.con(i, t).mul(&self.maps[i])?;
                con.record(target.same(i, &lhs, &rhs), || {
                    json!({"class": i, "element": f.weyl_transversal(i)[t], "lhs": lhs, "rhs": rhs})
                });
            }
        }
        report.push(res);
        report.push(tr);
        report.push(con);
        Ok(report)
    }
}

/// Whether `φ` commutes with all structure maps and is invertible at every
/// level.
pub fn is_isomorphism(
    phi: &MackeyMorphism,
    source: &MackeyFunctor,
    target: &MackeyFunctor,
) -> Result<bool> {
    if !phi.check(source, target)?.passed() {
        return Ok(false);
    }
    for (i, m) in phi.maps.iter().enumerate() {
        if !abelian::is_isomorphism(m, source.level(i), target.level(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    #[test]
    fn burnside_c2_matrices() {
        let c2 = groups::cyclic(2);
        let m = burnside_mackey(&c2).unwrap();
        assert_eq!(m.level(0).free_rank, 1);
        assert_eq!(m.level(1).free_rank, 2);
        // basis ([C2/e], [C2/C2]) in ascending class order
        assert_eq!(m.res(1, 0).to_rows(), vec![vec![2, 1]]);
        assert_eq!(m.tr(1, 0).to_rows(), vec![vec![1], vec![0]]);
        let rt = m.res(1, 0).mul(m.tr(1, 0)).unwrap();
        assert_eq!(rt.to_rows(), vec![vec![2]]);
    }

    #[test]
    fn burnside_validates_on_small_groups() {
        for g in [groups::trivial(), groups::cyclic(2), groups::symmetric3(), groups::dihedral(4)] {
            let r = burnside_mackey(&g).unwrap().validate().unwrap();
            assert!(r.passed(), "{}: {}", g.name(), r.render());
        }
    }

    #[test]
    fn zero_functor_validates() {
        let r = MackeyFunctor::zero(&groups::symmetric3()).validate().unwrap();
        assert!(r.passed());
    }

    #[test]
    fn doubled_transfer_breaks_only_double_coset() {
        let c2 = groups::cyclic(2);
        let m = burnside_mackey(&c2).unwrap();
        let bad = m
            .with_transfer(1, 0, m.tr(1, 0).scale(2).unwrap())
            .unwrap();
        let r = bad.validate().unwrap();
        assert_eq!(r.failed(), vec!["double_coset"]);
        let w = r.get("double_coset").unwrap().witness.as_ref().unwrap();
        assert_eq!(w["subgroups"], json!([0, 0]));
    }

    #[test]
    fn orbit_data_round_trip() {
        for g in [groups::cyclic(4), groups::symmetric3(), groups::klein_four()] {
            let m = burnside_mackey(&g).unwrap();
            let data = OrbitData::maximal_part(&m);
            let back = mackey_from_orbit_data(&g, &data).unwrap();
            assert_eq!(back.to_data(), m.to_data());
        }
    }

    #[test]
    fn json_round_trip() {
        let g = groups::symmetric3();
        let m = burnside_mackey(&g).unwrap();
        let s = serde_json::to_string(&m.to_data()).unwrap();
        let data: MackeyData = serde_json::from_str(&s).unwrap();
        let back = MackeyFunctor::from_data(&g, &data).unwrap();
        assert_eq!(back.to_data(), m.to_data());
    }

    #[test]
    fn identity_morphism_is_iso_and_doubling_is_not() {
        let g = groups::cyclic(2);
        let m = burnside_mackey(&g).unwrap();
        let id = MackeyMorphism::identity(&m);
        assert!(is_isomorphism(&id, &m, &m).unwrap());
        let twice = MackeyMorphism {
            maps: id.maps.iter().map(|x| x.scale(2).unwrap()).collect(),
        };
        assert!(!is_isomorphism(&twice, &m, &m).unwrap());
    }
}
