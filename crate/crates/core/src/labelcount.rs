//! Admissible-labelling counts for the graded-vector-space data: finite groups
//! C and B, and a transitive (C × B^op)-set M.

use crate::bracket::{invariant, BracketConfig, Normalized};
use crate::diagram::{Diagram, Kind};
use crate::error::{Error, Result};
use crate::group::{GSet, Group, GroupRep};
use crate::hopf::{AlgebraRep, HopfAlgebra};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::triplet::{Color, HopfTriplet};
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct WeakConfig {
    pub c: Group,
    pub b: Group,
    /// A transitive set over K = C × B^op. K-elements are indexed `c·|B| + b`.
    pub m: GSet,
}

impl WeakConfig {
    pub fn new(c: Group, b: Group, m: GSet) -> Result<WeakConfig> {
        if m.group().order() != c.order() * b.order() {
            return Err(Error::Incompatible(format!(
                "M is a set over a group of order {}, expected |C|·|B| = {}",
                m.group().order(),
                c.order() * b.order()
            )));
        }
        if !m.is_transitive() {
            return Err(Error::Incompatible("the action on M is not transitive".into()));
        }
        Ok(WeakConfig { c, b, m })
    }

    pub fn k_group(c: &Group, b: &Group) -> Arc<Group> {
        Arc::new(Group::product(c, &b.opposite()))
    }

    /// M a single point.
    pub fn point(c: Group, b: Group) -> WeakConfig {
        let m = GSet::point(Self::k_group(&c, &b));
        WeakConfig { c, b, m }
    }

    /// M = K/H for the subgroup H generated by the named elements of K, written `(c,b)`.
    pub fn cosets(c: Group, b: Group, gens: &[&str]) -> Result<WeakConfig> {
        let k = Self::k_group(&c, &b);
        let ids = gens
            .iter()
            .map(|s| k.index_of(s).ok_or_else(|| Error::Parse(format!("'{s}' is not an element of {}", k.name()))))
            .collect::<Result<Vec<_>>>()?;
        let h = k.closure(&ids);
        let m = GSet::cosets(k, &h)?;
        WeakConfig::new(c, b, m)
    }

    pub fn k(&self) -> &Group {
        self.m.group()
    }

    pub fn embed_c(&self, c: usize) -> usize {
        c * self.b.order() + self.b.identity()
    }

    pub fn embed_b(&self, b: usize) -> usize {
        self.c.identity() * self.b.order() + b
    }

    /// The element of K carried by a green or blue curve labelled `g`.
    fn embed(&self, color: Color, g: usize) -> usize {
        if color == Color::Green {
            self.embed_c(g)
        } else {
            self.embed_b(g)
        }
    }

    fn label_range(&self, color: Color) -> usize {
        match color {
            Color::Green => self.c.order(),
            Color::Blue => self.b.order(),
            Color::Red => 0,
        }
    }
}

/// The signed product along red curve `curve`: factors (c^{-ε},1) and (1,b^{ε})
/// composed from the basepoint on, so later crossings multiply on the left.
/// `labels` is indexed by curve and holds C- or B-indices for green and blue curves.
pub fn red_product(d: &Diagram, curve: usize, labels: &[Option<usize>], cfg: &WeakConfig) -> Result<usize> {
    if d.curves[curve].color != Color::Red {
        return Err(Error::Incompatible(format!("curve {} is not red", d.curves[curve].id)));
    }
    let k = cfg.k();
    let mut acc = k.identity();
    for &x in &d.curves[curve].visits {
        let p = d.partner(x, curve);
        let g = labels
            .get(p)
            .copied()
            .flatten()
            .ok_or_else(|| Error::Missing(format!("curve {} has no label", d.curves[p].id)))?;
        let f = factor(d, cfg, x, p, g);
        acc = k.mul(f, acc);
    }
    Ok(acc)
}

fn factor(d: &Diagram, cfg: &WeakConfig, x: usize, partner: usize, g: usize) -> usize {
    let sign = d.crossings[x].sign;
    let col = d.curves[partner].color;
    let e = cfg.embed(col, g);
    // green factors carry c^{-ε}, blue ones b^{ε}
    let flip = if col == Color::Green { sign > 0 } else { sign < 0 };
    if flip {
        cfg.k().inv(e)
    } else {
        e
    }
}

/// Shared enumeration state: labelled curves in order and, per step, the red
/// curves whose partners are all labelled once that step is done.
struct Plan {
    labelled: Vec<usize>,
    ranges: Vec<usize>,
    checks: Vec<Vec<usize>>,
    unchecked: Vec<usize>,
}

fn plan(d: &Diagram, cfg: &WeakConfig) -> Plan {
    let labelled: Vec<usize> = (0..d.curves.len()).filter(|&i| d.curves[i].color != Color::Red).collect();
    let ranges = labelled.iter().map(|&i| cfg.label_range(d.curves[i].color)).collect();
    let mut checks = vec![Vec::new(); labelled.len()];
    let mut unchecked = Vec::new();
    for (r, c) in d.curves.iter().enumerate() {
        if c.color != Color::Red {
            continue;
        }
        let last = c.visits.iter().map(|&x| labelled.iter().position(|&l| l == d.partner(x, r)).unwrap()).max();
        match last {
            Some(step) => checks[step].push(r),
            None => unchecked.push(r),
        }
    }
    Plan { labelled, ranges, checks, unchecked }
}

/// Depth-first enumeration over curve labels satisfying the red-curve condition;
/// `leaf` scores each complete labelling. Parallel over the first label.
fn enumerate<F>(d: &Diagram, cfg: &WeakConfig, leaf: F) -> u128
where
    F: Fn(&[Option<usize>]) -> u128 + Sync,
{
    let p = plan(d, cfg);
    let k = cfg.k();
    // crossing-free red curves have trivial product
    debug_assert!(p.unchecked.iter().all(|&r| d.curves[r].visits.is_empty()));
    let ok = |labels: &[Option<usize>], step: usize| {
        p.checks[step].iter().all(|&r| red_product(d, r, labels, cfg).map(|g| g == k.identity()).unwrap_or(false))
    };
    fn rec<F: Fn(&[Option<usize>]) -> u128, G: Fn(&[Option<usize>], usize) -> bool>(
        p: &Plan,
        step: usize,
        labels: &mut Vec<Option<usize>>,
        ok: &G,
        leaf: &F,
    ) -> u128 {
        if step == p.labelled.len() {
            return leaf(labels);
        }
        let mut total = 0;
        for g in 0..p.ranges[step] {
            labels[p.labelled[step]] = Some(g);
            if ok(labels, step) {
                total += rec(p, step + 1, labels, ok, leaf);
            }
        }
        labels[p.labelled[step]] = None;
        total
    }
    if p.labelled.is_empty() {
        return leaf(&vec![None; d.curves.len()]);
    }
    (0..p.ranges[0])
        .into_par_iter()
        .map(|g| {
            let mut labels = vec![None; d.curves.len()];
            labels[p.labelled[0]] = Some(g);
            if ok(&labels, 0) {
                rec(&p, 1, &mut labels, &ok, &leaf)
            } else {
                0
            }
        })
        .sum()
}

/// Number of green/blue labellings with trivial red products (no region data).
pub fn count_curve_labellings(d: &Diagram, c: &Group, b: &Group) -> u128 {
    let cfg = WeakConfig::point(c.clone(), b.clone());
    enumerate(d, &cfg, |_| 1)
}

/// Region constraints: for each green or blue segment, `right = g ▷ left` with
/// g the curve's element of K.
struct RegionGraph {
    regions: usize,
    boundary: Option<usize>,
    /// (left, right, curve)
    edges: Vec<(usize, usize, usize)>,
}

fn region_graph(d: &Diagram) -> Result<RegionGraph> {
    let e = d.embedding.as_ref().ok_or_else(|| Error::Missing("diagram carries no region data".into()))?;
    let report = d.validate(false);
    if !report.is_ok() {
        return Err(Error::InvalidDiagram(report.to_string()));
    }
    let mut edges = Vec::new();
    for (ci, c) in d.curves.iter().enumerate() {
        if c.color == Color::Red {
            continue;
        }
        for s in &e.sides[ci] {
            edges.push((s[0], s[1], ci));
        }
    }
    let boundary = if d.kind == Kind::Disc { e.boundary } else { None };
    Ok(RegionGraph { regions: e.regions.len(), boundary, edges })
}

/// Number of region labellings compatible with the given curve labels.
fn count_regions(g: &RegionGraph, d: &Diagram, cfg: &WeakConfig, labels: &[Option<usize>], fixed: Option<usize>) -> u128 {
    let k = cfg.k();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.regions];
    for &(l, r, c) in &g.edges {
        let e = cfg.embed(d.curves[c].color, labels[c].expect("all curves labelled"));
        adj[l].push((r, e));
        adj[r].push((l, k.inv(e)));
    }
    let mut seen = vec![false; g.regions];
    let mut total = 1u128;
    let mut order = Vec::with_capacity(g.regions);
    if let Some(b) = g.boundary {
        order.push(b);
    }
    order.extend(0..g.regions);
    for root in order {
        if seen[root] {
            continue;
        }
        let mut comp = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < comp.len() {
            for &(v, _) in &adj[comp[i]] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            i += 1;
        }
        let starts: Vec<usize> = match (Some(root) == g.boundary, fixed) {
            (true, Some(m)) => vec![m],
            _ => (0..cfg.m.size()).collect(),
        };
        let good = starts
            .into_iter()
            .filter(|&m0| {
                let mut lab: HashMap<usize, usize> = HashMap::from([(root, m0)]);
                let mut stack = vec![root];
                while let Some(u) = stack.pop() {
                    let mu = lab[&u];
                    for &(v, e) in &adj[u] {
                        let mv = cfg.m.act(e, mu);
                        match lab.get(&v) {
                            Some(&x) if x != mv => return false,
                            Some(_) => {}
                            None => {
                                lab.insert(v, mv);
                                stack.push(v);
                            }
                        }
                    }
                }
                true
            })
            .count() as u128;
        total *= good;
        if total == 0 {
            break;
        }
    }
    total
}

/// Number of admissible labellings of a diagram with region data. A boundary
/// label fixes the region holding the boundary circle of a disc diagram.
pub fn count_admissible(d: &Diagram, cfg: &WeakConfig, boundary_label: Option<usize>) -> Result<u128> {
    let g = region_graph(d)?;
    if let Some(m) = boundary_label {
        if g.boundary.is_none() {
            return Err(Error::Incompatible("a boundary label needs a disc diagram".into()));
        }
        if m >= cfg.m.size() {
            return Err(Error::Incompatible(format!("boundary label {m} is not a point of M")));
        }
    }
    Ok(enumerate(d, cfg, |labels| count_regions(&g, d, cfg, labels, boundary_label)))
}

fn red_count(d: &Diagram) -> u32 {
    d.curves.iter().filter(|c| c.color == Color::Red).count() as u32
}

/// |l|·|B|^r·|C|^r with r the number of red curves.
pub fn averaged_evaluation(d: &Diagram, cfg: &WeakConfig, boundary_label: Option<usize>) -> Result<Scalar> {
    let l = count_admissible(d, cfg, boundary_label)?;
    let bc = (cfg.b.order() * cfg.c.order()) as u128;
    let v = l * bc.pow(red_count(d));
    Ok(Scalar::int(i64::try_from(v).map_err(|_| Error::Incompatible("count overflows".into()))?))
}

/// A simple module of ℂ^{M×M} ⋊ ℂ[K]: an orbit of K on M×M and an irrep of the
/// stabiliser of its first pair.
#[derive(Clone, Debug)]
pub struct WeakRep {
    pub orbit: Vec<(usize, usize)>,
    pub psi: String,
    pub dim: usize,
    /// ρ(k) for every k ∈ K.
    pub group: Vec<Mat>,
    block: usize,
}

impl WeakRep {
    /// ρ(δ_a ⊗ δ_b ⊗ 1).
    pub fn projector(&self, a: usize, b: usize) -> Mat {
        let mut p = Mat::zeros(self.dim, self.dim);
        if let Some(i) = self.orbit.iter().position(|&x| x == (a, b)) {
            for j in 0..self.block {
                p.set(i * self.block + j, i * self.block + j, Scalar::one());
            }
        }
        p
    }

    /// The representation on the basis of [`HopfAlgebra::weak_smash`].
    pub fn algebra_rep(&self, m: &GSet) -> AlgebraRep {
        let (nm, nk) = (m.size(), m.group().order());
        let mut matrices = Vec::with_capacity(nm * nm * nk);
        for a in 0..nm {
            for b in 0..nm {
                let p = self.projector(a, b);
                for k in 0..nk {
                    matrices.push(p.mul(&self.group[k]));
                }
            }
        }
        AlgebraRep { name: self.psi.clone(), dim: self.dim, matrices }
    }
}

/// All simple modules of ℂ^{M×M} ⋊ ℂ[K], one per (orbit, stabiliser irrep).
pub fn weak_simple_reps(m: &GSet) -> Result<Vec<WeakRep>> {
    let k = m.group();
    let nm = m.size();
    let mut seen = vec![false; nm * nm];
    let mut out = Vec::new();
    for start in 0..nm * nm {
        if seen[start] {
            continue;
        }
        let x0 = (start / nm, start % nm);
        // orbit with transversal r_x, r_x ▷ x0 = x
        let mut orbit = vec![x0];
        let mut trans = vec![k.identity()];
        let mut stab = Vec::new();
        for g in 0..k.order() {
            let y = (m.act(g, x0.0), m.act(g, x0.1));
            if y == x0 {
                stab.push(g);
            }
            if !orbit.contains(&y) {
                orbit.push(y);
                trans.push(g);
            }
        }
        for &(a, b) in &orbit {
            seen[a * nm + b] = true;
        }
        let sg = k.subgroup(&stab)?;
        let irreps: Vec<GroupRep> = sg
            .irreps()
            .ok_or_else(|| Error::Missing(format!("irreps of a stabiliser of order {}", stab.len())))?
            .to_vec();
        let pos: HashMap<usize, usize> = stab.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        for psi in irreps {
            let block = psi.dim;
            let dim = orbit.len() * block;
            let group = (0..k.order())
                .map(|g| {
                    let mut mat = Mat::zeros(dim, dim);
                    for (i, &(a, b)) in orbit.iter().enumerate() {
                        let y = (m.act(g, a), m.act(g, b));
                        let j = orbit.iter().position(|&z| z == y).unwrap();
                        let s = k.mul(k.inv(trans[j]), k.mul(g, trans[i]));
                        let pm = &psi.matrices[pos[&s]];
                        for r in 0..block {
                            for c in 0..block {
                                mat.set(j * block + r, i * block + c, pm.get(r, c).clone());
                            }
                        }
                    }
                    mat
                })
                .collect();
            let name = format!("({},{})/{}", m.points()[x0.0], m.points()[x0.1], psi.name);
            out.push(WeakRep { orbit: orbit.clone(), psi: name, dim, group, block });
        }
    }
    Ok(out)
}

/// A full labelling: group labels on green and blue curves, simple modules on
/// red curves, both indexed by curve.
#[derive(Clone, Debug)]
pub struct FullLabelling {
    pub curves: Vec<Option<usize>>,
    pub reps: Vec<Option<usize>>,
}

/// Evaluates a labelled diagram literally: sum over region labels of the segment
/// delta factors times, per red curve, the trace of the composed module maps.
pub fn brute_force_evaluation(
    d: &Diagram,
    cfg: &WeakConfig,
    reps: &[WeakRep],
    l: &FullLabelling,
    boundary_label: Option<usize>,
) -> Result<Scalar> {
    let e = d.embedding.as_ref().ok_or_else(|| Error::Missing("diagram carries no region data".into()))?;
    let k = cfg.k();
    let nm = cfg.m.size();
    let nr = e.regions.len();
    let fixed = if d.kind == Kind::Disc { e.boundary.zip(boundary_label) } else { None };
    // per red curve: the composed group part, right-to-left
    let mut red = Vec::new();
    for (ci, c) in d.curves.iter().enumerate() {
        if c.color != Color::Red {
            continue;
        }
        let r = &reps[l.reps[ci].ok_or_else(|| Error::Missing(format!("curve {} has no module", c.id)))?];
        let mut op = Mat::identity(r.dim);
        for &x in &c.visits {
            let p = d.partner(x, ci);
            let g = l.curves[p].ok_or_else(|| Error::Missing(format!("curve {} has no label", d.curves[p].id)))?;
            let col = d.curves[p].color;
            let sign = d.crossings[x].sign as i64;
            let base = cfg.embed(col, g);
            let exp = if col == Color::Green { -sign } else { sign };
            let f = if exp > 0 { base } else { k.inv(base) };
            op = r.group[f].mul(&op);
        }
        let last = d.segment_count(ci) - 1;
        red.push((r, op, e.sides[ci][last]));
    }
    let mut total = Scalar::zero();
    let mut lab = vec![0usize; nr];
    let count = (nm as u128).pow(nr as u32);
    for code in 0..count {
        let mut t = code;
        for x in lab.iter_mut() {
            *x = (t % nm as u128) as usize;
            t /= nm as u128;
        }
        if let Some((reg, m)) = fixed {
            if lab[reg] != m {
                continue;
            }
        }
        let deltas = d.curves.iter().enumerate().all(|(ci, c)| {
            if c.color == Color::Red {
                return true;
            }
            let g = cfg.embed(c.color, l.curves[ci].expect("curve labels"));
            e.sides[ci].iter().all(|s| lab[s[1]] == cfg.m.act(g, lab[s[0]]))
        });
        if !deltas {
            continue;
        }
        let mut term = Scalar::one();
        for (r, op, side) in &red {
            // ρ(δ_right ⊗ δ_left ⊗ 1) at the basepoint
            let p = r.projector(lab[side[1]], lab[side[0]]);
            term = term.mul(&op.mul(&p).trace());
            if term.is_zero() {
                break;
            }
        }
        total = total.add(&term);
    }
    Ok(total)
}

/// Sum of [`brute_force_evaluation`] over all labellings, weighted by module dimensions.
pub fn brute_force_average(d: &Diagram, cfg: &WeakConfig, boundary_label: Option<usize>) -> Result<Scalar> {
    let reps = weak_simple_reps(&cfg.m)?;
    let slots: Vec<(usize, usize)> = d
        .curves
        .iter()
        .enumerate()
        .map(|(ci, c)| (ci, if c.color == Color::Red { reps.len() } else { cfg.label_range(c.color) }))
        .collect();
    let mut total = Scalar::zero();
    let mut l = FullLabelling { curves: vec![None; d.curves.len()], reps: vec![None; d.curves.len()] };
    let mut idx = vec![0usize; slots.len()];
    loop {
        let mut weight = 1usize;
        for (&(ci, _), &v) in slots.iter().zip(&idx) {
            if d.curves[ci].color == Color::Red {
                l.reps[ci] = Some(v);
                weight *= reps[v].dim;
            } else {
                l.curves[ci] = Some(v);
            }
        }
        let ev = brute_force_evaluation(d, cfg, &reps, &l, boundary_label)?;
        total = total.add(&ev.mul(&Scalar::int(weight as i64)));
        let mut i = 0;
        while i < idx.len() {
            idx[i] += 1;
            if idx[i] < slots[i].1 {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            break;
        }
    }
    Ok(total)
}

/// |T| = |l_T|·(|B||C|)^{-g/3} with |l_T| = |M|·(curve labellings).
pub fn group_count_invariant(d: &Diagram, cfg: &WeakConfig) -> Result<(u128, Normalized)> {
    d.check(true)?;
    let l = cfg.m.size() as u128 * count_curve_labellings(d, &cfg.c, &cfg.b);
    let v = Scalar::int(i64::try_from(l).map_err(|_| Error::Incompatible("count overflows".into()))?);
    let base = Scalar::int((cfg.b.order() * cfg.c.order()) as i64);
    Ok((l, Normalized::new(v, base, -(d.genus as i64))))
}

#[derive(Clone, Debug)]
pub struct CoincidenceReport {
    pub count: Normalized,
    /// |M| times the group-triplet invariant.
    pub bracket: Normalized,
    pub equal: bool,
}

/// Compares the counting invariant with |M| times the invariant of the group triplet.
pub fn coincidence_check(d: &Diagram, cfg: &WeakConfig, tol: f64) -> Result<CoincidenceReport> {
    let (_, count) = group_count_invariant(d, cfg)?;
    let t = BracketConfig::new(HopfTriplet::group(&cfg.c, &cfg.b)?);
    let mut bracket = invariant(d, &t)?;
    bracket.value = bracket.value.mul(&Scalar::int(cfg.m.size() as i64));
    let equal = count.equals(&bracket, tol);
    Ok(CoincidenceReport { count, bracket, equal })
}

/// The weak triplet built from `cfg`.
pub fn weak_triplet(cfg: &WeakConfig) -> Result<HopfTriplet> {
    HopfTriplet::weak(&cfg.c, &cfg.b, &cfg.m)
}

/// Structure check helper: the weak Hopf algebra ℂ^{M×M} ⋊ ℂ[K] for `cfg`.
pub fn weak_algebra(cfg: &WeakConfig) -> HopfAlgebra {
    HopfAlgebra::weak_smash(&cfg.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{cp2, s4_disc, standard_s4};
    use crate::hopf::check_algebra_rep;

    fn g(s: &str) -> Group {
        Group::parse(s).unwrap()
    }

    #[test]
    fn s4_curve_count() {
        assert_eq!(count_curve_labellings(&standard_s4(), &g("Z/2"), &g("Z/3")), 6);
        assert_eq!(count_curve_labellings(&cp2(), &g("Z/2"), &g("Z/2")), 1);
    }

    #[test]
    fn cp2_red_product_signs() {
        let d = cp2();
        let cfg = WeakConfig::point(g("Z/3"), g("Z/3"));
        let red = d.curve_index("a").unwrap();
        let (b, c) = (d.curve_index("b").unwrap(), d.curve_index("c").unwrap());
        let mut labels = vec![None; 3];
        labels[b] = Some(1);
        labels[c] = Some(1);
        // all signs +1: c^{-1} and b
        let k = red_product(&d, red, &labels, &cfg).unwrap();
        assert_eq!(k, cfg.k().mul(cfg.embed_c(2), cfg.embed_b(1)));
        labels[b] = None;
        assert!(matches!(red_product(&d, red, &labels, &cfg), Err(Error::Missing(_))));
    }

    #[test]
    fn disc_count_per_boundary_label() {
        let cfg = WeakConfig::cosets(g("Z/2"), g("Z/3"), &["(1,0)"]).unwrap();
        assert_eq!(cfg.m.size(), 3);
        for m in 0..3 {
            assert_eq!(count_admissible(&s4_disc(), &cfg, Some(m)).unwrap(), 6);
        }
    }

    #[test]
    fn simple_reps_fill_the_algebra() {
        let cfg = WeakConfig::cosets(g("S3"), g("Z/2"), &["(102,0)", "(012,1)"]).unwrap();
        let reps = weak_simple_reps(&cfg.m).unwrap();
        let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
        let (nm, nk) = (cfg.m.size(), cfg.k().order());
        assert_eq!(total, nm * nm * nk);
        let h = weak_algebra(&cfg);
        for r in &reps {
            check_algebra_rep(&h, &r.algebra_rep(&cfg.m)).unwrap();
        }
    }
}
