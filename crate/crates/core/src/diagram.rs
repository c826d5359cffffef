//! Trisection and surface diagrams as signed crossing sequences on oriented curves.
//!
//! A curve stores the crossings it meets in order, starting at its basepoint.
//! Segment `i` of a curve runs from visit `i` to visit `i + 1` (cyclically), so
//! the basepoint sits on the last segment. A curve without crossings has a
//! single segment.
//!
//! At a crossing the two strands are ordered by the cyclic colour order
//! red → blue → green → red: strand 1 is the curve whose colour comes first in
//! the pair (red for red/blue, blue for blue/green, green for green/red). A sign
//! of +1 means strand 2 passes strand 1 from its right to its left.

use crate::error::{Error, Result};
use crate::triplet::Color;
use petgraph::unionfind::UnionFind;
use serde_json::{json, Map, Value};
use std::collections::{HashMap, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Closed,
    /// One boundary circle, placed in a region that no curve crosses.
    Disc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub id: String,
    pub color: Color,
    /// Crossing indices in order of traversal.
    pub visits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub id: String,
    pub sign: i8,
    /// `(curve, visit index)` for strand 1 and strand 2.
    pub ends: [(usize, usize); 2],
}

/// Region data for a diagram drawn on a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub regions: Vec<String>,
    /// `sides[curve][segment] = [left region, right region]`.
    pub sides: Vec<Vec<[usize; 2]>>,
    /// Region holding the boundary circle of a disc diagram.
    pub boundary: Option<usize>,
}

/// One side of one segment of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub curve: usize,
    pub segment: usize,
    pub right: bool,
}

impl Side {
    pub fn left(curve: usize, segment: usize) -> Side {
        Side { curve, segment, right: false }
    }

    pub fn right(curve: usize, segment: usize) -> Side {
        Side { curve, segment, right: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub genus: usize,
    pub kind: Kind,
    /// Declared k of a (g,k)-trisection. Never inferred.
    pub k: Option<usize>,
    pub curves: Vec<Curve>,
    pub crossings: Vec<Crossing>,
    pub embedding: Option<Embedding>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, rule: &'static str, detail: String) {
        self.violations.push(Violation { rule, detail });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| format!("{}: {}", v.rule, v.detail)).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// χ = 2 + g − 3k.
pub fn euler_characteristic(g: i64, k: i64) -> Result<i64> {
    if g < 0 || k < 0 || k > g {
        return Err(Error::Incompatible(format!("need 0 ≤ k ≤ g, got g={g}, k={k}")));
    }
    Ok(2 + g - 3 * k)
}

/// True when a crossing of colours `(a, b)` has `a` as strand 1.
pub fn is_first_strand(a: Color, b: Color) -> bool {
    a.next() == b
}

impl Diagram {
    /// Builds a diagram from curve visit lists given by crossing ids and a sign per
    /// crossing. Crossing order follows `signs`.
    pub fn build(
        genus: usize,
        kind: Kind,
        k: Option<usize>,
        curves: &[(&str, Color, &[&str])],
        signs: &[(&str, i8)],
    ) -> Result<Diagram> {
        let index: HashMap<&str, usize> = signs.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
        let mut cs = Vec::new();
        for (id, color, visits) in curves {
            let mut v = Vec::new();
            for x in visits.iter() {
                v.push(*index.get(x).ok_or_else(|| Error::InvalidDiagram(format!("curve {id}: unknown crossing {x}")))?);
            }
            cs.push(Curve { id: id.to_string(), color: *color, visits: v });
        }
        let crossings =
            signs.iter().map(|(id, s)| Crossing { id: id.to_string(), sign: *s, ends: [(0, 0), (0, 0)] }).collect();
        let mut d = Diagram { genus, kind, k, curves: cs, crossings, embedding: None };
        d.rebuild_ends()?;
        Ok(d)
    }

    /// Recomputes every crossing's ends from the curves' visit lists.
    pub fn rebuild_ends(&mut self) -> Result<()> {
        let mut seen: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.crossings.len()];
        for (ci, c) in self.curves.iter().enumerate() {
            for (pos, &x) in c.visits.iter().enumerate() {
                let slot = seen
                    .get_mut(x)
                    .ok_or_else(|| Error::InvalidDiagram(format!("curve {} visits unknown crossing {x}", c.id)))?;
                slot.push((ci, pos));
            }
        }
        for (x, ends) in seen.into_iter().enumerate() {
            if ends.len() != 2 {
                return Err(Error::InvalidDiagram(format!(
                    "crossing {} is visited {} times",
                    self.crossings[x].id,
                    ends.len()
                )));
            }
            let (e0, e1) = (ends[0], ends[1]);
            let (c0, c1) = (self.curves[e0.0].color, self.curves[e1.0].color);
            self.crossings[x].ends = if is_first_strand(c1, c0) { [e1, e0] } else { [e0, e1] };
        }
        Ok(())
    }

    pub fn curve_index(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.id == id)
    }

    pub fn crossing_index(&self, id: &str) -> Option<usize> {
        self.crossings.iter().position(|c| c.id == id)
    }

    pub fn color_count(&self, color: Color) -> usize {
        self.curves.iter().filter(|c| c.color == color).count()
    }

    pub fn segment_count(&self, curve: usize) -> usize {
        self.curves[curve].visits.len().max(1)
    }

    /// Colour of the curve at strand `s` of crossing `x`.
    pub fn strand_color(&self, x: usize, s: usize) -> Color {
        self.curves[self.crossings[x].ends[s].0].color
    }

    /// The other curve at crossing `x`, seen from `curve`.
    pub fn partner(&self, x: usize, curve: usize) -> usize {
        let e = &self.crossings[x].ends;
        if e[0].0 == curve {
            e[1].0
        } else {
            e[0].0
        }
    }

    /// Euler characteristic from the declared k.
    pub fn euler(&self) -> Option<Result<i64>> {
        self.k.map(|k| euler_characteristic(self.genus as i64, k as i64))
    }

    /// Checks every structural invariant. `strict` additionally asks for exactly
    /// `genus` curves per colour.
    pub fn validate(&self, strict: bool) -> ValidationReport {
        let mut r = ValidationReport::default();
        let nc = self.curves.len();
        let nx = self.crossings.len();

        let mut ids = HashSet::new();
        for c in &self.curves {
            if !ids.insert(c.id.as_str()) {
                r.push("duplicate id", format!("curve {}", c.id));
            }
        }
        let mut xids = HashSet::new();
        for x in &self.crossings {
            if !xids.insert(x.id.as_str()) {
                r.push("duplicate id", format!("crossing {}", x.id));
            }
        }

        let mut refs = vec![0usize; nx];
        for c in &self.curves {
            let mut at = HashSet::new();
            for (pos, &x) in c.visits.iter().enumerate() {
                if x >= nx {
                    r.push("dangling visit", format!("curve {} position {pos} names crossing #{x}", c.id));
                    continue;
                }
                refs[x] += 1;
                if !at.insert(x) {
                    r.push("self-crossing", format!("curve {} meets crossing {} twice", c.id, self.crossings[x].id));
                }
            }
        }
        for (xi, x) in self.crossings.iter().enumerate() {
            if x.sign != 1 && x.sign != -1 {
                r.push("invalid sign", format!("crossing {} has sign {}", x.id, x.sign));
            }
            if refs[xi] != 2 {
                r.push("crossing multiplicity", format!("crossing {} is visited {} times", x.id, refs[xi]));
            }
            let mut ok = true;
            for &(ci, pos) in &x.ends {
                if ci >= nc || pos >= self.curves[ci].visits.len() {
                    r.push("dangling end", format!("crossing {} refers to ({ci}, {pos})", x.id));
                    ok = false;
                } else if self.curves[ci].visits[pos] != xi {
                    r.push("end mismatch", format!("crossing {} end ({}, {pos}) points elsewhere", x.id, self.curves[ci].id));
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            let (a, b) = (x.ends[0].0, x.ends[1].0);
            let (ca, cb) = (self.curves[a].color, self.curves[b].color);
            if a == b {
                r.push("self-crossing", format!("crossing {} joins curve {} to itself", x.id, self.curves[a].id));
            } else if ca == cb {
                r.push("same-colour intersection", format!("crossing {} joins two {} curves", x.id, ca.name()));
            } else if !is_first_strand(ca, cb) {
                r.push("strand order", format!("crossing {} lists its strands out of cyclic order", x.id));
            }
        }

        if strict {
            if self.genus == 0 {
                r.push("genus", "trisection diagrams need genus ≥ 1".into());
            }
            for col in Color::ALL {
                let n = self.color_count(col);
                if n != self.genus {
                    r.push("curve count", format!("{n} {} curves for genus {}", col.name(), self.genus));
                }
            }
        }
        if let Some(k) = self.k {
            if k > self.genus {
                r.push("declared k", format!("k = {k} exceeds genus {}", self.genus));
            }
        }
        if let Some(e) = &self.embedding {
            if r.is_ok() {
                self.validate_embedding(e, &mut r);
            } else {
                r.push("embedding", "skipped: the crossing data is inconsistent".into());
            }
        }
        r
    }

    fn validate_embedding(&self, e: &Embedding, r: &mut ValidationReport) {
        let nr = e.regions.len();
        if e.sides.len() != self.curves.len() {
            r.push("segment sides", format!("{} side lists for {} curves", e.sides.len(), self.curves.len()));
            return;
        }
        let mut used = vec![false; nr];
        for (ci, s) in e.sides.iter().enumerate() {
            if s.len() != self.segment_count(ci) {
                r.push("segment sides", format!("curve {} has {} segments, {} given", self.curves[ci].id, self.segment_count(ci), s.len()));
                return;
            }
            for pair in s {
                for &reg in pair {
                    if reg >= nr {
                        r.push("segment sides", format!("curve {} names region #{reg}", self.curves[ci].id));
                        return;
                    }
                    used[reg] = true;
                }
            }
        }
        for x in 0..self.crossings.len() {
            for (s, t) in self.corners(x) {
                let (a, b) = (e.region_of(s), e.region_of(t));
                if a != b {
                    r.push(
                        "corner mismatch",
                        format!("crossing {}: regions {} and {} meet in one corner", self.crossings[x].id, e.regions[a], e.regions[b]),
                    );
                }
            }
        }
        for (i, u) in used.iter().enumerate() {
            if !u {
                r.push("unused region", e.regions[i].clone());
            }
        }
        match (self.kind, e.boundary) {
            (Kind::Closed, Some(_)) => r.push("boundary region", "closed diagram with a boundary region".into()),
            (Kind::Disc, Some(b)) if b >= nr => r.push("boundary region", format!("region #{b} out of range")),
            _ => {}
        }
    }

    /// Errors with the full report unless `validate(strict)` is clean.
    pub fn check(&self, strict: bool) -> Result<()> {
        let r = self.validate(strict);
        if r.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidDiagram(r.to_string()))
        }
    }

    /// The four corner identifications at crossing `x`; each pair of sides
    /// bounds the same quadrant.
    pub fn corners(&self, x: usize) -> [(Side, Side); 4] {
        let c = &self.crossings[x];
        let seg = |s: usize| {
            let (ci, pos) = c.ends[s];
            let n = self.segment_count(ci);
            (ci, (pos + n - 1) % n, pos)
        };
        let (c1, in1, out1) = seg(0);
        let (c2, in2, out2) = seg(1);
        let (l, r) = (Side::left, Side::right);
        if c.sign > 0 {
            [(l(c1, out1), r(c2, out2)), (l(c2, out2), l(c1, in1)), (r(c1, in1), l(c2, in2)), (r(c2, in2), r(c1, out1))]
        } else {
            [(l(c1, out1), l(c2, in2)), (r(c2, in2), l(c1, in1)), (r(c1, in1), r(c2, out2)), (l(c2, out2), r(c1, out1))]
        }
    }

    fn side_offsets(&self) -> (Vec<usize>, usize) {
        let mut off = Vec::with_capacity(self.curves.len());
        let mut n = 0;
        for ci in 0..self.curves.len() {
            off.push(n);
            n += 2 * self.segment_count(ci);
        }
        (off, n)
    }

    fn side_slot(off: &[usize], s: Side) -> usize {
        off[s.curve] + 2 * s.segment + s.right as usize
    }

    /// Union-find over segment sides glued at corners, with extra groups of sides
    /// forced together. Returns the class of every side, classes numbered from 0
    /// with the class of `merges[0]` first, then in order of first appearance.
    fn side_classes(&self, merges: &[Vec<Side>]) -> (Vec<usize>, usize) {
        let (off, n) = self.side_offsets();
        let mut uf = UnionFind::<usize>::new(n);
        for x in 0..self.crossings.len() {
            for (s, t) in self.corners(x) {
                uf.union(Self::side_slot(&off, s), Self::side_slot(&off, t));
            }
        }
        for g in merges {
            for w in g.windows(2) {
                uf.union(Self::side_slot(&off, w[0]), Self::side_slot(&off, w[1]));
            }
        }
        let mut label = HashMap::new();
        if let Some(s) = merges.first().and_then(|g| g.first()) {
            label.insert(uf.find(Self::side_slot(&off, *s)), 0);
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let root = uf.find(i);
            let next = label.len();
            out.push(*label.entry(root).or_insert(next));
        }
        (out, label.len())
    }

    /// Number of classes of segment sides connected through corners. For a
    /// diagram whose complement is a union of discs this is the face count.
    pub fn face_count(&self) -> usize {
        self.side_classes(&[]).1
    }

    /// Region data from corner gluing, with each group in `merges` joined into a
    /// single region. Region 0 is the region of `merges[0]` when given.
    pub fn derive_embedding(&self, merges: &[Vec<Side>]) -> Embedding {
        let (classes, n) = self.side_classes(merges);
        let (off, _) = self.side_offsets();
        let sides = (0..self.curves.len())
            .map(|ci| {
                (0..self.segment_count(ci))
                    .map(|s| {
                        [classes[Self::side_slot(&off, Side::left(ci, s))], classes[Self::side_slot(&off, Side::right(ci, s))]]
                    })
                    .collect()
            })
            .collect();
        Embedding { regions: (0..n).map(|i| format!("R{i}")).collect(), sides, boundary: None }
    }

    /// Region data when the curves cut the closed surface into discs: the union
    /// of curves is connected, every curve has a crossing and V − E + F = 2 − 2g.
    pub fn cellular_embedding(&self) -> Option<Embedding> {
        if self.kind != Kind::Closed || self.curves.is_empty() || self.curves.iter().any(|c| c.visits.is_empty()) {
            return None;
        }
        let mut uf = UnionFind::<usize>::new(self.curves.len());
        for x in &self.crossings {
            uf.union(x.ends[0].0, x.ends[1].0);
        }
        if (1..self.curves.len()).any(|i| !uf.equiv(0, i)) {
            return None;
        }
        let v = self.crossings.len() as i64;
        let e: i64 = self.curves.iter().map(|c| c.visits.len() as i64).sum();
        let f = self.face_count() as i64;
        (v - e + f == 2 - 2 * self.genus as i64).then(|| self.derive_embedding(&[]))
    }

    /// Relabels crossings as `x0, x1, ..` in order of first appearance along the
    /// curves and regions (other than region 0) by first appearance along the
    /// sides. Two diagrams are equal up to relabelling iff their canonical forms agree.
    pub fn canonical(&self) -> Diagram {
        let mut order = Vec::new();
        let mut newidx = vec![usize::MAX; self.crossings.len()];
        for c in &self.curves {
            for &x in &c.visits {
                if x < newidx.len() && newidx[x] == usize::MAX {
                    newidx[x] = order.len();
                    order.push(x);
                }
            }
        }
        for x in 0..self.crossings.len() {
            if newidx[x] == usize::MAX {
                newidx[x] = order.len();
                order.push(x);
            }
        }
        let crossings = order
            .iter()
            .enumerate()
            .map(|(i, &x)| Crossing { id: format!("x{i}"), sign: self.crossings[x].sign, ends: self.crossings[x].ends })
            .collect();
        let curves = self
            .curves
            .iter()
            .map(|c| Curve {
                id: c.id.clone(),
                color: c.color,
                visits: c.visits.iter().map(|&x| newidx.get(x).copied().unwrap_or(x)).collect(),
            })
            .collect();
        let embedding = self.embedding.as_ref().map(|e| {
            let mut map = vec![usize::MAX; e.regions.len()];
            let mut next = 0;
            if !map.is_empty() {
                map[0] = 0;
                next = 1;
            }
            for s in e.sides.iter().flatten().flatten() {
                if *s < map.len() && map[*s] == usize::MAX {
                    map[*s] = next;
                    next += 1;
                }
            }
            for m in map.iter_mut() {
                if *m == usize::MAX {
                    *m = next;
                    next += 1;
                }
            }
            Embedding {
                regions: (0..e.regions.len()).map(|i| format!("R{i}")).collect(),
                sides: e.sides.iter().map(|s| s.iter().map(|p| [map[p[0]], map[p[1]]]).collect()).collect(),
                boundary: e.boundary.map(|b| map[b]),
            }
        });
        Diagram { genus: self.genus, kind: self.kind, k: self.k, curves, crossings, embedding }
    }

    pub fn same_up_to_relabel(&self, other: &Diagram) -> bool {
        self.canonical() == other.canonical()
    }

    /// Disjoint union on a genus g₁ + g₂ surface. Clashing ids from `t2` get a
    /// numeric suffix. Region data survives when both inputs carry it, with the
    /// two region-0s joined by the connecting tube.
    pub fn connected_sum(t1: &Diagram, t2: &Diagram) -> Result<Diagram> {
        if t1.kind != Kind::Closed || t2.kind != Kind::Closed {
            return Err(Error::InvalidDiagram("connected sum needs closed diagrams".into()));
        }
        let fresh = |taken: &mut HashSet<String>, id: &str| -> String {
            let mut cand = id.to_string();
            let mut n = 2;
            while taken.contains(&cand) {
                cand = format!("{id}_{n}");
                n += 1;
            }
            taken.insert(cand.clone());
            cand
        };
        let (nc, nx) = (t1.curves.len(), t1.crossings.len());
        let mut cids: HashSet<String> = t1.curves.iter().map(|c| c.id.clone()).collect();
        let mut xids: HashSet<String> = t1.crossings.iter().map(|c| c.id.clone()).collect();
        let mut curves = t1.curves.clone();
        for c in &t2.curves {
            curves.push(Curve { id: fresh(&mut cids, &c.id), color: c.color, visits: c.visits.iter().map(|x| x + nx).collect() });
        }
        let mut crossings = t1.crossings.clone();
        for x in &t2.crossings {
            crossings.push(Crossing {
                id: fresh(&mut xids, &x.id),
                sign: x.sign,
                ends: [(x.ends[0].0 + nc, x.ends[0].1), (x.ends[1].0 + nc, x.ends[1].1)],
            });
        }
        let embedding = match (&t1.embedding, &t2.embedding) {
            (Some(e1), Some(e2)) if !e1.regions.is_empty() && !e2.regions.is_empty() => {
                let mut rids: HashSet<String> = e1.regions.iter().cloned().collect();
                let mut regions = e1.regions.clone();
                let mut map = vec![0usize];
                for r in &e2.regions[1..] {
                    map.push(regions.len());
                    regions.push(fresh(&mut rids, r));
                }
                let mut sides = e1.sides.clone();
                for s in &e2.sides {
                    sides.push(s.iter().map(|p| [map[p[0]], map[p[1]]]).collect());
                }
                Some(Embedding { regions, sides, boundary: None })
            }
            _ => None,
        };
        let k = match (t1.k, t2.k) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(Diagram { genus: t1.genus + t2.genus, kind: Kind::Closed, k, curves, crossings, embedding })
    }

    /// Removes a disc avoiding all curves. The boundary lies in region 0.
    pub fn remove_disc(&self) -> Result<Diagram> {
        if self.kind != Kind::Closed {
            return Err(Error::InvalidDiagram("diagram already has a boundary".into()));
        }
        let mut d = self.clone();
        d.kind = Kind::Disc;
        if let Some(e) = &mut d.embedding {
            e.boundary = if e.regions.is_empty() { None } else { Some(0) };
        }
        Ok(d)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("genus".into(), json!(self.genus));
        m.insert("kind".into(), json!(if self.kind == Kind::Closed { "closed" } else { "disc" }));
        if let Some(k) = self.k {
            m.insert("k".into(), json!(k));
        }
        let name = |x: usize| self.crossings.get(x).map(|c| c.id.clone()).unwrap_or_else(|| format!("#{x}"));
        let cname = |c: usize| self.curves.get(c).map(|c| c.id.clone()).unwrap_or_else(|| format!("#{c}"));
        m.insert(
            "curves".into(),
            Value::Array(
                self.curves
                    .iter()
                    .map(|c| json!({"id": c.id, "color": c.color.name(), "visits": c.visits.iter().map(|&x| name(x)).collect::<Vec<_>>()}))
                    .collect(),
            ),
        );
        m.insert(
            "crossings".into(),
            Value::Array(
                self.crossings
                    .iter()
                    .map(|x| json!({"id": x.id, "sign": x.sign, "ends": x.ends.iter().map(|&(c, p)| json!([cname(c), p])).collect::<Vec<_>>()}))
                    .collect(),
            ),
        );
        if let Some(e) = &self.embedding {
            m.insert("regions".into(), json!(e.regions));
            let mut ss = Map::new();
            for (ci, s) in e.sides.iter().enumerate() {
                let pairs: Vec<Value> = s
                    .iter()
                    .map(|p| json!([e.regions.get(p[0]).cloned().unwrap_or_default(), e.regions.get(p[1]).cloned().unwrap_or_default()]))
                    .collect();
                ss.insert(cname(ci), Value::Array(pairs));
            }
            m.insert("segment_sides".into(), Value::Object(ss));
            if let Some(b) = e.boundary {
                m.insert("boundary".into(), json!(e.regions.get(b).cloned().unwrap_or_default()));
            }
        }
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("diagram serializes")
    }

    /// Parses a diagram file. `strict` rejects unknown keys. Crossing ends are
    /// optional; when present they must agree with the visit lists.
    pub fn from_json(text: &str, strict: bool) -> Result<Diagram> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_value(&v, strict)
    }

    pub fn from_value(v: &Value, strict: bool) -> Result<Diagram> {
        let err = |path: &str, msg: &str| Error::Parse(format!("{path}: {msg}"));
        let obj = v.as_object().ok_or_else(|| err("$", "expected an object"))?;
        const KEYS: [&str; 8] = ["genus", "kind", "k", "curves", "crossings", "regions", "segment_sides", "boundary"];
        if strict {
            if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
                return Err(err(k, "unknown key"));
            }
        }
        let uint = |path: &str, v: &Value| -> Result<usize> {
            v.as_u64().map(|x| x as usize).ok_or_else(|| err(path, "expected a non-negative integer"))
        };
        let genus = uint("genus", obj.get("genus").ok_or_else(|| err("genus", "missing"))?)?;
        let kind = match obj.get("kind").map(|k| k.as_str()) {
            None | Some(Some("closed")) => Kind::Closed,
            Some(Some("disc")) => Kind::Disc,
            _ => return Err(err("kind", "expected \"closed\" or \"disc\"")),
        };
        let k = match obj.get("k") {
            None | Some(Value::Null) => None,
            Some(x) => Some(uint("k", x)?),
        };
        let arr = |key: &str| -> Result<&Vec<Value>> {
            obj.get(key).ok_or_else(|| err(key, "missing"))?.as_array().ok_or_else(|| err(key, "expected an array"))
        };
        let curves_v = arr("curves")?;
        let crossings_v = arr("crossings")?;

        let mut crossings = Vec::new();
        let mut xindex = HashMap::new();
        let mut given_ends = Vec::new();
        for (i, x) in crossings_v.iter().enumerate() {
            let p = format!("crossings[{i}]");
            let o = x.as_object().ok_or_else(|| err(&p, "expected an object"))?;
            if strict {
                if let Some(k) = o.keys().find(|k| !["id", "sign", "ends"].contains(&k.as_str())) {
                    return Err(err(&format!("{p}.{k}"), "unknown key"));
                }
            }
            let id = o.get("id").and_then(Value::as_str).ok_or_else(|| err(&format!("{p}.id"), "expected a string"))?;
            let sign = match o.get("sign").and_then(Value::as_i64) {
                Some(1) => 1,
                Some(-1) => -1,
                _ => return Err(err(&format!("{p}.sign"), "expected 1 or -1")),
            };
            if xindex.insert(id.to_string(), i).is_some() {
                return Err(err(&format!("{p}.id"), &format!("duplicate crossing id '{id}'")));
            }
            crossings.push(Crossing { id: id.to_string(), sign, ends: [(0, 0), (0, 0)] });
            given_ends.push(o.get("ends").cloned());
        }

        let mut curves = Vec::new();
        let mut cindex = HashMap::new();
        for (i, c) in curves_v.iter().enumerate() {
            let p = format!("curves[{i}]");
            let o = c.as_object().ok_or_else(|| err(&p, "expected an object"))?;
            if strict {
                if let Some(k) = o.keys().find(|k| !["id", "color", "visits"].contains(&k.as_str())) {
                    return Err(err(&format!("{p}.{k}"), "unknown key"));
                }
            }
            let id = o.get("id").and_then(Value::as_str).ok_or_else(|| err(&format!("{p}.id"), "expected a string"))?;
            let color = o
                .get("color")
                .and_then(Value::as_str)
                .and_then(Color::parse)
                .ok_or_else(|| err(&format!("{p}.color"), "expected red, blue or green"))?;
            let mut visits = Vec::new();
            for (j, x) in o.get("visits").and_then(Value::as_array).ok_or_else(|| err(&format!("{p}.visits"), "expected an array"))?.iter().enumerate() {
                let name = x.as_str().ok_or_else(|| err(&format!("{p}.visits[{j}]"), "expected a crossing id"))?;
                visits.push(*xindex.get(name).ok_or_else(|| err(&format!("{p}.visits[{j}]"), &format!("unknown crossing '{name}'")))?);
            }
            if cindex.insert(id.to_string(), i).is_some() {
                return Err(err(&format!("{p}.id"), &format!("duplicate curve id '{id}'")));
            }
            curves.push(Curve { id: id.to_string(), color, visits });
        }

        let mut d = Diagram { genus, kind, k, curves, crossings, embedding: None };
        d.rebuild_ends()?;
        for (i, e) in given_ends.iter().enumerate() {
            let Some(e) = e else { continue };
            let p = format!("crossings[{i}].ends");
            let pairs = e.as_array().filter(|a| a.len() == 2).ok_or_else(|| err(&p, "expected two [curve, index] pairs"))?;
            let mut got = Vec::new();
            for pr in pairs {
                let a = pr.as_array().filter(|a| a.len() == 2).ok_or_else(|| err(&p, "expected [curve, index]"))?;
                let cid = a[0].as_str().ok_or_else(|| err(&p, "curve id must be a string"))?;
                let c = *cindex.get(cid).ok_or_else(|| err(&p, &format!("unknown curve '{cid}'")))?;
                got.push((c, uint(&p, &a[1])?));
            }
            let want = d.crossings[i].ends;
            if !(got[0] == want[0] && got[1] == want[1]) && !(got[0] == want[1] && got[1] == want[0]) {
                return Err(err(&p, "ends disagree with the curves' visit lists"));
            }
        }

        if let Some(rv) = obj.get("regions") {
            let regs: Vec<String> = rv
                .as_array()
                .ok_or_else(|| err("regions", "expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, r)| r.as_str().map(str::to_string).ok_or_else(|| err(&format!("regions[{i}]"), "expected a string")))
                .collect::<Result<_>>()?;
            let rindex: HashMap<&str, usize> = regs.iter().enumerate().map(|(i, r)| (r.as_str(), i)).collect();
            let ss = obj
                .get("segment_sides")
                .ok_or_else(|| err("segment_sides", "required with regions"))?
                .as_object()
                .ok_or_else(|| err("segment_sides", "expected an object keyed by curve id"))?;
            let mut sides = vec![Vec::new(); d.curves.len()];
            for (cid, list) in ss {
                let p = format!("segment_sides.{cid}");
                let c = *cindex.get(cid.as_str()).ok_or_else(|| err(&p, "unknown curve"))?;
                for (j, pr) in list.as_array().ok_or_else(|| err(&p, "expected an array"))?.iter().enumerate() {
                    let a = pr.as_array().filter(|a| a.len() == 2).ok_or_else(|| err(&format!("{p}[{j}]"), "expected [left, right]"))?;
                    let mut pair = [0; 2];
                    for s in 0..2 {
                        let name = a[s].as_str().unwrap_or("");
                        pair[s] = *rindex.get(name).ok_or_else(|| err(&format!("{p}[{j}]"), &format!("unknown region '{name}'")))?;
                    }
                    sides[c].push(pair);
                }
            }
            let boundary = match obj.get("boundary") {
                None | Some(Value::Null) => None,
                Some(b) => {
                    let name = b.as_str().ok_or_else(|| err("boundary", "expected a region id"))?;
                    Some(*rindex.get(name).ok_or_else(|| err("boundary", &format!("unknown region '{name}'")))?)
                }
            };
            d.embedding = Some(Embedding { regions: regs, sides, boundary });
        } else if obj.contains_key("segment_sides") || obj.contains_key("boundary") {
            return Err(err("regions", "missing"));
        }
        Ok(d)
    }
}

impl Embedding {
    pub fn region_of(&self, s: Side) -> usize {
        self.sides[s.curve][s.segment][s.right as usize]
    }
}

/// Names accepted by [`catalog`].
pub const CATALOG: [&str; 5] = ["s4", "cp2", "cp2bar", "s4-disc", "s1xs3"];

pub fn catalog(name: &str) -> Option<Diagram> {
    match name {
        "s4" => Some(standard_s4()),
        "cp2" => Some(cp2()),
        "cp2bar" => Some(cp2bar()),
        "s4-disc" => Some(s4_disc()),
        "s1xs3" => Some(s1xs3()),
        _ => None,
    }
}

/// The genus-3 diagram of S⁴: three split handles. In handle 1 the green curve
/// c1 meets F1 and b1, in handle 2 the blue b2 meets F2 and c2, in handle 3 the
/// red F3 meets b3 and c3.
pub fn standard_s4() -> Diagram {
    use Color::*;
    let mut d = Diagram::build(
        3,
        Kind::Closed,
        Some(1),
        &[
            ("F1", Red, &["p1"]),
            ("F2", Red, &["p3"]),
            ("F3", Red, &["p5", "p6"]),
            ("b1", Blue, &["p2"]),
            ("b2", Blue, &["p3", "p4"]),
            ("b3", Blue, &["p5"]),
            ("c1", Green, &["p1", "p2"]),
            ("c2", Green, &["p4"]),
            ("c3", Green, &["p6"]),
        ],
        &[("p1", 1), ("p2", 1), ("p3", 1), ("p4", 1), ("p5", 1), ("p6", 1)],
    )
    .expect("catalog diagram");
    // one face of each handle carries the connecting tubes
    let tubes = vec![Side::left(0, 0), Side::left(1, 0), Side::left(5, 0)];
    d.embedding = Some(d.derive_embedding(&[tubes]));
    d
}

/// Genus-1 diagram of ℂP²: three curves meeting pairwise once.
pub fn cp2() -> Diagram {
    cp2_with_signs([1, 1, 1], "cp2")
}

/// The mirror of [`cp2`].
pub fn cp2bar() -> Diagram {
    cp2_with_signs([-1, -1, -1], "cp2bar")
}

fn cp2_with_signs(s: [i8; 3], _name: &str) -> Diagram {
    use Color::*;
    let mut d = Diagram::build(
        1,
        Kind::Closed,
        Some(0),
        &[("a", Red, &["x", "z"]), ("b", Blue, &["x", "y"]), ("c", Green, &["y", "z"])],
        &[("x", s[0]), ("y", s[1]), ("z", s[2])],
    )
    .expect("catalog diagram");
    d.embedding = Some(d.derive_embedding(&[]));
    d
}

/// [`standard_s4`] with a disc removed from the face carrying the tubes.
pub fn s4_disc() -> Diagram {
    standard_s4().remove_disc().expect("closed")
}

/// Genus-1 diagram of S¹×S³: three parallel curves without crossings.
pub fn s1xs3() -> Diagram {
    use Color::*;
    let mut d = Diagram::build(1, Kind::Closed, Some(1), &[("a", Red, &[]), ("b", Blue, &[]), ("c", Green, &[])], &[])
        .expect("catalog diagram");
    // regions ab, bc, ca between consecutive curves
    d.embedding = Some(Embedding {
        regions: vec!["ab".into(), "bc".into(), "ca".into()],
        sides: vec![vec![[2, 0]], vec![[0, 1]], vec![[1, 2]]],
        boundary: None,
    });
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_values() {
        assert_eq!(euler_characteristic(3, 1).unwrap(), 2);
        assert_eq!(euler_characteristic(1, 0).unwrap(), 3);
        assert_eq!(euler_characteristic(0, 0).unwrap(), 2);
        assert!(euler_characteristic(1, 2).is_err());
        assert!(euler_characteristic(-1, 0).is_err());
        assert_eq!(standard_s4().euler().unwrap().unwrap(), 2);
        assert_eq!(cp2().euler().unwrap().unwrap(), 3);
    }

    #[test]
    fn catalog_is_valid() {
        for name in CATALOG {
            let d = catalog(name).unwrap();
            let r = d.validate(true);
            assert!(r.is_ok(), "{name}: {r}");
            let visits: usize = d.curves.iter().map(|c| c.visits.len()).sum();
            assert_eq!(visits, 2 * d.crossings.len());
        }
        assert_eq!(standard_s4().crossings.len(), 6);
        assert_eq!(cp2().crossings.len(), 3);
    }

    #[test]
    fn s4_meridians_visit_consecutively() {
        let d = standard_s4();
        for m in ["c1", "b2", "F3"] {
            assert_eq!(d.curves[d.curve_index(m).unwrap()].visits.len(), 2);
        }
        // handle faces: two per handle, three merged by the tubes
        assert_eq!(d.face_count(), 6);
        assert_eq!(d.embedding.as_ref().unwrap().regions.len(), 4);
    }

    #[test]
    fn cp2_pairs_meet_once() {
        let d = cp2();
        for (a, b) in [(Color::Red, Color::Blue), (Color::Blue, Color::Green), (Color::Green, Color::Red)] {
            let n = (0..3).filter(|&x| d.strand_color(x, 0) == a && d.strand_color(x, 1) == b).count();
            assert_eq!(n, 1);
        }
        assert_eq!(d.face_count(), 3);
        assert_eq!(cp2bar().face_count(), 3);
    }

    #[test]
    fn cp2_faces_match_exhaustive_region_search() {
        // brute force over all assignments of 3 region labels to the 12 sides
        let d = cp2();
        let sides: Vec<Side> = (0..3).flat_map(|c| (0..2).flat_map(move |s| [Side::left(c, s), Side::right(c, s)])).collect();
        let corners: Vec<(usize, usize)> = (0..3)
            .flat_map(|x| d.corners(x))
            .map(|(s, t)| (sides.iter().position(|&u| u == s).unwrap(), sides.iter().position(|&u| u == t).unwrap()))
            .collect();
        let mut surjective = 0;
        for code in 0..3usize.pow(12) {
            let mut lab = [0usize; 12];
            let mut c = code;
            for l in lab.iter_mut() {
                *l = c % 3;
                c /= 3;
            }
            if corners.iter().all(|&(s, t)| lab[s] == lab[t]) && (0..3).all(|r| lab.contains(&r)) {
                surjective += 1;
            }
        }
        // exactly the 3! labellings of the three faces
        assert_eq!(surjective, 6);
    }

    #[test]
    fn validation_flags_problems() {
        let mut d = cp2();
        d.curves[1].color = Color::Red;
        let r = d.validate(true);
        assert!(r.has("same-colour intersection"));
        assert!(r.has("curve count"));

        let mut d = cp2();
        d.crossings[0].ends[0] = (7, 0);
        assert!(d.validate(false).has("dangling end"));

        let mut d = cp2();
        d.curves[0].visits.push(2);
        assert!(!d.validate(false).is_ok());

        let mut d = cp2();
        d.embedding.as_mut().unwrap().sides[0][0].swap(0, 1);
        assert!(d.validate(true).has("corner mismatch"));
    }

    #[test]
    fn json_round_trip() {
        for name in CATALOG {
            let d = catalog(name).unwrap();
            let text = d.to_json_string();
            let back = Diagram::from_json(&text, true).unwrap();
            assert_eq!(back, d, "{name}");
            assert_eq!(back.to_json_string(), text);
        }
    }

    #[test]
    fn json_errors_have_context() {
        let text = cp2().to_json_string();
        assert!(Diagram::from_json(&text[..text.len() / 2], true).is_err());
        let bad = text.replace("\"visits\": [\n        \"x\"", "\"visits\": [\n        \"q\"");
        let e = Diagram::from_json(&bad, true).unwrap_err().to_string();
        assert!(e.contains("curves[0].visits[0]"), "{e}");
        let mut v = cp2().to_json();
        v["extra"] = json!(1);
        assert!(Diagram::from_value(&v, true).is_err());
        assert!(Diagram::from_value(&v, false).is_ok());
    }

    #[test]
    fn connected_sum_and_disc() {
        let d = Diagram::connected_sum(&cp2(), &cp2()).unwrap();
        assert_eq!(d.genus, 2);
        assert_eq!(d.crossings.len(), 6);
        assert!(d.validate(true).is_ok(), "{}", d.validate(true));
        assert_eq!(d.embedding.as_ref().unwrap().regions.len(), 5);
        let s = Diagram::connected_sum(&cp2(), &standard_s4()).unwrap();
        assert!(s.validate(true).is_ok());
        let disc = standard_s4().remove_disc().unwrap();
        assert_eq!(disc.genus, 3);
        assert!(disc.remove_disc().is_err());
        assert!(Diagram::connected_sum(&disc, &cp2()).is_err());
    }

    #[test]
    fn canonical_ignores_crossing_names() {
        let mut d = cp2();
        d.crossings.swap(0, 2);
        for c in d.curves.iter_mut() {
            for v in c.visits.iter_mut() {
                *v = match *v {
                    0 => 2,
                    2 => 0,
                    x => x,
                };
            }
        }
        d.crossings[0].id = "zz".into();
        assert!(d.same_up_to_relabel(&cp2()));
        assert!(!cp2bar().same_up_to_relabel(&cp2()));
    }
}
