//! Finite groups given by Cayley tables, their irreducible representations,
//! and finite group actions.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

/// An irreducible representation, one matrix per group element.
#[derive(Clone, Debug)]
pub struct GroupRep {
    pub name: String,
    pub dim: usize,
    pub matrices: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct Group {
    name: String,
    elements: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    irreps: Option<Arc<Vec<GroupRep>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    elements: Vec<String>,
    table: Vec<Vec<String>>,
}

impl Group {
    /// Builds a group from a multiplication table `table[a][b] = a·b`.
    pub fn from_table(name: &str, elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Group> {
        let n = elements.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Parse(format!("group {name}: malformed table")));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let m = |a: usize, b: usize| flat[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Error::AxiomViolation(format!("group {name}: no identity")))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| Error::AxiomViolation(format!("group {name}: element without inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::AxiomViolation(format!("group {name}: not associative")));
                    }
                }
            }
        }
        let mut g = Group { name: name.to_string(), elements, table: flat, identity, inverse, irreps: None };
        if g.is_abelian() {
            g.irreps = Some(Arc::new(g.abelian_characters()));
        }
        Ok(g)
    }

    fn from_fn(name: &str, elements: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Group {
        let n = elements.len();
        let table = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Group::from_table(name, elements, table).expect("built-in group tables are valid")
    }

    pub fn trivial() -> Group {
        Group::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Group {
        Group::from_fn(&format!("Z/{n}"), (0..n).map(|i| i.to_string()).collect(), |a, b| (a + b) % n)
    }

    /// Dihedral group of order 2n; element `(k, j)` is r^k s^j.
    pub fn dihedral(n: usize) -> Group {
        let idx = |k: usize, j: usize| j * n + k;
        let names = (0..2 * n).map(|i| if i < n { format!("r{}", i) } else { format!("s{}", i - n) }).collect();
        let mut g = Group::from_fn(&format!("D{n}"), names, |a, b| {
            let (k1, j1, k2, j2) = (a % n, a / n, b % n, b / n);
            let k = if j1 == 0 { k1 + k2 } else { k1 + n - k2 };
            idx(k % n, (j1 + j2) % 2)
        });
        if !g.is_abelian() {
            g.irreps = Some(Arc::new(dihedral_irreps(n)));
        }
        g
    }

    /// Symmetric group on n letters; elements are one-line images, composed
    /// as (στ)(i) = σ(τ(i)).
    pub fn symmetric(n: usize) -> Group {
        let perms = permutations(n);
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let names = perms.iter().map(|p| p.iter().map(|x| x.to_string()).collect::<String>()).collect();
        let mut g = Group::from_fn(&format!("S{n}"), names, |a, b| {
            let c: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            index[&c]
        });
        if !g.is_abelian() {
            if let Some(r) = symmetric_irreps(n, &perms) {
                g.irreps = Some(Arc::new(r));
            }
        }
        g
    }

    /// Direct product; elements are written `(a,b)`.
    pub fn product(a: &Group, b: &Group) -> Group {
        let nb = b.order();
        let names = a
            .elements
            .iter()
            .flat_map(|x| b.elements.iter().map(move |y| format!("({x},{y})")))
            .collect();
        let mut g = Group::from_fn(&format!("{}x{}", a.name, b.name), names, |x, y| {
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
        });
        if g.irreps.is_none() {
            if let (Some(ra), Some(rb)) = (&a.irreps, &b.irreps) {
                let mut reps = Vec::new();
                for p in ra.iter() {
                    for q in rb.iter() {
                        let matrices = (0..g.order()).map(|x| p.matrices[x / nb].kron(&q.matrices[x % nb])).collect();
                        reps.push(GroupRep { name: format!("{}⊗{}", p.name, q.name), dim: p.dim * q.dim, matrices });
                    }
                }
                g.irreps = Some(Arc::new(reps));
            }
        }
        g
    }

    /// The opposite group, with product a·b := ba.
    pub fn opposite(&self) -> Group {
        let n = self.order();
        let table = (0..n).map(|a| (0..n).map(|b| self.mul(b, a)).collect()).collect();
        let mut g = Group::from_table(&format!("{}^op", self.name), self.elements.clone(), table).unwrap();
        if let Some(r) = &self.irreps {
            if !self.is_abelian() {
                let reps = r
                    .iter()
                    .map(|p| GroupRep {
                        name: p.name.clone(),
                        dim: p.dim,
                        matrices: p.matrices.iter().map(Mat::transpose).collect(),
                    })
                    .collect();
                g.irreps = Some(Arc::new(reps));
            }
        }
        g
    }

    /// Parses `Z/n`, `Zn`, `Dn`, `Sn`, `trivial`, and `x`-separated products.
    pub fn parse(spec: &str) -> Result<Group> {
        let spec = spec.trim();
        let parts: Vec<&str> = spec.split('x').map(str::trim).collect();
        if parts.len() > 1 {
            let mut g = Group::parse(parts[0])?;
            for p in &parts[1..] {
                g = Group::product(&g, &Group::parse(p)?);
            }
            return Ok(g);
        }
        let bad = || Error::Parse(format!("unknown group '{spec}'"));
        let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(bad);
        if spec == "trivial" || spec == "1" {
            Ok(Group::trivial())
        } else if let Some(r) = spec.strip_prefix("Z/").or_else(|| spec.strip_prefix('Z')) {
            Ok(Group::cyclic(num(r)?))
        } else if let Some(r) = spec.strip_prefix('D') {
            let n = num(r)?;
            if n < 3 {
                return Err(bad());
            }
            Ok(Group::dihedral(n))
        } else if let Some(r) = spec.strip_prefix('S') {
            let n = num(r)?;
            if n > 5 {
                return Err(bad());
            }
            Ok(Group::symmetric(n))
        } else {
            Err(bad())
        }
    }

    /// [`Group::parse`], or `file:<path>` for a group file.
    pub fn from_spec(spec: &str) -> Result<Group> {
        match spec.strip_prefix("file:") {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                let name = std::path::Path::new(path).file_stem().and_then(|s| s.to_str()).unwrap_or("G");
                Group::from_json(name, &text)
            }
            None => Group::parse(spec),
        }
    }

    /// Reads `{"elements": [...], "table": [[...]]}` where table entries are element names.
    pub fn from_json(name: &str, text: &str) -> Result<Group> {
        let f: GroupFile = serde_json::from_str(text)?;
        let index: HashMap<&str, usize> = f.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        if index.len() != f.elements.len() {
            return Err(Error::Parse("duplicate group element names".into()));
        }
        let table = f
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| index.get(e.as_str()).copied().ok_or_else(|| Error::Parse(format!("unknown element '{e}'"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut g = Group::from_table(name, f.elements.clone(), table)?;
        g.attach_builtin_irreps();
        Ok(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let table: Vec<Vec<String>> = (0..self.order())
            .map(|a| (0..self.order()).map(|b| self.elements[self.mul(a, b)].clone()).collect())
            .collect();
        serde_json::to_value(GroupFile { elements: self.elements.clone(), table }).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        seen.insert(self.identity);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&self.identity)
            && elems.iter().all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// All subgroups, each as a sorted element list.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([vec![self.identity]]);
        found.insert(vec![self.identity]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_err() {
                    let mut gens = h.clone();
                    gens.push(g);
                    let k = self.closure(&gens);
                    if found.insert(k.clone()) {
                        queue.push_back(k);
                    }
                }
            }
        }
        found.into_iter().collect()
    }

    /// Subgroups up to conjugacy.
    pub fn subgroup_classes(&self) -> Vec<Vec<usize>> {
        let mut reps: Vec<Vec<usize>> = Vec::new();
        let mut covered: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in self.subgroups() {
            if covered.contains(&h) {
                continue;
            }
            for g in 0..self.order() {
                let mut c: Vec<usize> = h.iter().map(|&x| self.mul(self.mul(g, x), self.inv(g))).collect();
                c.sort_unstable();
                covered.insert(c);
            }
            reps.push(h);
        }
        reps
    }

    /// The subgroup on `elems` as a standalone group, with irreps when they can be found.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Group> {
        if !self.is_subgroup(elems) {
            return Err(Error::Incompatible("elements do not form a subgroup".into()));
        }
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let table = elems.iter().map(|&a| elems.iter().map(|&b| pos[&self.mul(a, b)]).collect()).collect();
        let names = elems.iter().map(|&e| self.elements[e].clone()).collect();
        let mut g = Group::from_table(&format!("subgroup of {}", self.name), names, table)?;
        if g.irreps.is_none() && elems.len() == self.order() {
            if let Some(r) = &self.irreps {
                let matrices_of = |p: &GroupRep| elems.iter().map(|&e| p.matrices[e].clone()).collect();
                g.irreps = Some(Arc::new(
                    r.iter().map(|p| GroupRep { name: p.name.clone(), dim: p.dim, matrices: matrices_of(p) }).collect(),
                ));
            }
        }
        g.attach_builtin_irreps();
        Ok(g)
    }

    /// Looks for an isomorphism onto a built-in group with known irreps and pulls them back.
    fn attach_builtin_irreps(&mut self) {
        if self.irreps.is_some() {
            return;
        }
        let n = self.order();
        let mut candidates = Vec::new();
        if n.is_multiple_of(2) && n >= 6 {
            candidates.push(Group::dihedral(n / 2));
        }
        if n == 6 || n == 24 {
            candidates.push(Group::symmetric(if n == 6 { 3 } else { 4 }));
        }
        for c in candidates {
            if let (Some(iso), Some(reps)) = (self.isomorphism_to(&c), c.irreps.clone()) {
                let pulled = reps
                    .iter()
                    .map(|p| GroupRep {
                        name: p.name.clone(),
                        dim: p.dim,
                        matrices: (0..n).map(|x| p.matrices[iso[x]].clone()).collect(),
                    })
                    .collect();
                self.irreps = Some(Arc::new(pulled));
                return;
            }
        }
    }

    fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        // prefer high-order elements so fewer generators are needed
        let mut order: Vec<usize> = (0..self.order()).collect();
        order.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        for a in order {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// An isomorphism `self -> other`, as an element map, if one exists.
    pub fn isomorphism_to(&self, other: &Group) -> Option<Vec<usize>> {
        if self.order() != other.order() {
            return None;
        }
        let gens = self.generators();
        let mut images = Vec::new();
        self.iso_search(other, &gens, &mut images)
    }

    fn iso_search(&self, other: &Group, gens: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
        if images.len() == gens.len() {
            return self.extend_hom(other, gens, images);
        }
        let g = gens[images.len()];
        let ord = self.element_order(g);
        for cand in 0..other.order() {
            if other.element_order(cand) == ord {
                images.push(cand);
                if let Some(m) = self.iso_search(other, gens, images) {
                    return Some(m);
                }
                images.pop();
            }
        }
        None
    }

    fn extend_hom(&self, other: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[self.identity] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = other.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let distinct: BTreeSet<usize> = map.iter().copied().collect();
        if distinct.len() != n {
            return None;
        }
        for a in 0..n {
            for b in 0..n {
                if map[self.mul(a, b)] != other.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }

    fn abelian_characters(&self) -> Vec<GroupRep> {
        let e = self.exponent();
        let gens = self.generators();
        let mut chars: Vec<Vec<usize>> = Vec::new();
        let mut assign = vec![0usize; gens.len()];
        loop {
            if let Some(vals) = self.character_from(&gens, &assign, e) {
                if !chars.contains(&vals) {
                    chars.push(vals);
                }
            }
            // odometer over e^{#gens} assignments
            let mut i = 0;
            while i < assign.len() {
                assign[i] += 1;
                if assign[i] < e {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
            if i == assign.len() {
                break;
            }
        }
        chars.sort();
        chars
            .into_iter()
            .enumerate()
            .map(|(k, vals)| GroupRep {
                name: format!("chi{k}"),
                dim: 1,
                matrices: vals.iter().map(|&v| Mat::scalar(Scalar::root_of_unity(e as u32, v as i64))).collect(),
            })
            .collect()
    }

    /// Exponents (mod e) of a character sending generator i to ζ_e^{assign[i]}.
    fn character_from(&self, gens: &[usize], assign: &[usize], e: usize) -> Option<Vec<usize>> {
        let n = self.order();
        let mut vals = vec![usize::MAX; n];
        vals[self.identity] = 0;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &a) in gens.iter().zip(assign) {
                let y = self.mul(x, g);
                let v = (vals[x] + a) % e;
                if vals[y] == usize::MAX {
                    vals[y] = v;
                    queue.push_back(y);
                } else if vals[y] != v {
                    return None;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if vals[self.mul(a, b)] != (vals[a] + vals[b]) % e {
                    return None;
                }
            }
        }
        Some(vals)
    }

    /// Complete list of irreducible representations, if known.
    pub fn irreps(&self) -> Option<&[GroupRep]> {
        self.irreps.as_deref().map(|v| v.as_slice())
    }

    pub fn set_irreps(&mut self, reps: Vec<GroupRep>) -> Result<()> {
        check_irreps(self, &reps)?;
        self.irreps = Some(Arc::new(reps));
        Ok(())
    }
}

/// Checks homomorphism property, Σ dim² = |G| and character orthogonality.
pub fn check_irreps(g: &Group, reps: &[GroupRep]) -> Result<()> {
    let n = g.order();
    let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
    if total != n {
        return Err(Error::AxiomViolation(format!("sum of squared dimensions is {total}, expected {n}")));
    }
    for r in reps {
        if r.matrices.len() != n || r.matrices.iter().any(|m| m.rows != r.dim || m.cols != r.dim) {
            return Err(Error::Parse(format!("representation {} has wrong shape", r.name)));
        }
        for a in 0..n {
            for b in 0..n {
                if !r.matrices[a].mul(&r.matrices[b]).approx_eq(&r.matrices[g.mul(a, b)], 1e-9) {
                    return Err(Error::AxiomViolation(format!("{} is not a homomorphism", r.name)));
                }
            }
        }
    }
    for (i, r) in reps.iter().enumerate() {
        for s in &reps[i..] {
            let mut acc = Scalar::zero();
            for a in 0..n {
                acc = acc.add(&r.matrices[a].trace().mul(&s.matrices[g.inv(a)].trace()));
            }
            let expect = if std::ptr::eq(r, s) { Scalar::int(n as i64) } else { Scalar::zero() };
            if !acc.approx_eq(&expect, 1e-9) {
                return Err(Error::AxiomViolation(format!("characters of {} and {} not orthonormal", r.name, s.name)));
            }
        }
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    permute(&mut cur, 0, &mut out);
    out.sort();
    out
}

fn permute(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Action on the sum-zero subspace with basis e_i - e_{i+1}.
fn standard_matrix(p: &[usize]) -> Mat {
    let n = p.len();
    let mut m = Mat::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        let mut x = vec![0i64; n];
        x[p[i]] += 1;
        x[p[i + 1]] -= 1;
        let mut prefix = 0;
        for (r, xv) in x.iter().take(n - 1).enumerate() {
            prefix += xv;
            m.set(r, i, Scalar::int(prefix));
        }
    }
    m
}

fn symmetric_irreps(n: usize, perms: &[Vec<usize>]) -> Option<Vec<GroupRep>> {
    let one = |s: i64| Mat::scalar(Scalar::int(s));
    let trivial = GroupRep { name: "trivial".into(), dim: 1, matrices: perms.iter().map(|_| one(1)).collect() };
    let sign = GroupRep { name: "sign".into(), dim: 1, matrices: perms.iter().map(|p| one(perm_sign(p))).collect() };
    let standard = GroupRep { name: "standard".into(), dim: n - 1, matrices: perms.iter().map(|p| standard_matrix(p)).collect() };
    match n {
        3 => Some(vec![trivial, sign, standard]),
        4 => {
            let twisted = GroupRep {
                name: "standard⊗sign".into(),
                dim: 3,
                matrices: perms.iter().map(|p| standard_matrix(p).scale(&Scalar::int(perm_sign(p)))).collect(),
            };
            // S4 -> S3 through the action on the three pairings of {0,1,2,3}
            let pairings = [[0usize, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
            let which = |a: usize, b: usize| {
                pairings
                    .iter()
                    .position(|q| (q[0] == a.min(b) && q[1] == a.max(b)) || (q[2] == a.min(b) && q[3] == a.max(b)))
                    .unwrap()
            };
            let two = GroupRep {
                name: "two-dimensional".into(),
                dim: 2,
                matrices: perms
                    .iter()
                    .map(|p| {
                        let image: Vec<usize> = pairings.iter().map(|q| which(p[q[0]], p[q[1]])).collect();
                        standard_matrix(&image)
                    })
                    .collect(),
            };
            Some(vec![trivial, sign, standard, twisted, two])
        }
        _ => None,
    }
}

fn dihedral_irreps(n: usize) -> Vec<GroupRep> {
    let elems: Vec<(usize, usize)> = (0..2 * n).map(|i| (i % n, i / n)).collect();
    let one = |s: i64| Mat::scalar(Scalar::int(s));
    let mut reps = vec![
        GroupRep { name: "trivial".into(), dim: 1, matrices: elems.iter().map(|_| one(1)).collect() },
        GroupRep {
            name: "det".into(),
            dim: 1,
            matrices: elems.iter().map(|&(_, j)| one(if j == 0 { 1 } else { -1 })).collect(),
        },
    ];
    if n.is_multiple_of(2) {
        let sgn = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
        reps.push(GroupRep { name: "alt".into(), dim: 1, matrices: elems.iter().map(|&(k, _)| one(sgn(k))).collect() });
        reps.push(GroupRep {
            name: "alt-det".into(),
            dim: 1,
            matrices: elems.iter().map(|&(k, j)| one(sgn(k) * if j == 0 { 1 } else { -1 })).collect(),
        });
    }
    for h in 1..=(n - 1) / 2 {
        let matrices = elems
            .iter()
            .map(|&(k, j)| {
                let z = Scalar::root_of_unity(n as u32, (h * k) as i64);
                let zi = Scalar::root_of_unity(n as u32, -((h * k) as i64));
                let rot = Mat::from_rows(vec![vec![z, Scalar::zero()], vec![Scalar::zero(), zi]]);
                if j == 0 {
                    rot
                } else {
                    rot.mul(&Mat::from_ints(&[&[0, 1], &[1, 0]]))
                }
            })
            .collect();
        reps.push(GroupRep { name: format!("rho{h}"), dim: 2, matrices });
    }
    reps
}

/// A finite left action of a group on a set.
#[derive(Clone, Debug)]
pub struct GSet {
    group: Arc<Group>,
    points: Vec<String>,
    /// `action[g][m] = g ▷ m`.
    action: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GSetFile {
    points: Vec<String>,
    action: Vec<Vec<String>>,
}

impl GSet {
    pub fn new(group: Arc<Group>, points: Vec<String>, action: Vec<Vec<usize>>) -> Result<GSet> {
        let n = points.len();
        if n == 0 || action.len() != group.order() || action.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Parse("malformed action table".into()));
        }
        for m in 0..n {
            if action[group.identity()][m] != m {
                return Err(Error::AxiomViolation("identity does not act trivially".into()));
            }
            for a in 0..group.order() {
                for b in 0..group.order() {
                    if action[group.mul(a, b)][m] != action[a][action[b][m]] {
                        return Err(Error::AxiomViolation("action is not compatible with the product".into()));
                    }
                }
            }
        }
        Ok(GSet { group, points, action })
    }

    pub fn point(group: Arc<Group>) -> GSet {
        let action = vec![vec![0]; group.order()];
        GSet { group, points: vec!["*".into()], action }
    }

    /// Left cosets gH with the action by left multiplication.
    pub fn cosets(group: Arc<Group>, subgroup: &[usize]) -> Result<GSet> {
        if !group.is_subgroup(subgroup) {
            return Err(Error::Incompatible("coset data is not a subgroup".into()));
        }
        let coset_of = |g: usize| -> Vec<usize> {
            let mut c: Vec<usize> = subgroup.iter().map(|&h| group.mul(g, h)).collect();
            c.sort_unstable();
            c
        };
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for g in 0..group.order() {
            let c = coset_of(g);
            if !cosets.contains(&c) {
                cosets.push(c);
            }
        }
        let action = (0..group.order())
            .map(|k| {
                cosets
                    .iter()
                    .map(|c| {
                        let t = coset_of(group.mul(k, c[0]));
                        cosets.iter().position(|d| *d == t).unwrap()
                    })
                    .collect()
            })
            .collect();
        let points = cosets.iter().map(|c| format!("{}H", group.element_name(c[0]))).collect();
        GSet::new(group, points, action)
    }

    pub fn from_json(group: Arc<Group>, text: &str) -> Result<GSet> {
        let f: GSetFile = serde_json::from_str(text)?;
        let idx = |s: &str| f.points.iter().position(|p| p == s).ok_or_else(|| Error::Parse(format!("unknown point '{s}'")));
        let action = f
            .action
            .iter()
            .map(|row| row.iter().map(|s| idx(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        GSet::new(group, f.points.clone(), action)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    #[inline]
    pub fn act(&self, g: usize, m: usize) -> usize {
        self.action[g][m]
    }

    /// The action restricted to the subgroup on `elems` (sorted group indices).
    pub fn restrict(&self, elems: &[usize]) -> Result<GSet> {
        let sub = Arc::new(self.group.subgroup(elems)?);
        let action = elems.iter().map(|&g| self.action[g].clone()).collect();
        GSet::new(sub, self.points.clone(), action)
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.size()).all(|m| self.action.iter().any(|row| row[0] == m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_irreps_are_complete() {
        for name in ["Z/1", "Z/5", "Z/2xZ/2", "Z/2xZ/6", "S3", "S4", "D4", "D5", "D6", "Z/3xS3"] {
            let g = Group::parse(name).unwrap();
            let reps = g.irreps().unwrap_or_else(|| panic!("{name} has no irreps"));
            check_irreps(&g, reps).unwrap();
        }
    }

    #[test]
    fn opposite_irreps() {
        let g = Group::symmetric(3).opposite();
        check_irreps(&g, g.irreps().unwrap()).unwrap();
    }

    #[test]
    fn subgroup_irreps_by_isomorphism() {
        let d6 = Group::dihedral(6);
        let classes = d6.subgroup_classes();
        for h in classes {
            let sub = d6.subgroup(&h).unwrap();
            let reps = sub.irreps().unwrap_or_else(|| panic!("subgroup of order {} lacks irreps", h.len()));
            check_irreps(&sub, reps).unwrap();
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(Group::symmetric(3).subgroups().len(), 6);
        assert_eq!(Group::dihedral(4).subgroups().len(), 10);
        assert_eq!(Group::cyclic(12).subgroups().len(), 6);
    }

    #[test]
    fn coset_action() {
        let g = Arc::new(Group::symmetric(3));
        let h = g.closure(&[g.index_of("102").unwrap()]);
        let m = GSet::cosets(g, &h).unwrap();
        assert_eq!(m.size(), 3);
        assert!(m.is_transitive());
    }

    #[test]
    fn json_roundtrip() {
        let g = Group::dihedral(4);
        let back = Group::from_json("D4", &g.to_json().to_string()).unwrap();
        assert_eq!(back.order(), 8);
        assert!(back.irreps().is_some());
    }

    #[test]
    fn bad_tables_rejected() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(Group::from_table("bad", names, vec![vec![0, 0], vec![0, 1]]).is_err());
    }
}
