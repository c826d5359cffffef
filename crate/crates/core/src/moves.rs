//! Trisection moves on diagrams: basepoint shifts, orientation reversal,
//! two-point and three-point moves, handle slides and (de)stabilisation.

use crate::diagram::{standard_s4, Crossing, Diagram, Embedding, Kind};
use crate::error::{Error, Result};
use crate::triplet::Color;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case", deny_unknown_fields)]
pub enum Move {
    ShiftBasepoint { curve: String, offset: i64 },
    ReverseOrientation { curve: String },
    TwoPointInsert { lambda: String, pos_lambda: usize, mu: String, pos_mu: usize, sign: i8 },
    TwoPointDelete { p: String, q: String },
    ThreePointFlip { p: String, q: String, r: String },
    HandleSlide { lambda: String, mu: String, pos: usize, start: usize, dir: i8 },
    Stabilize,
    Destabilize,
}

impl Move {
    pub fn apply(&self, d: &Diagram) -> Result<Diagram> {
        match self {
            Move::ShiftBasepoint { curve, offset } => shift_basepoint(d, curve, *offset),
            Move::ReverseOrientation { curve } => reverse_orientation(d, curve),
            Move::TwoPointInsert { lambda, pos_lambda, mu, pos_mu, sign } => {
                two_point_insert(d, lambda, *pos_lambda, mu, *pos_mu, *sign)
            }
            Move::TwoPointDelete { p, q } => two_point_delete(d, p, q),
            Move::ThreePointFlip { p, q, r } => three_point_flip(d, p, q, r),
            Move::HandleSlide { lambda, mu, pos, start, dir } => handle_slide(d, lambda, mu, *pos, *start, *dir),
            Move::Stabilize => stabilize(d),
            Move::Destabilize => destabilize(d),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Move::ShiftBasepoint { .. } => "shift_basepoint",
            Move::ReverseOrientation { .. } => "reverse_orientation",
            Move::TwoPointInsert { .. } => "two_point_insert",
            Move::TwoPointDelete { .. } => "two_point_delete",
            Move::ThreePointFlip { .. } => "three_point_flip",
            Move::HandleSlide { .. } => "handle_slide",
            Move::Stabilize => "stabilize",
            Move::Destabilize => "destabilize",
        }
    }
}

/// Applies moves in order.
pub fn apply_all(d: &Diagram, moves: &[Move]) -> Result<Diagram> {
    let mut cur = d.clone();
    for m in moves {
        cur = m.apply(&cur)?;
    }
    Ok(cur)
}

pub fn parse_moves(text: &str) -> Result<Vec<Move>> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.is_array() {
        Ok(serde_json::from_value(v)?)
    } else {
        Ok(vec![serde_json::from_value(v)?])
    }
}

fn curve(d: &Diagram, id: &str) -> Result<usize> {
    d.curve_index(id).ok_or_else(|| Error::InvalidMove(format!("no curve '{id}'")))
}

fn crossing(d: &Diagram, id: &str) -> Result<usize> {
    d.crossing_index(id).ok_or_else(|| Error::InvalidMove(format!("no crossing '{id}'")))
}

fn fresh_crossing_id(d: &Diagram, taken: &mut HashSet<String>, stem: &str) -> String {
    if taken.is_empty() {
        taken.extend(d.crossings.iter().map(|c| c.id.clone()));
    }
    let mut n = d.crossings.len();
    loop {
        let id = format!("{stem}{n}");
        if taken.insert(id.clone()) {
            return id;
        }
        n += 1;
    }
}

/// Rotates the visit list so that old position `offset` becomes position 0.
pub fn shift_basepoint(d: &Diagram, curve_id: &str, offset: i64) -> Result<Diagram> {
    let c = curve(d, curve_id)?;
    let mut out = d.clone();
    let n = d.curves[c].visits.len();
    if n == 0 {
        return Ok(out);
    }
    let off = offset.rem_euclid(n as i64) as usize;
    out.curves[c].visits.rotate_left(off);
    if let Some(e) = &mut out.embedding {
        e.sides[c].rotate_left(off);
    }
    out.rebuild_ends()?;
    Ok(out)
}

/// Reverses the curve and flips the sign of every crossing on it.
pub fn reverse_orientation(d: &Diagram, curve_id: &str) -> Result<Diagram> {
    let c = curve(d, curve_id)?;
    let mut out = d.clone();
    out.curves[c].visits.reverse();
    for &x in &d.curves[c].visits {
        out.crossings[x].sign = -out.crossings[x].sign;
    }
    if let Some(e) = &mut out.embedding {
        // new segment i is old segment n-2-i traversed backwards
        let old = &d.embedding.as_ref().unwrap().sides[c];
        let n = old.len();
        e.sides[c] = (0..n).map(|i| {
            let s = old[(2 * n - 2 - i) % n];
            [s[1], s[0]]
        }).collect();
    }
    out.rebuild_ends()?;
    Ok(out)
}

/// Inserts crossings p (sign) and q (−sign), in that order, at position `pos_l`
/// of λ and position `pos_m` of μ.
pub fn two_point_insert(d: &Diagram, lambda: &str, pos_l: usize, mu: &str, pos_m: usize, sign: i8) -> Result<Diagram> {
    let (l, m) = (curve(d, lambda)?, curve(d, mu)?);
    if d.curves[l].color == d.curves[m].color {
        return Err(Error::InvalidMove("two-point move needs curves of different colours".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidMove("sign must be ±1".into()));
    }
    if pos_l > d.curves[l].visits.len() || pos_m > d.curves[m].visits.len() {
        return Err(Error::InvalidMove("insertion position out of range".into()));
    }
    let mut out = d.clone();
    out.embedding = None;
    let mut taken = HashSet::new();
    let (p, q) = (out.crossings.len(), out.crossings.len() + 1);
    let pid = fresh_crossing_id(d, &mut taken, "t");
    let qid = fresh_crossing_id(d, &mut taken, "t");
    out.crossings.push(Crossing { id: pid, sign, ends: [(0, 0); 2] });
    out.crossings.push(Crossing { id: qid, sign: -sign, ends: [(0, 0); 2] });
    out.curves[l].visits.splice(pos_l..pos_l, [p, q]);
    out.curves[m].visits.splice(pos_m..pos_m, [p, q]);
    out.rebuild_ends()?;
    Ok(out)
}

/// Whether positions `i` and `j` are cyclically adjacent on a curve of length `n`.
fn adjacent(i: usize, j: usize, n: usize) -> bool {
    n >= 2 && ((i + 1) % n == j || (j + 1) % n == i)
}

/// Removes a bigon formed by p and q.
pub fn two_point_delete(d: &Diagram, p_id: &str, q_id: &str) -> Result<Diagram> {
    let (p, q) = (crossing(d, p_id)?, crossing(d, q_id)?);
    if p == q {
        return Err(Error::InvalidMove("p and q coincide".into()));
    }
    let (xp, xq) = (&d.crossings[p], &d.crossings[q]);
    if xp.ends[0].0 != xq.ends[0].0 || xp.ends[1].0 != xq.ends[1].0 {
        return Err(Error::InvalidMove("p and q do not join the same pair of curves".into()));
    }
    for s in 0..2 {
        let c = xp.ends[s].0;
        if !adjacent(xp.ends[s].1, xq.ends[s].1, d.curves[c].visits.len()) {
            return Err(Error::InvalidMove(format!("p and q are not consecutive on {}", d.curves[c].id)));
        }
    }
    if xp.sign != -xq.sign {
        return Err(Error::InvalidMove("p and q must have opposite signs".into()));
    }
    let mut out = d.clone();
    out.embedding = None;
    remove_crossings(&mut out, &[p, q]);
    out.rebuild_ends()?;
    Ok(out)
}

fn remove_crossings(d: &mut Diagram, gone: &[usize]) {
    let mut map = vec![usize::MAX; d.crossings.len()];
    let mut kept = Vec::new();
    for (i, x) in d.crossings.iter().enumerate() {
        if !gone.contains(&i) {
            map[i] = kept.len();
            kept.push(x.clone());
        }
    }
    d.crossings = kept;
    for c in d.curves.iter_mut() {
        c.visits = c.visits.iter().filter(|x| map[**x] != usize::MAX).map(|x| map[*x]).collect();
    }
}

/// A triangle p, q, r between three curves of distinct colours, each meeting its
/// two triangle crossings consecutively.
struct Triangle {
    /// (curve, position of first, position of second) per curve, in the order
    /// in which the two crossings occur.
    slots: Vec<(usize, usize, usize)>,
}

fn triangle(d: &Diagram, xs: [usize; 3]) -> Result<Triangle> {
    let mut curves: Vec<usize> = xs.iter().flat_map(|&x| [d.crossings[x].ends[0].0, d.crossings[x].ends[1].0]).collect();
    curves.sort_unstable();
    curves.dedup();
    if curves.len() != 3 {
        return Err(Error::InvalidMove("the three crossings must join three distinct curves".into()));
    }
    let colors: HashSet<Color> = curves.iter().map(|&c| d.curves[c].color).collect();
    if colors.len() != 3 {
        return Err(Error::InvalidMove("the three curves must have distinct colours".into()));
    }
    let mut slots = Vec::new();
    for &c in &curves {
        let pos: Vec<usize> = xs
            .iter()
            .filter_map(|&x| d.crossings[x].ends.iter().find(|e| e.0 == c).map(|e| e.1))
            .collect();
        let n = d.curves[c].visits.len();
        if pos.len() != 2 || !adjacent(pos[0], pos[1], n) {
            return Err(Error::InvalidMove(format!("triangle crossings are not consecutive on {}", d.curves[c].id)));
        }
        let (i, j) = if (pos[0] + 1) % n == pos[1] { (pos[0], pos[1]) } else { (pos[1], pos[0]) };
        slots.push((c, i, j));
    }
    Ok(Triangle { slots })
}

/// Checks the sign pattern of the three-point move: after reversing curves as
/// needed, every curve meets the crossing with the next colour first and all
/// three signs are +1. Curves with exactly two visits may be read either way.
fn triangle_pattern_ok(d: &Diagram, t: &Triangle) -> bool {
    // o = +1 when the curve meets its next-colour partner first
    let mut options: Vec<Vec<i8>> = Vec::new();
    for &(c, i, _) in &t.slots {
        let first = d.curves[c].visits[i];
        let partner = d.curves[d.partner(first, c)].color;
        let o = if partner == d.curves[c].color.next() { 1 } else { -1 };
        options.push(if d.curves[c].visits.len() == 2 { vec![o, -o] } else { vec![o] });
    }
    for &o0 in &options[0] {
        for &o1 in &options[1] {
            for &o2 in &options[2] {
                let o = [o0, o1, o2];
                let ok = (0..3).all(|a| {
                    (a + 1..3).all(|b| {
                        let (ca, cb) = (t.slots[a].0, t.slots[b].0);
                        let x = d.curves[ca].visits.iter().copied().find(|&x| d.partner(x, ca) == cb).unwrap();
                        d.crossings[x].sign * o[a] * o[b] == 1
                    })
                });
                if ok {
                    return true;
                }
            }
        }
    }
    false
}

/// Swaps the order of the two triangle crossings on each of the three curves.
pub fn three_point_flip(d: &Diagram, p: &str, q: &str, r: &str) -> Result<Diagram> {
    let xs = [crossing(d, p)?, crossing(d, q)?, crossing(d, r)?];
    if xs[0] == xs[1] || xs[1] == xs[2] || xs[0] == xs[2] {
        return Err(Error::InvalidMove("crossings must be distinct".into()));
    }
    let t = triangle(d, xs)?;
    if !triangle_pattern_ok(d, &t) {
        return Err(Error::InvalidMove("sign pattern does not match the three-point move".into()));
    }
    let mut out = d.clone();
    out.embedding = None;
    for &(c, i, j) in &t.slots {
        out.curves[c].visits.swap(i, j);
    }
    out.rebuild_ends()?;
    Ok(out)
}

/// Slides λ over μ along a crossing-free band attached at position `pos` of λ.
/// λ picks up a parallel copy of μ traversed from μ's crossing `start` in
/// direction `dir`; each copy x′ of a crossing x of μ with ν has sign ε_x·dir and
/// sits next to x on ν, on the side of the push-off.
pub fn handle_slide(d: &Diagram, lambda: &str, mu: &str, pos: usize, start: usize, dir: i8) -> Result<Diagram> {
    let (l, m) = (curve(d, lambda)?, curve(d, mu)?);
    if l == m {
        return Err(Error::InvalidMove("cannot slide a curve over itself".into()));
    }
    if d.curves[l].color != d.curves[m].color {
        return Err(Error::InvalidMove("handle slides need two curves of the same colour".into()));
    }
    if dir != 1 && dir != -1 {
        return Err(Error::InvalidMove("direction must be ±1".into()));
    }
    let nm = d.curves[m].visits.len();
    if pos > d.curves[l].visits.len() || (nm > 0 && start >= nm) {
        return Err(Error::InvalidMove("slide position out of range".into()));
    }
    let mut out = d.clone();
    out.embedding = None;
    if nm == 0 {
        return Ok(out);
    }
    let mu_color = d.curves[m].color;
    let mut taken = HashSet::new();
    // copy[x] = index of the new crossing paired with x
    let mut copy = vec![usize::MAX; d.crossings.len()];
    let mut order = Vec::with_capacity(nm);
    for step in 0..nm {
        let i = (start as i64 + dir as i64 * step as i64).rem_euclid(nm as i64) as usize;
        let x = d.curves[m].visits[i];
        let id = fresh_crossing_id(d, &mut taken, "h");
        copy[x] = out.crossings.len();
        out.crossings.push(Crossing { id, sign: d.crossings[x].sign * dir, ends: [(0, 0); 2] });
        order.push(copy[x]);
    }
    out.curves[l].visits.splice(pos..pos, order);
    for (ci, c) in d.curves.iter().enumerate() {
        if ci == l || ci == m {
            continue;
        }
        let mut vis = Vec::with_capacity(c.visits.len());
        for &x in &c.visits {
            if copy[x] == usize::MAX {
                vis.push(x);
                continue;
            }
            // κ = +1 when μ is strand 2 at x
            let kappa: i8 = if c.color.next() == mu_color { 1 } else { -1 };
            if d.crossings[x].sign * kappa == 1 {
                vis.push(x);
                vis.push(copy[x]);
            } else {
                vis.push(copy[x]);
                vis.push(x);
            }
        }
        out.curves[ci].visits = vis;
    }
    out.rebuild_ends()?;
    Ok(out)
}

/// Connected sum with the standard genus-3 diagram of S⁴.
pub fn stabilize(d: &Diagram) -> Result<Diagram> {
    if d.kind != Kind::Closed {
        return Err(Error::InvalidMove("stabilisation needs a closed diagram".into()));
    }
    Diagram::connected_sum(d, &standard_s4())
}

/// Connected components of the curve graph (curves joined by crossings).
fn components(d: &Diagram) -> Vec<Vec<usize>> {
    let n = d.curves.len();
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(n);
    for x in &d.crossings {
        uf.union(x.ends[0].0, x.ends[1].0);
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut root_of = std::collections::HashMap::new();
    for c in 0..n {
        let r = uf.find(c);
        let idx = *root_of.entry(r).or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[idx].push(c);
    }
    comps
}

/// The colour of the meridian when `comp` is a split standard handle: three
/// curves of distinct colours and two crossings, both on one curve.
fn handle_type(d: &Diagram, comp: &[usize]) -> Option<Color> {
    if comp.len() != 3 {
        return None;
    }
    let colors: HashSet<Color> = comp.iter().map(|&c| d.curves[c].color).collect();
    if colors.len() != 3 {
        return None;
    }
    let lens: Vec<usize> = comp.iter().map(|&c| d.curves[c].visits.len()).collect();
    let mut sorted = lens.clone();
    sorted.sort_unstable();
    if sorted != [1, 1, 2] {
        return None;
    }
    let meridian = comp[lens.iter().position(|&x| x == 2).unwrap()];
    Some(d.curves[meridian].color)
}

/// Removes a split summand made of three standard handles, one with a meridian
/// of each colour. The search starts from the most recently added curves.
pub fn destabilize(d: &Diagram) -> Result<Diagram> {
    if d.kind != Kind::Closed || d.genus < 3 {
        return Err(Error::NoStandardSummand);
    }
    let comps = components(d);
    let mut pick: [Option<usize>; 3] = [None; 3];
    for (ci, comp) in comps.iter().enumerate().rev() {
        if let Some(col) = handle_type(d, comp) {
            if pick[col.index()].is_none() {
                pick[col.index()] = Some(ci);
            }
        }
    }
    let chosen: Vec<usize> = pick.iter().copied().collect::<Option<Vec<_>>>().ok_or(Error::NoStandardSummand)?;
    let gone_curves: HashSet<usize> = chosen.iter().flat_map(|&ci| comps[ci].iter().copied()).collect();
    let gone_x: Vec<usize> = (0..d.crossings.len()).filter(|&x| gone_curves.contains(&d.crossings[x].ends[0].0)).collect();

    let mut out = d.clone();
    remove_crossings(&mut out, &gone_x);
    let keep: Vec<usize> = (0..d.curves.len()).filter(|c| !gone_curves.contains(c)).collect();
    out.curves = keep.iter().map(|&c| out.curves[c].clone()).collect();
    out.embedding = d.embedding.as_ref().map(|e| {
        let sides: Vec<Vec<[usize; 2]>> = keep.iter().map(|&c| e.sides[c].clone()).collect();
        let mut used = vec![false; e.regions.len()];
        if !used.is_empty() {
            used[0] = true;
        }
        for s in sides.iter().flatten().flatten() {
            used[*s] = true;
        }
        let mut map = vec![usize::MAX; e.regions.len()];
        let mut regions = Vec::new();
        for (i, u) in used.iter().enumerate() {
            if *u {
                map[i] = regions.len();
                regions.push(e.regions[i].clone());
            }
        }
        Embedding {
            regions,
            sides: sides.iter().map(|s| s.iter().map(|p| [map[p[0]], map[p[1]]]).collect()).collect(),
            boundary: None,
        }
    });
    out.genus -= 3;
    out.k = d.k.and_then(|k| k.checked_sub(1));
    out.rebuild_ends()?;
    Ok(out)
}

/// Every legal two-point deletion (p, q) in the diagram.
pub fn bigons(d: &Diagram) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for p in 0..d.crossings.len() {
        for q in p + 1..d.crossings.len() {
            if two_point_delete(d, &d.crossings[p].id, &d.crossings[q].id).is_ok() {
                out.push((d.crossings[p].id.clone(), d.crossings[q].id.clone()));
            }
        }
    }
    out
}

/// Every legal three-point flip (p, q, r), each triangle listed once.
pub fn triangles(d: &Diagram) -> Vec<(String, String, String)> {
    let n = d.crossings.len();
    let mut out = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            for r in q + 1..n {
                if let Ok(t) = triangle(d, [p, q, r]) {
                    if triangle_pattern_ok(d, &t) {
                        out.push((d.crossings[p].id.clone(), d.crossings[q].id.clone(), d.crossings[r].id.clone()));
                    }
                }
            }
        }
    }
    out
}

/// A random move among basepoint shifts, orientation reversals, two-point
/// insertions and deletions, three-point flips and handle slides.
pub fn random_move<R: Rng>(d: &Diagram, rng: &mut R) -> Move {
    let nc = d.curves.len();
    loop {
        match rng.gen_range(0..6) {
            0 => {
                let c = &d.curves[rng.gen_range(0..nc)];
                return Move::ShiftBasepoint { curve: c.id.clone(), offset: rng.gen_range(0..c.visits.len().max(1)) as i64 };
            }
            1 => return Move::ReverseOrientation { curve: d.curves[rng.gen_range(0..nc)].id.clone() },
            2 => {
                let a = rng.gen_range(0..nc);
                let b = rng.gen_range(0..nc);
                if d.curves[a].color == d.curves[b].color {
                    continue;
                }
                return Move::TwoPointInsert {
                    lambda: d.curves[a].id.clone(),
                    pos_lambda: rng.gen_range(0..=d.curves[a].visits.len()),
                    mu: d.curves[b].id.clone(),
                    pos_mu: rng.gen_range(0..=d.curves[b].visits.len()),
                    sign: if rng.gen_bool(0.5) { 1 } else { -1 },
                };
            }
            3 => {
                if let Some((p, q)) = bigons(d).choose(rng) {
                    return Move::TwoPointDelete { p: p.clone(), q: q.clone() };
                }
            }
            4 => {
                if let Some((p, q, r)) = triangles(d).choose(rng) {
                    return Move::ThreePointFlip { p: p.clone(), q: q.clone(), r: r.clone() };
                }
            }
            _ => {
                let a = rng.gen_range(0..nc);
                let b = rng.gen_range(0..nc);
                if a == b || d.curves[a].color != d.curves[b].color {
                    continue;
                }
                let nm = d.curves[b].visits.len();
                return Move::HandleSlide {
                    lambda: d.curves[a].id.clone(),
                    mu: d.curves[b].id.clone(),
                    pos: rng.gen_range(0..=d.curves[a].visits.len()),
                    start: if nm == 0 { 0 } else { rng.gen_range(0..nm) },
                    dir: if rng.gen_bool(0.5) { 1 } else { -1 },
                };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{cp2, standard_s4};

    #[test]
    fn basepoint_and_orientation_round_trips() {
        let d = standard_s4();
        assert_eq!(shift_basepoint(&d, "c1", 0).unwrap(), d);
        assert_eq!(shift_basepoint(&d, "c1", 2).unwrap(), d);
        let s = shift_basepoint(&d, "c1", 1).unwrap();
        assert!(s.validate(true).is_ok(), "{}", s.validate(true));
        let r = reverse_orientation(&reverse_orientation(&d, "F3").unwrap(), "F3").unwrap();
        assert_eq!(r, d);
        let r = reverse_orientation(&d, "c1").unwrap();
        assert!(r.validate(true).is_ok(), "{}", r.validate(true));
        assert!(shift_basepoint(&d, "nope", 1).is_err());
    }

    #[test]
    fn two_point_insert_then_delete() {
        let d = cp2();
        let e = two_point_insert(&d, "a", 1, "b", 0, 1).unwrap();
        assert_eq!(e.crossings.len(), 5);
        assert!(e.validate(true).is_ok());
        let (p, q) = (e.crossings[3].id.clone(), e.crossings[4].id.clone());
        let back = two_point_delete(&e, &p, &q).unwrap();
        let mut plain = d.clone();
        plain.embedding = None;
        assert!(back.same_up_to_relabel(&plain));
        assert!(two_point_insert(&d, "a", 0, "a", 0, 1).is_err());
        assert!(two_point_delete(&d, "x", "y").is_err());
    }

    #[test]
    fn handle_slide_over_empty_curve_is_trivial() {
        let d = Diagram::connected_sum(&cp2(), &crate::diagram::s1xs3()).unwrap();
        let e = handle_slide(&d, "a", "a_2", 0, 0, 1).unwrap();
        let mut plain = d.clone();
        plain.embedding = None;
        assert!(e.same_up_to_relabel(&plain));
    }

    #[test]
    fn handle_slide_keeps_validity() {
        let d = standard_s4();
        for dir in [1, -1] {
            let e = handle_slide(&d, "F1", "F3", 0, 1, dir).unwrap();
            assert!(e.validate(true).is_ok(), "{}", e.validate(true));
            assert_eq!(e.crossings.len(), 8);
            assert_eq!(e.curves[0].visits.len(), 3);
        }
        assert!(handle_slide(&d, "F1", "b1", 0, 0, 1).is_err());
        assert!(handle_slide(&d, "F1", "F1", 0, 0, 1).is_err());
    }

    #[test]
    fn stabilize_destabilize() {
        let d = cp2();
        let s = stabilize(&d).unwrap();
        assert_eq!(s.genus, 4);
        assert!(s.validate(true).is_ok());
        assert_eq!(destabilize(&s).unwrap(), d);
        let ss = stabilize(&standard_s4()).unwrap();
        assert_eq!(destabilize(&ss).unwrap(), standard_s4());
        assert_eq!(destabilize(&d), Err(Error::NoStandardSummand));
    }

    #[test]
    fn cp2_triangle_flips() {
        let d = cp2();
        let t = triangles(&d);
        assert_eq!(t.len(), 1);
        let f = three_point_flip(&d, "x", "y", "z").unwrap();
        let ff = three_point_flip(&f, "x", "y", "z").unwrap();
        let mut plain = d.clone();
        plain.embedding = None;
        assert_eq!(ff, plain);
    }

    #[test]
    fn move_json() {
        let m = Move::TwoPointInsert { lambda: "a".into(), pos_lambda: 1, mu: "b".into(), pos_mu: 0, sign: -1 };
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"move\":\"two_point_insert\""));
        assert_eq!(parse_moves(&s).unwrap(), vec![m.clone()]);
        assert_eq!(parse_moves(&format!("[{s}]")).unwrap(), vec![m]);
        assert!(parse_moves("{\"move\":\"reverse_orientation\",\"curve\":\"a\",\"x\":1}").is_err());
        assert!(parse_moves("{\"move\":\"teleport\"}").is_err());
    }

    #[test]
    fn random_moves_stay_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut d = cp2();
        for _ in 0..30 {
            let m = random_move(&d, &mut rng);
            d = m.apply(&d).unwrap();
            assert!(d.validate(true).is_ok(), "{m:?}: {}", d.validate(true));
        }
    }
}
