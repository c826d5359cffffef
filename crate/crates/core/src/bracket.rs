//! The trisection bracket and the normalized invariant.
//!
//! Each curve of colour X carries the iterated coproduct of an integral of X,
//! one tensor leg per crossing it visits, in visit order. Each crossing
//! contributes the skew pairing of its two colours (or its convolution inverse
//! for sign −1). Contracting the network gives the bracket.
//!
//! The representation backend replaces the iterated coproduct by the ring
//! `tr(W ρ(e^{a₀}) ⋯ ρ(e^{a_{n−1}}))` over the direct sum of the irreps of X*,
//! with `W = ⊕ z·dim V_i` where z is the ratio of the chosen integral to
//! `Σ dim V_i · tr_{V_i}`.

use crate::diagram::{standard_s4, Diagram};
use crate::error::{Error, Result};
use crate::hopf::{AlgebraRep, Elem};
use crate::scalar::{fmt_complex, Scalar, DEFAULT_TOL};
use crate::tensor::{Network, Order, DEFAULT_CAP};
use crate::triplet::{Color, HopfTriplet};
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Element,
    Rep,
}

#[derive(Clone, Debug)]
pub struct BracketConfig {
    pub triplet: Arc<HopfTriplet>,
    /// Integral per colour: A, B, C.
    pub integrals: [Elem; 3],
    pub backend: Backend,
    pub cap: u128,
    pub order: Order,
    pub tol: f64,
}

impl BracketConfig {
    pub fn new(triplet: HopfTriplet) -> BracketConfig {
        Self::from_arc(Arc::new(triplet))
    }

    pub fn from_arc(triplet: Arc<HopfTriplet>) -> BracketConfig {
        let integrals = triplet.integrals.clone();
        BracketConfig { triplet, integrals, backend: Backend::Element, cap: DEFAULT_CAP, order: Order::Greedy, tol: DEFAULT_TOL }
    }

    pub fn with_backend(mut self, b: Backend) -> BracketConfig {
        self.backend = b;
        self
    }

    pub fn with_cap(mut self, cap: u128) -> BracketConfig {
        self.cap = cap;
        self
    }

    pub fn with_order(mut self, o: Order) -> BracketConfig {
        self.order = o;
        self
    }

    pub fn with_integral(mut self, c: Color, l: Elem) -> BracketConfig {
        self.integrals[c.index()] = l;
        self
    }

    /// Multiplies the integral of colour `c` by `z`.
    pub fn scale_integral(mut self, c: Color, z: &Scalar) -> BracketConfig {
        for v in self.integrals[c.index()].values_mut() {
            *v = v.mul(z);
        }
        self
    }

    /// Checks that every integral satisfies the integral property.
    pub fn check(&self) -> Result<()> {
        for c in Color::ALL {
            let r = self.triplet.algebra(c).check_integral(&self.integrals[c.index()]);
            if !r.passed_with(self.tol) {
                return Err(Error::AxiomViolation(format!("the {} integral is not an integral", c.name())));
            }
        }
        Ok(())
    }
}

/// ⟨d⟩ for the configured triplet and backend.
pub fn trisection_bracket(d: &Diagram, cfg: &BracketConfig) -> Result<Scalar> {
    d.check(false)?;
    let net = match cfg.backend {
        Backend::Element => element_network(d, cfg),
        Backend::Rep => rep_network(d, cfg)?,
    };
    net.contract(cfg.order, cfg.cap)
}

fn pairing_entries(cfg: &BracketConfig, d: &Diagram, x: usize) -> Vec<(Vec<usize>, Scalar)> {
    let t = &cfg.triplet;
    let k = d.strand_color(x, 0).index();
    let p = if d.crossings[x].sign > 0 { &t.pairings[k] } else { &t.inverses[k] };
    let (n1, n2) = (p.left.dim(), p.right.dim());
    let mut out = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let v = p.get(i, j);
            if !v.is_zero() {
                out.push((vec![i, j], v.clone()));
            }
        }
    }
    out
}

/// Allocates one index per (curve, visit) and attaches the crossing matrices.
fn slots_and_crossings(net: &mut Network, d: &Diagram, cfg: &BracketConfig) -> Vec<Vec<usize>> {
    let slots: Vec<Vec<usize>> = d
        .curves
        .iter()
        .map(|c| {
            let dim = cfg.triplet.algebra(c.color).dim();
            c.visits.iter().map(|_| net.index(dim)).collect()
        })
        .collect();
    for x in 0..d.crossings.len() {
        let [(c1, p1), (c2, p2)] = d.crossings[x].ends;
        net.add(vec![slots[c1][p1], slots[c2][p2]], pairing_entries(cfg, d, x));
    }
    slots
}

fn element_network(d: &Diagram, cfg: &BracketConfig) -> Network {
    let mut net = Network::new();
    let slots = slots_and_crossings(&mut net, d, cfg);
    let comult: Vec<Vec<(Vec<usize>, Scalar)>> = Color::ALL
        .iter()
        .map(|&c| {
            let h = cfg.triplet.algebra(c);
            (0..h.dim())
                .flat_map(|m| h.comul_basis(m).iter().map(move |(i, k, v)| (vec![m, *i, *k], v.clone())))
                .collect()
        })
        .collect();
    for (ci, c) in d.curves.iter().enumerate() {
        let h = cfg.triplet.algebra(c.color);
        let l = &cfg.integrals[c.color.index()];
        let n = c.visits.len();
        let lvec = || l.iter().map(|(k, v)| (vec![*k], v.clone()));
        match n {
            0 => net.scale(&h.counit(l)),
            1 => net.add(vec![slots[ci][0]], lvec()),
            _ => {
                let mut m = net.index(h.dim());
                net.add(vec![m], lvec());
                for j in 0..n - 1 {
                    let next = if j == n - 2 { slots[ci][n - 1] } else { net.index(h.dim()) };
                    net.add(vec![m, slots[ci][j], next], comult[c.color.index()].iter().cloned());
                    m = next;
                }
            }
        }
    }
    net
}

/// Block-diagonal sum of the irreps and the matching weight, scaled by the ratio
/// of the configured integral to the canonical one.
struct RingData {
    size: usize,
    /// `blocks[a]` lists the nonzero entries `(u, v, value)` of ⊕ρ_i(e^a).
    blocks: Vec<Vec<(usize, usize, Scalar)>>,
    weight: Vec<Scalar>,
}

/// `Σ dim V_i · tr ρ_i(e^a)` for each basis index a.
pub fn canonical_integral(irreps: &[AlgebraRep], dim: usize) -> Elem {
    let mut l = Elem::new();
    for a in 0..dim {
        let v = irreps.iter().fold(Scalar::zero(), |s, r| s.add(&r.matrices[a].trace().mul(&Scalar::int(r.dim as i64))));
        if !v.is_zero() {
            l.insert(a, v);
        }
    }
    l
}

/// z with `l = z · canonical`, if `l` is such a multiple.
fn ratio(l: &Elem, canonical: &Elem, tol: f64) -> Option<Scalar> {
    let (k, c) = canonical.iter().next()?;
    let z = l.get(k).cloned().unwrap_or_else(Scalar::zero).mul(&c.inv()?);
    let keys: std::collections::BTreeSet<usize> = l.keys().chain(canonical.keys()).copied().collect();
    for k in keys {
        let a = l.get(&k).cloned().unwrap_or_else(Scalar::zero);
        let b = canonical.get(&k).cloned().unwrap_or_else(Scalar::zero).mul(&z);
        if !a.approx_eq(&b, tol) {
            return None;
        }
    }
    Some(z)
}

fn ring_data(cfg: &BracketConfig, c: Color) -> Result<RingData> {
    let h = cfg.triplet.algebra(c);
    let irreps = cfg.triplet.dual_irreps[c.index()]
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("irreps of the dual of the {} algebra", c.name())))?;
    let total: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
    if total != h.dim() || irreps.iter().any(|r| r.matrices.len() != h.dim()) {
        return Err(Error::Incompatible(format!("{} irreps are not exhaustive (Σ dim² = {total})", c.name())));
    }
    let canonical = canonical_integral(irreps, h.dim());
    let z = ratio(&cfg.integrals[c.index()], &canonical, cfg.tol)
        .ok_or_else(|| Error::Incompatible(format!("the {} integral is not a multiple of Σ dim·tr", c.name())))?;
    let size: usize = irreps.iter().map(|r| r.dim).sum();
    let mut blocks = vec![Vec::new(); h.dim()];
    let mut weight = Vec::with_capacity(size);
    let mut off = 0;
    for r in irreps {
        for (a, m) in r.matrices.iter().enumerate() {
            for u in 0..r.dim {
                for v in 0..r.dim {
                    let x = m.get(u, v);
                    if !x.is_zero() {
                        blocks[a].push((off + u, off + v, x.clone()));
                    }
                }
            }
        }
        weight.extend(std::iter::repeat_n(z.mul(&Scalar::int(r.dim as i64)), r.dim));
        off += r.dim;
    }
    Ok(RingData { size, blocks, weight })
}

fn rep_network(d: &Diagram, cfg: &BracketConfig) -> Result<Network> {
    let mut rings: [Option<RingData>; 3] = [None, None, None];
    for c in Color::ALL {
        if d.color_count(c) > 0 {
            rings[c.index()] = Some(ring_data(cfg, c)?);
        }
    }
    let mut net = Network::new();
    let slots = slots_and_crossings(&mut net, d, cfg);
    for (ci, c) in d.curves.iter().enumerate() {
        let ring = rings[c.color.index()].as_ref().unwrap();
        let n = c.visits.len();
        if n == 0 {
            net.scale(&ring.weight.iter().fold(Scalar::zero(), |s, w| s.add(w)));
            continue;
        }
        // W[b0, b1] R0[b1, a0, b2] ... R_{n-1}[bn, a_{n-1}, b0]
        let bonds: Vec<usize> = (0..=n).map(|_| net.index(ring.size)).collect();
        net.add(vec![bonds[0], bonds[1]], ring.weight.iter().enumerate().map(|(u, w)| (vec![u, u], w.clone())));
        for j in 0..n {
            let right = if j == n - 1 { bonds[0] } else { bonds[j + 2] };
            let entries = ring
                .blocks
                .iter()
                .enumerate()
                .flat_map(|(a, es)| es.iter().map(move |(u, v, x)| (vec![*u, a, *v], x.clone())))
                .collect::<Vec<_>>();
            net.add(vec![bonds[j + 1], slots[ci][j], right], entries);
        }
    }
    Ok(net)
}

/// `value · base^{exp/3}` with the principal cube root of `base`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub value: Scalar,
    pub base: Scalar,
    pub exp: i64,
}

fn principal_cbrt(z: Complex64) -> Complex64 {
    Complex64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

impl Normalized {
    pub fn new(value: Scalar, base: Scalar, exp: i64) -> Normalized {
        Normalized { value, base, exp }
    }

    /// The exact value when the cube root can be taken exactly.
    pub fn exact(&self) -> Option<Scalar> {
        if !self.value.is_exact() || !self.base.is_exact() {
            return None;
        }
        if self.exp % 3 == 0 {
            return Some(self.value.mul(&self.base.powi(self.exp / 3)?));
        }
        let r = self.base.as_rat()?;
        if r.signum() <= 0 {
            return None;
        }
        let root = Scalar::Rat(r.cbrt()?);
        Some(self.value.mul(&root.powi(self.exp)?))
    }

    /// Principal branch as a complex number.
    pub fn to_complex(&self) -> Complex64 {
        let root = principal_cbrt(self.base.to_complex());
        self.value.to_complex() * root.powi(self.exp as i32)
    }

    /// All three branches, principal first.
    pub fn branches(&self) -> [Complex64; 3] {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let p = self.to_complex();
        [p, p * w.powi(self.exp as i32), p * w.powi(2 * self.exp as i32)]
    }

    /// value³ · base^exp, the exact cube of the quantity.
    fn cube(&self) -> Option<Scalar> {
        Some(self.value.pow(3).mul(&self.base.powi(self.exp)?))
    }

    /// Equality of the principal values: exact on cubes when possible, then a
    /// numeric check that the cube roots agree.
    pub fn equals(&self, o: &Normalized, tol: f64) -> bool {
        let (a, b) = (self.to_complex(), o.to_complex());
        let close = (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm());
        match (self.cube(), o.cube()) {
            (Some(x), Some(y)) if x.is_exact() && y.is_exact() => x.exact_eq(&y) && close,
            _ => close,
        }
    }

    pub fn render(&self) -> String {
        if let Some(x) = self.exact() {
            return x.render();
        }
        format!("{} · ({})^({}/3) ≈ {}", self.value.render(), self.base.render(), self.exp, fmt_complex(self.to_complex()))
    }
}

/// ⟨Σ_st⟩, the bracket of the standard genus-3 diagram of S⁴.
pub fn stabilization_bracket(cfg: &BracketConfig) -> Result<Scalar> {
    trisection_bracket(&standard_s4(), cfg)
}

/// I(d) = ξ^{−g} ⟨d⟩ with ξ the principal cube root of ⟨Σ_st⟩.
pub fn invariant(d: &Diagram, cfg: &BracketConfig) -> Result<Normalized> {
    let st = stabilization_bracket(cfg)?;
    invariant_with(d, cfg, &st)
}

/// [`invariant`] with a precomputed ⟨Σ_st⟩.
pub fn invariant_with(d: &Diagram, cfg: &BracketConfig, st: &Scalar) -> Result<Normalized> {
    if st.is_negligible(cfg.tol) {
        return Err(Error::StabilizationObstruction);
    }
    let b = trisection_bracket(d, cfg)?;
    Ok(Normalized::new(b, st.clone(), -(d.genus as i64)))
}

#[derive(Clone, Debug)]
pub struct MultiplicativityReport {
    pub sum: Scalar,
    pub product: Scalar,
    pub equal: bool,
}

/// Compares ⟨t1 # t2⟩ with ⟨t1⟩·⟨t2⟩.
pub fn bracket_multiplicativity_check(t1: &Diagram, t2: &Diagram, cfg: &BracketConfig) -> Result<MultiplicativityReport> {
    let sum = trisection_bracket(&Diagram::connected_sum(t1, t2)?, cfg)?;
    let product = trisection_bracket(t1, cfg)?.mul(&trisection_bracket(t2, cfg)?);
    let equal = scalars_equal(&sum, &product, cfg.tol);
    Ok(MultiplicativityReport { sum, product, equal })
}

#[derive(Clone, Debug)]
pub struct CrossCheckReport {
    pub element: Scalar,
    pub rep: Scalar,
    pub equal: bool,
    /// rep / element when they differ and element ≠ 0.
    pub ratio: Option<Scalar>,
    /// A genus-th root of the ratio, for reading off an integral rescaling.
    pub per_genus: Option<Complex64>,
}

/// Evaluates both backends on `d` with the same integrals.
pub fn cross_check(d: &Diagram, cfg: &BracketConfig) -> Result<CrossCheckReport> {
    let element = trisection_bracket(d, &cfg.clone().with_backend(Backend::Element))?;
    let rep = trisection_bracket(d, &cfg.clone().with_backend(Backend::Rep))?;
    let equal = scalars_equal(&element, &rep, cfg.tol);
    let ratio = if equal { None } else { element.inv().map(|e| rep.mul(&e)) };
    let per_genus = ratio.as_ref().filter(|_| d.genus > 0).map(|r| r.to_complex().powf(1.0 / d.genus as f64));
    Ok(CrossCheckReport { element, rep, equal, ratio, per_genus })
}

/// Exact equality when both are exact, relative tolerance otherwise.
pub fn scalars_equal(a: &Scalar, b: &Scalar, tol: f64) -> bool {
    if a.is_exact() && b.is_exact() {
        a.exact_eq(b)
    } else {
        a.approx_eq(b, tol)
    }
}
