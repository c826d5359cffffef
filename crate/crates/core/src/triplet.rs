//! Hopf triplets (A, B, C) with pairings τ_AB, τ_BC, τ_CA, and the shipped families.

use crate::error::{Error, Result};
use crate::group::{GSet, Group};
use crate::hopf::{
    dual_irreps_of_function_algebra, dual_irreps_of_group_algebra, AlgebraRep, Elem, HopfAlgebra, HopfRef, Residual,
};
use crate::linalg::Mat;
use crate::pairing::SkewPairing;
use crate::scalar::Scalar;
use serde_json::Value;
use std::sync::Arc;

/// The three curve colours. Red carries A, blue carries B, green carries C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Color {
    Red,
    Blue,
    Green,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Blue, Color::Green];

    pub fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Blue => 1,
            Color::Green => 2,
        }
    }

    /// Red → Blue → Green → Red.
    pub fn next(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Green,
            Color::Green => Color::Red,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Blue => "blue",
            Color::Green => "green",
        }
    }

    pub fn parse(s: &str) -> Option<Color> {
        match s.to_ascii_lowercase().as_str() {
            "red" | "a" | "alpha" => Some(Color::Red),
            "blue" | "b" | "beta" => Some(Color::Blue),
            "green" | "c" | "gamma" => Some(Color::Green),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HopfTriplet {
    pub name: String,
    /// Algebras indexed by colour: A, B, C.
    pub algebras: [HopfRef; 3],
    /// τ_AB, τ_BC, τ_CA.
    pub pairings: [SkewPairing; 3],
    /// Convolution inverses of the pairings, same order.
    pub inverses: [SkewPairing; 3],
    /// Default integral per colour.
    pub integrals: [Elem; 3],
    /// Irreps of X* on the dual basis, per colour, when known.
    pub dual_irreps: [Option<Vec<AlgebraRep>>; 3],
    pub allow_weak: bool,
}

/// Residuals of the individual pairing checks and the cyclic identity.
#[derive(Clone, Debug, Default)]
pub struct TripletReport {
    pub pairings: [Residual; 3],
    pub inverses: [Residual; 3],
    pub cyclic: Residual,
}

impl TripletReport {
    pub fn passed(&self) -> bool {
        self.pairings.iter().chain(&self.inverses).all(Residual::passed) && self.cyclic.passed()
    }
}

impl HopfTriplet {
    pub fn new(
        name: &str,
        algebras: [HopfRef; 3],
        pairings: [SkewPairing; 3],
        integrals: Option<[Elem; 3]>,
        dual_irreps: [Option<Vec<AlgebraRep>>; 3],
    ) -> Result<HopfTriplet> {
        let weak = algebras.iter().any(|a| a.is_weak());
        for (k, p) in pairings.iter().enumerate() {
            let (l, r) = (k, (k + 1) % 3);
            if p.left.dim() != algebras[l].dim() || p.right.dim() != algebras[r].dim() {
                return Err(Error::Incompatible(format!("pairing {k} has mismatched dimensions")));
            }
        }
        let integrals = match integrals {
            Some(i) => i,
            None => [algebras[0].compute_integral()?, algebras[1].compute_integral()?, algebras[2].compute_integral()?],
        };
        let inverses = [pairings[0].convolution_inverse(), pairings[1].convolution_inverse(), pairings[2].convolution_inverse()];
        Ok(HopfTriplet { name: name.to_string(), algebras, pairings, inverses, integrals, dual_irreps, allow_weak: weak })
    }

    pub fn algebra(&self, c: Color) -> &HopfRef {
        &self.algebras[c.index()]
    }

    pub fn is_exact(&self) -> bool {
        self.algebras.iter().all(|a| a.is_exact()) && self.pairings.iter().all(|p| p.values().iter().all(Scalar::is_exact))
    }

    /// Checks each pairing, each convolution inverse and the cyclic identity
    /// τ_AB(a₁,b₂)τ_BC(b₁,c₂)τ_CA(c₁,a₂) = τ_AB(a₂,b₁)τ_BC(b₂,c₁)τ_CA(c₂,a₁).
    pub fn check(&self) -> TripletReport {
        let mut rep = TripletReport::default();
        for k in 0..3 {
            rep.pairings[k] = self.pairings[k].check();
            rep.inverses[k] = self.pairings[k].check_inverse(&self.inverses[k]);
        }
        rep.cyclic = self.check_cyclic();
        rep
    }

    pub fn check_cyclic(&self) -> Residual {
        let [a, b, c] = &self.algebras;
        let [ab, bc, ca] = &self.pairings;
        let mut r = Residual::default();
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                for k in 0..c.dim() {
                    let (mut lhs, mut rhs) = (Scalar::zero(), Scalar::zero());
                    for (a1, a2, x) in a.comul_basis(i) {
                        for (b1, b2, y) in b.comul_basis(j) {
                            let xy = x.mul(y);
                            let l1 = ab.get(*a1, *b2);
                            let r1 = ab.get(*a2, *b1);
                            if l1.is_zero() && r1.is_zero() {
                                continue;
                            }
                            for (c1, c2, z) in c.comul_basis(k) {
                                let w = xy.mul(z);
                                if !l1.is_zero() {
                                    lhs = lhs.add(&w.mul(l1).mul(bc.get(*b1, *c2)).mul(ca.get(*c1, *a2)));
                                }
                                if !r1.is_zero() {
                                    rhs = rhs.add(&w.mul(r1).mul(bc.get(*b2, *c1)).mul(ca.get(*c2, *a1)));
                                }
                            }
                        }
                    }
                    r.scalars(&lhs, &rhs);
                }
            }
        }
        r
    }

    /// A = C = ℂ^{ℤ/n}, B = ℂ[ℤ/n] with τ_CA(δ_a, δ_b) = ζ_n^{ab}/n.
    pub fn kashaev(n: usize) -> Result<HopfTriplet> {
        if n < 2 {
            return Err(Error::Incompatible("the Kashaev triplet needs n ≥ 2".into()));
        }
        let g = Group::cyclic(n);
        let a: HopfRef = Arc::new(HopfAlgebra::function_algebra(&g));
        let b: HopfRef = Arc::new(HopfAlgebra::group_algebra(&g));
        let c: HopfRef = Arc::new(HopfAlgebra::function_algebra(&g));
        let delta = |i: usize, j: usize| if i == j { Scalar::one() } else { Scalar::zero() };
        let ab = SkewPairing::from_fn(a.clone(), b.clone(), delta);
        let bc = SkewPairing::from_fn(b.clone(), c.clone(), delta);
        let inv_n = Scalar::frac(1, n as i64);
        let ca = SkewPairing::from_fn(c.clone(), a.clone(), |i, j| {
            Scalar::root_of_unity(n as u32, ((i * j) % n) as i64).mul(&inv_n)
        });
        let chars = dual_irreps_of_function_algebra(&g);
        HopfTriplet::new(
            &format!("kashaev:n={n}"),
            [a, b, c],
            [ab, bc, ca],
            None,
            [chars.clone(), Some(dual_irreps_of_group_algebra(&g)), chars],
        )
    }

    /// A = ℂ^K with K = C × B^op, B = ℂ[B], C = ℂ[C^op]; τ_AB(δ_k, b) = [k = (1,b)],
    /// τ_CA(c, δ_k) = [k = (c⁻¹,1)], τ_BC trivial.
    pub fn group(cg: &Group, bg: &Group) -> Result<HopfTriplet> {
        let k = Group::product(cg, &bg.opposite());
        let nb = bg.order();
        let a: HopfRef = Arc::new(HopfAlgebra::function_algebra(&k));
        let b: HopfRef = Arc::new(HopfAlgebra::group_algebra(bg));
        let cop = cg.opposite();
        let c: HopfRef = Arc::new(HopfAlgebra::group_algebra(&cop));
        let ab = SkewPairing::from_fn(a.clone(), b.clone(), |x, y| {
            if x == cg.identity() * nb + y {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let bc = SkewPairing::trivial(b.clone(), c.clone());
        let ca = SkewPairing::from_fn(c.clone(), a.clone(), |x, y| {
            if y == cg.inv(x) * nb + bg.identity() {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        HopfTriplet::new(
            &format!("group:C={},B={}", cg.name(), bg.name()),
            [a, b, c],
            [ab, bc, ca],
            None,
            [
                dual_irreps_of_function_algebra(&k),
                Some(dual_irreps_of_group_algebra(bg)),
                Some(dual_irreps_of_group_algebra(&cop)),
            ],
        )
    }

    /// The weak triplet (H_A^cop, H_B, H_C^{op,cop}) for a (C × B^op)-set M.
    pub fn weak(cg: &Group, bg: &Group, m: &GSet) -> Result<HopfTriplet> {
        let k = m.group().clone();
        let nb = bg.order();
        if k.order() != cg.order() * nb {
            return Err(Error::Incompatible("M must be a set over C × B^op".into()));
        }
        let (nm, nk) = (m.size(), k.order());
        let b_elems: Vec<usize> = (0..nb).map(|b| cg.identity() * nb + b).collect();
        let c_elems: Vec<usize> = (0..cg.order()).map(|c| c * nb + bg.identity()).collect();
        let mb = m.restrict(&b_elems)?;
        let mc = m.restrict(&c_elems)?;

        let ha = HopfAlgebra::weak_dual_smash(m).cop()?;
        let hb = HopfAlgebra::weak_smash(&mb);
        let hc = HopfAlgebra::weak_smash(&mc).op()?.cop()?;
        let (a, b, c): (HopfRef, HopfRef, HopfRef) = (Arc::new(ha), Arc::new(hb), Arc::new(hc));

        let split = |x: usize, n: usize| (x / (nm * n), (x / n) % nm, x % n);
        let one = |t: bool| if t { Scalar::one() } else { Scalar::zero() };
        let ab = SkewPairing::from_fn(a.clone(), b.clone(), |x, y| {
            let (am, an, h) = split(x, nk);
            let (p, q, bi) = split(y, nb);
            one(h == b_elems[bi] && p == am && q == an)
        });
        let ca = SkewPairing::from_fn(c.clone(), a.clone(), |x, y| {
            let (p, q, ci) = split(x, cg.order());
            let (am, an, h) = split(y, nk);
            one(h == c_elems[ci] && p == am && q == an)
        });
        let bc = SkewPairing::from_fn(b.clone(), c.clone(), |x, y| {
            let (p, q, bi) = split(x, nb);
            let (mm, n, ci) = split(y, cg.order());
            one(n == p && n == m.act(c_elems[ci], q) && p == m.act(b_elems[bi], mm))
        });

        let mut la = Elem::new();
        for x in 0..nm {
            for y in 0..nm {
                la.insert((x * nm + y) * nk + k.identity(), Scalar::one());
            }
        }
        let diag = |n: usize| -> Elem {
            let mut e = Elem::new();
            for x in 0..nm {
                for g in 0..n {
                    e.insert((x * nm + x) * n + g, Scalar::one());
                }
            }
            e
        };
        let mut t = HopfTriplet::new(
            &format!("weak:C={},B={},|M|={}", cg.name(), bg.name(), nm),
            [a, b, c],
            [ab, bc, ca],
            Some([la, diag(nb), diag(cg.order())]),
            [None, None, None],
        )?;
        t.allow_weak = true;
        Ok(t)
    }

    /// `kashaev:n=<n>`, `group:C=<group>,B=<group>` or `file:<path>`.
    pub fn from_spec(spec: &str) -> Result<HopfTriplet> {
        let bad = || Error::Parse(format!("bad triplet spec '{spec}' (expected kashaev:n=<n>, group:C=<g>,B=<g> or file:<path>)"));
        let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
        match kind {
            "kashaev" => HopfTriplet::kashaev(rest.strip_prefix("n=").and_then(|n| n.parse().ok()).ok_or_else(bad)?),
            "group" => {
                let (c, b) = rest.split_once(",B=").ok_or_else(bad)?;
                let c = c.strip_prefix("C=").ok_or_else(bad)?;
                HopfTriplet::group(&Group::from_spec(c)?, &Group::from_spec(b)?)
            }
            "file" => {
                let text = std::fs::read_to_string(rest).map_err(|e| Error::Io(format!("{rest}: {e}")))?;
                HopfTriplet::from_json(&text)
            }
            _ => Err(bad()),
        }
    }

    /// Reads `{"A": .., "B": .., "C": .., "tau_AB": [[..]], "tau_BC": .., "tau_CA": .., "dual_reps": {..}}`.
    pub fn from_json(text: &str) -> Result<HopfTriplet> {
        let v: Value = serde_json::from_str(text)?;
        let obj = v.as_object().ok_or_else(|| Error::Parse("triplet file must be an object".into()))?;
        let allowed = ["name", "A", "B", "C", "tau_AB", "tau_BC", "tau_CA", "integrals", "dual_reps"];
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown key '{k}'")));
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| Error::Parse(format!("missing '{k}'")));
        let alg = |k: &str| -> Result<HopfRef> { Ok(Arc::new(HopfAlgebra::from_value(field(k)?)?)) };
        let (a, b, c) = (alg("A")?, alg("B")?, alg("C")?);
        let table = |k: &str, l: &HopfRef, r: &HopfRef| -> Result<SkewPairing> {
            let rows = field(k)?.as_array().ok_or_else(|| Error::Parse(format!("{k} must be a matrix")))?;
            let mut vals = Vec::new();
            for row in rows {
                for x in row.as_array().ok_or_else(|| Error::Parse(format!("{k} must be a matrix")))? {
                    vals.push(Scalar::from_json(x).ok_or_else(|| Error::Parse(format!("bad scalar in {k}")))?);
                }
            }
            SkewPairing::new(l.clone(), r.clone(), vals)
        };
        let ab = table("tau_AB", &a, &b)?;
        let bc = table("tau_BC", &b, &c)?;
        let ca = table("tau_CA", &c, &a)?;
        let integrals = match obj.get("integrals") {
            None => None,
            Some(iv) => {
                let get = |k: &str, h: &HopfRef| -> Result<Elem> {
                    let arr = iv.get(k).and_then(Value::as_array).filter(|x| x.len() == h.dim());
                    let arr = arr.ok_or_else(|| Error::Parse(format!("integral {k} has the wrong length")))?;
                    let mut e = Elem::new();
                    for (i, x) in arr.iter().enumerate() {
                        let s = Scalar::from_json(x).ok_or_else(|| Error::Parse("bad integral entry".into()))?;
                        if !s.is_zero() {
                            e.insert(i, s);
                        }
                    }
                    Ok(e)
                };
                Some([get("A", &a)?, get("B", &b)?, get("C", &c)?])
            }
        };
        let mut reps: [Option<Vec<AlgebraRep>>; 3] = [None, None, None];
        if let Some(dr) = obj.get("dual_reps") {
            for (i, key) in ["A", "B", "C"].iter().enumerate() {
                if let Some(r) = dr.get(*key) {
                    reps[i] = Some(parse_reps(r)?);
                }
            }
        }
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("file");
        HopfTriplet::new(name, [a, b, c], [ab, bc, ca], integrals, reps)
    }

    /// The layout read by [`HopfTriplet::from_json`], without irreps.
    pub fn to_json(&self) -> Value {
        let table = |p: &SkewPairing| -> Value {
            let m = p.right.dim();
            p.values().chunks(m).map(|row| row.iter().map(Scalar::to_json).collect::<Value>()).collect()
        };
        let integral = |c: usize| -> Value {
            let n = self.algebras[c].dim();
            (0..n).map(|i| self.integrals[c].get(&i).map_or(Value::from(0), Scalar::to_json)).collect()
        };
        serde_json::json!({
            "name": self.name,
            "A": self.algebras[0].to_json(),
            "B": self.algebras[1].to_json(),
            "C": self.algebras[2].to_json(),
            "tau_AB": table(&self.pairings[0]),
            "tau_BC": table(&self.pairings[1]),
            "tau_CA": table(&self.pairings[2]),
            "integrals": { "A": integral(0), "B": integral(1), "C": integral(2) },
        })
    }

    /// Pairings, inverses and integrals in floating point, so brackets are
    /// evaluated numerically.
    pub fn to_float(&self) -> HopfTriplet {
        let mut t = self.clone();
        t.name = format!("{} (float)", self.name);
        t.pairings = self.pairings.clone().map(|p| p.to_float());
        t.inverses = self.inverses.clone().map(|p| p.to_float());
        for l in t.integrals.iter_mut() {
            for v in l.values_mut() {
                *v = v.to_float();
            }
        }
        t
    }

    /// The same triplet with one integral multiplied by `z`.
    pub fn with_scaled_integral(&self, color: Color, z: &Scalar) -> HopfTriplet {
        let mut t = self.clone();
        t.integrals[color.index()] = HopfAlgebra::scale(&self.integrals[color.index()], z);
        t
    }
}

/// Parses `{"algebra": .., "reps": [{"name", "dim", "matrices"}]}` or a bare list of reps.
pub fn parse_reps(v: &Value) -> Result<Vec<AlgebraRep>> {
    let list = match v {
        Value::Array(a) => a,
        Value::Object(o) => o.get("reps").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing 'reps'".into()))?,
        _ => return Err(Error::Parse("malformed representation data".into())),
    };
    list.iter()
        .map(|r| {
            let dim = r.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::Parse("rep without dim".into()))? as usize;
            let name = r.get("name").and_then(Value::as_str).unwrap_or("rep").to_string();
            let mats = r.get("matrices").and_then(Value::as_array).ok_or_else(|| Error::Parse("rep without matrices".into()))?;
            let matrices = mats
                .iter()
                .map(|m| {
                    let rows = m.as_array().ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
                    let rows = rows
                        .iter()
                        .map(|row| {
                            row.as_array()
                                .filter(|x| x.len() == dim)
                                .ok_or_else(|| Error::Parse("matrix row has the wrong length".into()))?
                                .iter()
                                .map(|x| Scalar::from_json(x).ok_or_else(|| Error::Parse("bad matrix entry".into())))
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if rows.len() != dim {
                        return Err(Error::Parse("matrix has the wrong number of rows".into()));
                    }
                    Ok(Mat::from_rows(rows))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AlgebraRep { name, dim, matrices })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::canonical_dual_integral;

    #[test]
    fn kashaev_small() {
        for n in 2..=4 {
            let t = HopfTriplet::kashaev(n).unwrap();
            let rep = t.check();
            assert!(rep.passed(), "n={n}: {rep:?}");
        }
    }

    #[test]
    fn kashaev_inverse_entries() {
        let t = HopfTriplet::kashaev(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let expect = Scalar::root_of_unity(5, -((a * b) as i64)).mul(&Scalar::frac(1, 5));
                assert!(t.inverses[2].get(a, b).exact_eq(&expect));
            }
        }
    }

    #[test]
    fn group_triplet_s3() {
        let t = HopfTriplet::group(&Group::symmetric(3), &Group::cyclic(2)).unwrap();
        assert!(t.check().passed());
        assert_eq!(t.algebras[0].dim(), 12);
        let t = HopfTriplet::group(&Group::cyclic(2), &Group::symmetric(3)).unwrap();
        assert!(t.check().passed());
    }

    #[test]
    fn perturbed_cyclic_identity_fails() {
        // the identity only sees τ_CA through conjugation by B, so B must be nonabelian
        let t = HopfTriplet::group(&Group::cyclic(2), &Group::symmetric(3)).unwrap();
        let broken = (0..2).any(|c| {
            (0..12).any(|k| {
                let mut u = t.clone();
                u.pairings[2] = u.pairings[2].perturbed(c, k, Scalar::frac(1, 7));
                !u.check_cyclic().passed()
            })
        });
        assert!(broken);
    }

    #[test]
    fn dual_irreps_match_integrals() {
        for t in [HopfTriplet::kashaev(4).unwrap(), HopfTriplet::group(&Group::symmetric(3), &Group::cyclic(3)).unwrap()] {
            for c in 0..3 {
                let dual = t.algebras[c].dual();
                let lam = canonical_dual_integral(&dual, t.dual_irreps[c].as_ref().unwrap()).unwrap();
                // λ lives on the basis of X*, i.e. it is an element of X
                for (i, v) in lam.iter().enumerate() {
                    let got = t.integrals[c].get(&i).cloned().unwrap_or_else(Scalar::zero);
                    assert!(got.exact_eq(v), "colour {c}, index {i}");
                }
            }
        }
    }

    #[test]
    fn weak_triplet_diagonal_cosets() {
        let (cg, bg) = (Group::cyclic(2), Group::cyclic(2));
        let k = Arc::new(Group::product(&cg, &bg.opposite()));
        let diag = k.closure(&[k.index_of("(1,1)").unwrap()]);
        let m = GSet::cosets(k, &diag).unwrap();
        let t = HopfTriplet::weak(&cg, &bg, &m).unwrap();
        let r = t.check_cyclic();
        assert!(r.passed(), "{r:?}");
    }
}
