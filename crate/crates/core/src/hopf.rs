//! Finite-dimensional (weak) Hopf algebras stored as sparse structure tensors.

use crate::error::{Error, Result};
use crate::group::{GSet, Group};
use crate::linalg::Mat;
use crate::scalar::{Scalar, DEFAULT_TOL};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A sparse element of an algebra, keyed by basis index.
pub type Elem = BTreeMap<usize, Scalar>;
/// A sparse element of H ⊗ H.
pub type Elem2 = BTreeMap<(usize, usize), Scalar>;
/// A sparse element of H ⊗ H ⊗ H.
pub type Elem3 = BTreeMap<(usize, usize, usize), Scalar>;

pub(crate) fn acc<K: Ord>(m: &mut BTreeMap<K, Scalar>, k: K, v: Scalar) {
    if v.is_zero() {
        return;
    }
    match m.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&v);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

fn to_sparse(m: Elem) -> Vec<(usize, Scalar)> {
    m.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct HopfAlgebra {
    name: String,
    basis: Vec<String>,
    mult: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<(usize, Scalar)>,
    comult: Vec<Vec<(usize, usize, Scalar)>>,
    counit: Vec<Scalar>,
    antipode: Vec<Vec<(usize, Scalar)>>,
    weak: bool,
}

impl HopfAlgebra {
    /// Assembles an algebra from sparse structure data; only shapes are checked here.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        name: &str,
        basis: Vec<String>,
        mult: Vec<Elem>,
        unit: Elem,
        comult: Vec<Elem2>,
        counit: Vec<Scalar>,
        antipode: Vec<Elem>,
        weak: bool,
    ) -> Result<HopfAlgebra> {
        let n = basis.len();
        let bad = |what: &str| Error::Parse(format!("{name}: malformed {what}"));
        if n == 0 || mult.len() != n * n || comult.len() != n || counit.len() != n || antipode.len() != n {
            return Err(bad("structure shape"));
        }
        if mult.iter().chain(&antipode).chain(std::iter::once(&unit)).any(|e| e.keys().any(|&k| k >= n)) {
            return Err(bad("index"));
        }
        if comult.iter().any(|e| e.keys().any(|&(a, b)| a >= n || b >= n)) {
            return Err(bad("comultiplication index"));
        }
        Ok(HopfAlgebra {
            name: name.to_string(),
            basis,
            mult: mult.into_iter().map(to_sparse).collect(),
            unit: to_sparse(unit),
            comult: comult.into_iter().map(|e| e.into_iter().map(|((a, b), v)| (a, b, v)).collect()).collect(),
            counit,
            antipode: antipode.into_iter().map(to_sparse).collect(),
            weak,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis
    }

    pub fn is_weak(&self) -> bool {
        self.weak
    }

    pub fn is_exact(&self) -> bool {
        self.mult.iter().flatten().map(|(_, v)| v).all(Scalar::is_exact)
            && self.comult.iter().flatten().map(|(_, _, v)| v).all(Scalar::is_exact)
            && self.counit.iter().all(Scalar::is_exact)
            && self.antipode.iter().flatten().map(|(_, v)| v).all(Scalar::is_exact)
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        BTreeMap::from([(i, Scalar::one())])
    }

    pub fn one(&self) -> Elem {
        self.unit.iter().cloned().collect()
    }

    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.mult[i * self.dim() + j]
    }

    #[inline]
    pub fn comul_basis(&self, i: usize) -> &[(usize, usize, Scalar)] {
        &self.comult[i]
    }

    #[inline]
    pub fn counit_basis(&self, i: usize) -> &Scalar {
        &self.counit[i]
    }

    #[inline]
    pub fn antipode_basis(&self, i: usize) -> &[(usize, Scalar)] {
        &self.antipode[i]
    }

    pub fn unit_sparse(&self) -> &[(usize, Scalar)] {
        &self.unit
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = Elem::new();
        for (&i, a) in x {
            for (&j, b) in y {
                let ab = a.mul(b);
                for (k, c) in self.mul_basis(i, j) {
                    acc(&mut out, *k, ab.mul(c));
                }
            }
        }
        out
    }

    pub fn comul(&self, x: &Elem) -> Elem2 {
        let mut out = Elem2::new();
        for (&i, a) in x {
            for (j, k, c) in self.comul_basis(i) {
                acc(&mut out, (*j, *k), a.mul(c));
            }
        }
        out
    }

    pub fn counit(&self, x: &Elem) -> Scalar {
        x.iter().fold(Scalar::zero(), |s, (&i, a)| s.add(&a.mul(&self.counit[i])))
    }

    pub fn antipode(&self, x: &Elem) -> Elem {
        let mut out = Elem::new();
        for (&i, a) in x {
            for (j, c) in self.antipode_basis(i) {
                acc(&mut out, *j, a.mul(c));
            }
        }
        out
    }

    pub fn scale(x: &Elem, s: &Scalar) -> Elem {
        x.iter().filter_map(|(&k, v)| Some((k, v.mul(s))).filter(|(_, v)| !v.is_zero())).collect()
    }

    fn antipode_matrix(&self) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for (j, c) in self.antipode_basis(i) {
                m.set(*j, i, c.clone());
            }
        }
        m
    }

    fn matrix_to_sparse(m: &Mat) -> Vec<Vec<(usize, Scalar)>> {
        (0..m.cols)
            .map(|i| (0..m.rows).filter(|&j| !m.get(j, i).is_zero()).map(|j| (j, m.get(j, i).clone())).collect())
            .collect()
    }

    /// True when S∘S is the identity (exactly, or within tolerance for floats).
    pub fn antipode_involutive(&self) -> bool {
        (0..self.dim()).all(|i| {
            let s2 = self.antipode(&self.antipode(&self.basis_elem(i)));
            elems_close(&s2, &self.basis_elem(i))
        })
    }

    fn antipode_inverse(&self) -> Result<Vec<Vec<(usize, Scalar)>>> {
        if self.antipode_involutive() {
            return Ok(self.antipode.clone());
        }
        let inv = self
            .antipode_matrix()
            .inverse(DEFAULT_TOL)
            .ok_or_else(|| Error::AxiomViolation(format!("{}: antipode is not invertible", self.name)))?;
        Ok(HopfAlgebra::matrix_to_sparse(&inv))
    }

    /// Dual algebra on the dual basis.
    pub fn dual(&self) -> HopfAlgebra {
        let n = self.dim();
        let mut mult = vec![Vec::new(); n * n];
        for (k, terms) in self.comult.iter().enumerate() {
            for (i, j, c) in terms {
                mult[i * n + j].push((k, c.clone()));
            }
        }
        let mut comult = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.mul_basis(i, j) {
                    comult[*k].push((i, j, c.clone()));
                }
            }
        }
        let unit = (0..n).filter(|&i| !self.counit[i].is_zero()).map(|i| (i, self.counit[i].clone())).collect();
        let mut counit = vec![Scalar::zero(); n];
        for (i, c) in &self.unit {
            counit[*i] = c.clone();
        }
        let mut antipode = vec![Vec::new(); n];
        for j in 0..n {
            for (i, c) in self.antipode_basis(j) {
                antipode[*i].push((j, c.clone()));
            }
        }
        for v in mult.iter_mut().chain(antipode.iter_mut()) {
            v.sort_by_key(|x| x.0);
        }
        HopfAlgebra {
            name: format!("{}^*", self.name),
            basis: self.basis.iter().map(|b| format!("{b}^")).collect(),
            mult,
            unit,
            comult,
            counit,
            antipode,
            weak: self.weak,
        }
    }

    /// Opposite multiplication.
    pub fn op(&self) -> Result<HopfAlgebra> {
        let n = self.dim();
        let mult = (0..n * n).map(|ij| self.mult[(ij % n) * n + ij / n].clone()).collect();
        Ok(HopfAlgebra {
            name: format!("{}^op", self.name),
            mult,
            antipode: self.antipode_inverse()?,
            ..self.clone()
        })
    }

    /// Opposite comultiplication.
    pub fn cop(&self) -> Result<HopfAlgebra> {
        let comult = self.comult.iter().map(|t| t.iter().map(|(a, b, c)| (*b, *a, c.clone())).collect()).collect();
        Ok(HopfAlgebra {
            name: format!("{}^cop", self.name),
            comult,
            antipode: self.antipode_inverse()?,
            ..self.clone()
        })
    }

    /// ℂ[G]: basis g, Δg = g⊗g, ε(g) = 1, S(g) = g⁻¹.
    pub fn group_algebra(g: &Group) -> HopfAlgebra {
        let n = g.order();
        HopfAlgebra {
            name: format!("C[{}]", g.name()),
            basis: g.elements().to_vec(),
            mult: (0..n * n).map(|ij| vec![(g.mul(ij / n, ij % n), Scalar::one())]).collect(),
            unit: vec![(g.identity(), Scalar::one())],
            comult: (0..n).map(|i| vec![(i, i, Scalar::one())]).collect(),
            counit: vec![Scalar::one(); n],
            antipode: (0..n).map(|i| vec![(g.inv(i), Scalar::one())]).collect(),
            weak: false,
        }
    }

    /// ℂ^G: basis δ_g, pointwise product, Δδ_g = Σ_{xy=g} δ_x⊗δ_y.
    pub fn function_algebra(g: &Group) -> HopfAlgebra {
        let n = g.order();
        let mut comult = vec![Vec::new(); n];
        for x in 0..n {
            for y in 0..n {
                comult[g.mul(x, y)].push((x, y, Scalar::one()));
            }
        }
        HopfAlgebra {
            name: format!("C^{}", g.name()),
            basis: g.elements().iter().map(|e| format!("d{e}")).collect(),
            mult: (0..n * n).map(|ij| if ij / n == ij % n { vec![(ij / n, Scalar::one())] } else { vec![] }).collect(),
            unit: (0..n).map(|i| (i, Scalar::one())).collect(),
            comult,
            counit: (0..n).map(|i| if i == g.identity() { Scalar::one() } else { Scalar::zero() }).collect(),
            antipode: (0..n).map(|i| vec![(g.inv(i), Scalar::one())]).collect(),
            weak: false,
        }
    }

    /// ℂ^{M×M} ⋊ ℂ[G] for a G-set M. Basis index (m·|M| + n)·|G| + k.
    pub fn weak_smash(m: &GSet) -> HopfAlgebra {
        let g = m.group();
        let (nm, nk) = (m.size(), g.order());
        let idx = |a: usize, b: usize, k: usize| (a * nm + b) * nk + k;
        let dim = nm * nm * nk;
        let mut basis = Vec::with_capacity(dim);
        for a in 0..nm {
            for b in 0..nm {
                for k in 0..nk {
                    basis.push(format!("d{}*d{}*{}", m.points()[a], m.points()[b], g.element_name(k)));
                }
            }
        }
        let mut mult = vec![Vec::new(); dim * dim];
        for a in 0..nm {
            for b in 0..nm {
                for h in 0..nk {
                    let (p, q) = (m.act(g.inv(h), a), m.act(g.inv(h), b));
                    for k in 0..nk {
                        mult[idx(a, b, h) * dim + idx(p, q, k)] = vec![(idx(a, b, g.mul(h, k)), Scalar::one())];
                    }
                }
            }
        }
        let mut unit = Vec::new();
        let mut comult = vec![Vec::new(); dim];
        let mut counit = vec![Scalar::zero(); dim];
        let mut antipode = vec![Vec::new(); dim];
        for a in 0..nm {
            for b in 0..nm {
                unit.push((idx(a, b, g.identity()), Scalar::one()));
                for k in 0..nk {
                    let i = idx(a, b, k);
                    comult[i] = (0..nm).map(|p| (idx(a, p, k), idx(p, b, k), Scalar::one())).collect();
                    if a == b {
                        counit[i] = Scalar::one();
                    }
                    let ki = g.inv(k);
                    antipode[i] = vec![(idx(m.act(ki, b), m.act(ki, a), ki), Scalar::one())];
                }
            }
        }
        unit.sort_by_key(|x| x.0);
        HopfAlgebra {
            name: format!("C^(MxM)#C[{}]", g.name()),
            basis,
            mult,
            unit,
            comult,
            counit,
            antipode,
            weak: true,
        }
    }

    /// ⟨M×M⟩ ⊗ ℂ^G, the dual of [`HopfAlgebra::weak_smash`], built from its own formulas.
    pub fn weak_dual_smash(m: &GSet) -> HopfAlgebra {
        let g = m.group();
        let (nm, nk) = (m.size(), g.order());
        let idx = |a: usize, b: usize, k: usize| (a * nm + b) * nk + k;
        let dim = nm * nm * nk;
        let mut basis = Vec::with_capacity(dim);
        for a in 0..nm {
            for b in 0..nm {
                for k in 0..nk {
                    basis.push(format!("{}*{}*d{}", m.points()[a], m.points()[b], g.element_name(k)));
                }
            }
        }
        let mut mult = vec![Vec::new(); dim * dim];
        for a in 0..nm {
            for b in 0..nm {
                for q in 0..nm {
                    for k in 0..nk {
                        mult[idx(a, b, k) * dim + idx(b, q, k)] = vec![(idx(a, q, k), Scalar::one())];
                    }
                }
            }
        }
        let mut unit = Vec::new();
        for a in 0..nm {
            for k in 0..nk {
                unit.push((idx(a, a, k), Scalar::one()));
            }
        }
        unit.sort_by_key(|x| x.0);
        let mut comult = vec![Vec::new(); dim];
        let mut counit = vec![Scalar::zero(); dim];
        let mut antipode = vec![Vec::new(); dim];
        for a in 0..nm {
            for b in 0..nm {
                for k in 0..nk {
                    let i = idx(a, b, k);
                    for x in 0..nk {
                        let xi = g.inv(x);
                        let y = g.mul(xi, k);
                        comult[i].push((idx(a, b, x), idx(m.act(xi, a), m.act(xi, b), y), Scalar::one()));
                    }
                    if k == g.identity() {
                        counit[i] = Scalar::one();
                    }
                    let ki = g.inv(k);
                    antipode[i] = vec![(idx(m.act(ki, b), m.act(ki, a), ki), Scalar::one())];
                }
            }
        }
        HopfAlgebra {
            name: format!("<MxM>*C^{}", g.name()),
            basis,
            mult,
            unit,
            comult,
            counit,
            antipode,
            weak: true,
        }
    }

    /// Reads the structure-constant JSON format.
    pub fn from_json(text: &str) -> Result<HopfAlgebra> {
        let v: Value = serde_json::from_str(text)?;
        HopfAlgebra::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<HopfAlgebra> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("structure file must be an object".into()))?;
        let allowed = ["name", "dim", "basis", "mult", "unit", "comult", "counit", "antipode", "weak"];
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown key '{k}'")));
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| Error::Parse(format!("missing '{k}'")));
        let n = field("dim")?.as_u64().ok_or_else(|| Error::Parse("dim must be a positive integer".into()))? as usize;
        let scalar = |x: &Value| Scalar::from_json(x).ok_or_else(|| Error::Parse(format!("bad scalar {x}")));
        let vec1 = |x: &Value, len: usize| -> Result<Vec<Scalar>> {
            let a = x.as_array().filter(|a| a.len() == len).ok_or_else(|| Error::Parse("wrong array length".into()))?;
            a.iter().map(scalar).collect()
        };
        let tensor = |x: &Value, shape: &[usize]| -> Result<Vec<Scalar>> {
            fn walk(x: &Value, shape: &[usize], out: &mut Vec<Value>) -> Result<()> {
                if shape.is_empty() {
                    out.push(x.clone());
                    return Ok(());
                }
                let a = x.as_array().filter(|a| a.len() == shape[0]).ok_or_else(|| Error::Parse("wrong tensor shape".into()))?;
                for y in a {
                    walk(y, &shape[1..], out)?;
                }
                Ok(())
            }
            let mut flat = Vec::new();
            walk(x, shape, &mut flat)?;
            flat.iter().map(scalar).collect()
        };
        let m = tensor(field("mult")?, &[n, n, n])?;
        let d = tensor(field("comult")?, &[n, n, n])?;
        let s = tensor(field("antipode")?, &[n, n])?;
        let unit = vec1(field("unit")?, n)?;
        let counit = vec1(field("counit")?, n)?;
        let weak = obj.get("weak").and_then(Value::as_bool).unwrap_or(false);
        let basis = match obj.get("basis") {
            Some(Value::Array(a)) if a.len() == n => a.iter().map(|x| x.as_str().unwrap_or("?").to_string()).collect(),
            Some(_) => return Err(Error::Parse("basis must list dim labels".into())),
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("H");
        let sparse = |it: &mut dyn Iterator<Item = (usize, Scalar)>| -> Elem { it.filter(|(_, v)| !v.is_zero()).collect() };
        let mult = (0..n * n).map(|ij| sparse(&mut (0..n).map(|k| (k, m[ij * n + k].clone())))).collect();
        let comult = (0..n)
            .map(|i| {
                let mut e = Elem2::new();
                for j in 0..n {
                    for k in 0..n {
                        acc(&mut e, (j, k), d[(i * n + j) * n + k].clone());
                    }
                }
                e
            })
            .collect();
        // antipode[i][j]: coefficient of e_j in S(e_i)
        let antipode = (0..n).map(|i| sparse(&mut (0..n).map(|j| (j, s[i * n + j].clone())))).collect();
        let unit = sparse(&mut unit.into_iter().enumerate());
        HopfAlgebra::from_parts(name, basis, mult, unit, comult, counit, antipode, weak)
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let mut m = vec![vec![vec![Value::from(0); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.mul_basis(i, j) {
                    m[i][j][*k] = c.to_json();
                }
            }
        }
        let mut d = vec![vec![vec![Value::from(0); n]; n]; n];
        for i in 0..n {
            for (j, k, c) in self.comul_basis(i) {
                d[i][*j][*k] = c.to_json();
            }
        }
        let mut s = vec![vec![Value::from(0); n]; n];
        for i in 0..n {
            for (j, c) in self.antipode_basis(i) {
                s[i][*j] = c.to_json();
            }
        }
        let mut unit = vec![Value::from(0); n];
        for (i, c) in &self.unit {
            unit[*i] = c.to_json();
        }
        json!({
            "name": self.name,
            "dim": n,
            "basis": self.basis,
            "mult": m,
            "unit": unit,
            "comult": d,
            "counit": self.counit.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "antipode": s,
            "weak": self.weak,
        })
    }

    /// ε(e_a e_b) for all basis pairs.
    fn counit_products(&self) -> Vec<Scalar> {
        let n = self.dim();
        let mut e = vec![Scalar::zero(); n * n];
        for a in 0..n {
            for b in 0..n {
                e[a * n + b] = self.mul_basis(a, b).iter().fold(Scalar::zero(), |s, (k, c)| s.add(&c.mul(&self.counit[*k])));
            }
        }
        e
    }

    /// ε_t(x) = ε(1_(1) x) 1_(2).
    pub fn target_counit(&self, x: &Elem) -> Elem {
        let d1 = self.comul(&self.one());
        let mut out = Elem::new();
        for ((a, b), c) in &d1 {
            let v = self.counit(&self.mul(&self.basis_elem(*a), x));
            acc(&mut out, *b, c.mul(&v));
        }
        out
    }

    /// ε_s(x) = 1_(1) ε(x 1_(2)).
    pub fn source_counit(&self, x: &Elem) -> Elem {
        let d1 = self.comul(&self.one());
        let mut out = Elem::new();
        for ((a, b), c) in &d1 {
            let v = self.counit(&self.mul(x, &self.basis_elem(*b)));
            acc(&mut out, *a, c.mul(&v));
        }
        out
    }

    /// Checks the (weak) Hopf algebra axioms on all basis elements.
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.dim();
        let mut rep = AxiomReport::default();
        let one = self.one();
        let e = |i: usize| self.basis_elem(i);

        let mut r = Residual::default();
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&e(i), &e(j));
                for k in 0..n {
                    let jk: Elem = self.mul_basis(j, k).iter().cloned().collect();
                    r.maps(&self.mul(&ij, &e(k)), &self.mul(&e(i), &jk));
                }
            }
        }
        rep.push("associativity", r);

        let mut r = Residual::default();
        for i in 0..n {
            r.maps(&self.mul(&one, &e(i)), &e(i));
            r.maps(&self.mul(&e(i), &one), &e(i));
        }
        rep.push("unit", r);

        let mut r = Residual::default();
        for i in 0..n {
            let mut left = Elem3::new();
            let mut right = Elem3::new();
            for (a, b, c) in self.comul_basis(i) {
                for (x, y, d) in self.comul_basis(*a) {
                    acc(&mut left, (*x, *y, *b), c.mul(d));
                }
                for (x, y, d) in self.comul_basis(*b) {
                    acc(&mut right, (*a, *x, *y), c.mul(d));
                }
            }
            r.maps(&left, &right);
        }
        rep.push("coassociativity", r);

        let mut r = Residual::default();
        for i in 0..n {
            let mut left = Elem::new();
            let mut right = Elem::new();
            for (a, b, c) in self.comul_basis(i) {
                acc(&mut left, *b, c.mul(&self.counit[*a]));
                acc(&mut right, *a, c.mul(&self.counit[*b]));
            }
            r.maps(&left, &e(i));
            r.maps(&right, &e(i));
        }
        rep.push("counit", r);

        let mut r = Residual::default();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.comul(&self.mul(&e(i), &e(j)));
                let rhs = self.mul2(&self.comul(&e(i)), &self.comul(&e(j)));
                r.maps(&lhs, &rhs);
            }
        }
        rep.push("comultiplication is multiplicative", r);

        if !self.weak {
            let mut r = Residual::default();
            let mut oo = Elem2::new();
            for (a, c) in &self.unit {
                for (b, d) in &self.unit {
                    acc(&mut oo, (*a, *b), c.mul(d));
                }
            }
            r.maps(&self.comul(&one), &oo);
            rep.push("comultiplication is unital", r);

            let mut r = Residual::default();
            let eps = self.counit_products();
            for i in 0..n {
                for j in 0..n {
                    r.scalars(&eps[i * n + j], &self.counit[i].mul(&self.counit[j]));
                }
            }
            r.scalars(&self.counit(&one), &Scalar::one());
            rep.push("counit is multiplicative", r);

            let mut r = Residual::default();
            for i in 0..n {
                let eps1 = Elem::from_iter(
                    one.iter().map(|(k, v)| (*k, v.mul(&self.counit[i]))).filter(|(_, v)| !v.is_zero()),
                );
                let (mut left, mut right) = (Elem::new(), Elem::new());
                for (a, b, c) in self.comul_basis(i) {
                    let sa = self.antipode(&e(*a));
                    let sb = self.antipode(&e(*b));
                    for (k, v) in self.mul(&sa, &e(*b)) {
                        acc(&mut left, k, v.mul(c));
                    }
                    for (k, v) in self.mul(&e(*a), &sb) {
                        acc(&mut right, k, v.mul(c));
                    }
                }
                r.maps(&left, &eps1);
                r.maps(&right, &eps1);
            }
            rep.push("antipode", r);
        } else {
            self.check_weak(&mut rep);
        }

        let mut r = Residual::default();
        for i in 0..n {
            r.maps(&self.antipode(&self.antipode(&e(i))), &e(i));
        }
        rep.push("antipode is involutive", r);
        rep
    }

    fn check_weak(&self, rep: &mut AxiomReport) {
        let n = self.dim();
        let e = |i: usize| self.basis_elem(i);
        let d1 = self.comul(&self.one());

        let mut r = Residual::default();
        let mut lhs = Elem3::new();
        for ((a, b), c) in &d1 {
            for (x, y, d) in self.comul_basis(*a) {
                acc(&mut lhs, (*x, *y, *b), c.mul(d));
            }
        }
        let (mut mid, mut rhs) = (Elem3::new(), Elem3::new());
        for ((a, b), c) in &d1 {
            for ((x, y), d) in &d1 {
                let cd = c.mul(d);
                // (Δ(1)⊗1)(1⊗Δ(1)) = Σ a ⊗ b x ⊗ y
                for (k, v) in self.mul_basis(*b, *x) {
                    acc(&mut mid, (*a, *k, *y), cd.mul(v));
                }
                // (1⊗Δ(1))(Δ(1)⊗1) = Σ x ⊗ a y ⊗ b
                for (k, v) in self.mul_basis(*a, *y) {
                    acc(&mut rhs, (*x, *k, *b), cd.mul(v));
                }
            }
        }
        r.maps(&lhs, &mid);
        r.maps(&lhs, &rhs);
        rep.push("weak comultiplication of unit", r);

        let mut r = Residual::default();
        let eps = self.counit_products();
        for g in 0..n {
            for h in 0..n {
                let gh = self.mul_basis(g, h);
                for k in 0..n {
                    let lhs = gh.iter().fold(Scalar::zero(), |s, (c, v)| s.add(&v.mul(&eps[c * n + k])));
                    let (mut m1, mut m2) = (Scalar::zero(), Scalar::zero());
                    for (a, b, c) in self.comul_basis(h) {
                        m1 = m1.add(&c.mul(&eps[g * n + a]).mul(&eps[b * n + k]));
                        m2 = m2.add(&c.mul(&eps[g * n + b]).mul(&eps[a * n + k]));
                    }
                    r.scalars(&lhs, &m1);
                    r.scalars(&lhs, &m2);
                }
            }
        }
        rep.push("weak counit", r);

        let mut r = Residual::default();
        for i in 0..n {
            let (mut left, mut right, mut three) = (Elem::new(), Elem::new(), Elem::new());
            for (a, b, c) in self.comul_basis(i) {
                for (k, v) in self.mul(&e(*a), &self.antipode(&e(*b))) {
                    acc(&mut left, k, v.mul(c));
                }
                for (k, v) in self.mul(&self.antipode(&e(*a)), &e(*b)) {
                    acc(&mut right, k, v.mul(c));
                }
                for (x, y, d) in self.comul_basis(*b) {
                    let t = self.mul(&self.mul(&self.antipode(&e(*a)), &e(*x)), &self.antipode(&e(*y)));
                    for (k, v) in t {
                        acc(&mut three, k, v.mul(c).mul(d));
                    }
                }
            }
            r.maps(&left, &self.target_counit(&e(i)));
            r.maps(&right, &self.source_counit(&e(i)));
            r.maps(&three, &self.antipode(&e(i)));
        }
        rep.push("weak antipode", r);
    }

    fn mul2(&self, x: &Elem2, y: &Elem2) -> Elem2 {
        let mut out = Elem2::new();
        for ((a, b), c) in x {
            for ((p, q), d) in y {
                let cd = c.mul(d);
                for (k1, v1) in self.mul_basis(*a, *p) {
                    for (k2, v2) in self.mul_basis(*b, *q) {
                        acc(&mut out, (*k1, *k2), cd.mul(v1).mul(v2));
                    }
                }
            }
        }
        out
    }

    /// Integral property of `l` (two-sided for Hopf algebras, the weak version otherwise).
    pub fn check_integral(&self, l: &Elem) -> Residual {
        let mut r = Residual::default();
        for i in 0..self.dim() {
            let h = self.basis_elem(i);
            if self.weak {
                r.maps(&self.mul(&h, l), &self.mul(&self.target_counit(&h), l));
                r.maps(&self.mul(l, &h), &self.mul(l, &self.source_counit(&h)));
            } else {
                let eh = HopfAlgebra::scale(l, &self.counit[i]);
                r.maps(&self.mul(&h, l), &eh);
                r.maps(&self.mul(l, &h), &eh);
            }
        }
        r
    }

    /// The integral ℓ' = Σ_i β^i(b_{i(1)}) b_{i(2)}, with ε(ℓ') = dim H.
    pub fn compute_integral(&self) -> Result<Elem> {
        if self.weak {
            return Err(Error::Incompatible("weak algebras carry explicit integrals".into()));
        }
        if !self.antipode_involutive() {
            return Err(Error::NonSemisimple);
        }
        let mut l = Elem::new();
        for i in 0..self.dim() {
            for (j, k, c) in self.comul_basis(i) {
                if *j == i {
                    acc(&mut l, *k, c.clone());
                }
            }
        }
        if self.counit(&l).is_negligible(DEFAULT_TOL) || !self.check_integral(&l).passed() {
            return Err(Error::NonSemisimple);
        }
        Ok(l)
    }
}

fn elems_close<K: Ord + Clone>(a: &BTreeMap<K, Scalar>, b: &BTreeMap<K, Scalar>) -> bool {
    let mut r = Residual::default();
    r.maps(a, b);
    r.passed()
}

/// Largest deviation seen while comparing the two sides of an identity.
#[derive(Clone, Debug)]
pub struct Residual {
    pub max_abs: f64,
    pub exact: bool,
    pub exact_zero: bool,
}

impl Default for Residual {
    fn default() -> Residual {
        Residual { max_abs: 0.0, exact: true, exact_zero: true }
    }
}

impl Residual {
    pub fn scalars(&mut self, a: &Scalar, b: &Scalar) {
        let d = a.sub(b);
        if !d.is_exact() {
            self.exact = false;
        }
        if !d.is_zero() {
            self.exact_zero = false;
            let rel = d.abs() / 1f64.max(a.abs()).max(b.abs());
            self.max_abs = self.max_abs.max(rel);
        }
    }

    pub fn maps<K: Ord + Clone>(&mut self, a: &BTreeMap<K, Scalar>, b: &BTreeMap<K, Scalar>) {
        let zero = Scalar::zero();
        for (k, v) in a {
            self.scalars(v, b.get(k).unwrap_or(&zero));
        }
        for (k, v) in b {
            if !a.contains_key(k) {
                self.scalars(&zero, v);
            }
        }
    }

    pub fn merge(&mut self, o: &Residual) {
        self.max_abs = self.max_abs.max(o.max_abs);
        self.exact &= o.exact;
        self.exact_zero &= o.exact_zero;
    }

    pub fn passed(&self) -> bool {
        self.passed_with(DEFAULT_TOL)
    }

    pub fn passed_with(&self, tol: f64) -> bool {
        if self.exact {
            self.exact_zero
        } else {
            self.max_abs <= tol
        }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub residual: Residual,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn push(&mut self, name: &'static str, residual: Residual) {
        self.checks.push(AxiomCheck { name, residual });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.residual.passed())
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.residual.passed()).map(|c| c.name).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Residual> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.residual)
    }
}

/// A representation of an algebra, one matrix per basis element.
#[derive(Clone, Debug)]
pub struct AlgebraRep {
    pub name: String,
    pub dim: usize,
    pub matrices: Vec<Mat>,
}

/// Verifies ρ(e_i)ρ(e_j) = Σ_k m_ij^k ρ(e_k) and ρ(1) = id.
pub fn check_algebra_rep(h: &HopfAlgebra, rep: &AlgebraRep) -> Result<()> {
    let n = h.dim();
    if rep.matrices.len() != n || rep.matrices.iter().any(|m| m.rows != rep.dim || m.cols != rep.dim) {
        return Err(Error::Parse(format!("representation {} has the wrong shape", rep.name)));
    }
    let image = |x: &[(usize, Scalar)]| {
        x.iter().fold(Mat::zeros(rep.dim, rep.dim), |m, (k, c)| m.add(&rep.matrices[*k].scale(c)))
    };
    if !image(h.unit_sparse()).approx_eq(&Mat::identity(rep.dim), DEFAULT_TOL) {
        return Err(Error::AxiomViolation(format!("{} does not send 1 to the identity", rep.name)));
    }
    for i in 0..n {
        for j in 0..n {
            if !rep.matrices[i].mul(&rep.matrices[j]).approx_eq(&image(h.mul_basis(i, j)), DEFAULT_TOL) {
                return Err(Error::AxiomViolation(format!("{} is not multiplicative", rep.name)));
            }
        }
    }
    Ok(())
}

/// λ = Σ_i dim V_i · tr ρ_i, as coefficients on the basis of H (an element of H*).
pub fn canonical_dual_integral(h: &HopfAlgebra, irreps: &[AlgebraRep]) -> Result<Vec<Scalar>> {
    let total: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
    if total != h.dim() {
        return Err(Error::Incompatible(format!("irreps have Σ dim² = {total}, expected {}", h.dim())));
    }
    for r in irreps {
        check_algebra_rep(h, r)?;
    }
    let lambda: Vec<Scalar> = (0..h.dim())
        .map(|i| irreps.iter().fold(Scalar::zero(), |s, r| s.add(&r.matrices[i].trace().mul(&Scalar::int(r.dim as i64)))))
        .collect();
    let l = h.compute_integral()?;
    let eps = h.counit(&l);
    let pairing = l.iter().fold(Scalar::zero(), |s, (k, v)| s.add(&v.mul(&lambda[*k])));
    let normalized = pairing.mul(&eps.inv().ok_or(Error::NonSemisimple)?);
    if !normalized.approx_eq(&Scalar::one(), DEFAULT_TOL) {
        return Err(Error::AxiomViolation("λ(ℓ) differs from 1 for the normalized integral".into()));
    }
    Ok(lambda)
}

/// Irreps of ℂ[G]* = ℂ^G on the dual basis: evaluations at group elements.
pub fn dual_irreps_of_group_algebra(g: &Group) -> Vec<AlgebraRep> {
    let n = g.order();
    (0..n)
        .map(|h| AlgebraRep {
            name: format!("ev{}", g.element_name(h)),
            dim: 1,
            matrices: (0..n).map(|x| Mat::scalar(if x == h { Scalar::one() } else { Scalar::zero() })).collect(),
        })
        .collect()
}

/// Irreps of (ℂ^G)* = ℂ[G] on the dual basis, from the group's irreps.
pub fn dual_irreps_of_function_algebra(g: &Group) -> Option<Vec<AlgebraRep>> {
    Some(
        g.irreps()?
            .iter()
            .map(|r| AlgebraRep { name: r.name.clone(), dim: r.dim, matrices: r.matrices.clone() })
            .collect(),
    )
}

pub type HopfRef = Arc<HopfAlgebra>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_and_function_algebras() {
        for name in ["Z/2", "Z/3", "Z/4", "S3"] {
            let g = Group::parse(name).unwrap();
            for h in [HopfAlgebra::group_algebra(&g), HopfAlgebra::function_algebra(&g)] {
                let rep = h.check_axioms();
                assert!(rep.all_passed(), "{name}: {:?}", rep.failures());
                let l = h.compute_integral().unwrap();
                assert!(h.counit(&l).exact_eq(&Scalar::int(g.order() as i64)));
                assert!(h.check_integral(&l).passed());
                let sl = h.antipode(&l);
                assert!(elems_close(&sl, &l));
            }
        }
    }

    #[test]
    fn dual_of_group_algebra_is_function_algebra() {
        let g = Group::symmetric(3);
        let d = HopfAlgebra::group_algebra(&g).dual();
        let f = HopfAlgebra::function_algebra(&g);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(d.mul_basis(i, j).len(), f.mul_basis(i, j).len());
            }
        }
        assert!(d.check_axioms().all_passed());
    }

    #[test]
    fn op_cop_stay_hopf() {
        let g = Group::symmetric(3);
        let h = HopfAlgebra::function_algebra(&g);
        assert!(h.op().unwrap().check_axioms().all_passed());
        assert!(h.cop().unwrap().cop().unwrap().check_axioms().all_passed());
    }

    #[test]
    fn broken_structure_is_reported() {
        let g = Group::cyclic(3);
        let mut h = HopfAlgebra::group_algebra(&g);
        h.antipode[1] = vec![(1, Scalar::one())];
        let rep = h.check_axioms();
        assert!(rep.failures().contains(&"antipode"));
    }

    #[test]
    fn weak_smash_small() {
        let k = Arc::new(Group::cyclic(2));
        let m = GSet::cosets(k.clone(), &[0]).unwrap();
        let h = HopfAlgebra::weak_smash(&m);
        let rep = h.check_axioms();
        assert!(rep.all_passed(), "{:?}", rep.failures());
        let d = HopfAlgebra::weak_dual_smash(&m);
        let rep = d.check_axioms();
        assert!(rep.all_passed(), "{:?}", rep.failures());
    }

    #[test]
    fn structure_file_roundtrip() {
        let h = HopfAlgebra::function_algebra(&Group::cyclic(3));
        let back = HopfAlgebra::from_json(&h.to_json().to_string()).unwrap();
        assert!(back.check_axioms().all_passed());
        assert_eq!(back.dim(), 3);
    }

    #[test]
    fn canonical_dual_integrals() {
        let g = Group::symmetric(3);
        let f = HopfAlgebra::function_algebra(&g);
        let irreps = dual_irreps_of_function_algebra(&g).unwrap();
        let lam = canonical_dual_integral(&f.dual(), &irreps).unwrap();
        assert!(lam[g.identity()].exact_eq(&Scalar::int(6)));
    }
}
