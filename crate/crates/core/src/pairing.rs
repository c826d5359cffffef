//! Skew pairings between (weak) Hopf algebras and generalized doubles.

use crate::error::{Error, Result};
use crate::hopf::{acc, Elem, Elem2, HopfAlgebra, HopfRef, Residual};
use crate::scalar::Scalar;
use std::sync::Arc;

/// A bilinear form τ: A × B → ℂ stored as a dense dim A × dim B table.
#[derive(Clone, Debug)]
pub struct SkewPairing {
    pub left: HopfRef,
    pub right: HopfRef,
    values: Vec<Scalar>,
}

impl SkewPairing {
    pub fn new(left: HopfRef, right: HopfRef, values: Vec<Scalar>) -> Result<SkewPairing> {
        if values.len() != left.dim() * right.dim() {
            return Err(Error::Parse(format!(
                "pairing table has {} entries, expected {}",
                values.len(),
                left.dim() * right.dim()
            )));
        }
        Ok(SkewPairing { left, right, values })
    }

    pub fn from_fn(left: HopfRef, right: HopfRef, f: impl Fn(usize, usize) -> Scalar) -> SkewPairing {
        let (n, m) = (left.dim(), right.dim());
        let values = (0..n * m).map(|ij| f(ij / m, ij % m)).collect();
        SkewPairing { left, right, values }
    }

    /// (a, b) ↦ ε(a)ε(b).
    pub fn trivial(left: HopfRef, right: HopfRef) -> SkewPairing {
        let (l, r) = (left.clone(), right.clone());
        SkewPairing::from_fn(left, right, move |i, j| l.counit_basis(i).mul(r.counit_basis(j)))
    }

    /// The evaluation pairing between H* (on the dual basis) and H.
    pub fn evaluation(dual: HopfRef, h: HopfRef) -> SkewPairing {
        SkewPairing::from_fn(dual, h, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    /// The same table with every entry converted to a float.
    pub fn to_float(&self) -> SkewPairing {
        let values = self.values.iter().map(Scalar::to_float).collect();
        SkewPairing { left: self.left.clone(), right: self.right.clone(), values }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.values[i * self.right.dim() + j]
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn eval(&self, a: &Elem, b: &Elem) -> Scalar {
        let mut s = Scalar::zero();
        for (i, x) in a {
            for (j, y) in b {
                s = s.add(&x.mul(y).mul(self.get(*i, *j)));
            }
        }
        s
    }

    /// τ⁻¹(a, b) = τ(S a, b).
    pub fn convolution_inverse(&self) -> SkewPairing {
        let (n, m) = (self.left.dim(), self.right.dim());
        let mut values = vec![Scalar::zero(); n * m];
        for i in 0..n {
            for (k, c) in self.left.antipode_basis(i) {
                for j in 0..m {
                    let v = self.get(*k, j);
                    if !v.is_zero() {
                        values[i * m + j] = values[i * m + j].add(&c.mul(v));
                    }
                }
            }
        }
        SkewPairing { left: self.left.clone(), right: self.right.clone(), values }
    }

    /// Residual of τ(aa', b) = τ(a, b₁)τ(a', b₂), τ(a, bb') = τ(a₂, b)τ(a₁, b'),
    /// τ(a, 1) = ε(a) and τ(1, b) = ε(b).
    pub fn check(&self) -> Residual {
        let (a, b) = (&self.left, &self.right);
        let mut r = Residual::default();
        for i in 0..a.dim() {
            for k in 0..a.dim() {
                let prod = a.mul_basis(i, k);
                for j in 0..b.dim() {
                    let lhs = prod.iter().fold(Scalar::zero(), |s, (x, c)| s.add(&c.mul(self.get(*x, j))));
                    let rhs = b.comul_basis(j).iter().fold(Scalar::zero(), |s, (y1, y2, c)| {
                        s.add(&c.mul(self.get(i, *y1)).mul(self.get(k, *y2)))
                    });
                    r.scalars(&lhs, &rhs);
                }
            }
        }
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                for l in 0..b.dim() {
                    let lhs = b.mul_basis(j, l).iter().fold(Scalar::zero(), |s, (y, c)| s.add(&c.mul(self.get(i, *y))));
                    let rhs = a.comul_basis(i).iter().fold(Scalar::zero(), |s, (x1, x2, c)| {
                        s.add(&c.mul(self.get(*x2, j)).mul(self.get(*x1, l)))
                    });
                    r.scalars(&lhs, &rhs);
                }
            }
        }
        let one_b: Elem = b.one();
        let one_a: Elem = a.one();
        for i in 0..a.dim() {
            r.scalars(&self.eval(&a.basis_elem(i), &one_b), a.counit_basis(i));
        }
        for j in 0..b.dim() {
            r.scalars(&self.eval(&one_a, &b.basis_elem(j)), b.counit_basis(j));
        }
        r
    }

    /// Residual of τ(a₁, b₁)τ⁻¹(a₂, b₂) = ε(a)ε(b) = τ⁻¹(a₁, b₁)τ(a₂, b₂).
    pub fn check_inverse(&self, inv: &SkewPairing) -> Residual {
        let (a, b) = (&self.left, &self.right);
        let mut r = Residual::default();
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                let (mut s1, mut s2) = (Scalar::zero(), Scalar::zero());
                for (x1, x2, c) in a.comul_basis(i) {
                    for (y1, y2, d) in b.comul_basis(j) {
                        let cd = c.mul(d);
                        s1 = s1.add(&cd.mul(self.get(*x1, *y1)).mul(inv.get(*x2, *y2)));
                        s2 = s2.add(&cd.mul(inv.get(*x1, *y1)).mul(self.get(*x2, *y2)));
                    }
                }
                let e = a.counit_basis(i).mul(b.counit_basis(j));
                r.scalars(&s1, &e);
                r.scalars(&s2, &e);
            }
        }
        r
    }

    /// A copy with one entry changed, for negative tests.
    pub fn perturbed(&self, i: usize, j: usize, delta: Scalar) -> SkewPairing {
        let mut p = self.clone();
        let m = self.right.dim();
        p.values[i * m + j] = p.values[i * m + j].add(&delta);
        p
    }
}

/// Second iterated coproduct of a basis element as (x₁, x₂, x₃, coefficient).
fn comul2(h: &HopfAlgebra, i: usize) -> Vec<(usize, usize, usize, Scalar)> {
    let mut out = Vec::new();
    for (a, b, c) in h.comul_basis(i) {
        for (x, y, d) in h.comul_basis(*a) {
            out.push((*x, *y, *b, c.mul(d)));
        }
    }
    out
}

/// The generalized double D(A, B) on A ⊗ B. Basis index i·dim B + j.
pub fn generalized_double(tau: &SkewPairing) -> Result<HopfAlgebra> {
    let r = tau.check();
    if !r.passed() {
        return Err(Error::AxiomViolation("input is not a skew pairing".into()));
    }
    let inv = tau.convolution_inverse();
    let (a, b) = (&tau.left, &tau.right);
    let (na, nb) = (a.dim(), b.dim());
    let dim = na * nb;
    let idx = |i: usize, j: usize| i * nb + j;
    let d2a: Vec<_> = (0..na).map(|k| comul2(a, k)).collect();
    let d2b: Vec<_> = (0..nb).map(|j| comul2(b, j)).collect();

    let mut mult = vec![Elem::new(); dim * dim];
    for j in 0..nb {
        for k in 0..na {
            // coefficient of x₂ ⊗ y₂ before multiplying by e_i on the left and f_l on the right
            let mut mid = Elem2::new();
            for (x1, x2, x3, c) in &d2a[k] {
                for (y1, y2, y3, d) in &d2b[j] {
                    let t = tau.get(*x1, *y1);
                    if t.is_zero() {
                        continue;
                    }
                    let ti = inv.get(*x3, *y3);
                    if ti.is_zero() {
                        continue;
                    }
                    acc(&mut mid, (*x2, *y2), c.mul(d).mul(t).mul(ti));
                }
            }
            for i in 0..na {
                for l in 0..nb {
                    let target = &mut mult[idx(i, j) * dim + idx(k, l)];
                    for ((x2, y2), v) in &mid {
                        for (p, c1) in a.mul_basis(i, *x2) {
                            for (q, c2) in b.mul_basis(*y2, l) {
                                acc(target, idx(*p, *q), v.mul(c1).mul(c2));
                            }
                        }
                    }
                }
            }
        }
    }

    let mut unit = Elem::new();
    for (i, c) in a.unit_sparse() {
        for (j, d) in b.unit_sparse() {
            acc(&mut unit, idx(*i, *j), c.mul(d));
        }
    }
    let mut comult = vec![Elem2::new(); dim];
    let mut counit = vec![Scalar::zero(); dim];
    for i in 0..na {
        for j in 0..nb {
            for (x1, x2, c) in a.comul_basis(i) {
                for (y1, y2, d) in b.comul_basis(j) {
                    acc(&mut comult[idx(i, j)], (idx(*x1, *y1), idx(*x2, *y2)), c.mul(d));
                }
            }
            counit[idx(i, j)] = a.counit_basis(i).mul(b.counit_basis(j));
        }
    }

    let basis: Vec<String> =
        (0..dim).map(|ij| format!("{}⊗{}", a.basis_labels()[ij / nb], b.basis_labels()[ij % nb])).collect();
    let name = format!("D({},{})", a.name(), b.name());
    // antipode needs the twisted product; build with a placeholder first
    let placeholder = vec![Elem::new(); dim];
    let partial =
        HopfAlgebra::from_parts(&name, basis.clone(), mult.clone(), unit.clone(), comult.clone(), counit.clone(), placeholder, a.is_weak())?;
    let mut antipode = Vec::with_capacity(dim);
    for i in 0..na {
        for j in 0..nb {
            let mut sb = Elem::new();
            for (q, c) in b.antipode_basis(j) {
                for (u, d) in a.unit_sparse() {
                    acc(&mut sb, idx(*u, *q), c.mul(d));
                }
            }
            let mut sa = Elem::new();
            for (p, c) in a.antipode_basis(i) {
                for (u, d) in b.unit_sparse() {
                    acc(&mut sa, idx(*p, *u), c.mul(d));
                }
            }
            antipode.push(partial.mul(&sb, &sa));
        }
    }
    HopfAlgebra::from_parts(&name, basis, mult, unit, comult, counit, antipode, a.is_weak())
}

/// ℓ_A ⊗ ℓ_B as an element of D(A, B).
pub fn tensor_integral(tau: &SkewPairing, la: &Elem, lb: &Elem) -> Elem {
    let nb = tau.right.dim();
    let mut out = Elem::new();
    for (i, c) in la {
        for (j, d) in lb {
            acc(&mut out, i * nb + j, c.mul(d));
        }
    }
    out
}

pub fn arc(h: HopfAlgebra) -> HopfRef {
    Arc::new(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn canonical_pairing_of_dual() {
        let g = Group::symmetric(3);
        let h = arc(HopfAlgebra::group_algebra(&g));
        let d = arc(h.dual().cop().unwrap());
        let tau = SkewPairing::evaluation(d, h);
        assert!(tau.check().passed());
        let inv = tau.convolution_inverse();
        assert!(tau.check_inverse(&inv).passed());
    }

    #[test]
    fn trivial_double_is_tensor_product() {
        let a = arc(HopfAlgebra::group_algebra(&Group::cyclic(2)));
        let b = arc(HopfAlgebra::function_algebra(&Group::cyclic(3)));
        let tau = SkewPairing::trivial(a.clone(), b.clone());
        assert!(tau.convolution_inverse().values().iter().zip(tau.values()).all(|(x, y)| x.exact_eq(y)));
        let d = generalized_double(&tau).unwrap();
        assert!(d.check_axioms().all_passed());
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..3 {
                    for l in 0..3 {
                        let got = d.mul_basis(i * 3 + j, k * 3 + l);
                        let ea: Vec<usize> = a.mul_basis(i, k).iter().map(|x| x.0).collect();
                        let eb: Vec<usize> = b.mul_basis(j, l).iter().map(|x| x.0).collect();
                        let expect: Vec<usize> = ea.iter().flat_map(|p| eb.iter().map(move |q| p * 3 + q)).collect();
                        assert_eq!(got.iter().map(|x| x.0).collect::<Vec<_>>(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn drinfeld_double_of_s3() {
        let g = Group::symmetric(3);
        let h = arc(HopfAlgebra::group_algebra(&g));
        let d = arc(h.dual().cop().unwrap());
        let tau = SkewPairing::evaluation(d.clone(), h.clone());
        let dd = generalized_double(&tau).unwrap();
        let rep = dd.check_axioms();
        assert!(rep.all_passed(), "{:?}", rep.failures());
        let l = tensor_integral(&tau, &d.compute_integral().unwrap(), &h.compute_integral().unwrap());
        assert!(dd.check_integral(&l).passed());
    }

    #[test]
    fn perturbed_pairing_fails() {
        let g = Group::cyclic(3);
        let h = arc(HopfAlgebra::group_algebra(&g));
        let d = arc(h.dual().cop().unwrap());
        let tau = SkewPairing::evaluation(d, h).perturbed(0, 1, Scalar::frac(1, 2));
        assert!(!tau.check().passed());
        assert!(generalized_double(&tau).is_err());
    }
}
