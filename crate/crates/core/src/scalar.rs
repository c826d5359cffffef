//! Scalars: exact elements of cyclotomic fields, or complex floats.
//!
//! An exact scalar of level `N` lives in Q(ζ_N) and is stored in the power
//! basis 1, ζ, …, ζ^{φ(N)-1} reduced modulo the N-th cyclotomic polynomial.
//! Operands of different levels are lifted to the lcm of the two levels.

use crate::rational::Rat;
use num_complex::Complex64;
use num_integer::Integer;
use serde_json::Value;
use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

/// Relative tolerance used when comparing float scalars.
pub const DEFAULT_TOL: f64 = 1e-9;

thread_local! {
    static CYCLO_POLYS: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Coefficients (lowest degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Rc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = CYCLO_POLYS.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_poly(d);
            num = poly_div_exact(&num, &den);
        }
    }
    let p = Rc::new(num);
    CYCLO_POLYS.with(|c| c.borrow_mut().insert(n, p.clone()));
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                r[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// Element of Q(ζ_level).
#[derive(Clone, Debug)]
pub struct Cyclo {
    level: u32,
    coeffs: Vec<Rat>,
}

impl Cyclo {
    pub fn from_rat(r: Rat) -> Cyclo {
        Cyclo { level: 1, coeffs: vec![r] }
    }

    /// Builds an element from arbitrary-length coefficients of powers of ζ_level.
    pub fn from_powers(level: u32, powers: &[Rat]) -> Cyclo {
        let mut c = Cyclo { level, coeffs: vec![Rat::zero(); euler_phi(level) as usize] };
        for (k, r) in powers.iter().enumerate() {
            if !r.is_zero() {
                c.add_power(k as u32 % level, r);
            }
        }
        c
    }

    pub fn root_of_unity(level: u32, k: i64) -> Cyclo {
        let k = k.rem_euclid(level as i64) as u32;
        let mut c = Cyclo { level, coeffs: vec![Rat::zero(); euler_phi(level) as usize] };
        c.add_power(k, &Rat::one());
        c
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Adds `r·ζ^k` for any `k < level`.
    fn add_power(&mut self, k: u32, r: &Rat) {
        let phi = self.coeffs.len();
        if (k as usize) < phi {
            self.coeffs[k as usize] = self.coeffs[k as usize].add(r);
            return;
        }
        let mut tmp = vec![Rat::zero(); k as usize + 1];
        tmp[k as usize] = r.clone();
        let red = reduce(self.level, tmp);
        for (a, b) in self.coeffs.iter_mut().zip(red) {
            *a = a.add(&b);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.coeffs[1..].iter().all(Rat::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn lift(&self, level: u32) -> Cyclo {
        if level == self.level {
            return self.clone();
        }
        assert!(level.is_multiple_of(self.level), "cannot lift level {} to {}", self.level, level);
        let step = level / self.level;
        let mut tmp = vec![Rat::zero(); ((self.coeffs.len().max(1) - 1) as u32 * step + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            tmp[i * step as usize] = c.clone();
        }
        Cyclo { level, coeffs: reduce(level, tmp) }
    }

    fn common(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
        if a.level == b.level {
            return (a.clone(), b.clone());
        }
        let l = a.level.lcm(&b.level);
        (a.lift(l), b.lift(l))
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        let (a, b) = Cyclo::common(self, o);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y)).collect();
        Cyclo { level: a.level, coeffs }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { level: self.level, coeffs: self.coeffs.iter().map(Rat::neg).collect() }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        let (a, b) = Cyclo::common(self, o);
        let n = a.coeffs.len();
        let mut tmp = vec![Rat::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    tmp[i + j] = tmp[i + j].add(&x.mul(y));
                }
            }
        }
        Cyclo { level: a.level, coeffs: reduce(a.level, tmp) }
    }

    /// Applies the Galois automorphism ζ ↦ ζ^k (k coprime to the level).
    pub fn galois(&self, k: u32) -> Cyclo {
        let n = self.level;
        let mut tmp = vec![Rat::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = ((i as u64 * k as u64) % n as u64) as usize;
            tmp[e] = tmp[e].add(c);
        }
        Cyclo { level: n, coeffs: reduce(n, tmp) }
    }

    pub fn conj(&self) -> Cyclo {
        self.galois(self.level - 1)
    }

    pub fn inv(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rat() {
            return Some(Cyclo { level: self.level, coeffs: self.rat_coeffs(r.inv()?) });
        }
        // x^{-1} = (product of the other conjugates) / norm
        let n = self.level;
        let mut others = Cyclo::from_rat(Rat::one()).lift(n);
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = others.mul(&self.galois(k));
            }
        }
        let norm = self.mul(&others);
        let nr = norm.as_rat().expect("norm is rational").inv()?;
        Some(others.mul(&Cyclo::from_rat(nr)))
    }

    fn rat_coeffs(&self, r: Rat) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.coeffs.len()];
        v[0] = r;
        v
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.level as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n) * c.to_f64())
            .sum()
    }

    pub fn exact_eq(&self, o: &Cyclo) -> bool {
        let (a, b) = Cyclo::common(self, o);
        a.coeffs == b.coeffs
    }
}

/// Reduces a polynomial in ζ modulo Φ_level.
fn reduce(level: u32, mut p: Vec<Rat>) -> Vec<Rat> {
    let phi = cyclotomic_poly(level);
    let d = phi.len() - 1;
    if p.len() < d {
        p.resize(d, Rat::zero());
        return p;
    }
    for i in (d..p.len()).rev() {
        if p[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut p[i], Rat::zero());
        for (j, &pj) in phi[..d].iter().enumerate() {
            if pj != 0 {
                p[i - d + j] = p[i - d + j].sub(&c.mul(&Rat::int(pj)));
            }
        }
    }
    p.truncate(d);
    p
}

/// A scalar used throughout the crate.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(Rat),
    Cyc(Cyclo),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(Rat::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(Rat::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rat(Rat::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::Rat(Rat::frac(n, d))
    }

    pub fn float(z: Complex64) -> Scalar {
        Scalar::Float(z)
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Scalar {
        Scalar::from_cyclo(Cyclo::root_of_unity(n, k))
    }

    pub fn from_cyclo(c: Cyclo) -> Scalar {
        match c.as_rat() {
            Some(r) => Scalar::Rat(r.clone()),
            None => Scalar::Cyc(c),
        }
    }

    fn cyclo(&self) -> Option<Cyclo> {
        match self {
            Scalar::Rat(r) => Some(Cyclo::from_rat(r.clone())),
            Scalar::Cyc(c) => Some(c.clone()),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    /// Exact zero test. Floats count as zero only when they are exactly 0.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Cyc(c) => c.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Cyc(_) => false,
            Scalar::Float(z) => z.re == 1.0 && z.im == 0.0,
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rat(r) => Complex64::new(r.to_f64(), 0.0),
            Scalar::Cyc(c) => c.to_complex(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_complex())
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.add(b)),
            (Scalar::Float(a), b) => Scalar::Float(a + b.to_complex()),
            (a, Scalar::Float(b)) => Scalar::Float(a.to_complex() + b),
            _ => Scalar::from_cyclo(self.cyclo().unwrap().add(&o.cyclo().unwrap())),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.mul(b)),
            (Scalar::Float(a), b) => Scalar::Float(a * b.to_complex()),
            (a, Scalar::Float(b)) => Scalar::Float(a.to_complex() * b),
            (Scalar::Rat(r), Scalar::Cyc(c)) | (Scalar::Cyc(c), Scalar::Rat(r)) => {
                if r.is_zero() {
                    return Scalar::zero();
                }
                Scalar::Cyc(Cyclo { level: c.level, coeffs: c.coeffs.iter().map(|x| x.mul(r)).collect() })
            }
            (Scalar::Cyc(a), Scalar::Cyc(b)) => Scalar::from_cyclo(a.mul(b)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.neg()),
            Scalar::Cyc(c) => Scalar::Cyc(c.neg()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }

    /// Multiplicative inverse; `None` for an exact zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => r.inv().map(Scalar::Rat),
            Scalar::Cyc(c) => c.inv().map(Scalar::from_cyclo),
            Scalar::Float(z) => {
                if z.norm() == 0.0 {
                    None
                } else {
                    Some(Scalar::Float(z.inv()))
                }
            }
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Cyc(c) => Scalar::from_cyclo(c.conj()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Power with a possibly negative exponent.
    pub fn powi(&self, e: i64) -> Option<Scalar> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            self.inv().map(|x| x.pow((-e) as u32))
        }
    }

    /// Exact equality when both sides are exact, tolerance equality otherwise.
    pub fn approx_eq(&self, o: &Scalar, tol: f64) -> bool {
        match (self.is_exact(), o.is_exact()) {
            (true, true) => self.exact_eq(o),
            _ => {
                let (a, b) = (self.to_complex(), o.to_complex());
                (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm())
            }
        }
    }

    /// True only for two exact scalars that are equal.
    pub fn exact_eq(&self, o: &Scalar) -> bool {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => false,
            _ => self.cyclo().unwrap().exact_eq(&o.cyclo().unwrap()),
        }
    }

    /// Near-zero test for floats, exact test otherwise.
    pub fn is_negligible(&self, tol: f64) -> bool {
        match self {
            Scalar::Float(z) => z.norm() <= tol,
            _ => self.is_zero(),
        }
    }

    /// Human readable form: exact coordinates followed by a decimal value.
    pub fn render(&self) -> String {
        let z = self.to_complex();
        let dec = fmt_complex(z);
        match self {
            Scalar::Float(_) => dec,
            Scalar::Rat(r) => {
                if r.is_integer() {
                    r.to_string()
                } else {
                    format!("{} ≈ {}", r, dec)
                }
            }
            Scalar::Cyc(_) => format!("{} ≈ {}", self, dec),
        }
    }

    /// JSON encoding: integers and fractions as strings, cyclotomic values as
    /// `{"level": n, "coeffs": [...]}`, floats as `{"re": x, "im": y}`.
    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Rat(r) => Value::String(r.to_string()),
            Scalar::Cyc(c) => serde_json::json!({
                "level": c.level,
                "coeffs": c.coeffs.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            }),
            Scalar::Float(z) => serde_json::json!({"re": z.re, "im": z.im}),
        }
    }

    pub fn from_json(v: &Value) -> Option<Scalar> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(Scalar::int(i))
                } else {
                    n.as_f64().map(|x| Scalar::Float(Complex64::new(x, 0.0)))
                }
            }
            Value::String(s) => Rat::parse(s).map(Scalar::Rat),
            Value::Array(a) if a.len() == 2 => {
                Some(Scalar::Float(Complex64::new(a[0].as_f64()?, a[1].as_f64()?)))
            }
            Value::Object(o) => {
                if let (Some(l), Some(Value::Array(cs))) = (o.get("level"), o.get("coeffs")) {
                    let level = l.as_u64()? as u32;
                    if level == 0 {
                        return None;
                    }
                    let rs: Option<Vec<Rat>> = cs
                        .iter()
                        .map(|c| match c {
                            Value::String(s) => Rat::parse(s),
                            Value::Number(n) => n.as_i64().map(Rat::int),
                            _ => None,
                        })
                        .collect();
                    Some(Scalar::from_cyclo(Cyclo::from_powers(level, &rs?)))
                } else {
                    let re = o.get("re").and_then(Value::as_f64).unwrap_or(0.0);
                    let im = o.get("im").and_then(Value::as_f64).unwrap_or(0.0);
                    Some(Scalar::Float(Complex64::new(re, im)))
                }
            }
            _ => None,
        }
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{:.10}", re)
    } else if im < 0.0 {
        format!("{:.10}-{:.10}i", re, -im)
    } else {
        format!("{:.10}+{:.10}i", re, im)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", r),
            Scalar::Float(z) => write!(f, "{}", fmt_complex(*z)),
            Scalar::Cyc(c) => {
                let mut parts = Vec::new();
                for (k, r) in c.coeffs.iter().enumerate() {
                    if r.is_zero() {
                        continue;
                    }
                    let term = match k {
                        0 => r.to_string(),
                        1 => format!("{}·ζ{}", r, c.level),
                        _ => format!("{}·ζ{}^{}", r, c.level, k),
                    };
                    parts.push(term);
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        self.approx_eq(o, DEFAULT_TOL)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::add(self, o)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::sub(self, o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, euler_phi(105) as usize);
    }

    #[test]
    fn roots_of_unity_close_up() {
        for n in 1..=13u32 {
            let z = Scalar::root_of_unity(n, 1);
            assert!(z.pow(n).exact_eq(&Scalar::one()), "n={n}");
            let mut sum = Scalar::zero();
            for k in 0..n {
                sum = sum.add(&Scalar::root_of_unity(n, k as i64));
            }
            let expect = if n == 1 { Scalar::one() } else { Scalar::zero() };
            assert!(sum.exact_eq(&expect), "n={n}");
        }
    }

    #[test]
    fn mixed_levels() {
        // ζ4 · ζ6 = ζ12^5
        let p = Scalar::root_of_unity(4, 1).mul(&Scalar::root_of_unity(6, 1));
        assert!(p.exact_eq(&Scalar::root_of_unity(12, 5)));
        let i = Scalar::root_of_unity(4, 1);
        assert!(i.mul(&i).exact_eq(&Scalar::int(-1)));
        assert!(matches!(i.mul(&i), Scalar::Rat(_)));
    }

    #[test]
    fn inverse_and_conjugate() {
        let x = Scalar::int(2).add(&Scalar::root_of_unity(5, 2)).add(&Scalar::frac(1, 3));
        let y = x.inv().unwrap();
        assert!(x.mul(&y).exact_eq(&Scalar::one()));
        let n = x.mul(&x.conj());
        assert!(n.to_complex().im.abs() < 1e-12);
        assert!((x.to_complex() * y.to_complex() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn gauss_sum_three() {
        // 1 + 2ζ3 = i√3
        let g = Scalar::one().add(&Scalar::int(2).mul(&Scalar::root_of_unity(3, 1)));
        assert!(g.mul(&g).exact_eq(&Scalar::int(-3)));
    }

    #[test]
    fn float_tolerance() {
        let a = Scalar::float(Complex64::new(1.0, 0.0));
        let b = Scalar::float(Complex64::new(1.0 + 1e-12, 0.0));
        assert!(a.approx_eq(&b, DEFAULT_TOL));
        assert!(!a.exact_eq(&b));
    }

    #[test]
    fn json_roundtrip() {
        for s in [Scalar::frac(-3, 7), Scalar::root_of_unity(8, 3), Scalar::float(Complex64::new(0.5, -2.0))] {
            let back = Scalar::from_json(&s.to_json()).unwrap();
            assert!(back.approx_eq(&s, 0.0) || back.exact_eq(&s));
        }
    }
}
