//! Sparse tensor networks over [`Scalar`] with pairwise hash-join contraction.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use std::collections::HashMap;

/// Default cap on the number of stored entries of any intermediate tensor.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Sparse tensor. Keys encode the leg values in mixed radix, first leg most
/// significant.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub legs: Vec<usize>,
    pub data: HashMap<u128, Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// Smallest dense result first, ties broken by tensor id.
    Greedy,
    /// Random pairs of connected tensors, for order-independence tests.
    Random(u64),
}

#[derive(Clone, Debug, Default)]
pub struct Network {
    dims: Vec<usize>,
    tensors: Vec<Tensor>,
    factor: Option<Scalar>,
}

fn strides(legs: &[usize], dims: &[usize]) -> Vec<u128> {
    let mut s = vec![1u128; legs.len()];
    for i in (0..legs.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[legs[i + 1]] as u128;
    }
    s
}

fn dense_size(legs: &[usize], dims: &[usize]) -> Option<u128> {
    legs.iter().try_fold(1u128, |acc, &l| acc.checked_mul(dims[l] as u128))
}

impl Network {
    pub fn new() -> Network {
        Network::default()
    }

    /// Allocates a new index of dimension `dim`.
    pub fn index(&mut self, dim: usize) -> usize {
        self.dims.push(dim);
        self.dims.len() - 1
    }

    /// Adds a tensor from `(leg values, value)` entries. Zero entries are dropped.
    pub fn add<I>(&mut self, legs: Vec<usize>, entries: I)
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let st = strides(&legs, &self.dims);
        let mut data = HashMap::new();
        for (vals, v) in entries {
            if v.is_zero() {
                continue;
            }
            let key: u128 = vals.iter().zip(&st).map(|(&x, &s)| x as u128 * s).sum();
            let e = data.entry(key).or_insert_with(Scalar::zero);
            *e = e.add(&v);
        }
        self.tensors.push(Tensor { legs, data });
    }

    /// Multiplies the final value by a scalar.
    pub fn scale(&mut self, s: &Scalar) {
        self.factor = Some(match &self.factor {
            Some(f) => f.mul(s),
            None => s.clone(),
        });
    }

    pub fn tensor_count(&self) -> usize {
        self.tensors.len()
    }

    /// Plans the pairwise contraction order and returns it with the largest dense
    /// intermediate size.
    fn plan(&self, order: Order) -> (Vec<(usize, usize)>, u128) {
        let mut legs: Vec<Option<Vec<usize>>> = self.tensors.iter().map(|t| Some(t.legs.clone())).collect();
        let mut rng = match order {
            Order::Random(seed) => Some(rand_chacha::ChaCha8Rng::seed_from_u64(seed)),
            Order::Greedy => None,
        };
        let merged = |a: &[usize], b: &[usize]| -> Vec<usize> {
            let mut out: Vec<usize> = a.iter().filter(|l| !b.contains(l)).copied().collect();
            out.extend(b.iter().filter(|l| !a.contains(l)));
            out
        };
        let mut steps = Vec::new();
        let mut peak = 0u128;
        loop {
            let alive: Vec<usize> = (0..legs.len()).filter(|&i| legs[i].is_some()).collect();
            if alive.len() <= 1 {
                break;
            }
            let mut cands = Vec::new();
            for (ai, &a) in alive.iter().enumerate() {
                for &b in &alive[ai + 1..] {
                    let (la, lb) = (legs[a].as_ref().unwrap(), legs[b].as_ref().unwrap());
                    if la.iter().any(|l| lb.contains(l)) {
                        let size = dense_size(&merged(la, lb), &self.dims).unwrap_or(u128::MAX);
                        cands.push((size, a, b));
                    }
                }
            }
            if cands.is_empty() {
                // disconnected pieces: combine the two smallest
                for (ai, &a) in alive.iter().enumerate() {
                    for &b in &alive[ai + 1..] {
                        let m = merged(legs[a].as_ref().unwrap(), legs[b].as_ref().unwrap());
                        cands.push((dense_size(&m, &self.dims).unwrap_or(u128::MAX), a, b));
                    }
                }
            }
            let (size, a, b) = match rng.as_mut() {
                Some(r) => *cands.choose(r).unwrap(),
                None => *cands.iter().min().unwrap(),
            };
            peak = peak.max(size);
            let m = merged(legs[a].as_ref().unwrap(), legs[b].as_ref().unwrap());
            legs[a] = None;
            legs[b] = None;
            legs.push(Some(m));
            steps.push((a, b));
        }
        (steps, peak)
    }

    /// Contracts the whole network to a scalar.
    pub fn contract(self, order: Order, cap: u128) -> Result<Scalar> {
        let (steps, peak) = self.plan(order);
        let dims = self.dims;
        let mut slots: Vec<Option<Tensor>> = self.tensors.into_iter().map(Some).collect();
        for (a, b) in steps {
            let ta = slots[a].take().unwrap();
            let tb = slots[b].take().unwrap();
            let t = contract_pair(&ta, &tb, &dims, cap).map_err(|_| Error::ResourceExceeded { peak, cap })?;
            slots.push(Some(t));
        }
        let mut value = match slots.into_iter().flatten().next() {
            Some(t) => {
                debug_assert!(t.legs.is_empty());
                t.data.get(&0).cloned().unwrap_or_else(Scalar::zero)
            }
            None => Scalar::one(),
        };
        if let Some(f) = self.factor {
            value = value.mul(&f);
        }
        Ok(value)
    }
}

/// Contracts two tensors over their shared legs.
fn contract_pair(a: &Tensor, b: &Tensor, dims: &[usize], cap: u128) -> std::result::Result<Tensor, ()> {
    let shared: Vec<usize> = a.legs.iter().filter(|l| b.legs.contains(l)).copied().collect();
    let fa: Vec<usize> = a.legs.iter().filter(|l| !shared.contains(l)).copied().collect();
    let fb: Vec<usize> = b.legs.iter().filter(|l| !shared.contains(l)).copied().collect();
    let mut out_legs = fa.clone();
    out_legs.extend(&fb);
    if dense_size(&out_legs, dims).is_none() {
        return Err(());
    }
    let (sa, sb, so) = (strides(&a.legs, dims), strides(&b.legs, dims), strides(&out_legs, dims));
    // (divisor, modulus, placement) per projected leg
    let proj = |legs: &[usize], st: &[u128], sub: &[usize], place: &[u128]| -> Vec<(u128, u128, u128)> {
        sub.iter()
            .zip(place)
            .map(|(l, &pl)| {
                let p = legs.iter().position(|x| x == l).unwrap();
                (st[p], dims[*l] as u128, pl)
            })
            .collect()
    };
    let apply = |key: u128, pr: &[(u128, u128, u128)]| -> u128 { pr.iter().map(|&(d, m, pl)| (key / d) % m * pl).sum() };
    let sh_st = strides(&shared, dims);
    let fb_place: Vec<u128> = (0..fb.len()).map(|i| so[fa.len() + i]).collect();
    let fa_place: Vec<u128> = so[..fa.len()].to_vec();
    let (a_sh, a_free) = (proj(&a.legs, &sa, &shared, &sh_st), proj(&a.legs, &sa, &fa, &fa_place));
    let (b_sh, b_free) = (proj(&b.legs, &sb, &shared, &sh_st), proj(&b.legs, &sb, &fb, &fb_place));

    let mut index: HashMap<u128, Vec<(u128, &Scalar)>> = HashMap::new();
    for (k, v) in &b.data {
        index.entry(apply(*k, &b_sh)).or_default().push((apply(*k, &b_free), v));
    }
    let a_entries: Vec<(&u128, &Scalar)> = a.data.iter().collect();
    let work = |chunk: &[(&u128, &Scalar)]| -> std::result::Result<HashMap<u128, Scalar>, ()> {
        let mut out: HashMap<u128, Scalar> = HashMap::new();
        for (k, v) in chunk {
            let Some(matches) = index.get(&apply(**k, &a_sh)) else { continue };
            let kf = apply(**k, &a_free);
            for (kb, w) in matches {
                let e = out.entry(kf + kb).or_insert_with(Scalar::zero);
                *e = e.add(&v.mul(w));
            }
            if out.len() as u128 > cap {
                return Err(());
            }
        }
        Ok(out)
    };
    let mut data = if a_entries.len() > 4096 {
        let parts: Vec<_> = a_entries.par_chunks(1024).map(work).collect::<std::result::Result<Vec<_>, ()>>()?;
        let mut total: HashMap<u128, Scalar> = HashMap::new();
        for part in parts {
            for (k, v) in part {
                let e = total.entry(k).or_insert_with(Scalar::zero);
                *e = e.add(&v);
            }
            if total.len() as u128 > cap {
                return Err(());
            }
        }
        total
    } else {
        work(&a_entries)?
    };
    data.retain(|_, v| !(v.is_exact() && v.is_zero()));
    Ok(Tensor { legs: out_legs, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix_chain(order: Order) -> Scalar {
        // tr(M M M) for M = [[1,2],[3,4]]
        let m = [[1, 2], [3, 4]];
        let mut net = Network::new();
        let ix: Vec<usize> = (0..3).map(|_| net.index(2)).collect();
        for k in 0..3 {
            let (i, j) = (ix[k], ix[(k + 1) % 3]);
            net.add(vec![i, j], (0..2).flat_map(|a| (0..2).map(move |b| (vec![a, b], Scalar::int(m[a][b])))));
        }
        net.contract(order, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn trace_of_cube() {
        // M³ = [[37,54],[81,118]]
        assert_eq!(matrix_chain(Order::Greedy), Scalar::int(155));
        for seed in 0..5 {
            assert_eq!(matrix_chain(Order::Random(seed)), Scalar::int(155));
        }
    }

    #[test]
    fn disconnected_and_scalar_parts() {
        let mut net = Network::new();
        let i = net.index(3);
        let j = net.index(2);
        net.add(vec![i], (0..3).map(|a| (vec![a], Scalar::int(1))));
        net.add(vec![i], (0..3).map(|a| (vec![a], Scalar::int(a as i64))));
        net.add(vec![j], vec![(vec![1], Scalar::int(5))]);
        net.add(vec![j], vec![(vec![1], Scalar::int(2))]);
        net.scale(&Scalar::frac(1, 2));
        assert_eq!(net.contract(Order::Greedy, DEFAULT_CAP).unwrap(), Scalar::int(15));
    }

    #[test]
    fn cap_is_enforced() {
        let mut net = Network::new();
        let (i, j) = (net.index(10), net.index(10));
        net.add(vec![i], (0..10).map(|a| (vec![a], Scalar::one())));
        net.add(vec![j], (0..10).map(|a| (vec![a], Scalar::one())));
        net.add(vec![i, j], (0..10).flat_map(|a| (0..10).map(move |b| (vec![a, b], Scalar::one()))));
        let err = net.contract(Order::Greedy, 5).unwrap_err();
        assert_eq!(err, Error::ResourceExceeded { peak: 10, cap: 5 });
    }
}
