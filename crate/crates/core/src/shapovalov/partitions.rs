//! Partitions of ν into positive roots with unbounded even parts and 0/1 odd parts.

use crate::rootdata::{positive_roots, Root, RootVector};

/// k_α and k_ᾱ for each positive root, in `positive_roots` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionVector {
    pub even: Vec<u32>,
    pub odd: Vec<bool>,
}

impl PartitionVector {
    /// |m| = Σ k_α + k_ᾱ
    pub fn size(&self) -> u32 {
        self.even.iter().sum::<u32>() + self.odd.iter().filter(|&&b| b).count() as u32
    }

    pub fn odd_count(&self) -> usize {
        self.odd.iter().filter(|&&b| b).count()
    }
}

fn root_span(r: Root, rank: usize) -> Vec<i64> {
    r.as_root_vector(rank).0.iter().map(|&x| x as i64).collect()
}

fn walk(
    roots: &[Vec<i64>],
    pos: usize,
    rest: &mut [i64],
    cur: &mut PartitionVector,
    visit: &mut dyn FnMut(&PartitionVector),
) {
    if pos == roots.len() {
        if rest.iter().all(|&x| x == 0) {
            visit(cur);
        }
        return;
    }
    let r = &roots[pos];
    let fits = |rest: &[i64], k: i64| rest.iter().zip(r).all(|(&a, &b)| a - k * b >= 0);
    for odd in [false, true] {
        let o = i64::from(odd);
        let mut k = 0i64;
        while fits(rest, k + o) {
            for (a, b) in rest.iter_mut().zip(r) {
                *a -= (k + o) * b;
            }
            cur.even[pos] = k as u32;
            cur.odd[pos] = odd;
            walk(roots, pos + 1, rest, cur, visit);
            for (a, b) in rest.iter_mut().zip(r) {
                *a += (k + o) * b;
            }
            k += 1;
        }
    }
    cur.even[pos] = 0;
    cur.odd[pos] = false;
}

fn for_each_partition(rank: usize, nu: &[i64], visit: &mut dyn FnMut(&PartitionVector)) {
    if nu.iter().any(|&x| x < 0) {
        return;
    }
    let roots: Vec<Vec<i64>> = positive_roots(rank).into_iter().map(|r| root_span(r, rank)).collect();
    let mut cur = PartitionVector { even: vec![0; roots.len()], odd: vec![false; roots.len()] };
    let mut rest = nu.to_vec();
    walk(&roots, 0, &mut rest, &mut cur, visit);
}

/// All partitions of ν, in a fixed enumeration order.
pub fn partitions(nu: &RootVector) -> Vec<PartitionVector> {
    let rank = nu.0.len() + 1;
    let signed: Vec<i64> = nu.0.iter().map(|&x| x as i64).collect();
    let mut out = Vec::new();
    for_each_partition(rank, &signed, &mut |p| out.push(p.clone()));
    out
}

/// τ(ν) for ν in Q (zero outside Q⁺); `rank` is n.
pub fn tau_signed(rank: usize, nu: &[i64]) -> u64 {
    let mut count = 0;
    for_each_partition(rank, nu, &mut |_| count += 1);
    count
}

pub fn tau(nu: &RootVector) -> u64 {
    tau_signed(nu.0.len() + 1, &nu.0.iter().map(|&x| x as i64).collect::<Vec<_>>())
}

/// τ_α(ν): partitions with k_ᾱ = 0.
pub fn tau_alpha_signed(rank: usize, nu: &[i64], alpha: Root) -> u64 {
    let idx = positive_roots(rank).iter().position(|&r| r == alpha).expect("positive root");
    let mut count = 0;
    for_each_partition(rank, nu, &mut |p| {
        if !p.odd[idx] {
            count += 1
        }
    });
    count
}

pub fn tau_alpha(nu: &RootVector, alpha: Root) -> u64 {
    let rank = nu.0.len() + 1;
    tau_alpha_signed(rank, &nu.0.iter().map(|&x| x as i64).collect::<Vec<_>>(), alpha)
}

/// ν - m·α as a signed vector.
pub fn shift(nu: &RootVector, alpha: Root, m: u32) -> Vec<i64> {
    let a = alpha.as_root_vector(nu.0.len() + 1);
    nu.0.iter().zip(&a.0).map(|(&x, &y)| x as i64 - (m * y) as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(partitions(&RootVector(vec![0])).len(), 1);
        assert_eq!(tau(&RootVector(vec![1])), 2);
        assert_eq!(tau(&RootVector(vec![4])), 2);
        assert_eq!(tau(&RootVector(vec![1, 1])), 6);
        assert_eq!(tau(&RootVector(vec![2, 1])), 8);
        assert_eq!(tau_signed(3, &[1, -1]), 0);
    }
}
