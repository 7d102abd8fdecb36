//! Independent oracles for the integration tests. Nothing here calls the
//! crate's elimination, overlap or constraint code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use nonlocal_sets::StateSet;

/// Rank of a rational matrix by plain Gauss-Jordan with rational division.
pub fn naive_rank(mut rows: Vec<Vec<BigRational>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = BigRational::one() / rows[rank][c].clone();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = &*x - &f * y;
            }
        }
        rank += 1;
    }
    rank
}

pub fn naive_nullity(rows: Vec<Vec<BigRational>>, cols: usize) -> usize {
    cols - naive_rank(rows, cols)
}

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Dimension of the space of Hermitian `H` on `party` keeping the set
/// orthogonal, from the raw `2 d^2` real unknowns `Re H_ij`, `Im H_ij`:
/// Hermiticity is imposed by equations and every ordered pair contributes
/// its real and imaginary constraint.
pub fn hermitian_solution_dim(set: &StateSet, party: usize) -> usize {
    let d = set.shape().dims()[party];
    let cols = 2 * d * d;
    let re = |i: usize, j: usize| i * d + j;
    let im = |i: usize, j: usize| d * d + i * d + j;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut r = vec![rat(0); cols];
            r[re(i, j)] += rat(1);
            r[re(j, i)] -= rat(1);
            rows.push(r);
            let mut r = vec![rat(0); cols];
            r[im(i, j)] += rat(1);
            r[im(j, i)] += rat(1);
            rows.push(r);
        }
    }
    let states = set.states();
    for (a, s) in states.iter().enumerate() {
        for (b, t) in states.iter().enumerate() {
            if a == b {
                continue;
            }
            let mut bystander = BigInt::one();
            for q in 0..s.locals.len() {
                if q != party {
                    bystander *= dot(s.locals[q].coeffs(), t.locals[q].coeffs());
                }
            }
            if bystander.is_zero() {
                continue;
            }
            let (u, v) = (s.locals[party].coeffs(), t.locals[party].coeffs());
            let mut real = vec![rat(0); cols];
            let mut imag = vec![rat(0); cols];
            for i in 0..d {
                for j in 0..d {
                    let w = BigRational::from_integer(&u[i] * &v[j]);
                    real[re(i, j)] += w.clone();
                    imag[im(i, j)] += w;
                }
            }
            rows.push(real);
            rows.push(imag);
        }
    }
    naive_nullity(rows, cols)
}

/// Dense tensor-product amplitudes of every state, for sets small enough.
fn dense_vectors(set: &StateSet) -> Vec<Vec<i64>> {
    set.states()
        .iter()
        .map(|s| {
            let mut acc = vec![1i64];
            for ket in &s.locals {
                let c: Vec<i64> = ket.coeffs().iter().map(|x| x.to_i64().unwrap()).collect();
                acc = acc
                    .iter()
                    .flat_map(|a| c.iter().map(move |b| a * b))
                    .collect();
            }
            acc
        })
        .collect()
}

/// Unordered pairs with a nonzero overlap, from fully expanded state vectors.
pub fn dense_overlapping_pairs(set: &StateSet) -> Vec<(usize, usize)> {
    let total: usize = set.shape().dims().iter().product();
    assert!(total <= 200_000, "set too large for the dense oracle");
    let v = dense_vectors(set);
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let o: i64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
            if o != 0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// True when every local ket of `a` is proportional to the matching ket of `b`.
pub fn same_rays(a: &StateSet, b: &StateSet) -> bool {
    fn key(set: &StateSet) -> Vec<Vec<Vec<BigInt>>> {
        let mut k: Vec<Vec<Vec<BigInt>>> = set
            .states()
            .iter()
            .map(|s| {
                s.locals
                    .iter()
                    .map(|ket| {
                        let c = ket.coeffs();
                        let lead = c.iter().find(|x| !x.is_zero()).unwrap();
                        let sign = if lead.is_negative() { -1 } else { 1 };
                        let g = c.iter().fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()));
                        c.iter().map(|x| x * sign / &g).collect()
                    })
                    .collect()
            })
            .collect();
        k.sort();
        k
    }
    a.shape() == b.shape() && key(a) == key(b)
}
