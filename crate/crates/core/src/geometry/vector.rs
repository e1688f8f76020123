//! Dense vector helpers on coordinate slices.

use crate::Real;

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
pub fn norm_sq<T: Real>(a: &[T]) -> T {
    dot(a, a)
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    norm_sq(a).sqrt()
}

#[inline]
pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

#[inline]
pub fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

#[inline]
pub fn scale<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

/// `acc += s * v`
#[inline]
pub fn axpy<T: Real>(acc: &mut [T], s: T, v: &[T]) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = *a + s * x;
    }
}

#[inline]
pub fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

#[inline]
pub fn max_abs<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

/// Removes from `v` its components along each (orthonormal) vector of
/// `basis`. Two passes keep the result orthogonal to working precision.
pub fn reject<T: Real>(v: &mut [T], basis: &[Vec<T>]) {
    for _ in 0..2 {
        for u in basis {
            let c = dot(v, u);
            axpy(v, -c, u);
        }
    }
}

/// Completes an orthonormal family to an orthonormal basis of the whole
/// space by rejecting the standard basis vectors, largest residual first.
pub fn orthogonal_complement<T: Real>(basis: &[Vec<T>], dim: usize) -> Vec<Vec<T>> {
    let mut all: Vec<Vec<T>> = basis.to_vec();
    let mut out = Vec::new();
    while all.len() < dim {
        let mut best: Option<(T, Vec<T>)> = None;
        for axis in 0..dim {
            let mut e = vec![T::zero(); dim];
            e[axis] = T::one();
            reject(&mut e, &all);
            let n = norm(&e);
            if best.as_ref().map_or(true, |(b, _)| n > *b) {
                best = Some((n, e));
            }
        }
        let (n, mut e) = best.expect("dim > 0");
        for x in e.iter_mut() {
            *x = *x / n;
        }
        all.push(e.clone());
        out.push(e);
    }
    out
}
