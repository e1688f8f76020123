use crate::error::{Error, Result, Witness};
use crate::geometry::{hyperplane_through, side_of_hyperplane, Side};
use crate::Real;

fn check_sizes<T: Real>(a: &[&[T]], delta: &[Vec<T>]) -> Result<usize> {
    let d = delta.first().map_or(0, Vec::len);
    if a.len() < 2 || a.len() + delta.len() != d + 2 {
        return Err(Error::InvalidArgument(format!(
            "{} hull points and {} simplex vertices in R^{d}; need |A| >= 2 and |A| + |B| = d + 2",
            a.len(),
            delta.len()
        )));
    }
    for p in a.iter().map(|p| p.len()).chain(delta.iter().map(Vec::len)) {
        if p != d {
            return Err(Error::DimensionMismatch { expected: d, found: p });
        }
    }
    Ok(d)
}

/// Side of `p` and of `reference` with respect to the hyperplane through
/// `points`; errors when either is on it.
fn sides<T: Real>(points: &[&[T]], p: &[T], reference: &[T], tol: T) -> Result<(Side, Side)> {
    let synthetic = || Witness { synthetic: true, ..Witness::none() };
    let h = hyperplane_through(points, tol)
        .ok_or_else(|| Error::degenerate("bounding hyperplane is undefined", synthetic()))?;
    let (sp, sr) = (side_of_hyperplane(&h, p, tol)?, side_of_hyperplane(&h, reference, tol)?);
    if sp == Side::On || sr == Side::On {
        return Err(Error::degenerate("point lies on a bounding hyperplane", synthetic()));
    }
    Ok((sp, sr))
}

/// Sides of `a_k` against each `H_i = aff(A \ {a_k} ∪ B \ {b_i})`: `true`
/// when `a_k` is on the side of `b_i`.
fn h_sides<T: Real>(a: &[&[T]], delta: &[Vec<T>], tol: T) -> Result<Vec<bool>> {
    let (ak, rest) = a.split_last().expect("checked");
    (0..delta.len())
        .map(|i| {
            let mut pts: Vec<&[T]> = rest.to_vec();
            pts.extend(delta.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.as_slice()));
            let (sk, sb) = sides(&pts, ak, &delta[i], tol)?;
            Ok(sk == sb)
        })
        .collect()
}

/// Whether `aff(A)` meets `conv(B)`, for `|A| + |B| = d + 2` points in
/// general position.
pub fn intersects_affine<T: Real>(a: &[&[T]], delta: &[Vec<T>], tol: T) -> Result<bool> {
    check_sizes(a, delta)?;
    let s = h_sides(a, delta, tol)?;
    Ok(s.iter().all(|&x| x) || s.iter().all(|&x| !x))
}

/// Whether `conv(A)` meets `conv(B)`, for `|A| + |B| = d + 2` points in
/// general position.
pub fn intersects_convex<T: Real>(a: &[&[T]], delta: &[Vec<T>], tol: T) -> Result<bool> {
    check_sizes(a, delta)?;
    if !h_sides(a, delta, tol)?.iter().all(|&x| x) {
        return Ok(false);
    }
    let k = a.len();
    for j in 0..k - 1 {
        let mut pts: Vec<&[T]> = (0..k - 1).filter(|&i| i != j).map(|i| a[i]).collect();
        pts.extend(delta.iter().map(|v| v.as_slice()));
        let (sk, sj) = sides(&pts, a[k - 1], a[j], tol)?;
        if sk == sj {
            return Ok(false);
        }
    }
    Ok(true)
}
