//! Dense univariate polynomials over GF(q), coefficients low-to-high.

use super::{Elem, FieldCtx};

/// Drops trailing zero coefficients.
pub fn trim(p: &mut Vec<Elem>) {
    while p.last() == Some(&Elem::ZERO) {
        p.pop();
    }
}

/// Degree of a trimmed or untrimmed polynomial; `None` for zero.
pub fn degree(p: &[Elem]) -> Option<usize> {
    p.iter().rposition(|&c| c != Elem::ZERO)
}

pub fn add(f: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let mut out: Vec<Elem> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.add(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let nb: Vec<Elem> = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul(f: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == Elem::ZERO {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

pub fn scale(f: &FieldCtx, a: &[Elem], c: Elem) -> Vec<Elem> {
    let mut out: Vec<Elem> = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

/// Returns `(quotient, remainder)`. Panics if `b` is zero.
pub fn divrem(f: &FieldCtx, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Elem::ZERO; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = f.mul(rem[dr], lead_inv);
        let shift = dr - db;
        quot[shift] = c;
        for k in 0..=db {
            rem[shift + k] = f.sub(rem[shift + k], f.mul(c, b[k]));
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Lagrange interpolation through `(xs[i], ys[i])`; the `xs` must be distinct.
pub fn interpolate(f: &FieldCtx, xs: &[Elem], ys: &[Elem]) -> Vec<Elem> {
    assert_eq!(xs.len(), ys.len());
    let mut out = Vec::new();
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi == Elem::ZERO {
            continue;
        }
        let mut basis = vec![Elem::ONE];
        let mut denom = Elem::ONE;
        for (j, &xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = mul(f, &basis, &[f.neg(xj), Elem::ONE]);
            denom = f.mul(denom, f.sub(xi, xj));
        }
        let c = f
            .div(yi, denom)
            .expect("interpolation nodes must be distinct");
        out = add(f, &out, &scale(f, &basis, c));
    }
    out
}
