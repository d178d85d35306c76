//! GF(q^r) viewed as an r-dimensional vector space over GF(q).

use super::{Elem, FieldCtx};
use crate::error::{Error, Result};

/// An extension GF(q^r) of a base field together with an embedding of the
/// base field and the coordinate map with respect to the power basis
/// `1, z, ..., z^(r-1)` of a primitive element `z`.
#[derive(Clone, Debug)]
pub struct Extension {
    big: FieldCtx,
    degree: usize,
    base_q: u32,
    embed: Vec<Elem>,
    basis: Vec<Elem>,
    /// coords[x * degree + i] is the i-th coordinate of big element x.
    coords: Vec<Elem>,
}

impl Extension {
    pub fn new(base: &FieldCtx, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::BadParameters(
                "extension degree must be positive".into(),
            ));
        }
        let big = FieldCtx::new(base.p(), base.l() * degree as u32, None)?;

        // A root of the base modulus gives the field embedding.
        let modulus: Vec<Elem> = base.modulus().iter().map(|&c| big.from_prime(c)).collect();
        let root = big
            .elements()
            .find(|&x| big.poly_eval(&modulus, x) == Elem::ZERO)
            .expect("the base modulus splits in the extension");
        let embed: Vec<Elem> = base
            .elements()
            .map(|a| {
                let digits: Vec<Elem> = base
                    .digits(a)
                    .into_iter()
                    .map(|d| big.from_prime(d))
                    .collect();
                big.poly_eval(&digits, root)
            })
            .collect();

        let z = big.generator();
        let basis: Vec<Elem> = (0..degree).map(|i| big.pow(z, i as u64)).collect();

        let mut coords = vec![Elem::ERASED; big.size() * degree];
        let q = base.q() as usize;
        let mut lambda = vec![Elem::ZERO; degree];
        for idx in 0..big.size() {
            let mut rest = idx;
            for slot in lambda.iter_mut() {
                *slot = Elem((rest % q) as u32);
                rest /= q;
            }
            let x = lambda.iter().zip(&basis).fold(Elem::ZERO, |acc, (&c, &b)| {
                big.add(acc, big.mul(embed[c.index()], b))
            });
            let row = &mut coords[x.index() * degree..(x.index() + 1) * degree];
            debug_assert!(row[0].is_erased(), "power basis must be independent");
            row.copy_from_slice(&lambda);
        }

        Ok(Extension {
            big,
            degree,
            base_q: base.q(),
            embed,
            basis,
            coords,
        })
    }

    pub fn big(&self) -> &FieldCtx {
        &self.big
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_q(&self) -> u32 {
        self.base_q
    }

    pub fn embed(&self, a: Elem) -> Elem {
        self.embed[a.index()]
    }

    /// `z^i` for the i-th basis vector.
    pub fn basis(&self, i: usize) -> Elem {
        self.basis[i]
    }

    pub fn to_coords(&self, x: Elem) -> &[Elem] {
        &self.coords[x.index() * self.degree..(x.index() + 1) * self.degree]
    }

    pub fn from_coords(&self, c: &[Elem]) -> Elem {
        c.iter()
            .zip(&self.basis)
            .fold(Elem::ZERO, |acc, (&ci, &b)| {
                self.big.add(acc, self.big.mul(self.embed(ci), b))
            })
    }
}
