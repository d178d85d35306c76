//! Affine-invariant base codes on F_q^t: extended Reed-Solomon and
//! single-parity-check, with bounded-minimum-distance decoding.
//!
//! Words are slices in subspace coordinate order, so position 0 is the
//! origin of the restriction.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::domain::{self, Word};
use crate::error::{Error, Result};
use crate::gf::{poly, Elem, FieldCtx};
use crate::lift::DegreeTuple;

/// Result of local decoding on one subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalOutcome {
    Decoded {
        /// Value of the decoded codeword at the origin.
        alpha: Elem,
        /// Distance to the received word over its non-erased positions.
        distance: usize,
        codeword: Vec<Elem>,
    },
    /// No codeword within the decoding radius.
    Star,
}

/// Contract the lifting machinery and the decoders rely on.
pub trait BaseCode: Send + Sync + Debug {
    /// Dimension t of the domain F_q^t.
    fn domain_dim(&self) -> usize;

    fn field_size(&self) -> u32;

    fn len(&self) -> usize {
        (self.field_size() as usize).pow(self.domain_dim() as u32)
    }

    fn is_empty(&self) -> bool {
        false
    }

    fn dimension(&self) -> usize;

    fn min_distance(&self) -> usize;

    /// e = floor((d - 1) / 2).
    fn radius(&self) -> usize {
        (self.min_distance() - 1) / 2
    }

    fn degree_set(&self) -> Vec<DegreeTuple>;

    fn encode(&self, f: &FieldCtx, message: &[Elem]) -> Result<Vec<Elem>>;

    fn contains(&self, f: &FieldCtx, word: &[Elem]) -> bool;

    /// Corrects up to `radius()` errors and, when the minimum distance is
    /// even, one erasure.
    fn decode_bmd(&self, f: &FieldCtx, word: &[Elem]) -> Result<LocalOutcome>;

    fn is_single_parity_check(&self) -> bool {
        false
    }

    /// The serializable description, for codes that have one.
    fn kind(&self) -> Option<BaseKind> {
        None
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BaseKind {
    /// Evaluations of polynomials of degree at most `u` on all of F_q.
    Rs { u: u32 },
    /// Words summing to zero.
    Spc,
}

/// One of the shipped univariate base codes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BaseCodeSpec {
    q: u32,
    kind: BaseKind,
}

impl BaseCodeSpec {
    pub fn new(q: u32, kind: BaseKind) -> Result<Self> {
        if q < 2 {
            return Err(Error::BadParameters(format!("field size {q}")));
        }
        if let BaseKind::Rs { u } = kind {
            if u + 2 > q {
                return Err(Error::BadParameters(format!(
                    "RS degree bound u={u} must be at most q-2={}",
                    q - 2
                )));
            }
        }
        Ok(BaseCodeSpec { q, kind })
    }

    pub fn rs(q: u32, u: u32) -> Result<Self> {
        Self::new(q, BaseKind::Rs { u })
    }

    pub fn spc(q: u32) -> Result<Self> {
        Self::new(q, BaseKind::Spc)
    }

    pub fn base_kind(&self) -> BaseKind {
        self.kind
    }

    /// Maximal degree of the polynomial representation.
    pub fn max_degree(&self) -> u32 {
        match self.kind {
            BaseKind::Rs { u } => u,
            BaseKind::Spc => self.q - 2,
        }
    }

    pub fn encode_word(&self, f: &FieldCtx, message: &[Elem]) -> Result<Word> {
        Word::new(self.q, 1, self.encode(f, message)?)
    }

    fn check_word(&self, f: &FieldCtx, word: &[Elem]) -> Result<usize> {
        if f.q() != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q as usize,
                found: f.size(),
            });
        }
        if word.len() != self.q as usize {
            return Err(Error::BadLength {
                expected: self.q as usize,
                found: word.len(),
            });
        }
        let erased = word.iter().filter(|v| v.is_erased()).count();
        let allowed = usize::from(self.min_distance().is_multiple_of(2));
        if erased > allowed {
            return Err(Error::TooManyErasures {
                found: erased,
                allowed,
            });
        }
        Ok(erased)
    }

    /// Gao's algorithm on the non-erased positions.
    fn decode_rs(&self, f: &FieldCtx, word: &[Elem]) -> LocalOutcome {
        let k = self.max_degree() as usize + 1;
        let (xs, ys): (Vec<Elem>, Vec<Elem>) = f
            .elements()
            .zip(word.iter().copied())
            .filter(|(_, y)| !y.is_erased())
            .unzip();
        let n = xs.len();

        let g0 = xs.iter().fold(vec![Elem::ONE], |acc, &x| {
            poly::mul(f, &acc, &[f.neg(x), Elem::ONE])
        });
        let g1 = poly::interpolate(f, &xs, &ys);

        let small_enough = |r: &[Elem]| poly::degree(r).is_none_or(|d| 2 * d < n + k);
        let (mut r_prev, mut r) = (g0, g1);
        let (mut v_prev, mut v) = (Vec::new(), vec![Elem::ONE]);
        while !small_enough(&r) {
            let (quot, rem) = poly::divrem(f, &r_prev, &r);
            let v_next = poly::sub(f, &v_prev, &poly::mul(f, &quot, &v));
            r_prev = std::mem::replace(&mut r, rem);
            v_prev = std::mem::replace(&mut v, v_next);
        }
        let (msg, rem) = poly::divrem(f, &r, &v);
        if !rem.is_empty() || msg.len() > k {
            return LocalOutcome::Star;
        }
        let codeword: Vec<Elem> = f.elements().map(|x| f.poly_eval(&msg, x)).collect();
        self.finish(word, codeword)
    }

    fn decode_spc(&self, f: &FieldCtx, word: &[Elem]) -> LocalOutcome {
        let sum = word
            .iter()
            .filter(|v| !v.is_erased())
            .fold(Elem::ZERO, |acc, &v| f.add(acc, v));
        match word.iter().position(|v| v.is_erased()) {
            Some(pos) => {
                let mut codeword = word.to_vec();
                codeword[pos] = f.neg(sum);
                self.finish(word, codeword)
            }
            None if sum == Elem::ZERO => self.finish(word, word.to_vec()),
            None => LocalOutcome::Star,
        }
    }

    fn finish(&self, word: &[Elem], codeword: Vec<Elem>) -> LocalOutcome {
        let distance = domain::distance(word, &codeword);
        if distance > self.radius() {
            return LocalOutcome::Star;
        }
        LocalOutcome::Decoded {
            alpha: codeword[0],
            distance,
            codeword,
        }
    }
}

impl BaseCode for BaseCodeSpec {
    fn domain_dim(&self) -> usize {
        1
    }

    fn field_size(&self) -> u32 {
        self.q
    }

    fn dimension(&self) -> usize {
        self.max_degree() as usize + 1
    }

    fn min_distance(&self) -> usize {
        (self.q - self.max_degree()) as usize
    }

    fn degree_set(&self) -> Vec<DegreeTuple> {
        (0..=self.max_degree())
            .map(|d| DegreeTuple(vec![d]))
            .collect()
    }

    fn encode(&self, f: &FieldCtx, message: &[Elem]) -> Result<Vec<Elem>> {
        let k = self.dimension();
        if message.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                found: message.len(),
            });
        }
        match self.kind {
            BaseKind::Rs { .. } => Ok(f.elements().map(|x| f.poly_eval(message, x)).collect()),
            BaseKind::Spc => {
                let sum = message.iter().fold(Elem::ZERO, |acc, &v| f.add(acc, v));
                let mut out = message.to_vec();
                out.push(f.neg(sum));
                Ok(out)
            }
        }
    }

    /// Power-sum syndromes: a word has degree at most u iff
    /// `sum_x w(x) x^i = 0` for `i = 0..=q-2-u`.
    fn contains(&self, f: &FieldCtx, word: &[Elem]) -> bool {
        if word.len() != self.q as usize || word.iter().any(|v| v.is_erased()) {
            return false;
        }
        let checks = self.q - 2 - self.max_degree();
        (0..=checks).all(|i| {
            f.elements().zip(word).fold(Elem::ZERO, |acc, (x, &w)| {
                f.add(acc, f.mul(w, f.pow(x, i as u64)))
            }) == Elem::ZERO
        })
    }

    fn decode_bmd(&self, f: &FieldCtx, word: &[Elem]) -> Result<LocalOutcome> {
        self.check_word(f, word)?;
        Ok(match self.kind {
            BaseKind::Rs { .. } => self.decode_rs(f, word),
            BaseKind::Spc => self.decode_spc(f, word),
        })
    }

    fn is_single_parity_check(&self) -> bool {
        self.kind == BaseKind::Spc
    }

    fn kind(&self) -> Option<BaseKind> {
        Some(self.kind)
    }
}

/// Reference decoder: scans every codeword. Limited to 2^20 codewords.
pub fn brute_force_decode(
    code: &BaseCodeSpec,
    f: &FieldCtx,
    word: &[Elem],
) -> Result<LocalOutcome> {
    code.check_word(f, word)?;
    let k = code.dimension();
    let total = (f.q() as u64)
        .checked_pow(k as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or(Error::SearchTooLarge {
            size: u64::MAX,
            limit: 1 << 20,
        })?;
    let mut best: Option<(usize, Vec<Elem>)> = None;
    let mut msg = vec![Elem::ZERO; k];
    for idx in 0..total {
        let mut rest = idx;
        for slot in msg.iter_mut() {
            *slot = Elem((rest % f.q() as u64) as u32);
            rest /= f.q() as u64;
        }
        let cw = code.encode(f, &msg)?;
        let d = domain::distance(word, &cw);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, cw));
        }
    }
    Ok(match best {
        Some((d, cw)) if d <= code.radius() => LocalOutcome::Decoded {
            alpha: cw[0],
            distance: d,
            codeword: cw,
        },
        _ => LocalOutcome::Star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> Vec<Elem> {
        v.iter().map(|&x| Elem(x)).collect()
    }

    fn gf4() -> FieldCtx {
        FieldCtx::new(2, 2, None).unwrap()
    }

    #[test]
    fn parameters() {
        let rs = BaseCodeSpec::rs(8, 5).unwrap();
        assert_eq!((rs.dimension(), rs.min_distance(), rs.radius()), (6, 3, 1));
        let spc = BaseCodeSpec::spc(4).unwrap();
        assert_eq!(
            (spc.dimension(), spc.min_distance(), spc.radius()),
            (3, 2, 0)
        );
        assert!(BaseCodeSpec::rs(4, 3).is_err());
    }

    #[test]
    fn encode_examples() {
        let f = gf4();
        let rs = BaseCodeSpec::rs(4, 1).unwrap();
        assert_eq!(rs.encode(&f, &w(&[0, 1])).unwrap(), w(&[0, 1, 2, 3]));
        assert_eq!(rs.encode(&f, &w(&[0, 0])).unwrap(), w(&[0, 0, 0, 0]));
        let spc = BaseCodeSpec::spc(4).unwrap();
        assert_eq!(spc.encode(&f, &w(&[1, 1, 1])).unwrap(), w(&[1, 1, 1, 1]));
        assert!(matches!(
            spc.encode(&f, &w(&[1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn contains_examples() {
        let f = gf4();
        let rs = BaseCodeSpec::rs(4, 1).unwrap();
        let spc = BaseCodeSpec::spc(4).unwrap();
        assert!(rs.contains(&f, &w(&[0, 0, 0, 0])));
        assert!(rs.contains(&f, &w(&[0, 1, 2, 3])));
        assert!(!spc.contains(&f, &w(&[1, 0, 0, 0])));
    }

    #[test]
    fn decode_single_error() {
        let f = gf4();
        let rs = BaseCodeSpec::rs(4, 1).unwrap();
        let out = rs.decode_bmd(&f, &w(&[1, 1, 2, 3])).unwrap();
        assert_eq!(
            out,
            LocalOutcome::Decoded {
                alpha: Elem(0),
                distance: 1,
                codeword: w(&[0, 1, 2, 3])
            }
        );
    }

    #[test]
    fn decode_spc_erasure_at_origin() {
        let f = gf4();
        let spc = BaseCodeSpec::spc(4).unwrap();
        let mut word = w(&[0, 1, 1, 1]);
        word[0] = Elem::ERASED;
        let out = spc.decode_bmd(&f, &word).unwrap();
        assert_eq!(
            out,
            LocalOutcome::Decoded {
                alpha: Elem(1),
                distance: 0,
                codeword: w(&[1, 1, 1, 1])
            }
        );
    }

    #[test]
    fn undecodable_word_gives_star() {
        let f = gf4();
        let rs = BaseCodeSpec::rs(4, 1).unwrap();
        // (1, 0, 3, 2) is itself the codeword 1 + x, so it decodes cleanly.
        assert!(matches!(
            rs.decode_bmd(&f, &w(&[1, 0, 3, 2])).unwrap(),
            LocalOutcome::Decoded { distance: 0, .. }
        ));
        let codewords: Vec<Vec<Elem>> = (0..16)
            .map(|i| rs.encode(&f, &w(&[i % 4, i / 4])).unwrap())
            .collect();
        let mut stars = 0;
        for idx in 0..256u32 {
            let word = w(&[idx % 4, (idx / 4) % 4, (idx / 16) % 4, idx / 64]);
            let min_dist = codewords
                .iter()
                .map(|cw| domain::distance(&word, cw))
                .min()
                .unwrap();
            match rs.decode_bmd(&f, &word).unwrap() {
                LocalOutcome::Star => {
                    assert!(min_dist >= 2);
                    stars += 1;
                }
                LocalOutcome::Decoded { distance, .. } => assert_eq!(distance, min_dist),
            }
        }
        // 256 words minus 16 balls of 13
        assert_eq!(stars, 48);
    }

    #[test]
    fn erasure_budget() {
        let f = FieldCtx::new(2, 3, None).unwrap();
        let rs_odd = BaseCodeSpec::rs(8, 5).unwrap();
        let mut word = vec![Elem::ZERO; 8];
        word[3] = Elem::ERASED;
        assert!(matches!(
            rs_odd.decode_bmd(&f, &word),
            Err(Error::TooManyErasures { allowed: 0, .. })
        ));
        let rs_even = BaseCodeSpec::rs(8, 4).unwrap();
        assert!(rs_even.decode_bmd(&f, &word).is_ok());
        word[4] = Elem::ERASED;
        assert!(matches!(
            rs_even.decode_bmd(&f, &word),
            Err(Error::TooManyErasures { allowed: 1, .. })
        ));
        assert!(matches!(
            rs_even.decode_bmd(&f, &word[..4]),
            Err(Error::BadLength { .. })
        ));
    }
}
