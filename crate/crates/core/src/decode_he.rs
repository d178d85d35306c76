//! Randomized majority decoding of lifted single-parity-check codes under
//! heavy q-ary symmetric noise.
//!
//! On a line through `a`, the parity constraint makes `-sum_{b != a} g(b)` a
//! guess for `f(a)`. With channel parameter epsilon, a guess is right with
//! probability `p_hat` and equals any given wrong symbol with probability
//! `p_check < p_hat`, so a plurality vote over `s` lines recovers `f(a)` with
//! failure probability at most `2(q-1) exp(-0.5 (p_hat - p_check)^2 s)`.

use rand::seq::index;
use rayon::prelude::*;

use crate::channel::position_rng;
use crate::domain::Word;
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::lift::LiftedCode;

/// Distribution of `xi_1 + ... + xi_k` for i.i.d. `xi_i` that are 0 with
/// probability `1 - eps` and uniform over the nonzero elements otherwise.
///
/// Returns `(P[sum = 0], P[sum = alpha])` for any fixed nonzero `alpha`.
pub fn sum_zero_prob(q: u32, eps: f64, k: u32) -> (f64, f64) {
    let q = q as f64;
    let r = (1.0 - q * eps / (q - 1.0)).powi(k as i32);
    (1.0 / q + (1.0 - 1.0 / q) * r, 1.0 / q - r / q)
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct VoteProbs {
    pub q: u32,
    pub epsilon: f64,
    /// Probability that one line votes for the transmitted symbol.
    pub p_hat: f64,
    /// Probability that one line votes for a given wrong symbol.
    pub p_check: f64,
    pub p_bar: f64,
    pub gap: f64,
}

/// Vote probabilities on the q-ary symmetric channel with error rate
/// `(q-1)/q - epsilon`.
pub fn vote_probs(q: u32, epsilon: f64) -> Result<VoteProbs> {
    let max = (q - 1) as f64 / q as f64;
    if !(epsilon > 0.0 && epsilon <= max + 1e-12) {
        return Err(Error::BadEpsilon(epsilon));
    }
    let qf = q as f64;
    let gap = (epsilon * qf / (qf - 1.0)).powi(q as i32 - 1);
    let p_hat = 1.0 / qf + (qf - 1.0) / qf * gap;
    let p_check = 1.0 / qf - gap / qf;
    Ok(VoteProbs {
        q,
        epsilon,
        p_hat,
        p_check,
        p_bar: (p_hat + p_check) / 2.0,
        gap,
    })
}

/// Union bound on the failure probability of `n_info` votes with `s` lines.
pub fn failure_bound(q: u32, gap: f64, s: u64, n_info: usize) -> f64 {
    2.0 * (q - 1) as f64 * n_info as f64 * (-0.5 * gap * gap * s as f64).exp()
}

/// Smallest `s >= 1` with `2(q-1) n_info exp(-0.5 gap^2 s) <= delta`.
pub fn required_lines(q: u32, epsilon: f64, delta: f64, n_info: usize) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) || n_info == 0 {
        return Err(Error::BadParameters(format!(
            "need 0 < delta < 1 and n_info >= 1, got {delta}, {n_info}"
        )));
    }
    let gap = vote_probs(q, epsilon)?.gap;
    let c = 2.0 * (q - 1) as f64 * n_info as f64;
    let mut s = ((2.0 * (c / delta).ln() / (gap * gap)).ceil().max(1.0)) as u64;
    // repair rounding at the boundary
    while s > 1 && failure_bound(q, gap, s - 1, n_info) <= delta {
        s -= 1;
    }
    while failure_bound(q, gap, s, n_info) > delta {
        s += 1;
    }
    Ok(s)
}

/// Votes per candidate symbol at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoteTally {
    pub counts: Vec<u64>,
}

impl VoteTally {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Plurality winner (smallest element on ties) and whether it was tied.
    pub fn winner(&self) -> (Elem, bool) {
        let best = *self.counts.iter().max().expect("q >= 2");
        let first = self.counts.iter().position(|&c| c == best).unwrap();
        (
            Elem(first as u32),
            self.counts.iter().filter(|&&c| c == best).count() > 1,
        )
    }
}

fn check_code(code: &LiftedCode, s: u64) -> Result<()> {
    if !code.base().is_single_parity_check() || code.t() != 1 {
        return Err(Error::NotSpc);
    }
    let available = code.spread().len() as u64;
    if s > available {
        return Err(Error::TooManyLines {
            requested: s,
            available,
        });
    }
    if s == 0 {
        return Err(Error::BadParameters("at least one line is needed".into()));
    }
    Ok(())
}

fn check_word(code: &LiftedCode, g: &Word) -> Result<()> {
    if g.q() != code.q() || g.dim() != code.m() {
        return Err(Error::DimensionMismatch {
            expected: code.len(),
            found: g.len(),
        });
    }
    if g.erasures() > 0 {
        return Err(Error::UnexpectedErasure);
    }
    Ok(())
}

fn vote_unchecked(code: &LiftedCode, g: &Word, a: usize, s: u64, seed: u64) -> VoteTally {
    let f = code.field();
    let space = code.space();
    let lines = code.spread_points();
    let mut rng = position_rng(seed, a as u64);
    let mut counts = vec![0u64; code.q() as usize];
    for dir in index::sample(&mut rng, lines.len(), s as usize) {
        let sum = lines[dir][1..]
            .iter()
            .fold(Elem::ZERO, |acc, &y| f.add(acc, g.get(space.add(f, a, y))));
        counts[f.neg(sum).index()] += 1;
    }
    VoteTally { counts }
}

/// Votes of `s` random distinct lines through point `a`. The lines depend
/// only on `(seed, a)`.
pub fn he_vote(code: &LiftedCode, g: &Word, a: usize, s: u64, seed: u64) -> Result<VoteTally> {
    check_code(code, s)?;
    check_word(code, g)?;
    if a >= code.len() {
        return Err(Error::OutOfRange {
            value: a as u64,
            bound: code.len() as u64,
        });
    }
    Ok(vote_unchecked(code, g, a, s, seed))
}

/// Plurality decisions at arbitrary points, with tie flags.
pub fn he_decide(
    code: &LiftedCode,
    g: &Word,
    points: &[usize],
    s: u64,
    seed: u64,
) -> Result<Vec<(Elem, bool)>> {
    check_code(code, s)?;
    check_word(code, g)?;
    if let Some(&a) = points.iter().find(|&&a| a >= code.len()) {
        return Err(Error::OutOfRange {
            value: a as u64,
            bound: code.len() as u64,
        });
    }
    Ok(points
        .par_iter()
        .map(|&a| vote_unchecked(code, g, a, s, seed).winner())
        .collect())
}

/// Votes on the information positions and re-encodes.
pub fn decode_he(code: &LiftedCode, g: &Word, s: u64, seed: u64) -> Result<Word> {
    let decided = he_decide(code, g, code.info_positions(), s, seed)?;
    code.encode_systematic(&decided.into_iter().map(|(v, _)| v).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseKind;
    use crate::lift::CodeSpec;

    fn spc_code(p: u32, l: u32, m: usize) -> LiftedCode {
        CodeSpec {
            p,
            l,
            modulus: None,
            m,
            t: 1,
            base: BaseKind::Spc,
        }
        .build()
        .unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let (p0, pa) = sum_zero_prob(2, 0.25, 2);
        assert!((p0 - 0.625).abs() < 1e-15 && (pa - 0.375).abs() < 1e-15);
        for q in [2u32, 3, 4, 8] {
            let (p0, pa) = sum_zero_prob(q, 0.3, 1);
            assert!((p0 - 0.7).abs() < 1e-12 && (pa - 0.3 / (q - 1) as f64).abs() < 1e-12);
            let uniform = (q - 1) as f64 / q as f64;
            let (u0, ua) = sum_zero_prob(q, uniform, 5);
            assert!((u0 - 1.0 / q as f64).abs() < 1e-12 && (ua - 1.0 / q as f64).abs() < 1e-12);
            let (p0, pa) = sum_zero_prob(q, 0.2, 4);
            assert!((p0 + (q - 1) as f64 * pa - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vote_probability_examples() {
        let v = vote_probs(2, 0.2).unwrap();
        assert!(
            (v.p_hat - 0.7).abs() < 1e-12
                && (v.p_check - 0.3).abs() < 1e-12
                && (v.gap - 0.4).abs() < 1e-12
        );
        let v = vote_probs(4, 0.45).unwrap();
        assert!((v.gap - 0.216).abs() < 1e-12);
        assert!(v.p_hat > v.p_bar && v.p_bar > v.p_check);
        let clean = vote_probs(4, 0.75).unwrap();
        assert!((clean.p_hat - 1.0).abs() < 1e-12 && clean.p_check.abs() < 1e-12);
        // matches the sum of the q - 1 other symbols' noise
        let (p0, pa) = sum_zero_prob(4, 0.75 - 0.45, 3);
        assert!((v.p_hat - p0).abs() < 1e-12 && (v.p_check - pa).abs() < 1e-12);
        assert!(matches!(vote_probs(4, 0.0), Err(Error::BadEpsilon(_))));
        assert!(matches!(vote_probs(4, 0.8), Err(Error::BadEpsilon(_))));
    }

    #[test]
    fn required_lines_examples() {
        let s = required_lines(4, 0.45, 1e-4, 50).unwrap();
        assert_eq!(s, 640);
        let gap = 0.216f64;
        assert!(failure_bound(4, gap, s, 50) <= 1e-4);
        assert!(failure_bound(4, gap, s - 1, 50) > 1e-4);

        // delta equal to the bound at some s gives back exactly that s
        for s0 in [400u64, 701, 1000] {
            let delta = failure_bound(4, gap, s0, 50);
            assert_eq!(required_lines(4, 0.45, delta, 50).unwrap(), s0);
        }

        let step = (2.0 * 2f64.ln() / (gap * gap)).ceil() as i64;
        let s1 = required_lines(4, 0.45, 1e-4, 100).unwrap() as i64;
        let s2 = required_lines(4, 0.45, 1e-4, 200).unwrap() as i64;
        assert!((s2 - s1 - step).abs() <= 1);
    }

    #[test]
    fn noise_free_words_decode() {
        let c = spc_code(2, 2, 3);
        let coeffs: Vec<Elem> = (0..c.dimension() as u32)
            .map(|i| Elem((i * 5 + 2) % 4))
            .collect();
        let f = c.encode(&coeffs).unwrap();
        for s in [1, 7, 21] {
            assert_eq!(decode_he(&c, &f, s, 1).unwrap(), f);
        }
        for a in 0..c.len() {
            let t = he_vote(&c, &f, a, 10, 3).unwrap();
            assert_eq!(t.total(), 10);
            assert_eq!(t.counts[f.get(a).index()], 10);
        }
    }

    #[test]
    fn repetition_code_majority() {
        let c = spc_code(2, 1, 3);
        let info = c.info_positions()[0];
        let mut g = c.encode(&[Elem::ONE]).unwrap();
        let flip = (info + 3) % 8;
        g.set(flip, Elem::ZERO);
        assert_eq!(
            decode_he(&c, &g, 7, 11).unwrap(),
            c.encode(&[Elem::ONE]).unwrap()
        );
    }

    #[test]
    fn argument_errors() {
        let c = spc_code(2, 1, 3);
        let g = Word::zero(2, 3).unwrap();
        assert!(matches!(
            decode_he(&c, &g, 8, 0),
            Err(Error::TooManyLines {
                requested: 8,
                available: 7
            })
        ));
        let rs = CodeSpec {
            p: 2,
            l: 2,
            modulus: None,
            m: 2,
            t: 1,
            base: BaseKind::Rs { u: 1 },
        }
        .build()
        .unwrap();
        assert!(matches!(
            decode_he(&rs, &Word::zero(4, 2).unwrap(), 2, 0),
            Err(Error::NotSpc)
        ));
    }

    #[test]
    fn votes_depend_only_on_seed_and_point() {
        let c = spc_code(2, 2, 3);
        let g = Word::new(4, 3, (0..64).map(|i| Elem((i * i + 3) % 4)).collect()).unwrap();
        let all: Vec<(Elem, bool)> = he_decide(&c, &g, &(0..64).collect::<Vec<_>>(), 9, 5).unwrap();
        let reversed: Vec<usize> = (0..64).rev().collect();
        let mut back = he_decide(&c, &g, &reversed, 9, 5).unwrap();
        back.reverse();
        assert_eq!(all, back);
    }
}
