//! Noise models: the q-ary symmetric channel and fixed-weight error patterns.
//!
//! Randomness is keyed by (seed, position): position `i` draws from ChaCha
//! stream `i` of the seed's key, so the corruption of a symbol does not depend
//! on iteration order or thread count.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{checked_pow, Word};
use crate::error::{Error, Result};
use crate::gf::Elem;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ChannelParams {
    pub q: u32,
    /// Probability that a symbol is replaced.
    pub p_err: f64,
    pub seed: u64,
}

impl ChannelParams {
    pub fn new(q: u32, p_err: f64, seed: u64) -> Result<Self> {
        let max = (q - 1) as f64 / q as f64;
        if !(0.0..=max).contains(&p_err) {
            return Err(Error::BadProbability(p_err));
        }
        Ok(ChannelParams { q, p_err, seed })
    }

    /// From the distance to the uniform channel, epsilon = (q-1)/q - p_err.
    pub fn from_epsilon(q: u32, epsilon: f64, seed: u64) -> Result<Self> {
        Self::new(q, ((q - 1) as f64 / q as f64 - epsilon).max(0.0), seed)
    }

    pub fn epsilon(&self) -> f64 {
        (self.q - 1) as f64 / self.q as f64 - self.p_err
    }
}

pub(crate) fn position_rng(seed: u64, position: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(position);
    rng
}

/// Sends `f` through the q-ary symmetric channel.
pub fn qsc_apply(params: &ChannelParams, f: &Word) -> Result<Word> {
    if f.q() != params.q {
        return Err(Error::BadParameters(format!(
            "word over F_{} sent through a {}-ary channel",
            f.q(),
            params.q
        )));
    }
    let q = params.q;
    let values = f
        .values()
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            if x.is_erased() {
                return x;
            }
            let mut rng = position_rng(params.seed, i as u64);
            if params.p_err > 0.0 && rng.random_bool(params.p_err) {
                // uniform over the q - 1 other symbols
                let v = rng.random_range(0..q - 1);
                Elem(if v >= x.value() { v + 1 } else { v })
            } else {
                x
            }
        })
        .collect();
    Word::new(q, f.dim(), values)
}

/// An error word on F_q^m of weight exactly `w`: uniform support, values
/// uniform over the nonzero elements.
pub fn fixed_weight_error(q: u32, m: usize, w: usize, seed: u64) -> Result<Word> {
    let n = checked_pow(q, m)?;
    if w > n {
        return Err(Error::BadWeight { w, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![Elem::ZERO; n];
    for pos in index::sample(&mut rng, n, w) {
        values[pos] = Elem(rng.random_range(1..q));
    }
    Word::new(q, m, values)
}
