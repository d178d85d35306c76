//! Bounded-distance decoding of lifted codes up to `e_low` errors.
//!
//! Every point `a` is decoded on its own. Each spread subspace through `a`
//! is decoded locally with the base decoder, the outcomes are tallied, and
//! `a` gets the symbol with the smallest score `N_a`. When `d_F` is even the
//! symbol at `a` is erased before local decoding.

use rayon::prelude::*;

use crate::base::LocalOutcome;
use crate::domain::{self, Word};
use crate::error::{Error, FailureReason, Result};
use crate::gf::Elem;
use crate::lift::{LiftedCode, Membership};

/// Local decoding statistics at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TallyTable {
    /// Index of the point.
    pub point: usize,
    /// Received symbol g(a).
    pub received: Elem,
    /// counts[alpha][j]: subspaces decoded to a codeword with value alpha at
    /// the origin and local distance j.
    pub counts: Vec<Vec<u64>>,
    /// Subspaces where local decoding failed.
    pub star: u64,
    /// delta(alpha): 1{g(a) != alpha} if d_F is odd, 0 otherwise.
    pub delta: Vec<u8>,
    pub scores: Vec<i64>,
}

impl TallyTable {
    fn new(code: &LiftedCode, point: usize, received: Elem) -> Self {
        let q = code.q() as usize;
        let e = code.base().radius();
        let odd = code.base().min_distance() % 2 == 1;
        let delta = (0..q)
            .map(|a| u8::from(odd && received.index() != a))
            .collect();
        TallyTable {
            point,
            received,
            counts: vec![vec![0; e + 1]; q],
            star: 0,
            delta,
            scores: Vec::new(),
        }
    }

    fn record(&mut self, alpha: Elem, distance: usize) {
        debug_assert!(
            distance < self.counts[0].len(),
            "local decoder exceeded its radius"
        );
        self.counts[alpha.index()][distance] += 1;
    }

    /// Tally total, equal to the spread size.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum::<u64>() + self.star
    }

    fn compute_scores(&mut self, d_f: usize) {
        let d_f = d_f as i64;
        let e = self.counts[0].len() as i64 - 1;
        // weight of a subspace decoded to beta when scoring a candidate alpha != beta
        let other = |beta: usize, j: usize| d_f - 1 - j as i64 + self.delta[beta] as i64;
        let per_alpha_other: Vec<i64> = (0..self.counts.len())
            .map(|b| {
                self.counts[b]
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| other(b, j) * c as i64)
                    .sum()
            })
            .collect();
        let all_other: i64 = per_alpha_other.iter().sum();
        self.scores = (0..self.counts.len())
            .map(|a| {
                let da = self.delta[a] as i64;
                let own: i64 = self.counts[a]
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| (j as i64 - da) * c as i64)
                    .sum();
                i64::from(self.received.index() != a)
                    + own
                    + (all_other - per_alpha_other[a])
                    + (e + 1 - da) * self.star as i64
            })
            .collect();
    }

    /// Smallest-score symbol, and whether another symbol shares the score.
    pub fn argmin(&self) -> (Elem, bool) {
        let best = *self.scores.iter().min().expect("scores computed");
        let first = self.scores.iter().position(|&s| s == best).unwrap();
        let tie = self.scores.iter().filter(|&&s| s == best).count() > 1;
        (Elem(first as u32), tie)
    }
}

fn check_input(code: &LiftedCode, g: &Word) -> Result<()> {
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

/// Tally at point `a`, restricting `g` to every spread subspace through `a`.
pub fn local_tally(code: &LiftedCode, g: &Word, a: usize) -> Result<TallyTable> {
    check_input(code, g)?;
    let f = code.field();
    let base = code.base();
    let a_point = domain::point_at(code.q(), code.m(), a)?;
    let even = base.min_distance().is_multiple_of(2);
    let mut table = TallyTable::new(code, a, g.get(a));
    for v in code.spread().subspaces() {
        let mut local = domain::restrict_word(f, g, &v.with_offset(a_point.clone()))?.into_values();
        if even {
            local[0] = Elem::ERASED;
        }
        match base.decode_bmd(f, &local)? {
            LocalOutcome::Decoded {
                alpha, distance, ..
            } => table.record(alpha, distance),
            LocalOutcome::Star => table.star += 1,
        }
    }
    table.compute_scores(base.min_distance());
    Ok(table)
}

/// `d(f, g) >= N_a(f(a))` for a codeword `f`.
pub fn n_lower_bound_check(code: &LiftedCode, f: &Word, g: &Word, a: usize) -> Result<bool> {
    let table = local_tally(code, g, a)?;
    Ok(f.distance(g) as i64 >= table.scores[f.get(a).index()])
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum DecodeMode {
    /// Decide every point.
    #[default]
    Full,
    /// Decide the information positions only, then re-encode.
    Systematic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BdOptions {
    pub mode: DecodeMode,
    /// With odd d_F, decode each coset once and share the result between
    /// its points.
    pub coset_cache: bool,
    /// Membership check applied to the result.
    pub membership: Membership,
}

impl Default for BdOptions {
    fn default() -> Self {
        BdOptions {
            mode: DecodeMode::Full,
            coset_cache: true,
            membership: Membership::default(),
        }
    }
}

impl BdOptions {
    pub fn naive() -> Self {
        BdOptions {
            coset_cache: false,
            ..Default::default()
        }
    }

    pub fn systematic() -> Self {
        BdOptions {
            mode: DecodeMode::Systematic,
            ..Default::default()
        }
    }
}

/// Decoded symbols at the requested points plus a tie flag per point.
fn decide_points(
    code: &LiftedCode,
    g: &Word,
    points: &[usize],
    opts: &BdOptions,
) -> Result<Vec<(Elem, bool)>> {
    let base = code.base();
    let odd = base.min_distance() % 2 == 1;
    if odd && opts.coset_cache {
        let f = code.field();
        let geometry = code.geometry();
        // outcomes[i][c] for coset c of spread subspace i
        let outcomes: Vec<Vec<LocalOutcome>> = geometry
            .cosets
            .par_iter()
            .map(|cs| {
                cs.iter()
                    .map(|pts| {
                        let local: Vec<Elem> = pts.iter().map(|&p| g.get(p)).collect();
                        base.decode_bmd(f, &local)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(points
            .par_iter()
            .map(|&a| {
                let mut table = TallyTable::new(code, a, g.get(a));
                for (i, loc) in geometry.locate.iter().enumerate() {
                    let (c, y) = loc[a];
                    match &outcomes[i][c as usize] {
                        // translating the coset moves a to the origin; the distance is unchanged
                        LocalOutcome::Decoded {
                            codeword, distance, ..
                        } => table.record(codeword[y as usize], *distance),
                        LocalOutcome::Star => table.star += 1,
                    }
                }
                table.compute_scores(base.min_distance());
                table.argmin()
            })
            .collect())
    } else {
        points
            .par_iter()
            .map(|&a| local_tally(code, g, a).map(|t| t.argmin()))
            .collect()
    }
}

/// Decodes `g` to the unique codeword within distance `e_low`.
pub fn decode_bd(code: &LiftedCode, g: &Word, opts: &BdOptions) -> Result<Word> {
    check_input(code, g)?;
    let decoded = match opts.mode {
        DecodeMode::Full => {
            let points: Vec<usize> = (0..code.len()).collect();
            let decided = decide_points(code, g, &points, opts)?;
            if decided.iter().any(|&(_, tie)| tie) {
                return Err(Error::DecodeFailure(FailureReason::Tie));
            }
            Word::new(
                code.q(),
                code.m(),
                decided.into_iter().map(|(v, _)| v).collect(),
            )?
        }
        DecodeMode::Systematic => {
            let decided = decide_points(code, g, code.info_positions(), opts)?;
            if decided.iter().any(|&(_, tie)| tie) {
                return Err(Error::DecodeFailure(FailureReason::Tie));
            }
            let symbols: Vec<Elem> = decided.into_iter().map(|(v, _)| v).collect();
            code.encode_systematic(&symbols)?
        }
    };
    if !code.contains(&decoded, opts.membership)? {
        return Err(Error::DecodeFailure(FailureReason::NotInCode));
    }
    if decoded.distance(g) as u64 > code.e_low() {
        return Err(Error::DecodeFailure(FailureReason::RadiusExceeded));
    }
    Ok(decoded)
}
