//! Lifted codes: the functions on F_q^m whose restriction to every
//! t-dimensional affine subspace lies in the base code.
//!
//! The code is spanned by the monomials `x^d` whose exponent tuple `d` is
//! "good". Goodness is decided either by the closed-form shadow criterion
//! (single-parity-check base) or by restricting the monomial to every affine
//! subspace.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base::{BaseCode, BaseCodeSpec, BaseKind};
use crate::domain::{self, checked_pow, AffineSubspace, Point, PointSpace, Spread, Word};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::{self, RowBasis};

/// Limit on q^(m+t) for the brute-force monomial oracle.
pub const MONOMIAL_ORACLE_LIMIT: u64 = 1 << 24;

/// Limit on (number of t-subspaces) * q^m for exhaustive membership.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 26;

/// Default number of random subspaces in the fast membership check.
pub const DEFAULT_FAST_SAMPLES: usize = 200;

const FAST_SAMPLE_SEED: u64 = 0x6c69_6674_6564;

/// An exponent tuple in Z_q^m.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DegreeTuple(pub Vec<u32>);

impl DegreeTuple {
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    /// Comma-separated form used by the `degset` dump.
    pub fn to_csv(&self) -> String {
        self.0
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// c <=_p d: every base-p digit of every c_i is at most the matching digit
/// of d_i.
pub fn p_leq(c: &DegreeTuple, d: &DegreeTuple, p: u32) -> bool {
    assert_eq!(c.0.len(), d.0.len());
    c.0.iter().zip(&d.0).all(|(&ci, &di)| digit_leq(ci, di, p))
}

fn digit_leq(mut c: u32, mut d: u32, p: u32) -> bool {
    while c > 0 || d > 0 {
        if c % p > d % p {
            return false;
        }
        c /= p;
        d /= p;
    }
    true
}

/// 0 maps to 0; a positive integer maps to the b in [1, q-1] with
/// a = b mod (q-1).
pub fn mods_q(a: u64, q: u32) -> u64 {
    if a == 0 {
        return 0;
    }
    let r = a % (q as u64 - 1);
    if r == 0 {
        q as u64 - 1
    } else {
        r
    }
}

fn smallest_prime_factor(q: u32) -> u32 {
    (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2")
}

/// Values c with c <=_p d (the p-shadow of a single exponent).
fn shadow(d: u32, p: u32) -> Vec<u32> {
    let mut out = vec![0u32];
    let mut place = 1u32;
    let mut rest = d;
    while rest > 0 {
        let digit = rest % p;
        let prev = out.clone();
        for k in 1..=digit {
            out.extend(prev.iter().map(|&c| c + k * place));
        }
        rest /= p;
        place *= p;
    }
    out
}

/// Goodness for a single-parity-check base: no c <=_p d has
/// `mods_q(deg c) = q - 1`.
///
/// Tracks which residues of deg(c) mod (q-1) are reachable over the shadow,
/// split by whether c is nonzero.
pub fn spc_good_tuple(d: &DegreeTuple, q: u32) -> bool {
    let p = smallest_prime_factor(q);
    let r = (q - 1) as usize;
    // reach[nonzero][residue]
    let mut reach = vec![vec![false; r]; 2];
    reach[0][0] = true;
    for &di in &d.0 {
        let sh = shadow(di, p);
        let mut next = vec![vec![false; r]; 2];
        for (nz, row) in reach.iter().enumerate() {
            for res in (0..r).filter(|&res| row[res]) {
                for &c in &sh {
                    let nz2 = usize::from(nz == 1 || c > 0);
                    next[nz2][(res + c as usize) % r] = true;
                }
            }
        }
        reach = next;
    }
    !reach[1][0]
}

/// `x^d` evaluated at every point of F_q^m in index order.
pub fn monomial_word(f: &FieldCtx, d: &DegreeTuple) -> Result<Word> {
    let m = d.0.len();
    let space = PointSpace::new(f.q(), m)?;
    let values = (0..space.len())
        .map(|idx| {
            space
                .coords(idx)
                .iter()
                .zip(&d.0)
                .fold(Elem::ONE, |acc, (&a, &e)| f.mul(acc, f.pow(a, e as u64)))
        })
        .collect();
    Word::new(f.q(), m, values)
}

/// Every t-dimensional affine subspace of F_q^m, as point lists in
/// subspace coordinate order.
fn all_affine_subspaces(f: &FieldCtx, m: usize, t: usize) -> Result<Vec<Vec<usize>>> {
    Ok(domain::linear_subspaces(f, m, t)?
        .iter()
        .flat_map(|v| domain::cosets(f, v))
        .collect())
}

fn restrictions_pass(
    f: &FieldCtx,
    base: &dyn BaseCode,
    values: &[Elem],
    subspaces: &[Vec<usize>],
) -> bool {
    let mut buf = Vec::with_capacity(base.len());
    subspaces.iter().all(|pts| {
        buf.clear();
        buf.extend(pts.iter().map(|&i| values[i]));
        base.contains(f, &buf)
    })
}

/// Brute-force goodness: restricts `x^d` to every t-dimensional affine
/// subspace and checks base-code membership.
pub fn monomial_lifts(
    f: &FieldCtx,
    m: usize,
    base: &dyn BaseCode,
    d: &DegreeTuple,
) -> Result<bool> {
    let t = base.domain_dim();
    if d.0.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: d.0.len(),
        });
    }
    let size = (f.q() as u64).saturating_pow((m + t) as u32);
    if size > MONOMIAL_ORACLE_LIMIT {
        return Err(Error::SearchTooLarge {
            size,
            limit: MONOMIAL_ORACLE_LIMIT,
        });
    }
    let subspaces = all_affine_subspaces(f, m, t)?;
    let word = monomial_word(f, d)?;
    Ok(restrictions_pass(f, base, word.values(), &subspaces))
}

/// Summary printed by the `info` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeInfo {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "d_F")]
    pub d_f: usize,
    pub d_low: u64,
    pub e_low: u64,
    pub s: usize,
}

/// Full code description, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub p: u32,
    pub l: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub m: usize,
    pub t: usize,
    pub base: BaseKind,
}

impl CodeSpec {
    pub fn build(&self) -> Result<LiftedCode> {
        let field = Arc::new(FieldCtx::new(self.p, self.l, self.modulus.as_deref())?);
        let base = BaseCodeSpec::new(field.q(), self.base)?;
        build_lifted_code(field, self.m, self.t, Arc::new(base))
    }
}

/// `(d_F - 1)(q^m - 1)/(q^t - 1) + 1` if t | m, else `(d_F - 1) q^(m-t) + 1`.
pub fn d_low(q: u64, m: usize, t: usize, d_f: usize) -> u64 {
    (d_f as u64 - 1) * domain::spread_size(q, m, t) + 1
}

/// Cosets of every spread subspace and where each point sits in them.
#[derive(Debug)]
pub(crate) struct SpreadGeometry {
    /// cosets[i][c]: points of coset c of V_i in subspace coordinate order.
    pub cosets: Vec<Vec<Vec<usize>>>,
    /// locate[i][a] = (coset, position of a inside it).
    pub locate: Vec<Vec<(u32, u32)>>,
}

/// How thoroughly [`LiftedCode::contains`] checks restrictions.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Every t-dimensional affine subspace.
    Exhaustive,
    /// All cosets of the spread plus `samples` random affine subspaces. Never
    /// rejects a codeword.
    Fast { samples: usize, seed: u64 },
}

impl Default for Membership {
    fn default() -> Self {
        Membership::Fast {
            samples: DEFAULT_FAST_SAMPLES,
            seed: FAST_SAMPLE_SEED,
        }
    }
}

#[derive(Debug)]
pub struct LiftedCode {
    field: Arc<FieldCtx>,
    m: usize,
    t: usize,
    base: Arc<dyn BaseCode>,
    space: PointSpace,
    good: Vec<DegreeTuple>,
    d_low: u64,
    e_low: u64,
    spread: Spread,
    info_positions: Vec<usize>,
    /// n x k monomial evaluations, row-major by point.
    eval: Vec<Elem>,
    /// Inverse of the evaluation matrix restricted to the information set.
    info_inverse: Vec<Vec<Elem>>,
    geometry: OnceLock<SpreadGeometry>,
    lines: OnceLock<Vec<Vec<usize>>>,
    fast_subspaces: OnceLock<Vec<Vec<usize>>>,
}

/// Builds the lift of `base` to F_q^m.
pub fn build_lifted_code(
    field: Arc<FieldCtx>,
    m: usize,
    t: usize,
    base: Arc<dyn BaseCode>,
) -> Result<LiftedCode> {
    if base.domain_dim() != t {
        return Err(Error::BadParameters(format!(
            "base code lives on F_q^{}, not F_q^{t}",
            base.domain_dim()
        )));
    }
    if base.field_size() != field.q() {
        return Err(Error::BadParameters(
            "base code and field disagree on q".into(),
        ));
    }
    if t == 0 || 2 * t > m {
        return Err(Error::BadParameters(format!(
            "lifting needs 1 <= t <= m/2, got m={m}, t={t}"
        )));
    }
    let f = field.as_ref();
    let space = PointSpace::new(f.q(), m)?;
    let n = space.len();

    let good_flags: Vec<bool> = if base.is_single_parity_check() && t == 1 {
        (0..n)
            .into_par_iter()
            .map(|idx| spc_good_tuple(&tuple_at(&space, idx), f.q()))
            .collect()
    } else {
        if t > 1 {
            let size = (f.q() as u64).saturating_pow((m + t) as u32);
            if size > MONOMIAL_ORACLE_LIMIT {
                return Err(Error::SearchTooLarge {
                    size,
                    limit: MONOMIAL_ORACLE_LIMIT,
                });
            }
        }
        // for t = 1 the lines are all the affine subspaces, so this is exact
        let subspaces = all_affine_subspaces(f, m, t)?;
        (0..n)
            .into_par_iter()
            .map(|idx| {
                let word =
                    monomial_word(f, &tuple_at(&space, idx)).expect("domain already validated");
                restrictions_pass(f, base.as_ref(), word.values(), &subspaces)
            })
            .collect()
    };
    let good: Vec<DegreeTuple> = good_flags
        .iter()
        .enumerate()
        .filter(|(_, &g)| g)
        .map(|(idx, _)| tuple_at(&space, idx))
        .collect();
    let k = good.len();

    let pow_table: Vec<Vec<Elem>> = f
        .elements()
        .map(|a| (0..f.q()).map(|e| f.pow(a, e as u64)).collect())
        .collect();
    let mut eval = Vec::with_capacity(n * k);
    for idx in 0..n {
        let coords = space.coords(idx);
        for d in &good {
            let v = coords.iter().zip(&d.0).fold(Elem::ONE, |acc, (a, &e)| {
                f.mul(acc, pow_table[a.index()][e as usize])
            });
            eval.push(v);
        }
    }

    let mut basis = RowBasis::new(k);
    let mut info_positions = Vec::with_capacity(k);
    for idx in 0..n {
        if info_positions.len() == k {
            break;
        }
        if basis.insert(f, &eval[idx * k..(idx + 1) * k]) {
            info_positions.push(idx);
        }
    }
    if info_positions.len() != k {
        return Err(Error::BadParameters(
            "monomial evaluations are linearly dependent".into(),
        ));
    }
    let info_rows: Vec<Vec<Elem>> = info_positions
        .iter()
        .map(|&i| eval[i * k..(i + 1) * k].to_vec())
        .collect();
    let info_inverse = linalg::invert(f, &info_rows).expect("information set is independent");

    let spread = domain::build_spread(f, m, t)?;
    let d_low = d_low(f.q() as u64, m, t, base.min_distance());
    Ok(LiftedCode {
        field,
        m,
        t,
        base,
        space,
        good,
        d_low,
        e_low: (d_low - 1) / 2,
        spread,
        info_positions,
        eval,
        info_inverse,
        geometry: OnceLock::new(),
        lines: OnceLock::new(),
        fast_subspaces: OnceLock::new(),
    })
}

fn tuple_at(space: &PointSpace, idx: usize) -> DegreeTuple {
    DegreeTuple(space.coords(idx).into_iter().map(|e| e.value()).collect())
}

impl LiftedCode {
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FieldCtx> {
        Arc::clone(&self.field)
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn base(&self) -> &dyn BaseCode {
        self.base.as_ref()
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.good.len()
    }

    pub fn good_tuples(&self) -> &[DegreeTuple] {
        &self.good
    }

    pub fn d_low(&self) -> u64 {
        self.d_low
    }

    pub fn e_low(&self) -> u64 {
        self.e_low
    }

    pub fn spread(&self) -> &Spread {
        &self.spread
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn info(&self) -> CodeInfo {
        CodeInfo {
            n: self.len(),
            k: self.dimension(),
            d_f: self.base.min_distance(),
            d_low: self.d_low,
            e_low: self.e_low,
            s: self.spread.len(),
        }
    }

    /// The code description, when the base code has a serializable kind.
    pub fn spec(&self) -> Option<CodeSpec> {
        Some(CodeSpec {
            p: self.field.p(),
            l: self.field.l(),
            modulus: Some(self.field.modulus().to_vec()),
            m: self.m,
            t: self.t,
            base: self.base.kind()?,
        })
    }

    /// Evaluates `sum_d coeffs[d] x^d`, coefficients in `good_tuples()` order.
    pub fn encode(&self, coeffs: &[Elem]) -> Result<Word> {
        let k = self.dimension();
        if coeffs.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                found: coeffs.len(),
            });
        }
        let f = self.field();
        let values = self
            .eval
            .chunks_exact(k.max(1))
            .take(self.len())
            .map(|row| {
                row.iter()
                    .zip(coeffs)
                    .fold(Elem::ZERO, |acc, (&a, &c)| f.add(acc, f.mul(a, c)))
            })
            .collect::<Vec<_>>();
        let values = if k == 0 {
            vec![Elem::ZERO; self.len()]
        } else {
            values
        };
        Word::new(self.q(), self.m, values)
    }

    pub fn encode_map(&self, coeffs: &BTreeMap<DegreeTuple, Elem>) -> Result<Word> {
        let mut dense = vec![Elem::ZERO; self.dimension()];
        for (d, &c) in coeffs {
            let pos = self
                .good
                .binary_search(d)
                .map_err(|_| Error::BadSupport(d.0.clone()))?;
            dense[pos] = c;
        }
        self.encode(&dense)
    }

    /// Coefficients of the unique codeword taking `symbols` on the
    /// information positions.
    pub fn coefficients_from_info(&self, symbols: &[Elem]) -> Result<Vec<Elem>> {
        if symbols.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                found: symbols.len(),
            });
        }
        Ok(linalg::mat_vec(self.field(), &self.info_inverse, symbols))
    }

    /// Systematic encoding: `symbols` are the values on `info_positions()`.
    pub fn encode_systematic(&self, symbols: &[Elem]) -> Result<Word> {
        self.encode(&self.coefficients_from_info(symbols)?)
    }

    /// Membership in the lifted code.
    pub fn contains(&self, word: &Word, mode: Membership) -> Result<bool> {
        if word.q() != self.q() || word.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: word.len(),
            });
        }
        if word.erasures() > 0 {
            return Err(Error::UnexpectedErasure);
        }
        let f = self.field();
        let base = self.base();
        match mode {
            Membership::Exhaustive => {
                let size = domain::subspace_count(self.q() as u64, self.m, self.t)
                    .saturating_mul(self.len() as u64);
                if size > EXHAUSTIVE_LIMIT {
                    return Err(Error::TooLargeForExhaustive {
                        size,
                        limit: EXHAUSTIVE_LIMIT,
                    });
                }
                let subspaces = all_affine_subspaces(f, self.m, self.t)?;
                Ok(restrictions_pass(f, base, word.values(), &subspaces))
            }
            Membership::Fast { samples, seed } => {
                let geometry = self.geometry();
                let spread_ok = geometry
                    .cosets
                    .iter()
                    .all(|cs| restrictions_pass(f, base, word.values(), cs));
                if !spread_ok {
                    return Ok(false);
                }
                if (samples, seed) == (DEFAULT_FAST_SAMPLES, FAST_SAMPLE_SEED) {
                    let sampled = self
                        .fast_subspaces
                        .get_or_init(|| self.sample_subspaces(samples, seed));
                    Ok(restrictions_pass(f, base, word.values(), sampled))
                } else {
                    Ok(restrictions_pass(
                        f,
                        base,
                        word.values(),
                        &self.sample_subspaces(samples, seed),
                    ))
                }
            }
        }
    }

    fn sample_subspaces(&self, samples: usize, seed: u64) -> Vec<Vec<usize>> {
        let f = self.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_point = |rng: &mut ChaCha8Rng| {
            Point(
                (0..self.m)
                    .map(|_| Elem(rng.random_range(0..f.q())))
                    .collect(),
            )
        };
        (0..samples)
            .map(|_| loop {
                let basis = (0..self.t).map(|_| random_point(&mut rng)).collect();
                let offset = random_point(&mut rng);
                if let Ok(v) = AffineSubspace::new(f, basis, offset) {
                    break v.point_indices(f);
                }
            })
            .collect()
    }

    /// Points of each spread subspace through the origin, in subspace
    /// coordinate order.
    pub(crate) fn spread_points(&self) -> &[Vec<usize>] {
        self.lines.get_or_init(|| {
            self.spread
                .subspaces()
                .iter()
                .map(|v| v.point_indices(self.field()))
                .collect()
        })
    }

    pub(crate) fn geometry(&self) -> &SpreadGeometry {
        self.geometry.get_or_init(|| {
            let f = self.field();
            let mut cosets = Vec::with_capacity(self.spread.len());
            let mut locate = Vec::with_capacity(self.spread.len());
            for v in self.spread.subspaces() {
                let cs = domain::cosets(f, v);
                let mut loc = vec![(0u32, 0u32); self.len()];
                for (c, pts) in cs.iter().enumerate() {
                    for (y, &a) in pts.iter().enumerate() {
                        loc[a] = (c as u32, y as u32);
                    }
                }
                cosets.push(cs);
                locate.push(loc);
            }
            SpreadGeometry { cosets, locate }
        })
    }
}

/// Checks a domain size before allocating words for it.
pub fn domain_size(q: u32, m: usize) -> Result<usize> {
    checked_pow(q, m)
}
