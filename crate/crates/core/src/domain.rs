//! Evaluation domains F_q^m, affine subspaces with their coordinate maps,
//! spreads, and restriction of words to affine subspaces.
//!
//! Points are enumerated in a fixed order: the index of `(a_1, ..., a_m)` is
//! `sum a_i q^(m-i)`, so the first coordinate is the most significant digit.
//! The same order is used for coefficient tuples `lambda` of a subspace basis,
//! which makes `lambda = 0` (the offset) the first point of every subspace.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::gf::{Elem, Extension, FieldCtx};
use crate::linalg;

/// A point of F_q^m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Elem>);

impl Point {
    pub fn zero(m: usize) -> Self {
        Point(vec![Elem::ZERO; m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn add(&self, f: &FieldCtx, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, f: &FieldCtx, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, f: &FieldCtx, c: Elem) -> Point {
        Point(self.0.iter().map(|&a| f.mul(c, a)).collect())
    }
}

/// Canonical index of a point of F_q^m.
pub fn index_point(q: u32, point: &Point) -> Result<usize> {
    let mut idx = 0usize;
    for &c in &point.0 {
        if c.value() >= q {
            return Err(Error::OutOfRange {
                value: c.value() as u64,
                bound: q as u64,
            });
        }
        idx = idx * q as usize + c.index();
    }
    Ok(idx)
}

/// Inverse of [`index_point`].
pub fn point_at(q: u32, m: usize, index: usize) -> Result<Point> {
    let n = checked_pow(q, m)?;
    if index >= n {
        return Err(Error::OutOfRange {
            value: index as u64,
            bound: n as u64,
        });
    }
    let mut coords = vec![Elem::ZERO; m];
    let mut rest = index;
    for slot in coords.iter_mut().rev() {
        *slot = Elem((rest % q as usize) as u32);
        rest /= q as usize;
    }
    Ok(Point(coords))
}

pub(crate) fn checked_pow(q: u32, m: usize) -> Result<usize> {
    (q as usize)
        .checked_pow(m as u32)
        .filter(|&n| n <= 1 << 30)
        .ok_or_else(|| Error::BadParameters(format!("domain {q}^{m} is too large")))
}

/// Index arithmetic on F_q^dim without materializing coordinate vectors.
#[derive(Clone, Debug)]
pub struct PointSpace {
    q: usize,
    dim: usize,
    n: usize,
}

impl PointSpace {
    pub fn new(q: u32, dim: usize) -> Result<Self> {
        Ok(PointSpace {
            q: q as usize,
            dim,
            n: checked_pow(q, dim)?,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self, idx: usize) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO; self.dim];
        let mut rest = idx;
        for slot in out.iter_mut().rev() {
            *slot = Elem((rest % self.q) as u32);
            rest /= self.q;
        }
        out
    }

    pub fn index(&self, coords: &[Elem]) -> usize {
        coords.iter().fold(0, |acc, c| acc * self.q + c.index())
    }

    /// Index of the sum of two points.
    pub fn add(&self, f: &FieldCtx, a: usize, b: usize) -> usize {
        if f.p() == 2 {
            // digitwise addition in characteristic 2 is XOR of the encodings
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.dim {
            let s = f.add(Elem((a % self.q) as u32), Elem((b % self.q) as u32));
            out += s.index() * place;
            a /= self.q;
            b /= self.q;
            place *= self.q;
        }
        out
    }

    /// Index of `c * a`.
    pub fn scale(&self, f: &FieldCtx, c: Elem, a: usize) -> usize {
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.dim {
            out += f.mul(c, Elem((a % self.q) as u32)).index() * place;
            a /= self.q;
            place *= self.q;
        }
        out
    }
}

/// A function from F_q^dim to F_q, stored densely in point-index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    q: u32,
    dim: usize,
    values: Vec<Elem>,
}

impl Word {
    /// Values must be field elements or `Elem::ERASED`.
    pub fn new(q: u32, dim: usize, values: Vec<Elem>) -> Result<Self> {
        let n = checked_pow(q, dim)?;
        if values.len() != n {
            return Err(Error::BadLength {
                expected: n,
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_erased() && v.value() >= q) {
            return Err(Error::OutOfRange {
                value: bad.value() as u64,
                bound: q as u64,
            });
        }
        Ok(Word { q, dim, values })
    }

    pub fn zero(q: u32, dim: usize) -> Result<Self> {
        let n = checked_pow(q, dim)?;
        Ok(Word {
            q,
            dim,
            values: vec![Elem::ZERO; n],
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Elem> {
        self.values
    }

    #[inline]
    pub fn get(&self, idx: usize) -> Elem {
        self.values[idx]
    }

    pub fn set(&mut self, idx: usize, v: Elem) {
        assert!(v.is_erased() || v.value() < self.q);
        self.values[idx] = v;
    }

    pub fn erasures(&self) -> usize {
        self.values.iter().filter(|v| v.is_erased()).count()
    }

    pub fn weight(&self) -> usize {
        self.values
            .iter()
            .filter(|&&v| v != Elem::ZERO && !v.is_erased())
            .count()
    }

    /// Hamming distance over positions where neither word is erased.
    pub fn distance(&self, other: &Word) -> usize {
        distance(&self.values, &other.values)
    }

    pub fn add(&self, f: &FieldCtx, other: &Word) -> Result<Word> {
        self.check_same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Word {
            q: self.q,
            dim: self.dim,
            values,
        })
    }

    pub fn sub(&self, f: &FieldCtx, other: &Word) -> Result<Word> {
        self.check_same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Word {
            q: self.q,
            dim: self.dim,
            values,
        })
    }

    fn check_same_shape(&self, other: &Word) -> Result<()> {
        if self.q != other.q || self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        if self.erasures() + other.erasures() > 0 {
            return Err(Error::UnexpectedErasure);
        }
        Ok(())
    }

    /// Text form: a `q dim` header line, then all values on one line,
    /// separated by single spaces, with `*` for erasures.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.q, self.dim);
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            write!(s, "{v}").unwrap();
        }
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Word> {
        let mut tokens = text.split_whitespace();
        let mut header = |name: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {name} in word header")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad {name}: {e}")))
        };
        let q = header("q")? as u32;
        let dim = header("dimension")?;
        let values = tokens
            .map(|t| {
                if t == "*" {
                    Ok(Elem::ERASED)
                } else {
                    t.parse::<u32>()
                        .map(Elem)
                        .map_err(|e| Error::Parse(format!("bad symbol {t:?}: {e}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(q, dim, values)
    }

    pub fn read_from<R: BufRead>(mut reader: R) -> Result<Word> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Word::parse(&text)
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> Result<()> {
        writer.write_all(self.to_text().as_bytes())?;
        Ok(())
    }
}

pub(crate) fn distance(a: &[Elem], b: &[Elem]) -> usize {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_erased() && !y.is_erased() && x != y)
        .count()
}

/// An affine subspace `offset + span(basis)` of F_q^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    basis: Vec<Point>,
    offset: Point,
}

impl AffineSubspace {
    pub fn new(f: &FieldCtx, basis: Vec<Point>, offset: Point) -> Result<Self> {
        let m = offset.dim();
        for b in &basis {
            if b.dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: b.dim(),
                });
            }
        }
        for c in basis
            .iter()
            .chain(std::iter::once(&offset))
            .flat_map(|p| &p.0)
        {
            if c.is_erased() || c.value() >= f.q() {
                return Err(Error::OutOfRange {
                    value: c.value() as u64,
                    bound: f.q() as u64,
                });
            }
        }
        let rows: Vec<Vec<Elem>> = basis.iter().map(|b| b.0.clone()).collect();
        if basis.is_empty() || linalg::rank(f, &rows) != basis.len() {
            return Err(Error::RankDeficient);
        }
        Ok(AffineSubspace { basis, offset })
    }

    pub fn linear(f: &FieldCtx, basis: Vec<Point>) -> Result<Self> {
        let m = basis.first().map_or(0, Point::dim);
        Self::new(f, basis, Point::zero(m))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.dim()
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn offset(&self) -> &Point {
        &self.offset
    }

    pub fn with_offset(&self, offset: Point) -> Self {
        assert_eq!(offset.dim(), self.ambient_dim());
        AffineSubspace {
            basis: self.basis.clone(),
            offset,
        }
    }

    /// Points `offset + sum lambda_j gamma_j` for all `lambda` in index
    /// order; position `y` in this list is `phi_V^{-1}(y) + offset`.
    pub fn points(&self, f: &FieldCtx) -> Vec<Point> {
        let t = self.dim();
        let lambdas = PointSpace::new(f.q(), t).expect("subspace dimension bounded by ambient");
        (0..lambdas.len())
            .map(|y| {
                let lambda = lambdas.coords(y);
                lambda
                    .iter()
                    .zip(&self.basis)
                    .fold(self.offset.clone(), |acc, (&c, g)| {
                        acc.add(f, &g.scale(f, c))
                    })
            })
            .collect()
    }

    pub fn point_indices(&self, f: &FieldCtx) -> Vec<usize> {
        self.points(f)
            .iter()
            .map(|p| index_point(f.q(), p).expect("valid points"))
            .collect()
    }

    /// Index of `phi_V(v)` for a vector `v` of the linear part, if it lies there.
    pub fn phi(&self, f: &FieldCtx, v: &Point) -> Option<usize> {
        let linear = self.with_offset(Point::zero(self.ambient_dim()));
        linear.points(f).iter().position(|p| p == v)
    }
}

/// Convenience wrapper matching `AffineSubspace::points`.
pub fn subspace_points(f: &FieldCtx, v: &AffineSubspace) -> Vec<Point> {
    v.points(f)
}

/// `g_a^(V)(y) = g(phi_V^{-1}(y) + a)`, a word on F_q^t. Erasure markers are
/// carried over.
pub fn restrict_word(f: &FieldCtx, g: &Word, v: &AffineSubspace) -> Result<Word> {
    if g.dim() != v.ambient_dim() || g.q() != f.q() {
        return Err(Error::DimensionMismatch {
            expected: v.ambient_dim(),
            found: g.dim(),
        });
    }
    let values = v.point_indices(f).into_iter().map(|i| g.get(i)).collect();
    Word::new(f.q(), v.dim(), values)
}

/// All cosets of the linear part of `v`, each listed in `phi` order starting
/// at its smallest-index point.
pub fn cosets(f: &FieldCtx, v: &AffineSubspace) -> Vec<Vec<usize>> {
    let m = v.ambient_dim();
    let space = PointSpace::new(f.q(), m).expect("ambient space fits");
    let linear = v.with_offset(Point::zero(m)).point_indices(f);
    let mut seen = vec![false; space.len()];
    let mut out = Vec::with_capacity(space.len() / linear.len());
    for a in 0..space.len() {
        if seen[a] {
            continue;
        }
        let coset: Vec<usize> = linear.iter().map(|&l| space.add(f, a, l)).collect();
        for &p in &coset {
            seen[p] = true;
        }
        out.push(coset);
    }
    out
}

/// Number of t-dimensional linear subspaces of F_q^m (Gaussian binomial).
pub fn subspace_count(q: u64, m: usize, t: usize) -> u64 {
    if t > m {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..t {
        num *= (q as u128).pow((m - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// Every t-dimensional linear subspace of F_q^m, one per reduced row echelon
/// basis.
pub fn linear_subspaces(f: &FieldCtx, m: usize, t: usize) -> Result<Vec<AffineSubspace>> {
    if t == 0 || t > m {
        return Err(Error::BadParameters(format!(
            "no {t}-dimensional subspaces of F_q^{m}"
        )));
    }
    let q = f.q() as usize;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..t).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..t)
            .flat_map(|r| {
                ((pivots[r] + 1)..m)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let combos = q
            .checked_pow(free.len() as u32)
            .ok_or(Error::SearchTooLarge {
                size: u64::MAX,
                limit: 1 << 24,
            })?;
        for mut code in 0..combos {
            let mut rows = vec![vec![Elem::ZERO; m]; t];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = Elem::ONE;
            }
            for &(r, c) in &free {
                rows[r][c] = Elem((code % q) as u32);
                code /= q;
            }
            out.push(AffineSubspace {
                basis: rows.into_iter().map(Point).collect(),
                offset: Point::zero(m),
            });
        }
        // next pivot combination in lexicographic order
        let Some(i) = (0..t).rev().find(|&i| pivots[i] < m - t + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..t {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    Ok(out)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SpreadKind {
    /// t divides m: every nonzero vector is covered.
    Full,
    /// t does not divide m.
    Partial,
}

/// t-dimensional subspaces of F_q^m meeting pairwise only in the origin.
#[derive(Clone, Debug)]
pub struct Spread {
    m: usize,
    t: usize,
    kind: SpreadKind,
    subspaces: Vec<AffineSubspace>,
}

/// `(q^m - 1)/(q^t - 1)` when t | m, otherwise `q^(m-t)`.
pub fn spread_size(q: u64, m: usize, t: usize) -> u64 {
    if m.is_multiple_of(t) {
        (q.pow(m as u32) - 1) / (q.pow(t as u32) - 1)
    } else {
        q.pow((m - t) as u32)
    }
}

impl Spread {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn kind(&self) -> SpreadKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[AffineSubspace] {
        &self.subspaces
    }

    /// One line per subspace: the basis vectors as point indices.
    pub fn dump(&self, f: &FieldCtx) -> String {
        let mut s = String::new();
        for v in &self.subspaces {
            let cols: Vec<String> = v
                .basis()
                .iter()
                .map(|b| index_point(f.q(), b).expect("valid basis").to_string())
                .collect();
            s.push_str(&cols.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Builds a spread of F_q^m into t-dimensional subspaces.
///
/// For t | m the space is identified with GF(q^t)^(m/t) and the spread
/// consists of its one-dimensional GF(q^t)-subspaces. Otherwise the
/// subspaces are graphs `{(x, a * emb(x))}` of multiplication maps into
/// GF(q^(m-t)), one per `a`; differences of such maps are injective, which
/// makes the graphs meet only at the origin.
pub fn build_spread(f: &FieldCtx, m: usize, t: usize) -> Result<Spread> {
    let trivial = t == 1 && m == 1;
    if t == 0 || (2 * t > m && !trivial) {
        return Err(Error::BadParameters(format!(
            "spread needs 1 <= t <= m/2, got m={m}, t={t}"
        )));
    }
    checked_pow(f.q(), m)?;
    let (kind, subspaces) = if m.is_multiple_of(t) {
        (SpreadKind::Full, full_spread(f, m, t)?)
    } else {
        (SpreadKind::Partial, partial_spread(f, m, t)?)
    };
    debug_assert_eq!(subspaces.len() as u64, spread_size(f.q() as u64, m, t));
    Ok(Spread {
        m,
        t,
        kind,
        subspaces,
    })
}

fn full_spread(f: &FieldCtx, m: usize, t: usize) -> Result<Vec<AffineSubspace>> {
    let ext = Extension::new(f, t)?;
    let big = ext.big();
    let blocks = m / t;
    let vectors = PointSpace::new(big.q(), blocks)?;
    let mut out = Vec::new();
    for vidx in 1..vectors.len() {
        let v = vectors.coords(vidx);
        if v.iter().find(|&&c| c != Elem::ZERO) != Some(&Elem::ONE) {
            continue;
        }
        let basis = (0..t)
            .map(|j| {
                let z = ext.basis(j);
                Point(
                    v.iter()
                        .flat_map(|&c| ext.to_coords(big.mul(z, c)).to_vec())
                        .collect(),
                )
            })
            .collect();
        out.push(AffineSubspace::linear(f, basis)?);
    }
    Ok(out)
}

fn partial_spread(f: &FieldCtx, m: usize, t: usize) -> Result<Vec<AffineSubspace>> {
    let ext = Extension::new(f, m - t)?;
    let big = ext.big();
    let mut out = Vec::with_capacity(big.size());
    for a in big.elements() {
        let basis = (0..t)
            .map(|j| {
                let mut coords = vec![Elem::ZERO; m];
                coords[j] = Elem::ONE;
                coords[t..].copy_from_slice(ext.to_coords(big.mul(a, ext.basis(j))));
                Point(coords)
            })
            .collect();
        out.push(AffineSubspace::linear(f, basis)?);
    }
    Ok(out)
}
