//! Matrices over the polynomial ring: determinants, minors and compound matrices.

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::poly::{LaurentPolynomial, Monomial, Polynomial};
use crate::rational::{binomial, Rational};

/// Dense row-major matrix of polynomials sharing one ambient ring.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Polynomial>,
}

/// Strictly increasing 1-based indices `1 ≤ μ_1 < … < μ_m ≤ ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowColSelector(Vec<usize>);

impl RowColSelector {
    pub fn new(indices: Vec<usize>, l: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::SelectorOutOfRange("empty selector".into()));
        }
        if indices[0] == 0 || *indices.last().unwrap() > l || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::SelectorOutOfRange(format!("{indices:?} in 1..={l}")));
        }
        Ok(RowColSelector(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All m-subsets of `1..=l` in increasing lexicographic order.
    pub fn all(l: usize, m: usize) -> Vec<RowColSelector> {
        let mut out = Vec::new();
        if m == 0 || m > l {
            return out;
        }
        let mut cur: Vec<usize> = (1..=m).collect();
        loop {
            out.push(RowColSelector(cur.clone()));
            let mut i = m;
            while i > 0 && cur[i - 1] == l - m + i {
                i -= 1;
            }
            if i == 0 {
                return out;
            }
            cur[i - 1] += 1;
            for j in i..m {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        let nvars = entries.first().map_or(0, |p| p.nvars());
        if let Some(bad) = entries.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::DimensionMismatch { left: nvars, right: bad.nvars() });
        }
        Ok(PolyMatrix { rows, cols, nvars, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn from_integers(rows: &[Vec<i64>], nvars: usize) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Polynomial::constant(nvars, Rational::from_int(v))).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Polynomial::one(nvars)
            } else {
                Polynomial::zero(nvars)
            }
        })
        .expect("well-formed")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()).expect("well-formed")
    }

    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(self.nvars);
                for k in 0..self.cols {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.rows, other.cols, entries)
    }

    /// The matrix `(a_{μ_i, ν_j})`.
    pub fn submatrix(&self, mu: &RowColSelector, nu: &RowColSelector) -> Result<PolyMatrix> {
        if mu.0.iter().any(|&i| i > self.rows) {
            return Err(Error::SelectorOutOfRange(format!("rows {:?} of {}", mu.0, self.rows)));
        }
        if nu.0.iter().any(|&j| j > self.cols) {
            return Err(Error::SelectorOutOfRange(format!("columns {:?} of {}", nu.0, self.cols)));
        }
        PolyMatrix::from_fn(mu.len(), nu.len(), |i, j| self.get(mu.0[i] - 1, nu.0[j] - 1).clone())
    }

    /// Substitutes a rational point into every entry.
    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        let vals = par::map(&self.entries, |p| p.eval(point));
        let vals: Vec<Rational> = vals.into_iter().collect::<Result<_>>()?;
        Ok(vals.chunks(self.cols.max(1)).map(<[Rational]>::to_vec).collect())
    }

    pub fn determinant(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(self.nvars));
        }
        if self.entries.iter().all(|p| p.constant_value().is_some()) {
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|i| self.row(i).iter().map(|p| p.constant_value().unwrap()).collect())
                .collect();
            return Ok(Polynomial::constant(self.nvars, rational_determinant(rows)));
        }
        let grid: Vec<Vec<Polynomial>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        Ok(poly_determinant(grid, self.nvars))
    }

    /// The m-th compound matrix: all m×m minors, selectors in increasing order.
    pub fn compound_matrix(&self, m: usize) -> Result<PolyMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let l = self.rows;
        if m == 0 || m > l {
            return Err(Error::InvalidRange(format!("compound order {m} for size {l}")));
        }
        let sel = RowColSelector::all(l, m);
        let k = sel.len();
        let minors = par::map_range(k * k, |idx| self.submatrix(&sel[idx / k], &sel[idx % k])?.determinant());
        PolyMatrix::new(k, k, minors.into_iter().collect::<Result<_>>()?)
    }

    /// `det A^(m) == (det A)^C(ℓ-1, m-1)`, checked exactly.
    pub fn verify_cauchy_sylvester(&self, m: usize) -> Result<bool> {
        let l = self.rows;
        let (lhs, det) = par::join(
            || self.compound_matrix(m).and_then(|c| c.determinant()),
            || self.determinant(),
        );
        let e = binomial(l as u64 - 1, m as u64 - 1);
        Ok(lhs? == det?.pow(e as u32))
    }
}

/// Gaussian elimination over ℚ.
pub fn rational_determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let inv = a[k][k].recip().expect("nonzero pivot");
        det *= &a[k][k];
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k + 1..n {
                let d = &f * &a[k][j];
                a[i][j] = &a[i][j] - &d;
            }
        }
    }
    det
}

/// Basis of `{v : A v = 0}` for a rational matrix with `ncols` columns.
pub fn rational_nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip().expect("nonzero pivot");
        for j in 0..ncols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[row][f];
            }
            v
        })
        .collect()
}

fn det3(g: &[Vec<Polynomial>]) -> Polynomial {
    match g.len() {
        1 => g[0][0].clone(),
        2 => &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0]),
        _ => {
            let m = |a: usize, b: usize, c: usize, d: usize| &(&g[1][a] * &g[2][b]) - &(&g[1][c] * &g[2][d]);
            let t0 = &g[0][0] * &m(1, 2, 2, 1);
            let t1 = &g[0][1] * &m(0, 2, 2, 0);
            let t2 = &g[0][2] * &m(0, 1, 1, 0);
            &(&t0 - &t1) + &t2
        }
    }
}

/// Determinant of a square polynomial grid.
///
/// Rows or columns with a single nonzero entry are expanded first; what
/// remains goes through fraction-free Bareiss elimination with the
/// smallest nonzero entry as pivot.
fn poly_determinant(mut g: Vec<Vec<Polynomial>>, nvars: usize) -> Polynomial {
    let mut factor = Polynomial::one(nvars);
    let mut negate = false;
    // Laplace expansion along sparse lines
    loop {
        let n = g.len();
        if n == 0 {
            break;
        }
        if g.iter().any(|r| r.iter().all(|p| p.is_zero())) || (0..n).any(|j| g.iter().all(|r| r[j].is_zero())) {
            return Polynomial::zero(nvars);
        }
        let row = (0..n).find(|&i| g[i].iter().filter(|p| !p.is_zero()).count() == 1);
        let hit = match row {
            Some(i) => Some((i, g[i].iter().position(|p| !p.is_zero()).unwrap())),
            None => (0..n)
                .find(|&j| g.iter().filter(|r| !r[j].is_zero()).count() == 1)
                .map(|j| (g.iter().position(|r| !r[j].is_zero()).unwrap(), j)),
        };
        let Some((i, j)) = hit else { break };
        if (i + j) % 2 == 1 {
            negate = !negate;
        }
        factor = &factor * &g[i][j];
        g.remove(i);
        for r in g.iter_mut() {
            r.remove(j);
        }
    }
    let core = match g.len() {
        0 => Polynomial::one(nvars),
        1..=3 => det3(&g),
        n if n <= MINOR_EXPANSION_MAX => minor_expansion(&g, nvars),
        _ => bareiss(g, nvars),
    };
    let d = &factor * &core;
    if negate {
        -&d
    } else {
        d
    }
}

const MINOR_EXPANSION_MAX: usize = 16;

/// Division-free expansion along columns, memoising the minors on the
/// leading columns by row subset.
fn minor_expansion(g: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let n = g.len();
    let mut prev: FxHashMap<u32, Polynomial> = FxHashMap::default();
    prev.insert(0, Polynomial::one(nvars));
    for k in 0..n {
        let subsets: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize == k + 1).collect();
        let minors = par::map(&subsets, |&s| {
            let mut acc = Polynomial::zero(nvars);
            for (pos, i) in (0..n).filter(|&i| s & (1 << i) != 0).enumerate() {
                if g[i][k].is_zero() {
                    continue;
                }
                let Some(sub) = prev.get(&(s & !(1 << i))) else { continue };
                let term = &g[i][k] * sub;
                acc = if (pos + k) % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        });
        prev = subsets.into_iter().zip(minors).filter(|(_, p)| !p.is_zero()).collect();
    }
    prev.remove(&((1u32 << n) - 1)).unwrap_or_else(|| Polynomial::zero(nvars))
}

fn bareiss(mut g: Vec<Vec<Polynomial>>, nvars: usize) -> Polynomial {
    let n = g.len();
    let mut prev = Polynomial::one(nvars);
    let mut negate = false;
    for k in 0..n - 1 {
        // smallest nonzero entry of the trailing block, column-major
        let mut best: Option<(usize, usize, usize)> = None;
        for j in k..n {
            for (i, row) in g.iter().enumerate().skip(k) {
                let len = row[j].len();
                if len > 0 && best.is_none_or(|(_, _, b)| len < b) {
                    best = Some((i, j, len));
                }
            }
        }
        let Some((pi, pj, _)) = best else {
            return Polynomial::zero(nvars);
        };
        if pi != k {
            g.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            for r in g.iter_mut() {
                r.swap(pj, k);
            }
            negate = !negate;
        }
        let pivot_row = g[k].clone();
        let lower: Vec<Vec<Polynomial>> = g.split_off(k + 1);
        let updated = par::map(&lower, |row| {
            let mut out = row.clone();
            for j in k + 1..n {
                let num = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                out[j] = num.exact_divide(&prev).expect("Bareiss division is exact");
            }
            out[k] = Polynomial::zero(nvars);
            out
        });
        g.extend(updated);
        prev = pivot_row[k].clone();
    }
    let d = g[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Determinant of a square matrix of Laurent polynomials.
///
/// Each column is first multiplied by a monomial making it polynomial; the
/// monomials are divided back out of the polynomial determinant.
pub fn laurent_determinant(rows: &[Vec<LaurentPolynomial>]) -> Result<LaurentPolynomial> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: rows.first().map_or(0, Vec::len) });
    }
    let nvars = match rows.first().and_then(|r| r.first()) {
        Some(p) => p.nvars(),
        None => return Err(Error::Shape("empty matrix".into())),
    };
    let mut shift = Monomial::one();
    let mut grid = vec![Vec::with_capacity(n); n];
    for j in 0..n {
        let mut lo = Monomial::one();
        for r in rows {
            let m = r[j].min_exponents();
            if !r[j].is_zero() {
                for v in 0..nvars {
                    if m.exp(v) < lo.exp(v) {
                        lo = lo.mul(&Monomial::var(v, m.exp(v) - lo.exp(v)));
                    }
                }
            }
        }
        shift = shift.mul(&lo);
        let up = lo.inverse();
        for (i, r) in rows.iter().enumerate() {
            grid[i].push(r[j].mul_term(&up, &Rational::one()).into_polynomial()?);
        }
    }
    let m = PolyMatrix::from_rows(grid)?;
    Ok(m.determinant()?.as_laurent().mul_term(&shift, &Rational::one()))
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Polynomial>>,
}

impl Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(deserializer)?;
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(serde::de::Error::custom("entries do not match the declared shape"));
        }
        PolyMatrix::from_rows(j.entries).map_err(serde::de::Error::custom)
    }
}
