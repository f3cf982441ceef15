//! Subspaces of the standard module `Q^n`, held as explicit bases.

use super::matrix::{row_reduce, row_reduce_limited, RMatrix};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Incremental row-echelon form used for membership tests.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    n: usize,
    // (pivot column, row with 1 at pivot and 0 at all earlier pivots, support)
    rows: Vec<(usize, Vec<Rational>, Vec<usize>)>,
}

impl Echelon {
    pub(crate) fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new() }
    }

    pub(crate) fn reduce(&self, v: &mut [Rational]) {
        for (p, row, support) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for &k in support {
                v[k] -= &f * &row[k];
            }
        }
    }

    /// Adds `v` if independent of what is already stored; returns whether it was.
    pub(crate) fn insert(&mut self, v: &[Rational]) -> bool {
        debug_assert_eq!(v.len(), self.n);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let support = (0..self.n).filter(|&k| !w[k].is_zero()).collect();
        self.rows.push((p, w, support));
        true
    }

    pub(crate) fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Rational::is_zero)
    }
}

/// A subspace of `Q^ambient_dim` given by a linearly independent list of
/// column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<RMatrix>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in Q^{})", self.dim(), self.ambient_dim)
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| RMatrix::unit_vector(ambient_dim, i)).collect(),
        }
    }

    /// Span of `vectors`, keeping the first maximal independent subset in order.
    pub fn span<I>(ambient_dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = RMatrix>,
    {
        let mut ech = Echelon::new(ambient_dim);
        let mut basis = Vec::new();
        for v in vectors {
            if v.cols() != 1 || v.rows() != ambient_dim {
                return Err(Error::BadVector {
                    expected: ambient_dim,
                    found: v.rows() * v.cols(),
                });
            }
            if ech.insert(v.as_slice()) {
                basis.push(v);
            }
        }
        Ok(Subspace { ambient_dim, basis })
    }

    /// Wraps vectors already known to be independent (checked in debug builds).
    pub(crate) fn from_independent(ambient_dim: usize, basis: Vec<RMatrix>) -> Self {
        debug_assert!({
            let mut ech = Echelon::new(ambient_dim);
            basis.iter().all(|v| ech.insert(v.as_slice()))
        });
        Subspace { ambient_dim, basis }
    }

    pub fn column_space(m: &RMatrix) -> Self {
        Self::span(m.rows(), m.columns()).expect("columns have matching length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[RMatrix] {
        &self.basis
    }

    /// The `n x dim` matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> RMatrix {
        let refs: Vec<&RMatrix> = self.basis.iter().collect();
        if refs.is_empty() {
            return RMatrix::zeros(self.ambient_dim, 0);
        }
        RMatrix::hstack(&refs).expect("basis vectors share a length")
    }

    pub(crate) fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.ambient_dim);
        for v in &self.basis {
            ech.insert(v.as_slice());
        }
        ech
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &RMatrix) -> Result<bool> {
        if v.rows() != self.ambient_dim || v.cols() != 1 {
            return Err(Error::BadVector {
                expected: self.ambient_dim,
                found: v.rows() * v.cols(),
            });
        }
        Ok(self.echelon().contains(v.as_slice()))
    }

    /// Index of the first basis vector of `other` outside `self`, if any.
    pub fn first_outside(&self, other: &Subspace) -> Result<Option<usize>> {
        self.check_ambient(other)?;
        let ech = self.echelon();
        Ok(other.basis.iter().position(|v| !ech.contains(v.as_slice())))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        Ok(other.dim() <= self.dim() && self.first_outside(other)?.is_none())
    }

    /// Equality as subspaces: equal dimension and containment.
    pub fn same_as(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.dim() == other.dim() && self.contains(other)?)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Subspace::span(self.ambient_dim, self.basis.iter().chain(&other.basis).cloned())
    }

    /// Sum of an arbitrary family of subspaces of `Q^ambient_dim`.
    pub fn sum_all<'a, I>(ambient_dim: usize, spaces: I) -> Result<Subspace>
    where
        I: IntoIterator<Item = &'a Subspace>,
    {
        let mut vectors = Vec::new();
        for s in spaces {
            if s.ambient_dim != ambient_dim {
                return Err(Error::AmbientMismatch {
                    left: ambient_dim,
                    right: s.ambient_dim,
                });
            }
            vectors.extend(s.basis.iter().cloned());
        }
        Subspace::span(ambient_dim, vectors)
    }

    /// Exact intersection via the kernel of `[U | -V]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let n = self.ambient_dim;
        let p = self.dim();
        let q = other.dim();
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                self.basis
                    .iter()
                    .map(|u| u.as_slice()[i].clone())
                    .chain(other.basis.iter().map(|v| -&v.as_slice()[i]))
                    .collect()
            })
            .collect();
        let coeffs = kernel_of_rows(&mut rows, p + q);
        let vectors = coeffs.into_iter().map(|c| {
            let mut acc = vec![Rational::zero(); n];
            for (u, a) in self.basis.iter().zip(&c[..p]) {
                if a.is_zero() {
                    continue;
                }
                for (slot, x) in acc.iter_mut().zip(u.as_slice()) {
                    if !x.is_zero() {
                        *slot += a * x;
                    }
                }
            }
            RMatrix::column_vector(acc)
        });
        // independent because U has independent columns
        Ok(Subspace::from_independent(n, vectors.collect()))
    }

    /// Orthogonal complement of `self` inside `within` for the form `<a,b> = a^t b`.
    pub fn orth_complement_within(&self, within: &Subspace) -> Result<Subspace> {
        self.check_ambient(within)?;
        if let Some(index) = within.first_outside(self)? {
            return Err(Error::NotContained { index });
        }
        if self.is_zero() {
            return Ok(within.clone());
        }
        // x = W c with U^t W c = 0
        let mut rows: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|u| within.basis.iter().map(|w| dot(u.as_slice(), w.as_slice())).collect())
            .collect();
        let coeffs = kernel_of_rows(&mut rows, within.dim());
        let vectors = coeffs.into_iter().map(|c| combine(&within.basis, &c, self.ambient_dim)).collect();
        Ok(Subspace::from_independent(self.ambient_dim, vectors))
    }

    /// Span of `m · b` over the basis vectors `b`.
    pub fn image(&self, m: &RMatrix) -> Result<Subspace> {
        if m.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                op: "image",
                left_rows: m.rows(),
                left_cols: m.cols(),
                right_rows: self.ambient_dim,
                right_cols: self.dim(),
            });
        }
        Subspace::span(
            m.rows(),
            self.basis.iter().map(|b| RMatrix::column_vector(m.apply(b.as_slice()))),
        )
    }

    /// `m` maps the subspace into itself.
    pub fn is_invariant_under(&self, m: &RMatrix) -> Result<bool> {
        Ok(self.first_escape(m)?.is_none())
    }

    fn first_escape(&self, m: &RMatrix) -> Result<Option<usize>> {
        if !m.is_square() || m.rows() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                op: "invariance",
                left_rows: m.rows(),
                left_cols: m.cols(),
                right_rows: self.ambient_dim,
                right_cols: self.dim(),
            });
        }
        let ech = self.echelon();
        Ok(self.basis.iter().position(|b| !ech.contains(&m.apply(b.as_slice()))))
    }

    /// Every basis vector of `self` is orthogonal to every basis vector of `other`.
    pub fn is_orthogonal_to(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self
            .basis
            .iter()
            .all(|u| other.basis.iter().all(|v| dot(u.as_slice(), v.as_slice()).is_zero())))
    }

    /// Coordinates of `v` in this basis, or `None` when `v` lies outside.
    pub fn coordinates(&self, v: &RMatrix) -> Result<Option<Vec<Rational>>> {
        let m = self.restricted_action(&RMatrixCols(vec![v.as_slice().to_vec()]))?;
        Ok(m.map(|c| c.into_iter().next().unwrap_or_default()))
    }

    /// Matrix of `g` restricted to this subspace, in the stored basis.
    pub fn restrict(&self, g: &RMatrix) -> Result<RMatrix> {
        self.restrict_indexed(g, 0)
    }

    fn restrict_indexed(&self, g: &RMatrix, generator: usize) -> Result<RMatrix> {
        if !g.is_square() || g.rows() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                op: "restrict",
                left_rows: g.rows(),
                left_cols: g.cols(),
                right_rows: self.ambient_dim,
                right_cols: self.dim(),
            });
        }
        let images = RMatrixCols(self.basis.iter().map(|b| g.apply(b.as_slice())).collect());
        let m = self.dim();
        match self.restricted_action(&images)? {
            Some(cols) => Ok(RMatrix::from_fn(m, m, |i, j| cols[j][i].clone())),
            None => {
                let index = self.first_escape(g)?.unwrap_or(0);
                Err(Error::NotInvariant { generator, index })
            }
        }
    }

    /// Solves `W c_k = v_k` for each target; `None` if some target lies outside.
    fn restricted_action(&self, targets: &RMatrixCols) -> Result<Option<Vec<Vec<Rational>>>> {
        let n = self.ambient_dim;
        let m = self.dim();
        let t = targets.0.len();
        for v in &targets.0 {
            if v.len() != n {
                return Err(Error::BadVector {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                self.basis
                    .iter()
                    .map(|b| b.as_slice()[i].clone())
                    .chain(targets.0.iter().map(|v| v[i].clone()))
                    .collect()
            })
            .collect();
        let pivots = row_reduce_limited(&mut rows, m + t, m);
        debug_assert_eq!(pivots.len(), m);
        if rows[m..].iter().any(|r| r[m..].iter().any(|x| !x.is_zero())) {
            return Ok(None);
        }
        Ok(Some((0..t).map(|k| (0..m).map(|i| rows[i][m + k].clone()).collect()).collect()))
    }
}

struct RMatrixCols(Vec<Vec<Rational>>);

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

fn combine(basis: &[RMatrix], coeffs: &[Rational], n: usize) -> RMatrix {
    let mut acc = vec![Rational::zero(); n];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (slot, x) in acc.iter_mut().zip(b.as_slice()) {
            if !x.is_zero() {
                *slot += c * x;
            }
        }
    }
    RMatrix::column_vector(acc)
}

/// Null space basis of the matrix given by `rows` (destroyed), one vector per free column.
fn kernel_of_rows(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let pivots = row_reduce(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&rows[i][f];
            }
            v
        })
        .collect()
}

/// Basis of the null space of `a`.
pub fn kernel(a: &RMatrix) -> Subspace {
    let mut rows = a.to_row_vecs();
    let vectors = kernel_of_rows(&mut rows, a.cols())
        .into_iter()
        .map(RMatrix::column_vector)
        .collect();
    Subspace::from_independent(a.cols(), vectors)
}

pub fn subspace_sum(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    u.sum(v)
}

pub fn subspace_intersect(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    u.intersect(v)
}

pub fn orth_complement_within(u: &Subspace, w: &Subspace) -> Result<Subspace> {
    u.orth_complement_within(w)
}

/// Dimension of the algebra of matrices commuting with every generator
/// restricted to `w`.
pub fn commutant_dim(generators: &[RMatrix], w: &Subspace) -> Result<usize> {
    let m = w.dim();
    let restricted = generators
        .iter()
        .enumerate()
        .map(|(k, g)| w.restrict_indexed(g, k))
        .collect::<Result<Vec<_>>>()?;
    let unknowns = m * m;
    if unknowns == 0 {
        return Ok(0);
    }
    // unknown (a, b) is Z[a][b]; equation (a, b): (Z G - G Z)[a][b] = 0
    let mut rows = Vec::with_capacity(restricted.len() * unknowns);
    for g in &restricted {
        for a in 0..m {
            for b in 0..m {
                let mut row = vec![Rational::zero(); unknowns];
                for c in 0..m {
                    row[a * m + c] += g.get(c, b);
                    row[c * m + b] -= g.get(a, c);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let rank = row_reduce(&mut rows, unknowns).len();
    Ok(unknowns - rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vec_q(v: &[i64]) -> RMatrix {
        RMatrix::column_vector(v.iter().map(|&x| Rational::from_integer(x)).collect())
    }

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::span(n, vs.iter().map(|v| vec_q(v))).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&RMatrix::identity(4)).dim(), 0);
        let k = kernel(&RMatrix::ones(3, 3));
        assert_eq!(k.dim(), 2);
        assert!(k.same_as(&span(3, &[&[1, -1, 0], &[1, 0, -1]])).unwrap());
        for b in k.basis() {
            assert!(RMatrix::ones(3, 3).apply(b.as_slice()).iter().all(Rational::is_zero));
        }
        for r in 3..7 {
            let a = &RMatrix::ones(r, r) - &RMatrix::identity(r);
            let shifted = &a - &RMatrix::identity(r).scale(&Rational::from(r - 1));
            let k = kernel(&shifted);
            assert_eq!(k.dim(), 1);
            assert!(k.contains_vector(&RMatrix::ones(r, 1)).unwrap());
        }
    }

    #[test]
    fn sum_and_intersection_examples() {
        let u = span(3, &[&[1, 2, 3], &[0, 1, 1]]);
        assert!(u.sum(&u).unwrap().same_as(&u).unwrap());
        assert_eq!(span(3, &[&[1, 0, 0]]).sum(&span(3, &[&[0, 1, 0]])).unwrap().dim(), 2);
        assert!(u.intersect(&Subspace::full(3)).unwrap().same_as(&u).unwrap());
        assert_eq!(span(3, &[&[1, 0, 0]]).intersect(&span(3, &[&[0, 1, 0]])).unwrap().dim(), 0);
        let v = span(3, &[&[1, 3, 4], &[0, 0, 1]]);
        let meet = u.intersect(&v).unwrap();
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains_vector(&vec_q(&[1, 3, 4])).unwrap());
        assert!(matches!(u.sum(&Subspace::zero(4)), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn complement_examples() {
        let w = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(Subspace::zero(3).orth_complement_within(&w).unwrap().same_as(&w).unwrap());
        let c = span(2, &[&[1, 1]]).orth_complement_within(&Subspace::full(2)).unwrap();
        assert!(c.same_as(&span(2, &[&[1, -1]])).unwrap());
        let err = span(3, &[&[0, 0, 1]]).orth_complement_within(&w).unwrap_err();
        assert_eq!(err, Error::NotContained { index: 0 });
    }

    #[test]
    fn restriction_and_commutant() {
        let n = 3;
        assert_eq!(commutant_dim(&[RMatrix::identity(n)], &Subspace::full(n)).unwrap(), 9);
        let w = span(3, &[&[1, 0, 0], &[0, 1, 1]]);
        let swap = RMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        assert_eq!(w.restrict(&swap).unwrap(), RMatrix::identity(2));
        let shift = RMatrix::from_i64_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        assert_eq!(
            commutant_dim(&[swap.clone(), shift.clone()], &w).unwrap_err(),
            Error::NotInvariant { generator: 1, index: 0 }
        );
        assert_eq!(w.coordinates(&vec_q(&[2, 3, 3])).unwrap().unwrap(), vec![Rational::from(2), Rational::from(3)]);
        assert!(w.coordinates(&vec_q(&[0, 1, 0])).unwrap().is_none());
    }

    fn vectors(n: usize, k: usize) -> impl Strategy<Value = Vec<RMatrix>> {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, n), k)
            .prop_map(|vs| vs.iter().map(|v| vec_q(v)).collect())
    }

    proptest! {
        #[test]
        fn modular_dimension_law(a in vectors(5, 3), b in vectors(5, 3)) {
            let u = Subspace::span(5, a).unwrap();
            let v = Subspace::span(5, b).unwrap();
            let s = u.sum(&v).unwrap();
            let i = u.intersect(&v).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
            prop_assert!(u.contains(&i).unwrap() && v.contains(&i).unwrap());
            prop_assert!(s.contains(&u).unwrap() && s.contains(&v).unwrap());
        }

        #[test]
        fn complement_is_orthogonal_and_fills(a in vectors(5, 2), b in vectors(5, 2)) {
            let u = Subspace::span(5, a).unwrap();
            let w = u.sum(&Subspace::span(5, b).unwrap()).unwrap();
            let c = u.orth_complement_within(&w).unwrap();
            prop_assert!(c.is_orthogonal_to(&u).unwrap());
            prop_assert_eq!(c.dim() + u.dim(), w.dim());
            prop_assert!(w.contains(&c).unwrap());
            prop_assert!(u.sum(&c).unwrap().same_as(&w).unwrap());
        }

        #[test]
        fn equality_is_an_equivalence(a in vectors(4, 2), b in vectors(4, 2), c in vectors(4, 2)) {
            let u = Subspace::span(4, a).unwrap();
            let v = Subspace::span(4, b).unwrap();
            let w = Subspace::span(4, c).unwrap();
            prop_assert!(u.same_as(&u).unwrap());
            prop_assert_eq!(u.same_as(&v).unwrap(), v.same_as(&u).unwrap());
            if u.same_as(&v).unwrap() && v.same_as(&w).unwrap() {
                prop_assert!(u.same_as(&w).unwrap());
            }
            // a re-spanned copy with scaled vectors is equal
            let scaled = Subspace::span(4, u.basis().iter().map(|x| x.scale(&Rational::new(-3, 2)))).unwrap();
            prop_assert!(u.same_as(&scaled).unwrap());
        }

        #[test]
        fn kernel_dimension_is_nullity(a in vectors(4, 3)) {
            let m = RMatrix::hstack(&a.iter().collect::<Vec<_>>()).unwrap().transpose();
            let k = kernel(&m);
            prop_assert_eq!(k.dim(), m.cols() - m.rank());
            for b in k.basis() {
                prop_assert!(m.apply(b.as_slice()).iter().all(Rational::is_zero));
            }
        }
    }
}
