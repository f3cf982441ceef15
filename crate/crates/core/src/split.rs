//! Split decomposition of the standard module of `H(D, r)`.
//!
//! Two independent constructions are kept side by side:
//!
//! * the filtration route: `V_ij = (E*_0 V + ... + E*_i V) ∩ (E_0 V + ... + E_j V)`
//!   and `Ṽ_ij` as the orthogonal complement of `V_{i-1,j} + V_{i,j-1}` in `V_ij`;
//! * the tensor route: `Ṽ_ij` spanned by Kronecker products of per-slot bases,
//!   one slot per coordinate, each slot taken from `E0* V`, `E0 V` or `e1 V` of `K_r`.
//!
//! Agreement of the two is the main certificate produced here.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::check::Checks;
use crate::error::{Error, Result};
use crate::hamming::{binomial, HammingContext};
use crate::linalg::{RMatrix, Subspace};

/// Which `K_r` subspace a tensor slot draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    /// `E0* V = span{x̂}`
    Star,
    /// `E0 V = span{1}`
    Flat,
    /// `e1 V`
    E1,
}

/// A summand `V_1 ⊗ ... ⊗ V_D` of the expanded tensor power.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorPattern {
    pub slots: Vec<Slot>,
}

impl TensorPattern {
    fn count(&self, slot: Slot) -> usize {
        self.slots.iter().filter(|&&s| s == slot).count()
    }

    /// Number of `Star` slots.
    pub fn alpha(&self) -> usize {
        self.count(Slot::Star)
    }

    /// Number of `Flat` slots.
    pub fn beta(&self) -> usize {
        self.count(Slot::Flat)
    }

    /// Number of `E1` slots (the displacement).
    pub fn eta(&self) -> usize {
        self.count(Slot::E1)
    }

    /// All patterns of length `d` in lexicographic order.
    pub fn all(d: usize) -> Vec<TensorPattern> {
        let mut out = vec![TensorPattern { slots: Vec::new() }];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|p| {
                    [Slot::Star, Slot::Flat, Slot::E1].into_iter().map(move |s| {
                        let mut slots = p.slots.clone();
                        slots.push(s);
                        TensorPattern { slots }
                    })
                })
                .collect();
        }
        out
    }

    /// Patterns with exactly the given slot counts, lexicographic.
    pub fn with_counts(d: usize, alpha: usize, beta: usize, eta: usize) -> Vec<TensorPattern> {
        if alpha + beta + eta != d {
            return Vec::new();
        }
        Self::all(d)
            .into_iter()
            .filter(|p| p.alpha() == alpha && p.beta() == beta && p.eta() == eta)
            .collect()
    }

    /// Kronecker products of the per-slot basis vectors.
    pub fn basis_tensors(&self, ctx: &HammingContext) -> Vec<RMatrix> {
        let e1 = ctx.kr.e1_basis();
        let x = ctx.kr.base_vector();
        let one = ctx.kr.ones_vector();
        let mut out = vec![RMatrix::identity(1)];
        for slot in &self.slots {
            let choices: Vec<&RMatrix> = match slot {
                Slot::Star => vec![&x],
                Slot::Flat => vec![&one],
                Slot::E1 => e1.basis().iter().collect(),
            };
            out = out.iter().flat_map(|t| choices.iter().map(move |c| t.kron(c))).collect();
        }
        out
    }
}

impl fmt::Display for TensorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.slots {
            let c = match s {
                Slot::Star => '*',
                Slot::Flat => 'o',
                Slot::E1 => 'e',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `dim Ṽ_ij = C(D,i) C(i,D-j) (r-2)^(i+j-D)` for `i + j >= D`, else 0.
pub fn cell_dimension(d: u32, r: u32, i: u32, j: u32) -> BigUint {
    if i > d || j > d || i + j < d {
        return BigUint::from(0u32);
    }
    binomial(d as u64, i as u64) * binomial(i as u64, (d - j) as u64) * BigUint::from(r - 2).pow(i + j - d)
}

#[derive(Debug, Clone)]
pub struct SplitCell {
    pub i: usize,
    pub j: usize,
    pub space: Subspace,
    pub predicted_dim: usize,
}

/// Memoised split decomposition of one Hamming instance.
pub struct SplitDecomposition<'a> {
    ctx: &'a HammingContext,
    star_sums: Vec<OnceLock<Subspace>>,
    flat_sums: Vec<OnceLock<Subspace>>,
    vij: Vec<OnceLock<Subspace>>,
    tilde: Vec<OnceLock<Result<Subspace>>>,
}

impl<'a> SplitDecomposition<'a> {
    pub fn new(ctx: &'a HammingContext) -> Self {
        let m = ctx.diameter() + 1;
        SplitDecomposition {
            ctx,
            star_sums: (0..m).map(|_| OnceLock::new()).collect(),
            flat_sums: (0..m).map(|_| OnceLock::new()).collect(),
            vij: (0..m * m).map(|_| OnceLock::new()).collect(),
            tilde: (0..m * m).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn context(&self) -> &'a HammingContext {
        self.ctx
    }

    fn d(&self) -> usize {
        self.ctx.diameter()
    }

    fn check_index(&self, what: &'static str, v: i64, min: i64) -> Result<()> {
        if v < min || v > self.d() as i64 {
            return Err(Error::OutOfRange {
                what,
                index: v,
                min,
                max: self.d() as i64,
            });
        }
        Ok(())
    }

    /// `E*_0 V + ... + E*_i V`
    pub fn star_partial_sum(&self, i: usize) -> &Subspace {
        self.star_sums[i].get_or_init(|| {
            let n = self.ctx.num_vertices();
            let sum = self.ctx.dual_idempotents[..=i].iter().fold(RMatrix::zeros(n, n), |acc, m| &acc + m);
            Subspace::column_space(&sum)
        })
    }

    /// `E_0 V + ... + E_j V`
    pub fn flat_partial_sum(&self, j: usize) -> &Subspace {
        self.flat_sums[j].get_or_init(|| {
            let n = self.ctx.num_vertices();
            let sum = self.ctx.idempotents[..=j].iter().fold(RMatrix::zeros(n, n), |acc, m| &acc + m);
            Subspace::column_space(&sum)
        })
    }

    /// `V_ij` for `-1 <= i, j <= D` by exact intersection.
    pub fn vij(&self, i: i64, j: i64) -> Result<Subspace> {
        self.check_index("i", i, -1)?;
        self.check_index("j", j, -1)?;
        if i < 0 || j < 0 {
            return Ok(Subspace::zero(self.ctx.num_vertices()));
        }
        Ok(self.vij_ref(i as usize, j as usize).clone())
    }

    fn vij_ref(&self, i: usize, j: usize) -> &Subspace {
        let m = self.d() + 1;
        self.vij[i * m + j].get_or_init(|| {
            self.star_partial_sum(i)
                .intersect(self.flat_partial_sum(j))
                .expect("same ambient dimension")
        })
    }

    /// `Ṽ_ij` by orthogonal complement inside `V_ij`.
    pub fn vij_tilde(&self, i: usize, j: usize) -> Result<SplitCell> {
        self.check_index("i", i as i64, 0)?;
        self.check_index("j", j as i64, 0)?;
        let m = self.d() + 1;
        let space = self.tilde[i * m + j]
            .get_or_init(|| {
                let below = self.vij(i as i64 - 1, j as i64)?.sum(&self.vij(i as i64, j as i64 - 1)?)?;
                below.orth_complement_within(self.vij_ref(i, j))
            })
            .clone()?;
        Ok(SplitCell {
            i,
            j,
            space,
            predicted_dim: self.predicted_cell_dim(i, j),
        })
    }

    pub fn predicted_cell_dim(&self, i: usize, j: usize) -> usize {
        cell_dimension(self.ctx.d, self.ctx.r, i as u32, j as u32)
            .to_usize()
            .expect("cell dimension bounded by r^D")
    }

    /// `Ṽ_ij` from the tensor summands with `α = D-i`, `β = D-j`, `η = i+j-D`.
    pub fn vij_tilde_tensor(&self, i: usize, j: usize) -> Result<Subspace> {
        self.check_index("i", i as i64, 0)?;
        self.check_index("j", j as i64, 0)?;
        let d = self.d();
        let n = self.ctx.num_vertices();
        if i + j < d {
            return Ok(Subspace::zero(n));
        }
        let vectors = TensorPattern::with_counts(d, d - i, d - j, i + j - d)
            .into_iter()
            .flat_map(|p| p.basis_tensors(self.ctx));
        Subspace::span(n, vectors)
    }

    /// `V_η` as the sum of `Ṽ_ij` over `i + j = η + D` (filtration route).
    pub fn v_eta(&self, eta: usize) -> Result<Subspace> {
        self.check_index("eta", eta as i64, 0)?;
        let d = self.d();
        let cells = (0..=d)
            .filter_map(|i| (eta + d).checked_sub(i).filter(|&j| j <= d).map(|j| (i, j)))
            .map(|(i, j)| self.vij_tilde(i, j).map(|c| c.space))
            .collect::<Result<Vec<_>>>()?;
        Subspace::sum_all(self.ctx.num_vertices(), &cells)
    }

    /// `V_η` as the sum of tensor summands with displacement `η`.
    pub fn v_eta_tensor(&self, eta: usize) -> Result<Subspace> {
        self.check_index("eta", eta as i64, 0)?;
        let d = self.d();
        let vectors = TensorPattern::all(d)
            .into_iter()
            .filter(|p| p.eta() == eta)
            .flat_map(|p| p.basis_tensors(self.ctx));
        Subspace::span(self.ctx.num_vertices(), vectors)
    }
}

/// All split-decomposition certificates for one instance.
pub fn verify_split(split: &SplitDecomposition<'_>) -> Checks {
    let ctx = split.context();
    let d = ctx.diameter();
    let n = ctx.num_vertices();
    let mut checks = Checks::new();
    let mut total = 0usize;
    let mut tensor_ok = true;
    let mut dims_ok = true;
    let mut monotone_ok = true;
    let mut meet_ok = true;
    let mut mismatches = Vec::new();

    let etas: Vec<Result<Subspace>> = (0..=d).map(|e| split.v_eta_tensor(e)).collect();

    for i in 0..=d {
        for j in 0..=d {
            let cell = match split.vij_tilde(i, j) {
                Ok(c) => c,
                Err(e) => {
                    checks.record_detail(format!("split.cell_{i}_{j}"), false, e.to_string());
                    tensor_ok = false;
                    continue;
                }
            };
            total += cell.space.dim();
            if cell.space.dim() != cell.predicted_dim {
                dims_ok = false;
                mismatches.push(format!("dim Ṽ_{i}{j} = {} expected {}", cell.space.dim(), cell.predicted_dim));
            }
            let tensor = split.vij_tilde_tensor(i, j);
            let same = tensor
                .as_ref()
                .map(|t| t.same_as(&cell.space).unwrap_or(false))
                .unwrap_or(false);
            if !same {
                tensor_ok = false;
                mismatches.push(format!("Ṽ_{i}{j} differs from its tensor description"));
            }
            let below = split
                .vij(i as i64 - 1, j as i64)
                .and_then(|a| a.sum(&split.vij(i as i64, j as i64 - 1)?));
            let vij = split.vij(i as i64, j as i64);
            monotone_ok &= match (&below, &vij) {
                (Ok(b), Ok(v)) => v.contains(b).unwrap_or(false),
                _ => false,
            };
            if i + j >= d {
                let eta = i + j - d;
                meet_ok &= match (&vij, &etas[eta]) {
                    (Ok(v), Ok(e)) => v.intersect(e).and_then(|m| m.same_as(&cell.space)).unwrap_or(false),
                    _ => false,
                };
            } else {
                meet_ok &= cell.space.is_zero();
            }
        }
    }
    let detail = if mismatches.is_empty() { String::new() } else { mismatches.join("; ") };
    checks.record_detail("split.tensor_equals_filtration", tensor_ok, detail.clone());
    checks.record_detail("split.cell_dimensions", dims_ok, detail);
    checks.record_detail("split.complete", total == n, format!("sum of cell dims {total}, |X| = {n}"));
    checks.record("split.monotone_filtration", monotone_ok);
    checks.record("split.cell_is_vij_meet_veta", meet_ok);

    let mut eta_ok = true;
    let mut eta_dims = 0;
    for (eta, tensor) in etas.iter().enumerate() {
        match (split.v_eta(eta), tensor) {
            (Ok(a), Ok(b)) => {
                eta_dims += a.dim();
                eta_ok &= a.same_as(b).unwrap_or(false);
            }
            _ => eta_ok = false,
        }
    }
    checks.record("split.v_eta_two_routes", eta_ok && eta_dims == n);
    let orth = (0..=d).all(|a| {
        (a + 1..=d).all(|b| match (&etas[a], &etas[b]) {
            (Ok(x), Ok(y)) => x.is_orthogonal_to(y).unwrap_or(false),
            _ => false,
        })
    });
    checks.record("split.v_eta_orthogonal", orth);
    checks
}

/// `f_1 ⊗ f_2 ⊗ ... ⊗ f_k`
pub fn pure_tensor(factors: &[RMatrix]) -> RMatrix {
    factors.iter().fold(RMatrix::identity(1), |acc, f| acc.kron(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamming::build_hamming;
    use crate::linalg::Rational;

    #[test]
    fn pattern_enumeration() {
        let all = TensorPattern::all(2);
        assert_eq!(all.len(), 9);
        assert_eq!(all[0].to_string(), "**");
        assert_eq!(all[8].to_string(), "ee");
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for p in &all {
            assert_eq!(p.alpha() + p.beta() + p.eta(), 2);
        }
        assert_eq!(TensorPattern::with_counts(3, 1, 1, 1).len(), 6);
        assert!(TensorPattern::with_counts(3, 1, 1, 0).is_empty());
    }

    #[test]
    fn cell_formula() {
        assert_eq!(cell_dimension(2, 3, 2, 2), BigUint::from(1u32));
        assert_eq!(cell_dimension(2, 3, 0, 1), BigUint::from(0u32));
        assert_eq!(cell_dimension(2, 4, 1, 2), BigUint::from(4u32));
        // η = 0 cells: Σ_i C(D,i) = 2^D
        for d in 1..8u32 {
            let s: BigUint = (0..=d).map(|i| cell_dimension(d, 5, i, d - i)).sum();
            assert_eq!(s, BigUint::from(2u32).pow(d));
        }
    }

    #[test]
    fn vij_boundaries() {
        let ctx = build_hamming(2, 3).unwrap();
        let split = SplitDecomposition::new(&ctx);
        assert_eq!(split.vij(2, 2).unwrap().dim(), 9);
        assert_eq!(split.vij(-1, 1).unwrap().dim(), 0);
        assert_eq!(split.vij(1, -1).unwrap().dim(), 0);
        assert!(matches!(split.vij(3, 0), Err(Error::OutOfRange { .. })));
        assert!(matches!(split.vij(-2, 0), Err(Error::OutOfRange { .. })));
    }

    /// Independent oracle for V_11 of H(2,3): vectors supported within distance 1
    /// of the base vertex that are killed by E_2, solved as one linear system.
    #[test]
    fn vij_h23_oracle() {
        let ctx = build_hamming(2, 3).unwrap();
        let split = SplitDecomposition::new(&ctx);
        let near: Vec<usize> = (0..9).filter(|&v| ctx.distance_from_base(v) <= 1).collect();
        assert_eq!(near.len(), 5);
        // x supported on `near`, E_2 x = 0
        let e2 = &ctx.idempotents[2];
        let restricted = RMatrix::from_fn(9, near.len(), |a, b| e2.get(a, near[b]).clone());
        let k = crate::linalg::kernel(&restricted);
        let oracle = Subspace::span(
            9,
            k.basis().iter().map(|c| {
                let mut v = vec![Rational::zero(); 9];
                for (b, &y) in near.iter().enumerate() {
                    v[y] = c.as_slice()[b].clone();
                }
                RMatrix::column_vector(v)
            }),
        )
        .unwrap();
        let v11 = split.vij(1, 1).unwrap();
        assert_eq!(oracle.dim(), 2);
        assert_eq!(v11.dim(), 2);
        assert!(v11.same_as(&oracle).unwrap());
    }

    #[test]
    fn cell_examples() {
        let ctx = build_hamming(2, 3).unwrap();
        let split = SplitDecomposition::new(&ctx);
        assert_eq!(split.vij_tilde(2, 2).unwrap().space.dim(), 1);
        assert_eq!(split.vij_tilde(0, 1).unwrap().space.dim(), 0);
        let t = split.vij_tilde_tensor(1, 1).unwrap();
        assert!(t.same_as(&split.vij_tilde(1, 1).unwrap().space).unwrap());
        assert_eq!(split.v_eta(2).unwrap().dim(), 1);
        assert_eq!(split.v_eta(0).unwrap().dim(), 4);
        assert!(matches!(split.v_eta(3), Err(Error::OutOfRange { .. })));

        let ctx = build_hamming(2, 4).unwrap();
        let split = SplitDecomposition::new(&ctx);
        let c = split.vij_tilde(1, 2).unwrap();
        assert_eq!((c.space.dim(), c.predicted_dim), (4, 4));
    }

    #[test]
    fn tensor_extremes() {
        let ctx = build_hamming(3, 4).unwrap();
        let split = SplitDecomposition::new(&ctx);
        assert_eq!(split.vij_tilde_tensor(3, 3).unwrap().dim(), 8);
        let corner = split.vij_tilde_tensor(0, 3).unwrap();
        assert_eq!(corner.dim(), 1);
        assert!(corner.contains_vector(&ctx.base_vector()).unwrap());
        assert!(split.vij_tilde_tensor(0, 2).unwrap().is_zero());
    }

    #[test]
    fn certificates_small_grid() {
        for (d, r) in [(1, 3), (2, 3), (1, 5)] {
            let ctx = build_hamming(d, r).unwrap();
            let split = SplitDecomposition::new(&ctx);
            let checks = verify_split(&split);
            let failed: Vec<_> = checks.failures().collect();
            assert!(failed.is_empty(), "H({d},{r}): {failed:?}");
        }
    }
}
