//! The group commutator `C = A_D^{-1} A_D*^{-1} A_D A_D*` and its spectrum.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::check::Checks;
use crate::error::{Error, Result};
use crate::hamming::HammingContext;
use crate::linalg::{kernel, RMatrix, Rational, Subspace};
use crate::split::{cell_dimension, SplitDecomposition};

/// `C` from the inverses of the `r^D`-sized last distance matrices.
pub fn commutator_direct(ctx: &HammingContext) -> Result<RMatrix> {
    let (a_inv, s_inv) = ctx.last_inverses();
    let (a_inv, s_inv) = (a_inv?, s_inv?);
    let left = a_inv.try_mul(&s_inv)?;
    left.try_mul(ctx.last_distance())?.try_mul(ctx.last_dual_distance())
}

/// `C` as the `D`-fold Kronecker power of the `K_r` commutator.
pub fn commutator_kron(ctx: &HammingContext) -> Result<RMatrix> {
    Ok(ctx.kr.commutator()?.kron_power(ctx.d))
}

/// Both constructions, compared entrywise.
pub fn build_commutator(ctx: &HammingContext) -> Result<RMatrix> {
    let direct = commutator_direct(ctx)?;
    let kron = commutator_kron(ctx)?;
    if direct != kron {
        return Err(Error::Inconsistent(format!(
            "H({},{}): direct and Kronecker-power commutators differ",
            ctx.d, ctx.r
        )));
    }
    Ok(direct)
}

/// `Σ_{i+j>=D, j-i=s} C(D,i) C(i,D-j) (r-2)^(i+j-D)`
pub fn predicted_dimension(d: u32, r: u32, s: i64) -> Result<BigUint> {
    if s.unsigned_abs() > d as u64 {
        return Err(Error::OutOfRange {
            what: "s",
            index: s,
            min: -(d as i64),
            max: d as i64,
        });
    }
    Ok((0..=d)
        .filter_map(|i| {
            let j = i as i64 + s;
            (0..=d as i64).contains(&j).then(|| cell_dimension(d, r, i, j as u32))
        })
        .fold(BigUint::zero(), |acc, x| acc + x))
}

/// `(1-r)^s`
pub fn eigenvalue(r: u32, s: i64) -> Rational {
    Rational::from_integer(1 - r as i64).pow(s as i32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenRow {
    pub s: i64,
    pub eigenvalue: Rational,
    pub predicted_dim: BigUint,
    pub computed_dim: Option<usize>,
}

/// Formula-only eigentable; no matrices are built.
pub fn eigentable(d: u32, r: u32) -> Vec<EigenRow> {
    (-(d as i64)..=d as i64)
        .map(|s| EigenRow {
            s,
            eigenvalue: eigenvalue(r, s),
            predicted_dim: predicted_dimension(d, r, s).expect("s in range"),
            computed_dim: None,
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct EigenSlot {
    pub s: i64,
    pub eigenvalue: Rational,
    pub eigenspace: Subspace,
    pub predicted_dim: usize,
    pub computed_dim: usize,
}

#[derive(Debug, Clone)]
pub struct CommutatorSpectrum {
    pub c: RMatrix,
    /// Ordered by `s` from `-D` to `D`.
    pub eigendata: Vec<EigenSlot>,
    /// `F_s` in the same order; empty when `C` is not diagonalizable.
    pub projections: Vec<RMatrix>,
    pub checks: Checks,
}

impl CommutatorSpectrum {
    fn index(&self, s: i64) -> Option<usize> {
        let d = (self.eigendata.len() / 2) as i64;
        (s.abs() <= d).then(|| (s + d) as usize)
    }

    pub fn slot(&self, s: i64) -> Option<&EigenSlot> {
        self.index(s).map(|k| &self.eigendata[k])
    }

    pub fn projection(&self, s: i64) -> Option<&RMatrix> {
        self.index(s).and_then(|k| self.projections.get(k))
    }

    pub fn table(&self) -> Vec<EigenRow> {
        self.eigendata
            .iter()
            .map(|e| EigenRow {
                s: e.s,
                eigenvalue: e.eigenvalue.clone(),
                predicted_dim: BigUint::from(e.predicted_dim),
                computed_dim: Some(e.computed_dim),
            })
            .collect()
    }
}

pub fn spectrum(ctx: &HammingContext) -> Result<CommutatorSpectrum> {
    spectrum_with(&SplitDecomposition::new(ctx))
}

/// Spectrum sharing a split-decomposition cache with other suites.
pub fn spectrum_with(split: &SplitDecomposition<'_>) -> Result<CommutatorSpectrum> {
    let ctx = split.context();
    let n = ctx.num_vertices();
    let d = ctx.d as i64;
    let mut checks = Checks::new();

    let direct = commutator_direct(ctx)?;
    let kron = commutator_kron(ctx)?;
    let agree = direct == kron;
    checks.record("commutator.direct_equals_kron", agree);
    if !agree {
        return Err(Error::Inconsistent(format!(
            "H({},{}): direct and Kronecker-power commutators differ",
            ctx.d, ctx.r
        )));
    }
    let c = direct;
    let id = RMatrix::identity(n);

    let mut eigendata = Vec::new();
    let mut bad_dims = Vec::new();
    let mut bad_spaces = Vec::new();
    for s in -d..=d {
        let theta = eigenvalue(ctx.r, s);
        let eigenspace = kernel(&c.try_sub(&id.scale(&theta))?);
        let predicted_dim = predicted_dimension(ctx.d, ctx.r, s)?
            .to_usize()
            .expect("bounded by r^D");
        let computed_dim = eigenspace.dim();
        if computed_dim != predicted_dim {
            bad_dims.push(s);
        }
        let cells = (0..=ctx.diameter())
            .filter_map(|i| {
                let j = i as i64 + s;
                (0..=d).contains(&j).then(|| split.vij_tilde(i, j as usize).map(|c| c.space))
            })
            .collect::<Result<Vec<_>>>()?;
        if !Subspace::sum_all(n, &cells)?.same_as(&eigenspace)? {
            bad_spaces.push(s);
        }
        eigendata.push(EigenSlot {
            s,
            eigenvalue: theta,
            eigenspace,
            predicted_dim,
            computed_dim,
        });
    }
    let total: usize = eigendata.iter().map(|e| e.computed_dim).sum();
    let diagonalizable = total == n;
    checks.record_detail(
        "commutator.diagonalizable",
        diagonalizable,
        format!("sum of eigenspace dims {total}, |X| = {n}"),
    );
    checks.record_detail("commutator.eigenspace_dims", bad_dims.is_empty(), offending(&bad_dims));
    checks.record_detail("commutator.eigenspace_is_cell_sum", bad_spaces.is_empty(), offending(&bad_spaces));
    let action = cell_action_failures(split, &c)?;
    checks.record_detail("commutator.cell_action", action.is_empty(), action.join("; "));

    let projections = if diagonalizable { projections(&eigendata, n)? } else { Vec::new() };
    let have = !projections.is_empty();
    let mut idem = have;
    for (a, fa) in projections.iter().enumerate() {
        for (b, fb) in projections.iter().enumerate() {
            let prod = fa.try_mul(fb)?;
            idem &= if a == b { &prod == fa } else { prod.is_zero() };
        }
    }
    checks.record("commutator.projections_orthogonal_idempotent", idem);
    let sum = projections.iter().fold(RMatrix::zeros(n, n), |acc, f| &acc + f);
    checks.record("commutator.projections_sum_to_identity", have && sum.is_identity());
    let recon = projections
        .iter()
        .zip(&eigendata)
        .fold(RMatrix::zeros(n, n), |acc, (f, e)| &acc + &f.scale(&e.eigenvalue));
    checks.record("commutator.spectral_resolution", have && recon == c);
    let commute = projections
        .iter()
        .map(|f| Ok(f.try_mul(&c)? == c.try_mul(f)?))
        .collect::<Result<Vec<bool>>>()?;
    checks.record("commutator.projections_commute", have && commute.iter().all(|&b| b));

    Ok(CommutatorSpectrum {
        c,
        eigendata,
        projections,
        checks,
    })
}

fn offending(s: &[i64]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("offending s: {s:?}")
    }
}

/// `C v = (1-r)^(j-i) v` for every tensor basis vector `v` of `Ṽ_ij`.
fn cell_action_failures(split: &SplitDecomposition<'_>, c: &RMatrix) -> Result<Vec<String>> {
    let ctx = split.context();
    let d = ctx.diameter();
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=d {
            let theta = eigenvalue(ctx.r, j as i64 - i as i64);
            let cell = split.vij_tilde_tensor(i, j)?;
            for (k, v) in cell.basis().iter().enumerate() {
                if c.try_mul(v)? != v.scale(&theta) {
                    out.push(format!("Ṽ_{i}{j} vector {k}"));
                }
            }
        }
    }
    Ok(out)
}

/// `F_s = P_s Q_s` where `P = [P_{-D} | ... | P_D]` and `Q = P^{-1}` split by rows.
fn projections(eigendata: &[EigenSlot], n: usize) -> Result<Vec<RMatrix>> {
    let blocks: Vec<RMatrix> = eigendata.iter().map(|e| e.eigenspace.basis_matrix()).collect();
    let refs: Vec<&RMatrix> = blocks.iter().collect();
    let p = RMatrix::hstack(&refs)?;
    let q = p.inverse()?;
    let mut start = 0;
    let mut out = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let k = b.cols();
        if k == 0 {
            out.push(RMatrix::zeros(n, n));
            continue;
        }
        let rows = RMatrix::from_fn(k, n, |a, col| q.get(start + a, col).clone());
        out.push(b.try_mul(&rows)?);
        start += k;
    }
    Ok(out)
}
