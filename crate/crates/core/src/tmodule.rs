//! T-modules of `H(D, r)`: cyclic closures under `A` and `A*`, profiles,
//! irreducibility and the commutator eigenvalue pattern on irreducibles.

use std::collections::BTreeMap;

use crate::check::Checks;
use crate::commutator::CommutatorSpectrum;
use crate::error::{Error, Result};
use crate::hamming::HammingContext;
use crate::linalg::matrix::row_reduce;
use crate::linalg::subspace::Echelon;
use crate::linalg::{kernel, RMatrix, Rational, Subspace};
use crate::split::SplitDecomposition;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    pub endpoint: usize,
    pub dual_endpoint: usize,
    pub diameter: usize,
    pub dual_diameter: usize,
    /// `ρ + τ + d - D`; negative values only occur for reducible modules.
    pub displacement: i64,
    pub thin: bool,
    pub star_dims: Vec<usize>,
    pub flat_dims: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TModule {
    pub space: Subspace,
    pub profile: Profile,
    pub irreducible: bool,
    pub commutant_dim: usize,
}

impl TModule {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

#[derive(Debug, Clone)]
pub struct PatternCertificate {
    pub module: TModule,
    /// `dim F_s W` for `s = -D..=D`.
    pub f_dims: Vec<usize>,
    /// `dim ker(C|_W - (1-r)^s)` for `s = -D..=D`.
    pub restricted_dims: Vec<usize>,
    pub pass: bool,
}

impl PatternCertificate {
    /// `(d, dims of F_s W)`, equal for isomorphic modules.
    pub fn pattern(&self) -> (usize, Vec<usize>) {
        (self.module.profile.diameter, self.f_dims.clone())
    }
}

/// Expected `dim F_s W` for an irreducible module of diameter `d`.
pub fn expected_pattern(big_d: usize, d: usize) -> Vec<usize> {
    let big_d = big_d as i64;
    let d = d as i64;
    (-big_d..=big_d)
        .map(|s| usize::from(s.abs() <= d && (d - s).rem_euclid(2) == 0))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    pub eta: usize,
    pub harvested_dim: usize,
    pub v_eta_dim: usize,
}

#[derive(Debug, Clone)]
pub struct Survey {
    pub certificates: Vec<PatternCertificate>,
    pub coverage: Vec<Coverage>,
    pub seeds_tried: usize,
    pub checks: Checks,
}

impl Survey {
    pub fn patterns(&self) -> Vec<(usize, Vec<usize>)> {
        let mut p: Vec<_> = self.certificates.iter().map(PatternCertificate::pattern).collect();
        p.sort();
        p.dedup();
        p
    }
}

struct SparseOp(Vec<Vec<(usize, Rational)>>);

impl SparseOp {
    fn new(m: &RMatrix) -> Self {
        SparseOp(
            (0..m.rows())
                .map(|i| (0..m.cols()).filter(|&j| !m.get(i, j).is_zero()).map(|j| (j, m.get(i, j).clone())).collect())
                .collect(),
        )
    }

    fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.0
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(j, _)| !v[*j].is_zero())
                    .map(|(j, a)| a * &v[*j])
                    .sum()
            })
            .collect()
    }
}

/// The generators `A`, `A*` of one instance in a form suited to repeated closures.
pub struct TAction<'a> {
    ctx: &'a HammingContext,
    a: SparseOp,
    a_star: SparseOp,
    sphere: Vec<usize>,
    // vertex lists of the A* eigenspaces, one per distinct dual eigenvalue
    dual_groups: Vec<Vec<usize>>,
}

impl<'a> TAction<'a> {
    pub fn new(ctx: &'a HammingContext) -> Self {
        let n = ctx.num_vertices();
        let mut groups: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for y in 0..n {
            groups.entry(ctx.dual_adjacency().get(y, y).clone()).or_default().push(y);
        }
        TAction {
            ctx,
            a: SparseOp::new(ctx.adjacency()),
            a_star: SparseOp::new(ctx.dual_adjacency()),
            sphere: (0..n).map(|y| ctx.distance_from_base(y)).collect(),
            dual_groups: groups.into_values().collect(),
        }
    }

    fn n(&self) -> usize {
        self.ctx.num_vertices()
    }

    fn mask(&self, v: &[Rational], keep: impl Fn(usize) -> bool) -> Vec<Rational> {
        v.iter()
            .enumerate()
            .map(|(y, x)| if keep(y) { x.clone() } else { Rational::zero() })
            .collect()
    }

    /// Smallest subspace containing `v` and invariant under `A` and `A*`.
    pub fn closure(&self, v: &RMatrix) -> Result<Subspace> {
        let n = self.n();
        if v.shape() != (n, 1) {
            return Err(Error::BadVector {
                expected: n,
                found: v.rows() * v.cols(),
            });
        }
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut ech = Echelon::new(n);
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        ech.insert(v.as_slice());
        basis.push(v.as_slice().to_vec());
        let mut next = 0;
        while next < basis.len() {
            let w = basis[next].clone();
            for img in [self.a.apply(&w), self.a_star.apply(&w)] {
                if ech.insert(&img) {
                    basis.push(img);
                }
            }
            next += 1;
        }
        Ok(Subspace::from_independent(n, basis.into_iter().map(RMatrix::column_vector).collect()))
    }

    fn rank_of(&self, vectors: impl IntoIterator<Item = Vec<Rational>>) -> usize {
        let mut ech = Echelon::new(self.n());
        vectors.into_iter().filter(|v| ech.insert(v)).count()
    }

    pub fn profile(&self, space: &Subspace) -> Profile {
        let d = self.ctx.diameter();
        let star_dims: Vec<usize> = (0..=d)
            .map(|i| self.rank_of(space.basis().iter().map(|b| self.mask(b.as_slice(), |y| self.sphere[y] == i))))
            .collect();
        let flat_dims: Vec<usize> = self
            .ctx
            .idempotents
            .iter()
            .map(|e| self.rank_of(space.basis().iter().map(|b| e.apply(b.as_slice()))))
            .collect();
        let support = |dims: &[usize]| -> (usize, usize) {
            let first = dims.iter().position(|&k| k > 0).unwrap_or(0);
            let count = dims.iter().filter(|&&k| k > 0).count();
            (first, count.saturating_sub(1))
        };
        let (endpoint, diameter) = support(&star_dims);
        let (dual_endpoint, dual_diameter) = support(&flat_dims);
        Profile {
            endpoint,
            dual_endpoint,
            diameter,
            dual_diameter,
            displacement: (endpoint + dual_endpoint + diameter) as i64 - d as i64,
            thin: star_dims.iter().all(|&k| k <= 1),
            star_dims,
            flat_dims,
        }
    }

    /// Dimension of `{Z : Z A = A Z, Z A* = A* Z}` on `space`.
    ///
    /// `Z` commutes with `A*` iff it preserves each `A*`-eigenspace of `W`, so
    /// `Z` is solved for block diagonally in a basis adapted to those eigenspaces.
    pub fn commutant_dim(&self, space: &Subspace) -> Result<usize> {
        space.restrict(self.ctx.dual_adjacency()).map_err(|e| match e {
            Error::NotInvariant { index, .. } => Error::NotInvariant { generator: 1, index },
            e => e,
        })?;
        let mut adapted = Vec::new();
        let mut block = Vec::new();
        for (g, group) in self.dual_groups.iter().enumerate() {
            let mut ech = Echelon::new(self.n());
            for b in space.basis() {
                let mut keep = vec![false; self.n()];
                for &y in group {
                    keep[y] = true;
                }
                let v = self.mask(b.as_slice(), |y| keep[y]);
                if ech.insert(&v) {
                    adapted.push(RMatrix::column_vector(v));
                    block.push(g);
                }
            }
        }
        let m = adapted.len();
        debug_assert_eq!(m, space.dim());
        let adapted = Subspace::from_independent(self.n(), adapted);
        let g = adapted.restrict(self.ctx.adjacency())?;
        let mut index = vec![vec![None; m]; m];
        let mut unknowns = 0;
        for a in 0..m {
            for c in 0..m {
                if block[a] == block[c] {
                    index[a][c] = Some(unknowns);
                    unknowns += 1;
                }
            }
        }
        let mut rows = Vec::new();
        for a in 0..m {
            for b in 0..m {
                let mut row = vec![Rational::zero(); unknowns];
                for c in 0..m {
                    if let Some(k) = index[a][c] {
                        row[k] += g.get(c, b);
                    }
                    if let Some(k) = index[c][b] {
                        row[k] -= g.get(a, c);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        Ok(unknowns - row_reduce(&mut rows, unknowns).len())
    }

    pub fn module(&self, space: Subspace) -> Result<TModule> {
        let commutant_dim = self.commutant_dim(&space)?;
        Ok(TModule {
            profile: self.profile(&space),
            irreducible: commutant_dim == 1,
            commutant_dim,
            space,
        })
    }

    pub fn cyclic_module(&self, v: &RMatrix) -> Result<TModule> {
        self.module(self.closure(v)?)
    }

    pub fn primary_module(&self) -> Result<TModule> {
        let x = self.ctx.base_vector();
        let columns = self.ctx.distance.iter().map(|a| a.try_mul(&x)).collect::<Result<Vec<_>>>()?;
        let space = Subspace::span(self.n(), columns)?;
        self.module(space)
    }

    pub fn certify(&self, spec: &CommutatorSpectrum, w: &TModule) -> Result<PatternCertificate> {
        if !w.irreducible {
            return Err(Error::Reducible {
                commutant_dim: w.commutant_dim,
            });
        }
        let f_dims: Vec<usize> = spec
            .eigendata
            .iter()
            .map(|e| match spec.projection(e.s) {
                Some(f) => self.rank_of(w.space.basis().iter().map(|b| f.apply(b.as_slice()))),
                None => 0,
            })
            .collect();
        let c_w = w.space.restrict(&spec.c)?;
        let m = w.dim();
        let restricted_dims: Vec<usize> = spec
            .eigendata
            .iter()
            .map(|e| kernel(&(&c_w - &RMatrix::identity(m).scale(&e.eigenvalue))).dim())
            .collect();
        let expected = expected_pattern(self.ctx.diameter(), w.profile.diameter);
        let pass = !spec.projections.is_empty()
            && f_dims == expected
            && restricted_dims == expected
            && f_dims.iter().sum::<usize>() == m
            && m == w.profile.diameter + 1;
        Ok(PatternCertificate {
            module: w.clone(),
            f_dims,
            restricted_dims,
            pass,
        })
    }

    /// Pure tensors over `{x̂, 1, chain basis of e1 V}` in lexicographic slot order.
    pub fn pure_tensor_seeds(&self) -> Vec<RMatrix> {
        let kr = &self.ctx.kr;
        let mut choices = vec![kr.base_vector(), kr.ones_vector()];
        choices.extend(kr.e1_basis().basis().iter().cloned());
        let mut out = vec![RMatrix::identity(1)];
        for _ in 0..self.ctx.d {
            out = out.iter().flat_map(|t| choices.iter().map(move |c| t.kron(c))).collect();
        }
        out
    }

    /// Endpoint vectors sorted by diameter.
    ///
    /// For each `i`, `U_i = E*_i V ∩ ker(E*_{i-1} A)`; with `R_k = E*_{i+k} A ... E*_{i+1} A`
    /// the seeds of diameter `d` are a basis of the orthogonal complement of
    /// `U_i ∩ ker R_d` inside `U_i ∩ ker R_{d+1}`.
    pub fn endpoint_seeds(&self) -> Result<Vec<RMatrix>> {
        let n = self.n();
        let big_d = self.ctx.diameter();
        let sphere_vertices: Vec<Vec<usize>> =
            (0..=big_d).map(|i| (0..n).filter(|&y| self.sphere[y] == i).collect()).collect();
        let a = self.ctx.adjacency();
        let mut seeds = Vec::new();
        for i in 0..=big_d {
            let cols = &sphere_vertices[i];
            // coefficients over the sphere-i coordinates
            let lowering = if i == 0 {
                Subspace::full(cols.len())
            } else {
                let rows = &sphere_vertices[i - 1];
                kernel(&RMatrix::from_fn(rows.len(), cols.len(), |p, q| a.get(rows[p], cols[q]).clone()))
            };
            if lowering.is_zero() {
                continue;
            }
            let lift = |c: &RMatrix| {
                let mut v = vec![Rational::zero(); n];
                for (q, &y) in cols.iter().enumerate() {
                    v[y] = c.as_slice()[q].clone();
                }
                v
            };
            let u: Vec<Vec<Rational>> = lowering.basis().iter().map(lift).collect();
            // images R_k u for k = 0..=D-i, restricted to sphere i+k
            let mut images = vec![u.clone()];
            for k in 1..=big_d - i {
                let prev = &images[k - 1];
                images.push(
                    prev.iter()
                        .map(|v| self.mask(&self.a.apply(v), |y| self.sphere[y] == i + k))
                        .collect(),
                );
            }
            let in_u = |c: &RMatrix| {
                let mut v = vec![Rational::zero(); n];
                for (b, x) in u.iter().zip(c.as_slice()) {
                    if !x.is_zero() {
                        for (slot, y) in v.iter_mut().zip(b) {
                            if !y.is_zero() {
                                *slot += x * y;
                            }
                        }
                    }
                }
                RMatrix::column_vector(v)
            };
            let kernel_of_power = |k: usize| -> Result<Subspace> {
                if k == 0 {
                    return Ok(Subspace::zero(n));
                }
                if i + k > big_d {
                    return Subspace::span(n, u.iter().cloned().map(RMatrix::column_vector));
                }
                let m = RMatrix::from_fn(n, u.len(), |row, col| images[k][col][row].clone());
                Subspace::span(n, kernel(&m).basis().iter().map(in_u))
            };
            let mut lower = kernel_of_power(0)?;
            for d in 0..=big_d - i {
                let upper = kernel_of_power(d + 1)?;
                seeds.extend(lower.orth_complement_within(&upper)?.basis().iter().cloned());
                lower = upper;
            }
        }
        Ok(seeds)
    }

    /// Deterministic seed set: base vertex, pure tensors, their `E*_i` projections,
    /// then endpoint vectors.
    pub fn seeds(&self) -> Result<Vec<RMatrix>> {
        let mut seeds = vec![self.ctx.base_vector()];
        let pure = self.pure_tensor_seeds();
        for i in 0..=self.ctx.diameter() {
            for t in &pure {
                let v = RMatrix::column_vector(self.mask(t.as_slice(), |y| self.sphere[y] == i));
                if !v.is_zero() && &v != t {
                    seeds.push(v);
                }
            }
        }
        let mut all = Vec::with_capacity(seeds.len() + pure.len());
        all.push(seeds[0].clone());
        all.extend(pure);
        all.extend(seeds.into_iter().skip(1));
        all.extend(self.endpoint_seeds()?);
        Ok(all)
    }

    pub fn survey(&self, split: &SplitDecomposition<'_>, spec: &CommutatorSpectrum) -> Result<Survey> {
        let big_d = self.ctx.diameter();
        let n = self.n();
        let seeds = self.seeds()?;
        let mut harvested: Vec<TModule> = Vec::new();
        let mut rejected: Vec<Subspace> = Vec::new();
        for v in &seeds {
            let inside = harvested.iter().any(|w| w.space.contains_vector(v).unwrap_or(false));
            if inside {
                continue;
            }
            let space = self.closure(v)?;
            if rejected.iter().any(|s| s.same_as(&space).unwrap_or(false)) {
                continue;
            }
            let module = self.module(space)?;
            if module.irreducible {
                harvested.push(module);
            } else {
                rejected.push(module.space);
            }
        }

        let mut checks = Checks::new();
        let certificates = harvested
            .iter()
            .map(|w| self.certify(spec, w))
            .collect::<Result<Vec<_>>>()?;

        let primary = self.primary_module()?;
        let primary_ok = certificates.iter().any(|c| {
            c.module.space.same_as(&primary.space).unwrap_or(false) && c.pass && c.module.profile.diameter == big_d
        });
        checks.record("tmodule.primary_harvested", primary_ok);
        let primary_profile = &primary.profile;
        checks.record(
            "tmodule.primary_profile",
            primary.irreducible
                && primary.dim() == big_d + 1
                && primary_profile.thin
                && primary_profile.endpoint == 0
                && primary_profile.dual_endpoint == 0
                && primary_profile.diameter == big_d
                && primary_profile.displacement == 0,
        );

        let invariant = harvested.iter().all(|w| {
            w.space.is_invariant_under(self.ctx.adjacency()).unwrap_or(false)
                && w.space.is_invariant_under(self.ctx.dual_adjacency()).unwrap_or(false)
        });
        checks.record("tmodule.closed_under_generators", invariant);
        let failed: Vec<String> = certificates
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.pass)
            .map(|(k, c)| format!("module {k}: F_s dims {:?}", c.f_dims))
            .collect();
        checks.record_detail("tmodule.commutator_pattern", failed.is_empty(), failed.join("; "));
        let all = |f: &dyn Fn(&TModule) -> bool| harvested.iter().all(f);
        checks.record("tmodule.endpoint_equals_dual_endpoint", all(&|w| w.profile.endpoint == w.profile.dual_endpoint));
        checks.record("tmodule.diameter_equals_dual_diameter", all(&|w| w.profile.diameter == w.profile.dual_diameter));
        checks.record("tmodule.thin", all(&|w| w.profile.thin));
        checks.record(
            "tmodule.displacement_in_range",
            all(&|w| (0..=big_d as i64).contains(&w.profile.displacement)),
        );

        let v_eta: Vec<Subspace> = (0..=big_d).map(|e| split.v_eta_tensor(e)).collect::<Result<_>>()?;
        checks.record(
            "tmodule.inside_v_eta",
            all(&|w| {
                usize::try_from(w.profile.displacement)
                    .ok()
                    .and_then(|e| v_eta.get(e))
                    .is_some_and(|ve| ve.contains(&w.space).unwrap_or(false))
            }),
        );

        let mut orthogonal = true;
        for (p, w1) in harvested.iter().enumerate() {
            for w2 in &harvested[p + 1..] {
                if w1.profile != w2.profile {
                    orthogonal &= w1.space.is_orthogonal_to(&w2.space).unwrap_or(false);
                }
            }
        }
        checks.record("tmodule.non_isomorphic_orthogonal", orthogonal);

        let mut coverage = Vec::new();
        for (eta, ve) in v_eta.iter().enumerate() {
            let parts: Vec<&Subspace> = harvested
                .iter()
                .filter(|w| w.profile.displacement == eta as i64)
                .map(|w| &w.space)
                .collect();
            let sum = Subspace::sum_all(n, parts)?;
            coverage.push(Coverage {
                eta,
                harvested_dim: sum.dim(),
                v_eta_dim: ve.dim(),
            });
        }
        if coverage.iter().all(|c| c.harvested_dim == c.v_eta_dim) {
            checks.record("tmodule.v_eta_spanned", true);
        }

        Ok(Survey {
            certificates,
            coverage,
            seeds_tried: seeds.len(),
            checks,
        })
    }
}

pub fn cyclic_module(ctx: &HammingContext, v: &RMatrix) -> Result<TModule> {
    TAction::new(ctx).cyclic_module(v)
}

pub fn primary_module(ctx: &HammingContext) -> Result<TModule> {
    TAction::new(ctx).primary_module()
}

pub fn is_irreducible(ctx: &HammingContext, w: &TModule) -> Result<bool> {
    Ok(TAction::new(ctx).commutant_dim(&w.space)? == 1)
}

pub fn certify_pattern(ctx: &HammingContext, spec: &CommutatorSpectrum, w: &TModule) -> Result<PatternCertificate> {
    TAction::new(ctx).certify(spec, w)
}

pub fn seed_survey(ctx: &HammingContext, spec: &CommutatorSpectrum) -> Result<Survey> {
    TAction::new(ctx).survey(&SplitDecomposition::new(ctx), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutator::spectrum;
    use crate::hamming::build_hamming;
    use crate::linalg::commutant_dim;

    fn col(v: &[i64]) -> RMatrix {
        RMatrix::column_vector(v.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn primary_h23() {
        let ctx = build_hamming(2, 3).unwrap();
        let w = primary_module(&ctx).unwrap();
        assert_eq!(w.dim(), 3);
        assert_eq!(w.profile.star_dims, vec![1, 1, 1]);
        assert_eq!((w.profile.endpoint, w.profile.dual_endpoint, w.profile.displacement), (0, 0, 0));
        assert!(w.irreducible);
        let from_base = cyclic_module(&ctx, &ctx.base_vector()).unwrap();
        assert!(from_base.space.same_as(&w.space).unwrap());
    }

    #[test]
    fn k3_non_primary() {
        let ctx = build_hamming(1, 3).unwrap();
        let w = cyclic_module(&ctx, &col(&[0, 1, -1])).unwrap();
        assert_eq!(w.dim(), 1);
        assert_eq!((w.profile.endpoint, w.profile.diameter), (1, 0));
        assert!(w.irreducible);
        assert!(matches!(cyclic_module(&ctx, &col(&[0, 0, 0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn full_module_reducible() {
        let ctx = build_hamming(1, 3).unwrap();
        let action = TAction::new(&ctx);
        let full = action.module(Subspace::full(3)).unwrap();
        assert!(!full.irreducible);
        assert!(full.commutant_dim >= 2);
        let spec = spectrum(&ctx).unwrap();
        assert!(matches!(action.certify(&spec, &full), Err(Error::Reducible { .. })));
    }

    #[test]
    fn block_commutant_matches_generic() {
        let ctx = build_hamming(2, 3).unwrap();
        let action = TAction::new(&ctx);
        let gens = [ctx.adjacency().clone(), ctx.dual_adjacency().clone()];
        for v in action.pure_tensor_seeds().iter().chain(action.seeds().unwrap().iter()).take(30) {
            let w = action.closure(v).unwrap();
            assert_eq!(action.commutant_dim(&w).unwrap(), commutant_dim(&gens, &w).unwrap());
        }
        assert_eq!(action.commutant_dim(&Subspace::full(9)).unwrap(), commutant_dim(&gens, &Subspace::full(9)).unwrap());
    }

    #[test]
    fn not_invariant_is_reported() {
        let ctx = build_hamming(1, 3).unwrap();
        let action = TAction::new(&ctx);
        let s = Subspace::span(3, [col(&[1, 0, 0])]).unwrap();
        assert!(matches!(action.commutant_dim(&s), Err(Error::NotInvariant { generator: 0, .. })));
    }

    #[test]
    fn h23_seed_in_v_eta() {
        let ctx = build_hamming(2, 3).unwrap();
        let split = SplitDecomposition::new(&ctx);
        let kr = &ctx.kr;
        let v = kr.base_vector().kron(&col(&[0, 1, -1]));
        let w = cyclic_module(&ctx, &v).unwrap();
        let eta = usize::try_from(w.profile.displacement).unwrap();
        assert!(split.v_eta(eta).unwrap().contains(&w.space).unwrap());
    }

    #[test]
    fn pattern_primary_h23() {
        let ctx = build_hamming(2, 3).unwrap();
        let spec = spectrum(&ctx).unwrap();
        let w = primary_module(&ctx).unwrap();
        let cert = certify_pattern(&ctx, &spec, &w).unwrap();
        assert_eq!(cert.f_dims, vec![1, 0, 1, 0, 1]);
        assert!(cert.pass);
    }

    #[test]
    fn pattern_shape() {
        assert_eq!(expected_pattern(2, 0), vec![0, 0, 1, 0, 0]);
        assert_eq!(expected_pattern(2, 1), vec![0, 1, 0, 1, 0]);
        assert_eq!(expected_pattern(3, 3), vec![1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn survey_h13_two_patterns() {
        let ctx = build_hamming(1, 3).unwrap();
        let spec = spectrum(&ctx).unwrap();
        let survey = seed_survey(&ctx, &spec).unwrap();
        assert_eq!(survey.patterns(), vec![(0, vec![0, 1, 0]), (1, vec![1, 0, 1])]);
        assert!(survey.checks.all_pass(), "{:?}", survey.checks);
    }

    #[test]
    fn survey_h23() {
        let ctx = build_hamming(2, 3).unwrap();
        let spec = spectrum(&ctx).unwrap();
        let survey = seed_survey(&ctx, &spec).unwrap();
        let failed: Vec<_> = survey.checks.failures().collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert!(survey.checks.get("tmodule.v_eta_spanned").is_some());
        let d1: Vec<_> = survey.certificates.iter().filter(|c| c.module.profile.diameter == 1).collect();
        assert!(!d1.is_empty());
        assert!(d1.iter().all(|c| c.f_dims == vec![0, 1, 0, 1, 0]));
        for c in &survey.coverage {
            assert!(c.harvested_dim <= c.v_eta_dim);
        }
    }
}
