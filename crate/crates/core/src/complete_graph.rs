//! The complete graph `K_r` and its subconstituent algebra with respect to
//! vertex 0.
//!
//! Everything here is small (`r x r`), so identities are checked by direct
//! multiplication. The base vertex `x` is index 0 and the remaining vertices
//! `y_1, ..., y_{r-1}` follow in index order.

use crate::check::Checks;
use crate::error::{Error, Result};
use crate::linalg::{kernel, RMatrix, Rational, Subspace};

/// All `K_r` objects, `r x r`, built once and never mutated.
#[derive(Debug, Clone)]
pub struct KrContext {
    pub r: u32,
    /// `A = J - I`
    pub adjacency: RMatrix,
    /// `A* = (r-1) E0* - E1*`
    pub dual_adjacency: RMatrix,
    /// `E0 = J / r`
    pub idempotent0: RMatrix,
    /// `E1 = I - E0`
    pub idempotent1: RMatrix,
    pub dual_idempotent0: RMatrix,
    pub dual_idempotent1: RMatrix,
    /// `e0`, projection onto the primary module.
    pub primary_projection: RMatrix,
    /// `e1 = I - e0`
    pub nonprimary_projection: RMatrix,
}

#[derive(Debug, Clone)]
pub struct KrVerificationReport {
    pub r: u32,
    pub checks: Checks,
    pub dim_t: usize,
    /// `(eigenvalue, eigenspace dimension)` in the order `1-r`, `1/(1-r)`, `1`.
    pub commutator_eigendata: Vec<(Rational, usize)>,
}

impl KrVerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.all_pass()
    }
}

pub fn build_kr(r: u32) -> Result<KrContext> {
    if r < 3 {
        return Err(Error::InvalidR { r });
    }
    let n = r as usize;
    let rq = Rational::from(n);
    let id = RMatrix::identity(n);
    let idempotent0 = RMatrix::ones(n, n).scale(&rq.recip());
    let idempotent1 = &id - &idempotent0;
    let adjacency = &RMatrix::ones(n, n) - &id;
    let dual_idempotent0 = RMatrix::from_fn(n, n, |i, j| Rational::from(usize::from(i == 0 && j == 0)));
    let dual_idempotent1 = &id - &dual_idempotent0;
    let dual_adjacency = &dual_idempotent0.scale(&Rational::from(n - 1)) - &dual_idempotent1;
    let off = Rational::new(1, r as i64 - 1);
    let primary_projection = RMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => Rational::one(),
        (0, _) | (_, 0) => Rational::zero(),
        _ => off.clone(),
    });
    let nonprimary_projection = &id - &primary_projection;
    Ok(KrContext {
        r,
        adjacency,
        dual_adjacency,
        idempotent0,
        idempotent1,
        dual_idempotent0,
        dual_idempotent1,
        primary_projection,
        nonprimary_projection,
    })
}

impl KrContext {
    pub fn size(&self) -> usize {
        self.r as usize
    }

    /// `x̂`, the indicator of the base vertex.
    pub fn base_vector(&self) -> RMatrix {
        RMatrix::unit_vector(self.size(), 0)
    }

    /// The all-ones vector `1`.
    pub fn ones_vector(&self) -> RMatrix {
        RMatrix::ones(self.size(), 1)
    }

    /// `E0 V = span{1}`
    pub fn flat_space(&self) -> Subspace {
        Subspace::span(self.size(), [self.ones_vector()]).expect("length r")
    }

    /// `E0* V = span{x̂}`
    pub fn star_space(&self) -> Subspace {
        Subspace::span(self.size(), [self.base_vector()]).expect("length r")
    }

    /// `e0 V = span{x̂, 1}`
    pub fn primary_space(&self) -> Subspace {
        Subspace::span(self.size(), [self.base_vector(), self.ones_vector()]).expect("length r")
    }

    /// The chain basis `ŷ_k - ŷ_{k+1}` (`1 <= k <= r-2`) of `e1 V`.
    pub fn e1_basis(&self) -> Subspace {
        let n = self.size();
        let vectors = (1..n - 1)
            .map(|k| RMatrix::from_fn(n, 1, |i, _| {
                if i == k {
                    Rational::one()
                } else if i == k + 1 {
                    Rational::from_integer(-1)
                } else {
                    Rational::zero()
                }
            }))
            .collect();
        Subspace::from_independent(n, vectors)
    }

    /// `A^{-1} A*^{-1} A A*` for `K_r`.
    pub fn commutator(&self) -> Result<RMatrix> {
        let a_inv = self.adjacency.inverse()?;
        let s_inv = self.dual_adjacency.inverse()?;
        Ok(&(&(&a_inv * &s_inv) * &self.adjacency) * &self.dual_adjacency)
    }

    /// `1 - r`
    pub fn commutator_base(&self) -> Rational {
        Rational::from_integer(1 - self.r as i64)
    }
}

/// The `e1 V` chain basis of `K_r`.
pub fn e1_basis(ctx: &KrContext) -> Subspace {
    ctx.e1_basis()
}

/// Matrices of `A` and `A*` on the basis `(x̂, 1)` of the primary module,
/// read off from the actual action.
pub fn kr_primary_rep(ctx: &KrContext) -> Result<(RMatrix, RMatrix)> {
    let w = ctx.primary_space();
    Ok((w.restrict(&ctx.adjacency)?, w.restrict(&ctx.dual_adjacency)?))
}

fn vectorize(m: &RMatrix) -> RMatrix {
    RMatrix::column_vector(m.as_slice().to_vec())
}

/// Span of all words of length `<= max_len` in the generators (the empty word is `I`).
fn word_span_dim(generators: &[&RMatrix], max_len: usize) -> usize {
    let n = generators[0].rows();
    let mut layer = vec![RMatrix::identity(n)];
    let mut all = layer.clone();
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| generators.iter().map(move |g| w * *g))
            .collect();
        all.extend(layer.iter().cloned());
    }
    Subspace::span(n * n, all.iter().map(vectorize)).expect("square").dim()
}

/// Dimension of the algebra generated by `seed`, by multiplicative closure to a fixed point.
fn closure_dim(seed: &[RMatrix]) -> (usize, Subspace) {
    let n = seed[0].rows();
    let unvec = |v: &RMatrix| RMatrix::from_vec(n, n, v.as_slice().to_vec()).expect("n*n entries");
    let mut span = Subspace::span(n * n, seed.iter().map(vectorize)).expect("square");
    loop {
        let basis: Vec<RMatrix> = span.basis().iter().map(unvec).collect();
        let products = basis.iter().flat_map(|x| basis.iter().map(move |y| vectorize(&(x * y))));
        let next = Subspace::span(n * n, span.basis().iter().cloned().chain(products)).expect("square");
        if next.dim() == span.dim() {
            return (span.dim(), span);
        }
        span = next;
    }
}

/// Checks every `K_r` identity exactly; failures are recorded, never raised.
pub fn verify_kr(ctx: &KrContext) -> KrVerificationReport {
    let n = ctx.size();
    let r = Rational::from(n);
    let id = RMatrix::identity(n);
    let e0 = &ctx.idempotent0;
    let s0 = &ctx.dual_idempotent0;
    let p0 = &ctx.primary_projection;
    let p1 = &ctx.nonprimary_projection;
    let mut checks = Checks::new();

    // context invariants
    checks.record(
        "kr.context",
        ctx.adjacency == &RMatrix::ones(n, n) - &id
            && ctx.idempotent1 == &id - e0
            && ctx.dual_adjacency == &s0.scale(&(&r - &Rational::one())) - &ctx.dual_idempotent1
            && ctx.adjacency == &e0.scale(&(&r - &Rational::one())) - &ctx.idempotent1
            && (s0 + &ctx.dual_idempotent1).is_identity()
            && s0.get(0, 0).is_one()
            && s0.is_diagonal(),
    );
    checks.record(
        "kr.e_projections",
        (p0 + p1).is_identity() && &(p0 * p0) == p0 && &(p1 * p1) == p1 && (p0 * p1).is_zero() && (p1 * p0).is_zero(),
    );

    checks.record("kr.r_e0_e0star_e0", (&(e0 * s0) * e0).scale(&r) == *e0);
    checks.record("kr.r_e0star_e0_e0star", (&(s0 * e0) * s0).scale(&r) == *s0);

    let words_dim = word_span_dim(&[e0, s0], 4);
    let five = [id.clone(), e0.clone(), s0.clone(), e0 * s0, s0 * e0];
    let five_span = Subspace::span(n * n, five.iter().map(vectorize)).expect("square");
    checks.record_detail("kr.dim_t_words", words_dim == 5, format!("words of length <= 4 span dim {words_dim}"));
    checks.record("kr.t_basis_independent", five_span.dim() == 5);

    let (dim_t, t_span) = closure_dim(&[id.clone(), e0.clone(), s0.clone()]);
    let (dim_t_aa, aa_span) = closure_dim(&[id.clone(), ctx.adjacency.clone(), ctx.dual_adjacency.clone()]);
    checks.record_detail(
        "kr.generated_by_e0_e0star",
        dim_t == 5 && dim_t_aa == 5 && t_span.same_as(&aa_span).unwrap_or(false) && t_span.same_as(&five_span).unwrap_or(false),
        format!("closure of {{I,E0,E0*}} has dim {dim_t}, closure of {{I,A,A*}} has dim {dim_t_aa}"),
    );

    let coeff = &r / &(&r - &Rational::one());
    let combo = &(&(e0 + s0) - &(e0 * s0)) - &(s0 * e0);
    checks.record("kr.e0_formula", combo.scale(&coeff) == *p0);
    checks.record("kr.e0_in_t", t_span.contains_vector(&vectorize(p0)).unwrap_or(false));

    checks.record("kr.e0_fixes_e0star", &(p0 * s0) == s0 && &(s0 * p0) == s0);
    checks.record("kr.e0_fixes_e0", &(p0 * e0) == e0 && &(e0 * p0) == e0);
    let t_basis: Vec<RMatrix> = five.to_vec();
    checks.record(
        "kr.e0_central",
        t_basis.iter().all(|b| p0 * b == b * p0),
    );

    let e1v = ctx.e1_basis();
    let flat1 = Subspace::column_space(&ctx.idempotent1);
    let star1 = Subspace::column_space(&ctx.dual_idempotent1);
    let meet = flat1.intersect(&star1).expect("same ambient");
    checks.record("kr.e1v_is_intersection", meet.same_as(&e1v).unwrap_or(false) && e1v.dim() == n - 2);
    checks.record(
        "kr.e1v_is_image_of_e1",
        Subspace::column_space(p1).same_as(&e1v).unwrap_or(false),
    );

    let acts_as_minus_one = |m: &RMatrix| {
        e1v.basis()
            .iter()
            .all(|v| m.apply(v.as_slice()) == v.scale(&Rational::from_integer(-1)).into_vec())
    };
    checks.record("kr.a_on_e1v", acts_as_minus_one(&ctx.adjacency));
    checks.record("kr.astar_on_e1v", acts_as_minus_one(&ctx.dual_adjacency));

    let flat0 = ctx.flat_space();
    let star0 = ctx.star_space();
    checks.record(
        "kr.primary_is_sum",
        flat0.sum(&star0).map(|s| s.same_as(&ctx.primary_space()).unwrap_or(false)).unwrap_or(false)
            && Subspace::column_space(p0).same_as(&ctx.primary_space()).unwrap_or(false),
    );
    checks.record(
        "kr.e1v_orthogonal",
        e1v.is_orthogonal_to(&flat0).unwrap_or(false) && e1v.is_orthogonal_to(&star0).unwrap_or(false),
    );
    let total = Subspace::sum_all(n, [&star0, &flat0, &e1v]).map(|s| s.dim()).unwrap_or(0);
    let pairwise_zero = [(&star0, &flat0), (&star0, &e1v), (&flat0, &e1v)]
        .iter()
        .all(|(u, v)| u.intersect(v).map(|m| m.is_zero()).unwrap_or(false));
    checks.record("kr.direct_sum", total == n && pairwise_zero && 1 + 1 + e1v.dim() == n);

    let rep_ok = kr_primary_rep(ctx)
        .map(|(b, bs)| {
            let rm1 = n as i64 - 1;
            b == RMatrix::from_i64_rows(&[&[-1, 0], &[1, rm1]])
                && bs == RMatrix::from_i64_rows(&[&[rm1, n as i64], &[0, -1]])
                && b.inverse()
                    .and_then(|bi| bs.inverse().map(|bsi| &(&(&bi * &bsi) * &b) * &bs))
                    .map(|c| c == RMatrix::diag(&[ctx.commutator_base(), ctx.commutator_base().recip()]))
                    .unwrap_or(false)
        })
        .unwrap_or(false);
    checks.record("kr.primary_rep", rep_ok);

    let mut commutator_eigendata = Vec::new();
    match ctx.commutator() {
        Ok(c) => {
            let base = ctx.commutator_base();
            let values = [base.clone(), base.recip(), Rational::one()];
            let spaces: Vec<Subspace> = values
                .iter()
                .map(|lambda| kernel(&(&c - &id.scale(lambda))))
                .collect();
            for (lambda, space) in values.iter().zip(&spaces) {
                commutator_eigendata.push((lambda.clone(), space.dim()));
            }
            let total: usize = spaces.iter().map(Subspace::dim).sum();
            checks.record_detail("kr.commutator_diagonalizable", total == n, format!("eigenspace dims sum to {total}"));
            let x = ctx.base_vector();
            let one = ctx.ones_vector();
            let exact_action = c.apply(x.as_slice()) == x.scale(&values[0]).into_vec()
                && c.apply(one.as_slice()) == one.scale(&values[1]).into_vec()
                && e1v.basis().iter().all(|v| c.apply(v.as_slice()) == v.as_slice());
            checks.record("kr.commutator_action", exact_action);
            checks.record(
                "kr.commutator_eigenspaces",
                spaces[0].same_as(&star0).unwrap_or(false)
                    && spaces[1].same_as(&flat0).unwrap_or(false)
                    && spaces[2].same_as(&e1v).unwrap_or(false),
            );
        }
        Err(e) => {
            checks.record_detail("kr.commutator_diagonalizable", false, e.to_string());
            checks.record("kr.commutator_action", false);
            checks.record("kr.commutator_eigenspaces", false);
        }
    }

    KrVerificationReport {
        r: ctx.r,
        checks,
        dim_t,
        commutator_eigendata,
    }
}

/// Identifiers emitted by [`verify_kr`], in order.
pub const KR_CHECK_IDS: &[&str] = &[
    "kr.context",
    "kr.e_projections",
    "kr.r_e0_e0star_e0",
    "kr.r_e0star_e0_e0star",
    "kr.dim_t_words",
    "kr.t_basis_independent",
    "kr.generated_by_e0_e0star",
    "kr.e0_formula",
    "kr.e0_in_t",
    "kr.e0_fixes_e0star",
    "kr.e0_fixes_e0",
    "kr.e0_central",
    "kr.e1v_is_intersection",
    "kr.e1v_is_image_of_e1",
    "kr.a_on_e1v",
    "kr.astar_on_e1v",
    "kr.primary_is_sum",
    "kr.e1v_orthogonal",
    "kr.direct_sum",
    "kr.primary_rep",
    "kr.commutator_diagonalizable",
    "kr.commutator_action",
    "kr.commutator_eigenspaces",
];
