//! The Hamming graph `H(D, r)` with its distance matrices, primitive
//! idempotents, dual idempotents and dual distance matrices relative to the
//! all-zeros vertex.
//!
//! Vertices are `D`-tuples over `0..r`, encoded base `r` with coordinate 1 as
//! the most significant digit. Index 0 is the base vertex `(x, x, ..., x)`.
//! Under this encoding `kron(M_1, ..., M_D)` acts coordinate-wise, so tensor
//! identities are literal Kronecker identities.

use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::check::Checks;
use crate::complete_graph::{build_kr, KrContext};
use crate::error::{Error, Result};
use crate::linalg::{RMatrix, Rational};

pub const DEFAULT_SIZE_CAP: u128 = 256;

#[derive(Debug)]
pub struct HammingContext {
    pub d: u32,
    pub r: u32,
    n: usize,
    /// `A_0, ..., A_D`
    pub distance: Vec<RMatrix>,
    /// `E_0, ..., E_D`
    pub idempotents: Vec<RMatrix>,
    /// `E*_0, ..., E*_D`
    pub dual_idempotents: Vec<RMatrix>,
    /// `A*_0, ..., A*_D`
    pub dual_distance: Vec<RMatrix>,
    pub kr: KrContext,
    build_checks: Checks,
    last_inverses: OnceLock<(Result<RMatrix>, Result<RMatrix>)>,
}

/// Intersection numbers `p^h_ij` and Krein parameters `q^h_ij`.
#[derive(Debug, Clone)]
pub struct ParameterTables {
    pub d: u32,
    p: Vec<Rational>,
    q: Vec<Rational>,
    pub checks: Checks,
}

impl ParameterTables {
    fn index(&self, h: usize, i: usize, j: usize) -> usize {
        let m = self.d as usize + 1;
        (h * m + i) * m + j
    }

    pub fn p(&self, h: usize, i: usize, j: usize) -> &Rational {
        &self.p[self.index(h, i, j)]
    }

    pub fn q(&self, h: usize, i: usize, j: usize) -> &Rational {
        &self.q[self.index(h, i, j)]
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn small_binomial(n: u64, k: u64) -> u64 {
    u64::try_from(binomial(n, k)).expect("binomial fits u64 at matrix scale")
}

/// `r^D`, or `None` if it overflows `u128`.
pub fn vertex_count(d: u32, r: u32) -> Option<u128> {
    (r as u128).checked_pow(d)
}

pub fn build_hamming(d: u32, r: u32) -> Result<HammingContext> {
    build_hamming_with_cap(d, r, DEFAULT_SIZE_CAP)
}

pub fn build_hamming_with_cap(d: u32, r: u32, cap: u128) -> Result<HammingContext> {
    if d < 1 {
        return Err(Error::InvalidD { d });
    }
    let kr = build_kr(r)?;
    let size = vertex_count(d, r).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::SizeCap { size, cap });
    }
    let n = size as usize;
    let du = d as usize;
    let digits: Vec<Vec<u32>> = (0..n).map(|v| decode(v, d, r)).collect();
    let dist = |u: usize, v: usize| digits[u].iter().zip(&digits[v]).filter(|(a, b)| a != b).count();

    let distance: Vec<RMatrix> = (0..=du)
        .map(|i| RMatrix::from_fn(n, n, |u, v| Rational::from(usize::from(dist(u, v) == i))))
        .collect();

    let mut idempotents = vec![RMatrix::zeros(n, n); du + 1];
    for mask in 0u32..(1 << d) {
        let j = mask.count_ones() as usize;
        let mut term = RMatrix::identity(1);
        for c in 0..d {
            let factor = if mask & (1 << (d - 1 - c)) != 0 { &kr.idempotent1 } else { &kr.idempotent0 };
            term = term.kron(factor);
        }
        idempotents[j] = &idempotents[j] + &term;
    }

    let dual_idempotents: Vec<RMatrix> = (0..=du)
        .map(|i| RMatrix::from_fn(n, n, |u, v| Rational::from(usize::from(u == v && dist(0, u) == i))))
        .collect();
    let nq = Rational::from(n);
    let dual_distance: Vec<RMatrix> = idempotents
        .iter()
        .map(|e| RMatrix::diag(&(0..n).map(|y| &nq * e.get(0, y)).collect::<Vec<_>>()))
        .collect();

    let mut ctx = HammingContext {
        d,
        r,
        n,
        distance,
        idempotents,
        dual_idempotents,
        dual_distance,
        kr,
        build_checks: Checks::new(),
        last_inverses: OnceLock::new(),
    };
    let checks = ctx.axiom_checks();
    if let Some(bad) = checks.failures().next() {
        return Err(Error::Construction(bad.id.clone()));
    }
    ctx.build_checks = checks;
    Ok(ctx)
}

/// Base-`r` digits of a vertex index, coordinate 1 first.
pub fn decode(mut index: usize, d: u32, r: u32) -> Vec<u32> {
    let mut out = vec![0; d as usize];
    for slot in out.iter_mut().rev() {
        *slot = (index % r as usize) as u32;
        index /= r as usize;
    }
    out
}

pub fn encode(digits: &[u32], r: u32) -> usize {
    digits.iter().fold(0usize, |acc, &x| acc * r as usize + x as usize)
}

impl HammingContext {
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.d as usize
    }

    pub fn adjacency(&self) -> &RMatrix {
        &self.distance[1]
    }

    pub fn dual_adjacency(&self) -> &RMatrix {
        &self.dual_distance[1]
    }

    pub fn last_distance(&self) -> &RMatrix {
        &self.distance[self.diameter()]
    }

    pub fn last_dual_distance(&self) -> &RMatrix {
        &self.dual_distance[self.diameter()]
    }

    /// `x̂` for the base vertex.
    pub fn base_vector(&self) -> RMatrix {
        RMatrix::unit_vector(self.n, 0)
    }

    pub fn distance_from_base(&self, v: usize) -> usize {
        decode(v, self.d, self.r).iter().filter(|&&x| x != 0).count()
    }

    /// Checks recorded while building; all passed or the build would have failed.
    pub fn build_checks(&self) -> &Checks {
        &self.build_checks
    }

    /// `(A_D^{-1}, A*_D^{-1})`, computed once by direct elimination.
    pub fn last_inverses(&self) -> (Result<RMatrix>, Result<RMatrix>) {
        self.last_inverses
            .get_or_init(|| (self.last_distance().inverse(), self.last_dual_distance().inverse()))
            .clone()
    }

    /// Representative vertex at distance `h` from the base: `(1, ..., 1, 0, ..., 0)`.
    fn representative(&self, h: usize) -> usize {
        let digits: Vec<u32> = (0..self.diameter()).map(|c| u32::from(c < h)).collect();
        encode(&digits, self.r)
    }

    fn axiom_checks(&self) -> Checks {
        let n = self.n;
        let du = self.diameter();
        let nq = Rational::from(n);
        let mut checks = Checks::new();

        let sum_a = self.distance.iter().fold(RMatrix::zeros(n, n), |acc, m| &acc + m);
        checks.record("hamming.distance_sum_is_j", sum_a == RMatrix::ones(n, n));
        checks.record("hamming.a0_is_identity", self.distance[0].is_identity());
        checks.record("hamming.distance_symmetric", self.distance.iter().all(RMatrix::is_symmetric));

        let sum_e = self.idempotents.iter().fold(RMatrix::zeros(n, n), |acc, m| &acc + m);
        checks.record("hamming.idempotent_sum_is_i", sum_e.is_identity());
        checks.record("hamming.e0_is_j_over_n", self.idempotents[0] == RMatrix::ones(n, n).scale(&nq.recip()));
        checks.record("hamming.idempotent_symmetric", self.idempotents.iter().all(RMatrix::is_symmetric));
        // E_j E_i = (E_i E_j)^t for symmetric E, so i <= j suffices
        let orthogonal = (0..=du).all(|i| {
            (i..=du).all(|j| {
                let prod = &self.idempotents[i] * &self.idempotents[j];
                if i == j {
                    prod == self.idempotents[i]
                } else {
                    prod.is_zero()
                }
            })
        });
        checks.record("hamming.idempotent_orthogonal", orthogonal);
        let ranks_ok = (0..=du).all(|j| {
            let expected = small_binomial(self.d as u64, j as u64) * (self.r as u64 - 1).pow(j as u32);
            self.idempotents[j].trace() == Rational::from(expected as usize)
        });
        checks.record("hamming.idempotent_rank", ranks_ok);
        let in_bose_mesner = self.idempotents.iter().all(|e| {
            let expansion = (0..=du).fold(RMatrix::zeros(n, n), |acc, h| {
                &acc + &self.distance[h].scale(e.get(0, self.representative(h)))
            });
            expansion == *e
        });
        checks.record("hamming.idempotents_in_bose_mesner", in_bose_mesner);

        let sum_s = self.dual_idempotents.iter().fold(RMatrix::zeros(n, n), |acc, m| &acc + m);
        checks.record("hamming.dual_idempotent_sum_is_i", sum_s.is_identity());
        let dual_orth = self.dual_idempotents.iter().all(RMatrix::is_diagonal)
            && (0..=du).all(|i| {
                (0..=du).all(|j| {
                    let prod = &self.dual_idempotents[i] * &self.dual_idempotents[j];
                    if i == j {
                        prod == self.dual_idempotents[i]
                    } else {
                        prod.is_zero()
                    }
                })
            });
        checks.record("hamming.dual_idempotent_orthogonal", dual_orth);

        checks.record("hamming.dual_a0_is_identity", self.dual_distance[0].is_identity());
        let sum_as = self.dual_distance.iter().fold(RMatrix::zeros(n, n), |acc, m| &acc + m);
        checks.record("hamming.dual_distance_sum", sum_as == self.dual_idempotents[0].scale(&nq));
        checks.record("hamming.dual_distance_diagonal", self.dual_distance.iter().all(RMatrix::is_diagonal));

        checks.record(
            "hamming.last_distance_is_tensor_power",
            *self.last_distance() == self.kr.adjacency.kron_power(self.d),
        );
        checks.record(
            "hamming.last_dual_distance_is_tensor_power",
            *self.last_dual_distance() == self.kr.dual_adjacency.kron_power(self.d),
        );
        if self.d == 1 {
            checks.record(
                "hamming.d1_is_complete_graph",
                self.distance[1] == self.kr.adjacency
                    && self.idempotents[1] == self.kr.idempotent1
                    && self.dual_distance[1] == self.kr.dual_adjacency,
            );
        }
        checks
    }
}

/// `|{y : ∂(x, y) = i}|` for `i = 0..=D`, cross-checked against the closed
/// form, the trace of `E*_i` and the row sums of `A_i`.
pub fn sphere_sizes(ctx: &HammingContext) -> Vec<u64> {
    let du = ctx.diameter();
    let mut counts = vec![0u64; du + 1];
    for v in 0..ctx.num_vertices() {
        counts[ctx.distance_from_base(v)] += 1;
    }
    counts
}

fn sphere_check(ctx: &HammingContext, sizes: &[u64]) -> bool {
    sizes.iter().enumerate().all(|(i, &s)| {
        let closed = small_binomial(ctx.d as u64, i as u64) * (ctx.r as u64 - 1).pow(i as u32);
        let row_sum: Rational = ctx.distance[i].row(0).iter().sum();
        s == closed
            && ctx.dual_idempotents[i].trace() == Rational::from(s as usize)
            && row_sum == Rational::from(s as usize)
    })
}

/// Extracts `p^h_ij` and `q^h_ij` and verifies both expansions globally.
pub fn parameter_tables(ctx: &HammingContext) -> Result<ParameterTables> {
    let n = ctx.num_vertices();
    let du = ctx.diameter();
    let m = du + 1;
    let nq = Rational::from(n);
    let reps: Vec<usize> = (0..m).map(|h| ctx.representative(h)).collect();
    let mut p = vec![Rational::zero(); m * m * m];
    let mut q = vec![Rational::zero(); m * m * m];
    let idx = |h: usize, i: usize, j: usize| (h * m + i) * m + j;
    let mut checks = Checks::new();

    for i in 0..m {
        for j in 0..m {
            let prod = &ctx.distance[i] * &ctx.distance[j];
            let mut expansion = RMatrix::zeros(n, n);
            for h in 0..m {
                let value = prod.get(0, reps[h]).clone();
                expansion = &expansion + &ctx.distance[h].scale(&value);
                p[idx(h, i, j)] = value;
            }
            if expansion != prod {
                return Err(Error::DistanceRegularity(format!(
                    "A_{i} A_{j} is not constant on distance classes"
                )));
            }
        }
    }
    checks.record("hamming.intersection_numbers", true);

    let traces: Vec<Rational> = ctx.idempotents.iter().map(RMatrix::trace).collect();
    let mut krein_ok = true;
    for i in 0..m {
        for j in 0..m {
            let schur = ctx.idempotents[i].hadamard(&ctx.idempotents[j])?;
            let mut expansion = RMatrix::zeros(n, n);
            for h in 0..m {
                // schur = sum_h c_h E_h  =>  <schur, E_h> = c_h trace(E_h)
                let c = &schur.frobenius_dot(&ctx.idempotents[h])? / &traces[h];
                expansion = &expansion + &ctx.idempotents[h].scale(&c);
                q[idx(h, i, j)] = &c * &nq;
            }
            krein_ok &= expansion == schur;
        }
    }
    checks.record("hamming.krein_expansion", krein_ok);

    let dual_ok = (0..m).all(|i| {
        (0..m).all(|j| {
            let lhs = &ctx.dual_distance[i] * &ctx.dual_distance[j];
            let rhs = (0..m).fold(RMatrix::zeros(n, n), |acc, h| &acc + &ctx.dual_distance[h].scale(&q[idx(h, i, j)]));
            lhs == rhs
        })
    });
    checks.record("hamming.dual_distance_products", dual_ok);

    checks.record("hamming.krein_nonnegative", q.iter().all(|x| !x.is_negative()));
    let mut vanishing = true;
    let mut nonvanishing = true;
    for h in 0..m {
        for i in 0..m {
            for j in 0..m {
                let v = &q[idx(h, i, j)];
                let exceeds = h > i + j || i > h + j || j > h + i;
                let equals = h == i + j || i == h + j || j == h + i;
                if exceeds && !v.is_zero() {
                    vanishing = false;
                }
                if equals && v.is_zero() {
                    nonvanishing = false;
                }
            }
        }
    }
    checks.record("hamming.q_polynomial_vanishing", vanishing);
    checks.record("hamming.q_polynomial_nonvanishing", nonvanishing);

    Ok(ParameterTables { d: ctx.d, p, q, checks })
}

/// Full axiom scorecard for one instance.
pub fn verify_hamming(ctx: &HammingContext) -> Checks {
    let mut checks = ctx.build_checks().clone();
    let sizes = sphere_sizes(ctx);
    checks.record_detail("hamming.sphere_sizes", sphere_check(ctx, &sizes), format!("{sizes:?}"));
    match parameter_tables(ctx) {
        Ok(tables) => checks.extend(tables.checks),
        Err(e) => checks.record_detail("hamming.intersection_numbers", false, e.to_string()),
    }
    let (a_inv, s_inv) = ctx.last_inverses();
    let inverse_ok = |inv: &Result<RMatrix>, m: &RMatrix| match inv {
        Ok(x) => (x * m).is_identity() && (m * x).is_identity(),
        Err(_) => false,
    };
    checks.record("hamming.last_distance_invertible", inverse_ok(&a_inv, ctx.last_distance()));
    checks.record("hamming.last_dual_distance_invertible", inverse_ok(&s_inv, ctx.last_dual_distance()));
    checks
}
