//! Fibers, induction and the standard constructions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{window_points, DSet, Gen, ModuleError, ModuleWindow, Orbit, Side, Window};
use crate::algebra_base::{LocalIdeal, Matrix, Scalar};

/// A finite-dimensional module over `D_k` on which `𝔪_μ` acts nilpotently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    center: Vec<Scalar>,
    mats: Vec<Matrix>,
    dim: usize,
}

impl Fiber {
    /// Validates commuting, `μ`-shifted nilpotent action matrices.
    pub fn new(center: Vec<Scalar>, mats: Vec<Matrix>, dim: usize) -> Result<Fiber, ModuleError> {
        if dim == 0 {
            return Err(ModuleError::EmptyFiber);
        }
        if mats.len() != center.len() {
            return Err(ModuleError::ArityMismatch {
                expected: center.len(),
                found: mats.len(),
            });
        }
        for m in &mats {
            if m.shape() != (dim, dim) {
                return Err(ModuleError::ShapeMismatch { point: Vec::new() });
            }
        }
        for a in 0..mats.len() {
            for b in a + 1..mats.len() {
                if mats[a].mul(&mats[b]) != mats[b].mul(&mats[a]) {
                    return Err(ModuleError::FiberNotCommuting { a, b });
                }
            }
            let nil = mats[a].sub(&Matrix::scalar(dim, &center[a]));
            if !nil.pow(dim as u32).is_zero() {
                return Err(ModuleError::FiberNotNilpotent { slot: a });
            }
        }
        Ok(Fiber { center, mats, dim })
    }

    /// `K` with `H_j` acting by `μ_j`.
    pub fn trivial(center: Vec<Scalar>) -> Fiber {
        let mats = center.iter().map(|c| Matrix::scalar(1, c)).collect();
        Fiber {
            center,
            mats,
            dim: 1,
        }
    }

    /// The regular representation of `D_k/I` on its standard monomial basis.
    pub fn from_ideal(ideal: &LocalIdeal) -> Fiber {
        let qb = ideal.quotient_basis();
        let d = qb.dim();
        let center = ideal.center().lambda.clone();
        let mats = center
            .iter()
            .enumerate()
            .map(|(j, c)| Matrix::scalar(d, c).add(&qb.multiplication_matrix(j)))
            .collect();
        Fiber {
            center,
            mats,
            dim: d,
        }
    }

    pub fn center(&self) -> &[Scalar] {
        &self.center
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of slots `k`.
    pub fn arity(&self) -> usize {
        self.center.len()
    }

    /// `A_j − μ_j`.
    pub fn nilpotent(&self, j: usize) -> Matrix {
        self.mats[j].sub(&Matrix::scalar(self.dim, &self.center[j]))
    }

    /// Layer dimensions of the socle series.
    pub fn socle_series(&self) -> Vec<usize> {
        let mut layers = Vec::new();
        let mut covered = 0;
        let mut k = 1u32;
        while covered < self.dim {
            // soc^k = common kernel of all monomials of degree k in the nilpotents
            let mut stacked = Matrix::zeros(0, self.dim);
            for m in monomials_of_degree(self.arity(), k) {
                let mut prod = Matrix::identity(self.dim);
                for (j, e) in m.iter().enumerate() {
                    prod = prod.mul(&self.nilpotent(j).pow(*e));
                }
                stacked = stacked.vstack(&prod);
            }
            let sk = if self.arity() == 0 {
                self.dim
            } else {
                self.dim - stacked.rank()
            };
            layers.push(sk - covered);
            covered = sk;
            k += 1;
        }
        layers
    }

    /// Composition length; every simple `D_k`-module here is `K`.
    pub fn composition_length(&self) -> usize {
        self.socle_series().iter().sum()
    }
}

fn monomials_of_degree(k: usize, d: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return if d == 0 { alloc::vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in monomials_of_degree(k - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// An invertible `X` with `X·A_j = B_j·X` for all `j`, if one is found.
pub fn fiber_intertwiner(a: &Fiber, b: &Fiber, seed: u64) -> Option<Matrix> {
    if a.dim != b.dim || a.arity() != b.arity() {
        return None;
    }
    let d = a.dim;
    let idx = |r: usize, c: usize| r * d + c;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..a.arity() {
        for r in 0..d {
            for c in 0..d {
                let mut row = alloc::vec![Scalar::zero(); d * d];
                for k in 0..d {
                    row[idx(r, k)] += a.mats[j].get(k, c);
                    row[idx(k, c)] -= b.mats[j].get(r, k);
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..d * d)
            .map(|u| {
                let mut v = alloc::vec![Scalar::zero(); d * d];
                v[u] = Scalar::one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut x = Matrix::zeros(d, d);
        for v in &kernel {
            let c = Scalar::from_int(rng.random_range(-9..=9));
            for r in 0..d {
                for col in 0..d {
                    let e = x.get(r, col) + &(&c * &v[idx(r, col)]);
                    x.set(r, col, e);
                }
            }
        }
        if x.is_invertible() {
            return Some(x);
        }
    }
    None
}

fn check_center(fiber: &Fiber, dset: &DSet) -> Result<(), ModuleError> {
    let nd = dset.non_degenerate();
    if fiber.arity() != nd.len() {
        return Err(ModuleError::ArityMismatch {
            expected: nd.len(),
            found: fiber.arity(),
        });
    }
    for (k, &j) in nd.iter().enumerate() {
        if fiber.center[k] != *dset.orbit().rep(j) {
            return Err(ModuleError::MalformedCenter { slot: j });
        }
    }
    Ok(())
}

/// `P_m ⊗ (B_k ⊗_{D_k} N)` on a window.
///
/// On `𝒟` slots the support starts at `1` and `H_i` acts by `p_i`; on the
/// other slots `H_j` acts by `A_j + p_j`. `∂` and `∫` are identity transports.
pub fn induce(fiber: &Fiber, dset: &DSet, window: Window) -> Result<ModuleWindow, ModuleError> {
    check_center(fiber, dset)?;
    let orbit = dset.orbit().clone();
    let n = orbit.arity();
    let mut m = ModuleWindow::empty(Side::Left, orbit, window)?;
    let d = fiber.dim;
    let in_support = |p: &[i64]| dset.degenerate().iter().all(|&i| p[i] >= 1);
    let pts: Vec<Vec<i64>> = window_points(m.window())
        .into_iter()
        .filter(|p| in_support(p))
        .collect();
    for p in &pts {
        m.set_dim(p.clone(), d);
    }
    let nd = dset.non_degenerate();
    for p in &pts {
        for i in 0..n {
            let h = match nd.iter().position(|&j| j == i) {
                Some(k) => fiber.mats[k].add(&Matrix::scalar(d, &Scalar::from_int(p[i]))),
                None => Matrix::scalar(d, &Scalar::from_int(p[i])),
            };
            m.set_map(p.clone(), i, Gen::H, h)?;
            for g in [Gen::D, Gen::I] {
                let q = m.target(p, i, g);
                if m.in_window(&q) && m.dim(&q) > 0 {
                    m.set_map(p.clone(), i, g, Matrix::identity(d))?;
                }
            }
        }
    }
    Ok(m)
}

/// The fiber at the base point: `H_j` for `j ∉ 𝒟`.
pub fn fiber(m: &ModuleWindow, dset: &DSet) -> Result<Fiber, ModuleError> {
    if m.orbit() != dset.orbit() {
        return Err(ModuleError::CenterMismatch);
    }
    let p0 = dset.base_point();
    if !m.in_window(&p0) {
        let slot = (0..p0.len())
            .find(|&i| {
                let (a, b) = m.window()[i];
                p0[i] < a || p0[i] > b
            })
            .unwrap_or(0);
        return Err(ModuleError::WindowTooSmall {
            slot,
            needed: (p0[slot], p0[slot]),
        });
    }
    let d = m.dim(&p0);
    if d == 0 {
        return Err(ModuleError::CenterMismatch);
    }
    let nd = dset.non_degenerate();
    let center: Vec<Scalar> = nd.iter().map(|&j| dset.orbit().rep(j).clone()).collect();
    let mats = nd
        .iter()
        .map(|&j| m.map(&p0, j, Gen::H).unwrap_or_else(|| Matrix::zeros(d, d)))
        .collect();
    Fiber::new(center, mats, d).map_err(|e| match e {
        ModuleError::FiberNotNilpotent { .. } => ModuleError::CenterMismatch,
        e => e,
    })
}

/// `Φ : induce(fiber(M)) → M`, transporting the base fiber along `∫`
/// (or `∂` on negative non-degenerate coordinates). Verified to commute with
/// every generator map and to be invertible at every support point.
pub fn induce_fiber_isomorphism(
    m: &ModuleWindow,
    dset: &DSet,
) -> Result<BTreeMap<Vec<i64>, Matrix>, ModuleError> {
    if m.side() != Side::Left {
        return Err(ModuleError::CenterMismatch);
    }
    let n_fib = fiber(m, dset)?;
    let ind = induce(&n_fib, dset, m.window().to_vec())?;
    let p0 = dset.base_point();
    let mut phi = BTreeMap::new();
    for p in ind.points() {
        if ind.dim(&p) != m.dim(&p) {
            return Err(ModuleError::NotIsomorphic { point: p });
        }
        if ind.dim(&p) == 0 {
            continue;
        }
        let mut cur = p0.clone();
        let mut x = Matrix::identity(n_fib.dim());
        for i in 0..p.len() {
            while cur[i] != p[i] {
                let g = if p[i] > cur[i] { Gen::I } else { Gen::D };
                let f = m
                    .map(&cur, i, g)
                    .ok_or_else(|| ModuleError::NotIsomorphic { point: p.clone() })?;
                x = f.mul(&x);
                cur = m.target(&cur, i, g);
            }
        }
        if !x.is_invertible() {
            return Err(ModuleError::NotIsomorphic { point: p });
        }
        phi.insert(p, x);
    }
    for p in ind.support() {
        for i in 0..p.len() {
            for g in Gen::ALL {
                let (Some(a), Some(b)) = (ind.map(&p, i, g), m.map(&p, i, g)) else {
                    continue;
                };
                let q = ind.target(&p, i, g);
                let lhs = b.mul(&phi[&p]);
                let rhs = match phi.get(&q) {
                    Some(pq) => pq.mul(&a),
                    None => Matrix::zeros(m.dim(&q), ind.dim(&p)),
                };
                if lhs != rhs {
                    return Err(ModuleError::NotIsomorphic { point: p });
                }
            }
        }
    }
    Ok(phi)
}

/// The simple module `M(𝒟)`.
pub fn build_simple(dset: &DSet, window: Window) -> Result<ModuleWindow, ModuleError> {
    let center = dset
        .non_degenerate()
        .iter()
        .map(|&j| dset.orbit().rep(j).clone())
        .collect();
    induce(&Fiber::trivial(center), dset, window)
}

/// `M(s, λ) = B₁ ⊗_{K[H]} K[H]/(H − λ)^s` in the basis `v_{i,a}`.
///
/// `v_{i,a}` sits at the point of weight `λ − i`; `H v_{i,a} = (λ−i)v_{i,a} +
/// v_{i,a+1}`, `∂ v_{i,a} = v_{i+1,a}`, `∫ v_{i,a} = v_{i−1,a}`.
pub fn build_ms(s: i64, lambda: &Scalar, window: (i64, i64)) -> Result<ModuleWindow, ModuleError> {
    if s <= 0 {
        return Err(ModuleError::NonPositiveLength(s));
    }
    let s = s as usize;
    let orbit = Orbit::new(alloc::vec![lambda.clone()]);
    let mut m = ModuleWindow::empty(Side::Left, orbit.clone(), alloc::vec![window])?;
    let mut nil = Matrix::zeros(s, s);
    for a in 0..s - 1 {
        nil.set(a + 1, a, Scalar::one());
    }
    for x in window.0..=window.1 {
        m.set_dim(alloc::vec![x], s);
    }
    for x in window.0..=window.1 {
        let p = alloc::vec![x];
        let h = Matrix::scalar(s, &orbit.weight(&p)[0]).add(&nil);
        m.set_map(p.clone(), 0, Gen::H, h)?;
        for g in [Gen::D, Gen::I] {
            if m.in_window(&m.target(&p, 0, g)) {
                m.set_map(p.clone(), 0, g, Matrix::identity(s))?;
            }
        }
    }
    Ok(m)
}

/// `V(I) = P_m ⊗ (B_k ⊗_{D_k} D_k/I)`.
pub fn build_v(ideal: &LocalIdeal, dset: &DSet, window: Window) -> Result<ModuleWindow, ModuleError> {
    induce(&Fiber::from_ideal(ideal), dset, window)
}

/// `v_{i,a}` of [`build_ms`] as (point, basis index).
pub fn ms_position(lambda: &Scalar, i: i64, a: usize) -> (Vec<i64>, usize) {
    let orbit = Orbit::new(alloc::vec![lambda.clone()]);
    let p = (lambda - orbit.rep(0))
        .to_i64()
        .expect("integer offset");
    (alloc::vec![p - i], a)
}
