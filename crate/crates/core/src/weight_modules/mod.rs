//! Weight and generalized weight `𝕀ₙ`-modules restricted to finite windows.
//!
//! A point `p ∈ ℤⁿ` of an [`Orbit`] stands for the weight `λ + p`. For a
//! left module `∂_i` maps `p ↦ p − e_i`, `∫_i` maps `p ↦ p + e_i` and `H_i`
//! preserves `p`; on the space at `p` every `H_i − (λ_i + p_i)` is nilpotent.

mod builders;
mod decompose;
mod profile;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra_base::{solve_matrix, Matrix, Scalar};

pub use builders::{
    build_ms, build_simple, build_v, fiber, fiber_intertwiner, induce, induce_fiber_isomorphism,
    ms_position, Fiber,
};
pub use decompose::{
    annihilator_dset, block_decompose, decompose_weight, generated_submodule,
    is_absolutely_prime_window, split_extension, Block, Complement,
};
pub use profile::{finitely_generated, DimBound, OrbitProfile, Profile};

/// Errors raised by module constructions and decompositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleError {
    ArityMismatch { expected: usize, found: usize },
    NonPositiveLength(i64),
    EmptyWindow { slot: usize },
    NotDegenerate { slot: usize },
    MalformedCenter { slot: usize },
    FiberNotCommuting { a: usize, b: usize },
    FiberNotNilpotent { slot: usize },
    EmptyFiber,
    ShapeMismatch { point: Vec<i64> },
    WindowTooSmall { slot: usize, needed: (i64, i64) },
    InconsistentSlot { slot: usize },
    NotWeight { point: Vec<i64>, slot: usize },
    CenterMismatch,
    NotStable { point: Vec<i64> },
    NotIsomorphic { point: Vec<i64> },
    CertificationFailed { point: Vec<i64> },
    RelationFailed { point: Vec<i64>, slot: usize, relation: &'static str },
}

impl fmt::Display for ModuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt = |p: &[i64]| {
            let mut s = alloc::string::String::from("(");
            for (k, x) in p.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                s.push_str(&alloc::format!("{}", x));
            }
            s.push(')');
            s
        };
        match self {
            ModuleError::ArityMismatch { expected, found } => {
                write!(f, "arity mismatch: expected {}, found {}", expected, found)
            }
            ModuleError::NonPositiveLength(s) => write!(f, "length s = {} must be positive", s),
            ModuleError::EmptyWindow { slot } => write!(f, "window of slot {} is empty", slot + 1),
            ModuleError::NotDegenerate { slot } => {
                write!(f, "slot {} is not an integer slot of the orbit", slot + 1)
            }
            ModuleError::MalformedCenter { slot } => {
                write!(f, "ideal center does not match the orbit at slot {}", slot + 1)
            }
            ModuleError::FiberNotCommuting { a, b } => {
                write!(f, "fiber matrices {} and {} do not commute", a + 1, b + 1)
            }
            ModuleError::FiberNotNilpotent { slot } => {
                write!(f, "fiber matrix {} minus its center is not nilpotent", slot + 1)
            }
            ModuleError::EmptyFiber => f.write_str("fiber must be nonzero"),
            ModuleError::ShapeMismatch { point } => {
                write!(f, "matrix shape mismatch at {}", pt(point))
            }
            ModuleError::WindowTooSmall { slot, needed } => write!(
                f,
                "window of slot {} must contain {}..{}",
                slot + 1,
                needed.0,
                needed.1
            ),
            ModuleError::InconsistentSlot { slot } => write!(
                f,
                "slot {} behaves inconsistently across the window (more than one block)",
                slot + 1
            ),
            ModuleError::NotWeight { point, slot } => write!(
                f,
                "H_{} does not act semisimply at {}",
                slot + 1,
                pt(point)
            ),
            ModuleError::CenterMismatch => f.write_str("fiber center does not match the module"),
            ModuleError::NotStable { point } => {
                write!(f, "subspace is not generator-stable at {}", pt(point))
            }
            ModuleError::NotIsomorphic { point } => {
                write!(f, "intertwiner fails at {}", pt(point))
            }
            ModuleError::CertificationFailed { point } => {
                write!(f, "block spaces do not form a direct sum at {}", pt(point))
            }
            ModuleError::RelationFailed { point, slot, relation } => write!(
                f,
                "relation {} fails for slot {} at {}",
                relation,
                slot + 1,
                pt(point)
            ),
        }
    }
}

/// `Ω = Π (λ_i + ℤ)` with canonical representatives.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Orbit {
    reps: Vec<Scalar>,
}

impl Orbit {
    /// Integer slots get `0`; others `λ − ⌊Re λ⌋`.
    pub fn new(lambda: Vec<Scalar>) -> Orbit {
        Orbit {
            reps: lambda.iter().map(normalize_rep).collect(),
        }
    }

    /// `ℤⁿ`.
    pub fn integer(n: usize) -> Orbit {
        Orbit {
            reps: vec![Scalar::zero(); n],
        }
    }

    pub fn arity(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Scalar] {
        &self.reps
    }

    pub fn rep(&self, j: usize) -> &Scalar {
        &self.reps[j]
    }

    pub fn is_integer_slot(&self, j: usize) -> bool {
        self.reps[j].is_zero()
    }

    /// `𝔻_Ω`, the integer slots.
    pub fn integer_slots(&self) -> Vec<usize> {
        (0..self.arity()).filter(|&j| self.is_integer_slot(j)).collect()
    }

    /// The weight `λ + p`.
    pub fn weight(&self, p: &[i64]) -> Vec<Scalar> {
        self.reps
            .iter()
            .zip(p)
            .map(|(r, x)| r + &Scalar::from_int(*x))
            .collect()
    }

    /// The point of a weight in this orbit, if it lies in it.
    pub fn point_of(&self, w: &[Scalar]) -> Option<Vec<i64>> {
        if w.len() != self.arity() {
            return None;
        }
        w.iter()
            .zip(&self.reps)
            .map(|(x, r)| (x - r).to_i64())
            .collect()
    }
}

fn normalize_rep(l: &Scalar) -> Scalar {
    if l.is_integer() {
        Scalar::zero()
    } else {
        l.sub_int(&l.floor_re())
    }
}

/// A choice `𝒟 ⊆ 𝔻_Ω`, labelling the simple module `M(𝒟)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DSet {
    orbit: Orbit,
    d: BTreeSet<usize>,
}

impl DSet {
    pub fn new(orbit: Orbit, d: impl IntoIterator<Item = usize>) -> Result<DSet, ModuleError> {
        let d: BTreeSet<usize> = d.into_iter().collect();
        for &j in &d {
            if j >= orbit.arity() {
                return Err(ModuleError::ArityMismatch {
                    expected: orbit.arity(),
                    found: j + 1,
                });
            }
            if !orbit.is_integer_slot(j) {
                return Err(ModuleError::NotDegenerate { slot: j });
            }
        }
        Ok(DSet { orbit, d })
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn arity(&self) -> usize {
        self.orbit.arity()
    }

    /// `𝒟`.
    pub fn degenerate(&self) -> Vec<usize> {
        self.d.iter().copied().collect()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.d.contains(&j)
    }

    /// `𝒩 = {1..n} ∖ 𝒟`.
    pub fn non_degenerate(&self) -> Vec<usize> {
        (0..self.arity()).filter(|j| !self.d.contains(j)).collect()
    }

    /// Slots `i ∉ 𝒟` whose primes `𝔭_i` make up `𝔞(𝒟) = Σ_{i∉𝒟} 𝔭_i`.
    pub fn annihilator_slots(&self) -> Vec<usize> {
        self.non_degenerate()
    }

    /// The base point of the fiber: `1` on `𝒟`, `0` elsewhere.
    pub fn base_point(&self) -> Vec<i64> {
        (0..self.arity())
            .map(|j| if self.d.contains(&j) { 1 } else { 0 })
            .collect()
    }

    /// Every `𝒟 ⊆ 𝔻_Ω`, ordered by the subset bitmask.
    pub fn all_for(orbit: &Orbit) -> Vec<DSet> {
        let ints = orbit.integer_slots();
        (0..(1u32 << ints.len()))
            .map(|mask| {
                let d = ints
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &j)| j);
                DSet::new(orbit.clone(), d).expect("integer slots")
            })
            .collect()
    }
}

/// Left modules or right modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// The generators `∂`, `∫`, `H` of one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    D,
    I,
    H,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::D, Gen::I, Gen::H];
}

/// A finite window: inclusive integer intervals per slot.
pub type Window = Vec<(i64, i64)>;

/// All points of a window in lexicographic order.
pub fn window_points(window: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(a, b) in window {
        let mut next = Vec::new();
        for p in &out {
            for x in a..=b {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// A generalized weight module on a window: spaces and generator maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleWindow {
    side: Side,
    orbit: Orbit,
    window: Window,
    dims: BTreeMap<Vec<i64>, usize>,
    maps: BTreeMap<(Vec<i64>, usize, Gen), Matrix>,
}

impl ModuleWindow {
    /// The zero module on a window.
    pub fn empty(side: Side, orbit: Orbit, window: Window) -> Result<ModuleWindow, ModuleError> {
        if window.len() != orbit.arity() {
            return Err(ModuleError::ArityMismatch {
                expected: orbit.arity(),
                found: window.len(),
            });
        }
        for (j, &(a, b)) in window.iter().enumerate() {
            if a > b {
                return Err(ModuleError::EmptyWindow { slot: j });
            }
        }
        Ok(ModuleWindow {
            side,
            orbit,
            window,
            dims: BTreeMap::new(),
            maps: BTreeMap::new(),
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn window(&self) -> &[(i64, i64)] {
        &self.window
    }

    pub fn arity(&self) -> usize {
        self.orbit.arity()
    }

    pub fn in_window(&self, p: &[i64]) -> bool {
        p.len() == self.window.len()
            && p.iter().zip(&self.window).all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn points(&self) -> Vec<Vec<i64>> {
        window_points(&self.window)
    }

    pub fn dim(&self, p: &[i64]) -> usize {
        self.dims.get(p).copied().unwrap_or(0)
    }

    /// Points with a nonzero space.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.dims.keys().cloned().collect()
    }

    pub fn dims(&self) -> &BTreeMap<Vec<i64>, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Sets the space at `p`; zero dimensions are dropped.
    pub fn set_dim(&mut self, p: Vec<i64>, d: usize) {
        if d == 0 {
            self.dims.remove(&p);
        } else {
            self.dims.insert(p, d);
        }
    }

    /// Where a generator sends the point `p`.
    pub fn target(&self, p: &[i64], slot: usize, g: Gen) -> Vec<i64> {
        let mut q = p.to_vec();
        let step = match (g, self.side) {
            (Gen::H, _) => 0,
            (Gen::D, Side::Left) | (Gen::I, Side::Right) => -1,
            (Gen::I, Side::Left) | (Gen::D, Side::Right) => 1,
        };
        q[slot] += step;
        q
    }

    /// Stores a generator map; its shape must be `dim(target) × dim(p)`.
    pub fn set_map(&mut self, p: Vec<i64>, slot: usize, g: Gen, m: Matrix) -> Result<(), ModuleError> {
        let q = self.target(&p, slot, g);
        if !self.in_window(&p) || !self.in_window(&q) {
            return Err(ModuleError::ShapeMismatch { point: p });
        }
        if m.shape() != (self.dim(&q), self.dim(&p)) {
            return Err(ModuleError::ShapeMismatch { point: p });
        }
        if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
            self.maps.remove(&(p, slot, g));
        } else {
            self.maps.insert((p, slot, g), m);
        }
        Ok(())
    }

    /// The map of a generator at `p`; `None` when the target leaves the window.
    pub fn map(&self, p: &[i64], slot: usize, g: Gen) -> Option<Matrix> {
        let q = self.target(p, slot, g);
        if !self.in_window(p) || !self.in_window(&q) {
            return None;
        }
        Some(
            self.maps
                .get(&(p.to_vec(), slot, g))
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(self.dim(&q), self.dim(p))),
        )
    }

    /// The action of the algebra element `g_1 g_2 ⋯ g_k` starting at `p`.
    ///
    /// Left modules apply `g_k` first, right modules apply `g_1` first.
    pub fn act_word(&self, p: &[i64], word: &[(Gen, usize)]) -> Option<(Vec<i64>, Matrix)> {
        let mut cur = p.to_vec();
        let mut m = Matrix::identity(self.dim(p));
        let order: Vec<&(Gen, usize)> = match self.side {
            Side::Left => word.iter().rev().collect(),
            Side::Right => word.iter().collect(),
        };
        for &&(g, slot) in &order {
            let f = self.map(&cur, slot, g)?;
            m = f.mul(&m);
            cur = self.target(&cur, slot, g);
        }
        Some((cur, m))
    }

    /// `H_i` at `p` minus its weight `λ_i + p_i`.
    pub fn h_shifted(&self, p: &[i64], slot: usize) -> Matrix {
        let d = self.dim(p);
        let h = self.map(p, slot, Gen::H).unwrap_or_else(|| Matrix::zeros(d, d));
        h.sub(&Matrix::scalar(d, &self.orbit.weight(p)[slot]))
    }

    /// Checks the defining relations wherever every map involved is known.
    pub fn check_relations(&self) -> Result<(), ModuleError> {
        let n = self.arity();
        for p in self.points() {
            let d = self.dim(&p);
            for i in 0..n {
                let fail = |relation| ModuleError::RelationFailed {
                    point: p.clone(),
                    slot: i,
                    relation,
                };
                if let Some((q, m)) = self.act_word(&p, &[(Gen::D, i), (Gen::I, i)]) {
                    if q != p || !m.is_identity() {
                        return Err(fail("d*int = 1"));
                    }
                }
                // [H, int] = int and [H, d] = -d
                for (g, sign) in [(Gen::I, 1i64), (Gen::D, -1)] {
                    let a = self.act_word(&p, &[(Gen::H, i), (g, i)]);
                    let b = self.act_word(&p, &[(g, i), (Gen::H, i)]);
                    let c = self.act_word(&p, &[(g, i)]);
                    if let (Some((_, a)), Some((_, b)), Some((_, c))) = (a, b, c) {
                        if a.sub(&b) != c.scale(&Scalar::from_int(sign)) {
                            return Err(fail(if sign == 1 { "[H,int] = int" } else { "[H,d] = -d" }));
                        }
                    }
                }
                if d > 0 && !self.h_shifted(&p, i).pow(d as u32).is_zero() {
                    return Err(fail("H - weight nilpotent"));
                }
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    for g in Gen::ALL {
                        for g2 in Gen::ALL {
                            let a = self.act_word(&p, &[(g, i), (g2, j)]);
                            let b = self.act_word(&p, &[(g2, j), (g, i)]);
                            if let (Some(a), Some(b)) = (a, b) {
                                if a != b {
                                    return Err(fail("slot commutation"));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Constant dimension over the support.
    pub fn is_equidimensional(&self) -> bool {
        let mut it = self.dims.values();
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    /// Whether every `H_i` acts as the scalar `λ_i + p_i` at every point.
    pub fn is_weight(&self) -> bool {
        self.first_non_weight().is_none()
    }

    pub(crate) fn first_non_weight(&self) -> Option<(Vec<i64>, usize)> {
        for p in self.support() {
            for i in 0..self.arity() {
                if !self.h_shifted(&p, i).is_zero() {
                    return Some((p, i));
                }
            }
        }
        None
    }

    fn same_frame(&self, o: &ModuleWindow) -> Result<(), ModuleError> {
        if self.side != o.side || self.orbit != o.orbit || self.window != o.window {
            return Err(ModuleError::CenterMismatch);
        }
        Ok(())
    }

    /// `self ⊕ o` with block-diagonal maps.
    pub fn direct_sum(&self, o: &ModuleWindow) -> Result<ModuleWindow, ModuleError> {
        self.same_frame(o)?;
        let mut r = ModuleWindow::empty(self.side, self.orbit.clone(), self.window.clone())?;
        for p in self.points() {
            r.set_dim(p.clone(), self.dim(&p) + o.dim(&p));
        }
        for p in self.points() {
            for i in 0..self.arity() {
                for g in Gen::ALL {
                    if let (Some(a), Some(b)) = (self.map(&p, i, g), o.map(&p, i, g)) {
                        r.set_map(p.clone(), i, g, block_diag_rect(&a, &b))?;
                    }
                }
            }
        }
        Ok(r)
    }

    /// The same module in new bases: column `k` of `bases[p]` becomes basis
    /// vector `k` at `p`. Missing points keep the identity.
    pub fn change_basis(&self, bases: &BTreeMap<Vec<i64>, Matrix>) -> Result<ModuleWindow, ModuleError> {
        let mut inv = BTreeMap::new();
        for (p, b) in bases {
            if b.shape() != (self.dim(p), self.dim(p)) {
                return Err(ModuleError::ShapeMismatch { point: p.clone() });
            }
            let bi = b
                .inverse()
                .map_err(|_| ModuleError::ShapeMismatch { point: p.clone() })?;
            inv.insert(p.clone(), bi);
        }
        let mut r = self.clone();
        r.maps.clear();
        for p in self.points() {
            for i in 0..self.arity() {
                for g in Gen::ALL {
                    let Some(f) = self.map(&p, i, g) else { continue };
                    let q = self.target(&p, i, g);
                    let mut m = f;
                    if let Some(b) = bases.get(&p) {
                        m = m.mul(b);
                    }
                    if let Some(bi) = inv.get(&q) {
                        m = bi.mul(&m);
                    }
                    r.set_map(p.clone(), i, g, m)?;
                }
            }
        }
        Ok(r)
    }

    /// Generator-stability of a family of subspaces (columns of `sub[p]`).
    pub fn check_stable(&self, sub: &BTreeMap<Vec<i64>, Matrix>) -> Result<(), ModuleError> {
        self.restricted_maps(sub).map(|_| ())
    }

    fn sub_basis(&self, sub: &BTreeMap<Vec<i64>, Matrix>, p: &[i64]) -> Matrix {
        sub.get(p)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(p), 0))
    }

    fn restricted_maps(
        &self,
        sub: &BTreeMap<Vec<i64>, Matrix>,
    ) -> Result<BTreeMap<(Vec<i64>, usize, Gen), Matrix>, ModuleError> {
        let mut out = BTreeMap::new();
        for (p, b) in sub {
            if b.rows() != self.dim(p) {
                return Err(ModuleError::ShapeMismatch { point: p.clone() });
            }
        }
        for p in self.points() {
            let bp = self.sub_basis(sub, &p);
            if bp.cols() == 0 {
                continue;
            }
            for i in 0..self.arity() {
                for g in Gen::ALL {
                    let Some(f) = self.map(&p, i, g) else { continue };
                    let q = self.target(&p, i, g);
                    let bq = self.sub_basis(sub, &q);
                    let img = f.mul(&bp);
                    let x = if img.is_zero() {
                        Matrix::zeros(bq.cols(), bp.cols())
                    } else {
                        solve_matrix(&bq, &img)
                            .ok_or_else(|| ModuleError::NotStable { point: p.clone() })?
                    };
                    out.insert((p.clone(), i, g), x);
                }
            }
        }
        Ok(out)
    }

    /// The submodule spanned by the columns of `sub[p]` (assumed independent).
    pub fn submodule(&self, sub: &BTreeMap<Vec<i64>, Matrix>) -> Result<ModuleWindow, ModuleError> {
        let maps = self.restricted_maps(sub)?;
        let mut r = ModuleWindow::empty(self.side, self.orbit.clone(), self.window.clone())?;
        for (p, b) in sub {
            r.set_dim(p.clone(), b.cols());
        }
        for ((p, i, g), m) in maps {
            r.set_map(p, i, g, m)?;
        }
        Ok(r)
    }

    /// The quotient by a stable family of subspaces, in the complement basis
    /// obtained by extending each `sub[p]` with standard vectors.
    pub fn quotient(&self, sub: &BTreeMap<Vec<i64>, Matrix>) -> Result<ModuleWindow, ModuleError> {
        self.check_stable(sub)?;
        let mut comp: BTreeMap<Vec<i64>, Matrix> = BTreeMap::new();
        for p in self.support() {
            let d = self.dim(&p);
            let bp = self.sub_basis(sub, &p);
            let c = crate::algebra_base::complement_basis(d, &bp.columns());
            comp.insert(p.clone(), Matrix::from_columns(d, &c));
        }
        let mut r = ModuleWindow::empty(self.side, self.orbit.clone(), self.window.clone())?;
        for (p, c) in &comp {
            r.set_dim(p.clone(), c.cols());
        }
        for p in self.support() {
            let cp = &comp[&p];
            if cp.cols() == 0 {
                continue;
            }
            for i in 0..self.arity() {
                for g in Gen::ALL {
                    let Some(f) = self.map(&p, i, g) else { continue };
                    let q = self.target(&p, i, g);
                    let Some(cq) = comp.get(&q) else { continue };
                    if cq.cols() == 0 {
                        continue;
                    }
                    let bq = self.sub_basis(sub, &q);
                    let full = cq.hstack(&bq);
                    let x = solve_matrix(&full, &f.mul(cp)).expect("full basis");
                    let top: Vec<usize> = (0..cq.cols()).collect();
                    r.set_map(p.clone(), i, g, x.select_rows(&top))?;
                }
            }
        }
        Ok(r)
    }

    /// The dual right module (or back): `m·a := a*·m`, so `∂` and `∫` swap.
    pub fn dualize(&self) -> ModuleWindow {
        let mut r = self.clone();
        r.side = match self.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        r.maps = self
            .maps
            .iter()
            .map(|((p, i, g), m)| {
                let g2 = match g {
                    Gen::D => Gen::I,
                    Gen::I => Gen::D,
                    Gen::H => Gen::H,
                };
                ((p.clone(), *i, g2), m.clone())
            })
            .collect();
        r
    }

    /// The same module viewed in a window contained in the current one.
    pub fn restrict_window(&self, window: Window) -> Result<ModuleWindow, ModuleError> {
        let mut r = ModuleWindow::empty(self.side, self.orbit.clone(), window)?;
        for p in r.points() {
            if !self.in_window(&p) {
                return Err(ModuleError::CenterMismatch);
            }
            r.set_dim(p.clone(), self.dim(&p));
        }
        for p in r.points() {
            for i in 0..self.arity() {
                for g in Gen::ALL {
                    if r.in_window(&r.target(&p, i, g)) {
                        if let Some(m) = self.map(&p, i, g) {
                            r.set_map(p.clone(), i, g, m)?;
                        }
                    }
                }
            }
        }
        Ok(r)
    }
}

fn block_diag_rect(a: &Matrix, b: &Matrix) -> Matrix {
    let (r1, c1) = a.shape();
    let (r2, c2) = b.shape();
    Matrix::from_fn(r1 + r2, c1 + c2, |r, c| {
        if r < r1 && c < c1 {
            a.get(r, c).clone()
        } else if r >= r1 && c >= c1 {
            b.get(r - r1, c - c1).clone()
        } else {
            Scalar::zero()
        }
    })
}

#[cfg(test)]
mod tests;
