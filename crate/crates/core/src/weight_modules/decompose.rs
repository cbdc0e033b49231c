//! Block decomposition by annihilator, weight decomposition and splitting.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::{DSet, Gen, ModuleError, ModuleWindow, Side};
use crate::algebra_base::{intersect_spans, span_basis, Matrix, Scalar, SolutionSet, SparseSystem};

/// The generator moving slot `i` up (`∫` on the left, `∂` on the right).
fn raise(m: &ModuleWindow) -> Gen {
    match m.side() {
        Side::Left => Gen::I,
        Side::Right => Gen::D,
    }
}

fn lower(m: &ModuleWindow) -> Gen {
    match m.side() {
        Side::Left => Gen::D,
        Side::Right => Gen::I,
    }
}

fn require_window(m: &ModuleWindow, slot: usize) -> Result<(), ModuleError> {
    let (a, b) = m.window()[slot];
    if a > 0 || b < 1 {
        return Err(ModuleError::WindowTooSmall { slot, needed: (0, 1) });
    }
    Ok(())
}

/// Applies `g` to slot `i` repeatedly, `steps` times, starting at `p`.
fn walk(m: &ModuleWindow, p: &[i64], i: usize, g: Gen, steps: i64) -> (Vec<i64>, Matrix) {
    let mut cur = p.to_vec();
    let mut x = Matrix::identity(m.dim(p));
    for _ in 0..steps {
        let f = m.map(&cur, i, g).expect("path inside the window");
        x = f.mul(&x);
        cur = m.target(&cur, i, g);
    }
    (cur, x)
}

/// `e₀₀(i) = 1 − ∫_i∂_i` at a point with `p_i = 1`.
fn e00(m: &ModuleWindow, p: &[i64], i: usize) -> Matrix {
    let d = m.dim(p);
    let (_, down) = walk(m, p, i, lower(m), 1);
    let q = m.target(p, i, lower(m));
    let up = m.map(&q, i, raise(m)).expect("path inside the window");
    Matrix::identity(d).sub(&up.mul(&down))
}

/// `𝒟 = {i : F(i)·M ≠ 0}`, so that `ann M = Σ_{i∉𝒟} 𝔭_i`.
pub fn annihilator_dset(m: &ModuleWindow) -> Result<DSet, ModuleError> {
    let orbit = m.orbit().clone();
    let mut d = Vec::new();
    for i in orbit.integer_slots() {
        require_window(m, i)?;
        let mut acts = None;
        for p in m.support() {
            if p[i] != 1 {
                continue;
            }
            let e = e00(m, &p, i);
            let here = if e.is_identity() {
                true
            } else if e.is_zero() {
                false
            } else {
                return Err(ModuleError::InconsistentSlot { slot: i });
            };
            if acts.is_some_and(|a| a != here) {
                return Err(ModuleError::InconsistentSlot { slot: i });
            }
            acts = Some(here);
        }
        if acts == Some(true) {
            if m.support().iter().any(|p| p[i] <= 0) {
                return Err(ModuleError::InconsistentSlot { slot: i });
            }
            d.push(i);
        }
    }
    DSet::new(orbit, d)
}

/// One summand `M_𝒟` of the annihilator decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub dset: DSet,
    pub module: ModuleWindow,
    /// Columns span the block inside the input at each point.
    pub basis: BTreeMap<Vec<i64>, Matrix>,
}

fn to_matrix(rows: usize, vs: &[Vec<Scalar>]) -> Matrix {
    Matrix::from_columns(rows, vs)
}

/// `M = ⊕_𝒟 M_𝒟` with each summand absolutely `𝔞(𝒟)`-prime.
///
/// At `p` the `𝒟`-part is `⋂_{i∈𝒟} P_i ∩ ⋂_{i∉𝒟} A_i`, where
/// `P_i = ∫_i^{p_i−1}(e₀₀(i)M)` and `A_i = ker e₀₀(i)∂_i^{p_i−1}`.
pub fn block_decompose(m: &ModuleWindow) -> Result<Vec<Block>, ModuleError> {
    let orbit = m.orbit().clone();
    let ints = orbit.integer_slots();
    for &i in &ints {
        require_window(m, i)?;
    }
    // per point and integer slot: (P_i, A_i)
    let mut parts: BTreeMap<(Vec<i64>, usize), (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>)> =
        BTreeMap::new();
    for p in m.support() {
        let d = m.dim(&p);
        for &i in &ints {
            if p[i] <= 0 {
                parts.insert((p.clone(), i), (Vec::new(), Matrix::identity(d).columns()));
                continue;
            }
            let mut base = p.clone();
            base[i] = 1;
            let (_, up) = walk(m, &base, i, raise(m), p[i] - 1);
            let (_, down) = walk(m, &p, i, lower(m), p[i] - 1);
            let e = e00(m, &base, i);
            let pi = if m.dim(&base) == 0 {
                Vec::new()
            } else {
                span_basis(d, &up.mul(&e).columns())
            };
            let ai = if m.dim(&base) == 0 {
                Matrix::identity(d).columns()
            } else {
                e.mul(&down).kernel()
            };
            parts.insert((p.clone(), i), (pi, ai));
        }
    }
    let mut blocks = Vec::new();
    let mut totals: BTreeMap<Vec<i64>, Vec<Vec<Scalar>>> = BTreeMap::new();
    for dset in DSet::all_for(&orbit) {
        let mut basis = BTreeMap::new();
        for p in m.support() {
            let d = m.dim(&p);
            let mut span = Matrix::identity(d).columns();
            for &i in &ints {
                let (pi, ai) = &parts[&(p.clone(), i)];
                let s = if dset.contains(i) { pi } else { ai };
                span = intersect_spans(d, &span, s);
                if span.is_empty() {
                    break;
                }
            }
            if !span.is_empty() {
                totals.entry(p.clone()).or_default().extend(span.iter().cloned());
                basis.insert(p.clone(), to_matrix(d, &span));
            }
        }
        if !basis.is_empty() {
            blocks.push((dset, basis));
        }
    }
    for p in m.support() {
        let d = m.dim(&p);
        let all = totals.remove(&p).unwrap_or_default();
        if all.len() != d || to_matrix(d, &all).rank() != d {
            return Err(ModuleError::CertificationFailed { point: p });
        }
    }
    if blocks.len() == 1 {
        let (dset, _) = blocks.pop().expect("one block");
        let basis = m
            .support()
            .into_iter()
            .map(|p| {
                let d = m.dim(&p);
                (p, Matrix::identity(d))
            })
            .collect();
        return Ok(alloc::vec![Block {
            dset,
            module: m.clone(),
            basis,
        }]);
    }
    blocks
        .into_iter()
        .map(|(dset, basis)| {
            let module = m.submodule(&basis)?;
            Ok(Block {
                dset,
                module,
                basis,
            })
        })
        .collect()
}

/// Multiplicities of the simple modules `M(𝒟)` in a weight module.
pub fn decompose_weight(m: &ModuleWindow) -> Result<Vec<(DSet, usize)>, ModuleError> {
    if let Some((point, slot)) = m.first_non_weight() {
        return Err(ModuleError::NotWeight { point, slot });
    }
    let mut out = Vec::new();
    for b in block_decompose(m)? {
        let p0 = b.dset.base_point();
        let mult = if b.module.dim(&p0) > 0 {
            b.module.dim(&p0)
        } else {
            b.module.dims().values().copied().max().unwrap_or(0)
        };
        out.push((b.dset, mult));
    }
    Ok(out)
}

/// A generator-stable complement together with the equivariant projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complement {
    /// Columns span the complement at each point.
    pub basis: BTreeMap<Vec<i64>, Matrix>,
    /// `π_p : M_p → S_p` with `π_p|_S = 1` and kernel the complement.
    pub projection: BTreeMap<Vec<i64>, Matrix>,
}

/// Searches for a complement of the stable family `S` by solving for an
/// equivariant projection onto `S`; `None` when none exists on the window.
pub fn split_extension(
    m: &ModuleWindow,
    sub: &BTreeMap<Vec<i64>, Matrix>,
) -> Result<Option<Complement>, ModuleError> {
    let restricted = m.restricted_maps(sub)?;
    let pts = m.support();
    let srows = |p: &[i64]| m.sub_basis(sub, p).cols();
    let mut offset = BTreeMap::new();
    let mut total = 0;
    for p in &pts {
        offset.insert(p.clone(), total);
        total += srows(p) * m.dim(p);
    }
    let var = |p: &[i64], r: usize, c: usize| offset[p] + r * m.dim(p) + c;
    let mut sys = SparseSystem::new(total);
    for p in &pts {
        let b = m.sub_basis(sub, p);
        let (s, d) = (b.cols(), m.dim(p));
        for r in 0..s {
            for c in 0..s {
                let mut eq = BTreeMap::new();
                for k in 0..d {
                    if !b.get(k, c).is_zero() {
                        eq.insert(var(p, r, k), b.get(k, c).clone());
                    }
                }
                let rhs = if r == c { Scalar::one() } else { Scalar::zero() };
                sys.add_equation(eq, rhs);
            }
        }
    }
    for p in &pts {
        for i in 0..m.arity() {
            for g in Gen::ALL {
                let Some(f) = m.map(p, i, g) else { continue };
                let q = m.target(p, i, g);
                let (sp, sq) = (srows(p), srows(&q));
                if sq == 0 || m.dim(&q) == 0 {
                    continue;
                }
                let fs = restricted
                    .get(&(p.clone(), i, g))
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(sq, sp));
                // π_q f − f_S π_p = 0
                for r in 0..sq {
                    for c in 0..m.dim(p) {
                        let mut eq: BTreeMap<usize, Scalar> = BTreeMap::new();
                        for k in 0..m.dim(&q) {
                            let v = f.get(k, c);
                            if !v.is_zero() {
                                *eq.entry(var(&q, r, k)).or_insert_with(Scalar::zero) += v;
                            }
                        }
                        for k in 0..sp {
                            let v = fs.get(r, k);
                            if !v.is_zero() {
                                *eq.entry(var(p, k, c)).or_insert_with(Scalar::zero) -= v;
                            }
                        }
                        eq.retain(|_, v| !v.is_zero());
                        sys.add_equation(eq, Scalar::zero());
                    }
                }
            }
        }
    }
    let x = match sys.solve() {
        SolutionSet::Inconsistent => return Ok(None),
        SolutionSet::Solutions { particular, .. } => particular,
    };
    let mut basis = BTreeMap::new();
    let mut projection = BTreeMap::new();
    for p in &pts {
        let (s, d) = (srows(p), m.dim(p));
        let pi = Matrix::from_fn(s, d, |r, c| x[var(p, r, c)].clone());
        let ker = if s == 0 {
            Matrix::identity(d).columns()
        } else {
            pi.kernel()
        };
        if !ker.is_empty() {
            basis.insert(p.clone(), to_matrix(d, &ker));
        }
        projection.insert(p.clone(), pi);
    }
    m.check_stable(&basis)?;
    Ok(Some(Complement { basis, projection }))
}

/// The submodule generated by the given vectors, closed within the window.
pub fn generated_submodule(
    m: &ModuleWindow,
    gens: &BTreeMap<Vec<i64>, Vec<Vec<Scalar>>>,
) -> BTreeMap<Vec<i64>, Matrix> {
    let mut spans: BTreeMap<Vec<i64>, Vec<Vec<Scalar>>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (p, vs) in gens {
        let b = span_basis(m.dim(p), vs);
        if !b.is_empty() {
            spans.insert(p.clone(), b);
            queue.push_back(p.clone());
        }
    }
    while let Some(p) = queue.pop_front() {
        let src = to_matrix(m.dim(&p), &spans[&p]);
        for i in 0..m.arity() {
            for g in Gen::ALL {
                let Some(f) = m.map(&p, i, g) else { continue };
                let q = m.target(&p, i, g);
                let dq = m.dim(&q);
                if dq == 0 {
                    continue;
                }
                let mut vs = spans.get(&q).cloned().unwrap_or_default();
                let before = vs.len();
                vs.extend(f.mul(&src).columns());
                let b = span_basis(dq, &vs);
                if b.len() > before {
                    spans.insert(q.clone(), b);
                    queue.push_back(q);
                }
            }
        }
    }
    spans
        .into_iter()
        .map(|(p, vs)| {
            let d = m.dim(&p);
            (p, to_matrix(d, &vs))
        })
        .collect()
}

/// Whether `annihilator_dset` agrees on `M`, on every cyclic submodule
/// generated by a basis vector, and on the corresponding quotients.
pub fn is_absolutely_prime_window(m: &ModuleWindow) -> bool {
    if m.is_zero() {
        return false;
    }
    let Ok(label) = annihilator_dset(m) else {
        return false;
    };
    for p in m.support() {
        let d = m.dim(&p);
        for k in 0..d {
            let mut e = alloc::vec![Scalar::zero(); d];
            e[k] = Scalar::one();
            let mut gens = BTreeMap::new();
            gens.insert(p.clone(), alloc::vec![e]);
            let c = generated_submodule(m, &gens);
            let Ok(sub) = m.submodule(&c) else {
                return false;
            };
            if annihilator_dset(&sub).ok().as_ref() != Some(&label) {
                return false;
            }
            let Ok(quo) = m.quotient(&c) else {
                return false;
            };
            if !quo.is_zero() && annihilator_dset(&quo).ok().as_ref() != Some(&label) {
                return false;
            }
        }
    }
    true
}
