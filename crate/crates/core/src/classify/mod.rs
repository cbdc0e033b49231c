//! Representation type verdicts and the tame classifications.
//!
//! Finite-dimensional modules are handled as [`FinModule`]s: a space `K^d`
//! with the matrices of a generating set of the acting algebra.

mod drozd;
mod gamma;
mod kronecker;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra_base::{Field, Matrix, Scalar};
use crate::weight_modules::{DSet, Fiber, Orbit};

pub use drozd::{tame_local_ideal, Factorization, TameReason, TameVerdict};
pub use gamma::{
    a_regular_module, band_module, band_module_from_word, contains_regular, ind_a_members,
    lambda_to_original, string_module, AMember, BandOrbit, GammaKind, GammaModule, Letter,
};
pub use kronecker::{
    kronecker_block, kronecker_decompose, kronecker_hom_basis, kronecker_isomorphism, KroneckerLabel,
    KroneckerRep,
};

/// Errors of the classifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyError {
    DimensionMismatch,
    EigenvalueOutsideField { field: Field },
    EntryOutsideField { field: Field },
    CertificationFailed,
    PeriodicOrbit,
    ZeroParameter,
    NonPositiveSize,
    FieldLacksI,
    ArityNotTwo(usize),
    ArityNotOne(usize),
    NotNilpotent,
    NotLocalModule,
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::DimensionMismatch => f.write_str("matrix dimensions do not match"),
            ClassifyError::EigenvalueOutsideField { field } => {
                write!(f, "pencil has an eigenvalue outside {}", field.name())
            }
            ClassifyError::EntryOutsideField { field } => {
                write!(f, "matrix entry outside {}", field.name())
            }
            ClassifyError::CertificationFailed => f.write_str("decomposition failed to certify"),
            ClassifyError::PeriodicOrbit => f.write_str("band word is periodic"),
            ClassifyError::ZeroParameter => f.write_str("band parameter must be nonzero"),
            ClassifyError::NonPositiveSize => f.write_str("block size must be positive"),
            ClassifyError::FieldLacksI => f.write_str("the field must contain i (use qi)"),
            ClassifyError::ArityNotTwo(n) => write!(f, "expected 2 variables, found {}", n),
            ClassifyError::ArityNotOne(n) => write!(f, "expected 1 variable, found {}", n),
            ClassifyError::NotNilpotent => f.write_str("matrix minus the center is not nilpotent"),
            ClassifyError::NotLocalModule => f.write_str("module is not annihilated by m^2"),
        }
    }
}

/// `K^d` with the action matrices of a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinModule {
    pub dim: usize,
    pub gens: Vec<Matrix>,
}

impl FinModule {
    pub fn new(dim: usize, gens: Vec<Matrix>) -> Result<FinModule, ClassifyError> {
        if gens.iter().any(|g| g.shape() != (dim, dim)) {
            return Err(ClassifyError::DimensionMismatch);
        }
        Ok(FinModule { dim, gens })
    }

    pub fn direct_sum(&self, o: &FinModule) -> FinModule {
        FinModule {
            dim: self.dim + o.dim,
            gens: self
                .gens
                .iter()
                .zip(&o.gens)
                .map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()]))
                .collect(),
        }
    }

    /// The same module in the basis given by the columns of `p`.
    pub fn conjugate(&self, p: &Matrix) -> FinModule {
        let pi = p.inverse().expect("invertible base change");
        FinModule {
            dim: self.dim,
            gens: self.gens.iter().map(|g| pi.mul(g).mul(p)).collect(),
        }
    }
}

/// Basis of `Hom(V, W)`: matrices `X` with `X·g_V = g_W·X`.
pub fn hom_basis(v: &FinModule, w: &FinModule) -> Vec<Matrix> {
    let (dv, dw) = (v.dim, w.dim);
    let unknowns = dv * dw;
    if unknowns == 0 {
        return Vec::new();
    }
    let idx = |r: usize, c: usize| r * dv + c;
    let mut rows = Vec::new();
    for (gv, gw) in v.gens.iter().zip(&w.gens) {
        for r in 0..dw {
            for c in 0..dv {
                let mut row = vec![Scalar::zero(); unknowns];
                for k in 0..dv {
                    row[idx(r, k)] += gv.get(k, c);
                }
                for k in 0..dw {
                    row[idx(k, c)] -= gw.get(r, k);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel: Vec<Vec<Scalar>> = if rows.is_empty() {
        (0..unknowns)
            .map(|u| {
                let mut e = vec![Scalar::zero(); unknowns];
                e[u] = Scalar::one();
                e
            })
            .collect()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    kernel
        .into_iter()
        .map(|k| Matrix::from_fn(dw, dv, |r, c| k[idx(r, c)].clone()))
        .collect()
}

/// `End(V)`.
pub fn endomorphism_basis(v: &FinModule) -> Vec<Matrix> {
    hom_basis(v, v)
}

/// `dim End(V)/rad End(V)`, the radical being the kernel of the trace form.
pub fn end_semisimple_dim(v: &FinModule) -> usize {
    let e = endomorphism_basis(v);
    let m = e.len();
    let gram = Matrix::from_fn(m, m, |a, b| e[a].mul(&e[b]).trace());
    gram.rank()
}

/// `End(V)/rad = K`: `V` is nonzero and (absolutely) indecomposable.
pub fn is_indecomposable(v: &FinModule) -> bool {
    v.dim > 0 && end_semisimple_dim(v) == 1
}

/// For indecomposable `V`, `W`: isomorphic iff some `g∘f` over Hom bases is
/// invertible.
pub fn isomorphic_indecomposables(v: &FinModule, w: &FinModule) -> bool {
    if v.dim != w.dim {
        return false;
    }
    let f = hom_basis(v, w);
    let g = hom_basis(w, v);
    f.iter()
        .any(|f| g.iter().any(|g| g.mul(f).is_invertible()))
}

/// An isomorphism `V → W` found as a seeded random element of `Hom(V, W)`.
pub fn find_isomorphism(v: &FinModule, w: &FinModule, seed: u64) -> Option<Matrix> {
    if v.dim != w.dim {
        return None;
    }
    let basis = hom_basis(v, w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let mut x = Matrix::zeros(w.dim, v.dim);
        for b in &basis {
            x = x.add(&b.scale(&Scalar::from_int(rng.random_range(-50..=50))));
        }
        if x.is_invertible() {
            return Some(x);
        }
    }
    None
}

/// Representation type of a category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RepType {
    Finite,
    Tame,
    Wild,
}

impl RepType {
    pub fn name(self) -> &'static str {
        match self {
            RepType::Finite => "finite",
            RepType::Tame => "tame",
            RepType::Wild => "wild",
        }
    }
}

/// The condition that decided a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepTypeWitness {
    /// `𝒟 = {1..n}` (so `Ω = ℤⁿ`).
    AllDegenerate,
    /// `|𝒟| = n − 1`.
    OneNonDegenerate,
    /// `n ≥ 2` and `|𝒟| < n − 1`.
    ManyNonDegenerate { free: usize },
    /// Whole orbit with `n = 1`.
    OrbitArityOne,
    /// Whole orbit with `n ≥ 2`.
    OrbitArityAtLeastTwo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepTypeVerdict {
    pub kind: RepType,
    pub witness: RepTypeWitness,
}

/// Representation type of generalized weight modules with support in `𝒟`'s block.
pub fn rep_type(d: &DSet) -> RepTypeVerdict {
    let n = d.arity();
    let free = n - d.degenerate().len();
    match free {
        0 => RepTypeVerdict {
            kind: RepType::Finite,
            witness: RepTypeWitness::AllDegenerate,
        },
        1 => RepTypeVerdict {
            kind: RepType::Tame,
            witness: RepTypeWitness::OneNonDegenerate,
        },
        _ => RepTypeVerdict {
            kind: RepType::Wild,
            witness: RepTypeWitness::ManyNonDegenerate { free },
        },
    }
}

/// Representation type of all generalized weight modules over one orbit.
pub fn rep_type_orbit(o: &Orbit) -> RepTypeVerdict {
    if o.arity() <= 1 {
        RepTypeVerdict {
            kind: RepType::Tame,
            witness: RepTypeWitness::OrbitArityOne,
        }
    } else {
        RepTypeVerdict {
            kind: RepType::Wild,
            witness: RepTypeWitness::OrbitArityAtLeastTwo,
        }
    }
}

/// Jordan block sizes of `a − λ`, largest first.
pub fn jordan_block_sizes(a: &Matrix, lambda: &Scalar) -> Result<Vec<usize>, ClassifyError> {
    if !a.is_square() {
        return Err(ClassifyError::DimensionMismatch);
    }
    let d = a.rows();
    let n = a.sub(&Matrix::scalar(d, lambda));
    // r[j] = dim ker N^j
    let mut r = vec![0usize];
    let mut p = Matrix::identity(d);
    while *r.last().expect("nonempty") < d {
        p = p.mul(&n);
        let k = d - p.rank();
        if k == *r.last().expect("nonempty") {
            return Err(ClassifyError::NotNilpotent);
        }
        r.push(k);
    }
    let at_least = |j: usize| if j < r.len() { r[j] - r[j - 1] } else { 0 };
    let mut sizes = Vec::new();
    for j in (1..r.len()).rev() {
        for _ in 0..(at_least(j) - at_least(j + 1)) {
            sizes.push(j);
        }
    }
    Ok(sizes)
}

/// `N ≅ ⊕ K[H]/(H − λ)^s`, so the induced module is `⊕ M(s, λ)`.
pub fn jordan_fiber_decompose(f: &Fiber) -> Result<Vec<(usize, Scalar)>, ClassifyError> {
    if f.arity() != 1 {
        return Err(ClassifyError::ArityNotOne(f.arity()));
    }
    let lambda = f.center()[0].clone();
    Ok(jordan_block_sizes(&f.matrices()[0], &lambda)?
        .into_iter()
        .map(|s| (s, lambda.clone()))
        .collect())
}
