//! Modules over `Γ = K[h₁,h₂]/(h₁h₂)` and over `A = K[h₁,h₂]/(h₁², h₂²)`.
//!
//! Letter `w_i` links basis block `i` to block `i + 1`: an `h₁` letter acts
//! forward along the link and an `h₂` letter backward, so `h₁h₂ = h₂h₁ = 0`.
//! A band carries its Jordan block on the last link, as `J_n(λ)` on an `h₂`
//! letter and `J_n(λ⁻¹)` on an `h₁` letter, so the monodromy is `J_n(λ)` for
//! every rotation of the word.

use alloc::vec;
use alloc::vec::Vec;

use super::{ClassifyError, FinModule};
use crate::algebra_base::{Field, Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    H1,
    H2,
}

impl Letter {
    pub fn parse(c: char) -> Option<Letter> {
        match c {
            '1' => Some(Letter::H1),
            '2' => Some(Letter::H2),
            _ => None,
        }
    }

    pub fn digit(self) -> char {
        match self {
            Letter::H1 => '1',
            Letter::H2 => '2',
        }
    }
}

fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    let l = w.len();
    (0..l)
        .map(|k| {
            let mut r = w[k..].to_vec();
            r.extend_from_slice(&w[..k]);
            r
        })
        .min()
        .unwrap_or_default()
}

/// Smallest period of `w` from its failure function.
fn minimal_period(w: &[Letter]) -> usize {
    let l = w.len();
    if l == 0 {
        return 0;
    }
    let mut fail = vec![0usize; l];
    let mut k = 0;
    for i in 1..l {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = l - fail[l - 1];
    if l % p == 0 {
        p
    } else {
        l
    }
}

/// A non-periodic cyclic word, stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BandOrbit {
    canonical: Vec<Letter>,
}

impl BandOrbit {
    pub fn new(w: &[Letter]) -> Result<BandOrbit, ClassifyError> {
        if w.is_empty() {
            return Err(ClassifyError::NonPositiveSize);
        }
        if minimal_period(w) != w.len() {
            return Err(ClassifyError::PeriodicOrbit);
        }
        Ok(BandOrbit {
            canonical: least_rotation(w),
        })
    }

    pub fn word(&self) -> &[Letter] {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    /// All non-periodic orbits of length `l`.
    pub fn all_of_length(l: usize) -> Vec<BandOrbit> {
        let mut out: Vec<BandOrbit> = Vec::new();
        for mask in 0..(1u32 << l) {
            let w: Vec<Letter> = (0..l)
                .map(|k| if mask & (1 << k) != 0 { Letter::H2 } else { Letter::H1 })
                .collect();
            if let Ok(o) = BandOrbit::new(&w) {
                if !out.contains(&o) {
                    out.push(o);
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaKind {
    Simple,
    String(Vec<Letter>),
    Band { word: Vec<Letter>, n: usize, lambda: Scalar },
}

/// A finite-dimensional `Γ`-module with the matrices of `h₁, h₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaModule {
    pub kind: GammaKind,
    pub h1: Matrix,
    pub h2: Matrix,
}

impl GammaModule {
    pub fn dim(&self) -> usize {
        self.h1.rows()
    }

    pub fn to_module(&self) -> FinModule {
        FinModule {
            dim: self.dim(),
            gens: vec![self.h1.clone(), self.h2.clone()],
        }
    }

    /// `h₁h₂ = h₂h₁ = 0`.
    pub fn satisfies_relation(&self) -> bool {
        self.h1.mul(&self.h2).is_zero() && self.h2.mul(&self.h1).is_zero()
    }
}

/// `M_w` on `e₁..e_{l+1}`; the empty word gives the simple module `K`.
pub fn string_module(w: &[Letter]) -> GammaModule {
    let d = w.len() + 1;
    let mut h1 = Matrix::zeros(d, d);
    let mut h2 = Matrix::zeros(d, d);
    for (i, l) in w.iter().enumerate() {
        match l {
            Letter::H1 => h1.set(i + 1, i, Scalar::one()),
            Letter::H2 => h2.set(i, i + 1, Scalar::one()),
        }
    }
    let kind = if w.is_empty() {
        GammaKind::Simple
    } else {
        GammaKind::String(w.to_vec())
    };
    GammaModule { kind, h1, h2 }
}

/// `J_n(λ)`: `λ` on the diagonal, `1` above it.
fn jordan(n: usize, lambda: &Scalar) -> Matrix {
    Matrix::from_fn(n, n, |r, c| {
        if r == c {
            lambda.clone()
        } else if c == r + 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// `N(𝕆, n, λ)` built on the given representative word.
pub fn band_module_from_word(w: &[Letter], n: usize, lambda: &Scalar) -> Result<GammaModule, ClassifyError> {
    BandOrbit::new(w)?;
    if n == 0 {
        return Err(ClassifyError::NonPositiveSize);
    }
    if lambda.is_zero() {
        return Err(ClassifyError::ZeroParameter);
    }
    let l = w.len();
    let d = n * l;
    let mut h1 = Matrix::zeros(d, d);
    let mut h2 = Matrix::zeros(d, d);
    for (i, letter) in w.iter().enumerate() {
        let j = (i + 1) % l;
        let link = if i + 1 == l {
            if l == 1 || *letter == Letter::H2 {
                jordan(n, lambda)
            } else {
                jordan(n, &lambda.inv().expect("λ ≠ 0"))
            }
        } else {
            Matrix::identity(n)
        };
        let (target, row0, col0) = match letter {
            Letter::H1 => (&mut h1, j * n, i * n),
            Letter::H2 => (&mut h2, i * n, j * n),
        };
        for r in 0..n {
            for c in 0..n {
                target.set(row0 + r, col0 + c, link.get(r, c).clone());
            }
        }
    }
    Ok(GammaModule {
        kind: GammaKind::Band {
            word: w.to_vec(),
            n,
            lambda: lambda.clone(),
        },
        h1,
        h2,
    })
}

/// `N(𝕆, n, λ)` on the canonical representative.
pub fn band_module(o: &BandOrbit, n: usize, lambda: &Scalar) -> Result<GammaModule, ClassifyError> {
    band_module_from_word(o.word(), n, lambda)
}

/// The regular module `A` on `1, h₁, h₂, h₁h₂`.
pub fn a_regular_module() -> FinModule {
    let mut h1 = Matrix::zeros(4, 4);
    let mut h2 = Matrix::zeros(4, 4);
    h1.set(1, 0, Scalar::one());
    h1.set(3, 2, Scalar::one());
    h2.set(2, 0, Scalar::one());
    h2.set(3, 1, Scalar::one());
    FinModule {
        dim: 4,
        gens: vec![h1, h2],
    }
}

/// Rewrites a module given by `h₁' = h₁ + ih₂`, `h₂' = h₁ − ih₂` in terms of
/// `h₁ = (h₁' + h₂')/2`, `h₂ = (h₁' − h₂')/(2i)`.
pub fn lambda_to_original(m: &GammaModule) -> FinModule {
    let half = Scalar::from_ratio(1, 2);
    let inv_2i = (&Scalar::from_int(2) * &Scalar::i()).inv().expect("nonzero");
    FinModule {
        dim: m.dim(),
        gens: vec![
            m.h1.add(&m.h2).scale(&half),
            m.h1.sub(&m.h2).scale(&inv_2i),
        ],
    }
}

/// An indecomposable `A`-module of the classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AMember {
    Simple,
    /// An alternating string of `Λ` written in `h₁', h₂'`.
    String(Vec<Letter>),
    /// The band family `N(h₁'h₂', n, λ)`, `λ ≠ 0`.
    BandFamily { n: usize },
    Regular,
}

impl AMember {
    pub fn dim(&self) -> usize {
        match self {
            AMember::Simple => 1,
            AMember::String(w) => w.len() + 1,
            AMember::BandFamily { n } => 2 * n,
            AMember::Regular => 4,
        }
    }

    /// The module in the original variables; bands need a parameter.
    pub fn module(&self, lambda: Option<&Scalar>) -> Result<FinModule, ClassifyError> {
        match self {
            AMember::Simple => Ok(lambda_to_original(&string_module(&[]))),
            AMember::String(w) => Ok(lambda_to_original(&string_module(w))),
            AMember::BandFamily { n } => {
                let l = lambda.ok_or(ClassifyError::ZeroParameter)?;
                let b = band_module_from_word(&[Letter::H1, Letter::H2], *n, l)?;
                Ok(lambda_to_original(&b))
            }
            AMember::Regular => Ok(a_regular_module()),
        }
    }
}

/// Indecomposable `A`-modules of dimension at most `bound`: `K`, the
/// alternating strings and the band families of `Λ`, and `A` itself.
pub fn ind_a_members(bound: usize, field: Field) -> Result<Vec<AMember>, ClassifyError> {
    if field != Field::Gaussian {
        return Err(ClassifyError::FieldLacksI);
    }
    let mut out = Vec::new();
    if bound >= 1 {
        out.push(AMember::Simple);
    }
    for l in 1..bound {
        for first in [Letter::H1, Letter::H2] {
            let w: Vec<Letter> = (0..l)
                .map(|k| {
                    if (k % 2 == 0) == (first == Letter::H1) {
                        Letter::H1
                    } else {
                        Letter::H2
                    }
                })
                .collect();
            out.push(AMember::String(w));
        }
    }
    for n in 1..=bound / 2 {
        out.push(AMember::BandFamily { n });
    }
    if bound >= 4 {
        out.push(AMember::Regular);
    }
    Ok(out)
}

/// A vector `a` with `A·a ≅ A`, present whenever `𝔪²M ≠ 0`.
pub fn contains_regular(m: &FinModule) -> Option<Vec<Scalar>> {
    let (h1, h2) = (&m.gens[0], &m.gens[1]);
    let p = h1.mul(h2);
    let c = (0..m.dim).find(|&c| p.column(c).iter().any(|x| !x.is_zero()))?;
    let mut a = vec![Scalar::zero(); m.dim];
    a[c] = Scalar::one();
    let span = Matrix::from_columns(
        m.dim,
        &[a.clone(), h1.mul_vec(&a), h2.mul_vec(&a), p.mul_vec(&a)],
    );
    (span.rank() == 4).then_some(a)
}
