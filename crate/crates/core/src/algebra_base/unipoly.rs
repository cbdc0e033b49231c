//! Sparse univariate polynomials in `H`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::Scalar;

/// A polynomial in one variable with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct UniPoly {
    coeffs: BTreeMap<u32, Scalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        UniPoly::monomial(0, c)
    }

    pub fn one() -> Self {
        UniPoly::constant(Scalar::one())
    }

    /// `c·H^k`.
    pub fn monomial(k: u32, c: Scalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        UniPoly { coeffs }
    }

    /// `H − c`.
    pub fn linear_root(c: &Scalar) -> Self {
        let mut p = UniPoly::monomial(1, Scalar::one());
        p.add_term(0, -c);
        p
    }

    /// Builds from dense coefficients, constant term first.
    pub fn from_dense(cs: &[Scalar]) -> Self {
        let mut p = UniPoly::zero();
        for (k, c) in cs.iter().enumerate() {
            p.add_term(k as u32, c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: u32) -> Scalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.coeffs
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Nonzero `(degree, coefficient)` pairs in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, k: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let mut r = self.clone();
        for (k, c) in o.terms() {
            r.add_term(k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let mut r = self.clone();
        for (k, c) in o.terms() {
            r.add_term(k, -c);
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        if s.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        let mut r = UniPoly::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in o.terms() {
                r.add_term(a + b, ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut r = UniPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let Some(d) = self.degree() else {
            return Scalar::zero();
        };
        let mut acc = Scalar::zero();
        for k in (0..=d).rev() {
            acc = &(&acc * x) + &self.coeff(k);
        }
        acc
    }

    /// `p(H + c)`.
    pub fn shift(&self, c: &Scalar) -> UniPoly {
        if c.is_zero() {
            return self.clone();
        }
        let Some(d) = self.degree() else {
            return UniPoly::zero();
        };
        let lin = {
            let mut l = UniPoly::monomial(1, Scalar::one());
            l.add_term(0, c.clone());
            l
        };
        let mut acc = UniPoly::zero();
        for k in (0..=d).rev() {
            acc = acc.mul(&lin);
            acc.add_term(0, self.coeff(k));
        }
        acc
    }

    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    /// Panics if `d` is zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.leading_coeff().inv().expect("nonzero leading coefficient");
        let mut q = UniPoly::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = &r.leading_coeff() * &lc_inv;
            let t = UniPoly::monomial(rd - dd, c);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        (q, r)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UniPoly {
        let mut r = UniPoly::zero();
        for (k, c) in self.terms() {
            if k > 0 {
                r.add_term(k - 1, c * &Scalar::from_int(k as i64));
            }
        }
        r
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading_coeff().inv() {
            Some(inv) => self.scale(&inv),
            None => UniPoly::zero(),
        }
    }

    /// Dense coefficients, constant term first.
    pub fn to_dense(&self) -> Vec<Scalar> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*H", c)?,
                _ => write!(f, "({})*H^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
