//! Exact roots of univariate polynomials inside the configured field.
//!
//! Candidates come from the rational root theorem over ℤ, or over the
//! Gaussian integers ℤ[i] when the field is ℚ(i); every candidate is checked
//! by exact evaluation, so the answer is complete and exact.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, Scalar, UniPoly};

/// A Gaussian integer `a + b·i`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt(BigInt, BigInt);

impl GaussInt {
    fn norm(&self) -> BigInt {
        &self.0 * &self.0 + &self.1 * &self.1
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt(
            &self.0 * &o.0 - &self.1 * &o.1,
            &self.0 * &o.1 + &self.1 * &o.0,
        )
    }

    /// Exact quotient if `o` divides `self`.
    fn div_exact(&self, o: &GaussInt) -> Option<GaussInt> {
        let n = o.norm();
        let re = &self.0 * &o.0 + &self.1 * &o.1;
        let im = &self.1 * &o.0 - &self.0 * &o.1;
        if (&re % &n).is_zero() && (&im % &n).is_zero() {
            Some(GaussInt(re / &n, im / &n))
        } else {
            None
        }
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::from_parts(
            BigRational::from_integer(self.0.clone()),
            BigRational::from_integer(self.1.clone()),
        )
    }
}

/// Prime factorization of a positive integer by trial division.
fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n ≠ 0`.
fn integer_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factor_integer(n) {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Gaussian primes above the rational prime `p`.
fn gaussian_primes_over(p: &BigInt) -> Vec<GaussInt> {
    if p == &BigInt::from(2) {
        return vec![GaussInt(BigInt::one(), BigInt::one())];
    }
    let four = BigInt::from(4);
    if (p % &four) == BigInt::from(3) {
        return vec![GaussInt(p.clone(), BigInt::zero())];
    }
    let mut x = BigInt::one();
    loop {
        let rest = p - &x * &x;
        let y = rest.sqrt();
        if &y * &y == rest {
            return vec![GaussInt(x.clone(), y.clone()), GaussInt(x, -y)];
        }
        x += 1;
    }
}

/// Divisors of a nonzero Gaussian integer, one per associate class.
fn gaussian_divisors(g: &GaussInt) -> Vec<GaussInt> {
    let mut primes: Vec<(GaussInt, u32)> = Vec::new();
    for (p, _) in factor_integer(&g.norm()) {
        for pi in gaussian_primes_over(&p) {
            let mut e = 0;
            let mut rest = g.clone();
            while let Some(q) = rest.div_exact(&pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                primes.push((pi, e));
            }
        }
    }
    let mut divs = vec![GaussInt(BigInt::one(), BigInt::zero())];
    for (pi, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc = acc.mul(&pi);
                next.push(acc.clone());
            }
        }
        divs = next;
    }
    divs
}

/// Multiplies by the lcm of all denominators to get integral coefficients.
fn integral_coefficients(p: &UniPoly) -> Vec<GaussInt> {
    let dense = p.to_dense();
    let mut l = BigInt::one();
    for c in &dense {
        l = l.lcm(&c.denominator_lcm());
    }
    let ls = Scalar::from_bigint(l);
    dense
        .iter()
        .map(|c| {
            let v = c * &ls;
            GaussInt(v.re().to_integer(), v.im().to_integer())
        })
        .collect()
}

/// Roots of `p` lying in `field`, each with its multiplicity, sorted by the
/// fixed scalar order, together with the cofactor that has no such roots.
pub fn roots_in_field(p: &UniPoly, field: Field) -> (Vec<(Scalar, u32)>, UniPoly) {
    let mut rest = p.clone();
    let mut found: Vec<(Scalar, u32)> = Vec::new();
    if rest.is_zero() {
        return (found, rest);
    }
    let strip = |rest: &mut UniPoly, r: &Scalar| -> u32 {
        let lin = UniPoly::linear_root(r);
        let mut m = 0;
        while rest.degree().unwrap_or(0) > 0 {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            *rest = q;
            m += 1;
        }
        m
    };
    let zero = Scalar::zero();
    let m0 = strip(&mut rest, &zero);
    if m0 > 0 {
        found.push((zero, m0));
    }
    if rest.degree().unwrap_or(0) == 0 {
        return (found, rest);
    }
    let all_rational = rest.terms().all(|(_, c)| c.is_rational());
    let coeffs = integral_coefficients(&rest);
    let a0 = coeffs[0].clone();
    let an = coeffs[coeffs.len() - 1].clone();
    let mut candidates: Vec<Scalar> = Vec::new();
    if field == Field::Rational {
        if all_rational {
            let nums = integer_divisors(&a0.0);
            let dens = integer_divisors(&an.0);
            for d in &dens {
                for n in &nums {
                    let r = BigRational::new(n.clone(), d.clone());
                    candidates.push(Scalar::from_rational(r.clone()));
                    candidates.push(Scalar::from_rational(-r));
                }
            }
        } else {
            candidates.extend(gaussian_candidates(&a0, &an).into_iter().filter(Scalar::is_rational));
        }
    } else {
        candidates = gaussian_candidates(&a0, &an);
    }
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        if !rest.eval(&r).is_zero() {
            continue;
        }
        let m = strip(&mut rest, &r);
        if m > 0 {
            found.push((r, m));
        }
    }
    found.sort();
    (found, rest)
}

fn gaussian_candidates(a0: &GaussInt, an: &GaussInt) -> Vec<Scalar> {
    let units = [
        Scalar::one(),
        Scalar::i(),
        -Scalar::one(),
        -Scalar::i(),
    ];
    let nums = gaussian_divisors(a0);
    let dens = gaussian_divisors(an);
    let mut out = Vec::new();
    for d in &dens {
        let ds = d.to_scalar();
        for n in &nums {
            let q = &n.to_scalar() / &ds;
            for u in &units {
                out.push(&q * u);
            }
        }
    }
    out
}
