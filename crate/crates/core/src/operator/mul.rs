//! Structure constants of `𝕀₁` and their tensor extension.
//!
//! Inside a slot an element is held as `Σ_d L_d(H)·v_d + Σ c_{st} e_{st}`
//! with `v_d = ∂^{-d}` for `d < 0`, `v_0 = 1`, `v_d = ∫^d` for `d > 0`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{BasisTerm1, BasisTermN, Operator};
use crate::algebra_base::{Scalar, UniPoly};

#[derive(Clone, Debug, Default)]
pub(crate) struct Graded {
    pub(crate) parts: BTreeMap<i64, UniPoly>,
    pub(crate) e: BTreeMap<(u32, u32), Scalar>,
}

impl Graded {
    pub(crate) fn from_term(t: &BasisTerm1, c: &Scalar) -> Graded {
        let mut g = Graded::default();
        match *t {
            BasisTerm1::DPow { i, k } => g.add_part(-(i as i64), UniPoly::monomial(k, c.clone())),
            BasisTerm1::HPow { k } => g.add_part(0, UniPoly::monomial(k, c.clone())),
            BasisTerm1::IPow { i, k } => {
                let p = UniPoly::monomial(k, c.clone()).shift(&Scalar::from_int(-(i as i64)));
                g.add_part(i as i64, p)
            }
            BasisTerm1::E { s, t } => g.add_e(s as i64, t as i64, c.clone()),
        }
        g
    }

    pub(crate) fn from_terms<'a>(terms: impl Iterator<Item = (&'a BasisTerm1, &'a Scalar)>) -> Graded {
        let mut g = Graded::default();
        for (t, c) in terms {
            g.add(&Graded::from_term(t, c));
        }
        g
    }

    fn add(&mut self, o: &Graded) {
        for (d, p) in &o.parts {
            self.add_part(*d, p.clone());
        }
        for ((s, t), c) in &o.e {
            self.add_e(*s as i64, *t as i64, c.clone());
        }
    }

    fn add_part(&mut self, d: i64, p: UniPoly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.parts.get(&d) {
            Some(q) => q.add(&p),
            None => p,
        };
        if sum.is_zero() {
            self.parts.remove(&d);
        } else {
            self.parts.insert(d, sum);
        }
    }

    fn add_e(&mut self, s: i64, t: i64, c: Scalar) {
        if s < 0 || t < 0 || c.is_zero() {
            return;
        }
        let key = (s as u32, t as u32);
        let e = self.e.entry(key).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.e.remove(&key);
        }
    }

    pub(crate) fn mul(&self, o: &Graded) -> Graded {
        let mut r = Graded::default();
        for (&a, l1) in &self.parts {
            for (&b, l2) in &o.parts {
                // L1 v_a L2 v_b = L1 L2(H − a) v_a v_b
                let prod = l1.mul(&l2.shift(&Scalar::from_int(-a)));
                r.add_part(a + b, prod.clone());
                if a > 0 && b < 0 {
                    // ∫^i ∂^j = v_{i−j} − Σ_{k<m} e_{k+i−m, k+j−m}
                    let (i, j) = (a, -b);
                    let m = i.min(j);
                    for k in 0..m {
                        let s = k + i - m;
                        let t = k + j - m;
                        r.add_e(s, t, -prod.eval(&Scalar::from_int(s + 1)));
                    }
                }
            }
            for (&(s, t), c) in &o.e {
                // v_a e_{st} = e_{s+a, t}, then L(H) e_{ab} = L(a+1) e_{ab}
                let row = s as i64 + a;
                if row >= 0 {
                    r.add_e(row, t as i64, c * &l1.eval(&Scalar::from_int(row + 1)));
                }
            }
        }
        for (&(s, t), c) in &self.e {
            for (&b, l2) in &o.parts {
                // e_{st} L(H) = L(t+1) e_{st}, e_{st} v_b = e_{s, t−b}
                let col = t as i64 - b;
                if col >= 0 {
                    r.add_e(s as i64, col, c * &l2.eval(&Scalar::from_int(t as i64 + 1)));
                }
            }
            for (&(s2, t2), c2) in &o.e {
                if t == s2 {
                    r.add_e(s as i64, t2 as i64, c * c2);
                }
            }
        }
        r
    }

    pub(crate) fn into_terms(self) -> Vec<(BasisTerm1, Scalar)> {
        let mut out = Vec::new();
        for (d, l) in self.parts {
            if d < 0 {
                for (k, c) in l.terms() {
                    out.push((BasisTerm1::DPow { i: (-d) as u32, k }, c.clone()));
                }
            } else if d == 0 {
                for (k, c) in l.terms() {
                    out.push((BasisTerm1::HPow { k }, c.clone()));
                }
            } else {
                // L(H) ∫^d = ∫^d L(H + d)
                for (k, c) in l.shift(&Scalar::from_int(d)).terms() {
                    out.push((BasisTerm1::IPow { i: d as u32, k }, c.clone()));
                }
            }
        }
        for ((s, t), c) in self.e {
            out.push((BasisTerm1::E { s, t }, c));
        }
        out
    }
}

/// Product of two slot basis terms as an arity-1 operator.
pub fn mul_basis1(a: &BasisTerm1, b: &BasisTerm1) -> Operator {
    let mut r = Operator::zero(1);
    for (t, c) in slot_product(a, b) {
        r.add_term(BasisTermN(vec![t]), c);
    }
    r
}

fn slot_product(a: &BasisTerm1, b: &BasisTerm1) -> Vec<(BasisTerm1, Scalar)> {
    if *a == BasisTerm1::ONE {
        return vec![(*b, Scalar::one())];
    }
    if *b == BasisTerm1::ONE {
        return vec![(*a, Scalar::one())];
    }
    let one = Scalar::one();
    Graded::from_term(a, &one)
        .mul(&Graded::from_term(b, &one))
        .into_terms()
}

pub(crate) fn mul_operators(a: &Operator, b: &Operator) -> Operator {
    let n = a.arity();
    let mut cache: BTreeMap<(BasisTerm1, BasisTerm1), Vec<(BasisTerm1, Scalar)>> = BTreeMap::new();
    let mut r = Operator::zero(n);
    for (ta, ca) in a.terms() {
        for (tb, cb) in b.terms() {
            let mut acc: Vec<(Vec<BasisTerm1>, Scalar)> = vec![(Vec::with_capacity(n), ca * cb)];
            for j in 0..n {
                let key = (ta.0[j], tb.0[j]);
                let prod = cache
                    .entry(key)
                    .or_insert_with(|| slot_product(&key.0, &key.1));
                if prod.is_empty() {
                    acc.clear();
                    break;
                }
                let mut next = Vec::with_capacity(acc.len() * prod.len());
                for (prefix, c) in &acc {
                    for (t, c2) in prod.iter() {
                        let mut p = prefix.clone();
                        p.push(*t);
                        next.push((p, c * c2));
                    }
                }
                acc = next;
            }
            for (t, c) in acc {
                r.add_term(BasisTermN(t), c);
            }
        }
    }
    r
}
