use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra_base::{LocalIdeal, MaxIdeal, Monomial, MultiPoly, UniPoly};
use crate::faithful_action::{act_generator, apply, Poly};
use crate::operator::{Generator, Operator};

fn q(a: i64, b: i64) -> Scalar {
    Scalar::from_ratio(a, b)
}

fn half() -> Scalar {
    q(1, 2)
}

fn int_orbit(n: usize) -> Orbit {
    Orbit::integer(n)
}

fn dset(orbit: &Orbit, d: &[usize]) -> DSet {
    DSet::new(orbit.clone(), d.iter().copied()).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let mut u = Matrix::identity(d);
    let mut l = Matrix::identity(d);
    for r in 0..d {
        for c in 0..d {
            if r < c {
                u.set(r, c, Scalar::from_int(rng.random_range(-3..=3)));
            } else if r > c {
                l.set(r, c, Scalar::from_int(rng.random_range(-3..=3)));
            }
        }
    }
    let m = u.mul(&l);
    assert!(m.is_invertible());
    m
}

fn scramble(m: &ModuleWindow, seed: u64) -> ModuleWindow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: BTreeMap<Vec<i64>, Matrix> = m
        .support()
        .into_iter()
        .map(|p| {
            let d = m.dim(&p);
            (p, random_invertible(&mut rng, d))
        })
        .collect();
    m.change_basis(&bases).unwrap()
}

fn sum_all(ms: &[ModuleWindow]) -> ModuleWindow {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = acc.direct_sum(m).unwrap();
    }
    acc
}

fn labels(v: &[(DSet, usize)]) -> BTreeMap<Vec<usize>, usize> {
    v.iter().map(|(d, k)| (d.degenerate(), *k)).collect()
}

#[test]
fn orbit_representatives() {
    let o = Orbit::new(vec![Scalar::from_int(5), q(7, 2), q(-1, 3)]);
    assert_eq!(o.reps(), &[Scalar::zero(), half(), q(2, 3)]);
    assert_eq!(o.integer_slots(), vec![0]);
    assert_eq!(o, Orbit::new(vec![Scalar::from_int(-2), q(-1, 2), q(5, 3)]));
    assert_eq!(o.point_of(&[Scalar::from_int(3), q(-3, 2), q(2, 3)]), Some(vec![3, -2, 0]));
    assert_eq!(o.point_of(&[Scalar::from_int(3), q(1, 3), q(2, 3)]), None);
    let g = Orbit::new(vec![&half() + &Scalar::i()]);
    assert_eq!(g.rep(0), &(&half() + &Scalar::i()));
}

#[test]
fn dsets_per_orbit() {
    let o = Orbit::new(vec![Scalar::zero(), half(), Scalar::zero()]);
    let all = DSet::all_for(&o);
    assert_eq!(all.len(), 4);
    assert!(DSet::new(o.clone(), [1]).is_err());
    let d = dset(&o, &[2]);
    assert_eq!(d.non_degenerate(), vec![0, 1]);
    assert_eq!(d.base_point(), vec![0, 0, 1]);
}

#[test]
fn simple_k_x_support_and_action() {
    let o = int_orbit(1);
    let m = build_simple(&dset(&o, &[0]), vec![(-2, 5)]).unwrap();
    assert_eq!(m.support(), (1..=5).map(|x| vec![x]).collect::<Vec<_>>());
    assert!(m.dims().values().all(|&d| d == 1));
    m.check_relations().unwrap();
}

/// Point `p` of `Pₙ` holds `x^[p − 1]`; compare with the divided-power action.
#[test]
fn simple_full_dset_is_pn() {
    let o = int_orbit(2);
    let m = build_simple(&dset(&o, &[0, 1]), vec![(0, 4), (0, 4)]).unwrap();
    for p in m.support() {
        let alpha: Vec<u32> = p.iter().map(|x| (x - 1) as u32).collect();
        for i in 0..2 {
            for (g, gen) in [(Gen::D, Generator::D), (Gen::I, Generator::Int), (Gen::H, Generator::H)] {
                let Some(f) = m.map(&p, i, g) else { continue };
                let img = act_generator(gen, i, &alpha);
                let tgt = m.target(&p, i, g);
                let expect = img
                    .iter()
                    .next()
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(Scalar::zero);
                if m.dim(&tgt) == 0 {
                    assert!(img.is_empty());
                } else {
                    assert_eq!(f.get(0, 0), &expect);
                }
            }
        }
    }
}

#[test]
fn simple_mixed_orbit_support() {
    let o = Orbit::new(vec![Scalar::zero(), half()]);
    let m = build_simple(&dset(&o, &[0]), vec![(-1, 3), (-2, 2)]).unwrap();
    let expect: Vec<Vec<i64>> = window_points(&[(1, 3), (-2, 2)]);
    assert_eq!(m.support(), expect);
    assert!(m.is_equidimensional());
    m.check_relations().unwrap();
    assert_eq!(m.map(&[2, 0], 1, Gen::H).unwrap().get(0, 0), &half());
}

#[test]
fn support_formula_all_dsets() {
    let orbits = [
        int_orbit(1),
        int_orbit(2),
        Orbit::new(vec![half(), Scalar::zero()]),
        int_orbit(3),
        Orbit::new(vec![Scalar::zero(), q(1, 3), Scalar::zero()]),
    ];
    for o in orbits {
        let window: Window = vec![(-1, 2); o.arity()];
        for d in DSet::all_for(&o) {
            let m = build_simple(&d, window.clone()).unwrap();
            let expect: Vec<Vec<i64>> = window_points(&window)
                .into_iter()
                .filter(|p| d.degenerate().iter().all(|&i| p[i] >= 1))
                .collect();
            assert_eq!(m.support(), expect);
            assert!(m.is_equidimensional());
            m.check_relations().unwrap();
        }
    }
}

/// Elements of `M(s, λ)` as `Σ ∂^i ⊗ f_i(H)` with `f_i` reduced modulo
/// `(H − λ)^s`, using `H∂^i = ∂^i(H − i)`.
struct SkewLaurent {
    s: u32,
    lambda: Scalar,
}

impl SkewLaurent {
    fn modulus(&self) -> UniPoly {
        UniPoly::linear_root(&self.lambda).pow(self.s)
    }

    fn basis(&self, a: u32) -> UniPoly {
        UniPoly::linear_root(&self.lambda).pow(a)
    }

    fn act(&self, g: Gen, i: i64, f: &UniPoly) -> (i64, UniPoly) {
        match g {
            Gen::H => {
                let prod = UniPoly::linear_root(&Scalar::from_int(i)).mul(f);
                (i, prod.div_rem(&self.modulus()).1)
            }
            Gen::D => (i + 1, f.clone()),
            Gen::I => (i - 1, f.clone()),
        }
    }

    /// Coordinates in `(H − λ)^a`, `a < s`.
    fn coords(&self, f: &UniPoly) -> Vec<Scalar> {
        let shifted = f.shift(&self.lambda);
        (0..self.s).map(|a| shifted.coeff(a)).collect()
    }
}

#[test]
fn ms_matches_skew_laurent_reduction() {
    for (s, lambda) in [(1, half()), (2, Scalar::zero()), (3, Scalar::zero()), (3, q(5, 2)), (2, Scalar::from_int(2))] {
        let m = build_ms(s, &lambda, (-3, 3)).unwrap();
        m.check_relations().unwrap();
        let oracle = SkewLaurent {
            s: s as u32,
            lambda: lambda.clone(),
        };
        for i in -2..=2 {
            for a in 0..s as usize {
                let (p, col) = ms_position(&lambda, i, a);
                let f = oracle.basis(a as u32);
                for g in Gen::ALL {
                    let Some(mat) = m.map(&p, 0, g) else { continue };
                    let (j, img) = oracle.act(g, i, &f);
                    let (pt, _) = ms_position(&lambda, j, 0);
                    assert_eq!(m.target(&p, 0, g), pt);
                    assert_eq!(mat.column(col), oracle.coords(&img));
                }
            }
        }
    }
}

#[test]
fn ms_dims_and_errors() {
    let m = build_ms(3, &Scalar::zero(), (-2, 2)).unwrap();
    assert!(m.dims().values().all(|&d| d == 3));
    assert_eq!(m.support().len(), 5);
    let m1 = build_ms(1, &half(), (-2, 2)).unwrap();
    assert!(m1.is_weight());
    assert_eq!(build_ms(0, &half(), (0, 1)), Err(ModuleError::NonPositiveLength(0)));
    assert_eq!(build_ms(-2, &half(), (0, 1)), Err(ModuleError::NonPositiveLength(-2)));
}

fn h_power_ideal(center: Scalar, s: i64) -> LocalIdeal {
    LocalIdeal::power_of_maximal(MaxIdeal::new(vec![center]), s).unwrap()
}

#[test]
fn build_v_recovers_simple_and_ms() {
    let o = int_orbit(2);
    let d = dset(&o, &[1]);
    let mprime = LocalIdeal::power_of_maximal(MaxIdeal::origin(1), 1).unwrap();
    let w: Window = vec![(-1, 2), (-1, 2)];
    assert_eq!(build_v(&mprime, &d, w.clone()).unwrap(), build_simple(&d, w).unwrap());

    for lambda in [Scalar::zero(), half(), q(1, 3)] {
        let orbit = Orbit::new(vec![lambda.clone()]);
        let ideal = h_power_ideal(orbit.rep(0).clone(), 3);
        let v = build_v(&ideal, &dset(&orbit, &[]), vec![(-2, 2)]).unwrap();
        assert_eq!(v, build_ms(3, orbit.rep(0), (-2, 2)).unwrap());
    }
}

#[test]
fn build_v_length_and_center() {
    let o = Orbit::new(vec![Scalar::zero(), half(), Scalar::zero()]);
    let d = dset(&o, &[0]);
    let mut g = MultiPoly::zero(2);
    g.add_term(Monomial(vec![2, 0]), Scalar::one());
    g.add_term(Monomial(vec![0, 1]), -Scalar::one());
    let ideal = LocalIdeal::new(MaxIdeal::new(vec![half(), Scalar::zero()]), 3, vec![g]).unwrap();
    let v = build_v(&ideal, &d, vec![(0, 2), (-1, 1), (-1, 1)]).unwrap();
    let fib = Fiber::from_ideal(&ideal);
    assert_eq!(fib.dim(), 3);
    assert_eq!(fib.composition_length(), 3);
    assert!(v.is_equidimensional());
    assert!(v.dims().values().all(|&k| k == 3));
    v.check_relations().unwrap();
    let bad = LocalIdeal::power_of_maximal(MaxIdeal::new(vec![half(), Scalar::one()]), 2).unwrap();
    assert_eq!(
        build_v(&bad, &d, vec![(0, 2), (-1, 1), (-1, 1)]),
        Err(ModuleError::MalformedCenter { slot: 2 })
    );
}

#[test]
fn empty_and_ms_support() {
    let e = ModuleWindow::empty(Side::Left, int_orbit(2), vec![(0, 1), (0, 1)]).unwrap();
    assert!(e.support().is_empty());
    let m = build_ms(2, &q(3, 4), (-2, 1)).unwrap();
    assert_eq!(m.support(), window_points(&[(-2, 1)]));
}

#[test]
fn annihilator_examples() {
    let o = int_orbit(2);
    let w: Window = vec![(-1, 2), (-1, 2)];
    let m = build_simple(&dset(&o, &[0]), w.clone()).unwrap();
    assert_eq!(annihilator_dset(&m).unwrap().degenerate(), vec![0]);
    assert_eq!(annihilator_dset(&m).unwrap().annihilator_slots(), vec![1]);
    let pn = build_simple(&dset(&o, &[0, 1]), w.clone()).unwrap();
    assert!(annihilator_dset(&pn).unwrap().annihilator_slots().is_empty());
    let ms = build_ms(2, &Scalar::zero(), (-2, 2)).unwrap();
    assert_eq!(annihilator_dset(&ms).unwrap().annihilator_slots(), vec![0]);
    assert_eq!(annihilator_dset(&scramble(&m, 3)).unwrap().degenerate(), vec![0]);
}

#[test]
fn annihilator_errors() {
    let o = int_orbit(1);
    let a = build_simple(&dset(&o, &[0]), vec![(-1, 2)]).unwrap();
    let b = build_simple(&dset(&o, &[]), vec![(-1, 2)]).unwrap();
    assert_eq!(
        annihilator_dset(&a.direct_sum(&b).unwrap()),
        Err(ModuleError::InconsistentSlot { slot: 0 })
    );
    let narrow = build_simple(&dset(&o, &[0]), vec![(1, 3)]).unwrap();
    assert_eq!(
        annihilator_dset(&narrow),
        Err(ModuleError::WindowTooSmall { slot: 0, needed: (0, 1) })
    );
    assert_eq!(
        block_decompose(&narrow).unwrap_err(),
        ModuleError::WindowTooSmall { slot: 0, needed: (0, 1) }
    );
}

#[test]
fn block_decompose_two_simples() {
    let o = int_orbit(1);
    let w: Window = vec![(-2, 3)];
    let a = build_simple(&dset(&o, &[0]), w.clone()).unwrap();
    let b = build_simple(&dset(&o, &[]), w.clone()).unwrap();
    let blocks = block_decompose(&scramble(&a.direct_sum(&b).unwrap(), 11)).unwrap();
    let got: Vec<Vec<usize>> = blocks.iter().map(|b| b.dset.degenerate()).collect();
    assert_eq!(got, vec![vec![], vec![0]]);
    for b in &blocks {
        b.module.check_relations().unwrap();
        assert_eq!(annihilator_dset(&b.module).unwrap(), b.dset);
    }
    let single = block_decompose(&a).unwrap();
    assert_eq!(single.len(), 1);
    assert_eq!(single[0].module, a);
}

#[test]
fn block_decompose_five_scrambled_summands() {
    let o = int_orbit(2);
    let w: Window = vec![(-1, 2), (-1, 2)];
    let ds = DSet::all_for(&o);
    let picks = [0usize, 3, 1, 3, 2];
    let mut parts = Vec::new();
    for (k, &j) in picks.iter().enumerate() {
        let fib = if k == 1 {
            let ideal = LocalIdeal::power_of_maximal(MaxIdeal::origin(0), 1).unwrap();
            Fiber::from_ideal(&ideal)
        } else {
            let nd = ds[j].non_degenerate().len();
            let ideal = LocalIdeal::power_of_maximal(MaxIdeal::origin(nd), 2).unwrap();
            Fiber::from_ideal(&ideal)
        };
        parts.push(induce(&fib, &ds[j], w.clone()).unwrap());
    }
    let m = scramble(&sum_all(&parts), 5);
    m.check_relations().unwrap();
    let blocks = block_decompose(&m).unwrap();
    let got: BTreeMap<Vec<usize>, usize> = blocks
        .iter()
        .map(|b| (b.dset.degenerate(), b.module.total_dim()))
        .collect();
    let mut expect: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (k, &j) in picks.iter().enumerate() {
        *expect.entry(ds[j].degenerate()).or_default() += parts[k].total_dim();
    }
    assert_eq!(got, expect);
    for b in &blocks {
        assert!(is_absolutely_prime_window(&b.module));
        let again = block_decompose(&b.module).unwrap();
        assert_eq!(again.len(), 1);
        assert_eq!(again[0].module, b.module);
    }
}

#[test]
fn decompose_weight_examples() {
    let o = Orbit::new(vec![Scalar::zero(), half(), Scalar::zero()]);
    let w: Window = vec![(-1, 2), (-1, 1), (-1, 2)];
    let s = build_simple(&dset(&o, &[2]), w.clone()).unwrap();
    let got = decompose_weight(&s.direct_sum(&s).unwrap()).unwrap();
    assert_eq!(labels(&got), [(vec![2], 2)].into_iter().collect());

    let ds = DSet::all_for(&o);
    let parts: Vec<ModuleWindow> = [1usize, 3, 1, 0]
        .iter()
        .map(|&j| build_simple(&ds[j], w.clone()).unwrap())
        .collect();
    let m = scramble(&sum_all(&parts), 17);
    let got = decompose_weight(&m).unwrap();
    let mut expect = BTreeMap::new();
    expect.insert(ds[1].degenerate(), 2);
    expect.insert(ds[3].degenerate(), 1);
    expect.insert(ds[0].degenerate(), 1);
    assert_eq!(labels(&got), expect);

    let ms = build_ms(2, &Scalar::zero(), (-2, 2)).unwrap();
    assert!(matches!(decompose_weight(&ms), Err(ModuleError::NotWeight { .. })));
}

#[test]
fn fiber_induce_round_trips() {
    let o = int_orbit(1);
    let n = Fiber::from_ideal(&h_power_ideal(Scalar::zero(), 2));
    let d = dset(&o, &[]);
    let m = induce(&n, &d, vec![(-2, 2)]).unwrap();
    assert_eq!(m, build_ms(2, &Scalar::zero(), (-2, 2)).unwrap());
    assert_eq!(fiber(&m, &d).unwrap(), n);

    let o3 = int_orbit(3);
    let full = dset(&o3, &[0, 1, 2]);
    let k = Fiber::new(vec![], vec![], 1).unwrap();
    let w: Window = vec![(0, 2); 3];
    assert_eq!(induce(&k, &full, w.clone()).unwrap(), build_simple(&full, w).unwrap());
}

#[test]
fn fiber_center_mismatch() {
    let o = Orbit::new(vec![half()]);
    let n = Fiber::from_ideal(&h_power_ideal(q(3, 2), 2));
    assert_eq!(
        induce(&n, &dset(&o, &[]), vec![(0, 1)]),
        Err(ModuleError::MalformedCenter { slot: 0 })
    );
    let m = build_ms(1, &half(), (0, 1)).unwrap();
    assert_eq!(
        fiber(&m, &dset(&int_orbit(1), &[])),
        Err(ModuleError::CenterMismatch)
    );
}

fn random_local_fiber(rng: &mut ChaCha8Rng) -> Option<Fiber> {
    let mut gens = Vec::new();
    for _ in 0..rng.random_range(1..=2) {
        let mut g = MultiPoly::zero(2);
        for e in [[1u32, 0], [0, 1], [2, 0], [1, 1], [0, 2]] {
            let c = rng.random_range(-2..=2);
            if c != 0 {
                g.add_term(Monomial(e.to_vec()), Scalar::from_int(c));
            }
        }
        gens.push(g);
    }
    let ideal = LocalIdeal::new(MaxIdeal::origin(2), 3, gens).unwrap();
    let f = Fiber::from_ideal(&ideal);
    (f.dim() <= 6).then_some(f)
}

#[test]
fn random_pairs_round_trip_with_explicit_isomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let o = Orbit::new(vec![Scalar::zero(), Scalar::zero(), Scalar::zero()]);
    let d = dset(&o, &[1]);
    let mut done = 0;
    while done < 8 {
        let Some(n) = random_local_fiber(&mut rng) else { continue };
        let p = random_invertible(&mut rng, n.dim());
        let pinv = p.inverse().unwrap();
        let mats = n.matrices().iter().map(|a| p.mul(a).mul(&pinv)).collect();
        let n2 = Fiber::new(n.center().to_vec(), mats, n.dim()).unwrap();
        let x = fiber_intertwiner(&n, &n2, 7).expect("conjugate fibers");
        for j in 0..2 {
            assert_eq!(x.mul(&n.matrices()[j]), n2.matrices()[j].mul(&x));
        }
        let m = scramble(&induce(&n2, &d, vec![(-1, 1), (0, 2), (-1, 1)]).unwrap(), done);
        let back = fiber(&m, &d).unwrap();
        assert!(fiber_intertwiner(&back, &n, 1).is_some());
        let phi = induce_fiber_isomorphism(&m, &d).unwrap();
        assert_eq!(phi.len(), m.support().len());
        done += 1;
    }
}

#[test]
fn non_isomorphic_fibers_have_no_intertwiner() {
    let a = Fiber::from_ideal(&h_power_ideal(Scalar::zero(), 2));
    let b = Fiber::new(vec![Scalar::zero()], vec![Matrix::zeros(2, 2)], 2).unwrap();
    assert!(fiber_intertwiner(&a, &b, 0).is_none());
}

#[test]
fn fiber_validation() {
    let n = Matrix::from_int_rows(&[&[0, 1], &[0, 0]]);
    let t = n.transpose();
    assert_eq!(
        Fiber::new(vec![Scalar::zero(), Scalar::zero()], vec![n.clone(), t], 2),
        Err(ModuleError::FiberNotCommuting { a: 0, b: 1 })
    );
    assert_eq!(
        Fiber::new(vec![Scalar::one()], vec![n.clone()], 2),
        Err(ModuleError::FiberNotNilpotent { slot: 0 })
    );
    assert_eq!(Fiber::new(vec![], vec![], 0), Err(ModuleError::EmptyFiber));
    let f = Fiber::new(vec![Scalar::zero()], vec![n], 2).unwrap();
    assert_eq!(f.socle_series(), vec![1, 1]);
}

#[test]
fn equidimensional_and_profiles() {
    let o = int_orbit(2);
    let ideal = LocalIdeal::power_of_maximal(MaxIdeal::origin(1), 2).unwrap();
    let v = build_v(&ideal, &dset(&o, &[0]), vec![(-1, 2), (-1, 2)]).unwrap();
    assert!(v.is_equidimensional());
    let s = build_simple(&dset(&o, &[]), vec![(0, 1), (0, 1)]).unwrap();
    assert!(finitely_generated(&Profile::of_windows(&[&s])));
    let mut p = Profile::of_windows(&[&s, &v]);
    assert!(finitely_generated(&p));
    p.orbits[0].bound = DimBound::Unbounded;
    assert!(!finitely_generated(&p));
    let many = Profile {
        orbits: Vec::new(),
        infinitely_many_orbits: true,
    };
    assert!(!finitely_generated(&many));
    let lopsided = s.direct_sum(&build_simple(&dset(&o, &[0]), vec![(0, 1), (0, 1)]).unwrap()).unwrap();
    assert!(!lopsided.is_equidimensional());
}

fn mono(alpha: &[u32]) -> Poly {
    let mut p = Poly::new();
    p.insert(alpha.to_vec(), Scalar::one());
    p
}

/// `m·a = a*·m` on `Pₙ`, computed with the involution and the faithful action.
#[test]
fn dual_of_pn_matches_involution() {
    let o = int_orbit(2);
    let pn = build_simple(&dset(&o, &[0, 1]), vec![(0, 4), (0, 4)]).unwrap();
    let dual = pn.dualize();
    assert_eq!(dual.side(), Side::Right);
    dual.check_relations().unwrap();
    assert_eq!(dual.support(), pn.support());
    for p in dual.support() {
        let alpha: Vec<u32> = p.iter().map(|x| (x - 1) as u32).collect();
        for i in 0..2 {
            for (g, op) in [
                (Gen::D, Operator::d(2, i)),
                (Gen::I, Operator::int(2, i)),
                (Gen::H, Operator::h(2, i)),
            ] {
                let Some(f) = dual.map(&p, i, g) else { continue };
                let img = apply(&op.involution(), &mono(&alpha));
                let tgt = dual.target(&p, i, g);
                match img.iter().next() {
                    None => assert!(f.is_zero()),
                    Some((beta, c)) => {
                        let bp: Vec<i64> = beta.iter().map(|&b| b as i64 + 1).collect();
                        assert_eq!(bp, tgt);
                        assert_eq!(f.get(0, 0), c);
                    }
                }
            }
        }
    }
    // ∂^α·∫_i = 0 when α_i = 0
    assert!(dual.map(&[1, 2], 0, Gen::I).unwrap().is_zero() || dual.dim(&[0, 2]) == 0);
    assert_eq!(annihilator_dset(&dual).unwrap().degenerate(), vec![0, 1]);
    assert_eq!(dual.dualize(), pn);
    let ms = build_ms(2, &half(), (-2, 2)).unwrap();
    assert_eq!(ms.dualize().dims(), ms.dims());
    ms.dualize().check_relations().unwrap();
}

#[test]
fn split_extension_examples() {
    let o = int_orbit(1);
    let w: Window = vec![(-1, 3)];
    let a = build_simple(&dset(&o, &[0]), w.clone()).unwrap();
    let b = build_simple(&dset(&o, &[]), w.clone()).unwrap();
    let sum = a.direct_sum(&b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bases = BTreeMap::new();
    let mut sub = BTreeMap::new();
    for p in sum.support() {
        let d = sum.dim(&p);
        let da = a.dim(&p);
        let mut t = Matrix::identity(d);
        for r in 0..da {
            for c in da..d {
                t.set(r, c, Scalar::from_int(rng.random_range(1..=4)));
            }
        }
        bases.insert(p.clone(), t);
        if da > 0 {
            sub.insert(p.clone(), Matrix::identity(d).select_columns(&(0..da).collect::<Vec<_>>()));
        }
    }
    let ext = sum.change_basis(&bases).unwrap();
    let comp = split_extension(&ext, &sub).unwrap().expect("splits");
    let cm = ext.submodule(&comp.basis).unwrap();
    assert_eq!(annihilator_dset(&cm).unwrap().degenerate(), Vec::<usize>::new());
    for p in ext.support() {
        let s = sub.get(&p).map(|m| m.cols()).unwrap_or(0);
        let c = comp.basis.get(&p).map(|m| m.cols()).unwrap_or(0);
        assert_eq!(s + c, ext.dim(&p));
    }

    let ms = build_ms(2, &half(), (-2, 2)).unwrap();
    let socle: BTreeMap<Vec<i64>, Matrix> = ms
        .support()
        .into_iter()
        .map(|p| (p, Matrix::from_int_rows(&[&[0], &[1]])))
        .collect();
    assert_eq!(split_extension(&ms, &socle).unwrap(), None);
    let top: BTreeMap<Vec<i64>, Matrix> = ms
        .support()
        .into_iter()
        .map(|p| (p, Matrix::from_int_rows(&[&[1], &[0]])))
        .collect();
    assert!(matches!(split_extension(&ms, &top), Err(ModuleError::NotStable { .. })));

    let all: BTreeMap<Vec<i64>, Matrix> = ms
        .support()
        .into_iter()
        .map(|p| (p, Matrix::identity(2)))
        .collect();
    assert!(split_extension(&ms, &all).unwrap().unwrap().basis.is_empty());
}

#[test]
fn absolutely_prime_examples() {
    let o = int_orbit(2);
    let w: Window = vec![(-1, 2), (-1, 2)];
    let ideal = LocalIdeal::power_of_maximal(MaxIdeal::origin(1), 2).unwrap();
    let v = build_v(&ideal, &dset(&o, &[1]), w.clone()).unwrap();
    assert!(is_absolutely_prime_window(&v));
    assert!(is_absolutely_prime_window(&scramble(&v, 9)));
    let other = build_simple(&dset(&o, &[0, 1]), w).unwrap();
    assert!(!is_absolutely_prime_window(&v.direct_sum(&other).unwrap()));
}

#[test]
fn quotient_and_submodule_of_ms() {
    let ms = build_ms(3, &Scalar::zero(), (-1, 1)).unwrap();
    let socle: BTreeMap<Vec<i64>, Matrix> = ms
        .support()
        .into_iter()
        .map(|p| (p, Matrix::from_int_rows(&[&[0], &[0], &[1]])))
        .collect();
    let s = ms.submodule(&socle).unwrap();
    assert_eq!(s, build_ms(1, &Scalar::zero(), (-1, 1)).unwrap());
    let quo = ms.quotient(&socle).unwrap();
    assert_eq!(quo, build_ms(2, &Scalar::zero(), (-1, 1)).unwrap());
    let gen = generated_submodule(&ms, &[(vec![0], vec![vec![Scalar::zero(), Scalar::one(), Scalar::zero()]])].into_iter().collect());
    assert!(gen.values().all(|b| b.cols() == 2));
}

#[test]
fn relation_checker_catches_errors() {
    let mut m = build_ms(1, &half(), (-1, 1)).unwrap();
    m.set_map(vec![0], 0, Gen::D, Matrix::scalar(1, &Scalar::from_int(2))).unwrap();
    assert!(matches!(m.check_relations(), Err(ModuleError::RelationFailed { .. })));
}

fn arb_summands() -> impl Strategy<Value = (Vec<(usize, u8)>, u64)> {
    (prop::collection::vec((0usize..4, 1u8..=2), 1..4), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_is_multiset_union((picks, seed) in arb_summands()) {
        let o = Orbit::new(vec![Scalar::zero(), Scalar::zero()]);
        let ds = DSet::all_for(&o);
        let w: Window = vec![(-1, 2), (0, 2)];
        let parts: Vec<ModuleWindow> = picks
            .iter()
            .map(|&(j, k)| {
                let one = build_simple(&ds[j], w.clone()).unwrap();
                if k == 2 { one.direct_sum(&one).unwrap() } else { one }
            })
            .collect();
        let m = scramble(&sum_all(&parts), seed);
        let mut expect: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &(j, k) in &picks {
            *expect.entry(ds[j].degenerate()).or_default() += k as usize;
        }
        prop_assert_eq!(labels(&decompose_weight(&m).unwrap()), expect);
        let blocks = block_decompose(&m).unwrap();
        for b in &blocks {
            let again = block_decompose(&b.module).unwrap();
            prop_assert_eq!(again.len(), 1);
            prop_assert_eq!(&again[0].module, &b.module);
            prop_assert_eq!(annihilator_dset(&scramble(&b.module, seed ^ 1)).unwrap(), b.dset.clone());
        }
    }

    #[test]
    fn dualize_is_involutive(s in 1i64..4, num in -5i64..5, seed in any::<u64>()) {
        let m = scramble(&build_ms(s, &Scalar::from_ratio(num, 3), (-2, 2)).unwrap(), seed);
        let d = m.dualize();
        prop_assert_eq!(d.support(), m.support());
        prop_assert!(d.check_relations().is_ok());
        prop_assert_eq!(d.dualize(), m);
    }

    #[test]
    fn constructions_satisfy_relations(s in 1i64..4, mask in 0u32..8) {
        let o = Orbit::new(vec![Scalar::zero(), Scalar::from_ratio(1, 4), Scalar::zero()]);
        let ds = DSet::all_for(&o);
        let d = &ds[(mask as usize) % ds.len()];
        let nd = d.non_degenerate().len();
        let center: Vec<Scalar> = d.non_degenerate().iter().map(|&j| o.rep(j).clone()).collect();
        let ideal = LocalIdeal::power_of_maximal(MaxIdeal::new(center), s).unwrap();
        let v = build_v(&ideal, d, vec![(-1, 2), (-1, 1), (-1, 2)]).unwrap();
        prop_assert!(v.check_relations().is_ok());
        prop_assert!(v.is_equidimensional());
        let fib = Fiber::from_ideal(&ideal);
        prop_assert_eq!(fib.composition_length(), fib.dim());
        prop_assert_eq!(fiber(&v, d).unwrap(), fib);
        prop_assert!(induce_fiber_isomorphism(&v, d).is_ok());
        prop_assert!(nd <= 3);
    }
}
