//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic throughout.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use intdiff_core::algebra_base::{solve_linear, LocalIdeal, MaxIdeal, Monomial};
use intdiff_core::classify::{
    a_regular_module, band_module, band_module_from_word, contains_regular, find_isomorphism,
    ind_a_members, is_indecomposable, isomorphic_indecomposables, kronecker_block,
    kronecker_decompose, kronecker_isomorphism, lambda_to_original, rep_type, rep_type_orbit,
    string_module, AMember, BandOrbit, FinModule, GammaKind, GammaModule, KroneckerLabel,
    KroneckerRep, Letter, RepType,
};
use intdiff_core::faithful_action::{to_matrix, word_matrix};
use intdiff_core::operator::{
    left_ideal_obstruction, principal_left_ideal_membership, Expr, Generator, LeftGenerator,
    Membership,
};
use intdiff_core::weight_modules::{
    annihilator_dset, block_decompose, build_ms, build_simple, build_v, decompose_weight, fiber,
    fiber_intertwiner, finitely_generated, induce, induce_fiber_isomorphism,
    is_absolutely_prime_window, split_extension, window_points, DSet, DimBound, Fiber, Gen,
    ModuleWindow, Orbit, OrbitProfile, Profile, Side, Window,
};
use intdiff_core::{Field, Matrix, MultiPoly, Operator, Scalar};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn q(a: i64, b: i64) -> Scalar {
    Scalar::from_ratio(a, b)
}

fn int(a: i64) -> Scalar {
    Scalar::from_int(a)
}

fn gauss(re: i64, im: i64) -> Scalar {
    &int(re) + &(&int(im) * &Scalar::i())
}

/// `L·U` with unit diagonals and small integer entries.
fn random_invertible(rng: &mut ChaCha8Rng, d: usize, gaussian: bool) -> Matrix {
    let entry = |rng: &mut ChaCha8Rng| {
        if gaussian {
            gauss(rng.random_range(-2..=2), rng.random_range(-2..=2))
        } else {
            int(rng.random_range(-3..=3))
        }
    };
    let mut u = Matrix::identity(d);
    let mut l = Matrix::identity(d);
    for r in 0..d {
        for c in 0..d {
            if r < c {
                u.set(r, c, entry(rng));
            } else if r > c {
                l.set(r, c, entry(rng));
            }
        }
    }
    l.mul(&u)
}

fn random_bases(m: &ModuleWindow, rng: &mut ChaCha8Rng) -> BTreeMap<Vec<i64>, Matrix> {
    m.support()
        .into_iter()
        .map(|p| {
            let d = m.dim(&p);
            (p, random_invertible(rng, d, false))
        })
        .collect()
}

fn scramble(m: &ModuleWindow, rng: &mut ChaCha8Rng) -> ModuleWindow {
    m.change_basis(&random_bases(m, rng)).expect("invertible bases")
}

fn sum_all(ms: &[ModuleWindow]) -> ModuleWindow {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = acc.direct_sum(m).expect("same frame");
    }
    acc
}

fn dset(o: &Orbit, d: &[usize]) -> DSet {
    DSet::new(o.clone(), d.iter().copied()).expect("integer slots")
}

/// Orbits of arity `n` for every integer/non-integer slot pattern.
fn orbit_patterns(n: usize) -> Vec<Orbit> {
    let others = [q(1, 2), q(1, 3), q(-2, 5)];
    (0..1u32 << n)
        .map(|mask| {
            Orbit::new(
                (0..n)
                    .map(|j| {
                        if mask & (1 << j) != 0 {
                            others[j % others.len()].clone()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

fn random_orbit(rng: &mut ChaCha8Rng, n: usize, need_integer: bool) -> Orbit {
    loop {
        let pats = orbit_patterns(n);
        let o = pats[rng.random_range(0..pats.len())].clone();
        if !need_integer || !o.integer_slots().is_empty() {
            return o;
        }
    }
}

fn small_window(n: usize) -> Window {
    match n {
        1 => vec![(-2, 3)],
        2 => vec![(-1, 2); 2],
        _ => vec![(-1, 2); n],
    }
}

fn random_gen(rng: &mut ChaCha8Rng, n: usize) -> (Generator, usize) {
    let slot = rng.random_range(0..n);
    let g = match rng.random_range(0..5) {
        0 => Generator::X,
        1 => Generator::D,
        2 => Generator::Int,
        3 => Generator::H,
        _ => Generator::E {
            s: rng.random_range(0..3),
            t: rng.random_range(0..3),
        },
    };
    (g, slot)
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<(Generator, usize)> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| random_gen(rng, n)).collect()
}

fn word_expr(word: &[(Generator, usize)]) -> Expr {
    word.iter()
        .fold(Expr::Scalar(Scalar::one()), |acc, &(g, s)| Expr::mul(acc, Expr::gen(g, s)))
}

fn word_operator(word: &[(Generator, usize)], n: usize) -> Operator {
    Operator::from_expression(&word_expr(word), n).expect("slots in range")
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> Operator {
    let mut r = Operator::zero(n);
    for _ in 0..rng.random_range(1..=3) {
        let w = random_word(rng, n, 4);
        let c = int(rng.random_range(-3..=3));
        r = &r + &word_operator(&w, n).scale(&c);
    }
    r
}

// 1
fn relations() -> Outcome {
    let mut checked = 0;
    for n in 1..=3usize {
        let one = Operator::one(n);
        for i in 0..n {
            let (d, s, h, x) = (
                Operator::d(n, i),
                Operator::int(n, i),
                Operator::h(n, i),
                Operator::x(n, i),
            );
            let p = &one - &(&s * &d);
            ensure!(&d * &s == one, "d*int != 1 (n={}, slot {})", n, i);
            ensure!(h.commutator(&s).unwrap() == s, "[H,int] != int");
            ensure!(h.commutator(&d).unwrap() == -&d, "[H,d] != -d");
            ensure!(&h * &p == p && &p * &h == p, "H(1-int*d) != 1-int*d");
            ensure!(p == Operator::e(n, i, 0, 0), "1-int*d != e00");
            ensure!(x == &s * &h, "x != int*H");
            ensure!(h == &d * &x, "H != d*x");
            ensure!(d.commutator(&x).unwrap() == one, "[d,x] != 1");
            checked += 8;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let gi = [
                    Operator::d(n, i),
                    Operator::int(n, i),
                    Operator::h(n, i),
                    Operator::x(n, i),
                    Operator::e(n, i, 1, 2),
                ];
                let gj = [
                    Operator::d(n, j),
                    Operator::int(n, j),
                    Operator::h(n, j),
                    Operator::x(n, j),
                    Operator::e(n, j, 2, 0),
                ];
                for a in &gi {
                    for b in &gj {
                        ensure!(a.commutator(b).unwrap().is_zero(), "slots {} and {} fail to commute", i, j);
                        checked += 1;
                    }
                }
            }
        }
    }
    for n in 1..=2usize {
        let slot = n - 1;
        let e = |s: i64, t: i64| {
            if s < 0 || t < 0 {
                Operator::zero(n)
            } else {
                Operator::e(n, slot, s as u32, t as u32)
            }
        };
        let (d, s_op, h) = (Operator::d(n, slot), Operator::int(n, slot), Operator::h(n, slot));
        for a in 0..=6i64 {
            for b in 0..=6i64 {
                let eab = e(a, b);
                let def = &(&s_op.pow(a as u32) * &d.pow(b as u32))
                    - &(&s_op.pow(a as u32 + 1) * &d.pow(b as u32 + 1));
                ensure!(eab == def, "e[{},{}] != int^i d^j - int^(i+1) d^(j+1)", a, b);
                ensure!(&s_op * &eab == e(a + 1, b), "int*e[{},{}]", a, b);
                ensure!(&eab * &s_op == e(a, b - 1), "e[{},{}]*int", a, b);
                ensure!(&d * &eab == e(a - 1, b), "d*e[{},{}]", a, b);
                ensure!(&eab * &d == e(a, b + 1), "e[{},{}]*d", a, b);
                ensure!(&eab * &h == eab.scale(&int(b + 1)), "e[{},{}]*H", a, b);
                ensure!(&h * &eab == eab.scale(&int(a + 1)), "H*e[{},{}]", a, b);
                for c in 0..=6i64 {
                    for f in 0..=6i64 {
                        let want = if b == c { e(a, f) } else { Operator::zero(n) };
                        ensure!(&eab * &e(c, f) == want, "e[{},{}]*e[{},{}]", a, b, c, f);
                    }
                }
                checked += 7 + 49;
                if n == 1 {
                    let unit: BTreeMap<(Vec<u32>, Vec<u32>), Scalar> =
                        [((vec![a as u32], vec![b as u32]), Scalar::one())].into_iter().collect();
                    ensure!(to_matrix(&eab, 8).entries() == unit, "e[{},{}] is not a matrix unit", a, b);
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{} identities", checked))
}

// 2
fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (n, count, len) in [(1usize, 500usize, 6usize), (2, 200, 4)] {
        for k in 0..count {
            let w = random_word(&mut rng, n, len);
            let a = word_operator(&w, n);
            ensure!(
                to_matrix(&a, 12).same_action(&word_matrix(&w, n, 12)),
                "n={} product {} ({:?}) acts differently",
                n,
                k,
                w
            );
        }
    }
    Ok("500 products (n=1) and 200 products (n=2) on degrees up to 12".into())
}

fn random_homogeneous(rng: &mut ChaCha8Rng, n: usize) -> Operator {
    loop {
        let r = random_element(rng, n);
        let comps: Vec<Operator> = r.graded_components().into_values().collect();
        if !comps.is_empty() {
            return comps[rng.random_range(0..comps.len())].clone();
        }
    }
}

// 3
fn grading() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nonzero = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=2);
        let a = random_homogeneous(&mut rng, n);
        let b = random_homogeneous(&mut rng, n);
        let (da, db) = (a.homogeneous_degree(), b.homogeneous_degree());
        ensure!(da.is_some() && db.is_some(), "component is not homogeneous");
        let (da, db) = (da.unwrap(), db.unwrap());
        let p = &a * &b;
        if p.is_zero() {
            continue;
        }
        nonzero += 1;
        let sum: Vec<i64> = da.iter().zip(&db).map(|(x, y)| x + y).collect();
        ensure!(p.homogeneous_degree() == Some(sum.clone()), "{} * {} has no degree {:?}", a, b, sum);
    }
    ensure!(nonzero >= 100, "only {} nonzero products", nonzero);
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let r = random_element(&mut rng, n);
        let mut back = Operator::zero(n);
        for (deg, c) in r.graded_components() {
            ensure!(c.homogeneous_degree() == Some(deg.clone()), "component of degree {:?} is mixed", deg);
            back = &back + &c;
        }
        ensure!(back == r, "components of {} do not reassemble", r);
    }
    Ok(format!("200 pairs ({} nonzero products), 200 reassemblies", nonzero))
}

// 4
fn ms_dims() -> Outcome {
    for s in 1..=4i64 {
        for lambda in [Scalar::zero(), q(1, 2), int(-3)] {
            let m = build_ms(s, &lambda, (-10, 10)).map_err(|e| e.to_string())?;
            m.check_relations().map_err(|e| e.to_string())?;
            ensure!(m.support().len() == 21, "M({},{}) support has {} points", s, lambda, m.support().len());
            for p in m.support() {
                ensure!(m.dim(&p) == s as usize, "dim M({},{}) at {:?} is {}", s, lambda, p, m.dim(&p));
                let nil = m.h_shifted(&p, 0);
                ensure!(nil.pow(s as u32).is_zero(), "H - weight not nilpotent of order {}", s);
                ensure!(!nil.pow(s as u32 - 1).is_zero(), "Jordan block smaller than {}", s);
            }
        }
    }
    Ok("s = 1..4, lambda in {0, 1/2, -3}, window -10..10".into())
}

// 5
fn supports() -> Outcome {
    let mut cases = 0;
    for n in 1..=3usize {
        let w: Window = vec![(-2, 3); n];
        let o = Orbit::integer(n);
        let all: Vec<usize> = (0..n).collect();
        let pn = build_simple(&dset(&o, &all), w.clone()).map_err(|e| e.to_string())?;
        let want: Vec<Vec<i64>> = window_points(&w).into_iter().filter(|p| p.iter().all(|&x| x >= 1)).collect();
        ensure!(pn.support() == want, "Supp(P_{}) is wrong", n);
        for o in orbit_patterns(n) {
            let ds = DSet::all_for(&o);
            ensure!(ds.len() == 1 << o.integer_slots().len(), "expected 2^|D| subsets");
            for d in ds {
                let m = build_simple(&d, w.clone()).map_err(|e| e.to_string())?;
                let want: Vec<Vec<i64>> = window_points(&w)
                    .into_iter()
                    .filter(|p| d.degenerate().iter().all(|&i| p[i] >= 1))
                    .collect();
                ensure!(m.support() == want, "support of M({:?}) over {:?}", d.degenerate(), o.reps());
                ensure!(m.dims().values().all(|&k| k == 1), "simple module with a space of dim > 1");
                m.check_relations().map_err(|e| e.to_string())?;
                cases += 1;
            }
        }
    }
    Ok(format!("{} simple modules, n <= 3", cases))
}

/// `e_00` of slot `i` acts as `1 - ∫∂` at interior points.
fn f_acts_nonzero(m: &ModuleWindow, i: usize) -> bool {
    m.support().iter().any(|p| {
        let Some(dm) = m.map(p, i, Gen::D) else { return false };
        let q = m.target(p, i, Gen::D);
        let Some(im) = m.map(&q, i, Gen::I) else { return false };
        !im.mul(&dm).is_identity()
    })
}

// 6
fn annihilators() -> Outcome {
    let mut cases = 0;
    for n in 1..=3usize {
        let w: Window = vec![(-2, 3); n];
        for o in orbit_patterns(n) {
            let mut seen = BTreeSet::new();
            for d in DSet::all_for(&o) {
                let m = build_simple(&d, w.clone()).map_err(|e| e.to_string())?;
                let a = annihilator_dset(&m).map_err(|e| e.to_string())?;
                let comp: Vec<usize> = (0..n).filter(|i| !d.contains(*i)).collect();
                ensure!(a == d, "annihilator label {:?} for M({:?})", a.degenerate(), d.degenerate());
                ensure!(a.annihilator_slots() == comp, "annihilator slots {:?}", a.annihilator_slots());
                for i in 0..n {
                    ensure!(
                        f_acts_nonzero(&m, i) == d.contains(i),
                        "F({}) action disagrees with M({:?})",
                        i,
                        d.degenerate()
                    );
                }
                ensure!(seen.insert(a.annihilator_slots()), "two subsets share an annihilator");
                cases += 1;
            }
        }
    }
    Ok(format!("{} subsets, labels injective", cases))
}

fn labels(v: &[(DSet, usize)]) -> BTreeMap<Vec<usize>, usize> {
    v.iter().map(|(d, k)| (d.degenerate(), *k)).collect()
}

// 7
fn semisimple() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..50 {
        let n = rng.random_range(1..=3);
        let o = random_orbit(&mut rng, n, false);
        let ds = DSet::all_for(&o);
        let w = small_window(n);
        let k = rng.random_range(1..=5);
        let mut parts = Vec::new();
        let mut want: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for _ in 0..k {
            let d = &ds[rng.random_range(0..ds.len())];
            parts.push(build_simple(d, w.clone()).map_err(|e| e.to_string())?);
            *want.entry(d.degenerate()).or_default() += 1;
        }
        let m = scramble(&sum_all(&parts), &mut rng);
        let got = decompose_weight(&m).map_err(|e| e.to_string())?;
        ensure!(labels(&got) == want, "trial {}: {:?} != {:?}", trial, labels(&got), want);
    }
    Ok("50 scrambled sums recovered".into())
}

/// A module over `d` induced from `D/𝔪^s` at the orbit center.
fn induced_local(d: &DSet, s: i64, w: &Window) -> Result<ModuleWindow, String> {
    let center: Vec<Scalar> = d.non_degenerate().iter().map(|&j| d.orbit().rep(j).clone()).collect();
    let f = if center.is_empty() {
        Fiber::trivial(Vec::new())
    } else {
        Fiber::from_ideal(&LocalIdeal::power_of_maximal(MaxIdeal::new(center), s).map_err(|e| e.to_string())?)
    };
    induce(&f, d, w.clone()).map_err(|e| e.to_string())
}

// 8
fn blocks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..20 {
        let n = rng.random_range(1..=3);
        let o = random_orbit(&mut rng, n, true);
        let ds = DSet::all_for(&o);
        let w: Window = if n == 3 { vec![(0, 1); 3] } else { small_window(n) };
        let mut picks: Vec<usize> = vec![0, ds.len() - 1];
        for _ in 0..rng.random_range(0..=2) {
            picks.push(rng.random_range(0..ds.len()));
        }
        let mut parts = Vec::new();
        let mut want: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &j in &picks {
            let m = induced_local(&ds[j], rng.random_range(1..=2), &w)?;
            *want.entry(ds[j].degenerate()).or_default() += m.total_dim();
            parts.push(m);
        }
        let m = scramble(&sum_all(&parts), &mut rng);
        let bl = block_decompose(&m).map_err(|e| e.to_string())?;
        let got: BTreeMap<Vec<usize>, usize> = bl.iter().map(|b| (b.dset.degenerate(), b.module.total_dim())).collect();
        ensure!(got == want, "trial {}: blocks {:?} != {:?}", trial, got, want);
        ensure!(bl.len() == want.len(), "trial {}: repeated block label", trial);
        for b in &bl {
            b.module.check_relations().map_err(|e| e.to_string())?;
            ensure!(is_absolutely_prime_window(&b.module), "trial {}: block not absolutely prime", trial);
            ensure!(annihilator_dset(&b.module).map_err(|e| e.to_string())? == b.dset, "block label");
        }
        ensure!(!is_absolutely_prime_window(&m), "trial {}: mixed sum reported absolutely prime", trial);
    }
    Ok("20 mixed sums split into labeled blocks".into())
}

fn stacked_rank(a: &Matrix, b: &Matrix) -> usize {
    a.hstack(b).rank()
}

// 9
fn splitting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..30 {
        let n = rng.random_range(1..=2);
        let o = random_orbit(&mut rng, n, true);
        let ds = DSet::all_for(&o);
        let w = small_window(n);
        let ja = rng.random_range(0..ds.len());
        let jb = (ja + rng.random_range(1..ds.len())) % ds.len();
        let a = induced_local(&ds[ja], rng.random_range(1..=2), &w)?;
        let b = induced_local(&ds[jb], rng.random_range(1..=2), &w)?;
        let sum = a.direct_sum(&b).map_err(|e| e.to_string())?;
        let bases = random_bases(&sum, &mut rng);
        let ext = sum.change_basis(&bases).map_err(|e| e.to_string())?;
        let mut sub = BTreeMap::new();
        for (p, bp) in &bases {
            let da = a.dim(p);
            if da == 0 {
                continue;
            }
            let top = Matrix::identity(sum.dim(p)).select_columns(&(0..da).collect::<Vec<_>>());
            sub.insert(p.clone(), bp.inverse().expect("invertible").mul(&top));
        }
        let comp = split_extension(&ext, &sub)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("trial {}: no complement found", trial))?;
        let cm = ext.submodule(&comp.basis).map_err(|e| format!("complement not stable: {}", e))?;
        for p in ext.support() {
            let s = sub.get(&p).cloned().unwrap_or_else(|| Matrix::zeros(ext.dim(&p), 0));
            let c = comp.basis.get(&p).cloned().unwrap_or_else(|| Matrix::zeros(ext.dim(&p), 0));
            ensure!(s.cols() + c.cols() == ext.dim(&p), "dimensions do not add up at {:?}", p);
            ensure!(stacked_rank(&s, &c) == ext.dim(&p), "sum not direct at {:?}", p);
        }
        ensure!(
            annihilator_dset(&cm).map_err(|e| e.to_string())? == ds[jb],
            "trial {}: complement in the wrong block",
            trial
        );
    }
    for lambda in [Scalar::zero(), q(1, 2), int(-3), q(2, 3)] {
        let ms = build_ms(2, &lambda, (-2, 2)).map_err(|e| e.to_string())?;
        let socle: BTreeMap<Vec<i64>, Matrix> = ms
            .support()
            .into_iter()
            .map(|p| {
                let k = ms.h_shifted(&p, 0).kernel();
                (p, Matrix::from_columns(2, &k))
            })
            .collect();
        ensure!(socle.values().all(|b| b.cols() == 1), "socle of M(2,{}) is not a line", lambda);
        ensure!(ms.check_stable(&socle).is_ok(), "socle not stable");
        ensure!(
            split_extension(&ms, &socle).map_err(|e| e.to_string())?.is_none(),
            "socle of M(2,{}) split off",
            lambda
        );
    }
    let mut members = 0;
    for nn in 1..=3i64 {
        let lambda = int(nn);
        let gen = LeftGenerator::HMinus(lambda.clone());
        let gen_op = gen.to_operator();
        let t = (nn - 1) as u32;
        let obstruction = |a: &Operator| left_ideal_obstruction(a, &lambda).map_err(|e| e.to_string());
        let e_cols: Vec<_> = (0..=5u32)
            .map(|s| obstruction(&Operator::e(1, 0, s, t)))
            .collect::<Result<_, _>>()?;
        let mut keys = BTreeSet::new();
        for c in &e_cols {
            keys.extend(c.keys().cloned());
        }
        let keys: Vec<_> = keys.into_iter().collect();
        let mat = Matrix::from_fn(keys.len(), e_cols.len(), |r, c| {
            e_cols[c].get(&keys[r]).cloned().unwrap_or_else(Scalar::zero)
        });
        ensure!(mat.rank() == e_cols.len(), "E(*,{}) meets I(H-{})", t, nn);
        for j in 0..=5u32 {
            for k in 0..=5u32 {
                let ejk = Operator::e(1, 0, j, k);
                let ob = obstruction(&ejk)?;
                ensure!(ob.keys().all(|key| keys.contains(key)), "e[{},{}] obstruction outside E", j, k);
                let rhs: Vec<Scalar> = keys.iter().map(|key| ob.get(key).cloned().unwrap_or_else(Scalar::zero)).collect();
                let sol = solve_linear(&mat, &rhs).map_err(|e| format!("{:?}", e))?;
                let c = sol.particular().ok_or_else(|| format!("e[{},{}] not in E + I", j, k))?;
                let mut rest = ejk.clone();
                for (s, cs) in c.iter().enumerate() {
                    rest = &rest - &Operator::e(1, 0, s as u32, t).scale(cs);
                }
                match principal_left_ideal_membership(&rest, &gen).map_err(|e| e.to_string())? {
                    Membership::Member { witness } => {
                        ensure!(&witness * &gen_op == rest, "witness for e[{},{}] fails", j, k);
                    }
                    Membership::NotMember => return Err(format!("e[{},{}] remainder not in I(H-{})", j, k, nn)),
                }
                members += 1;
            }
        }
    }
    Ok(format!("30 complements, 4 non-split socles, {} decompositions", members))
}

fn random_local_fiber(rng: &mut ChaCha8Rng, center: &[Scalar]) -> Option<Fiber> {
    let k = center.len();
    if k == 0 {
        return Some(Fiber::new(Vec::new(), Vec::new(), rng.random_range(1..=3)).ok()?);
    }
    let order = rng.random_range(2..=4);
    let mut gens = Vec::new();
    for _ in 0..rng.random_range(0..=2) {
        let mut g = MultiPoly::zero(k);
        for m in Monomial::below_degree(k, 3) {
            if m.degree() == 0 {
                continue;
            }
            let c = rng.random_range(-2..=2);
            if c != 0 {
                g.add_term(m, int(c));
            }
        }
        gens.push(g);
    }
    let ideal = LocalIdeal::new(MaxIdeal::new(center.to_vec()), order, gens).ok()?;
    let f = Fiber::from_ideal(&ideal);
    if f.dim() > 6 {
        return None;
    }
    let p = random_invertible(rng, f.dim(), false);
    let pi = p.inverse().ok()?;
    let mats = f.matrices().iter().map(|a| p.mul(a).mul(&pi)).collect();
    Fiber::new(center.to_vec(), mats, f.dim()).ok()
}

fn check_intertwiner(x: &Matrix, a: &Fiber, b: &Fiber) -> bool {
    x.is_invertible()
        && a.matrices()
            .iter()
            .zip(b.matrices())
            .all(|(ma, mb)| x.mul(ma) == mb.mul(x))
}

// 10
fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    let mut by_k = [0usize; 3];
    while done < 30 {
        let k = done % 3;
        let m_deg = rng.random_range(0..=1usize);
        let mut reps: Vec<Scalar> = (0..k).map(|j| if j == 0 { q(1, 2) } else { Scalar::zero() }).collect();
        if rng.random_bool(0.5) && k > 0 {
            reps[0] = Scalar::zero();
        }
        let deg_slots: Vec<usize> = (k..k + m_deg).collect();
        reps.extend(std::iter::repeat_n(Scalar::zero(), m_deg));
        let o = Orbit::new(reps);
        let d = dset(&o, &deg_slots);
        let center: Vec<Scalar> = d.non_degenerate().iter().map(|&j| o.rep(j).clone()).collect();
        let Some(n) = random_local_fiber(&mut rng, &center) else { continue };
        let w: Window = (0..o.arity()).map(|j| if d.contains(j) { (0, 2) } else { (-1, 1) }).collect();
        let m = induce(&n, &d, w.clone()).map_err(|e| e.to_string())?;
        m.check_relations().map_err(|e| e.to_string())?;
        let back = fiber(&m, &d).map_err(|e| e.to_string())?;
        let x = fiber_intertwiner(&back, &n, done as u64).ok_or("fiber(induce(N)) not isomorphic to N")?;
        ensure!(check_intertwiner(&x, &back, &n), "fiber intertwiner fails");
        let ms = scramble(&m, &mut rng);
        let nf = fiber(&ms, &d).map_err(|e| e.to_string())?;
        let ind = induce(&nf, &d, w.clone()).map_err(|e| e.to_string())?;
        let phi = induce_fiber_isomorphism(&ms, &d).map_err(|e| e.to_string())?;
        for p in ind.support() {
            let fp = phi.get(&p).ok_or("isomorphism misses a point")?;
            ensure!(fp.is_invertible(), "isomorphism singular at {:?}", p);
            for i in 0..o.arity() {
                for g in Gen::ALL {
                    let (Some(a), Some(b)) = (ind.map(&p, i, g), ms.map(&p, i, g)) else { continue };
                    let qp = ind.target(&p, i, g);
                    let rhs = match phi.get(&qp) {
                        Some(fq) => fq.mul(&a),
                        None => Matrix::zeros(ms.dim(&qp), ind.dim(&p)),
                    };
                    ensure!(b.mul(fp) == rhs, "induce(fiber(M)) -> M does not commute at {:?}", p);
                }
            }
        }
        by_k[k] += 1;
        done += 1;
    }
    Ok(format!("30 fibers (k=0: {}, k=1: {}, k=2: {})", by_k[0], by_k[1], by_k[2]))
}

// 11
fn rep_types() -> Outcome {
    let mut cases = 0;
    for n in 1..=4usize {
        for o in orbit_patterns(n) {
            let orbit_want = if n == 1 { RepType::Tame } else { RepType::Wild };
            ensure!(rep_type_orbit(&o).kind == orbit_want, "orbit verdict for n={}", n);
            let mut worst = RepType::Finite;
            for d in DSet::all_for(&o) {
                let m = d.degenerate().len();
                let want = if m == n {
                    RepType::Finite
                } else if m + 1 == n {
                    RepType::Tame
                } else {
                    RepType::Wild
                };
                let got = rep_type(&d).kind;
                ensure!(got == want, "n={} orbit {:?} D={:?}: {:?}", n, o.reps(), d.degenerate(), got);
                ensure!((want == RepType::Finite) == (o.integer_slots().len() == n && m == n), "finite iff all slots integer and degenerate");
                worst = worst.max(got);
                cases += 1;
            }
            ensure!(worst == orbit_want, "orbit verdict is not the worst block");
        }
    }
    Ok(format!("{} (n, orbit, D) combinations", cases))
}

fn kronecker_pool(max: usize) -> Vec<KroneckerLabel> {
    let mut out = vec![KroneckerLabel::S1, KroneckerLabel::Sink];
    for n in 1..=max {
        out.push(KroneckerLabel::S2(n));
        out.push(KroneckerLabel::S3(n));
        out.push(KroneckerLabel::S5(n));
        for l in [Scalar::zero(), int(5), q(-1, 2)] {
            out.push(KroneckerLabel::S4(n, l));
        }
    }
    out
}

fn kronecker_sum(labels: &[KroneckerLabel]) -> KroneckerRep {
    labels
        .iter()
        .fold(KroneckerRep::zero(), |acc, l| acc.direct_sum(&kronecker_block(l)))
}

// 12
fn kronecker() -> Outcome {
    let mut pool = kronecker_pool(4);
    for n in 1..=4 {
        pool.push(KroneckerLabel::S4(n, Scalar::i()));
    }
    for l in &pool {
        let r = kronecker_block(l);
        ensure!((r.d1, r.d2) == l.dims(), "{} has dims {:?}", l, (r.d1, r.d2));
        ensure!(is_indecomposable(&r.to_module()), "{} decomposes", l);
        ensure!(kronecker_decompose(&r, Field::Gaussian).map_err(|e| e.to_string())? == vec![l.clone()], "{} misread", l);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pool = kronecker_pool(3);
    for trial in 0..50 {
        let k = rng.random_range(1..=4);
        let mut labels: Vec<KroneckerLabel> = (0..k).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
        let r = kronecker_sum(&labels);
        let s = r.conjugate(
            &random_invertible(&mut rng, r.d1, false),
            &random_invertible(&mut rng, r.d2, false),
        );
        labels.sort();
        let got = kronecker_decompose(&s, Field::Rational).map_err(|e| e.to_string())?;
        ensure!(got == labels, "trial {}: {:?} != {:?}", trial, got, labels);
        let model = kronecker_sum(&got);
        let (x1, x2) = kronecker_isomorphism(&model, &s, trial).ok_or("no isomorphism to the decomposition")?;
        ensure!(x1.is_invertible() && x2.is_invertible(), "singular isomorphism");
        ensure!(x2.mul(&model.a) == s.a.mul(&x1), "trial {}: A does not multiply back", trial);
        ensure!(x2.mul(&model.b) == s.b.mul(&x1), "trial {}: B does not multiply back", trial);
    }
    Ok("series up to n=4 indecomposable, 50 scrambled sums".into())
}

fn words_up_to(max: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for l in 1..=max {
        for mask in 0..(1u32 << l) {
            out.push((0..l).map(|k| if mask & (1 << k) != 0 { Letter::H2 } else { Letter::H1 }).collect());
        }
    }
    out
}

// 13
fn gamma() -> Outcome {
    let lambdas = [int(1), int(2), int(-1)];
    let mut fam: Vec<GammaModule> = words_up_to(4).iter().map(|w| string_module(w)).collect();
    for l in 1..=3 {
        for o in BandOrbit::all_of_length(l) {
            for n in 1..=2 {
                for lambda in &lambdas {
                    fam.push(band_module(&o, n, lambda).map_err(|e| e.to_string())?);
                }
            }
        }
    }
    for m in &fam {
        ensure!(m.satisfies_relation(), "{:?} violates h1 h2 = 0", m.kind);
        let want = match &m.kind {
            GammaKind::Simple => 1,
            GammaKind::String(w) => w.len() + 1,
            GammaKind::Band { word, n, .. } => n * word.len(),
        };
        ensure!(m.dim() == want, "{:?} has dim {}", m.kind, m.dim());
        ensure!(is_indecomposable(&m.to_module()), "{:?} decomposes", m.kind);
    }
    let mods: Vec<FinModule> = fam.iter().map(|m| m.to_module()).collect();
    for x in 0..mods.len() {
        for y in x + 1..mods.len() {
            ensure!(
                !isomorphic_indecomposables(&mods[x], &mods[y]),
                "{:?} and {:?} are isomorphic",
                fam[x].kind,
                fam[y].kind
            );
        }
    }
    let mut rotations = 0;
    for l in 1..=3 {
        for o in BandOrbit::all_of_length(l) {
            for n in 1..=2 {
                for lambda in &lambdas {
                    let base = band_module(&o, n, lambda).map_err(|e| e.to_string())?.to_module();
                    let w = o.word();
                    for k in 0..l {
                        let mut rot = w[k..].to_vec();
                        rot.extend_from_slice(&w[..k]);
                        let r = band_module_from_word(&rot, n, lambda).map_err(|e| e.to_string())?.to_module();
                        let x = find_isomorphism(&base, &r, k as u64).ok_or("rotation not isomorphic")?;
                        ensure!(x.is_invertible(), "singular rotation isomorphism");
                        for (g, h) in base.gens.iter().zip(&r.gens) {
                            ensure!(x.mul(g) == h.mul(&x), "rotation isomorphism fails");
                        }
                        rotations += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{} modules pairwise distinct, {} rotations", fam.len(), rotations))
}

fn a_relations(m: &FinModule) -> bool {
    let (h1, h2) = (&m.gens[0], &m.gens[1]);
    h1.mul(h1).is_zero() && h2.mul(h2).is_zero() && h1.mul(h2) == h2.mul(h1)
}

// 14
fn a_modules() -> Outcome {
    let a = a_regular_module();
    ensure!(a.dim == 4 && a_relations(&a), "regular module is not an A-module");
    ensure!(!a.gens[0].mul(&a.gens[1]).is_zero(), "m^2 A = 0");
    ensure!(is_indecomposable(&a), "A decomposes");
    let list = ind_a_members(4, Field::Gaussian).map_err(|e| e.to_string())?;
    use Letter::{H1, H2};
    let want = vec![
        AMember::Simple,
        AMember::String(vec![H1]),
        AMember::String(vec![H2]),
        AMember::String(vec![H1, H2]),
        AMember::String(vec![H2, H1]),
        AMember::String(vec![H1, H2, H1]),
        AMember::String(vec![H2, H1, H2]),
        AMember::BandFamily { n: 1 },
        AMember::BandFamily { n: 2 },
        AMember::Regular,
    ];
    ensure!(
        list == want,
        "ind_A_members(4) = {:?}",
        list
    );
    let mut mods = Vec::new();
    for m in &list {
        let params = match m {
            AMember::BandFamily { .. } => vec![Some(int(2)), Some(gauss(1, 1))],
            _ => vec![None],
        };
        for p in params {
            let v = m.module(p.as_ref()).map_err(|e| e.to_string())?;
            ensure!(v.dim == m.dim() && v.dim <= 4 && a_relations(&v), "{:?} is not an A-module of its dimension", m);
            ensure!(is_indecomposable(&v), "{:?} decomposes", m);
            mods.push(v);
        }
    }
    for x in 0..mods.len() {
        for y in x + 1..mods.len() {
            ensure!(!isomorphic_indecomposables(&mods[x], &mods[y]), "two members are isomorphic");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let small: Vec<&AMember> = list.iter().filter(|m| m.dim() <= 4).collect();
    for trial in 0..30 {
        let mut base = a_regular_module();
        while base.dim < 8 {
            let m = small[rng.random_range(0..small.len())];
            if base.dim + m.dim() > 8 || rng.random_range(0..4) == 0 {
                break;
            }
            let lambda = gauss(rng.random_range(1..=3), rng.random_range(-2..=2));
            base = base.direct_sum(&m.module(Some(&lambda)).map_err(|e| e.to_string())?);
        }
        let p = random_invertible(&mut rng, base.dim, true);
        let m = base.conjugate(&p);
        let (h1, h2) = (&m.gens[0], &m.gens[1]);
        ensure!(!h1.mul(h2).is_zero(), "trial {}: m^2 M = 0", trial);
        let v = contains_regular(&m).ok_or_else(|| format!("trial {}: no copy of A", trial))?;
        let span = Matrix::from_columns(
            m.dim,
            &[v.clone(), h1.mul_vec(&v), h2.mul_vec(&v), h1.mul(h2).mul_vec(&v)],
        );
        ensure!(span.rank() == 4, "trial {}: A*v has dim {}", trial, span.rank());
    }
    let thin = lambda_to_original(&string_module(&[H1, H2]));
    ensure!(contains_regular(&thin).is_none(), "copy of A found where m^2 M = 0");
    Ok("A indecomposable, 30 random modules contain A, 10 members".into())
}

// 15
fn involution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let a = random_element(&mut rng, n);
        let b = random_element(&mut rng, n);
        ensure!((&a * &b).involution() == &b.involution() * &a.involution(), "(ab)* != b*a* for {} and {}", a, b);
        ensure!(a.involution().involution() == a, "a** != a for {}", a);
        let h = &Operator::h(n, 0).pow(2) - &Operator::h(n, n - 1).scale(&int(3));
        ensure!(h.involution() == h, "involution moves a polynomial in H");
        ensure!(Operator::d(n, n - 1).involution() == Operator::int(n, n - 1), "d* != int");
    }
    let mut entries = 0;
    for n in 1..=3usize {
        let o = Orbit::integer(n);
        let all: Vec<usize> = (0..n).collect();
        let pn = build_simple(&dset(&o, &all), vec![(0, 8); n]).map_err(|e| e.to_string())?;
        let dual = pn.dualize();
        ensure!(dual.side() == Side::Right, "dual is not a right module");
        dual.check_relations().map_err(|e| e.to_string())?;
        for p in dual.support() {
            let alpha: Vec<i64> = p.iter().map(|x| x - 1).collect();
            if alpha.iter().sum::<i64>() > 6 {
                continue;
            }
            for i in 0..n {
                let mut up = p.clone();
                up[i] += 1;
                let mut down = p.clone();
                down[i] -= 1;
                let cases = [
                    (Gen::H, p.clone(), Some(int(alpha[i] + 1))),
                    (Gen::D, up, Some(Scalar::one())),
                    (Gen::I, down, if alpha[i] >= 1 { Some(Scalar::one()) } else { None }),
                ];
                for (g, tgt, coeff) in cases {
                    ensure!(dual.target(&p, i, g) == tgt, "right {:?} moves {:?} wrongly", g, p);
                    let f = dual.map(&p, i, g).ok_or("window too small")?;
                    match coeff {
                        Some(c) => ensure!(f.shape() == (1, 1) && *f.get(0, 0) == c, "d^{:?}·{:?}_{} wrong", alpha, g, i),
                        None => ensure!(f.is_zero(), "d^{:?}·int_{} should vanish", alpha, i),
                    }
                    entries += 1;
                }
            }
        }
    }
    Ok(format!("200 pairs, {} right-action entries", entries))
}

fn check_equidim(m: &ModuleWindow, d: &DSet, what: &str) -> Result<(), String> {
    ensure!(m.is_equidimensional(), "{} is not equidimensional", what);
    let f = fiber(m, d).map_err(|e| format!("{}: {}", what, e))?;
    let dims: BTreeSet<usize> = m.dims().values().copied().collect();
    ensure!(dims.len() == 1 && dims.contains(&f.dim()), "{}: space dims {:?} vs fiber {}", what, dims, f.dim());
    ensure!(f.composition_length() == f.dim(), "{}: length {} != fiber dim {}", what, f.composition_length(), f.dim());
    ensure!(f.socle_series().iter().sum::<usize>() == f.dim(), "{}: socle series does not exhaust the fiber", what);
    Ok(())
}

// 16
fn equidim_and_profiles() -> Outcome {
    let mut built = 0;
    let mut windows = Vec::new();
    for n in 1..=3usize {
        for o in orbit_patterns(n) {
            let w = small_window(n);
            for d in DSet::all_for(&o) {
                let s = build_simple(&d, w.clone()).map_err(|e| e.to_string())?;
                check_equidim(&s, &d, "simple")?;
                let center: Vec<Scalar> = d.non_degenerate().iter().map(|&j| o.rep(j).clone()).collect();
                for order in 1..=3 {
                    let ideal = LocalIdeal::power_of_maximal(MaxIdeal::new(center.clone()), order).map_err(|e| e.to_string())?;
                    let v = build_v(&ideal, &d, w.clone()).map_err(|e| e.to_string())?;
                    check_equidim(&v, &d, "V(I)")?;
                    ensure!(fiber(&v, &d).unwrap().dim() == ideal.quotient_basis().dim(), "dim V(I) != dim D/I");
                    windows.push(v);
                    built += 1;
                }
                built += 1;
            }
        }
    }
    for s in 1..=4 {
        for lambda in [Scalar::zero(), q(1, 2)] {
            let m = build_ms(s, &lambda, (-2, 3)).map_err(|e| e.to_string())?;
            let d = dset(m.orbit(), &[]);
            check_equidim(&m, &d, "M(s,lambda)")?;
            built += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..10 {
        let k = rng.random_range(1..=4);
        let picks: Vec<&ModuleWindow> = (0..k).map(|_| &windows[rng.random_range(0..windows.len())]).collect();
        let p = Profile::of_windows(&picks);
        let mut want: BTreeMap<Vec<Scalar>, usize> = BTreeMap::new();
        for m in &picks {
            *want.entry(m.orbit().reps().to_vec()).or_default() += m.dims().values().max().copied().unwrap_or(0);
        }
        let got: BTreeMap<Vec<Scalar>, usize> = p
            .orbits
            .iter()
            .map(|o| match o.bound {
                DimBound::Bounded(b) => Ok((o.orbit.reps().to_vec(), b)),
                DimBound::Unbounded => Err("finite sum declared unbounded".to_string()),
            })
            .collect::<Result<_, _>>()?;
        ensure!(got == want, "profile bounds {:?} != {:?}", got, want);
        ensure!(finitely_generated(&p), "finite direct sum reported not finitely generated");
    }
    let mut flips = 0;
    for _ in 0..10 {
        let orbits: Vec<OrbitProfile> = (0..rng.random_range(0..=3))
            .map(|j| OrbitProfile {
                orbit: Orbit::new(vec![q(j, 5)]),
                bound: if rng.random_range(0..3) == 0 { DimBound::Unbounded } else { DimBound::Bounded(rng.random_range(1..5)) },
            })
            .collect();
        let infinite = rng.random_range(0..3) == 0;
        let want = !infinite && orbits.iter().all(|o| o.bound != DimBound::Unbounded);
        if !want {
            flips += 1;
        }
        let p = Profile { orbits, infinitely_many_orbits: infinite };
        ensure!(finitely_generated(&p) == want, "profile {:?}", p);
    }
    Ok(format!("{} constructions, 20 profiles ({} not finitely generated)", built, flips))
}

// 17
fn golden() -> Outcome {
    let mut mismatched = Vec::new();
    for inv in common::GOLDEN {
        let first = common::process_transcript(inv);
        let second = common::process_transcript(inv);
        ensure!(first == second, "{} differs between runs", inv.name);
        ensure!(first == common::transcript(inv), "{} differs from the in-process run", inv.name);
        let want = std::fs::read_to_string(common::golden_path(inv.name)).map_err(|e| format!("{}: {}", inv.name, e))?;
        if first != want {
            mismatched.push(inv.name);
        }
    }
    ensure!(mismatched.is_empty(), "outputs differ from stored files: {:?}", mismatched);
    Ok(format!("{} invocations byte-identical", common::GOLDEN.len()))
}

struct Criterion {
    name: &'static str,
    run: fn() -> Outcome,
    limit: Option<Duration>,
}

fn main() {
    let criteria = [
        Criterion { name: "relations", run: relations, limit: Some(Duration::from_secs(1)) },
        Criterion { name: "oracle equivalence", run: oracle, limit: Some(Duration::from_secs(60)) },
        Criterion { name: "grading", run: grading, limit: None },
        Criterion { name: "M(s,lambda) dimensions", run: ms_dims, limit: None },
        Criterion { name: "supports", run: supports, limit: None },
        Criterion { name: "annihilators", run: annihilators, limit: None },
        Criterion { name: "semisimplicity", run: semisimple, limit: None },
        Criterion { name: "block decomposition", run: blocks, limit: None },
        Criterion { name: "splitting", run: splitting, limit: None },
        Criterion { name: "fiber/induce round trip", run: round_trips, limit: None },
        Criterion { name: "representation type", run: rep_types, limit: None },
        Criterion { name: "Kronecker", run: kronecker, limit: None },
        Criterion { name: "strings and bands", run: gamma, limit: None },
        Criterion { name: "A-modules over Q(i)", run: a_modules, limit: None },
        Criterion { name: "involution", run: involution, limit: None },
        Criterion { name: "equidimensionality and finite generation", run: equidim_and_profiles, limit: None },
        Criterion { name: "CLI golden files", run: golden, limit: None },
    ];
    let mut failed = 0;
    for (k, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {}", msg))
        });
        let took = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {:.2} s, limit {} s", took.as_secs_f64(), l.as_secs())),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => {
                failed += 1;
                ("FAIL", d.clone())
            }
        };
        println!("{} {:>2} {:<42} {:>7.2}s  {}", tag, k + 1, c.name, took.as_secs_f64(), detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
