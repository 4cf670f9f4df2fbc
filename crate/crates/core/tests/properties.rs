//! Randomized invariants across the library.

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qflag::flagbasis::{dual_pairing, e_tensor, FlagCache};
use qflag::geometry::{pluecker, segre_pair, sigma, CellPoint, QValue};
use qflag::orthocell::{enumerate_orthocells, make_cell, Orthocell};
use qflag::scalars::{express, lp_eval, span_rank, rat, Laurent, Rational};
use qflag::uqrep::{act, act_tensor, GenKind, Generator, ModuleVector, TensorVector};
use qflag::weyl::{bruhat_covers, pairing, reflect_weight, root_pairing, set_pairing, IndexSet, Permutation, PositiveRoot};
use qflag::orthocell::covers_by_length;

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-4i32..=4, -5i64..=5), 0..5).prop_map(|t| Laurent::from_int_terms(&t))
}

fn nonzero_laurent() -> impl Strategy<Value = Laurent> {
    laurent().prop_filter("nonzero", |x| !x.is_zero())
}

fn q0() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(rat(2, 1)), Just(rat(3, 1)), Just(rat(5, 3)), Just(rat(-1, 2))]
}

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (2..=max_n).prop_flat_map(|n| {
        Just((1..=n as u8).collect::<Vec<u8>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

fn cell(max_n: usize) -> impl Strategy<Value = Orthocell> {
    (2..=max_n).prop_flat_map(|n| {
        let cells = enumerate_orthocells(n, None);
        (0..cells.len()).prop_map(move |k| cells[k].clone())
    })
}

fn monogressive_cell(max_n: usize) -> impl Strategy<Value = Orthocell> {
    cell(max_n).prop_filter("monogressive", |c| c.is_monogressive())
}

fn point(max_n: usize) -> impl Strategy<Value = CellPoint> {
    (monogressive_cell(max_n), any::<u64>()).prop_map(|(c, seed)| CellPoint::random(&c, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_division_inverts_multiplication(x in laurent(), y in nonzero_laurent()) {
        prop_assert_eq!((&x * &y).exact_div(&y).unwrap(), x);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(x in laurent(), y in laurent(), q in q0()) {
        let (ex, ey) = (lp_eval(&x, &q).unwrap(), lp_eval(&y, &q).unwrap());
        prop_assert_eq!(lp_eval(&(&x * &y), &q).unwrap(), &ex * &ey);
        prop_assert_eq!(lp_eval(&(&x + &y), &q).unwrap(), ex + ey);
    }

    #[test]
    fn express_reconstructs_exactly(
        basis in prop::collection::vec(prop::collection::vec(laurent(), 4), 1..4),
        coeffs in prop::collection::vec(laurent(), 3),
    ) {
        prop_assume!(span_rank(&basis).unwrap() == basis.len());
        let mut v = vec![Laurent::zero(); 4];
        for (b, c) in basis.iter().zip(&coeffs) {
            for (t, x) in v.iter_mut().zip(b) {
                *t += &(c * x);
            }
        }
        let got = express(&v, &basis).unwrap().expect("v lies in the span");
        // Σ (num_k / den_k) b_k = v, checked after clearing all denominators.
        let total = got.iter().fold(Laurent::from_int(1), |acc, f| &acc * f.denominator());
        let mut lhs = vec![Laurent::zero(); 4];
        for (k, (b, f)) in basis.iter().zip(&got).enumerate() {
            let others = got
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .fold(f.numerator().clone(), |acc, (_, g)| &acc * g.denominator());
            for (t, x) in lhs.iter_mut().zip(b) {
                *t += &(&others * x);
            }
        }
        let rhs: Vec<Laurent> = v.iter().map(|x| &total * x).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bruhat_cover_criterion_matches_length(w in permutation(7)) {
        for root in PositiveRoot::all(w.n()) {
            prop_assert_eq!(bruhat_covers(&w, root), covers_by_length(&w, root), "{} {}", w, root);
        }
    }

    #[test]
    fn zero_pairing_means_fixed_prefix(w in permutation(6)) {
        for i in 1..w.n() {
            for root in PositiveRoot::all(w.n()) {
                let fixed = reflect_weight(root, &w, i) == w.prefix_set(i);
                prop_assert_eq!(pairing(&w, i, root) == 0, fixed);
            }
        }
    }

    #[test]
    fn pairing_is_unchanged_by_orthogonal_reflections(c in cell(5), mask in any::<u32>()) {
        let n = c.n();
        let l = mask & c.full_mask();
        let moved = c.element(l);
        for alpha in PositiveRoot::all(n) {
            let orthogonal = c
                .roots()
                .iter()
                .enumerate()
                .filter(|(k, _)| l & (1 << k) != 0)
                .all(|(_, &r)| root_pairing(alpha, r) == 0);
            if orthogonal {
                for i in 1..n {
                    prop_assert_eq!(pairing(&moved, i, alpha), pairing(c.w(), i, alpha));
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_independent_of_coset_element(c in cell(5)) {
        for u in c.coset_elements() {
            prop_assert_eq!(&make_cell(c.n(), c.roots(), &u).unwrap(), &c);
        }
        prop_assert_eq!(c.is_monogressive(), c.is_monogressive_by_array());
    }

    #[test]
    fn ij_normal_form_is_idempotent_and_preserves_e_up_to_sign(c in monogressive_cell(5), i in 1usize..5, j in 1usize..5) {
        let n = c.n();
        prop_assume!(i < n && j < n && c.is_ij_effective(i, j));
        let d = c.ij_normalize(i, j).unwrap();
        prop_assert_eq!(&d.ij_normalize(i, j).unwrap(), &d);
        let (a, b) = (e_tensor(&c, i, j), e_tensor(&d, i, j));
        prop_assert!(a == b || a == b.scaled(&Laurent::from_int(-1)));
    }

    #[test]
    fn pluecker_is_projective(p in point(4), k in 0usize..2, c in (-5i64..=5).prop_filter("nonzero", |c| *c != 0)) {
        prop_assume!(k < p.cell().rank());
        let i_max = p.cell().n();
        let mut coords = p.coords().to_vec();
        let c = rat(c, 1);
        coords[k] = (&coords[k].0 * &c, &coords[k].1 * &c);
        let scaled = CellPoint::new(p.cell().clone(), coords).unwrap();
        for i in 1..i_max {
            let factor = if p.cell().effective_mask(i) & (1 << k) != 0 { Laurent::constant(c.clone()) } else { Laurent::from_int(1) };
            let a = pluecker(&scaled, i).unwrap().to_tensor();
            let b = pluecker(&p, i).unwrap().to_tensor().scaled(&factor);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn sigma_maps_commute(p in point(5), i in 1usize..5, j in 1usize..5, q in q0()) {
        let n = p.cell().n();
        prop_assume!(i < n && j < n);
        let q = QValue::new(q).unwrap();
        prop_assert_eq!(sigma(&sigma(&p, i, &q), j, &q), sigma(&sigma(&p, j, &q), i, &q));
    }

    #[test]
    fn sampling_is_deterministic_and_in_range(c in monogressive_cell(5), seed in any::<u64>()) {
        let a = CellPoint::random(&c, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = CellPoint::random(&c, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(&a, &b);
        let bound = rat(9, 1);
        for (x, y) in a.coords() {
            prop_assert!(!(x.is_zero() && y.is_zero()));
            prop_assert!(x.is_integer() && y.is_integer());
            prop_assert!(x <= &bound && -x <= bound && y <= &bound && -y <= bound);
        }
    }

    #[test]
    fn json_round_trips(p in point(4), x in laurent()) {
        let s = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<CellPoint>(&s).unwrap(), p.clone());
        let s = serde_json::to_string(p.cell()).unwrap();
        prop_assert_eq!(&serde_json::from_str::<Orthocell>(&s).unwrap(), p.cell());
        let s = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Laurent>(&s).unwrap(), x);
    }

    #[test]
    fn weights_add_over_tensor_factors(n in 2usize..6, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sets: Vec<IndexSet> = (0..3)
            .map(|_| {
                let i = rng.gen_range(1..n);
                let all = IndexSet::all(n, i);
                all[rng.gen_range(0..all.len())]
            })
            .collect();
        let v = TensorVector::basis(n, &sets).unwrap();
        for c in 1..n as u8 {
            let e: i32 = sets.iter().map(|&s| set_pairing(s, PositiveRoot::simple(c)) as i32).sum();
            let k = act_tensor(Generator::simple(GenKind::K, c), &v).unwrap();
            prop_assert_eq!(k, v.scaled(&Laurent::q_pow(e)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn segre_images_satisfy_type_i_relations(p in point(3).prop_filter("n = 3", |p| p.cell().n() == 3), i in 1usize..3, j in 1usize..3, q in q0()) {
        let cache = FlagCache::new(3).unwrap();
        let q = QValue::new(q).unwrap();
        let image = segre_pair(&p, i, j, &q).unwrap();
        for xi in cache.type_i(i, j).unwrap().iter() {
            prop_assert!(lp_eval(&dual_pairing(xi, &image), q.value()).unwrap().is_zero());
        }
    }
}

/// On a single minuscule module `[X_c, Y_c]` acts by `0` or `±1`.
#[test]
fn minuscule_commutators_are_signs() {
    for n in 2..=5 {
        for i in 1..n {
            for s in IndexSet::all(n, i) {
                let v = ModuleVector::basis(n, s).unwrap();
                for c in 1..n as u8 {
                    let (x, y) = (Generator::simple(GenKind::X, c), Generator::simple(GenKind::Y, c));
                    let xy = act(x, &act(y, &v).unwrap()).unwrap().to_tensor();
                    let yx = act(y, &act(x, &v).unwrap()).unwrap().to_tensor();
                    let comm = xy.sub(&yx);
                    let t = v.to_tensor();
                    assert!(comm.is_zero() || comm == t || comm == t.scaled(&Laurent::from_int(-1)));
                }
            }
        }
    }
}
