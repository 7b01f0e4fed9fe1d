use pmds::erasure::{decode, encode, is_correctable, random_lemma3_pattern, ErasurePattern, Outcome};
use pmds::matrix::FMatrix;
use pmds::pmds::{assemble_standard_form, random_fill, verify_definition, verify_tkl};
use pmds::rng::seeded;
use pmds::select::Combinations;
use pmds::{enumerate_block_selections, FieldSpec, PmdsParams};
use proptest::prelude::*;

const SMALL_FIELDS: [(u32, u32); 10] = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (2, 6)];

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(SMALL_FIELDS.to_vec()).prop_map(|(p, e)| FieldSpec::new(p, e).unwrap())
}

fn matrix(f: &FieldSpec, rows: usize, cols: usize, seed: u64) -> FMatrix {
    FMatrix::random(f, rows, cols, &mut seeded(seed, 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_on_random_triples(f in field_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let q = f.order();
        let (a, b, c) = (f.elem(a % q).unwrap(), f.elem(b % q).unwrap(), f.elem(c % q).unwrap());
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        prop_assert_eq!(f.pow(a, u64::from(q)), a);
    }

    #[test]
    fn rank_of_transpose(f in field_strategy(), rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let m = matrix(&f, rows, cols, seed);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= rows.min(cols));
    }

    #[test]
    fn det_is_multiplicative(f in field_strategy(), n in 1usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = matrix(&f, n, n, s1);
        let b = matrix(&f, n, n, s2);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), f.mul(a.det().unwrap(), b.det().unwrap()));
        prop_assert_eq!(a.det().unwrap().is_zero(), a.rank() < n);
    }

    #[test]
    fn rref_is_canonical(f in field_strategy(), rows in 1usize..5, cols in 1usize..7, seed in any::<u64>()) {
        let m = matrix(&f, rows, cols, seed);
        let (r, pivots) = m.rref();
        prop_assert_eq!(pivots.len(), m.rank());
        prop_assert_eq!(r.rref().0, r.clone());
        for (i, &c) in pivots.iter().enumerate() {
            for j in 0..rows {
                let want = if i == j { f.one() } else { f.zero() };
                prop_assert_eq!(r.get(j, c), want);
            }
        }
        // Row space is preserved: stacking adds no rank.
        prop_assert_eq!(m.vstack(&r).unwrap().rank(), m.rank());
    }

    #[test]
    fn solve_recovers_planted_solution(f in field_strategy(), n in 1usize..5, seed in any::<u64>()) {
        let a = matrix(&f, n + 2, n, seed);
        prop_assume!(a.rank() == n);
        let x: Vec<_> = (0..n).map(|i| f.from_int(i as u64 * 7 + seed % 11)).collect();
        let b = a.mul_vec(&x).unwrap();
        prop_assert_eq!(a.solve(&b).unwrap(), Some(x));
    }

    #[test]
    fn verifiers_agree_on_random_fills(
        (m, ell, r, s) in (2usize..4, 1usize..3).prop_flat_map(|(m, ell)| {
            (Just(m), Just(ell), prop::collection::vec(1usize..3, m), 1usize..=(m * ell - ell).clamp(1, 2))
        }),
        fi in 0usize..4,
        seed in any::<u64>(),
    ) {
        let params = PmdsParams::new(m, ell, s, r).unwrap();
        let (p, e) = [(2, 1), (3, 1), (2, 2), (2, 4)][fi];
        let f = FieldSpec::new(p, e).unwrap();
        let fill = random_fill(&params, &f, &mut seeded(seed, 0));
        let code = assemble_standard_form(&params, &f, &fill).unwrap();
        let layout = params.layout();
        prop_assert_eq!(verify_tkl(&code.generator, &layout).pmds, verify_definition(&code.generator, &layout).pmds);
    }

    #[test]
    fn erasure_round_trip_on_correctable_patterns(seed in any::<u64>()) {
        let params = PmdsParams::new(3, 2, 2, vec![1, 2, 1]).unwrap();
        let f = FieldSpec::new(2, 8).unwrap();
        let mut rng = seeded(seed, 0);
        let code = assemble_standard_form(&params, &f, &random_fill(&params, &f, &mut rng)).unwrap();
        let msg: Vec<_> = (0..params.k()).map(|_| f.random(&mut rng)).collect();
        let cw = encode(&code, &msg).unwrap();
        let pattern = random_lemma3_pattern(&params, &mut rng);
        let report = decode(&code, &pattern.apply(&cw)).unwrap();
        if is_correctable(&code, &pattern) {
            prop_assert_eq!(report.codeword, Some(cw));
            prop_assert_ne!(report.outcome, Outcome::Unrecoverable);
        } else {
            prop_assert_eq!(report.outcome, Outcome::Unrecoverable);
        }
    }

    #[test]
    fn correctability_is_monotone(seed in any::<u64>(), mask in any::<u16>()) {
        let params = PmdsParams::new(2, 2, 2, vec![2, 1]).unwrap();
        let f = FieldSpec::new(3, 1).unwrap();
        let code = assemble_standard_form(&params, &f, &random_fill(&params, &f, &mut seeded(seed, 0))).unwrap();
        let n = params.n();
        let erased: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let p = ErasurePattern::new(erased.clone(), n).unwrap();
        if is_correctable(&code, &p) {
            for drop in 0..erased.len() {
                let mut sub = erased.clone();
                sub.remove(drop);
                prop_assert!(is_correctable(&code, &ErasurePattern::new(sub, n).unwrap()));
            }
        }
    }
}

#[test]
fn block_selections_match_bitmask_filter() {
    for sizes in [vec![3, 4], vec![2, 3, 2], vec![4, 4, 4], vec![1, 5, 2, 3]] {
        let n: usize = sizes.iter().sum();
        let starts: Vec<usize> = sizes
            .iter()
            .scan(0, |a, &w| {
                let s = *a;
                *a += w;
                Some(s)
            })
            .collect();
        for k in 0..=n {
            for cap in 0..=3 {
                let caps = vec![cap; sizes.len()];
                let got: Vec<Vec<usize>> = enumerate_block_selections(&sizes, &caps, k).map(|s| s.to_vec()).collect();
                let mut want = Vec::new();
                for set in Combinations::new(n, k) {
                    let ok = (0..sizes.len())
                        .all(|b| set.iter().filter(|&&c| c >= starts[b] && c < starts[b] + sizes[b]).count() <= cap);
                    if ok {
                        want.push(set);
                    }
                }
                assert_eq!(got, want, "sizes {sizes:?} k {k} cap {cap}");
            }
        }
    }
}
