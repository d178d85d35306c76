use lifted_codes::base::brute_force_decode;
use lifted_codes::decode_bd::n_lower_bound_check;
use lifted_codes::decode_he::he_decide;
use lifted_codes::{
    decode_bd, decode_he, he_vote, local_tally, qsc_apply, vote_probs, BaseCode, BaseCodeSpec,
    BaseKind, BdOptions, ChannelParams, CodeSpec, Elem, FieldCtx, LiftedCode, Membership,
    PointSpace, Word,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn field(q: u32) -> FieldCtx {
    match q {
        4 => FieldCtx::new(2, 2, None).unwrap(),
        8 => FieldCtx::new(2, 3, None).unwrap(),
        9 => FieldCtx::new(3, 2, None).unwrap(),
        25 => FieldCtx::new(5, 2, None).unwrap(),
        q => FieldCtx::new(q, 1, None).unwrap(),
    }
}

fn spc4() -> &'static LiftedCode {
    static C: OnceLock<LiftedCode> = OnceLock::new();
    C.get_or_init(|| {
        CodeSpec {
            p: 2,
            l: 2,
            modulus: None,
            m: 2,
            t: 1,
            base: BaseKind::Spc,
        }
        .build()
        .unwrap()
    })
}

fn rs8() -> &'static LiftedCode {
    static C: OnceLock<LiftedCode> = OnceLock::new();
    C.get_or_init(|| {
        CodeSpec {
            p: 2,
            l: 3,
            modulus: None,
            m: 2,
            t: 1,
            base: BaseKind::Rs { u: 5 },
        }
        .build()
        .unwrap()
    })
}

fn rs3() -> &'static LiftedCode {
    // odd characteristic, odd d_F = 3
    static C: OnceLock<LiftedCode> = OnceLock::new();
    C.get_or_init(|| {
        CodeSpec {
            p: 5,
            l: 1,
            modulus: None,
            m: 2,
            t: 1,
            base: BaseKind::Rs { u: 2 },
        }
        .build()
        .unwrap()
    })
}

fn codeword(c: &LiftedCode, seed: &[u32]) -> Word {
    let coeffs: Vec<Elem> = (0..c.dimension())
        .map(|i| Elem(seed[i % seed.len()] % c.q()))
        .collect();
    c.encode(&coeffs).unwrap()
}

/// g(x + b)
fn translate(c: &LiftedCode, g: &Word, b: usize) -> Word {
    let space = c.space();
    let values = (0..c.len())
        .map(|x| g.get(space.add(c.field(), x, b)))
        .collect();
    Word::new(c.q(), c.m(), values).unwrap()
}

/// g(A x) for an invertible 2x2 matrix A.
fn linear_map(c: &LiftedCode, g: &Word, a: [Elem; 4]) -> Word {
    let f = c.field();
    let space = PointSpace::new(c.q(), 2).unwrap();
    let values = (0..c.len())
        .map(|x| {
            let v = space.coords(x);
            let y = [
                f.add(f.mul(a[0], v[0]), f.mul(a[1], v[1])),
                f.add(f.mul(a[2], v[0]), f.mul(a[3], v[1])),
            ];
            g.get(space.index(&y))
        })
        .collect();
    Word::new(c.q(), 2, values).unwrap()
}

fn add_errors(c: &LiftedCode, f: &Word, errors: &[(usize, u32)]) -> Word {
    let mut g = f.clone();
    for &(pos, v) in errors {
        let pos = pos % c.len();
        let v = 1 + v % (c.q() - 1);
        g.set(pos, c.field().add(g.get(pos), Elem(v)));
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(qi in 0usize..6, a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let q = [2u32, 4, 8, 9, 25, 7][qi];
        let f = field(q);
        let (a, b, c) = (Elem(a % q), Elem(b % q), Elem(c % q));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != Elem::ZERO {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(f.div(f.mul(a, b), a).unwrap(), b);
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn lifted_codes_are_affine_invariant(seed in prop::collection::vec(0u32..64, 1..8), b in 0usize..64,
                                         mat in prop::array::uniform4(0u32..8)) {
        for c in [spc4(), rs8()] {
            let g = codeword(c, &seed);
            prop_assert!(c.contains(&translate(c, &g, b % c.len()), Membership::Exhaustive).unwrap());
            let a = mat.map(|v| Elem(v % c.q()));
            let f = c.field();
            let det = f.sub(f.mul(a[0], a[3]), f.mul(a[1], a[2]));
            if det != Elem::ZERO {
                prop_assert!(c.contains(&linear_map(c, &g, a), Membership::Exhaustive).unwrap());
            }
        }
    }

    #[test]
    fn systematic_encoding_round_trip(seed in prop::collection::vec(0u32..64, 1..30)) {
        for c in [spc4(), rs8(), rs3()] {
            let g = codeword(c, &seed);
            let info: Vec<Elem> = c.info_positions().iter().map(|&i| g.get(i)).collect();
            prop_assert_eq!(c.encode_systematic(&info).unwrap(), g);
        }
    }

    #[test]
    fn gao_decoder_matches_brute_force(u in 0u32..6, word in prop::collection::vec(0u32..8, 8), erase in prop::option::of(0usize..8)) {
        let f = field(8);
        let code = BaseCodeSpec::rs(8, u).unwrap();
        let mut w: Vec<Elem> = word.iter().map(|&v| Elem(v)).collect();
        let even = code.min_distance().is_multiple_of(2);
        if let (Some(pos), true) = (erase, even) {
            w[pos] = Elem::ERASED;
        }
        prop_assert_eq!(code.decode_bmd(&f, &w).unwrap(), brute_force_decode(&code, &f, &w).unwrap());
    }

    #[test]
    fn tallies_are_conserved_and_bound_distance(seed in prop::collection::vec(0u32..64, 1..8),
                                                errors in prop::collection::vec((0usize..64, 0u32..8), 0..20),
                                                a in 0usize..64) {
        for c in [spc4(), rs8(), rs3()] {
            let f = codeword(c, &seed);
            let g = add_errors(c, &f, &errors);
            let a = a % c.len();
            let t = local_tally(c, &g, a).unwrap();
            prop_assert_eq!(t.total(), c.spread().len() as u64);
            prop_assert!(n_lower_bound_check(c, &f, &g, a).unwrap());
            if f.distance(&g) as u64 <= c.e_low() {
                let fa = f.get(a).index();
                for alt in 0..c.q() as usize {
                    if alt != fa {
                        prop_assert!(t.scores[fa] + t.scores[alt] >= c.d_low() as i64);
                        prop_assert!(t.scores[fa] < t.scores[alt]);
                    }
                }
            }
        }
    }

    #[test]
    fn bd_decoder_corrects_up_to_e_low(seed in prop::collection::vec(0u32..64, 1..8),
                                       errors in prop::collection::vec((0usize..64, 0u32..8), 0..10)) {
        for c in [spc4(), rs8(), rs3()] {
            let f = codeword(c, &seed);
            let errors = &errors[..errors.len().min(c.e_low() as usize)];
            let g = add_errors(c, &f, errors);
            for opts in [BdOptions::default(), BdOptions::naive(), BdOptions::systematic()] {
                prop_assert_eq!(decode_bd(c, &g, &opts).unwrap(), f.clone());
            }
        }
    }

    #[test]
    fn bd_decoder_commutes_with_translation(seed in prop::collection::vec(0u32..64, 1..8),
                                            errors in prop::collection::vec((0usize..64, 0u32..8), 0..25),
                                            b in 0usize..64) {
        for c in [spc4(), rs8()] {
            let g = add_errors(c, &codeword(c, &seed), &errors);
            let b = b % c.len();
            // sampled membership checks are not translation invariant
            let opts = BdOptions { membership: Membership::Exhaustive, ..Default::default() };
            let direct = decode_bd(c, &g, &opts).ok().map(|w| translate(c, &w, b));
            let shifted = decode_bd(c, &translate(c, &g, b), &opts).ok();
            prop_assert_eq!(direct, shifted);
        }
    }

    #[test]
    fn word_text_round_trip(values in prop::collection::vec(prop::option::of(0u32..4), 16)) {
        let vals: Vec<Elem> = values.iter().map(|v| v.map_or(Elem::ERASED, Elem)).collect();
        let w = Word::new(4, 2, vals).unwrap();
        prop_assert_eq!(Word::parse(&w.to_text()).unwrap(), w);
    }

    #[test]
    fn he_votes_are_conserved(seed in prop::collection::vec(0u32..64, 1..8), s in 1u64..21, a in 0usize..64, rng_seed: u64) {
        let c = CodeSpec { p: 2, l: 2, modulus: None, m: 3, t: 1, base: BaseKind::Spc }.build().unwrap();
        let g = qsc_apply(&ChannelParams::new(4, 0.3, rng_seed).unwrap(), &codeword(&c, &seed)).unwrap();
        prop_assert_eq!(he_vote(&c, &g, a, s, rng_seed).unwrap().total(), s);
    }
}

#[test]
fn he_decoder_is_thread_count_independent() {
    let c = CodeSpec {
        p: 2,
        l: 2,
        modulus: None,
        m: 4,
        t: 1,
        base: BaseKind::Spc,
    }
    .build()
    .unwrap();
    let f = codeword(&c, &[3, 1, 4, 1, 5]);
    let g = qsc_apply(&ChannelParams::new(4, 0.4, 99).unwrap(), &f).unwrap();
    let points: Vec<usize> = (0..c.len()).collect();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            (
                he_decide(&c, &g, &points, 40, 5).unwrap(),
                decode_he(&c, &g, 40, 5).unwrap(),
            )
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn line_vote_probabilities_match_closed_form() {
    // one fresh noisy word per sample keeps the samples independent
    let c = CodeSpec {
        p: 2,
        l: 2,
        modulus: None,
        m: 2,
        t: 1,
        base: BaseKind::Spc,
    }
    .build()
    .unwrap();
    let f = codeword(&c, &[2, 7, 1]);
    let a = 5;
    let (wrong, right_symbol) = (c.field().add(f.get(a), Elem::ONE), f.get(a));
    let probs = vote_probs(4, 0.45).unwrap();
    let samples = 100_000u64;
    let (mut right, mut that_wrong) = (0u64, 0u64);
    for i in 0..samples {
        let g = qsc_apply(&ChannelParams::new(4, 0.30, i).unwrap(), &f).unwrap();
        let v = he_vote(&c, &g, a, 1, i).unwrap();
        right += v.counts[right_symbol.index()];
        that_wrong += v.counts[wrong.index()];
    }
    let n = samples as f64;
    for (hits, p) in [(right, probs.p_hat), (that_wrong, probs.p_check)] {
        let sigma = (p * (1.0 - p) / n).sqrt();
        assert!(
            (hits as f64 / n - p).abs() <= 3.0 * sigma,
            "{} vs {p}",
            hits as f64 / n
        );
    }
}
