use excmap_core::exceptional::{
    affine_conjugate, is_bijective_on, is_exceptional, lcm_upto, Bijectivity, DecideOptions, ExceptionalityVerdict,
    Extension,
};
use excmap_core::field::{embed, field_of_order, gcd, make_field, Field};
use excmap_core::group::{nt_ram_battery, t_ram_equiv, triple_corpus, validate_triple, CorpusOptions, Perm, GROUP_CAP};
use excmap_core::laurent::LaurentSeries;
use excmap_core::tame::{coprime_battery, roots_of_unity_constant, tame_monodromy_triple};
use excmap_core::text::{format_map, format_series, parse_map, parse_series};
use excmap_core::{separable_core, Poly, ProjPoint, RatFunc};
use proptest::prelude::*;

const SMALL_Q: [u64; 6] = [2, 3, 4, 5, 7, 9];

fn field(q: u64) -> Field {
    field_of_order(q).unwrap()
}

fn poly_from(f: &Field, raw: &[u64]) -> Poly {
    Poly::new(f, raw.iter().map(|&c| f.element(c % f.order())).collect())
}

/// A nonconstant map from raw coefficient lists; `None` when they reduce to
/// a constant.
fn map_from(q: u64, num: &[u64], den: &[u64]) -> Option<RatFunc> {
    let f = field(q);
    let den = poly_from(&f, den);
    if den.is_zero() {
        return None;
    }
    let r = RatFunc::new(poly_from(&f, num), den).ok()?;
    (!r.is_constant()).then_some(r)
}

fn small_map() -> impl Strategy<Value = Option<RatFunc>> {
    (prop::sample::select(SMALL_Q.to_vec()), prop::collection::vec(0u64..9, 1..5), prop::collection::vec(0u64..9, 1..3))
        .prop_map(|(q, n, d)| map_from(q, &n, &d))
}

fn small_poly_map() -> impl Strategy<Value = Option<RatFunc>> {
    (prop::sample::select(SMALL_Q.to_vec()), prop::collection::vec(0u64..9, 2..5))
        .prop_map(|(q, n)| map_from(q, &n, &[1]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_fixes_every_element(q in prop::sample::select(vec![4u64, 8, 9, 25, 27, 49, 256, 625, 4096, 65536]), raw in any::<u64>()) {
        let f = field(q);
        let a = f.element(raw % q);
        prop_assert_eq!(a.pow(q as u128), a);
    }

    #[test]
    fn embeddings_are_homomorphisms((p, m, k) in prop::sample::select(vec![(2u64, 1usize, 4usize), (2, 2, 3), (3, 1, 2), (3, 2, 2), (5, 1, 3), (2, 3, 2)]), x in any::<u64>(), y in any::<u64>()) {
        let src = make_field(p, m).unwrap();
        let dst = make_field(p, m * k).unwrap();
        let emb = embed(&src, &dst).unwrap();
        let (a, b) = (src.element(x % src.order()), src.element(y % src.order()));
        prop_assert_eq!(emb.apply(&(&a * &b)), &emb.apply(&a) * &emb.apply(&b));
        prop_assert_eq!(emb.apply(&(&a + &b)), &emb.apply(&a) + &emb.apply(&b));
        prop_assert!(emb.apply(&src.one()).is_one());
    }

    #[test]
    fn fiber_degree_deficit_is_ramification_at_infinity(f in small_map(), braw in any::<u64>()) {
        let Some(f) = f else { return Ok(()) };
        let b = f.field().element(braw % f.field().order());
        let fiber = f.fiber_poly(&b);
        let deficit = f.degree() - fiber.deg0();
        let at_inf = f.eval_proj(&ProjPoint::Infinity);
        let expected = if at_inf == ProjPoint::Finite(b.clone()) { f.ram_index(&ProjPoint::Infinity).unwrap() } else { 0 };
        prop_assert_eq!(deficit, expected);
        for a in f.field().elements() {
            let m = fiber.root_multiplicity(&a).unwrap();
            if m > 0 {
                prop_assert_eq!(f.ram_index(&ProjPoint::Finite(a)).unwrap(), m);
            }
        }
    }

    #[test]
    fn separable_core_round_trip(f in small_map(), twist in 0u32..3) {
        let Some(f) = f else { return Ok(()) };
        let p = f.field().characteristic() as usize;
        let g = f.inflate(p.pow(twist));
        let (core, e) = separable_core(&g);
        prop_assert!(e >= twist);
        let back = core.inflate(p.pow(e));
        prop_assert_eq!(&back, &g);
        for x in ProjPoint::all(g.field()) {
            prop_assert_eq!(back.eval_proj(&x), g.eval_proj(&x));
        }
    }

    #[test]
    fn verdicts_carry_valid_certificates(f in small_map()) {
        let Some(f) = f else { return Ok(()) };
        let opts = DecideOptions::default();
        let d = is_exceptional(&f, &opts).unwrap();
        let q = f.field().order();
        match &d.verdict {
            ExceptionalityVerdict::Exceptional { witness_k } => {
                prop_assert!(is_bijective_on(&f, *witness_k, opts.cap).unwrap().is_bijective());
                prop_assert!((q as f64).powi(*witness_k as i32) >= (d.core_degree as f64).powi(4));
                // every k in the window coprime to lcm(1..d) is bijective
                let l = lcm_upto(d.core_degree);
                for k in d.window.ks().filter(|&k| gcd(k as u64, l) == 1) {
                    prop_assert!(is_bijective_on(&f, k, opts.cap).unwrap().is_bijective(), "k = {}", k);
                }
            }
            ExceptionalityVerdict::NotExceptional { collision, .. } => {
                let ext = Extension::new(f.field(), collision.k, opts.cap).unwrap();
                let fe = f.embed(&ext.embedding);
                prop_assert_ne!(&collision.a, &collision.b);
                prop_assert_eq!(fe.eval_proj(&collision.a), collision.image.clone());
                prop_assert_eq!(fe.eval_proj(&collision.b), collision.image.clone());
            }
            ExceptionalityVerdict::Inconclusive { .. } => prop_assert!(false, "default window is sound"),
        }
    }

    #[test]
    fn polynomial_bijectivity_on_field_and_line_agree(f in small_poly_map(), k in 1u32..3) {
        let Some(f) = f else { return Ok(()) };
        let ext = Extension::new(f.field(), k, 1 << 16).unwrap();
        let fe = f.embed(&ext.embedding);
        let mut images: Vec<u64> = ext.field().elements().map(|a| match fe.eval_proj(&ProjPoint::Finite(a)) {
            ProjPoint::Finite(b) => b.index(),
            ProjPoint::Infinity => u64::MAX,
        }).collect();
        images.sort_unstable();
        images.dedup();
        let on_field = images.len() as u64 == ext.field().order();
        let on_line = matches!(is_bijective_on(&f, k, 1 << 16).unwrap(), Bijectivity::Bijective);
        prop_assert_eq!(on_field, on_line);
    }

    #[test]
    fn verdict_invariant_under_affine_maps(f in small_map(), a in 1u64..9, b in 0u64..9, c in 1u64..9, d in 0u64..9) {
        let Some(f) = f else { return Ok(()) };
        let field = f.field().clone();
        let q = field.order();
        let (a, c) = (field.element(1 + (a - 1) % (q - 1)), field.element(1 + (c - 1) % (q - 1)));
        let (b, d) = (field.element(b % q), field.element(d % q));
        let g = affine_conjugate(&f, &a, &b, &c, &d);
        let opts = DecideOptions::default();
        prop_assert_eq!(
            is_exceptional(&f, &opts).unwrap().verdict.is_exceptional(),
            is_exceptional(&g, &opts).unwrap().verdict.is_exceptional()
        );
    }

    #[test]
    fn verdict_invariant_under_frobenius_twist(f in small_map()) {
        let Some(f) = f else { return Ok(()) };
        let p = f.field().characteristic() as usize;
        let opts = DecideOptions::default();
        prop_assert_eq!(
            is_exceptional(&f, &opts).unwrap().verdict.is_exceptional(),
            is_exceptional(&f.inflate(p), &opts).unwrap().verdict.is_exceptional()
        );
    }

    #[test]
    fn map_text_round_trip(f in small_map()) {
        let Some(f) = f else { return Ok(()) };
        let text = format_map(&f);
        prop_assert_eq!(parse_map(&text).unwrap(), f);
    }

    #[test]
    fn series_text_round_trip(q in prop::sample::select(SMALL_Q.to_vec()), v in -5i64..5, raw in prop::collection::vec(0u64..9, 1..12), prec in 12usize..40) {
        let f = field(q);
        let coeffs = raw.iter().map(|&c| f.element(c % q)).collect();
        let s = LaurentSeries::new(&f, v, coeffs, prec).unwrap();
        prop_assume!(!s.is_zero());
        prop_assert_eq!(parse_series(&format_series(&s)).unwrap(), s);
    }

    #[test]
    fn relabeling_preserves_batteries(n in 1u64..9, q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13]), seed in any::<u64>(), pick in any::<usize>()) {
        prop_assume!(gcd(n, q) == 1);
        let t = tame_monodromy_triple(n, q).unwrap();
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut s = seed;
        for i in (1..images.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            images.swap(i, (s >> 33) as usize % (i + 1));
        }
        let pi = Perm::from_images(images).unwrap();
        let u = t.relabel(&pi).unwrap();
        let expected = nt_ram_battery(&t).unwrap();
        prop_assert_eq!(&nt_ram_battery(&u).unwrap(), &expected);
        let a = &t.arith().elements()[pick % t.arith().order()];
        let v = t.with_frob(t.frob().conjugate_by(a));
        prop_assert_eq!(&nt_ram_battery(&v).unwrap(), &expected);
    }
}

#[test]
fn t_ram_agrees_on_all_small_configurations() {
    let corpus = triple_corpus(CorpusOptions { max_degree: 4, totally_ramified: false, cap: GROUP_CAP }).unwrap();
    let mut not_totally_ramified = 0;
    for t in &corpus {
        assert!(validate_triple(t).check().is_ok());
        let r = t_ram_equiv(t);
        assert!(r.agreement, "{t:?}: {r:?}");
        not_totally_ramified += usize::from(!r.geom_transitive);
    }
    assert!(not_totally_ramified > 0);
}

#[test]
fn roots_of_unity_counts() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25] {
        let f = field(q);
        let p = f.characteristic();
        for r in (1..=30).filter(|r| r % p != 0) {
            assert_eq!(roots_of_unity_constant(r, &f, 4).unwrap().len() as u64, gcd(r, q - 1), "r={r} q={q}");
        }
    }
}

#[test]
fn exceptional_tame_models_have_coprime_degree() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
        for n in (1..=30).filter(|&n| gcd(n, q) == 1) {
            let r = coprime_battery(n, q).unwrap();
            if r.items[0] {
                assert_eq!(gcd(n, q - 1), 1, "n={n} q={q}");
            }
        }
    }
}
