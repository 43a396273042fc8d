use std::collections::HashSet;

use proptest::prelude::*;

use ratwords::codec::{decode, encode, FactorialWord};
use ratwords::density::{banach_lower_bound, folner_defect, standard_folner, Predicate, StandardFolner};
use ratwords::dynamics::{apply_rational, GeneratorFamily, MeasurableSet};
use ratwords::words::{enumerate_words, g_map, Template};
use ratwords::Rational;

fn word_strategy(max_pos: i64) -> impl Strategy<Value = FactorialWord> {
    let positions: Vec<i64> = (-max_pos..=max_pos).filter(|&t| t != 0).collect();
    proptest::collection::vec(any::<u64>(), positions.len()).prop_map(move |raw| {
        FactorialWord::from_digits(
            positions
                .iter()
                .zip(raw)
                .filter_map(|(&t, r)| {
                    let span = t.unsigned_abs() + 1;
                    let d = r % span;
                    (d > 0).then_some((t, d))
                }),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn decode_is_additive_on_disjoint_domains(a in word_strategy(6), b in word_strategy(6)) {
        let b = FactorialWord::from_digits(b.iter().filter(|(t, _)| a.get(*t).is_none())).unwrap();
        let joined = a.disjoint_union(&b).unwrap();
        prop_assert_eq!(decode(&joined), decode(&a) + decode(&b));
    }

    #[test]
    fn rotation_action_is_additive(
        size in 2usize..20,
        shift in 0i64..20,
        a in word_strategy(4),
        b in word_strategy(4),
    ) {
        let b = FactorialWord::from_digits(b.iter().filter(|(t, _)| a.get(*t).is_none())).unwrap();
        let fam = GeneratorFamily::rotations(size, 4, |t| shift * t).unwrap();
        let ta = apply_rational(&a, &fam).unwrap();
        let tb = apply_rational(&b, &fam).unwrap();
        let tab = apply_rational(&a.disjoint_union(&b).unwrap(), &fam).unwrap();
        prop_assert_eq!(tab, ta.compose(&tb));
    }

    #[test]
    fn preimages_preserve_measure(size in 1usize..30, pts in proptest::collection::vec(0usize..30, 0..10), w in word_strategy(3)) {
        let a = MeasurableSet::new(size, pts.into_iter().filter(|&p| p < size)).unwrap();
        let fam = GeneratorFamily::rotations(size, 3, |t| t * t + 1).unwrap();
        let t = apply_rational(&w, &fam).unwrap();
        prop_assert_eq!(t.preimage(&a).measure(), a.measure());
    }

    #[test]
    fn encode_inverts_decode(w in word_strategy(8)) {
        prop_assert_eq!(encode(&decode(&w)), w);
    }

    #[test]
    fn defect_is_bounded(num in -20i64..20, den in 1i64..8, n in 1u64..6) {
        let s = Rational::new(num, den).unwrap();
        let d = folner_defect(&StandardFolner, n, &s);
        prop_assert!(!d.is_negative());
        prop_assert!(d <= Rational::from(2));
    }
}

#[test]
fn g_is_injective_on_each_template() {
    for (positions, k) in [(vec![-3, 2, 4], 2), (vec![-4, -3, 3], 3), (vec![1, 2], 1), (vec![-2, 2, 3, 4], 2)] {
        let tpl = Template::new(positions, k).unwrap();
        let values: Vec<Rational> = enumerate_words(tpl.len(), k).map(|w| g_map(&w, &tpl).unwrap()).collect();
        let distinct: HashSet<&Rational> = values.iter().collect();
        assert_eq!(distinct.len(), values.len(), "{tpl}");
    }
}

#[test]
fn standard_folner_sizes() {
    for n in 1..=5u64 {
        let size: u64 = (1..=n).product::<u64>() * n;
        assert_eq!(standard_folner(n).len() as u64, size);
    }
}

#[test]
fn defect_shrinks_along_the_sequence() {
    let s = Rational::new(1, 2).unwrap();
    let defects: Vec<Rational> = (2..=6).map(|n| folner_defect(&StandardFolner, n, &s)).collect();
    assert!(defects.windows(2).all(|w| w[1] < w[0]), "{defects:?}");
}

#[test]
fn shifted_bound_dominates_unshifted_ratio() {
    let pred = Predicate::parse("U [0,0.5) [2,3) period 5").unwrap();
    let member = |x: &Rational| pred.contains(x);
    for n in 1..=4u64 {
        let elems = standard_folner(n);
        let hits = elems.iter().filter(|x| member(x)).count();
        let ratio = Rational::new(hits as u64, elems.len() as u64).unwrap();
        let shifts = [Rational::zero(), Rational::new(1, 3).unwrap(), Rational::from(2)];
        let bound = banach_lower_bound(member, &StandardFolner, n, &shifts).unwrap();
        assert!(bound >= ratio, "n={n}: {bound} < {ratio}");
    }
}
