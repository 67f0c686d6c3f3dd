use proptest::prelude::*;
use ssom_core::io::corpus::{corpus, CORPUS_NAMES};
use ssom_core::lattice::GeometricLattice;
use ssom_core::morse::{is_acyclic, Matching};
use ssom_core::salvetti::{SalvettiLocalization, SalvettiPoset};
use ssom_core::sign_vectors::{LabelSet, Sign, SignVector};

const N: usize = 10;

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus), Just(Sign::Zero)]
}

fn vector() -> impl Strategy<Value = SignVector> {
    prop::collection::vec(sign(), N).prop_map(|s| SignVector::from_signs(&s))
}

fn member() -> impl Strategy<Value = &'static str> {
    prop::sample::select(CORPUS_NAMES.to_vec())
}

proptest! {
    #[test]
    fn composition_is_associative(x in vector(), y in vector(), z in vector()) {
        prop_assert_eq!(x.compose(&y).compose(&z), x.compose(&y.compose(&z)));
    }

    #[test]
    fn composition_laws(x in vector(), y in vector()) {
        let xy = x.compose(&y);
        prop_assert_eq!(x.compose(&x), x);
        prop_assert_eq!(x.compose(&x.opposite()), x);
        prop_assert_eq!(xy.zero_set(), x.zero_set().intersection(y.zero_set()));
        prop_assert!(x.leq(&xy));
        prop_assert_eq!(xy.opposite(), x.opposite().compose(&y.opposite()));
    }

    #[test]
    fn separation_laws(x in vector(), y in vector()) {
        prop_assert_eq!(x.separator(&y), y.separator(&x));
        prop_assert_eq!(x.separator(&x.opposite()), x.support());
        prop_assert!(x.separator(&y).is_subset(x.support().intersection(y.support())));
        prop_assert_eq!(x.compose(&y).separator(&y), x.separator(&y));
    }

    #[test]
    fn restriction_preserves_composition(x in vector(), y in vector(), mask in 0u64..(1 << N)) {
        let positions: Vec<usize> = LabelSet(mask).iter().collect();
        let lhs = x.compose(&y).restrict(&positions);
        prop_assert_eq!(lhs, x.restrict(&positions).compose(&y.restrict(&positions)));
    }

    #[test]
    fn parse_render_round_trip(x in vector()) {
        prop_assert_eq!(SignVector::parse(&x.to_string()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn localization_preserves_composition(name in member(), i in any::<prop::sample::Index>(),
                                          a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let c = corpus(name).unwrap();
        let flats = c.flats();
        let loc = c.localization(*i.get(&flats)).unwrap();
        let (a, b) = (a.get(c.covectors()), b.get(c.covectors()));
        let lhs = loc.project(&a.compose(b));
        prop_assert!(loc.system.contains(&lhs));
        prop_assert_eq!(lhs, loc.project(a).compose(&loc.project(b)));
    }

    #[test]
    fn sections_are_right_inverses(name in prop::sample::select(vec!["uniform-2-3", "boolean3", "braid3", "sec3-arrangement"]),
                                   i in any::<prop::sample::Index>()) {
        let c = corpus(name).unwrap();
        let s = SalvettiPoset::new(&c);
        let flats = c.flats();
        let x = *i.get(&flats);
        let loc = SalvettiLocalization::new(&c, &s, x).unwrap();
        for alpha in loc.localization.section_bases(&c) {
            let iota = loc.localization.section(&c, &alpha).unwrap();
            for (j, &h) in iota.iter().enumerate() {
                prop_assert_eq!(loc.localization.rho[h], j);
            }
            let tilde = loc.section(&c, &s, &alpha).unwrap();
            for (j, &h) in tilde.iter().enumerate() {
                prop_assert_eq!(loc.map[h], j);
            }
        }
    }

    #[test]
    fn brylawski_maps_are_inverse(name in member(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let c = corpus(name).unwrap();
        let l = GeometricLattice::from_covectors(&c);
        let modular: Vec<LabelSet> = l.flats().iter().copied().filter(|&x| l.is_modular_flat(x).unwrap().is_modular()).collect();
        let x = *i.get(&modular);
        let y = *j.get(l.flats());
        let iso = l.brylawski_iso(x, y).unwrap();
        for (k, z) in iso.upper.iter().enumerate() {
            prop_assert_eq!(l.meet(*z, x), iso.down[k]);
            prop_assert_eq!(l.join(iso.down[k], y), *z);
        }
        prop_assert!(iso.verify().is_ok());
    }

    #[test]
    fn dual_matching_has_the_same_acyclicity(name in member(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..40)) {
        let c = corpus(name).unwrap();
        let p = c.face_poset();
        let covers = p.covers();
        let mut used = p.empty_set();
        let mut pairs = Vec::new();
        for k in picks {
            let (a, b) = *k.get(&covers);
            if !used.contains(a) && !used.contains(b) {
                used.insert(a);
                used.insert(b);
                pairs.push((a, b));
            }
        }
        let m = Matching::new(&p, p.full_set(), pairs).unwrap();
        let dual = p.dual();
        prop_assert_eq!(is_acyclic(&p, &m).is_acyclic(), is_acyclic(&dual, &m.dual()).is_acyclic());
        prop_assert_eq!(m.critical_cells(), m.dual().critical_cells());
    }
}
