use cupcone::cyclo::{
    bernoulli_mod, bernoulli_mod_power_sums, eigenspace_idempotents, eta_exponents, irregular_indices, random_delta_module,
    synthetic_table_csv, validate_pairing_table, CycloContext, PairingTable, RowVerdict,
};
use cupcone::modlin::zn::{is_prime, md};
use cupcone::ModuleHom;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn irregular_primes() {
    assert_eq!(irregular_indices(7).unwrap(), Vec::<i64>::new());
    assert_eq!(irregular_indices(37).unwrap(), vec![32]);
    assert_eq!(irregular_indices(157).unwrap(), vec![62, 110]);
    assert_eq!(irregular_indices(59).unwrap(), vec![44]);
    assert!(irregular_indices(4).is_err());
    assert!(irregular_indices(2).is_err());
}

#[test]
fn two_bernoulli_formulas_agree_below_200() {
    for p in (5..200).filter(|&p| is_prime(p)) {
        for k in (0..=p - 3).step_by(2) {
            assert_eq!(bernoulli_mod(p, k).unwrap(), bernoulli_mod_power_sums(p, k).unwrap(), "p = {p}, k = {k}");
        }
    }
}

#[test]
fn idempotents_on_random_modules() {
    let ctx = CycloContext::new(5, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..24 {
        let m = random_delta_module(&ctx, 1 + i % 3, &mut rng).unwrap();
        let e = eigenspace_idempotents(&ctx, &m).unwrap();
        assert!(e.verified(), "module {i}");
        // the action of any δ is Δ-equivariant, so it commutes with every e_j
        let g = m.action_hom(1);
        assert!(e.maps.iter().all(|h| h.compose(&g) == g.compose(h)));
        let total: u128 = e.eigenspace_orders().iter().product();
        assert_eq!(total, m.module.order());
    }
}

#[test]
fn eta_exponent_sums_vanish() {
    for p in [5, 7, 11, 13] {
        let ctx = CycloContext::new(p, 2).unwrap();
        for i in (-7..=15).filter(|i: &i64| i.rem_euclid(2) == 1) {
            let ex = eta_exponents(&ctx, i, 2).unwrap();
            let s = ex.iter().sum::<i64>();
            if md(i - 1, p - 1) != 0 {
                assert_eq!(md(s, p), 0, "p = {p}, i = {i}");
            } else {
                assert!(ex.iter().all(|&x| x == 1));
            }
        }
    }
}

#[test]
fn synthetic_table_all_pass_and_stable() {
    let csv = synthetic_table_csv(100, &mut ChaCha8Rng::seed_from_u64(5));
    let a = validate_pairing_table(&PairingTable::from_csv(csv.as_bytes()).unwrap());
    let b = validate_pairing_table(&PairingTable::from_csv(csv.as_bytes()).unwrap());
    assert_eq!(a.rows, 100);
    assert!(a.all_pass);
    assert_eq!(a.hash, b.hash);
    assert_eq!(a, b);
}

#[test]
fn bookkeeping_exposes_both_readings() {
    // k = 62 vanishes against every larger k′ but not against k′ = 10 < 62
    let csv = "p,k,kprime,val_kprime,val_k,yk_zero,ykprime_zero\n157,62,110,0,0,1,1\n157,10,62,4,153,1,1\n";
    let r = validate_pairing_table(&PairingTable::from_csv(csv.as_bytes()).unwrap());
    let b = r.bookkeeping.iter().find(|b| b.p == 157 && b.k == 62).unwrap();
    assert!(b.kprime_greater.all_vanish);
    assert!(!b.kprime_any.all_vanish);
    assert_eq!(b.kprime_any.rows, 2);
    match &r.verdicts[0] {
        RowVerdict::Checked { indices_irregular, hypotheses_flagged, pass, .. } => {
            assert!(indices_irregular & hypotheses_flagged & pass)
        }
        v => panic!("{v:?}"),
    }
}

proptest! {
    #[test]
    fn teichmuller_is_multiplicative_lift(pi in 0usize..6, e in 1u32..4, a in 1i64..1000, b in 1i64..1000) {
        let p = [3, 5, 7, 11, 13, 37][pi];
        let ctx = CycloContext::new(p, e).unwrap();
        prop_assume!(a % p != 0 && b % p != 0);
        let (wa, wb) = (ctx.teichmuller(a).unwrap(), ctx.teichmuller(b).unwrap());
        prop_assert_eq!(md(wa, p), md(a, p));
        prop_assert_eq!(md(wa * wb, ctx.modulus), ctx.teichmuller(a * b).unwrap());
        prop_assert_eq!(cupcone::modlin::zn::pow_mod(wa, (p - 1) as u64, ctx.modulus), 1);
    }

    #[test]
    fn verdicts_are_pure(seed in any::<u64>()) {
        let csv = synthetic_table_csv(8, &mut ChaCha8Rng::seed_from_u64(seed));
        let t = PairingTable::from_csv(csv.as_bytes()).unwrap();
        let mut rev = t.clone();
        rev.entries.reverse();
        let (a, b) = (validate_pairing_table(&t), validate_pairing_table(&rev));
        let mut bv = b.verdicts.clone();
        bv.reverse();
        prop_assert_eq!(a.verdicts, bv);
    }

    #[test]
    fn projections_commute_with_scalars(seed in any::<u64>(), k in 0i64..25) {
        let ctx = CycloContext::new(5, 2).unwrap();
        let m = random_delta_module(&ctx, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let e = eigenspace_idempotents(&ctx, &m).unwrap();
        let s = ModuleHom::scalar(&m.module, k);
        prop_assert!(e.verified());
        for h in &e.maps {
            prop_assert_eq!(h.compose(&s), s.compose(h));
        }
    }
}
