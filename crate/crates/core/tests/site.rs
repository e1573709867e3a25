use std::sync::Arc;

use cupcone::extensions::{augmentation_extension, extend_homomorphism, SplitExtension};
use cupcone::groupcoh::standard::cochain_complex;
use cupcone::groupcoh::{Cochain, FiniteGroup, GModule, DEFAULT_MAX_CELLS};
use cupcone::modlin::Pairing;
use cupcone::pools::named_group;
use cupcone::site::reciprocity::{elementary_reciprocity, random_reciprocity};
use cupcone::site::instances::{elementary_augmentation, random_selmer, random_selmer_on, random_site, trivial_locals_z3, two_point_z3, z2_in_s3};
use cupcone::site::{reciprocity_suite, selmer_trivialize, splitting_suite, twist_identification, verify_pairing_adjunction, TwistStatus, Flavor, LeibnizSetup, Local, SelmerData, SiteModel, Trivialization};
use cupcone::{FinAbModule, Mat, ModuleHom, Sign, SignTally, SignVerdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = DEFAULT_MAX_CELLS;

fn z3_trivial(g: &Arc<FiniteGroup>) -> GModule {
    GModule::trivial(g.clone(), FinAbModule::cyclic(3))
}

fn unipotent() -> SplitExtension {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let z3 = FinAbModule::cyclic(3);
    let b = GModule::from_generators(g.clone(), FinAbModule::new(vec![3, 3]).unwrap(), &[Mat::from_rows(&[vec![1, 1], vec![0, 1]])]).unwrap();
    let h = |rows: &[Vec<i64>], s: &FinAbModule, t: &FinAbModule| ModuleHom::new(s.clone(), t.clone(), Mat::from_rows(rows)).unwrap();
    let iota = h(&[vec![1], vec![0]], &z3, &b.module);
    let pi = h(&[vec![0, 1]], &b.module, &z3);
    let s = h(&[vec![0], vec![1]], &z3, &b.module);
    SplitExtension::new(z3_trivial(&g), b, z3_trivial(&g), iota, pi, Some(s)).unwrap()
}

fn dims(site: &SiteModel, m: &GModule, top: usize) -> Vec<usize> {
    let c = site.compact_complex(m, top, CAP).unwrap();
    c.long_exact().unwrap();
    (0..top).map(|i| c.invariants(i).unwrap().len()).collect()
}

#[test]
fn two_point_z3_compact_dims() {
    let site = two_point_z3();
    let m = z3_trivial(&site.group);
    let c = site.compact_complex(&m, 4, CAP).unwrap();
    for i in 0..4 {
        assert!(c.invariants(i).unwrap().iter().all(|&d| d == 3));
    }
    assert_eq!(dims(&site, &m, 4), vec![0, 1, 1, 1]);
}

#[test]
fn empty_and_identity_local_families() {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let m = z3_trivial(&g);
    let empty = SiteModel::untwisted(g.clone(), vec![], 3).unwrap();
    assert_eq!(dims(&empty, &m, 3), vec![1, 1, 1]);
    let one = SiteModel::untwisted(g.clone(), vec![Local { name: "v".into(), group: g.clone(), embedding: vec![0, 1, 2] }], 3).unwrap();
    assert_eq!(dims(&one, &m, 3), vec![0, 0, 0]);
}

#[test]
fn trivial_locals_add_to_degree_one() {
    // C_l is concentrated in H^0 = M per local, so |H^1_c| = 3^k · ... with H^0 ↪ M^k
    let site = trivial_locals_z3(2);
    let m = z3_trivial(&site.group);
    assert_eq!(dims(&site, &m, 4), vec![0, 2, 1, 1]);
}

#[test]
fn site_validation() {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let bad = Local::new("v", g.clone(), vec![0, 0, 0], &g);
    assert!(bad.unwrap_err().to_string().contains("not injective"));
    assert!(Local::new("v", z2, vec![0, 1], &g).is_err());
    let s3 = Arc::new(FiniteGroup::symmetric3());
    // the sign character is multiplicative, a random assignment is not
    let sign: Vec<i64> = (0..6).map(|x| if s3.element_order(x) == 2 { 4 } else { 1 }).collect();
    assert!(SiteModel::new(s3.clone(), vec![], 5, sign).is_ok());
    let err = SiteModel::new(s3, vec![], 5, vec![1, 2, 1, 1, 1, 1]).unwrap_err();
    assert!(err.to_string().contains("multiplicative") || err.to_string().contains("unit"));
}

#[test]
fn localization_is_a_chain_map_and_restricts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["S3", "D4", "Z3xZ3"] {
        let g = Arc::new(named_group(name).unwrap());
        let site = random_site(&g, 4, 2, &mut rng);
        let m = cupcone::pools::random_module(&g, 4, &mut rng);
        let c = site.compact_complex(&m, 3, CAP).unwrap();
        c.ell.check(&c.global, &c.local).unwrap();
        for _ in 0..10 {
            let x: Vec<i64> = c.global.piece(1).iter().map(|&q| rand::Rng::gen_range(&mut rng, 0..q)).collect();
            let f = Cochain { degree: 1, rank: m.rank(), values: x.clone() };
            let packed = SiteModel::pack_local(&site.localize(&f));
            assert_eq!(packed, c.ell.apply(1, &x, &c.local));
        }
    }
    // trivial local: ℓ_v(f) is the value at (e, …, e), zero for cocycles of positive degree
    let site = trivial_locals_z3(1);
    let f = Cochain::from_fn(3, 1, 1, |t| vec![t[0] as i64]);
    assert_eq!(site.localize(&f)[0].values, vec![0]);
}

#[test]
fn leibniz_for_compact_cups() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["Z/3", "S3", "Z2xZ2"] {
        let g = Arc::new(named_group(name).unwrap());
        for _ in 0..3 {
            let site = random_site(&g, 4, 2, &mut rng);
            let gm = cupcone::pools::random_module(&g, 4, &mut rng);
            let gn = cupcone::pools::random_module(&g, 4, &mut rng);
            let (gl, tm) = GModule::tensor(&gm, &gn);
            let pairing = tm.pairing();
            let xm = cochain_complex(&gm, 3, CAP).unwrap();
            let xn = cochain_complex(&gn, 3, CAP).unwrap();
            let cn = site.compact_complex(&gn, 3, CAP).unwrap();
            let cm = site.compact_complex(&gm, 3, CAP).unwrap();
            let cl = site.compact_complex(&gl, 3, CAP).unwrap();
            let left = LeibnizSetup { site: &site, gm: &gm, gn: &gn, pairing: &pairing, compact_factor: &cn, global_factor: &xm, target: &cl };
            let right = LeibnizSetup { site: &site, gm: &gm, gn: &gn, pairing: &pairing, compact_factor: &cm, global_factor: &xn, target: &cl };
            for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)] {
                left.check_cup_c(i, j, &mut rng).unwrap();
                right.check_cup_lc(j, i, &mut rng).unwrap();
            }
        }
    }
}

#[test]
fn degree_zero_cups_are_pointwise() {
    let site = two_point_z3();
    let m = z3_trivial(&site.group);
    let p = Pairing::scalar(3, &m.module);
    let a = Cochain::constant(&[2]);
    let c = site.compact_complex(&m, 2, CAP).unwrap();
    let b: Vec<i64> = (0..c.cc.dim(1) as i64).map(|k| k % 3).collect();
    let out = site.cup_c(&a, &b, 1, &m, &p);
    assert_eq!(out, b.iter().map(|x| 2 * x % 3).collect::<Vec<_>>());
    let out = site.cup_lc(&b, 1, &m.module, &a, &m, &p.flipped());
    assert_eq!(out, b.iter().map(|x| 2 * x % 3).collect::<Vec<_>>());
}

#[test]
fn trivialization_cases() {
    let e = unipotent();
    // trivial locals: φ = 0
    let site = trivial_locals_z3(2);
    let Trivialization::Trivialized(d) = selmer_trivialize(&e, &site).unwrap() else { panic!("should trivialize") };
    assert!(d.phis.iter().all(|p| p.is_zero()));
    // G_v = G: χ restricts to a nonzero class
    let Trivialization::Obstructed(o) = selmer_trivialize(&e, &two_point_z3()).unwrap() else { panic!("should be obstructed") };
    assert_eq!(o.h1, vec![3]);
    assert!(o.class.iter().any(|&x| x != 0));
    // split extension: χ = 0
    let g = Arc::new(FiniteGroup::cyclic(3));
    let ds = FinAbModule::direct_sum(&[FinAbModule::cyclic(3), FinAbModule::cyclic(3)]);
    let b = GModule::trivial(g.clone(), ds.module.clone());
    let split = SplitExtension::new(z3_trivial(&g), b, z3_trivial(&g), ds.inclusions[0].clone(), ds.projections[1].clone(), Some(ds.inclusions[1].clone())).unwrap();
    let Trivialization::Trivialized(d) = selmer_trivialize(&split, &two_point_z3()).unwrap() else { panic!() };
    assert!(d.phis.iter().all(|p| p.is_zero()));
}

#[test]
fn selmer_sequences_and_cone_rewriting() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let groups: Vec<Arc<FiniteGroup>> = ["Z/2", "Z/3", "Z/4", "S3", "Z2xZ2"].iter().map(|n| Arc::new(named_group(n).unwrap())).collect();
    for _ in 0..8 {
        let d = random_selmer(&groups, &[2, 3, 4, 9], 2, &mut rng).unwrap();
        let cx = d.complexes(3, CAP).unwrap();
        cx.selmer.long_exact(0, 1).unwrap();
        cx.compact.long_exact(0, 1).unwrap();
        cx.plain.long_exact(0, 1).unwrap();
        let rep = d.cone_rewriting(&cx).unwrap();
        assert!(rep.quasi_isomorphism, "{rep:?}");
    }
}

#[test]
fn empty_local_family_gives_plain_complex() {
    let e = unipotent();
    let site = SiteModel::untwisted(e.group().clone(), vec![], 3).unwrap();
    let d = SelmerData::new(site, e, vec![]).unwrap();
    let cx = d.complexes(3, CAP).unwrap();
    for i in 0..3 {
        assert_eq!(cx.selmer.y.piece(i), cx.plain.y.piece(i));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = d.equalcup_samples(&cx, Flavor::Selmer, 1, 5, &mut rng);
    let p = d.equalcup_samples(&cx, Flavor::Plain, 1, 5, &mut rng);
    assert!(s.iter().chain(&p).all(|x| x.allowed.plus));
}

#[test]
fn equalcup_signs_on_augmentation_over_trivial_locals() {
    // Z/3: μ ∪ u vanishes in H^2 (odd p), so every flavor is degenerate
    let site = trivial_locals_z3(2);
    let mu: Vec<Vec<i64>> = (0..3).map(|k| vec![k as i64]).collect();
    let aug = augmentation_extension(site.group.clone(), &FinAbModule::cyclic(3), &mu, 3, 1).unwrap();
    let Trivialization::Trivialized(d) = selmer_trivialize(&aug.ext, &site).unwrap() else { panic!() };
    let cx = d.complexes(2, CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for flavor in Flavor::ALL {
        let mut tally = SignTally::default();
        for (k, s) in d.equalcup_samples(&cx, flavor, 1, 10, &mut rng).into_iter().enumerate() {
            tally.record(k, s.allowed);
        }
        assert_eq!(tally.verdict(Sign::Plus), SignVerdict::DegeneratePass, "{flavor:?}");
    }
    // Z/3 × Z/3 with X = G: e_1 ∪ e_2 ≠ 0 makes all three maps nonzero
    let g = Arc::new(named_group("Z3xZ3").unwrap());
    let locals = (1..=2).map(|i| Local::subgroup(format!("v{i}"), &g, &[])).collect();
    let site = SiteModel::untwisted(g.clone(), locals, 3).unwrap();
    let x = FinAbModule::new(vec![3, 3]).unwrap();
    let mu = extend_homomorphism(&g, &x, &[vec![1, 0], vec![0, 1]]).unwrap();
    let aug = augmentation_extension(g, &x, &mu, 3, 1).unwrap();
    let Trivialization::Trivialized(d) = selmer_trivialize(&aug.ext, &site).unwrap() else { panic!() };
    let cx = d.complexes(2, CAP).unwrap();
    for flavor in Flavor::ALL {
        let mut tally = SignTally::default();
        for (k, s) in d.equalcup_samples(&cx, flavor, 1, 10, &mut rng).into_iter().enumerate() {
            tally.record(k, s.allowed);
        }
        assert_eq!(tally.verdict(Sign::Plus), SignVerdict::Pass { sign: Sign::Plus }, "{flavor:?}");
    }
}

#[test]
fn equalcup_sweep_plus() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let groups: Vec<Arc<FiniteGroup>> = ["Z/2", "Z/3", "Z/4", "S3", "Z2xZ2", "Z/9"].iter().map(|n| Arc::new(named_group(n).unwrap())).collect();
    let mut tallies = std::collections::BTreeMap::new();
    for k in 0..25 {
        let d = random_selmer(&groups, &[2, 3, 4, 9], 2, &mut rng).unwrap();
        let cx = d.complexes(3, CAP).unwrap();
        for flavor in Flavor::ALL {
            for i in [1, 2] {
                let t: &mut SignTally = tallies.entry((flavor, i)).or_default();
                for s in d.equalcup_samples(&cx, flavor, i, 3, &mut rng) {
                    t.record(k, s.allowed);
                }
            }
        }
    }
    for ((flavor, i), t) in tallies {
        let v = t.verdict(Sign::Plus);
        assert!(matches!(v, SignVerdict::Pass { sign: Sign::Plus } | SignVerdict::DegeneratePass), "{flavor:?} {i}: {v:?}");
    }
}

#[test]
fn selcho_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let groups = vec![Arc::new(FiniteGroup::symmetric3()), Arc::new(FiniteGroup::dihedral4())];
    for _ in 0..6 {
        let d = random_selmer(&groups, &[2, 3, 4], 2, &mut rng).unwrap();
        for sigma in 0..d.site.group.order() {
            let r = d.verify_selcho(sigma, 2, 3, &mut rng).unwrap();
            assert!(r.square_commutes, "{r:?}");
        }
    }
}

#[test]
fn selcho_central_element_changes_phi() {
    // Z/3 is abelian: conjugation fixes j_v, but φ′ = φ − χ(σ) moves
    let e = unipotent();
    let site = trivial_locals_z3(1);
    let Trivialization::Trivialized(d) = selmer_trivialize(&e, &site).unwrap() else { panic!() };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let r = d.verify_selcho(1, 2, 5, &mut rng).unwrap();
    assert!(r.square_commutes && r.phi_changed && !r.unchanged_phi_commutes, "{r:?}");
    let r = d.verify_selcho(0, 2, 5, &mut rng).unwrap();
    assert!(r.square_commutes && !r.phi_changed);
}

#[test]
fn adjunction_sign_follows_j() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut inst = vec![elementary_augmentation(3, 3, false).unwrap(), elementary_augmentation(3, 2, true).unwrap()];
    let s3 = z2_in_s3(3);
    for _ in 0..4 {
        inst.push(random_selmer_on(&s3, &mut rng).unwrap());
    }
    let pairs = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let r = verify_pairing_adjunction(&inst, &pairs, 3, &mut rng, 1 << 26).unwrap();
    assert_eq!(r.coboundary_failures, 0);
    for p in &r.pairs {
        let want = if (p.i + p.j) % 2 == 0 { Sign::Plus } else { Sign::Minus };
        assert_eq!(p.literal.verdict(want), SignVerdict::Pass { sign: want }, "({}, {})", p.i, p.j);
        assert_eq!(p.graded.verdict(Sign::Plus), SignVerdict::Pass { sign: Sign::Plus });
    }
    assert_eq!(r.literal.verdict(Sign::Plus), SignVerdict::Inconsistent);
    assert_eq!(r.graded.verdict(Sign::Plus), SignVerdict::Pass { sign: Sign::Plus });
}

#[test]
fn adjunction_degree_zero_is_evaluation() {
    // i = j = 0: both sides are σ ↦ ⟨g, χ(σ)f⟩ up to a coboundary, and no local part
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in [elementary_augmentation(3, 1, true).unwrap(), elementary_augmentation(3, 2, false).unwrap()] {
        for s in d.adjunction_samples(0, 0, 10, &mut rng, CAP).unwrap() {
            assert!(s.allowed.plus);
        }
    }
}

#[test]
fn splitting_conditions_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let groups: Vec<Arc<FiniteGroup>> = ["Z/3", "S3", "Z2xZ2", "Z/4"].iter().map(|n| Arc::new(named_group(n).unwrap())).collect();
    let mut cases = vec![(unipotent(), two_point_z3())];
    for _ in 0..30 {
        let g = &groups[rng.gen_range(0..groups.len())];
        let n = [2, 3, 4][rng.gen_range(0..3)];
        let site = random_site(g, n, 2, &mut rng);
        let a = cupcone::pools::random_module(g, n, &mut rng);
        let c = cupcone::pools::random_module(g, n, &mut rng);
        cases.push((SplitExtension::random(&a, &c, &mut rng, CAP).unwrap(), site));
    }
    let r = splitting_suite(&cases, &mut rng).unwrap();
    assert!(r.passed(), "{:?}", r.inconsistent);
    assert!(r.obstructed >= 1 && r.failures >= 2, "{r:?}");
    assert!(r.trivialized >= 10);
}

#[test]
fn twist_identification_cases() {
    let site = two_point_z3();
    let zero = twist_identification(&site, &FinAbModule::zero(), CAP).unwrap();
    assert!(zero.maps.iter().all(|m| m.status == TwistStatus::Degenerate));
    let r = twist_identification(&site, &FinAbModule::cyclic(3), CAP).unwrap();
    assert!(r.maps.iter().all(|m| m.status == TwistStatus::Iso), "{r:?}");
    let r = twist_identification(&site, &FinAbModule::new(vec![3, 3]).unwrap(), CAP).unwrap();
    assert!(r.maps.iter().all(|m| m.status == TwistStatus::Iso), "{r:?}");
    // modulus 9 with T = Z/3: only recorded
    let g = Arc::new(FiniteGroup::cyclic(3));
    let s9 = SiteModel::untwisted(g.clone(), vec![Local::subgroup("v", &g, &[])], 9).unwrap();
    let r = twist_identification(&s9, &FinAbModule::cyclic(3), CAP).unwrap();
    assert_eq!(r.maps.len(), 3);
    eprintln!("{r:?}");
}

#[test]
fn reciprocity_outer_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let big = reciprocity_suite(&elementary_reciprocity(3, false).unwrap(), 1 << 26).unwrap();
    assert_eq!(big.outer_square, cupcone::SignSet::only(Sign::Minus), "{big:?}");
    assert!(big.antisymmetric);
    let mut t = SignTally::default();
    for k in 0..12 {
        let p = [3, 5][k % 2];
        let inst = random_reciprocity(p, 1 + (k as u32 / 2) % 2, &mut rng).unwrap();
        let r = reciprocity_suite(&inst, CAP).unwrap();
        assert!(r.antisymmetric, "{r:?}");
        t.record(k, r.outer_square);
    }
    assert!(t.allowed.minus, "{t:?}");
}

#[test]
fn reciprocity_rejects_bad_input() {
    // χ nonzero on the local
    let mut inst = elementary_reciprocity(3, false).unwrap();
    let g = inst.site.group.clone();
    let y_gen = (0..g.order()).find(|&h| inst.mu[h] == vec![0, 1]).unwrap();
    inst.site = SiteModel::untwisted(g.clone(), vec![Local::subgroup("v", &g, &[y_gen])], 3).unwrap();
    assert!(reciprocity_suite(&inst, CAP).is_err());
    // μ not surjective
    let mut inst = elementary_reciprocity(3, false).unwrap();
    inst.mu = vec![vec![0, 0]; g.order()];
    assert!(reciprocity_suite(&inst, CAP).is_err());
}

#[test]
fn reciprocity_zero_quotient_is_degenerate() {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let x = FinAbModule::cyclic(3);
    let mu = extend_homomorphism(&g, &x, &[vec![1]]).unwrap();
    let site = trivial_locals_z3(2);
    let inst = cupcone::site::ReciprocityInstance { site, q: ModuleHom::zero(&x, &FinAbModule::zero()), x, mu };
    let r = reciprocity_suite(&inst, CAP).unwrap();
    assert!(r.outer_square.is_all() && r.antisymmetric && !r.antisymmetry_nontrivial);
}
