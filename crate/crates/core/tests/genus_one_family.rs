use dessin_core::dessin::{euler_rh, genus_from_euler, Dessin, RegularType};
use dessin_core::fpgroup::{coset_enumerate, Presentation};
use dessin_core::group::{PermGroup, DEFAULT_ELEMENT_CAP};
use dessin_core::moduli::{
    central_quotient, distinguishing_witness, kernels_equal, subdirect_order, Side,
};
use dessin_core::perm::Permutation;
use dessin_core::triangle::{find_inclusion, normal_in_supergroup, TriangleType};
use dessin_core::word::{Generator, Word, KNOWN_WITNESS};

const Y: &str = "(1,4)(2,5)(7,10)(8,11)(3,6,9,12)";
const X_TAILS: [&str; 3] = ["(6,12)", "(4,10)", "(5,11)"];

fn p(text: &str, n: usize) -> Permutation {
    Permutation::parse(text, n).unwrap()
}

fn h(i: usize) -> Dessin {
    Dessin::new(p(&format!("(1,2,3,7,8,9){}", X_TAILS[i]), 12), p(Y, 12))
        .unwrap()
        .with_name(format!("h{i}"))
}

fn f() -> Dessin {
    Dessin::new(p("(1,2,3)", 6), p("(1,4)(2,5)(3,6)", 6)).unwrap()
}

#[test]
fn conjugates_share_invariants_but_not_kernels() {
    for i in 0..3 {
        assert_eq!(h(i).monodromy_group().order(), 576u64);
        assert_eq!(h(i).genus(), 1);
        assert_eq!(h(i).passport(), h(0).passport());
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        assert!(!h(i).isomorphic(&h(j)));
        assert!(!kernels_equal(&h(i), &h(j)));
    }
}

#[test]
fn centre_and_rotation() {
    let g = h(0).monodromy_group();
    let centre = g.center(DEFAULT_ELEMENT_CAP).unwrap();
    let rot = p("(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)", 12);
    assert_eq!(centre, vec![Permutation::identity(12), rot.clone()]);
    let xy = h(0).sigma_x().then(h(0).sigma_y());
    assert_eq!(xy.pow(6), rot);
    assert!(g.contains(&rot).unwrap());
}

#[test]
fn central_quotients_form_a_distinct_family() {
    let es: Vec<Dessin> = (0..3).map(|i| central_quotient(&h(i)).unwrap()).collect();
    for e in &es {
        assert_eq!(e.degree(), 288);
        let ty = e.type_of_regular().unwrap();
        assert_eq!(ty, RegularType { p: 6, q: 4, r: 6 });
        assert_eq!(euler_rh(288, ty), Ok(-120));
        assert_eq!(e.euler_characteristic(), -120);
        assert_eq!(genus_from_euler(-120), 61);
        assert_eq!(e.genus(), 61);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        assert!(!kernels_equal(&es[i], &es[j]));
        assert!(subdirect_order(&es[i], &es[j]) > 288);
        let w = distinguishing_witness(&es[i], &es[j], 100_000)
            .unwrap()
            .unwrap();
        let (t, o) = match w.trivial_on {
            Side::First => (&es[i], &es[j]),
            Side::Second => (&es[j], &es[i]),
        };
        assert!(w
            .word
            .evaluate(t.sigma_x(), t.sigma_y())
            .unwrap()
            .is_identity());
        assert!(!w
            .word
            .evaluate(o.sigma_x(), o.sigma_y())
            .unwrap()
            .is_identity());
    }
}

#[test]
fn known_witness_separates_h0_from_h1() {
    let g: Word = KNOWN_WITNESS.parse().unwrap();
    let on = |d: &Dessin| g.evaluate(d.sigma_x(), d.sigma_y()).unwrap();
    assert!(on(&h(0)).is_identity());
    assert_eq!(on(&h(1)), p("(4,10)(6,12)", 12));
}

#[test]
fn intermediate_dessin_and_its_presentation() {
    let blocks: Vec<Vec<usize>> = (1..=6).map(|i| vec![i, i + 6]).collect();
    let q = h(0).quotient_by_partition(&blocks).unwrap();
    assert!(q.isomorphic(&f()));
    let rels: Vec<Word> = ["x^3", "y^2", "[x,x^y]"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let action = coset_enumerate(&Presentation::new(rels)).unwrap();
    assert_eq!(action.index(), 18);
    let cover = f().regular_cover(DEFAULT_ELEMENT_CAP).unwrap();
    assert_eq!(cover.genus(), 1);
    assert!(kernels_equal(&action.to_dessin().unwrap(), &cover));
    assert!(action.to_dessin().unwrap().isomorphic(&cover));
}

#[test]
fn e0_is_not_normal_in_the_larger_triangle_group() {
    let e0 = central_quotient(&h(0)).unwrap();
    let inc = find_inclusion(
        TriangleType::new(6, 4, 6).unwrap(),
        TriangleType::new(6, 8, 2).unwrap(),
    )
    .unwrap()
    .unwrap();
    assert_eq!(normal_in_supergroup(&e0, &inc), Ok(false));
    // relabelling does not change the answer
    let n = e0.degree();
    let shift: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
    let rev: Vec<usize> = (1..=n).rev().collect();
    for g in [shift, rev] {
        let g = Permutation::from_images(&g).unwrap();
        assert_eq!(normal_in_supergroup(&e0.relabel(&g), &inc), Ok(false));
    }
    let g: Word = KNOWN_WITNESS.parse().unwrap();
    let image = inc.conjugations[0].apply(&g);
    assert_eq!(image.exponent_sum(Generator::Y).rem_euclid(2), 1);
    assert_eq!(g.exponent_sum(Generator::Y), 6);
}

#[test]
fn cover_of_h0() {
    let cover = h(0).regular_cover(DEFAULT_ELEMENT_CAP).unwrap();
    assert_eq!(cover.degree(), 576);
    assert_eq!(cover.genus(), 145);
    assert_eq!(
        cover.type_of_regular().unwrap(),
        RegularType { p: 6, q: 4, r: 12 }
    );
    assert!(kernels_equal(&cover, &h(0)));
    assert_eq!(cover.automorphisms().len(), 576);
}

#[test]
fn symmetric_group_on_64_points() {
    let g = PermGroup::symmetric(64);
    assert_eq!(g.order(), dessin_core::group::GroupOrder::factorial(64));
    assert!(g.is_full_symmetric());
}
