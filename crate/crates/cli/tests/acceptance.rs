//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed.

use std::collections::{HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use dessin_cli::datasets::{bundled, witness_word};
use dessin_cli::format::{parse_dessin, write_dessin};
use dessin_core::dessin::{
    enumerate_by_passport, euler_rh, genus_from_euler, Dessin, Passport, RegularType,
    DEFAULT_ENUM_DEGREE_CAP,
};
use dessin_core::fpgroup::{coset_enumerate, Presentation};
use dessin_core::group::{PermGroup, DEFAULT_ELEMENT_CAP};
use dessin_core::moduli::{central_quotient, kernels_equal, subdirect_order};
use dessin_core::perm::Permutation;
use dessin_core::triangle::{is_maximal, normal_in_supergroup, TriangleType};
use dessin_core::word::{Generator, Word};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ds(name: &str) -> Dessin {
    bundled(name).unwrap_or_else(|| panic!("missing dataset {name}"))
}

fn perm(text: &str, n: usize) -> Permutation {
    Permutation::parse(text, n).unwrap()
}

fn c1_monodromy_order() -> Check {
    for name in ["h0", "h1", "h2"] {
        let order = ds(name).monodromy_group().order();
        ensure!(order == 576u64, "{name}: order {order}");
    }
    Ok(())
}

fn c2_cover_genus() -> Check {
    let cover = ds("h0")
        .regular_cover(DEFAULT_ELEMENT_CAP)
        .map_err(|e| e.to_string())?;
    ensure!(cover.degree() == 576, "degree {}", cover.degree());
    ensure!(cover.genus() == 145, "genus {}", cover.genus());
    let ty = cover.type_of_regular().map_err(|e| e.to_string())?;
    ensure!(ty == RegularType { p: 6, q: 4, r: 12 }, "type {ty}");
    Ok(())
}

fn c3_centre() -> Check {
    let h0 = ds("h0");
    let centre = h0
        .monodromy_group()
        .center(DEFAULT_ELEMENT_CAP)
        .map_err(|e| e.to_string())?;
    let rot = perm("(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)", 12);
    ensure!(centre.len() == 2, "centre has {} elements", centre.len());
    ensure!(centre.contains(&rot), "centre {centre:?} lacks {rot}");
    let xy6 = h0.sigma_x().then(h0.sigma_y()).pow(6);
    ensure!(xy6 == rot, "(xy)^6 = {xy6}");
    Ok(())
}

fn c4_e0() -> Check {
    let e0 = ds("e0");
    ensure!(e0.degree() == 288, "degree {}", e0.degree());
    let ty = e0.type_of_regular().map_err(|e| e.to_string())?;
    ensure!(ty == RegularType { p: 6, q: 4, r: 6 }, "type {ty}");
    let chi = e0.euler_characteristic();
    ensure!(chi == -120, "euler characteristic {chi}");
    let rh = euler_rh(288, ty).map_err(|e| e.to_string())?;
    ensure!(rh == chi, "Riemann-Hurwitz gives {rh}");
    ensure!(
        e0.genus() == 61 && genus_from_euler(rh) == 61,
        "genus {}",
        e0.genus()
    );
    Ok(())
}

fn c5_witness() -> Check {
    let g: Word = witness_word().parse().map_err(|e| format!("{e}"))?;
    let (h0, h1) = (ds("h0"), ds("h1"));
    let a = g
        .evaluate(h0.sigma_x(), h0.sigma_y())
        .map_err(|e| e.to_string())?;
    let b = g
        .evaluate(h1.sigma_x(), h1.sigma_y())
        .map_err(|e| e.to_string())?;
    ensure!(a.is_identity(), "h0(g) = {a}");
    ensure!(b == perm("(4,10)(6,12)", 12), "h1(g) = {b}");
    Ok(())
}

fn c6_orbit_distinct() -> Check {
    for (names, floor) in [(["h0", "h1", "h2"], 576u64), (["e0", "e1", "e2"], 288)] {
        let d: Vec<Dessin> = names.iter().map(|n| ds(n)).collect();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            ensure!(!kernels_equal(&d[i], &d[j]), "{} ~ {}", names[i], names[j]);
            let k = subdirect_order(&d[i], &d[j]);
            ensure!(
                k > floor,
                "subdirect order of {}, {} is {k}",
                names[i],
                names[j]
            );
        }
    }
    Ok(())
}

fn c7_presentation() -> Check {
    let rels = ["x^3", "y^2", "[x,x^y]"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let action = coset_enumerate(&Presentation::new(rels)).map_err(|e| e.to_string())?;
    ensure!(action.index() == 18, "index {}", action.index());
    let cover = ds("f")
        .regular_cover(DEFAULT_ELEMENT_CAP)
        .map_err(|e| e.to_string())?;
    let d = action.to_dessin().map_err(|e| e.to_string())?;
    ensure!(
        kernels_equal(&d, &cover),
        "coset action and cover(F) differ"
    );
    ensure!(cover.genus() == 1, "cover(F) genus {}", cover.genus());
    Ok(())
}

fn c8_quotient() -> Check {
    let blocks: Vec<Vec<usize>> = (1..=6).map(|i| vec![i, i + 6]).collect();
    let q = ds("h0")
        .quotient_by_partition(&blocks)
        .map_err(|e| e.to_string())?;
    ensure!(q.isomorphic(&ds("f")), "quotient {q} is not F");
    Ok(())
}

fn c9_triangles() -> Check {
    let t = |p, q, r| TriangleType::new(p, q, r).unwrap();
    let (max, _) = is_maximal(t(6, 4, 12)).map_err(|e| e.to_string())?;
    ensure!(max, "(6,4,12) reported non-maximal");
    let (max, found) = is_maximal(t(6, 4, 6)).map_err(|e| e.to_string())?;
    ensure!(!max, "(6,4,6) reported maximal");
    let inc = found
        .into_iter()
        .find(|i| i.over == t(6, 8, 2) && i.index == 2)
        .ok_or("no index-2 inclusion into (6,8,2)")?;
    let normal = normal_in_supergroup(&ds("e0"), &inc).map_err(|e| e.to_string())?;
    ensure!(!normal, "E0 reported normal in (6,8,2)");
    let g: Word = witness_word().parse().unwrap();
    let phi = inc
        .conjugations
        .first()
        .ok_or("inclusion has no conjugation")?;
    let ys = phi.apply(&g).exponent_sum(Generator::Y);
    ensure!(
        ys.rem_euclid(2) == 1,
        "conjugated witness has y-exponent sum {ys}"
    );
    Ok(())
}

fn c10_enumeration() -> Check {
    let pp: Passport = "2^2 1^2|3 2 1|6".parse().map_err(|e| format!("{e}"))?;
    let all = enumerate_by_passport(&pp, DEFAULT_ENUM_DEGREE_CAP).map_err(|e| e.to_string())?;
    let full: Vec<Dessin> = all
        .into_iter()
        .filter(|d| d.genus() == 0 && d.monodromy_group().order() == 720u64)
        .collect();
    ensure!(full.len() == 3, "{} dessins with group S6", full.len());
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        ensure!(
            !kernels_equal(&full[i], &full[j]),
            "dessins {i} and {j} share a kernel"
        );
    }
    Ok(())
}

/// Decimal expansion of n!, by schoolbook multiplication.
fn factorial_digits(n: u32) -> String {
    let mut digits = vec![1u32];
    for k in 2..=n {
        let mut carry = 0;
        for d in digits.iter_mut() {
            let v = *d * k + carry;
            *d = v % 10;
            carry = v / 10;
        }
        while carry > 0 {
            digits.push(carry % 10);
            carry /= 10;
        }
    }
    digits
        .iter()
        .rev()
        .map(|d| char::from_digit(*d, 10).unwrap())
        .collect()
}

fn c11_degree_64() -> Check {
    let start = std::time::Instant::now();
    let long: String = format!(
        "({})",
        (1..=64)
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let g = PermGroup::from_generators(&[perm("(1,2)", 64), perm(&long, 64)])
        .map_err(|e| e.to_string())?;
    let order = g.order().to_string();
    let elapsed = start.elapsed();
    ensure!(order == factorial_digits(64), "order {order}");
    ensure!(elapsed.as_secs() < 10, "took {elapsed:?}");
    Ok(())
}

fn arb_perm_of(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

fn arb_perm(max_degree: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_degree).prop_flat_map(arb_perm_of)
}

fn arb_pair(max_degree: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max_degree).prop_flat_map(|n| (arb_perm_of(n), arb_perm_of(n)))
}

fn arb_word() -> impl Strategy<Value = Word> {
    prop::collection::vec((any::<bool>(), -3i64..=3), 0..8).prop_map(|letters| {
        let mut w = Word::identity();
        for (is_x, exp) in letters {
            if exp != 0 {
                w.push(if is_x { Generator::X } else { Generator::Y }, exp);
            }
        }
        w
    })
}

fn transitive_pair(max_degree: usize) -> impl Strategy<Value = Dessin> {
    arb_pair(max_degree).prop_filter_map("intransitive", |(x, y)| Dessin::new(x, y).ok())
}

fn closure_order(gens: &[Permutation]) -> usize {
    let n = gens[0].degree();
    let mut seen = HashSet::from([Permutation::identity(n)]);
    let mut queue = VecDeque::from([Permutation::identity(n)]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

fn run_property<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Check {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn c12_properties() -> Check {
    run_property("perm round-trip", 128, arb_perm(12), |p| {
        let back = Permutation::parse(&p.to_string(), p.degree()).unwrap();
        prop_assert_eq!(back, p);
        Ok(())
    })?;
    run_property("word round-trip", 128, arb_word(), |w| {
        let back: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
        Ok(())
    })?;
    run_property(
        "evaluation is a homomorphism",
        128,
        (arb_pair(8), arb_word(), arb_word()),
        |((x, y), a, b)| {
            let ab = a.mul(&b).evaluate(&x, &y).unwrap();
            let split = a
                .evaluate(&x, &y)
                .unwrap()
                .then(&b.evaluate(&x, &y).unwrap());
            prop_assert_eq!(ab, split);
            prop_assert!(a.mul(&a.inverse()).evaluate(&x, &y).unwrap().is_identity());
            Ok(())
        },
    )?;
    run_property(
        "isomorphism is an equivalence relation",
        64,
        transitive_pair(7).prop_flat_map(|d| {
            let n = d.degree();
            (Just(d), arb_perm_of(n), arb_perm_of(n))
        }),
        |(d, g, h)| {
            let e = d.relabel(&g);
            let f = e.relabel(&h);
            prop_assert!(d.isomorphic(&d));
            prop_assert!(d.isomorphic(&e) && e.isomorphic(&d));
            prop_assert!(d.isomorphic(&f));
            prop_assert_eq!(kernels_equal(&d, &e), true);
            Ok(())
        },
    )?;
    run_property("file round-trip", 64, transitive_pair(9), |d| {
        let d = d.with_name("t");
        prop_assert_eq!(parse_dessin(&write_dessin(&d)).unwrap(), d);
        Ok(())
    })?;
    run_property("genus formulas agree", 48, transitive_pair(5), |d| {
        let cover = d.regular_cover(DEFAULT_ELEMENT_CAP).unwrap();
        let ty = cover.type_of_regular().unwrap();
        let rh = euler_rh(cover.degree() as u64, ty).unwrap();
        prop_assert_eq!(rh, cover.euler_characteristic());
        prop_assert_eq!(genus_from_euler(rh), cover.genus() as i64);
        Ok(())
    })?;
    run_property("order matches brute force", 32, arb_pair(8), |(x, y)| {
        let g = PermGroup::from_generators(&[x.clone(), y.clone()]).unwrap();
        prop_assert_eq!(g.order(), closure_order(&[x, y]) as u64);
        Ok(())
    })?;
    run_property("central quotient degree", 8, transitive_pair(5), |d| {
        let cover = d.regular_cover(DEFAULT_ELEMENT_CAP).unwrap();
        let z = cover.monodromy_group().center(DEFAULT_ELEMENT_CAP).unwrap();
        let q = central_quotient(&d).unwrap();
        prop_assert_eq!(q.degree() * z.len(), cover.degree());
        Ok(())
    })?;
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("monodromy order 576 for h0, h1, h2", c1_monodromy_order),
        (
            "regular cover of h0: degree 576, genus 145, type (6,4,12)",
            c2_cover_genus,
        ),
        ("centre of order 2 generated by (xy)^6", c3_centre),
        ("E0: degree 288, type (6,4,6), chi -120, genus 61", c4_e0),
        (
            "bundled witness: h0(g) = 1, h1(g) = (4,10)(6,12)",
            c5_witness,
        ),
        (
            "kernels pairwise distinct among H and among E",
            c6_orbit_distinct,
        ),
        (
            "<<x^3, y^2, [x,x^y]>> has index 18 and matches cover(F)",
            c7_presentation,
        ),
        ("h0 modulo {i, i+6} is isomorphic to F", c8_quotient),
        (
            "triangle maximality, non-normality of E0, odd parity",
            c9_triangles,
        ),
        (
            "passport (2^2 1^2, 3 2 1, 6): three S6 dessins, distinct kernels",
            c10_enumeration,
        ),
        ("S64 has order 64!", c11_degree_64),
        ("property suites", c12_properties),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_owned()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {:>2} {title} ({secs:.2}s)", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {msg}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
