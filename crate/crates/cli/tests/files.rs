use dessin_cli::datasets::{bundled, NAMES};
use dessin_cli::dot::export_dot;
use dessin_cli::format::{parse_dessin, write_dessin};
use dessin_core::perm::Permutation;

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!(
        "{}/tests/golden/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
}

fn count(dot: &str, prefix: &str) -> usize {
    dot.lines()
        .filter(|l| l.trim_start().starts_with(prefix) && !l.contains("--"))
        .count()
}

#[test]
fn dot_matches_golden_files() {
    let trivial = parse_dessin(&golden("trivial.dessin")).unwrap();
    for (d, file, black, white, edges) in [
        (trivial, "trivial.dot", 1, 1, 1),
        (bundled("f").unwrap(), "f.dot", 4, 3, 6),
        (bundled("h0").unwrap(), "h0.dot", 6, 5, 12),
    ] {
        let dot = export_dot(&d);
        assert_eq!(dot, golden(file), "{file}");
        assert_eq!(count(&dot, "b"), black, "{file}");
        assert_eq!(count(&dot, "w"), white, "{file}");
        assert_eq!(dot.matches(" -- ").count(), edges, "{file}");
        assert_eq!(export_dot(&d), dot);
    }
}

#[test]
fn bundled_datasets_match_the_printed_permutations() {
    let y = "(1,4)(2,5)(7,10)(8,11)(3,6,9,12)";
    for (name, x) in [
        ("h0", "(1,2,3,7,8,9)(6,12)"),
        ("h1", "(1,2,3,7,8,9)(4,10)"),
        ("h2", "(1,2,3,7,8,9)(5,11)"),
    ] {
        let d = bundled(name).unwrap();
        assert_eq!(d.sigma_x(), &Permutation::parse(x, 12).unwrap());
        assert_eq!(d.sigma_y(), &Permutation::parse(y, 12).unwrap());
    }
    let f = bundled("f").unwrap();
    assert_eq!(f.sigma_x(), &Permutation::parse("(1,2,3)", 6).unwrap());
    assert_eq!(
        f.sigma_y(),
        &Permutation::parse("(1,4)(2,5)(3,6)", 6).unwrap()
    );
    for name in NAMES {
        assert_eq!(bundled(name).unwrap().name(), Some(name));
    }
    assert!(bundled("h3").is_none());
}

#[test]
fn written_files_read_back_equal() {
    let dir = tempfile::tempdir().unwrap();
    for name in NAMES {
        let d = bundled(name).unwrap();
        let path = dir.path().join(name);
        std::fs::write(&path, write_dessin(&d)).unwrap();
        let back = parse_dessin(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back, d, "{name}");
    }
}
