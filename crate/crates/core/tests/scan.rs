use isoslope::arith::FieldElem;
use isoslope::hyper::{u_poly, HyperEngine, HypergeometricDatum, PointSpec};
use isoslope::scan::{
    quintic_datum, read_checkpoint, scan_family, scan_points, verify_triple_gap_uniqueness, FamilyKind, FamilySpec,
    ScanOptions,
};
use isoslope::{Error, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[test]
fn triple_gap_uniqueness_small_primes() {
    let engine = HyperEngine::default();
    let check = verify_triple_gap_uniqueness(&engine, 7, 1).unwrap();
    assert!(check.holds);
    assert_eq!(check.violations, vec![3]);
    assert_eq!(check.a1_at_predicted, "2");
    let check = verify_triple_gap_uniqueness(&engine, 5, 1).unwrap();
    assert!(check.holds);
    assert_eq!(check.violations, vec![2]);
    assert_eq!(
        verify_triple_gap_uniqueness(&engine, 7, 3),
        Err(Error::InvalidC3 { p: 7, c3: 3 })
    );
    assert_eq!(verify_triple_gap_uniqueness(&engine, 3, 1), Err(Error::PrimeTooSmall(3)));
}

#[test]
fn quintic_scan_at_31() {
    let engine = HyperEngine::default();
    let datum = quintic_datum(31).unwrap();
    let reports = scan_points(&engine, &datum, 1).unwrap();
    assert_eq!(reports.len(), 29);
    let split = [q(3, 1), q(3, 2), q(3, 2), q(0, 1)];
    let known = [q(5, 2), q(5, 2), q(1, 2), q(1, 2)];
    for r in &reports {
        let x = r.point.x().0;
        let s = r.slopes.values();
        match x {
            4 | 17 => assert_eq!(s, &known),
            5 | 12 | 16 | 27 => assert_eq!(s, &split),
            _ => assert_eq!(s, &[q(3, 1), q(2, 1), q(1, 1), q(0, 1)], "x = {x}"),
        }
        assert!(r.invariant_violations(4).is_empty());
    }
}

#[test]
fn zero_slope_count_matches_root_count() {
    let engine = HyperEngine::default();
    for (p, c) in [(7u64, vec![1u64, 5, 1]), (11, vec![2, 4, 7]), (13, vec![1, 11, 4]), (11, vec![3, 8])] {
        let datum = HypergeometricDatum::new(p, c).unwrap();
        for m_max in 1..=2u32 {
            let reports = scan_points(&engine, &datum, m_max).unwrap();
            let zero = reports.iter().filter(|r| *r.slopes.values().last().unwrap() > q(0, 1)).count();
            // closed points of degree <= m_max that are roots of u_c
            let u = u_poly(&datum);
            let mut roots = 0;
            for m in 1..=m_max {
                let field = engine.field(p, m).unwrap();
                for pt in PointSpec::enumerate(&field).unwrap() {
                    if field.eval_fp_poly(u.poly(), pt.x()) == field.zero() {
                        roots += 1;
                    }
                }
            }
            assert_eq!(zero, roots, "p={p} m_max={m_max}");
            // every violation has a non-generic endpoint
            for r in reports.iter().filter(|r| r.violates_small_gaps) {
                assert!(r.u_c_zero || r.u_cdual_zero);
            }
        }
    }
}

#[test]
fn rank_one_family_has_no_violations() {
    let engine = HyperEngine::default();
    let spec = FamilySpec::new(FamilyKind::Explicit(vec![2]), (5, 13), 2).unwrap();
    let report = scan_family(&engine, &spec, &ScanOptions::default()).unwrap();
    assert!(report.violations.is_empty());
    assert_eq!(report.summary, "no gap-violating points");
    assert!(report.datums.iter().all(|d| d.points.iter().all(|r| r.slopes == ["0"])));
}

#[test]
fn triple_gap_family_summary() {
    let engine = HyperEngine::default();
    let spec = FamilySpec::new(FamilyKind::TripleGap, (5, 7), 1).unwrap();
    let report = scan_family(&engine, &spec, &ScanOptions::default()).unwrap();
    assert_eq!(report.summary, "all triple-gap uniqueness checks passed (6 datums)");
    // the predicted a_1 - a_2 violations, plus their mirror images under
    // duality where a_2 - a_3 > 1 instead
    assert_eq!(report.violations.len(), 12);
    for v in &report.violations {
        let s: Vec<Rational> = v.slopes.iter().map(|t| t.parse().unwrap()).collect();
        let top_gap = &s[0] - &s[1] > q(1, 1);
        assert_eq!(v.predicted, top_gap, "{v:?}");
        assert!(top_gap || &s[1] - &s[2] > q(1, 1));
    }
}

#[test]
fn checkpoint_resume_reproduces_report() {
    let engine = HyperEngine::default();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.ndjson");
    let spec = FamilySpec::new(FamilyKind::Explicit(vec![1, 5, 1]), (7, 11), 2).unwrap();
    let options = ScanOptions {
        workers: Some(2),
        checkpoint: Some(path.clone()),
    };
    let first = scan_family(&engine, &spec, &options).unwrap();
    let saved = read_checkpoint(&path).unwrap();
    let total: usize = first.datums.iter().map(|d| d.points.len()).sum();
    assert_eq!(saved.len(), total);

    // drop the second half and leave a torn final line
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let keep = lines.len() / 2;
    let mut partial = lines[..keep].join("\n");
    partial.push('\n');
    partial.push_str(&lines[keep][..lines[keep].len() / 2]);
    std::fs::write(&path, partial).unwrap();
    assert_eq!(read_checkpoint(&path).unwrap().len(), keep);

    let fresh = HyperEngine::default();
    let resumed = scan_family(&fresh, &spec, &options).unwrap();
    assert_eq!(resumed.to_json(), first.to_json());
    assert_eq!(read_checkpoint(&path).unwrap().len(), total);
}

#[test]
fn corrupt_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ndjson");
    std::fs::write(&path, "not json\n{}\n").unwrap();
    assert!(matches!(read_checkpoint(&path), Err(Error::Checkpoint(_))));
    assert!(read_checkpoint(&dir.path().join("missing")).unwrap().is_empty());
}

#[test]
fn higher_degree_points_of_triple_gap_datum() {
    let engine = HyperEngine::default();
    let datum = HypergeometricDatum::new(7, vec![1, 5, 1]).unwrap();
    let field = engine.field(7, 2).unwrap();
    let pt = PointSpec::new(field.clone(), FieldElem(field.generator().0)).unwrap();
    let reports = scan_points(&engine, &datum, 2).unwrap();
    assert_eq!(reports.len(), 5 + 21);
    assert!(reports.iter().any(|r| r.point == pt));
}
