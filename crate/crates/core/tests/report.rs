use ccenum::aniso::AnisoProblem;
use ccenum::hexfloat::{from_hex, to_hex};
use ccenum::report::{verify_report, Payload, ReportFile};
use ccenum::search::{enumerate_aniso, EnumerationReport, SearchSettings};
use ccenum::{Interval, IntervalBox};
use proptest::prelude::*;

fn k3_report() -> ReportFile {
    let p = AnisoProblem::equal_masses(3, 0.75, 2.25).unwrap();
    let r = enumerate_aniso(&p, &SearchSettings::default()).unwrap();
    ReportFile::new(serde_json::json!({"k": 3}), 0.25, Payload::Enumeration(r))
}

fn enumeration(f: &mut ReportFile) -> &mut EnumerationReport {
    match &mut f.payload {
        Payload::Enumeration(r) => r,
        _ => unreachable!(),
    }
}

proptest! {
    #[test]
    fn hex_round_trip(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(!x.is_nan());
        prop_assert_eq!(from_hex(&to_hex(x)).unwrap().to_bits(), bits);
    }
}

#[test]
fn report_round_trips_exactly() {
    let f = k3_report();
    let text = f.to_json().unwrap();
    let back = ReportFile::from_json(&text).unwrap();
    assert_eq!(back, f);
    assert_eq!(back.to_json().unwrap(), text);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    f.save(&path).unwrap();
    assert_eq!(ReportFile::load(&path).unwrap(), f);
}

#[test]
fn other_schema_versions_are_refused() {
    let text = k3_report().to_json().unwrap();
    let bumped = text.replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
    assert!(ReportFile::from_json(&bumped).is_err());
}

#[test]
fn untouched_report_verifies() {
    let s = verify_report(&k3_report()).unwrap();
    assert_eq!(s.checked, 24);
    assert!(s.ok());
}

/// Moves one endpoint of coordinate `v` by a relative `step`.
fn nudge(b: &IntervalBox, v: usize, step: f64, upper: bool) -> IntervalBox {
    let mut c: Vec<Interval> = b.coords().to_vec();
    let (lo, hi) = (c[v].lo(), c[v].hi());
    let w = hi - lo;
    c[v] = if upper {
        Interval::new(lo, hi + step * w).unwrap_or(c[v])
    } else {
        Interval::new(lo + step * w, hi).unwrap_or(c[v])
    };
    IntervalBox::new(c)
}

#[test]
fn tampering_is_detected() {
    let base = k3_report();
    let cases: Vec<Box<dyn Fn(&mut EnumerationReport)>> = vec![
        // Region shrunk so the image pokes out of it.
        Box::new(|r| {
            let c = &mut r.certificates[3];
            c.region = nudge(&c.region, 0, 0.45, false);
            c.region = nudge(&c.region, 0, -0.45, true);
        }),
        // Image claimed tighter than it is.
        Box::new(|r| {
            let c = &mut r.certificates[5];
            c.krawczyk_image = nudge(&c.krawczyk_image, 2, 0.49, false);
        }),
        // Midpoint moved off the zero.
        Box::new(|r| r.certificates[7].midpoint[1] += 1e-3),
        // Certificate moved to another problem.
        Box::new(|r| r.certificates[0].problem_id.push('!')),
        // Certificate shifted as a whole onto a box without a zero.
        Box::new(|r| {
            let c = &mut r.certificates[9];
            let shift = |b: &IntervalBox| {
                IntervalBox::new(
                    b.iter()
                        .map(|v| Interval::new(v.lo() + 0.05, v.hi() + 0.05).unwrap())
                        .collect(),
                )
            };
            c.region = shift(&c.region);
            c.krawczyk_image = shift(&c.krawczyk_image);
            c.midpoint.iter_mut().for_each(|x| *x += 0.05);
        }),
    ];
    for (i, edit) in cases.iter().enumerate() {
        let mut f = base.clone();
        edit(enumeration(&mut f));
        // Tampered numbers must survive the trip through a file.
        let f = ReportFile::from_json(&f.to_json().unwrap()).unwrap();
        let s = verify_report(&f).unwrap();
        assert_eq!(s.failed.len(), 1, "case {i} not detected");
    }
}
