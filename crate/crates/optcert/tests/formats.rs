use optcert::{featured_alphas, parse_alphas, scenario_tag, sci, write_table, Selection, TABLE_HEADER};
use optcert_core::experiments::{run_scenario, Case, Desired, Example, ScenarioSpec};

#[test]
fn scientific_format() {
    assert_eq!(sci(1.530600543072e-02), "1.53060054307e-02");
    assert_eq!(sci(4.992144829702e-01), "4.99214482970e-01");
    assert_eq!(sci(1e3), "1.00000000000e+03");
    assert_eq!(sci(-2.5e-120), "-2.50000000000e-120");
    assert_eq!(sci(0.0), "0.00000000000e+00");
    assert_eq!(sci(f64::INFINITY), "inf");
    // round trip keeps 12 significant digits
    let v = 0.123456789012345;
    assert!((sci(v).parse::<f64>().unwrap() - v).abs() < 1e-12);
}

#[test]
fn alpha_lists() {
    assert_eq!(parse_alphas("1e-6, 1e-3,1").unwrap(), vec![1e-6, 1e-3, 1.0]);
    assert!(parse_alphas("1e-3,x").is_err());
}

#[test]
fn table_header_and_rows() {
    let s = ScenarioSpec::new(Example::Cubic, Case::Unconstrained, Some(Desired::A2), vec![1.0, 1e-1], 4).unwrap();
    let r = run_scenario(&s).unwrap();
    let mut buf = Vec::new();
    write_table(&mut buf, &r).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], TABLE_HEADER.join(","));
    assert_eq!(rows.len(), 3);
    for (row, want) in rows[1..].iter().zip(&r.rows) {
        let f: Vec<&str> = row.split(',').collect();
        let d = want.outcome.as_ref().unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(f[1].parse::<f64>().unwrap(), sci(d.pnorm).parse::<f64>().unwrap());
        assert_eq!(f[4], d.verdict.as_str());
        assert_eq!(f[5], d.iterations.to_string());
    }
}

#[test]
fn selections_expand_to_valid_scenarios() {
    let sel = Selection {
        examples: vec![Example::Cubic, Example::Quintic],
        cases: vec![Case::Neitzel, Case::StateConstrained],
        desired: vec![Desired::A1, Desired::A2],
    };
    let specs = sel.expand(&[1.0], 4).unwrap();
    let tags: Vec<String> = specs.iter().map(scenario_tag).collect();
    assert_eq!(tags, ["cubic_neitzel", "cubic_state_a1", "cubic_state_a2", "quintic_state_a1", "quintic_state_a2"]);
    assert_eq!(featured_alphas(&specs[0]), vec![1e-3]);
    assert_eq!(featured_alphas(&specs[3]), vec![1e-5, 1.0]);
    let only_quintic_neitzel = Selection { examples: vec![Example::Quintic], cases: vec![Case::Neitzel], desired: vec![] };
    assert!(only_quintic_neitzel.expand(&[1.0], 4).is_err());
    let missing = Selection { examples: vec![Example::Cubic], cases: vec![Case::Unconstrained], desired: vec![] };
    assert!(missing.expand(&[1.0], 4).is_err());
}
