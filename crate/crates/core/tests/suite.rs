use flagpar::report::Emit;
use flagpar::suite::run_suite;

#[test]
fn full_suite_passes() {
    let rep = run_suite("all").unwrap();
    print!("{}", rep.render(Emit::Text));
    assert_eq!(rep.records.len(), 10);
    assert!(rep.passed());
}
