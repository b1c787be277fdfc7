use flagpar::report::Emit;
use flagpar::scenario::{run_scenario, Scenario};

fn bundled(name: &str) -> Scenario {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    Scenario::from_file(&path).unwrap()
}

#[test]
fn bundled_scenarios_pass() {
    for name in ["example_2_4.scn", "example_2_7.scn"] {
        let sc = bundled(name);
        let rep = run_scenario(&sc);
        print!("{}", rep.render(Emit::Record));
        assert!(rep.passed(), "{name}");
        assert_eq!(Scenario::parse(&sc.to_string()).unwrap(), sc);
    }
}
