//! Every example must keep running.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(single_switch);
example!(weak_field_synthesis);
example!(candidate_functions);
example!(oracle_certification);
example!(rwa_sweep);
example!(spinor_check);
example!(rival_strategies);

#[test]
fn examples_run() {
    single_switch::run(1.0, 2.0).unwrap();
    weak_field_synthesis::run(0.13).unwrap();
    candidate_functions::run(0.13, 20).unwrap();
    oracle_certification::run(&[0.6, 1.0]).unwrap();
    rwa_sweep::run(1.0, &[0.05, 1.0, 10.0]).unwrap();
    spinor_check::run(1.0, 0.25).unwrap();
    rival_strategies::run(&[1.0]).unwrap();
}
