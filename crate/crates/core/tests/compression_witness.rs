//! A "compressible" verdict needs a program shorter than its output. Search
//! cannot reach one at desk scale, but a checked witness can: the five-state
//! busy-beaver champion prints 4098 ones from a 142-bit code.

use omegalab::ait::{self, Verdict};
use omegalab::mdl;
use omegalab::tm::{self, RunLimits};
use omegalab::universal;

const BB5: &str = "\
machine bb5
states: A B C D E
start: A
A _ -> 1 R B
A 0 -> 1 R B
A 1 -> 1 L C
B _ -> 1 R C
B 0 -> 1 R C
B 1 -> 1 R B
C _ -> 1 R D
C 0 -> 1 R D
C 1 -> _ L E
D _ -> 1 L A
D 0 -> 1 L A
D 1 -> 1 L D
E _ -> 1 R HALT
E 0 -> 1 R HALT
E 1 -> _ L A
";

/// Published values for this machine.
const BB5_STEPS: u64 = 47_176_870;
const BB5_ONES: u64 = 4098;

#[test]
fn champion_output_is_compressible() {
    let m = mdl::parse_machine(BB5).unwrap();
    // the run is long and never repeats a configuration, so skip the history
    let limits = RunLimits { budget: 50_000_000, history_cap: 0 };
    let halt = tm::run_with_limits(&m, &Default::default(), limits).unwrap().halted().cloned().expect("halts");
    assert_eq!((halt.steps, halt.ones), (BB5_STEPS, BB5_ONES));
    let code = universal::encode_machine(&m);
    // erasing writes blank, a one-bit tag
    assert_eq!(code.len(), 142);
    let bound = ait::verify_witness(&halt.output, code.bits(), limits).unwrap();
    assert_eq!(bound.bound, Some(142));
    let report = ait::deficiency_of(bound);
    assert_eq!(report.verdict, Verdict::CompressibleBy(halt.output.len() - 142));
    assert!(halt.output.len() > 12_000);
}

#[test]
fn wrong_witnesses_are_rejected() {
    let halter = universal::encode_machine(&mdl::parse_machine("machine h\nstates: A\nstart: A\nA _ -> 1 R HALT\nA 0 -> 1 R HALT\nA 1 -> 1 R HALT\n").unwrap());
    let limits = RunLimits::new(100);
    assert!(matches!(
        ait::verify_witness(&"0".parse().unwrap(), halter.bits(), limits),
        Err(ait::WitnessError::WrongOutput { .. })
    ));
    assert!(matches!(
        ait::verify_witness(&"1".parse().unwrap(), &"0".parse().unwrap(), limits),
        Err(ait::WitnessError::NotAProgram(_))
    ));
    let ok = ait::verify_witness(&"1".parse().unwrap(), halter.bits(), limits).unwrap();
    assert_eq!(ait::deficiency_of(ok).verdict, Verdict::Inconclusive);
}
