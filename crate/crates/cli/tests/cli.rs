use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn omegalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omegalab"))
        .args(args)
        .env_remove("OMEGALAB_THREADS")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = omegalab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn failure(args: &[&str]) -> (i32, String) {
    let out = omegalab(args);
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn run_halter() {
    let out = stdout(&["run", "--machine", &data("halter.mdl"), "--input", "101", "--budget", "1000"]);
    assert_eq!(out, "halted steps=1 ones=2 cells=1 output=101\n");
}

#[test]
fn beaver_two_states_with_database() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("out.bbdb");
    let out = stdout(&["beaver", "--states", "2", "--budget", "1000", "--db", db.to_str().unwrap()]);
    assert!(out.contains("\nΣ = 4\n") && out.contains("\nS = 6\n"), "{out}");
    assert!(out.contains("unresolved = 0") && out.contains("status = final"), "{out}");
    let text = fs::read_to_string(&db).unwrap();
    assert!(text.starts_with("# omegalab-bbdb states=2 budget=1000\n"));
    assert_eq!(text.lines().count(), 1 + 20736);
    // no leftovers from the append-then-rename protocol
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn beaver_resumes_from_partial_database() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = dir.path().join("fresh.bbdb");
    stdout(&["beaver", "--states", "1", "--budget", "100", "--db", fresh.to_str().unwrap()]);
    let full = fs::read_to_string(&fresh).unwrap();
    // keep the header and 10 records, then a torn line
    let mut partial: String = full.lines().take(11).map(|l| format!("{l}\n")).collect();
    partial.push_str("10 hal");
    let resumed = dir.path().join("resumed.bbdb");
    fs::write(dir.path().join("resumed.bbdb.partial"), partial).unwrap();
    let a = stdout(&["beaver", "--states", "1", "--budget", "100", "--db", resumed.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(&resumed).unwrap(), full);
    assert!(a.contains("Σ = 1") && a.contains("S = 1"));
}

#[test]
fn omega_is_repeatable() {
    let args = ["omega", "--max-len", "20", "--budget", "500"];
    let first = stdout(&args);
    assert!(first.starts_with("omega_lower = 81/2^10 (≈ 0.079101562500)\n"), "{first}");
    assert_eq!(stdout(&args), first);
}

#[test]
fn encode_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let packed = dir.path().join("bb2.code");
    let out = stdout(&["encode", "--machine", &data("bb2.mdl"), "--packed", packed.to_str().unwrap()]);
    let code = out.lines().next().unwrap().strip_prefix("code = ").unwrap().to_string();
    let from_bits = stdout(&["decode", "--bits", &code]);
    let from_file = stdout(&["decode", "--code", packed.to_str().unwrap()]);
    assert_eq!(from_bits, from_file);
    assert!(from_bits.contains("A _ -> 1 R B"));
    let utm = stdout(&["utm", "--bits", &code, "--budget", "100"]);
    let direct = stdout(&["run", "--machine", &data("bb2.mdl"), "--budget", "100"]);
    assert_eq!(utm, direct);
    assert_eq!(direct, "halted steps=6 ones=4 cells=4 output=1111\n");
}

#[test]
fn prefix_and_words() {
    let out = stdout(&["prefix", "--set", "0,1,01,10"]);
    assert!(out.contains("prefix_free = false\nwitness = 0 01\n"), "{out}");
    let out = stdout(&["prefix", "--set", "0,1,01,10", "--encode", "unary"]);
    assert!(out.starts_with("members = 010,011,00101,00110\nprefix_free = true\n"), "{out}");
    assert_eq!(stdout(&["thue-morse", "--k", "4"]), "0110100110010110\n");
    let out = stdout(&["cube-free", "--word", "0010101"]);
    assert!(out.contains("cube_free = false\nposition = 1\nperiod = 2\nfactor = 01\n"), "{out}");
    let rows = "10000000,01100000,00100000,00011000,00001000,00000110,00000010,10000001";
    assert_eq!(stdout(&["diagonal", "--rows", rows]), "diagonal = 00000000\n");
}

#[test]
fn chaitin_machine_halting_set() {
    let out = stdout(&["cm-run", "--machine", &data("terminator11.cm"), "--halting-set", "4", "--budget", "100"]);
    assert!(out.starts_with("halting = 0011,011,1011,11\ncount = 4\n"), "{out}");
    let out = stdout(&["cm-run", "--machine", &data("terminator11.cm"), "--program", "011", "--budget", "100"]);
    assert!(out.starts_with("halted"), "{out}");
}

#[test]
fn explorations_and_profiler() {
    let out = stdout(&["collatz", "--n", "27"]);
    assert_eq!(out, "n = 27\nsteps = 111\npeak = 9232\n");
    let out = stdout(&["collatz-range", "--lo", "1", "--hi", "1000", "--budget", "1000"]);
    assert!(out.contains("all_halted = true\nmax_steps = 178\nargmax = 871\n"), "{out}");
    assert_eq!(stdout(&["real-bounds", "--real", "sqrt2", "--n", "10"]), "lo = 13/10\nhi = 3/2\n");
    assert_eq!(stdout(&["scaling", "--k", "2", "--alpha", "1", "--c", "1e6", "--ell", "4"]), "n_max = 500.000000000000\n");
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let sizes = "16,32,64,128,256,512,1024";
    let out = stdout(&["profile", "--machine", &data("right_sweep.mdl"), "--sizes", sizes, "--fit", "t", "--csv", csv.to_str().unwrap()]);
    assert!(fs::read_to_string(&csv).unwrap().starts_with("N,t,s\n16,17,17\n"));
    let k: f64 = out.lines().find_map(|l| l.strip_prefix("# k = ")).unwrap().parse().unwrap();
    assert!((0.9..=1.1).contains(&k), "k = {k}");
}

#[test]
fn ait_commands() {
    let out = stdout(&["h-upper", "--target", "0", "--max-len", "20", "--budget", "200"]);
    assert!(out.contains("bound = 11\nwitness = 11001001001\n") && out.ends_with("verdict = inconclusive\n"), "{out}");
    let out = stdout(&["h-upper", "--target", "0000", "--max-len", "20", "--budget", "200"]);
    assert!(out.contains("bound = none-found"), "{out}");
    let out = stdout(&["pu", "--target", "", "--max-len", "12", "--budget", "100"]);
    assert!(out.starts_with("target = \np_u_lower = "), "{out}");
    let out = stdout(&["omega-mc", "--samples", "4096", "--budget", "100", "--seed", "3"]);
    assert!(out.ends_with("seed = 3\n"), "{out}");
    assert_eq!(stdout(&["omega-mc", "--samples", "4096", "--budget", "100", "--seed", "3"]), out);
    let out = stdout(&["sigma-n", "--max-len", "12", "--budget", "100"]);
    assert!(out.starts_with("sigma = "), "{out}");
}

#[test]
fn exit_codes() {
    let (code, err) = failure(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"), "{err}");
    assert_eq!(failure(&[]).0, 1);
    assert_eq!(failure(&["run", "--machine", &data("bad.mdl")]).0, 1);
    assert_eq!(failure(&["run", "--machine", "/nonexistent/m.mdl"]).0, 1);
    assert_eq!(failure(&["run", "--machine", &data("halter.mdl"), "--input", "012"]).0, 1);
    let (code, err) = failure(&["omega", "--max-len", "99"]);
    assert_eq!(code, 1);
    assert!(err.contains("guard"), "{err}");
    assert_eq!(failure(&["beaver", "--states", "5"]).0, 1);
    assert_eq!(failure(&["thue-morse", "--k", "25"]).0, 1);
    assert_eq!(failure(&["collatz", "--n", "0"]).0, 1);
    assert_eq!(failure(&["scaling", "--k", "-1", "--alpha", "1", "--c", "1", "--ell", "2"]).0, 1);
    assert_eq!(failure(&["run", "-m", "x"]).0, 1);
    assert!(omegalab(&["--help"]).status.success());
}

#[test]
fn thread_setting_is_validated_and_harmless() {
    let args = ["collatz-range", "--lo", "1", "--hi", "300000", "--budget", "1000"];
    let base = stdout(&args);
    let out = Command::new(env!("CARGO_BIN_EXE_omegalab"))
        .args(args)
        .env("OMEGALAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), base);
    let bad = Command::new(env!("CARGO_BIN_EXE_omegalab"))
        .args(args)
        .env("OMEGALAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
