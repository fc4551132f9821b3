// One line per acceptance criterion; exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use eptrap::selftest;

fn line(id: usize, what: &str, passed: bool, detail: &str, took: Duration, budget: Option<f64>) -> bool {
    let (in_time, timing) = match budget {
        Some(b) => (took.as_secs_f64() < b, format!(" [{:.2} s, limit {b} s]", took.as_secs_f64())),
        None => (true, format!(" [{:.2} s]", took.as_secs_f64())),
    };
    let ok = passed && in_time;
    println!("{} {id:>2} {what}: {detail}{timing}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn run(id: usize, what: &str, budget: Option<f64>, f: impl FnOnce() -> (bool, String)) -> bool {
    let t = Instant::now();
    let (passed, detail) = f();
    line(id, what, passed, &detail, t.elapsed(), budget)
}

fn selftest_binary() -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eptrap")).arg("selftest").output();
    match out {
        Ok(o) => {
            let text = String::from_utf8_lossy(&o.stdout);
            let checks = text.lines().filter(|l| l.starts_with("pass ") || l.starts_with("FAIL ")).count();
            let failed = text.lines().filter(|l| l.starts_with("FAIL ")).count();
            (o.status.success() && failed == 0, format!("{checks} checks, {failed} failed, exit {:?}", o.status.code()))
        }
        Err(e) => (false, format!("cannot launch: {e}")),
    }
}

fn main() -> ExitCode {
    let results = [
        run(1, "2x2 closed form", Some(1.0), || selftest::two_by_two_oracle(1000)),
        run(2, "EP location", None, || selftest::ep_two_level(50)),
        run(3, "encircling", None, selftest::encircling),
        run(4, "trace and width sum rules", None, || selftest::trace_sum_rule(10_000)),
        run(5, "resonance trapping", Some(10.0), selftest::trapping),
        run(6, "phase rigidity", None, selftest::phase_rigidity),
        run(7, "PV box shift", None, || selftest::pv_box(100)),
        run(8, "S-matrix and time delay", None, selftest::s_matrix_time_delay),
        run(9, "decay rate", None, selftest::decay),
        run(10, "PT threshold", None, selftest::pt_threshold),
        run(11, "resolvent identity", None, || selftest::resolvent_identity(100)),
        run(12, "full selftest", Some(120.0), selftest_binary),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
