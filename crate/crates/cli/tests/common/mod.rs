//! Fixed invocations with stored outputs.

#![allow(dead_code)]

use std::path::PathBuf;

use intdiff_cli::run_args;

pub struct Invocation {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub stdin: &'static str,
}

const fn inv(name: &'static str, args: &'static [&'static str]) -> Invocation {
    Invocation { name, args, stdin: "" }
}

pub const GOLDEN: &[Invocation] = &[
    inv("01_normalize", &["normalize", "d_1*int_1"]),
    Invocation {
        name: "02_normalize_batch",
        args: &["--arity", "2", "normalize"],
        stdin: "# relations\nd_1*x_1 - H_1\nint_2*d_2\n\n(H_1 - 1)^2*d_2*int_2\ne[0,2]_1*e[2,1]_1*x_2\n",
    },
    inv("03_mul_json", &["--json", "mul", "int^2*H", "d*e[1,3]"]),
    inv("04_commutator", &["commutator", "H", "x^2 - 1/2*d"]),
    inv("05_act_json", &["--json", "--deg", "3", "act", "x*d - int"]),
    inv("06_grade", &["grade", "int^2*H + d*H + e[2,0] + 3"]),
    inv("07_ideal_left_json", &["--json", "ideal-test", "H*d^2", "--left", "d"]),
    inv(
        "08_ideal_prime",
        &["--arity", "2", "ideal-test", "e[0,0]_1*H_2 + d_2*e[1,1]_1", "--prime", "1"],
    ),
    inv("09_involve", &["--arity", "2", "involve", "int_1*d_2^2 + e[0,3]_2"]),
    inv("10_dims_ms", &["dims", "--module", "Ms", "--s", "3", "--lambda", "0", "--window", "-5..5"]),
    inv(
        "11_module_build_json",
        &["--json", "module-build", "--module", "Ms", "--s", "2", "--lambda", "1/2", "--window", "-1..1"],
    ),
    inv("12_support_p2", &["--arity", "2", "support", "--module", "P", "--window", "0..2"]),
    inv(
        "13_decompose_json",
        &[
            "--json", "decompose", "--module", "simple", "--orbit", "Z,Z", "--dset", "1", "--dset", "2",
            "--dset", "1", "--scramble", "--seed", "7", "--window", "-1..2",
        ],
    ),
    inv(
        "14_block_split",
        &[
            "block-split", "--module", "simple", "--orbit", "Z,Z,1/3", "--dset", "1", "--dset", "1,2",
            "--scramble", "--window", "-1..1",
        ],
    ),
    inv("15_rep_type_finite", &["rep-type", "--orbit", "Z,Z", "--dset", "1,2"]),
    inv("16_parse_error_json", &["--json", "normalize", "H_1 * (d_1"]),
    inv("17_rep_type_ideal", &["rep-type", "--ideal", "H_1^2 - H_2^2", "--order", "3"]),
    inv(
        "18_kronecker_json",
        &[
            "--json", "kronecker", "--label", "S2(1)", "--label", "S4(2,0)", "--label", "S5(1)",
            "--scramble", "--seed", "3",
        ],
    ),
    inv(
        "19_kronecker_qi",
        &["--field", "qi", "kronecker", "--a", "[[1,0],[0,1]]", "--b", "[[0,-1],[1,0]]"],
    ),
    inv("20_band_periodic_error", &["band", "--word", "1212"]),
    inv("21_a_members_json", &["--field", "qi", "--json", "string", "--a-members", "4"]),
    inv("22_band", &["band", "--word", "12", "--n", "2", "--lambda", "2"]),
    inv(
        "23_fiber_v",
        &[
            "fiber", "--module", "V", "--orbit", "Z,Z", "--dset", "none", "--ideal", "H_1^2; H_2^2; H_1*H_2",
            "--order", "3", "--window", "0..1",
        ],
    ),
    inv(
        "24_induce",
        &["induce", "--orbit", "Z,1/2", "--dset", "1", "--fiber", "[[[\"1/2\",0],[1,\"1/2\"]]]", "--window", "0..2"],
    ),
    inv("25_report", &["report", "--samples", "8", "--seed", "11"]),
];

/// Stdout, stderr and exit code in one stable text.
pub fn transcript(i: &Invocation) -> String {
    let out = run_args(i.args, i.stdin);
    format!(
        "$ intdiff {}\n{}--- stderr\n{}--- exit {}\n",
        i.args.join(" "),
        out.stdout,
        out.stderr,
        out.code
    )
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("{}.txt", name))
}

/// The same transcript from a fresh process of the built binary.
pub fn process_transcript(i: &Invocation) -> String {
    use std::io::Write;
    use std::process::{Command, Stdio};
    let mut child = Command::new(env!("CARGO_BIN_EXE_intdiff"))
        .args(i.args)
        .env_remove("INTDIFF_FIELD")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .expect("piped stdin")
        .write_all(i.stdin.as_bytes())
        .expect("stdin written");
    let out = child.wait_with_output().expect("binary exits");
    format!(
        "$ intdiff {}\n{}--- stderr\n{}--- exit {}\n",
        i.args.join(" "),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
        out.status.code().unwrap_or(-1)
    )
}
