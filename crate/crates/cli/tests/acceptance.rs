//! Runs every acceptance criterion at its stated range and prints one line
//! per criterion. Exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use qshelf_core::shelves::Strength;
use qshelf_core::verify::{run, Report, Suite, SuiteConfig};
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn config(suite: Suite, ks: impl IntoIterator<Item = u32>, order: i64, n_max: u32) -> SuiteConfig {
    let mut cfg = SuiteConfig::defaults(suite, order, n_max);
    cfg.ks = ks.into_iter().collect();
    cfg
}

fn summarize(reports: &[Report]) -> Outcome {
    let cells: usize = reports.iter().map(|r| r.cells).sum();
    let comparisons: usize = reports.iter().map(|r| r.comparisons).sum();
    match reports.iter().find_map(Report::first_failure) {
        None => Outcome {
            pass: true,
            detail: format!("{cells} cells, {comparisons} comparisons"),
        },
        Some(cert) => Outcome {
            pass: false,
            detail: serde_json::to_string(cert).expect("certificate serializes"),
        },
    }
}

fn suite(s: Suite, cfg: SuiteConfig) -> Outcome {
    summarize(&[run(s, &cfg)])
}

fn andrews_bressoud() -> Outcome {
    suite(
        Suite::AndrewsBressoud,
        config(Suite::AndrewsBressoud, 2..=6, 30, 30),
    )
}

fn shelves() -> Outcome {
    let mut cfg = config(Suite::Shelves, 2..=4, 25, 25);
    cfg.start_max = 2;
    suite(Suite::Shelves, cfg)
}

fn ghosts() -> Outcome {
    let mut cfg = config(Suite::Ghosts, 2..=4, 25, 25);
    cfg.start_max = 2;
    suite(Suite::Ghosts, cfg)
}

fn recursion() -> Outcome {
    let mut cfg = config(Suite::Recursion, 2..=5, 60, 30);
    cfg.j_max = 8;
    suite(Suite::Recursion, cfg)
}

fn edge_match() -> Outcome {
    let mut cfg = config(Suite::EdgeMatch, 2..=6, 60, 30);
    cfg.j_max = 8;
    suite(Suite::EdgeMatch, cfg)
}

fn empirical_hypothesis() -> Outcome {
    let reports: Vec<Report> = [Strength::Standard, Strength::Strong]
        .into_iter()
        .map(|strength| {
            let mut cfg = config(Suite::Eh, 2..=5, 0, 0);
            cfg.j_max = 12;
            cfg.strength = strength;
            run(Suite::Eh, &cfg)
        })
        .collect();
    summarize(&reports)
}

fn matrix() -> Outcome {
    let mut cfg = config(Suite::Matrix, 3..=5, 40, 30);
    cfg.j_max = 6;
    cfg.start_max = 2;
    suite(Suite::Matrix, cfg)
}

fn h_limit() -> Outcome {
    let mut cfg = config(Suite::HLimit, 2..=5, 40, 30);
    cfg.start_max = 3;
    suite(Suite::HLimit, cfg)
}

fn hcomb() -> Outcome {
    let mut cfg = config(Suite::Hcomb, 3..=4, 22, 22);
    cfg.start_max = 2;
    cfg.j_max = 4;
    suite(Suite::Hcomb, cfg)
}

fn jacobi() -> Outcome {
    suite(Suite::Jacobi, config(Suite::Jacobi, 2..=6, 100, 30))
}

fn dictionary() -> Outcome {
    let mut cfg = config(Suite::Dictionary, 2..=5, 50, 30);
    cfg.j_max = 5;
    suite(Suite::Dictionary, cfg)
}

/// Runs the binary with a fault injected into every suite and checks that
/// each run exits 1 with a certificate at the injected exponent.
fn negative_control() -> Outcome {
    let mut problems = Vec::new();
    let mut runs = 0;
    for s in Suite::ALL {
        let exponents: &[i64] = if s == Suite::Eh { &[0] } else { &[2, 5] };
        for &e in exponents {
            runs += 1;
            let out = Command::new(env!("CARGO_BIN_EXE_qshelf"))
                .args(["verify", s.name(), "--order", "24", "--n-max", "12"])
                .args(["--format", "json", "--inject-fault", &e.to_string()])
                .output()
                .expect("qshelf runs");
            let code = out.status.code();
            let stderr = String::from_utf8_lossy(&out.stderr);
            let cert: Option<Value> = stderr.lines().last().and_then(|l| serde_json::from_str(l).ok());
            let exponent = cert.as_ref().and_then(|c| c["exponent"].as_i64());
            if code != Some(1) || exponent != Some(e) {
                problems.push(format!(
                    "{} at q^{e}: exit {code:?}, certificate exponent {exponent:?}",
                    s.name()
                ));
            }
        }
    }
    Outcome {
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{runs} injected faults caught")
        } else {
            problems.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Andrews-Bressoud identities, k 2..6, n <= 30", andrews_bressoud),
        ("shelf-J officials vs counts, k 2..4, J <= 2, n <= 25", shelves),
        ("ghosts vs counts and ~B_1 = B_2, k 2..4, J <= 2, n <= 25", ghosts),
        ("recursion = closed forms, k <= 5, j <= 8, N = 60", recursion),
        ("edge matching, k <= 6, 1 <= j <= 8, N = 60", edge_match),
        (
            "empirical hypothesis standard and strong, k <= 5, j <= 12, N = 2(j+2)",
            empirical_hypothesis,
        ),
        ("transfer matrices and h-steps, k 3..5, j <= 6, N = 40", matrix),
        ("h-limits = closed forms, k <= 5, J <= 3, N = 40", h_limit),
        ("h-entries vs counts, k 3..4, J <= 2, j <= J+4, n <= 22", hcomb),
        ("product side = theta quotient, k <= 6, N = 100", jacobi),
        ("x-q dictionary, k <= 5, j <= 5, N = 50", dictionary),
        ("negative control via injected faults", negative_control),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "[{status}] AC-{}: {name} ({}; {:.1}s)",
            n + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        if !outcome.pass {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
