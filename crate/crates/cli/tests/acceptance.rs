//! Acceptance gate: one pass/fail line per criterion, pinned tolerances.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::time::Instant;

use nhqfi::check::{self, CheckOutcome};
use nhqfi::oracle::DEFAULT_SEED;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn record(&mut self, criterion: u32, label: &str, ok: bool, detail: String) {
        println!(
            "criterion {criterion:>2} {} — {label}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            self.failures.push(format!("criterion {criterion}: {label} ({detail})"));
        }
    }

    fn outcome(&mut self, criterion: u32, label: &str, o: &CheckOutcome) {
        self.record(
            criterion,
            label,
            o.passed,
            format!("residual {:.3e} vs threshold {:.3e}", o.residual, o.threshold),
        );
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();

    let o = check::check_hermitian_reduction(DEFAULT_SEED).unwrap();
    gate.outcome(1, "Hermitian reduction", &o);

    let a = check::check_oracle_pure_pseudo().unwrap();
    let b = check::check_oracle_pure_pt().unwrap();
    gate.record(
        2,
        "oracle equivalence, pure",
        a.passed && b.passed,
        format!("pseudo residual {:.3e}, pt residual {:.3e}", a.residual, b.residual),
    );

    let o = check::check_mixed_consistency().unwrap();
    gate.outcome(3, "oracle equivalence, mixed", &o);

    let o = check::check_pseudo_closed_forms().unwrap();
    gate.outcome(4, "pseudo-Hermitian closed forms + dominance", &o);

    let o = check::check_pt_evolution().unwrap();
    gate.outcome(5, "PT evolution operator", &o);

    let o = check::check_inner_product_factor().unwrap();
    gate.outcome(6, "inner-product factor", &o);

    let t = Instant::now();
    let o = check::check_optimal_state().unwrap();
    let within_budget = t.elapsed().as_secs() <= 30;
    gate.record(
        7,
        "optimal state (1, π)",
        o.passed && within_budget,
        format!("residual {:.3e}, runtime {:.1}s", o.residual, t.elapsed().as_secs_f64()),
    );

    let o = check::check_exceptional_point().unwrap();
    gate.outcome(8, "exceptional point", &o);

    let o = check::check_uncertainty_inequality(DEFAULT_SEED).unwrap();
    gate.outcome(9, "uncertainty inequality", &o);

    let t = Instant::now();
    let o = check::check_mc_cramer_rao(DEFAULT_SEED).unwrap();
    let within_budget = t.elapsed().as_secs() <= 10;
    gate.record(
        10,
        "Cramér–Rao Monte Carlo",
        o.passed && within_budget,
        format!("residual {:.3e}, runtime {:.1}s", o.residual, t.elapsed().as_secs_f64()),
    );

    let outcomes = check::check_printed_forms().unwrap();
    let all = outcomes.iter().all(|o| o.passed);
    gate.record(
        11,
        "printed-form discrepancy ledger",
        all,
        outcomes
            .iter()
            .map(|o| format!("{}: {:.3e}", o.id, o.residual))
            .collect::<Vec<_>>()
            .join("; "),
    );

    gate.record(12, "CLI determinism", cli_determinism(), "documented commands, two runs each, byte-compared".into());

    assert!(gate.failures.is_empty(), "failed criteria:\n{}", gate.failures.join("\n"));
}

fn run(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_nhqfi"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn cli_determinism() -> bool {
    let commands: Vec<Vec<&str>> = vec![
        vec!["pseudo-sweep", "--epsilon", "1.0", "--omega", "1.0", "--points", "21"],
        vec![
            "pt-sweep", "--r", "0.4", "--s", "1", "--omega", "pi/2", "--m", "1", "--phi-list",
            "pi,2pi/3,pi/3,0", "--theta-max", "5", "--points", "26",
        ],
        vec![
            "pt-sweep", "--r", "0.6", "--s", "0.4", "--phi-list", "pi", "--theta-max", "4",
            "--points", "21", "--format", "json",
        ],
        vec![
            "optimal-state", "--r", "0.4", "--s", "1", "--m-step", "0.1", "--phi-step", "0.1",
        ],
        vec!["ep-probe", "--r", "0.5", "--omega", "pi/2", "--format", "json"],
        vec!["check", "--suite", "all", "--seed", "12648430"],
    ];
    for args in &commands {
        let (code_a, out_a) = run(args);
        let (code_b, out_b) = run(args);
        if code_a != Some(0) || code_b != Some(0) || out_a != out_b {
            eprintln!("determinism failure for {args:?} (exit {code_a:?}/{code_b:?})");
            return false;
        }
    }
    true
}
