//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so that every line is printed even when
//! everything passes. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bcm_core::demo;
use bcm_core::descent::{self, Picker, Rule, Schedule, StopCriteria, StopReason, Trace};
use bcm_core::geometry::{int, rat};
use bcm_core::suites::{run_suite, Suite};
use bcm_core::{Instance, QVector, RiStrategy};

const SEED: u64 = 1;
const DISTANCE_TOLERANCE: f64 = 1e-4;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn q(c: &[(i64, i64)]) -> QVector {
    c.iter().map(|&(n, d)| rat(n, d)).collect()
}

fn run(inst: &Instance) -> Trace {
    descent::run(
        &inst.polyhedron,
        &inst.objective,
        &inst.start,
        &inst.directions,
        &inst.schedule,
        inst.rule,
        inst.stop,
    )
    .expect("worked example runs")
}

fn classifier_table() -> Verdict {
    // (point, local, interior, pre-interior)
    let table = [
        (q(&[(3, 1), (1, 2)]), true, true, true),
        (q(&[(3, 1), (0, 1)]), true, false, true),
        (q(&[(3, 1), (1, 1)]), true, false, true),
        (q(&[(0, 1), (4, 1)]), true, true, true),
        (q(&[(1, 1), (3, 1)]), true, false, false),
        (q(&[(2, 1), (1, 2)]), false, false, false),
    ];
    let (x, c, dirs) = (demo::trapezoid(), demo::objective(), demo::directions());
    let sched = Schedule::cyclic(2);
    let mut wrong = Vec::new();
    for (point, local, interior, pre) in &table {
        let got = descent::classify(&x, &c, point, &dirs, &sched, RiStrategy::VertexBarycenter)
            .expect("probe lies in X");
        if (got.is_local, got.is_interior_local, got.is_pre_interior_local) != (*local, *interior, *pre)
        {
            wrong.push(point.to_string());
        }
    }
    verdict(
        wrong.is_empty(),
        if wrong.is_empty() {
            format!("{} probes exact", table.len())
        } else {
            format!("wrong at {}", wrong.join(", "))
        },
    )
}

fn escape() -> Verdict {
    let start = q(&[(1, 1), (3, 1)]);
    let trace = run(&demo::worked_example(start.clone()));
    let rounds = trace.round_points(2);
    let decreased = rounds
        .iter()
        .take(3)
        .any(|p| demo::objective().eval(p) < int(-1));
    let certified = trace.stop_reason == StopReason::Stalled
        && trace.certified
        && trace.classification.is_interior_local
        && trace.final_objective == int(-3);

    // The plain rule with a picker that keeps the current point whenever it
    // is optimal never leaves f = -1.
    let mut plain = demo::worked_example(start);
    plain.rule = Rule::Plain {
        picker: Picker::Sticky,
    };
    plain.stop = StopCriteria {
        max_rounds: 20,
        stall_rounds: usize::MAX,
    };
    let stuck = run(&plain);
    let constant = stuck.rounds == 20 && stuck.records.iter().all(|r| r.objective_after == int(-1));
    verdict(
        decreased && certified && constant,
        format!(
            "ri: decrease within 3 rounds {decreased}, certified at {} after {} rounds {certified}; \
             plain sticky: f = -1 for {} rounds {constant}",
            trace.final_objective, trace.rounds, stuck.rounds
        ),
    )
}

fn convergence() -> Verdict {
    let trace = run(&demo::worked_example(q(&[(1, 1), (3, 1)])));
    let targets = demo::pre_interior_targets();
    let hit = trace
        .round_points(2)
        .iter()
        .take(50)
        .map(|p| descent::distance_to_union(&targets, p).expect("targets are nonempty"))
        .position(|d| d < DISTANCE_TOLERANCE);
    match hit {
        Some(n) => verdict(true, format!("distance < {DISTANCE_TOLERANCE:e} after round {}", n + 1)),
        None => verdict(false, format!("distance stayed >= {DISTANCE_TOLERANCE:e} for 50 rounds")),
    }
}

fn suites(list: &[Suite], count: u64) -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for &suite in list {
        let report = run_suite(suite, SEED, count);
        ok &= report.failed == 0;
        parts.push(format!("{suite} {}/{}", report.passed, report.count));
        for case in report.failures().take(3) {
            let failure = case.failure.as_ref().expect("failed case");
            parts.push(format!("[{suite} #{}: {}]", case.index, failure.message));
        }
    }
    verdict(ok, parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Verdict>)> = vec![
        ("1 worked-example classifiers", Duration::from_secs(1), Box::new(classifier_table)),
        ("2 escape behaviour", Duration::from_secs(1), Box::new(escape)),
        ("3 convergence report", Duration::from_secs(1), Box::new(convergence)),
        (
            "4 property suites x100",
            Duration::from_secs(300),
            Box::new(|| {
                suites(
                    &[
                        Suite::Dominance,
                        Suite::Faces,
                        Suite::Ricap,
                        Suite::Iterations,
                        Suite::Captured,
                        Suite::Cycle,
                    ],
                    100,
                )
            }),
        ),
        ("5 lp oracle x200", Duration::MAX, Box::new(|| suites(&[Suite::Lp], 200))),
        ("6 epigraph x50", Duration::MAX, Box::new(|| suites(&[Suite::Epigraph], 50))),
        ("7 diffusion x20", Duration::from_secs(120), Box::new(|| suites(&[Suite::Diffusion], 20))),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = v.ok && in_time;
        failed += usize::from(!pass);
        let limit = if limit == Duration::MAX {
            String::new()
        } else {
            format!(" (limit {:.0?})", limit)
        };
        println!(
            "acceptance {name}: {} in {:.2?}{limit}: {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            v.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
