//! A small simulation scenario with every estimator arm, reported as a
//! delimited table next to the published reference scores.

use multigraphon::bench::{emit_report, paper_context, run_scenario, Arm, ReportFormat, Scenario};
use multigraphon::model::{MultiGraphonSpec, SamplingMode};

fn main() -> multigraphon::error::Result<()> {
    let s = Scenario::new("f2_cross_small", MultiGraphonSpec::f2(0.5), 60, 40, SamplingMode::CrossSection)
        .with_sigma(0.28)
        .with_arms(&[Arm::Proposed, Arm::Oracle1, Arm::Oracle2, Arm::Usvt, Arm::Nbs, Arm::PerNetwork])
        .with_replications(2);
    let mut records = run_scenario(&s)?.records;
    records.extend(paper_context(&s.id, "f2", true, 150, 150));
    let dir = std::env::temp_dir().join("multigraphon-bench-example");
    let path = emit_report(&records, ReportFormat::DelimitedTable, &dir, false)?;
    print!("{}", std::fs::read_to_string(&path)?);
    Ok(())
}
