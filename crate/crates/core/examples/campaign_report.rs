//! Runs a campaign from a config and writes a versioned JSON report, the way
//! `emergent axioms --config <file> --out <file>` does.

use emergent::cli::{cmd_axioms, CampaignConfig, RunReport};

fn main() -> emergent::Result<()> {
    let mut cfg = CampaignConfig {
        instances: vec!["vector:2".parse()?, "unipotent:3".parse()?],
        limit_samples: 50,
        ..Default::default()
    };
    cfg.sample.count = 200;
    cfg.validate()?;

    let report = cmd_axioms(&cfg)?;
    let json = report.to_json()?;
    let back = RunReport::from_json(&json)?;
    assert_eq!(back.body_json()?, report.body_json()?);
    print!("{}", report.summary());
    println!("expectations met: {}", report.expectations_met());
    Ok(())
}
