use std::io::Write;

use supnorm::criteria::{run_all, Scale};

#[test]
fn acceptance() {
    let results = run_all(Scale::Full);
    // written to the raw handle so the lines show without --nocapture
    let mut err = std::io::stderr().lock();
    for r in &results {
        writeln!(err, "{}", r.line()).unwrap();
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    writeln!(err, "{} of {} criteria pass", results.len() - failed.len(), results.len()).unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
