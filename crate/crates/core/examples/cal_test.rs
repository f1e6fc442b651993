use goeritz_core::*;

fn main() {
    let m = build_standard_model();
    let t0 = std::time::Instant::now();
    match conformance::uniqueness_census(m, 1, 1) {
        Ok(rep) => {
            println!("uniqueness (1 factor, |exp|<=1): {} forms, {} violations ({:?})",
                rep.forms_checked, rep.violations.len(), t0.elapsed());
            for v in rep.violations.iter().take(8) { println!("  V: {v}"); }
        }
        Err(e) => println!("ABORT: {e}"),
    }
}
