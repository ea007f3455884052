//! Fixtures shared by the benchmarks.

use noisyvqe::adapt::{adapt_run, truncation_prefixes, AdaptConfig, Prefix};
use noisyvqe::ansatz::PoolKind;
use noisyvqe::{bundled, MolecularProblem};

/// H4 with the noiseless QEB-ADAPT circuit grown to a residual of 1e-4 Ha.
pub fn h4_qeb() -> (MolecularProblem, Prefix) {
    let problem = bundled::h4();
    let config = AdaptConfig {
        pool: PoolKind::Qeb,
        eps_t: Some(1e-4),
        ..Default::default()
    };
    let record = adapt_run(&problem, &config).expect("adapt run");
    let last = truncation_prefixes(&record).expect("prefixes").pop().expect("non-empty");
    (problem, last)
}
