//! Workloads shared by the benchmarks.

use avoid_core::ThreeVarEquation;

/// `(a, b, c, n)` instances that take the exact solver from microseconds to
/// tens of milliseconds.
pub const SOLVE_CASES: &[(u64, u64, u64, u64)] = &[
    (1, 1, 3, 60),
    (1, 2, 4, 80),
    (1, 2, 5, 60),
    (2, 2, 5, 100),
    (1, 3, 9, 90),
];

pub fn equation(a: u64, b: u64, c: u64) -> ThreeVarEquation {
    ThreeVarEquation::new(a, b, c).expect("bench equations are valid")
}
