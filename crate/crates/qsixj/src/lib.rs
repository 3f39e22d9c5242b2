//! 6j-symbols of the quantum group su_q(2), three ways.
//!
//! The crate evaluates the Tet-network (the unnormalized 6j-symbol) and
//! both 6j conventions over four deformation regimes:
//!
//! * `qnum` — quantum integers, quantum factorials, signed-log arithmetic;
//! * `admiss` — admissibility, j/l ranges, dimension counts;
//! * `networks` — bubble, θ, Tet closed forms (the oracle path) and the
//!   Kauffman-Lins / Racah-Wigner 6j-symbols;
//! * `recur` — linear-time columns via the three-term recurrence;
//! * `eigen` — the same recurrence as a symmetric tridiagonal
//!   eigenproblem, with full-table recovery;
//! * `cli` — the `qsixj` command-line front end.
//!
//! All spin labels are twice-spins (integers). Batch table and sweep
//! evaluation is data-parallel with the default `parallel` feature and
//! falls back to sequential execution without it.

pub mod admiss;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod networks;
pub mod opcount;
pub mod par;
pub mod qnum;
pub mod recur;

pub use admiss::{make_space, nonzero_conditions, triple_admissible, FourValentSpace};
pub use error::{Error, Result};
pub use networks::{bubble, sixj_kl, sixj_rw, tet_oracle, theta, NetValue, TetArgs};
pub use qnum::{QContext, Regime, Scalar, SignedLog, TwiceSpin};
pub use recur::{
    build_coeffs, lambda_eig, lambda_f64, max_mixed_deviation, norm_j, norm_l, tet_column_oracle,
    tet_column_recur, tet_column_recur_mode, Method, RecurMode, TetColumn,
};
pub use eigen::{
    build_trisystem, solve_tridiagonal, tet_table_eigen, tet_table_oracle, tet_table_recur,
    TetTable, TriSystem,
};
