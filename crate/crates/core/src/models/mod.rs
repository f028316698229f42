//! Homogeneous models: the nearly-hypo cone over `SU(2) × SU(2)` and its
//! invariant circle-bundle deformations.

pub mod ansatz;
pub mod constraints;
pub mod elimination;
pub mod flow;
pub mod gamma;
pub mod rates;
pub mod samples;
pub mod sheared;
pub mod sine;
pub mod solutions;
pub mod su2su2;

pub use ansatz::{a_name, InvariantAnsatz};
pub use flow::{FlowState, HypoSystem};
pub use gamma::{gamma_ansatz, gamma_checks, gamma_family, GammaChecks, GAMMA};
pub use rates::{decay_rates, RateReport};
pub use sheared::{sheared_samples, ShearedBundle};
pub use sine::{nearly_kahler_link, sine_cone, sine_grid, sine_grid_with, SineConeSample};
pub use solutions::{bryant_salamon, bryant_salamon_standard, torsion_free_solutions, torsion_free_values};
pub use su2su2::{su2su2_coframe, su2su2_coframe_with_scale, StandardForms, LORENTZ_Q};
