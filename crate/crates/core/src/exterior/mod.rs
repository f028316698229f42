//! Forms, coframes and the exterior derivative.

pub mod form;
pub mod frame;
pub mod metric;
pub mod numeric;

pub use form::{indices_of, mask_of, masks_of_degree, wedge_sign, Coeff, Form, FormExpr, Mask, NumForm};
pub use frame::{d_constant, Coframe, CoframeSpec};
pub use metric::{full_mask, minor, Metric, MetricExpr, NumMetric};
pub use numeric::{d_numeric, metric_from_phi_numeric, phi_bilinear};
