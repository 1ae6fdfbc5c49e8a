//! Closed-form holomorphic / split-holomorphic functions as expression
//! trees over C_eps, with exact symbolic derivatives, plus truncated power
//! series for the Cauchy solver.

mod expr;
mod parse;
mod series;

pub use expr::{HoloExpr, Node};
pub use parse::parse_expr;
pub use series::{CurveSeries, PlanarSeries, PowerSeries};
