//! Scalar special functions: error function, log-gamma, Bessel functions of half-integer and
//! integer order, and Hankel functions of the first kind of orders 0 and 1.

mod bessel;
mod erf;
mod gamma;
mod hankel;

pub use bessel::{bessel_j_half, bessel_jn_seq, bessel_yn_seq};
pub use erf::{erf, erfc, gaussian_tail};
pub use gamma::log_gamma;
pub use hankel::{hankel01, hankel1};

pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
