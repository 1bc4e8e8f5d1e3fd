//! Scalar abstraction for the metric kernels.
//!
//! Score aggregation, cosine similarity and the real-valued complexity
//! dimensions are generic over [`Real`] so they run at `f32` or `f64`.
//! Everything outside the numeric kernels uses the crate-level [`crate::Score`]
//! alias (`f64`).

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable by the metric kernels.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {
    /// Lossless-enough conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Send + Sync + 'static {}
