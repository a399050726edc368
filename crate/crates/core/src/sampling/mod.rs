//! Samplers, exhaustive enumerators and one-row extension counts.

pub mod completion;
pub mod enumerate;
pub mod jm;
pub mod permanent;

pub use completion::{
    random_completion, sample_rectangle, Completion, ExactTinySampler, RectangleMode,
};
pub use enumerate::{enumerate_rectangles, enumerate_squares};
pub use jm::{jm_sample, JmSampler, JmState};
pub use permanent::{count_row_extensions, extension_bounds, AvailabilityMatrix};
