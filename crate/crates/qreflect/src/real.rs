use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the whole library is generic over: `f32` or `f64`.
///
/// All internal tolerances assume f64-like precision; `f32` compiles and is
/// useful for quick sketches, but the reflection solver and the quadrature
/// targets are calibrated for `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + core::fmt::Debug
    + core::fmt::Display
    + core::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert to scalar")
    }

    fn as_f64(self) -> f64;
}

impl Real for f32 {
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}
