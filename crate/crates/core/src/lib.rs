//! Numerical toolkit for square-integrable group representations.
//!
//! The exact backend lives on the finite phase space `Z_d × Z_d` (odd `d`):
//! the Weyl system and its frames ([`weyl`]), quantization and star products
//! ([`phase`]), convolution and twirling semigroups ([`semigroup`]) and the
//! twirled product of states ([`products`]). Two approximate continuum
//! backends complement it: a truncated Fock-space Weyl system ([`fock`]) and
//! the affine group with the continuous wavelet transform ([`affine`]).
//!
//! Everything is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); the `*64` / `*32` aliases below fix the precision.

// `!(x > 0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod affine;
pub mod error;
pub mod fock;
pub mod group;
pub mod io;
pub mod operator;
pub mod phase;
pub mod products;
pub mod random;
pub mod scalar;
pub mod semigroup;
pub mod weyl;

pub use affine::{AffinePoint, CoefficientTable, Morlet, SampledSignal, Wavelet};
pub use error::{Error, Result};
pub use fock::{ContinuousPoint, FockSpace};
pub use group::{GroupMeasure, PhaseGroup, PhasePoint};
pub use operator::{DensityOperator, Operator, StateVector};
pub use phase::{PhaseFunction, PositivityVerdict, StarMode};
pub use random::Instances;
pub use scalar::Real;
pub use weyl::WeylSystem;

pub use nalgebra::Complex;

pub type PhaseGroup64 = PhaseGroup<f64>;
pub type PhaseGroup32 = PhaseGroup<f32>;
pub type WeylSystem64 = WeylSystem<f64>;
pub type WeylSystem32 = WeylSystem<f32>;
pub type PhaseFunction64 = PhaseFunction<f64>;
pub type PhaseFunction32 = PhaseFunction<f32>;
pub type DensityOperator64 = DensityOperator<f64>;
pub type DensityOperator32 = DensityOperator<f32>;
pub type GroupMeasure64 = GroupMeasure<f64>;
pub type GroupMeasure32 = GroupMeasure<f32>;
pub type AffinePoint64 = AffinePoint<f64>;
pub type AffinePoint32 = AffinePoint<f32>;
pub type SampledSignal64 = SampledSignal<f64>;
pub type SampledSignal32 = SampledSignal<f32>;
pub type ContinuousPoint64 = ContinuousPoint<f64>;
pub type ContinuousPoint32 = ContinuousPoint<f32>;
