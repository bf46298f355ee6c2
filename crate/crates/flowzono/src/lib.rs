//! Sound reachability analysis for neural-network control systems.
//!
//! A plant ODE in closed loop with a periodically sampled ReLU controller is
//! analyzed by chaining two validated set representations: Taylor-model
//! flowpipes for the continuous dynamics and zonotopes for the network. The
//! conversions in between use a structured zonotope form (generator block
//! `[M D]` with diagonal `D`) that converts to a Taylor model exactly, which
//! preserves the dependency information between control cycles.
//!
//! The crate is organized bottom-up:
//!
//! - [`interval`]: outward-rounded interval arithmetic and boxes
//! - [`poly`]: sparse truncated multivariate polynomials
//! - [`taylor`]: Taylor models and their validated arithmetic
//! - [`zonotope`]: zonotopes, structured zonotopes, order reduction
//! - [`nn`]: ReLU networks and the zonotope abstract transformer
//! - [`convert`]: Taylor model <-> structured zonotope conversions
//! - [`expr`]: dynamics expression trees and their parser
//! - [`flow`]: validated Taylor-model ODE flowpipes
//! - [`engine`]: the closed-loop reachability driver
//! - [`model`]: model-file ingestion
//! - [`output`]: JSON reach-set export and SVG projections
//! - [`cli`]: the command-line front end
//!
//! With the default `parallel` feature, split initial sets and multibox
//! covers are processed with rayon; without it everything runs sequentially
//! on the same code paths.

pub mod cli;
pub mod convert;
pub mod engine;
mod error;
pub mod expr;
pub mod flow;
pub mod interval;
pub mod model;
pub mod nn;
pub mod output;
mod par;
pub mod poly;
pub mod taylor;
pub mod zonotope;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalBox};
pub use poly::{Monomial, Polynomial};
