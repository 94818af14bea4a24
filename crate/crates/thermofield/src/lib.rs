//! Spectral Galerkin simulator for a nonisothermal tumor-growth system of
//! Cahn–Hilliard/Caginalp type.
//!
//! The model couples a relative temperature θ, a phase field φ (healthy
//! tissue near −1, tumor near +1) with chemical potential μ, and a nutrient
//! concentration σ on a box Ω with homogeneous Neumann boundary conditions:
//!
//! ```text
//! ∂t(θ + ℓφ) − Δθ = u
//! ∂t φ − Δμ = (λ_P σ − λ_A − λ_E θ) h(φ)
//! μ = τ ∂t φ − Δφ + β_ε(φ) + π(φ) − χσ − Λθ
//! ∂t σ − Δ(σ − χφ) = −λ_C σ h(φ) + λ_B (σ_B − σ) − λ_D σ k(θ)
//! ```
//!
//! The convex part of the double-well potential enters through its Yosida
//! approximation β_ε at a runtime-chosen level ε > 0.  Discretization expands
//! every field in the Neumann cosine eigenbasis truncated at a per-axis mode
//! cutoff; nonlinear terms are evaluated pseudo-spectrally on a midpoint
//! quadrature grid.  μ is eliminated mode by mode, which turns the truncated
//! system into an ODE for the coefficient vectors; see [`model`] for the
//! resulting equations and [`stepper`] for the semi-implicit and Runge–Kutta
//! integrators.
//!
//! Standing hypotheses mirrored by runtime validation:
//!
//! * (H1) ℓ > 0, Λ ≥ 0, χ ≥ 0, τ ≥ 0 and all reaction rates λ_* ≥ 0
//!   (negative couplings are rejected when configs are parsed).
//! * (H2) the heat source u and nutrient supply σ_B are bounded; the sup
//!   bound of u is derived per preset and checked against node samples.
//! * (H3) h and k are bounded and Lipschitz with recorded constants.
//! * (H4) the potential splits into a convex β̂ (with β(0) = 0 and a growth
//!   constant fitted once) plus a smooth perturbation π̂.
//!
//! Entry points: [`basis::build_basis`] for the discretization,
//! [`model::assemble_rhs`] for the Galerkin right-hand side,
//! [`stepper::integrate`] for trajectories with monitoring, [`study`] for
//! refinement and perturbation studies, and [`config`]/[`io`]/[`cli`] for the
//! text-config + CSV + checkpoint surface of the command-line tool.

pub mod basis;
pub mod cli;
pub mod config;
pub mod io;
pub mod model;
pub mod monitor;
pub mod potential;
pub mod rng;
pub mod stepper;
pub mod study;
