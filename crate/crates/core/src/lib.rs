//! Symbolic Euler-characteristic ("genus") expansions for traces of products
//! of real Gaussian random matrices (Ginibre, GOE, Wishart), with exact
//! small-`N` Wick verification and seeded Monte-Carlo estimation.
//!
//! The pipeline: a trace expression is compiled into face data `γ` and a
//! transpose signature `ε` ([`gluing::compile`]); every Wick pairing becomes a
//! surface gluing encoded as a premap on the signed set `±[n]`
//! ([`gluing::for_each_gluing`]); each gluing contributes
//! `N^{χ(γ,π) − 2#(γ)} c^{rows} Π tr(Y…)` and the terms are collected
//! ([`gluing::expand`]).  Cumulants keep only connected gluings, and the
//! asymptotic layer extracts sphere terms, annular counts and spoke-diagram
//! covariances.

pub mod asymptotics;
pub mod cumulants;
pub mod dot;
pub mod expr;
pub mod gluing;
pub mod mc;
pub mod perm;
