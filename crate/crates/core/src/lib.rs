// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic behind two counterexamples to the integral local
//! invariant cycle theorem for families of K3 and elliptic surfaces.
//!
//! The crate is layered bottom-up: [`lattice`] (Gram matrices, Smith form,
//! binary forms, overlattices), [`kodaira`] (fiber catalog and quadratic base
//! change), [`surfaces`] (fibration configurations), [`mordell_weil`]
//! (Shioda–Tate arithmetic), [`transcendental`] (index arguments) and
//! [`pipeline`] (end-to-end verification reports).

pub mod io;
pub mod kodaira;
pub mod lattice;
pub mod mordell_weil;
pub mod pipeline;
pub mod surfaces;
pub mod transcendental;
