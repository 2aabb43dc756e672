// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Slow, obviously-correct reference computations for the test suites.
//!
//! Nothing here depends on `ictz-core`; every routine is a direct search or
//! a transcription of a standard table, kept independent of the code paths
//! it is used to check.

pub mod binary;
pub mod fibers;
pub mod overlattice;
