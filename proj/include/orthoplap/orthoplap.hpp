// Copyright 2026 The orthoplap Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ORTHOPLAP_ORTHOPLAP_HPP
#define ORTHOPLAP_ORTHOPLAP_HPP

#include "orthoplap/barriers.hpp"
#include "orthoplap/config.hpp"
#include "orthoplap/core.hpp"
#include "orthoplap/eigen1d.hpp"
#include "orthoplap/flux.hpp"
#include "orthoplap/grid.hpp"
#include "orthoplap/io.hpp"
#include "orthoplap/pde_solver.hpp"
#include "orthoplap/problem.hpp"
#include "orthoplap/verification.hpp"

#endif // ORTHOPLAP_ORTHOPLAP_HPP
