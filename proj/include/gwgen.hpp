// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef GWGEN_HPP_
#define GWGEN_HPP_

#include "gwgen/asymptotics.hpp"
#include "gwgen/error.hpp"
#include "gwgen/jet.hpp"
#include "gwgen/laws.hpp"
#include "gwgen/offspring.hpp"
#include "gwgen/partitions.hpp"
#include "gwgen/quadrature.hpp"
#include "gwgen/semigroup.hpp"
#include "gwgen/treesim.hpp"
#include "gwgen/validate.hpp"

#endif  // GWGEN_HPP_
