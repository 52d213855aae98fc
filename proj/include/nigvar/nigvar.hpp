// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

// Umbrella header.

#pragma once

#include "nigvar/cli.hpp"
#include "nigvar/data_ingest.hpp"
#include "nigvar/date.hpp"
#include "nigvar/distributions.hpp"
#include "nigvar/error.hpp"
#include "nigvar/estimation.hpp"
#include "nigvar/nelder_mead.hpp"
#include "nigvar/simulation.hpp"
#include "nigvar/special_math.hpp"
#include "nigvar/variation.hpp"
#include "nigvar/version.hpp"
