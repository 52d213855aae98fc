// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace nigvar {

inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace nigvar
