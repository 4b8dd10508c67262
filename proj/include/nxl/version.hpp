// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace nxl {
inline constexpr const char* version = "0.1.0";
}
