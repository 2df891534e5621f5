// SPDX-License-Identifier: Apache-2.0
//
// mdcran: joint radio/fronthaul design for packet-based C-RAN uplinks
// Copyright (C) 2026 The mdcran authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/// \file mdcran.hpp
/// \brief Convenience umbrella header.

#ifndef MDCRAN_MDCRAN_HPP
#define MDCRAN_MDCRAN_HPP

#include "mdcran/channel.hpp"
#include "mdcran/config.hpp"
#include "mdcran/congestion.hpp"
#include "mdcran/hermitian.hpp"
#include "mdcran/mdc_rates.hpp"
#include "mdcran/optimizer.hpp"
#include "mdcran/rng.hpp"
#include "mdcran/simulator.hpp"
#include "mdcran/sweep.hpp"

#endif  // MDCRAN_MDCRAN_HPP
