// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_FANFORGE_HPP
#define FANFORGE_FANFORGE_HPP

#include "fanforge/batch.hpp"
#include "fanforge/bench.hpp"
#include "fanforge/config.hpp"
#include "fanforge/core.hpp"
#include "fanforge/error.hpp"
#include "fanforge/geometry.hpp"
#include "fanforge/io.hpp"
#include "fanforge/policy.hpp"
#include "fanforge/preview.hpp"
#include "fanforge/random.hpp"
#include "fanforge/ranking.hpp"
#include "fanforge/scanmask.hpp"
#include "fanforge/stdaug.hpp"
#include "fanforge/synthetic.hpp"
#include "fanforge/usaug.hpp"

#endif  // FANFORGE_FANFORGE_HPP
