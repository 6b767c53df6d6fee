#pragma once

// Umbrella header for the homecourt analysis engine.

#include "homecourt/csv.hpp"
#include "homecourt/distributions.hpp"
#include "homecourt/errors.hpp"
#include "homecourt/glm.hpp"
#include "homecourt/inference.hpp"
#include "homecourt/manifest.hpp"
#include "homecourt/matching.hpp"
#include "homecourt/metrics.hpp"
#include "homecourt/model.hpp"
#include "homecourt/rpi.hpp"
#include "homecourt/simulate.hpp"
#include "homecourt/stats.hpp"
#include "homecourt/version.hpp"
