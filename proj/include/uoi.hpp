#pragma once

#include "uoi/error.hpp"
#include "uoi/belief.hpp"
#include "uoi/penalty.hpp"
#include "uoi/hitting.hpp"
#include "uoi/whittle.hpp"
#include "uoi/rvi.hpp"
#include "uoi/policy.hpp"
#include "uoi/sim.hpp"
#include "uoi/tables.hpp"
#include "uoi/report.hpp"
