#pragma once

#include "metric_energy/energy.hpp"
#include "metric_energy/error.hpp"
#include "metric_energy/io.hpp"
#include "metric_energy/mconst.hpp"
#include "metric_energy/negtype.hpp"
#include "metric_energy/numkernel.hpp"
#include "metric_energy/sampling.hpp"
#include "metric_energy/spaces.hpp"
