#pragma once

#include "policysim/config.hpp"
#include "policysim/core.hpp"
#include "policysim/csv.hpp"
#include "policysim/demographics.hpp"
#include "policysim/experiments.hpp"
#include "policysim/firm_decisions.hpp"
#include "policysim/fiscal.hpp"
#include "policysim/generate.hpp"
#include "policysim/goods_market.hpp"
#include "policysim/labor_market.hpp"
#include "policysim/params.hpp"
#include "policysim/random.hpp"
#include "policysim/real_estate.hpp"
#include "policysim/region.hpp"
#include "policysim/scheduler.hpp"
#include "policysim/stats.hpp"
#include "policysim/taxes.hpp"
#include "policysim/world.hpp"
