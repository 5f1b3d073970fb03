#pragma once

#include "mrp/analytics.hpp"
#include "mrp/bias.hpp"
#include "mrp/engine.hpp"
#include "mrp/error.hpp"
#include "mrp/ingest.hpp"
#include "mrp/metrics.hpp"
#include "mrp/partition.hpp"
#include "mrp/series.hpp"
