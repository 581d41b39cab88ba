#pragma once

#include "clfmetrics/cli.hpp"
#include "clfmetrics/confusion.hpp"
#include "clfmetrics/error.hpp"
#include "clfmetrics/format.hpp"
#include "clfmetrics/ingest.hpp"
#include "clfmetrics/metric_value.hpp"
#include "clfmetrics/metrics.hpp"
#include "clfmetrics/proba.hpp"
#include "clfmetrics/rational.hpp"
#include "clfmetrics/report.hpp"
