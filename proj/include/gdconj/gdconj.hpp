// Umbrella header.
#pragma once

#include "gdconj/rational.hpp"
#include "gdconj/matrix2.hpp"
#include "gdconj/expr.hpp"
#include "gdconj/maps.hpp"
#include "gdconj/systems.hpp"
#include "gdconj/solver.hpp"
#include "gdconj/classify.hpp"
#include "gdconj/diagnostics.hpp"
#include "gdconj/fixtures.hpp"
#include "gdconj/config.hpp"
#include "gdconj/report.hpp"
