#pragma once

#include "topoloss/bench.hpp"
#include "topoloss/betti.hpp"
#include "topoloss/descent.hpp"
#include "topoloss/error.hpp"
#include "topoloss/filtration.hpp"
#include "topoloss/fixtures.hpp"
#include "topoloss/grid.hpp"
#include "topoloss/hungarian.hpp"
#include "topoloss/io.hpp"
#include "topoloss/loss.hpp"
#include "topoloss/matching.hpp"
#include "topoloss/metrics.hpp"
#include "topoloss/oracle.hpp"
#include "topoloss/persistence.hpp"
