#pragma once

#include "rgls/bench.hpp"
#include "rgls/construct.hpp"
#include "rgls/data.hpp"
#include "rgls/error.hpp"
#include "rgls/features.hpp"
#include "rgls/gls.hpp"
#include "rgls/instance.hpp"
#include "rgls/regret.hpp"
#include "rgls/regret_matrix.hpp"
#include "rgls/search.hpp"
#include "rgls/tour.hpp"
