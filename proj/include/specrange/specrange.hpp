#pragma once

#include "specrange/error.hpp"
#include "specrange/lattice.hpp"
#include "specrange/potential.hpp"
#include "specrange/operator.hpp"
#include "specrange/linalg.hpp"
#include "specrange/numrange.hpp"
#include "specrange/classifier.hpp"
#include "specrange/criteria.hpp"
#include "specrange/one_dim.hpp"
#include "specrange/construct.hpp"
#include "specrange/scenario.hpp"
#include "specrange/report.hpp"
