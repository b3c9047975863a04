#pragma once

// Umbrella header.

#include "logdiff/complexes.hpp"
#include "logdiff/groebner.hpp"
#include "logdiff/logder.hpp"
#include "logdiff/logforms.hpp"
#include "logdiff/logops.hpp"
#include "logdiff/monomial_order.hpp"
#include "logdiff/parse.hpp"
#include "logdiff/polynomial.hpp"
#include "logdiff/rational.hpp"
#include "logdiff/rational_function.hpp"
#include "logdiff/serialize.hpp"
#include "logdiff/vartable.hpp"
#include "logdiff/weyl.hpp"
