#pragma once

#include "cfb/randfields.hpp"

namespace cfb::testutil {

using ScalarField = forms::ScalarFieldPair;
using forms::random_field;
using forms::random_oneform;
using forms::random_scalar_field;
using forms::random_vector_map;

}  // namespace cfb::testutil
