#ifndef CORESHARE_CORESHARE_HPP
#define CORESHARE_CORESHARE_HPP

#include "coreshare/core.hpp"
#include "coreshare/entropy.hpp"
#include "coreshare/errors.hpp"
#include "coreshare/exact_lp.hpp"
#include "coreshare/field.hpp"
#include "coreshare/graph.hpp"
#include "coreshare/rational.hpp"
#include "coreshare/scheme.hpp"
#include "coreshare/scheme_io.hpp"
#include "coreshare/stars.hpp"

#endif
