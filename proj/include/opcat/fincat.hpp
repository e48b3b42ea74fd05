#pragma once

// Finite categories: tables, functors, natural transformations, functor
// categories, markings and the isomorphism search.

#include "opcat/fincat/category.hpp"
#include "opcat/fincat/functor.hpp"
#include "opcat/fincat/marking.hpp"
#include "opcat/fincat/search.hpp"
