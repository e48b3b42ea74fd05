#pragma once

// Colored symmetric operads in sets, their constructions and their
// categories of operators.

#include "opcat/operad/constructions.hpp"
#include "opcat/operad/core.hpp"
#include "opcat/operad/explicit.hpp"
#include "opcat/operad/laws.hpp"
#include "opcat/operad/morphism.hpp"
#include "opcat/operad/operator_category.hpp"
#include "opcat/operad/representability.hpp"
