#pragma once

#include "opcat/cli/run.hpp"
#include "opcat/cli/workspace.hpp"
