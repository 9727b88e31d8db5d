/// @file  qlit.hpp
/// @brief Everything except the command line.

#pragma once

#include "checks.hpp"
#include "circuit.hpp"
#include "core.hpp"
#include "error.hpp"
#include "hitting_set.hpp"
#include "io.hpp"
#include "normal_form.hpp"
#include "oracle.hpp"
#include "quantify.hpp"
#include "random.hpp"
#include "tractable.hpp"
#include "truth_table.hpp"
#include "xai.hpp"
