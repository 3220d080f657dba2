#pragma once

#include "genmean/bounds.hpp"
#include "genmean/counterexamples.hpp"
#include "genmean/densities.hpp"
#include "genmean/error.hpp"
#include "genmean/generators.hpp"
#include "genmean/json_io.hpp"
#include "genmean/measure_space.hpp"
#include "genmean/operators.hpp"
