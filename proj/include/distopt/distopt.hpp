#pragma once

#include "distopt/errordyn.hpp"
#include "distopt/experiment.hpp"
#include "distopt/graph.hpp"
#include "distopt/methods.hpp"
#include "distopt/problem.hpp"
#include "distopt/reference.hpp"
#include "distopt/weights.hpp"
