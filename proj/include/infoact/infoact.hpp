#pragma once

#include "infoact/errors.hpp"
#include "infoact/model.hpp"
#include "infoact/belief.hpp"
#include "infoact/mdp_solver.hpp"
#include "infoact/approx_solvers.hpp"
#include "infoact/exact_solver.hpp"
#include "infoact/evi.hpp"
#include "infoact/problems.hpp"
#include "infoact/problem_file.hpp"
#include "infoact/report.hpp"
