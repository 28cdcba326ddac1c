#pragma once

#include "banded.hpp"
#include "com.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "density.hpp"
#include "density_matrix.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "hamiltonian.hpp"
#include "linalg.hpp"
#include "observables.hpp"
#include "propagator.hpp"
#include "pulse.hpp"
#include "runner.hpp"
#include "snapshot.hpp"
#include "spline.hpp"
