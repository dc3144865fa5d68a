#pragma once

#include "shotvar/calibration.hpp"
#include "shotvar/cltstats.hpp"
#include "shotvar/density_matrix.hpp"
#include "shotvar/errors.hpp"
#include "shotvar/incgamma.hpp"
#include "shotvar/io.hpp"
#include "shotvar/noisevar.hpp"
#include "shotvar/observable.hpp"
#include "shotvar/pauli.hpp"
#include "shotvar/predict.hpp"
#include "shotvar/rng.hpp"
#include "shotvar/series.hpp"
#include "shotvar/sim.hpp"
#include "shotvar/svg.hpp"
