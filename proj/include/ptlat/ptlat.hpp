#pragma once

#include "ptlat/errors.hpp"
#include "ptlat/rational.hpp"
#include "ptlat/exactlin.hpp"
#include "ptlat/lattice.hpp"
#include "ptlat/spectra.hpp"
#include "ptlat/dieudonne.hpp"
#include "ptlat/formulas.hpp"
#include "ptlat/metric.hpp"
#include "ptlat/exceptional.hpp"
#include "ptlat/report.hpp"
