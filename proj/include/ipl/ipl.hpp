#ifndef IPL_IPL_HPP
#define IPL_IPL_HPP

// Umbrella header: the full interpretable-polynomial-learning toolkit.

#include "ipl/admm.hpp"
#include "ipl/common.hpp"
#include "ipl/csv.hpp"
#include "ipl/estimators.hpp"
#include "ipl/interpret.hpp"
#include "ipl/kernel.hpp"
#include "ipl/model.hpp"
#include "ipl/model_io.hpp"
#include "ipl/multi_index.hpp"
#include "ipl/parallel.hpp"
#include "ipl/pipeline.hpp"
#include "ipl/rng.hpp"
#include "ipl/scaling.hpp"
#include "ipl/simulate.hpp"
#include "ipl/timeseries.hpp"
#include "ipl/warning_tree.hpp"

#endif // IPL_IPL_HPP
