#ifndef SHAPIQ_HPP_
#define SHAPIQ_HPP_

#include "shapiq/baselines.hpp"
#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/exact.hpp"
#include "shapiq/games.hpp"
#include "shapiq/harness.hpp"
#include "shapiq/io.hpp"
#include "shapiq/metrics.hpp"
#include "shapiq/nsii.hpp"
#include "shapiq/rng.hpp"
#include "shapiq/sampling.hpp"
#include "shapiq/scores.hpp"
#include "shapiq/shapiq.hpp"
#include "shapiq/weights.hpp"
#include "shapiq/welford.hpp"

#endif  // SHAPIQ_HPP_
