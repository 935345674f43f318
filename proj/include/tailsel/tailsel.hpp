#pragma once

#include "benchmark.hpp"
#include "common.hpp"
#include "copula.hpp"
#include "dataset.hpp"
#include "fit.hpp"
#include "genetic.hpp"
#include "kendall.hpp"
#include "learners/common.hpp"
#include "learners/gradient_boosting.hpp"
#include "learners/logistic.hpp"
#include "learners/predict.hpp"
#include "learners/random_forest.hpp"
#include "learners/serialize.hpp"
#include "learners/tree.hpp"
#include "metrics.hpp"
#include "mutual_information.hpp"
#include "parallel.hpp"
#include "permutation.hpp"
#include "pseudo.hpp"
#include "quadrature.hpp"
#include "ranking.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "split.hpp"
