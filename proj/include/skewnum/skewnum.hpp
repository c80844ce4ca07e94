#pragma once

#include "skewnum/counterexample.hpp"
#include "skewnum/eigen.hpp"
#include "skewnum/entropy.hpp"
#include "skewnum/inequality.hpp"
#include "skewnum/instance_io.hpp"
#include "skewnum/matrix.hpp"
#include "skewnum/metric.hpp"
#include "skewnum/quadrature.hpp"
#include "skewnum/rng.hpp"
#include "skewnum/search.hpp"
#include "skewnum/tensor.hpp"
#include "skewnum/verification.hpp"
