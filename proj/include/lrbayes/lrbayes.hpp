#pragma once

//! Umbrella header: likelihood-ratio calculus, Bayes decisions, proper
//! scoring rules, the two-level Gaussian and kinship evidence models, and
//! the experiment harness built on them.

#include "common.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "decision.hpp"
#include "gauss_density.hpp"
#include "gaussian_source.hpp"
#include "harness.hpp"
#include "kinship.hpp"
#include "lr.hpp"
#include "prob.hpp"
#include "random_models.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "scoring.hpp"
