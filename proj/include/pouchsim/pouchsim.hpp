#pragma once

#include "pouchsim/bench_oracle.hpp"
#include "pouchsim/brute_force.hpp"
#include "pouchsim/config.hpp"
#include "pouchsim/design_csv.hpp"
#include "pouchsim/design_space.hpp"
#include "pouchsim/errors.hpp"
#include "pouchsim/importance.hpp"
#include "pouchsim/model_io.hpp"
#include "pouchsim/optimizer.hpp"
#include "pouchsim/rectum_sim.hpp"
#include "pouchsim/surrogate.hpp"
#include "pouchsim/text.hpp"
