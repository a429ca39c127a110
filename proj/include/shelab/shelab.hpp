#pragma once

#include "shelab/error.hpp"
#include "shelab/model.hpp"
#include "shelab/game.hpp"
#include "shelab/solver.hpp"
#include "shelab/equivalence.hpp"
#include "shelab/io.hpp"
#include "shelab/play.hpp"
#include "shelab/harness.hpp"
#include "shelab/dot.hpp"
