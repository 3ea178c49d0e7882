#pragma once

// Umbrella header for the whole toolchain.

#include "rg/bench.hpp"
#include "rg/compile.hpp"
#include "rg/dataflow.hpp"
#include "rg/dot.hpp"
#include "rg/engine.hpp"
#include "rg/expand.hpp"
#include "rg/game.hpp"
#include "rg/json_io.hpp"
#include "rg/parse.hpp"
#include "rg/passes.hpp"
#include "rg/pipeline.hpp"
#include "rg/proper.hpp"
#include "rg/render.hpp"
#include "rg/rng.hpp"
#include "rg/sema.hpp"
