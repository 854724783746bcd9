#pragma once

#include "binfinity.hpp"
#include "cartan.hpp"
#include "character.hpp"
#include "characterize.hpp"
#include "checks.hpp"
#include "crystal.hpp"
#include "crystal_graph.hpp"
#include "error.hpp"
#include "ext_int.hpp"
#include "io.hpp"
#include "matrix.hpp"
#include "quiver.hpp"
#include "quiver_moves.hpp"
