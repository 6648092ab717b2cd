#pragma once

// Everything except the command-line layer (pisum/cli.hpp).
#include "pisum/error.hpp"
#include "pisum/bigint.hpp"
#include "pisum/rational.hpp"
#include "pisum/quadext.hpp"
#include "pisum/fixed.hpp"
#include "pisum/surd.hpp"
#include "pisum/hyperseries.hpp"
#include "pisum/sequences.hpp"
#include "pisum/catalog.hpp"
#include "pisum/wz.hpp"
#include "pisum/qmodular.hpp"
#include "pisum/pseries.hpp"
