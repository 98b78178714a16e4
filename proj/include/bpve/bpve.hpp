#pragma once

#include "bpve/analysis.hpp"
#include "bpve/combinatorics.hpp"
#include "bpve/conditional.hpp"
#include "bpve/csv.hpp"
#include "bpve/dtable.hpp"
#include "bpve/dual_real.hpp"
#include "bpve/environment.hpp"
#include "bpve/json_io.hpp"
#include "bpve/moments.hpp"
#include "bpve/rng.hpp"
#include "bpve/simulator.hpp"
#include "bpve/stats.hpp"
