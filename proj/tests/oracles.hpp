#pragma once

// Test-side reference implementations, deliberately independent of the
// library's data structures and algorithms: a set-based vertex/edge
// enumeration in doubled Euclidean integer coordinates, a plain sequential
// scan-toppling stabilizer, a dense absorbing-chain solver for truncated
// Green values, and a full-sweep divisible relaxation.

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "gasket/divisible.hpp"
#include "gasket/graph.hpp"
#include "gasket/sandpile.hpp"

namespace oracle {

// Coordinates (p, q) standing for the Euclidean point (p/2, q*sqrt(3)/2).
// This is a different integer encoding than the library's lattice basis:
// conversion from lattice (a, b) is p = 2a + b, q = b.
using XY = std::pair<long long, long long>;
using Edge = std::pair<XY, XY>;

struct EnumGraph {
    std::set<XY> vertices;
    std::set<Edge> edges;  // endpoints stored in sorted order
};

EnumGraph enum_build(int level, gasket::Half half);

XY to_doubled(gasket::LatticeCoord v);

// One toppling per unstable vertex per pass, vertices scanned in coordinate
// order; no batching, no worklist.
struct SeqToppleResult {
    std::vector<std::int64_t> final;
    std::vector<std::int64_t> topples;
    std::int64_t sink = 0;
};

SeqToppleResult stabilize_sequential(const gasket::Domain& domain,
                                     const std::vector<std::int64_t>& sigma);

// Expected visits to `target` before first exit from `region`, for the
// simple random walk with uniform steps over the ambient 4-neighbourhoods:
// solves (I - Q) g = e_target by Gaussian elimination and reads g[source].
double exact_green(const gasket::PrefractalGraph& ambient,
                   const std::vector<gasket::LatticeCoord>& region,
                   gasket::LatticeCoord source, gasket::LatticeCoord target);

// Full-sweep relaxation at a tiny epsilon (Jacobi-style scan over all
// vertices each sweep).
struct SweepRelaxResult {
    std::vector<double> final;
    std::vector<double> odometer;
    double sink = 0.0;
};

SweepRelaxResult relax_divisible(const gasket::Domain& domain, std::vector<double> sigma,
                                 double epsilon);

}  // namespace oracle
