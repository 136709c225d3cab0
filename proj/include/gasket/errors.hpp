#pragma once

#include <stdexcept>
#include <string>

namespace gasket {

/// Invalid user-supplied parameters (laws, specs, CLI flags). Maps to exit 2.
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Requested level exceeds the configured memory budget.
class capacity_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A coordinate was queried against a graph that does not contain it.
class unknown_vertex_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A walk tried to depart from a vertex whose ambient neighbourhood is not
/// fully materialized; the caller must embed in a larger level.
class frontier_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A rotor configuration is missing an entry that an operation requires.
class rotor_missing_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Defensive toppling cap tripped.
class topple_cap_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace gasket
