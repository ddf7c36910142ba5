#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cavitybec {

/// Boundary condition on all six cavity walls.
enum class Boundary { Neumann, Dirichlet };

/// +1 for Neumann, -1 for Dirichlet: the sign carried by the surface terms.
constexpr int boundary_sign(Boundary bc) { return bc == Boundary::Neumann ? 1 : -1; }

inline std::string_view to_string(Boundary bc) {
  return bc == Boundary::Neumann ? "neumann" : "dirichlet";
}

inline Boundary parse_boundary(std::string_view s) {
  if (s == "neumann" || s == "Neumann" || s == "N") return Boundary::Neumann;
  if (s == "dirichlet" || s == "Dirichlet" || s == "D") return Boundary::Dirichlet;
  throw std::invalid_argument("unknown boundary condition '" + std::string(s) + "'");
}

}  // namespace cavitybec
