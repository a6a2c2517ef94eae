#pragma once

#include <string>
#include <vector>

#include "tkstab/polytope.hpp"

namespace tkstab {

/// Built-in desk-scale polytopes:
///   interval      [-1, 1]
///   square        [-1, 1]^2
///   simplex       conv{(0,0), (1,0), (0,1)}
///   cube          [-1, 1]^3
///   trapezoid(k)  {x >= 0, 0 <= y <= 1, x + y <= k}, rational k > 1
inline std::vector<std::string> example_names() {
  return {"interval", "square", "simplex", "cube", "trapezoid(k)"};
}

inline Polytope example_polytope(const std::string& name) {
  if (name == "interval") return make_polytope(1, {{1}, {-1}}, {Rat(1), Rat(1)});
  if (name == "square")
    return make_polytope(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}},
                         {Rat(1), Rat(1), Rat(1), Rat(1)});
  if (name == "simplex")
    return make_polytope(2, {{-1, 0}, {0, -1}, {1, 1}}, {Rat(0), Rat(0), Rat(1)});
  if (name == "cube")
    return make_polytope(3, {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}},
                         {Rat(1), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)});
  if (name.rfind("trapezoid(", 0) == 0 && name.back() == ')') {
    Rat k = parse_rational(name.substr(10, name.size() - 11));
    if (k <= 1) throw std::invalid_argument("trapezoid parameter must be > 1");
    return make_polytope(2, {{-1, 0}, {0, -1}, {0, 1}, {1, 1}}, {Rat(0), Rat(0), Rat(1), k});
  }
  throw std::invalid_argument("unknown example '" + name +
                              "'; known: interval, square, simplex, cube, trapezoid(k)");
}

}  // namespace tkstab
