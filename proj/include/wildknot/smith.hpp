#pragma once

// Smith normal form over the integers (arbitrary precision).

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace wildknot {

using Integer = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<Integer>>;

struct SmithForm {
  std::vector<Integer> invariant_factors;  // nonzero diagonal, positive, each divides the next
  std::size_t rank = 0;
};

SmithForm smith_normal_form(IntMatrix a);

}  // namespace wildknot
