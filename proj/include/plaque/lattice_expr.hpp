#pragma once

#include <string>
#include <variant>

#include "plaque/seq.hpp"

namespace plaque::seqlat {

// Expression language over tail classes:
//   atoms      sq(n), literal "p=K;w=bits", 0, 1
//   operators  ! (not), & (meet), | (join), shift(m, e), e1 <= e2
// "<=" compares once at the top level and yields a boolean.
using ExprValue = std::variant<TailClass, bool>;

ExprValue eval_lattice_expr(const std::string& text);

}  // namespace plaque::seqlat
