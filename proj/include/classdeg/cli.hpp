#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace classdeg {

// Exit codes: 0 success, 1 input or parse error, 2 precondition violated,
// 3 class degree search ended uncertified.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace classdeg
