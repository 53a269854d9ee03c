// Copyright 2026 the drcbm authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRCBM_ERROR_HPP
#define DRCBM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace drcbm {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when model assembly detects that no feasible plan can exist
// (e.g. a component with no admissible repair epoch).
class InfeasibleModelError : public Error {
 public:
  InfeasibleModelError(const std::string& what, int component)
      : Error(what), component_(component) {}
  int component() const { return component_; }

 private:
  int component_;
};

#define DRCBM_REQUIRE(cond, msg)          \
  do {                                    \
    if (!(cond)) throw ::drcbm::Error(msg); \
  } while (0)

}  // namespace drcbm

#endif  // DRCBM_ERROR_HPP
