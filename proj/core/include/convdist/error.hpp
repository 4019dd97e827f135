// Copyright 2026 The convdist Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace convdist {

// Input violates an operation's precondition (mismatched grids, bad
// parameters, unnormalized masses, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A configured resource budget (grid cells, support points) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& budget_name, std::size_t budget, std::size_t requested)
      : std::runtime_error(budget_name + " exceeded: requested " + std::to_string(requested) +
                           ", budget " + std::to_string(budget)),
        budget_(budget),
        requested_(requested) {}

  std::size_t budget() const { return budget_; }
  std::size_t requested() const { return requested_; }

 private:
  std::size_t budget_;
  std::size_t requested_;
};

// Floating-point result failed a sanity check (e.g. FFT ringing produced more
// negative mass than tolerated).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace convdist
