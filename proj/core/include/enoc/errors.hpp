/*
 Copyright 2026 The enoc authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef ENOC_ERRORS_HPP
#define ENOC_ERRORS_HPP

#include <limits>
#include <stdexcept>
#include <string>

namespace enoc {

// Rejected inputs: malformed distributions, dimension mismatches, bad solver
// options, inconsistent configuration files.  The message names the offending
// field or parameter.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical sweep aborted: a step produced a non-finite state, or a model
// right-hand side hit a guarded degeneracy (e.g. a vanishing denominator).
// `time()` and `step()` locate the failure on the integration grid; a
// negative step means the error was raised before grid context was attached.
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(const std::string& what,
                            double time = std::numeric_limits<double>::quiet_NaN(),
                            int step = -1)
      : std::runtime_error(what), time_(time), step_(step) {}

  double time() const noexcept { return time_; }
  int step() const noexcept { return step_; }

 private:
  double time_;
  int step_;
};

// Filesystem failures while writing run outputs (unwritable directory, failed
// stream).  The CLI maps this to its I/O exit code.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace enoc

#endif  // ENOC_ERRORS_HPP
