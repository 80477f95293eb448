// Copyright 2026 The tnroute Authors
//
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


// JSON encodings of problems, solutions and job reassignment instances.

#ifndef TNROUTE_IO_HPP_
#define TNROUTE_IO_HPP_

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "tnroute/jrp.hpp"
#include "tnroute/problem.hpp"

namespace tnroute {

// Malformed input document; `path` names the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error((path.empty() ? std::string("<root>") : path) +
                           ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Problem document:
//   {n_nodes, n_steps?, variant?, returning?, fixed_start?, fixed_end?,
//    costs: {step | per_step, linear?, forbidden?, linear_forbidden?,
//            pinned?, memory?},
//    bounds?, groups?, precedence?, memory_depth?}
TourProblem problem_from_json(const nlohmann::json& doc);
nlohmann::json problem_to_json(const TourProblem& problem);

struct SolutionFormat {
  bool timings = false;  // wall-clock fields break byte-identical output
};
nlohmann::json solution_to_json(const TourProblem& problem,
                                const Solution& solution,
                                const SolutionFormat& format = {});

// JRP document:
//   {workers, vacancies,
//    qualities: {current: [J], vacancy: [I]},
//    affinities: {current: [J], vacancy: [[J] x I]},
//    factors?: {quality, affinity}}
JrpInstance jrp_from_json(const nlohmann::json& doc);
nlohmann::json jrp_to_json(const JrpInstance& inst);
nlohmann::json assignment_to_json(const JrpAssignment& a);

// Reads and parses a file ("-" for stdin); parse errors become SchemaError.
nlohmann::json read_json_file(const std::string& path);

}  // namespace tnroute

#endif  // TNROUTE_IO_HPP_
