// Copyright 2026 The fuzzyref Authors.
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

#ifndef FUZZYREF_CLI_H_
#define FUZZYREF_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace fuzzyref {

// Entry point of the fuzzyref tool. Returns 0 on success, 1 on a domain error
// and 2 on a usage error. Machine output goes to `out` (or --out), diagnostics
// to `err`; `in` is read when an input file flag is omitted.
int RunCli(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err);

}  // namespace fuzzyref

#endif  // FUZZYREF_CLI_H_
