// SPDX-License-Identifier: Apache-2.0
//
// ris-lab: mutual coupling models for RIS-aided links
// Copyright (C) 2026 The ris-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <ostream>

namespace rislab
{
// Exit codes of the ris-lab tool.
enum ExitCode : int
{
    kExitOk = 0,
    kExitUsage = 2,     // bad flags or configuration
    kExitNumerical = 3, // singular, ill-conditioned or unconverged computation
    kExitData = 4       // unreadable or malformed input file
};

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace rislab
