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

#include "rislab/types.hpp"

#include <filesystem>
#include <functional>
#include <istream>
#include <ostream>
#include <string>

namespace rislab
{
// Writes through a temporary file in the same directory, then renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &writer);

std::string read_file(const std::filesystem::path &path);

// Complex matrix CSV with header row,col,re,im. Entries not listed are zero.
// The matrix is square with side 1 + the largest index seen.
MatrixXcd read_complex_matrix_csv(std::istream &in, const std::string &source);
void write_complex_matrix_csv(std::ostream &out, const MatrixXcd &m);

} // namespace rislab
