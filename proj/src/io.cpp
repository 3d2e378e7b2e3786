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

#include "rislab/io.hpp"

#include "rislab/errors.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include <unistd.h>

namespace rislab
{
void write_file_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &writer)
{
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError(path.string() + ": cannot open for writing");
        try
        {
            writer(out);
        }
        catch (...)
        {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw;
        }
        out.flush();
        if (!out)
        {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError(path.string() + ": write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
    {
        fs::remove(tmp, ec);
        throw DataError(path.string() + ": cannot replace file");
    }
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace
{
std::vector<std::string> split_fields(const std::string &line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
    {
        const auto a = field.find_first_not_of(" \t\r");
        const auto b = field.find_last_not_of(" \t\r");
        fields.push_back(a == std::string::npos ? std::string() : field.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

template <typename T>
bool parse_number(const std::string &s, T &value)
{
    const char *begin = s.data();
    const char *end = begin + s.size();
    if (begin != end && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end;
}

bool blank(const std::string &line) { return line.find_first_not_of(" \t\r") == std::string::npos; }
} // namespace

MatrixXcd read_complex_matrix_csv(std::istream &in, const std::string &source)
{
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::map<std::pair<Index, Index>, Complex<double>> entries;
    Index side = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (blank(line))
            continue;
        const std::vector<std::string> f = split_fields(line);
        if (!header)
        {
            if (f != std::vector<std::string>{"row", "col", "re", "im"})
                throw ParseError(source, line_no, "expected header 'row,col,re,im'");
            header = true;
            continue;
        }
        if (f.size() != 4)
            throw ParseError(source, line_no, "expected four fields");
        long long r = 0, c = 0;
        double re = 0, im = 0;
        if (!parse_number(f[0], r) || !parse_number(f[1], c) || r < 0 || c < 0)
            throw ParseError(source, line_no, "row and col must be non-negative integers");
        if (!parse_number(f[2], re) || !parse_number(f[3], im) || !std::isfinite(re) || !std::isfinite(im))
            throw ParseError(source, line_no, "re and im must be finite numbers");
        if (!entries.emplace(std::pair<Index, Index>(r, c), Complex<double>(re, im)).second)
            throw ParseError(source, line_no, "duplicate entry");
        side = std::max<Index>(side, std::max<Index>(r, c) + 1);
    }
    if (!header)
        throw ParseError(source, line_no, "empty matrix file");
    if (side == 0)
        throw InvalidData(source + ": matrix has no entries");
    MatrixXcd m = MatrixXcd::Zero(side, side);
    for (const auto &[rc, v] : entries)
        m(rc.first, rc.second) = v;
    return m;
}

void write_complex_matrix_csv(std::ostream &out, const MatrixXcd &m)
{
    out << "row,col,re,im\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
            out << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
}

} // namespace rislab
