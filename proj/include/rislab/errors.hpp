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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rislab
{
// Caller passed a value outside an operation's contract.
class InvalidArgument : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// Floating-point failures: singular systems, unconverged quadrature, and so on.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class SingularityError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

class ConditioningError : public NumericalError
{
  public:
    ConditioningError(const std::string &what, double condition_estimate)
        : NumericalError(what + " (condition estimate " + std::to_string(condition_estimate) + ")"),
          condition_estimate_(condition_estimate)
    {
    }

    double condition_estimate() const noexcept { return condition_estimate_; }

  private:
    double condition_estimate_;
};

class AccuracyError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

class DegeneratePattern : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

// Problems with externally supplied data files.
class DataError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public DataError
{
  public:
    ParseError(const std::string &source, std::size_t line, const std::string &what)
        : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class InvalidData : public DataError
{
  public:
    using DataError::DataError;
};

class DegenerateData : public DataError
{
  public:
    using DataError::DataError;
};

// Scenario configuration failed validation. key() names the offending entry.
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(const std::string &key, const std::string &what)
        : std::runtime_error(key + ": " + what), key_(key)
    {
    }

    const std::string &key() const noexcept { return key_; }

  private:
    std::string key_;
};

} // namespace rislab
