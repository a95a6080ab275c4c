// SPDX-License-Identifier: Apache-2.0
//
// mffm - multi-frequency factorization imaging of pulsed moving sources
// Copyright (C) 2026 The mffm authors
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

#include <stdexcept>
#include <string>

namespace mffm
{

// Exception hierarchy. The CLI maps each family onto a process exit code.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Bad input: invalid configuration, dimension mismatch, out-of-domain argument.
class ConfigError : public Error
{
  public:
    using Error::Error;
};

// Non-convergence, degenerate data, empty indicator support.
class NumericalError : public Error
{
  public:
    using Error::Error;
};

class ConvergenceError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

// h(eta) is identically zero: no pulse instant can be located.
class NoSupportError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

class IoError : public Error
{
  public:
    using Error::Error;
};

// A --verify rerun produced outputs whose hashes differ from the recorded manifest.
class VerificationError : public Error
{
  public:
    using Error::Error;
};

} // namespace mffm
