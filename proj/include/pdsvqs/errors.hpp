// Copyright 2026 The pdsvqs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PDSVQS_ERRORS_HPP
#define PDSVQS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pdsvqs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: shapes, indices, names, file contents.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class PowerLimitExceeded : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ParseError : public InvalidArgument {
 public:
  ParseError(int line, const std::string& what)
      : InvalidArgument("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Numerical failures raised by the solver path.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonHermitian : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularMoments : public NumericalError {
 public:
  SingularMoments(const std::string& what, double rcond)
      : NumericalError(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

class ComplexRoots : public NumericalError {
 public:
  ComplexRoots(const std::string& what, double residue)
      : NumericalError(what), residue_(residue) {}
  double residue() const { return residue_; }

 private:
  double residue_;
};

class VanishingDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pdsvqs

#endif  // PDSVQS_ERRORS_HPP
