// Copyright 2026 The rydex Authors.
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

#ifndef RYDEX_ERROR_HPP
#define RYDEX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rydex {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class InvalidPairError : public Error {
 public:
  using Error::Error;
};

class DisorderSamplingError : public Error {
 public:
  using Error::Error;
};

class EmptySectorError : public Error {
 public:
  using Error::Error;
};

class EmptyPostSelectionError : public Error {
 public:
  EmptyPostSelectionError(const std::string& what, double probability)
      : Error(what), probability_(probability) {}
  double probability() const { return probability_; }

 private:
  double probability_;
};

/// Raised when |Delta_beta + V_ij| falls inside the facilitation guard band.
class FacilitationResonanceError : public Error {
 public:
  FacilitationResonanceError(const std::string& what, int site_i, int site_j)
      : Error(what), i_(site_i), j_(site_j) {}
  int site_i() const { return i_; }
  int site_j() const { return j_; }

 private:
  int i_;
  int j_;
};

class LargeDetuningError : public Error {
 public:
  using Error::Error;
};

class SingularDenominatorError : public Error {
 public:
  using Error::Error;
};

class StiffnessError : public Error {
 public:
  using Error::Error;
};

class DimensionCapError : public Error {
 public:
  using Error::Error;
};

class DegenerateBandError : public Error {
 public:
  DegenerateBandError(const std::string& what, int k_index, int phi_index)
      : Error(what), k_index_(k_index), phi_index_(phi_index) {}
  int k_index() const { return k_index_; }
  int phi_index() const { return phi_index_; }

 private:
  int k_index_;
  int phi_index_;
};

class DesignFailureError : public Error {
 public:
  DesignFailureError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace rydex

#endif  // RYDEX_ERROR_HPP
