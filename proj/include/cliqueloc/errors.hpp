// Copyright 2026 The cliqueloc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace cliqueloc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point cloud too small or rank deficient to fit an oriented box.
class DegenerateCloud : public Error {
 public:
  using Error::Error;
};

/// Correspondence geometry leaves the rotation unobservable (collinear points).
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class InsufficientPairs : public Error {
 public:
  using Error::Error;
};

/// No maximal clique large enough to define a 6-DoF pose.
class EmptyHypothesisSet : public Error {
 public:
  using Error::Error;
};

class NoSolvableHypothesis : public Error {
 public:
  using Error::Error;
};

/// RANSAC/PROSAC never found a consensus set of minimal size.
class NoConsensus : public Error {
 public:
  using Error::Error;
};

/// Raised only when the similarity relies exclusively on embeddings (alpha = 1)
/// and a landmark has none.
class MissingEmbedding : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `where()` names the file and the offending field or line.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace cliqueloc
