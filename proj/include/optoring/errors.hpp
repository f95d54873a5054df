// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace optoring {

/// An iterative solve failed to reach its tolerance. Carries the last
/// residual so callers can report how close the solve got.
class solver_error : public std::runtime_error {
 public:
  solver_error(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// A steady state was requested for a dynamically unstable configuration.
/// Carries the offending mode indices (k-grid indices on a ring, empty when
/// instability was detected spectrally on the full drift matrix).
class instability_error : public std::runtime_error {
 public:
  explicit instability_error(const std::string& what, std::vector<int> unstable_modes = {})
      : std::runtime_error(what), unstable_modes_(std::move(unstable_modes)) {}
  const std::vector<int>& unstable_modes() const noexcept { return unstable_modes_; }

 private:
  std::vector<int> unstable_modes_;
};

/// A direct linear-algebra step produced a result outside its certified
/// accuracy (singular factorization, residual above tolerance).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration file failed to parse or validate. Carries the offending
/// file so CLI layers can prefix it to their diagnostics.
class config_error : public std::runtime_error {
 public:
  config_error(const std::string& what, std::string path)
      : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace optoring
