#pragma once

// Shared test helpers: fixture paths, scratch directories and LP generators.

#include <chrono>
#include <filesystem>
#include <random>
#include <string>

#include "agriopt/model.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(AGRIOPT_FIXTURES) / name; }

/// Fresh empty directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("agriopt_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Copies a fixture bundle into `dst` so a test can corrupt it.
inline void copy_fixture(const std::string& name, const std::filesystem::path& dst) {
  std::filesystem::copy(fixture(name), dst, std::filesystem::copy_options::recursive);
}

/// Up to 6 variables and 6 rows, integer coefficients and rhs in [-9, 9],
/// random relations and sense, x >= 0.
inline agriopt::LpProblem random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 6), coef(-9, 9), rel(0, 5), coin(0, 1);
  agriopt::LpProblem p;
  p.sense = coin(rng) ? agriopt::Sense::maximize : agriopt::Sense::minimize;
  const int n = dim(rng), m = dim(rng);
  for (int j = 0; j < n; ++j) p.add_variable("x" + std::to_string(j), coef(rng));
  for (int i = 0; i < m; ++i) {
    std::vector<double> a(n);
    for (auto& v : a) v = coef(rng);
    const int r = rel(rng);
    const auto relation = r < 3 ? agriopt::Relation::less_equal
                          : r < 5 ? agriopt::Relation::greater_equal
                                  : agriopt::Relation::equal;
    p.add_constraint(a, relation, coef(rng), "r" + std::to_string(i));
  }
  return p;
}

/// Beale's cycling example: min -3/4 x4 + 20 x5 - 1/2 x6 + 6 x7.
/// Optimum -5/4 at x4 = 1, x6 = 1.
inline agriopt::LpProblem beale_lp() {
  agriopt::LpProblem p;
  p.sense = agriopt::Sense::minimize;
  p.add_variable("x4", -0.75);
  p.add_variable("x5", 20.0);
  p.add_variable("x6", -0.5);
  p.add_variable("x7", 6.0);
  p.add_constraint({0.25, -8.0, -1.0, 9.0}, agriopt::Relation::less_equal, 0.0, "r1");
  p.add_constraint({0.5, -12.0, -0.5, 3.0}, agriopt::Relation::less_equal, 0.0, "r2");
  p.add_constraint({0.0, 0.0, 1.0, 0.0}, agriopt::Relation::less_equal, 1.0, "r3");
  return p;
}

}  // namespace testing
