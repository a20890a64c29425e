#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace khess::cli {

/// Bad or missing flags; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Output file problems; exit code 7.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::vector<std::string> argv;

  std::optional<int> n;
  std::optional<int> k;
  std::optional<double> q;
  std::optional<double> kappa;
  std::optional<double> gamma;
  std::optional<double> smax;
  std::optional<double> rtol;
  std::optional<double> atol;
  std::string out;
  unsigned jobs = 1;

  std::vector<double> gammas;
  std::vector<double> range;
  bool geometric = false;

  std::string family = "exact-k1";
  double C = 1.0;
  double mu = 1.0;
  int points = 50;

  std::vector<double> ps;
  std::vector<double> times;
  std::optional<double> epsilon;

  std::vector<double> qs;
};

int cmd_exponents(const Options& o);
int cmd_profile(const Options& o);
int cmd_classify(const Options& o);
int cmd_shoot(const Options& o);
int cmd_sweep(const Options& o);
int cmd_oracle(const Options& o);
int cmd_selfsim(const Options& o);
int cmd_table1(const Options& o);

}  // namespace khess::cli
