#include "fvlab/environment.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fvlab {

namespace {

void validate_rate_matrix(const std::vector<std::vector<double>>& q, std::size_t n) {
  if (q.size() != n) throw std::invalid_argument("rate matrix: wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i].size() != n) throw std::invalid_argument("rate matrix: not square");
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && q[i][j] < 0.0) {
        throw std::invalid_argument("rate matrix: negative off-diagonal entry");
      }
      sum += q[i][j];
    }
    if (std::abs(sum) > kSimplexTol) {
      throw std::invalid_argument("rate matrix: row " + std::to_string(i) + " sums to " +
                                  std::to_string(sum));
    }
  }
}

bool strongly_connected(const std::vector<std::vector<double>>& q) {
  const std::size_t n = q.size();
  auto reachable = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        double rate = transpose ? q[j][i] : q[i][j];
        if (i != j && rate > 0.0 && !seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reachable(false) && reachable(true);
}

int sample_categorical(std::span<const double> weights, double total, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, total);
  double x = unif(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (x < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace

EnvironmentPath::EnvironmentPath(std::vector<double> jump_times_in,
                                 std::vector<FitnessVector> values_in, double horizon_in)
    : jump_times(std::move(jump_times_in)), values(std::move(values_in)), horizon(horizon_in) {
  if (jump_times.empty() || jump_times.front() != 0.0) {
    throw std::invalid_argument("EnvironmentPath: first jump time must be 0");
  }
  if (jump_times.size() != values.size()) {
    throw std::invalid_argument("EnvironmentPath: times/values length mismatch");
  }
  for (std::size_t i = 1; i < jump_times.size(); ++i) {
    if (!(jump_times[i] > jump_times[i - 1])) {
      throw std::invalid_argument("EnvironmentPath: jump times not strictly increasing");
    }
  }
  if (!(horizon >= jump_times.back())) {
    throw std::invalid_argument("EnvironmentPath: horizon before last jump");
  }
  const int k = values.front().size();
  for (const auto& v : values) {
    if (v.size() != k) throw std::invalid_argument("EnvironmentPath: inconsistent allele count");
  }
}

const FitnessVector& EnvironmentPath::at(double t) const {
  if (!(t >= 0.0 && t <= horizon)) {
    throw std::invalid_argument("EnvironmentPath::at: time out of range");
  }
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  return values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

const FitnessVector& EnvironmentPath::left_limit(double t) const {
  if (!(t > 0.0 && t <= horizon)) {
    throw std::invalid_argument("EnvironmentPath::left_limit: time out of range");
  }
  auto it = std::lower_bound(jump_times.begin(), jump_times.end(), t);
  return values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

MarkovJumpEnvironment::MarkovJumpEnvironment(std::vector<FitnessVector> states_in,
                                             std::vector<std::vector<double>> rate_matrix_in,
                                             ProbVector initial_in)
    : states(std::move(states_in)),
      rate_matrix(std::move(rate_matrix_in)),
      initial(std::move(initial_in)) {
  if (states.empty()) throw std::invalid_argument("MarkovJumpEnvironment: no states");
  const int k = states.front().size();
  for (const auto& s : states) {
    if (s.size() != k) {
      throw std::invalid_argument("MarkovJumpEnvironment: inconsistent allele count");
    }
  }
  validate_rate_matrix(rate_matrix, states.size());
  if (initial.size() != static_cast<int>(states.size())) {
    throw std::invalid_argument("MarkovJumpEnvironment: initial distribution size mismatch");
  }
}

int environment_num_alleles(const EnvironmentProcess& proc) {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FitnessVector>) {
          return p.size();
        } else {
          return p.num_alleles();
        }
      },
      proc);
}

EnvironmentPath sample_path(const EnvironmentProcess& proc, double horizon,
                            std::mt19937_64& rng) {
  if (!(horizon > 0.0)) throw std::invalid_argument("sample_path: horizon must be positive");
  if (const auto* constant = std::get_if<FitnessVector>(&proc)) {
    return EnvironmentPath({0.0}, {*constant}, horizon);
  }
  if (const auto* schedule = std::get_if<EnvironmentPath>(&proc)) {
    if (schedule->horizon < horizon) {
      throw std::invalid_argument("sample_path: schedule ends before requested horizon");
    }
    std::vector<double> times;
    std::vector<FitnessVector> values;
    for (std::size_t i = 0; i < schedule->jump_times.size(); ++i) {
      if (schedule->jump_times[i] > horizon) break;
      times.push_back(schedule->jump_times[i]);
      values.push_back(schedule->values[i]);
    }
    return EnvironmentPath(std::move(times), std::move(values), horizon);
  }
  const auto& chain = std::get<MarkovJumpEnvironment>(proc);
  int state = sample_categorical(chain.initial.data(), 1.0, rng);
  std::vector<double> times{0.0};
  std::vector<FitnessVector> values{chain.states[static_cast<std::size_t>(state)]};
  double t = 0.0;
  while (true) {
    const auto& row = chain.rate_matrix[static_cast<std::size_t>(state)];
    const double hold_rate = -row[static_cast<std::size_t>(state)];
    if (hold_rate <= 0.0) break;  // absorbing state, e.g. an all-zero generator
    t += std::exponential_distribution<double>(hold_rate)(rng);
    if (t >= horizon) break;
    // embedded chain step
    std::vector<double> weights(row.size(), 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (static_cast<int>(j) != state) weights[j] = row[j];
    }
    state = sample_categorical(weights, hold_rate, rng);
    times.push_back(t);
    values.push_back(chain.states[static_cast<std::size_t>(state)]);
  }
  return EnvironmentPath(std::move(times), std::move(values), horizon);
}

ProbVector stationary_of_rate_matrix(const std::vector<std::vector<double>>& rate_matrix) {
  const int n = static_cast<int>(rate_matrix.size());
  validate_rate_matrix(rate_matrix, rate_matrix.size());
  if (n == 1) return ProbVector({1.0});
  if (!strongly_connected(rate_matrix)) {
    throw std::invalid_argument("stationary_of_rate_matrix: chain is not irreducible");
  }
  // Solve pi^T Q = 0 with the normalization row sum(pi) = 1.
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = rate_matrix[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
  }
  for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);
  double residual = 0.0;
  for (int j = 0; j < n; ++j) {
    double dot = 0.0;
    for (int i = 0; i < n; ++i) {
      dot += pi(i) * rate_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    residual = std::max(residual, std::abs(dot));
  }
  if (residual > 1e-10) {
    throw std::runtime_error("stationary_of_rate_matrix: residual " + std::to_string(residual));
  }
  std::vector<double> p(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    p[static_cast<std::size_t>(i)] = std::max(pi(i), 0.0);
    sum += p[static_cast<std::size_t>(i)];
  }
  for (double& x : p) x /= sum;
  return ProbVector(std::move(p));
}

ProbVector stationary_distribution(const MarkovJumpEnvironment& chain) {
  return stationary_of_rate_matrix(chain.rate_matrix);
}

MarkovJumpEnvironment stationary_started(const MarkovJumpEnvironment& chain) {
  return MarkovJumpEnvironment(chain.states, chain.rate_matrix, stationary_distribution(chain));
}

MarkovJumpEnvironment time_reversed(const MarkovJumpEnvironment& chain) {
  const ProbVector pi = stationary_distribution(chain);
  const std::size_t n = chain.states.size();
  std::vector<std::vector<double>> rev(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      rev[i][j] = pi[static_cast<int>(j)] * chain.rate_matrix[j][i] / pi[static_cast<int>(i)];
      diag += rev[i][j];
    }
    rev[i][i] = -diag;
  }
  return MarkovJumpEnvironment(chain.states, std::move(rev), pi);
}

void write_path(std::ostream& os, const EnvironmentPath& path) {
  os.precision(17);
  os << "# horizon " << path.horizon << "\n";
  for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
    os << path.jump_times[i];
    for (double w : path.values[i].data()) os << " " << w;
    os << "\n";
  }
}

EnvironmentPath read_path(std::istream& is) {
  std::vector<double> times;
  std::vector<FitnessVector> values;
  double horizon = -1.0;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "#") {
      std::string key;
      if (ls >> key && key == "horizon") ls >> horizon;
      continue;
    }
    times.push_back(std::stod(first));
    std::vector<double> w;
    double x;
    while (ls >> x) w.push_back(x);
    values.emplace_back(std::move(w));
  }
  if (times.empty()) throw std::invalid_argument("read_path: no rows");
  if (horizon < 0.0) horizon = times.back();
  return EnvironmentPath(std::move(times), std::move(values), horizon);
}

}  // namespace fvlab
