#include "qos/solvers.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "qos/errors.hpp"

namespace qos {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / (g == 0 ? 1 : g);
  den_ = den / (g == 0 ? 1 : g);
}

std::string Rational::str() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering Rational::operator<=>(const Rational& other) const {
  // Cross-multiplication fits easily: numerators and denominators here are
  // bounded by player counts and thresholds.
  return num_ * other.den_ <=> other.num_ * den_;
}

std::uint64_t ProfileSpaceSize(int num_players, int num_channels) {
  const std::uint64_t base = static_cast<std::uint64_t>(num_channels) + 1;
  std::uint64_t size = 1;
  for (int i = 0; i < num_players; ++i) {
    if (size > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    size *= base;
  }
  return size;
}

void CheckSearchBudget(const Game& game, std::uint64_t budget) {
  const std::uint64_t size = ProfileSpaceSize(game.num_players(), game.num_channels());
  if (size > budget) {
    throw BudgetExceeded("search space (C+1)^N = " + std::to_string(game.num_channels() + 1) +
                         "^" + std::to_string(game.num_players()) + " = " +
                         (size == std::numeric_limits<std::uint64_t>::max() ? std::string("overflow")
                                                                            : std::to_string(size)) +
                         " exceeds budget " + std::to_string(budget));
  }
}

Algorithm1Run Algorithm1Detailed(const Game& game) {
  if (!game.has_homogeneous_channels()) {
    throw PreconditionError(
        "Algorithm 1 requires homogeneous channels (T_n^c equal across c for every user n)");
  }
  const int num_players = game.num_players();
  const int num_channels = game.num_channels();

  Algorithm1Run run;
  run.order.resize(num_players);
  std::iota(run.order.begin(), run.order.end(), 0);
  std::stable_sort(run.order.begin(), run.order.end(), [&](int a, int b) {
    return game.threshold(a, 1) > game.threshold(b, 1);
  });

  Profile x(num_players, kDormant);
  std::vector<int> load(num_channels + 1, 0);
  run.iterates.push_back(x);
  for (int n : run.order) {
    const int t = game.threshold(n, 1);
    int chosen = 0;
    for (int c = 1; c <= num_channels; ++c) {
      if (load[c] < t) {
        chosen = c;
        break;
      }
    }
    if (chosen != 0) {
      x[n] = chosen;
      ++load[chosen];
    }
    run.full.push_back(chosen == 0);
    run.iterates.push_back(x);
  }
  run.result = std::move(x);
  return run;
}

Profile Algorithm1(const Game& game) { return Algorithm1Detailed(game).result; }

Profile RoundRobinProfile(int num_players, int num_channels) {
  if (num_players < 1 || num_channels < 1) throw DomainError("need N >= 1 and C >= 1");
  Profile x(num_players);
  for (int i = 0; i < num_players; ++i) x[i] = 1 + (i + 1) % num_channels;
  return x;
}

namespace {

// Depth-first search over natural profiles. A channel's occupants are all
// satisfied iff its load does not exceed the smallest threshold among them.
class OptimumSearch {
 public:
  explicit OptimumSearch(const Game& game)
      : game_(game),
        x_(game.num_players(), kDormant),
        load_(game.num_channels() + 1, 0),
        min_threshold_(game.num_channels() + 1, std::numeric_limits<int>::max()) {}

  OptimumResult Run() {
    best_.welfare = 0;
    best_.witness = x_;  // all-dormant, welfare 0
    Visit(0, 0);
    return best_;
  }

 private:
  void Visit(int n, int satisfied) {
    const int remaining = game_.num_players() - n;
    if (remaining == 0) {
      if (satisfied > best_.welfare) {
        best_.welfare = satisfied;
        best_.witness = x_;
      }
      return;
    }
    if (satisfied + remaining <= best_.welfare) return;

    Visit(n + 1, satisfied);  // n dormant
    for (int c = 1; c <= game_.num_channels(); ++c) {
      const int t = game_.threshold(n, c);
      const int new_load = load_[c] + 1;
      if (new_load > t || new_load > min_threshold_[c]) continue;
      const int saved_min = min_threshold_[c];
      x_[n] = c;
      load_[c] = new_load;
      min_threshold_[c] = std::min(saved_min, t);
      Visit(n + 1, satisfied + 1);
      x_[n] = kDormant;
      load_[c] = new_load - 1;
      min_threshold_[c] = saved_min;
      if (satisfied + remaining <= best_.welfare) return;
    }
  }

  const Game& game_;
  Profile x_;
  std::vector<int> load_;
  std::vector<int> min_threshold_;
  OptimumResult best_;
};

// Advances `x` to the next profile in lexicographic order; false after the last.
bool NextProfile(Profile& x, int num_channels) {
  for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) {
    if (x[i] < num_channels) {
      ++x[i];
      return true;
    }
    x[i] = 0;
  }
  return false;
}

}  // namespace

OptimumResult BruteForceOptimum(const Game& game, std::uint64_t budget) {
  CheckSearchBudget(game, budget);
  return OptimumSearch(game).Run();
}

bool IsPureNashComplete(const Game& game, const Profile& profile) {
  const auto load = ChannelLoads(profile, game.num_channels());
  for (int n = 0; n < game.num_players(); ++n) {
    const int s = profile[n];
    if (s != kDormant) {
      if (load[s] > game.threshold(n, s)) return false;  // suffering
      continue;
    }
    for (int c = 1; c <= game.num_channels(); ++c) {
      if (load[c] + 1 <= game.threshold(n, c)) return false;  // dormant, could join c
    }
  }
  return true;
}

std::vector<Profile> EnumeratePne(const Game& game, std::uint64_t budget) {
  CheckSearchBudget(game, budget);
  std::vector<Profile> out;
  Profile x(game.num_players(), kDormant);
  do {
    if (IsPureNashComplete(game, x)) out.push_back(x);
  } while (NextProfile(x, game.num_channels()));
  return out;
}

Rational PoaBound(const Game& game) {
  const std::int64_t n = game.num_players();
  const std::int64_t tmin = game.min_threshold();
  const std::int64_t tmax = game.max_threshold();
  if (tmin == 0) return Rational(n);
  return std::min(Rational(n), Rational(tmax, tmin));
}

PoaReport PriceOfAnarchy(const Game& game, std::uint64_t budget) {
  const OptimumResult optimum = BruteForceOptimum(game, budget);
  const auto equilibria = EnumeratePne(game, budget);
  if (equilibria.empty()) {
    throw InvariantViolation("no pure Nash equilibrium found; the finite improvement property guarantees one");
  }
  PoaReport report;
  report.optimum_welfare = optimum.welfare;
  report.optimum_witness = optimum.witness;
  report.pne_count = equilibria.size();
  report.worst_pne_welfare = std::numeric_limits<int>::max();
  report.best_pne_welfare = std::numeric_limits<int>::min();
  for (const auto& x : equilibria) {
    const int w = Welfare(game, x);
    if (w < report.worst_pne_welfare) {
      report.worst_pne_welfare = w;
      report.worst_pne = x;
    }
    report.best_pne_welfare = std::max(report.best_pne_welfare, w);
  }
  if (report.worst_pne_welfare <= 0) {
    throw PreconditionError(
        "PoA undefined: the worst pure Nash equilibrium has welfare " +
        std::to_string(report.worst_pne_welfare) +
        " (division by zero); the PoA bound assumes T_n^c >= 1 for every user and channel");
  }
  report.poa = Rational(report.optimum_welfare, report.worst_pne_welfare);
  report.bound = PoaBound(game);
  return report;
}

HomogeneousUsersCheck VerifyHomogeneousUsers(const Game& game, const Profile& profile,
                                             int optimum_welfare) {
  if (!game.has_homogeneous_users()) {
    throw PreconditionError(
        "homogeneous users required (T_n^c equal across users n for every channel c)");
  }
  ValidateProfile(game, profile);
  if (optimum_welfare < 0) optimum_welfare = BruteForceOptimum(game).welfare;

  int capacity = 0;
  for (int c = 1; c <= game.num_channels(); ++c) capacity += game.threshold(0, c);

  HomogeneousUsersCheck check;
  check.is_pne = IsPureNashComplete(game, profile);
  check.is_canonical_count = IsNatural(game, profile) &&
                             SatisfiedCount(game, profile) == std::min(game.num_players(), capacity);
  check.is_optimum = Welfare(game, profile) == optimum_welfare;
  return check;
}

}  // namespace qos
