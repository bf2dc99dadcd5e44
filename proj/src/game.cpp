#include "qos/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qos/errors.hpp"

namespace qos {
namespace {

void CheckDimensions(int num_users, int num_channels) {
  if (num_users < 1) throw DomainError("need at least one player");
  if (num_channels < 1) throw DomainError("need at least one channel");
}

}  // namespace

RateSpec::RateSpec(int num_users, int num_channels, std::vector<double> mean_rate,
                   std::vector<std::uint8_t> available, Contention contention,
                   std::vector<double> table)
    : num_users_(num_users),
      num_channels_(num_channels),
      mean_rate_(std::move(mean_rate)),
      available_(std::move(available)),
      contention_(contention),
      table_(std::move(table)) {
  CheckDimensions(num_users_, num_channels_);
  const auto cells = static_cast<std::size_t>(num_users_) * num_channels_;
  if (mean_rate_.size() != cells || available_.size() != cells) {
    throw DomainError("rate spec expects " + std::to_string(cells) +
                      " (user, channel) entries");
  }
  for (std::size_t i = 0; i < cells; ++i) {
    if (available_[i] > 1) throw DomainError("availability flags must be 0 or 1");
    if (available_[i] == 1 && !(mean_rate_[i] > 0.0)) {
      throw DomainError("mean rate must be positive on an available channel");
    }
  }
  if (contention_ == Contention::kTabulated) {
    if (table_.size() < static_cast<std::size_t>(num_users_)) {
      throw DomainError("tabulated contention needs one entry per congestion level 1..N");
    }
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (!(table_[i] >= 0.0)) throw DomainError("contention table entries must be >= 0");
      if (i > 0 && table_[i] > table_[i - 1]) {
        throw DomainError("contention table must be non-increasing");
      }
    }
  } else if (!table_.empty()) {
    throw DomainError("contention table given for a closed-form contention kind");
  }
}

RateSpec RateSpec::PerChannel(int num_users, std::span<const double> channel_rates,
                              Contention contention) {
  const int num_channels = static_cast<int>(channel_rates.size());
  CheckDimensions(num_users, num_channels);
  std::vector<double> rates;
  rates.reserve(static_cast<std::size_t>(num_users) * num_channels);
  for (int n = 0; n < num_users; ++n) {
    rates.insert(rates.end(), channel_rates.begin(), channel_rates.end());
  }
  std::vector<std::uint8_t> avail(rates.size(), 1);
  return RateSpec(num_users, num_channels, std::move(rates), std::move(avail), contention);
}

int RateSpec::index(int n, int c) const {
  if (n < 0 || n >= num_users_) throw DomainError("user index out of range");
  if (c < 1 || c > num_channels_) throw DomainError("channel index out of range");
  return n * num_channels_ + (c - 1);
}

double RateSpec::mean_rate(int n, int c) const { return mean_rate_[index(n, c)]; }

bool RateSpec::available(int n, int c) const { return available_[index(n, c)] != 0; }

double RateSpec::contention_factor(int congestion) const {
  if (congestion < 1) {
    throw DomainError("rate is only defined on an occupied channel (congestion >= 1)");
  }
  switch (contention_) {
    case Contention::kTdma:
      return 1.0 / congestion;
    case Contention::kConstant:
      return 1.0;
    case Contention::kTabulated:
      if (static_cast<std::size_t>(congestion) > table_.size()) {
        throw DomainError("congestion beyond contention table");
      }
      return table_[congestion - 1];
  }
  return 0.0;
}

double ShannonCapacity(double bandwidth, double power, double gain, double noise) {
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
  if (!(noise > 0.0)) throw DomainError("noise power must be positive");
  if (power < 0.0 || gain < 0.0) throw DomainError("power and gain must be non-negative");
  return bandwidth * std::log2(1.0 + power * gain / noise);
}

double Rate(const RateSpec& spec, int n, int c, int congestion) {
  const double g = spec.contention_factor(congestion);
  if (!spec.available(n, c)) return 0.0;
  // B / I directly rather than B * (1/I), so that exact ties stay exact.
  if (spec.contention() == Contention::kTdma) return spec.mean_rate(n, c) / congestion;
  return spec.mean_rate(n, c) * g;
}

int DeriveThreshold(const RateSpec& spec, int n, int c, double demand, int num_players) {
  if (!(demand >= 0.0)) throw DomainError("demand must be non-negative");
  if (num_players < 1) throw DomainError("need at least one player");
  const int always = num_players + 1;

  if (spec.available(n, c) && spec.contention() == Contention::kTdma) {
    // B / I >= D  <=>  I <= B / D. floor(B / D) is only a first guess; nudge it
    // with the same comparison Rate() makes so rounding cannot split the two.
    if (demand == 0.0) return always;
    if (Rate(spec, n, c, num_players) > demand) return always;
    const double ratio = spec.mean_rate(n, c) / demand;
    int t = ratio >= num_players ? num_players : static_cast<int>(std::floor(std::max(0.0, ratio)));
    while (t < num_players && Rate(spec, n, c, t + 1) >= demand) ++t;
    while (t > 0 && Rate(spec, n, c, t) < demand) --t;
    return t;
  }

  bool always_above = true;
  int last_met = 0;
  for (int congestion = 1; congestion <= num_players; ++congestion) {
    const double q = Rate(spec, n, c, congestion);
    if (q >= demand) last_met = congestion;
    if (!(q > demand)) always_above = false;
  }
  return always_above ? always : last_met;
}

Game::Game(int num_players, int num_channels, std::vector<int> thresholds)
    : num_players_(num_players), num_channels_(num_channels), thresholds_(std::move(thresholds)) {
  CheckDimensions(num_players_, num_channels_);
  if (thresholds_.size() != static_cast<std::size_t>(num_players_) * num_channels_) {
    throw DomainError("threshold matrix must be " + std::to_string(num_players_) + " x " +
                      std::to_string(num_channels_));
  }
  for (int& t : thresholds_) t = std::clamp(t, 0, num_players_ + 1);
}

Game Game::FromRows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw DomainError("need at least one player");
  const std::size_t width = rows.front().size();
  std::vector<int> flat;
  for (const auto& row : rows) {
    if (row.size() != width) throw DomainError("threshold rows have unequal lengths");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Game(static_cast<int>(rows.size()), static_cast<int>(width), std::move(flat));
}

Game Game::HomogeneousChannels(std::span<const int> per_player, int num_channels) {
  std::vector<int> flat;
  for (int t : per_player) flat.insert(flat.end(), static_cast<std::size_t>(std::max(num_channels, 0)), t);
  return Game(static_cast<int>(per_player.size()), num_channels, std::move(flat));
}

Game Game::HomogeneousUsers(int num_players, std::span<const int> per_channel) {
  std::vector<int> flat;
  for (int n = 0; n < num_players; ++n) flat.insert(flat.end(), per_channel.begin(), per_channel.end());
  return Game(num_players, static_cast<int>(per_channel.size()), std::move(flat));
}

std::vector<std::vector<int>> Game::rows() const {
  std::vector<std::vector<int>> out(num_players_);
  for (int n = 0; n < num_players_; ++n) {
    auto first = thresholds_.begin() + static_cast<std::ptrdiff_t>(n) * num_channels_;
    out[n].assign(first, first + num_channels_);
  }
  return out;
}

int Game::max_threshold() const { return *std::max_element(thresholds_.begin(), thresholds_.end()); }

int Game::min_threshold() const { return *std::min_element(thresholds_.begin(), thresholds_.end()); }

bool Game::has_homogeneous_channels() const {
  for (int n = 0; n < num_players_; ++n) {
    for (int c = 2; c <= num_channels_; ++c) {
      if (threshold(n, c) != threshold(n, 1)) return false;
    }
  }
  return true;
}

bool Game::has_homogeneous_users() const {
  for (int n = 1; n < num_players_; ++n) {
    for (int c = 1; c <= num_channels_; ++c) {
      if (threshold(n, c) != threshold(0, c)) return false;
    }
  }
  return true;
}

Game BuildGame(const RateSpec& spec, std::span<const double> demands) {
  if (demands.size() != static_cast<std::size_t>(spec.num_users())) {
    throw DomainError("expected " + std::to_string(spec.num_users()) + " demands, got " +
                      std::to_string(demands.size()));
  }
  const int n_players = spec.num_users();
  std::vector<int> thresholds;
  thresholds.reserve(static_cast<std::size_t>(n_players) * spec.num_channels());
  for (int n = 0; n < n_players; ++n) {
    for (int c = 1; c <= spec.num_channels(); ++c) {
      thresholds.push_back(DeriveThreshold(spec, n, c, demands[n], n_players));
    }
  }
  return Game(n_players, spec.num_channels(), std::move(thresholds));
}

void ValidateProfile(const Game& game, const Profile& profile) {
  if (profile.size() != static_cast<std::size_t>(game.num_players())) {
    throw DomainError("profile has " + std::to_string(profile.size()) + " entries, game has " +
                      std::to_string(game.num_players()) + " players");
  }
  for (int s : profile) {
    if (s < 0 || s > game.num_channels()) {
      throw DomainError("strategy " + std::to_string(s) + " outside 0.." +
                        std::to_string(game.num_channels()));
    }
  }
}

int Congestion(const Profile& profile, int c) {
  return static_cast<int>(std::count(profile.begin(), profile.end(), c));
}

std::vector<int> ChannelLoads(const Profile& profile, int num_channels) {
  std::vector<int> loads(static_cast<std::size_t>(num_channels) + 1, 0);
  for (int s : profile) ++loads[s];
  return loads;
}

int Utility(const Game& game, const Profile& profile, int n) {
  const int c = profile[n];
  if (c == kDormant) return 0;
  return Congestion(profile, c) <= game.threshold(n, c) ? 1 : -1;
}

int Welfare(const Game& game, const Profile& profile) {
  const auto loads = ChannelLoads(profile, game.num_channels());
  int total = 0;
  for (int n = 0; n < game.num_players(); ++n) {
    const int c = profile[n];
    if (c != kDormant) total += loads[c] <= game.threshold(n, c) ? 1 : -1;
  }
  return total;
}

int SatisfiedCount(const Game& game, const Profile& profile) {
  const auto loads = ChannelLoads(profile, game.num_channels());
  int count = 0;
  for (int n = 0; n < game.num_players(); ++n) {
    const int c = profile[n];
    if (c != kDormant && loads[c] <= game.threshold(n, c)) ++count;
  }
  return count;
}

bool IsNatural(const Game& game, const Profile& profile) {
  const auto loads = ChannelLoads(profile, game.num_channels());
  for (int n = 0; n < game.num_players(); ++n) {
    const int c = profile[n];
    if (c != kDormant && loads[c] > game.threshold(n, c)) return false;
  }
  return true;
}

}  // namespace qos
