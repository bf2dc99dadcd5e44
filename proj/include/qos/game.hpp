#pragma once

// QoS satisfaction games in interference-threshold form.
//
// Indexing conventions used throughout the library:
//   * players are 0-based: 0 .. N-1
//   * channels are 1-based: 1 .. C, and strategy 0 is the dormant state
//     (transmitter off). A Profile therefore holds values in {0, 1, .., C}.

#include <cstdint>
#include <span>
#include <vector>

namespace qos {

using Profile = std::vector<int>;

inline constexpr int kDormant = 0;

enum class Contention {
  kTdma,       // g(I) = 1 / I
  kConstant,   // g(I) = 1
  kTabulated,  // g(I) = table[I - 1], caller supplied, non-increasing
};

// Per (user, channel) physical rate model: Q(I) = theta * B * g(I).
class RateSpec {
 public:
  // `mean_rate` and `available` are row-major num_users x num_channels.
  RateSpec(int num_users, int num_channels, std::vector<double> mean_rate,
           std::vector<std::uint8_t> available,
           Contention contention = Contention::kTdma,
           std::vector<double> table = {});

  // Every user sees the same mean rate on a channel, all channels available.
  static RateSpec PerChannel(int num_users, std::span<const double> channel_rates,
                             Contention contention = Contention::kTdma);

  int num_users() const { return num_users_; }
  int num_channels() const { return num_channels_; }
  Contention contention() const { return contention_; }
  const std::vector<double>& table() const { return table_; }

  // c is 1-based.
  double mean_rate(int n, int c) const;
  bool available(int n, int c) const;

  // g(I) for I >= 1.
  double contention_factor(int congestion) const;

 private:
  int index(int n, int c) const;

  int num_users_;
  int num_channels_;
  std::vector<double> mean_rate_;
  std::vector<std::uint8_t> available_;
  Contention contention_;
  std::vector<double> table_;
};

// W log2(1 + zeta z / omega).
double ShannonCapacity(double bandwidth, double power, double gain, double noise);

// Data rate of user n on channel c when `congestion` users contend for it.
double Rate(const RateSpec& spec, int n, int c, int congestion);

// Largest congestion at which user n still meets `demand` on channel c,
// with sentinels 0 (never met) and N+1 (met even with all N users present).
// Guarantees Rate(I) >= demand <=> I <= threshold for I in 1..N.
int DeriveThreshold(const RateSpec& spec, int n, int c, double demand, int num_players);

class Game {
 public:
  // `thresholds` is row-major num_players x num_channels; values are clamped
  // to [0, num_players + 1].
  Game(int num_players, int num_channels, std::vector<int> thresholds);

  static Game FromRows(const std::vector<std::vector<int>>& rows);
  // T_n^c = per_player[n] for every channel.
  static Game HomogeneousChannels(std::span<const int> per_player, int num_channels);
  // T_n^c = per_channel[c - 1] for every player.
  static Game HomogeneousUsers(int num_players, std::span<const int> per_channel);

  int num_players() const { return num_players_; }
  int num_channels() const { return num_channels_; }
  int threshold(int n, int c) const {
    return thresholds_[static_cast<std::size_t>(n) * num_channels_ + (c - 1)];
  }
  const std::vector<int>& thresholds() const { return thresholds_; }
  std::vector<std::vector<int>> rows() const;

  int max_threshold() const;
  int min_threshold() const;
  bool has_homogeneous_channels() const;
  bool has_homogeneous_users() const;

  bool operator==(const Game&) const = default;

 private:
  int num_players_;
  int num_channels_;
  std::vector<int> thresholds_;
};

// Thresholds derived element-wise from rates and per-user demands.
Game BuildGame(const RateSpec& spec, std::span<const double> demands);

// Throws DomainError on wrong length or out-of-range strategies.
void ValidateProfile(const Game& game, const Profile& profile);

// Number of players on channel c.
int Congestion(const Profile& profile, int c);
// loads[c] = Congestion(profile, c) for c in 0..num_channels (index 0 counts
// dormant players).
std::vector<int> ChannelLoads(const Profile& profile, int num_channels);

// +1 satisfied, 0 dormant, -1 suffering.
int Utility(const Game& game, const Profile& profile, int n);
int Welfare(const Game& game, const Profile& profile);
int SatisfiedCount(const Game& game, const Profile& profile);
bool IsNatural(const Game& game, const Profile& profile);

}  // namespace qos
