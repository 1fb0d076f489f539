#ifndef READRANK_RANKER_HPP
#define READRANK_RANKER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "readrank/features.hpp"

namespace readrank {

// One scoreable item: qid groups the versions of a sentence; relevance is
// the reading level (higher = harder).
struct RankInstance {
  std::string qid;
  int relevance = 1;
  std::vector<double> x;
  std::string text;  // optional, kept for error reports
};

struct RankData {
  std::vector<std::string> schema;
  std::vector<RankInstance> items;

  static RankData from_matrix(const FeatureMatrix& m);
  RankData with_columns(const std::vector<std::size_t>& column_indices) const;
};

// Normalized (harder, simpler) feature arrays for one training constraint.
struct TrainedPair {
  std::vector<double> x_hard;
  std::vector<double> x_simple;
};

// Z-score normalizer fitted on training data; zero-variance features get
// std 1 so the transform stays defined.
struct Normalizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Normalizer fit(const std::vector<RankInstance>& items, std::size_t dim);
  std::vector<double> apply(const std::vector<double>& x) const;

  bool operator==(const Normalizer&) const = default;
};

enum class Algorithm { RankSvm, RankNet, RankBoost };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct TrainConfig {
  Algorithm algorithm = Algorithm::RankSvm;
  double lambda = 1e-3;
  double learning_rate = 0.01;
  int epochs = 100;
  int hidden_size = 10;
  int rounds = 100;
  std::uint64_t seed = 42;

  // Stable fingerprint carried into report headers.
  std::string config_hash() const;
};

struct LinearModel {
  std::vector<double> w;
  bool operator==(const LinearModel&) const = default;
};

// Single sigmoid hidden layer, linear output score.
struct NetModel {
  int hidden = 0;
  std::vector<double> w1;  // hidden x dim, row-major
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
  bool operator==(const NetModel&) const = default;
};

struct BoostModel {
  struct Weak {
    int feature = 0;
    double threshold = 0.0;
    double alpha = 0.0;
    bool operator==(const Weak&) const = default;
  };
  std::vector<Weak> rounds;
  bool operator==(const BoostModel&) const = default;
};

struct RankModel {
  std::string algorithm;
  std::vector<std::string> schema;
  Normalizer normalizer;
  std::variant<LinearModel, NetModel, BoostModel> params;

  // Scores an already-schema-aligned raw feature row.
  double score_raw(const std::vector<double>& x) const;
  // Checks names against the schema first; throws SchemaError on mismatch.
  double score(const FeatureVector& fv) const;

  bool operator==(const RankModel&) const = default;
};

// All same-qid (harder, simpler) index pairs with strictly different
// relevance; qids in first-appearance order, then instance order.
std::vector<std::pair<std::size_t, std::size_t>> rank_pair_indices(
    const std::vector<RankInstance>& items);

// Normalized TrainedPairs for the above.
std::vector<TrainedPair> make_pairs(const std::vector<RankInstance>& items,
                                    const Normalizer& norm);

// Per-round observer for RankBoost: distribution at selection time and the
// chosen weak ranker. Used by the brute-force equivalence checks.
struct BoostRound {
  int round = 0;
  std::vector<double> distribution;
  int feature = 0;
  double threshold = 0.0;
  double r = 0.0;
};
using BoostObserver = std::function<void(const BoostRound&)>;

struct TrainResult {
  RankModel model;
  // RankSvm: full-batch objective, index 0 before training then one per
  // epoch. RankNet: mean pair loss per epoch.
  std::vector<double> epoch_loss;
  // RankBoost: r_t per round and the distribution sum after renormalizing.
  std::vector<double> round_r;
  std::vector<double> round_dist_sum;
};

// Fits the normalizer on `data`, builds pairs, dispatches on
// cfg.algorithm. Throws NoTrainingPairs when no constraints exist.
TrainResult train(const RankData& data, const TrainConfig& cfg,
                  const BoostObserver& observer = nullptr);

// Hinge objective (lambda/2)|w|^2 + mean hinge over pairs; exposed for the
// monotonicity checks.
double ranksvm_objective(const std::vector<double>& w,
                         const std::vector<TrainedPair>& pairs, double lambda);

// RankNet internals, exposed for gradient verification.
struct NetGradient {
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
};
double net_score(const NetModel& net, const std::vector<double>& x);
double ranknet_pair_loss(const NetModel& net, const std::vector<double>& x_hard,
                         const std::vector<double>& x_simple);
NetGradient ranknet_pair_gradient(const NetModel& net,
                                  const std::vector<double>& x_hard,
                                  const std::vector<double>& x_simple);

// Versioned JSON round trip; scores are preserved bit for bit.
void save_model(const RankModel& model, const std::string& path);
RankModel load_model(const std::string& path);

}  // namespace readrank

#endif  // READRANK_RANKER_HPP
