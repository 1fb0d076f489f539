#ifndef READRANK_EVAL_HPP
#define READRANK_EVAL_HPP

#include <string>
#include <vector>

#include "readrank/corpus.hpp"
#include "readrank/ranker.hpp"

namespace readrank {

// Pairwise-accuracy result. accuracy always equals
// (correct + 0.5 * tied) / (correct + wrong + tied); ties are scored
// deterministically as one half.
struct EvalReport {
  double accuracy = 0.0;
  long correct = 0;
  long wrong = 0;
  long tied = 0;

  std::vector<double> fold_accuracies;
  double fold_mean = 0.0;
  double fold_std = 0.0;

  std::string train_name;
  std::string test_name;
  std::string algorithm;
  std::string config_hash;

  long total() const { return correct + wrong + tied; }
  void finalize();  // recomputes accuracy from the counts
};

struct AblationRow {
  std::string name;
  double accuracy = 0.0;
  std::string group;
};

struct CurveTable {
  std::vector<std::size_t> sizes;
  std::vector<std::string> test_names;
  std::vector<std::vector<double>> accuracy;  // [size][test]
  std::string config_hash;
};

// Correct iff score(harder) > score(simpler); exactly equal scores tie.
EvalReport pairwise_accuracy(const RankModel& model, const RankData& test);

// Flesch-Kincaid ordering baseline over aligned pairs.
EvalReport fk_baseline(const std::vector<AlignedPair>& pairs);

// Group-wise k-fold CV: a qid never straddles folds; folds come from a
// seeded shuffle of qids. accuracy pools counts over all folds; fold_mean
// and fold_std summarize the per-fold accuracies. Fold cells are seeded by
// (cfg.seed, fold) so jobs > 1 matches the serial result.
EvalReport kfold_cv(const RankData& corpus, int k, const TrainConfig& cfg,
                    int jobs = 1);

// Trains on `train` (normalizer fitted there only), evaluates on `test`.
EvalReport cross_corpus(const RankData& train, const RankData& test,
                        const TrainConfig& cfg);

// One model per feature group present in the schema, plus ALL; sorted by
// descending accuracy. Groups with no features are skipped with a warning
// on stderr.
std::vector<AblationRow> ablate_groups(const RankData& train, const RankData& test,
                                       const TrainConfig& cfg, int jobs = 1);

// One single-feature model per schema column; full sorted list.
std::vector<AblationRow> ablate_single(const RankData& train, const RankData& test,
                                       const TrainConfig& cfg, int jobs = 1);

// Seeded qid samples for the learning curve: one shuffle, prefixes of it,
// so each size's sample contains every smaller one. Sizes are taken in
// ascending order.
std::vector<std::vector<std::string>> curve_group_samples(
    const RankData& train, const std::vector<std::size_t>& sizes, std::uint64_t seed);

// Accuracy for nested training subsets of the given sizes (in qid groups)
// against each test corpus.
CurveTable learning_curve(const RankData& train, const std::vector<std::size_t>& sizes,
                          const std::vector<RankData>& tests,
                          const std::vector<std::string>& test_names,
                          const TrainConfig& cfg, int jobs = 1);

// Splits a triple corpus into Adv-Int and Int-Ele pair corpora; each triple
// contributes exactly one pair to each.
struct LevelSplit {
  std::vector<AlignedPair> adv_int;
  std::vector<AlignedPair> int_ele;
};
LevelSplit level_split(const std::vector<AlignedTriple>& triples);

// TSV dump of misranked and tied pairs with texts, scores and per-feature
// detail (w*x contributions for linear models, feature values otherwise).
void error_report(const RankModel& model, const RankData& test, const std::string& path);

// Two-proportion z-test on effective correct counts (ties count half).
struct ZTestResult {
  double z = 0.0;
  double p_value = 1.0;
};
ZTestResult two_proportion_ztest(const EvalReport& a, const EvalReport& b);

// CSV writers. Each starts with a `# config_hash=...` comment line.
void write_report_csv(const EvalReport& report, const std::string& path);
void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path,
                        const std::string& config_hash, double min_report = -1.0);
void write_curve_csv(const CurveTable& table, const std::string& path);

}  // namespace readrank

#endif  // READRANK_EVAL_HPP
