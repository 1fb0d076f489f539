#include "readrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "readrank/errors.hpp"
#include "readrank/util.hpp"

namespace readrank {

namespace {

std::vector<std::string> qids_in_order(const std::vector<RankInstance>& items) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& inst : items)
    if (seen.insert(inst.qid).second) order.push_back(inst.qid);
  return order;
}

RankData subset_by_qids(const RankData& data, const std::set<std::string>& qids,
                        bool keep) {
  RankData out;
  out.schema = data.schema;
  for (const auto& inst : data.items)
    if (qids.count(inst.qid) == static_cast<std::size_t>(keep)) out.items.push_back(inst);
  return out;
}

void check_same_schema(const RankData& a, const RankData& b) {
  if (a.schema != b.schema)
    throw SchemaError("train and test corpora use different feature schemas");
}

EvalReport count_pairs(const RankModel& model, const RankData& test) {
  auto pairs = rank_pair_indices(test.items);
  if (pairs.empty()) throw EmptyTestSet();
  // Score each instance once; only the order of scores matters.
  std::vector<double> scores(test.items.size());
  for (std::size_t i = 0; i < test.items.size(); ++i)
    scores[i] = model.score_raw(test.items[i].x);
  EvalReport report;
  for (auto [h, s] : pairs) {
    if (scores[h] > scores[s])
      ++report.correct;
    else if (scores[h] == scores[s])
      ++report.tied;
    else
      ++report.wrong;
  }
  report.finalize();
  return report;
}

struct AblationCell {
  std::string name;
  std::string group;
  std::vector<std::size_t> columns;
};

std::vector<AblationRow> run_ablation_cells(const std::vector<AblationCell>& cells,
                                            const RankData& train_data,
                                            const RankData& test_data,
                                            const TrainConfig& cfg, int jobs) {
  std::vector<AblationRow> rows(cells.size());
  parallel_for(jobs, cells.size(), [&](std::size_t i) {
    RankData cell_train = train_data.with_columns(cells[i].columns);
    RankData cell_test = test_data.with_columns(cells[i].columns);
    TrainConfig cell_cfg = cfg;
    cell_cfg.seed = derive_seed(cfg.seed, i);
    TrainResult trained = train(cell_train, cell_cfg);
    EvalReport report = pairwise_accuracy(trained.model, cell_test);
    rows[i] = {cells[i].name, report.accuracy, cells[i].group};
  });
  std::sort(rows.begin(), rows.end(), [](const AblationRow& a, const AblationRow& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.name < b.name;
  });
  return rows;
}

}  // namespace

void EvalReport::finalize() {
  long n = total();
  accuracy = n > 0 ? (static_cast<double>(correct) + 0.5 * static_cast<double>(tied)) /
                         static_cast<double>(n)
                   : 0.0;
}

EvalReport pairwise_accuracy(const RankModel& model, const RankData& test) {
  if (test.schema != model.schema)
    throw SchemaError("test corpus schema does not match the model schema");
  return count_pairs(model, test);
}

EvalReport fk_baseline(const std::vector<AlignedPair>& pairs) {
  if (pairs.empty()) throw EmptyTestSet();
  EvalReport report;
  for (const auto& p : pairs) {
    double gh = fk_grade(p.harder);
    double gs = fk_grade(p.simpler);
    if (gh > gs)
      ++report.correct;
    else if (gh == gs)
      ++report.tied;
    else
      ++report.wrong;
  }
  report.finalize();
  report.algorithm = "flesch-kincaid";
  return report;
}

EvalReport kfold_cv(const RankData& corpus, int k, const TrainConfig& cfg, int jobs) {
  if (k < 2) throw Error("k-fold CV requires k >= 2");
  std::vector<std::string> qids = qids_in_order(corpus.items);
  if (qids.size() < static_cast<std::size_t>(k)) throw TooFewGroups(qids.size(), k);

  Rng rng(cfg.seed);
  rng.shuffle(qids);
  std::vector<std::set<std::string>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < qids.size(); ++i)
    folds[i % static_cast<std::size_t>(k)].insert(qids[i]);

  std::vector<EvalReport> fold_reports(folds.size());
  parallel_for(jobs, folds.size(), [&](std::size_t f) {
    RankData train_data = subset_by_qids(corpus, folds[f], false);
    RankData test_data = subset_by_qids(corpus, folds[f], true);
    TrainConfig fold_cfg = cfg;
    fold_cfg.seed = derive_seed(cfg.seed, f);
    TrainResult trained = train(train_data, fold_cfg);
    fold_reports[f] = pairwise_accuracy(trained.model, test_data);
  });

  EvalReport report;
  for (const auto& r : fold_reports) {
    report.correct += r.correct;
    report.wrong += r.wrong;
    report.tied += r.tied;
    report.fold_accuracies.push_back(r.accuracy);
  }
  report.finalize();
  double mean = 0.0;
  for (double a : report.fold_accuracies) mean += a;
  mean /= static_cast<double>(report.fold_accuracies.size());
  double var = 0.0;
  for (double a : report.fold_accuracies) var += (a - mean) * (a - mean);
  var /= static_cast<double>(report.fold_accuracies.size() - 1);
  report.fold_mean = mean;
  report.fold_std = std::sqrt(var);
  report.algorithm = algorithm_name(cfg.algorithm);
  report.config_hash = cfg.config_hash();
  return report;
}

EvalReport cross_corpus(const RankData& train_data, const RankData& test_data,
                        const TrainConfig& cfg) {
  check_same_schema(train_data, test_data);
  TrainResult trained = train(train_data, cfg);
  EvalReport report = pairwise_accuracy(trained.model, test_data);
  report.algorithm = algorithm_name(cfg.algorithm);
  report.config_hash = cfg.config_hash();
  return report;
}

std::vector<AblationRow> ablate_groups(const RankData& train_data,
                                       const RankData& test_data, const TrainConfig& cfg,
                                       int jobs) {
  check_same_schema(train_data, test_data);
  if (train_data.schema.empty()) throw RegistryError("feature schema is empty");
  std::vector<AblationCell> cells;
  for (const char* group : {"LEX", "SYN", "CEL", "PSY"}) {
    AblationCell cell;
    cell.name = group;
    cell.group = group;
    for (std::size_t c = 0; c < train_data.schema.size(); ++c)
      if (feature_group(train_data.schema[c]) == group) cell.columns.push_back(c);
    if (cell.columns.empty()) {
      std::cerr << "warning: feature group " << group << " has no features; skipped\n";
      continue;
    }
    cells.push_back(std::move(cell));
  }
  AblationCell all;
  all.name = "ALL";
  all.group = "ALL";
  for (std::size_t c = 0; c < train_data.schema.size(); ++c) all.columns.push_back(c);
  cells.push_back(std::move(all));
  return run_ablation_cells(cells, train_data, test_data, cfg, jobs);
}

std::vector<AblationRow> ablate_single(const RankData& train_data,
                                       const RankData& test_data, const TrainConfig& cfg,
                                       int jobs) {
  check_same_schema(train_data, test_data);
  if (train_data.schema.empty()) throw RegistryError("feature schema is empty");
  std::vector<AblationCell> cells;
  for (std::size_t c = 0; c < train_data.schema.size(); ++c)
    cells.push_back({train_data.schema[c], feature_group(train_data.schema[c]), {c}});
  return run_ablation_cells(cells, train_data, test_data, cfg, jobs);
}

std::vector<std::vector<std::string>> curve_group_samples(
    const RankData& train_data, const std::vector<std::size_t>& sizes,
    std::uint64_t seed) {
  std::vector<std::string> qids = qids_in_order(train_data.items);
  for (std::size_t s : sizes)
    if (s == 0 || s > qids.size()) throw SizeTooLarge(s, qids.size());
  Rng rng(seed);
  rng.shuffle(qids);
  std::vector<std::size_t> ordered = sizes;
  std::sort(ordered.begin(), ordered.end());
  // Prefixes of the one shuffled list: every larger sample contains every
  // smaller one.
  std::vector<std::vector<std::string>> samples;
  for (std::size_t s : ordered)
    samples.emplace_back(qids.begin(), qids.begin() + static_cast<std::ptrdiff_t>(s));
  return samples;
}

CurveTable learning_curve(const RankData& train_data,
                          const std::vector<std::size_t>& sizes,
                          const std::vector<RankData>& tests,
                          const std::vector<std::string>& test_names,
                          const TrainConfig& cfg, int jobs) {
  for (const auto& test_data : tests) check_same_schema(train_data, test_data);
  std::vector<std::vector<std::string>> samples =
      curve_group_samples(train_data, sizes, cfg.seed);

  CurveTable table;
  table.sizes = sizes;
  std::sort(table.sizes.begin(), table.sizes.end());
  table.test_names = test_names;
  table.config_hash = cfg.config_hash();
  table.accuracy.assign(table.sizes.size(), std::vector<double>(tests.size(), 0.0));

  parallel_for(jobs, table.sizes.size(), [&](std::size_t si) {
    std::set<std::string> sample(samples[si].begin(), samples[si].end());
    RankData subset = subset_by_qids(train_data, sample, true);
    TrainConfig size_cfg = cfg;
    size_cfg.seed = derive_seed(cfg.seed, si);
    TrainResult trained = train(subset, size_cfg);
    for (std::size_t ti = 0; ti < tests.size(); ++ti)
      table.accuracy[si][ti] = pairwise_accuracy(trained.model, tests[ti]).accuracy;
  });
  return table;
}

LevelSplit level_split(const std::vector<AlignedTriple>& triples) {
  LevelSplit out;
  out.adv_int.reserve(triples.size());
  out.int_ele.reserve(triples.size());
  for (const auto& t : triples) {
    out.adv_int.push_back({t.group_id, t.adv, t.intermediate, t.sim_adv_int});
    out.int_ele.push_back({t.group_id, t.intermediate, t.ele, t.sim_int_ele});
  }
  return out;
}

void error_report(const RankModel& model, const RankData& test, const std::string& path) {
  if (test.schema != model.schema)
    throw SchemaError("test corpus schema does not match the model schema");
  auto pairs = rank_pair_indices(test.items);
  if (pairs.empty()) throw EmptyTestSet();

  const auto* linear = std::get_if<LinearModel>(&model.params);
  auto detail = [&](const RankInstance& inst) {
    std::vector<double> z = model.normalizer.apply(inst.x);
    std::vector<double> values(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
      values[i] = linear ? linear->w[i] * z[i] : inst.x[i];
    return values;
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "group_id\tstatus\tscore_harder\tscore_simpler\ttext_harder\ttext_simpler";
  for (const auto& name : model.schema) out << "\th:" << name;
  for (const auto& name : model.schema) out << "\ts:" << name;
  out << '\n';

  for (auto [h, s] : pairs) {
    double sh = model.score_raw(test.items[h].x);
    double ss = model.score_raw(test.items[s].x);
    if (sh > ss) continue;
    out << test.items[h].qid << '\t' << (sh == ss ? "tie" : "wrong") << '\t'
        << format_double(sh) << '\t' << format_double(ss) << '\t'
        << escape_tsv(test.items[h].text) << '\t' << escape_tsv(test.items[s].text);
    for (double v : detail(test.items[h])) out << '\t' << format_double(v);
    for (double v : detail(test.items[s])) out << '\t' << format_double(v);
    out << '\n';
  }
}

ZTestResult two_proportion_ztest(const EvalReport& a, const EvalReport& b) {
  double na = static_cast<double>(a.total());
  double nb = static_cast<double>(b.total());
  double sa = static_cast<double>(a.correct) + 0.5 * static_cast<double>(a.tied);
  double sb = static_cast<double>(b.correct) + 0.5 * static_cast<double>(b.tied);
  double pooled = (sa + sb) / (na + nb);
  double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb));
  ZTestResult result;
  if (se == 0.0) return result;
  result.z = (sa / na - sb / nb) / se;
  result.p_value = std::erfc(std::fabs(result.z) / std::sqrt(2.0));
  return result;
}

void write_report_csv(const EvalReport& report, const std::string& path) {
  long n = report.total();
  double expect = n > 0 ? (static_cast<double>(report.correct) +
                           0.5 * static_cast<double>(report.tied)) /
                              static_cast<double>(n)
                        : 0.0;
  if (report.accuracy != expect)
    throw Error("internal: report accuracy does not match its counts");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "# config_hash=" << report.config_hash << '\n';
  out << "metric,value\n";
  if (!report.train_name.empty()) out << "train," << report.train_name << '\n';
  if (!report.test_name.empty()) out << "test," << report.test_name << '\n';
  if (!report.algorithm.empty()) out << "algorithm," << report.algorithm << '\n';
  out << "accuracy," << format_double(report.accuracy) << '\n';
  out << "correct," << report.correct << '\n';
  out << "wrong," << report.wrong << '\n';
  out << "tied," << report.tied << '\n';
  if (!report.fold_accuracies.empty()) {
    out << "fold_mean," << format_double(report.fold_mean) << '\n';
    out << "fold_std," << format_double(report.fold_std) << '\n';
    for (std::size_t i = 0; i < report.fold_accuracies.size(); ++i)
      out << "fold_" << (i + 1) << ',' << format_double(report.fold_accuracies[i])
          << '\n';
  }
}

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path,
                        const std::string& config_hash, double min_report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "# config_hash=" << config_hash << '\n';
  out << "rank,feature,group,accuracy";
  if (min_report >= 0.0) out << ",meets_min";
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << (i + 1) << ',' << rows[i].name << ',' << rows[i].group << ','
        << format_double(rows[i].accuracy);
    if (min_report >= 0.0) out << ',' << (rows[i].accuracy >= min_report ? 1 : 0);
    out << '\n';
  }
}

void write_curve_csv(const CurveTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "# config_hash=" << table.config_hash << '\n';
  out << "size";
  for (const auto& name : table.test_names) out << ',' << name;
  out << '\n';
  for (std::size_t si = 0; si < table.sizes.size(); ++si) {
    out << table.sizes[si];
    for (double acc : table.accuracy[si]) out << ',' << format_double(acc);
    out << '\n';
  }
}

}  // namespace readrank
